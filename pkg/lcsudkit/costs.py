"""
analytische kosten und speicherkurven

cost_row wertet die kostenformeln der drei schemata und der vergleichsverfahren aus.
alle werte sind exakte brüche in symbolen, die speichergrösse ist auf die grösse von A bezogen.

vergleichsverfahren (nur analytisch):
- mds-storage: MDS-kodierte speicherung, unkodierter download
- uncoded-storage-lagrange-download: unkodierte speicherung, lagrange-kodierter download
- hierarchical-uncoded-storage: hierarchische unkodierte speicherung, kodierter download
- mds-storage-mds-download: kodierte speicherung und kodierter download, ohne nachzügler-toleranz.
  dessen dekodieraufwand ist nur als grössenordnung O(1) bekannt und wird als 1 mit markierung geführt.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence

import pandas as pd

from lcsudkit.assignment import ParamError
from lcsudkit.elasticity import storage_fraction, union_placement
from lcsudkit.schemes import SchemeId, UnknownScheme

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


METRICS = ('storage', 'encoding', 'download', 'computing', 'upload', 'decoding')

SCHEME_ROWS = ('scheme1', 'scheme2', 'scheme3')
BASELINE_ROWS = ('mds-storage', 'uncoded-storage-lagrange-download', 'hierarchical-uncoded-storage',
                 'mds-storage-mds-download')
ROW_IDS = SCHEME_ROWS + BASELINE_ROWS

# zeilen, die S nachzügler tolerieren
STRAGGLER_TOLERANT = SCHEME_ROWS + BASELINE_ROWS[:3]


@dataclass(frozen=True)
class CostReport:
    id: str
    storage: Fraction
    encoding: Fraction
    download: Fraction
    computing: Fraction
    upload: Fraction
    decoding: Fraction
    order_only: FrozenSet[str] = field(default_factory=frozenset)

    def metrics(self) -> Dict[str, Fraction]:
        return {k: getattr(self, k) for k in METRICS}


def row_id(value) -> str:
    """
    zeilenbezeichnung aus SchemeId, '1', 'scheme1' oder einem vergleichsverfahren.

    :raise UnknownScheme
    """
    if isinstance(value, SchemeId):
        return f"scheme{value.value}"
    text = str(value).strip().lower()
    if text in ROW_IDS:
        return text
    return f"scheme{SchemeId.from_any(text).value}"


def cost_row(id, m: int, l: int, s: int, q: int, v: int, r: int) -> CostReport:
    """
    kostenzeile für realisationsgrösse m.

    :param id: schema (1, 2, 3) oder bezeichnung eines vergleichsverfahrens
    :param m: anzahl verfügbarer maschinen
    :param l: rekonstruktionsschwelle L
    :param s: nachzügler S
    :param q, v, r: dimensionen, A ist q x v, B ist v x r
    :return: CostReport
    :raise UnknownScheme bei unbekannter zeile.
    :raise ParamError, wenn m < L+S für ein eigenes schema.
    """

    rid = row_id(id)
    if rid in SCHEME_ROWS and m < l + s:
        raise ParamError(f"m={m} kleiner als L+S={l + s}")
    if m < 1 or l < 1 or s < 0:
        raise ParamError(f"ungültige parameter m={m}, L={l}, S={s}")

    F = Fraction
    k = l + s
    computing = F(q * v * r * k, l * m)
    upload = F(q * r * k, l * m)
    order_only = frozenset()

    if rid == 'scheme1':
        row = (F(1, l), F(q * v), F(v * r * k, m), computing, upload, F(q * r * l))
    elif rid == 'scheme2':
        row = (F(k, l * m), F(q * v * k, m), F(v * r), computing, upload, F(q * r * l))
    elif rid == 'scheme3':
        row = (F(k, l * m), F(q * v * k, m), F(v * r * k, m), computing, F(q * r * k, l), F(q * r * l * m))
    elif rid == 'mds-storage':
        row = (F(1, l), F(q * v), F(v * r), computing, upload, F(q * r * l))
    elif rid == 'uncoded-storage-lagrange-download':
        row = (F(1), F(v * r * k, m), F(v * r * k, l * m), computing, upload, F(q * r * l))
    elif rid == 'hierarchical-uncoded-storage':
        row = (F(k, m), F(v * r), F(v * r, l), computing, upload, F(q * r * l))
    elif rid == 'mds-storage-mds-download':
        row = (F(1, l), F(q * v) + F(v * r * l, m), F(v * r, m), F(q * v * r, m), F(q * r * l), F(1))
        order_only = frozenset({'decoding'})
    else:
        raise UnknownScheme(f"unbekannte kostenzeile {id!r}")

    return CostReport(rid, *row, order_only=order_only)


def cost_table(m: int, l: int, s: int, q: int, v: int, r: int, ids: Sequence[str] = ROW_IDS) -> List[CostReport]:
    return [cost_row(i, m, l, s, q, v, r) for i in ids]


def best_rows(reports: Iterable[CostReport]) -> Dict[str, List[str]]:
    """
    pro metrik die zeilen mit dem kleinsten wert.
    """

    reports = list(reports)
    result = {}
    for metric in METRICS:
        lowest = min(getattr(rep, metric) for rep in reports)
        result[metric] = [rep.id for rep in reports if getattr(rep, metric) == lowest]
    return result


def format_fraction(x: Fraction) -> str:
    """
    bruch als 'zähler/nenner', auch bei ganzen zahlen.
    """
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text) -> Fraction:
    """
    :raise ValueError bei ungültigem text.
    """
    return Fraction(str(text).strip())


def cost_frame(reports: Iterable[CostReport]) -> pd.DataFrame:
    """
    kostentabelle mit den spalten id, storage, encoding, download, computing, upload, decoding.

    die werte sind als 'zähler/nenner' formatiert.
    """
    records = []
    for rep in reports:
        rec = {'id': rep.id}
        rec.update({k: format_fraction(x) for k, x in rep.metrics().items()})
        records.append(rec)
    return pd.DataFrame.from_records(records, columns=['id', *METRICS])


class Fig2Point(NamedTuple):
    u: int
    blue: Fraction
    black: Fraction
    green: Fraction
    red: Fraction


def fig2_curves(n: int = 20, l: int = 5, s: int = 0, u_range: Optional[Iterable[int]] = None,
                scheme: SchemeId = SchemeId.SCHEME2) -> List[Fig2Point]:
    """
    systemspeicher in abhängigkeit von U.

    blue: ganze kodierte matrix pro maschine (N/L).
    black: untere schranke 1+U bei unkodierter speicherung, jede zeile auf mindestens 1+U maschinen.
    green: ganzes A auf jeder maschine (N).
    red: vereinigte belegung des gewählten schemas.

    :param u_range: werte von U, vorgabe 0..N-L-S
    """

    if u_range is None:
        u_range = range(0, n - l - s + 1)

    result = []
    for u in u_range:
        _, red = storage_fraction(union_placement(scheme, n, u, l, s))
        result.append(Fig2Point(u, Fraction(n, l), Fraction(1 + u), Fraction(n), red))
    return result


def fig2_frame(points: Iterable[Fig2Point]) -> pd.DataFrame:
    records = [{'U': p.u, 'blue': format_fraction(p.blue), 'black': format_fraction(p.black),
                'green': format_fraction(p.green), 'red': format_fraction(p.red)} for p in points]
    return pd.DataFrame.from_records(records, columns=['U', 'blue', 'black', 'green', 'red'])
