"""
stützstellen, lagrange-kodierung und interpolation

die daten A werden zeilenweise in L teile A_1..A_L zerlegt.
das kodierpolynom X(z) erfüllt X(β_l) = A_l, maschine n speichert X(α_n).
aus L auswertungen eines polynoms vom grad L-1 gewinnt die zentrale die werte an den β zurück.
"""

import functools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from lcsudkit.ffield import FieldElement, FieldMismatch, PrimeField
from lcsudkit.matrix import DimError, FieldMatrix, linear_combination

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


POINT_RULES = ('consecutive', 'random')


class DuplicateNodes(ValueError):
    pass


@dataclass(frozen=True)
class EvaluationPoints:
    """
    stützstellen β_1..β_L (daten) und auswertungspunkte α_1..α_N (maschinen).

    alle punkte sind paarweise verschieden.
    alpha() und beta() zählen ab 1 wie die maschinen- und blocknummern.
    """

    field: PrimeField
    betas: Tuple[FieldElement, ...]
    alphas: Tuple[FieldElement, ...]

    def __post_init__(self):
        object.__setattr__(self, 'betas', tuple(self.betas))
        object.__setattr__(self, 'alphas', tuple(self.alphas))
        for x in self.betas + self.alphas:
            if x.field != self.field:
                raise FieldMismatch(f"punkt {x!r} nicht aus {self.field}")
        if len(set(self.betas)) != len(self.betas):
            raise DuplicateNodes("β nicht paarweise verschieden")
        if len(set(self.alphas)) != len(self.alphas):
            raise DuplicateNodes("α nicht paarweise verschieden")
        if set(self.betas) & set(self.alphas):
            raise DuplicateNodes("α und β nicht disjunkt")

    @property
    def l(self) -> int:
        return len(self.betas)

    @property
    def n(self) -> int:
        return len(self.alphas)

    def alpha(self, machine: int) -> FieldElement:
        return self.alphas[machine - 1]

    def beta(self, index: int) -> FieldElement:
        return self.betas[index - 1]


@dataclass(frozen=True)
class CodedBlock:
    """
    kodierte daten einer maschine.

    group ist None, wenn die ganze matrix Ã_n gespeichert ist.
    """

    machine: int
    group: Optional[int]
    payload: FieldMatrix
    point: FieldElement


def generate_points(field: PrimeField, n: int, l: int, seed: Optional[int] = None,
                    rule: str = 'consecutive') -> EvaluationPoints:
    """
    stützstellen und auswertungspunkte erzeugen.

    'consecutive': β_l = l-1, α_n = L-1+n.
    'random': N+L verschiedene zufällige elemente aus dem generator mit dem gegebenen seed,
    die ersten L sind die β.

    :param field: körper
    :param n: anzahl maschinen N
    :param l: rekonstruktionsschwelle L
    :param seed: seed für die zufällige regel
    :param rule: 'consecutive' oder 'random'
    :return: EvaluationPoints
    :raise FieldTooSmall, wenn p < N + L.
    :raise ValueError bei unbekannter regel.
    """

    field.require_points(n + l)

    if rule == 'consecutive':
        values = list(range(n + l))
    elif rule == 'random':
        rng = np.random.default_rng(seed)
        hi = min(field.p, 2 ** 62)
        chosen = set()
        values = []
        while len(values) < n + l:
            x = int(rng.integers(0, hi))
            if x not in chosen:
                chosen.add(x)
                values.append(x)
    else:
        raise ValueError(f"unbekannte punktregel {rule}")

    pts = EvaluationPoints(field,
                           tuple(field(x) for x in values[:l]),
                           tuple(field(x) for x in values[l:]))
    logger.debug(f"punkte ({rule}): β={[int(b) for b in pts.betas]}, α={[int(a) for a in pts.alphas]}")
    return pts


@functools.lru_cache(maxsize=4096)
def _weights_cached(p: int, nodes: Tuple[int, ...], z: int) -> Tuple[int, ...]:
    """
    lagrange-gewichte als ganze zahlen.

    zähler und nenner werden getrennt akkumuliert,
    die nenner gemeinsam mit einer einzigen inversion aufgelöst.
    """

    field = PrimeField(p)
    k = len(nodes)
    for j in range(k):
        if nodes[j] == z:
            return tuple(1 if i == j else 0 for i in range(k))

    numerators = []
    denominators = []
    for j in range(k):
        num = 1
        den = 1
        for i in range(k):
            if i != j:
                num = num * (z - nodes[i]) % p
                den = den * (nodes[j] - nodes[i]) % p
        numerators.append(num)
        denominators.append(den)

    inverse = field.batch_inv_values(denominators)
    return tuple(a * b % p for a, b in zip(numerators, inverse))


def lagrange_weights(nodes: Sequence[FieldElement], z: FieldElement) -> Tuple[FieldElement, ...]:
    """
    lagrange-basis an der stelle z.

    weight_j = prod_{i != j} (z - node_i) / (node_j - node_i).
    liegt z auf einer stützstelle, ist das resultat der entsprechende einheitsvektor.

    die gewichte werden pro (p, nodes, z) zwischengespeichert.

    :raise DuplicateNodes, wenn stützstellen mehrfach vorkommen.
    """

    nodes = tuple(nodes)
    if not nodes:
        raise DimError("keine stützstellen")
    field = nodes[0].field
    for x in nodes:
        if x.field != field:
            raise FieldMismatch(f"stützstelle {x!r} nicht aus {field}")
    if z.field != field:
        raise FieldMismatch(f"auswertungsstelle {z!r} nicht aus {field}")

    values = tuple(x.value for x in nodes)
    if len(set(values)) != len(values):
        raise DuplicateNodes(f"doppelte stützstellen in {list(values)}")

    return tuple(FieldElement(w, field) for w in _weights_cached(field.p, values, z.value))


def encode_block(parts: Sequence[FieldMatrix], betas: Sequence[FieldElement], alpha: FieldElement) -> FieldMatrix:
    """
    kodierpolynom an der stelle alpha auswerten.

    :param parts: L gleich grosse teilmatrizen, parts[l] = X(betas[l])
    :param betas: L verschiedene stützstellen
    :param alpha: auswertungsstelle
    :return: X(alpha) = sum_l parts[l] * weight_l(alpha)
    :raise DimError bei verschiedenen formen oder anzahlen.
    """

    if len(parts) != len(betas):
        raise DimError(f"{len(parts)} teile, aber {len(betas)} stützstellen")
    weights = lagrange_weights(betas, alpha)
    return linear_combination(alpha.field, [w.value for w in weights], parts)


def interpolate_at(nodes: Sequence[FieldElement], values: Sequence[FieldMatrix], target: FieldElement) -> FieldMatrix:
    """
    interpolationspolynom durch (nodes[j], values[j]) an der stelle target auswerten.

    mit mindestens L stützstellen wird ein polynom vom grad L-1 exakt rekonstruiert.

    :raise DuplicateNodes, DimError
    """

    if len(nodes) != len(values):
        raise DimError(f"{len(nodes)} stützstellen, aber {len(values)} werte")
    weights = lagrange_weights(nodes, target)
    return linear_combination(target.field, [w.value for w in weights], values)
