"""
speicherbelegung über alle verfügbarkeitsrealisationen

bei elastischem betrieb kann jede realisation mit höchstens U entzogenen maschinen auftreten.
damit nie neu verteilt werden muss, speichert jede maschine die vereinigung
aller scheiben von Ã_n, die sie in irgendeiner realisation braucht.

die scheiben werden auf der normierten achse [0, 1) von Ã_n als halboffene intervalle
mit exakten rationalen grenzen geführt.
maschine n hat in einer realisation der grösse m den rang ρ genau dann,
wenn m-ρ der N-n maschinen über n und ρ-1 der n-1 maschinen unter n verfügbar sind.
daraus ergeben sich die fenster (m, ρ) ohne die realisationen aufzuzählen.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from lcsudkit.assignment import SystemParams, cyclic_assignment, enumerate_realizations, mod1
from lcsudkit.lagrange import EvaluationPoints, encode_block
from lcsudkit.matrix import Axis, FieldMatrix, partition
from lcsudkit.schemes import Dims, MachineStore, SchemeId, storage_units

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclass(frozen=True, order=True)
class Interval:
    """
    halboffenes intervall [start, end) mit rationalen grenzen.
    """

    start: Fraction
    end: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'start', Fraction(self.start))
        object.__setattr__(self, 'end', Fraction(self.end))
        if self.end <= self.start:
            raise ValueError(f"leeres intervall [{self.start}, {self.end})")

    def __str__(self) -> str:
        return f"[{self.start}, {self.end})"

    @property
    def length(self) -> Fraction:
        return self.end - self.start


class IntervalUnion:
    """
    vereinigung halboffener intervalle, sortiert und paarweise disjunkt.

    angrenzende intervalle werden verschmolzen, damit gleiche mengen gleich dargestellt sind.
    """

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.intervals: Tuple[Interval, ...] = self._merge(intervals)

    @staticmethod
    def _merge(intervals: Iterable[Interval]) -> Tuple[Interval, ...]:
        merged: List[List[Fraction]] = []
        for iv in sorted(intervals):
            if merged and iv.start <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], iv.end)
            else:
                merged.append([iv.start, iv.end])
        return tuple(Interval(a, b) for a, b in merged)

    @classmethod
    def full(cls) -> 'IntervalUnion':
        return cls([Interval(Fraction(0), Fraction(1))])

    def __repr__(self) -> str:
        return "IntervalUnion(" + " ∪ ".join(str(iv) for iv in self.intervals) + ")"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def union(self, other: Iterable[Interval]) -> 'IntervalUnion':
        return IntervalUnion(self.intervals + tuple(other))

    @property
    def measure(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), Fraction(0))

    def contains(self, interval: Interval) -> bool:
        """
        True, wenn das intervall ganz in einem der teilintervalle liegt.
        """
        return any(iv.start <= interval.start and interval.end <= iv.end for iv in self.intervals)

    def to_index_ranges(self, extent: int) -> List[Tuple[int, int]]:
        """
        ganzzahlige indexbereiche auf einer achse der länge extent.

        grenzen, die nicht auf einen index fallen, werden nach aussen gerundet.
        """
        ranges: List[List[int]] = []
        for iv in self.intervals:
            a = math.floor(iv.start * extent)
            b = math.ceil(iv.end * extent)
            if ranges and a <= ranges[-1][1]:
                ranges[-1][1] = max(ranges[-1][1], b)
            else:
                ranges.append([a, b])
        return [(a, b) for a, b in ranges]


@dataclass
class UnionStoragePlan:
    scheme: SchemeId
    params: SystemParams
    unions: Dict[int, IntervalUnion] = field(default_factory=dict)

    def union_of(self, machine: int) -> IntervalUnion:
        try:
            return self.unions[machine]
        except KeyError:
            return IntervalUnion()

    def normalized(self, machine: int) -> Fraction:
        return self.union_of(machine).measure / self.params.l


def machine_windows(n: int, u: int, l: int, s: int, machine: int) -> Set[Tuple[int, int]]:
    """
    alle paare (m, ρ), in denen maschine machine auftreten kann.

    m in [max(L+S, N-U), N], ρ in [max(1, m-(N-machine)), min(m, machine)].
    """

    result = set()
    for m in range(max(l + s, n - u), n + 1):
        for rho in range(max(1, m - (n - machine)), min(m, machine) + 1):
            result.add((m, rho))
    return result


def window_groups(m: int, rho: int, l: int, s: int) -> List[int]:
    """
    gruppen, die den rang ρ bei realisationsgrösse m enthalten: g = mod1(ρ-j, m), j = 0..L+S-1.
    """
    return [mod1(rho - j + m, m) for j in range(l + s)]


def union_placement(scheme: SchemeId, n: int, u: int, l: int, s: int) -> UnionStoragePlan:
    """
    vereinigte speicherbelegung über alle realisationen mit höchstens u entzogenen maschinen.

    schema 1 speichert immer ganz Ã_n.
    bei den schemata 2 und 3 trägt jede gruppe g einer realisationsgrösse m das intervall [(g-1)/m, g/m) bei.

    :raise ParamError bei ungültigen parametern.
    """

    scheme = SchemeId.from_any(scheme)
    params = SystemParams(n, l, s, u)
    plan = UnionStoragePlan(scheme, params)

    for machine in range(1, n + 1):
        if scheme is SchemeId.SCHEME1:
            plan.unions[machine] = IntervalUnion.full()
            continue

        intervals = []
        for m, rho in sorted(machine_windows(n, u, l, s, machine)):
            for g in window_groups(m, rho, l, s):
                intervals.append(Interval(Fraction(g - 1, m), Fraction(g, m)))
        plan.unions[machine] = IntervalUnion(intervals)

    logger.debug(f"vereinigte belegung schema {scheme}, N={n}, U={u}: "
                 f"{[str(plan.normalized(i)) for i in range(1, n + 1)]}")
    return plan


def storage_fraction(plan: UnionStoragePlan) -> Tuple[Dict[int, Fraction], Fraction]:
    """
    speichergrösse bezogen auf A.

    :return: (pro maschine measure/L, summe über alle maschinen)
    """

    per_machine = {machine: plan.normalized(machine) for machine in sorted(plan.unions)}
    return per_machine, sum(per_machine.values(), Fraction(0))


def enumerated_placement(scheme: SchemeId, params: SystemParams, cap: Optional[int] = None) -> UnionStoragePlan:
    """
    vereinigte speicherbelegung durch aufzählen aller realisationen.

    vergleichsverfahren für union_placement, nur für kleine N.
    die belegung jeder realisation kommt aus storage_units mit passend teilbaren dimensionen.

    :raise EnumerationTooLarge
    """

    scheme = SchemeId.from_any(scheme)
    kwargs = {} if cap is None else {'cap': cap}
    realizations = enumerate_realizations(params, **kwargs)

    lcm = math.lcm(*range(params.min_available, params.n + 1))
    dims = Dims(params.l * lcm, lcm, lcm)
    extent = dims.coded_extent(scheme.axis, params.l)

    collected: Dict[int, List[Interval]] = {machine: [] for machine in range(1, params.n + 1)}
    for realization in realizations:
        assignment = cyclic_assignment(realization, params.l, params.s)
        units = storage_units(scheme, assignment, dims)
        for machine in realization:
            for unit in units.units_of(machine):
                collected[machine].append(Interval(Fraction(unit.start, extent), Fraction(unit.end, extent)))

    plan = UnionStoragePlan(scheme, params)
    for machine, intervals in collected.items():
        plan.unions[machine] = IntervalUnion(intervals)
    return plan


def storage_curve(scheme: SchemeId, n: int, l: int, s: int, u_range: Iterable[int]) -> List[Tuple[int, Fraction]]:
    """
    systemspeicher der vereinigten belegung für jedes U.
    """

    result = []
    for u in u_range:
        _, total = storage_fraction(union_placement(scheme, n, u, l, s))
        result.append((u, total))
    return result


def materialize_union(plan: UnionStoragePlan, points: EvaluationPoints, a: FieldMatrix) -> Dict[int, MachineStore]:
    """
    kodierte scheiben der vereinigten belegung erzeugen.

    jeder zusammenhängende indexbereich wird einmal aus den entsprechenden scheiben von A_1..A_L kodiert.

    :param plan: vereinigte belegung
    :param points: stützstellen und auswertungspunkte
    :param a: datenmatrix A
    :return: dict maschine -> MachineStore
    :raise PartitionError, wenn q nicht durch L teilbar ist.
    """

    scheme = plan.scheme
    l = plan.params.l
    axis = scheme.axis
    parts = partition(a, Axis.ROW, l)
    extent = Dims(a.rows, a.cols, 0).coded_extent(axis, l)

    stores = {}
    for machine, union in sorted(plan.unions.items()):
        store = MachineStore(machine, axis, extent)
        alpha = points.alpha(machine)
        for start, end in union.to_index_ranges(extent):
            sliced = [p.slice(axis, start, end) for p in parts]
            store.put(start, end, encode_block(sliced, points.betas, alpha))
        stores[machine] = store

    logger.info(f"vereinigte belegung schema {scheme} materialisiert: "
                f"{sum(st.symbols for st in stores.values())} symbole")
    return stores
