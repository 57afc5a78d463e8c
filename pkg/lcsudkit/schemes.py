"""
die drei rechenschemata mit kodierter speicherung und unkodiertem download

A (q x v) wird zeilenweise in L teile A_l zerlegt, maschine n hält daten aus Ã_n = X(α_n) (q/L x v).

schema 1: maschine n speichert Ã_n ganz, B wird spaltenweise in m blöcke B_g zerlegt.
    n lädt die B_g mit n in W_g und rechnet Ã_n B_g.
schema 2: A_l wird zeilenweise in m scheiben A_{l,g} zerlegt.
    n speichert X'_g(α_n) für n in W_g (= zeilenscheibe g von Ã_n), lädt das ganze B.
schema 3: A_l wird spaltenweise in m scheiben A_{l,g} zerlegt, B zeilenweise in m blöcke B_g.
    n speichert X''_g(α_n) (= spaltenscheibe g von Ã_n) und lädt die B_g mit n in W_g.

die zentrale interpoliert pro gruppe aus den ersten L eingetroffenen resultaten die werte an den β_l
und setzt das produkt AB zusammen. bei schema 3 werden die beiträge über g summiert.

alle mengenangaben sind anzahlen von körperelementen (symbole).
"""

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from lcsudkit.assignment import AvailabilityRealization, ComputationAssignment, SystemParams, cyclic_assignment
from lcsudkit.lagrange import CodedBlock, EvaluationPoints, encode_block, interpolate_at
from lcsudkit.matrix import (Axis, DimError, FieldMatrix, PartitionError, assemble, linear_combination, matmul,
                             partition)

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


ENTIRE_B = 'entire B'


class UnknownScheme(ValueError):
    pass


class IncompleteInputs(ValueError):
    pass


class MissingStorage(ValueError):
    """
    eine maschine braucht eine scheibe von Ã_n, die sie nicht gespeichert hat.
    """

    def __init__(self, machine: int, start: int, end: int):
        self.machine = machine
        self.start = start
        self.end = end
        super().__init__(f"maschine {machine} hat den bereich [{start}, {end}) nicht gespeichert")


class DecodeThresholdNotMet(ValueError):
    def __init__(self, group: int, have: int = 0, need: int = 0):
        self.group = group
        self.have = have
        self.need = need
        super().__init__(f"gruppe {group}: {have} resultate, {need} nötig")


class SchemeId(str, enum.Enum):
    SCHEME1 = '1'
    SCHEME2 = '2'
    SCHEME3 = '3'

    @classmethod
    def from_any(cls, value: Any) -> 'SchemeId':
        """
        akzeptiert SchemeId, 1, '1', 'scheme1' und 'Scheme1'.

        :raise UnknownScheme
        """
        if isinstance(value, SchemeId):
            return value
        text = str(value).strip().lower()
        if text.startswith('scheme'):
            text = text[len('scheme'):].strip()
        try:
            return cls(text)
        except ValueError:
            raise UnknownScheme(f"unbekanntes schema {value!r}")

    def __str__(self) -> str:
        return self.value

    @property
    def axis(self) -> Axis:
        """
        achse von Ã_n, entlang der gespeicherte scheiben geschnitten werden.
        """
        return Axis.COLUMN if self is SchemeId.SCHEME3 else Axis.ROW


@dataclass(frozen=True)
class Dims:
    """
    dimensionen: A ist q x v, B ist v x r.
    """

    q: int
    v: int
    r: int

    def check(self, scheme: SchemeId, l: int, m: int):
        """
        teilbarkeitsbedingungen für schema und realisationsgrösse m.

        :raise PartitionError
        """
        if self.q % l:
            raise PartitionError(self.q, l)
        if scheme is SchemeId.SCHEME1 and self.r % m:
            raise PartitionError(self.r, m)
        if scheme is SchemeId.SCHEME2 and self.q % (l * m):
            raise PartitionError(self.q, l * m)
        if scheme is SchemeId.SCHEME3 and self.v % m:
            raise PartitionError(self.v, m)

    def coded_extent(self, axis: Axis, l: int) -> int:
        """
        ausdehnung von Ã_n entlang der achse: q/L zeilen oder v spalten.
        """
        return self.q // l if Axis(axis) is Axis.ROW else self.v


@dataclass(frozen=True)
class StorageUnit:
    """
    eine gespeicherte scheibe [start, end) von Ã_n entlang axis.

    group ist None, wenn die ganze matrix gemeint ist. granularity ist die realisationsgrösse m.
    """

    machine: int
    group: Optional[int]
    axis: Axis
    start: int
    end: int
    granularity: int

    @property
    def extent(self) -> int:
        return self.end - self.start

    def symbols(self, dims: Dims, l: int) -> int:
        if self.axis is Axis.ROW:
            return self.extent * dims.v
        else:
            return self.extent * (dims.q // l)


@dataclass
class StoragePlan:
    scheme: SchemeId
    dims: Dims
    l: int
    units: Dict[int, Tuple[StorageUnit, ...]] = field(default_factory=dict)

    def machines(self) -> List[int]:
        return sorted(self.units.keys())

    def units_of(self, machine: int) -> Tuple[StorageUnit, ...]:
        try:
            return self.units[machine]
        except KeyError:
            return ()

    def symbols(self, machine: int) -> int:
        return sum(u.symbols(self.dims, self.l) for u in self.units_of(machine))

    def normalized(self, machine: int) -> Fraction:
        """
        gespeicherte symbole bezogen auf die grösse von A.
        """
        return Fraction(self.symbols(machine), self.dims.q * self.dims.v)


class MachineStore:
    """
    speicher einer maschine: zusammenhängende scheiben von Ã_n entlang einer achse.

    get() schneidet einen bereich aus einer gespeicherten scheibe heraus.
    """

    def __init__(self, machine: int, axis: Axis, extent: int):
        self.machine = machine
        self.axis = Axis(axis)
        self.extent = extent
        self.segments: List[Tuple[int, int, FieldMatrix]] = []

    def __repr__(self) -> str:
        return f"MachineStore({self.machine}, {self.axis.value}, {self.ranges()})"

    def put(self, start: int, end: int, payload: FieldMatrix):
        if payload.extent(self.axis) != end - start:
            raise DimError(f"scheibe [{start}, {end}) passt nicht zu {payload.shape}")
        self.segments.append((start, end, payload))
        self.segments.sort(key=lambda s: s[0])

    def ranges(self) -> List[Tuple[int, int]]:
        return [(a, b) for a, b, _ in self.segments]

    def covers(self, start: int, end: int) -> bool:
        return any(a <= start and end <= b for a, b, _ in self.segments)

    def get(self, start: int, end: int) -> FieldMatrix:
        """
        :raise MissingStorage, wenn keine scheibe den bereich ganz enthält.
        """
        for a, b, payload in self.segments:
            if a <= start and end <= b:
                if a == start and b == end:
                    return payload
                return payload.slice(self.axis, start - a, end - a)
        raise MissingStorage(self.machine, start, end)

    @property
    def symbols(self) -> int:
        return sum(p.size for _, _, p in self.segments)

    def group_bounds(self, g: int, m: int) -> Tuple[int, int]:
        """
        bereich der gruppe g bei realisationsgrösse m.

        :raise PartitionError, wenn die ausdehnung nicht durch m teilbar ist.
        """
        if self.extent % m:
            raise PartitionError(self.extent, m)
        w = self.extent // m
        return (g - 1) * w, g * w


@dataclass
class DownloadPlan:
    """
    blocks[n] sind die nummern der B-blöcke, die maschine n lädt, oder ENTIRE_B.
    """

    scheme: SchemeId
    blocks: Dict[int, Union[Tuple[int, ...], str]] = field(default_factory=dict)
    symbols: Dict[int, int] = field(default_factory=dict)

    def blocks_of(self, machine: int) -> Union[Tuple[int, ...], str]:
        try:
            return self.blocks[machine]
        except KeyError:
            return ()


@dataclass(frozen=True)
class ResultPoint:
    """
    resultat einer maschine für eine gruppe: F_g(α_n) (bzw. F'_g, F''_g).

    mults zählt die multiplikationen, arrival die ankunftsreihenfolge.
    """

    group: int
    machine: int
    point: Any
    payload: FieldMatrix
    mults: int = 0
    arrival: int = 0


@dataclass
class DecodeLedger:
    """
    zähler der zentrale: multiplikationen und verwendete rekonstruktionsmengen.
    """

    mults: int = 0
    decode_sets: Dict[int, Tuple[int, ...]] = field(default_factory=dict)


def coded_matrix(a: FieldMatrix, points: EvaluationPoints, machine: int) -> FieldMatrix:
    """
    Ã_n = X(α_n) aus den L zeilenteilen von A.
    """
    parts = partition(a, Axis.ROW, points.l)
    return encode_block(parts, points.betas, points.alpha(machine))


def storage_units(scheme: SchemeId, assignment: ComputationAssignment, dims: Dims) -> StoragePlan:
    """
    speicherbelegung einer realisation ohne daten.

    schema 1: eine einheit, ganz Ã_n. schemata 2 und 3: eine scheibe pro gruppe, die die maschine enthält.
    """

    scheme = SchemeId.from_any(scheme)
    l = assignment.l
    m = assignment.m
    dims.check(scheme, l, m)
    plan = StoragePlan(scheme, dims, l)

    for n in assignment.realization:
        if scheme is SchemeId.SCHEME1:
            plan.units[n] = (StorageUnit(n, None, Axis.ROW, 0, dims.q // l, m),)
        else:
            w = dims.coded_extent(scheme.axis, l) // m
            plan.units[n] = tuple(StorageUnit(n, g, scheme.axis, (g - 1) * w, g * w, m)
                                  for g in assignment.groups_of(n))

    return plan


def storage_plan(scheme: SchemeId, params: SystemParams, realization: AvailabilityRealization,
                 points: EvaluationPoints, a: FieldMatrix) -> Tuple[StoragePlan, Dict[int, MachineStore]]:
    """
    speicherbelegung für eine realisation planen und die kodierten daten erzeugen.

    schemata 2 und 3 kodieren die scheiben A_{l,g} direkt (X'_g bzw. X''_g).
    das resultat ist bytegleich mit der entsprechenden scheibe von Ã_n.

    :param scheme: schema
    :param params: systemparameter (L, S)
    :param realization: verfügbare maschinen
    :param points: stützstellen und auswertungspunkte
    :param a: datenmatrix A
    :return: (StoragePlan, dict maschine -> MachineStore)
    :raise PartitionError bei verletzter teilbarkeit.
    """

    scheme = SchemeId.from_any(scheme)
    assignment = cyclic_assignment(realization, params.l, params.s)
    dims = Dims(a.rows, a.cols, 0)
    l = params.l
    m = assignment.m

    parts = partition(a, Axis.ROW, l)
    if scheme is SchemeId.SCHEME1:
        slices = None
    else:
        # slices[g-1][l-1] = A_{l,g}
        per_part = [partition(p, scheme.axis, m) for p in parts]
        slices = [[per_part[i][g] for i in range(l)] for g in range(m)]

    plan = StoragePlan(scheme, dims, l)
    stores = {}
    extent = dims.coded_extent(scheme.axis, l)
    for n in realization:
        alpha = points.alpha(n)
        store = MachineStore(n, scheme.axis, extent)
        if scheme is SchemeId.SCHEME1:
            store.put(0, extent, encode_block(parts, points.betas, alpha))
            plan.units[n] = (StorageUnit(n, None, Axis.ROW, 0, extent, m),)
        else:
            units = []
            for g in assignment.groups_of(n):
                start, end = store.group_bounds(g, m)
                store.put(start, end, encode_block(slices[g - 1], points.betas, alpha))
                units.append(StorageUnit(n, g, scheme.axis, start, end, m))
            plan.units[n] = tuple(units)
        stores[n] = store

    logger.info(f"speicherbelegung schema {scheme} für {realization}: "
                f"{plan.normalized(realization.machine(1))} von A pro maschine")
    return plan, stores


def stored_blocks(plan: StoragePlan, stores: Mapping[int, MachineStore],
                  points: EvaluationPoints) -> Dict[int, List[CodedBlock]]:
    """
    gespeicherte einheiten als CodedBlock, pro maschine in der reihenfolge des plans.

    :raise MissingStorage, wenn ein store nicht zum plan passt.
    """

    result = {}
    for n in plan.machines():
        store = stores[n]
        result[n] = [CodedBlock(n, u.group, store.get(u.start, u.end), points.alpha(n)) for u in plan.units_of(n)]
    return result


def download_plan(scheme: SchemeId, realization: AvailabilityRealization, assignment: ComputationAssignment,
                  b: FieldMatrix) -> Tuple[DownloadPlan, Dict[int, Dict[Optional[int], FieldMatrix]]]:
    """
    downloads eines zeitschritts.

    schema 1: spaltenblöcke B_g, schema 3: zeilenblöcke B_g, jeweils für n in W_g.
    schema 2: ganz B, im payload unter dem schlüssel None.

    :return: (DownloadPlan, dict maschine -> {g: B_g} bzw. {None: B})
    :raise PartitionError bei verletzter teilbarkeit.
    """

    scheme = SchemeId.from_any(scheme)
    m = assignment.m
    plan = DownloadPlan(scheme)
    payloads = {}

    if scheme is SchemeId.SCHEME2:
        for n in realization:
            plan.blocks[n] = ENTIRE_B
            plan.symbols[n] = b.size
            payloads[n] = {None: b}
        return plan, payloads

    axis = Axis.COLUMN if scheme is SchemeId.SCHEME1 else Axis.ROW
    blocks = partition(b, axis, m)
    for n in realization:
        groups = tuple(assignment.groups_of(n))
        plan.blocks[n] = groups
        payloads[n] = {g: blocks[g - 1] for g in groups}
        plan.symbols[n] = sum(blocks[g - 1].size for g in groups)

    return plan, payloads


def worker_compute(scheme: SchemeId, machine: int, stored: Optional[MachineStore],
                   downloaded: Optional[Mapping[Optional[int], FieldMatrix]],
                   assignment: ComputationAssignment, points: EvaluationPoints) -> List[ResultPoint]:
    """
    rechenaufgaben einer maschine: ein resultat pro gruppe, die die maschine enthält.

    schema 1: Ã_n B_g, schema 2: Ã_{n,g} B, schema 3: Ã_{n,g} B_g.

    :raise IncompleteInputs, wenn speicher oder download fehlen.
    :raise MissingStorage, wenn die benötigte scheibe nicht gespeichert ist.
    """

    scheme = SchemeId.from_any(scheme)
    if stored is None:
        raise IncompleteInputs(f"maschine {machine} hat keinen speicher")
    if downloaded is None:
        raise IncompleteInputs(f"maschine {machine} hat nichts geladen")

    m = assignment.m
    alpha = points.alpha(machine)
    results = []
    for g in assignment.groups_of(machine):
        try:
            if scheme is SchemeId.SCHEME2:
                b = downloaded[None]
            else:
                b = downloaded[g]
        except KeyError:
            raise IncompleteInputs(f"maschine {machine}: block {g} von B fehlt")

        if scheme is SchemeId.SCHEME1:
            coded = stored.get(0, stored.extent)
        else:
            coded = stored.get(*stored.group_bounds(g, m))

        payload = matmul(coded, b)
        mults = coded.rows * coded.cols * b.cols
        results.append(ResultPoint(g, machine, alpha, payload, mults))

    logger.debug(f"maschine {machine}: {len(results)} resultate")
    return results


def select_decode_set(results: Iterable[ResultPoint], l: int) -> List[ResultPoint]:
    """
    die ersten L resultate nach ankunft, bei gleichstand nach maschinennummer.
    """
    return sorted(results, key=lambda r: (r.arrival, r.machine))[:l]


def master_decode(scheme: SchemeId, results: Sequence[ResultPoint], assignment: ComputationAssignment,
                  points: EvaluationPoints, dims: Dims, ledger: Optional[DecodeLedger] = None) -> FieldMatrix:
    """
    produkt AB aus den resultaten rekonstruieren.

    pro gruppe g werden die ersten L resultate von maschinen aus W_g interpoliert.
    resultate von maschinen ausserhalb von W_g werden ignoriert, doppelte pro maschine nur einmal gezählt.

    :param scheme: schema
    :param results: eingetroffene resultate
    :param assignment: rechenzuteilung
    :param points: stützstellen und auswertungspunkte
    :param dims: dimensionen q, v, r
    :param ledger: optionaler zähler für multiplikationen und rekonstruktionsmengen
    :return: AB (q x r)
    :raise DecodeThresholdNotMet, wenn eine gruppe weniger als L resultate hat.
    :raise DimError bei widersprüchlichen formen.
    """

    scheme = SchemeId.from_any(scheme)
    l = assignment.l
    m = assignment.m

    by_group: Dict[int, Dict[int, ResultPoint]] = {g: {} for g in range(1, m + 1)}
    for r in results:
        try:
            members = assignment.group(r.group)
        except IndexError:
            continue
        if r.group < 1 or r.machine not in members:
            continue
        by_group[r.group].setdefault(r.machine, r)

    # decoded[l-1][g-1]
    decoded: List[List[FieldMatrix]] = [[None] * m for _ in range(l)]
    for g in range(1, m + 1):
        chosen = select_decode_set(by_group[g].values(), l)
        if len(chosen) < l:
            logger.warning(f"gruppe {g}: nur {len(chosen)} von {l} resultaten")
            raise DecodeThresholdNotMet(g, len(chosen), l)

        nodes = [points.alpha(r.machine) for r in chosen]
        values = [r.payload for r in chosen]
        for i, beta in enumerate(points.betas):
            decoded[i][g - 1] = interpolate_at(nodes, values, beta)

        if ledger is not None:
            ledger.mults += l * l * values[0].size
            ledger.decode_sets[g] = tuple(r.machine for r in chosen)

    if scheme is SchemeId.SCHEME1:
        rows = [assemble(decoded[i], Axis.COLUMN) for i in range(l)]
    elif scheme is SchemeId.SCHEME2:
        rows = [assemble(decoded[i], Axis.ROW) for i in range(l)]
    else:
        field_ = points.field
        rows = [linear_combination(field_, [1] * m, decoded[i]) for i in range(l)]
    product = assemble(rows, Axis.ROW)

    if product.shape != (dims.q, dims.r):
        raise DimError(f"rekonstruiertes produkt {product.shape} statt {(dims.q, dims.r)}")
    return product
