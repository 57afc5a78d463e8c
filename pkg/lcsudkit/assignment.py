"""
verfügbarkeit und zyklische rechenzuteilung

eine verfügbarkeitsrealisation ist die menge der maschinen, die in einem zeitschritt zur verfügung stehen.
die maschinen werden aufsteigend nummeriert (rang i_1 < i_2 < ...).
gruppe W_g umfasst die L+S maschinen mit den rängen g, g+1, ..., g+L+S-1 (zyklisch, 1-basiert).

die zuteilung ist zusätzlich als bipartiter graph maschine/gruppe verfügbar.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import networkx as nx

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


ENUMERATION_CAP = 10 ** 6


class ParamError(ValueError):
    pass


class InsufficientMachines(ValueError):
    pass


class EnumerationTooLarge(ValueError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} realisationen, grenze {cap}")


@dataclass(frozen=True)
class SystemParams:
    """
    systemparameter

    n: anzahl maschinen N
    l: rekonstruktionsschwelle L
    s: tolerierte nachzügler pro gruppe S
    u: maximal gleichzeitig entzogene maschinen U
    """

    n: int
    l: int
    s: int = 0
    u: int = 0

    def __post_init__(self):
        if self.l < 1:
            raise ParamError(f"L={self.l} muss mindestens 1 sein")
        if self.s < 0:
            raise ParamError(f"S={self.s} darf nicht negativ sein")
        if self.n < self.l + self.s:
            raise ParamError(f"N={self.n} kleiner als L+S={self.l + self.s}")
        if not 0 <= self.u <= self.n - self.l - self.s:
            raise ParamError(f"U={self.u} ausserhalb von [0, {self.n - self.l - self.s}]")

    @property
    def group_size(self) -> int:
        return self.l + self.s

    @property
    def min_available(self) -> int:
        """
        kleinste zulässige realisationsgrösse max(L+S, N-U).
        """
        return max(self.l + self.s, self.n - self.u)


@dataclass(frozen=True)
class AvailabilityRealization:
    """
    verfügbare maschinen eines zeitschritts.

    members ist aufsteigend sortiert und duplikatfrei.
    rank(n) liefert die 1-basierte position einer maschine, machine(i) die umkehrung.
    """

    members: Tuple[int, ...]

    def __post_init__(self):
        members = tuple(int(x) for x in self.members)
        if any(a >= b for a, b in zip(members, members[1:])):
            members = tuple(sorted(set(members)))
        if members and members[0] < 1:
            raise ParamError(f"maschinennummern beginnen bei 1: {members}")
        object.__setattr__(self, 'members', members)

    @classmethod
    def full(cls, n: int) -> 'AvailabilityRealization':
        return cls(tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, machine: int) -> bool:
        return machine in self.members

    def __str__(self) -> str:
        return "{" + ", ".join(str(x) for x in self.members) + "}"

    @property
    def size(self) -> int:
        return len(self.members)

    def machine(self, rank: int) -> int:
        return self.members[rank - 1]

    def rank(self, machine: int) -> int:
        try:
            return self.members.index(machine) + 1
        except ValueError:
            raise KeyError(machine)

    def check_against(self, params: SystemParams):
        """
        prüft die grenzen N-U <= |members| <= N, |members| >= L+S und members in [N].

        :raise ParamError
        """
        if self.members and self.members[-1] > params.n:
            raise ParamError(f"maschine {self.members[-1]} existiert nicht (N={params.n})")
        if not params.min_available <= self.size <= params.n:
            raise ParamError(f"realisation {self} hat {self.size} maschinen, "
                             f"zulässig sind {params.min_available}..{params.n}")


def mod1(a: int, m: int) -> int:
    """
    1-basierter rest: a - m * floor((a-1)/m), liegt in [1, m].
    """
    return a - m * ((a - 1) // m)


@dataclass(frozen=True)
class ComputationAssignment:
    """
    rechenzuteilung W_1..W_m zu einer realisation.

    groups[g-1] enthält die maschinen von W_g in zyklischer reihenfolge (rang g zuerst).
    """

    realization: AvailabilityRealization
    l: int
    s: int
    groups: Tuple[Tuple[int, ...], ...]
    graph: nx.Graph = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.graph is None:
            object.__setattr__(self, 'graph', self._build_graph())

    def _build_graph(self) -> nx.Graph:
        """
        bipartiter graph

        knoten ('m', n) für maschinen und ('g', g) für gruppen, kante bei n in W_g.
        """
        g = nx.Graph()
        for n in self.realization:
            g.add_node(('m', n), typ='maschine', rank=self.realization.rank(n))
        for gi, members in enumerate(self.groups, start=1):
            g.add_node(('g', gi), typ='gruppe')
            for n in members:
                g.add_edge(('m', n), ('g', gi))
        return g

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def group_size(self) -> int:
        return self.l + self.s

    def group(self, g: int) -> Tuple[int, ...]:
        return self.groups[g - 1]

    def groups_of(self, machine: int) -> List[int]:
        """
        gruppen, in denen eine maschine mitarbeitet, aufsteigend.

        :raise KeyError, wenn die maschine nicht verfügbar ist.
        """
        try:
            nbrs = self.graph.adj[('m', machine)]
        except KeyError:
            raise KeyError(machine)
        return sorted(g for _, g in nbrs)

    def is_regular(self) -> bool:
        """
        True, wenn jede gruppe L+S maschinen hat und jede maschine in L+S gruppen liegt.
        """
        k = self.group_size
        for node, deg in self.graph.degree():
            if deg != k:
                return False
        return all(len(set(members)) == k for members in self.groups)


def cyclic_assignment(realization: AvailabilityRealization, l: int, s: int) -> ComputationAssignment:
    """
    zyklische zuteilung W_g = {i_mod1(g+j, m) : j = 0..L+S-1}.

    :param realization: verfügbare maschinen
    :param l: rekonstruktionsschwelle L
    :param s: nachzügler S
    :return: ComputationAssignment
    :raise InsufficientMachines, wenn weniger als L+S maschinen verfügbar sind.
    """

    m = len(realization)
    k = l + s
    if m < k:
        raise InsufficientMachines(f"{m} maschinen verfügbar, {k} nötig")

    groups = tuple(tuple(realization.machine(mod1(g + j, m)) for j in range(k))
                   for g in range(1, m + 1))
    return ComputationAssignment(realization, l, s, groups)


def realization_count(params: SystemParams) -> int:
    return sum(math.comb(params.n, k) for k in range(params.min_available, params.n + 1))


def enumerate_realizations(params: SystemParams, cap: Optional[int] = ENUMERATION_CAP) -> List[AvailabilityRealization]:
    """
    alle zulässigen realisationen, nach absteigender grösse, innerhalb einer grösse lexikographisch.

    :param params: systemparameter
    :param cap: maximale anzahl, None für unbegrenzt
    :return: liste der realisationen
    :raise EnumerationTooLarge, wenn die anzahl cap übersteigt.
    """

    count = realization_count(params)
    if cap is not None and count > cap:
        raise EnumerationTooLarge(count, cap)

    result = []
    for k in range(params.n, params.min_available - 1, -1):
        result.extend(AvailabilityRealization(c) for c in itertools.combinations(range(1, params.n + 1), k))
    return result
