"""
zeitschrittsimulation eines elastischen clusters

pro zeitschritt t:
1. die verfügbaren maschinen N^(t) und die nachzügler stehen fest (fahrplan oder generator).
2. die rechenzuteilung W_g wird gebildet, die maschinen laden ihre teile von B^(t).
3. alle verfügbaren maschinen ausser den nachzüglern rechnen (nebenläufig in threads).
4. die zentrale dekodiert und vergleicht mit dem referenzprodukt A B^(t).

A wird einmal aus dem seed erzeugt, B^(t) in jedem schritt frisch aus (seed, t).
die speicherbelegung erfolgt entweder einmal für alle realisationen (union)
oder für jede neue realisation (per-realization).

der bericht ist bei gleichem seed bytegleich, die nebenläufigkeit hat keinen einfluss.
"""

import json
import logging
import os
import weakref
from collections.abc import Set
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import trio

from lcsudkit.assignment import (AvailabilityRealization, ComputationAssignment, EnumerationTooLarge, ParamError,
                                 SystemParams, cyclic_assignment, enumerate_realizations)
from lcsudkit.elasticity import materialize_union, storage_fraction, union_placement
from lcsudkit.ffield import DEFAULT_MODULUS, FieldTooSmall, NotPrime, PrimeField
from lcsudkit.lagrange import POINT_RULES, generate_points
from lcsudkit.matrix import FieldMatrix, PartitionError, matrices_equal, reference_matmul
from lcsudkit.schemes import (DecodeLedger, DecodeThresholdNotMet, Dims, IncompleteInputs, MissingStorage,
                              ResultPoint, SchemeId, UnknownScheme, download_plan, master_decode, storage_plan,
                              worker_compute)

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


PLACEMENT_MODES = ('per-realization', 'union')
AVAILABILITY_KINDS = ('full', 'cycle', 'random')
STRAGGLER_KINDS = ('none', 'fixed-set', 'seeded-random', 'adversarial-per-group')

REQUIRED_KEYS = ('n', 'l', 's', 'u', 'scheme', 'p', 'q', 'v', 'r', 'seed', 'placement')
OPTIONAL_KEYS = ('schedule', 'steps', 'straggler_policy', 'availability', 'point_rule')

# kennungen der zufallsströme pro zeitschritt
STREAM_B = 0
STREAM_STRAGGLER = 1
STREAM_AVAILABILITY = 2

THREADS_ENV = 'LCSUD_THREADS'


class ConfigError(ValueError):
    pass


class JSONEncoder(json.JSONEncoder):
    """
    translate non-standard objects to JSON objects.

    Fraction -> "num/den", Set -> sortierte liste, numpy-ganzzahlen -> int.

    ~~~~~~{.py}
    encoded = json.dumps(data, cls=JSONEncoder)
    ~~~~~~
    """

    def default(self, obj):
        if isinstance(obj, Fraction):
            return f"{obj.numerator}/{obj.denominator}"
        if isinstance(obj, (Set, frozenset)):
            return sorted(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        else:
            return super().default(obj)


class Observable:
    """
    notify observers of events

    - observers are bound methods of object instances.
    - the object keeps weak references - observers don't need to unregister.
    """

    def __init__(self, owner: Any):
        self.owner = owner
        self._observers = weakref.WeakKeyDictionary()

    def register(self, observer):
        """
        register an observer

        :param observer: must be a bound method.
        :raise AttributeError, wenn observer keine gebundene methode ist.
        """

        obj = observer.__self__
        self._observers[obj] = observer.__name__

    def notify(self, *args, **kwargs):
        """
        die beobachter erhalten das Observable als erstes argument, danach die argumente des aufrufs.
        """

        for obs, name in list(self._observers.items()):
            meth = getattr(obs, name)
            meth(self, *args, **kwargs)


@dataclass(frozen=True)
class ScheduleStep:
    available: Tuple[int, ...]
    stragglers: Tuple[int, ...] = ()

    @classmethod
    def from_dict(cls, d: Mapping) -> 'ScheduleStep':
        try:
            available = tuple(sorted(int(x) for x in d['available']))
        except KeyError:
            raise ConfigError("fahrplanschritt ohne 'available'")
        except (TypeError, ValueError):
            raise ConfigError(f"ungültige maschinenliste {d.get('available')!r}")
        if len(set(available)) != len(available):
            raise ConfigError(f"doppelte maschinen in {list(available)}")
        try:
            stragglers = tuple(sorted(int(x) for x in d.get('stragglers', [])))
        except (TypeError, ValueError):
            raise ConfigError(f"ungültige nachzüglerliste {d.get('stragglers')!r}")
        return cls(available, stragglers)

    def to_dict(self) -> Dict:
        return {'available': list(self.available), 'stragglers': list(self.stragglers)}


@dataclass
class StragglerPolicy:
    """
    erzeugt die nachzügler eines zeitschritts.

    none: keine. fixed-set: die verfügbaren aus machines.
    seeded-random: k zufällige verfügbare maschinen.
    adversarial-per-group: S maschinen aus einer zufällig gewählten gruppe W_g.

    die auswahl hängt nur von (seed, schritt) und der zuteilung ab.
    """

    kind: str = 'none'
    seed: int = 0
    machines: Tuple[int, ...] = ()
    k: int = 0
    s: int = 0

    def __call__(self, step: int, assignment: ComputationAssignment) -> Tuple[int, ...]:
        available = assignment.realization.members
        if self.kind == 'none':
            return ()
        elif self.kind == 'fixed-set':
            return tuple(sorted(set(self.machines) & set(available)))

        rng = np.random.default_rng([self.seed, step, STREAM_STRAGGLER])
        if self.kind == 'seeded-random':
            k = min(self.k, len(available))
            chosen = rng.choice(len(available), size=k, replace=False)
            return tuple(sorted(available[i] for i in chosen))
        elif self.kind == 'adversarial-per-group':
            g = int(rng.integers(1, assignment.m + 1))
            members = assignment.group(g)
            k = min(self.s, len(members))
            chosen = rng.choice(len(members), size=k, replace=False)
            return tuple(sorted(members[i] for i in chosen))
        else:
            raise ValueError(f"unbekannte nachzüglerregel {self.kind}")


def make_straggler_policy(kind: str, seed: int = 0, machines: Sequence[int] = (), k: int = 0,
                          s: int = 0) -> StragglerPolicy:
    """
    nachzüglerregel erzeugen.

    :param kind: 'none', 'fixed-set', 'seeded-random' oder 'adversarial-per-group'
    :param seed: seed der zufallsregeln
    :param machines: maschinen der regel fixed-set
    :param k: anzahl nachzügler der regel seeded-random
    :param s: anzahl nachzügler der regel adversarial-per-group (normalerweise S)
    :return: aufrufbar mit (schritt, zuteilung)
    :raise ValueError bei unbekannter regel.
    """

    if kind not in STRAGGLER_KINDS:
        raise ValueError(f"unbekannte nachzüglerregel {kind}")
    if k < 0 or s < 0:
        raise ValueError(f"negative anzahl nachzügler k={k}, s={s}")
    return StragglerPolicy(kind, int(seed), tuple(int(x) for x in machines), int(k), int(s))


@dataclass
class SimConfig:
    """
    konfiguration einer simulation

    die schlüssel des json-dokuments entsprechen den feldnamen.
    schedule ist optional, ohne fahrplan werden steps schritte aus availability und straggler_policy erzeugt.
    """

    n: int = 6
    l: int = 2
    s: int = 1
    u: int = 0
    scheme: SchemeId = SchemeId.SCHEME1
    p: int = DEFAULT_MODULUS
    q: int = 12
    v: int = 12
    r: int = 12
    seed: int = 0
    placement: str = 'per-realization'
    schedule: List[ScheduleStep] = field(default_factory=list)
    steps: int = 1
    straggler_policy: Dict[str, Any] = field(default_factory=lambda: {'kind': 'none'})
    availability: str = 'full'
    point_rule: str = 'consecutive'

    def set_config(self, d: Mapping[str, Any]):
        """
        konfiguration aus einem dictionary übernehmen.

        :raise ConfigError bei fehlenden, unbekannten oder falsch typisierten schlüsseln.
        """

        unknown = set(d) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS)
        if unknown:
            raise ConfigError(f"unbekannte schlüssel {sorted(unknown)}")
        missing = [k for k in REQUIRED_KEYS if k not in d]
        if missing:
            raise ConfigError(f"fehlende schlüssel {missing}")

        try:
            for k in ('n', 'l', 's', 'u', 'p', 'q', 'v', 'r', 'seed'):
                setattr(self, k, _as_int(d[k], k))
            self.scheme = SchemeId.from_any(d['scheme'])
            self.placement = str(d['placement'])
            self.schedule = [ScheduleStep.from_dict(x) for x in d.get('schedule', [])]
            self.steps = _as_int(d.get('steps', len(self.schedule) or 1), 'steps')
            policy = d.get('straggler_policy', {'kind': 'none'})
            if not isinstance(policy, dict):
                raise ConfigError(f"straggler_policy muss ein json-objekt sein: {policy!r}")
            self.straggler_policy = dict(policy)
            self.availability = str(d.get('availability', 'full'))
            self.point_rule = str(d.get('point_rule', 'consecutive'))
        except UnknownScheme as e:
            raise ConfigError(str(e))
        except (TypeError, AttributeError) as e:
            raise ConfigError(f"ungültige konfiguration: {e}")

    def get_config(self) -> Dict[str, Any]:
        """
        aktuelle konfiguration im dict-format, geeignet für json.
        """

        d = {'n': self.n, 'l': self.l, 's': self.s, 'u': self.u, 'scheme': self.scheme.value, 'p': self.p,
             'q': self.q, 'v': self.v, 'r': self.r, 'seed': self.seed, 'placement': self.placement,
             'steps': self.steps, 'straggler_policy': dict(self.straggler_policy),
             'availability': self.availability, 'point_rule': self.point_rule}
        if self.schedule:
            d['schedule'] = [st.to_dict() for st in self.schedule]
        return d

    def load_config(self, path: os.PathLike):
        """
        :raise OSError bei lesefehlern, ConfigError bei ungültigem inhalt.
        """

        try:
            with open(path, encoding='utf-8') as fp:
                d = json.load(fp)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: kein gültiges json ({e})")
        if not isinstance(d, dict):
            raise ConfigError(f"{path}: json-objekt erwartet")
        self.set_config(d)
        logger.info(f"konfiguration {path} geladen")

    def save_config(self, path: os.PathLike):
        with open(path, "w", encoding='utf-8') as fp:
            json.dump(self.get_config(), fp, sort_keys=True, indent=4, cls=JSONEncoder)

    @property
    def params(self) -> SystemParams:
        try:
            return SystemParams(self.n, self.l, self.s, self.u)
        except ParamError as e:
            raise ConfigError(str(e))

    @property
    def dims(self) -> Dims:
        return Dims(self.q, self.v, self.r)

    def policy(self) -> StragglerPolicy:
        sp = self.straggler_policy
        try:
            return make_straggler_policy(str(sp.get('kind', 'none')), self.seed,
                                         machines=sp.get('machines', ()), k=int(sp.get('k', 0)),
                                         s=int(sp.get('s', self.s)))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"ungültige nachzüglerregel {sp!r}: {e}")

    def resolved_schedule(self) -> List[ScheduleStep]:
        """
        fahrplan, entweder explizit oder aus availability und straggler_policy erzeugt.

        :raise ConfigError
        """

        if self.schedule:
            return list(self.schedule)
        if self.steps < 1:
            raise ConfigError(f"steps={self.steps} muss mindestens 1 sein")

        params = self.params
        policy = self.policy()
        if self.availability == 'full':
            realizations = [AvailabilityRealization.full(self.n)]
        elif self.availability in ('cycle', 'random'):
            try:
                realizations = enumerate_realizations(params)
            except EnumerationTooLarge as e:
                raise ConfigError(f"availability {self.availability}: {e}")
        else:
            raise ConfigError(f"unbekannte availability {self.availability}")

        result = []
        for t in range(1, self.steps + 1):
            if self.availability == 'random':
                rng = np.random.default_rng([self.seed, t, STREAM_AVAILABILITY])
                realization = realizations[int(rng.integers(0, len(realizations)))]
            else:
                realization = realizations[(t - 1) % len(realizations)]
            assignment = cyclic_assignment(realization, self.l, self.s)
            result.append(ScheduleStep(realization.members, policy(t, assignment)))
        return result

    def validate(self) -> List[ScheduleStep]:
        """
        gesamte konfiguration prüfen, bevor ein schritt läuft.

        :return: aufgelöster fahrplan
        :raise ConfigError
        """

        params = self.params
        try:
            field_ = PrimeField(self.p)
            field_.require_points(self.n + self.l)
        except (NotPrime, FieldTooSmall) as e:
            raise ConfigError(str(e))
        if self.placement not in PLACEMENT_MODES:
            raise ConfigError(f"unbekannte platzierung {self.placement}")
        if self.point_rule not in POINT_RULES:
            raise ConfigError(f"unbekannte punktregel {self.point_rule}")
        if min(self.q, self.v, self.r) < 1:
            raise ConfigError(f"dimensionen müssen positiv sein: q={self.q}, v={self.v}, r={self.r}")
        if self.seed < 0:
            raise ConfigError(f"seed={self.seed} darf nicht negativ sein")

        schedule = self.resolved_schedule()
        for t, step in enumerate(schedule, start=1):
            realization = AvailabilityRealization(step.available)
            try:
                realization.check_against(params)
            except ParamError as e:
                raise ConfigError(f"schritt {t}: {e}")
            extra = set(step.stragglers) - set(step.available)
            if extra:
                raise ConfigError(f"schritt {t}: nachzügler {sorted(extra)} sind nicht verfügbar")

        for m in sorted({len(step.available) for step in schedule}):
            try:
                self.dims.check(self.scheme, self.l, m)
            except PartitionError as e:
                raise ConfigError(f"realisationsgrösse {m}: {e}")

        return schedule


def _as_int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(f"{key} muss ganzzahlig sein: {value!r}")
    return int(value)


def thread_limit() -> int:
    """
    obergrenze der worker-threads aus LCSUD_THREADS, sonst anzahl cpus.
    """

    default = os.cpu_count() or 1
    try:
        value = int(os.environ[THREADS_ENV])
    except KeyError:
        return default
    except ValueError:
        logger.warning(f"{THREADS_ENV}={os.environ[THREADS_ENV]!r} ignoriert")
        return default
    return max(1, value)


@dataclass
class MachineLedger:
    machine: int
    download_symbols: int = 0
    upload_symbols: int = 0
    compute_mults: int = 0

    def to_dict(self) -> Dict:
        return {'machine': self.machine, 'download_symbols': self.download_symbols,
                'upload_symbols': self.upload_symbols, 'compute_mults': self.compute_mults}


@dataclass
class PlacementRecord:
    """
    eine speicherbelegung: vor schritt step, für realisation members (union: alle maschinen).
    """

    step: int
    mode: str
    members: Tuple[int, ...]
    storage_symbols: Dict[int, int] = field(default_factory=dict)
    storage_fraction: Dict[int, Fraction] = field(default_factory=dict)
    encoding_mults: Dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'step': self.step, 'mode': self.mode, 'members': list(self.members),
                'machines': [{'machine': n, 'storage_symbols': self.storage_symbols[n],
                              'storage_fraction': self.storage_fraction[n],
                              'encoding_mults': self.encoding_mults[n]}
                             for n in sorted(self.storage_symbols)]}


@dataclass
class StepReport:
    step: int
    available: Tuple[int, ...]
    stragglers: Tuple[int, ...]
    success: bool = False
    decoded_equals_oracle: bool = False
    groups: Tuple[Tuple[int, ...], ...] = ()
    downloads: Dict[int, Any] = field(default_factory=dict)
    decode_sets: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    groups_decoded: int = 0
    stragglers_tolerated: int = 0
    overload: bool = False
    replaced: bool = False
    error: str = ''
    decoding_mults: int = 0
    machines: List[MachineLedger] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {'step': self.step, 'available': list(self.available), 'stragglers': list(self.stragglers),
                'success': self.success, 'decoded_equals_oracle': self.decoded_equals_oracle,
                'groups': [list(g) for g in self.groups],
                'downloads': [{'machine': n, 'blocks': b if isinstance(b, str) else list(b)}
                              for n, b in sorted(self.downloads.items())],
                'decode_sets': [{'group': g, 'machines': list(ms)} for g, ms in sorted(self.decode_sets.items())],
                'groups_decoded': self.groups_decoded, 'stragglers_tolerated': self.stragglers_tolerated,
                'overload': self.overload, 'replaced': self.replaced, 'error': self.error,
                'decoding_mults': self.decoding_mults,
                'machines': [led.to_dict() for led in self.machines]}


@dataclass
class SimReport:
    config: Dict[str, Any]
    steps: List[StepReport] = field(default_factory=list)
    placements: List[PlacementRecord] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return all(st.success and st.decoded_equals_oracle for st in self.steps)

    @property
    def failed_steps(self) -> List[int]:
        return [st.step for st in self.steps if not (st.success and st.decoded_equals_oracle)]

    def totals(self) -> Dict[str, int]:
        return {'download_symbols': sum(m.download_symbols for st in self.steps for m in st.machines),
                'upload_symbols': sum(m.upload_symbols for st in self.steps for m in st.machines),
                'compute_mults': sum(m.compute_mults for st in self.steps for m in st.machines),
                'decoding_mults': sum(st.decoding_mults for st in self.steps),
                'encoding_mults': sum(sum(pl.encoding_mults.values()) for pl in self.placements)}

    def to_dict(self) -> Dict:
        return {'config': self.config, 'success': self.success, 'failed_steps': self.failed_steps,
                'placement_count': len(self.placements),
                'placements': [pl.to_dict() for pl in self.placements],
                'steps': [st.to_dict() for st in self.steps], 'totals': self.totals()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=4, cls=JSONEncoder)

    def write(self, path: os.PathLike):
        with open(path, "w", encoding='utf-8') as fp:
            fp.write(self.to_json())
            fp.write("\n")

    def ledger_frame(self) -> pd.DataFrame:
        """
        kostenbuch mit einer zeile pro schritt und maschine.

        spalten: step, machine, download_symbols, upload_symbols, compute_mults, success.
        """

        records = []
        for st in self.steps:
            for led in st.machines:
                records.append({'step': st.step, 'machine': led.machine,
                                'download_symbols': led.download_symbols, 'upload_symbols': led.upload_symbols,
                                'compute_mults': led.compute_mults, 'success': st.success})
        return pd.DataFrame.from_records(records, columns=['step', 'machine', 'download_symbols',
                                                           'upload_symbols', 'compute_mults', 'success'])

    def write_ledger(self, path: os.PathLike):
        self.ledger_frame().to_csv(path, index=False, encoding='utf-8')


class Simulator:
    """
    simulator für eine konfiguration

    der konstruktor prüft die konfiguration vollständig (ConfigError), run() führt alle schritte aus.
    beobachter können sich bei placement_done und step_done registrieren.
    """

    def __init__(self, config: SimConfig):
        self.config = config
        self.schedule = config.validate()
        self.params = config.params
        self.field = PrimeField(config.p)
        self.scheme = config.scheme
        self.dims = config.dims
        self.points = generate_points(self.field, config.n, config.l, seed=config.seed, rule=config.point_rule)
        self.a: Optional[FieldMatrix] = None
        self.stores: Dict[int, Any] = {}
        self.placed_for: Optional[Tuple[int, ...]] = None
        self.placement_done = Observable(self)
        self.step_done = Observable(self)

    def data_matrix(self) -> FieldMatrix:
        return FieldMatrix.random(self.field, self.dims.q, self.dims.v, np.random.default_rng(self.config.seed))

    def input_matrix(self, step: int) -> FieldMatrix:
        rng = np.random.default_rng([self.config.seed, step, STREAM_B])
        return FieldMatrix.random(self.field, self.dims.v, self.dims.r, rng)

    def _place_union(self, report: SimReport):
        plan = union_placement(self.scheme, self.params.n, self.params.u, self.params.l, self.params.s)
        self.stores = materialize_union(plan, self.points, self.a)
        self.placed_for = tuple(range(1, self.params.n + 1))
        per_machine, _ = storage_fraction(plan)
        record = PlacementRecord(0, 'union', self.placed_for)
        for n, store in sorted(self.stores.items()):
            record.storage_symbols[n] = store.symbols
            record.storage_fraction[n] = Fraction(store.symbols, self.dims.q * self.dims.v)
            record.encoding_mults[n] = self.params.l * store.symbols
        report.placements.append(record)
        logger.info(f"vereinigte speicherbelegung: {[str(x) for x in per_machine.values()]}")
        self.placement_done.notify(record=record, plan=plan, stores=self.stores)

    def _place_realization(self, step: int, realization: AvailabilityRealization, report: SimReport):
        plan, self.stores = storage_plan(self.scheme, self.params, realization, self.points, self.a)
        self.placed_for = realization.members
        record = PlacementRecord(step, 'per-realization', realization.members)
        for n, store in sorted(self.stores.items()):
            record.storage_symbols[n] = store.symbols
            record.storage_fraction[n] = plan.normalized(n)
            record.encoding_mults[n] = self.params.l * store.symbols
        report.placements.append(record)
        logger.info(f"speicherbelegung vor schritt {step} für {realization}")
        self.placement_done.notify(record=record, plan=plan, stores=self.stores)

    async def _compute(self, assignment: ComputationAssignment, machines: Sequence[int],
                       downloads: Mapping[int, Any]) -> Tuple[Dict[int, List[ResultPoint]], Dict[int, Exception]]:
        """
        rechenphase: jede maschine in einem eigenen thread.

        fehler einzelner maschinen werden gesammelt und brechen die anderen nicht ab.
        """

        results: Dict[int, List[ResultPoint]] = {}
        errors: Dict[int, Exception] = {}
        limiter = trio.CapacityLimiter(thread_limit())

        async def worker(n: int):
            try:
                results[n] = await trio.to_thread.run_sync(
                    worker_compute, self.scheme, n, self.stores.get(n), downloads.get(n), assignment, self.points,
                    limiter=limiter)
            except (MissingStorage, IncompleteInputs) as e:
                errors[n] = e

        async with trio.open_nursery() as nursery:
            for n in machines:
                nursery.start_soon(worker, n)

        return results, errors

    async def _run_step(self, t: int, step: ScheduleStep, report: SimReport) -> StepReport:
        realization = AvailabilityRealization(step.available)
        replaced = False
        if self.config.placement == 'per-realization' and self.placed_for != realization.members:
            self._place_realization(t, realization, report)
            replaced = len(report.placements) > 1

        assignment = cyclic_assignment(realization, self.params.l, self.params.s)
        b = self.input_matrix(t)
        dplan, downloads = download_plan(self.scheme, realization, assignment, b)

        stragglers = set(step.stragglers)
        workers = [n for n in realization if n not in stragglers]
        results, errors = await self._compute(assignment, workers, downloads)

        st = StepReport(t, realization.members, step.stragglers, groups=assignment.groups,
                        downloads=dict(dplan.blocks), replaced=replaced)
        st.overload = any(len(stragglers & set(w)) > self.params.s for w in assignment.groups)
        st.groups_decoded = sum(1 for w in assignment.groups
                                if sum(1 for n in w if n in results) >= self.params.l)

        for n in range(1, self.params.n + 1):
            led = MachineLedger(n)
            if n in realization:
                led.download_symbols = dplan.symbols[n]
                for res in results.get(n, []):
                    led.upload_symbols += res.payload.size
                    led.compute_mults += res.mults
            st.machines.append(led)

        if errors:
            n, e = sorted(errors.items())[0]
            st.error = f"{type(e).__name__}: {e}"
            logger.warning(f"schritt {t}: {st.error}")
        else:
            ledger = DecodeLedger()
            flat = [res for n in sorted(results) for res in results[n]]
            try:
                product = master_decode(self.scheme, flat, assignment, self.points, self.dims, ledger)
            except DecodeThresholdNotMet as e:
                st.error = f"{type(e).__name__}: {e}"
                logger.warning(f"schritt {t}: {st.error}")
            else:
                st.success = True
                st.decode_sets = dict(ledger.decode_sets)
                st.decoding_mults = ledger.mults
                st.stragglers_tolerated = len(stragglers)
                st.decoded_equals_oracle = matrices_equal(product, reference_matmul(self.a, b))
                if not st.decoded_equals_oracle:
                    logger.error(f"schritt {t}: dekodiertes produkt weicht vom referenzprodukt ab")

        logger.info(f"schritt {t}: verfügbar {realization}, nachzügler {sorted(stragglers)}, "
                    f"erfolg {st.success}")
        return st

    async def run(self) -> SimReport:
        """
        alle schritte ausführen.

        diese coroutine muss über trio.run ausgeführt werden.
        """

        report = SimReport(self.config.get_config())
        self.a = self.data_matrix()
        if self.config.placement == 'union':
            self._place_union(report)

        for t, step in enumerate(self.schedule, start=1):
            st = await self._run_step(t, step, report)
            report.steps.append(st)
            self.step_done.notify(report=st)

        return report


def run_simulation(config: SimConfig) -> SimReport:
    """
    simulation synchron ausführen.

    :raise ConfigError, bevor ein schritt läuft.
    """

    simulator = Simulator(config)
    return trio.run(simulator.run)
