"""
arithmetik im primkörper F_p

alle daten, codes und dekodierungen rechnen exakt modulo einer primzahl p.
elemente werden immer als kleinster nichtnegativer rest geführt,
damit matrizen bytegenau verglichen werden können.

die objekte sind unveränderlich und dürfen zwischen threads geteilt werden.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


DEFAULT_MODULUS = 65537
LARGE_MODULUS = 2 ** 31 - 1

# basen für einen deterministischen miller-rabin-test, gültig bis 3.3e24
_MR_BASEN = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FieldMismatch(ValueError):
    """
    operanden stammen aus verschiedenen körpern.
    """
    pass


class DivisionByZero(ZeroDivisionError):
    """
    inverse von null verlangt.

    bei batch_inv steht im attribut index die position des nullelements.
    """

    def __init__(self, index: int = None):
        self.index = index
        if index is None:
            super().__init__("null hat keine inverse")
        else:
            super().__init__(f"null hat keine inverse (index {index})")


class NotPrime(ValueError):
    pass


class FieldTooSmall(ValueError):
    """
    der körper hat zu wenige elemente für die verlangten stützstellen.
    """

    def __init__(self, p: int, needed: int):
        self.p = p
        self.needed = needed
        super().__init__(f"körper F_{p} zu klein: mindestens {needed} elemente nötig")


def is_prime(n: int) -> bool:
    """
    deterministischer primzahltest (miller-rabin mit festen basen).

    :param n: ganze zahl
    :return: True, wenn n prim ist.
    """

    if n < 2:
        return False
    for b in _MR_BASEN:
        if n % b == 0:
            return n == b

    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for a in _MR_BASEN:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False

    return True


@dataclass(frozen=True)
class PrimeField:
    """
    primkörper F_p

    der modulus wird bei der konstruktion auf primalität geprüft (p < 2^64).
    der körper liefert auch den numpy-datentyp,
    in dem matrizen ohne überlauf reduziert werden können.
    """

    p: int = DEFAULT_MODULUS

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise NotPrime(f"modulus muss ganzzahlig sein: {self.p!r}")
        if self.p >= 2 ** 64:
            raise NotPrime(f"modulus {self.p} ausserhalb des unterstützten bereichs (< 2^64)")
        if not is_prime(int(self.p)):
            raise NotPrime(f"modulus {self.p} ist nicht prim")
        object.__setattr__(self, 'p', int(self.p))

    def __str__(self) -> str:
        return f"F_{self.p}"

    def __call__(self, value: int) -> 'FieldElement':
        return FieldElement(int(value) % self.p, self)

    @property
    def one(self) -> 'FieldElement':
        return FieldElement(1, self)

    @property
    def dtype(self):
        """
        numpy-datentyp für matrixeinträge.

        int64 genügt, solange ein produkt zweier reste in 63 bit passt.
        grössere körper rechnen mit python-ganzzahlen (dtype object).
        """
        if (self.p - 1) ** 2 < 2 ** 63:
            return np.int64
        else:
            return object

    def dot_safe(self, inner: int) -> bool:
        """
        prüft, ob ein skalarprodukt der länge inner in int64 ohne überlauf summiert werden kann.
        """
        return self.dtype is np.int64 and inner * (self.p - 1) ** 2 < 2 ** 63

    def require_points(self, count: int):
        """
        :raise FieldTooSmall, wenn der körper weniger als count elemente hat.
        """
        if self.p < count:
            raise FieldTooSmall(self.p, count)

    def inv(self, value: int) -> int:
        """
        inverse eines rests als ganze zahl.

        :raise DivisionByZero
        """
        value = int(value) % self.p
        if value == 0:
            raise DivisionByZero()
        return pow(value, -1, self.p)

    def batch_inv_values(self, values: Sequence[int]) -> List[int]:
        """
        inverse vieler reste mit einer einzigen exponentiation (montgomery-trick).

        :param values: reste
        :return: liste der inversen in der gleichen reihenfolge
        :raise DivisionByZero mit dem index des ersten nullelements
        """
        p = self.p
        prefix = []
        acc = 1
        for i, v in enumerate(values):
            v = int(v) % p
            if v == 0:
                raise DivisionByZero(i)
            prefix.append(acc)
            acc = acc * v % p

        result = [0] * len(prefix)
        inv_acc = pow(acc, -1, p) if prefix else 1
        for i in range(len(prefix) - 1, -1, -1):
            v = int(values[i]) % p
            result[i] = inv_acc * prefix[i] % p
            inv_acc = inv_acc * v % p

        return result


@dataclass(frozen=True)
class FieldElement:
    """
    element von F_p, immer kanonisch im bereich [0, p).

    elemente werden normalerweise über PrimeField.__call__ erzeugt, das den wert reduziert.
    """

    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} ist kein kanonischer rest in {self.field}")

    def _check(self, other: 'FieldElement'):
        if not isinstance(other, FieldElement):
            raise TypeError(f"kein körperelement: {other!r}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} und {other.field} sind verschiedene körper")

    def __add__(self, other: 'FieldElement') -> 'FieldElement':
        self._check(other)
        return FieldElement((self.value + other.value) % self.field.p, self.field)

    def __sub__(self, other: 'FieldElement') -> 'FieldElement':
        self._check(other)
        return FieldElement((self.value - other.value) % self.field.p, self.field)

    def __mul__(self, other: 'FieldElement') -> 'FieldElement':
        self._check(other)
        return FieldElement(self.value * other.value % self.field.p, self.field)

    def __truediv__(self, other: 'FieldElement') -> 'FieldElement':
        return self * other.inverse()

    def __neg__(self) -> 'FieldElement':
        return FieldElement(-self.value % self.field.p, self.field)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"

    def __str__(self) -> str:
        return str(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> 'FieldElement':
        return FieldElement(self.field.inv(self.value), self.field)


def field_op(kind: str, a: FieldElement, b: FieldElement) -> FieldElement:
    """
    addition, subtraktion oder multiplikation zweier körperelemente.

    :param kind: 'add', 'sub' oder 'mul'
    :param a: erster operand
    :param b: zweiter operand, aus demselben körper
    :return: kanonischer rest von a o b
    :raise FieldMismatch bei operanden aus verschiedenen körpern.
    :raise ValueError bei unbekannter operation.
    """

    if kind == 'add':
        return a + b
    elif kind == 'sub':
        return a - b
    elif kind == 'mul':
        return a * b
    else:
        raise ValueError(f"unbekannte körperoperation {kind}")


def field_inv(a: FieldElement) -> FieldElement:
    """
    multiplikative inverse.

    :raise DivisionByZero, wenn a = 0.
    """
    return a.inverse()


def batch_inv(values: Union[Sequence[FieldElement], Iterable[FieldElement]]) -> List[FieldElement]:
    """
    inverse einer folge von körperelementen.

    das resultat stimmt elementweise mit field_inv überein,
    braucht aber nur eine einzige exponentiation.

    :param values: nicht-null-elemente aus einem gemeinsamen körper
    :return: liste der inversen
    :raise DivisionByZero mit dem index des ersten nullelements.
    :raise FieldMismatch bei gemischten körpern.
    """

    values = list(values)
    if not values:
        return []
    field = values[0].field
    for v in values:
        if v.field != field:
            raise FieldMismatch(f"{field} und {v.field} sind verschiedene körper")

    inverse = field.batch_inv_values([v.value for v in values])
    return [FieldElement(w, field) for w in inverse]
