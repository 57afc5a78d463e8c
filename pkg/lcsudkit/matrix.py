"""
dichte matrizen über F_p

FieldMatrix hält die einträge als kanonische reste in einem numpy-array (zeilenweise).
das modul stellt die zerlegung in gleich grosse blöcke, das zusammensetzen,
eine schnelle exakte multiplikation und die referenz-multiplikation (orakel) bereit.

die teilbarkeit ist eine harte vorbedingung, es wird nie aufgefüllt.

fixture-dateien für tests sind reiner text:
erste zeile "rows cols p", danach die einträge zeilenweise, durch leerraum getrennt.
"""

import enum
import logging
import os
from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

import numpy as np

from lcsudkit.ffield import FieldElement, FieldMismatch, PrimeField

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


class PartitionError(ValueError):
    def __init__(self, dimension: int, k: int):
        self.dimension = dimension
        self.k = k
        super().__init__(f"dimension {dimension} ist nicht durch {k} teilbar")


class AssemblyError(ValueError):
    pass


class DimError(ValueError):
    pass


class Axis(str, enum.Enum):
    ROW = 'row'
    COLUMN = 'column'

    @property
    def numpy_axis(self) -> int:
        return 0 if self is Axis.ROW else 1


@dataclass(frozen=True)
class BlockLayout:
    """
    zerlegung einer dimension in k gleich grosse teile.
    """

    axis: Axis
    parts: int
    part_extent: int

    @classmethod
    def of(cls, dimension: int, axis: Axis, k: int) -> 'BlockLayout':
        """
        :raise PartitionError, wenn dimension nicht durch k teilbar ist.
        """
        if k < 1 or dimension % k != 0:
            raise PartitionError(dimension, k)
        return cls(Axis(axis), k, dimension // k)

    @property
    def dimension(self) -> int:
        return self.parts * self.part_extent

    def bounds(self, index: int) -> Tuple[int, int]:
        """
        halboffener indexbereich des teils index (0-basiert).
        """
        return index * self.part_extent, (index + 1) * self.part_extent


class FieldMatrix:
    """
    matrix über einem primkörper

    die einträge werden bei der konstruktion reduziert und sind danach schreibgeschützt.
    zwei matrizen sind gleich, wenn form, körper und alle reste übereinstimmen.
    """

    def __init__(self, field: PrimeField, array: Any):
        self.field: PrimeField = field
        a = np.asarray(array)
        if a.ndim != 2:
            raise DimError(f"matrix muss zweidimensional sein, form {a.shape}")
        if a.dtype != object and np.issubdtype(a.dtype, np.integer) and field.dtype is np.int64:
            a = np.mod(a.astype(np.int64, copy=False), field.p)
        else:
            a = np.mod(a.astype(object), field.p)
            if field.dtype is np.int64:
                a = a.astype(np.int64)
        a.flags.writeable = False
        self._array: np.ndarray = a

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> 'FieldMatrix':
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> 'FieldMatrix':
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]]) -> 'FieldMatrix':
        return cls(field, np.array([[int(x) for x in row] for row in rows], dtype=object))

    @classmethod
    def random(cls, field: PrimeField, rows: int, cols: int, rng: np.random.Generator) -> 'FieldMatrix':
        """
        gleichverteilte zufallsmatrix aus einem numpy-generator.
        """
        if field.p <= 2 ** 62:
            a = rng.integers(0, field.p, size=(rows, cols), dtype=np.int64)
        else:
            hi = rng.integers(0, 2 ** 32, size=(rows, cols), dtype=np.int64).astype(object)
            lo = rng.integers(0, 2 ** 32, size=(rows, cols), dtype=np.int64).astype(object)
            a = hi * 2 ** 32 + lo
        return cls(field, a)

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def rows(self) -> int:
        return self._array.shape[0]

    @property
    def cols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def __repr__(self) -> str:
        return f"FieldMatrix({self.rows}x{self.cols} über {self.field})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return matrices_equal(self, other)

    __hash__ = None

    def __getitem__(self, index: Tuple[int, int]) -> FieldElement:
        i, j = index
        return FieldElement(int(self._array[i, j]), self.field)

    def entries(self) -> List[FieldElement]:
        """
        alle einträge zeilenweise als körperelemente.
        """
        return [FieldElement(int(x), self.field) for x in self._array.ravel()]

    def tolist(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self._array]

    def slice(self, axis: Axis, start: int, stop: int) -> 'FieldMatrix':
        """
        zeilen- oder spaltenbereich [start, stop) als neue matrix.
        """
        if Axis(axis) is Axis.ROW:
            return FieldMatrix(self.field, self._array[start:stop, :])
        else:
            return FieldMatrix(self.field, self._array[:, start:stop])

    def extent(self, axis: Axis) -> int:
        return self.rows if Axis(axis) is Axis.ROW else self.cols

    def __add__(self, other: 'FieldMatrix') -> 'FieldMatrix':
        _check_field(self, other)
        if self.shape != other.shape:
            raise DimError(f"formen {self.shape} und {other.shape} passen nicht zusammen")
        return FieldMatrix(self.field, np.mod(self._array + other._array, self.field.p))

    def __matmul__(self, other: 'FieldMatrix') -> 'FieldMatrix':
        return matmul(self, other)


def _check_field(a: FieldMatrix, b: FieldMatrix):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} und {b.field} sind verschiedene körper")


def partition(m: FieldMatrix, axis: Axis, k: int) -> List[FieldMatrix]:
    """
    matrix entlang einer achse in k gleich grosse blöcke zerlegen.

    :param m: matrix
    :param axis: Axis.ROW (zeilenweise) oder Axis.COLUMN (spaltenweise)
    :param k: anzahl blöcke
    :return: blöcke in indexreihenfolge
    :raise PartitionError, wenn die dimension nicht durch k teilbar ist.
    """

    axis = Axis(axis)
    layout = BlockLayout.of(m.extent(axis), axis, k)
    return [m.slice(axis, *layout.bounds(i)) for i in range(k)]


def assemble(blocks: Sequence[FieldMatrix], axis: Axis) -> FieldMatrix:
    """
    blöcke entlang einer achse aneinanderfügen.

    :raise AssemblyError bei leerer liste, verschiedenen körpern
        oder nicht passender form in der anderen dimension.
    """

    axis = Axis(axis)
    blocks = list(blocks)
    if not blocks:
        raise AssemblyError("keine blöcke")

    field = blocks[0].field
    quer = blocks[0].cols if axis is Axis.ROW else blocks[0].rows
    for b in blocks:
        if b.field != field:
            raise AssemblyError(f"blöcke aus {field} und {b.field}")
        if (b.cols if axis is Axis.ROW else b.rows) != quer:
            raise AssemblyError(f"block {b.shape} passt nicht zu {blocks[0].shape}")

    if len(blocks) == 1:
        return blocks[0]
    return FieldMatrix(field, np.concatenate([b.array for b in blocks], axis=axis.numpy_axis))


def matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """
    schnelle exakte multiplikation.

    in int64, wenn das skalarprodukt ohne überlauf summiert werden kann,
    sonst über python-ganzzahlen. das resultat ist in jedem fall identisch mit reference_matmul.

    :raise DimError bei nicht passenden formen.
    """

    _check_field(a, b)
    if a.cols != b.rows:
        raise DimError(f"produkt {a.shape} x {b.shape} nicht definiert")

    if a.field.dot_safe(a.cols):
        c = a.array @ b.array
    else:
        c = a.array.astype(object) @ b.array.astype(object)
    return FieldMatrix(a.field, c)


def reference_matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """
    referenzprodukt mit der dreifachen schleife des lehrbuchs.

    :raise DimError bei nicht passenden formen.
    """

    _check_field(a, b)
    if a.cols != b.rows:
        raise DimError(f"produkt {a.shape} x {b.shape} nicht definiert")

    p = a.field.p
    x = a.tolist()
    y = b.tolist()
    c = [[0] * b.cols for _ in range(a.rows)]
    for i in range(a.rows):
        for j in range(b.cols):
            s = 0
            for k in range(a.cols):
                s += x[i][k] * y[k][j]
            c[i][j] = s % p

    return FieldMatrix(a.field, np.array(c, dtype=object).reshape(a.rows, b.cols))


def linear_combination(field: PrimeField, coefficients: Sequence[int], matrices: Sequence[FieldMatrix]) -> FieldMatrix:
    """
    summe coefficients[i] * matrices[i] über F_p.

    nach jedem summanden wird reduziert, damit int64 nicht überläuft.

    :raise DimError bei leerer liste oder verschiedenen formen.
    """

    if len(coefficients) != len(matrices) or not matrices:
        raise DimError("koeffizienten und matrizen passen nicht zusammen")

    shape = matrices[0].shape
    p = field.p
    acc = np.zeros(shape, dtype=field.dtype)
    for c, m in zip(coefficients, matrices):
        if m.field != field:
            raise FieldMismatch(f"{m.field} statt {field}")
        if m.shape != shape:
            raise DimError(f"form {m.shape} statt {shape}")
        c = int(c) % p
        if c:
            acc = np.mod(acc + np.mod(m.array * c, p), p)

    return FieldMatrix(field, acc)


def matrices_equal(a: FieldMatrix, b: FieldMatrix) -> bool:
    """
    True, wenn form, körper und alle kanonischen einträge übereinstimmen.
    """

    if a.field != b.field or a.shape != b.shape:
        return False
    return bool(np.array_equal(a.array.astype(object), b.array.astype(object)))


def read_matrix(path: os.PathLike) -> FieldMatrix:
    """
    matrix aus einer fixture-datei lesen.

    :raise ValueError bei fehlerhaftem inhalt, OSError bei lesefehlern.
    """

    with open(path, encoding='utf-8') as fp:
        tokens = fp.read().split()

    try:
        rows, cols, p = (int(t) for t in tokens[:3])
        values = [int(t) for t in tokens[3:]]
    except ValueError as e:
        raise ValueError(f"fehlerhafte matrixdatei {path}: {e}")

    if len(values) != rows * cols:
        raise ValueError(f"matrixdatei {path}: {len(values)} einträge statt {rows * cols}")

    return FieldMatrix(PrimeField(p), np.array(values, dtype=object).reshape(rows, cols))


def write_matrix(path: os.PathLike, m: FieldMatrix):
    lines = [f"{m.rows} {m.cols} {m.field.p}"]
    lines.extend(" ".join(str(x) for x in row) for row in m.tolist())
    with open(path, "w", encoding='utf-8') as fp:
        fp.write("\n".join(lines) + "\n")
