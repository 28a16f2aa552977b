"""
Exact linear algebra over prime fields F_p.

Matrices are dense numpy int64 arrays reduced mod p. Everything handled here is small
(a few hundred rows at most), so Gaussian elimination is the algorithm of record. The
pivot in each column is the first nonzero entry in scan order, which makes every basis
produced below reproducible across runs and platforms.

Vectors are columns: a Subspace of F_p^n keeps its basis as the columns of an n x k
matrix, and linear maps act by left multiplication.
"""

import logging
from functools import lru_cache
from typing import Any, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from .errors import AmbientMismatchError, PrimeMismatchError, ShapeMismatchError
from .model.util import ArbitraryTypeMixin

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def check_prime(p: Any) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or not isprime(int(p)):
        raise ValueError(f"{p!r} is not a prime")
    return int(p)


def same_prime(*things: Any) -> int:
    """Return the common modulus of FpMatrix/Subspace/complex-like objects."""

    primes = {thing.p for thing in things}
    if len(primes) != 1:
        raise PrimeMismatchError(f"objects over different primes: {sorted(primes)}")
    return primes.pop()


# #### Matrices


class FpMatrix(ArbitraryTypeMixin):
    """
    An immutable rows x cols matrix over F_p.

    FpMatrix(p, array) copies `array` (anything numpy accepts as a 2-d integer array)
    and reduces it mod p. Use from_rows() for nested lists that may have no rows.
    """

    __slots__ = ("p", "_array", "_reduction")

    def __init__(self, p: int, array: Any):
        arr = np.array(array, dtype=np.int64)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"FpMatrix needs a 2-d array, got shape {arr.shape}")
        self._setup(check_prime(p), arr % p)

    def _setup(self, p: int, arr: np.ndarray) -> None:
        arr.flags.writeable = False
        self.p = p
        self._array = arr
        self._reduction: Optional["RowReduction"] = None

    @classmethod
    def _wrap(cls, p: int, arr: np.ndarray) -> "FpMatrix":
        # Internal constructor: `arr` is already a fresh, reduced int64 array.
        m = cls.__new__(cls)
        m._setup(p, arr)
        return m

    @classmethod
    def coerce(cls, v):
        # {"p": 2, "rows": 1, "cols": 2, "entries": [1, 1]} as in documents and reports.
        if isinstance(v, dict) and {"p", "rows", "cols", "entries"} <= set(v):
            rows, cols = int(v["rows"]), int(v["cols"])
            entries = list(v["entries"])
            if len(entries) != rows * cols:
                raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
            for entry in entries:
                if not 0 <= int(entry) < int(v["p"]):
                    raise ValueError(f"entry {entry} is not a residue mod {v['p']}")
            return cls(v["p"], np.array(entries, dtype=np.int64).reshape(rows, cols))
        return super().coerce(v)

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "FpMatrix":
        if not rows:
            return cls.zeros(p, 0, cols or 0)
        arr = np.array([list(row) for row in rows], dtype=np.int64)
        if cols is not None and arr.shape[1] != cols:
            raise ShapeMismatchError(f"expected {cols} columns, got {arr.shape[1]}")
        return cls(p, arr)

    @classmethod
    def from_columns(cls, p: int, columns: Sequence[Sequence[int]], rows: int) -> "FpMatrix":
        if not columns:
            return cls.zeros(p, rows, 0)
        return cls(p, np.array([list(c) for c in columns], dtype=np.int64).T.reshape(rows, len(columns)))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls._wrap(check_prime(p), np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls._wrap(check_prime(p), np.eye(n, dtype=np.int64))

    @classmethod
    def hstack(cls, p: int, rows: int, blocks: Sequence["FpMatrix"]) -> "FpMatrix":
        for block in blocks:
            if block.p != p or block.rows != rows:
                raise ShapeMismatchError(f"cannot hstack {block.shape} block onto {rows} rows over F_{p}")
        if not blocks:
            return cls.zeros(p, rows, 0)
        return cls._wrap(p, np.hstack([b._array for b in blocks]).astype(np.int64))

    @classmethod
    def vstack(cls, p: int, cols: int, blocks: Sequence["FpMatrix"]) -> "FpMatrix":
        for block in blocks:
            if block.p != p or block.cols != cols:
                raise ShapeMismatchError(f"cannot vstack {block.shape} block onto {cols} columns over F_{p}")
        if not blocks:
            return cls.zeros(p, 0, cols)
        return cls._wrap(p, np.vstack([b._array for b in blocks]).astype(np.int64))

    @classmethod
    def block(cls, p: int, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: dict) -> "FpMatrix":
        """
        Assemble a block matrix. `blocks` maps (block_row, block_col) to an FpMatrix of
        the matching size; missing blocks are zero.
        """

        arr = np.zeros((sum(row_sizes), sum(col_sizes)), dtype=np.int64)
        row_offsets = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
        col_offsets = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
        for (i, j), m in blocks.items():
            if m.p != p or m.shape != (row_sizes[i], col_sizes[j]):
                expected = (row_sizes[i], col_sizes[j])
                raise ShapeMismatchError(f"block {(i, j)} has shape {m.shape}, expected {expected}")
            arr[row_offsets[i] : row_offsets[i + 1], col_offsets[j] : col_offsets[j + 1]] = m._array
        return cls._wrap(p, arr)

    # #### Accessors

    @property
    def rows(self) -> int:
        return int(self._array.shape[0])

    @property
    def cols(self) -> int:
        return int(self._array.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._array

    @property
    def entries(self) -> Tuple[int, ...]:
        """Residues in row-major order."""
        return tuple(int(x) for x in self._array.reshape(-1))

    def to_rows(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self._array]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self._array[:, j])

    def columns(self) -> List[Tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not self._array.any()

    # #### Arithmetic

    def _check(self, other: "FpMatrix") -> None:
        if not isinstance(other, FpMatrix):
            raise TypeError(f"FpMatrix expected, got {type(other).__name__}")
        if other.p != self.p:
            raise PrimeMismatchError(f"F_{self.p} matrix combined with F_{other.p} matrix")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeMismatchError(f"cannot compose {self.shape} with {other.shape}")
        return FpMatrix._wrap(self.p, (self._array @ other._array) % self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix._wrap(self.p, (self._array + other._array) % self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"cannot subtract {other.shape} from {self.shape}")
        return FpMatrix._wrap(self.p, (self._array - other._array) % self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix._wrap(self.p, (-self._array) % self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix._wrap(self.p, (self._array * (c % self.p)) % self.p)

    @property
    def T(self) -> "FpMatrix":  # noqa: N802
        return FpMatrix._wrap(self.p, self._array.T.copy())

    def kron(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix._wrap(self.p, np.kron(self._array, other._array) % self.p)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FpMatrix":
        arr = self._array[np.ix_(list(rows), list(cols))] if len(rows) and len(cols) else None
        if arr is None:
            return FpMatrix.zeros(self.p, len(rows), len(cols))
        return FpMatrix._wrap(self.p, arr.copy())

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        v = np.array(list(vector), dtype=np.int64).reshape(-1)
        if v.shape[0] != self.cols:
            raise ShapeMismatchError(f"{self.shape} matrix applied to a vector of length {v.shape[0]}")
        return tuple(int(x) for x in (self._array @ v) % self.p)

    # #### Reduction (memoized; the matrix is immutable)

    def reduction(self) -> "RowReduction":
        if self._reduction is None:
            self._reduction = _row_reduce(self)
        return self._reduction

    # #### Python protocol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self._array, other._array))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self._array.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols}, {self.to_rows()})"


class RowReduction(NamedTuple):
    """transform @ matrix == rref; pivots are the pivot columns of rref, in order."""

    rref: FpMatrix
    transform: FpMatrix
    pivots: Tuple[int, ...]


def _row_reduce(m: FpMatrix) -> RowReduction:
    p = m.p
    a = m.array.copy()
    rows, cols = a.shape
    t = np.eye(rows, dtype=np.int64)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
            t[[r, k]] = t[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        t[r] = (t[r] * inv) % p
        factors = a[:, c].copy()
        factors[r] = 0
        targets = np.nonzero(factors)[0]
        if targets.size:
            a[targets] = (a[targets] - np.outer(factors[targets], a[r])) % p
            t[targets] = (t[targets] - np.outer(factors[targets], t[r])) % p
        pivots.append(c)
        r += 1
    return RowReduction(FpMatrix._wrap(p, a), FpMatrix._wrap(p, t), tuple(pivots))


def row_reduce(m: FpMatrix) -> RowReduction:
    return m.reduction()


def compose(m: FpMatrix, n: FpMatrix) -> FpMatrix:
    """m after n."""
    return m @ n


def rank(m: FpMatrix) -> int:
    return len(m.reduction().pivots)


def kernel(m: FpMatrix) -> "Subspace":
    """Basis of {v : m v = 0}, one vector per non-pivot column of the reduced form."""

    p = m.p
    rref, _, pivots = m.reduction()
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = np.zeros((m.cols, len(free)), dtype=np.int64)
    r = rref.array
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(pivots):
            basis[c, k] = (-r[i, f]) % p
    return Subspace._trusted(p, m.cols, FpMatrix._wrap(p, basis))


def image(m: FpMatrix) -> "Subspace":
    """The pivot columns of m itself form a basis of its column span."""

    pivots = m.reduction().pivots
    return Subspace._trusted(m.p, m.rows, m.submatrix(range(m.rows), pivots))


def inverse(m: FpMatrix) -> FpMatrix:
    if m.rows != m.cols or rank(m) != m.rows:
        raise ShapeMismatchError(f"{m.shape} matrix is not invertible over F_{m.p}")
    return m.reduction().transform


def left_inverse(m: FpMatrix) -> FpMatrix:
    """For m of full column rank k, a k x rows matrix L with L @ m = identity."""

    rref, transform, pivots = m.reduction()
    if len(pivots) != m.cols:
        raise ShapeMismatchError(f"{m.shape} matrix does not have full column rank over F_{m.p}")
    return transform.submatrix(range(m.cols), range(m.rows))


# #### Subspaces


class Subspace(ArbitraryTypeMixin):
    """
    A subspace of F_p^ambient_dim, stored as a matrix whose columns are a basis.

    The constructor checks linear independence; use span() for arbitrary generators.
    """

    __slots__ = ("p", "ambient_dim", "_basis", "_left_inverse", "_annihilator")

    def __init__(self, p: int, ambient_dim: int, basis: FpMatrix):
        if basis.p != p or basis.rows != ambient_dim:
            raise AmbientMismatchError(f"basis of shape {basis.shape} does not live in F_{p}^{ambient_dim}")
        if rank(basis) != basis.cols:
            raise ValueError("subspace basis vectors are linearly dependent")
        self._setup(check_prime(p), ambient_dim, basis)

    def _setup(self, p: int, ambient_dim: int, basis: FpMatrix) -> None:
        self.p = p
        self.ambient_dim = ambient_dim
        self._basis = basis
        self._left_inverse: Optional[FpMatrix] = None
        self._annihilator: Optional[FpMatrix] = None

    @classmethod
    def _trusted(cls, p: int, ambient_dim: int, basis: FpMatrix) -> "Subspace":
        s = cls.__new__(cls)
        s._setup(p, ambient_dim, basis)
        return s

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls._trusted(check_prime(p), ambient_dim, FpMatrix.zeros(p, ambient_dim, 0))

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls._trusted(check_prime(p), ambient_dim, FpMatrix.identity(p, ambient_dim))

    @classmethod
    def span(cls, p: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        return image(FpMatrix.from_columns(p, list(vectors), ambient_dim))

    @property
    def basis(self) -> FpMatrix:
        return self._basis

    @property
    def dim(self) -> int:
        return self._basis.cols

    def vectors(self) -> List[Tuple[int, ...]]:
        return self._basis.columns()

    def _check(self, other: "Subspace") -> None:
        same_prime(self, other)
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatchError(f"subspaces of F^{self.ambient_dim} and F^{other.ambient_dim}")

    def coordinates(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Coordinates of `vector` in this basis; raises if the vector is not in the subspace."""

        if self._left_inverse is None:
            self._left_inverse = left_inverse(self._basis)
        coords = self._left_inverse.apply(vector)
        if self._basis.apply(coords) != tuple(int(x) % self.p for x in vector):
            raise ValueError("vector is not in the subspace")
        return coords

    def coordinate_matrix(self, vectors: FpMatrix) -> FpMatrix:
        """Coordinates of the columns of `vectors`, which must lie in the subspace."""

        if self._left_inverse is None:
            self._left_inverse = left_inverse(self._basis)
        coords = self._left_inverse @ vectors
        if self._basis @ coords != vectors:
            raise ValueError("columns do not lie in the subspace")
        return coords

    def annihilator(self) -> FpMatrix:
        """Rows spanning the annihilator: x is in the subspace iff annihilator() @ x == 0."""

        if self._annihilator is None:
            self._annihilator = kernel(self._basis.T).basis.T
        return self._annihilator

    def contains(self, vector: Sequence[int]) -> bool:
        return not any(self.annihilator().apply(vector))

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return (self.annihilator() @ other.basis).is_zero()

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return image(FpMatrix.hstack(self.p, self.ambient_dim, [self._basis, other.basis]))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.p, self.ambient_dim)
        # (x, y) with A x = B y
        k = kernel(FpMatrix.hstack(self.p, self.ambient_dim, [self._basis, -other.basis]))
        top = k.basis.submatrix(range(self.dim), range(k.dim))
        return image(self._basis @ top)

    def image_under(self, m: FpMatrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise AmbientMismatchError(f"{m.shape} matrix applied to a subspace of F^{self.ambient_dim}")
        return image(m @ self._basis)

    def preimage(self, m: FpMatrix, target: "Subspace") -> "Subspace":
        """{x in self : m x in target}."""

        if m.cols != self.ambient_dim or m.rows != target.ambient_dim:
            raise AmbientMismatchError(f"{m.shape} matrix does not map F^{self.ambient_dim} to F^{target.ambient_dim}")
        k = kernel(target.annihilator() @ m @ self._basis)
        return image(self._basis @ k.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains_subspace(other)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient_dim, self.dim))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient={self.ambient_dim}, basis={self.vectors()})"


class Subquotient:
    """
    A presentation of A/(A ∩ B).

    lift:       ambient x dim matrix; its columns are representatives in A of a basis.
    projection: dim x ambient matrix; for x in A, projection @ x are the coordinates of
                the class of x. It kills A ∩ B. Its values outside A are meaningless.
    """

    __slots__ = ("p", "numerator", "denominator", "lift", "projection")

    def __init__(self, numerator: Subspace, denominator: Subspace, lift: FpMatrix, projection: FpMatrix):
        self.p = numerator.p
        self.numerator = numerator
        self.denominator = denominator
        self.lift = lift
        self.projection = projection

    @property
    def dim(self) -> int:
        return self.lift.cols

    @property
    def ambient_dim(self) -> int:
        return self.numerator.ambient_dim

    def project(self, vector: Sequence[int]) -> Tuple[int, ...]:
        return self.projection.apply(vector)

    def is_zero_class(self, vector: Sequence[int]) -> bool:
        return not any(self.project(vector))

    def __repr__(self) -> str:
        return f"Subquotient(p={self.p}, ambient={self.ambient_dim}, dim={self.dim})"


def subquotient(a: Subspace, b: Subspace) -> Subquotient:
    """Presentation of A/(A ∩ B), with dim = dim A - dim(A ∩ B)."""

    if a.p != b.p:
        raise PrimeMismatchError(f"subspaces over F_{a.p} and F_{b.p}")
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(f"subquotient of F^{a.ambient_dim} by a subspace of F^{b.ambient_dim}")
    p, n = a.p, a.ambient_dim
    common = a.intersection(b)
    k = common.dim

    # Columns of A that stay independent modulo A ∩ B.
    pivots = FpMatrix.hstack(p, n, [common.basis, a.basis]).reduction().pivots
    chosen = [c - k for c in pivots if c >= k]
    lift = a.basis.submatrix(range(n), chosen)

    transform = left_inverse(FpMatrix.hstack(p, n, [common.basis, lift]))
    projection = transform.submatrix(range(k, k + len(chosen)), range(n))
    return Subquotient(a, common, lift, projection)


def induced_map(f: FpMatrix, source: Subquotient, target: Subquotient) -> FpMatrix:
    """Matrix of the map source -> target induced by f, in the two presentations' bases."""

    if f.cols != source.ambient_dim or f.rows != target.ambient_dim:
        raise ShapeMismatchError(f"{f.shape} matrix does not map F^{source.ambient_dim} to F^{target.ambient_dim}")
    return target.projection @ f @ source.lift
