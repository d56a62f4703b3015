"""Exact scalars and sparse matrices over Q and F_p.

Matrices are stored column-wise as ``{row: value}`` dictionaries holding only
nonzero entries.  Rationals are ``gmpy2.mpq``; prime field elements are plain
``int`` reduced into ``[0, p)``.  Every algorithm here is exact.

Elimination uses column reduction with the *first nonzero row* as pivot and
processes columns in index order, so bases, pivots and complements are fully
deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

__all__ = [
    "FieldSpec",
    "QQ",
    "GF",
    "Matrix",
    "Subspace",
    "Infeasible",
    "rank",
    "kernel_basis",
    "kernel_and_pivots",
    "solve",
    "quotient_structure",
    "column_space",
    "is_prime",
    "extend_basis",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``kind="Q"``) or a prime field (``kind="Fp"``)."""

    kind: str = "Q"
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "Q":
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == "Fp":
            if not is_prime(self.characteristic):
                raise ValueError(f"characteristic {self.characteristic} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def zero(self):
        return gmpy2.mpq(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return gmpy2.mpq(1) if self.kind == "Q" else 1

    def __call__(self, x):
        """Coerce an int, Fraction, mpq or string ("3/4", "-2") into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "Q":
            if isinstance(x, Fraction):
                return gmpy2.mpq(x.numerator, x.denominator)
            return gmpy2.mpq(x)
        p = self.characteristic
        if isinstance(x, (Fraction, type(gmpy2.mpq()))):
            num, den = int(x.numerator), int(x.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        return int(x) % p

    def inv(self, x):
        if self.kind == "Q":
            return 1 / x
        return pow(int(x), -1, self.characteristic)

    def fmt(self, x) -> str:
        if self.kind == "Q":
            x = gmpy2.mpq(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def describe(self) -> str:
        return "Q" if self.kind == "Q" else f"F_{self.characteristic}"

    def to_json(self) -> dict:
        if self.kind == "Q":
            return {"type": "Q"}
        return {"type": "Fp", "p": self.characteristic}


QQ = FieldSpec("Q")


def GF(p: int) -> FieldSpec:
    return FieldSpec("Fp", p)


def _axpy(field: FieldSpec, y: dict, a, x: dict) -> None:
    """y += a * x in place, dropping zeros."""
    if field.kind == "Q":
        for r, v in x.items():
            w = y.get(r)
            w = a * v if w is None else w + a * v
            if w:
                y[r] = w
            else:
                y.pop(r, None)
    else:
        p = field.characteristic
        for r, v in x.items():
            w = (y.get(r, 0) + a * v) % p
            if w:
                y[r] = w
            else:
                y.pop(r, None)


def _scaled(field: FieldSpec, a, x: dict) -> dict:
    if field.kind == "Q":
        return {r: a * v for r, v in x.items()}
    p = field.characteristic
    out = {}
    for r, v in x.items():
        w = a * v % p
        if w:
            out[r] = w
    return out


class Matrix:
    """Immutable sparse matrix over a :class:`FieldSpec`.

    ``cols[j]`` maps row index to a nonzero entry.  Callers must not mutate
    the dictionaries of a constructed matrix.
    """

    __slots__ = ("field", "nrows", "ncols", "cols")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, cols: Sequence[dict] | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        elif len(cols) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(cols)}")
        self.cols = tuple(cols)

    # -- construction -----------------------------------------------------
    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        one = field.one
        return cls(field, n, n, [{j: one} for j in range(n)])

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = [list(r) for r in rows]
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
            for j, x in enumerate(row):
                v = field(x)
                if v:
                    cols[j][i] = v
        return cls(field, nrows, ncols, cols)

    @classmethod
    def from_columns(cls, field, nrows, columns: Iterable[dict]):
        cols = []
        for c in columns:
            clean = {}
            for r, v in c.items():
                if not 0 <= r < nrows:
                    raise IndexError(f"row {r} out of range for {nrows} rows")
                v = field(v) if not _is_element(field, v) else v
                if v:
                    clean[r] = v
            cols.append(clean)
        return cls(field, nrows, len(cols), cols)

    @classmethod
    def scalar(cls, field, n, c):
        c = field(c)
        if not c:
            return cls(field, n, n)
        return cls(field, n, n, [{j: c} for j in range(n)])

    # -- inspection -------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def entry(self, i, j):
        return self.cols[j].get(i, self.field.zero)

    def to_rows(self) -> list[list]:
        out = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def to_strings(self) -> list[list[str]]:
        return [[self.field.fmt(x) for x in row] for row in self.to_rows()]

    def __repr__(self):
        return f"Matrix({self.field.describe()}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def first_difference(self, other: "Matrix"):
        """(row, col) of the first differing entry in column-major order, or None."""
        self._check_same_shape(other)
        for j in range(self.ncols):
            a, b = self.cols[j], other.cols[j]
            if a != b:
                rows = sorted(set(a) | set(b))
                for i in rows:
                    if a.get(i) != b.get(i):
                        return (i, j)
        return None

    def first_nonzero(self):
        for j, c in enumerate(self.cols):
            if c:
                return (min(c), j)
        return None

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    __hash__ = None

    # -- arithmetic -------------------------------------------------------
    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        one = self.field.one
        cols = []
        for a, b in zip(self.cols, other.cols):
            if not b:
                cols.append(a)
            elif not a:
                cols.append(b)
            else:
                c = dict(a)
                _axpy(self.field, c, one, b)
                cols.append(c)
        return Matrix(self.field, self.nrows, self.ncols, cols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        m1 = self.field(-1)
        cols = []
        for a, b in zip(self.cols, other.cols):
            if not b:
                cols.append(a)
            else:
                c = dict(a)
                _axpy(self.field, c, m1, b)
                cols.append(c)
        return Matrix(self.field, self.nrows, self.ncols, cols)

    def scale(self, c) -> "Matrix":
        c = self.field(c) if not _is_element(self.field, c) else c
        if not c:
            return Matrix(self.field, self.nrows, self.ncols)
        return Matrix(self.field, self.nrows, self.ncols, [_scaled(self.field, c, col) for col in self.cols])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        f = self.field
        acols = self.cols
        cols = []
        if f.kind == "Q":
            for bc in other.cols:
                acc: dict = {}
                for k, bv in bc.items():
                    for r, av in acols[k].items():
                        w = acc.get(r)
                        acc[r] = av * bv if w is None else w + av * bv
                cols.append({r: v for r, v in acc.items() if v})
        else:
            p = f.characteristic
            for bc in other.cols:
                acc = {}
                for k, bv in bc.items():
                    for r, av in acols[k].items():
                        acc[r] = acc.get(r, 0) + av * bv
                cols.append({r: v % p for r, v in acc.items() if v % p})
        return Matrix(f, self.nrows, other.ncols, cols)

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector ``{index: value}``."""
        out: dict = {}
        for k, x in vec.items():
            _axpy(self.field, out, x, self.cols[k])
        return out

    def power(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k > 0:
            if k & 1:
                result = base @ result
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "Matrix":
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return Matrix(self.field, self.ncols, self.nrows, cols)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, left factor slowest (row-major tensor bases)."""
        f = self.field
        cols = []
        for ca in self.cols:
            for cb in other.cols:
                col = {}
                for i, a in ca.items():
                    base = i * other.nrows
                    for k, b in cb.items():
                        v = a * b if f.kind == "Q" else a * b % f.characteristic
                        if v:
                            col[base + k] = v
                cols.append(col)
        return Matrix(f, self.nrows * other.nrows, self.ncols * other.ncols, cols)

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self.nrows, len(idx), [self.cols[j] for j in idx])

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        pos = {r: k for k, r in enumerate(idx)}
        cols = [{pos[r]: v for r, v in c.items() if r in pos} for c in self.cols]
        return Matrix(self.field, len(idx), self.ncols, cols)

    @staticmethod
    def hstack(field, nrows, blocks: Sequence["Matrix"]) -> "Matrix":
        cols = []
        for b in blocks:
            if b.nrows != nrows:
                raise ValueError("hstack row mismatch")
            cols.extend(b.cols)
        return Matrix(field, nrows, len(cols), cols)

    @staticmethod
    def block(field, row_dims: Sequence[int], col_dims: Sequence[int], blocks: dict) -> "Matrix":
        """Assemble from ``{(i, j): Matrix}``; missing blocks are zero."""
        roff = [0]
        for d in row_dims:
            roff.append(roff[-1] + d)
        cols = []
        for j, cd in enumerate(col_dims):
            parts = [(i, blocks[(i, j)]) for i in range(len(row_dims)) if (i, j) in blocks]
            for i, b in parts:
                if b.shape != (row_dims[i], cd):
                    raise ValueError(f"block ({i},{j}) has shape {b.shape}, expected {(row_dims[i], cd)}")
            for c in range(cd):
                col = {}
                for i, b in parts:
                    off = roff[i]
                    for r, v in b.cols[c].items():
                        col[off + r] = v
                cols.append(col)
        return Matrix(field, roff[-1], sum(col_dims), cols)


def _is_element(field, v) -> bool:
    if field.kind == "Q":
        return type(v) is type(gmpy2.mpq())
    return type(v) is int and 0 <= v < field.characteristic


# ---------------------------------------------------------------------------
# elimination


class _Reducer:
    """Incremental column reduction with optional combination tracking.

    Each stored pivot column has pivot entry 1 at its first nonzero row.
    With ``track=True`` every pivot also remembers which combination of the
    original input columns produced it.
    """

    def __init__(self, field: FieldSpec, track: bool = False):
        self.field = field
        self.track = track
        self.pivots: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}

    def reduce(self, col: dict, combo: dict | None = None):
        """Reduce ``col`` against the pivots; returns (residual, combo)."""
        f = self.field
        col = dict(col)
        pivots = self.pivots
        while col:
            r = min(col)
            piv = pivots.get(r)
            if piv is None:
                break
            c = col[r]
            neg = -c if f.kind == "Q" else (-c) % f.characteristic
            _axpy(f, col, neg, piv)
            if combo is not None:
                _axpy(f, combo, neg, self.combos[r])
        return col, combo

    def add(self, col: dict, combo: dict | None = None):
        """Reduce and, if nonzero, store as a new pivot. Returns pivot row or None."""
        col, combo = self.reduce(col, combo)
        if not col:
            return None, combo
        r = min(col)
        inv = self.field.inv(col[r])
        self.pivots[r] = _scaled(self.field, inv, col)
        if combo is not None:
            self.combos[r] = _scaled(self.field, inv, combo)
        return r, None

    def rank(self):
        return len(self.pivots)


def rank(m: Matrix) -> int:
    """Dimension of the column space, computed exactly."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    # reduce along the shorter side
    if m.ncols > m.nrows:
        m = m.T
    red = _Reducer(m.field)
    for c in m.cols:
        if c:
            red.add(c)
            if red.rank() == m.nrows:
                break
    return red.rank()


@dataclass(frozen=True)
class Subspace:
    """Span of linearly independent sparse column vectors in ``field^ambient_dim``."""

    field: FieldSpec
    ambient_dim: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.ambient_dim, len(self.basis), list(self.basis))

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, ())

    @classmethod
    def whole(cls, field, n):
        return cls(field, n, tuple({i: field.one} for i in range(n)))


def column_space(m: Matrix) -> Subspace:
    """Deterministic echelon basis of the column space."""
    red = _Reducer(m.field)
    for c in m.cols:
        if c:
            red.add(c)
    basis = tuple(red.pivots[r] for r in sorted(red.pivots))
    return Subspace(m.field, m.nrows, basis)


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of ``{v : m v = 0}``; one vector per non-pivot column."""
    return kernel_and_pivots(m)[0]


def kernel_and_pivots(m: Matrix):
    """Kernel basis plus the pivot column indices.

    The kernel vector for a non-pivot column j is e_j plus entries at pivot
    columns only, so the standard vectors at the pivot columns span a
    complement of the kernel.
    """
    f = m.field
    red = _Reducer(f, track=True)
    basis, pivots = [], []
    for j, c in enumerate(m.cols):
        r, leftover = red.add(c, {j: f.one})
        if r is None:
            basis.append(leftover)
        else:
            pivots.append(j)
    return Subspace(f, m.ncols, tuple(basis)), pivots


class Infeasible:
    """Marker returned by :func:`solve` when some target is not in the image."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def __repr__(self):
        return f"Infeasible(target={self.index})"

    def __bool__(self):
        return False


def solve(m: Matrix, targets: Sequence[dict]):
    """Exact preimages ``x`` with ``m x = t`` for every target, or :class:`Infeasible`.

    Targets and solutions are sparse ``{index: value}`` vectors.
    """
    f = m.field
    red = _Reducer(f, track=True)
    for j, c in enumerate(m.cols):
        if c:
            red.add(c, {j: f.one})
    out = []
    for k, t in enumerate(targets):
        if any(not 0 <= r < m.nrows for r in t):
            raise IndexError("target length does not match matrix rows")
        residual, combo = red.reduce(t, {})
        if residual:
            return Infeasible(k)
        out.append(_scaled(f, f(-1), combo))
    return out


def solve_matrix(m: Matrix, rhs: Matrix):
    """Matrix form of :func:`solve`: X with m X = rhs, or Infeasible."""
    sol = solve(m, rhs.cols)
    if isinstance(sol, Infeasible):
        return sol
    return Matrix(m.field, m.ncols, rhs.ncols, sol)


def quotient_structure(ambient_dim: int, sub: Subspace):
    """Projection ``ambient -> ambient/sub`` and a section of it.

    The complement is spanned by the standard vectors at non-pivot rows of
    the reduced basis of ``sub`` (greedy pivot complement).
    """
    if sub.ambient_dim != ambient_dim:
        raise ValueError("subspace lives in a different ambient space")
    f = sub.field
    red = _Reducer(f)
    for v in sub.basis:
        r, _ = red.add(v)
        if r is None:
            raise ValueError("subspace basis is linearly dependent")
    # fully reduce: clear every pivot row from every other pivot column
    order = sorted(red.pivots, reverse=True)
    full: dict[int, dict] = {}
    for r in order:
        col = dict(red.pivots[r])
        for r2 in [x for x in col if x != r and x in full]:
            c = col.get(r2)
            if c:
                neg = -c if f.kind == "Q" else (-c) % f.characteristic
                _axpy(f, col, neg, full[r2])
        full[r] = col
    free = [i for i in range(ambient_dim) if i not in full]
    pos = {r: k for k, r in enumerate(free)}
    one = f.one
    proj_cols = []
    for j in range(ambient_dim):
        if j in pos:
            proj_cols.append({pos[j]: one})
        else:
            # e_j == -(rest of pivot column j) modulo sub
            col = {}
            for r, v in full[j].items():
                if r != j:
                    w = -v if f.kind == "Q" else (-v) % f.characteristic
                    col[pos[r]] = w
            proj_cols.append(col)
    projection = Matrix(f, len(free), ambient_dim, proj_cols)
    section = Matrix(f, ambient_dim, len(free), [{r: one} for r in free])
    return projection, section


def extend_basis(base: Matrix, candidates: Matrix) -> list[int]:
    """Indices of candidate columns that extend ``span(base)``, chosen greedily in order."""
    red = _Reducer(base.field)
    for c in base.cols:
        if c:
            red.add(c)
    chosen = []
    for j, c in enumerate(candidates.cols):
        r, _ = red.add(c)
        if r is not None:
            chosen.append(j)
    return chosen
