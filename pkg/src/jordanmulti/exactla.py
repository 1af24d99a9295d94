"""Exact rational scalars, dense matrices and subspaces of matrix spaces.

Matrices wrap ``flint.fmpq_mat`` (a complex matrix is a pair of real parts).
Subspaces are stored as the reduced row-echelon form of the row-major
vectorizations of a spanning set, which makes equality a direct comparison.
A complex entry occupies two consecutive real coordinates ``(re, im)``, so
every subspace lives in a real coordinate space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import flint

from .errors import AmbientMismatchError, StructureError
from .modular import independent_rows, modular_echelon, modular_kernel, primitive_rows

Rational = Fraction
fmpq = flint.fmpq
fmpq_mat = flint.fmpq_mat

REAL = "real"
COMPLEX = "complex"


# ----------------------------------------------------------------- scalars

def to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        x = Fraction(x)
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, flint.fmpz):
        return fmpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    q = to_fmpq(q)
    return Fraction(int(q.p), int(q.q))


def rational_str(x) -> str:
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GaussRational:
    """A Gaussian rational ``re + i*im``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @staticmethod
    def coerce(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        return GaussRational(to_fraction(x), Fraction(0))

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRational.coerce(other))

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussRational.coerce(other)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        p = self * o.conjugate()
        return GaussRational(p.re / n, p.im / n)

    def __eq__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        return f"{rational_str(self.re)}{'+' if self.im >= 0 else '-'}{rational_str(abs(self.im))}i"


I_UNIT = GaussRational(0, 1)


# ------------------------------------------------------- fmpq_mat helpers

def _zeros(r: int, c: int) -> fmpq_mat:
    return fmpq_mat(r, c)


def _eye(n: int) -> fmpq_mat:
    m = fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def stack_rows(mats: Sequence[fmpq_mat], ncols: int) -> fmpq_mat:
    entries = []
    nrows = 0
    for m in mats:
        if m.nrows() == 0:
            continue
        if m.ncols() != ncols:
            raise AmbientMismatchError("cannot stack rows of different length")
        entries.extend(m.entries())
        nrows += m.nrows()
    return fmpq_mat(nrows, ncols, entries) if nrows else fmpq_mat(0, ncols)


def _pivots_of(ent, rank: int, ncols: int) -> tuple[int, ...]:
    pivots = []
    for r in range(rank):
        base = r * ncols
        c = pivots[-1] + 1 if pivots else 0
        while ent[base + c] == 0:
            c += 1
        pivots.append(c)
    return tuple(pivots)


MODULAR_HEIGHT = 8   # bits; larger entries go through multi-modular elimination


def _height(ints: list[list[int]]) -> int:
    return max((abs(x).bit_length() for v in ints for x in v), default=0)


def echelon(rows: fmpq_mat) -> tuple[fmpq_mat, tuple[int, ...]]:
    """Nonzero rows of the reduced row-echelon form, and the pivot columns.

    Runs fraction-free elimination on the integer-scaled rows; when the
    entries are large the form is instead reconstructed from its images
    modulo several primes and checked exactly.
    """
    ncols = rows.ncols()
    if rows.nrows() == 0:
        return fmpq_mat(0, ncols), ()
    ints = primitive_rows(rows)
    ints = [v for v in ints if any(v)]
    if not ints:
        return fmpq_mat(0, ncols), ()
    if _height(ints) > MODULAR_HEIGHT and len(ints) * ncols > 64:
        return modular_echelon(flint.fmpz_mat(ints))
    reduced, den, rank = flint.fmpz_mat(ints).rref()
    if rank == 0:
        return fmpq_mat(0, ncols), ()
    ent = reduced.entries()[: rank * ncols]
    d = fmpq(den)
    out = fmpq_mat(rank, ncols, [fmpq(x) / d for x in ent])
    return out, _pivots_of(ent, rank, ncols)


class ModularSpan:
    """Greedy independent subset of integer rows, decided modulo a large prime.

    Rows independent modulo the prime are independent over the rationals, so
    the accepted rows are always a genuine basis of their span; a dependence
    mod p could only make the span too small, which callers rule out by an
    exact closure check afterwards.
    """

    PRIME = 2 ** 61 - 1

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self._red: list[list[int]] = []   # rref mod p of accepted rows
        self._piv: list[int] = []

    def __len__(self):
        return len(self.rows)

    def add(self, cand: list[list[int]]) -> list[int]:
        """Accept candidates independent of everything so far; return their indices."""
        if not cand:
            return []
        P = self.PRIME
        k = len(self._red)
        cols = self._red + [[x % P for x in v] for v in cand]
        M = flint.nmod_mat(len(cols), self.ncols, [x for v in cols for x in v], P).transpose()
        red, rank = M.rref()
        if rank == k:
            return []
        ent = red.entries()
        w = len(cols)
        piv = _pivots_of([int(x) for x in ent], rank, w)
        accepted = [c - k for c in piv if c >= k]
        for i in accepted:
            self.rows.append(cand[i])
        mod = flint.nmod_mat(len(self.rows), self.ncols, [x % P for v in self.rows for x in v], P)
        red2, r2 = mod.rref()
        e2 = red2.entries()
        self._red = [[int(x) for x in e2[i * self.ncols:(i + 1) * self.ncols]] for i in range(r2)]
        return accepted

    def exact_basis(self) -> tuple[fmpq_mat, tuple[int, ...]]:
        if not self.rows:
            return fmpq_mat(0, self.ncols), ()
        return echelon(fmpq_mat(flint.fmpz_mat(self.rows)))


def select_columns(m: fmpq_mat, cols: Sequence[int]) -> fmpq_mat:
    n = m.ncols()
    ent = m.entries()
    out = [ent[r * n + c] for r in range(m.nrows()) for c in cols]
    return fmpq_mat(m.nrows(), len(cols), out)


def residual(basis: fmpq_mat, pivots: Sequence[int], rows: fmpq_mat) -> fmpq_mat:
    """``rows`` minus their projection onto ``basis`` along the pivot coordinates."""
    if basis.nrows() == 0 or rows.nrows() == 0:
        return rows
    return rows - select_columns(rows, pivots) * basis


def nonzero_row_indices(m: fmpq_mat) -> list[int]:
    n = m.ncols()
    ent = m.entries()
    out = []
    for r in range(m.nrows()):
        if any(ent[r * n:(r + 1) * n]):
            out.append(r)
    return out


def row_slice(m: fmpq_mat, start: int, stop: int) -> fmpq_mat:
    n = m.ncols()
    return fmpq_mat(stop - start, n, m.entries()[start * n: stop * n])


def nullspace_rows(system: fmpq_mat) -> fmpq_mat:
    """Basis (as rows, in rref) of ``{x : system * x = 0}``."""
    n = system.ncols()
    ints = [v for v in primitive_rows(system) if any(v)]
    if ints and _height(ints) > MODULAR_HEIGHT:
        return modular_kernel(flint.fmpz_mat(ints))
    red, piv = echelon(system)
    pivset = set(piv)
    free = [c for c in range(n) if c not in pivset]
    ent = red.entries()
    out = []
    for f in free:
        v = [fmpq(0)] * n
        v[f] = fmpq(1)
        for r, c in enumerate(piv):
            v[c] = -ent[r * n + f]
        out.extend(v)
    if not free:
        return fmpq_mat(0, n)
    return echelon(fmpq_mat(len(free), n, out))[0]


def saturate(start: fmpq_mat, expand: Callable[[fmpq_mat, fmpq_mat], fmpq_mat]) -> tuple[fmpq_mat, tuple[int, ...]]:
    """Smallest subspace containing ``start`` and closed under ``expand``.

    ``expand(frontier, basis)`` returns rows that must lie in the subspace
    whenever ``frontier`` and ``basis`` do; it must be linear in ``frontier``.
    Growth is driven by modular independence tests; the result is then checked
    exactly by expanding the whole reduced basis, and growth resumes from any
    row that escapes.
    """
    n = start.ncols()
    span = ModularSpan(n)
    span.add(primitive_rows(start))
    frontier = list(span.rows)
    while True:
        while frontier:
            basis_int = fmpq_mat(flint.fmpz_mat(span.rows))
            cand = expand(fmpq_mat(flint.fmpz_mat(frontier)), basis_int)
            crows = primitive_rows(cand)
            acc = span.add(crows)
            frontier = [crows[i] for i in acc]
        basis, piv = span.exact_basis()
        check = expand(basis, basis)
        res = residual(basis, piv, check)
        bad = nonzero_row_indices(res)
        if not bad:
            return basis, piv
        crows = primitive_rows(fmpq_mat(len(bad), n, [x for i in bad for x in res.entries()[i * n:(i + 1) * n]]))
        acc = span.add(crows)
        if not acc:
            raise ArithmeticError("modular span failed to grow on an exact escape")
        frontier = [crows[i] for i in acc]


# ------------------------------------------------------------------ matrix

def _parse_entry(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, dict):
        return GaussRational(Fraction(x.get("re", "0")), Fraction(x.get("im", "0")))
    return to_fraction(Fraction(x) if isinstance(x, str) else x)


class Mat:
    """Immutable dense matrix over the rationals or the Gaussian rationals."""

    __slots__ = ("_re", "_im")

    def __init__(self, re: fmpq_mat, im: fmpq_mat | None = None):
        self._re = re
        self._im = im

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows, ring: str | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        if any(len(r) != nc for r in rows):
            raise AmbientMismatchError("ragged matrix rows")
        parsed = [[_parse_entry(x) for x in r] for r in rows]
        is_c = ring == COMPLEX or (ring is None and any(isinstance(x, GaussRational) for r in parsed for x in r))
        if ring == REAL and any(isinstance(x, GaussRational) and x.im for r in parsed for x in r):
            raise StructureError("complex entry in a real matrix")
        re = fmpq_mat(nr, nc, [to_fmpq(x.re if isinstance(x, GaussRational) else x) for r in parsed for x in r])
        if not is_c:
            return cls(re)
        im = fmpq_mat(nr, nc, [to_fmpq(x.im if isinstance(x, GaussRational) else 0) for r in parsed for x in r])
        return cls(re, im)

    @classmethod
    def identity(cls, n: int, ring: str = REAL) -> "Mat":
        return cls(_eye(n), _zeros(n, n) if ring == COMPLEX else None)

    @classmethod
    def zeros(cls, r: int, c: int | None = None, ring: str = REAL) -> "Mat":
        c = r if c is None else c
        return cls(_zeros(r, c), _zeros(r, c) if ring == COMPLEX else None)

    @classmethod
    def diag(cls, values) -> "Mat":
        values = list(values)
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows)

    @classmethod
    def unit(cls, n: int, i: int, j: int, m: int | None = None) -> "Mat":
        e = _zeros(n, n if m is None else m)
        e[i, j] = 1
        return cls(e)

    @classmethod
    def from_vec(cls, vec, rows: int, cols: int, ring: str = REAL) -> "Mat":
        vec = [to_fmpq(x) for x in vec]
        if ring == REAL:
            return cls(fmpq_mat(rows, cols, vec))
        return cls(fmpq_mat(rows, cols, vec[0::2]), fmpq_mat(rows, cols, vec[1::2]))

    @classmethod
    def blocks(cls, grid) -> "Mat":
        """Assemble a block matrix; ``None`` or ``0`` entries are zero blocks."""
        grid = [list(r) for r in grid]
        heights = []
        for r in grid:
            h = {b.rows for b in r if isinstance(b, Mat)}
            if len(h) != 1:
                raise AmbientMismatchError("inconsistent block heights")
            heights.append(h.pop())
        widths = []
        for j in range(len(grid[0])):
            w = {r[j].cols for r in grid if isinstance(r[j], Mat)}
            if len(w) != 1:
                raise AmbientMismatchError("inconsistent block widths")
            widths.append(w.pop())
        is_c = any(isinstance(b, Mat) and b.is_complex for r in grid for b in r)
        R, C = sum(heights), sum(widths)
        re = _zeros(R, C)
        im = _zeros(R, C) if is_c else None
        r0 = 0
        for bi, row in enumerate(grid):
            c0 = 0
            for bj, b in enumerate(row):
                if isinstance(b, Mat):
                    for i in range(b.rows):
                        for j in range(b.cols):
                            re[r0 + i, c0 + j] = b._re[i, j]
                            if is_c and b._im is not None:
                                im[r0 + i, c0 + j] = b._im[i, j]
                c0 += widths[bj]
            r0 += heights[bi]
        return cls(re, im)

    @classmethod
    def blockdiag(cls, *mats: "Mat") -> "Mat":
        k = len(mats)
        return cls.blocks([[mats[i] if i == j else _ZeroBlock for j in range(k)] for i in range(k)]) \
            if k else cls.zeros(0)

    # basic properties ---------------------------------------------------
    @property
    def rows(self) -> int:
        return self._re.nrows()

    @property
    def cols(self) -> int:
        return self._re.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_complex(self) -> bool:
        return self._im is not None

    @property
    def ring(self) -> str:
        return COMPLEX if self._im is not None else REAL

    @property
    def flint(self) -> fmpq_mat:
        """The underlying real ``fmpq_mat`` (real ring only)."""
        if self._im is not None:
            raise StructureError("complex matrix has no single flint representation")
        return self._re

    @property
    def real(self) -> "Mat":
        return Mat(self._re)

    @property
    def imag(self) -> "Mat":
        return Mat(self._im if self._im is not None else _zeros(self.rows, self.cols))

    def __getitem__(self, ij):
        i, j = ij
        if self._im is None:
            return to_fraction(self._re[i, j])
        return GaussRational(to_fraction(self._re[i, j]), to_fraction(self._im[i, j]))

    def tolist(self) -> list[list]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def vec(self) -> list[fmpq]:
        if self._im is None:
            return self._re.entries()
        out = []
        for a, b in zip(self._re.entries(), self._im.entries()):
            out.append(a)
            out.append(b)
        return out

    def as_complex(self) -> "Mat":
        return self if self._im is not None else Mat(self._re, _zeros(self.rows, self.cols))

    # algebra --------------------------------------------------------------
    def _pair(self, other: "Mat"):
        if self.shape != other.shape:
            raise AmbientMismatchError(f"shape mismatch {self.shape} vs {other.shape}")
        return other

    def __add__(self, other: "Mat") -> "Mat":
        self._pair(other)
        if self._im is None and other._im is None:
            return Mat(self._re + other._re)
        a, b = self.as_complex(), other.as_complex()
        return Mat(a._re + b._re, a._im + b._im)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat(-self._re, None if self._im is None else -self._im)

    def __mul__(self, scalar) -> "Mat":
        if isinstance(scalar, Mat):
            raise TypeError("use @ for matrix products")
        if isinstance(scalar, GaussRational):
            if not scalar.im:
                return self * scalar.re
            a, b = to_fmpq(scalar.re), to_fmpq(scalar.im)
            z = self.as_complex()
            return Mat(z._re * a - z._im * b, z._im * a + z._re * b)
        s = to_fmpq(scalar)
        return Mat(self._re * s, None if self._im is None else self._im * s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise AmbientMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        if self._im is None and other._im is None:
            return Mat(self._re * other._re)
        a, b = self.as_complex(), other.as_complex()
        return Mat(a._re * b._re - a._im * b._im, a._re * b._im + a._im * b._re)

    @property
    def T(self) -> "Mat":
        return Mat(self._re.transpose(), None if self._im is None else self._im.transpose())

    def conj(self) -> "Mat":
        return self if self._im is None else Mat(self._re, -self._im)

    @property
    def H(self) -> "Mat":
        return self.conj().T

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self._im is None and other._im is None:
            return self._re == other._re
        a, b = self.as_complex(), other.as_complex()
        return a._re == b._re and a._im == b._im

    def __hash__(self):
        return hash((self.shape, tuple(str(x) for x in self.vec()), self.ring))

    def is_zero(self) -> bool:
        return not any(self._re.entries()) and (self._im is None or not any(self._im.entries()))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_skew(self) -> bool:
        return self.is_square() and self == -self.T

    def is_hermitian(self) -> bool:
        return self.is_square() and self == self.H

    def trace(self):
        t = sum((self[i, i] for i in range(min(self.shape))), Fraction(0))
        return t

    def rank(self) -> int:
        if self._im is None:
            return self._re.rank()
        return realify_complex(self).rank() // 2

    def inverse(self) -> "Mat":
        if self._im is not None:
            raise StructureError("inverse is only provided for real matrices")
        return Mat(self._re.inv())

    def power(self, k: int) -> "Mat":
        out = Mat.identity(self.rows, self.ring)
        for _ in range(k):
            out = out @ self
        return out

    def __repr__(self):
        body = "; ".join(" ".join(str(x) if isinstance(x, GaussRational) else rational_str(x) for x in r)
                         for r in self.tolist())
        return f"Mat[{self.rows}x{self.cols},{self.ring}]({body})"

    # json ---------------------------------------------------------------
    def to_json(self) -> dict:
        if self._im is None:
            entries = [[rational_str(x) for x in r] for r in self.tolist()]
        else:
            entries = [[{"re": rational_str(x.re), "im": rational_str(x.im)} for x in r] for r in self.tolist()]
        return {"rows": self.rows, "cols": self.cols, "ring": self.ring, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "Mat":
        ring = obj.get("ring", REAL)
        if ring not in (REAL, COMPLEX):
            raise StructureError(f"unknown ring {ring!r}")
        m = cls.from_rows(obj["entries"], ring=ring)
        if m.shape != (obj["rows"], obj["cols"]) and not (obj["rows"] == 0):
            raise AmbientMismatchError(
                f"declared shape {(obj['rows'], obj['cols'])} does not match entries {m.shape}")
        if ring == COMPLEX:
            m = m.as_complex()
        return m


class _Zero:
    pass


_ZeroBlock = _Zero()


def realify_complex(m: Mat) -> fmpq_mat:
    """Standard real form [[Re, -Im], [Im, Re]] of a complex matrix."""
    z = m.as_complex()
    return Mat.blocks([[Mat(z._re), Mat(-z._im)], [Mat(z._im), Mat(z._re)]])._re


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product: block (i, j) is ``a[i, j] * b``."""
    if a.ring != b.ring:
        raise AmbientMismatchError("kron of matrices over different rings")
    if a.is_complex:
        re = kron(a.real, b.real) - kron(a.imag, b.imag)
        im = kron(a.real, b.imag) + kron(a.imag, b.real)
        return Mat(re._re, im._re)
    ar, ac, br, bc = a.rows, a.cols, b.rows, b.cols
    A = a._re.entries()
    B = b._re.entries()
    out = [fmpq(0)] * (ar * br * ac * bc)
    width = ac * bc
    for i in range(ar):
        for j in range(ac):
            x = A[i * ac + j]
            if x == 0:
                continue
            for k in range(br):
                row = (i * br + k) * width + j * bc
                for l in range(bc):
                    y = B[k * bc + l]
                    if y != 0:
                        out[row + l] = x * y
    return Mat(fmpq_mat(ar * br, width, out))


def cayley_orthogonal(s: Mat) -> Mat:
    """Rational orthogonal matrix ``(I - s)(I + s)^-1`` for a skew-symmetric ``s``."""
    if not s.is_skew() or s.is_complex:
        raise StructureError("Cayley transform needs a real skew-symmetric matrix")
    n = s.rows
    eye = _eye(n)
    return Mat((eye - s._re) * (eye + s._re).inv())


def rref(vectors) -> list[list[Fraction]]:
    """Canonical reduced row-echelon basis of the span of rational row vectors."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise AmbientMismatchError("vectors of different lengths")
    red, _ = echelon(fmpq_mat(len(vectors), n, [to_fmpq(x) for v in vectors for x in v]))
    return [[to_fraction(x) for x in red.entries()[r * n:(r + 1) * n]] for r in range(red.nrows())]


# ---------------------------------------------------------------- subspace

class Subspace:
    """A real subspace of ``rows x cols`` matrices (rational or Gaussian entries).

    Complex ambient spaces are treated as real vector spaces of twice the
    dimension; complex-linear subspaces are produced by :meth:`complex_span`.
    """

    __slots__ = ("shape", "ring", "_basis", "_pivots", "_hash", "_cache")

    def __init__(self, shape: tuple[int, int], ring: str, basis: fmpq_mat, pivots: tuple[int, ...]):
        self.shape = (int(shape[0]), int(shape[1]))
        self.ring = ring
        self._basis = basis
        self._pivots = pivots
        self._hash = None
        self._cache = {}

    # construction -------------------------------------------------------
    @property
    def coord_dim(self) -> int:
        return self.shape[0] * self.shape[1] * (2 if self.ring == COMPLEX else 1)

    @classmethod
    def from_rows(cls, shape, ring: str, rows: fmpq_mat) -> "Subspace":
        basis, piv = echelon(rows)
        out = cls(shape, ring, basis, piv)
        # generators often have far smaller integer forms than the echelon rows
        out._cache["gens"] = rows
        return out

    @classmethod
    def span(cls, mats: Iterable[Mat], shape=None, ring: str | None = None) -> "Subspace":
        mats = list(mats)
        if shape is None:
            if not mats:
                raise AmbientMismatchError("empty span needs an explicit shape")
            shape = mats[0].shape
        if ring is None:
            ring = COMPLEX if any(m.is_complex for m in mats) else REAL
        n = shape[0] * shape[1] * (2 if ring == COMPLEX else 1)
        vecs = []
        for m in mats:
            if m.shape != tuple(shape):
                raise AmbientMismatchError(f"matrix of shape {m.shape} in ambient {tuple(shape)}")
            if ring == REAL and m.is_complex:
                raise AmbientMismatchError("complex matrix in a real ambient space")
            vecs.extend((m.as_complex() if ring == COMPLEX else m).vec())
        rows = fmpq_mat(len(mats), n, vecs) if mats else fmpq_mat(0, n)
        return cls.from_rows(shape, ring, rows)

    @classmethod
    def complex_span(cls, mats: Iterable[Mat], shape=None) -> "Subspace":
        """Complex-linear span: each generator is joined by its ``i``-multiple."""
        mats = [m.as_complex() for m in mats]
        return cls.span(mats + [m * I_UNIT for m in mats], shape=shape, ring=COMPLEX)

    @classmethod
    def zero(cls, shape, ring: str = REAL) -> "Subspace":
        return cls.span([], shape=shape, ring=ring)

    @classmethod
    def full(cls, shape, ring: str = REAL) -> "Subspace":
        r, c = shape
        n = r * c * (2 if ring == COMPLEX else 1)
        return cls(shape, ring, _eye(n), tuple(range(n)))

    @classmethod
    def symmetric(cls, n: int) -> "Subspace":
        mats = []
        for i in range(n):
            for j in range(i, n):
                e = _zeros(n, n)
                e[i, j] = 1
                e[j, i] = 1
                mats.append(Mat(e))
        return cls.span(mats, shape=(n, n), ring=REAL)

    # access ---------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self._basis.nrows()

    real_dim = dim

    @property
    def rows_matrix(self) -> fmpq_mat:
        return self._basis

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @property
    def basis(self) -> list[Mat]:
        r, c = self.shape
        n = self.coord_dim
        ent = self._basis.entries()
        return [Mat.from_vec(ent[k * n:(k + 1) * n], r, c, self.ring) for k in range(self.dim)]

    def integer_basis(self) -> "flint.fmpz_mat":
        """An integer basis, taken from the generators when they allow it.

        Scaled generators usually have much smaller entries than the scaled
        echelon rows; rows independent modulo a prime are independent, so a
        subset of the right size is a basis.
        """
        if "ints" not in self._cache:
            gens = self._cache.get("gens")
            out = None
            if gens is not None and self.dim and gens.nrows() <= 4 * self.dim:
                G = flint.fmpz_mat(primitive_rows(gens))
                keep = independent_rows(G)
                if len(keep) == self.dim:
                    out = G if len(keep) == G.nrows() else flint.fmpz_mat([G.table()[i] for i in keep])
            self._cache["ints"] = out if out is not None else self.echelon_integer_basis()
        return self._cache["ints"]

    def echelon_integer_basis(self) -> "flint.fmpz_mat":
        """The echelon basis rows scaled to primitive integer vectors (same order as ``basis``)."""
        if "eints" not in self._cache:
            n = self.coord_dim
            self._cache["eints"] = flint.fmpz_mat(primitive_rows(self._basis)) if self.dim \
                else flint.fmpz_mat(0, n)
        return self._cache["eints"]

    def integer_residual(self, rows: "flint.fmpz_mat") -> "flint.fmpz_mat":
        """A multiple of each row minus its projection along the pivot coordinates.

        A row lies in the subspace exactly when its residual row vanishes.
        """
        if "res" not in self._cache:
            num, den = self._basis.numer_denom() if self.dim else (flint.fmpz_mat(0, self.coord_dim), 1)
            sel = flint.fmpz_mat(self.coord_dim, self.dim)
            for j, c in enumerate(self._pivots):
                sel[c, j] = 1
            self._cache["res"] = (num, den, sel)
        num, den, sel = self._cache["res"]
        if self.dim == 0:
            return rows
        return rows * den - (rows * sel) * num

    def _vec_of(self, m: Mat) -> list[fmpq]:
        if m.shape != self.shape:
            raise AmbientMismatchError(f"matrix of shape {m.shape} tested against ambient {self.shape}")
        if self.ring == REAL:
            if m.is_complex:
                if m.imag.is_zero():
                    return m.real.vec()
                raise AmbientMismatchError("complex matrix tested against a real subspace")
            return m.vec()
        return m.as_complex().vec()

    def _check_ambient(self, other: "Subspace"):
        if self.shape != other.shape or self.ring != other.ring:
            raise AmbientMismatchError(
                f"ambient mismatch: {self.shape}/{self.ring} vs {other.shape}/{other.ring}")

    def contains(self, m: Mat) -> bool:
        v = fmpq_mat(1, self.coord_dim, self._vec_of(m))
        return not any(residual(self._basis, self._pivots, v).entries())

    __contains__ = contains

    def first_outside(self, rows: fmpq_mat) -> int | None:
        """Index of the first coordinate row not in the subspace, or ``None``."""
        if rows.nrows() == 0:
            return None
        res = residual(self._basis, self._pivots, rows)
        bad = nonzero_row_indices(res)
        return bad[0] if bad else None

    def coordinate_rows(self, mats: Sequence[Mat]) -> fmpq_mat:
        if not mats:
            return fmpq_mat(0, self.coord_dim)
        return fmpq_mat(len(mats), self.coord_dim, [x for m in mats for x in self._vec_of(m)])

    def first_outside_of(self, mats: Sequence[Mat]) -> int | None:
        """Index of the first matrix in ``mats`` outside the subspace."""
        return self.first_outside(self.coordinate_rows(list(mats)))

    def contains_all(self, mats: Iterable[Mat]) -> bool:
        return self.first_outside_of(list(mats)) is None

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return self.first_outside(other._basis) is None

    def coords(self, m: Mat) -> list[Fraction]:
        """Coefficients of ``m`` in the canonical basis; raises if ``m`` is outside."""
        from .errors import MembershipError

        vec = self._vec_of(m)
        if not self.contains(m):
            raise MembershipError("matrix is not in the subspace")
        return [to_fraction(vec[p]) for p in self._pivots]

    def combination(self, coeffs) -> Mat:
        coeffs = [to_fmpq(c) for c in coeffs]
        if len(coeffs) != self.dim:
            raise AmbientMismatchError("wrong number of coefficients")
        row = fmpq_mat(1, self.dim, coeffs) * self._basis if self.dim else fmpq_mat(1, self.coord_dim)
        return Mat.from_vec(row.entries(), self.shape[0], self.shape[1], self.ring)

    # comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.shape == other.shape and self.ring == other.ring
                and self._pivots == other._pivots and self._basis == other._basis)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.ring, self._pivots, tuple(str(x) for x in self._basis.entries())))
        return self._hash

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def __repr__(self):
        return f"Subspace(shape={self.shape}, ring={self.ring}, dim={self.dim})"

    # operations ---------------------------------------------------------
    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_rows(self.shape, self.ring,
                                  stack_rows([self._basis, other._basis], self.coord_dim))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.shape, self.ring)
        # x = a*B1 = b*B2  <=>  [a, -b] in the left kernel of [B1; B2]
        k1 = self.dim
        both = stack_rows([self._basis, -other._basis], self.coord_dim)
        kernel = nullspace_rows(both.transpose())
        coeffs = select_columns(kernel, range(k1)) if kernel.nrows() else fmpq_mat(0, k1)
        rows = coeffs * self._basis if coeffs.nrows() else fmpq_mat(0, self.coord_dim)
        return Subspace.from_rows(self.shape, self.ring, rows)

    def map(self, f: Callable[[Mat], Mat], shape=None, ring: str | None = None) -> "Subspace":
        images = [f(b) for b in self.basis]
        if shape is None:
            shape = images[0].shape if images else self.shape
        return Subspace.span(images, shape=shape, ring=ring or self.ring)

    def transpose(self) -> "Subspace":
        r, c = self.shape
        return self.map(lambda m: m.T, shape=(c, r))

    def is_transpose_closed(self) -> bool:
        return self.shape[0] == self.shape[1] and self.transpose() == self

    def conjugate(self, R: Mat) -> "Subspace":
        """``{R^T a R : a in self}``."""
        Rt = R.T
        return self.map(lambda a: Rt @ a @ R)

    def to_json(self) -> dict:
        return {"ambient": list(self.shape), "ring": self.ring, "basis": [b.to_json() for b in self.basis]}

    @classmethod
    def from_json(cls, obj: dict) -> "Subspace":
        shape = tuple(obj["ambient"])
        ring = obj.get("ring", REAL)
        mats = [Mat.from_json(b) for b in obj.get("basis", [])]
        return cls.span(mats, shape=shape, ring=ring)


def subspace_contains(S: Subspace, m: Mat) -> bool:
    return S.contains(m)


def sym_part(V: Subspace) -> Subspace:
    """``V`` intersected with the symmetric matrices, for transpose-closed ``V``."""
    if not V.is_transpose_closed():
        raise StructureError("symmetric part requires a transpose-closed subspace")
    return V.map(lambda k: k + k.T)


def commutant(gens: Sequence[Mat], n: int) -> Subspace:
    """``{M : M g = g M for all g}`` inside the ``n x n`` real matrices."""
    if not gens:
        return Subspace.full((n, n))
    eye = Mat.identity(n)
    # row-major vec(M g - g M) = (I (x) g^T - g (x) I) vec(M)
    blocks = [(kron(eye, g.T) - kron(g, eye)).flint for g in gens]
    system = stack_rows(blocks, n * n)
    return Subspace.from_rows((n, n), REAL, nullspace_rows(system))
