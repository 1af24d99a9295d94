"""Jordan products, multiplication closure and the intrinsic algebra operations.

Covers identity elements, null spaces, spectral projections, Peirce blocks
and the splitting of an algebra into simple ideals.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint

from .errors import (AmbientMismatchError, InvalidFrameError, IrrationalSpectrumError,
                     NoIdentityError, StructureError)
from .exactla import (REAL, Mat, Subspace, echelon, fmpq_mat, nullspace_rows, saturate, stack_rows,
                      primitive_rows, to_fraction)
from .modular import fmpz_mat, modular_kernel, reshape

HALF = Fraction(1, 2)


def jordan_product(a: Mat, b: Mat) -> Mat:
    if a.shape != b.shape:
        raise AmbientMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return (a @ b + b @ a) * HALF


def a_product(x: Mat, y: Mat, a: Mat) -> Mat:
    """``x *_a y = (x a y + y a x) / 2``."""
    if not (x.shape == y.shape == a.shape):
        raise AmbientMismatchError("a-product needs three matrices of one shape")
    return (x @ a @ y + y @ a @ x) * HALF


def _require_symmetric(S: Subspace, what: str):
    if S.ring != REAL or S.shape[0] != S.shape[1]:
        raise StructureError(f"{what} must be a real square subspace")
    for b in S.basis:
        if not b.is_symmetric():
            raise StructureError(f"{what} has a non-symmetric basis element")


@dataclass(frozen=True)
class MultialgebraInstance:
    """A subspace ``pi`` of symmetric matrices with a space ``mults`` of multipliers."""

    pi: Subspace
    mults: Subspace

    def __post_init__(self):
        if self.pi.shape != self.mults.shape:
            raise AmbientMismatchError("pi and mults live in different ambient spaces")
        _require_symmetric(self.pi, "pi")
        _require_symmetric(self.mults, "mults")

    @classmethod
    def classical(cls, pi: Subspace) -> "MultialgebraInstance":
        n = pi.shape[0]
        return cls(pi, Subspace.span([Mat.identity(n)]))

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    @property
    def is_classical(self) -> bool:
        return self.mults == Subspace.span([Mat.identity(self.n)])

    def conjugate(self, R: Mat) -> "MultialgebraInstance":
        return MultialgebraInstance(self.pi.conjugate(R), self.mults.conjugate(R))

    def to_json(self) -> dict:
        return {"pi": self.pi.to_json(), "mults": self.mults.to_json()}


@dataclass
class ClosureReport:
    closed: bool
    witness: tuple | None = None  # (i, j, k) basis indices of x, y, a
    value: Mat | None = None

    def __bool__(self):
        return self.closed

    def to_json(self) -> dict:
        out = {"closed": self.closed}
        if self.witness is not None:
            out["witness"] = {"x": self.witness[0], "y": self.witness[1], "a": self.witness[2],
                              "value": self.value.to_json()}
        return out


def sym_complement(pi: Subspace) -> fmpz_mat:
    """Integer rows spanning the symmetric matrices orthogonal to pi (trace form)."""
    if "symperp" in pi._cache:
        return pi._cache["symperp"]
    n = pi.shape[0]
    D = n * n
    coords = [(i, j) for i in range(n) for j in range(i, n)]
    k = pi.dim
    if k:
        ent = pi.integer_basis().entries()
        system = fmpz_mat(k, len(coords), [ent[r * D + i * n + j] * (1 if i == j else 2)
                                             for r in range(k) for i, j in coords])
        # the reduced echelon kernel has far smaller entries than a fraction-free one
        vecs = primitive_rows(nullspace_rows(fmpq_mat(system)))
    else:
        vecs = [[1 if u == t else 0 for u in range(len(coords))] for t in range(len(coords))]
    rows = []
    for v in vecs:
        row = [0] * D
        for (i, j), x in zip(coords, v):
            row[i * n + j] = x
            row[j * n + i] = x
        rows.append(row)
    out = fmpz_mat(rows) if rows else fmpz_mat(0, D)
    pi._cache["symperp"] = out
    return out


def _square_blocks(rows: fmpz_mat, n: int) -> list[fmpz_mat]:
    D = n * n
    ent = rows.entries()
    return [fmpz_mat(n, n, ent[r * D:(r + 1) * D]) for r in range(rows.nrows())]


def is_closed(inst: MultialgebraInstance) -> ClosureReport:
    """Check ``x *_a y`` in pi over basis triples; report the first failing triple.

    ``x a y + y a x`` lies in pi exactly when ``y a x`` is orthogonal to every
    symmetric matrix orthogonal to pi, so each product is tested once against
    that complement, in integer arithmetic.
    """
    pi = inst.pi
    if pi.dim == 0 or sym_complement(pi).nrows() == 0:
        return ClosureReport(True)
    rep = _closure_search(inst, pi.integer_basis())
    if rep.closed or pi.integer_basis() == pi.echelon_integer_basis():
        return rep
    # report the first failure with respect to the echelon basis
    return _closure_search(inst, pi.echelon_integer_basis())


def _closure_search(inst: MultialgebraInstance, ints: fmpz_mat) -> ClosureReport:
    pi = inst.pi
    k, n = pi.dim, inst.n
    perp = sym_complement(pi)
    c = perp.nrows()
    D = n * n
    mults = _square_blocks(inst.mults.echelon_integer_basis(), n)  # indices match mults.basis
    Bs = _square_blocks(ints, n)
    Bv = reshape(ints, k * n, n)
    perpT = perp.transpose()
    if inst.is_classical and c * k < k * (k + 1) // 2:
        # <y, x X + X x> = 2 <y, x X>: test x X against pi for X in the complement
        pit = ints.transpose()
        if all((reshape(Bv * X, k, D) * pit).is_zero() for X in _square_blocks(perp, n)):
            return ClosureReport(True)
    for i in range(k):
        best = None
        for t, a in enumerate(mults):
            Y = Bv * (a * Bs[i])
            ent = Y.entries()[i * D:]
            prods = fmpz_mat(k - i, D, ent)
            test = prods * perpT
            if test.is_zero():
                continue
            e = test.entries()
            for r in range(k - i):
                if any(e[r * c:(r + 1) * c]):
                    if best is None or (i + r, t) < best:
                        best = (i + r, t)
                    break
        if best is not None:
            j, t = best
            B, A = pi.basis, inst.mults.basis
            return ClosureReport(False, (i, j, t), a_product(B[i], B[j], A[t]))
    return ClosureReport(True)


def is_closed_by_enumeration(inst: MultialgebraInstance) -> ClosureReport:
    """Reference check: every basis product tested for membership directly."""
    B = inst.pi.basis
    A = inst.mults.basis
    triples, values = [], []
    for i in range(len(B)):
        for j in range(i, len(B)):
            for k, a in enumerate(A):
                triples.append((i, j, k))
                values.append(a_product(B[i], B[j], a))
    bad = inst.pi.first_outside_of(values)
    if bad is None:
        return ClosureReport(True)
    return ClosureReport(False, triples[bad], values[bad])


def is_jordan_closed(pi: Subspace) -> bool:
    return is_closed(MultialgebraInstance.classical(pi)).closed


def generate_jordan_closure(generators: Sequence[Mat], mults: Subspace) -> Subspace:
    """Smallest subspace containing ``generators`` closed under every ``*_a``."""
    generators = list(generators)
    shape = mults.shape
    for g in generators:
        if not g.is_symmetric():
            raise StructureError("generators must be symmetric")
    n = shape[0]
    D = n * n
    A = [a.flint for a in mults.basis]
    start = Subspace.span(generators, shape=shape).rows_matrix

    def as_mats(rows):
        ent = rows.entries()
        return [fmpq_mat(n, n, ent[r * D:(r + 1) * D]) for r in range(rows.nrows())]

    def expand(frontier, basis):
        out = []
        cur = as_mats(basis)
        for f in as_mats(frontier):
            for b in cur:
                for a in A:
                    out.extend(((f * a * b + b * a * f) / 2).entries())
        return fmpq_mat(len(out) // D, D, out) if out else fmpq_mat(0, D)

    basis, piv = saturate(start, expand)
    return Subspace(shape, REAL, basis, piv)


# ------------------------------------------------------ intrinsic operations

def null_space(pi: Subspace) -> Subspace:
    """Common kernel of all elements of pi, as a subspace of ``n x 1`` columns."""
    n = pi.shape[0]
    blocks = [b.flint for b in pi.basis]
    system = stack_rows(blocks, n) if blocks else fmpq_mat(0, n)
    return Subspace.from_rows((n, 1), REAL, nullspace_rows(system))


def _column_projector(V: fmpq_mat, n: int) -> fmpq_mat:
    """Orthogonal projector onto the row space of ``V``."""
    if V.nrows() == 0:
        return fmpq_mat(n, n)
    Vt = V.transpose()
    return Vt * (V * Vt).inv() * V


def projector_onto(vectors: Subspace) -> Mat:
    n = vectors.shape[0]
    return Mat(_column_projector(vectors.rows_matrix, n))


def identity_element(pi: Subspace) -> Mat:
    """The unit of pi: the projector onto the complement of its null space."""
    n = pi.shape[0]
    P = Mat.identity(n) - projector_onto(null_space(pi))
    if pi.dim == 0 or not pi.contains(P):
        raise NoIdentityError("pi has no identity element")
    for b in pi.basis:
        if jordan_product(P, b) != b:
            raise NoIdentityError("projector off the null space does not act as identity")
    return P


def minimal_polynomial(a: Mat) -> flint.fmpq_poly:
    return a.flint.minpoly()


def rational_eigenvalues(a: Mat) -> list[Fraction]:
    """Distinct eigenvalues when the minimal polynomial splits into distinct rational roots."""
    mp = minimal_polynomial(a)
    _, factors = mp.factor()
    roots = []
    for f, mult in factors:
        if f.degree() != 1 or mult != 1:
            raise IrrationalSpectrumError(f"minimal polynomial {mp} has no rational splitting")
        c = f.coeffs()
        roots.append(to_fraction(-c[0] / c[1]))
    return sorted(roots)


def spectral_projections(a: Mat) -> list[tuple[Fraction, Mat]]:
    """Eigenvalue / projector pairs of a symmetric matrix with rational spectrum."""
    if not a.is_symmetric():
        raise StructureError("spectral projections need a symmetric matrix")
    roots = rational_eigenvalues(a)
    n = a.rows
    eye = Mat.identity(n)
    out = []
    for lam in roots:
        P = eye
        for mu in roots:
            if mu != lam:
                P = P @ (a - eye * mu) * (1 / (lam - mu))
        out.append((lam, P))
    return out


def _is_frame(pi: Subspace, idempotents: Sequence[Mat]) -> bool:
    if not idempotents:
        return False
    for E in idempotents:
        if E.shape != pi.shape or not E.is_symmetric() or E @ E != E or E.is_zero() or not pi.contains(E):
            return False
    for i, E in enumerate(idempotents):
        for F in idempotents[i + 1:]:
            if not (E @ F).is_zero():
                return False
    total = idempotents[0]
    for E in idempotents[1:]:
        total = total + E
    try:
        unit = identity_element(pi)
    except NoIdentityError:
        return False
    return total == unit


def peirce_blocks(pi: Subspace, idempotents: Sequence[Mat]) -> list[list[int]]:
    """Dimensions of the Peirce spaces ``M^{rho sigma}`` for a resolution of unity."""
    idempotents = list(idempotents)
    if not _is_frame(pi, idempotents):
        raise InvalidFrameError("idempotents are not orthogonal projectors in pi summing to its unit")
    k = len(idempotents)
    # For a symmetric frame, E_t * A = (d_rt + d_st)/2 A  <=>  A = E_r A E_s + E_s A E_r.
    # Block (r, s) of the Peirce decomposition is therefore the image of pi under that map.
    dims = [[0] * k for _ in range(k)]
    for r in range(k):
        for s in range(r, k):
            Er, Es = idempotents[r], idempotents[s]
            if r == s:
                img = pi.map(lambda A: Er @ A @ Er)
            else:
                img = pi.map(lambda A: Er @ A @ Es + Es @ A @ Er)
            dims[r][s] = dims[s][r] = img.dim
    return dims


def peirce_space(pi: Subspace, idempotents: Sequence[Mat], r: int, s: int) -> Subspace:
    """``{A in pi : E_t * A = (d_rt + d_st)/2 A for all t}`` solved as a linear system."""
    basis = pi.basis
    if not basis:
        return pi
    rows = []
    for t, E in enumerate(idempotents):
        c = Fraction((r == t) + (s == t), 2)
        rows.append([jordan_product(E, b) - b * c for b in basis])
    n2 = pi.shape[0] * pi.shape[1]
    blocks = []
    for imgs in rows:
        # columns indexed by basis coefficients
        blocks.append(fmpq_mat(len(imgs), n2, [x for m in imgs for x in m.vec()]).transpose())
    system = stack_rows(blocks, len(basis))
    coeffs = nullspace_rows(system)
    mats = [pi.combination(coeffs.entries()[i * len(basis):(i + 1) * len(basis)])
            for i in range(coeffs.nrows())]
    return Subspace.span(mats, shape=pi.shape)


# ------------------------------------------------------------- splitting

@dataclass
class Component:
    carrier: Subspace          # n x 1 columns spanning the range of the central idempotent
    algebra: Subspace
    idempotent: Mat

    @property
    def carrier_dim(self) -> int:
        return self.carrier.dim

    def to_json(self) -> dict:
        return {"carrierDim": self.carrier.dim, "carrier": self.carrier.to_json(),
                "algebra": self.algebra.to_json()}


@dataclass
class SplitReport:
    null_space: Subspace
    components: list[Component] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"nullDim": self.null_space.dim, "nullSpace": self.null_space.to_json(),
                "components": [c.to_json() for c in self.components]}


def _transpose_perm(n: int) -> fmpz_mat:
    t = fmpz_mat(n * n, n * n)
    for i in range(n):
        for j in range(n):
            t[i * n + j, j * n + i] = 1
    return t


def _commutator_columns(V: fmpz_mat, g: fmpz_mat, T: fmpz_mat) -> fmpz_mat:
    """Rows ``vec(v_i g - g v_i)`` for the rows ``v_i`` of ``V``."""
    k = V.nrows()
    n = g.nrows()
    D = n * n
    right = reshape(reshape(V, k * n, n) * g, k, D)
    # g v = (v^T g^T)^T
    left = reshape(reshape(V * T, k * n, n) * g.transpose(), k, D) * T
    return right - left


def _commutes(x: fmpz_mat, checks: Sequence[fmpz_mat]) -> int | None:
    for t, c in enumerate(checks):
        if x * c != c * x:
            return t
    return None


def commuting_subspace(V: fmpz_mat, checks: Sequence[fmpz_mat], n: int, seed: int = 0) -> fmpq_mat:
    """Echelon rows spanning ``{v in span V : v c = c v for every check c}``.

    Two random combinations of the checks are used as probes, the kernel of
    their commutator system is computed modularly, and every kernel element
    is then tested exactly against all checks; a failing check joins the
    probes.  Commuting with the probes is necessary, so nothing is lost.
    """
    D = n * n
    k = V.nrows()
    if k == 0:
        return fmpq_mat(0, D)
    if not checks:
        return echelon(fmpq_mat(V))[0]
    rng = random.Random(seed)
    T = _transpose_perm(n)
    probes = []
    for _ in range(min(2, len(checks))):
        g = checks[0] * rng.randint(1, 5)
        for c in checks[1:]:
            g += c * rng.randint(-5, 5)
        probes.append(g)
    while True:
        blocks = [_commutator_columns(V, g, T).transpose() for g in probes]
        ent = [x for b in blocks for x in b.entries()]
        system = fmpz_mat(len(ent) // k, k, ent)
        coeffs = modular_kernel(system) if not system.is_zero() else _identity_rows(k)
        if coeffs.nrows() == 0:
            return fmpq_mat(0, D)
        num, _ = coeffs.numer_denom()
        elems = num * V
        bad = None
        flat = elems.entries()
        for r in range(elems.nrows()):
            x = fmpz_mat(n, n, flat[r * D:(r + 1) * D])
            bad = _commutes(x, checks)
            if bad is not None:
                break
        if bad is None:
            return echelon(fmpq_mat(elems))[0]
        probes.append(checks[bad])


def _identity_rows(k: int) -> fmpq_mat:
    m = fmpq_mat(k, k)
    for i in range(k):
        m[i, i] = 1
    return m


def _random_element(S: Subspace, rng: random.Random, spread: int = 7) -> Mat:
    return S.combination([rng.randint(-spread, spread) for _ in range(S.dim)])


def center(pi: Subspace, seed: int = 0) -> Subspace:
    """Central elements of a special Jordan algebra.

    For a formally real algebra of symmetric matrices, an element is central
    exactly when it commutes as a matrix with the whole algebra.
    """
    n = pi.shape[0]
    ints = pi.integer_basis()
    rows = commuting_subspace(ints, _square_blocks(ints, n), n, seed)
    return Subspace.from_rows(pi.shape, REAL, rows)


def _sort_key(c: Component):
    return (c.carrier.dim, tuple(to_fraction(x) for x in c.algebra.rows_matrix.entries()))


def split_simple(pi: Subspace, seed: int = 0, attempts: int = 64, check: bool = True) -> SplitReport:
    """Split pi into simple ideals via the minimal idempotents of its center.

    ``check=False`` skips the closure test for callers that already ran it.
    """
    if check and not is_jordan_closed(pi):
        raise StructureError("pi is not closed under the Jordan product")
    n = pi.shape[0]
    N = null_space(pi)
    if pi.dim == 0:
        return SplitReport(N, [])
    Z = center(pi, seed)
    rng = random.Random(seed + 1)
    idempotents = None
    for _ in range(attempts):
        z = _random_element(Z, rng, spread=max(7, 4 * Z.dim))
        pairs = spectral_projections(z)
        nonzero = [P for lam, P in pairs if lam != 0]
        if len(nonzero) == Z.dim and all(Z.contains(P) for P in nonzero):
            idempotents = nonzero
            break
    if idempotents is None:
        raise IrrationalSpectrumError("could not separate the central idempotents")
    comps = []
    for P in idempotents:
        alg = pi if len(idempotents) == 1 else pi.map(lambda b: P @ b @ P)
        carrier = Subspace.span(
            [Mat(fmpq_mat(n, 1, [P.flint[i, j] for i in range(n)])) for j in range(n)],
            shape=(n, 1))
        comps.append(Component(carrier, alg, P))
    comps.sort(key=_sort_key)
    return SplitReport(N, comps)
