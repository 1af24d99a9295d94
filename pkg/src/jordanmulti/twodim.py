"""Multifields on the complex plane and their real 2n x 2n forms.

An operator on C^n of the form ``u -> X u + Y conj(u)`` is written K(X, Y).
It is real-symmetric on R^2n exactly when X is Hermitean and Y is complex
symmetric, and the multipliers are the operators K(0, zI).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .completion import ChainReport, assoc_closure, chain_check, completion_of, sym_dim
from .errors import MembershipError, StructureError
from .exactla import COMPLEX, I_UNIT, REAL, GaussRational, Mat, Subspace, kron
from .jordancore import ClosureReport, MultialgebraInstance, is_closed
from .repforge import Q1, QI, QJ, QK, QUNITS, Quaternion, quatQ


def _cmat(m: Mat) -> Mat:
    return m.as_complex()


def realify_k(X: Mat, Y: Mat) -> Mat:
    """Real 2n x 2n matrix of K(X, Y) in the coordinates (Re u, Im u); no symmetry needed."""
    X, Y = _cmat(X), _cmat(Y)
    if X.shape != Y.shape or not X.is_square():
        raise StructureError("K(X, Y) needs square X and Y of one size")
    xr, xi, yr, yi = X.real, X.imag, Y.real, Y.imag
    return Mat.blocks([[xr + yr, -xi + yi], [xi + yi, xr - yr]])


def unrealify(m: Mat) -> tuple[Mat, Mat]:
    """Inverse of :func:`realify_k`."""
    n2 = m.rows
    if m.is_complex or n2 != m.cols or n2 % 2:
        raise StructureError("expected a real matrix of even size")
    n = n2 // 2
    ent = m.tolist()
    A = Mat.from_rows([r[:n] for r in ent[:n]])
    B = Mat.from_rows([r[n:] for r in ent[:n]])
    C = Mat.from_rows([r[:n] for r in ent[n:]])
    D = Mat.from_rows([r[n:] for r in ent[n:]])
    half = Fraction(1, 2)
    X = Mat(((A + D) * half).flint, ((C - B) * half).flint)
    Y = Mat(((A - D) * half).flint, ((B + C) * half).flint)
    return X, Y


@dataclass(frozen=True)
class TwoDPair:
    X: Mat
    Y: Mat

    def __post_init__(self):
        X, Y = _cmat(self.X), _cmat(self.Y)
        if X.shape != Y.shape or not X.is_square():
            raise StructureError("X and Y must be square of one size")
        if not X.is_hermitian():
            raise StructureError("X must be Hermitean")
        if not Y.is_symmetric():
            raise StructureError("Y must be complex symmetric")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.X.rows


def realify(k: TwoDPair) -> Mat:
    return realify_k(k.X, k.Y)


def multiplier(z, n: int) -> Mat:
    """Real form of K(0, z I)."""
    z = GaussRational.coerce(z)
    return realify_k(Mat.zeros(n, ring=COMPLEX), Mat.identity(n, COMPLEX) * z)


def multiplier_space(n: int) -> Subspace:
    return Subspace.span([multiplier(1, n), multiplier(I_UNIT, n)], shape=(2 * n, 2 * n))


def rotate(k: TwoDPair, quarter_turns: int) -> TwoDPair:
    """Action of the rotation by ``quarter_turns * pi/2``: K(X, Y) -> K(X, e^{2 i theta} Y)."""
    sign = -1 if quarter_turns % 2 else 1
    return TwoDPair(k.X, k.Y * sign)


def rotation_matrix(n: int, quarter_turns: int) -> Mat:
    """Real form of ``u -> i^t u``."""
    t = quarter_turns % 4
    z = [GaussRational(1, 0), GaussRational(0, 1), GaussRational(-1, 0), GaussRational(0, -1)][t]
    return realify_k(Mat.identity(n, COMPLEX) * z, Mat.zeros(n, ring=COMPLEX))


class TwoDAlgebra:
    """A real space L of Hermitean matrices and a complex space M of symmetric ones."""

    def __init__(self, L: Subspace, M: Subspace):
        if L.ring != COMPLEX or M.ring != COMPLEX:
            raise StructureError("L and M live in complex matrix spaces")
        if L.shape != M.shape or L.shape[0] != L.shape[1]:
            raise StructureError("L and M must share one square ambient space")
        for x in L.basis:
            if not x.is_hermitian():
                raise StructureError("L has a non-Hermitean element")
        for y in M.basis:
            if not y.is_symmetric():
                raise StructureError("M has a non-symmetric element")
            if not M.contains(y * I_UNIT):
                raise StructureError("M is not closed under multiplication by i")
        self.L = L
        self.M = M

    @classmethod
    def from_generators(cls, L: Sequence[Mat], M: Sequence[Mat], n: int | None = None) -> "TwoDAlgebra":
        mats = list(L) + list(M)
        if n is None:
            if not mats:
                raise StructureError("empty generators need an explicit size")
            n = mats[0].rows
        shape = (n, n)
        return cls(Subspace.span([_cmat(x) for x in L], shape=shape, ring=COMPLEX),
                   Subspace.complex_span(M, shape=shape) if M else Subspace.zero(shape, COMPLEX))

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def dims(self) -> tuple[int, int]:
        """Real dimensions of L and M."""
        return self.L.dim, self.M.dim

    def realified(self) -> Subspace:
        n = self.n
        zero = Mat.zeros(n, ring=COMPLEX)
        mats = [realify_k(x, zero) for x in self.L.basis] + [realify_k(zero, y) for y in self.M.basis]
        return Subspace.span(mats, shape=(2 * n, 2 * n), ring=REAL)

    def instance(self) -> MultialgebraInstance:
        return MultialgebraInstance(self.realified(), multiplier_space(self.n))

    @classmethod
    def from_realified(cls, pi: Subspace) -> "TwoDAlgebra":
        Ls, Ms = [], []
        for b in pi.basis:
            X, Y = unrealify(b)
            Ls.append(X)
            Ms.append(Y)
        n = pi.shape[0] // 2
        shape = (n, n)
        L = Subspace.span(Ls, shape=shape, ring=COMPLEX)
        M = Subspace.span(Ms, shape=shape, ring=COMPLEX)
        # a realified algebra holds K(X, 0) and K(0, Y) separately
        if L.dim + M.dim != pi.dim:
            raise StructureError("subspace does not split into L and M parts")
        return cls(L, M)

    def __eq__(self, other):
        return isinstance(other, TwoDAlgebra) and self.L == other.L and self.M == other.M

    def to_json(self) -> dict:
        return {"L": [x.to_json() for x in self.L.basis], "M": [y.to_json() for y in self.M.basis]}

    @classmethod
    def from_json(cls, obj: dict, n: int | None = None) -> "TwoDAlgebra":
        L = [Mat.from_json(x) for x in obj.get("L", [])]
        M = [Mat.from_json(y) for y in obj.get("M", [])]
        if n is None and not (L or M):
            n = int(obj.get("n", 0))
        return cls.from_generators(L, M, n)


@dataclass
class TwoDClosureReport:
    closed: bool
    condition: str | None = None    # "M" or "L": which space the value escaped
    witness: tuple | None = None    # (kind, i, j) with kind in "LL", "MM", "ML"
    value: Mat | None = None

    def __bool__(self):
        return self.closed

    def to_json(self) -> dict:
        out = {"closed": self.closed}
        if self.witness is not None:
            out["witness"] = {"kind": self.witness[0], "i": self.witness[1], "j": self.witness[2],
                              "space": self.condition, "value": self.value.to_json()}
        return out


def check2dClosure(alg: TwoDAlgebra) -> TwoDClosureReport:
    """Y^2 + X X^T in M and Y X + X Y^* in L, tested on polarized basis pairs.

    Both conditions are quadratic in (X, Y), so it is enough to test
    X_i X_j^T + X_j X_i^T and Y_i Y_j + Y_j Y_i in M and Y_j X_i + X_i conj(Y_j)
    in L over real bases; diagonal pairs report the undoubled product.
    """
    Ls, Ms = alg.L.basis, alg.M.basis
    for i in range(len(Ls)):
        for j in range(i, len(Ls)):
            v = Ls[i] @ Ls[j].T if i == j else Ls[i] @ Ls[j].T + Ls[j] @ Ls[i].T
            if not alg.M.contains(v):
                return TwoDClosureReport(False, "M", ("LL", i, j), v)
    for i in range(len(Ms)):
        for j in range(i, len(Ms)):
            v = Ms[i] @ Ms[j] if i == j else Ms[i] @ Ms[j] + Ms[j] @ Ms[i]
            if not alg.M.contains(v):
                return TwoDClosureReport(False, "M", ("MM", i, j), v)
    for i, X in enumerate(Ls):
        for j, Y in enumerate(Ms):
            v = Y @ X + X @ Y.H
            if not alg.L.contains(v):
                return TwoDClosureReport(False, "L", ("ML", i, j), v)
    return TwoDClosureReport(True)


def check2dClosure_realified(alg: TwoDAlgebra) -> ClosureReport:
    """The same question put to the general closure engine."""
    return is_closed(alg.instance())


@dataclass
class ThreeChainReport:
    ok: bool
    index: int | None = None
    triple: tuple | None = None
    value: Mat | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"check": "3-chain", "ok": self.ok}
        if self.value is not None:
            out["witness"] = {"index": self.index, "value": self.value.to_json()}
        return out


def chain3_value(c, X1: Mat, X2: Mat, X3: Mat) -> Mat:
    """``c X1 X2^T X3 + conj(c) X3 X2^T X1``."""
    c = GaussRational.coerce(c)
    return (X1 @ X2.T @ X3) * c + (X3 @ X2.T @ X1) * c.conjugate()


def complex3Chain(L: Subspace, triples: Sequence[tuple[Mat, Mat, Mat]] | None = None,
                  c=I_UNIT) -> ThreeChainReport:
    """First triple whose chain value leaves L; all basis triples when none are given."""
    if triples is None:
        B = L.basis
        triples = [(a, b, d) for a in B for b in B for d in B]
    for t, trip in enumerate(triples):
        trip = tuple(_cmat(x) for x in trip)
        for x in trip:
            if not L.contains(x):
                raise MembershipError("chain argument outside L")
        v = chain3_value(c, *trip)
        if not L.contains(v):
            return ThreeChainReport(False, t, trip, v)
    return ThreeChainReport(True)


# ------------------------------------------------------ quaternionic example

def iQ(q) -> Mat:
    return quatQ(q) * I_UNIT


def buildCounterexample() -> TwoDAlgebra:
    """L = {i Q(q) : Re q = 0}, M = {a I_4 : a complex}."""
    return TwoDAlgebra.from_generators([iQ(QI), iQ(QJ), iQ(QK)], [Mat.identity(4)])


def counterexample_completion() -> TwoDAlgebra:
    """L gains the real multiples of the identity; M is unchanged."""
    return TwoDAlgebra.from_generators([Mat.identity(4), iQ(QI), iQ(QJ), iQ(QK)], [Mat.identity(4)])


def counterexample_envelope() -> Subspace:
    """Real form of all K(X, Y) with X, Y in {a Q(q) : a complex, q quaternion}."""
    zero = Mat.zeros(4, ring=COMPLEX)
    mats = []
    for q in (Q1, QI, QJ, QK):
        for a in (GaussRational(1), I_UNIT):
            m = quatQ(q) * a
            mats.append(realify_k(m, zero))
            mats.append(realify_k(zero, m))
    return Subspace.span(mats, shape=(8, 8))


def _unit_name(q: Quaternion) -> str:
    return next((name for name, u in QUNITS.items() if u == q), str(q))


def counterexample_witness() -> tuple[GaussRational, tuple[Quaternion, Quaternion, Quaternion], Mat]:
    c = I_UNIT
    qs = (QI, QJ, QK)
    return c, qs, chain3_value(c, *(iQ(q) for q in qs))


@dataclass
class CounterexampleReport:
    dims: tuple[int, int]
    closed_2d: bool
    closed_engine: bool
    chain: ThreeChainReport
    engine_chain: ChainReport
    completion_dims: tuple[int, int]
    completion_matches: bool
    envelope_dim: int
    envelope_matches: bool
    envelope_transpose_closed: bool
    complete: bool

    def checks(self) -> list[tuple[str, bool, dict]]:
        c, qs, value = counterexample_witness()
        return [
            ("dims", self.dims == (3, 2), {"L": self.dims[0], "M": self.dims[1]}),
            ("2d closure", self.closed_2d, {}),
            ("engine closure agrees", self.closed_engine == self.closed_2d, {"engine": self.closed_engine}),
            ("3-chain fails", not self.chain.ok and self.chain.value == Mat.identity(4, COMPLEX) * 2,
             {"c": "i", "q": [_unit_name(q) for q in qs], "value": value.to_json()}),
            ("engine 3-chain fails", self.engine_chain.ok is False, {"status": self.engine_chain.status}),
            ("completion", self.completion_matches and self.completion_dims == (4, 2),
             {"L": self.completion_dims[0], "M": self.completion_dims[1]}),
            ("incomplete", not self.complete, {}),
            ("envelope", self.envelope_matches and self.envelope_dim == 16, {"dim": self.envelope_dim}),
            ("envelope transpose-closed", self.envelope_transpose_closed, {}),
        ]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks())


def run_counterexample(seed: int | None = None) -> CounterexampleReport:
    """Every claim about the quaternionic example, natively and through the engines.

    With a seed, the realified instance is conjugated by a rational orthogonal
    matrix before the engines see it; the expected spaces are conjugated too.
    """
    from .repforge import scramble_matrix

    alg = buildCounterexample()
    c, qs, _ = counterexample_witness()
    chain = complex3Chain(alg.L, [tuple(iQ(q) for q in qs)], c)
    R = scramble_matrix(8, seed)
    inst = alg.instance().conjugate(R)
    closed_engine = bool(is_closed(inst))
    comp = completion_of(inst, seed or 0)
    expected = counterexample_completion().realified().conjugate(R)
    E = assoc_closure(inst, seed or 0)
    expected_E = counterexample_envelope().conjugate(R)
    if comp == expected:
        back = TwoDAlgebra.from_realified(comp.conjugate(R.T))
        comp_dims = back.dims
    else:
        comp_dims = (-1, -1)
    return CounterexampleReport(
        dims=alg.dims,
        closed_2d=bool(check2dClosure(alg)),
        closed_engine=closed_engine,
        chain=chain,
        engine_chain=chain_check(inst, 3),
        completion_dims=comp_dims,
        completion_matches=comp == expected,
        envelope_dim=E.dim,
        envelope_matches=E == expected_E,
        envelope_transpose_closed=E.is_transpose_closed(),
        complete=sym_dim(E) == inst.pi.dim,
    )


# ------------------------------------------------ quaternionic determinant

def quatHermDet(lam, mu, h) -> Fraction:
    """``lam mu - |h|^2`` for the Hermitean matrix [[lam, h], [conj h, mu]]."""
    return Fraction(lam) * Fraction(mu) - Quaternion.coerce(h).norm2()


def in_det_manifold(lam, mu, h) -> bool:
    return Fraction(lam) > 0 and quatHermDet(lam, mu, h) == 1


# ------------------------------------------------------ SO(3) multifields

def trace_free_symmetric_3() -> list[Mat]:
    out = [Mat.diag([1, -1, 0]), Mat.diag([1, 0, -1])]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out.append(Mat.unit(3, i, j) + Mat.unit(3, j, i))
    return out


def _check_transpose_algebra(B: Subspace):
    if B.ring != REAL or B.shape[0] != B.shape[1]:
        raise StructureError("B must be a real square matrix space")
    basis = B.basis
    for b in basis:
        if not B.contains(b.T):
            raise StructureError("B is not closed under transposition")
    for a in basis:
        for b in basis:
            if not B.contains(a @ b):
                raise StructureError("B is not closed under multiplication")


def buildSO3Multifield(B: Subspace) -> MultialgebraInstance:
    """pi = symmetric part of End(R^3) (x) B, multipliers W (x) I_k plus the identity."""
    _check_transpose_algebra(B)
    k = B.shape[0]
    units = [Mat.unit(3, i, j) for i in range(3) for j in range(3)]
    mats = []
    for u in units:
        for b in B.basis:
            m = kron(u, b)
            mats.append(m + m.T)
    pi = Subspace.span(mats, shape=(3 * k, 3 * k))
    eye = Mat.identity(k)
    mults = Subspace.span([kron(w, eye) for w in trace_free_symmetric_3()] + [Mat.identity(3 * k)])
    return MultialgebraInstance(pi, mults)


def rotation_algebra() -> Subspace:
    """span{I_2, [[0, 1], [-1, 0]]}."""
    return Subspace.span([Mat.identity(2), Mat.from_rows([[0, 1], [-1, 0]])])
