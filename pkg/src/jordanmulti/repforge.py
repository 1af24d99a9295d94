"""Constructors for the explicit matrix families and the catalog of simple algebras.

Complex numbers and quaternions are realized as real 2x2 / 4x4 blocks, the
Radon-Hurwitz families are built from the explicit low-dimensional list plus
the tensor recursion, and every catalog algebra can be conjugated by a
seeded rational orthogonal matrix.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidLabelError, MembershipError, StructureError
from .exactla import GaussRational, Mat, Subspace, cayley_orthogonal, kron

# ----------------------------------------------------------- quaternions


@dataclass(frozen=True)
class Quaternion:
    q0: Fraction = Fraction(0)
    q1: Fraction = Fraction(0)
    q2: Fraction = Fraction(0)
    q3: Fraction = Fraction(0)

    def __post_init__(self):
        for f in ("q0", "q1", "q2", "q3"):
            object.__setattr__(self, f, Fraction(getattr(self, f)))

    @classmethod
    def coerce(cls, x) -> "Quaternion":
        if isinstance(x, Quaternion):
            return x
        if isinstance(x, str):
            return QUNITS[x]
        return cls(Fraction(x))

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def norm2(self) -> Fraction:
        return self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2

    @property
    def real(self) -> Fraction:
        return self.q0

    def __add__(self, o):
        o = Quaternion.coerce(o)
        return Quaternion(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)

    def __neg__(self):
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __sub__(self, o):
        return self + (-Quaternion.coerce(o))

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            s = Fraction(o)
            return Quaternion(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
        a0, a1, a2, a3 = self.q0, self.q1, self.q2, self.q3
        b0, b1, b2, b3 = o.q0, o.q1, o.q2, o.q3
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, s):
        return self * s

    def __str__(self):
        return f"{self.q0}+{self.q1}i+{self.q2}j+{self.q3}k"


QUNITS = {"1": Quaternion(1), "i": Quaternion(0, 1), "j": Quaternion(0, 0, 1), "k": Quaternion(0, 0, 0, 1)}
Q1, QI, QJ, QK = (QUNITS[u] for u in "1ijk")


def mixed_product(a: Quaternion, b: Quaternion, c: Quaternion) -> Fraction:
    """``a . (b x c)`` of the imaginary parts."""
    x = (a.q1, a.q2, a.q3)
    y = (b.q1, b.q2, b.q3)
    z = (c.q1, c.q2, c.q3)
    cross = (y[1] * z[2] - y[2] * z[1], y[2] * z[0] - y[0] * z[2], y[0] * z[1] - y[1] * z[0])
    return sum((u * v for u, v in zip(x, cross)), Fraction(0))


# ------------------------------------------------ block realizations

def _gauss(z) -> GaussRational:
    return GaussRational.coerce(z)


def phi(z) -> Mat:
    z = _gauss(z)
    return Mat.from_rows([[z.re, -z.im], [z.im, z.re]])


def psi(z) -> Mat:
    z = _gauss(z)
    return Mat.from_rows([[z.re, z.im], [z.im, -z.re]])


def quatQ(q) -> Mat:
    q = Quaternion.coerce(q)
    a = GaussRational(q.q0, q.q1)
    b = GaussRational(q.q2, q.q3)
    return Mat.blocks([[phi(a), -psi(b)], [psi(b), phi(a)]])


def hatQ(q) -> Mat:
    q = Quaternion.coerce(q)
    return Mat.blocks([[phi(GaussRational(q.q0, q.q1)), phi(GaussRational(q.q2, q.q3))],
                       [-phi(GaussRational(q.q2, -q.q3)), phi(GaussRational(q.q0, -q.q1))]])


def bigO(q, h) -> Mat:
    q, h = Quaternion.coerce(q), Quaternion.coerce(h)
    return Mat.blocks([[quatQ(q), hatQ(h)], [-hatQ(h.conjugate()), quatQ(q.conjugate())]])


# ------------------------------------------------------ Radon-Hurwitz

_D_BASE = {1: 1, 2: 2, 3: 4, 4: 4, 5: 8, 6: 8, 7: 8, 8: 8}


def dimD(p: int) -> int:
    if p < 1:
        raise ValueError("d(p) is defined for p >= 1")
    k, r = divmod(p - 1, 8)
    return _D_BASE[r + 1] * 16 ** k


def has_variants(p: int) -> bool:
    return p % 4 == 0


def _check_variant(p: int, variant):
    if variant in (None, "default"):
        return "plus" if has_variants(p) else None
    if variant not in ("plus", "minus"):
        raise ValueError(f"unknown variant {variant!r}")
    if not has_variants(p):
        raise ValueError(f"p={p} has a single representation; variant {variant!r} is not defined")
    return variant


def _rho_explicit(p: int, variant) -> list[Mat]:
    O = bigO
    if p == 2:
        return [phi(GaussRational(0, 1))]
    if p == 3:
        return [quatQ(QI), quatQ(QJ)]
    if p == 4:
        s = 1 if variant == "plus" else -1
        return [quatQ(QI) * s, quatQ(QJ) * s, quatQ(QK) * s]
    if p == 5:
        return [O(0, Q1), O(0, QI), O(0, QJ), O(0, QK)]
    if p == 6:
        return [O(0, QI), O(0, QJ), O(0, QK), O(QI, 0), O(QJ, 0)]
    if p == 7:
        return [O(0, QI), O(0, QJ), O(0, QK), O(QI, 0), O(QJ, 0), O(QK, 0)]
    if p == 8:
        minus = [O(0, Q1), O(0, QI), O(0, QJ), O(0, QK), O(QI, 0), O(QJ, 0), O(QK, 0)]
        return minus if variant == "minus" else [-m for m in minus]
    if p == 9:
        pi_ = psi(GaussRational(0, 1))
        fi = phi(GaussRational(0, 1))
        return [kron(pi_, O(QI, 0)), kron(pi_, O(QJ, 0)), kron(pi_, O(QK, 0)),
                kron(pi_, O(0, QI)), kron(pi_, O(0, QJ)), kron(pi_, O(0, QK)),
                kron(pi_, O(0, Q1)), kron(fi, O(Q1, 0))]
    raise ValueError(p)


def swap_block() -> Mat:
    """``psi(1) (x) I_8``, the sign-splitting involution used by the recursion."""
    return kron(psi(1), Mat.identity(8))


@lru_cache(maxsize=None)
def _rho_cached(p: int, variant) -> tuple[Mat, ...]:
    if p == 1:
        return ()
    if p <= 9:
        return tuple(_rho_explicit(p, variant))
    low = _rho_cached(p - 8, variant if has_variants(p - 8) else None)
    eye = Mat.identity(dimD(p - 8))
    B = swap_block()
    head = [kron(m, eye) for m in _rho_cached(9, None)]
    tail = [kron(B, m) for m in low]
    return tuple(head + tail)


def rho(p: int, variant=None) -> list[Mat]:
    """Images of ``a_1 .. a_{p-1}``; ``variant`` is ``plus``/``minus`` when ``p % 4 == 0``."""
    if p < 1:
        raise ValueError("rho(p) needs p >= 1")
    return list(_rho_cached(p, _check_variant(p, variant)))


def rh_violations(gens: list[Mat]) -> list[str]:
    """Every failed Radon-Hurwitz relation, as readable strings (empty when all hold)."""
    out = []
    if not gens:
        return out
    n = gens[0].rows
    eye = Mat.identity(n)
    for i, Y in enumerate(gens):
        if Y @ Y != -eye:
            out.append(f"Y{i + 1}^2 != -I")
        if Y.T != -Y:
            out.append(f"Y{i + 1} not skew")
        for j in range(i + 1, len(gens)):
            Z = gens[j]
            if not (Y @ Z + Z @ Y).is_zero():
                out.append(f"Y{i + 1}, Y{j + 1} do not anticommute")
    return out


def product(mats) -> Mat:
    mats = list(mats)
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def variant_sign(p: int, variant) -> int:
    """Sign in the defining product identity of the two variants.

    p = 4: rho(a1 a2) = sign * rho(a3); p = 8: rho(a2 ... a7) = sign * rho(a1).
    """
    g = rho(p, variant)
    if p == 4:
        lhs, rhs = g[0] @ g[1], g[2]
    elif p == 8:
        lhs, rhs = product(g[1:7]), g[0]
    else:
        raise ValueError("the product predicate is stated for p = 4 and p = 8")
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    raise StructureError("product is neither +/- the reference generator")


def volume_sign(p: int, variant=None) -> int:
    """``s`` with ``rho(a_1 ... a_{p-1}) = s I`` (defined when p = 0 mod 4)."""
    g = rho(p, variant)
    w = product(g)
    eye = Mat.identity(dimD(p))
    if w == eye:
        return 1
    if w == -eye:
        return -1
    raise StructureError("volume element is not +/- identity")


# ---------------------------------------------- W and U spaces (List 2)

def _imag_units():
    return [QI, QJ, QK]


def _w_low(p: int) -> list[Mat]:
    if p == 1:
        return []
    if p == 2:
        return [phi(GaussRational(0, 1))]
    if p == 3:
        return [quatQ(QI), quatQ(QJ)]
    if p == 4:
        return [quatQ(u) for u in _imag_units()]
    if p == 5:
        return [bigO(0, u) for u in (Q1, QI, QJ, QK)]
    if p == 6:
        return [bigO(0, u) for u in _imag_units()] + [bigO(QI, 0), bigO(QJ, 0)]
    if p == 7:
        return [bigO(0, u) for u in _imag_units()] + [bigO(u, 0) for u in _imag_units()]
    if p == 8:
        return [bigO(0, u) for u in (Q1, QI, QJ, QK)] + [bigO(u, 0) for u in _imag_units()]
    raise ValueError(p)


def w_generators(p: int) -> list[Mat]:
    """Spanning set of W_p from the block formulas, independent of ``rho``."""
    if p <= 8:
        return _w_low(p)
    m = dimD(p - 8)
    I8, Im = Mat.identity(8), Mat.identity(m)
    Z8m = Mat.zeros(8 * m)
    out = []
    for A in w_generators(p - 8):
        out.append(Mat.blocks([[kron(I8, A), Z8m], [Z8m, -kron(I8, A)]]))
    for q, h in [(u, 0) for u in (Q1, QI, QJ, QK)] + [(0, u) for u in (Q1, QI, QJ, QK)]:
        Oqh = bigO(q, h)
        out.append(Mat.blocks([[Z8m, kron(Oqh, Im)], [-kron(Oqh.T, Im), Z8m]]))
    return out


@lru_cache(maxsize=None)
def spacesWU(p: int) -> tuple[Subspace, Subspace]:
    if p < 1:
        raise ValueError("p >= 1")
    d = dimD(p)
    W = Subspace.span(w_generators(p), shape=(d, d))
    U = W + Subspace.span([Mat.identity(d)])
    return W, U


# ------------------------------------------------------------ spin factors

@lru_cache(maxsize=None)
def spinFactor(N: int) -> Subspace:
    """``{[[l I, A], [A^T, m I]] : A in U_{N-2}}``."""
    if N < 3:
        raise ValueError("spin factors are built for N >= 3")
    d = dimD(N - 2)
    I, Z = Mat.identity(d), Mat.zeros(d)
    gens = [Mat.blocks([[I, Z], [Z, Z]]), Mat.blocks([[Z, Z], [Z, I]])]
    for A in [I] + rho(N - 2):
        gens.append(Mat.blocks([[Z, A], [A.T, Z]]))
    return Subspace.span(gens, shape=(2 * d, 2 * d))


def spin_blocks(N: int, x: Mat):
    d = dimD(N - 2)
    if x.shape != (2 * d, 2 * d) or not spinFactor(N).contains(x):
        raise MembershipError("element is not in the spin factor")
    lam = x[0, 0]
    mu = x[d, d]
    A = Mat.from_rows([[x[i, d + j] for j in range(d)] for i in range(d)])
    return lam, mu, A


def spinAutoT(N: int, x: Mat) -> Mat:
    """Transpose the off-diagonal block: a Jordan automorphism of the spin factor."""
    lam, mu, A = spin_blocks(N, x)
    d = dimD(N - 2)
    I = Mat.identity(d)
    return Mat.blocks([[I * lam, A.T], [A, I * mu]])


def spin_frame(N: int) -> list[Mat]:
    d = dimD(N - 2)
    I, Z = Mat.identity(d), Mat.zeros(d)
    return [Mat.blocks([[I, Z], [Z, Z]]), Mat.blocks([[Z, Z], [Z, I]])]


# ------------------------------------------------------- classical irreps

def _block_unit(r: int, a: int, b: int, block: Mat) -> Mat:
    d = block.rows
    grid = [[Mat.zeros(d) for _ in range(r)] for _ in range(r)]
    grid[a][b] = block
    return Mat.blocks(grid)


_KIND_BLOCK = {"symR": 1, "hermC": 2, "hermH": 4}


def classicalIrrep(kind: str, r: int) -> Subspace:
    if kind not in _KIND_BLOCK:
        raise ValueError(f"unknown kind {kind!r}")
    if r < 1 or (kind != "symR" and r < 2):
        raise ValueError(f"{kind} needs r >= {1 if kind == 'symR' else 2}")
    return _classical(kind, r)


@lru_cache(maxsize=None)
def _classical(kind: str, r: int) -> Subspace:
    if kind == "symR":
        return Subspace.symmetric(r)
    if kind == "hermC":
        rep, units = phi, [GaussRational(1), GaussRational(0, 1)]
        conj = GaussRational.conjugate
    else:
        rep, units = quatQ, [Q1, QI, QJ, QK]
        conj = Quaternion.conjugate
    d = _KIND_BLOCK[kind]
    gens = [_block_unit(r, a, a, Mat.identity(d)) for a in range(r)]
    for a in range(r):
        for b in range(a + 1, r):
            for u in units:
                gens.append(_block_unit(r, a, b, rep(u)) + _block_unit(r, b, a, rep(conj(u))))
    return Subspace.span(gens, shape=(d * r, d * r))


def classical_frame(kind: str, r: int) -> list[Mat]:
    d = _KIND_BLOCK[kind]
    return [_block_unit(r, a, a, Mat.identity(d)) for a in range(r)]


# ----------------------------------------------------------------- catalog

FORMS = ("a", "b", "c", "d", "e")


@dataclass(frozen=True, order=True)
class CatalogLabel:
    form: str
    r: int | None = None
    N: int | None = None
    multiplicity: int = 1
    s1: int | None = None
    s2: int | None = None

    def __post_init__(self):
        f = self.form
        if f not in FORMS:
            raise InvalidLabelError(f"unknown form {f!r}")
        if f in "abc":
            if self.r is None or self.N is not None or self.s1 is not None or self.s2 is not None:
                raise InvalidLabelError(f"form ({f}) takes r and multiplicity only")
            if self.r < (1 if f == "a" else 2):
                raise InvalidLabelError(f"form ({f}) needs r >= {1 if f == 'a' else 2}")
            if self.multiplicity < 1:
                raise InvalidLabelError("multiplicity must be positive")
        elif f == "d":
            if self.N is None or self.r is not None or self.s1 is not None or self.s2 is not None:
                raise InvalidLabelError("form (d) takes N and multiplicity only")
            if self.N < 5 or self.N == 6:
                raise InvalidLabelError("form (d) needs N = 5 or N >= 7")
            if self.multiplicity < 1:
                raise InvalidLabelError("multiplicity must be positive")
        else:
            if self.N is None or self.s1 is None or self.s2 is None or self.r is not None:
                raise InvalidLabelError("form (e) takes N, s1 and s2")
            if self.N < 6 or self.N % 4 != 2:
                raise InvalidLabelError("form (e) needs N = 2 mod 4 and N >= 6")
            if self.s1 < 1 or self.s2 < 1:
                raise InvalidLabelError("form (e) needs s1 > 0 and s2 > 0")
            object.__setattr__(self, "multiplicity", self.s1 + self.s2)

    @property
    def block_dim(self) -> int:
        f = self.form
        if f in "abc":
            return self.r * _KIND_BLOCK[{"a": "symR", "b": "hermC", "c": "hermH"}[f]]
        return 2 * dimD(self.N - 2)

    @property
    def ambientN(self) -> int:
        return self.block_dim * self.multiplicity

    @property
    def alg_dim(self) -> int:
        f, r = self.form, self.r
        if f == "a":
            return r * (r + 1) // 2
        if f == "b":
            return r * r
        if f == "c":
            return r * (2 * r - 1)
        return self.N

    @property
    def complete(self) -> bool:
        """Completeness by form: exactly (a), (b) and (c) are complete."""
        return self.form in "abc"

    @property
    def peirce(self) -> tuple[int, int]:
        f = self.form
        if f in "abc":
            return (self.r, {"a": 1, "b": 2, "c": 4}[f])
        return (2, self.N - 2)

    def canonical(self) -> "CatalogLabel":
        """Representative of the (s1, s2) ~ (s2, s1) equivalence."""
        if self.form == "e" and self.s1 > self.s2:
            return CatalogLabel("e", N=self.N, s1=self.s2, s2=self.s1)
        return self

    def to_json(self) -> dict:
        out = {"form": self.form}
        if self.r is not None:
            out["r"] = self.r
        if self.N is not None:
            out["N"] = self.N
        if self.form == "e":
            out["s1"], out["s2"] = self.s1, self.s2
        else:
            out["multiplicity"] = self.multiplicity
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CatalogLabel":
        try:
            form = obj["form"]
        except (KeyError, TypeError):
            raise InvalidLabelError("label needs a form")
        kw = {}
        for key in ("r", "N", "s1", "s2"):
            if obj.get(key) is not None:
                kw[key] = int(obj[key])
        if form != "e":
            kw["multiplicity"] = int(obj.get("multiplicity", 1))
        return cls(form, **kw)

    def __str__(self):
        if self.form in "abc":
            return f"({self.form}) r={self.r} x{self.multiplicity}"
        if self.form == "d":
            return f"(d) N={self.N} x{self.multiplicity}"
        return f"(e) N={self.N} s1={self.s1} s2={self.s2}"


def _replicate(S: Subspace, k: int) -> Subspace:
    if k == 1:
        return S
    eye = Mat.identity(k)
    n = S.shape[0] * k
    return Subspace.span([kron(eye, b) for b in S.basis], shape=(n, n))


def component_of(label: CatalogLabel) -> Subspace:
    f = label.form
    if f == "a":
        return classicalIrrep("symR", label.r)
    if f == "b":
        return classicalIrrep("hermC", label.r)
    if f == "c":
        return classicalIrrep("hermH", label.r)
    return spinFactor(label.N)


@lru_cache(maxsize=None)
def catalogBuild(label: CatalogLabel) -> Subspace:
    if label.form != "e":
        return _replicate(component_of(label), label.multiplicity)
    A = spinFactor(label.N)
    e1, e2 = Mat.identity(label.s1), Mat.identity(label.s2)
    n = label.ambientN
    gens = [Mat.blockdiag(kron(e1, b), kron(e2, spinAutoT(label.N, b))) for b in A.basis]
    return Subspace.span(gens, shape=(n, n))


def native_frame(label: CatalogLabel) -> list[Mat]:
    """Resolution of unity by unresolvable idempotents in the catalog coordinates."""
    f = label.form
    if f in "abc":
        base = classical_frame({"a": "symR", "b": "hermC", "c": "hermH"}[f], label.r)
    else:
        base = spin_frame(label.N)
    if f == "e":
        return [Mat.blockdiag(kron(Mat.identity(label.s1), E), kron(Mat.identity(label.s2), E))
                for E in base]
    eye = Mat.identity(label.multiplicity)
    return [kron(eye, E) for E in base]


def catalog_labels(max_ambient: int) -> list[CatalogLabel]:
    """Every catalog label whose ambient size is at most ``max_ambient``."""
    out = []
    for r in range(1, max_ambient + 1):
        for k in range(1, max_ambient // r + 1):
            out.append(CatalogLabel("a", r=r, multiplicity=k))
    for form, d in (("b", 2), ("c", 4)):
        for r in range(2, max_ambient // d + 1):
            for k in range(1, max_ambient // (d * r) + 1):
                out.append(CatalogLabel(form, r=r, multiplicity=k))
    N = 5
    while 2 * dimD(N - 2) <= max_ambient:
        if N != 6:
            for k in range(1, max_ambient // (2 * dimD(N - 2)) + 1):
                out.append(CatalogLabel("d", N=N, multiplicity=k))
        if N % 4 == 2:
            blocks = max_ambient // (2 * dimD(N - 2))
            for s1 in range(1, blocks):
                for s2 in range(s1, blocks - s1 + 1):
                    out.append(CatalogLabel("e", N=N, s1=s1, s2=s2))
        N += 1
    return out


# ---------------------------------------------------------------- scramble

def random_skew(n: int, seed: int) -> Mat:
    rng = random.Random(seed)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.choice((-1, 0, 1))
            rows[i][j] = v
            rows[j][i] = -v
    return Mat.from_rows(rows)


def scramble_matrix(n: int, seed: int | None) -> Mat:
    """Seeded rational orthogonal matrix; ``seed=None`` gives the identity."""
    if seed is None:
        return Mat.identity(n)
    return cayley_orthogonal(random_skew(n, seed))


def scramble(pi: Subspace, seed: int | None) -> tuple[Subspace, Mat]:
    if pi.shape[0] != pi.shape[1]:
        raise StructureError("scramble needs a square ambient space")
    R = scramble_matrix(pi.shape[0], seed)
    return pi.conjugate(R), R
