"""Associative envelopes, completions, completeness and chain identities."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import MembershipError, PreconditionError, StructureError
from .exactla import REAL, Mat, Subspace, fmpq_mat, saturate, sym_part
from .jordancore import MultialgebraInstance, _transpose_perm, is_closed, jordan_product
from .modular import _pivots, fmpz_mat, lift_rref, nmod_mat, prime, primes, reshape, rref_mod

CHAIN_MAX_AMBIENT = 32
CHAIN_MAX_DIM = 20


def _blocks(rows: fmpz_mat, n: int) -> list[fmpz_mat]:
    D = n * n
    ent = rows.entries()
    return [fmpz_mat(n, n, ent[r * D:(r + 1) * D]) for r in range(rows.nrows())]


def _eye(n: int) -> fmpz_mat:
    e = fmpz_mat(n, n)
    for i in range(n):
        e[i, i] = 1
    return e


def _combo(mats: Sequence[fmpz_mat], rng: random.Random) -> fmpz_mat:
    out = mats[0] * rng.randint(1, 3)
    for m in mats[1:]:
        out += m * rng.randint(-3, 3)
    return out


def _mixed(letters: Sequence[fmpz_mat], rng: random.Random) -> fmpz_mat:
    """Random combination of letters and of products of letter pairs.

    Combinations of letters alone can all lie in a small subalgebra (in a
    spin factor any two of them generate at most four dimensions); the pair
    products break that.
    """
    out = _combo(letters, rng)
    order = list(range(len(letters)))
    rng.shuffle(order)
    for i, j in zip(range(len(letters)), order):
        if i != j:
            out += (letters[i] * letters[j]) * rng.randint(-3, 3)
    return out


def _nmod_rows(rank: int, ent: list[int], D: int, p: int) -> nmod_mat:
    return nmod_mat(rank, D, ent, p) if rank else nmod_mat(0, D, [], p)


def _outside(W: nmod_mat, piv: tuple[int, ...], C: nmod_mat) -> nmod_mat:
    """Rows of ``C`` minus their projection onto the echelon rows ``W``."""
    if not piv:
        return C
    sel = nmod_mat(W.ncols(), len(piv), W.modulus())
    for j, c in enumerate(piv):
        sel[c, j] = 1
    return C - (C * sel) * W


def _independent_mod(W: nmod_mat, piv: tuple[int, ...], C: nmod_mat) -> list[int]:
    """Indices of a maximal set of rows of ``C`` independent modulo the rows of ``W``."""
    R = _outside(W, piv, C)
    red, rank = R.transpose().rref()
    if rank == 0:
        return []
    top = nmod_mat(rank, red.nrows(), W.modulus())
    for i in range(rank):
        top[i, i] = 1
    ent = [int(x) for x in (top * red).entries()]
    return list(_pivots(ent, rank, C.nrows()))


def _right_kron(g: fmpz_mat) -> fmpz_mat:
    """``K`` with ``vec(w) K = vec(w g)``."""
    n = g.nrows()
    K = fmpz_mat(n * n, n * n)
    for i in range(n):
        for k in range(n):
            for j in range(n):
                x = g[k, j]
                if x != 0:
                    K[i * n + k, i * n + j] = x
    return K


def _stack(mats: Sequence[nmod_mat], p: int) -> nmod_mat:
    """Vertical stack, done with embedding products so entries stay in C."""
    total = sum(m.nrows() for m in mats)
    out = None
    at = 0
    for m in mats:
        k = m.nrows()
        if k == 0:
            continue
        emb = nmod_mat(total, k, p)
        for i in range(k):
            emb[at + i, i] = 1
        part = emb * m
        out = part if out is None else out + part
        at += k
    return out


def _discover_words(start: fmpz_mat, gens: Sequence[fmpz_mat], kron: Sequence[fmpz_mat],
                    n: int, p: int) -> list[fmpz_mat]:
    """Products ``s g_1 ... g_m`` spanning the closure modulo ``p`` (exact integer matrices).

    The search runs modulo ``p``; only the accepted words are multiplied out
    exactly.
    """
    D = n * n
    G = len(gens)
    K = [nmod_mat(k, p) for k in kron]
    W = nmod_mat(0, D, [], p)
    piv: tuple[int, ...] = ()
    words: list[fmpz_mat] = []
    exact = _blocks(start, n)
    parents = None
    C = nmod_mat(start, p)
    while True:
        acc = _independent_mod(W, piv, C)
        if not acc:
            break
        pick = nmod_mat(len(acc), C.nrows(), p)
        for j, i in enumerate(acc):
            pick[j, i] = 1
        new = pick * C
        rank, piv, ent = rref_mod(_stack([W, new], p) if W.nrows() else new)
        W = nmod_mat(rank, D, ent, p)
        if parents is None:
            accepted = [exact[i] for i in acc]
        else:
            accepted = [parents[i // G] * gens[i % G] for i in acc]
        words.extend(accepted)
        parents = accepted
        # row g + G j of the next batch is word j times gens[g]
        C = _stack([new * k for k in K], p)
        perm = nmod_mat(C.nrows(), C.nrows(), p)
        m = len(acc)
        for j in range(m):
            for g in range(G):
                perm[j * G + g, g * m + j] = 1
        C = perm * C
    return words


def _perp_rows(num: fmpz_mat, den, piv: tuple[int, ...]) -> fmpz_mat:
    """Integer basis of the orthogonal complement of an echelon row space."""
    D = num.ncols()
    pivset = set(piv)
    free = [c for c in range(D) if c not in pivset]
    out = fmpz_mat(len(free), D)
    for i, f in enumerate(free):
        out[i, f] = den
        for r, c in enumerate(piv):
            out[i, c] = -num[r, f]
    return out


def _first_escaping_letter(cand: fmpq_mat, piv: tuple[int, ...], letters: Sequence[fmpz_mat], n: int) -> int | None:
    """Index of the first letter ``l`` with ``cand * l`` not inside ``cand``, else None."""
    r = cand.nrows()
    D = n * n
    if r == 0 or r == D:
        return None
    num, den = cand.numer_denom()
    if r <= D - r:
        tall = reshape(num, r * n, n)
        for i, l in enumerate(letters):
            if not _contains_rows(cand, piv, reshape(tall * l, r, D)):
                return i
        return None
    # <w l, X> = <w, X l^T>, so E l lies in E iff the complement is stable under l^T
    K = _perp_rows(num, den, piv)
    tall = reshape(K, (D - r) * n, n)
    numT = num.transpose()
    for i, l in enumerate(letters):
        if not (reshape(tall * l.transpose(), D - r, D) * numT).is_zero():
            return i
    return None


def _contains_rows(cand: fmpq_mat, piv: tuple[int, ...], rows: fmpz_mat) -> bool:
    if rows.nrows() == 0:
        return True
    if cand.nrows() == 0:
        return rows.is_zero()
    num, den = cand.numer_denom()
    sel = fmpz_mat(cand.ncols(), len(piv))
    for j, c in enumerate(piv):
        sel[c, j] = 1
    return (rows * den - (rows * sel) * num).is_zero()


def right_closure(start: fmpz_mat, gens: Sequence[fmpz_mat], n: int) -> tuple[fmpq_mat, tuple[int, ...]]:
    """Smallest span containing the rows of ``start`` and stable under ``x -> x g``.

    Products independent modulo a prime are found first; a prime-by-prime
    reconstruction of their echelon form is accepted once it has the same
    dimension and is checked exactly to contain ``start`` and to be stable
    under every ``g``.
    """
    D = n * n
    if start.nrows() == 0 or start.is_zero():
        return fmpq_mat(0, D), ()
    kron = [_right_kron(g) for g in gens]
    for i, p in enumerate(primes()):
        words = _discover_words(start, gens, kron, n, p)
        rows = fmpz_mat(len(words), D, [x for w in words for x in w.entries()])

        def modular(q):
            return rref_mod(nmod_mat(rows, q))

        def verify(cand, piv):
            # the words are independent, so dim E >= len(words); a closed
            # candidate of that dimension containing start is E itself
            return (len(piv) == len(words) and _contains_rows(cand, piv, start)
                    and _first_escaping_letter(cand, piv, gens, n) is None)

        try:
            return lift_rref(modular, verify, D, prefer="max", max_primes=200)
        except ArithmeticError:
            if i >= 3:
                raise


def assoc_closure(inst: MultialgebraInstance, seed: int = 0) -> Subspace:
    """Smallest subspace containing pi and closed under ``(x, y) -> x a y``.

    This is the span of the alternating words ``s_1 a_1 s_2 ... a_k s_{k+1}``,
    i.e. the closure of pi under right multiplication by the letters
    ``a s``.  Two random combinations of letters usually generate an algebra
    containing every letter, and stability under them is then enough.
    """
    n = inst.n
    pi = inst.pi
    if pi.dim == 0 or inst.mults.dim == 0:
        return pi
    D = n * n
    start = pi.integer_basis()
    letters = [a * s for a in _blocks(inst.mults.integer_basis(), n) for s in _blocks(start, n)]
    rng = random.Random(seed)
    gens = list(letters) if len(letters) <= 2 else [_mixed(letters, rng) for _ in range(2)]
    unit = fmpz_mat(1, D, [1 if i % (n + 1) == 0 else 0 for i in range(D)])
    letter_rows = fmpz_mat(len(letters), D, [x for l in letters for x in l.entries()])
    while True:
        # F = unital algebra generated by gens; once every letter lies in F,
        # stability under gens gives stability under every letter
        F, fpiv = right_closure(unit, gens, n)
        bad = _outside_rows(F, fpiv, letter_rows)
        if not bad:
            break
        gens.extend(letters[i] for i in bad)
    basis, piv = right_closure(start, gens, n)
    return Subspace(pi.shape, REAL, basis, piv)


def _outside_rows(cand: fmpq_mat, piv: tuple[int, ...], rows: fmpz_mat) -> list[int]:
    num, den = cand.numer_denom()
    sel = fmpz_mat(cand.ncols(), len(piv))
    for j, c in enumerate(piv):
        sel[c, j] = 1
    res = rows * den - (rows * sel) * num
    w = rows.ncols()
    ent = res.entries()
    return [r for r in range(rows.nrows()) if any(ent[r * w:(r + 1) * w])]


def assoc_closure_by_words(inst: MultialgebraInstance) -> Subspace:
    """Reference closure: exact saturation under every letter at once."""
    n = inst.n
    D = n * n
    pi = inst.pi
    if pi.dim == 0 or inst.mults.dim == 0:
        return pi
    letters = [a @ s for a in inst.mults.basis for s in pi.basis]
    lf = [l.flint for l in letters]

    def expand(frontier, _basis):
        ent = frontier.entries()
        out = []
        for r in range(frontier.nrows()):
            w = fmpq_mat(n, n, ent[r * D:(r + 1) * D])
            for l in lf:
                out.extend((w * l).entries())
        return fmpq_mat(len(out) // D, D, out) if out else fmpq_mat(0, D)

    basis, piv = saturate(pi.rows_matrix, expand)
    return Subspace(pi.shape, REAL, basis, piv)


def completion_of(inst: MultialgebraInstance, seed: int = 0) -> Subspace:
    return sym_part(assoc_closure(inst, seed))


def sym_dim(E: Subspace) -> int:
    """Dimension of the symmetric part of a transpose-closed subspace.

    Modular ranks of the symmetric and skew parts of a basis are lower bounds
    for the two summands; when they add up to ``dim E`` both are exact.
    """
    if E.dim == 0:
        return 0
    n = E.shape[0]
    B = E.integer_basis()
    Bt = B * _transpose_perm(n)
    if not E.integer_residual(Bt).is_zero():
        raise StructureError("symmetric part requires a transpose-closed subspace")
    S, A = B + Bt, B - Bt
    for p in (prime(0), prime(1), prime(2)):
        s = nmod_mat(S, p).rank()
        if s + nmod_mat(A, p).rank() == E.dim:
            return s
    return S.rank()


def is_complete(inst: MultialgebraInstance, seed: int = 0, envelope: Subspace | None = None) -> bool:
    """pi is complete when it is the whole symmetric part of its envelope.

    pi always lies in that symmetric part, so comparing dimensions suffices.
    """
    rep = is_closed(inst)
    if not rep.closed:
        raise PreconditionError("completeness is only defined for closed instances")
    E = envelope if envelope is not None else assoc_closure(inst, seed)
    return sym_dim(E) == inst.pi.dim


# ----------------------------------------------------------------- chains

@dataclass
class ChainReport:
    ok: bool | None           # None when the enumeration was skipped
    length: int
    witness: tuple | None = None   # (K indices, A indices)
    value: Mat | None = None
    status: str = "ok"

    def __bool__(self):
        return bool(self.ok)

    def to_json(self) -> dict:
        out = {"check": f"{self.length}-chain", "ok": self.ok, "status": self.status}
        if self.witness is not None:
            out["witness"] = {"K": list(self.witness[0]), "A": list(self.witness[1]),
                              "value": self.value.to_json()}
        return out


def chain_value(Ks: Sequence[Mat], As: Sequence[Mat]) -> Mat:
    """``K1 A1 K2 ... K_m`` plus the same word read backwards."""
    if len(As) != len(Ks) - 1:
        raise ValueError("need one multiplier between consecutive K's")
    fwd = Ks[0]
    for a, k in zip(As, Ks[1:]):
        fwd = fwd @ a @ k
    bwd = Ks[-1]
    for a, k in zip(reversed(As), reversed(Ks[:-1])):
        bwd = bwd @ a @ k
    return fwd + bwd


def chain_check(inst: MultialgebraInstance, length: int, enforce_budget: bool = True) -> ChainReport:
    """Search basis tuples in lexicographic order for a chain outside pi."""
    if length not in (3, 4):
        raise ValueError("chain length must be 3 or 4")
    if not is_closed(inst).closed:
        raise PreconditionError("chain identities are checked on closed instances")
    K = inst.pi.basis
    A = inst.mults.basis
    if enforce_budget and (inst.n > CHAIN_MAX_AMBIENT or len(K) > CHAIN_MAX_DIM):
        return ChainReport(None, length, status="exceeds budget")
    if not K or not A:
        return ChainReport(True, length)
    nK, nA = len(K), len(A)
    # pair products K_i A_a K_j, reused as prefixes
    pair = {(i, a, j): K[i] @ A[a] @ K[j] for i in range(nK) for a in range(nA) for j in range(nK)}
    for i in range(nK):
        tuples, values = [], []
        if length == 3:
            for a in range(nA):
                for j in range(nK):
                    pre = pair[(i, a, j)]
                    for b in range(nA):
                        for k in range(nK):
                            x = pre @ A[b] @ K[k]
                            tuples.append(((i, j, k), (a, b)))
                            values.append(x + x.T)
        else:
            for a in range(nA):
                for j in range(nK):
                    pre = pair[(i, a, j)]
                    for b in range(nA):
                        for k in range(nK):
                            for c in range(nA):
                                for l in range(nK):
                                    x = pre @ A[b] @ pair[(k, c, l)]
                                    tuples.append(((i, j, k, l), (a, b, c)))
                                    values.append(x + x.T)
        bad = inst.pi.first_outside_of(values)
        if bad is not None:
            return ChainReport(False, length, tuples[bad], values[bad], status="witness")
    return ChainReport(True, length)


def classical_4chain(pi0: Subspace, quadruple: Sequence[Mat]) -> tuple[Mat, bool]:
    """``Y1 Y2 Y3 Y4 + Y4 Y3 Y2 Y1`` and whether it lies in pi0."""
    if len(quadruple) != 4:
        raise ValueError("need four matrices")
    for Y in quadruple:
        if not pi0.contains(Y):
            raise MembershipError("chain argument outside the algebra")
    n = pi0.shape[0]
    eye = Mat.identity(n)
    v = chain_value(list(quadruple), [eye, eye, eye])
    return v, pi0.contains(v)


# ----------------------------------------------------- maps between algebras

class LinearMap:
    """Linear map given by the images of the domain's canonical basis."""

    def __init__(self, domain: Subspace, codomain: Subspace, images: Sequence[Mat]):
        if len(images) != domain.dim:
            raise ValueError("one image per domain basis element is required")
        if not codomain.contains_all(images):
            raise MembershipError("image outside the codomain")
        self.domain = domain
        self.codomain = codomain
        self.images = list(images)

    @classmethod
    def from_function(cls, domain: Subspace, codomain: Subspace, f) -> "LinearMap":
        return cls(domain, codomain, [f(b) for b in domain.basis])

    @classmethod
    def identity(cls, S: Subspace) -> "LinearMap":
        return cls(S, S, S.basis)

    @classmethod
    def conjugation(cls, S: Subspace, R: Mat) -> "LinearMap":
        """``x -> R^T x R`` from S onto its conjugate."""
        return cls.from_function(S, S.conjugate(R), lambda x: R.T @ x @ R)

    def __call__(self, x: Mat) -> Mat:
        c = self.domain.coords(x)
        out = Mat.zeros(*self.codomain.shape)
        for ci, img in zip(c, self.images):
            if ci:
                out = out + img * ci
        return out

    def is_jordan_isomorphism(self) -> bool:
        if self.domain.dim != self.codomain.dim:
            return False
        if Subspace.span(self.images, shape=self.codomain.shape) != self.codomain:
            return False
        B = self.domain.basis
        for i in range(len(B)):
            for j in range(i, len(B)):
                if self(jordan_product(B[i], B[j])) != jordan_product(self.images[i], self.images[j]):
                    return False
        return True


def iso_chain_compat(T: LinearMap, quadruple: Sequence[Mat]) -> bool:
    """Whether ``T`` commutes with the classical 4-chain on this quadruple."""
    if not T.is_jordan_isomorphism():
        raise StructureError("map is not a Jordan isomorphism")
    for Y in quadruple:
        if not T.domain.contains(Y):
            raise MembershipError("chain argument outside the domain")
    n = T.domain.shape[0]
    eye = [Mat.identity(n)] * 3
    lhs_chain = chain_value(list(quadruple), eye)
    if not T.domain.contains(lhs_chain):
        return False
    m = T.codomain.shape[0]
    rhs = chain_value([T(Y) for Y in quadruple], [Mat.identity(m)] * 3)
    return T(lhs_chain) == rhs
