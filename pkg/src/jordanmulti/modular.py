"""Linear algebra modulo word-sized primes, with rational reconstruction.

The rank of an integer matrix modulo a prime never exceeds its rational
rank.  So a modular rank of genuine elements is a lower bound for the
dimension of their rational span, and a modular nullity is an upper bound
for the dimension of a rational kernel.  Callers only trust a number once
the two kinds of bound meet, or once reconstructed rational data has been
verified exactly.
"""
from __future__ import annotations

import math
from typing import Callable, Iterator, Sequence

import flint


fmpq = flint.fmpq
fmpq_mat = flint.fmpq_mat
fmpz_mat = flint.fmpz_mat
nmod_mat = flint.nmod_mat

_PRIMES: list[int] = []


def primitive_rows(rows: fmpq_mat) -> list[list[int]]:
    """Each row scaled to a primitive integer vector (zero rows kept as zeros)."""
    n = rows.ncols()
    ent = rows.entries()
    out = []
    for r in range(rows.nrows()):
        v = ent[r * n:(r + 1) * n]
        den = 1
        for x in v:
            if x != 0:
                den = math.lcm(den, int(x.q))
        iv = [int(x * den) for x in v]
        g = 0
        for x in iv:
            if x:
                g = math.gcd(g, x)
        out.append([x // g for x in iv] if g > 1 else iv)
    return out


def prime(i: int) -> int:
    """The ``i``-th prime below ``2**62``, counting downwards."""
    while len(_PRIMES) <= i:
        p = _PRIMES[-1] if _PRIMES else 2 ** 62
        p -= 1
        while not flint.fmpz(p).is_prime():
            p -= 1
        _PRIMES.append(p)
    return _PRIMES[i]


def primes(start: int = 0) -> Iterator[int]:
    i = start
    while True:
        yield prime(i)
        i += 1


def integer_matrix(m: fmpq_mat) -> fmpz_mat:
    """Rows of ``m`` scaled to primitive integer vectors (same row space)."""
    if m.nrows() == 0:
        return fmpz_mat(0, m.ncols())
    return fmpz_mat(primitive_rows(m))


def scaled(m: fmpq_mat) -> fmpz_mat:
    """``m`` times the common denominator of its entries (same kernel and row space)."""
    return m.numer_denom()[0]


def reduce(m: fmpz_mat, p: int) -> nmod_mat:
    return nmod_mat(m, p)


def reshape(m, rows: int, cols: int):
    """Same row-major entries, new shape (works for flint integer and modular matrices)."""
    if isinstance(m, nmod_mat):
        return nmod_mat(rows, cols, [int(x) for x in m.entries()], m.modulus())
    return type(m)(rows, cols, m.entries())


def vstack(mats: Sequence, p: int | None = None):
    """Stack matrices with the same column count."""
    mats = [m for m in mats if m.nrows()]
    if not mats:
        raise ValueError("nothing to stack")
    cols = mats[0].ncols()
    ent = []
    for m in mats:
        ent.extend(int(x) for x in m.entries()) if p is not None else ent.extend(m.entries())
    rows = sum(m.nrows() for m in mats)
    return nmod_mat(rows, cols, ent, p) if p is not None else type(mats[0])(rows, cols, ent)


def transpose_permutation(n: int) -> fmpz_mat:
    """Permutation ``T`` with ``vec(x) T = vec(x^T)`` for row-major ``n x n`` vectorizations."""
    D = n * n
    t = fmpz_mat(D, D)
    for i in range(n):
        for j in range(n):
            t[i * n + j, j * n + i] = 1
    return t


def kron_int(a: fmpz_mat, b: fmpz_mat) -> fmpz_mat:
    ar, ac, br, bc = a.nrows(), a.ncols(), b.nrows(), b.ncols()
    A = a.entries()
    B = b.entries()
    width = ac * bc
    out = [0] * (ar * br * width)
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
    return fmpz_mat(ar * br, width, out)


def commutation_system(c: fmpz_mat) -> fmpz_mat:
    """Matrix ``S`` with ``S vec(x) = vec(x c - c x)`` (row-major vectorization)."""
    n = c.nrows()
    eye = fmpz_mat(n, n)
    for i in range(n):
        eye[i, i] = 1
    return kron_int(eye, c.transpose()) - kron_int(c, eye)


def rank_mod(m: fmpz_mat, p: int) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return nmod_mat(m, p).rank()


def _pivots(ent: list[int], rank: int, ncols: int) -> tuple[int, ...]:
    piv = []
    for r in range(rank):
        c = piv[-1] + 1 if piv else 0
        base = r * ncols
        while ent[base + c] == 0:
            c += 1
        piv.append(c)
    return tuple(piv)


def rref_mod(m: nmod_mat) -> tuple[int, tuple[int, ...], list[int]]:
    """Rank, pivot columns and entries of the nonzero rows of the reduced echelon form."""
    ncols = m.ncols()
    if m.nrows() == 0:
        return 0, (), []
    red, rank = m.rref()
    ent = [int(x) for x in red.entries()[: rank * ncols]]
    return rank, _pivots(ent, rank, ncols), ent


def independent_rows(ints: fmpz_mat, p: int | None = None) -> list[int]:
    """Indices of rows that are independent modulo ``p`` (hence over the rationals)."""
    if ints.nrows() == 0:
        return []
    p = p or prime(0)
    red, rank = nmod_mat(ints.transpose(), p).rref()
    m = ints.nrows()
    ent = [int(x) for x in red.entries()[: rank * m]]
    return list(_pivots(ent, rank, m))


def kernel_rref_mod(system: fmpz_mat, p: int) -> tuple[int, tuple[int, ...], list[int]]:
    """Reduced echelon basis of ``{x : system x = 0}`` modulo ``p``."""
    n = system.ncols()
    if system.nrows() == 0:
        eye = nmod_mat(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)], p)
        return rref_mod(eye)
    basis, nullity = nmod_mat(system, p).nullspace()
    if nullity == 0:
        return 0, (), []
    cols = basis.entries()
    rows = [int(cols[i * n + j]) for j in range(nullity) for i in range(n)]
    return rref_mod(nmod_mat(nullity, n, rows, p))


def rational_reconstruct(a: int, m: int) -> tuple[int, int] | None:
    """``(n, d)`` with ``n = a d (mod m)`` and ``|n|, d <= sqrt(m / 2)``, if one exists."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        s1, r1 = -s1, -r1
    return r1, s1


def _lift_entries(res: list[int], P: int) -> list[fmpq] | None:
    bound = math.isqrt(P // 2)
    half = P // 2
    den = 1
    out = []
    for x in res:
        if x == 0:
            out.append(fmpq(0))
            continue
        y = (x * den) % P
        if y > half:
            y -= P
        if abs(y) <= bound and den <= bound:
            out.append(fmpq(y, den))
            continue
        nd = rational_reconstruct(x, P)
        if nd is None:
            return None
        out.append(fmpq(*nd))
        den = den * nd[1] // math.gcd(den, nd[1])
    return out


def _free_positions(rank: int, piv: tuple[int, ...], ncols: int) -> list[int]:
    """Flat positions of the entries of an echelon form that are not forced to 0 or 1."""
    pivset = set(piv)
    out = []
    for r in range(rank):
        base = r * ncols
        out.extend(base + c for c in range(piv[r] + 1, ncols) if c not in pivset)
    return out


def _agrees(vals: list[fmpq], res: list[int], p: int) -> bool:
    for v, x in zip(vals, res):
        q = int(v.q) % p
        if q == 0 or (int(v.p) - x * q) % p:
            return False
    return True


def lift_rref(modular: Callable[[int], tuple[int, tuple[int, ...], list[int]]],
              verify: Callable[[fmpq_mat, tuple[int, ...]], bool],
              ncols: int, prefer: str = "max", max_primes: int = 400) -> tuple[fmpq_mat, tuple[int, ...]]:
    """Rational reduced echelon form from its images modulo many primes.

    ``modular(p)`` returns ``(rank, pivots, entries)`` modulo ``p``; ranks
    differing between primes are settled by ``prefer`` (the larger rank for
    spans, the smaller for kernels).  A reconstruction that also matches the
    next prime is handed to ``verify``, and returned only if that exact check
    accepts it.
    """
    key = None
    free: list[int] = []
    resid: list[int] = []
    P = 1
    pending = None
    for i, p in enumerate(primes()):
        if i >= max_primes:
            break
        try:
            rank, piv, ent = modular(p)
        except ZeroDivisionError:
            continue
        k = (rank, piv)
        if key is None or (k != key and ((rank > key[0]) if prefer == "max" else (rank < key[0]))):
            key, P, pending = k, p, None
            free = _free_positions(rank, piv, ncols)
            resid = [ent[f] for f in free]
        elif k != key:
            continue
        else:
            new = [ent[f] for f in free]
            if pending is not None:
                if _agrees(pending, new, p):
                    cand = _assemble(key, free, pending, ncols)
                    if verify(cand, key[1]):
                        return cand, key[1]
                pending = None
            inv = pow(P, -1, p)
            resid = [x + P * (((y - x) * inv) % p) for x, y in zip(resid, new)]
            P *= p
        if key[0] == 0 or not free:
            cand = _assemble(key, free, [], ncols)
            if verify(cand, key[1]):
                return cand, key[1]
            continue
        pending = _lift_entries(resid, P)
    raise ArithmeticError("modular reconstruction did not converge")


def _assemble(key, free: list[int], vals: list[fmpq], ncols: int) -> fmpq_mat:
    rank, piv = key
    out = [fmpq(0)] * (rank * ncols)
    for r, c in enumerate(piv):
        out[r * ncols + c] = fmpq(1)
    for f, v in zip(free, vals):
        out[f] = v
    return fmpq_mat(rank, ncols, out) if rank else fmpq_mat(0, ncols)


def _select(m: fmpz_mat, cols: Sequence[int]) -> fmpz_mat:
    sel = fmpz_mat(m.ncols(), len(cols))
    for j, c in enumerate(cols):
        sel[c, j] = 1
    return m * sel


def modular_echelon(ints: fmpz_mat) -> tuple[fmpq_mat, tuple[int, ...]]:
    """Reduced echelon form of the row space of an integer matrix.

    The candidate is accepted once every input row is its combination along
    the pivot columns; its rank is a modular rank, hence no larger than the
    true one, so the spans agree.
    """
    n = ints.ncols()

    def modular(p):
        return rref_mod(nmod_mat(ints, p))

    def verify(cand, piv):
        if len(piv) == n:
            return True
        if not piv:
            return ints.is_zero()
        num, den = cand.numer_denom()
        return (ints * den - _select(ints, piv) * num).is_zero()

    return lift_rref(modular, verify, n, prefer="max")


def modular_kernel(system: fmpz_mat) -> fmpq_mat:
    """Reduced echelon basis of ``{x : system x = 0}``.

    Accepted once every candidate vector is checked to be in the kernel; the
    modular nullity bounds the true one from above, so nothing is missing.
    """
    n = system.ncols()

    def modular(p):
        return kernel_rref_mod(system, p)

    def verify(cand, piv):
        if cand.nrows() == 0:
            return True
        num, _ = cand.numer_denom()
        return (system * num.transpose()).is_zero()

    return lift_rref(modular, verify, n, prefer="min")[0]
