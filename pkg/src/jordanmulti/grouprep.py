"""The groups G_p generated by a_1..a_{p-1} and a central involution eps.

Relations: a_k^2 = eps and a_k a_l = eps a_l a_k for k != l.  Elements are
kept in the normal form eps^sign a_S with S listed in increasing order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactla import Mat
from .jordancore import commuting_subspace
from .modular import fmpz_mat
from .repforge import dimD, rho


@dataclass(frozen=True, order=True)
class GpElement:
    sign: int = 0      # 1 when eps is present
    subset: int = 0    # bit i-1 set when a_i occurs

    def indices(self) -> list[int]:
        return [i + 1 for i in range(self.subset.bit_length()) if self.subset >> i & 1]

    def __str__(self):
        word = "".join(f"a{i}" for i in self.indices()) or "1"
        return ("eps*" if self.sign else "") + word


IDENTITY = GpElement(0, 0)
EPS = GpElement(1, 0)


def generator(i: int) -> GpElement:
    return GpElement(0, 1 << (i - 1))


def _check(g: GpElement, p: int):
    if g.subset >> (p - 1):
        raise ValueError(f"element {g} uses a generator beyond a_{p - 1}")


def gpMultiply(g: GpElement, h: GpElement, p: int) -> GpElement:
    """Product in normal form.

    Sorting the concatenated word a_S a_T costs one eps per pair s > t, and
    each index in both sets contributes a square a_k^2 = eps.
    """
    _check(g, p)
    _check(h, p)
    swaps = 0
    for t in h.indices():
        swaps += bin(g.subset >> t).count("1")
    repeats = bin(g.subset & h.subset).count("1")
    sign = (g.sign + h.sign + swaps + repeats) % 2
    return GpElement(sign, g.subset ^ h.subset)


def elements(p: int) -> list[GpElement]:
    if p < 2:
        raise ValueError("G_p is defined for p >= 2")
    return [GpElement(s, S) for S in range(1 << (p - 1)) for s in (0, 1)]


def square(g: GpElement, p: int) -> GpElement:
    """``(eps^s a_S)^2 = eps^(r(r+1)/2)`` with ``r = |S|``."""
    r = bin(g.subset).count("1")
    return GpElement((r * (r + 1) // 2) % 2, 0)


def inverse(g: GpElement, p: int) -> GpElement:
    return g if square(g, p) == IDENTITY else gpMultiply(EPS, g, p)


def conjugacyClasses(p: int) -> list[frozenset[GpElement]]:
    """Orbits under conjugation, found from the generators alone."""
    gens = [generator(i) for i in range(1, p)]
    seen = set()
    out = []
    for g in elements(p):
        if g in seen:
            continue
        orbit = {g}
        todo = [g]
        while todo:
            x = todo.pop()
            for a in gens:
                y = gpMultiply(gpMultiply(a, x, p), inverse(a, p), p)
                if y not in orbit:
                    orbit.add(y)
                    todo.append(y)
        seen |= orbit
        out.append(frozenset(orbit))
    return out


def expected_class_count(p: int) -> int:
    return 2 ** (p - 1) + (2 if p % 2 == 0 else 1)


def repEval(p: int, variant, g: GpElement) -> Mat:
    """Image of ``g`` under the representation a_i -> rho(p)[i-1], eps -> -I."""
    _check(g, p)
    gens = rho(p, variant)
    out = Mat.identity(dimD(p))
    for i in g.indices():
        out = out @ gens[i - 1]
    return -out if g.sign else out


def irrep_dim(p: int) -> int:
    """Complex dimension of a non-1D irreducible representation of G_p."""
    return 2 ** ((p - 1) // 2)


def _normalizer(p: int) -> int:
    # rho(p) is real and, over C, the sum of d(p)/irrep_dim(p) copies of irreps
    # of one common indicator, so its trace sum is that multiple of the irreducible one
    return (2 ** p) * (dimD(p) // irrep_dim(p))


def frobeniusSchur(p: int, variant=None) -> Fraction:
    """Frobenius-Schur indicator of the non-1D irreps that send eps to -I.

    Every square is 1 or eps, whose traces are d(p) and -d(p), so only the
    parity of r(r+1)/2 matters.
    """
    d = dimD(p)
    total = 0
    for g in elements(p):
        total += -d if square(g, p).sign else d
    return Fraction(total, _normalizer(p))


def frobeniusSchur_by_traces(p: int, variant=None) -> Fraction:
    """The same indicator from the traces of the squared matrices themselves."""
    total = Fraction(0)
    for g in elements(p):
        m = repEval(p, variant, g)
        total += (m @ m).trace()
    return total / _normalizer(p)


def expected_indicator(p: int) -> int:
    """sign(cos(pi p / 4)) as a residue table modulo 8."""
    r = p % 8
    if r in (0, 1, 7):
        return 1
    if r in (2, 6):
        return 0
    return -1


def _signed_permutation(m: Mat) -> list[tuple[int, int]] | None:
    """Column ``a`` of ``m`` as ``(row, sign)``, or None when ``m`` is not a signed permutation."""
    n = m.rows
    out = []
    for a in range(n):
        hits = [(i, m[i, a]) for i in range(n) if m[i, a] != 0]
        if len(hits) != 1 or hits[0][1] not in (1, -1):
            return None
        out.append((hits[0][0], int(hits[0][1])))
    return out


def _monomial_commutant_dim(perms: list[list[tuple[int, int]]], d: int) -> int:
    """``M = P M P^T`` ties entry (a, b) to (pi a, pi b) with sign s_a s_b; count the
    orbits of index pairs on which these ties are consistent."""
    value = {}
    dim = 0
    for a0 in range(d):
        for b0 in range(d):
            if (a0, b0) in value:
                continue
            value[(a0, b0)] = 1
            todo = [(a0, b0)]
            ok = True
            while todo:
                a, b = todo.pop()
                v = value[(a, b)]
                for P in perms:
                    (ra, sa), (rb, sb) = P[a], P[b]
                    w = v * sa * sb
                    key = (ra, rb)
                    if key not in value:
                        value[key] = w
                        todo.append(key)
                    elif value[key] != w:
                        ok = False
            dim += ok
    return dim


def commutantDim(p: int, variant=None) -> int:
    """Dimension of the matrices commuting with every rho(a_i).

    The generators are signed permutation matrices, so the linear system
    splits into orbits of index pairs; other generators go through the
    general linear-system route.
    """
    gens = rho(p, variant)
    if not gens:
        return 1
    perms = [_signed_permutation(g) for g in gens]
    if all(P is not None for P in perms):
        return _monomial_commutant_dim(perms, dimD(p))
    return commutantDim_by_linear_system(p, variant)


def commutantDim_by_linear_system(p: int, variant=None) -> int:
    gens = rho(p, variant)
    d = dimD(p)
    if not gens:
        return 1
    D = d * d
    eye = fmpz_mat(D, D)
    for i in range(D):
        eye[i, i] = 1
    checks = [fmpz_mat([[int(x) for x in row] for row in g.tolist()]) for g in gens]
    return commuting_subspace(eye, checks, d).nrows()


TYPES = {1: "real", 2: "complex", 4: "quaternionic"}


def rep_type(p: int, variant=None) -> str:
    return TYPES[commutantDim(p, variant)]


def eckmann_summary(p: int, variant=None) -> dict:
    return {"p": p, "classes": len(conjugacyClasses(p)), "fs": int(frobeniusSchur(p, variant)),
            "commutantDim": commutantDim(p, variant), "type": rep_type(p, variant)}
