import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracle
from jordanmulti.errors import InvalidLabelError, MembershipError
from jordanmulti.exactla import GaussRational, Mat, Subspace
from jordanmulti.jordancore import MultialgebraInstance, is_closed, jordan_product
from jordanmulti.repforge import (Q1, QI, QJ, QK, CatalogLabel, Quaternion, bigO, catalogBuild, catalog_labels,
                                  classicalIrrep, dimD, hatQ, mixed_product, phi, psi, quatQ, rh_violations, rho,
                                  scramble, spacesWU, spinAutoT, spinFactor, spin_frame, variant_sign,
                                  volume_sign)

fr = st.fractions(min_value=-5, max_value=5, max_denominator=4)
gauss = st.builds(GaussRational, fr, fr)
quats = st.builds(Quaternion, fr, fr, fr, fr)


def test_quaternion_units():
    assert QI * QJ == QK
    assert QJ * QK == QI
    assert QK * QI == QJ
    assert QI * QI == -Q1
    assert QJ * QI == -QK
    assert mixed_product(QI, QJ, QK) == 1


@given(quats, quats, quats)
def test_quaternion_associative(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a * b).conjugate() == b.conjugate() * a.conjugate()
    assert (a * b).norm2() == a.norm2() * b.norm2()


def test_phi_psi_examples():
    assert phi(1) == Mat.identity(2)
    assert phi(GaussRational(0, 1)) == Mat.from_rows([[0, -1], [1, 0]])
    assert psi(GaussRational(0, 1)) == Mat.from_rows([[0, 1], [1, 0]])


@given(gauss, gauss)
def test_phi_psi_rules(z, w):
    assert phi(z * w) == phi(z) @ phi(w)
    assert phi(z).T == phi(z.conjugate())
    assert psi(z).T == psi(z)
    # psi(a) acting on the real form of u is the real form of a * conj(u)
    u = Mat.from_rows([[w.re], [w.im]])
    v = z * w.conjugate()
    assert psi(z) @ u == Mat.from_rows([[v.re], [v.im]])


def test_quat_examples():
    assert quatQ(Q1) == Mat.identity(4)
    assert quatQ(QI) @ quatQ(QJ) == quatQ(QK)
    O = bigO(0, 1)
    assert O @ O.T == Mat.identity(8)


@given(quats, quats)
def test_quat_maps(q, h):
    assert quatQ(q) @ quatQ(h) == quatQ(q * h)
    assert quatQ(q).T == quatQ(q.conjugate())
    assert hatQ(q) @ quatQ(h) == quatQ(h) @ hatQ(q)
    O = bigO(q, h)
    assert O.T == bigO(q.conjugate(), -h)
    assert O @ O.T == Mat.identity(8) * (q.norm2() + h.norm2())


def test_dimD():
    assert [dimD(p) for p in range(1, 9)] == [1, 2, 4, 4, 8, 8, 8, 8]
    assert dimD(9) == 16 and dimD(10) == 32 and dimD(12) == 64
    def hurwitz_radon(n):
        # number of orthogonal anticommuting complex structures on R^n, plus one
        e = (n & -n).bit_length() - 1
        return 8 * (e // 4) + 2 ** (e % 4)

    for p in range(1, 18):
        want = next(2 ** k for k in range(20) if hurwitz_radon(2 ** k) >= p)
        assert dimD(p) == want, p
        assert dimD(p + 8) == 16 * dimD(p)
    with pytest.raises(ValueError):
        dimD(0)


@pytest.mark.parametrize("p", range(2, 13))
def test_rho_relations(p):
    for variant in (("plus", "minus") if p % 4 == 0 else (None,)):
        gens = rho(p, variant)
        assert len(gens) == p - 1
        assert all(g.shape == (dimD(p), dimD(p)) for g in gens)
        assert rh_violations(gens) == []


def test_rho_relations_oracle_small():
    # the same relations in plain Fraction arithmetic
    for p in (2, 3, 4, 5):
        gens = [[list(r) for r in g.tolist()] for g in rho(p)]
        d = dimD(p)
        minus_I = oracle.scale(oracle.identity(d), -1)
        for i, a in enumerate(gens):
            assert oracle.matmul(a, a) == minus_I
            assert oracle.transpose(a) == oracle.scale(a, -1)
            for b in gens[i + 1:]:
                assert oracle.add(oracle.matmul(a, b), oracle.matmul(b, a)) == oracle.scale(oracle.identity(d), 0)


def test_rho_examples():
    assert rho(2) == [phi(GaussRational(0, 1))]
    assert variant_sign(4, "plus") == 1
    assert variant_sign(4, "minus") == -1
    assert variant_sign(8, "plus") == 1
    assert variant_sign(8, "minus") == -1
    assert volume_sign(12, "plus") == -volume_sign(12, "minus")
    with pytest.raises(ValueError):
        rho(5, "plus")


def test_spaces_wu():
    W, U = spacesWU(4)
    assert W.dim == 3
    assert W == Subspace.span([quatQ(QI), quatQ(QJ), quatQ(QK)])
    W1, U1 = spacesWU(1)
    assert W1.dim == 0 and U1 == Subspace.span([Mat.identity(1)])
    W9, _ = spacesWU(9)
    assert W9.dim == 8 and W9.shape == (16, 16)


@pytest.mark.parametrize("p", range(1, 11))
def test_spaces_wu_radon_hurwitz(p):
    W, U = spacesWU(p)
    assert W.dim == p - 1
    assert U.dim == p
    assert U.contains(Mat.identity(dimD(p)))
    rng = random.Random(p)
    d = dimD(p)
    for _ in range(5):
        u = U.combination([rng.randint(-3, 3) for _ in range(U.dim)])
        c = (u @ u.T)[0, 0]
        assert u @ u.T == Mat.identity(d) * c
        assert c > 0 or u.is_zero()


def test_spin_factor_examples():
    assert spinFactor(3) == Subspace.symmetric(2)
    S5 = spinFactor(5)
    assert S5.dim == 5 and S5.shape == (8, 8)
    S6 = spinFactor(6)
    assert S6.dim == 6
    assert S6 == classicalIrrep("hermH", 2)


@pytest.mark.parametrize("N", [3, 4, 5, 6, 7, 8, 9, 10])
def test_spin_factor_relations(N):
    S = spinFactor(N)
    assert S.dim == N
    assert is_closed(MultialgebraInstance.classical(S))
    P1, P2 = spin_frame(N)
    for b in S.basis:
        # off-diagonal parts square to multiples of the identity
        n = b.shape[0]
        lam, mu = b[0, 0], b[n - 1, n - 1]
        off = b - P1 * lam - P2 * mu
        assert jordan_product(off, off) == (P1 + P2) * (off @ off)[0, 0]


def test_spin_auto():
    N = 6
    S = spinFactor(N)
    n = S.shape[0]
    assert spinAutoT(N, Mat.identity(n)) == Mat.identity(n)
    Z = Mat.zeros(4)
    x = Mat.blocks([[Z, quatQ(QI)], [quatQ(QI).T, Z]])
    assert spinAutoT(N, x) == Mat.blocks([[Z, quatQ(-QI)], [quatQ(-QI).T, Z]])
    B = S.basis
    for a in B:
        assert spinAutoT(N, spinAutoT(N, a)) == a
        for b in B:
            assert spinAutoT(N, jordan_product(a, b)) == jordan_product(spinAutoT(N, a), spinAutoT(N, b))
    with pytest.raises(MembershipError):
        spinAutoT(N, Mat.diag([1] * 7 + [0]))


def test_classical_irreps():
    assert classicalIrrep("symR", 3) == Subspace.symmetric(3)
    C = classicalIrrep("hermC", 2)
    assert C.dim == 4 and C.shape == (4, 4)
    for kind, d, dim in (("symR", 1, lambda r: r * (r + 1) // 2), ("hermC", 2, lambda r: r * r),
                         ("hermH", 4, lambda r: r * (2 * r - 1))):
        for r in range(2, 4):
            S = classicalIrrep(kind, r)
            assert S.dim == dim(r) and S.shape == (d * r, d * r)
            assert S.contains(Mat.identity(d * r))
            assert is_closed(MultialgebraInstance.classical(S))
    with pytest.raises(ValueError):
        classicalIrrep("hermC", 1)


def test_label_validation():
    with pytest.raises(InvalidLabelError):
        CatalogLabel("d", N=6)
    with pytest.raises(InvalidLabelError):
        CatalogLabel("e", N=8, s1=1, s2=1)
    with pytest.raises(InvalidLabelError):
        CatalogLabel("b", r=1)
    with pytest.raises(InvalidLabelError):
        CatalogLabel("e", N=6, s1=0, s2=1)
    with pytest.raises(InvalidLabelError):
        CatalogLabel("x", r=1)
    label = CatalogLabel("e", N=6, s1=1, s2=2)
    assert CatalogLabel.from_json(label.to_json()) == label
    assert label.ambientN == 24


def test_catalog_examples():
    A = catalogBuild(CatalogLabel("a", r=2, multiplicity=2))
    from jordanmulti.exactla import kron
    assert A == Subspace.span([kron(Mat.identity(2), b) for b in Subspace.symmetric(2).basis])
    E = catalogBuild(CatalogLabel("e", N=6, s1=1, s2=1))
    assert E.dim == 6 and E.shape == (16, 16)
    assert catalogBuild(CatalogLabel("d", N=5)) == spinFactor(5)


def test_catalog_sizes_and_closure():
    for label in catalog_labels(16):
        pi = catalogBuild(label)
        assert pi.shape == (label.ambientN, label.ambientN)
        assert pi.dim == label.alg_dim
        assert pi.contains(Mat.identity(label.ambientN))
    for label in catalog_labels(8):
        assert is_closed(MultialgebraInstance.classical(catalogBuild(label)))


def test_scramble():
    S2 = Subspace.symmetric(2)
    assert scramble(S2, 4)[0] == S2
    pi, R = scramble(spinFactor(5), 7)
    assert R.T @ R == Mat.identity(8)
    assert pi.dim == 5
    assert is_closed(MultialgebraInstance.classical(pi))
    assert scramble(spinFactor(5), None)[0] == spinFactor(5)
    broken = Subspace.span(spinFactor(5).basis[:3])
    before = is_closed(MultialgebraInstance.classical(broken)).closed
    assert is_closed(MultialgebraInstance.classical(scramble(broken, 2)[0])).closed == before
