import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from jordanmulti.errors import AmbientMismatchError, StructureError
from jordanmulti.exactla import (COMPLEX, I_UNIT, GaussRational, Mat, Subspace, cayley_orthogonal, echelon,
                                 fmpq_mat, kron, rref, subspace_contains, sym_part, to_fraction)
from jordanmulti.modular import fmpz_mat, modular_echelon, modular_kernel, primitive_rows
from jordanmulti.repforge import random_skew


small = st.integers(-4, 4)


def int_rows(max_rows=6, max_cols=6):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows))


# rref

def test_rref_examples():
    assert rref([(2, 4), (1, 2)]) == [[1, 2]]
    assert rref([(0, 1), (1, 0)]) == [[1, 0], [0, 1]]
    assert rref([(1, 1, 0), (0, 1, 1), (1, 0, -1)]) == [[1, 0, -1], [0, 1, 1]]
    assert rref([]) == []


@given(int_rows())
def test_rref_matches_gauss_jordan(rows):
    assert rref(rows) == oracle.rref(rows)


@given(int_rows(), st.randoms(use_true_random=False))
def test_rref_canonical_and_idempotent(rows, rnd):
    R = rref(rows)
    assert rref(R) == R
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    # a different spanning set: add multiples of other rows
    mixed = [[a + 2 * b for a, b in zip(shuffled[i], shuffled[i - 1])] for i in range(len(shuffled))] \
        if len(shuffled) > 1 else shuffled
    if oracle.rank(mixed) == oracle.rank(rows):
        assert rref(mixed) == R


@given(int_rows(max_rows=8, max_cols=7))
def test_modular_echelon_matches_fraction_route(rows):
    ints = fmpz_mat(rows)
    basis, piv = modular_echelon(ints)
    want = oracle.rref(rows)
    got = [[to_fraction(x) for x in basis.table()[i]] for i in range(basis.nrows())]
    assert got == want
    assert len(piv) == len(want)


@given(int_rows(max_rows=5, max_cols=7))
def test_modular_kernel_matches_fraction_route(rows):
    K = modular_kernel(fmpz_mat(rows))
    ncols = len(rows[0])
    want = oracle.rref(oracle.kernel(rows, ncols))
    got = oracle.rref([[to_fraction(x) for x in r] for r in K.table()]) if K.nrows() else []
    assert got == want


def test_large_entries_echelon():
    rng = random.Random(5)
    rows = [[rng.randint(-10 ** 30, 10 ** 30) for _ in range(6)] for _ in range(4)]
    rows.append([a - 3 * b for a, b in zip(rows[0], rows[1])])
    basis, _ = echelon(fmpq_mat(rows))
    assert [[to_fraction(x) for x in r] for r in basis.table()] == oracle.rref(rows)


def test_primitive_rows():
    m = Mat.from_rows([[Fraction(1, 2), Fraction(1, 3)], [4, 6]]).flint
    assert primitive_rows(m) == [[3, 2], [2, 3]]


# scalars and matrices

def test_gauss_rational_arithmetic():
    z = GaussRational(Fraction(1, 2), 3)
    w = GaussRational(-2, Fraction(1, 5))
    assert z.conjugate().conjugate() == z
    assert (z * w).conjugate() == z.conjugate() * w.conjugate()
    assert z.abs2() == Fraction(1, 4) + 9
    assert (z / w) * w == z
    assert GaussRational(0, 0).abs2() == 0


def test_mat_json_round_trip():
    m = Mat.from_rows([[Fraction(1, 3), -2], [0, 5]])
    assert Mat.from_json(m.to_json()) == m
    c = Mat.from_rows([[GaussRational(1, 2), 0], [GaussRational(0, -1), Fraction(3, 4)]])
    assert c.ring == COMPLEX
    assert Mat.from_json(c.to_json()) == c
    assert c.to_json()["entries"][0][0] == {"re": "1", "im": "2"}


def test_mat_json_shape_mismatch():
    with pytest.raises(AmbientMismatchError):
        Mat.from_json({"rows": 3, "cols": 2, "ring": "real", "entries": [["1", "2"], ["3", "4"]]})
    with pytest.raises(StructureError):
        Mat.from_json({"rows": 1, "cols": 1, "ring": "real", "entries": [[{"re": "0", "im": "1"}]]})


def test_complex_products():
    a = Mat.from_rows([[GaussRational(1, 1), 2], [0, GaussRational(0, 1)]])
    b = Mat.from_rows([[3, GaussRational(0, -1)], [GaussRational(2, 0), 1]])
    ar = [[x if isinstance(x, GaussRational) else GaussRational(x) for x in r] for r in a.tolist()]
    br = [[x if isinstance(x, GaussRational) else GaussRational(x) for x in r] for r in b.tolist()]
    want = [[sum((ar[i][k] * br[k][j] for k in range(2)), GaussRational(0)) for j in range(2)] for i in range(2)]
    assert (a @ b).tolist() == want
    assert (a * I_UNIT).H == a.H * GaussRational(0, -1)


# kron

def test_kron_examples():
    M = Mat.from_rows([[1, 2], [3, 4]])
    assert kron(Mat.identity(2), M) == Mat.blockdiag(M, M)
    s = kron(Mat.from_rows([[0, 1], [1, 0]]), Mat.identity(2))
    assert s @ s == Mat.identity(4)
    assert kron(Mat.diag([1, 0]), Mat.identity(2)).rank() == 2


@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=3, max_size=3),
       st.lists(st.lists(small, min_size=3, max_size=3), min_size=2, max_size=2))
def test_kron_matches_oracle(a, b):
    assert kron(Mat.from_rows(a), Mat.from_rows(b)).tolist() == oracle.kron(oracle.F(a), oracle.F(b))


@given(*[st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2) for _ in range(4)])
def test_kron_mixed_product(a, b, c, d):
    a, b, c, d = map(Mat.from_rows, (a, b, c, d))
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


def test_kron_ring_mismatch():
    with pytest.raises(AmbientMismatchError):
        kron(Mat.identity(2), Mat.identity(2, COMPLEX))


# Cayley transform

def test_cayley_examples():
    assert cayley_orthogonal(Mat.zeros(3)) == Mat.identity(3)
    s = Mat.from_rows([[0, 1], [-1, 0]])
    assert cayley_orthogonal(s) == Mat.from_rows([[0, -1], [1, 0]])
    with pytest.raises(StructureError):
        cayley_orthogonal(Mat.identity(2))


def test_cayley_orthogonal_many_seeds():
    for seed in range(200):
        n = 2 + seed % 15
        R = cayley_orthogonal(random_skew(n, seed))
        assert R.T @ R == Mat.identity(n)


# subspaces

def test_contains_examples():
    I2 = Mat.identity(2)
    assert subspace_contains(Subspace.span([I2]), I2 * 3)
    assert not Subspace.span([Mat.diag([1, 0])]).contains(Mat.diag([0, 1]))
    S = Subspace.span([Mat.from_rows([[0, 1], [1, 0]]), I2])
    assert S.contains(Mat.from_rows([[2, 1], [1, 2]]))
    with pytest.raises(AmbientMismatchError):
        S.contains(Mat.identity(3))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_contains_matches_linear_solve(gens, v):
    S = Subspace.span([Mat.from_rows([g[:2], g[2:]]) for g in gens])
    assert S.contains(Mat.from_rows([v[:2], v[2:]])) == oracle.in_span(gens, v)
    assert S.dim == oracle.rank(gens)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
def test_sum_and_intersection_dimensions(g1, g2):
    A = Subspace.span([Mat.from_rows([g[:2], g[2:]]) for g in g1])
    B = Subspace.span([Mat.from_rows([g[:2], g[2:]]) for g in g2])
    assert (A + B).dim + A.intersection(B).dim == A.dim + B.dim
    assert A.contains_subspace(A.intersection(B))
    assert (A + B).contains_subspace(A)


def test_equal_spans_are_identical():
    a, b = Mat.from_rows([[1, 2], [3, 4]]), Mat.from_rows([[0, 1], [1, 0]])
    S = Subspace.span([a, b])
    T = Subspace.span([a + b * 3, a * Fraction(-1, 2)])
    assert S == T
    assert S.rows_matrix == T.rows_matrix
    assert hash(S) == hash(T)


def test_integer_basis_spans_subspace():
    mats = [Mat.from_rows([[Fraction(1, 3), 2], [5, Fraction(-1, 7)]]), Mat.from_rows([[1, 0], [0, 1]]),
            Mat.from_rows([[Fraction(4, 3), 2], [5, Fraction(6, 7)]])]
    S = Subspace.span(mats)
    ints = S.integer_basis()
    assert ints.nrows() == S.dim == 2
    assert Subspace.from_rows((2, 2), "real", fmpq_mat(ints)) == S
    assert Subspace.from_rows((2, 2), "real", fmpq_mat(S.echelon_integer_basis())) == S


def test_complex_span_is_complex_linear():
    y = Mat.from_rows([[1, GaussRational(0, 2)], [GaussRational(0, 2), 3]])
    M = Subspace.complex_span([y])
    assert M.dim == 2
    assert M.contains(y * GaussRational(Fraction(2, 3), -5))
    assert not Subspace.span([y]).contains(y * I_UNIT)


def test_subspace_json_round_trip():
    S = Subspace.symmetric(3)
    assert Subspace.from_json(S.to_json()) == S


# symmetric part

def test_sym_part_examples():
    assert sym_part(Subspace.full((2, 2))) == Subspace.symmetric(2)
    assert sym_part(Subspace.full((2, 2))).dim == 3
    I2 = Subspace.span([Mat.identity(2)])
    assert sym_part(I2) == I2
    V = Subspace.span([Mat.unit(2, 0, 1), Mat.unit(2, 1, 0)])
    assert sym_part(V) == Subspace.span([Mat.from_rows([[0, 1], [1, 0]])])
    with pytest.raises(StructureError):
        sym_part(Subspace.span([Mat.unit(2, 0, 1)]))


@settings(max_examples=30)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=9, max_size=9), min_size=1, max_size=3))
def test_sym_part_is_symmetric_intersection(gens):
    mats = [Mat.from_rows([g[0:3], g[3:6], g[6:9]]) for g in gens]
    V = Subspace.span(mats + [m.T for m in mats])
    P = sym_part(V)
    assert V.contains_subspace(P)
    assert all(b.is_symmetric() for b in P.basis)
    assert P == V.intersection(Subspace.symmetric(3))
