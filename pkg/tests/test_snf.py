import random

import pytest
from hypothesis import given, settings, strategies as st

from gcobord.snf import (EntryGrowthError, SparseIntMatrix, determinant, invariant_factors,
                         lattice_quotient, matmul, smith_normal_form)

sympy = pytest.importorskip("sympy")
from sympy.matrices.normalforms import smith_normal_form as sympy_snf  # noqa: E402


def _diag(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def test_hand_example():
    U, D, V = smith_normal_form([[2, 4], [6, 8]], verify=True)
    assert D == [[2, 0], [0, 4]]


def test_zero_and_identity():
    U, D, V = smith_normal_form([[0, 0], [0, 0]], verify=True)
    assert D == [[0, 0], [0, 0]] and U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    assert smith_normal_form(I3, verify=True)[1] == I3


def test_sparse_input():
    A = SparseIntMatrix(3, 4, [(0, 0, 2), (1, 1, 3), (2, 3, 6)])
    assert invariant_factors(A) == [1, 6, 6]
    with pytest.raises(ValueError):
        SparseIntMatrix(2, 2, [(0, 0, 1), (0, 0, 2)])
    with pytest.raises(IndexError):
        SparseIntMatrix(2, 2, [(2, 0, 1)])


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_matches_sympy(A):
    U, D, V = smith_normal_form(A, verify=True)
    d = _diag(D)
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    ref = [abs(int(x)) for x in _diag(sympy_snf(sympy.Matrix(A)).tolist())]
    assert sorted(d) == sorted(ref)
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0


def test_unimodular_transforms():
    rng = random.Random(3)
    for _ in range(30):
        A = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(4)]
        U, D, V = smith_normal_form(A)
        assert matmul(matmul(U, A), V) == D
        assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1


def test_bit_budget_reports_growth():
    A = [[2 ** 40 + 1, 3], [5, 2 ** 41 + 7]]
    with pytest.raises(EntryGrowthError):
        smith_normal_form(A, max_bits=8)
    smith_normal_form(A, max_bits=None)


def test_lattice_quotient_matches_dense():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(1, 6)
        rels = []
        for _ in range(rng.randint(0, 6)):
            rels.append({c: rng.randint(-4, 4) for c in rng.sample(range(n), rng.randint(1, n))})
        q = lattice_quotient(n, rels)
        dense = [[r.get(c, 0) for c in range(n)] for r in rels] or [[0] * n]
        ref = [d for d in invariant_factors(dense)]
        assert q.factors == [d for d in ref if d >= 2]
        assert q.free_rank == n - len(ref)
        # witnesses map to unit vectors, relations map to zero
        for i, wv in enumerate(q.witnesses):
            val = [0] * len(q.factors)
            for c, v in wv.items():
                for k in range(len(val)):
                    val[k] += v * q.coord_values[c][k]
            assert tuple(v % d for v, d in zip(val, q.factors)) == tuple(int(k == i) for k in range(len(q.factors)))
        for r in rels:
            val = [0] * len(q.factors)
            for c, v in r.items():
                for k in range(len(val)):
                    val[k] += v * q.coord_values[c][k]
            assert all(v % d == 0 for v, d in zip(val, q.factors))
