from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

import pytest

from newton_filtrations.abelian import InfiniteQuotientError, build_group, smith_normal_form

mats = st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=1, max_size=5))


def _mul(A, B):
    return [[sum(a * b for a, b in zip(r, c)) for c in zip(*B)] for r in A]


@settings(max_examples=80, deadline=None)
@given(mats)
def test_snf_transforms_and_oracle(A):
    D, P, Q = smith_normal_form(A)
    assert _mul(_mul(P, A), Q) == D
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    ref = sympy_snf(Matrix(A), domain=ZZ)
    ref_diag = sorted(abs(ref[i, i]) for i in range(min(ref.shape)))
    assert sorted(diag) == ref_diag


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n + 2)))
def test_group_order_is_gcd_of_maximal_minors(rows):
    M = Matrix(rows)
    n = M.shape[1]
    try:
        G = build_group(rows)
    except InfiniteQuotientError:
        assert M.rank() < n
        return
    from itertools import combinations
    from math import gcd
    g = 0
    for idx in combinations(range(M.shape[0]), n):
        g = gcd(g, int(M.extract(list(idx), list(range(n))).det()))
    assert G.order == g


def test_generators_and_relations():
    G = build_group([[4, 0], [2, 6]])
    assert G.order == 24
    a, b = G.generator(0), G.generator(1)
    assert G.is_zero(G.mul(4, a))
    assert G.is_zero(G.add(G.mul(2, a), G.mul(6, b)))
    assert not G.is_zero(G.mul(3, b))


def test_rank_deficient_raises():
    with pytest.raises(InfiniteQuotientError):
        build_group([[1, 2], [2, 4]])
