from __future__ import annotations

import itertools
import random
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nckit.complex import barycentric_subdivision, from_maximal, random_complex, simplex_complex, skeleton, sphere_complex
from nckit.homology import chain_complex, homology, homology_of_chain_complex, rational_k_ranks, smith_normal_form


def bareiss_det(m):
    """Exact integer determinant (fraction-free elimination)."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def determinant_divisor_factors(m):
    """Invariant factors as d_k / d_{k-1}, d_k = gcd of the k×k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = gcd(g, bareiss_det([[m[i][j] for j in c] for i in r]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


int_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=80, deadline=None)
@given(int_matrices)
def test_snf_matches_determinant_divisors(m):
    got = smith_normal_form(m).invariant_factors
    assert got == determinant_divisor_factors(m)
    for a, b in zip(got, got[1:]):
        assert b % a == 0


def test_snf_matches_determinant_divisors_8x8():
    rng = random.Random(3)
    for _ in range(3):
        m = [[rng.choice([-2, -1, 0, 0, 1, 2, 3]) for _ in range(8)] for _ in range(8)]
        assert smith_normal_form(m).invariant_factors == determinant_divisor_factors(m)


@settings(max_examples=40, deadline=None)
@given(int_matrices)
def test_snf_rank_matches_sympy(m):
    assert smith_normal_form(m).rank == sympy.Matrix(m).rank()


def test_snf_known_form():
    # diag(2, 6, 12) up to unimodular change of basis
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert smith_normal_form(m).invariant_factors == (2, 6, 12)
    assert smith_normal_form([[0, 0], [0, 0]]).invariant_factors == ()


RP2 = from_maximal(
    [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]]
)


def test_projective_plane_has_two_torsion():
    H = homology(RP2)
    assert H.betti == (1, 0, 0)
    assert H.torsion(1) == (2,)
    assert H.torsion(2) == ()


def test_torus():
    # 7-vertex torus
    tri = [[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)] + [[i, (i + 2) % 7, (i + 3) % 7] for i in range(7)]
    H = homology(from_maximal(tri))
    assert H.betti == (1, 2, 1)
    assert rational_k_ranks(from_maximal(tri)).as_tuple() == (2, 2)


@pytest.mark.parametrize("n", range(5))
def test_sphere_homology(n):
    H = homology(sphere_complex(n))
    want = [0] * (n + 1)
    want[0] += 1
    want[n] += 1
    assert list(H.betti) == want
    assert all(H.torsion(k) == () for k in range(n + 1))
    assert rational_k_ranks(sphere_complex(n)).as_tuple() == ((2, 0) if n % 2 == 0 else (1, 1))


@pytest.mark.parametrize("n", range(1, 4))
def test_abelian_sphere_is_not_a_point(n):
    # the classical sphere keeps K-theory distinct from that of a point
    assert rational_k_ranks(sphere_complex(n)).as_tuple() != (1, 0)


def test_reduced_homology():
    assert homology(sphere_complex(0), reduced=True).betti == (1,)
    assert homology(simplex_complex(range(4)), reduced=True).betti == (0, 0, 0, 0)
    assert homology(sphere_complex(2), reduced=True).betti == (0, 0, 1)


complexes = st.builds(
    lambda seed: random_complex(7, 5, 3, random.Random(seed)),
    st.integers(0, 10**6),
)


@settings(max_examples=40, deadline=None)
@given(complexes)
def test_boundary_squares_to_zero(S):
    assert chain_complex(S).boundary_composition_defect() == 0
    assert chain_complex(S, reduced=True).boundary_composition_defect() == 0


def test_sign_mutation_is_detected():
    cc = chain_complex(sphere_complex(2), face_sign=lambda i: 1)
    assert cc.boundary_composition_defect() > 0


@settings(max_examples=40, deadline=None)
@given(complexes)
def test_euler_characteristic(S):
    assert homology(S).euler_characteristic() == S.euler_characteristic()


@settings(max_examples=15, deadline=None)
@given(complexes)
def test_barycentric_invariance(S):
    small = skeleton(S, 2)
    assert homology(barycentric_subdivision(small)) == homology(small)


@settings(max_examples=30, deadline=None)
@given(complexes)
def test_skeleton_keeps_low_homology(S):
    H = homology(S)
    for k in range(1, S.dimension + 1):
        Hk = homology(skeleton(S, k))
        for j in range(k):
            assert Hk.groups[j] == H.groups[j]


@settings(max_examples=30, deadline=None)
@given(complexes)
def test_betti_numbers_match_rational_ranks(S):
    # over Q: b_k = n_k - rank ∂_k - rank ∂_{k+1}
    cc = chain_complex(S)
    ranks = [sympy.Matrix(b).rank() if k else 0 for k, b in enumerate(cc.boundaries)] + [0]
    want = tuple(cc.rank(k) - ranks[k] - ranks[k + 1] for k in range(cc.top + 1))
    assert homology_of_chain_complex(cc).betti == want
