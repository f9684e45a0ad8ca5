from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nckit.complex import is_full
from nckit.errors import GroupError, WindowError
from nckit.groups import (
    FiniteGroup,
    FreeGroup,
    ZnGroup,
    act,
    ball,
    build_sigma_f,
    cyclic,
    interior,
    orbits,
    parse_group,
    powers,
    sigma_f_presentation,
    symmetric,
    walk_vanishing_check,
)
from nckit.homology import homology


def test_cyclic_and_symmetric_tables():
    Z4 = cyclic(4)
    assert Z4.mul(3, 2) == 1 and Z4.inv(1) == 3
    S3 = symmetric(3)
    assert len(S3) == 6
    # (στ)(x) = σ(τ(x)): (1 2)(2 3) = (1 2 3)
    assert S3.mul("(1 2)", "(2 3)") == "(1 2 3)"
    assert all(S3.mul(g, S3.inv(g)) == S3.identity for g in S3.elements)


def test_regular_representations_are_homomorphisms():
    for G in (cyclic(3), symmetric(3)):
        for s, t in itertools.product(G.elements, repeat=2):
            st_ = G.mul(s, t)
            assert np.array_equal(G.left_regular(s) @ G.left_regular(t), G.left_regular(st_))
            assert np.array_equal(G.right_regular(s) @ G.right_regular(t), G.right_regular(st_))
            # left and right translations commute
            assert np.array_equal(G.left_regular(s) @ G.right_regular(t), G.right_regular(t) @ G.left_regular(s))


def test_bad_table_rejected():
    with pytest.raises(GroupError):
        FiniteGroup([0, 1], [[0, 1], [1, 1]])


def test_group_json_round_trip(tmp_path):
    G = symmetric(3)
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(G.to_json()))
    H = parse_group(str(path))
    assert len(H) == 6
    for a, b in itertools.product(G.elements, repeat=2):
        assert H.mul(a, b) == G.mul(a, b)


def test_parse_group_specs():
    assert isinstance(parse_group("zn:2"), ZnGroup)
    assert isinstance(parse_group("free:2"), FreeGroup)
    assert len(parse_group("cyclic:5")) == 5
    with pytest.raises(GroupError):
        parse_group("nonsense")


def test_free_group_reduction():
    F2 = FreeGroup(2)
    assert F2.mul("ab", "BA") == ""
    assert F2.inv("aB") == "bA"
    assert len(ball(F2, 2)) == 1 + 4 + 12


def test_powers_of_interval():
    Z = ZnGroup(1)
    assert powers(Z, [-1, 0, 1], 2) == frozenset(range(-2, 3))


def test_sigma_f_on_integers_is_a_path():
    Z = ZnGroup(1)
    S = build_sigma_f(Z, [-1, 0, 1], range(-3, 4))
    assert S.dimension == 1 and len(S.maximal) == 6
    assert homology(S).betti == (1, 0)
    S2 = build_sigma_f(Z, [-2, -1, 0, 1, 2], range(-3, 4))
    assert S2.dimension == 2
    assert is_full(S2)


def test_sigma_f_of_whole_finite_group_is_simplex():
    G = symmetric(3)
    P = sigma_f_presentation(G, G.elements)
    assert P.unital
    assert len(P.complex.maximal) == 1


def test_window_presentation_is_not_unital():
    Z = ZnGroup(1)
    P = sigma_f_presentation(Z, [-1, 0, 1], range(-2, 3))
    assert not P.unital
    assert P.closed_vertices == interior(Z, [-1, 0, 1], range(-2, 3)) == frozenset({-1, 0, 1})
    with pytest.raises(WindowError):
        sigma_f_presentation(Z, [-1, 0, 1])


def test_action_and_orbits():
    G = cyclic(4)
    S = build_sigma_f(G, [0, 1, 3], G.elements)
    assert act(G, 1, (0, 1)) == (1, 2)
    edge_orbits = orbits(G, S.edges())
    assert len(edge_orbits) == 1
    with pytest.raises(WindowError):
        act(ZnGroup(1), 5, (0, 1), window=range(3))


@settings(max_examples=200, deadline=None)
@given(st.integers(-5, 5), st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_walk_oracles_agree_on_z(start, steps):
    w = [start]
    for d in steps:
        w.append(w[-1] + d)
    for F in ([-1, 0, 1], range(-2, 3)):
        assert walk_vanishing_check(ZnGroup(1), F, w).consistent


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["", "a", "A", "b", "B", "ab"]), min_size=2, max_size=4))
def test_walk_oracles_agree_on_free_group(w):
    assert walk_vanishing_check(FreeGroup(2), ["", "a", "A", "b", "B"], w).consistent
