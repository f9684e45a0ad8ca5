from __future__ import annotations

import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nckit.complex import SimplicialMap, from_maximal, random_complex, simplex_complex, skeleton, sphere_complex
from nckit.errors import GeneratorMismatchError, NotSimplicialError, NotSubcomplexError, UnknownGeneratorError
from nckit.homomorphisms import (
    contraction_homotopy,
    evaluation_hom,
    face_retraction_family,
    fold_hom,
    induced_hom,
    simplex_cp_lift,
    simplex_lift_hom,
    sphere_algebra,
    sphere_homotopies,
    sphere_point_evaluation,
)
from nckit.numerics import random_complex_rep
from nckit.polynomial import NCPolynomial, bernstein_nonnegative
from nckit.presentations import (
    AlgebraPresentation,
    GeneratorAssignment,
    Status,
    Variant,
    compose,
    in_ideal,
    in_J_delta,
    monomial_vanishes,
    presentation_of,
    reduce_polynomial,
    verify_assignment,
)

H = NCPolynomial.gen
ONE = NCPolynomial.unit()


def test_polynomial_arithmetic():
    a, b = H("a"), H("b")
    p = (a + b) * (a - b)
    assert p == H("a") * H("a") - a * b + b * a - b * b
    assert (a * b).adjoint() == b * a
    assert (a + 2).substitute({"a": b}) == b + 2
    assert NCPolynomial.param().specialize(Fraction(1, 2)) == NCPolynomial.unit(Fraction(1, 2))


def test_polynomial_json_round_trip():
    t = NCPolynomial.param()
    p = t * H("a") * H("b") + Fraction(1, 3) - t * t
    back = NCPolynomial.from_json(json.loads(json.dumps(p.to_json())))
    assert back == p


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(-3, 3), min_size=1, max_size=5))
def test_bernstein_is_sound(coeffs):
    # a "nonnegative" verdict must never be contradicted on a grid
    if bernstein_nonnegative(coeffs):
        for x in np.linspace(0, 1, 41):
            assert sum(float(c) * x**k for k, c in enumerate(coeffs)) >= -1e-12


def test_flag_and_full_vanishing_differ():
    hollow = from_maximal([["a", "b"], ["b", "c"], ["a", "c"]])
    full = presentation_of(hollow, Variant.FULL)
    flag = presentation_of(hollow, Variant.FLAG)
    assert monomial_vanishes(full, "abc").zero
    assert not monomial_vanishes(flag, "abc").zero
    assert monomial_vanishes(flag, "abc").label == "NotForcedZero"


def test_path_flag_zero_pairs():
    P = presentation_of(from_maximal([["a", "b"], ["b", "c"]]), Variant.FLAG)
    assert P.zero_pairs() == [("a", "c"), ("c", "a")]
    assert monomial_vanishes(P, "abc").label == "NotForcedZero"
    assert monomial_vanishes(P, "abcb").label == "NotForcedZero"
    assert monomial_vanishes(P, "abca").zero
    assert monomial_vanishes(P, "ac").zero


words = st.lists(st.integers(0, 6), min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), words)
def test_vanishing_matches_oracles(seed, w):
    S = random_complex(7, 4, 3, random.Random(seed))
    simplexes = {frozenset(s) for s in S.simplices()}
    edges = {frozenset(e) for e in S.edges()}
    assert monomial_vanishes(presentation_of(S, Variant.FULL), w).zero == (frozenset(w) not in simplexes)
    walk = all(a == b or frozenset((a, b)) in edges for a, b in zip(w, w[1:]))
    assert monomial_vanishes(presentation_of(S, Variant.FLAG), w).zero == (not walk)


def test_unknown_generator():
    P = presentation_of(simplex_complex("ab"))
    with pytest.raises(UnknownGeneratorError):
        monomial_vanishes(P, "az")
    with pytest.raises(UnknownGeneratorError):
        in_J_delta("ab", "abz")


def test_skeleton_ideal_and_J():
    P = presentation_of(simplex_complex("abc"))
    assert in_ideal(P, "abca", 2)
    assert not in_ideal(P, "abab", 2)
    assert in_J_delta("ab", "abba")
    assert not in_J_delta("ab", "aaa")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_reduction_is_sound_in_representations(seed):
    rng = random.Random(seed)
    S = random_complex(5, 3, 2, rng)
    P = presentation_of(S, Variant.FULL)
    gens = list(P.generators)
    poly = NCPolynomial()
    for _ in range(4):
        w = tuple(rng.choice(gens) for _ in range(rng.randint(1, 3)))
        poly = poly + NCPolynomial.word(w, rng.randint(-2, 2))
    poly = poly * NCPolynomial.sum_of(gens)
    red = reduce_polynomial(P, poly)
    rep = random_complex_rep(S, 3, seed)
    assert np.allclose(rep.evaluate(poly), rep.evaluate(red), atol=1e-9)


def test_unit_pattern_rewrites():
    P = presentation_of(simplex_complex("ab"))
    s = NCPolynomial.sum_of("ab")
    assert reduce_polynomial(P, H("a") * s) == H("a")
    assert reduce_polynomial(P, s * s - ONE).is_zero()


def test_evaluation_homs_verify():
    S = from_maximal([["a", "b", "c"], ["c", "d"]])
    for sub in (simplex_complex("abc"), simplex_complex("cd"), skeleton(S, 0), S):
        assert verify_assignment(evaluation_hom(S, sub)).status is Status.VERIFIED
    with pytest.raises(NotSubcomplexError):
        evaluation_hom(S, simplex_complex("ad"))


def test_induced_homs():
    S1 = sphere_complex(1)
    edge = simplex_complex(["x", "y"])
    m = SimplicialMap(S1, edge, {"0+": "x", "0-": "x", "1+": "y", "1-": "y"})
    assert verify_assignment(induced_hom(m)).status is Status.VERIFIED
    with pytest.raises(NotSimplicialError):
        induced_hom(SimplicialMap(edge, S1, {"x": "0+", "y": "0-"}))


def test_wrong_assignment_fails_with_witness():
    S = from_maximal([["a", "b"], ["b", "c"]])
    P = presentation_of(S, Variant.FLAG)
    bad = GeneratorAssignment(P, P, {"a": H("a"), "b": H("b"), "c": H("a")})
    v = verify_assignment(bad)
    assert v.status is Status.FAILED
    assert v.exit_code == 1
    assert any(c.witness for c in v.failures())


def test_generator_mismatch():
    P = presentation_of(simplex_complex("ab"))
    with pytest.raises(GeneratorMismatchError):
        GeneratorAssignment(P, P, {"a": H("a")})


def test_simplex_maps_verify():
    Sig = from_maximal([["a", "b", "c"], ["c", "d"]])
    assert verify_assignment(simplex_lift_hom(Sig, "abc")).status is Status.VERIFIED
    for k in range(1, 4):
        fam = contraction_homotopy(range(k + 1))
        assert verify_assignment(fam.assignment).status is Status.VERIFIED
        assert all(fam.endpoints_match().values())
        for i in range(k + 1):
            fam = face_retraction_family(range(k + 1), i)
            assert verify_assignment(fam.assignment).status is Status.VERIFIED
            assert all(fam.endpoints_match().values())


def test_cp_lift_restricts_to_simplex():
    # the lift of h_a is supported on the simplex generators only
    Sig = from_maximal([["a", "b"], ["b", "c"]])
    x = simplex_cp_lift(Sig, "ab", H("a"))
    assert x.letters() <= {"a", "b"}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_maps_verify(n):
    for a in (fold_hom(n, (0, 1)), fold_hom(n, (0,)), fold_hom(n, (1,))):
        assert verify_assignment(a).status is Status.VERIFIED
    for i in range(n + 1):
        assert verify_assignment(sphere_point_evaluation(n, i)).status is Status.VERIFIED
    for fam in sphere_homotopies(n).scalar_families():
        assert verify_assignment(fam.assignment).status is Status.VERIFIED
        assert all(fam.endpoints_match().values())


def test_fold_composites_agree():
    # folding 0 and then 1 is the same as folding both
    n = 2
    assert compose(fold_hom(n, (1,)), fold_hom(n, (0,))).same_images(fold_hom(n, (0, 1)))


def test_presentation_json_round_trip():
    P = sphere_algebra(2)
    Q = AlgebraPresentation.from_json(json.loads(json.dumps(P.to_json())))
    assert Q.generators == P.generators and Q.variant is Variant.FLAG
    bare = AlgebraPresentation.from_json(simplex_complex("ab").to_json())
    assert bare.variant is Variant.FULL


def test_assignment_json_round_trip():
    fam = contraction_homotopy("abc")
    a = fam.assignment
    back = GeneratorAssignment.from_json(a.source, a.target, json.loads(json.dumps(a.to_json())))
    assert back.same_images(a, reduce=False)
