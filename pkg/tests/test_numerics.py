from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nckit.complex import from_maximal, simplex_complex
from nckit.errors import DimensionMismatchError
from nckit.homomorphisms import block_alpha, block_beta, contraction_homotopy, sphere_algebra, sphere_homotopies
from nckit.numerics import (
    DEFAULT_TOL,
    MatrixRep,
    ToleranceConfig,
    clifford_generators,
    clifford_round_trip_defect,
    clifford_sphere_rep,
    evaluate_assignment,
    exact_product_is_zero,
    facet_characters,
    norm_sup_estimate,
    psd_sqrt,
    random_complex_rep,
    random_simplex_rep,
    spectral_parts,
    verify_homotopy,
    verify_matrix_rep,
)
from nckit.polynomial import NCPolynomial
from nckit.presentations import Variant, presentation_of


def random_hermitian(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_spectral_parts(seed, d):
    x = random_hermitian(seed, d)
    xp, xm = spectral_parts(x)
    assert np.allclose(xp - xm, x, atol=1e-10)
    assert np.allclose(xp @ xm, 0, atol=1e-10)
    assert np.linalg.eigvalsh(xp).min() > -1e-10
    r = psd_sqrt(xp)
    assert np.allclose(r @ r, xp, atol=1e-10)


def test_psd_sqrt_clamps_noise():
    m = np.diag([1.0, -1e-14])
    r = psd_sqrt(m)
    assert np.isrealobj(r) or np.allclose(r.imag, 0)
    assert np.allclose(r @ r, np.diag([1.0, 0.0]))


def test_tolerance_overrides():
    tol = DEFAULT_TOL.with_overrides({"rel": 1e-6})
    assert tol.rel == 1e-6 and tol.herm == DEFAULT_TOL.herm
    with pytest.raises(ValueError):
        DEFAULT_TOL.with_overrides({"nope": 1.0})
    with pytest.raises(ValueError):
        ToleranceConfig(rel=0)


@pytest.mark.parametrize("count", range(1, 8))
def test_clifford_generators_anticommute(count):
    gs = clifford_generators(count)
    for i, a in enumerate(gs):
        assert np.allclose(a, a.conj().T)
        assert np.allclose(a @ a, np.eye(a.shape[0]))
        for b in gs[i + 1 :]:
            assert np.allclose(a @ b + b @ a, 0)


@pytest.mark.parametrize("n", range(0, 6))
def test_clifford_sphere_rep(n):
    c = clifford_sphere_rep(n)
    assert c.rep.dim == 2 ** max(1, -(-(n + 1) // 2))
    report = verify_matrix_rep(c.rep, sphere_algebra(n))
    assert report.passed
    assert report.max_relation_residual() <= 1e-10
    assert report.residual("sum_s h_s = 1") <= 1e-12
    im = c.rep.images
    assert all(exact_product_is_zero(im[f"{i}+"], im[f"{i}-"]) for i in range(n + 1))
    assert clifford_round_trip_defect(c) <= 1e-10


def test_spectral_clifford_agrees_with_closed_form():
    a, b = clifford_sphere_rep(3), clifford_sphere_rep(3, spectral=True)
    for s in a.rep.images:
        assert np.allclose(a.rep.images[s], b.rep.images[s], atol=1e-12)


def test_wrong_rep_reports_failure():
    c = clifford_sphere_rep(1)
    images = dict(c.rep.images)
    images["0-"] = images["0+"]
    r = verify_matrix_rep(MatrixRep(images, c.rep.dim), sphere_algebra(1))
    assert not r.passed
    assert r.residual("zero products") > 0.1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_random_reps_satisfy_relations(seed, d):
    assert verify_matrix_rep(random_simplex_rep("abc", d, seed), presentation_of(simplex_complex("abc"))).passed
    S = from_maximal([["a", "b", "c"], ["c", "d"]])
    rep = random_complex_rep(S, d, seed)
    for v in (Variant.FULL, Variant.FLAG):
        assert verify_matrix_rep(rep, presentation_of(S, v)).passed


def test_rep_json_round_trip():
    rep = clifford_sphere_rep(2).rep
    back = MatrixRep.from_json(json.loads(json.dumps(rep.to_json())))
    for s in rep.images:
        assert np.array_equal(back.images[s], rep.images[s])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        MatrixRep.from_images({"a": np.eye(2), "b": np.eye(3)})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rotation_homotopy(n):
    c = clifford_sphere_rep(n)
    fam = sphere_homotopies(n).rotation
    rep = verify_homotopy(fam, c.rep)
    assert len(rep.samples) >= 11
    assert rep.passed_samples and rep.max_residual() <= 1e-9
    assert rep.max_endpoint_defect() <= 1e-12
    assert fam.at(0).max_difference(block_beta(n)) == 0
    assert fam.at(np.pi / 2).max_difference(block_alpha(n)) == 0


def test_symbolic_homotopy_in_rep():
    rep = random_simplex_rep("abc", 3, 1)
    out = verify_homotopy(contraction_homotopy("abc"), rep)
    assert out.passed(1e-12)


def test_evaluate_assignment_doubles_for_blocks():
    c = clifford_sphere_rep(1)
    out = evaluate_assignment(block_alpha(1), c.rep)
    assert out.dim == 2 * c.rep.dim


def test_norm_lower_bound_from_characters():
    hollow = from_maximal([["a", "b"], ["b", "c"], ["a", "c"]])
    x = NCPolynomial.gen("a") + NCPolynomial.gen("b")
    est = norm_sup_estimate(x, facet_characters(hollow))
    assert est.value == pytest.approx(1.0)
    assert est.kind == "lower bound"
