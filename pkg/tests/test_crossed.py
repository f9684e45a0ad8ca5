from __future__ import annotations

import numpy as np
import pytest

from nckit.crossed import (
    CrossedHarness,
    averaging_family,
    build_f_family,
    build_p_hat,
    compression_identity_check,
    cutoff_projection,
    graded_projection_from_group_algebra,
    orbit_closure,
    repair_family,
    rho_convention_selftest,
    support_report,
)
from nckit.errors import SampleSetError
from nckit.groups import cyclic, symmetric

GROUPS = [cyclic(2), cyclic(3), cyclic(4), symmetric(3)]


def test_rho_convention():
    assert rho_convention_selftest() <= 1e-12


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
def test_averaging_family_projects_onto_constants(G):
    h = CrossedHarness(averaging_family(G))
    n = len(G)
    assert np.allclose(h.p_hat, np.ones((n, n)) / n)


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.name)
@pytest.mark.parametrize("d", [1, 2, 4])
def test_generated_family(G, d):
    fam = graded_projection_from_group_algebra(G, d, seed=5)
    assert fam.relation_report().max_relation_residual() <= 1e-12
    h = CrossedHarness(fam)
    assert h.projection_report().max_relation_residual() <= 1e-10
    assert h.f_report().max_relation_residual() <= 1e-9
    assert h.compression_report(3).residual <= 1e-8
    sr = support_report(fam)
    assert sr["symmetric"] and sr["contains_identity"]


def test_generated_family_is_a_projection_in_the_group_algebra():
    # independent oracle: rebuild Σ p_s ⊗ λ_s and check it is a projection
    G = symmetric(3)
    fam = graded_projection_from_group_algebra(G, 2, seed=1)
    q = sum(np.kron(fam.p(s), G.left_regular(s)) for s in G.elements)
    assert np.allclose(q @ q, q, atol=1e-10)
    assert np.allclose(q, q.conj().T, atol=1e-10)


def test_outer_power_one_breaks_compression():
    fam = graded_projection_from_group_algebra(symmetric(3), 2, seed=0)
    h = CrossedHarness(fam)
    els = list(fam.group.elements)
    words = [(s,) for s in els] + [(a, b) for a in els for b in els]
    assert max(h.compression_residual(w, outer_power=1) for w in words) > 1e-3
    assert max(h.compression_residual(w) for w in words) <= 1e-8


def test_subgroup_family_support():
    G = symmetric(3)
    H = ["e", "(1 2)"]
    fam = graded_projection_from_group_algebra(G, 2, seed=0, subgroup=H)
    sr = support_report(fam)
    assert sr["within_subgroup"]
    assert CrossedHarness(fam).f_report().max_relation_residual() <= 1e-9


def test_strict_relation_table_is_a_report():
    h = CrossedHarness(graded_projection_from_group_algebra(cyclic(3), 1, seed=0))
    table = h.strict_relation_table(3)
    assert set(table) == {2, 3}


def test_repair_family_does_not_get_worse():
    G = cyclic(2)
    start = {0: np.array([[0.6]]), 1: np.array([[0.4]])}
    fam, resid = repair_family(G, start, 1, restarts=1, maxiter=500)
    before = graded_relation_residual(G, start)
    assert resid <= before + 1e-12


def graded_relation_residual(G, slots):
    r = 0.0
    for t in G.elements:
        acc = sum(slots[s] @ slots[G.quotient(s, t)] for s in G.elements)
        r += float(np.sum(np.abs(acc - slots[t]) ** 2))
    return np.sqrt(r)


@pytest.mark.parametrize("G", [cyclic(2), cyclic(3)], ids=lambda G: G.name)
def test_cutoff_projection(G):
    rng = np.random.default_rng(0)
    pts = []
    for _ in range(3):
        w = rng.uniform(0.1, 1, len(G))
        pts.append(dict(zip(G.elements, w / w.sum())))
    rep = cutoff_projection(G, G.elements, pts)
    assert rep.passed
    assert rep.cutoff_defect <= 1e-12
    assert rep.idempotent_defect <= 1e-10
    assert rep.rank == pytest.approx(len(rep.points))


def test_cutoff_barycenter():
    G = cyclic(3)
    rep = cutoff_projection(G, G.elements, [{0: "1/3", 1: "1/3", 2: "1/3"}])
    assert len(rep.points) == 1
    assert np.allclose(rep.e, np.ones((3, 3)) / 3)


def test_bad_sample_points():
    G = cyclic(3)
    with pytest.raises(SampleSetError):
        orbit_closure(G, [0], [{0: 0.5, 1: 0.5}])
    with pytest.raises(SampleSetError):
        orbit_closure(G, G.elements, [{0: 0.5}])


def test_functional_wrappers():
    fam = graded_projection_from_group_algebra(cyclic(4), 2, seed=3)
    p_hat, rep = build_p_hat(fam)
    assert rep.passed and p_hat.shape == (8, 8)
    f, frep = build_f_family(fam)
    assert frep.passed and set(f) == set(fam.group.elements)
    assert compression_identity_check(fam, (1, 3, 2)) <= 1e-8
