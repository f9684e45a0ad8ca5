"""Named generator assignments and homotopies between presentations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .complex import (
    SimplicialComplex,
    SimplicialMap,
    canonical_simplex,
    simplex_complex,
    sphere_complex,
    sphere_vertex,
    verify_simplicial_map,
)
from .errors import ComplexError, NotSimplicialError, NotSubcomplexError, UnknownGeneratorError
from .polynomial import NCPolynomial
from .presentations import (
    AlgebraPresentation,
    GeneratorAssignment,
    HomotopyFamily,
    Variant,
    presentation_of,
    scalars,
    SCALAR_VERTEX,
)

ZERO = NCPolynomial()
ONE = NCPolynomial.unit()
T = NCPolynomial.param()


def identity_hom(P: AlgebraPresentation) -> GeneratorAssignment:
    return GeneratorAssignment(P, P, {s: NCPolynomial.gen(s) for s in P.generators}, "identity")


def evaluation_hom(
    sigma: SimplicialComplex,
    sub: SimplicialComplex,
    variant: Variant | str = Variant.FULL,
) -> GeneratorAssignment:
    """Restriction to a subcomplex: h_s ↦ h_s on its vertices, 0 elsewhere."""
    if not sub.is_subcomplex_of(sigma):
        raise NotSubcomplexError("second complex is not a subcomplex of the first")
    src = presentation_of(sigma, variant)
    tgt = presentation_of(sub, variant)
    images = {s: NCPolynomial.gen(s) if sub.has_vertex(s) else ZERO for s in sigma.vertices}
    return GeneratorAssignment(src, tgt, images, "evaluation")


def induced_hom(m: SimplicialMap, variant: Variant | str = Variant.FULL) -> GeneratorAssignment:
    """Contravariant map C_target → C_source: h_s ↦ Σ_{m(t)=s} h_t."""
    check = verify_simplicial_map(m)
    if not check:
        raise NotSimplicialError(f"vertex map is not simplicial: {check.violations[:3]!r}")
    src = presentation_of(m.target, variant)
    tgt = presentation_of(m.source, variant)
    images = {s: NCPolynomial.sum_of(m.preimage(s)) for s in m.target.vertices}
    return GeneratorAssignment(src, tgt, images, "induced")


def _check_vertex(P: AlgebraPresentation, s) -> None:
    if not P.is_generator(s):
        raise UnknownGeneratorError(f"{s!r} is not a vertex of the presentation")


def character_at_vertex(P: AlgebraPresentation, s) -> GeneratorAssignment:
    """The character h_s ↦ 1, all other generators ↦ 0, into the scalars."""
    _check_vertex(P, s)
    C = scalars()
    images = {v: NCPolynomial.unit() if v == s else ZERO for v in P.generators}
    return GeneratorAssignment(P, C, images, f"character at {s}")


def point_evaluation(P: AlgebraPresentation, s) -> GeneratorAssignment:
    """The character at ``s`` followed by the unit inclusion C → P."""
    _check_vertex(P, s)
    images = {v: NCPolynomial.unit() if v == s else ZERO for v in P.generators}
    return GeneratorAssignment(P, P, images, f"point evaluation at {s}")


def unit_inclusion(P: AlgebraPresentation) -> GeneratorAssignment:
    return GeneratorAssignment(scalars(), P, {SCALAR_VERTEX: NCPolynomial.unit()}, "unit inclusion")


def _simplex_presentation(delta: Iterable) -> tuple[AlgebraPresentation, tuple]:
    verts = canonical_simplex(delta)
    return presentation_of(simplex_complex(verts)), verts


def constant_hom(delta: Iterable) -> GeneratorAssignment:
    """h_i ↦ 1/(n+1)·1 on the n-simplex, as an endomorphism."""
    P, verts = _simplex_presentation(delta)
    c = Fraction(1, len(verts))
    return GeneratorAssignment(P, P, {s: NCPolynomial.unit(c) for s in verts}, "constant")


def contraction_homotopy(delta: Iterable) -> HomotopyFamily:
    """h_i ↦ t h_i + (1−t)/(n+1) from the constant map (t=0) to the identity (t=1)."""
    P, verts = _simplex_presentation(delta)
    c = Fraction(1, len(verts))
    images = {s: T * NCPolynomial.gen(s) + (ONE - T) * c for s in verts}
    fam = GeneratorAssignment(P, P, images, "contraction")
    return HomotopyFamily(fam, constant_hom(verts), identity_hom(P), (0, 1), "contraction")


def face_retraction_family(delta: Iterable, i: int) -> HomotopyFamily:
    """From C_Δ to the face opposite vertex i: h_s ↦ (1−t)h_s, h_{t_i} ↦ t·1.

    At t=0 this is the evaluation onto the face; at t=1 the character at t_i
    followed by the unit inclusion.
    """
    Pd, verts = _simplex_presentation(delta)
    if len(verts) < 2:
        raise ComplexError("need a simplex with at least two vertices")
    if not 0 <= i < len(verts):
        raise ComplexError(f"vertex index {i} out of range")
    ti = verts[i]
    face = simplex_complex([v for v in verts if v != ti])
    Pf = presentation_of(face)
    images = {s: (T * 1 if s == ti else (ONE - T) * NCPolynomial.gen(s)) for s in verts}
    fam = GeneratorAssignment(Pd, Pf, images, "face retraction")
    start = evaluation_hom(simplex_complex(verts), face)
    end = GeneratorAssignment(Pd, Pf, {s: ONE if s == ti else ZERO for s in verts}, "vertex character")
    return HomotopyFamily(fam, start, end, (0, 1), f"face retraction at {ti}")


def simplex_lift_hom(sigma: SimplicialComplex, delta: Iterable) -> GeneratorAssignment:
    """C_Δ → unitization of C_Σ: h'_i ↦ h_{s_i} + (1 − Σ_j h_{s_j})/(n+1)."""
    verts = canonical_simplex(delta)
    if not sigma.contains(verts):
        raise NotSubcomplexError("the vertex set is not a simplex of the complex")
    src = presentation_of(simplex_complex(verts))
    tgt = presentation_of(sigma)
    c = Fraction(1, len(verts))
    s_sum = NCPolynomial.sum_of(verts)
    images = {s: NCPolynomial.gen(s) + (ONE - s_sum) * c for s in verts}
    return GeneratorAssignment(src, tgt, images, "simplex lift")


def simplex_cp_lift(sigma: SimplicialComplex, delta: Iterable, x: NCPolynomial) -> NCPolynomial:
    """Completely positive lift of x ∈ C_Δ: (Σ_Δ h) α(x) (Σ_Δ h)."""
    a = simplex_lift_hom(sigma, delta)
    s_sum = NCPolynomial.sum_of(canonical_simplex(delta))
    return s_sum * a(x) * s_sum


# -- the noncommutative sphere -------------------------------------------


def sphere_algebra(n: int) -> AlgebraPresentation:
    """Flag presentation of the octahedral n-sphere."""
    return presentation_of(sphere_complex(n), Variant.FLAG, label=f"S_{n}^nc")


def _sphere_pair(i: int) -> tuple[str, str]:
    return sphere_vertex(i, "+"), sphere_vertex(i, "-")


def fold_hom(n: int, indices: Iterable[int]) -> GeneratorAssignment:
    """h_{i+} ↦ h_{i+} + h_{i−}, h_{i−} ↦ 0 for i in ``indices``; others fixed."""
    P = sphere_algebra(n)
    idx = set(indices)
    if any(not 0 <= i <= n for i in idx):
        raise ComplexError(f"fold indices {sorted(idx)} out of range for n={n}")
    images = {s: NCPolynomial.gen(s) for s in P.generators}
    for i in idx:
        p, m = _sphere_pair(i)
        images[p] = NCPolynomial.sum_of((p, m))
        images[m] = ZERO
    name = "fold " + ",".join(map(str, sorted(idx)))
    return GeneratorAssignment(P, P, images, name)


def sphere_point_evaluation(n: int, i: int) -> GeneratorAssignment:
    """h_{i+} ↦ 1 and all other generators ↦ 0, as an endomorphism."""
    P = sphere_algebra(n)
    return point_evaluation(P, sphere_vertex(i, "+"))


def _collapse_family(n: int, indices: tuple[int, ...], anchor: int, end: GeneratorAssignment) -> HomotopyFamily:
    # h_{anchor+} ↦ t(h_{anchor+} + h_{anchor−}) + (1−t)1, folded pairs ↦ t·(sum), rest ↦ t·h
    P = sphere_algebra(n)
    images = {s: T * NCPolynomial.gen(s) for s in P.generators}
    for i in indices:
        p, m = _sphere_pair(i)
        images[p] = T * NCPolynomial.sum_of((p, m))
        images[m] = ZERO
    ap, _ = _sphere_pair(anchor)
    images[ap] = images[ap] + (ONE - T)
    fam = GeneratorAssignment(P, P, images, f"collapse to {ap}")
    start = sphere_point_evaluation(n, anchor)
    return HomotopyFamily(fam, start, end, (0, 1), f"{start.name} to {end.name}")


@dataclass(frozen=True)
class BlockAssignment:
    """Assignment into 2×2 matrices over the target: images[s] = ((a, b), (c, d))."""

    source: AlgebraPresentation
    target: AlgebraPresentation
    images: Mapping

    @classmethod
    def diagonal(cls, first: GeneratorAssignment, second: GeneratorAssignment) -> "BlockAssignment":
        images = {s: ((first.images[s], ZERO), (ZERO, second.images[s])) for s in first.source.generators}
        return cls(first.source, first.target, images)

    def max_difference(self, other: "BlockAssignment") -> float:
        """Largest absolute coefficient difference over all entries."""
        worst = 0.0
        for s in self.images:
            for r in range(2):
                for c in range(2):
                    d = self.images[s][r][c] - other.images[s][r][c]
                    for _, coef in d.items():
                        worst = max(worst, abs(complex(coef)))
        return worst


@dataclass(frozen=True)
class BlockHomotopy:
    """Rotation family R_t B(h) R_t^T on ``rotated`` generators, B(h) elsewhere, t ∈ [0, π/2]."""

    base: BlockAssignment
    rotated: tuple
    start: BlockAssignment
    end: BlockAssignment
    domain: tuple = (0.0, math.pi / 2)
    name: str = "rotation"

    @property
    def source(self) -> AlgebraPresentation:
        return self.base.source

    @property
    def target(self) -> AlgebraPresentation:
        return self.base.target

    def at(self, t: float) -> BlockAssignment:
        if t == 0:
            return self.base
        c, s = math.cos(t), math.sin(t)
        if t == self.domain[1]:
            c, s = 0.0, 1.0  # exact quarter turn
        R = ((c, -s), (s, c))
        images = dict(self.base.images)
        for g in self.rotated:
            B = self.base.images[g]
            out = [[ZERO, ZERO], [ZERO, ZERO]]
            for i in range(2):
                for j in range(2):
                    acc = ZERO
                    for k in range(2):
                        for l in range(2):
                            coef = R[i][k] * R[j][l]
                            if coef != 0 and not B[k][l].is_zero():
                                acc = acc + B[k][l] * coef
                    out[i][j] = acc
            images[g] = ((out[0][0], out[0][1]), (out[1][0], out[1][1]))
        return BlockAssignment(self.base.source, self.base.target, images)


@dataclass(frozen=True)
class SphereHomotopies:
    rotation: BlockHomotopy
    fold_to_point: HomotopyFamily
    first_fold_to_point: HomotopyFamily
    second_fold_to_point: HomotopyFamily

    def scalar_families(self) -> list[HomotopyFamily]:
        return [self.fold_to_point, self.first_fold_to_point, self.second_fold_to_point]


def block_alpha(n: int) -> BlockAssignment:
    """diag(id, fold of pairs 0 and 1)."""
    return BlockAssignment.diagonal(identity_hom(sphere_algebra(n)), fold_hom(n, (0, 1)))


def block_beta(n: int) -> BlockAssignment:
    """diag(fold of pair 0, fold of pair 1)."""
    return BlockAssignment.diagonal(fold_hom(n, (0,)), fold_hom(n, (1,)))


def sphere_homotopies(n: int) -> SphereHomotopies:
    """The homotopies relating the fold maps and point evaluations of the sphere algebra.

    * rotation: diag(fold0, fold1) to diag(id, fold01) by rotating the
      images of h_{0±};
    * fold01 to the evaluation at 0+;
    * fold0 to the evaluation at 0+, fold1 to the evaluation at 1+.
    """
    if n < 1:
        raise ComplexError("the sphere homotopies need n >= 1 (indices 0 and 1)")
    beta = block_beta(n)
    rotation = BlockHomotopy(beta, _sphere_pair(0), beta, block_alpha(n))
    b = _collapse_family(n, (0, 1), 0, fold_hom(n, (0, 1)))
    c0 = _collapse_family(n, (0,), 0, fold_hom(n, (0,)))
    c1 = _collapse_family(n, (1,), 1, fold_hom(n, (1,)))
    return SphereHomotopies(rotation, b, c0, c1)
