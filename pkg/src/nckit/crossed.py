"""Crossed-product identities for graded projections over a finite group.

A graded projection family is the set of components p_s of a projection
q = Σ_s p_s ⊗ λ_s.  From it we build

* p̂ = Σ_s p_s ⊗ ρ_s on C^d ⊗ ℓ²(Γ), again a projection;
* f_s = p̂ (1 ⊗ e_ss) p̂, a covariant family with the Σ_F relations;
* β(p_s) = f_1^{1/2} (1 ⊗ λ_s) f_1^{1/2} and the compression identity;
* the cut-off projection e = Σ_s f^{1/2} u_s f^{1/2} on sampled points.

Conventions: λ_s ξ_t = ξ_{st}, ρ_s ξ_t = ξ_{t s^{-1}} (both homomorphisms),
e_st ξ_t = ξ_s.  Tensor factors are ordered (matrix ⊗ group).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateSpectrumError, GroupError, SampleSetError
from .groups import FiniteGroup, graded_support, is_sigma_f_simplex, support_is_symmetric, symmetric_subset
from .numerics import DEFAULT_TOL, ResidualEntry, RepReport, ToleranceConfig, hermitian_part, opnorm, psd_sqrt

SPECTRAL_GAP = 1e-8
REDRAWS = 10


@dataclass
class GradedProjectionFamily:
    group: FiniteGroup
    slots: dict  # element -> d×d matrix (missing elements are 0)
    dim: int
    subgroup: tuple | None = None
    seed: int | None = None

    def p(self, s) -> np.ndarray:
        m = self.slots.get(s)
        return np.zeros((self.dim, self.dim), dtype=complex) if m is None else m

    def support(self, eps: float = DEFAULT_TOL.supp) -> frozenset:
        return graded_support(self.slots, eps)

    def relation_report(self, tol: ToleranceConfig = DEFAULT_TOL) -> RepReport:
        G = self.group
        els = G.elements
        p1 = max(opnorm(self.p(s).conj().T - self.p(G.inv(s))) for s in els)
        p2 = max(
            opnorm(sum((self.p(s) @ self.p(G.quotient(s, t)) for s in els), np.zeros((self.dim, self.dim), complex)) - self.p(t))
            for t in els
        )
        one = self.p(G.identity)
        # the convolution relation at t = 1 reads p_1 = Σ_s p_s p_s*
        sq = opnorm(one - sum((self.p(s) @ self.p(s).conj().T for s in els), np.zeros_like(one)))
        neg = max(0.0, -float(np.linalg.eigvalsh(hermitian_part(one)).min()))
        return RepReport(
            [
                ResidualEntry("adjoint symmetry p_s* = p_{s^-1}", p1, tol.rel),
                ResidualEntry("convolution p_t = sum_s p_s p_{s^-1 t}", p2, tol.rel),
                ResidualEntry("p_1 = sum p_s p_s*", sq, tol.rel),
                ResidualEntry("p_1 positive", neg, tol.eig),
            ]
        )


def averaging_family(G: FiniteGroup, subgroup: Iterable | None = None, d: int = 1) -> GradedProjectionFamily:
    """Components of the projection |H|^{-1} Σ_{h∈H} λ_h (all p_h = 1/|H|)."""
    H = tuple(G.elements if subgroup is None else subgroup)
    if not G.is_subgroup(H):
        raise GroupError("not a subgroup")
    slots = {h: np.eye(d, dtype=complex) / len(H) for h in H}
    return GradedProjectionFamily(G, slots, d, H)


def _regular_on(G: FiniteGroup, H: Sequence, s) -> np.ndarray:
    """λ_s restricted to ℓ²(H) for s ∈ H."""
    idx = {h: i for i, h in enumerate(H)}
    m = np.zeros((len(H), len(H)))
    for h in H:
        m[idx[G.mul(s, h)], idx[h]] = 1
    return m


def graded_projection_from_group_algebra(
    G: FiniteGroup,
    d: int,
    seed: int = 0,
    subgroup: Iterable | None = None,
) -> GradedProjectionFamily:
    """Random projection in M_d ⊗ C*(H), split into its group components.

    A random hermitian x = Σ_h x_h ⊗ λ_h is drawn, its spectral projection
    above the median eigenvalue taken, and p_h read off the block structure
    (averaged over all block positions (hk, k)).
    """
    H = tuple(G.elements if subgroup is None else subgroup)
    if not G.is_subgroup(H):
        raise GroupError(f"{H!r} is not a subgroup")
    n = len(H)
    lam = {h: _regular_on(G, H, h) for h in H}
    rng = np.random.default_rng(seed)
    N = d * n
    keep = N // 2 if N > 1 else 1
    for _ in range(REDRAWS):
        xs: dict = {}
        for h in H:
            if h in xs:
                continue
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            hi = G.inv(h)
            if hi == h:
                a = hermitian_part(a)
            xs[h] = a
            xs[hi] = a.conj().T
        X = sum(np.kron(xs[h], lam[h]) for h in H)
        w, V = np.linalg.eigh(X)
        if N > 1 and w[N - keep] - w[N - keep - 1] < SPECTRAL_GAP:
            continue
        top = V[:, N - keep :]
        q = top @ top.conj().T
        q4 = q.reshape(d, n, d, n)
        idx = {h: i for i, h in enumerate(H)}
        slots = {}
        for h in H:
            blocks = [q4[:, idx[G.mul(h, k)], :, idx[k]] for k in H]
            slots[h] = np.mean(blocks, axis=0)
        return GradedProjectionFamily(G, slots, d, H, seed)
    raise DegenerateSpectrumError(f"no spectral gap at the median after {REDRAWS} draws")


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((n, n))
    m[i, j] = 1
    return m


@dataclass
class CrossedHarness:
    """p̂, f_s and β for a graded projection family."""

    family: GradedProjectionFamily
    p_hat: np.ndarray = field(init=False)
    f: dict = field(init=False)

    def __post_init__(self):
        fam = self.family
        G = fam.group
        d, n = fam.dim, len(G)
        self.index = {s: i for i, s in enumerate(G.elements)}
        self.lam = {s: np.kron(np.eye(d), G.left_regular(s)) for s in G.elements}
        self.p_hat = sum(
            (np.kron(fam.p(s), G.right_regular(s)) for s in G.elements if s in fam.slots),
            np.zeros((d * n, d * n), dtype=complex),
        )
        self.f = {
            s: self.p_hat @ np.kron(np.eye(d), matrix_unit(n, self.index[s], self.index[s])) @ self.p_hat
            for s in G.elements
        }
        self._f1_sqrt = None

    @property
    def size(self) -> int:
        return self.p_hat.shape[0]

    def projection_report(self, tol: ToleranceConfig = DEFAULT_TOL) -> RepReport:
        P = self.p_hat
        return RepReport(
            [
                ResidualEntry("p_hat idempotent", opnorm(P @ P - P), tol.idem),
                ResidualEntry("p_hat self-adjoint", opnorm(P.conj().T - P), tol.idem),
            ]
        )

    def e_unit(self, s, t) -> np.ndarray:
        n = len(self.family.group)
        return matrix_unit(n, self.index[s], self.index[t])

    def f_report(self, tol: ToleranceConfig = DEFAULT_TOL, support: Iterable | None = None) -> RepReport:
        fam, G, f, P = self.family, self.family.group, self.f, self.p_hat
        F = set(fam.support(tol.supp) if support is None else support)
        els = G.elements
        r_i = r_ii = r_iii = r_iv = r_v = 0.0
        cross = 0.0
        for s in els:
            for t in els:
                prod = f[s] @ f[t]
                rhs = P @ np.kron(fam.p(G.quotient(s, t)), self.e_unit(s, t)) @ P
                r_i = max(r_i, opnorm(prod - rhs))
                if G.quotient(s, t) not in F:
                    r_ii = max(r_ii, opnorm(prod))
                    cross = max(cross, opnorm(rhs))
        for t in els:
            r_iii = max(r_iii, opnorm(sum(f[s] @ f[t] for s in els) - f[t]))
            for s in els:
                L = self.lam[s]
                r_iv = max(r_iv, opnorm(L @ f[t] @ L.conj().T - f[G.mul(s, t)]))
        for s in els:
            r_v = max(r_v, max(0.0, -float(np.linalg.eigvalsh(hermitian_part(f[s])).min())))
        return RepReport(
            [
                ResidualEntry("f_s f_t = p_hat (p_{s^-1 t} ⊗ e_st) p_hat", r_i, tol.rel),
                ResidualEntry("f_s f_t = 0 off F", r_ii, tol.rel),
                ResidualEntry("sum_s f_s f_t = f_t", r_iii, tol.rel),
                ResidualEntry("translation covariance", r_iv, tol.rel),
                ResidualEntry("f_s positive", r_v, tol.eig),
                ResidualEntry("p_hat (p_{s^-1 t} ⊗ e_st) p_hat off F (cross-check)", cross, tol.rel),
            ]
        )

    @property
    def f1_sqrt(self) -> np.ndarray:
        if self._f1_sqrt is None:
            self._f1_sqrt = psd_sqrt(self.f[self.family.group.identity])
        return self._f1_sqrt

    def beta(self, s) -> np.ndarray:
        r = self.f1_sqrt
        return r @ self.lam[s] @ r

    def compression_residual(self, word: Sequence, outer_power: float = 0.5) -> float:
        """‖(1⊗e_11) f_1^a β(x) f_1^a (1⊗e_11) − (p_1 x p_1) ⊗ e_11‖ for x = p_{s_1}···p_{s_n}.

        The identity holds for a = 1/2; ``outer_power=1`` gives the variant
        with f_1 on both sides, which does not hold in general.
        """
        fam, G = self.family, self.family.group
        one = G.identity
        d = fam.dim
        bx = np.eye(self.size, dtype=complex)
        x = np.eye(d, dtype=complex)
        for s in word:
            bx = bx @ self.beta(s)
            x = x @ fam.p(s)
        outer = self.f1_sqrt if outer_power == 0.5 else _psd_power(self.f[one], outer_power)
        E11 = np.kron(np.eye(d), self.e_unit(one, one))
        lhs = E11 @ outer @ bx @ outer @ E11
        rhs = np.kron(fam.p(one) @ x @ fam.p(one), self.e_unit(one, one))
        return opnorm(lhs - rhs)

    def compression_report(self, max_len: int = 3, tol: float = 1e-8, alphabet: Iterable | None = None) -> ResidualEntry:
        letters = list(self.family.support() if alphabet is None else alphabet)
        letters.sort(key=lambda s: self.index[s])
        worst, worst_word = 0.0, ()
        for L in range(1, max_len + 1):
            for word in itertools.product(letters, repeat=L):
                r = self.compression_residual(word)
                if r > worst:
                    worst, worst_word = r, word
        return ResidualEntry(f"compression identity, words of length <= {max_len}", worst, tol, " ".join(map(str, worst_word)))

    def strict_relation_table(self, max_len: int = 4) -> dict:
        """Norms of p_{s_1}···p_{s_n} over words whose product leaves the support.

        Generic families need not kill these; the table is a report only.
        """
        fam, G = self.family, self.family.group
        F = fam.support()
        letters = sorted(F, key=lambda s: self.index[s])
        out = {}
        for L in range(2, max_len + 1):
            worst, count = 0.0, 0
            for word in itertools.product(letters, repeat=L):
                if G.product(word) in F:
                    continue
                count += 1
                m = np.eye(fam.dim, dtype=complex)
                for s in word:
                    m = m @ fam.p(s)
                worst = max(worst, opnorm(m))
            out[L] = {"words": count, "max_norm": worst}
        return out


def _psd_power(m: np.ndarray, a: float) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(m))
    return (v * np.clip(w, 0.0, None) ** a) @ v.conj().T


def build_p_hat(fam: GradedProjectionFamily, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, RepReport]:
    """p̂ = Σ_s p_s ⊗ ρ_s with its idempotency/self-adjointness report."""
    h = CrossedHarness(fam)
    return h.p_hat, h.projection_report(tol)


def build_f_family(fam: GradedProjectionFamily, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[dict, RepReport]:
    """f_s = p̂ (1 ⊗ e_ss) p̂ for every group element, with the relation report."""
    h = CrossedHarness(fam)
    return h.f, h.f_report(tol)


def compression_identity_check(fam: GradedProjectionFamily, word: Sequence) -> float:
    """Residual of the compression identity for x = p_{s_1}···p_{s_n}."""
    return CrossedHarness(fam).compression_residual(word)


def rho_convention_selftest() -> float:
    """Idempotency defect of p̂ for averaging families (Z/2 and S_3)."""
    from .groups import cyclic, symmetric

    worst = 0.0
    for G in (cyclic(2), symmetric(3)):
        h = CrossedHarness(averaging_family(G))
        worst = max(worst, opnorm(h.p_hat @ h.p_hat - h.p_hat))
    S3 = symmetric(3)
    h = CrossedHarness(graded_projection_from_group_algebra(S3, 2, 0))
    return max(worst, opnorm(h.p_hat @ h.p_hat - h.p_hat))


def support_report(fam: GradedProjectionFamily, tol: ToleranceConfig = DEFAULT_TOL) -> dict:
    G = fam.group
    supp = fam.support(tol.supp)
    H = set(fam.subgroup or G.elements)
    return {
        "support": sorted(map(str, supp)),
        "symmetric": support_is_symmetric(G, supp),
        "contains_identity": (not supp) or G.identity in supp,
        "within_subgroup": supp <= H,
    }


def repair_family(
    G: FiniteGroup,
    partial: Mapping,
    d: int,
    *,
    seed: int = 0,
    restarts: int = 3,
    maxiter: int = 4000,
) -> tuple[GradedProjectionFamily, float]:
    """Best-effort: nudge a user family towards the graded-projection relations.

    Minimizes the squared residuals of the adjoint and convolution relations
    with Powell's method from the given start plus random restarts.  Nothing
    is guaranteed; the final residual is returned alongside the family.
    """
    from scipy.optimize import minimize

    slots = list(partial)
    k = len(slots)
    pos = {s: i for i, s in enumerate(slots)}

    def unpack(v):
        z = v[: k * d * d] + 1j * v[k * d * d :]
        return {s: z[i * d * d : (i + 1) * d * d].reshape(d, d) for s, i in pos.items()}

    def loss(v):
        fam = GradedProjectionFamily(G, unpack(v), d)
        r = 0.0
        for s in G.elements:
            r += np.sum(np.abs(fam.p(s).conj().T - fam.p(G.inv(s))) ** 2)
        for t in G.elements:
            acc = sum(fam.p(s) @ fam.p(G.quotient(s, t)) for s in G.elements)
            r += np.sum(np.abs(acc - fam.p(t)) ** 2)
        return float(r)

    start = np.concatenate(
        [np.concatenate([np.asarray(partial[s], complex).ravel() for s in slots]).real,
         np.concatenate([np.asarray(partial[s], complex).ravel() for s in slots]).imag]
    )
    rng = np.random.default_rng(seed)
    best_v, best = start, loss(start)
    for r in range(restarts + 1):
        x0 = start if r == 0 else start + 0.1 * rng.standard_normal(start.shape)
        res = minimize(loss, x0, method="Powell", options={"maxiter": maxiter, "xtol": 1e-12, "ftol": 1e-16})
        if res.fun < best:
            best_v, best = res.x, float(res.fun)
    return GradedProjectionFamily(G, unpack(best_v), d, seed=seed), float(np.sqrt(best))


# -- cut-off projection on sampled points ----------------------------------


def _weight(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def _point_key(point: Mapping, digits: int = 12) -> tuple:
    items = []
    for k, v in point.items():
        if v == 0:
            continue
        vv = v if isinstance(v, Fraction) else round(float(v), digits)
        items.append((str(k), vv))
    return tuple(sorted(items))


def translate_point(G: FiniteGroup, s, point: Mapping) -> dict:
    """(s·μ)(g) = μ(s^{-1} g): the support moves to s·supp."""
    return {G.mul(s, g): w for g, w in point.items() if w != 0}


@dataclass
class CutoffReport:
    points: list
    cutoff_defect: float
    covariance_defect: float
    idempotent_defect: float
    adjoint_defect: float
    rank: float
    tol: ToleranceConfig
    e: np.ndarray = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return (
            self.cutoff_defect <= 1e-12
            and self.idempotent_defect <= self.tol.idem
            and self.adjoint_defect <= self.tol.idem
            and self.covariance_defect <= self.tol.rel
        )

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "samples": len(self.points),
            "entries": [
                {"name": "sum of translates of f = 1", "residual": self.cutoff_defect, "tolerance": 1e-12},
                {"name": "u_s f u_s* = s(f)", "residual": self.covariance_defect, "tolerance": self.tol.rel},
                {"name": "e idempotent", "residual": self.idempotent_defect, "tolerance": self.tol.idem},
                {"name": "e self-adjoint", "residual": self.adjoint_defect, "tolerance": self.tol.idem},
            ],
            "trace_of_e": self.rank,
        }


def orbit_closure(G: FiniteGroup, F: Iterable, points: Iterable[Mapping], eps: float = 1e-9) -> list[dict]:
    """Γ-orbits of realization points of Σ_F, duplicates merged."""
    Fs = symmetric_subset(G, F)
    out: list[dict] = []
    seen = set()
    for raw in points:
        mu = {G.canonical(k): _weight(v) for k, v in raw.items()}
        if any(float(v) < -eps for v in mu.values()):
            raise SampleSetError("negative weight in sample point")
        supp = [k for k, v in mu.items() if v != 0]
        if not supp:
            raise SampleSetError("sample point has empty support")
        if abs(float(sum(mu.values())) - 1) > eps:
            raise SampleSetError("sample point weights do not sum to 1")
        if not is_sigma_f_simplex(G, Fs, supp):
            raise SampleSetError("sample point is not supported on a simplex of Σ_F")
        for s in G.elements:
            nu = translate_point(G, s, mu)
            key = _point_key(nu)
            if key not in seen:
                seen.add(key)
                out.append(nu)
    return out


def check_invariant(G: FiniteGroup, points: Sequence[Mapping]) -> None:
    keys = {_point_key(p) for p in points}
    for p in points:
        for s in G.elements:
            if _point_key(translate_point(G, s, p)) not in keys:
                raise SampleSetError("sample set is not invariant under the group")


def cutoff_projection(
    G: FiniteGroup,
    F: Iterable,
    points: Iterable[Mapping],
    *,
    close: bool = True,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> CutoffReport:
    """Projection e = Σ_s f^{1/2} u_s f^{1/2} with f = h_1 on sampled points.

    Functions on the sample set X act diagonally on ℓ²(X) ⊗ ℓ²(Γ) and
    u_s = (permutation of X) ⊗ λ_s; f(μ) = μ(1).
    """
    X = orbit_closure(G, F, points) if close else [dict(p) for p in points]
    check_invariant(G, X)
    keys = [_point_key(p) for p in X]
    where = {k: i for i, k in enumerate(keys)}
    m, n = len(X), len(G)
    fvals = np.array([float(p.get(G.identity, 0)) for p in X])
    # pointwise cut-off property: Σ_s f(s^{-1}μ) = Σ_s μ(s)
    sums = np.zeros(m)
    for s in G.elements:
        for i, p in enumerate(X):
            sums[i] += float(translate_point(G, G.inv(s), p).get(G.identity, 0))
    cutoff = float(np.max(np.abs(sums - 1))) if m else 0.0
    perms = {}
    for s in G.elements:
        Pm = np.zeros((m, m))
        for i, p in enumerate(X):
            Pm[where[_point_key(translate_point(G, s, p))], i] = 1
        perms[s] = Pm
    u = {s: np.kron(perms[s], G.left_regular(s)) for s in G.elements}
    fmat = np.kron(np.diag(fvals), np.eye(n))
    fs = np.kron(np.diag(np.sqrt(np.clip(fvals, 0, None))), np.eye(n))
    cov = 0.0
    for s in G.elements:
        sf = np.array([float(translate_point(G, G.inv(s), p).get(G.identity, 0)) for p in X])
        cov = max(cov, opnorm(u[s] @ fmat @ u[s].T - np.kron(np.diag(sf), np.eye(n))))
    e = sum(fs @ u[s] @ fs for s in G.elements)
    return CutoffReport(
        X,
        cutoff,
        cov,
        opnorm(e @ e - e),
        opnorm(e.conj().T - e),
        float(np.trace(e).real),
        tol,
        e,
    )
