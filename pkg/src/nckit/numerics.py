"""Finite-dimensional matrix representations of the presentations."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complex import SimplicialComplex, canonical_simplex, vertex_key
from .errors import DegenerateSpectrumError, DimensionMismatchError, GeneratorMismatchError
from .homomorphisms import BlockAssignment, BlockHomotopy
from .polynomial import NCPolynomial
from .presentations import AlgebraPresentation, GeneratorAssignment, HomotopyFamily, Variant

MAX_RETRIES = 5
FULL_ORDERINGS_LIMIT = 4


@dataclass(frozen=True)
class ToleranceConfig:
    herm: float = 1e-10
    eig: float = 1e-10
    rel: float = 1e-9
    idem: float = 1e-9
    supp: float = 1e-10

    def __post_init__(self):
        for k, v in self.as_dict().items():
            if not v > 0:
                raise ValueError(f"tolerance {k} must be positive, got {v}")

    def as_dict(self) -> dict:
        return {"herm": self.herm, "eig": self.eig, "rel": self.rel, "idem": self.idem, "supp": self.supp}

    def with_overrides(self, overrides: Mapping[str, float]) -> "ToleranceConfig":
        unknown = set(overrides) - set(self.as_dict())
        if unknown:
            raise ValueError(f"unknown tolerance keys {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOL = ToleranceConfig()


def opnorm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def spectral_parts(x: np.ndarray, eps: float = DEFAULT_TOL.eig) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative parts x = x_+ − x_−, eigenvalues within eps of 0 dropped."""
    w, v = np.linalg.eigh(hermitian_part(x))
    pos = np.where(w > eps, w, 0.0)
    neg = np.where(w < -eps, -w, 0.0)
    return (v * pos) @ v.conj().T, (v * neg) @ v.conj().T


def psd_sqrt(m: np.ndarray, eps: float = DEFAULT_TOL.eig) -> np.ndarray:
    """Square root of a positive matrix; eigenvalues above −eps are clamped to 0."""
    w, v = np.linalg.eigh(hermitian_part(m))
    if w.size and w.min() < -eps:
        raise DegenerateSpectrumError(f"matrix is not positive (eigenvalue {w.min():.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def psd_inv_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(m))
    return (v / np.sqrt(w)) @ v.conj().T


@dataclass
class MatrixRep:
    images: dict
    dim: int
    label: str = ""
    seed: int | None = None

    def __post_init__(self):
        for s, m in self.images.items():
            m = np.asarray(m, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatchError(f"image of {s!r} has shape {m.shape}, expected {(self.dim, self.dim)}")
            self.images[s] = m

    @classmethod
    def from_images(cls, images: Mapping, label: str = "", seed: int | None = None) -> "MatrixRep":
        images = {s: np.atleast_2d(np.asarray(m, dtype=complex)) for s, m in images.items()}
        dims = {m.shape for m in images.values()}
        if len(dims) != 1:
            raise DimensionMismatchError(f"images have different shapes {sorted(dims)}")
        (shape,) = dims
        if shape[0] != shape[1]:
            raise DimensionMismatchError(f"images are not square: {shape}")
        return cls(dict(images), shape[0], label, seed)

    def evaluate(self, poly: NCPolynomial, t=None) -> np.ndarray:
        return poly.evaluate(self.images, self.dim, t)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "images": [
                [list(s) if isinstance(s, tuple) else s, {"re": m.real.tolist(), "im": m.imag.tolist()}]
                for s, m in sorted(self.images.items(), key=lambda kv: vertex_key(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MatrixRep":
        images = {}
        entries = data["images"]
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        for key, m in pairs:
            label = tuple(key) if isinstance(key, list) else key
            if isinstance(m, Mapping):
                arr = np.asarray(m["re"], dtype=float) + 1j * np.asarray(m.get("im", np.zeros_like(m["re"])), dtype=float)
            else:
                arr = np.asarray(m, dtype=complex)
            images[label] = arr
        return cls.from_images(images, data.get("label", ""))


@dataclass
class ResidualEntry:
    name: str
    residual: float
    tolerance: float
    worst: str = ""
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.informational or self.residual <= self.tolerance

    def to_json(self) -> dict:
        out = {"name": self.name, "residual": self.residual, "tolerance": self.tolerance, "pass": self.passed}
        if self.worst:
            out["worst"] = self.worst
        if self.informational:
            out["informational"] = True
        return out


@dataclass
class RepReport:
    entries: list[ResidualEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def residual(self, name: str) -> float:
        for e in self.entries:
            if e.name == name:
                return e.residual
        raise KeyError(name)

    def max_relation_residual(self) -> float:
        return max((e.residual for e in self.entries if not e.informational), default=0.0)

    def to_json(self) -> dict:
        return {"pass": self.passed, "entries": [e.to_json() for e in self.entries]}


def _max_entry(name: str, items: Iterable[tuple[str, float]], tol: float) -> ResidualEntry:
    worst, val = "", 0.0
    for label, r in items:
        if r > val or not worst:
            worst, val = label, max(val, r)
    return ResidualEntry(name, val, tol, worst)


def _product(images: Mapping, word: Sequence, dim: int) -> np.ndarray:
    m = np.eye(dim, dtype=complex)
    for x in word:
        m = m @ images[x]
    return m


def verify_matrix_rep(
    rep: MatrixRep,
    P: AlgebraPresentation,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RepReport:
    """Residuals of every defining relation of ``P`` in the representation."""
    gens = set(P.generators)
    if set(rep.images) != gens:
        raise GeneratorMismatchError("representation and presentation have different generators")
    im = rep.images
    d = rep.dim
    rep_entries: list[ResidualEntry] = []
    order = sorted(gens, key=vertex_key)
    rep_entries.append(_max_entry("hermitian", ((str(s), opnorm(im[s] - im[s].conj().T)) for s in order), tol.herm))
    neg = []
    for s in order:
        w = np.linalg.eigvalsh(hermitian_part(im[s])) if d else np.zeros(0)
        neg.append((str(s), max(0.0, -float(w.min())) if w.size else 0.0))
    rep_entries.append(_max_entry("negative eigenvalue", neg, tol.eig))

    rc = P.relation_complex
    if P.variant is Variant.FLAG:
        items = ((f"{s}*{t}", opnorm(im[s] @ im[t])) for s, t in P.zero_pairs())
        rep_entries.append(_max_entry("zero products", items, tol.rel))
    else:
        def words():
            for m in rc.minimal_nonfaces():
                orders = itertools.permutations(m) if len(m) <= FULL_ORDERINGS_LIMIT else (m, m[::-1])
                for w in orders:
                    yield "*".join(map(str, w)), opnorm(_product(im, w, d))
        rep_entries.append(_max_entry("zero products", words(), tol.rel))
    if P.variant is Variant.ABELIAN:
        items = (
            (f"[{s},{t}]", opnorm(im[s] @ im[t] - im[t] @ im[s]))
            for s, t in itertools.combinations(order, 2)
        )
        rep_entries.append(_max_entry("commutators", items, tol.rel))

    total = sum((im[s] for s in order), np.zeros((d, d), dtype=complex))
    closed = sorted(P.closed_vertices, key=vertex_key)
    if P.unital:
        items = ((str(t), opnorm(total @ im[t] - im[t])) for t in closed)
    else:
        items = (
            (str(t), opnorm(sum((im[s] for s in (t,) + rc.neighbours(t)), np.zeros((d, d), dtype=complex)) @ im[t] - im[t]))
            for t in closed
        )
    rep_entries.append(_max_entry("sum_s h_s h_t = h_t", items, tol.rel))
    if P.unital:
        rep_entries.append(
            ResidualEntry("sum_s h_s = 1", opnorm(total - np.eye(d)), tol.rel, informational=True)
        )
    return RepReport(rep_entries)


# -- constructions ----------------------------------------------------------


def _random_psd(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g @ g.conj().T


def random_simplex_rep(delta: Iterable, d: int, seed: int = 0) -> MatrixRep:
    """h_i = S^{-1/2} A_i S^{-1/2} with random Gram matrices A_i and S = Σ A_i."""
    if d < 1:
        raise DimensionMismatchError("dimension must be at least 1")
    verts = canonical_simplex(delta)
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        A = [_random_psd(rng, d) for _ in verts]
        S = sum(A)
        w = np.linalg.eigvalsh(S)
        if w.min() > 1e-8 * max(1.0, w.max()):
            Sm = psd_inv_sqrt(S)
            images = {v: hermitian_part(Sm @ a @ Sm) for v, a in zip(verts, A)}
            return MatrixRep(images, d, f"random simplex rep (d={d})", seed)
    raise DegenerateSpectrumError(f"singular sum after {MAX_RETRIES} draws")


def random_complex_rep(sigma: SimplicialComplex, d: int, seed: int = 0) -> MatrixRep:
    """Block diagonal over maximal simplexes; each block a random simplex rep."""
    facets = sigma.maximal
    n = len(facets) * d
    images = {v: np.zeros((n, n), dtype=complex) for v in sigma.vertices}
    for k, f in enumerate(facets):
        block = random_simplex_rep(f, d, seed * 100003 + k)
        sl = slice(k * d, (k + 1) * d)
        for v in f:
            images[v][sl, sl] = block.images[v]
    return MatrixRep(images, n, f"random complex rep ({len(facets)} blocks of {d})", seed)


def clifford_generators(count: int) -> list[np.ndarray]:
    """``count`` pairwise anticommuting hermitian unitaries (Jordan–Wigner)."""
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    Z = np.array([[1, 0], [0, -1]], dtype=complex)
    I = np.eye(2, dtype=complex)
    m = max(1, math.ceil(count / 2))
    out = []
    for k in range(m):
        for P in (X, Y):
            factors = [Z] * k + [P] + [I] * (m - k - 1)
            g = factors[0]
            for f in factors[1:]:
                g = np.kron(g, f)
            out.append(g)
    return out[:count]


@dataclass
class CliffordRep:
    rep: MatrixRep
    x: dict  # i -> x_i = γ_i / sqrt(n+1)
    n: int


def clifford_sphere_rep(n: int, *, spectral: bool = False) -> CliffordRep:
    """Representation of the sphere algebra from x_i = γ_i/√(n+1), Σ x_i² = 1.

    h_{i±} = ((x_i)_±)².  Because γ_i² = 1, (x_i)_±² = (1 ± γ_i)/(2(n+1));
    ``spectral=True`` computes the parts by eigendecomposition instead.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    gam = clifford_generators(n + 1)
    dim = gam[0].shape[0]
    scale = 1.0 / math.sqrt(n + 1)
    I = np.eye(dim, dtype=complex)
    images = {}
    xs = {}
    for i, g in enumerate(gam):
        x = g * scale
        xs[i] = x
        if spectral:
            xp, xm = spectral_parts(x)
            images[f"{i}+"], images[f"{i}-"] = xp @ xp, xm @ xm
        else:
            images[f"{i}+"] = (I + g) / (2 * (n + 1))
            images[f"{i}-"] = (I - g) / (2 * (n + 1))
    return CliffordRep(MatrixRep(images, dim, f"clifford sphere rep n={n}"), xs, n)


def exact_product_is_zero(a: np.ndarray, b: np.ndarray) -> bool:
    """Multiply two float matrices without rounding (entries as exact rationals)."""
    def split(m):
        return [[(Fraction(float(z.real)), Fraction(float(z.imag))) for z in row] for row in np.asarray(m, complex)]

    A, B = split(a), split(b)
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    for i in range(n):
        for j in range(m):
            re = im = Fraction(0)
            for l in range(k):
                (ar, ai), (br, bi) = A[i][l], B[l][j]
                re += ar * br - ai * bi
                im += ar * bi + ai * br
            if re or im:
                return False
    return True


def clifford_round_trip_defect(c: CliffordRep) -> float:
    """max_i ‖x_i − (h_{i+}^{1/2} − h_{i−}^{1/2})‖."""
    im = c.rep.images
    return max(opnorm(c.x[i] - (psd_sqrt(im[f"{i}+"]) - psd_sqrt(im[f"{i}-"]))) for i in c.x)


# -- evaluating assignments and homotopies ------------------------------------


def evaluate_assignment(a: GeneratorAssignment | BlockAssignment, rep: MatrixRep, t=None) -> MatrixRep:
    """Images of the source generators inside ``rep`` (block images double the size)."""
    if isinstance(a, BlockAssignment):
        images = {}
        for s, B in a.images.items():
            images[s] = np.block([[rep.evaluate(B[r][c], t) for c in range(2)] for r in range(2)])
        return MatrixRep(images, 2 * rep.dim)
    return MatrixRep({s: rep.evaluate(p, t) for s, p in a.images.items()}, rep.dim)


@dataclass
class HomotopyReport:
    samples: list[tuple[float, RepReport]]
    endpoint_defects: dict

    @property
    def passed_samples(self) -> bool:
        return all(r.passed for _, r in self.samples)

    def max_residual(self) -> float:
        return max((r.max_relation_residual() for _, r in self.samples), default=0.0)

    def max_endpoint_defect(self) -> float:
        return max(self.endpoint_defects.values(), default=0.0)

    def passed(self, endpoint_tol: float) -> bool:
        return self.passed_samples and self.max_endpoint_defect() <= endpoint_tol

    def to_json(self, endpoint_tol: float) -> dict:
        return {
            "pass": self.passed(endpoint_tol),
            "max_relation_residual": self.max_residual(),
            "endpoint_defects": self.endpoint_defects,
            "samples": [{"t": t, **r.to_json()} for t, r in self.samples],
        }


def verify_homotopy(
    family: HomotopyFamily | BlockHomotopy,
    rep: MatrixRep,
    t_samples: Sequence[float] | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> HomotopyReport:
    """Check the source relations at sampled t and the named endpoints."""
    lo, hi = (float(x) for x in family.domain)
    ts = list(np.linspace(lo, hi, 11)) if t_samples is None else [float(t) for t in t_samples]
    ts = sorted(set(ts) | {lo, hi})
    samples = []
    block = isinstance(family, BlockHomotopy)
    for t in ts:
        if block:
            a = family.at(t)
            mats = evaluate_assignment(a, rep)
        else:
            mats = evaluate_assignment(family.assignment, rep, t)
        samples.append((t, verify_matrix_rep(mats, family.source, tol)))
    defects = {}
    for label, t, named in (("start", lo, family.start), ("end", hi, family.end)):
        if named is None:
            continue
        if block:
            got = evaluate_assignment(family.at(t), rep)
        else:
            got = evaluate_assignment(family.assignment, rep, t)
        want = evaluate_assignment(named, rep)
        defects[label] = max(opnorm(got.images[s] - want.images[s]) for s in got.images)
    return HomotopyReport(samples, defects)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    per_rep: tuple
    kind: str = "lower bound"

    def to_json(self) -> dict:
        return {"value": self.value, "kind": self.kind, "per_rep": list(self.per_rep)}


def norm_sup_estimate(poly: NCPolynomial, reps: Sequence[MatrixRep], t=None) -> NormEstimate:
    """max over the given reps of ‖poly‖; generators a rep does not mention act by 0.

    Any family of representations only gives a lower bound for the universal norm.
    """
    vals = []
    for rep in reps:
        images = dict(rep.images)
        for x in poly.letters():
            images.setdefault(x, np.zeros((rep.dim, rep.dim), dtype=complex))
        vals.append(opnorm(poly.evaluate(images, rep.dim, t)))
    return NormEstimate(max(vals, default=0.0), tuple(vals))


def facet_reps(sigma: SimplicialComplex, d: int, seed: int = 0) -> list[MatrixRep]:
    """One random simplex rep per maximal simplex."""
    return [random_simplex_rep(f, d, seed * 7919 + k) for k, f in enumerate(sigma.maximal)]


def facet_characters(sigma: SimplicialComplex) -> list[MatrixRep]:
    """1×1 vertex characters, one per vertex."""
    return [MatrixRep({v: np.ones((1, 1))}, 1, f"character at {v}") for v in sigma.vertices]
