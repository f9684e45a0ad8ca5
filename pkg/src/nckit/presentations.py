"""Universal presentations attached to a simplicial complex.

Three relation systems are supported on the positive generators ``h_s``
(one per vertex):

* FULL: a monomial vanishes when its letter set is not a simplex;
* FLAG: only ``h_s h_t = 0`` for non-edges, computed on the flag saturation;
* ABELIAN: FULL plus commutativity.

Finite presentations are unital (``Σ_s h_s = 1``).  Windows of infinite
complexes are non-unital; for them the relation ``Σ_s h_s h_t = h_t`` is only
available at "closed" vertices t whose whole neighbourhood lies in the
window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .complex import (
    RealizationPoint,
    SimplicialComplex,
    flag_saturation,
    simplex_complex,
    simplex_key,
    vertex_key,
)
from .errors import GeneratorMismatchError, UnknownGeneratorError
from .polynomial import NCPolynomial, bernstein_nonnegative

DEFAULT_COMBINATION_CAP = 100_000
WITNESS_T_VALUES = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))


class Variant(str, Enum):
    FULL = "full"
    FLAG = "flag"
    ABELIAN = "abelian"

    @classmethod
    def parse(cls, tag: str) -> "Variant":
        aliases = {"full": cls.FULL, "s": cls.FULL, "flag": cls.FLAG, "abelian": cls.ABELIAN, "ab": cls.ABELIAN}
        try:
            return aliases[str(tag).lower()]
        except KeyError:
            raise ValueError(f"unknown presentation variant {tag!r}") from None


@dataclass(frozen=True, eq=True)
class AlgebraPresentation:
    """A complex together with one of the relation systems above.

    ``closed`` lists the vertices at which ``Σ_s h_s h_t = h_t`` holds; it
    defaults to every vertex, which for a unital presentation is the same as
    ``Σ_s h_s = 1``.
    """

    complex: SimplicialComplex
    variant: Variant = Variant.FULL
    unital: bool = True
    closed: frozenset | None = None
    label: str = ""

    @cached_property
    def relation_complex(self) -> SimplicialComplex:
        if self.variant is Variant.FLAG:
            return flag_saturation(self.complex)
        return self.complex

    @property
    def generators(self) -> tuple:
        return self.complex.vertices

    @cached_property
    def _generator_set(self) -> frozenset:
        return frozenset(self.complex.vertices)

    def is_generator(self, s) -> bool:
        return s in self._generator_set

    @cached_property
    def closed_vertices(self) -> frozenset:
        if self.closed is None:
            return self._generator_set
        return frozenset(self.closed)

    def check_word(self, word: Iterable) -> tuple:
        w = tuple(word)
        for x in w:
            if not self.is_generator(x):
                raise UnknownGeneratorError(f"{x!r} is not a generator of this presentation")
        return w

    def zero_pairs(self) -> list[tuple]:
        """Ordered pairs (s, t), s != t, with h_s h_t = 0 imposed (Flag relations)."""
        rc = self.relation_complex
        out = []
        for s, t in itertools.permutations(self.generators, 2):
            if not rc.contains((s, t)):
                out.append((s, t))
        return out

    def relation_summary(self) -> dict:
        out: dict = {
            "variant": self.variant.value,
            "unital": self.unital,
            "generators": len(self.generators),
        }
        if self.variant is Variant.FLAG:
            out["zero_pairs"] = self.zero_pairs()
        else:
            out["minimal_nonfaces"] = self.relation_complex.minimal_nonfaces()
        if self.variant is Variant.ABELIAN:
            out["commuting"] = True
        if not self.unital:
            out["closed_vertices"] = sorted(self.closed_vertices, key=vertex_key)
        return out

    def to_json(self) -> dict:
        out = {"complex": self.complex.to_json(), "variant": self.variant.value, "unital": self.unital}
        if self.closed is not None:
            out["closed"] = sorted(self.closed, key=vertex_key)
        if self.label:
            out["label"] = self.label
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "AlgebraPresentation":
        if "maximal" in data:  # a bare complex means the Full presentation
            return cls(SimplicialComplex.from_json(data))
        sigma = SimplicialComplex.from_json(data["complex"])
        closed = data.get("closed")
        if closed is not None:
            closed = frozenset(tuple(c) if isinstance(c, list) else c for c in closed)
        return cls(
            sigma,
            Variant.parse(data.get("variant", "full")),
            bool(data.get("unital", True)),
            closed,
            data.get("label", ""),
        )


def presentation_of(
    sigma: SimplicialComplex,
    variant: Variant | str = Variant.FULL,
    *,
    unital: bool = True,
    closed: Iterable | None = None,
    label: str = "",
) -> AlgebraPresentation:
    if not isinstance(variant, Variant):
        variant = Variant.parse(variant)
    return AlgebraPresentation(sigma, variant, unital, None if closed is None else frozenset(closed), label)


SCALAR_VERTEX = "pt"


def scalars() -> AlgebraPresentation:
    """The complex numbers, presented on a single vertex (h_pt = 1)."""
    return AlgebraPresentation(simplex_complex([SCALAR_VERTEX]), Variant.ABELIAN, True, None, "C")


# -- monomial calculus ----------------------------------------------------


@dataclass(frozen=True)
class MonomialVerdict:
    """``zero`` is True when the relations force the monomial to vanish.

    ``certificate`` (Full/Abelian only, when not zero) is a character: the
    barycenter of the letter-set simplex, where the abelianized monomial is
    strictly positive.
    """

    zero: bool
    reason: str = ""
    certificate: RealizationPoint | None = None

    @property
    def label(self) -> str:
        return "Zero" if self.zero else "NotForcedZero"


def monomial_vanishes(P: AlgebraPresentation, word: Iterable) -> MonomialVerdict:
    w = P.check_word(word)
    if not w:
        return MonomialVerdict(False, "formal unit")
    rc = P.relation_complex
    if P.variant is Variant.FLAG:
        for a, b in zip(w, w[1:]):
            if a != b and not rc.contains((a, b)):
                return MonomialVerdict(True, f"adjacent non-edge {{{a!r}, {b!r}}}")
        return MonomialVerdict(False, "every adjacent pair is an edge")
    letters = set(w)
    if not rc.contains(letters):
        return MonomialVerdict(True, "letter set is not a simplex")
    cert = RealizationPoint.barycenter(letters)
    return MonomialVerdict(False, "letter set is a simplex", cert)


def _vanishes_fast(P: AlgebraPresentation, w: tuple) -> bool:
    if not w:
        return False
    rc = P.relation_complex
    if P.variant is Variant.FLAG:
        return any(a != b and not rc.contains((a, b)) for a, b in zip(w, w[1:]))
    return not rc.contains(set(w))


def skeleton_degree(word: Iterable) -> int:
    """Number of pairwise different letters."""
    return len(set(word))


def in_ideal(P: AlgebraPresentation, word: Iterable, n: int) -> bool:
    """Membership of a monomial in the ideal of products with >= n+1 distinct generators."""
    w = P.check_word(word)
    return skeleton_degree(w) >= n + 1 or monomial_vanishes(P, w).zero


def in_J_delta(delta: Iterable, word: Iterable) -> bool:
    """True iff every vertex of the simplex ``delta`` occurs in ``word``."""
    d = set(delta)
    w = tuple(word)
    stray = set(w) - d
    if stray:
        raise UnknownGeneratorError(f"letters {sorted(stray, key=vertex_key)!r} are not in the simplex")
    return d <= set(w)


# -- symbolic reduction ---------------------------------------------------


def _abelian_word(w: tuple) -> tuple:
    return tuple(sorted(w, key=vertex_key))


def reduce_polynomial(
    P: AlgebraPresentation,
    poly: NCPolynomial,
    *,
    unit_sets: Sequence[Iterable] = (),
) -> NCPolynomial:
    """Rewrite ``poly`` in the target presentation ``P``.

    Two rule families only: drop monomials that vanish, and replace a full
    pattern ``Σ_{s∈V} u h_s v`` (equal coefficients) by ``u v``.  In a unital
    presentation ``V`` is the whole vertex set (and each of ``unit_sets``);
    otherwise the rule is applied only next to a closed vertex.  Members of
    the pattern that vanish count as present.  Sound but not complete.
    """
    abelian = P.variant is Variant.ABELIAN
    terms: dict = {}
    for (w, k), c in poly.items():
        P.check_word(w)
        if abelian:
            w = _abelian_word(w)
        if _vanishes_fast(P, w):
            continue
        terms[(w, k)] = terms.get((w, k), 0) + c
    terms = {key: c for key, c in terms.items() if c != 0}
    families = []
    if P.unital:
        families.append(tuple(P.generators))
        families.extend(tuple(s) for s in unit_sets)
    else:
        families.append(tuple(P.generators))
    closed = P.closed_vertices if not P.unital else None

    vanish_cache: dict = {}

    def vanishes(w):
        r = vanish_cache.get(w)
        if r is None:
            r = vanish_cache[w] = _vanishes_fast(P, w)
        return r

    def try_rewrite() -> bool:
        for (w, k), c in sorted(terms.items(), key=lambda kv: (kv[0][1], len(kv[0][0]), simplex_key(kv[0][0]))):
            if not w:
                continue
            for fam in families:
                fam_set = set(fam)
                if abelian:
                    contexts = []
                    for x in dict.fromkeys(w):
                        if x not in fam_set:
                            continue
                        rest = list(w)
                        rest.remove(x)
                        base = tuple(rest)
                        if closed is not None and not any(y in closed for y in base):
                            continue
                        contexts.append((base, lambda s, base=base: _abelian_word(base + (s,))))
                else:
                    contexts = []
                    for pos, x in enumerate(w):
                        if x not in fam_set:
                            continue
                        u, v = w[:pos], w[pos + 1 :]
                        if closed is not None and not ((v and v[0] in closed) or (u and u[-1] in closed)):
                            continue
                        contexts.append((u + v, lambda s, u=u, v=v: u + (s,) + v))
                for base, member in contexts:
                    members = [member(s) for s in fam]
                    ok = True
                    for mw in members:
                        mc = terms.get((mw, k), 0)
                        if mc == 0:
                            if not vanishes(mw):
                                ok = False
                                break
                        elif mc != c:
                            ok = False
                            break
                    if not ok:
                        continue
                    for mw in members:
                        terms.pop((mw, k), None)
                    if not vanishes(base):
                        nc = terms.get((base, k), 0) + c
                        if nc == 0:
                            terms.pop((base, k), None)
                        else:
                            terms[(base, k)] = nc
                    return True
        return False

    while try_rewrite():
        pass
    return NCPolynomial(terms)


# -- assignments ----------------------------------------------------------


@dataclass(frozen=True)
class GeneratorAssignment:
    """Images of the source generators as polynomials over the target."""

    source: AlgebraPresentation
    target: AlgebraPresentation
    images: Mapping
    name: str = ""

    def __post_init__(self):
        src = set(self.source.generators)
        got = set(self.images)
        if src != got:
            missing = sorted(src - got, key=vertex_key)
            extra = sorted(got - src, key=vertex_key)
            raise GeneratorMismatchError(
                f"assignment generators differ from source: missing {missing!r}, extra {extra!r}"
            )
        for s, img in self.images.items():
            if not isinstance(img, NCPolynomial):
                raise TypeError(f"image of {s!r} is not an NCPolynomial")
            for x in img.letters():
                if not self.target.is_generator(x):
                    raise GeneratorMismatchError(f"image of {s!r} uses {x!r}, not a target generator")

    def image(self, s) -> NCPolynomial:
        return self.images[s]

    def __call__(self, poly: NCPolynomial) -> NCPolynomial:
        return poly.substitute(self.images)

    @property
    def t_degree(self) -> int:
        return max((p.t_degree for p in self.images.values()), default=0)

    def at(self, t) -> "GeneratorAssignment":
        return GeneratorAssignment(
            self.source, self.target, {s: p.specialize(t) for s, p in self.images.items()}, self.name
        )

    def then(self, other: "GeneratorAssignment") -> "GeneratorAssignment":
        """Composite ``other ∘ self`` (apply self first)."""
        return compose(other, self)

    def same_images(self, other: "GeneratorAssignment", reduce: bool = True) -> bool:
        """Image-wise equality, optionally after reduction in the target."""
        if set(self.images) != set(other.images):
            return False
        for s in self.images:
            d = self.images[s] - other.images[s]
            if reduce:
                d = reduce_polynomial(self.target, d)
            if not d.is_zero():
                return False
        return True

    def to_json(self) -> dict:
        return {
            "images": [[_label_json(s), self.images[s].to_json()] for s in self.source.generators],
        }

    @classmethod
    def from_json(
        cls, source: AlgebraPresentation, target: AlgebraPresentation, data: Mapping
    ) -> "GeneratorAssignment":
        raw = data["images"] if "images" in data else data
        images = {}
        pairs = raw.items() if isinstance(raw, Mapping) else raw
        for key, terms in pairs:
            images[_label_from(key)] = NCPolynomial.from_json(terms, _label_from)
        return cls(source, target, images, data.get("name", "") if isinstance(data, Mapping) else "")


def _label_json(x):
    return [_label_json(y) for y in x] if isinstance(x, tuple) else x


def _label_from(x):
    return tuple(_label_from(y) for y in x) if isinstance(x, list) else x


def compose(outer: GeneratorAssignment, inner: GeneratorAssignment) -> GeneratorAssignment:
    """``outer ∘ inner``; the target of ``inner`` must be the source of ``outer``."""
    if set(inner.target.generators) != set(outer.source.generators):
        raise GeneratorMismatchError("cannot compose: inner target and outer source differ")
    images = {s: p.substitute(outer.images) for s, p in inner.images.items()}
    return GeneratorAssignment(inner.source, outer.target, images)


@dataclass(frozen=True)
class HomotopyFamily:
    """An assignment whose coefficients are polynomials in t ∈ [lo, hi]."""

    assignment: GeneratorAssignment
    start: GeneratorAssignment | None = None
    end: GeneratorAssignment | None = None
    domain: tuple = (0, 1)
    name: str = ""

    @property
    def source(self) -> AlgebraPresentation:
        return self.assignment.source

    @property
    def target(self) -> AlgebraPresentation:
        return self.assignment.target

    def at(self, t) -> GeneratorAssignment:
        return self.assignment.at(t)

    def endpoints_match(self) -> dict:
        """Exact comparison of the specialised ends with the named endpoints."""
        out = {}
        lo, hi = self.domain
        for label, t, named in (("start", lo, self.start), ("end", hi, self.end)):
            if named is not None:
                out[label] = self.at(t).same_images(named, reduce=False)
        return out


# -- verification ---------------------------------------------------------


class Status(str, Enum):
    VERIFIED = "Verified"
    FAILED = "Failed"
    UNDETERMINED = "Undetermined"


@dataclass
class RelationCheck:
    relation: str
    status: Status
    residual: NCPolynomial | None = None
    witness: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"relation": self.relation, "status": self.status.value}
        if self.residual is not None and not self.residual.is_zero():
            out["residual"] = self.residual.to_json()
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Verification:
    status: Status
    checks: list[RelationCheck] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def exit_code(self) -> int:
        return {Status.VERIFIED: 0, Status.FAILED: 1, Status.UNDETERMINED: 2}[self.status]

    def failures(self) -> list[RelationCheck]:
        return [c for c in self.checks if c.status is not Status.VERIFIED]

    def counts(self) -> dict:
        out = {s.value: 0 for s in Status}
        for c in self.checks:
            out[c.status.value] += 1
        return out

    def to_json(self, include_verified: bool = False) -> dict:
        shown = self.checks if include_verified else self.failures()
        return {
            "status": self.status.value,
            "counts": self.counts(),
            "checks": [c.to_json() for c in shown],
        }


def visibly_positive(P: AlgebraPresentation, poly: NCPolynomial) -> bool:
    """Syntactic positivity for t in [0, 1].

    Accepted: palindromic monomials (self-conjugations) with coefficients
    that are nonnegative on [0, 1], plus a linear part ``a·1 + Σ b_s h_s``
    that is a nonnegative combination of generators and 1 (in a unital
    target, after shifting by a multiple of ``Σ h_s = 1``).  In an abelian
    target every monomial is positive.
    """
    coeffs = poly.t_coefficients()
    abelian = P.variant is Variant.ABELIAN
    unit = coeffs.pop((), [0])
    linear: dict = {}
    for w, cs in coeffs.items():
        if len(w) == 1:
            linear[w[0]] = cs
            continue
        if not abelian and w != w[::-1]:
            return False
        if not bernstein_nonnegative(cs):
            return False
    if P.unital and linear:
        # a + Σ b_s h_s = (a - μ) + Σ (b_s + μ) h_s for any μ(t); feasible iff a + b_s >= 0
        for s in P.generators:
            if not bernstein_nonnegative(_padd(unit, linear.get(s, [0]))):
                return False
        return True
    if not bernstein_nonnegative(unit):
        return False
    return all(bernstein_nonnegative(cs) for cs in linear.values())


def _padd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def target_characters(P: AlgebraPresentation, limit: int = 200) -> list[dict]:
    """Exact rational characters of the presentation used to witness failures."""
    rc = P.relation_complex
    pts: list[dict] = []
    for f in rc.maximal[:limit]:
        pts.append(dict(RealizationPoint.barycenter(f).weights))
        for v in f:
            pts.append({v: Fraction(1)})
        if len(f) > 1:
            # an asymmetric interior point separates non-symmetric residuals
            total = sum(range(1, len(f) + 1))
            pts.append({v: Fraction(i + 1, total) for i, v in enumerate(f)})
    if not P.unital:
        pts.append({})
    uniq = []
    seen = set()
    for p in pts:
        key = tuple(sorted(((simplex_key((k,)), v) for k, v in p.items())))
        if key not in seen:
            seen.add(key)
            uniq.append(p)
    return uniq


def _character_witness(P: AlgebraPresentation, poly: NCPolynomial, *, nonneg: bool = False) -> dict | None:
    """A character of the target where ``poly`` is nonzero (or negative when ``nonneg``)."""
    ts = WITNESS_T_VALUES if poly.t_degree else (Fraction(0),)
    for w in target_characters(P):
        for t in ts:
            v = poly.evaluate_scalar(w, t)
            bad = (v.real < 0 or v.imag != 0) if (nonneg and isinstance(v, complex)) else (v < 0 if nonneg else v != 0)
            if bad:
                return {
                    "character": {str(k): str(x) for k, x in w.items()},
                    "t": str(t),
                    "value": str(v),
                }
    return None


def _letter_sets(P: AlgebraPresentation, poly: NCPolynomial) -> list[frozenset]:
    sets = dict.fromkeys(frozenset(w) for w in poly.words())
    return list(sets)


def _nonface_products_vanish(P: AlgebraPresentation, images: Sequence[NCPolynomial], cap: int) -> bool | None:
    """Sufficient test that a product of the images vanishes in every order.

    Every choice of one monomial per factor must have a non-simplex letter
    union.  Requires a Full/Abelian target.  None when the search exceeds cap.
    """
    rc = P.relation_complex
    lists = [_letter_sets(P, p) for p in images]
    budget = [cap]

    def dfs(i: int, acc: frozenset) -> bool | None:
        budget[0] -= 1
        if budget[0] < 0:
            return None
        if acc and not rc.contains(acc):
            return True
        if i == len(lists):
            return False
        for s in lists[i]:
            r = dfs(i + 1, acc | s)
            if r is not True:
                return r
        return True

    return dfs(0, frozenset())


def verify_assignment(
    a: GeneratorAssignment,
    *,
    max_combinations: int = DEFAULT_COMBINATION_CAP,
    unit_sets: Sequence[Iterable] = (),
) -> Verification:
    """Check every defining relation of the source after substitution.

    Each relation is Verified (reduces to 0 / visibly positive), Failed
    (a target character exhibits a violation) or Undetermined.
    """
    src, tgt = a.source, a.target
    checks: list[RelationCheck] = []
    images = {s: reduce_polynomial(tgt, p, unit_sets=unit_sets) for s, p in a.images.items()}

    def zero_check(name: str, poly: NCPolynomial):
        r = reduce_polynomial(tgt, poly, unit_sets=unit_sets)
        if r.is_zero():
            checks.append(RelationCheck(name, Status.VERIFIED))
            return
        wit = _character_witness(tgt, r)
        status = Status.FAILED if wit else Status.UNDETERMINED
        checks.append(RelationCheck(name, status, r, wit))

    # positivity of each image
    for s in src.generators:
        img = images[s]
        name = f"positive h[{s}]"
        if img.adjoint() != img and reduce_polynomial(tgt, img - img.adjoint()) != NCPolynomial():
            checks.append(RelationCheck(name, Status.FAILED, img, note="image is not self-adjoint"))
        elif visibly_positive(tgt, img):
            checks.append(RelationCheck(name, Status.VERIFIED))
        else:
            wit = _character_witness(tgt, img, nonneg=True)
            status = Status.FAILED if wit else Status.UNDETERMINED
            checks.append(RelationCheck(name, status, img, wit, "not visibly positive"))

    # product relations
    src_rel = src.relation_complex
    if src.variant is Variant.FLAG:
        for s, t in src.zero_pairs():
            zero_check(f"h[{s}] h[{t}] = 0", images[s] * images[t])
    else:
        for m in src_rel.minimal_nonfaces():
            name = "product over {" + ", ".join(map(str, m)) + "} = 0"
            factors = [images[s] for s in m]
            if any(f.is_zero() for f in factors):
                checks.append(RelationCheck(name, Status.VERIFIED, note="a factor is zero"))
                continue
            if tgt.variant in (Variant.FULL, Variant.ABELIAN):
                ok = _nonface_products_vanish(tgt, factors, max_combinations)
                if ok:
                    checks.append(RelationCheck(name, Status.VERIFIED))
                    continue
                if ok is None:
                    checks.append(RelationCheck(name, Status.UNDETERMINED, note="combination cap reached"))
                    continue
            prod = NCPolynomial.unit()
            for f in factors:
                prod = prod * f
            r = reduce_polynomial(tgt, prod, unit_sets=unit_sets)
            if r.is_zero() and len(m) == 2:
                r2 = reduce_polynomial(tgt, factors[1] * factors[0], unit_sets=unit_sets)
                if r2.is_zero():
                    checks.append(RelationCheck(name, Status.VERIFIED))
                    continue
            wit = _character_witness(tgt, r)
            status = Status.FAILED if wit else Status.UNDETERMINED
            checks.append(RelationCheck(name, status, r, wit, "only the sorted product was reduced"))

    # commutativity
    if src.variant is Variant.ABELIAN:
        for s, t in itertools.combinations(src.generators, 2):
            zero_check(f"[h[{s}], h[{t}]] = 0", images[s] * images[t] - images[t] * images[s])

    # unit relation
    if src.unital:
        total = NCPolynomial.sum_of([])
        for s in src.generators:
            total = total + images[s]
        u = reduce_polynomial(tgt, total - NCPolynomial.unit(), unit_sets=unit_sets)
        if u.is_zero():
            checks.append(RelationCheck("sum of h = 1", Status.VERIFIED))
        else:
            # a non-unital image still satisfies Σ_s h_s h_t = h_t
            for t in src.generators:
                zero_check(f"sum_s h[s] h[{t}] = h[{t}]", u * images[t])
    else:
        for t in sorted(src.closed_vertices, key=vertex_key):
            nbrs = (t,) + src_rel.neighbours(t)
            total = NCPolynomial()
            for s in nbrs:
                total = total + images[s]
            zero_check(f"sum_s h[s] h[{t}] = h[{t}]", total * images[t] - images[t])

    if any(c.status is Status.FAILED for c in checks):
        status = Status.FAILED
    elif any(c.status is Status.UNDETERMINED for c in checks):
        status = Status.UNDETERMINED
    else:
        status = Status.VERIFIED
    return Verification(status, checks)
