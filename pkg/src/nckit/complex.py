"""Finite simplicial complexes stored by their maximal simplexes.

A complex is determined by its facet list: a vertex set ``E`` is a simplex
iff it is contained in some facet.  Everything here is finite; infinite
complexes (such as the Σ_F of a group) are only ever handled through finite
windows built elsewhere.

Vertex labels are ints, strings, or (nested) tuples of those.  They are
ordered type-first (ints < strings < tuples) and naturally within a type,
which gives every simplex a canonical sorted tuple form.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .errors import ComplexError, FacetLimitError, UndefinedVertexError

Vertex = Hashable
Simplex = tuple

DEFAULT_MAX_FACETS = 10**6
EPS_REAL = 1e-9


def vertex_key(v: Any) -> tuple:
    """Sort key implementing the type-first total order on labels."""
    if isinstance(v, bool):
        raise ComplexError(f"booleans are not valid vertex labels: {v!r}")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    raise ComplexError(f"unsupported vertex label {v!r} (use int, str or tuple)")


def simplex_key(s: Sequence) -> tuple:
    return tuple(vertex_key(v) for v in s)


def canonical_simplex(vertices: Iterable) -> Simplex:
    """Sorted, duplicate-free tuple form of a nonempty vertex set."""
    vs = sorted(set(vertices), key=vertex_key)
    if not vs:
        raise ComplexError("simplexes must be nonempty")
    return tuple(vs)


def _absorb(facets: Iterable[frozenset]) -> list[frozenset]:
    """Drop every facet contained in another one."""
    uniq = sorted(set(facets), key=len, reverse=True)
    kept: list[frozenset] = []
    index: dict[Any, list[frozenset]] = defaultdict(list)
    for f in uniq:
        pivot = min(f, key=lambda v: len(index[v]))
        if any(f <= g for g in index[pivot]):
            continue
        kept.append(f)
        for v in f:
            index[v].append(f)
    return kept


class SimplicialComplex:
    """Immutable finite simplicial complex.

    Parameters
    ----------
    facets:
        Iterable of vertex collections.  Contained facets are absorbed.
    vertices:
        Optional extra vertex labels; labels not covered by any facet become
        isolated 0-simplexes.
    max_facets:
        Cap on the number of maximal simplexes (``FacetLimitError`` beyond).
    """

    __slots__ = ("_vertices", "_maximal", "_facet_sets", "_by_vertex", "_hash")

    def __init__(
        self,
        facets: Iterable[Iterable],
        vertices: Iterable | None = None,
        *,
        max_facets: int = DEFAULT_MAX_FACETS,
    ):
        sets = []
        for f in facets:
            fs = frozenset(f)
            if not fs:
                raise ComplexError("empty facet")
            for v in fs:
                vertex_key(v)
            sets.append(fs)
        covered = set().union(*sets) if sets else set()
        if vertices is not None:
            for v in vertices:
                vertex_key(v)
                if v not in covered:
                    sets.append(frozenset([v]))
                    covered.add(v)
        kept = _absorb(sets)
        if len(kept) > max_facets:
            raise FacetLimitError(len(kept), max_facets)
        maximal = sorted((canonical_simplex(f) for f in kept), key=simplex_key)
        self._maximal = tuple(maximal)
        self._facet_sets = tuple(frozenset(f) for f in maximal)
        self._vertices = tuple(sorted(covered, key=vertex_key))
        by_vertex: dict[Any, list[int]] = defaultdict(list)
        for i, f in enumerate(self._facet_sets):
            for v in f:
                by_vertex[v].append(i)
        self._by_vertex = {v: tuple(ix) for v, ix in by_vertex.items()}
        self._hash = None

    # -- basic structure -------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def maximal(self) -> tuple[Simplex, ...]:
        return self._maximal

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self._maximal) - 1 if self._maximal else -1

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and self._maximal == other._maximal

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._maximal))
        return self._hash

    def __repr__(self) -> str:
        return (
            f"SimplicialComplex(vertices={len(self._vertices)}, "
            f"facets={len(self._maximal)}, dim={self.dimension})"
        )

    def has_vertex(self, v) -> bool:
        return v in self._by_vertex

    def contains(self, simplex: Iterable) -> bool:
        """True iff the vertex set is a face of some maximal simplex."""
        s = frozenset(simplex)
        if not s:
            raise ComplexError("simplexes must be nonempty")
        candidates = None
        for v in s:
            ix = self._by_vertex.get(v)
            if ix is None:
                return False
            if candidates is None or len(ix) < len(candidates):
                candidates = ix
        return any(s <= self._facet_sets[i] for i in candidates)

    def __contains__(self, simplex) -> bool:
        return self.contains(simplex)

    def facets_containing(self, v) -> tuple[Simplex, ...]:
        return tuple(self._maximal[i] for i in self._by_vertex.get(v, ()))

    def neighbours(self, v) -> tuple:
        out = set()
        for i in self._by_vertex.get(v, ()):
            out |= self._facet_sets[i]
        out.discard(v)
        return tuple(sorted(out, key=vertex_key))

    def edges(self) -> list[Simplex]:
        return self.simplices(1)

    def simplices(self, k: int | None = None) -> list[Simplex]:
        """All simplexes (of dimension ``k`` if given), canonically sorted."""
        out: set[Simplex] = set()
        for f in self._maximal:
            sizes = range(1, len(f) + 1) if k is None else (k + 1,)
            for size in sizes:
                if size <= len(f):
                    out.update(itertools.combinations(f, size))
        return sorted(out, key=lambda s: (len(s), simplex_key(s)))

    def f_vector(self) -> list[int]:
        """Number of simplexes in each dimension 0..dim."""
        return [len(self.simplices(k)) for k in range(self.dimension + 1)]

    def num_simplices(self) -> int:
        return sum(self.f_vector())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def full_subcomplex(self, vertices: Iterable) -> "SimplicialComplex":
        """Subcomplex of all simplexes whose vertices lie in ``vertices``."""
        keep = set(vertices) & set(self._vertices)
        if not keep:
            raise ComplexError("full subcomplex on an empty vertex set")
        return SimplicialComplex((f & keep for f in self._facet_sets if f & keep), keep)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(other.has_vertex(v) for v in self._vertices) and all(
            other.contains(f) for f in self._maximal
        )

    def minimal_nonfaces(self) -> list[Simplex]:
        """Vertex sets that are not simplexes although all their facets are.

        These generate all non-simplexes under taking supersets.
        """
        out: set[Simplex] = set()
        verts = self._vertices
        for s in self.simplices():
            sset = set(s)
            for v in verts:
                if v in sset or vertex_key(v) < vertex_key(s[-1]):
                    # each candidate is generated from its face missing the
                    # largest vertex only when it is that vertex
                    continue
                cand = sset | {v}
                if self.contains(cand):
                    continue
                if all(self.contains(cand - {x}) for x in cand):
                    out.add(canonical_simplex(cand))
        return sorted(out, key=lambda s: (len(s), simplex_key(s)))

    def to_json(self) -> dict:
        return {
            "vertices": [_label_to_json(v) for v in self._vertices],
            "maximal": [[_label_to_json(v) for v in f] for f in self._maximal],
        }

    @classmethod
    def from_json(cls, data: Mapping, *, max_facets: int = DEFAULT_MAX_FACETS):
        try:
            facets = [[_label_from_json(v) for v in f] for f in data["maximal"]]
            vertices = [_label_from_json(v) for v in data.get("vertices", [])]
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc
        if not facets and not vertices:
            raise ComplexError("complex JSON has no simplexes")
        return cls(facets, vertices, max_facets=max_facets)


def _label_to_json(v):
    return [_label_to_json(x) for x in v] if isinstance(v, tuple) else v


def _label_from_json(v):
    if isinstance(v, list):
        return tuple(_label_from_json(x) for x in v)
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return v
    raise ComplexError(f"unsupported vertex label in JSON: {v!r}")


# -- constructions -------------------------------------------------------


def from_maximal(
    facets: Sequence[Iterable],
    vertices: Iterable | None = None,
    *,
    max_facets: int = DEFAULT_MAX_FACETS,
) -> SimplicialComplex:
    """Complex generated by ``facets`` (redundant facets are absorbed)."""
    if not facets and not vertices:
        raise ComplexError("need at least one facet")
    return SimplicialComplex(facets, vertices, max_facets=max_facets)


def simplex_complex(vertices: Iterable) -> SimplicialComplex:
    """The full simplex on ``vertices``."""
    return SimplicialComplex([canonical_simplex(vertices)])


def contains(sigma: SimplicialComplex, simplex: Iterable) -> bool:
    return sigma.contains(simplex)


def maximal_simplexes(sigma: SimplicialComplex) -> list[Simplex]:
    return list(sigma.maximal)


def skeleton(sigma: SimplicialComplex, k: int) -> SimplicialComplex:
    """Subcomplex of simplexes with at most ``k + 1`` vertices, same vertex set."""
    if k < 0:
        raise ComplexError("skeleton degree must be nonnegative")
    if k >= sigma.dimension:
        return sigma
    facets: list[tuple] = []
    for f in sigma.maximal:
        if len(f) <= k + 1:
            facets.append(f)
        else:
            facets.extend(itertools.combinations(f, k + 1))
    return SimplicialComplex(facets, sigma.vertices)


def one_skeleton_graph(sigma: SimplicialComplex) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(sigma.vertices)
    for f in sigma.maximal:
        g.add_edges_from(itertools.combinations(f, 2))
    return g


def clique_complex(
    graph: nx.Graph, *, max_facets: int = DEFAULT_MAX_FACETS
) -> SimplicialComplex:
    """Flag complex of a graph: one facet per maximal clique."""
    facets = []
    for clique in nx.find_cliques(graph):
        facets.append(clique)
        if len(facets) > max_facets:
            raise FacetLimitError(len(facets), max_facets, "clique complex")
    if not facets:
        raise ComplexError("graph has no vertices")
    return SimplicialComplex(facets, graph.nodes, max_facets=max_facets)


def flag_saturation(
    sigma: SimplicialComplex, *, max_facets: int = DEFAULT_MAX_FACETS
) -> SimplicialComplex:
    """The unique full complex with the same vertices and edges as ``sigma``."""
    return clique_complex(one_skeleton_graph(sigma), max_facets=max_facets)


def is_full(sigma: SimplicialComplex) -> bool:
    return flag_saturation(sigma) == sigma


def barycentric_subdivision(
    sigma: SimplicialComplex, *, max_facets: int = DEFAULT_MAX_FACETS
) -> SimplicialComplex:
    """Vertices are the simplexes of ``sigma``; simplexes are strict chains.

    Maximal chains are the complete flags inside a maximal simplex, one per
    ordering of its vertices.
    """
    count = sum(math.factorial(len(f)) for f in sigma.maximal)
    if count > max_facets:
        raise FacetLimitError(count, max_facets, "barycentric subdivision")
    facets = []
    for f in sigma.maximal:
        for perm in itertools.permutations(f):
            facets.append([canonical_simplex(perm[: i + 1]) for i in range(len(perm))])
    return SimplicialComplex(facets, max_facets=max_facets)


def sphere_vertex(i: int, sign: str) -> str:
    if sign not in "+-" or len(sign) != 1:
        raise ComplexError(f"sign must be '+' or '-', got {sign!r}")
    return f"{i}{sign}"


def sphere_complex(n: int) -> SimplicialComplex:
    """Octahedral n-sphere: vertices i+ and i-, only {i+, i-} is not an edge."""
    if n < 0:
        raise ComplexError("sphere dimension must be nonnegative")
    facets = [
        [sphere_vertex(i, s) for i, s in enumerate(signs)]
        for signs in itertools.product("+-", repeat=n + 1)
    ]
    return SimplicialComplex(facets)


def random_complex(
    n_vertices: int,
    n_facets: int,
    max_dim: int,
    rng: random.Random,
) -> SimplicialComplex:
    """Random complex on vertices ``0..n_vertices-1`` for property tests."""
    facets = []
    for _ in range(n_facets):
        size = rng.randint(1, min(max_dim + 1, n_vertices))
        facets.append(rng.sample(range(n_vertices), size))
    return SimplicialComplex(facets, range(n_vertices))


# -- simplicial maps -----------------------------------------------------


@dataclass(frozen=True)
class MapCheck:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map between finite complexes, not yet known to be simplicial."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: Mapping

    def __call__(self, v):
        return self.vertex_map[v]

    def image(self, simplex: Iterable) -> Simplex:
        return canonical_simplex(self.vertex_map[v] for v in simplex)

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        """Composite ``other ∘ self``."""
        return SimplicialMap(
            self.source,
            other.target,
            {v: other.vertex_map[self.vertex_map[v]] for v in self.source.vertices},
        )

    def preimage(self, w) -> tuple:
        return tuple(v for v in self.source.vertices if self.vertex_map[v] == w)


def verify_simplicial_map(m: SimplicialMap) -> MapCheck:
    """Check that every maximal source simplex lands on a target simplex.

    Raises ``UndefinedVertexError`` if the map misses a source vertex; a map
    that is defined everywhere but not simplicial returns a failing
    ``MapCheck`` listing (facet, image) pairs.  Preimages are finite because
    the source is finite.
    """
    missing = [v for v in m.source.vertices if v not in m.vertex_map]
    if missing:
        raise UndefinedVertexError(f"vertex map undefined on {missing!r}")
    violations = []
    for f in m.source.maximal:
        img = {m.vertex_map[v] for v in f}
        if not all(m.target.has_vertex(w) for w in img) or not m.target.contains(img):
            violations.append((f, canonical_simplex(img)))
    return MapCheck(not violations, violations)


# -- geometric realization -----------------------------------------------


@dataclass(frozen=True)
class RealizationPoint:
    """Finitely supported weighting of vertices (exact or float weights)."""

    weights: Mapping

    @property
    def support(self) -> frozenset:
        return frozenset(v for v, w in self.weights.items() if w != 0)

    def total(self):
        return sum(self.weights.values())

    @classmethod
    def barycenter(cls, simplex: Iterable) -> "RealizationPoint":
        s = canonical_simplex(simplex)
        return cls({v: Fraction(1, len(s)) for v in s})

    @classmethod
    def vertex(cls, v) -> "RealizationPoint":
        return cls({v: Fraction(1)})


def realization_contains(
    sigma: SimplicialComplex,
    point: RealizationPoint | Mapping,
    eps: float = EPS_REAL,
) -> bool:
    """True iff the weights sum to 1 (within ``eps``) on a simplex of ``sigma``."""
    if not isinstance(point, RealizationPoint):
        point = RealizationPoint(point)
    for w in point.weights.values():
        if w < 0 or w > 1:
            return False
    supp = point.support
    if not supp or not all(sigma.has_vertex(v) for v in supp):
        return False
    if abs(point.total() - 1) > eps:
        return False
    return sigma.contains(supp)
