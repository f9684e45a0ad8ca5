"""Groups, the equivariant complexes Σ_F on them, and their finite windows.

Σ_F has the group elements as vertices and the finite sets whose pairwise
quotients s^{-1}t lie in F as simplexes.  Infinite groups (Z^n, free groups)
are only ever handled through an explicit finite window of vertices.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .complex import SimplicialComplex, canonical_simplex, clique_complex, simplex_key, vertex_key
from .errors import GroupError, WindowError
from .presentations import AlgebraPresentation, Variant, monomial_vanishes, presentation_of

Element = Hashable
ASSOCIATIVITY_FULL_LIMIT = 64
EPS_SUPP = 1e-10


class Group:
    """Minimal interface shared by the group oracles."""

    finite = False

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def canonical(self, a) -> Element:
        """Validate an element and return its normal form (GroupError if invalid)."""
        raise NotImplementedError

    def parse(self, token: str) -> Element:
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError

    def quotient(self, s: Element, t: Element) -> Element:
        """s^{-1} t."""
        return self.mul(self.inv(s), t)

    def product(self, elems: Iterable[Element]) -> Element:
        out = self.identity
        for x in elems:
            out = self.mul(out, x)
        return out

    def sort_key(self, a: Element):
        return vertex_key(a)


class FiniteGroup(Group):
    """Group given by a full multiplication table over element labels."""

    finite = True

    def __init__(
        self,
        elements: Sequence,
        mul: Sequence[Sequence[int]],
        inv: Sequence[int] | None = None,
        identity: int | None = None,
        *,
        name: str = "",
        seed: int = 0,
    ):
        self.elements = list(elements)
        for e in self.elements:
            vertex_key(e)
        n = len(self.elements)
        if n == 0:
            raise GroupError("a group needs at least one element")
        if len(set(self.elements)) != n:
            raise GroupError("duplicate element labels")
        self.table = np.asarray(mul, dtype=np.int64)
        if self.table.shape != (n, n) or self.table.min() < 0 or self.table.max() >= n:
            raise GroupError("multiplication table must be n×n with entries in 0..n-1")
        if identity is None:
            cands = [i for i in range(n) if all(self.table[i, j] == j and self.table[j, i] == j for j in range(n))]
            if not cands:
                raise GroupError("no identity element")
            identity = cands[0]
        self.id_index = int(identity)
        ident = np.arange(n)
        if not (np.array_equal(self.table[self.id_index], ident) and np.array_equal(self.table[:, self.id_index], ident)):
            raise GroupError("identity law fails")
        if inv is None:
            inv = [int(np.nonzero(self.table[i] == self.id_index)[0][0]) if (self.table[i] == self.id_index).any() else -1 for i in range(n)]
        self.inv_table = np.asarray(inv, dtype=np.int64)
        for i in range(n):
            j = self.inv_table[i]
            if not 0 <= j < n or self.table[i, j] != self.id_index or self.table[j, i] != self.id_index:
                raise GroupError(f"inverse law fails at element {self.elements[i]!r}")
        self._check_associative(seed)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.name = name

    def _check_associative(self, seed: int) -> None:
        n = len(self.elements)
        T = self.table
        if n <= ASSOCIATIVITY_FULL_LIMIT:
            left = T[T, :]  # left[a, b, c] = (ab)c
            right = T[:, T]  # right[a, b, c] = a(bc)
            if not np.array_equal(left, right):
                raise GroupError("multiplication is not associative")
            return
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, 20000))
        if not np.array_equal(T[T[a, b], c], T[a, T[b, c]]):
            raise GroupError("multiplication is not associative (sampled)")

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or len(self.elements)})"

    @property
    def identity(self):
        return self.elements[self.id_index]

    def _ix(self, a) -> int:
        try:
            return self.index[a]
        except (KeyError, TypeError):
            raise GroupError(f"{a!r} is not an element of {self!r}") from None

    def mul(self, a, b):
        return self.elements[self.table[self._ix(a), self._ix(b)]]

    def inv(self, a):
        return self.elements[self.inv_table[self._ix(a)]]

    def canonical(self, a):
        self._ix(a)
        return a

    def parse(self, token: str):
        token = token.strip()
        if token in self.index:
            return token
        try:
            v = int(token)
        except ValueError:
            v = None
        if v is not None and v in self.index:
            return v
        if token in ("1", "e", "id") :
            return self.identity
        raise GroupError(f"cannot parse group element {token!r}")

    def generators(self) -> list:
        return list(self.elements)

    def to_json(self) -> dict:
        return {
            "elements": [list(e) if isinstance(e, tuple) else e for e in self.elements],
            "mul": self.table.tolist(),
            "inv": self.inv_table.tolist(),
            "id": self.id_index,
        }

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> "FiniteGroup":
        try:
            elements = [tuple(e) if isinstance(e, list) else e for e in data["elements"]]
            return cls(elements, data["mul"], data.get("inv"), data.get("id"), name=name)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GroupError):
                raise
            raise GroupError(f"malformed group JSON: {exc}") from exc

    def left_regular(self, s) -> np.ndarray:
        """λ_s ξ_t = ξ_{st} on the basis indexed by the element list."""
        n = len(self)
        i = self._ix(s)
        m = np.zeros((n, n))
        for t in range(n):
            m[self.table[i, t], t] = 1
        return m

    def right_regular(self, s) -> np.ndarray:
        """ρ_s ξ_t = ξ_{t s^{-1}}; s ↦ ρ_s is a homomorphism."""
        n = len(self)
        si = self.inv_table[self._ix(s)]
        m = np.zeros((n, n))
        for t in range(n):
            m[self.table[t, si], t] = 1
        return m

    def is_subgroup(self, elems: Iterable) -> bool:
        H = set(elems)
        if self.identity not in H:
            return False
        return all(self.mul(a, b) in H for a in H for b in H) and all(self.inv(a) in H for a in H)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(list(range(n)), table, [(-i) % n for i in range(n)], 0, name=f"Z/{n}")


def _cycle_string(perm: tuple) -> str:
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(cycles) or "e"


def symmetric(n: int) -> FiniteGroup:
    """S_n with labels in cycle notation; (στ)(x) = σ(τ(x))."""
    if n < 1:
        raise GroupError("symmetric group degree must be positive")
    perms = list(itertools.permutations(range(n)))
    perms.sort(key=lambda p: (sum(1 for i, x in enumerate(p) if x != i), p))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(n))] for b in perms] for a in perms]
    labels = [_cycle_string(p) for p in perms]
    return FiniteGroup(labels, table, None, 0, name=f"S_{n}")


class ZnGroup(Group):
    """Free abelian group of the given rank (ints for rank 1, tuples otherwise)."""

    def __init__(self, rank: int = 1):
        if rank < 1:
            raise GroupError("rank must be positive")
        self.rank = rank

    def __repr__(self) -> str:
        return f"ZnGroup({self.rank})"

    @property
    def identity(self):
        return 0 if self.rank == 1 else (0,) * self.rank

    def canonical(self, a):
        if self.rank == 1:
            if isinstance(a, bool) or not isinstance(a, (int, np.integer)):
                raise GroupError(f"{a!r} is not an element of Z")
            return int(a)
        if not isinstance(a, (tuple, list)) or len(a) != self.rank:
            raise GroupError(f"{a!r} is not an element of Z^{self.rank}")
        return tuple(int(x) for x in a)

    def mul(self, a, b):
        if self.rank == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return -a if self.rank == 1 else tuple(-x for x in a)

    def parse(self, token: str):
        token = token.strip().strip("()[]")
        parts = [p for p in token.replace(";", ",").split(",") if p.strip()]
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise GroupError(f"cannot parse Z^{self.rank} element {token!r}") from None
        if self.rank == 1 and len(vals) == 1:
            return vals[0]
        return self.canonical(tuple(vals))

    def generators(self) -> list:
        if self.rank == 1:
            return [1]
        return [tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)]


class FreeGroup(Group):
    """Free group on letters a, b, ...; upper case letters are inverses, "" is 1."""

    def __init__(self, rank: int = 2):
        if not 1 <= rank <= 26:
            raise GroupError("free group rank must be in 1..26")
        self.rank = rank
        self.letters = "abcdefghijklmnopqrstuvwxyz"[:rank]

    def __repr__(self) -> str:
        return f"FreeGroup({self.rank})"

    @property
    def identity(self):
        return ""

    @staticmethod
    def _reduce(word: str) -> str:
        out: list[str] = []
        for ch in word:
            if out and out[-1] == ch.swapcase():
                out.pop()
            else:
                out.append(ch)
        return "".join(out)

    def canonical(self, a):
        if not isinstance(a, str) or any(ch.lower() not in self.letters for ch in a):
            raise GroupError(f"{a!r} is not a word in {self.letters}")
        return self._reduce(a)

    def mul(self, a, b):
        return self._reduce(a + b)

    def inv(self, a):
        return a[::-1].swapcase()

    def parse(self, token: str):
        token = token.strip()
        if token in ("1", "e", ""):
            return ""
        return self.canonical(token)

    def generators(self) -> list:
        return list(self.letters)

    def sort_key(self, a):
        return (len(a), a)


def parse_group(spec: str) -> Group:
    """``zn:k``, ``free:k``, ``cyclic:n``, ``sym:n`` or a path to a group-table JSON file."""
    import json
    from pathlib import Path

    kind, _, arg = spec.partition(":")
    try:
        if kind == "zn":
            return ZnGroup(int(arg or 1))
        if kind == "free":
            return FreeGroup(int(arg or 2))
        if kind == "cyclic":
            return cyclic(int(arg))
        if kind == "sym":
            return symmetric(int(arg))
    except ValueError as exc:
        raise GroupError(f"bad group spec {spec!r}: {exc}") from exc
    path = Path(spec)
    if not path.exists():
        raise GroupError(f"unknown group spec {spec!r} (not a file)")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GroupError(f"{spec}: invalid JSON ({exc})") from exc
    return FiniteGroup.from_json(data, name=path.stem)


# -- subsets and windows -----------------------------------------------------


def symmetric_subset(G: Group, F: Iterable) -> frozenset:
    """F ∪ F^{-1} ∪ {1}."""
    out = {G.identity}
    for x in F:
        x = G.canonical(x)
        out.add(x)
        out.add(G.inv(x))
    return frozenset(out)


def powers(G: Group, F: Iterable, n: int) -> frozenset:
    """All products of exactly n elements of the (symmetrized) set F."""
    if n < 1:
        raise GroupError("power must be at least 1")
    Fs = symmetric_subset(G, F)
    cur = set(Fs)
    for _ in range(n - 1):
        cur = {G.mul(a, b) for a in cur for b in Fs}
    return frozenset(cur)


def ball(G: Group, radius: int, generators: Iterable | None = None) -> frozenset:
    """Word-metric ball around 1 (generators and their inverses)."""
    if radius < 0:
        raise WindowError("radius must be nonnegative")
    gens = symmetric_subset(G, G.generators() if generators is None else generators)
    seen = {G.identity}
    frontier = [G.identity]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def window_of(G: Group, elements: Iterable) -> frozenset:
    W = frozenset(G.canonical(x) for x in elements)
    if not W:
        raise WindowError("window is empty")
    return W


def interior(G: Group, F: Iterable, W: Iterable) -> frozenset:
    """Window vertices t with tF ⊆ W (all Σ_F-neighbours inside the window)."""
    Fs = symmetric_subset(G, F)
    Wset = set(W)
    return frozenset(t for t in Wset if all(G.mul(t, f) in Wset for f in Fs))


def sigma_f_graph(G: Group, F: Iterable, W: Iterable) -> nx.Graph:
    Fs = symmetric_subset(G, F)
    Wl = sorted(window_of(G, W), key=vertex_key)
    g = nx.Graph()
    g.add_nodes_from(Wl)
    Wset = set(Wl)
    if len(Fs) < len(Wl):
        for s in Wl:
            for f in Fs:
                t = G.mul(s, f)
                if t != s and t in Wset:
                    g.add_edge(s, t)
    else:
        for s, t in itertools.combinations(Wl, 2):
            if G.quotient(s, t) in Fs:
                g.add_edge(s, t)
    return g


def build_sigma_f(G: Group, F: Iterable, W: Iterable) -> SimplicialComplex:
    """Full subcomplex of Σ_F on the window W."""
    return clique_complex(sigma_f_graph(G, F, W))


def is_sigma_f_simplex(G: Group, F: Iterable, simplex: Iterable) -> bool:
    Fs = symmetric_subset(G, F)
    s = list(simplex)
    return all(G.quotient(a, b) in Fs for a in s for b in s)


def act(G: Group, s, obj, window: Iterable | None = None):
    """Left translation by s of a simplex (tuple) or a complex."""
    s = G.canonical(s)
    Wset = None if window is None else set(window)

    def move(v):
        w = G.mul(s, v)
        if Wset is not None and w not in Wset:
            raise WindowError(f"translate of {v!r} by {s!r} is {w!r}, outside the window")
        return w

    if isinstance(obj, SimplicialComplex):
        return SimplicialComplex([[move(v) for v in f] for f in obj.maximal])
    return canonical_simplex(move(v) for v in obj)


@dataclass(frozen=True)
class Orbit:
    representative: tuple
    members: tuple
    stabilizer_order: int


def orbits(G: FiniteGroup, simplexes: Iterable[Iterable]) -> list[Orbit]:
    """Orbit decomposition of a translation-invariant set of simplexes."""
    if not G.finite:
        raise GroupError("orbits need a finite group")
    pending = {canonical_simplex(s) for s in simplexes}
    out = []
    for sigma in sorted(pending, key=lambda x: (len(x), simplex_key(x))):
        if sigma not in pending:
            continue
        images = [act(G, g, sigma) for g in G.elements]
        members = sorted(set(images), key=simplex_key)
        for m in members:
            if m not in pending:
                raise GroupError(f"simplex set is not invariant: {m!r} missing")
            pending.discard(m)
        stab = sum(1 for im in images if im == sigma)
        out.append(Orbit(sigma, tuple(members), stab))
    return out


def sigma_f_presentation(
    G: Group,
    F: Iterable,
    W: Iterable | None = None,
    variant: Variant | str = Variant.FLAG,
) -> AlgebraPresentation:
    """Presentation of the window of Σ_F (Full ~ extra-relation variant, Flag, Abelian).

    Unital exactly when the window is the whole finite group; otherwise the
    relation Σ_s h_s h_t = h_t is kept only at interior vertices.
    """
    if W is None:
        if not G.finite:
            raise WindowError("infinite groups need an explicit window")
        W = G.elements
    Wf = window_of(G, W)
    sigma = build_sigma_f(G, F, Wf)
    whole = G.finite and len(Wf) == len(G.elements)
    closed = None if whole else interior(G, F, Wf)
    label = f"Sigma_F window of {len(Wf)} vertices"
    return presentation_of(sigma, variant, unital=whole, closed=closed, label=label)


@dataclass(frozen=True)
class WalkCheck:
    """Agreement of the rewriting verdict with independent walk/power oracles."""

    word: tuple
    rewriting_zero: bool
    walk_exists: bool
    quotient_in_power: bool
    free_walk_exists: bool

    @property
    def consistent(self) -> bool:
        return (
            self.rewriting_zero == (not self.walk_exists)
            and self.quotient_in_power == self.free_walk_exists
            and (not self.walk_exists or self.quotient_in_power)
        )

    def to_json(self) -> dict:
        return {
            "word": [str(x) for x in self.word],
            "rewriting": "Zero" if self.rewriting_zero else "NotForcedZero",
            "walk_exists": self.walk_exists,
            "quotient_in_power": self.quotient_in_power,
            "free_walk_exists": self.free_walk_exists,
            "consistent": self.consistent,
        }


def _bfs_reachable(G: Group, Fs: frozenset, s, t, steps: int) -> bool:
    """BFS over F-steps from s: is t reachable in at most ``steps`` moves."""
    seen = {s}
    frontier = deque([(s, 0)])
    while frontier:
        x, d = frontier.popleft()
        if x == t:
            return True
        if d == steps:
            continue
        for f in Fs:
            y = G.mul(x, f)
            if y not in seen:
                seen.add(y)
                frontier.append((y, d + 1))
    return False


def walk_vanishing_check(G: Group, F: Iterable, word: Sequence) -> WalkCheck:
    """Compare, for h_s h_{t_1} ... h_t, the Flag rewriting verdict with walk oracles.

    * walk oracle: every consecutive quotient lies in F;
    * power oracle: s^{-1} t ∈ F^n with n = number of steps;
    * free-walk oracle: BFS over F-steps from s reaches t in n moves.
    """
    w = tuple(G.canonical(x) for x in word)
    if len(w) < 2:
        raise GroupError("need at least two letters")
    Fs = symmetric_subset(G, F)
    P = presentation_of(build_sigma_f(G, Fs, set(w)), Variant.FLAG, unital=False)
    rewriting_zero = monomial_vanishes(P, w).zero
    walk = all(G.quotient(a, b) in Fs for a, b in zip(w, w[1:]))
    n = len(w) - 1
    in_power = G.quotient(w[0], w[-1]) in powers(G, Fs, n)
    free = _bfs_reachable(G, Fs, w[0], w[-1], n)
    return WalkCheck(w, rewriting_zero, walk, in_power, free)


def graded_support(family: Mapping, eps: float = EPS_SUPP) -> frozenset:
    """Indices whose component has operator norm above ``eps``."""
    return frozenset(s for s, m in family.items() if np.linalg.norm(np.atleast_2d(m), 2) > eps)


def support_is_symmetric(G: Group, supp: Iterable) -> bool:
    S = set(supp)
    return all(G.inv(s) in S for s in S)
