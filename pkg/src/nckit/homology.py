"""Integer simplicial homology via Smith normal form.

All arithmetic uses Python integers, so there is no overflow regardless of
the size of intermediate entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .complex import Simplex, SimplicialComplex


@dataclass(frozen=True)
class SmithResult:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithResult:
    """Nonzero diagonal entries d_1 | d_2 | ... of the Smith form of ``matrix``."""
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < m and t < n:
        pivot = _smallest_entry(a, t, m, n)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        clean = False
            if not clean:
                # a remainder smaller than the pivot is left; make it the pivot
                i, j = _smallest_in_cross(a, t, m, n)
                if i != t:
                    a[t], a[i] = a[i], a[t]
                if j != t:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = _non_divisible_row(a, t, m, n, p)
            if bad is None:
                break
            rt, rb = a[t], a[bad]
            for k in range(t, n):
                rt[k] += rb[k]
        diag.append(abs(a[t][t]))
        t += 1
    return SmithResult(tuple(diag))


def _smallest_entry(a, t, m, n):
    best = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else (best[1], best[2])


def _smallest_in_cross(a, t, m, n):
    best = (abs(a[t][t]), t, t)
    for i in range(t + 1, m):
        if a[i][t] and abs(a[i][t]) < best[0]:
            best = (abs(a[i][t]), i, t)
    for j in range(t + 1, n):
        if a[t][j] and abs(a[t][j]) < best[0]:
            best = (abs(a[t][j]), t, j)
    return best[1], best[2]


def _non_divisible_row(a, t, m, n, p):
    for i in range(t + 1, m):
        row = a[i]
        for j in range(t + 1, n):
            if row[j] % p:
                return i
    return None


def _alternating(i: int) -> int:
    return -1 if i % 2 else 1


@dataclass
class ChainComplex:
    """Simplicial chain complex with integer boundary matrices.

    ``boundaries[k]`` is ∂_k : C_k → C_{k-1} as a dense ``n_{k-1} × n_k``
    matrix; ``boundaries[0]`` is the 0 map (``1 × n_0`` augmentation when
    ``reduced``).
    """

    bases: list[list[Simplex]]
    boundaries: list[list[list[int]]]
    reduced: bool = False

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def rank(self, k: int) -> int:
        return len(self.bases[k]) if 0 <= k <= self.top else 0

    def boundary_composition_defect(self) -> int:
        """max |entry| of ∂_k ∘ ∂_{k+1} over all k (0 for a chain complex)."""
        worst = 0
        for k in range(1, self.top):
            lo, hi = self.boundaries[k], self.boundaries[k + 1]
            for i, row in enumerate(lo):
                nz = [(j, x) for j, x in enumerate(row) if x]
                for c in range(len(hi[0]) if hi else 0):
                    s = sum(x * hi[j][c] for j, x in nz)
                    worst = max(worst, abs(s))
        if self.reduced and self.top >= 1:
            aug, d1 = self.boundaries[0], self.boundaries[1]
            for c in range(len(d1[0]) if d1 else 0):
                worst = max(worst, abs(sum(aug[0][j] * d1[j][c] for j in range(len(d1)))))
        return worst


def chain_complex(
    sigma: SimplicialComplex,
    *,
    reduced: bool = False,
    face_sign: Callable[[int], int] = _alternating,
) -> ChainComplex:
    """Boundary matrices for sorted simplexes, sign ``face_sign(i)`` for dropping vertex i.

    ``face_sign`` exists so tests can inject a wrong sign convention.
    """
    bases = [sigma.simplices(k) for k in range(sigma.dimension + 1)]
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    boundaries: list[list[list[int]]] = []
    n0 = len(bases[0])
    boundaries.append([[1] * n0] if reduced else [[0] * n0])
    for k in range(1, len(bases)):
        rows = len(bases[k - 1])
        mat = [[0] * len(bases[k]) for _ in range(rows)]
        for c, s in enumerate(bases[k]):
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                mat[index[k - 1][face]][c] += face_sign(i)
        boundaries.append(mat)
    return ChainComplex(bases, boundaries, reduced)


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = [f"Z^{self.betti}"] if self.betti else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class HomologyResult:
    groups: dict[int, HomologyGroup]
    reduced: bool = False

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(self.groups[k].betti for k in sorted(self.groups))

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.groups[k].torsion if k in self.groups else ()

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * g.betti for k, g in self.groups.items())

    def to_json(self) -> dict:
        return {
            str(k): {"betti": g.betti, "torsion": list(g.torsion)}
            for k, g in sorted(self.groups.items())
        }


def homology_of_chain_complex(cc: ChainComplex) -> HomologyResult:
    snf = [smith_normal_form(b) for b in cc.boundaries]
    groups = {}
    for k in range(cc.top + 1):
        rank_out = snf[k].rank if (k > 0 or cc.reduced) else 0
        rank_in = snf[k + 1].rank if k + 1 <= cc.top else 0
        betti = cc.rank(k) - rank_out - rank_in
        tors = tuple(d for d in snf[k + 1].invariant_factors if d > 1) if k + 1 <= cc.top else ()
        groups[k] = HomologyGroup(betti, tors)
    return HomologyResult(groups, cc.reduced)


def homology(sigma: SimplicialComplex, *, reduced: bool = False) -> HomologyResult:
    """H_k(|Σ|; Z) for every k up to dim Σ."""
    return homology_of_chain_complex(chain_complex(sigma, reduced=reduced))


@dataclass(frozen=True)
class KTheoryRanks:
    rank_K0: int
    rank_K1: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.rank_K0, self.rank_K1)

    def to_json(self) -> dict:
        return {"rank_K0": self.rank_K0, "rank_K1": self.rank_K1}


def rational_k_ranks(sigma: SimplicialComplex) -> KTheoryRanks:
    """Ranks of K^0, K^1 of the (compact) realization via the Chern character.

    Only ranks are reported; integral K-groups would need extension data.
    """
    b = homology(sigma).betti
    return KTheoryRanks(sum(b[0::2]), sum(b[1::2]))
