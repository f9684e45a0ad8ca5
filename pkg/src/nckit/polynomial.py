"""Noncommutative polynomials in self-adjoint generators.

A term is a word in generator symbols (the empty word is the formal unit)
together with a power of an optional formal parameter ``t``.  Coefficients
are exact ``Fraction`` values when built from rationals; floats and complex
numbers are accepted and propagate.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Iterable, Iterator, Mapping

import numpy as np

from .complex import simplex_key

Word = tuple
Key = tuple  # (word, t_degree)


def as_coefficient(c):
    """Normalize a scalar: ints and numeric strings become Fractions."""
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, complex) and c.imag == 0:
        return c.real
    if isinstance(c, Number):
        return c
    raise TypeError(f"not a scalar coefficient: {c!r}")


def _term_order(key: Key):
    word, k = key
    return (k, len(word), simplex_key(word))


class NCPolynomial:
    """Finite linear combination of (word, t-power) terms; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, object] | Iterable[tuple[Key, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, object] = {}
        for (word, k), c in items:
            key = (tuple(word), int(k))
            acc[key] = acc.get(key, 0) + as_coefficient(c)
        self._terms = {key: c for key, c in sorted(acc.items(), key=lambda kv: _term_order(kv[0])) if c != 0}
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "NCPolynomial":
        return cls()

    @classmethod
    def unit(cls, c=1) -> "NCPolynomial":
        return cls({((), 0): c})

    @classmethod
    def gen(cls, s, c=1) -> "NCPolynomial":
        return cls({((s,), 0): c})

    @classmethod
    def word(cls, letters: Iterable, c=1) -> "NCPolynomial":
        return cls({(tuple(letters), 0): c})

    @classmethod
    def param(cls) -> "NCPolynomial":
        """The formal parameter ``t`` (times the unit)."""
        return cls({((), 1): 1})

    @classmethod
    def sum_of(cls, gens: Iterable, c=1) -> "NCPolynomial":
        return cls([(((s,), 0), c) for s in gens])

    # -- inspection -------------------------------------------------------

    def items(self) -> Iterator[tuple[Key, object]]:
        return iter(self._terms.items())

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, word: Iterable, k: int = 0):
        return self._terms.get((tuple(word), k), 0)

    def words(self) -> list[Word]:
        seen = dict.fromkeys(w for w, _ in self._terms)
        return list(seen)

    def letters(self) -> set:
        return {x for w, _ in self._terms for x in w}

    @property
    def t_degree(self) -> int:
        return max((k for _, k in self._terms), default=0)

    def t_coefficients(self) -> dict[Word, list]:
        """word -> coefficient list in increasing powers of t."""
        out: dict[Word, list] = {}
        for (w, k), c in self._terms.items():
            coeffs = out.setdefault(w, [])
            coeffs.extend([0] * (k + 1 - len(coeffs)))
            coeffs[k] += c
        return out

    # -- algebra ----------------------------------------------------------

    def _coerce(self, other) -> "NCPolynomial":
        if isinstance(other, NCPolynomial):
            return other
        return NCPolynomial.unit(as_coefficient(other))

    def __add__(self, other) -> "NCPolynomial":
        other = self._coerce(other)
        return NCPolynomial(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "NCPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NCPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "NCPolynomial":
        if not isinstance(other, NCPolynomial):
            c = as_coefficient(other)
            return NCPolynomial({k: v * c for k, v in self._terms.items()})
        out = []
        for (w1, k1), c1 in self._terms.items():
            for (w2, k2), c2 in other._terms.items():
                out.append(((w1 + w2, k1 + k2), c1 * c2))
        return NCPolynomial(out)

    def __rmul__(self, other) -> "NCPolynomial":
        # scalars commute with everything
        return self * other

    def __pow__(self, n: int) -> "NCPolynomial":
        out = NCPolynomial.unit()
        for _ in range(n):
            out = out * self
        return out

    def adjoint(self) -> "NCPolynomial":
        """Involution: generators and t are self-adjoint."""
        return NCPolynomial(
            {(w[::-1], k): (c.conjugate() if hasattr(c, "conjugate") else c) for (w, k), c in self._terms.items()}
        )

    def substitute(self, images: Mapping) -> "NCPolynomial":
        """Replace every generator by its image polynomial."""
        out = NCPolynomial()
        for (w, k), c in self._terms.items():
            term = NCPolynomial({((), k): c})
            for x in w:
                term = term * images[x]
            out = out + term
        return out

    def specialize(self, t) -> "NCPolynomial":
        """Evaluate the formal parameter at ``t``."""
        out = []
        for (w, k), c in self._terms.items():
            out.append(((w, 0), c * (t**k if k else 1)))
        return NCPolynomial(out)

    def map_words(self, fn) -> "NCPolynomial":
        return NCPolynomial([((fn(w), k), c) for (w, k), c in self._terms.items()])

    def evaluate(self, images: Mapping, dim: int, t=None) -> np.ndarray:
        """Value in a matrix representation (``images`` maps generators to arrays)."""
        out = np.zeros((dim, dim), dtype=complex)
        cache: dict = {}
        for (w, k), c in self._terms.items():
            if k:
                if t is None:
                    raise ValueError("polynomial depends on t; pass a value")
                c = c * t**k
            m = cache.get(w)
            if m is None:
                m = np.eye(dim, dtype=complex)
                for x in w:
                    m = m @ images[x]
                cache[w] = m
            out = out + complex(c) * m
        return out

    def evaluate_scalar(self, weights: Mapping, t=None):
        """Value at a character: generators act by the scalars ``weights``."""
        total = 0
        for (w, k), c in self._terms.items():
            v = c * (t**k if k else 1)
            for x in w:
                v = v * weights.get(x, 0)
            total = total + v
        return total

    # -- comparison / io --------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, NCPolynomial):
            return self._terms == other._terms
        if isinstance(other, Number):
            return self == NCPolynomial.unit(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"NCPolynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (w, k), c in self._terms.items():
            mono = "*".join(f"h[{x}]" for x in w)
            tpart = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            factors = [f for f in (tpart, mono) if f]
            parts.append(f"({c})" + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(parts)

    def to_json(self) -> list:
        """List of ``[coefficient, word]`` pairs; t-dependent coefficients as {"t": [...]}."""
        out = []
        for w, coeffs in self.t_coefficients().items():
            jc = [_scalar_to_json(c) for c in coeffs]
            out.append([jc[0] if len(jc) == 1 else {"t": jc}, [_label_json(x) for x in w]])
        return out

    @classmethod
    def from_json(cls, data, label_of=lambda x: x) -> "NCPolynomial":
        terms = []
        for entry in data:
            coeff, word = entry
            word = tuple(label_of(x) for x in word)
            if isinstance(coeff, dict):
                for k, c in enumerate(coeff["t"]):
                    terms.append(((word, k), _scalar_from_json(c)))
            else:
                terms.append(((word, 0), _scalar_from_json(coeff)))
        return cls(terms)


def _label_json(x):
    return [_label_json(y) for y in x] if isinstance(x, tuple) else x


def _scalar_to_json(c):
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, complex):
        return {"re": c.real, "im": c.imag}
    return c


def _scalar_from_json(c):
    if isinstance(c, dict):
        return complex(c.get("re", 0), c.get("im", 0))
    if isinstance(c, float):
        return c
    return as_coefficient(c)


def bernstein_nonnegative(coeffs: list) -> bool:
    """Sufficient test that a real polynomial is >= 0 on [0, 1].

    ``coeffs`` are power-basis coefficients; the test is exact for degree <= 1.
    """
    if any(isinstance(c, complex) and c.imag != 0 for c in coeffs):
        return False
    coeffs = [c.real if isinstance(c, complex) else c for c in coeffs]
    d = len(coeffs) - 1
    if d <= 0:
        return (coeffs[0] if coeffs else 0) >= 0
    from math import comb

    for j in range(d + 1):
        b = sum(Fraction(comb(j, k), comb(d, k)) * coeffs[k] for k in range(j + 1))
        if b < 0:
            return False
    return True
