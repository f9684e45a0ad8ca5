"""Exception hierarchy shared by all nckit modules."""

from __future__ import annotations


class NckitError(Exception):
    """Base class for every error raised deliberately by nckit."""


class ComplexError(NckitError, ValueError):
    """Malformed complex input (empty facet, unknown vertex, ...)."""


class FacetLimitError(ComplexError):
    """A construction would exceed the configured facet cap."""

    def __init__(self, count: int, limit: int, what: str = "complex"):
        self.count = count
        self.limit = limit
        super().__init__(
            f"{what} needs at least {count} maximal simplexes, cap is {limit}; "
            "raise max_facets or shrink the input"
        )


class UndefinedVertexError(ComplexError, KeyError):
    """A vertex map is not defined on some source vertex."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class NotSimplicialError(NckitError, ValueError):
    """A vertex map does not send simplexes to simplexes."""


class NotSubcomplexError(NckitError, ValueError):
    pass


class UnknownGeneratorError(NckitError, KeyError):
    """A word or assignment mentions a symbol that is not a generator."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class GeneratorMismatchError(NckitError, ValueError):
    pass


class GroupError(NckitError, ValueError):
    """Invalid group table or group element."""


class WindowError(NckitError, ValueError):
    """A translated vertex left the declared finite window."""


class DegenerateSpectrumError(NckitError, RuntimeError):
    """Spectral cut could not be placed in a gap (after all re-draws)."""


class SampleSetError(NckitError, ValueError):
    """A sample set of realization points is not Γ-invariant or not valid."""


class DimensionMismatchError(NckitError, ValueError):
    pass
