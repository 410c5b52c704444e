"""Exception hierarchy.

Hard errors are reserved for malformed input.  Mathematically meaningful
failures (a non-closed form, non-Hamiltonian data) are returned as certificate
data instead.
"""


class DerivedMWError(Exception):
    """Base class for all package errors."""


class RingMismatchError(DerivedMWError, ValueError):
    """Operands live in different polynomial rings."""


class ShapeError(DerivedMWError, ValueError):
    """Matrix or vector shapes are incompatible."""


class ComplexError(DerivedMWError):
    """Consecutive differentials do not compose to zero."""

    def __init__(self, message, degree=None, entry=None, value=None):
        super().__init__(message)
        self.degree = degree
        self.entry = entry
        self.value = value


class ChainMapError(DerivedMWError):
    """A square of a proposed chain morphism fails to commute."""

    def __init__(self, message, degree=None, entry=None, value=None):
        super().__init__(message)
        self.degree = degree
        self.entry = entry
        self.value = value


class ThetaSquareError(ChainMapError):
    """The map built from the symplectic form is not a chain map."""

    def __init__(self, message, square, generator, entry, value):
        super().__init__(message, entry=(generator, entry), value=value)
        self.square = square
        self.generator = generator
        self.entry_index = entry


class ContainmentError(DerivedMWError):
    """The denominator submodule is not contained in the numerator."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotGradedError(DerivedMWError):
    """Graded dimensions were requested for inhomogeneous data."""


class TruncationError(DerivedMWError):
    """An operation would raise form weight past the truncation bound."""


class PreconditionError(DerivedMWError):
    """An operation was called outside its domain (e.g. a non-fixed level)."""


class CompositeError(DerivedMWError):
    """The reduced tangent complex fails d^2 = 0 modulo the level-set ideal."""

    def __init__(self, message, entry=None, value=None):
        super().__init__(message)
        self.entry = entry
        self.value = value


class DegenerateInputError(DerivedMWError, ValueError):
    """Input is well-formed but describes a degenerate configuration."""


class ParseError(DerivedMWError, ValueError):
    """Syntax error in a polynomial expression."""

    def __init__(self, message, offset=None, text=None):
        loc = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{loc}")
        self.offset = offset
        self.text = text


class UndeclaredIdentifierError(ParseError):
    def __init__(self, name, offset=None, text=None):
        super().__init__(f"undeclared identifier {name!r}", offset, text)
        self.name = name


class ScenarioError(DerivedMWError, ValueError):
    """A scenario file is missing keys or has inconsistent shapes."""
