"""Exception hierarchy.

Every domain error carries enough data to reconstruct a counterexample:
the offending axiom, the witness elements, the failing relation.  The CLI
maps any GpdError to exit code 2 and prints the witness verbatim.
"""

from __future__ import annotations


class GpdError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def report(self):
        out = {"error": type(self).__name__, "message": self.message}
        for key, value in self.details.items():
            out[key] = value
        return out


# ---------------------------------------------------------------- groupoids

class InconsistentDomain(GpdError):
    """Compose or inverse table references unknown elements."""


class AxiomViolation(GpdError):
    """A groupoid axiom fails; carries the axiom id and a witness."""

    def __init__(self, axiom, witness, message=None):
        super().__init__(
            message or f"groupoid axiom {axiom} fails at {witness!r}",
            axiom=axiom, witness=witness)
        self.axiom = axiom
        self.witness = witness


class BadSpec(GpdError):
    """A standard-construction spec is malformed."""


class NotHomomorphism(GpdError):
    def __init__(self, witness, message=None):
        super().__init__(
            message or f"product not preserved at {witness!r}", witness=witness)
        self.witness = witness


class NotAUnit(GpdError):
    pass


class NotPrincipal(GpdError):
    pass


# ------------------------------------------------------------------ algebra

class GroupoidMismatch(GpdError):
    """Two algebra elements live over different groupoids."""


class NumericalFailure(GpdError):
    """Eigenvalue iteration failed to converge."""


class InternalInconsistency(GpdError):
    """A theorem-level cross-check failed; indicates a bug, not bad input."""


# ---------------------------------------------------------------- structure

class NotInvariant(GpdError):
    pass


class NonabelianIsotropyUnsupported(GpdError):
    pass


# ------------------------------------------------------------------- graphs

class HasSource(GpdError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex!r} receives no edge", vertex=vertex)
        self.vertex = vertex


class NotRowFinite(GpdError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex!r} receives infinitely many edges",
                         vertex=vertex)
        self.vertex = vertex


class GraphMismatch(GpdError):
    pass


class LevelTooLarge(GpdError):
    pass


class NotIrreducible(GpdError):
    pass


class PermutationMatrix(GpdError):
    pass


# ------------------------------------------------------------------- twists

class NotNormalized(GpdError):
    def __init__(self, witness):
        super().__init__(f"cocycle not normalized at {witness!r}", witness=witness)
        self.witness = witness


class CocycleIdentityFails(GpdError):
    def __init__(self, witness):
        super().__init__(f"cocycle identity fails on triple {witness!r}",
                         witness=witness)
        self.witness = witness


class UnconstrainedOrder(GpdError):
    """Operation needs finite cyclic coefficients but order is 0."""


class CoverIncomplete(GpdError):
    pass


class CechIdentityFails(GpdError):
    def __init__(self, witness):
        super().__init__(f"Cech identity fails at {witness!r}", witness=witness)
        self.witness = witness


# -------------------------------------------------------------- equivalence

class BadBimodule(GpdError):
    pass


class NotFree(BadBimodule):
    def __init__(self, witness):
        super().__init__(f"action not free at {witness!r}", witness=witness)
        self.witness = witness


class ActionsDontCommute(BadBimodule):
    def __init__(self, witness):
        super().__init__(f"actions do not commute at {witness!r}", witness=witness)
        self.witness = witness


class QuotientNotBijective(BadBimodule):
    def __init__(self, side, message=None):
        super().__init__(message or f"quotient map not bijective on side {side!r}",
                         side=side)
        self.side = side


class ActionAxiomFails(BadBimodule):
    def __init__(self, witness, message=None):
        super().__init__(message or f"action axiom fails at {witness!r}",
                         witness=witness)
        self.witness = witness


class NotComposablePair(GpdError):
    pass


# ------------------------------------------------------------------- cartan

class CartanValidationError(GpdError):
    pass


class NotStarAlgebra(CartanValidationError):
    pass


class NotStarPositive(CartanValidationError):
    """The involution is not proper; the algebra has no C*-structure."""


class DiagonalNotSplit(CartanValidationError):
    """Minimal idempotents of the diagonal do not exist over the coefficient
    field (or the diagonal is not semisimple)."""


class NotMaximalAbelian(CartanValidationError):
    pass


class NotRegular(CartanValidationError):
    pass


class NotNormalizer(GpdError):
    pass


class ReconstructionMismatch(GpdError):
    pass


# ------------------------------------------------------------------ cli/io

class ParseError(GpdError):
    def __init__(self, line, reason):
        super().__init__(f"parse error at line {line}: {reason}",
                         line=line, reason=reason)
        self.line = line
        self.reason = reason


class SchemaError(GpdError):
    def __init__(self, path, reason):
        super().__init__(f"schema error at {path}: {reason}",
                         path=path, reason=reason)
        self.path = path
        self.reason = reason


class SearchCapExceeded(GpdError):
    pass
