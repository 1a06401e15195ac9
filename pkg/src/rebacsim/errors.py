"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class RebacError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

class InvalidIdError(RebacError):
    """Identifier is empty or otherwise malformed."""


class DuplicateIdError(RebacError):
    """Identifier already present in its namespace."""


class DuplicateEdgeError(RebacError):
    """An edge with the same (source, target, relation) already exists."""


class UnknownEndpointError(RebacError):
    """Edge or query endpoint does not name a known user or app."""


class UnknownRelationError(RebacError):
    """Relation name is not in the declared vocabulary (or has the wrong kind)."""


class TrustOutOfRangeError(RebacError):
    """Trust value outside [0, 1], or nonzero trust on a user-to-app edge."""


class UnregisteredAppError(RebacError):
    """Operation requires a registered app."""


# ---------------------------------------------------------------------------
# User data
# ---------------------------------------------------------------------------

class ScoreOutOfRangeError(RebacError):
    """Sensitivity score outside [0, 1]."""


class EmptySourceSetError(RebacError):
    """Derived sensitivity requires at least one source level."""


class UnknownOwnerError(RebacError):
    """Data item owner is not a known user."""


class UnknownItemError(RebacError):
    """No data item with that name for that owner."""


# ---------------------------------------------------------------------------
# App profiles
# ---------------------------------------------------------------------------

class DuplicateAppError(RebacError):
    """App id or (title, domain) pair already registered."""


class ProfileRejectedError(RebacError):
    """Registration refused; carries the offending violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations)
        super().__init__(f"profile rejected: {summary}")


class UnknownAppError(RebacError):
    """App id not registered."""


class UnknownComponentError(RebacError):
    """Component id does not resolve within its app."""


# ---------------------------------------------------------------------------
# Policy language
# ---------------------------------------------------------------------------

class PolicySyntaxError(RebacError):
    """Input text does not match the policy grammar."""

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        detail = f", found {found!r}" if found else ""
        super().__init__(f"at offset {position}: expected {expected}{detail}")


class SortError(RebacError):
    """A variable is used in argument positions of conflicting sorts."""

    def __init__(self, variable: str, predicate: str, expected: str, actual: str):
        self.variable = variable
        self.predicate = predicate
        super().__init__(
            f"variable {variable!r} used as {actual} but {predicate!r} expects {expected}"
        )


class UnboundVariableError(RebacError):
    """A variable occurs free but is neither implicit nor quantified."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class UnknownPredicateError(RebacError):
    """Predicate does not map to a core predicate or declared relation."""


class UnknownConstantError(RebacError):
    """A constant in a condition does not resolve to a user, app, or component."""


# ---------------------------------------------------------------------------
# Generalization
# ---------------------------------------------------------------------------

class UnknownAttributeError(RebacError):
    """Attribute is not a data item (or flow payload entry) that resolves."""


class NotRequiredByAppError(RebacError):
    """Attribute is not in the app's required-data list."""


class InvariantViolationError(RebacError):
    """A declared structural invariant would be broken by the operation."""


# ---------------------------------------------------------------------------
# Authorization manager
# ---------------------------------------------------------------------------

class UnknownScopeError(RebacError):
    """Granted scope is not in the app's required-data list."""


class UnknownTokenError(RebacError):
    """Token id does not exist in the token store."""


class EmptyDecisionSetError(RebacError):
    """Conflict resolution needs at least one stakeholder decision."""


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------

class TooLargeError(RebacError):
    """Scenario exceeds the exhaustive-enumeration guard."""


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

class ParseError(RebacError):
    """Scenario file is not valid JSON or violates the schema."""

    def __init__(self, location: str, detail: str):
        self.location = location
        self.detail = detail
        super().__init__(f"{location}: {detail}")


class ScenarioReferenceError(RebacError):
    """Scenario section references an id that is not defined."""

    def __init__(self, section: str, ref: str):
        self.section = section
        self.ref = ref
        super().__init__(f"section {section!r} references unknown id {ref!r}")
