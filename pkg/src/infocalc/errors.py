"""Exception types shared across the engine.

Every error raised on a documented contract boundary derives from
:class:`InfoCalcError`, so callers (and the CLI) can distinguish engine
errors from programming mistakes.
"""

DEFAULT_TOL = 1e-9
ZERO_EVIDENCE_TOL = 1e-12


class InfoCalcError(Exception):
    """Base class for all engine errors."""


class CycleError(InfoCalcError):
    """A directed cycle was found where a DAG is required."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("directed cycle: " + " -> ".join(self.cycle))


class UnknownNode(InfoCalcError):
    """A node identifier is not declared in the graph."""


class DuplicateNode(InfoCalcError):
    """The same node identifier was declared twice."""


class UnknownEdge(InfoCalcError):
    """An edge is not present in the graph."""


class OverlappingSets(InfoCalcError):
    """Node sets that must be disjoint overlap."""


class OverlappingInfoNodes(InfoCalcError):
    """Two information-function sets touch the same edge."""


class NameCollision(InfoCalcError):
    """A generated node identifier collides with an existing one."""


class DomainError(InfoCalcError):
    """A value lies outside a node's declared domain, or a table is malformed."""


class CptError(InfoCalcError):
    """A conditional probability table violates its invariants."""


class PartialAssignment(InfoCalcError):
    """An assignment is missing required nodes."""


class ZeroProbabilityEvidence(InfoCalcError):
    """Conditioning event has probability 0 (within 1e-12)."""


class LatentQueried(InfoCalcError):
    """A query or intervention mentions a latent node."""


class DuplicateEdgeFunction(InfoCalcError):
    """More than one information function was supplied for one edge."""


class NonMarkovian(InfoCalcError):
    """An exogenous node feeds two endogenous nodes; no CPT factorization."""


class SizeError(InfoCalcError):
    """The exogenous space is too large for exact enumeration."""


class ConfigError(InfoCalcError):
    """An instance-generator configuration violates its bounds."""


class UnknownTheorem(InfoCalcError):
    """The requested verification suite is not registered."""


class CriterionFails(InfoCalcError):
    """A graphical identification criterion does not hold; message names why."""


class QueryParseError(InfoCalcError):
    """The query string does not match the grammar."""


class ModelFormatError(InfoCalcError):
    """The model file does not match the schema."""
