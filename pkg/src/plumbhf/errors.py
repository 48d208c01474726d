"""Exception hierarchy for the plumbhf package."""


class PlumbhfError(Exception):
    """Base class for all package errors."""


class GraphFormatError(PlumbhfError):
    """Malformed graph description: bad syntax, duplicate ids, dangling
    edge endpoints, self-loops, multi-edges, or a cycle."""


class UnknownVertexError(PlumbhfError):
    """A vertex id does not occur in the graph."""


class UnsupportedGraphError(PlumbhfError):
    """The intersection form is outside the supported class (negative
    definite, or negative semidefinite of corank one) or the graph has
    more than one bad vertex."""


class NonTorsionError(PlumbhfError):
    """A square or grading was requested for a vector outside the rational
    column span of the intersection form."""


class VisitCapExceeded(PlumbhfError):
    """A vertex walk visited more vectors than the configured cap without
    terminating or repeating."""


class StateCountExceeded(PlumbhfError):
    """A state enumeration grew past the configured cap."""


class RegionUnstable(PlumbhfError):
    """Rebuilding a class graph with a larger exploration region changed
    the answer; the caller should retry with a larger expansion."""


class UnstableInput(PlumbhfError):
    """A module decomposition was requested from a class graph that failed
    its stability or single-stem verification."""


class NotRelatedWithinDepth(PlumbhfError):
    """No relation between the two states was found within the explored
    depth."""


class AmbiguousSectorMatching(PlumbhfError):
    """The dual graph carries several torsion sectors and no explicit
    matching was supplied."""
