"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An argument violates an operation's preconditions."""


class ConfigError(ValueError):
    """An experiment config file is missing, malformed, or inconsistent."""


class TreeValidationError(ValueError):
    """Base class for backhaul-tree validation failures."""


class CycleError(TreeValidationError):
    """Following parent links revisits a node."""


class UnreachableNodeError(TreeValidationError):
    """A node lies on no AP-to-root walk (or cannot reach the root)."""


class LeafChildError(TreeValidationError):
    """An AP (leaf) node appears as another node's parent."""


class RootParentError(TreeValidationError):
    """The destination (root) node has an outgoing parent link."""


class MissingCapacityError(TreeValidationError):
    """A non-root node has no outgoing-capacity entry."""


class EmptyCandidateSetError(InvalidParameterError):
    """Waterfilling was asked to allocate over zero channels."""
