"""Exception types raised by terravis."""


class TerravisError(Exception):
    """Base class for all terravis errors."""


class TooShortError(TerravisError):
    """Terrain has fewer than two vertices."""


class NonMonotoneError(TerravisError):
    """Terrain x-coordinates are not strictly increasing.

    ``index`` is the index of the offending edge (x[index+1] <= x[index]).
    """

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"x-coordinates not strictly increasing at edge {index}")


class OutOfRangeError(TerravisError):
    """Queried x-coordinate lies outside the terrain's x-extent."""


class InvalidViewpointError(TerravisError):
    """Viewpoint set refers to invalid or duplicate vertex indices."""


class InconsistentEventListError(TerravisError):
    """A sweep event refers to a viewpoint in an impossible visibility state."""


class InvalidKError(TerravisError):
    """Order k outside 1..m for a k-th order map."""


class NoViewpointsError(TerravisError):
    """Operation requires at least one viewpoint."""


class ConstructionFailedError(TerravisError):
    """A generated instance failed its self-verification."""


class ParseError(TerravisError):
    """Instance or map file could not be parsed."""
