"""Exception types shared across the toolkit.

Plain ``ValueError`` is used for ordinary bad arguments (negative thresholds,
mismatched lengths, out-of-bounds rectangles).  The classes below mark the
error categories the CLI maps to distinct exit codes.
"""


class WavemarkError(Exception):
    """Base class for toolkit-specific errors."""


class FormatError(WavemarkError):
    """A file (image or key) could not be parsed, or violates its format."""


class DimensionError(WavemarkError):
    """Grid dimensions do not meet a divisibility or consistency requirement."""


class CapacityError(WavemarkError):
    """The watermark does not fit into the target subband."""
