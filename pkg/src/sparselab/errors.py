"""Error taxonomy shared across the package.

The CLI maps each class to a distinct exit code, so library code should
raise the most specific class that applies.
"""


class SparselabError(Exception):
    """Base class for all package-specific errors."""


class InstanceParseError(SparselabError):
    """An instance file could not be parsed; message names the offending field."""


class ParameterError(SparselabError):
    """Exponents or arguments violate a stated precondition."""


class DegenerateInstanceError(SparselabError):
    """An instance has zero mass where positive mass is required."""


class BaselineViolationError(SparselabError):
    """A verification suite produced ratios outside the frozen baselines."""


# Exit codes used by the command line front end.
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PARAMETER = 3
EXIT_DEGENERATE = 4
EXIT_BASELINE = 5
