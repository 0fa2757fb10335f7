"""Exception hierarchy.

``InputError`` subclasses signal bad configuration or invalid structures
(CLI exit code 2); ``SimulationError`` subclasses signal a broken run
(CLI exit code 3).
"""


class GridFuseError(Exception):
    """Base class for every error raised by this package."""


class InputError(GridFuseError, ValueError):
    pass


class SimulationError(GridFuseError, RuntimeError):
    pass


# prf
class ArityMismatch(InputError):
    def __init__(self, where: str, expected: int, found: int):
        super().__init__(f"{where}: expected arity {expected}, found {found}")
        self.where = where
        self.expected = expected
        self.found = found


class ProjectionOutOfRange(InputError):
    pass


class UnknownName(InputError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class ParseError(InputError):
    pass


# fusion
class MissingWeights(InputError):
    pass


class EmptyInput(InputError):
    pass


class NonIntegerReading(InputError):
    pass


# topology
class NonDivisible(InputError):
    def __init__(self, n: int, d0: int):
        super().__init__(f"D0 must divide N (N={n}, D0={d0})")
        self.n = n
        self.d0 = d0


class ZeroNodes(InputError):
    pass


class ClusterCountMismatch(InputError):
    pass


# sim / detection
class MissingReading(InputError):
    pass


class NotALattice(InputError):
    pass


class NonAssociativeSpec(InputError):
    pass


class RegisterOverflow(SimulationError):
    """A node was handed a second incoming value while its register was full."""


# analysis
class TooLarge(InputError):
    pass


class ConfigError(InputError):
    pass
