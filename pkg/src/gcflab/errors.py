"""Exception hierarchy shared by every gcflab module."""


class GCFError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(GCFError, ZeroDivisionError):
    pass


class InsufficientReferenceDigits(GCFError, ValueError):
    pass


class IndexOutOfRule(GCFError, IndexError):
    pass


class ZeroDenominatorConvergent(GCFError, ZeroDivisionError):
    """B_n vanished, so the n-th convergent is undefined."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"B_{n} = 0: convergent undefined at depth {n}")


class ZeroScalar(GCFError, ValueError):
    pass


class ZeroSeriesTerm(GCFError, ValueError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"series term c_{k} is zero")


class SingularStep(GCFError, ValueError):
    """A_{n-1}B_{n-2} - A_{n-2}B_{n-1} vanished at index n."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"singular step at n={n}: A_(n-1)B_(n-2) - A_(n-2)B_(n-1) = 0")


class BadInitialConditions(GCFError, ValueError):
    pass


class ZeroB(GCFError, ZeroDivisionError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"B_{k} = 0: ratio form undefined")


class UnknownEntry(GCFError, KeyError):
    def __str__(self):
        return f"unknown catalog entry: {self.args[0]!r}"


class NoOracle(GCFError, LookupError):
    pass


class SpecFormatError(GCFError, ValueError):
    """Malformed spec, series, or sequence file."""
