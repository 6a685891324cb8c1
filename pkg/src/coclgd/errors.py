"""Exception and warning types.

Data problems derive from :class:`DataError` (a ``ValueError``); numerical
failures derive from :class:`NumericalError` (an ``ArithmeticError``). The CLI
maps the two families to exit codes 3 and 4.
"""


class CocLgdError(Exception):
    pass


class DataError(CocLgdError, ValueError):
    pass


class NumericalError(CocLgdError, ArithmeticError):
    pass


# -- data ---------------------------------------------------------------------

class SchemaError(DataError):
    pass


class IntegrityError(DataError):
    pass


class BalanceNotPositive(DataError):
    pass


class EvaluationTimeOutOfRange(DataError):
    pass


class NoCurveData(DataError):
    pass


class UnknownGrade(DataError, KeyError):
    pass


class EmptySample(DataError):
    pass


class SpecInfeasible(DataError):
    pass


# -- numerical ----------------------------------------------------------------

class DegenerateSeries(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class InfeasibleMoments(NumericalError):
    pass


class DegenerateMean(NumericalError):
    pass


class NumericalDomain(NumericalError):
    pass


class EmptyRecoveries(NumericalError):
    pass


class McpNonPositive(NumericalError):
    pass


class NoRootInBracket(NumericalError):
    pass


class NotConverged(NumericalError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


# -- warnings -----------------------------------------------------------------

class DegenerateSeriesWarning(UserWarning):
    pass


class NegativeRateWarning(UserWarning):
    pass


class FlooredLossWarning(UserWarning):
    pass
