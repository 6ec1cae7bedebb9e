"""Exception types raised across the package."""


class SubordlabError(Exception):
    """Base class for all package errors."""


class NearZeroConstantTerm(SubordlabError, ZeroDivisionError):
    pass


class SingularAtOrigin(SubordlabError, ValueError):
    pass


class LogarithmicTerm(SubordlabError, ValueError):
    pass


class NoExactPredicate(SubordlabError, NotImplementedError):
    pass


class ValuationMismatch(SubordlabError, ValueError):
    pass


class PointOnCurve(SubordlabError, ValueError):
    pass


class DenominatorVanishes(SubordlabError, ZeroDivisionError):
    pass


class ResonantOrder(SubordlabError, ArithmeticError):
    pass


class DegenerateAngle(SubordlabError, ValueError):
    pass


class HypothesisFailed(SubordlabError, ValueError):
    pass


class UnknownCase(SubordlabError, KeyError):
    pass


class IoFailure(SubordlabError, OSError):
    pass


class GeneratorStarved(SubordlabError, RuntimeError):
    pass
