"""Exception hierarchy.  Each class carries a stable ``code`` and a CLI exit status."""


class CremonaError(Exception):
    code = "error"
    exit_status = 1


class InputError(CremonaError, ValueError):
    code = "input"
    exit_status = 2


class DegeneratePosition(CremonaError, ValueError):
    code = "degenerate-position"
    exit_status = 2


class IndeterminacyPoint(CremonaError, ValueError):
    code = "indeterminacy-point"
    exit_status = 4


class NotInverse(CremonaError, ValueError):
    code = "not-inverse"
    exit_status = 4


class WrongMultiplicity(CremonaError, ValueError):
    code = "wrong-multiplicity"
    exit_status = 2


class DegenerateDenominator(CremonaError, ValueError):
    code = "degenerate-denominator"
    exit_status = 2


class ZeroDeterminant(CremonaError, ValueError):
    code = "zero-determinant"
    exit_status = 2


class WrongSystemDimension(CremonaError, ValueError):
    code = "wrong-system-dimension"
    exit_status = 4


class VertexOnScheme(CremonaError, ValueError):
    code = "vertex-on-scheme"
    exit_status = 2


class SearchExhausted(CremonaError, RuntimeError):
    """Base for every bounded search that gave up; callers may escalate."""

    code = "search-exhausted"
    exit_status = 3


class RejectionExhausted(SearchExhausted):
    code = "rejection-exhausted"


class NoSolutionAtDegree(SearchExhausted):
    code = "no-solution-at-degree"


class GenericityExhausted(SearchExhausted):
    code = "genericity-exhausted"


class DegreeEscalationExhausted(SearchExhausted):
    code = "degree-escalation-exhausted"


class AvoidanceExhausted(SearchExhausted):
    code = "avoidance-exhausted"


class MonoidSearchExhausted(SearchExhausted):
    code = "monoid-search-exhausted"


class InjectivityScreenFailed(SearchExhausted):
    code = "injectivity-screen-failed"


class StepVerificationFailed(CremonaError, RuntimeError):
    code = "step-verification-failed"
    exit_status = 4


class VerificationFailed(CremonaError, RuntimeError):
    code = "verification-failed"
    exit_status = 4
