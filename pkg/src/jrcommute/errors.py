"""Exception hierarchy shared by all modules."""


class CurvatureError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(CurvatureError, ValueError):
    pass


class DegenerateForm(CurvatureError, ValueError):
    pass


class FormNotPositiveDefinite(CurvatureError, ValueError):
    pass


class InvalidTensor(CurvatureError, ValueError):
    """A 4-tensor fails one of the curvature symmetries.

    ``kind`` names the failed symmetry and ``quadruple`` the offending
    0-based index quadruple.
    """

    def __init__(self, kind, quadruple, detail=""):
        self.kind = kind
        self.quadruple = tuple(int(q) for q in quadruple)
        one_based = tuple(q + 1 for q in self.quadruple)
        msg = f"{kind} fails at indices {one_based}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class PhiNotComplexStructure(CurvatureError, ValueError):
    pass


class SeedInvariantViolation(CurvatureError, ValueError):
    pass


class NotComplexStructure(CurvatureError, ValueError):
    pass


class IllConditioned(CurvatureError, ArithmeticError):
    pass


class NotSimpleComplex(CurvatureError, ValueError):
    pass


class ToleranceExceeded(CurvatureError, ArithmeticError):
    def __init__(self, invariant, residual, tol):
        self.invariant = invariant
        self.residual = residual
        self.tol = tol
        super().__init__(f"{invariant}: residual {residual:.3e} exceeds tol {tol:.1e}")


class WitnessInvalid(CurvatureError, ValueError):
    pass


class VariableCountMismatch(CurvatureError, ValueError):
    pass


class NonConstantDeterminant(CurvatureError, ValueError):
    pass


class ParseError(CurvatureError, ValueError):
    pass
