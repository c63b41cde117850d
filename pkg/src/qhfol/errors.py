"""Exception hierarchy.

Every domain error carries a stable ``code`` string; the CLI maps these to
exit status 1 and prints the code alongside the message.
"""


class QHFolError(Exception):
    code = "error"


class ParseError(QHFolError, ValueError):
    code = "parse_error"

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ZeroPolynomial(QHFolError):
    code = "zero_polynomial"


class NonIsolated(QHFolError):
    code = "non_isolated"


class NotQuasiHomogeneous(QHFolError):
    code = "not_quasi_homogeneous"


class NotQuasiHomogeneousType(QHFolError):
    code = "not_quasi_homogeneous_type"


class IrrationalCenter(QHFolError):
    code = "irrational_center"


class NotAPoint(QHFolError):
    code = "not_a_point"


class NonReducedCurve(QHFolError):
    code = "non_reduced_curve"


class Dicritical(QHFolError):
    code = "dicritical"


class NotSingular(QHFolError):
    code = "not_singular"


class NotUnique(QHFolError):
    code = "not_unique"


class ResolutionCapExceeded(QHFolError):
    code = "resolution_cap_exceeded"


class SingularFiberHit(QHFolError):
    code = "singular_fiber_hit"


class ToleranceNotMet(QHFolError):
    code = "tolerance_not_met"


class LeafEscaped(QHFolError):
    code = "leaf_escaped"


class IllConditionedFit(QHFolError):
    code = "ill_conditioned_fit"


class NonInvertible(QHFolError):
    code = "non_invertible"


class OrderMismatch(QHFolError):
    code = "order_mismatch"
