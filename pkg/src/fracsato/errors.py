"""Exception hierarchy.

Every library error carries a stable machine-readable ``code`` which the
command line front end maps to an exit status.
"""


class FracsatoError(Exception):
    code = "error"


class NotAUnit(FracsatoError):
    code = "not-a-unit"


class PrecisionExhausted(FracsatoError):
    code = "precision-exhausted"


class NotInvertible(FracsatoError):
    code = "not-invertible"


class NotNormalized(FracsatoError):
    code = "not-normalized"


class ZeroOrder(FracsatoError):
    code = "zero-order"


class NotLaxForm(FracsatoError):
    code = "not-lax-form"


class NotDifferential(FracsatoError):
    code = "not-differential"


class DenominatorNotMonic(FracsatoError):
    code = "denominator-not-monic"


class NoSolutionAtPrecision(FracsatoError):
    code = "no-solution-at-precision"


class WindowTooSmall(FracsatoError):
    code = "window-too-small"


class UnderdeterminedAtDepth(FracsatoError):
    code = "underdetermined-at-depth"


class NotBigCell(FracsatoError):
    code = "not-big-cell"


class FNotCertified(FracsatoError):
    code = "f-not-certified"


class NotCommutingAtWindow(FracsatoError):
    code = "not-commuting-at-window"


class NoRelationWithinBudget(FracsatoError):
    code = "no-relation-within-budget"

    def __init__(self, message, growth=None):
        super().__init__(message)
        self.growth = growth or []


class PointNotOnCurve(FracsatoError):
    code = "point-not-on-curve"


class ParseError(FracsatoError):
    code = "parse-error"
