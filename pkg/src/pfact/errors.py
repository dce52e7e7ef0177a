"""Exception hierarchy shared by every module.

Three families matter to callers: mathematical negatives (the input is fine
but the answer is "no"), unsupported-field aborts (the computation would
need scalars outside the Gaussian rationals or their small radical towers),
and plain contract violations.  The CLI maps these onto exit codes.
"""


class PfactError(Exception):
    """Base class for all library errors."""


# -- contract violations ----------------------------------------------------

class VariableCountMismatch(PfactError):
    pass


class NotAUnit(PfactError):
    pass


class ConstantTermNonzero(PfactError):
    pass


class ZeroUpToCap(PfactError):
    pass


class NotRegular(PfactError):
    pass


class DenominatorMismatch(PfactError):
    pass


class NotWeightedHomogeneous(PfactError):
    def __init__(self, index, msg=""):
        self.index = index
        super().__init__(msg or f"coefficient {index} breaks weighted homogeneity")


class NotCoprime(PfactError):
    pass


class NotReduced(PfactError):
    pass


class CapTooSmall(PfactError):
    pass


class DepthExceeded(PfactError):
    pass


class NotSupported(PfactError):
    pass


class InputFormatError(PfactError):
    """Malformed JSON or schema violation; carries position info when known."""


# -- unsupported-field aborts ------------------------------------------------

class UnsupportedFieldError(PfactError):
    """The exact answer needs scalars outside the supported tower."""


class BaseFieldRootMissing(UnsupportedFieldError):
    pass


class BaseFieldFactorizationUnsupported(UnsupportedFieldError):
    pass


class CyclotomicUnsupported(UnsupportedFieldError):
    pass


class NonPureUnsupported(UnsupportedFieldError):
    pass


class FiberRootUnsupported(UnsupportedFieldError):
    pass


class PrimitiveCheckFailed(UnsupportedFieldError):
    pass


# -- mathematical negatives --------------------------------------------------

class MathematicalNegative(PfactError):
    """Well-posed question, negative answer."""


class NotQuasiOrdinary(MathematicalNegative):
    pass


class NoMatch(MathematicalNegative):
    pass


class HypothesisViolated(MathematicalNegative):
    def __init__(self, lhs, rhs, msg=""):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(msg or f"hypothesis fails: {lhs} vs {rhs}")


class PairingAmbiguous(PfactError):
    pass


class FactorCountMismatch(PfactError):
    pass


class OnStrictTransformOfH(PfactError):
    pass
