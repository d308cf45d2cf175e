"""Exception hierarchy.

Everything raised by the engine derives from :class:`QRRError`.  The
:class:`ArithmeticFault` branch marks internal arithmetic failures (the CLI
maps those to exit code 3); the rest are contract violations by the caller.
"""


class QRRError(Exception):
    pass


class ArithmeticFault(QRRError):
    """An exact-arithmetic invariant was violated."""


class IntegralityError(ArithmeticFault):
    """Exact integer division was not exact."""


class DenominatorError(ArithmeticFault):
    """Exponent not representable at the working denominator, or LCM too large."""


class EngineInconsistencyError(ArithmeticFault):
    """Two internal routes that must agree did not."""


class NonInvertibleError(QRRError):
    pass


class BeyondTruncationError(QRRError):
    """A coefficient beyond the trusted order was requested."""


class BeyondGuaranteeError(QRRError):
    """A coefficient outside the certified window of an incomplete series was requested."""


class SignTwistError(QRRError):
    """q -> -q (or a parity split) applied to a series with fractional exponents."""


class NegativeExponentError(QRRError):
    pass


class OrderExhaustedError(QRRError):
    """No trusted order is left after an operation."""


class WindowOverflowError(QRRError):
    pass


class UnsupportedCompositionError(QRRError):
    pass


class DivergentProductError(QRRError):
    pass


class NormalizationRequiredError(QRRError):
    pass


class InadmissibleInstantiation(QRRError):
    pass


class EnumerationLimitError(QRRError):
    pass


class UnknownIdentityError(QRRError):
    pass
