"""Truncated formal power series in q with exact integer coefficients.

Exponents are integers counting units of ``1/denom`` (so with the default
``denom=4`` the unit exponent 1 is ``q^(1/4)``).  A series carries the
order ``M`` through which it is trusted; asking for a coefficient beyond
``M`` raises instead of silently returning zero.

Coefficients live in a dense numpy array starting at exponent ``low``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

import numpy as np

from . import _kernels as K
from .errors import (
    BeyondTruncationError,
    DenominatorError,
    IntegralityError,
    NegativeExponentError,
    NonInvertibleError,
    SignTwistError,
)

DEFAULT_DENOM = 4
MAX_DENOM = 64


def _lcm(a: int, b: int) -> int:
    m = a * b // gcd(a, b)
    if m > MAX_DENOM:
        raise DenominatorError(f"denominator lcm({a}, {b}) = {m} exceeds {MAX_DENOM}")
    return m


def fmt_power(units: int, denom: int) -> str:
    p = Fraction(units, denom)
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def _qpow(units: int, denom: int) -> str:
    p = fmt_power(units, denom)
    if p == "1":
        return "q"
    return f"q^({p})" if "/" in p or p.startswith("-") else f"q^{p}"


@dataclass(frozen=True)
class Monomial:
    """``coeff * q^power`` with an exact rational power."""

    coeff: int = 1
    power: Fraction = Fraction(0)

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("monomial coefficient must be nonzero")
        object.__setattr__(self, "power", Fraction(self.power))

    @classmethod
    def q(cls, power=1, coeff: int = 1) -> "Monomial":
        return cls(coeff, Fraction(power))

    def units(self, denom: int) -> int:
        e = self.power * denom
        if e.denominator != 1:
            raise DenominatorError(f"q^{self.power} is not representable with denominator {denom}")
        return int(e)

    def representable(self, denom: int) -> bool:
        return (self.power * denom).denominator == 1

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial(self.coeff * other.coeff, self.power + other.power)
        if isinstance(other, int):
            return Monomial(self.coeff * other, self.power)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return Monomial(-self.coeff, self.power)

    def __pow__(self, k: int) -> "Monomial":
        if k < 0:
            if self.coeff not in (1, -1):
                raise NonInvertibleError(f"{self} is not a unit")
        return Monomial(self.coeff**k if k >= 0 else self.coeff ** (-k), self.power * k)

    def sqrt(self) -> "Monomial":
        """Principal square root; only for ``coeff = +1`` (or a perfect square)."""
        r = int(round(abs(self.coeff) ** 0.5))
        if self.coeff < 0 or r * r != self.coeff:
            raise ValueError(f"no principal square root of {self}")
        return Monomial(r, self.power / 2)

    def __str__(self):
        if self.power == 0:
            return str(self.coeff)
        p = self.power
        body = "q" if p == 1 else (f"q^{p}" if p.denominator == 1 else f"q^({p})")
        if self.coeff == 1:
            return body
        if self.coeff == -1:
            return "-" + body
        return f"{self.coeff}*{body}"


ONE = Monomial(1, Fraction(0))


class QSeries:
    """Immutable truncated series; see module docstring for conventions."""

    __slots__ = ("denom", "order", "low", "data", "allows_negative")

    def __init__(self, coeffs=None, order: int = 0, denom: int = DEFAULT_DENOM,
                 allows_negative: bool = False):
        coeffs = dict(coeffs or {})
        coeffs = {int(e): int(c) for e, c in coeffs.items() if c and e <= order}
        if coeffs:
            lo, hi = min(coeffs), max(coeffs)
            data = np.zeros(hi - lo + 1, dtype=object)
            data[:] = 0
            for e, c in coeffs.items():
                data[e - lo] = c
        else:
            lo, data = 0, np.zeros(0, dtype=np.int64)
        self._set(denom, order, lo, K.narrow(data), allows_negative)

    def _set(self, denom, order, low, data, allows_negative):
        if denom < 1:
            raise ValueError("denominator must be positive")
        # strip to the trusted range and to the nonzero span
        if data.size:
            data = data[: max(0, order - low + 1)]
        nz = np.flatnonzero(data) if data.size else ()
        if len(nz):
            data = data[nz[0] : nz[-1] + 1]
            low = low + int(nz[0])
        else:
            data = np.zeros(0, dtype=np.int64)
            low = 0
        if data.size and low < 0 and not allows_negative:
            raise NegativeExponentError(
                f"negative exponent {fmt_power(low, denom)} in an ordinary series"
            )
        data = K.narrow(data)
        data.flags.writeable = False
        object.__setattr__(self, "denom", int(denom))
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "low", int(low))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "allows_negative", bool(allows_negative))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    @classmethod
    def from_array(cls, data, low: int, order: int, denom: int = DEFAULT_DENOM,
                   allows_negative: bool = False) -> "QSeries":
        obj = cls.__new__(cls)
        if not (isinstance(data, np.ndarray) and data.dtype in (np.int64, object)):
            data = K.as_exact(data)
        obj._set(denom, order, low, data, allows_negative)
        return obj

    @classmethod
    def one(cls, order: int, denom: int = DEFAULT_DENOM) -> "QSeries":
        return cls.monomial(ONE, order, denom)

    @classmethod
    def zero(cls, order: int, denom: int = DEFAULT_DENOM) -> "QSeries":
        return cls.from_array(np.zeros(0, dtype=np.int64), 0, order, denom)

    @classmethod
    def monomial(cls, m: Monomial, order: int, denom: int = DEFAULT_DENOM,
                 allows_negative: bool = False) -> "QSeries":
        e = m.units(denom)
        return cls.from_array(K.as_exact([m.coeff]), e, order, denom,
                              allows_negative or e < 0)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.data.size == 0

    @property
    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient (``order + 1`` if none)."""
        return self.low if self.data.size else self.order + 1

    @property
    def coeffs(self) -> dict:
        return dict(self.terms())

    def terms(self) -> Iterator[tuple[int, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing exponent order."""
        for i in np.flatnonzero(self.data):
            yield self.low + int(i), int(self.data[i])

    def coeff(self, e: int) -> int:
        return qs_coeff(self, e)

    def dense(self, start: int, stop: int) -> np.ndarray:
        """Coefficients at exponents ``start..stop`` (inclusive) as an exact array."""
        n = stop - start + 1
        if n <= 0:
            return np.zeros(0, dtype=np.int64)
        out = np.zeros(n, dtype=self.data.dtype if self.data.size else np.int64)
        a = max(start, self.low)
        b = min(stop, self.low + self.data.size - 1)
        if a <= b:
            out[a - start : b - start + 1] = self.data[a - self.low : b - self.low + 1]
        return out

    def is_integral(self) -> bool:
        """True when every stored exponent is a whole power of q."""
        return all(e % self.denom == 0 for e, _ in self.terms())

    # -- derived series -----------------------------------------------------

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise BeyondTruncationError(f"cannot raise trusted order {self.order} to {order}")
        return QSeries.from_array(self.data, self.low, order, self.denom, self.allows_negative)

    def with_denom(self, denom: int) -> "QSeries":
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise DenominatorError(f"cannot rescale denominator {self.denom} to {denom}")
        f = denom // self.denom
        data = np.zeros(max(0, (self.data.size - 1) * f + 1), dtype=self.data.dtype)
        data[::f] = self.data
        return QSeries.from_array(data, self.low * f, self.order * f, denom, self.allows_negative)

    def shift(self, units: int, allows_negative: bool | None = None) -> "QSeries":
        """Multiply by the exact monomial ``q^(units/denom)``."""
        neg = self.allows_negative if allows_negative is None else allows_negative
        return QSeries.from_array(self.data, self.low + units, self.order + units, self.denom, neg)

    def ordinary(self) -> "QSeries":
        """Drop the Laurent flag; fails if a negative exponent is present."""
        if not self.allows_negative:
            return self
        return QSeries.from_array(self.data, self.low, self.order, self.denom, False)

    # -- operators ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(ONE, self.order, self.denom) * other if other else None
            return self if other is None else qs_add(self, other)
        if isinstance(other, QSeries):
            return qs_add(self, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QSeries.from_array(K.scale(self.data, -1), self.low, self.order, self.denom,
                                  self.allows_negative)

    def __sub__(self, other):
        if isinstance(other, (int, QSeries)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, Monomial):
            return qs_mul_monomial(self, other)
        if isinstance(other, int):
            return QSeries.from_array(K.scale(self.data, other), self.low, self.order,
                                      self.denom, self.allows_negative)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.order != other.order or self.denom != other.denom or self.low != other.low:
            return False
        return self.data.size == other.data.size and all(
            int(x) == int(y) for x, y in zip(self.data, other.data))

    def __hash__(self):
        return hash((self.denom, self.order, tuple(self.terms())))

    def __repr__(self):
        return f"QSeries({self}, denom={self.denom})"

    def __str__(self):
        parts = []
        for e, c in self.terms():
            mon = "" if e == 0 else _qpow(e, self.denom)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O({_qpow(self.order + 1, self.denom)})"


# ---------------------------------------------------------------------------
# the operation surface


def align(a: QSeries, b: QSeries) -> tuple[QSeries, QSeries]:
    """Bring two series to a common denominator."""
    if a.denom == b.denom:
        return a, b
    d = _lcm(a.denom, b.denom)
    return a.with_denom(d), b.with_denom(d)


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    a, b = align(a, b)
    order = min(a.order, b.order)
    neg = a.allows_negative or b.allows_negative
    if a.is_zero:
        return b.truncate(order) if b.order > order else b
    if b.is_zero:
        return a.truncate(order) if a.order > order else a
    lo = min(a.low, b.low)
    hi = min(order, max(a.low + a.data.size, b.low + b.data.size) - 1)
    if hi < lo:
        return QSeries.zero(order, a.denom)
    data = K.add(a.dense(lo, hi), b.dense(lo, hi))
    return QSeries.from_array(data, lo, order, a.denom, neg)


def qs_sub(a: QSeries, b: QSeries) -> QSeries:
    return qs_add(a, -b)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product.

    The trusted order is ``min(a.order, b.order)``, lowered when a factor
    has a negative valuation (q-Laurent intermediates).
    """
    a, b = align(a, b)
    va, vb = a.valuation, b.valuation
    order = min(a.order + min(0, vb), b.order + min(0, va))
    neg = a.allows_negative or b.allows_negative
    if a.is_zero or b.is_zero:
        return QSeries.zero(order, a.denom)
    if a.data.size == 1:
        return _mul_single(b, a.low, int(a.data[0]), order, neg)
    if b.data.size == 1:
        return _mul_single(a, b.low, int(b.data[0]), order, neg)
    low = a.low + b.low
    n = order - low + 1
    if n <= 0:
        return QSeries.zero(order, a.denom)
    return QSeries.from_array(K.convolve(a.data, b.data, n), low, order, a.denom, neg)


def _mul_single(s: QSeries, e: int, c: int, order: int, neg: bool) -> QSeries:
    return QSeries.from_array(K.scale(s.data, c), s.low + e, order, s.denom, neg or s.low + e < 0)


def qs_mul_monomial(s: QSeries, m: Monomial) -> QSeries:
    """Multiply by an exact monomial; the trusted order moves with the exponent."""
    if not m.representable(s.denom):
        s = s.with_denom(_lcm(s.denom, m.power.denominator))
    e = m.units(s.denom)
    return QSeries.from_array(K.scale(s.data, m.coeff), s.low + e, s.order + e, s.denom,
                              s.allows_negative or (s.data.size > 0 and s.low + e < 0))


def qs_invert(s: QSeries) -> QSeries:
    """Multiplicative inverse of a series with constant term +1 or -1."""
    if s.is_zero or s.low != 0 or int(s.data[0]) not in (1, -1):
        c0 = 0 if (s.is_zero or s.low > 0) else (int(s.data[0]) if s.low == 0 else None)
        raise NonInvertibleError(
            f"constant term must be +1 or -1 (got {c0 if c0 is not None else 'a negative-exponent term'})"
        )
    n = s.order + 1
    return QSeries.from_array(K.inverse(s.data, n), 0, s.order, s.denom)


def qs_mul_binomial(s: QSeries, m: Monomial) -> QSeries:
    """``s * (1 - m)`` for a monomial of positive order."""
    e = m.units(s.denom)
    if e <= 0:
        return qs_mul(s, qs_sub(QSeries.one(s.order, s.denom), QSeries.monomial(m, s.order, s.denom,
                                                                                 allows_negative=True)))
    if s.is_zero:
        return s
    data = s.dense(s.low, s.order)
    return QSeries.from_array(K.mul_binomial(data, e, m.coeff), s.low, s.order, s.denom,
                              s.allows_negative)


def qs_div_binomial(s: QSeries, m: Monomial) -> QSeries:
    """``s / (1 - m)`` for a monomial of positive order (geometric expansion)."""
    e = m.units(s.denom)
    if e <= 0:
        raise NonInvertibleError(f"1 - ({m}) is not invertible as a power series")
    if s.is_zero:
        return s
    data = s.dense(s.low, s.order)
    return QSeries.from_array(K.div_binomial(data, e, m.coeff), s.low, s.order, s.denom,
                              s.allows_negative)


def qs_scale_exponents(s: QSeries, num: int, den: int = 1) -> QSeries:
    """Substitute ``q -> q^(num/den)``."""
    if num < 1 or den < 1:
        raise ValueError("scale factors must be positive")
    g = gcd(num, den)
    num, den = num // g, den // g
    if num == den:
        return s
    terms = list(s.terms())
    for e, _ in terms:
        if (e * num) % den:
            raise DenominatorError(
                f"exponent {fmt_power(e, s.denom)} * {num}/{den} not representable "
                f"with denominator {s.denom}")
    order = (s.order * num) // den
    if not terms:
        return QSeries.zero(order, s.denom)
    if den == 1:
        data = np.zeros((s.data.size - 1) * num + 1, dtype=s.data.dtype)
        data[::num] = s.data
        return QSeries.from_array(data, s.low * num, order, s.denom, s.allows_negative)
    return QSeries({e * num // den: c for e, c in terms}, order, s.denom, s.allows_negative)


def qs_negate_q(s: QSeries) -> QSeries:
    """Substitute ``q -> -q``; only defined on integer powers of q."""
    D = s.denom
    if not s.is_integral():
        raise SignTwistError("q -> -q is undefined on fractional powers of q")
    if s.is_zero:
        return s
    e = np.arange(s.low, s.low + s.data.size)
    odd = ((e // D) % 2) == 1
    data = s.data.copy()
    data[odd] = -data[odd]
    return QSeries.from_array(data, s.low, s.order, D, s.allows_negative)


def qs_even_odd_split(s: QSeries) -> tuple[QSeries, QSeries]:
    """Parts of ``s`` with even and with odd integer exponents."""
    D = s.denom
    if not s.is_integral():
        raise SignTwistError("parity split is undefined on fractional powers of q")
    if s.is_zero:
        return s, s
    e = np.arange(s.low, s.low + s.data.size)
    odd = ((e // D) % 2) == 1
    ev, od = s.data.copy(), s.data.copy()
    ev[odd] = 0
    od[~odd] = 0
    mk = lambda d: QSeries.from_array(d, s.low, s.order, D, s.allows_negative)
    return mk(ev), mk(od)


def qs_div_exact_int(s: QSeries, k: int) -> QSeries:
    if k == 0:
        raise ZeroDivisionError("division by zero")
    if s.is_zero:
        return s
    w = K.widen(s.data)
    for i, c in enumerate(w):
        if c % k:
            raise IntegralityError(
                f"coefficient {c} at q^{fmt_power(s.low + i, s.denom)} not divisible by {k}")
    return QSeries.from_array(K.narrow(w // k), s.low, s.order, s.denom, s.allows_negative)


def qs_coeff(s: QSeries, e: int) -> int:
    if e > s.order:
        raise BeyondTruncationError(
            f"q^{fmt_power(e, s.denom)} lies beyond the trusted order q^{fmt_power(s.order, s.denom)}")
    i = e - s.low
    if 0 <= i < s.data.size:
        return int(s.data[i])
    return 0


@dataclass(frozen=True)
class EqualityReport:
    equal: bool
    order: int
    denom: int
    exponent: int | None = None
    lhs: int | None = None
    rhs: int | None = None

    def __bool__(self):
        return self.equal

    @property
    def power(self) -> str | None:
        return None if self.exponent is None else fmt_power(self.exponent, self.denom)


def qs_equal_to_order(a: QSeries, b: QSeries, M: int | None = None) -> EqualityReport:
    """Compare coefficientwise through exponent ``M`` (default: the shared order)."""
    a, b = align(a, b)
    top = min(a.order, b.order)
    if M is None:
        M = top
    if M > top:
        raise BeyondTruncationError(
            f"comparison order {M} exceeds trusted order {top}")
    lo = min(a.low if a.data.size else 0, b.low if b.data.size else 0)
    if lo > M:
        return EqualityReport(True, M, a.denom)
    da, db = a.dense(lo, M), b.dense(lo, M)
    diff = np.flatnonzero(K.widen(da) != K.widen(db)) if da.dtype == object or db.dtype == object \
        else np.flatnonzero(da != db)
    if len(diff) == 0:
        return EqualityReport(True, M, a.denom)
    i = int(diff[0])
    return EqualityReport(False, M, a.denom, lo + i, int(da[i]), int(db[i]))
