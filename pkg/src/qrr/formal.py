"""Laurent series in one auxiliary variable with :class:`QSeries` coefficients.

A :class:`FormalSeries` stores the coefficients of ``var^k`` for ``k`` in a
window ``[lo, hi]``, all trusted through q-order ``order``.  Alongside it
carries a :class:`~qrr.bounds.Bound` on the q-valuation of *every* true
coefficient, in or out of the window.

``complete=True`` means every coefficient outside the window vanishes modulo
``q^(order+1)``, so the series equals the intended infinite object to that
order.  An incomplete series (for instance one truncated at an x-degree) is
only known inside its window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .bounds import INF, Bound, Quadratic
from .errors import (
    BeyondGuaranteeError,
    OrderExhaustedError,
    UnsupportedCompositionError,
    WindowOverflowError,
)
from .qseries import (
    DEFAULT_DENOM,
    EqualityReport,
    Monomial,
    QSeries,
    _lcm,
    fmt_power,
    qs_add,
    qs_div_binomial,
    qs_div_exact_int,
    qs_equal_to_order,
    qs_mul,
    qs_mul_binomial,
    qs_mul_monomial,
)

MAX_WINDOW = 20000


def _below(e) -> int | float:
    """Largest integer strictly below a bound value (``inf`` stays ``inf``)."""
    if e == INF:
        return INF
    if e == -INF:
        return -INF
    return math.ceil(e) - 1


class FormalSeries:
    __slots__ = ("var", "denom", "order", "coeffs", "lo", "hi", "complete", "bound")

    def __init__(self, coeffs, order: int, denom: int = DEFAULT_DENOM, var: str = "z",
                 lo: int | None = None, hi: int | None = None, complete: bool = True,
                 bound: Bound | None = None):
        clean = {}
        for k, c in dict(coeffs).items():
            if c.denom != denom:
                c = c.with_denom(_lcm(c.denom, denom)) if denom % c.denom == 0 else c
                if c.denom != denom:
                    raise ValueError(f"coefficient denominator {c.denom} != {denom}")
            if c.order < order:
                raise OrderExhaustedError(
                    f"coefficient of {var}^{k} trusted only to {c.order} < {order}")
            c = c.truncate(order) if c.order > order else c
            if not c.is_zero:
                clean[int(k)] = c
        if lo is None:
            lo = min(clean, default=0)
        if hi is None:
            hi = max(clean, default=lo - 1 if clean else -1)
            if not clean:
                lo, hi = 0, -1
        if clean and (min(clean) < lo or max(clean) > hi):
            raise ValueError("coefficients outside the declared window")
        if hi - lo + 1 > MAX_WINDOW:
            raise WindowOverflowError(f"window [{lo}, {hi}] exceeds {MAX_WINDOW} terms")
        if bound is None and complete:
            floor = min((c.valuation for c in clean.values()), default=order + 1)
            bound = Bound.constant(floor, lo, hi)
        s = object.__setattr__
        s(self, "var", var)
        s(self, "denom", int(denom))
        s(self, "order", int(order))
        s(self, "coeffs", MappingProxyType(clean))
        s(self, "lo", int(lo))
        s(self, "hi", int(hi))
        s(self, "complete", bool(complete))
        s(self, "bound", bound)

    def __setattr__(self, name, value):
        raise AttributeError("FormalSeries is immutable")

    @classmethod
    def monomial(cls, k: int, order: int, denom: int = DEFAULT_DENOM, var: str = "z",
                 coeff: QSeries | None = None) -> "FormalSeries":
        c = coeff if coeff is not None else QSeries.one(order, denom)
        return cls({k: c}, order, denom, var, k, k)

    @classmethod
    def constant(cls, c: QSeries, var: str = "z") -> "FormalSeries":
        return cls({0: c}, c.order, c.denom, var, 0, 0)

    @property
    def floor(self):
        return self.bound.floor if self.bound is not None else -INF

    def __getitem__(self, k: int) -> QSeries:
        return fs_coeff_var(self, k)

    def __add__(self, other):
        return fs_add(self, other)

    def __sub__(self, other):
        return fs_add(self, fs_neg(other))

    def __neg__(self):
        return fs_neg(self)

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            return fs_mul(self, other)
        if isinstance(other, (QSeries, Monomial, int)):
            return fs_scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        flag = "complete" if self.complete else "window-only"
        body = ", ".join(f"{self.var}^{k}: {c}" for k, c in sorted(self.coeffs.items()))
        return f"FormalSeries[{self.lo}..{self.hi}, {flag}]({body})"


def _check_same(a: FormalSeries, b: FormalSeries):
    if a.var != b.var:
        raise ValueError(f"variables differ: {a.var} vs {b.var}")


def _rebase(s: FormalSeries, denom: int) -> FormalSeries:
    if s.denom == denom:
        return s
    f = denom // s.denom
    bound = s.bound.tilt(0) if s.bound is not None else None
    if bound is not None:
        bound = Bound(_scale_piece(p, f) for p in bound.pieces)
    return FormalSeries({k: c.with_denom(denom) for k, c in s.coeffs.items()}, s.order * f,
                        denom, s.var, s.lo, s.hi, s.complete, bound)


def _scale_piece(p, f):
    if isinstance(p, Quadratic):
        return Quadratic(p.a2 * f, p.a1 * f, p.a0 * f, p.lo, p.hi)
    return Quadratic(0, 0, p.minimize() * f, p.lo, p.hi)


def _align(a: FormalSeries, b: FormalSeries):
    if a.denom == b.denom:
        return a, b
    d = _lcm(a.denom, b.denom)
    return _rebase(a, d), _rebase(b, d)


def _known_window(a: FormalSeries, b: FormalSeries) -> tuple[int, int, bool]:
    if a.complete and b.complete:
        return min(a.lo, b.lo), max(a.hi, b.hi), True
    if a.complete:
        return b.lo, b.hi, False
    if b.complete:
        return a.lo, a.hi, False
    return max(a.lo, b.lo), min(a.hi, b.hi), False


def fs_coeff_var(s: FormalSeries, k: int) -> QSeries:
    if s.lo <= k <= s.hi:
        return s.coeffs.get(k) or QSeries.zero(s.order, s.denom)
    if s.complete:
        return QSeries.zero(s.order, s.denom)
    raise BeyondGuaranteeError(
        f"{s.var}^{k} lies outside the certified window [{s.lo}, {s.hi}] of an incomplete series")


def fs_constant_term(s: FormalSeries) -> QSeries:
    """Coefficient of ``var^0``.

    Allowed on complete series, and on incomplete ones whose certified
    window contains 0.
    """
    return fs_coeff_var(s, 0)


def fs_add(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    _check_same(a, b)
    a, b = _align(a, b)
    order = min(a.order, b.order)
    lo, hi, complete = _known_window(a, b)
    coeffs = {}
    for k in set(a.coeffs) | set(b.coeffs):
        if lo <= k <= hi:
            ca, cb = a.coeffs.get(k), b.coeffs.get(k)
            coeffs[k] = ca if cb is None else cb if ca is None else qs_add(ca, cb)
    coeffs = {k: c.truncate(order) if c.order > order else c for k, c in coeffs.items()}
    bound = a.bound.union(b.bound) if a.bound is not None and b.bound is not None else None
    out = FormalSeries(coeffs, order, a.denom, a.var, lo, hi, complete, bound)
    return _trim(out) if complete else out


def fs_neg(s: FormalSeries) -> FormalSeries:
    return FormalSeries({k: -c for k, c in s.coeffs.items()}, s.order, s.denom, s.var,
                        s.lo, s.hi, s.complete, s.bound)


def fs_scale(s: FormalSeries, c) -> FormalSeries:
    """Multiply every coefficient by a q-series, monomial or integer."""
    if isinstance(c, int):
        if c == 0:
            return FormalSeries({}, s.order, s.denom, s.var, s.lo, s.hi, s.complete,
                                Bound() if s.complete else s.bound)
        return FormalSeries({k: v * c for k, v in s.coeffs.items()}, s.order, s.denom, s.var,
                            s.lo, s.hi, s.complete, s.bound)
    if isinstance(c, Monomial):
        e = Fraction(c.power) * s.denom
        if e.denominator != 1:
            s = _rebase(s, _lcm(s.denom, c.power.denominator))
        e = c.units(s.denom)
        coeffs = {k: qs_mul_monomial(v, c).truncate(s.order + min(e, 0))
                  for k, v in s.coeffs.items()}
        bound = s.bound.tilt(0, e) if s.bound is not None else None
        return FormalSeries(coeffs, s.order + min(e, 0), s.denom, s.var, s.lo, s.hi,
                            s.complete, bound)
    return fs_mul(s, FormalSeries.constant(c, s.var))


def fs_truncate_var(s: FormalSeries, lo: int, hi: int) -> FormalSeries:
    """Restrict to the window ``[lo, hi]``; the result is window-only."""
    if not s.complete:
        lo, hi = max(lo, s.lo), min(hi, s.hi)
    coeffs = {k: c for k, c in s.coeffs.items() if lo <= k <= hi}
    return FormalSeries(coeffs, s.order, s.denom, s.var, lo, hi, False, s.bound)


def fs_truncate_order(s: FormalSeries, order: int) -> FormalSeries:
    if order > s.order:
        raise OrderExhaustedError(f"cannot raise trusted order {s.order} to {order}")
    out = FormalSeries(s.coeffs, order, s.denom, s.var, s.lo, s.hi, s.complete, s.bound)
    return _trim(out) if s.complete else out


def _trim(s: FormalSeries) -> FormalSeries:
    """Shrink the window of a complete series to its nonzero span."""
    if not s.complete:
        return s
    if not s.coeffs:
        return FormalSeries({}, s.order, s.denom, s.var, 0, -1, True, s.bound)
    lo, hi = min(s.coeffs), max(s.coeffs)
    if (lo, hi) == (s.lo, s.hi):
        return s
    return FormalSeries(s.coeffs, s.order, s.denom, s.var, lo, hi, True, s.bound)


def _omitted_min(x: FormalSeries, y: FormalSeries, k: int):
    """Lower bound on the q-order of the part of ``(x y)_k`` involving ``x_j``
    with ``j`` outside the window of ``x``."""
    e = min(x.bound.pair_min(y.bound, k, -INF, x.lo - 1),
            x.bound.pair_min(y.bound, k, x.hi + 1, INF))
    if x.complete:
        # omitted x_j vanish modulo q^(order+1)
        rest = min(y.bound.minimize(k - x.lo + 1, INF), y.bound.minimize(-INF, k - x.hi - 1))
        e = max(e, x.order + 1 + rest)
    return e


def fs_mul(a: FormalSeries, b: FormalSeries, keep: tuple[int, int] | None = None) -> FormalSeries:
    """Cauchy product in the auxiliary variable.

    ``keep=(lo, hi)`` computes only those coefficients (the result is then
    window-only), and certifies each of them separately, so factors whose
    order bounds are unbounded below are fine as long as the kept
    coefficients only see finitely many low-order terms.  Incomplete
    inputs need order bounds covering every missing contribution.
    """
    _check_same(a, b)
    a, b = _align(a, b)
    lo, hi = a.lo + b.lo, a.hi + b.hi
    if keep is not None:
        lo, hi = keep
    if hi - lo + 1 > MAX_WINDOW:
        raise WindowOverflowError(f"product window [{lo}, {hi}] exceeds {MAX_WINDOW} terms")
    order = min(a.order, b.order)
    if keep is None and a.complete and b.complete:
        fa = _below(a.floor) + 1 if a.bound is not None else 0
        fb = _below(b.floor) + 1 if b.bound is not None else 0
        order = min(order, a.order + min(0, fb), b.order + min(0, fa))
    else:
        if a.bound is None or b.bound is None:
            raise BeyondGuaranteeError("product of an incomplete series needs order bounds")
        for k in range(lo, hi + 1):
            e = min(_omitted_min(a, b, k), _omitted_min(b, a, k))
            order = min(order, _below(e))
    if order < 0 and min(a.order, b.order) >= 0:
        raise OrderExhaustedError("no trusted q-order left in the product")
    coeffs = {}
    bk = b.coeffs
    for k in range(lo, hi + 1):
        acc = None
        for j, ca in a.coeffs.items():
            cb = bk.get(k - j)
            if cb is None:
                continue
            term = qs_mul(ca, cb)
            acc = term if acc is None else qs_add(acc, term)
        if acc is not None:
            if acc.order < order:
                order = acc.order
            coeffs[k] = acc
    if order < 0 and min(a.order, b.order) >= 0:
        raise OrderExhaustedError("no trusted q-order left in the product")
    coeffs = {k: c.truncate(order) if c.order > order else c for k, c in coeffs.items()}
    complete = a.complete and b.complete and keep is None
    bound = a.bound.convolve(b.bound) if a.bound is not None and b.bound is not None else None
    out = FormalSeries(coeffs, order, a.denom, a.var, lo, hi, complete, bound)
    return _trim(out)


def fs_shift_var(s: FormalSeries, m: Monomial) -> FormalSeries:
    """Substitute ``var -> m * var`` for a monomial ``m = +-q^e``, ``e >= 0``."""
    if m.coeff not in (1, -1):
        raise ValueError("shift monomial must have coefficient +1 or -1")
    if m.power < 0:
        raise ValueError("shift monomial must have nonnegative exponent")
    if not m.representable(s.denom):
        s = _rebase(s, _lcm(s.denom, m.power.denominator))
    e = m.units(s.denom)
    order = s.order + min(0, s.lo * e)
    if s.complete:
        if s.bound is None:
            raise BeyondGuaranteeError("shift of a complete series needs an order bound")
        tail = s.bound.tilt(e).min_outside(s.lo, s.hi)
        order = min(order, _below(tail))
    if order < 0:
        raise OrderExhaustedError(f"shift by {m} leaves no trusted q-order")
    coeffs = {}
    for k, c in s.coeffs.items():
        mono = Monomial(m.coeff ** (k % 2), m.power * k)
        coeffs[k] = qs_mul_monomial(c, mono).truncate(order)
    bound = s.bound.tilt(e) if s.bound is not None else None
    return FormalSeries(coeffs, order, s.denom, s.var, s.lo, s.hi, s.complete, bound)


def fs_compose_power(s: FormalSeries, x: Monomial, N: int) -> FormalSeries:
    """Build ``f(x * var^N)`` from ``f(var)``; needs a window inside ``[0, oo)``."""
    if N < 1:
        raise UnsupportedCompositionError("power must be a positive integer")
    if s.lo < 0 or (s.bound is not None and s.bound.minimize(-INF, -1) != INF):
        raise UnsupportedCompositionError("composition needs nonnegative variable exponents")
    if not x.representable(s.denom):
        s = _rebase(s, _lcm(s.denom, x.power.denominator))
    e = x.units(s.denom)
    order = s.order + min(0, e * s.hi)
    if s.complete and e < 0:
        tail = s.bound.tilt(e).min_outside(s.lo, s.hi)
        order = min(order, _below(tail))
    if order < 0:
        raise OrderExhaustedError("composition leaves no trusted q-order")
    coeffs = {N * k: qs_mul_monomial(c, x ** k).truncate(order) for k, c in s.coeffs.items()}
    bound = s.bound.tilt(e).stretch(N) if s.bound is not None else None
    return FormalSeries(coeffs, order, s.denom, s.var, N * s.lo, N * s.hi, s.complete, bound)


def fs_q_derivative(s: FormalSeries) -> FormalSeries:
    """``(f(x) - f(qx)) / x`` via ``x^k -> (1 - q^k) x^(k-1)``."""
    if s.lo < 0:
        raise UnsupportedCompositionError("q-derivative needs nonnegative variable exponents")
    D = s.denom
    coeffs = {}
    for k, c in s.coeffs.items():
        if k:
            coeffs[k - 1] = qs_mul_binomial(c, Monomial(1, Fraction(k)))
    lo = max(s.lo - 1, 0)
    hi = s.hi - 1
    if hi < lo:
        lo, hi = 0, -1
    bound = s.bound.reindex(1) if s.bound is not None else None
    return FormalSeries(coeffs, s.order, D, s.var, lo, hi, s.complete, bound)


def fs_apply_eq_operator(y: Monomial, s: FormalSeries, degree: int | None = None) -> FormalSeries:
    """Apply ``e_q(y * delta_x) = sum_j y^j delta_x^j / (q;q)_j`` to a series in x.

    ``degree`` caps the x-degree of the result.  A window-only input yields
    only the coefficients its order bound certifies.
    """
    if s.lo < 0:
        raise UnsupportedCompositionError("operator needs nonnegative x-exponents")
    if not y.representable(s.denom):
        s = _rebase(s, _lcm(s.denom, y.power.denominator))
    D = s.denom
    ey = y.units(D)
    if s.hi < 0:
        return s
    jmax = s.hi
    order = s.order + min(0, ey * jmax)
    if order < 0:
        raise OrderExhaustedError(f"y = {y} exhausts the q-order")
    top = s.hi if degree is None else min(s.hi, degree)
    if not s.complete:
        if s.bound is None:
            raise BeyondGuaranteeError("window-only input needs an order bound")
        # x^m picks up the unknown c_n (n > hi) with weight y^(n - m)
        certified = -1
        for m in range(0, top + 1):
            e = s.bound.tilt(ey, -ey * m).minimize(s.hi + 1, INF)
            if e > order:
                certified = m
            else:
                break
        top = certified
        if top < 0:
            raise OrderExhaustedError("no x-coefficient of the result is certified")
    inv = [QSeries.one(order, D)]
    coeffs = {}
    current = s
    for j in range(0, jmax + 1):
        if j:
            current = fs_q_derivative(current)
            inv.append(_poch_q_inverse_step(inv[-1], j))
        if not current.coeffs:
            break
        w = qs_mul_monomial(inv[j], y ** j).truncate(order)
        for m, c in current.coeffs.items():
            if m > top:
                continue
            term = qs_mul(c, w)
            coeffs[m] = term if m not in coeffs else qs_add(coeffs[m], term)
    coeffs = {m: c.truncate(order) for m, c in coeffs.items()}
    complete = s.complete and degree is None
    lo, hi = (0, top)
    bound = None
    if s.bound is not None and ey >= 0:
        bound = Bound.constant(min(s.bound.floor, order + 1), 0, s.hi if s.complete else INF)
    out = FormalSeries(coeffs, order, D, s.var, lo, hi, complete, bound)
    return _trim(out)


def _poch_q_inverse_step(prev: QSeries, j: int) -> QSeries:
    return qs_div_binomial(prev, Monomial(1, Fraction(j)))


def fs_evaluate(s: FormalSeries, z: Monomial) -> QSeries:
    """Substitute a monomial for the variable and sum."""
    if not s.complete:
        raise BeyondGuaranteeError("evaluation needs a complete series")
    if not z.representable(s.denom):
        s = _rebase(s, _lcm(s.denom, z.power.denominator))
    e = z.units(s.denom)
    order = s.order + min(0, e * s.lo, e * s.hi)
    if s.bound is None:
        raise BeyondGuaranteeError("evaluation needs an order bound")
    tail = s.bound.tilt(e).min_outside(s.lo, s.hi)
    order = min(order, _below(tail))
    if order < 0:
        raise OrderExhaustedError(f"evaluation at {z} leaves no trusted q-order")
    acc = QSeries.zero(order, s.denom)
    for k, c in sorted(s.coeffs.items()):
        acc = qs_add(acc, qs_mul_monomial(c, z ** k).truncate(order))
    return acc.ordinary() if acc.valuation >= 0 else acc


@dataclass(frozen=True)
class FormalEqualityReport:
    equal: bool
    order: int
    denom: int
    window: tuple[int, int]
    var_exponent: int | None = None
    exponent: int | None = None
    lhs: int | None = None
    rhs: int | None = None

    def __bool__(self):
        return self.equal

    @property
    def power(self) -> str | None:
        return None if self.exponent is None else fmt_power(self.exponent, self.denom)


def fs_equal_to_order(a: FormalSeries, b: FormalSeries, M: int | None = None) -> FormalEqualityReport:
    """Coefficientwise comparison over every variable exponent both sides know."""
    _check_same(a, b)
    a, b = _align(a, b)
    top = min(a.order, b.order)
    M = top if M is None else M
    if M > top:
        raise OrderExhaustedError(f"comparison order {M} exceeds trusted order {top}")
    lo, hi, _ = _known_window(a, b)
    for k in range(lo, hi + 1):
        ca = a.coeffs.get(k)
        cb = b.coeffs.get(k)
        if ca is None and cb is None:
            continue
        ca = ca if ca is not None else QSeries.zero(a.order, a.denom)
        cb = cb if cb is not None else QSeries.zero(b.order, b.denom)
        rep: EqualityReport = qs_equal_to_order(ca, cb, M)
        if not rep:
            return FormalEqualityReport(False, M, a.denom, (lo, hi), k, rep.exponent, rep.lhs,
                                        rep.rhs)
    return FormalEqualityReport(True, M, a.denom, (lo, hi))


def fs_div_exact_int(s: FormalSeries, k: int) -> FormalSeries:
    """Divide every coefficient exactly by ``k``."""
    return FormalSeries({j: qs_div_exact_int(c, k) for j, c in s.coeffs.items()}, s.order,
                        s.denom, s.var, s.lo, s.hi, s.complete, s.bound)


def fs_from_list(values, var: str = "k") -> FormalSeries:
    """Window-only series holding ``values[i]`` at ``var^i`` (an indexed family)."""
    denom = values[0].denom
    for v in values:
        denom = _lcm(denom, v.denom)
    coeffs = {i: v.with_denom(denom) for i, v in enumerate(values)}
    order = min(c.order for c in coeffs.values())
    return FormalSeries(coeffs, order, denom, var, 0, len(values) - 1, False)
