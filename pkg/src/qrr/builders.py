"""Named series built by direct summation or as explicit products.

Every sum here has the shape ``sum_k c_k q^(e(k)) / prod(1 - m)`` (times
optional numerator factors) with ``e`` eventually increasing, so it can be
stopped at a certified index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable

from .errors import EngineInconsistencyError, OrderExhaustedError
from .formal import (
    fs_compose_power,
    fs_constant_term,
    fs_mul,
)
from .qseries import (
    DEFAULT_DENOM,
    ONE,
    Monomial,
    QSeries,
    qs_add,
    qs_div_binomial,
    qs_equal_to_order,
    qs_mul,
    qs_mul_binomial,
    qs_mul_monomial,
    qs_negate_q,
    qs_scale_exponents,
)
from .special import (
    PochhammerSpec,
    euler_Eq_laurent,
    euler_inv_laurent,
    poch,
    poch_many,
    poch_many_inv,
    theta_laurent,
)

Q = Monomial.q


def qsum(M: int, D: int, term: Callable[[int], Monomial],
         den: Callable[[int], list] = lambda k: [],
         num: Callable[[int], list] = lambda k: [],
         start: int = 0, lift: int = 0) -> QSeries:
    """``sum_{k >= start} term(k) * prod num / prod den`` truncated at ``M``.

    ``den(k)``/``num(k)`` list the monomials ``m`` whose factors ``1 - m``
    join the running denominator/numerator when passing to index ``k``;
    every ``m`` must have positive order, except numerator factors of
    order 0.  ``lift`` extends the working order when some ``term(k)``
    has a negative exponent.  Summation stops once the term exponent
    exceeds ``M`` and is increasing.
    """
    W = M + lift
    running = QSeries.one(W, D)
    acc = QSeries.zero(M, D)
    k = start
    prev = None
    while True:
        for m in den(k):
            running = qs_div_binomial(running, m)
        for m in num(k):
            e = m.units(D)
            running = qs_mul_binomial(running, m) if e > 0 else running * (1 - m.coeff)
        t = term(k)
        e = t.units(D)
        if e > M:
            if prev is not None and e > prev:
                break
        elif not running.is_zero:
            tk = qs_mul_monomial(running, t)
            if tk.order < M:
                raise OrderExhaustedError(f"term {k} trusted only to {tk.order} < {M}")
            acc = qs_add(acc, tk.truncate(M))
        prev = e
        k += 1
        if k > 64 * (M + lift + 16):
            raise OrderExhaustedError("summation does not terminate: term orders stay bounded")
    return acc


def R_sum(t: Monomial, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``R(t; q) = sum q^(k^2) t^k / (q; q)_k``."""
    lift = max(0, -min(k * k * D + k * t.units(D) for k in range(0, 4)))
    return qsum(M, D, lambda k: Q(k * k) * t ** k, den=lambda k: [Q(k)] if k else [],
                lift=lift)


def tilde_G(M: int, D: int = DEFAULT_DENOM) -> QSeries:
    return poch_many_inv([Q(1), Q(4)], 5, None, M, D)


def tilde_H(M: int, D: int = DEFAULT_DENOM) -> QSeries:
    return poch_many_inv([Q(2), Q(3)], 5, None, M, D)


def A_sum(M: int, D: int = DEFAULT_DENOM) -> QSeries:
    return qsum(M, D, lambda k: Q(k * k), den=lambda k: [Q(4 * k)] if k else [])


def B_sum(M: int, D: int = DEFAULT_DENOM) -> QSeries:
    return qsum(M, D, lambda k: Q(k * (k + 2)), den=lambda k: [Q(4 * k)] if k else [])


def F_prod(M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``(q^8; q^8)_oo / (q^2; q^2)_oo``."""
    return qs_mul(poch(PochhammerSpec(Q(8), 8), M, D), poch_many_inv([Q(2)], 2, None, M, D))


_BASE = {
    "G": lambda t, M, D: R_sum(ONE, M, D),
    "H": lambda t, M, D: R_sum(Q(1), M, D),
    "R": lambda t, M, D: R_sum(t, M, D),
    "A": lambda t, M, D: A_sum(M, D),
    "B": lambda t, M, D: B_sum(M, D),
    "F": lambda t, M, D: F_prod(M, D),
    "tildeG": lambda t, M, D: tilde_G(M, D),
    "tildeH": lambda t, M, D: tilde_H(M, D),
}

SERIES_NAMES = tuple(_BASE)


@dataclass(frozen=True)
class SeriesBuilder:
    """A named series evaluated at ``q -> (+-q)^scale``.

    ``negate`` applies ``q -> -q`` before the rescaling, so ``G(-q^4)`` is
    ``SeriesBuilder("G", 4, negate=True)``.
    """

    name: str
    scale: Fraction = Fraction(1)
    t: Monomial | None = None
    negate: bool = False

    def __post_init__(self):
        if self.name not in _BASE:
            raise ValueError(f"unknown series {self.name!r}; expected one of {SERIES_NAMES}")
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.name == "R" and self.t is None:
            object.__setattr__(self, "t", ONE)

    def __str__(self):
        arg = "-q" if self.negate else "q"
        if self.scale != 1:
            arg = f"{arg}^{self.scale}" if self.scale.denominator == 1 else f"{arg}^({self.scale})"
        if self.name == "R":
            return f"R({self.t}; {arg})"
        return f"{self.name}({arg})"


def build_series(b: SeriesBuilder, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """Evaluate a builder to trusted order ``M``."""
    s = b.scale
    inner = ceil(Fraction(M) / s)
    base = _BASE[b.name](b.t, inner, D)
    if b.negate:
        base = qs_negate_q(base)
    if s != 1:
        base = qs_scale_exponents(base, s.numerator, s.denominator)
    return base.truncate(M) if base.order > M else base


# ---------------------------------------------------------------------------
# constant-term representations


def ct_direct(N: int, Qbase: Fraction, x: Monomial, a_k: Callable[[int, int], QSeries],
              M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``CT theta(1/z; Q) f(x z^N)`` by the closed form
    ``sum_k (-1)^(Nk) Q^(Nk(Nk-1)/2) a_k x^k`` for ``f = sum a_k z^k``.

    ``a_k(k, order)`` returns the k-th Taylor coefficient of ``f``.
    """
    acc = QSeries.zero(M, D)
    prev = None
    k = 0
    while True:
        n = N * k
        mono = Monomial((-1) ** (n % 2), Qbase * n * (n - 1) / 2) * x ** k
        e = mono.units(D)
        if e > M and prev is not None and e > prev:
            break
        if e <= M:
            c = a_k(k, M - e)
            acc = qs_add(acc, qs_mul_monomial(c, mono).truncate(M))
        prev = e
        k += 1
    return acc


def _euler_coeff(step: Fraction, D: int):
    def a_k(k, order):
        out = QSeries.one(order, D)
        for j in range(1, k + 1):
            out = qs_div_binomial(out, Q(step * j))
        return out

    return a_k


def ct_laurent(N: int, t: Monomial, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``R(t; q)`` as the constant term of a generic Laurent product."""
    if N == 1:
        theta = theta_laurent(True, 2, M, D)
        a = Q(1, -1) * t
        if a.units(D) >= 1:
            f = euler_inv_laurent(a, 1, M, D)
            return fs_constant_term(fs_mul(theta, f))
        # ord(-qt) <= 0: only z^k with k <= -theta.lo can reach the constant term
        f = euler_inv_laurent(a, 1, M, D, degree=-theta.lo)
        return _ct_keep(theta, f, M)
    if N == 2:
        theta = theta_laurent(True, Fraction(1, 2), M, D)
        a = Q(Fraction(1, 2)) * t
        if a.units(D) >= 1:
            f = fs_compose_power(euler_inv_laurent(a, 1, M, D), ONE, 2)
            return fs_constant_term(fs_mul(theta, f))
        deg = -theta.lo // 2
        f = euler_inv_laurent(a, 1, M, D, degree=deg)
        f = fs_compose_power(f, ONE, 2)
        return _ct_keep(theta, f, M)
    raise ValueError("only N = 1 and N = 2 are supported")


def _ct_keep(theta, f, M):
    prod = fs_mul(theta, f, keep=(0, 0))
    c = fs_constant_term(prod)
    return c.truncate(M) if c.order > M else c


def ct_fexp(N: int, t: Monomial, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``R(t; q)`` from the closed-form constant-term expansion."""
    if N == 1:
        return ct_direct(1, Fraction(2), Q(1, -1) * t, _euler_coeff(Fraction(1), D), M, D)
    if N == 2:
        return ct_direct(2, Fraction(1, 2), Q(Fraction(1, 2)) * t, _euler_coeff(Fraction(1), D),
                         M, D)
    raise ValueError("only N = 1 and N = 2 are supported")


def at_order(fn: Callable[[int], QSeries], M: int, tries: int = 4) -> QSeries:
    """Call ``fn(W)`` with growing working order ``W`` until the result is trusted to ``M``.

    Operations that lose order (negative-exponent intermediates) report
    the order they could certify; the deficit is added back and retried.
    """
    W = M
    for _ in range(tries):
        try:
            out = fn(W)
        except OrderExhaustedError:
            out = None
        if out is not None and out.order >= M:
            return out.truncate(M) if out.order > M else out
        deficit = M - (out.order if out is not None else 0)
        W += max(deficit, M // 4, 8)
    raise OrderExhaustedError(f"could not certify order {M} after {tries} attempts")


def ct_representation(N: int, t: Monomial, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``R(t; q)`` as a constant term, computed two ways that must agree."""
    direct = ct_fexp(N, t, M, D)
    generic = at_order(lambda W: ct_laurent(N, t, W, D), M)
    top = min(direct.order, generic.order)
    rep = qs_equal_to_order(direct, generic, top)
    if not rep:
        raise EngineInconsistencyError(
            f"constant-term routes disagree for N={N}, t={t} at q^{rep.power}: "
            f"{rep.lhs} vs {rep.rhs}")
    if top < M:
        raise OrderExhaustedError(f"constant term trusted only to {top} < {M}")
    return direct.truncate(M) if direct.order > M else direct


def ct_companion(t: Monomial, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``CT theta(1/z; q) (qtz; q)_oo`` via the Laurent product."""
    theta = theta_laurent(True, 1, M, D)
    f = euler_Eq_laurent(Q(1, -1) * t, 1, M, D)
    return fs_constant_term(fs_mul(theta, f))
