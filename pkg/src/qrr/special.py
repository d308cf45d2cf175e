"""Named q-series objects: Pochhammer symbols, theta functions, Euler series.

Bases are given as exact q-powers (``Fraction``); ``step=1`` is base q,
``step=Fraction(1, 2)`` is base q^(1/2).  ``M`` and ``D`` are the trusted
order (in 1/D units) and the exponent denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import INF, Bound, Quadratic
from .errors import (
    DivergentProductError,
    NonInvertibleError,
    NormalizationRequiredError,
    OrderExhaustedError,
)
from .formal import FormalSeries, fs_evaluate, fs_mul
from .qseries import (
    DEFAULT_DENOM,
    ONE,
    Monomial,
    QSeries,
    qs_div_binomial,
    qs_mul,
    qs_mul_binomial,
    qs_mul_monomial,
)


def _units(m: Monomial | Fraction | int, D: int) -> int:
    if isinstance(m, Monomial):
        return m.units(D)
    return Monomial(1, Fraction(m)).units(D)


@dataclass(frozen=True)
class PochhammerSpec:
    """``(arg; q^step)_length``; ``length=None`` is the infinite product."""

    arg: Monomial
    step: Fraction = Fraction(1)
    length: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "step", Fraction(self.step))
        if self.step <= 0:
            raise ValueError("Pochhammer base step must be positive")

    def factors(self, M: int, D: int) -> list[Monomial]:
        """Monomials ``m`` with ``(arg; q^step)_length = prod (1 - m)`` to order ``M``.

        Negative lengths are not handled here (see :func:`poch`).
        """
        a, s = self.arg, self.step
        if self.length is None:
            if a.units(D) < 1:
                raise DivergentProductError(
                    f"infinite product ({a}; q^{s}) needs an argument of positive order")
            out, j = [], 0
            while (a.power + j * s) * D <= M:
                out.append(Monomial(a.coeff, a.power + j * s))
                j += 1
            return out
        return [Monomial(a.coeff, a.power + j * s) for j in range(self.length)]


def _mul_factor(acc: QSeries, m: Monomial) -> QSeries:
    e = m.units(acc.denom)
    if e > 0:
        return qs_mul_binomial(acc, m)
    if e == 0:
        return acc * (1 - m.coeff)
    # 1 - c q^e = -c q^e (1 - c^-1 q^-e) for a unit c; the order moves with q^e
    if m.coeff not in (1, -1):
        raise NonInvertibleError(f"factor 1 - ({m}) has a non-unit leading coefficient")
    return qs_mul_binomial(qs_mul_monomial(acc, Monomial(-m.coeff, m.power)),
                           Monomial(m.coeff, -m.power))


def _div_factor(acc: QSeries, m: Monomial) -> QSeries:
    e = m.units(acc.denom)
    if e > 0:
        return qs_div_binomial(acc, m)
    if e == 0:
        c = 1 - m.coeff
        if c not in (1, -1):
            raise NonInvertibleError(f"factor 1 - ({m}) = {c} is not a unit")
        return acc * c
    if m.coeff not in (1, -1):
        raise NonInvertibleError(f"factor 1 - ({m}) has a non-unit leading coefficient")
    return qs_mul_monomial(qs_div_binomial(acc, Monomial(m.coeff, -m.power)),
                           Monomial(-m.coeff, -m.power))


def _poch_extra(spec: PochhammerSpec, D: int) -> int:
    """Units of order lost to negative-order factors (for finite products)."""
    if spec.length is None:
        return 0
    k = spec.length
    if k < 0:
        return 0
    return sum(max(0, -m.units(D)) for m in spec.factors(0, D))


def poch(spec: PochhammerSpec, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``(a; q^b)_k`` truncated at ``M``; negative ``k`` via ``1/(a q^(bk); q^b)_(-k)``."""
    if spec.length is not None and spec.length < 0:
        inv = PochhammerSpec(Monomial(spec.arg.coeff, spec.arg.power + spec.length * spec.step),
                             spec.step, -spec.length)
        return poch_inv(inv, M, D)
    extra = _poch_extra(spec, D)
    acc = QSeries.one(M + extra, D)
    for m in spec.factors(M, D):
        acc = _mul_factor(acc, m)
        if acc.is_zero:
            break
    return acc.truncate(M) if acc.order > M else acc


def poch_inv(spec: PochhammerSpec, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``1 / (a; q^b)_k`` truncated at ``M``."""
    if spec.length is not None and spec.length < 0:
        inv = PochhammerSpec(Monomial(spec.arg.coeff, spec.arg.power + spec.length * spec.step),
                             spec.step, -spec.length)
        return poch(inv, M, D)
    factors = spec.factors(M, D)
    # negative-order factors raise the order of the quotient; start lower
    gain = sum(max(0, -m.units(D)) for m in factors)
    acc = QSeries.one(M - gain, D) if gain else QSeries.one(M, D)
    for m in factors:
        acc = _div_factor(acc, m)
    return acc


def poch_many(args, step, length, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``(a_1, ..., a_m; q^step)_length``."""
    acc = QSeries.one(M, D)
    for a in args:
        acc = qs_mul(acc, poch(PochhammerSpec(a, step, length), M, D))
    return acc


def poch_many_inv(args, step, length, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    acc = QSeries.one(M, D)
    for a in args:
        acc = qs_mul(acc, poch_inv(PochhammerSpec(a, step, length), M, D))
    return acc


# ---------------------------------------------------------------------------
# theta functions


def theta_at_monomial(z: Monomial, base, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``theta(z; q^b) = (q^b, z, q^b/z; q^b)_oo`` at a monomial ``z``.

    Arguments outside ``0 <= ord(z) < b`` are first reduced with
    ``theta(q^b w; q^b) = -w^-1 theta(w; q^b)``, which needs a unit
    coefficient.  The result may carry negative powers of q.
    """
    base = Fraction(base)
    b, e = _units(base, D), z.units(D)
    if b < 1:
        raise ValueError("theta base must have positive order")
    n, e0 = divmod(e, b)
    w = Monomial(z.coeff, Fraction(e0, D))
    if n and z.coeff not in (1, -1):
        raise NormalizationRequiredError(
            f"theta argument {z} lies outside [1, q^{base}) and has a non-unit coefficient")
    if e0 == 0 and w.coeff == 1:
        return QSeries.zero(M, D)
    # theta(p^n w) = (-1)^n w^-n p^(-n(n-1)/2) theta(w)
    shift = -n * e0 - b * n * (n - 1) // 2
    sign = (-1) ** (n % 2) * (w.coeff ** (n % 2) if n else 1)
    inner = M - shift
    if inner < 0:
        return QSeries.zero(M, D)
    p = Monomial(1, base)
    acc = poch(PochhammerSpec(p, base), inner, D)
    acc = qs_mul(acc, _theta_factor(w, base, inner, D))
    acc = qs_mul(acc, poch(PochhammerSpec(Monomial(w.coeff, base - w.power), base), inner, D))
    out = qs_mul_monomial(acc, Monomial(sign, Fraction(shift, D)))
    return out.truncate(M) if out.order > M else out


def _theta_factor(w: Monomial, base: Fraction, M: int, D: int) -> QSeries:
    # (w; q^b)_oo where ord(w) may be 0: peel the first factor off
    if w.units(D) >= 1:
        return poch(PochhammerSpec(w, base), M, D)
    first = QSeries.one(M, D) * (1 - w.coeff)
    return qs_mul(first, poch(PochhammerSpec(Monomial(w.coeff, w.power + base), base), M, D))


def theta_laurent(invert_var: bool, base, M: int, D: int = DEFAULT_DENOM,
                  scale: Monomial = ONE, power: int = 1, var: str = "z") -> FormalSeries:
    """Jacobi sum for ``theta(x z^(+-N); q^b) = sum (-1)^l q^(b l(l-1)/2) x^l z^(+-N l)``.

    ``scale`` is ``x`` (a unit coefficient is needed for negative ``l``),
    ``power`` is ``N`` and ``invert_var`` selects ``z^-1``.
    """
    base = Fraction(base)
    b, ex = _units(base, D), scale.units(D)
    if b < 1:
        raise ValueError("theta base must have positive order")
    if scale.coeff not in (1, -1):
        raise NormalizationRequiredError("theta scale needs a unit coefficient")
    expo = lambda l: b * l * (l - 1) // 2 + ex * l
    # vertex of the exponent parabola, then walk out both ways
    v = round(Fraction(1, 2) - Fraction(ex, b))
    coeffs = {}
    sgn = -1 if invert_var else 1
    for direction in (1, -1):
        l = v if direction == 1 else v - 1
        while True:
            e = expo(l)
            if e > M and (expo(l + direction) > e):
                break
            if e <= M:
                c = (-1) ** (l % 2) * scale.coeff ** (l % 2)
                coeffs[sgn * power * l] = QSeries({e: c}, M, D, allows_negative=e < 0)
            l += direction
    piece = Quadratic(Fraction(b, 2), ex - Fraction(b, 2), 0)
    bound = Bound([piece.stretch(sgn * power)])
    ks = list(coeffs) or [0]
    return FormalSeries(coeffs, M, D, var, min(ks), max(ks), True, bound)


# ---------------------------------------------------------------------------
# Euler expansions


def _inv_q_poch_table(step: Fraction, kmax: int, M: int, D: int) -> list[QSeries]:
    """``1/(q^s; q^s)_k`` for ``k = 0..kmax`` truncated at ``M``."""
    out = [QSeries.one(M, D)]
    for k in range(1, kmax + 1):
        out.append(qs_div_binomial(out[-1], Monomial(1, step * k)))
    return out


def euler_inv_laurent(a: Monomial, step, M: int, D: int = DEFAULT_DENOM, var: str = "z",
                      degree: int | None = None) -> FormalSeries:
    """``1/(a z; q^s)_oo = sum (a z)^k / (q^s; q^s)_k``.

    Needs ``ord(a) >= 1`` unit for a complete expansion.  With ``degree``
    the expansion stops at ``z^degree`` and is window-only, which also
    admits ``ord(a) <= 0``.
    """
    step = Fraction(step)
    ea = a.units(D)
    if degree is None:
        if ea < 1:
            raise DivergentProductError(
                f"1/({a} z; q^{step})_oo has no complete expansion: ord({a}) < 1 unit")
        kmax = M // ea
    else:
        kmax = degree if ea < 1 else min(degree, M // ea)
    lift = max(0, -ea * kmax)
    table = _inv_q_poch_table(step, kmax, M + lift, D)
    coeffs = {}
    for k in range(kmax + 1):
        c = qs_mul_monomial(table[k], a ** k)
        coeffs[k] = c.truncate(M) if c.order > M else c
    bound = Bound([Quadratic(0, ea, 0, 0, INF)])
    complete = degree is None or (ea >= 1 and kmax == M // ea)
    return FormalSeries(coeffs, M, D, var, 0, kmax if not complete else max(coeffs), complete,
                        bound)


def euler_Eq_laurent(a: Monomial, step, M: int, D: int = DEFAULT_DENOM,
                     var: str = "z") -> FormalSeries:
    """``(-a z; q^s)_oo = sum q^(s k(k-1)/2) a^k z^k / (q^s; q^s)_k``."""
    step = Fraction(step)
    s, ea = _units(step, D), a.units(D)
    expo = lambda k: s * k * (k - 1) // 2 + ea * k
    kmax = 0
    while True:
        k = kmax + 1
        if expo(k) > M and expo(k + 1) > expo(k):
            break
        kmax = k
    lift = max(0, -min(expo(k) for k in range(kmax + 1)))
    table = _inv_q_poch_table(step, kmax, M + lift, D)
    coeffs = {}
    for k in range(kmax + 1):
        if expo(k) > M:
            continue
        c = qs_mul_monomial(table[k], Monomial(a.coeff ** k, Fraction(expo(k), D)))
        coeffs[k] = c.truncate(M) if c.order > M else c
    bound = Bound([Quadratic(Fraction(s, 2), ea - Fraction(s, 2), 0, 0, INF)])
    return FormalSeries(coeffs, M, D, var, 0, kmax, True, bound)


def q_exponentials(kind: str, t: Monomial, M: int, D: int = DEFAULT_DENOM) -> QSeries:
    """``e_q(t) = 1/(t; q)_oo`` (``kind="small_e"``) or ``E_q(t) = (-t; q)_oo`` (``"big_E"``)."""
    if kind == "small_e":
        if t.units(D) < 1:
            raise DivergentProductError(f"e_q({t}) diverges: ord({t}) < 1 unit")
        return poch_inv(PochhammerSpec(t), M, D)
    if kind == "big_E":
        return fs_evaluate(euler_Eq_laurent(t, 1, M, D), ONE)
    raise ValueError(f"unknown q-exponential kind {kind!r}")


def hk_family(x: Monomial, y: Monomial, k_max: int, M: int,
              D: int = DEFAULT_DENOM) -> list[QSeries]:
    """``H_0..H_kmax`` from ``1/(tx, ty; q)_oo = sum H_k(x, y) t^k``."""
    fx = euler_inv_laurent(x, 1, M, D, "t", degree=k_max)
    fy = euler_inv_laurent(y, 1, M, D, "t", degree=k_max)
    prod = fs_mul(fx, fy, keep=(0, k_max))
    if prod.order < M:
        raise OrderExhaustedError(f"H_k({x}, {y}) trusted only to {prod.order} < {M}")
    out = []
    for k in range(k_max + 1):
        c = prod.coeffs.get(k) or QSeries.zero(M, D)
        if c.valuation < 0:
            raise OrderExhaustedError(f"H_{k}({x}, {y}) has negative q-order")
        out.append(c.ordinary().truncate(M))
    return out
