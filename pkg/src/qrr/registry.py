"""Catalogue of identities, each as a list of independently built members.

A member is a function ``(inst, M, D) -> QSeries | FormalSeries`` where
``inst`` maps parameter names to monomials (or small integers).  The
verifier checks that all members of an entry agree.  Members may raise
:class:`InadmissibleInstantiation` when a parameter value makes one side
meaningless; that instantiation is then reported as skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .builders import (
    SeriesBuilder,
    at_order,
    build_series,
    ct_companion,
    ct_direct,
    ct_fexp,
    ct_laurent,
    qsum,
    R_sum,
)
from .bounds import Bound, Quadratic
from .errors import InadmissibleInstantiation, UnknownIdentityError
from .formal import (
    FormalSeries,
    fs_add,
    fs_apply_eq_operator,
    fs_constant_term,
    fs_div_exact_int,
    fs_evaluate,
    fs_from_list,
    fs_mul,
    fs_neg,
    fs_scale,
    fs_shift_var,
    fs_truncate_order,
    fs_compose_power,
)
from .qseries import (
    DEFAULT_DENOM,
    ONE,
    Monomial,
    QSeries,
    qs_add,
    qs_div_binomial,
    qs_div_exact_int,
    qs_mul,
    qs_mul_monomial,
    qs_negate_q,
    qs_sub,
)
from .special import (
    PochhammerSpec,
    euler_Eq_laurent,
    euler_inv_laurent,
    hk_family,
    poch,
    poch_inv,
    poch_many,
    poch_many_inv,
    theta_at_monomial,
    theta_laurent,
)

Q = Monomial.q
F = Fraction
DXE_DEGREE = 12
HK_MAX = 6


@dataclass(frozen=True)
class Member:
    label: str
    build: Callable


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    anchor: str
    members: tuple[Member, ...]
    instantiations: tuple[dict, ...] = ({},)
    denom: int = DEFAULT_DENOM
    default_order: int = 400
    note: str = ""

    @property
    def lhs(self) -> Member:
        return self.members[0]

    @property
    def rhs(self) -> Member:
        return self.members[1]


def fmt_inst(inst: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in inst.items()) or "-"


# ---------------------------------------------------------------------------
# building blocks


@lru_cache(maxsize=512)
def _series(name: str, scale: Fraction, negate: bool, M: int, D: int) -> QSeries:
    return build_series(SeriesBuilder(name, scale, negate=negate), M, D)


def S(name: str, scale=1, negate: bool = False):
    """Member-style accessor for a named series at ``q -> (+-q)^scale``."""
    return lambda M, D: _series(name, F(scale), negate, M, D)


def prod(args, step, M, D, length=None) -> QSeries:
    return poch_many([a if isinstance(a, Monomial) else Q(a) for a in args], F(step), length, M, D)


def prod_inv(args, step, M, D, length=None) -> QSeries:
    return poch_many_inv([a if isinstance(a, Monomial) else Q(a) for a in args], F(step), length,
                         M, D)


def mul(*parts) -> QSeries:
    out = parts[0]
    for p in parts[1:]:
        out = qs_mul(out, p)
    return out


def grow(arg: Monomial, step, mult: int = 1, offset: int = 0):
    """Factors joining ``(arg; q^step)_(mult*k + offset)`` when the index reaches ``k``."""
    step = F(step)

    def new(k):
        old = 0 if k == 0 else mult * (k - 1) + offset
        return [Monomial(arg.coeff, arg.power + j * step) for j in range(old, mult * k + offset)]

    return new


def both(*growers):
    return lambda k: [m for g in growers for m in g(k)]


def mono(sign: Callable[[int], int], expo: Callable[[int], Fraction], t: Monomial = ONE,
         tpow: Callable[[int], int] = lambda k: k):
    """Term ``sign(k) * q^expo(k) * t^tpow(k)``."""
    return lambda k: Monomial(sign(k), F(expo(k))) * t ** tpow(k)


plus = lambda k: 1
alt = lambda k: (-1) ** k


def sqrt_or_skip(t: Monomial) -> Monomial:
    try:
        r = t.sqrt()
    except ValueError:
        raise InadmissibleInstantiation(f"{t} has no principal square root") from None
    return r


def ensure(fn: Callable[[int], object], M: int):
    """Rebuild at a higher working order until the result is trusted to ``M``."""
    W = M
    for _ in range(4):
        out = fn(W)
        if out.order >= M:
            if isinstance(out, FormalSeries):
                return fs_truncate_order(out, M) if out.order > M else out
            return out.truncate(M) if out.order > M else out
        W += max(M - out.order, M // 4, 8)
    return out


# ---------------------------------------------------------------------------
# the catalogue

REGISTRY: list[IdentitySpec] = []


def entry(id: str, anchor: str, members: dict, instantiations=({},), note: str = ""):
    REGISTRY.append(IdentitySpec(
        id, anchor, tuple(Member(k, v) for k, v in members.items()), tuple(instantiations),
        note=note))


def _r(inst, M, D):
    return R_sum(inst.get("t", ONE), M, D)


# -- headline identities -----------------------------------------------------

entry("RR_MAIN_G", "first Rogers-Ramanujan identity: sum side equals 1/(q, q^4; q^5)_oo", {
    "G(q) sum": lambda i, M, D: S("G")(M, D),
    "product 1/(q,q^4;q^5)": lambda i, M, D: S("tildeG")(M, D),
})
entry("RR_MAIN_H", "second Rogers-Ramanujan identity: sum side equals 1/(q^2, q^3; q^5)_oo", {
    "H(q) sum": lambda i, M, D: S("H")(M, D),
    "product 1/(q^2,q^3;q^5)": lambda i, M, D: S("tildeH")(M, D),
})


def _ghr(kind: str):
    g, h = ("G", "H") if kind == "SUM" else ("tildeG", "tildeH")

    def even(name, M, D):
        return qs_add(S(name)(M, D), S(name, 1, True)(M, D))

    def odd(name, M, D):
        return qs_sub(S(name)(M, D), S(name, 1, True)(M, D))

    def twice(F_, x, shift, M, D):
        return qs_mul_monomial(mul(F_, x) * 2, Q(shift))

    return {
        "1": ("G(q) + G(-q) = 2 F(q) G(q^16)", {
            "G(q)+G(-q)": lambda i, M, D: even(g, M, D),
            "2F(q)G(q^16)": lambda i, M, D: mul(S("F")(M, D), S(g, 16)(M, D)) * 2,
        }),
        "2": ("G(q) - G(-q) = 2q F(q) H(-q^4)", {
            "G(q)-G(-q)": lambda i, M, D: odd(g, M, D),
            "2qF(q)H(-q^4)": lambda i, M, D: twice(S("F")(M, D), S(h, 4, True)(M, D), 1, M, D)
            .truncate(M),
        }),
        "3": ("H(q) + H(-q) = 2 F(q) G(-q^4)", {
            "H(q)+H(-q)": lambda i, M, D: even(h, M, D),
            "2F(q)G(-q^4)": lambda i, M, D: mul(S("F")(M, D), S(g, 4, True)(M, D)) * 2,
        }),
        "4": ("H(q) - H(-q) = 2q^3 F(q) H(q^16)", {
            "H(q)-H(-q)": lambda i, M, D: odd(h, M, D),
            "2q^3F(q)H(q^16)": lambda i, M, D: twice(S("F")(M, D), S(h, 16)(M, D), 3, M, D)
            .truncate(M),
        }),
    }


for _kind, _label in (("SUM", "sum sides"), ("PROD", "product sides")):
    for _n, (_anchor, _members) in _ghr(_kind).items():
        entry(f"GHR_{_n}_{_kind}", f"even/odd dissection, {_label}: {_anchor}", _members)

entry("ABF_1", "recursive form G(q) = F(q) (G(q^16) + q H(-q^4))", {
    "G(q)": lambda i, M, D: S("G")(M, D),
    "F(q)(G(q^16)+qH(-q^4))": lambda i, M, D: mul(S("F")(M, D), qs_add(
        S("G", 16)(M, D), qs_mul_monomial(S("H", 4, True)(M, D), Q(1)).truncate(M))),
})
entry("ABF_2", "recursive form H(q) = F(q) (G(-q^4) + q^3 H(q^16))", {
    "H(q)": lambda i, M, D: S("H")(M, D),
    "F(q)(G(-q^4)+q^3H(q^16))": lambda i, M, D: mul(S("F")(M, D), qs_add(
        S("G", 4, True)(M, D), qs_mul_monomial(S("H", 16)(M, D), Q(3)).truncate(M))),
})

# -- Euler, Jacobi and the bilateral sum -------------------------------------

_Z5 = [{"z": Q(1)}, {"z": Q(2)}, {"z": Q(1, -1)}, {"z": Q(F(1, 2))}, {"z": Q(F(1, 4), -1)}]

entry("EULER_INV", "Euler: 1/(z; q)_oo = sum z^k / (q; q)_k", {
    "product 1/(z;q)": lambda i, M, D: poch_inv(PochhammerSpec(i["z"]), M, D),
    "sum z^k/(q;q)_k": lambda i, M, D: fs_evaluate(euler_inv_laurent(i["z"], 1, M, D), ONE),
}, _Z5)
entry("EULER_EQ", "Euler: (-z; q)_oo = sum q^(k(k-1)/2) z^k / (q; q)_k", {
    "product (-z;q)": lambda i, M, D: poch(PochhammerSpec(-i["z"]), M, D),
    "sum q^(k(k-1)/2)z^k/(q;q)_k": lambda i, M, D: fs_evaluate(
        euler_Eq_laurent(i["z"], 1, M, D), ONE),
}, [{"z": Q(1)}, {"z": Q(2)}, {"z": Q(1, -1)}, {"z": Q(F(1, 2))}, {"z": Q(F(1, 4))}])

entry("JACOBI_TP", "Jacobi triple product: (p, z, p/z; p)_oo = sum (-1)^k p^(k(k-1)/2) z^k", {
    "triple product": lambda i, M, D: theta_at_monomial(i["z"], i["p"].power, M, D),
    "bilateral sum": lambda i, M, D: ensure(
        lambda W: fs_evaluate(theta_laurent(False, i["p"].power, W, D), i["z"]), M),
}, [{"z": Q(1), "p": Q(3)}, {"z": Q(1, -1), "p": Q(10)}, {"z": Q(3, -1), "p": Q(10)},
    {"z": Q(F(1, 2)), "p": Q(1)}, {"z": Q(2), "p": Q(5)}, {"z": Q(F(1, 4), -1), "p": Q(F(1, 2))},
    {"z": Q(-1), "p": Q(2)}])


def _rps_rhs(t: Monomial, M: int, D: int) -> FormalSeries:
    # z^(-k) coefficient: (-1)^k q^(k(k-1)/2) (t q^k; q)_oo, for every integer k
    if t.coeff != 1 or t.power.denominator != 1 or t.power < 1:
        raise InadmissibleInstantiation(f"bilateral sum needs t = q^m with m >= 1, got {t}")
    m = int(t.power)
    coeffs = {}
    k = 1 - m
    while True:
        e = k * (k - 1) // 2 * D
        if e > M and k > 0:
            break
        if e <= M:
            p = poch(PochhammerSpec(Monomial(1, t.power + k)), M - e, D)
            coeffs[-k] = qs_mul_monomial(p, Monomial((-1) ** (k % 2), F(k * (k - 1), 2)))
        k += 1
    bound = Bound([Quadratic(F(D, 2), F(-D, 2), 0).stretch(-1)])
    return FormalSeries(coeffs, M, D, "z", min(coeffs), max(coeffs), True, bound)


entry("RPS", "bilateral sum: theta(1/z; q)/(tz; q)_oo = (t; q)_oo sum (-1)^k q^(k(k-1)/2) / ((t; q)_k z^k)", {
    "theta(1/z;q)/(tz;q)": lambda i, M, D: fs_mul(theta_laurent(True, 1, M, D),
                                                 euler_inv_laurent(i["t"], 1, M, D)),
    "(t;q) bilateral sum": lambda i, M, D: _rps_rhs(i["t"], M, D),
}, [{"t": Q(1)}, {"t": Q(2)}])

# -- constant-term representations -------------------------------------------

_T01 = [{"t": ONE}, {"t": Q(1)}]

entry("CTREP_N1", "R(t; q) = CT theta(1/z; q^2) / (-qtz; q)_oo", {
    "R(t;q) sum": _r,
    "closed-form CT expansion": lambda i, M, D: ct_fexp(1, i["t"], M, D),
    "Laurent product CT": lambda i, M, D: at_order(lambda W: ct_laurent(1, i["t"], W, D), M),
}, _T01)
entry("CTREP_N2", "R(t; q) = CT theta(1/z; q^(1/2)) / (q^(1/2) t z^2; q)_oo", {
    "R(t;q) sum": _r,
    "closed-form CT expansion": lambda i, M, D: ct_fexp(2, i["t"], M, D),
    "Laurent product CT": lambda i, M, D: at_order(lambda W: ct_laurent(2, i["t"], W, D), M),
}, _T01)

# -- quadratic transformations -----------------------------------------------


def _rtf_a(i, M, D):
    t = i["t"]
    a = Q(1, -1) * t
    s = qsum(M, D, mono(plus, lambda k: k * (k + 1), t),
             den=both(grow(Q(2), 2), grow(a, 2)))
    return mul(poch(PochhammerSpec(a, 2), M, D), s)


def _rtf_b(i, M, D):
    t = i["t"]
    a = Q(2, -1) * t
    s = qsum(M, D, mono(plus, lambda k: k * k, t), den=both(grow(Q(2), 2), grow(a, 2)))
    return mul(poch(PochhammerSpec(a, 2), M, D), s)


def _rtf_c(i, M, D):
    r = sqrt_or_skip(i["t"])
    a = Q(F(1, 4)) * r
    s = qsum(M, D, mono(plus, lambda k: F(k * k, 4), r),
             den=both(grow(Q(F(1, 2)), F(1, 2)), grow(a, F(1, 2))))
    return mul(poch(PochhammerSpec(a, F(1, 2)), M, D), s)


_T012 = [{"t": ONE}, {"t": Q(1)}, {"t": Q(2)}]
entry("RTF_A", "R(t; q) = (-qt; q^2)_oo sum q^(k(k+1)) t^k / (q^2, -qt; q^2)_k",
      {"R(t;q)": _r, "base q^2 form": _rtf_a}, _T012)
entry("RTF_B", "R(t; q) = (-q^2 t; q^2)_oo sum q^(k^2) t^k / (q^2, -q^2 t; q^2)_k",
      {"R(t;q)": _r, "base q^2 form": _rtf_b}, _T012)
entry("RTF_C", "R(t; q) = (q^(1/4) t^(1/2); q^(1/2))_oo sum q^(k^2/4) t^(k/2) / (q^(1/2), q^(1/4) t^(1/2); q^(1/2))_k",
      {"R(t;q)": _r, "base q^(1/2) form": _rtf_c},
      _T012 + [{"t": Q(F(1, 2))}, {"t": Q(1, -1)}],
      note="t^(1/2) is the principal root; t = -q has none and is skipped")

# -- the six specializations at t = 1 and t = q ------------------------------


def _neg_q_factors(mult, offset):
    # (-q; -q)_n = prod_{i=1..n} (1 - (-1)^i q^i)
    def new(k):
        old = 0 if k == 0 else mult * (k - 1) + offset
        return [Monomial((-1) ** j, F(j)) for j in range(old + 1, mult * k + offset + 1)]
    return new


entry("RM20_1", "G(q) = (-q; q^2)_oo sum q^(k(k+1)) / (-q; -q)_(2k)", {
    "G(q)": lambda i, M, D: S("G")(M, D),
    "rhs": lambda i, M, D: mul(poch(PochhammerSpec(Q(1, -1), 2), M, D),
                               qsum(M, D, mono(plus, lambda k: k * (k + 1)),
                                    den=_neg_q_factors(2, 0))),
})
entry("RM20_2", "G(q) = (-q^2; q^2)_oo sum q^(k^2) / (q^4; q^4)_k", {
    "G(q)": lambda i, M, D: S("G")(M, D),
    "rhs": lambda i, M, D: mul(poch(PochhammerSpec(Q(2, -1), 2), M, D),
                               qsum(M, D, mono(plus, lambda k: k * k), den=grow(Q(4), 4))),
})
entry("RM20_3", "G(q) = (q^(1/4); q^(1/2))_oo sum q^(k^2/4) / (q^(1/4); q^(1/4))_(2k)", {
    "G(q)": lambda i, M, D: S("G")(M, D),
    "rhs": lambda i, M, D: mul(poch(PochhammerSpec(Q(F(1, 4)), F(1, 2)), M, D),
                               qsum(M, D, mono(plus, lambda k: F(k * k, 4)),
                                    den=grow(Q(F(1, 4)), F(1, 4), 2))),
})
entry("RM20_4", "H(q) = (-q^2; q^2)_oo sum q^(k(k+2)) / (q^4; q^4)_k", {
    "H(q)": lambda i, M, D: S("H")(M, D),
    "rhs": lambda i, M, D: mul(poch(PochhammerSpec(Q(2, -1), 2), M, D),
                               qsum(M, D, mono(plus, lambda k: k * (k + 2)), den=grow(Q(4), 4))),
})
entry("RM20_5", "H(q) = (-q; q^2)_oo sum q^(k(k+1)) / (-q; -q)_(2k+1)", {
    "H(q)": lambda i, M, D: S("H")(M, D),
    "rhs": lambda i, M, D: mul(poch(PochhammerSpec(Q(1, -1), 2), M, D),
                               qsum(M, D, mono(plus, lambda k: k * (k + 1)),
                                    den=_neg_q_factors(2, 1))),
})
entry("RM20_6", "H(q) = (q^(1/4); q^(1/2))_oo sum q^(k(k+2)/4) / (q^(1/4); q^(1/4))_(2k+1)", {
    "H(q)": lambda i, M, D: S("H")(M, D),
    "rhs": lambda i, M, D: mul(poch(PochhammerSpec(Q(F(1, 4)), F(1, 2)), M, D),
                               qsum(M, D, mono(plus, lambda k: F(k * (k + 2), 4)),
                                    den=grow(Q(F(1, 4)), F(1, 4), 2, 1))),
})

# -- auxiliary series A, B ---------------------------------------------------


def _half(name: str, sign: int, shift: int):
    """``(X(q) +- X(-q)) / (2 q^shift)`` with exact division."""
    def build(M, D):
        W = M + shift * D
        x = S(name)(W, D)
        y = S(name, 1, True)(W, D)
        s = qs_add(x, y) if sign > 0 else qs_sub(x, y)
        s = qs_div_exact_int(s, 2)
        return qs_mul_monomial(s, Q(-shift)).ordinary().truncate(M)
    return build


def _q4q8(M, D):
    return poch(PochhammerSpec(Q(4), 8), M, D)


def _mq2q2(M, D):
    return poch(PochhammerSpec(Q(2, -1), 2), M, D)


entry("GHIJ_1", "G(-q^4) = (q^4; q^8)_oo (B(q) + B(-q)) / 2", {
    "G(-q^4)": lambda i, M, D: S("G", 4, True)(M, D),
    "rhs": lambda i, M, D: mul(_q4q8(M, D), _half("B", 1, 0)(M, D)),
})
entry("GHIJ_2", "G(q) = (-q^2; q^2)_oo A(q)", {
    "G(q)": lambda i, M, D: S("G")(M, D),
    "rhs": lambda i, M, D: mul(_mq2q2(M, D), S("A")(M, D)),
})
entry("GHIJ_3", "G(q^16) = (q^4; q^8)_oo (A(q) + A(-q)) / 2", {
    "G(q^16)": lambda i, M, D: S("G", 16)(M, D),
    "rhs": lambda i, M, D: mul(_q4q8(M, D), _half("A", 1, 0)(M, D)),
})
entry("GHIJ_4", "H(q) = (-q^2; q^2)_oo B(q)", {
    "H(q)": lambda i, M, D: S("H")(M, D),
    "rhs": lambda i, M, D: mul(_mq2q2(M, D), S("B")(M, D)),
})
entry("GHIJ_5", "H(-q^4) = (q^4; q^8)_oo (A(q) - A(-q)) / (2q)", {
    "H(-q^4)": lambda i, M, D: S("H", 4, True)(M, D),
    "rhs": lambda i, M, D: mul(_q4q8(M, D), _half("A", -1, 1)(M, D)),
})
entry("GHIJ_6", "H(q^16) = (q^4; q^8)_oo (B(q) - B(-q)) / (2q^3)", {
    "H(q^16)": lambda i, M, D: S("H", 16)(M, D),
    "rhs": lambda i, M, D: mul(_q4q8(M, D), _half("B", -1, 3)(M, D)),
})

# -- theta even/odd parts ----------------------------------------------------


def _quad_laurent(M, D, a2, a1, sign, idx_mul, idx_add=0):
    """``sum_k sign(k) q^(a2 k^2 + a1 k) z^(idx_mul k + idx_add)`` over all integers k."""
    expo = lambda k: F(a2 * k * k + a1 * k)
    v = round(-F(a1) / (2 * a2))
    coeffs = {}
    for direction in (1, -1):
        k = v if direction == 1 else v - 1
        while expo(k) * D <= M or expo(k + direction) <= expo(k):
            if expo(k) * D <= M:
                coeffs[idx_mul * k + idx_add] = QSeries({int(expo(k) * D): sign(k)}, M, D)
            k += direction
    piece = Quadratic(F(a2 * D), F(a1 * D), 0).stretch(idx_mul).reindex(-idx_add)
    return FormalSeries(coeffs, M, D, "z", min(coeffs), max(coeffs), True, Bound([piece]))


def _theta_pm(M, D, sign):
    a = theta_laurent(False, 1, M, D)
    b = theta_laurent(False, 1, M, D, scale=Monomial(-1))
    s = fs_add(a, b) if sign > 0 else fs_add(a, fs_neg(b))
    return fs_div_exact_int(s, 2)


def _z_times(s: FormalSeries) -> FormalSeries:
    return fs_mul(FormalSeries.monomial(1, s.order, s.denom, s.var), s)


entry("THETA_SPLIT_EVEN", "(theta(z;q) + theta(-z;q))/2 = sum q^(k(2k-1)) z^(2k) = theta(-q z^2; q^4)", {
    "(theta(z)+theta(-z))/2": lambda i, M, D: _theta_pm(M, D, 1),
    "sum q^(k(2k-1))z^(2k)": lambda i, M, D: _quad_laurent(M, D, 2, -1, plus, 2),
    "theta(-qz^2;q^4)": lambda i, M, D: theta_laurent(False, 4, M, D, scale=Q(1, -1), power=2),
})
entry("THETA_SPLIT_ODD", "(theta(z;q) - theta(-z;q))/2 = -sum q^(k(2k+1)) z^(2k+1) = -z theta(-q^3 z^2; q^4)", {
    "(theta(z)-theta(-z))/2": lambda i, M, D: _theta_pm(M, D, -1),
    "-sum q^(k(2k+1))z^(2k+1)": lambda i, M, D: _quad_laurent(M, D, 2, 1, lambda k: -1, 2, 1),
    "-z theta(-q^3z^2;q^4)": lambda i, M, D: fs_neg(_z_times(
        theta_laurent(False, 4, M, D, scale=Q(3, -1), power=2))),
})
entry("THETA_SPLIT_COMBINED", "theta(z; q) = theta(-q z^2; q^4) - z theta(-q^3 z^2; q^4)", {
    "theta(z;q)": lambda i, M, D: theta_laurent(False, 1, M, D),
    "rhs": lambda i, M, D: fs_add(
        theta_laurent(False, 4, M, D, scale=Q(1, -1), power=2),
        fs_neg(_z_times(theta_laurent(False, 4, M, D, scale=Q(3, -1), power=2)))),
})

# -- product-side theta rewriting --------------------------------------------

entry("TILDE_G_THETA", "1/(q, q^4; q^5)_oo = (q^8, q^12; q^20)_oo theta(-q; q^10) / (q^2; q^2)_oo", {
    "1/(q,q^4;q^5)": lambda i, M, D: S("tildeG")(M, D),
    "1/(q,q^4,q^6,q^9;q^10)": lambda i, M, D: prod_inv([1, 4, 6, 9], 10, M, D),
    "(-q,-q^9;q^10)/((q^4,q^6;q^10)(q^2,q^18;q^20))": lambda i, M, D: mul(
        prod([Q(1, -1), Q(9, -1)], 10, M, D), prod_inv([4, 6], 10, M, D),
        prod_inv([2, 18], 20, M, D)),
    "theta form": lambda i, M, D: mul(prod([8, 12], 20, M, D),
                                      theta_at_monomial(Q(1, -1), 10, M, D),
                                      prod_inv([2], 2, M, D)),
})
entry("TILDE_H_THETA", "1/(q^2, q^3; q^5)_oo = (q^4, q^16; q^20)_oo theta(-q^3; q^10) / (q^2; q^2)_oo", {
    "1/(q^2,q^3;q^5)": lambda i, M, D: S("tildeH")(M, D),
    "theta form": lambda i, M, D: mul(prod([4, 16], 20, M, D),
                                      theta_at_monomial(Q(3, -1), 10, M, D),
                                      prod_inv([2], 2, M, D)),
})
entry("TILDE_PRODUCT_REWRITE", "(-q^12, -q^28; q^40)_oo = (q^24, q^56; q^80)_oo / (q^12, q^28; q^40)_oo", {
    "(-q^12,-q^28;q^40)": lambda i, M, D: prod([Q(12, -1), Q(28, -1)], 40, M, D),
    "(q^24,q^56;q^80)/(q^12,q^28;q^40)": lambda i, M, D: mul(prod([24, 56], 80, M, D),
                                                           prod_inv([12, 28], 40, M, D)),
    "(q^16,q^24;q^40)/((q^12,q^28;q^40)(q^16,q^64;q^80))": lambda i, M, D: mul(
        prod([16, 24], 40, M, D), prod_inv([12, 28], 40, M, D), prod_inv([16, 64], 80, M, D)),
})
entry("TILDE_G_EVEN", "(G~(q) + G~(-q))/2 = (q^8; q^8)_oo / (q^2; q^2)_oo G~(q^16) for G~ = 1/(q, q^4; q^5)_oo", {
    "(G~(q)+G~(-q))/2": lambda i, M, D: _half("tildeG", 1, 0)(M, D),
    "theta even part": lambda i, M, D: mul(prod([8, 12], 20, M, D),
                                           prod([Q(12, -1), Q(28, -1), Q(40)], 40, M, D),
                                           prod_inv([2], 2, M, D)),
    "(q^8;q^8)/((q^2;q^2)(q^16,q^64;q^80))": lambda i, M, D: mul(
        prod([8], 8, M, D), prod_inv([2], 2, M, D), prod_inv([16, 64], 80, M, D)),
    "(q^8;q^8)/(q^2;q^2) G~(q^16)": lambda i, M, D: mul(S("F")(M, D), S("tildeG", 16)(M, D)),
})

# -- companion constant term and its transformations -------------------------


def _rct_direct(t, M, D):
    def a_k(k, order):
        out = QSeries.one(order, D)
        for j in range(1, k + 1):
            out = qs_div_binomial(out, Q(j))
        return qs_mul_monomial(out, Q(F(k * (k - 1), 2))).truncate(order)
    return ct_direct(1, F(1), Q(1, -1) * t, a_k, M, D)


entry("RCT", "R(t; q) = CT theta(1/z; q) (qtz; q)_oo", {
    "R(t;q) sum": _r,
    "closed-form CT expansion": lambda i, M, D: _rct_direct(i["t"], M, D),
    "Laurent product CT": lambda i, M, D: ensure(lambda W: ct_companion(i["t"], W, D), M),
}, [{"t": ONE}, {"t": Q(1)}, {"t": Q(-1)}])

_TX = [{"t": ONE}, {"t": Q(1)}, {"t": Q(2)}, {"t": Q(1, -1)}]


def _rx_a(i, M, D):
    t = i["t"]
    a = Q(1, -1) * t
    s = qsum(M, D, mono(alt, lambda k: 3 * k * k, t, lambda k: 2 * k),
             den=both(grow(Q(2), 2), grow(a, 1, 2)))
    return mul(poch(PochhammerSpec(a), M, D), s)


def _rx_bc(i, M, D, shift):
    t = i["t"]
    a = Q(F(shift, 2)) * t
    expo = (lambda k: F(k * (3 * k - 1), 4)) if shift == 1 else (lambda k: F(k * (3 * k + 1), 4))
    s = qsum(M, D, mono(plus, expo, t), den=both(grow(Q(F(1, 2)), F(1, 2)), grow(a, 1)))
    return mul(poch(PochhammerSpec(a), M, D), s)


entry("RX_A", "R(t; q) = (-qt; q)_oo sum (-1)^k q^(3k^2) t^(2k) / ((q^2; q^2)_k (-qt; q)_(2k))",
      {"R(t;q)": _r, "rhs": _rx_a}, _TX)
entry("RX_B", "R(t; q) = (q^(1/2) t; q)_oo sum q^(k(3k-1)/4) t^k / ((q^(1/2); q^(1/2))_k (q^(1/2) t; q)_k)",
      {"R(t;q)": _r, "rhs": lambda i, M, D: _rx_bc(i, M, D, 1)}, _TX)
entry("RX_C", "R(t; q) = (q^(3/2) t; q)_oo sum q^(k(3k+1)/4) t^k / ((q^(1/2); q^(1/2))_k (q^(3/2) t; q)_k)",
      {"R(t;q)": _r, "rhs": lambda i, M, D: _rx_bc(i, M, D, 3),
       "base q^(1/2) form (B)": lambda i, M, D: _rx_bc(i, M, D, 1)}, _TX)


def _half_q_sum(expo, extra: int, M, D):
    """``(q^(1/2); q)_oo sum q^expo(k) / ((q^(1/2); q^(1/2))_k (q^(1/2); q)_(k+extra))``."""
    s = qsum(M, D, mono(plus, expo),
             den=both(grow(Q(F(1, 2)), F(1, 2)), grow(Q(F(1, 2)), 1, 1, extra)))
    return mul(poch(PochhammerSpec(Q(F(1, 2))), M, D), s)


def _mq_sum(expo, extra: int, M, D):
    """``(-q; q)_oo sum (-1)^k q^expo(k) / ((q^4; q^4)_k (-q; q^2)_(k+extra))``."""
    s = qsum(M, D, mono(alt, expo), den=both(grow(Q(4), 4), grow(Q(1, -1), 2, 1, extra)))
    return mul(poch(PochhammerSpec(Q(1, -1)), M, D), s)


_G = lambda i, M, D: S("G")(M, D)
_H = lambda i, M, D: S("H")(M, D)
entry("RAA", "G(q) = (-q; q)_oo sum (-1)^k q^(3k^2) / ((q^4; q^4)_k (-q; q^2)_k)",
      {"G(q)": _G, "rhs": lambda i, M, D: _mq_sum(lambda k: 3 * k * k, 0, M, D)})
entry("RAB", "G(q) = (q^(1/2); q)_oo sum q^(k(3k-1)/4) / ((q^(1/2); q^(1/2))_k (q^(1/2); q)_k)",
      {"G(q)": _G, "rhs": lambda i, M, D: _half_q_sum(lambda k: F(k * (3 * k - 1), 4), 0, M, D)})
entry("RAC", "G(q) = (q^(1/2); q)_oo sum q^(k(3k+1)/4) / ((q^(1/2); q^(1/2))_k (q^(1/2); q)_(k+1))",
      {"G(q)": _G, "rhs": lambda i, M, D: _half_q_sum(lambda k: F(k * (3 * k + 1), 4), 1, M, D)})
entry("RAD", "H(q) = (-q; q)_oo sum (-1)^k q^(k(3k+2)) / ((q^4; q^4)_k (-q; q^2)_(k+1))",
      {"H(q)": _H, "rhs": lambda i, M, D: _mq_sum(lambda k: k * (3 * k + 2), 1, M, D)})
entry("RAE", "H(q) = (q^(1/2); q)_oo sum q^(3k(k+1)/4) / ((q^(1/2); q^(1/2))_k (q^(1/2); q)_(k+1))",
      {"H(q)": _H, "rhs": lambda i, M, D: _half_q_sum(lambda k: F(3 * k * (k + 1), 4), 1, M, D)})
entry("RAF", "H(q) = (q^(1/2); q)_oo sum q^(k(3k+5)/4) / ((q^(1/2); q^(1/2))_k (q^(1/2); q)_(k+2))",
      {"H(q)": _H, "rhs": lambda i, M, D: _half_q_sum(lambda k: F(k * (3 * k + 5), 4), 2, M, D)})
entry("RH", "H(q) = (-q; q)_oo sum (-1)^k q^(k(3k-2)) / ((q^4; q^4)_k (-q; q^2)_k)",
      {"H(q)": _H, "rhs": lambda i, M, D: _mq_sum(lambda k: k * (3 * k - 2), 0, M, D)},
      note="summand exponent k(3k-2); the variant 3k(k-2) fails at q^1")

# -- constant-term chain for the last identity -------------------------------


def _z_poch(M, D):
    """``(z; q)_oo`` as a Laurent series."""
    return euler_Eq_laurent(Monomial(-1), 1, M, D)


def _ct_chain_1(M, D):
    one_z = FormalSeries({0: QSeries.one(M, D), 1: QSeries.one(M, D)}, M, D)
    return fs_constant_term(fs_mul(fs_mul(one_z, _z_poch(M, D)), theta_laurent(True, 1, M, D)))


def _ct_chain_0(M, D):
    # CT (z^2; q^2)_oo theta(1/z; q) / (-qz; q)_oo
    z2 = fs_compose_power(euler_Eq_laurent(Monomial(-1), 2, M, D), ONE, 2)
    rest = fs_mul(theta_laurent(True, 1, M, D), euler_inv_laurent(Q(1, -1), 1, M, D))
    return fs_constant_term(fs_mul(z2, rest))


def _ct_chain_2(M, D):
    th = fs_add(theta_laurent(True, 1, M, D), fs_neg(theta_laurent(True, 1, M, D, scale=Q(1))))
    return fs_constant_term(fs_mul(_z_poch(M, D), th))


def _ct_chain_shift(M, D):
    # CT (z;q) theta(1/z;q) - CT of (z;q) theta(q/z;q) after z -> qz
    a = fs_mul(_z_poch(M, D), theta_laurent(True, 1, M, D))
    b = fs_mul(_z_poch(M, D), theta_laurent(True, 1, M, D, scale=Q(1)))
    return qs_sub(fs_constant_term(a), fs_constant_term(fs_shift_var(b, Q(1))))


def _ct_chain_3(M, D):
    qz = euler_Eq_laurent(Q(1, -1), 1, M, D)
    diff = fs_add(_z_poch(M, D), fs_neg(qz))
    return fs_constant_term(fs_mul(diff, theta_laurent(True, 1, M, D)))


entry("RH_CT_CHAIN", "CT (1+z)(z; q)_oo theta(1/z; q) = R(1/q; q) - R(1; q) = sum q^(k^2+k) / (q; q)_k", {
    "CT (z^2;q^2) theta(1/z;q)/(-qz;q)": lambda i, M, D: ensure(lambda W: _ct_chain_0(W, D), M),
    "CT (1+z)(z;q) theta(1/z;q)": lambda i, M, D: ensure(lambda W: _ct_chain_1(W, D), M),
    "CT (z;q)(theta(1/z;q)-theta(q/z;q))": lambda i, M, D: ensure(lambda W: _ct_chain_2(W, D), M),
    "same, second term shifted z -> qz": lambda i, M, D: ensure(lambda W: _ct_chain_shift(W, D), M),
    "CT ((z;q)-(qz;q)) theta(1/z;q)": lambda i, M, D: ensure(lambda W: _ct_chain_3(W, D), M),
    "R(1/q;q) - R(1;q)": lambda i, M, D: qs_sub(R_sum(Q(-1), M, D), R_sum(ONE, M, D)),
    "sum q^(k^2+k)/(q;q)_k": lambda i, M, D: qsum(M, D, mono(plus, lambda k: k * k + k),
                                                  den=grow(Q(1), 1)),
})


def _quasi_lhs(p: Fraction, M, D):
    return _z_times(theta_laurent(True, p, M, D))


def _quasi_rhs(p: Fraction, M, D):
    return fs_neg(theta_laurent(True, p, M, D, scale=Q(p)))


entry("QUASIPERIODICITY", "z theta(1/z; p) = -theta(p/z; p)", {
    "z theta(1/z;p)": lambda i, M, D: _quasi_lhs(i["p"].power, M, D),
    "-theta(p/z;p)": lambda i, M, D: _quasi_rhs(i["p"].power, M, D),
}, [{"p": Q(1)}, {"p": Q(2)}, {"p": Q(F(1, 2))}])


def _ct_shift_pair(shifted: bool, M, D):
    one_z = FormalSeries({0: QSeries.one(M, D), 1: QSeries.one(M, D)}, M, D)
    s = fs_mul(fs_mul(one_z, _z_poch(M, D)), theta_laurent(True, 1, M, D))
    return fs_constant_term(fs_shift_var(s, Q(1)) if shifted else s)


entry("CT_SHIFT_INVARIANCE", "CT f(z) = CT f(qz) for f = (1+z)(z; q)_oo theta(1/z; q)", {
    "CT f(z)": lambda i, M, D: _ct_shift_pair(False, M, D),
    "CT f(qz)": lambda i, M, D: ensure(lambda W: _ct_shift_pair(True, W, D), M),
})

# -- operator calculus -------------------------------------------------------


def _eq_trunc(t: Monomial, y: Monomial, K: int, M: int, D: int) -> FormalSeries:
    """``e_q(tx)`` in x, expanded far enough that ``e_q(y delta_x)`` is certified to ``x^K``."""
    et, ey = t.units(D), y.units(D)
    deg = (M + K * ey) // max(1, et + ey) + 2
    return euler_inv_laurent(t, 1, M, D, "x", degree=deg)


entry("DXE", "e_q(y delta_x) e_q(tx) = e_q(tx) e_q(ty), to x-degree 12", {
    "operator side": lambda i, M, D: fs_apply_eq_operator(
        i["y"], _eq_trunc(i["t"], i["y"], DXE_DEGREE, M, D), degree=DXE_DEGREE),
    "e_q(tx) e_q(ty)": lambda i, M, D: fs_scale(
        euler_inv_laurent(i["t"], 1, M, D, "x", degree=DXE_DEGREE),
        poch_inv(PochhammerSpec(i["t"] * i["y"]), M, D)),
}, [{"t": Q(1), "y": Q(1)}, {"t": Q(1), "y": Q(2)}])


def _hk_operator(x: Monomial, y: Monomial, kmax: int, M: int, D: int) -> list[QSeries]:
    out = []
    inv = QSeries.one(M, D)
    for k in range(kmax + 1):
        if k:
            inv = qs_div_binomial(inv, Q(k))
        s = FormalSeries({k: inv}, M, D, "x", k, k)
        out.append(fs_evaluate(fs_apply_eq_operator(y, s), x).truncate(M))
    return out


_XY = [{"x": Q(1), "y": Q(1)}, {"x": Q(1), "y": Q(2)}, {"x": ONE, "y": Q(1)},
       {"x": Q(1), "y": Q(F(3, 2))}, {"x": Q(2), "y": Q(1, -1)}]

entry("DXH", "e_q(y delta_x) x^k/(q; q)_k = H_k(x, y) for k <= 6", {
    "operator route": lambda i, M, D: fs_from_list(_hk_operator(i["x"], i["y"], HK_MAX, M, D)),
    "generating function route": lambda i, M, D: fs_from_list(
        hk_family(i["x"], i["y"], HK_MAX, M, D)),
}, _XY)


def _rhi_lhs(x, y, M, D):
    K = 1
    while K * (K + 1) // 2 * D <= M:
        K += 1
    hs = hk_family(x, y, K, M, D)
    acc = QSeries.zero(M, D)
    for k, h in enumerate(hs):
        acc = qs_add(acc, qs_mul_monomial(h, Q(F(k * (k + 1), 2))).truncate(M))
    return acc


def _rhi_rhs(x, y, M, D):
    a = Q(1, -1) * x
    s = qsum(M, D, mono(plus, lambda k: F(k * (k + 1), 2), y),
             den=both(grow(a, 1), grow(Q(1), 1)))
    return mul(poch(PochhammerSpec(a), M, D), s)


entry("RHI", "sum q^(k(k+1)/2) H_k(x, y) = (-qx; q)_oo sum q^(k(k+1)/2) y^k / (-qx, q; q)_k, symmetric in x, y", {
    "sum q^(k(k+1)/2) H_k(x,y)": lambda i, M, D: _rhi_lhs(i["x"], i["y"], M, D),
    "rhs(x, y)": lambda i, M, D: _rhi_rhs(i["x"], i["y"], M, D),
    "rhs(y, x)": lambda i, M, D: _rhi_rhs(i["y"], i["x"], M, D),
}, [{"x": ONE, "y": Q(1)}, {"x": Q(1), "y": Q(1)}, {"x": Q(1), "y": Q(2)},
    {"x": ONE, "y": Q(1, -1)}, {"x": Q(F(1, 2)), "y": Q(1)}])

HK_NEG_MAX = 11


def _hk_sqrt_closed(x, M, D):
    out = []
    inv = QSeries.one(M, D)
    for k in range(HK_MAX + 1):
        if k:
            inv = qs_div_binomial(inv, Q(F(k, 2)))
        out.append(qs_mul_monomial(inv, x ** k).truncate(M))
    return fs_from_list(out)


def _hk_neg_closed(x, M, D):
    out = []
    inv = QSeries.one(M, D)
    for k in range(HK_NEG_MAX + 1):
        if k % 2:
            out.append(QSeries.zero(M, D))
            continue
        if k:
            inv = qs_div_binomial(inv, Q(k))
        out.append(qs_mul_monomial(inv, x ** k).truncate(M))
    return fs_from_list(out)


entry("HK_SQRT", "H_k(x, x q^(1/2)) = x^k / (q^(1/2); q^(1/2))_k", {
    "H_k(x, xq^(1/2))": lambda i, M, D: fs_from_list(
        hk_family(i["x"], i["x"] * Q(F(1, 2)), HK_MAX, M, D)),
    "x^k/(q^(1/2);q^(1/2))_k": lambda i, M, D: _hk_sqrt_closed(i["x"], M, D),
}, [{"x": ONE}, {"x": Q(1)}])
entry("HK_NEG", "H_(2k)(x, -x) = x^(2k) / (q^2; q^2)_k and H_(2k+1)(x, -x) = 0", {
    "H_k(x, -x)": lambda i, M, D: fs_from_list(hk_family(i["x"], -i["x"], HK_NEG_MAX, M, D)),
    "closed form": lambda i, M, D: _hk_neg_closed(i["x"], M, D),
}, [{"x": ONE}, {"x": Q(1)}], note="odd index vanishes at (x, -x), not at (x, x)")


def _qt_lhs(x, M, D):
    return qsum(M, D, mono(plus, lambda k: k * (k + 1), x), den=grow(Q(1), 1))


def _qt_ab(x, M, D, shift):
    a = Q(shift, -1) * x
    expo = (lambda k: k * (k + 2)) if shift == 2 else (lambda k: k * (k + 1))
    s = qsum(M, D, mono(plus, expo, x), den=both(grow(a, 2), grow(Q(2), 2)))
    return mul(poch(PochhammerSpec(a, 2), M, D), s)


def _qt_c_lhs(x, M, D):
    return qsum(M, D, mono(plus, lambda k: k * (2 * k + 1), x, lambda k: 2 * k),
                den=grow(Q(2), 2))


def _qt_c_rhs(x, M, D):
    a = Q(1, -1) * x
    s = qsum(M, D, mono(alt, lambda k: F(k * (k + 1), 2), x),
             den=both(grow(a, 1), grow(Q(1), 1)))
    return mul(poch(PochhammerSpec(a), M, D), s)


_X01 = [{"x": ONE}, {"x": Q(1)}]
entry("QT_A", "sum q^(k(k+1)) x^k/(q; q)_k = (-q^2 x; q^2)_oo sum q^(k(k+2)) x^k / (-q^2 x, q^2; q^2)_k", {
    "lhs": lambda i, M, D: _qt_lhs(i["x"], M, D),
    "rhs": lambda i, M, D: _qt_ab(i["x"], M, D, 2),
}, _X01)
entry("QT_B", "sum q^(k(k+1)) x^k/(q; q)_k = (-q^3 x; q^2)_oo sum q^(k(k+1)) x^k / (-q^3 x, q^2; q^2)_k", {
    "lhs": lambda i, M, D: _qt_lhs(i["x"], M, D),
    "rhs": lambda i, M, D: _qt_ab(i["x"], M, D, 3),
}, _X01)
entry("QT_C", "sum q^(k(2k+1)) x^(2k)/(q^2; q^2)_k = (-qx; q)_oo sum (-1)^k q^(k(k+1)/2) x^k / (-qx, q; q)_k", {
    "lhs": lambda i, M, D: _qt_c_lhs(i["x"], M, D),
    "rhs": lambda i, M, D: _qt_c_rhs(i["x"], M, D),
}, _X01, note="left summand exponent k(2k+1); the variant 2k(2k+1) fails at q^3")


def _contig_lhs(t, k, M, D):
    # (q^(3/2) t; q)_oo t^k / (q^(3/2) t; q)_k = (q^(3/2+k) t; q)_oo t^k
    return qs_mul_monomial(poch(PochhammerSpec(Q(F(3, 2) + k) * t), M, D), t ** k).truncate(M)


def _contig_rhs(t, k, M, D):
    a = Q(F(1, 2)) * t
    p = poch(PochhammerSpec(a), M, D)
    first = qs_mul_monomial(poch_inv(PochhammerSpec(a, 1, k), M, D), t ** k).truncate(M)
    second = qs_mul_monomial(poch_inv(PochhammerSpec(a, 1, k + 1), M, D),
                             Q(k + F(1, 2)) * t ** (k + 1)).truncate(M)
    return mul(p, qs_add(first, second))


entry("CONTIG_RC", "(q^(3/2) t; q)_oo t^k/(q^(3/2) t; q)_k = (q^(1/2) t; q)_oo (t^k/(q^(1/2) t; q)_k + q^(k+1/2) t^(k+1)/(q^(1/2) t; q)_(k+1))", {
    "lhs": lambda i, M, D: _contig_lhs(i["t"], i["k"], M, D),
    "rhs": lambda i, M, D: _contig_rhs(i["t"], i["k"], M, D),
}, [{"t": t, "k": k} for t in (ONE, Q(1)) for k in range(4)])


# ---------------------------------------------------------------------------
# lookup


def registry() -> list[IdentitySpec]:
    return list(REGISTRY)


def lookup(id: str) -> IdentitySpec:
    for spec in REGISTRY:
        if spec.id == id:
            return spec
    raise UnknownIdentityError(f"unknown identity {id!r}")


def corrupted(id: str = "RR_MAIN_G", exponent: Fraction = F(7), delta: int = 1) -> IdentitySpec:
    """Copy of an entry whose last member has one coefficient perturbed (harness self-test)."""
    spec = lookup(id)
    last = spec.members[-1]

    def bad(inst, M, D, _f=last.build):
        s = _f(inst, M, D)
        return qs_add(s, QSeries({int(exponent * D): delta}, s.order, D))

    members = spec.members[:-1] + (Member(last.label + " (perturbed)", bad),)
    return IdentitySpec(spec.id + "_CORRUPTED", spec.anchor, members, spec.instantiations,
                        spec.denom, spec.default_order, "deliberately perturbed fixture")
