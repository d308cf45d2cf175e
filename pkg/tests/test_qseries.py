from fractions import Fraction as F

import numpy as np
import pytest

from qrr.builders import SeriesBuilder, build_series
from qrr.errors import (
    BeyondTruncationError,
    DenominatorError,
    IntegralityError,
    NegativeExponentError,
    NonInvertibleError,
    SignTwistError,
)
from qrr.qseries import (
    ONE,
    Monomial,
    QSeries,
    qs_add,
    qs_coeff,
    qs_div_exact_int,
    qs_equal_to_order,
    qs_even_odd_split,
    qs_invert,
    qs_mul,
    qs_mul_monomial,
    qs_negate_q,
    qs_scale_exponents,
    qs_sub,
)

from oracles import padd, pmul, poch_inv, series_to_dict

D = 4
Q = Monomial.q


def S(terms, order, denom=D):
    """Series from ``{q-power: coeff}`` with q-powers as numbers."""
    return QSeries({int(F(e) * denom): c for e, c in terms.items()}, int(order * denom), denom)


def G(M):
    return build_series(SeriesBuilder("G"), M * D, D)


def H(M):
    return build_series(SeriesBuilder("H"), M * D, D)


def coeffs(s, upto):
    return [s.coeff(n * s.denom) for n in range(upto + 1)]


def test_add_cancels_constants():
    s = qs_add(S({0: 1, 1: 1}, 5), S({0: -1, 2: 1}, 5))
    assert s.coeffs == {4: 1, 8: 1}


def test_add_zero_takes_min_order():
    s = S({0: 1, 1: 3}, 10)
    out = qs_add(s, QSeries.zero(12 * D, D))
    assert out.order == 10 * D and out.coeffs == s.coeffs
    assert qs_add(s, QSeries.zero(3 * D, D)).order == 3 * D


def test_add_G_H():
    s = qs_add(G(6), H(6))
    assert coeffs(s, 2) == [2, 1, 2]


def test_mul_inverse_pair_truncates():
    s = qs_mul(S({0: 1, 1: -1}, 3), S({0: 1, 1: 1, 2: 1, 3: 1}, 3))
    assert s.coeffs == {0: 1}


def test_mul_q_poch_3():
    s = S({0: 1}, 10)
    for j in (1, 2, 3):
        s = qs_mul(s, S({0: 1, j: -1}, 10))
    assert coeffs(s, 6) == [1, -1, -1, 0, 1, 1, -1]


def test_mul_quarter_powers():
    a = QSeries.monomial(Q(F(1, 4)), 8, D)
    assert qs_mul(a, a).coeffs == {2: 1}


def test_invert_examples():
    assert coeffs(qs_invert(S({0: 1, 1: -1}, 3)), 3) == [1, 1, 1, 1]
    assert qs_invert(QSeries.one(20, D)).coeffs == {0: 1}
    s = qs_invert(S({0: 1, 1: -1, 2: -1, 3: 1}, 4))
    assert coeffs(s, 4) == [1, 1, 2, 2, 3]


def test_invert_rejects_non_units():
    with pytest.raises(NonInvertibleError):
        qs_invert(S({1: 1}, 4))
    with pytest.raises(NonInvertibleError):
        qs_invert(S({0: 2, 1: 1}, 4))


def test_scale_exponents():
    g16 = qs_scale_exponents(G(2), 16, 1)
    assert g16.coeff(16 * D) == 1
    s = S({0: 1, 1: 2, 3: -1}, 5)
    assert qs_scale_exponents(s, 1, 1) == s
    half = S({0: 1, F(1, 2): 1}, 2)
    assert qs_scale_exponents(half, 2, 1).coeffs == {0: 1, 4: 1}


def test_scale_exponents_needs_representable():
    s = S({F(1, 4): 1}, 2)
    with pytest.raises(DenominatorError):
        qs_scale_exponents(s, 1, 128)


def test_negate_q():
    assert qs_negate_q(S({0: 1, 1: 1, 2: 1}, 3)).coeffs == {0: 1, 4: -1, 8: 1}
    # B(q) = sum q^(k(k+2)) / (q^4; q^4)_k = 1 + q^3 + q^7 + q^8 + ... by direct expansion
    top = F(12)
    ref = {F(0): 1}
    for k in range(1, 4):
        ref = padd(ref, pmul({F(k * (k + 2)): 1}, poch_inv(1, 4, 4, k, top), top))
    b = build_series(SeriesBuilder("B"), 12 * D, D)
    assert series_to_dict(b) == ref
    assert coeffs(qs_negate_q(b), 8) == [1, 0, 0, -1, 0, 0, 0, -1, 1]
    with pytest.raises(SignTwistError):
        qs_negate_q(S({F(1, 2): 1}, 2))


def test_even_odd_split():
    ev, od = qs_even_odd_split(S({0: 1, 1: 1, 2: 1, 3: 1}, 3))
    assert ev.coeffs == {0: 1, 8: 1} and od.coeffs == {4: 1, 12: 1}
    e2, o2 = qs_even_odd_split(S({0: 1, 2: 5}, 4))
    assert e2.coeffs == {0: 1, 8: 5} and o2.is_zero
    _, odd = qs_even_odd_split(G(6))
    assert coeffs(odd, 6) == [0, 1, 0, 1, 0, 2, 0]


def test_div_exact_int():
    assert qs_div_exact_int(S({0: 2, 1: 2}, 2), 2).coeffs == {0: 1, 4: 1}
    assert qs_div_exact_int(QSeries.zero(8, D), 7).is_zero
    with pytest.raises(IntegralityError):
        qs_div_exact_int(S({0: 3}, 2), 2)


def test_div_exact_int_on_A_dissection():
    a = build_series(SeriesBuilder("A"), 12 * D, D)
    am = build_series(SeriesBuilder("A", negate=True), 12 * D, D)
    odd = qs_mul_monomial(qs_div_exact_int(qs_sub(a, am), 2), Q(-1)).ordinary()
    assert odd.coeff(0) == 1


def test_coeff():
    assert qs_coeff(S({0: 1, 1: 1}, 3), D) == 1
    assert G(10).coeff(4 * D) == 2
    assert H(10).coeff(D) == 0
    with pytest.raises(BeyondTruncationError):
        qs_coeff(S({0: 1}, 3), 3 * D + 1)


def test_equal_to_order():
    assert qs_equal_to_order(G(20), G(20))
    rep = qs_equal_to_order(G(2), H(2), 2 * D)
    assert not rep and rep.exponent == D and (rep.lhs, rep.rhs) == (1, 0)
    prod = build_series(SeriesBuilder("tildeG"), 50 * D, D)
    assert qs_equal_to_order(G(50), prod, 50 * D)
    with pytest.raises(BeyondTruncationError):
        qs_equal_to_order(G(2), G(3), 3 * D)


def test_negative_exponent_guard():
    with pytest.raises(NegativeExponentError):
        QSeries({-1: 1}, 4, D)
    s = QSeries({-1: 1}, 4, D, allows_negative=True)
    assert s.valuation == -1


def test_order_never_raised():
    with pytest.raises(BeyondTruncationError):
        S({0: 1}, 2).truncate(100)


def test_denominators_combine():
    a = QSeries({1: 1}, 8, 2)
    b = QSeries({1: 1}, 12, 3)
    s = qs_add(a, b)
    assert s.denom == 6 and s.coeffs == {2: 1, 3: 1}


def test_monomial_algebra():
    m = Q(F(3, 2), -2)
    assert (m * m) == Monomial(4, F(3))
    assert (-m).coeff == 2
    assert Q(2) ** -1 == Q(-2)
    with pytest.raises(NonInvertibleError):
        Monomial(2, F(1)) ** -1
    assert Q(3).sqrt() == Q(F(3, 2))
    with pytest.raises(ValueError):
        Q(1, -1).sqrt()


def test_matches_plain_polynomial_product():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = {F(int(e), 2): int(c) for e, c in zip(rng.integers(0, 30, 6), rng.integers(-5, 6, 6))}
        b = {F(int(e), 4): int(c) for e, c in zip(rng.integers(0, 60, 6), rng.integers(-5, 6, 6))}
        top = F(12)
        sa = QSeries({int(e * D): c for e, c in a.items()}, 12 * D, D)
        sb = QSeries({int(e * D): c for e, c in b.items()}, 12 * D, D)
        ref = pmul({e: c for e, c in series_to_dict(sa).items()},
                   {e: c for e, c in series_to_dict(sb).items()}, top)
        assert series_to_dict(qs_mul(sa, sb)) == ref


def test_big_coefficients_stay_exact():
    # (1 - 2^40 q)^-3 has coefficients far beyond int64
    s = S({0: 1, 1: -(1 << 40)}, 12)
    inv = qs_invert(qs_mul(qs_mul(s, s), s))
    k = 10
    assert inv.coeff(k * D) == (k + 1) * (k + 2) // 2 * (1 << (40 * k))
    assert qs_mul(inv, qs_mul(qs_mul(s, s), s)).coeffs == {0: 1}
