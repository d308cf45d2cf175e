from fractions import Fraction as F

import pytest

from qrr.errors import DivergentProductError, NormalizationRequiredError
from qrr.formal import FormalSeries, fs_equal_to_order, fs_evaluate, fs_mul
from qrr.qseries import ONE, Monomial, QSeries, qs_equal_to_order, qs_mul, qs_mul_binomial
from qrr.special import (
    PochhammerSpec,
    euler_Eq_laurent,
    euler_inv_laurent,
    hk_family,
    poch,
    poch_inv,
    poch_many_inv,
    q_exponentials,
    theta_at_monomial,
    theta_laurent,
)
from qrr.registry import _rps_rhs

from oracles import jacobi_sum, pmul, poch as o_poch, poch_inv as o_poch_inv, series_to_dict, trunc

D = 4
Q = Monomial.q


def coeffs(s, upto):
    return [s.coeff(n * s.denom) for n in range(upto + 1)]


def test_poch_examples():
    assert coeffs(poch(PochhammerSpec(Q(1), 1, 3), 6 * D, D), 6) == [1, -1, -1, 0, 1, 1, -1]
    assert poch(PochhammerSpec(Q(7, 3), 1, 0), 20, D).coeffs == {0: 1}
    assert coeffs(poch(PochhammerSpec(Q(1)), 5 * D, D), 5) == [1, -1, -1, 0, 0, 1]


@pytest.mark.parametrize("arg,step,n", [(Q(1), 1, None), (Q(F(1, 4), -1), F(1, 2), None),
                                        (Q(2, 3), 3, 5), (Q(1, -1), 2, 7), (Q(F(3, 4)), 1, None)])
def test_poch_matches_oracle(arg, step, n):
    top = F(25)
    s = poch(PochhammerSpec(arg, step, n), 25 * D, D)
    assert series_to_dict(s) == o_poch(arg.coeff, arg.power, step, n, top)
    inv = poch_inv(PochhammerSpec(arg, step, n), 25 * D, D)
    assert series_to_dict(inv) == o_poch_inv(arg.coeff, arg.power, step, n, top)


@pytest.mark.parametrize("k", [0, 1, 5, 12, 20])
def test_poch_step_recurrence(k):
    M = 60 * D
    a = Q(F(1, 2), -1)
    lhs = poch(PochhammerSpec(a, 1, k + 1), M, D)
    rhs = qs_mul_binomial(poch(PochhammerSpec(a, 1, k), M, D), a * Q(k))
    assert qs_equal_to_order(lhs, rhs, M)


def test_poch_infinite_needs_positive_order():
    with pytest.raises(DivergentProductError):
        poch(PochhammerSpec(ONE), 20, D)
    with pytest.raises(DivergentProductError):
        euler_inv_laurent(ONE, 1, 20, D)


def test_theta_examples():
    assert theta_at_monomial(ONE, 1, 20, D).is_zero
    t = theta_at_monomial(Q(1), 3, 4 * D, D)
    assert qs_equal_to_order(t, poch(PochhammerSpec(Q(1)), 4 * D, D), 4 * D)
    t10 = theta_at_monomial(Q(1, -1), 10, 10 * D, D)
    assert t10.coeff(0) == 1 and t10.coeff(D) == 1


def test_theta_normalizes_outside_range():
    # theta(q^4; q^3) = -q^-1 theta(q; q^3)
    a = theta_at_monomial(Q(4), 3, 30 * D, D)
    b = theta_at_monomial(Q(1), 3, 31 * D, D)
    assert qs_equal_to_order(a, -(b * Q(-1)).truncate(30 * D), 30 * D)
    with pytest.raises(NormalizationRequiredError):
        theta_at_monomial(Q(4, 2), 3, 20, D)


def test_theta_laurent_coefficients():
    th = theta_laurent(False, 1, 40, D)
    assert th.coeffs[1].coeffs == {0: -1}
    assert th.coeffs[0].coeffs == {0: 1}


@pytest.mark.parametrize("z,base", [
    (Q(1), 3), (Q(1, -1), 10), (Q(3, -1), 10), (Q(F(1, 2)), 1), (Q(2), 5),
    (Q(F(1, 4), -1), F(1, 2)), (Q(-1), 2), (Q(7), 2),
])
def test_jacobi_triple_product(z, base):
    M = 100 * D
    prod = theta_at_monomial(z, base, M, D)
    lau = fs_evaluate(theta_laurent(False, base, M + 200 * D, D), z).truncate(M)
    assert qs_equal_to_order(prod, lau, M)
    top = F(40)
    assert trunc(series_to_dict(prod), top) == jacobi_sum(z.coeff, z.power, base, top)


def test_euler_inv_examples():
    M = 20 * D
    e = euler_inv_laurent(Q(1), 1, M, D)
    assert coeffs(e.coeffs[1], 4) == [0, 1, 1, 1, 1]
    assert e.coeffs[0].coeffs == {0: 1}
    prod = FormalSeries({0: QSeries.one(M, D), 1: QSeries({D: -1}, M, D)}, M, D)
    # (1 - qz) * 1/(qz; q) = 1/(q^2 z; q)
    assert fs_equal_to_order(fs_mul(prod, e), euler_inv_laurent(Q(2), 1, M, D))


def test_euler_Eq_examples():
    M = 20 * D
    E = euler_Eq_laurent(ONE, 1, M, D)
    assert E.coeffs[0].coeffs == {0: 1}
    assert coeffs(E.coeffs[2], 3) == [0, 1, 1, 2]
    # (-z; q) at z = q times 1/(-z; q) at z = q is 1
    val = qs_mul(fs_evaluate(E, Q(1)), poch_inv(PochhammerSpec(Q(1, -1)), M, D))
    assert qs_equal_to_order(val, QSeries.one(M, D), M)


def test_q_exponentials():
    M = 30 * D
    big = q_exponentials("big_E", Q(200), M, D)
    assert big.coeffs == {0: 1}
    e = q_exponentials("small_e", Q(1), 3 * D, D)
    assert coeffs(e, 3) == [1, 1, 2, 3]
    prod = qs_mul(q_exponentials("small_e", Q(1), M, D), poch(PochhammerSpec(Q(1)), M, D))
    assert prod.coeffs == {0: 1}
    with pytest.raises(DivergentProductError):
        q_exponentials("small_e", ONE, M, D)


def test_hk_examples():
    M = 30 * D
    hs = hk_family(Q(1), Q(F(3, 2)), 2, M, D)
    assert hs[0].coeffs == {0: 1}
    ref = qs_mul(QSeries({2 * D: 1}, M, D),
                 poch_many_inv([Q(F(1, 2)), Q(1)], 1, 1, M, D))
    assert qs_equal_to_order(hs[2], ref, M)
    assert hk_family(Q(1), Q(1, -1), 3, M, D)[3].is_zero


def test_hk_matches_double_sum():
    # H_k(x, y) = sum_{i+j=k} x^i y^j / ((q;q)_i (q;q)_j)
    top = F(20)
    x, y = Q(1), Q(F(1, 2))
    hs = hk_family(x, y, 4, 20 * D, D)
    for k in range(5):
        ref = {}
        for i in range(k + 1):
            term = pmul(o_poch_inv(1, 1, 1, i, top), o_poch_inv(1, 1, 1, k - i, top), top)
            term = pmul(term, {x.power * i + y.power * (k - i): 1}, top)
            for e, c in term.items():
                ref[e] = ref.get(e, 0) + c
        assert series_to_dict(hs[k]) == {e: c for e, c in ref.items() if c}


@pytest.mark.parametrize("t", [Q(1), Q(2)])
def test_bilateral_sum(t):
    M = 60 * D
    lhs = fs_mul(theta_laurent(True, 1, M, D), euler_inv_laurent(t, 1, M, D))
    assert fs_equal_to_order(lhs, _rps_rhs(t, M, D), M)


@pytest.mark.parametrize("x", [ONE, Q(1)])
def test_hk_at_minus_x(x):
    M = 60 * D
    hs = hk_family(x, -x, 11, M, D)
    for k in range(6):
        assert hs[2 * k + 1].is_zero
        ref = qs_mul(QSeries({x.units(D) * 2 * k: 1}, M, D),
                     poch_inv(PochhammerSpec(Q(2), 2, k), M, D))
        assert qs_equal_to_order(hs[2 * k], ref, M)
