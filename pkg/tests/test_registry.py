from fractions import Fraction as F

import pytest

from qrr.builders import qsum
from qrr.errors import UnknownIdentityError
from qrr.qseries import Monomial, qs_equal_to_order
from qrr.registry import (
    _mq_sum,
    _qt_c_rhs,
    _rhi_rhs,
    alt,
    both,
    corrupted,
    grow,
    lookup,
    mono,
    mul,
    plus,
    registry,
    S,
)
from qrr.special import PochhammerSpec, hk_family, poch
from qrr.verify import FAIL, PASS, SKIPPED, verify, verify_all

D = 4
Q = Monomial.q
ALL = [(spec.id, i) for spec in registry() for i in range(len(spec.instantiations))]


def test_catalogue_shape():
    reg = registry()
    assert len(reg) >= 45
    assert len({s.id for s in reg}) == len(reg)
    assert all(s.anchor and len(s.members) >= 2 for s in reg)
    assert lookup("RH").instantiations == ({},)
    with pytest.raises(UnknownIdentityError):
        lookup("NOT_THERE")


def test_catalogue_lists_required_ids():
    ids = {s.id for s in registry()}
    required = {"RR_MAIN_G", "RR_MAIN_H", "ABF_1", "ABF_2", "EULER_INV", "EULER_EQ",
                "JACOBI_TP", "RPS", "CTREP_N1", "CTREP_N2", "RTF_A", "RTF_B", "RTF_C",
                "THETA_SPLIT_EVEN", "THETA_SPLIT_ODD", "THETA_SPLIT_COMBINED", "TILDE_G_THETA",
                "TILDE_H_THETA", "TILDE_G_EVEN", "RCT", "RX_A", "RX_B", "RX_C", "RH",
                "RH_CT_CHAIN", "QUASIPERIODICITY", "DXE", "DXH", "RHI", "HK_SQRT", "HK_NEG",
                "QT_A", "QT_B", "QT_C", "CONTIG_RC"}
    required |= {f"GHR_{n}_{k}" for n in range(1, 5) for k in ("SUM", "PROD")}
    required |= {f"RM20_{n}" for n in range(1, 7)} | {f"GHIJ_{n}" for n in range(1, 7)}
    required |= {f"RA{c}" for c in "ABCDEF"}
    assert required <= ids


@pytest.mark.parametrize("id,idx", ALL, ids=[f"{i}-{j}" for i, j in ALL])
def test_entry_verifies(id, idx):
    spec = lookup(id)
    rep = verify(spec, instantiations=[spec.instantiations[idx]])[0]
    assert rep.status in (PASS, SKIPPED), str(rep)
    assert (rep.first_mismatch is None)


def test_rtf_c_skips_missing_square_root():
    reps = verify("RTF_C")
    assert [r.status for r in reps].count(SKIPPED) == 1
    skipped = next(r for r in reps if r.status == SKIPPED)
    assert skipped.instantiation == "t=-q"


def test_rm20_constant_term():
    spec = lookup("RM20_1")
    assert spec.lhs.build({}, 40, D).coeff(0) == 1
    assert spec.rhs.build({}, 40, D).coeff(0) == 1


def test_corrupted_fixture_fails():
    rep = verify(corrupted())[0]
    assert rep.status == FAIL
    m = rep.first_mismatch
    assert m["exponent"] == "7" and m["rhs"] == m["lhs"] + 1


def test_corrupted_fixture_other_exponent():
    rep = verify(corrupted("RH", F(13, 4), -2))[0]
    assert rep.status == FAIL and rep.first_mismatch["exponent"] == "13/4"


def test_report_invariants():
    for rep in verify_all(M=80, ids=["RR_MAIN_G", "RTF_C", "DXH"]):
        assert (rep.status == FAIL) == (rep.first_mismatch is not None)
        d = rep.to_dict()
        assert {"id", "instantiation", "order", "status", "first_mismatch", "millis"} <= set(d)
        assert d["order"] == 20


def test_lower_denominator_is_raised():
    rep = verify("RM20_3", 40, 2)[0]
    assert rep.status == PASS and rep.denom == 4 and rep.q_order == 20


def test_rh_variant_exponent_fails():
    M = 100 * D
    h = S("H")(M, D)
    assert qs_equal_to_order(h, _mq_sum(lambda k: k * (3 * k - 2), 0, M, D), M)
    bad = mul(poch(PochhammerSpec(Q(1, -1)), M, D),
              qsum(M, D, mono(alt, lambda k: 3 * k * (k - 2)),
                   den=both(grow(Q(4), 4), grow(Q(1, -1), 2)), lift=12 * D).truncate(M))
    assert not qs_equal_to_order(h, bad, 80 * D)


def test_qt_c_variant_exponent_fails():
    M = 100 * D
    x = Q(1)
    bad = qsum(M, D, mono(plus, lambda k: 2 * k * (2 * k + 1), x, lambda k: 2 * k),
               den=grow(Q(2), 2))
    assert not qs_equal_to_order(bad, _qt_c_rhs(x, M, D), M)


def test_odd_hk_does_not_vanish_at_equal_arguments():
    hs = hk_family(Q(1), Q(1), 3, 40, D)
    assert not hs[1].is_zero and not hs[3].is_zero


@pytest.mark.parametrize("x,y", [(Q(1), Q(2)), (Monomial(1, F(0)), Q(1)), (Q(F(1, 2)), Q(3))])
def test_rhi_symmetry(x, y):
    M = 80 * D
    assert qs_equal_to_order(_rhi_rhs(x, y, M, D), _rhi_rhs(y, x, M, D), M)
