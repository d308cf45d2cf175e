"""Run catalogue entries and report agreement to a trusted order."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InadmissibleInstantiation, QRRError
from .formal import FormalSeries, fs_equal_to_order
from .qseries import _lcm, fmt_power, qs_equal_to_order
from .registry import IdentitySpec, fmt_inst, lookup, registry

PASS, FAIL, SKIPPED = "pass", "fail", "skipped-inadmissible"


@dataclass
class VerificationReport:
    id: str
    instantiation: str
    order: int
    denom: int
    status: str
    first_mismatch: dict | None = None
    millis: float = 0.0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    @property
    def q_order(self) -> int | str:
        o = Fraction(self.order, self.denom)
        return int(o) if o.denominator == 1 else str(o)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["order"] = self.q_order
        d["millis"] = round(self.millis, 3)
        return d

    def __str__(self):
        head = f"{self.id:<22} [{self.instantiation}] {self.status:<5} to q^{fmt_power(self.order, self.denom)}"
        if self.first_mismatch:
            m = self.first_mismatch
            where = f"q^{m['exponent']}"
            if m.get("var_exponent") is not None:
                where = f"{m.get('var', 'z')}^{m['var_exponent']} {where}"
            head += f"  first mismatch at {where}: {m['lhs']} != {m['rhs']} ({m['members']})"
        elif self.detail:
            head += f"  ({self.detail})"
        return head


def _compare(a, b, M: int):
    if isinstance(a, FormalSeries) or isinstance(b, FormalSeries):
        if not (isinstance(a, FormalSeries) and isinstance(b, FormalSeries)):
            raise TypeError("cannot compare a formal series with a q-series")
        return fs_equal_to_order(a, b, M)
    return qs_equal_to_order(a, b, M)


def verify_one(spec: IdentitySpec, inst: dict, M: int | None = None,
               D: int | None = None) -> VerificationReport:
    """Check that every member of ``spec`` agrees at ``inst`` to order ``M`` units.

    ``M`` is counted in units of ``1/D``.  When ``D`` cannot express the
    entry's exponents it is raised to the least common multiple with the
    entry's own denominator (and ``M`` rescaled), so the q-order is kept.
    """
    M = spec.default_order if M is None else M
    D = spec.denom if D is None else D
    D_eff = _lcm(D, spec.denom)
    if D_eff != D:
        M, D = M * (D_eff // D), D_eff
    label = fmt_inst(inst)
    t0 = time.perf_counter()
    try:
        values = [(m.label, m.build(inst, M, D)) for m in spec.members]
    except InadmissibleInstantiation as exc:
        return VerificationReport(spec.id, label, M, D, SKIPPED, None,
                                  (time.perf_counter() - t0) * 1000, str(exc))
    for (la, a), (lb, b) in combinations(values, 2):
        rep = _compare(a, b, M)
        if not rep:
            mm = {
                "exponent": rep.power,
                "var_exponent": getattr(rep, "var_exponent", None),
                "var": getattr(a, "var", None),
                "lhs": rep.lhs,
                "rhs": rep.rhs,
                "members": f"{la} vs {lb}",
            }
            return VerificationReport(spec.id, label, M, D, FAIL, mm,
                                      (time.perf_counter() - t0) * 1000)
    return VerificationReport(spec.id, label, M, D, PASS, None,
                              (time.perf_counter() - t0) * 1000)


def verify(spec: IdentitySpec | str, M: int | None = None, D: int | None = None,
           instantiations=None) -> list[VerificationReport]:
    if isinstance(spec, str):
        spec = lookup(spec)
    insts = spec.instantiations if instantiations is None else instantiations
    return [verify_one(spec, inst, M, D) for inst in insts]


def verify_all(M: int | None = None, D: int | None = None, ids=None) -> list[VerificationReport]:
    specs = registry() if not ids else [lookup(i) for i in ids]
    out = []
    for spec in specs:
        out.extend(verify(spec, M, D))
    return out
