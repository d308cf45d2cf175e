"""Lower bounds on the q-order of coefficients of a Laurent series in z.

A :class:`Bound` is the pointwise minimum of convex pieces, each defined on
an integer interval (possibly unbounded).  ``bound(k)`` is a lower bound, in
1/D units, on the q-valuation of the true ``z^k`` coefficient; outside
every piece's domain the coefficient is exactly zero (bound ``inf``).

Only lower bounds matter, so every operation may return something weaker
than the exact infimum.  Values are exact ``Fraction``s so convexity
survives rescaling of the variable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

INF = math.inf


def _ceil(x) -> int | float:
    return x if x in (INF, -INF) else math.ceil(x)


def _floor(x) -> int | float:
    return x if x in (INF, -INF) else math.floor(x)


def convex_min(f, lo, hi):
    """Minimum over integers in ``[lo, hi]`` of a convex function.

    ``lo``/``hi`` may be infinite; the function must be bounded below on
    the interval (a divergent walk raises).
    """
    lo, hi = _ceil(lo), _floor(hi)
    if lo > hi:
        return INF
    if lo == hi:
        return f(lo)
    if lo == -INF and hi == INF:
        x = 0
    elif lo == -INF:
        x = hi
    else:
        x = lo
    # gallop downhill; repeat until a full pass makes no move
    fx = f(x)
    moved = True
    while moved:
        moved = False
        for direction in (1, -1):
            step = 1
            while True:
                y = x + direction * step
                if y < lo or y > hi:
                    y = hi if direction > 0 else lo
                    if y == x or y in (INF, -INF):
                        break
                fy = f(y)
                if fy < fx:
                    x, fx, moved = y, fy, True
                    step *= 2
                    if step > 1 << 40:
                        raise ArithmeticError("order bound is unbounded below")
                elif step == 1:
                    break
                else:
                    step = 1
    return fx


class Piece:
    lo: int | float
    hi: int | float

    def value(self, k: int) -> Fraction:
        raise NotImplementedError

    def __call__(self, k: int):
        if k < self.lo or k > self.hi:
            return INF
        return self.value(k)

    def minimize(self, a=-INF, b=INF):
        return convex_min(self.value, max(a, self.lo), min(b, self.hi))


class Quadratic(Piece):
    """``a2*k^2 + a1*k + a0`` on ``[lo, hi]`` with ``a2 >= 0``."""

    def __init__(self, a2, a1, a0, lo=-INF, hi=INF):
        self.a2, self.a1, self.a0 = Fraction(a2), Fraction(a1), Fraction(a0)
        if self.a2 < 0:
            raise ValueError("quadratic piece must be convex")
        self.lo, self.hi = lo, hi

    def value(self, k):
        return (self.a2 * k + self.a1) * k + self.a0

    def minimize(self, a=-INF, b=INF):
        lo, hi = _ceil(max(a, self.lo)), _floor(min(b, self.hi))
        if lo > hi:
            return INF
        if self.a2 == 0:
            if self.a1 == 0:
                return self.a0
            end = lo if self.a1 > 0 else hi
            if end in (INF, -INF):
                return -INF
            return self.value(end)
        v = -self.a1 / (2 * self.a2)
        cands = {min(max(math.floor(v), lo), hi), min(max(math.ceil(v), lo), hi)}
        return min(self.value(c) for c in cands if c not in (INF, -INF))

    def tilt(self, slope, const=0) -> "Quadratic":
        return Quadratic(self.a2, self.a1 + slope, self.a0 + const, self.lo, self.hi)

    def reindex(self, shift) -> "Quadratic":
        """Piece ``k -> p(k + shift)``."""
        a2, a1, a0 = self.a2, self.a1, self.a0
        return Quadratic(a2, a1 + 2 * a2 * shift, a0 + a1 * shift + a2 * shift * shift,
                         self.lo - shift, self.hi - shift)

    def stretch(self, n: int) -> "Quadratic":
        """Piece ``m -> p(m / n)`` (for substituting ``z -> z^n``)."""
        if n > 0:
            lo, hi = self.lo * n, self.hi * n
        else:
            lo, hi = self.hi * n, self.lo * n
        return Quadratic(self.a2 / (n * n), self.a1 / n, self.a0, lo, hi)

    def __repr__(self):
        return f"Quadratic({self.a2}, {self.a1}, {self.a0}, [{self.lo}, {self.hi}])"


class Tilted(Piece):
    def __init__(self, base: Piece, slope, const=0, shift=0):
        self.base, self.slope, self.const, self.shift = base, Fraction(slope), Fraction(const), shift
        self.lo, self.hi = base.lo - shift, base.hi - shift

    def value(self, k):
        return self.base.value(k + self.shift) + self.slope * k + self.const


class InfConv(Piece):
    """``k -> min_j a(j) + b(k - j)``: the bound for a product."""

    def __init__(self, a: Piece, b: Piece):
        self.a, self.b = a, b
        self.lo, self.hi = a.lo + b.lo, a.hi + b.hi
        self.value = lru_cache(maxsize=None)(self._value)

    def _value(self, k):
        return conv_min(self.a, self.b, k)


def conv_min(a: Piece, b: Piece, k: int, jlo=-INF, jhi=INF):
    """``min a(j) + b(k - j)`` over ``j`` in ``[jlo, jhi]``."""
    lo = max(a.lo, k - b.hi, jlo)
    hi = min(a.hi, k - b.lo, jhi)
    if lo > hi:
        return INF
    if isinstance(a, Quadratic) and isinstance(b, Quadratic):
        # a(j) + b(k - j) is again a quadratic in j
        q = Quadratic(a.a2 + b.a2,
                      a.a1 - 2 * b.a2 * k - b.a1,
                      a.a0 + b.a2 * k * k + b.a1 * k + b.a0)
        return q.minimize(lo, hi)
    return convex_min(lambda j: a.value(j) + b.value(k - j), lo, hi)


class Bound:
    """Pointwise minimum of convex pieces."""

    def __init__(self, pieces=()):
        self.pieces = tuple(pieces)

    @classmethod
    def constant(cls, value, lo, hi) -> "Bound":
        if lo > hi:
            return cls()
        return cls([Quadratic(0, 0, value, lo, hi)])

    @classmethod
    def quadratic(cls, a2, a1, a0, lo=-INF, hi=INF) -> "Bound":
        return cls([Quadratic(a2, a1, a0, lo, hi)])

    def __call__(self, k):
        return min((p(k) for p in self.pieces), default=INF)

    def minimize(self, a=-INF, b=INF):
        return min((p.minimize(a, b) for p in self.pieces), default=INF)

    def min_outside(self, lo, hi):
        """Minimum over ``k < lo`` and ``k > hi``."""
        return min(self.minimize(-INF, lo - 1), self.minimize(hi + 1, INF))

    @property
    def floor(self):
        return self.minimize()

    def union(self, other: "Bound") -> "Bound":
        return Bound(self.pieces + other.pieces)

    def tilt(self, slope, const=0) -> "Bound":
        """``k -> bound(k) + slope*k + const``."""
        return Bound(p.tilt(slope, const) if isinstance(p, Quadratic) else Tilted(p, slope, const)
                     for p in self.pieces)

    def reindex(self, shift: int) -> "Bound":
        """``k -> bound(k + shift)``."""
        return Bound(p.reindex(shift) if isinstance(p, Quadratic) else Tilted(p, 0, 0, shift)
                     for p in self.pieces)

    def stretch(self, n: int) -> "Bound":
        """Bound after substituting ``z -> z^n``."""
        out = []
        for p in self.pieces:
            if isinstance(p, Quadratic):
                out.append(p.stretch(n))
            else:
                lo, hi = sorted((p.lo * n, p.hi * n))
                out.append(Quadratic(0, 0, p.minimize(), lo, hi))
        return Bound(out)

    def convolve(self, other: "Bound") -> "Bound":
        return Bound(InfConv(a, b) for a in self.pieces for b in other.pieces)

    def pair_min(self, other: "Bound", k: int, jlo=-INF, jhi=INF):
        """``min self(j) + other(k - j)`` over ``j`` in ``[jlo, jhi]``."""
        return min((conv_min(a, b, k, jlo, jhi) for a in self.pieces for b in other.pieces),
                   default=INF)

    def __repr__(self):
        return f"Bound({list(self.pieces)})"
