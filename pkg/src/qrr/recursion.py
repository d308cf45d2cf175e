"""Coefficient recursions for G and H driven by F.

Writing ``F(q) = sum f_k q^(2k)``, ``G = sum g_n q^n`` and
``H = sum h_n q^n``, the relations

    G(q) = F(q) (G(q^16) + q H(-q^4)),   H(q) = F(q) (G(-q^4) + q^3 H(q^16))

give, coefficient by coefficient,

    g_2k   = sum_{j <= k/8}       f_(k-8j)   g_j
    g_2k+1 = sum_{j <= k/2} (-1)^j f_(k-2j)  h_j
    h_2k   = sum_{j <= k/2} (-1)^j f_(k-2j)  g_j
    h_2k+1 = sum_{j <= (k-1)/8}   f_(k-8j-1) h_j

Every right-hand side at index n >= 1 only reads g_j, h_j with j < n, so
one forward pass over n fills both tables.  n = 0 is the seed g_0 = h_0 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .builders import SeriesBuilder, build_series
from .qseries import DEFAULT_DENOM


@dataclass(frozen=True)
class RecursionTables:
    f: tuple[int, ...]
    g: tuple[int, ...]
    h: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.g) - 1


def f_coefficients(n: int) -> list[int]:
    """``f_0..f_n``: coefficients of ``q^(2k)`` in ``F(q) = (q^8; q^8)_oo / (q^2; q^2)_oo``."""
    s = build_series(SeriesBuilder("F"), 2 * n * DEFAULT_DENOM, DEFAULT_DENOM)
    return [s.coeff(2 * k * DEFAULT_DENOM) for k in range(n + 1)]


def recursion_tables(N: int, override: dict | None = None,
                     h_odd_source: str = "h") -> RecursionTables:
    """Fill ``g_0..g_N`` and ``h_0..h_N`` from the recursions above.

    ``override`` maps ``("g", n)`` or ``("h", n)`` to a forced value, applied
    as soon as that entry is computed (used to show the recursion pins the
    solution).  ``h_odd_source="g"`` swaps ``h_j`` for ``g_j`` in the odd
    ``h`` recursion, a variant kept only to demonstrate that it is wrong.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if h_odd_source not in ("g", "h"):
        raise ValueError("h_odd_source must be 'g' or 'h'")
    override = dict(override or {})
    f = f_coefficients(N // 2)
    g = [0] * (N + 1)
    h = [0] * (N + 1)
    for n in range(N + 1):
        k, odd = divmod(n, 2)
        if n == 0:
            g[0] = h[0] = 1
        elif odd:
            g[n] = sum((-1) ** j * f[k - 2 * j] * h[j] for j in range(k // 2 + 1))
            src = h if h_odd_source == "h" else g
            h[n] = sum(f[k - 8 * j - 1] * src[j] for j in range((k - 1) // 8 + 1)) if k else 0
        else:
            g[n] = sum(f[k - 8 * j] * g[j] for j in range(k // 8 + 1))
            h[n] = sum((-1) ** j * f[k - 2 * j] * g[j] for j in range(k // 2 + 1))
        g[n] = override.get(("g", n), g[n])
        h[n] = override.get(("h", n), h[n])
    return RecursionTables(tuple(f), tuple(g), tuple(h))


def series_coefficients(name: str, N: int) -> list[int]:
    """Coefficients ``0..N`` of a named series at integer powers of q."""
    D = DEFAULT_DENOM
    s = build_series(SeriesBuilder(name), N * D, D)
    return [s.coeff(n * D) for n in range(N + 1)]


def first_divergence(a, b) -> int | None:
    for n, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return n
    return None
