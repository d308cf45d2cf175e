"""Hot inner loops on dense coefficient arrays.

Every public function here takes and returns 1-d numpy arrays of exact
integers: ``int64`` when every entry is below ``LIMIT`` in magnitude,
``object`` (Python ints) otherwise.  The int64 fast path runs either as
numba ``@njit`` code or as vectorised numpy, chosen once at import:

    QRR_DISABLE_JIT=1   force the numpy path even if numba is importable

Fast kernels guard against int64 overflow and report failure, in which case
the call is redone on object arrays.  Results are bit-identical across the
three paths.
"""

from __future__ import annotations

import os

import numpy as np

LIMIT = 1 << 62
_LIMIT_F = float(LIMIT)

_flag = os.environ.get("QRR_DISABLE_JIT", "").strip().lower()
_JIT_REQUESTED = _flag not in ("1", "true", "yes", "on")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKEND = "numba" if (HAVE_NUMBA and _JIT_REQUESTED) else "numpy"


# ---------------------------------------------------------------------------
# dtype helpers


def as_exact(values) -> np.ndarray:
    """Coefficient array in the narrowest exact dtype."""
    arr = np.asarray(values)
    if arr.dtype == np.int64 or (arr.dtype.kind in "iu" and arr.dtype.itemsize < 8):
        arr = arr.astype(np.int64)
        if arr.size and int(np.abs(arr).max()) >= LIMIT:
            return arr.astype(object)
        return arr
    arr = np.array(values, dtype=object).ravel()
    return narrow(arr)


def narrow(arr: np.ndarray) -> np.ndarray:
    """Downcast an object array to int64 when every entry fits."""
    if arr.dtype != object:
        return arr
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    lo, hi = min(arr), max(arr)
    if -LIMIT < lo and hi < LIMIT:
        return arr.astype(np.int64)
    return arr


def widen(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    return np.array([int(x) for x in arr], dtype=object)


def _fast(*arrays) -> bool:
    return all(a.dtype == np.int64 for a in arrays)


def _maxabs_f(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def _sumabs_f(a: np.ndarray) -> float:
    return float(np.abs(a).astype(np.float64).sum()) if a.size else 0.0


# ---------------------------------------------------------------------------
# numpy int64 kernels (return (result, ok))


def _np_convolve(a, b, n):
    out = np.zeros(n, dtype=np.int64)
    a, b = a[:n], b[:n]
    if a.size and b.size:
        c = np.convolve(a, b)[:n]
        out[: c.size] = c
    return out, True


def _np_inverse(s, n):
    out = np.zeros(n, dtype=np.int64)
    if n == 0:
        return out, True
    s = s[:n]
    s0 = s[0]
    out[0] = s0
    tail = s[1:]
    maxs = _maxabs_f(tail)
    csum = 1.0
    for k in range(1, n):
        if maxs * csum >= _LIMIT_F:
            return out, False
        m = min(k, tail.size)
        if m:
            acc = np.dot(tail[:m], out[k - 1 :: -1][:m])
            v = -s0 * acc
        else:
            v = 0
        out[k] = v
        csum += abs(float(v))
    return out, True


def _np_mul_binomial(a, shift, c):
    out = a.copy()
    if shift < a.size:
        out[shift:] -= c * a[: a.size - shift]
    if out.size and np.abs(out).max() >= LIMIT:
        return out, False
    return out, True


def _div_binomial_vec(out, shift, c):
    # at most sqrt(n) vectorised steps: per residue class when shift is
    # small, per block of length shift otherwise
    n = out.size
    if shift * shift < n:
        for r in range(shift):
            col = out[r::shift]
            if c == 1:
                out[r::shift] = np.cumsum(col)
            else:
                sign = np.where(np.arange(col.size) % 2 == 0, 1, -1).astype(col.dtype)
                out[r::shift] = sign * np.cumsum(sign * col)
    else:
        for start in range(shift, n, shift):
            stop = min(start + shift, n)
            out[start:stop] = out[start:stop] + c * out[start - shift : stop - shift]
    return out


def _np_div_binomial(a, shift, c):
    # every partial sum is bounded by sum |a|
    if _sumabs_f(a) >= _LIMIT_F / 2:
        return a, False
    return _div_binomial_vec(a.copy(), shift, int(c)), True


# ---------------------------------------------------------------------------
# numba int64 kernels

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_convolve(a, b, n):
        out = np.zeros(n, dtype=np.int64)
        la = min(a.size, n)
        lb = min(b.size, n)
        for i in range(la):
            ai = a[i]
            if ai == 0:
                continue
            m = min(lb, n - i)
            for j in range(m):
                out[i + j] += ai * b[j]
        return out, True

    @njit(cache=True)
    def _nb_inverse(s, n):
        out = np.zeros(n, dtype=np.int64)
        if n == 0:
            return out, True
        s0 = s[0]
        out[0] = s0
        ls = min(s.size, n)
        maxs = 0.0
        for i in range(1, ls):
            v = abs(float(s[i]))
            if v > maxs:
                maxs = v
        csum = 1.0
        for k in range(1, n):
            if maxs * csum >= 4.611686018427388e18:
                return out, False
            acc = 0
            top = min(k, ls - 1)
            for i in range(1, top + 1):
                acc += s[i] * out[k - i]
            v = -s0 * acc
            out[k] = v
            csum += abs(float(v))
        return out, True

    @njit(cache=True)
    def _nb_mul_binomial(a, shift, c):
        out = a.copy()
        lim = np.int64(1) << 62
        for k in range(shift, a.size):
            v = a[k] - c * a[k - shift]
            if v >= lim or v <= -lim:
                return out, False
            out[k] = v
        return out, True

    @njit(cache=True)
    def _nb_div_binomial(a, shift, c):
        out = a.copy()
        lim = np.int64(1) << 62
        for k in range(shift, out.size):
            v = out[k] + c * out[k - shift]
            if v >= lim or v <= -lim:
                return out, False
            out[k] = v
        return out, True

else:  # pragma: no cover
    _nb_convolve = _np_convolve
    _nb_inverse = _np_inverse
    _nb_mul_binomial = _np_mul_binomial
    _nb_div_binomial = _np_div_binomial


KERNELS = {
    "numba": {
        "convolve": _nb_convolve,
        "inverse": _nb_inverse,
        "mul_binomial": _nb_mul_binomial,
        "div_binomial": _nb_div_binomial,
    },
    "numpy": {
        "convolve": _np_convolve,
        "inverse": _np_inverse,
        "mul_binomial": _np_mul_binomial,
        "div_binomial": _np_div_binomial,
    },
}
_K = KERNELS[BACKEND]


# ---------------------------------------------------------------------------
# exact object-array paths


def _obj_convolve(a, b, n):
    out = np.zeros(n, dtype=object)
    out[:] = 0
    a, b = widen(a[:n]), widen(b[:n])
    if a.size and b.size:
        c = np.convolve(a, b)[:n]
        out[: c.size] = c
    return out


def _obj_inverse(s, n):
    s = widen(s[:n])
    out = np.zeros(n, dtype=object)
    out[:] = 0
    if n == 0:
        return out
    s0 = s[0]
    out[0] = s0
    tail = s[1:]
    for k in range(1, n):
        m = min(k, tail.size)
        out[k] = -s0 * np.dot(tail[:m], out[k - 1 :: -1][:m]) if m else 0
    return out


def _obj_mul_binomial(a, shift, c):
    a = widen(a)
    out = a.copy()
    if shift < a.size:
        out[shift:] = a[shift:] - c * a[: a.size - shift]
    return out


def _obj_div_binomial(a, shift, c):
    if c in (1, -1):
        return _div_binomial_vec(widen(a).copy(), shift, c)
    out = widen(a).copy()
    for k in range(shift, out.size):
        out[k] = out[k] + c * out[k - shift]
    return out


# ---------------------------------------------------------------------------
# dispatching entry points


def convolve(a: np.ndarray, b: np.ndarray, n: int, kernels=None) -> np.ndarray:
    """First ``n`` coefficients of the Cauchy product of ``a`` and ``b``."""
    k = kernels or _K
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    if _fast(a, b):
        a_, b_ = a[:n], b[:n]
        bound = min(_maxabs_f(a_) * _sumabs_f(b_), _maxabs_f(b_) * _sumabs_f(a_))
        if bound < _LIMIT_F / 2:
            out, _ = k["convolve"](a_, b_, n)
            return out
    return narrow(_obj_convolve(a, b, n))


def inverse(s: np.ndarray, n: int, kernels=None) -> np.ndarray:
    """First ``n`` coefficients of ``1/s``; ``s[0]`` must be +1 or -1."""
    k = kernels or _K
    if _fast(s):
        out, ok = k["inverse"](s, n)
        if ok:
            return out
    return narrow(_obj_inverse(s, n))


def mul_binomial(a: np.ndarray, shift: int, c: int, kernels=None) -> np.ndarray:
    """``a * (1 - c q^shift)`` truncated to ``len(a)``; ``shift >= 1``."""
    k = kernels or _K
    if _fast(a) and c in (1, -1):
        out, ok = k["mul_binomial"](a, shift, np.int64(c))
        if ok:
            return out
    return narrow(_obj_mul_binomial(a, shift, c))


def div_binomial(a: np.ndarray, shift: int, c: int, kernels=None) -> np.ndarray:
    """``a / (1 - c q^shift)`` truncated to ``len(a)``; ``shift >= 1``."""
    k = kernels or _K
    if _fast(a) and c in (1, -1):
        out, ok = k["div_binomial"](a, shift, np.int64(c))
        if ok:
            return out
    return narrow(_obj_div_binomial(a, shift, c))


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise sum of equal-length arrays."""
    if _fast(a, b):
        if _maxabs_f(a) + _maxabs_f(b) < _LIMIT_F:
            return a + b
    return narrow(widen(a) + widen(b))


def scale(a: np.ndarray, c: int) -> np.ndarray:
    if c == 1:
        return a
    if _fast(a) and abs(c) * _maxabs_f(a) < _LIMIT_F / 2:
        return a * np.int64(c)
    return narrow(widen(a) * c)
