import os
import subprocess
import sys

import numpy as np
import pytest

from qrr import _kernels as K

PATHS = ["numba", "numpy"]


def ref_convolve(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[: n - i]):
            out[i + j] += int(x) * int(y)
    return out


def ref_inverse(s, n):
    out = [0] * n
    out[0] = int(s[0])
    for k in range(1, n):
        acc = sum(int(s[j]) * out[k - j] for j in range(1, min(k, len(s) - 1) + 1))
        out[k] = -acc * int(s[0])
    return out


def arrays(seed, n, big=False):
    rng = np.random.default_rng(seed)
    a = rng.integers(-9, 10, n).astype(np.int64)
    if big:
        a[rng.integers(0, n, 3)] = (1 << 61) - 5
    return a


@pytest.mark.parametrize("path", PATHS)
@pytest.mark.parametrize("seed", range(6))
def test_convolve_matches_reference(path, seed):
    n = 40 + 13 * seed
    a, b = arrays(seed, n, big=seed % 2 == 1), arrays(seed + 100, n)
    got = K.convolve(a, b, n, kernels=K.KERNELS[path])
    assert [int(x) for x in got] == ref_convolve(list(a), list(b), n)


@pytest.mark.parametrize("path", PATHS)
@pytest.mark.parametrize("seed", range(6))
def test_inverse_matches_reference(path, seed):
    n = 60
    s = arrays(seed, n)
    s[0] = 1 if seed % 2 else -1
    got = K.inverse(s, n, kernels=K.KERNELS[path])
    assert [int(x) for x in got] == ref_inverse(list(s), n)


@pytest.mark.parametrize("path", PATHS)
@pytest.mark.parametrize("shift,c", [(1, 1), (3, -1), (2, 5), (7, 1 << 40)])
def test_binomials_round_trip(path, shift, c):
    a = arrays(shift, 80)
    k = K.KERNELS[path]
    m = K.mul_binomial(a, shift, c, kernels=k)
    ref = [int(a[i]) - (c * int(a[i - shift]) if i >= shift else 0) for i in range(80)]
    assert [int(x) for x in m] == ref
    back = K.div_binomial(m, shift, c, kernels=k)
    assert [int(x) for x in back] == [int(x) for x in a]


def test_paths_bit_identical():
    a, b = arrays(1, 300), arrays(2, 300)
    r = [K.convolve(a, b, 300, kernels=K.KERNELS[p]) for p in PATHS]
    assert r[0].dtype == r[1].dtype and np.array_equal(r[0], r[1])


def test_overflow_falls_back_to_exact():
    a = np.array([1, -(1 << 61)], dtype=np.int64)
    out = K.inverse(a, 6)
    assert out.dtype == object
    assert [int(x) for x in out] == [(1 << 61) ** k for k in range(6)]


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba")])
def test_env_flag_selects_backend(flag, expected):
    if expected == "numba" and not K.HAVE_NUMBA:
        pytest.skip("numba not importable")
    env = dict(os.environ, QRR_DISABLE_JIT=flag)
    code = ("import qrr; from qrr import verify; "
            "r = verify('RR_MAIN_G', 200); print(qrr.BACKEND, r[0].status)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.split() == [expected, "pass"]
