import os
import subprocess
import sys

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kpcohft import kernels

BACKENDS = kernels.backends()
rat = st.fractions(min_value=-4, max_value=4, max_denominator=6).map(lambda f: mpq(f.numerator, f.denominator))


def naive_conv(a, b, n):
    out = [mpq(0)] * (n + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= n:
                out[i + j] += x * y
    return out


@given(st.lists(rat, max_size=9), st.lists(rat, max_size=9), st.integers(0, 10))
def test_conv_trunc_backends_agree(a, b, n):
    expected = naive_conv(a, b, n)
    for mod in BACKENDS.values():
        assert mod.conv_trunc(a, b, n, mpq(0)) == expected


term = st.tuples(st.integers(0, 1000), st.integers(0, 6), st.integers(0, 4), st.integers(-2, 4), rat)


@given(st.lists(term, max_size=12), st.lists(term, max_size=12), st.integers(0, 8), st.integers(0, 8),
       st.integers(0, 2), st.integers(-1, 6))
def test_sparse_mul_backends_agree(a, b, wcap, hcap, sigma, nmax):
    a = [(k + kernels.E_OFF, *t) for k, *t in a]
    b = sorted(((k + kernels.E_OFF, *t) for k, *t in b), key=lambda t: t[1])
    results = [mod.sparse_mul(a, b, wcap, hcap, sigma, nmax) for mod in BACKENDS.values()]
    expected = {}
    for ka, wa, la, ea, ca in a:
        for kb, wb, lb, eb, cb in b:
            if wa + wb > wcap or ea + eb + sigma * (la + lb) > hcap:
                continue
            if nmax >= 0 and la + lb > nmax:
                continue
            k = ka + kb - kernels.E_OFF
            expected[k] = expected.get(k, 0) + ca * cb
    for r in results:
        assert r == expected


def test_backend_selection_is_reported():
    assert kernels.BACKEND in BACKENDS
    assert "python" in BACKENDS


def test_pure_python_override():
    env = dict(os.environ, KPCOHFT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import kpcohft; print(kpcohft.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
