import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3ff.errors import PoleError
from gl3ff.exact import dwpf_exact, qc
from gl3ff.kernels import (
    check_pairwise_distinct,
    det_lu,
    dwpf,
    f,
    f_prod,
    g,
    g_prod,
    h,
    inv_f,
    kernel_quadruple,
    t,
    vandermonde,
)


def test_quadruple_at_integers():
    assert kernel_quadruple(2, 1, 1) == (1, 2, 2, 0.5)


def test_f_tends_to_one_at_large_argument():
    assert abs(f(1e8, 0.3, 1.0) - 1.0) < 1e-7


def test_pole_errors():
    with pytest.raises(PoleError):
        g(1.0, 1.0, 1.0)
    with pytest.raises(PoleError):
        f(1.0, 1.0 + 1e-12, 1.0)
    with pytest.raises(PoleError):
        t(0.0, 1.0, 1.0)  # x - y = -c
    # h has no pole in x - y
    assert h(1.0, 1.0, 1.0) == 1.0


def test_inv_f_vanishes_on_coincidence():
    assert inv_f(0.7, 0.7, 1.0) == 0.0
    assert inv_f(2.0, 1.0, 1.0) == pytest.approx(0.5)


complex_vals = st.builds(
    complex,
    st.floats(min_value=-50, max_value=50, allow_nan=False),
    st.floats(min_value=-50, max_value=50, allow_nan=False),
)


@settings(max_examples=300, deadline=None)
@given(complex_vals, complex_vals)
def test_kernel_interrelations(x, y):
    c = 1.0
    if abs(x - y) < 1e-3 or abs(x - y + c) < 1e-3:
        return
    gg, ff, hh, tt = kernel_quadruple(x, y, c)
    assert abs(hh * gg - ff) <= 1e-13 * max(1.0, abs(ff))
    assert abs(tt * hh - gg) <= 1e-13 * max(1.0, abs(gg))


def test_interrelations_at_scale():
    # 10^4 random points, relative tolerance 1e-13
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((10_000, 2)) + 1j * rng.standard_normal((10_000, 2))
    c = 1.0
    for x, y in pts:
        if abs(x - y) < 1e-4 or abs(x - y + c) < 1e-4:
            continue
        gg, ff, hh, tt = kernel_quadruple(x, y, c)
        assert abs(hh * gg - ff) <= 1e-13 * max(1.0, abs(ff))
        assert abs(tt * hh - gg) <= 1e-13 * max(1.0, abs(gg))


def test_set_products():
    assert f_prod((), (1.0, 2.0), 1.0) == 1.0
    assert f_prod((2.0,), (1.0,), 1.0) == 2.0
    assert g_prod((3.0, 5.0), (1.0,), 1.0) == pytest.approx(0.125)


def test_pairwise_distinct_guard():
    check_pairwise_distinct((1.0, 2.0, 3.0))
    with pytest.raises(PoleError):
        check_pairwise_distinct((1.0, 2.0, 1.0 + 1e-12))


def test_vandermonde_small_cases():
    assert vandermonde((1.0,), 1.0) == (1.0, 1.0)
    up, lo = vandermonde((2.0, 1.0), 1.0)
    assert up == pytest.approx(1.0)
    assert lo == pytest.approx(-1.0)


def test_vandermonde_reversal_swaps_factors():
    c = 1.0
    s = (0.3 + 0.2j, -1.1 + 0.7j, 2.2 - 0.4j)
    up, lo = vandermonde(s, c)
    up_r, lo_r = vandermonde(tuple(reversed(s)), c)
    assert up_r == pytest.approx(lo)
    assert lo_r == pytest.approx(up)


def test_dwpf_n1_equals_g():
    assert dwpf((2.0,), (0.5,), 1.0) == pytest.approx(g(2.0, 0.5, 1.0))


def test_dwpf_golden_n2():
    # Hand-expanded 2x2 determinant evaluated in exact rational arithmetic:
    # K_2((3,5)|(0,1)) with c = 1 equals 1/4.
    assert dwpf((3.0, 5.0), (0.0, 1.0), 1.0) == pytest.approx(0.25, rel=1e-12)
    exact = dwpf_exact([qc(3), qc(5)], [qc(0), qc(1)], qc(1))
    assert exact.re == 0.25 and exact.im == 0


def test_dwpf_empty_sets():
    assert dwpf((), (), 1.0) == 1.0


def test_dwpf_decay_at_infinity():
    c = 1.0
    ys = (0.0, 1.0, -0.45)
    prev = None
    for mag in (1e3, 1e6, 1e9):
        xs = (mag, 2.1, -1.3)
        val = abs(dwpf(xs, ys, c))
        if prev is not None:
            ratio = val / prev
            assert 0.0002 < ratio < 0.005  # ~1/|arg| decay per 3 decades
        prev = val
    assert val <= 1e-6


def test_dwpf_permutation_invariance():
    rng = np.random.default_rng(11)
    c = 1.0
    for n in (2, 3, 4):
        xs = tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        ys = tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n))
        base = dwpf(xs, ys, c)
        for _ in range(20):
            px = tuple(rng.permutation(np.array(xs)))
            py = tuple(rng.permutation(np.array(ys)))
            assert dwpf(px, py, c) == pytest.approx(base, rel=1e-10)


def test_det_lu_values():
    assert det_lu(np.array([[2.0]])) == pytest.approx(2.0)
    mat = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    assert det_lu(mat) == pytest.approx(-2.0)
    singular = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
    assert det_lu(singular) == pytest.approx(0.0, abs=1e-14)
