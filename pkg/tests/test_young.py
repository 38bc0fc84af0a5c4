import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from setvar.errors import (
    BadExponent,
    BadRho,
    BoundaryPoint,
    ExponentWarning,
    GridMismatch,
    NoConvergence,
    NonIntegrableSingularityWarning,
)
from setvar.fbm import FbmSpec, fbm_path
from setvar.variation import SampledPath, holder_constant, var_p
from setvar.young import (
    fractional_derivative,
    fractional_sign,
    lemma1_ratio,
    riemann_sum,
    young_integral,
    young_loeve_bound,
    young_loeve_constant,
    young_loeve_lhs,
    young_via_fractional,
)


def on_grid(fn, n=1024, T=1.0):
    t = np.linspace(0, T, n + 1)
    return SampledPath(t, fn(t))


@pytest.fixture(scope="module")
def holder_pair():
    f = fbm_path(FbmSpec(0.8, 4096, 1.0, seed=21))
    g = fbm_path(FbmSpec(0.8, 4096, 1.0, seed=22))
    return f, g


# --- Riemann sums -----------------------------------------------------------


def test_riemann_examples():
    t = np.linspace(0, 1, 3)
    f = SampledPath(t, t)
    assert riemann_sum(f, f)[0] == pytest.approx(0.25)
    g = SampledPath(t, [0.3, -1.0, 2.0])
    assert riemann_sum(SampledPath(t, [4.0, 4.0, 4.0]), g)[0] == pytest.approx(4 * 1.7)
    assert riemann_sum(g, SampledPath(t, np.full(3, 5.0)))[0] == 0


def test_riemann_partition_subset():
    f = on_grid(lambda t: t, 8)
    assert riemann_sum(f, f, partition=[0.0, 0.5, 1.0])[0] == pytest.approx(0.25)
    assert riemann_sum(f, f, partition=[0, 4, 8])[0] == pytest.approx(0.25)


def test_riemann_grid_mismatch():
    f = on_grid(lambda t: t, 8)
    g = on_grid(lambda t: t, 16)
    with pytest.raises(GridMismatch):
        riemann_sum(f, g)
    with pytest.warns(UserWarning):
        value = riemann_sum(f, g, interpolate=True)
    assert value[0] == pytest.approx(riemann_sum(f, f)[0])


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=30), st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(v, a, b):
    rng = np.random.default_rng(len(v))
    t = np.linspace(0, 1, len(v))
    f1 = SampledPath(t, v)
    f2 = SampledPath(t, rng.normal(size=len(v)))
    g = SampledPath(t, rng.normal(size=len(v)))
    lhs = riemann_sum(a * f1 + b * f2, g)
    rhs = a * riemann_sum(f1, g) + b * riemann_sum(f2, g)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * (1 + np.abs(rhs).max()))


def test_interval_additivity():
    rng = np.random.default_rng(2)
    t = np.linspace(0, 2, 65)
    f = SampledPath(t, rng.normal(size=65))
    g = SampledPath(t, np.cumsum(rng.normal(size=65)))
    whole = riemann_sum(f, g, partition=t)
    left = riemann_sum(f, g, partition=t[:25])
    right = riemann_sum(f, g, partition=t[24:])
    assert left + right == pytest.approx(whole, abs=1e-12)


# --- dyadic refinement ------------------------------------------------------


def test_t_squared_with_extrapolation():
    g = on_grid(lambda t: t**2)
    res = young_integral(g, g, tol=1e-8, extrapolate=True)
    assert res.value[0] == pytest.approx(0.5, abs=1e-6)
    assert res.cauchy_defect >= 0
    assert res.cauchy_defect < 1e-8


def test_plain_refinement_does_not_reach_tight_tol():
    g = on_grid(lambda t: t**2)
    with pytest.raises(NoConvergence) as info:
        young_integral(g, g, tol=1e-8)
    assert info.value.defect >= 1e-8
    assert info.value.value[0] == pytest.approx(0.5, abs=1e-3)


def test_constant_integrand_every_level():
    g = on_grid(lambda t: np.sin(5 * t), 256)
    one = SampledPath(g.grid, np.ones(257))
    res = young_integral(one, g, s=0.25, t=0.75, tol=1e-12)
    assert res.value[0] == pytest.approx(math.sin(3.75) - math.sin(1.25), abs=1e-14)


def test_partition_is_power_of_two():
    g = on_grid(lambda t: t**3, 512)
    res = young_integral(g, g, tol=1e-2)
    assert res.partition_used & (res.partition_used - 1) == 0


def test_fbm_integral_stabilizes(holder_pair):
    f, g = holder_pair
    res = young_integral(f, g, tol=1e-3, p=1.25, alpha=0.75)
    assert res.cauchy_defect < 1e-3


def test_exponent_warning():
    g = on_grid(lambda t: t, 64)
    with pytest.warns(ExponentWarning):
        young_integral(g, g, tol=1.0, p=2.0, alpha=0.4)


# --- Young-Loeve bound -------------------------------------------------------


def test_young_loeve_constant():
    assert young_loeve_constant(1.0, 1.0) == pytest.approx(2.0)
    with pytest.raises(BadExponent):
        young_loeve_constant(0.5, 2.0)


def test_young_loeve_constant_integrand():
    g = on_grid(lambda t: np.cos(7 * t), 128)
    f = SampledPath(g.grid, np.full(129, 3.0))
    assert young_loeve_lhs(f, g, 0.25, 0.75) == pytest.approx(0.0, abs=1e-14)
    assert young_loeve_bound(f, g, 0.25, 0.75, 0.75, 2.0) >= 0


def test_young_loeve_linear_pair():
    n = 256
    f = on_grid(lambda t: t, n)
    # left sums: int_0^1 t dt - 0 = 1/2 - 1/(2n); bound: C=2, Var_1=1, M_1=1
    assert young_loeve_lhs(f, f, 0.0, 1.0) == pytest.approx(0.5 - 0.5 / n)
    assert young_loeve_bound(f, f, 0.0, 1.0, 1.0, 1.0) == pytest.approx(2.0)


def test_young_loeve_random_windows(holder_pair):
    f, g = holder_pair
    rng = np.random.default_rng(0)
    Mg = holder_constant(g, 0.75)
    for _ in range(100):
        i, j = sorted(rng.choice(4097, 2, replace=False))
        s, t = f.grid[i], f.grid[j]
        assert young_loeve_lhs(f, g, s, t) <= young_loeve_bound(f, g, s, t, 0.75, 2.0, Mg)


def test_running_integral_holder_bound():
    rng = np.random.default_rng(4)
    g = fbm_path(FbmSpec(0.8, 512, 1.0, seed=5))
    alpha, p = 0.75, 2.0
    C, Mg = young_loeve_constant(alpha, p), holder_constant(g, alpha)
    for _ in range(10):
        f1 = SampledPath(g.grid, np.cumsum(rng.normal(size=513)) / 20)
        f2 = SampledPath(g.grid, np.sin(rng.uniform(1, 6) * g.grid))
        d = f1 - f2
        running = np.concatenate([[0.0], np.cumsum(np.diff(g.values[:, 0]) * d.values[:-1, 0])])
        lhs = holder_constant(SampledPath(g.grid, running), alpha)
        rhs = (d.sup_norm() + C * var_p(d, p) ** (1 / p)) * Mg * (1 + g.T**alpha)
        assert lhs <= rhs


# --- fractional derivatives ---------------------------------------------------


@pytest.mark.parametrize("rho", [0.2, 0.5, 0.8])
def test_fractional_of_identity(rho):
    f = on_grid(lambda t: t, 64)
    for t in (0.25, 0.5, 0.9):
        assert fractional_derivative(f, rho, "left", t)[0] == pytest.approx(t ** (1 - rho) / math.gamma(2 - rho), rel=1e-10)


def test_fractional_of_constant_is_zero():
    f = SampledPath(np.linspace(0, 1, 33), np.full(33, 2.5))
    assert fractional_derivative(f, 0.4, "left", 0.5)[0] == 0
    assert fractional_derivative(f, 0.4, "right", 0.5)[0] == 0


def test_fractional_small_order_limit():
    f = on_grid(lambda t: np.sin(2 * t), 2048)
    assert fractional_derivative(f, 1e-4, "left", 0.7)[0] == pytest.approx(math.sin(1.4), abs=1e-3)


def test_fractional_off_node():
    f = on_grid(lambda t: t, 10)
    assert fractional_derivative(f, 0.5, "left", 0.333)[0] == pytest.approx(0.333**0.5 / math.gamma(1.5), rel=1e-10)


def test_fractional_boundary():
    f = on_grid(lambda t: t, 16)
    for t in (0.0, 1.0):
        with pytest.raises(BoundaryPoint):
            fractional_derivative(f, 0.5, "left", t)


def test_fractional_rough_input_warns():
    f = fbm_path(FbmSpec(0.2, 512, 1.0, seed=1))
    with pytest.warns(NonIntegrableSingularityWarning):
        fractional_derivative(f, 0.6, "left", 0.5)


def test_sign_calibration():
    assert fractional_sign() == -1.0


def test_fractional_constant_exact():
    g = on_grid(lambda t: np.sin(3 * t), 128)
    f = SampledPath(g.grid, np.full(129, -2.0))
    assert young_via_fractional(f, g, alpha=1.0, beta=1.0)[0] == -2.0 * (g.values[-1, 0] - g.values[0, 0])


def test_fractional_smooth_cross_oracle():
    g = on_grid(lambda t: t**2)
    ref = young_integral(g, g, tol=1e-8, extrapolate=True).value[0]
    for rho in (0.25, 0.5, 0.75):
        assert young_via_fractional(g, g, rho=rho, alpha=1.0, beta=1.0)[0] == pytest.approx(ref, abs=1e-3)


def test_fractional_holder_cross_oracle(holder_pair):
    f, g = holder_pair
    ref = riemann_sum(f, g)[0]
    vals = [young_via_fractional(f, g, rho=r, alpha=0.75, beta=0.75)[0] for r in (0.3, 0.5, 0.7)]
    assert np.allclose(vals, ref, atol=1e-2)


def test_bad_rho():
    g = on_grid(lambda t: t, 32)
    with pytest.raises(BadRho):
        young_via_fractional(g, g, rho=0.2, alpha=0.6, beta=0.9)
    with pytest.raises(BadRho):
        young_via_fractional(g, g, rho=0.95, alpha=0.6, beta=0.9)


# --- stability ratio ----------------------------------------------------------


def test_stability_ratio_trivial_cases():
    g = on_grid(lambda t: np.sin(4 * t), 256)
    f1 = on_grid(lambda t: np.cos(3 * t), 256)
    assert lemma1_ratio(f1, f1, g, 0.5, 0.5, 1.0) == 0.0
    shifted = SampledPath(f1.grid, f1.values + 0.7)
    assert lemma1_ratio(f1, shifted, g, 0.5, 0.5, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_stability_ratio_drift_under_doubling():
    rng = np.random.default_rng(8)
    coefs = rng.normal(size=(200, 2, 3))

    def worst(n):
        g = on_grid(lambda t: np.sin(6 * t) + t, n)
        out = 0.0
        for c in coefs:
            f1 = on_grid(lambda t: c[0, 0] * np.sin(c[0, 1] * t) + c[0, 2] * t, n)
            f2 = on_grid(lambda t: c[1, 0] * np.sin(c[1, 1] * t) + c[1, 2] * t, n)
            out = max(out, lemma1_ratio(f1, f2, g, 0.5, 0.5, 1.0))
        return out

    a, b = worst(256), worst(512)
    assert np.isfinite(a) and np.isfinite(b)
    assert 0.5 < b / a < 2.0


def test_stability_ratio_bad_theta():
    g = on_grid(lambda t: t, 8)
    with pytest.raises(BadExponent):
        lemma1_ratio(g, g, g, 0.5, 0.0, 1.0)
