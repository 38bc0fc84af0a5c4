import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from setvar.convex import Box, Interval, Polygon, SteinerDensity, density_family, hausdorff, singleton
from setvar.errors import DifferenceNotExist, NodesNotOnGrid, UnsupportedBody
from setvar.fbm import FbmSpec, fbm_path
from setvar.svcalc import (
    HukuharaPath,
    _hull,
    approximate_selection,
    aumann_integral,
    aumann_path,
    hukuhara_derivative,
    member_integrals,
    membership_check,
    oplus,
    selection_family,
    selection_vp_bound,
    steiner_selection,
    sv_young_integral,
    verify_cor22,
    verify_th6,
    verify_th7,
)
from setvar.variation import SampledPath, SetValuedSampledPath, riesz_vp


def grid(n=64, T=1.0):
    return np.linspace(0, T, n + 1)


def const_interval(t, lo=0.0, hi=1.0):
    return SetValuedSampledPath.from_intervals(t, np.full(t.size, lo), np.full(t.size, hi))


def ramp(n=512):
    """F(t) = [0, t], i.e. Phi = [0, 1] and x0 = 0."""
    t = grid(n)
    return HukuharaPath(np.zeros(1), const_interval(t))


def smooth_interval_hp(t, c):
    lo = c[0] * np.sin(c[1] * t)
    return HukuharaPath.from_intervals(t, lo, lo + 0.5 + c[2] ** 2 * (1 + np.cos(c[1] * t)), x0=c[3])


coefs = st.tuples(st.floats(-2, 2), st.floats(0.5, 6), st.floats(-1, 1), st.floats(-1, 1))


# --- Aumann integral and Hukuhara derivative --------------------------------


def test_aumann_examples():
    t = grid()
    F = aumann_path(const_interval(t))
    assert np.allclose(F.lo[:, 0], 0) and np.allclose(F.hi[:, 0], t)
    assert aumann_integral(const_interval(t), 0.5) == Interval(0, 0.5)
    c = -1.5
    point = aumann_integral(const_interval(t, c, c), 0.75)
    assert point.lo == point.hi == pytest.approx(c * 0.75)
    widening = SetValuedSampledPath.from_intervals(t, np.zeros(t.size), t)
    assert np.allclose(aumann_path(widening).hi[:, 0], t**2 / 2, atol=1e-9)


def test_aumann_polygon_and_box():
    t = grid(8)
    tri = Polygon([[0, 0], [1, 0], [0, 1]])
    F = aumann_path(SetValuedSampledPath(t, (tri,) * t.size))
    assert hausdorff(F[-1], Polygon([[0, 0], [1, 0], [0, 1]])) < 1e-12
    assert hausdorff(F[4], Polygon([[0, 0], [0.5, 0], [0, 0.5]])) < 1e-12
    B = aumann_path(SetValuedSampledPath(t, (Box([0, -1], [2, 1]),) * t.size), x0=[1, 1])
    assert np.allclose(B[-1].lo, [1, 0]) and np.allclose(B[-1].hi, [3, 2])


def test_aumann_off_grid():
    with pytest.raises(NodesNotOnGrid):
        aumann_integral(const_interval(grid(4)), 0.3)


def test_hukuhara_examples():
    t = grid()
    Phi = hukuhara_derivative(SetValuedSampledPath.from_intervals(t, np.zeros(t.size), t))
    assert np.allclose(Phi.lo, 0) and np.allclose(Phi.hi, 1)
    still = hukuhara_derivative(const_interval(t, -2, 3))
    assert np.allclose(still.lo, 0) and np.allclose(still.hi, 0)
    h = t[1] - t[0]
    Phi = hukuhara_derivative(SetValuedSampledPath.from_intervals(t, -(t**2), t**2))
    assert np.max(np.abs(Phi.hi[:-1, 0] - 2 * t[:-1])) <= 1.01 * h
    assert np.max(np.abs(Phi.lo[:-1, 0] + 2 * t[:-1])) <= 1.01 * h


def test_hukuhara_not_exist_reports_cell():
    t = grid(10)
    w = np.where(t < 0.55, t, 1.0 - t)
    with pytest.raises(DifferenceNotExist) as info:
        hukuhara_derivative(SetValuedSampledPath.from_intervals(t, -w, w))
    assert info.value.index == 5


@given(coefs)
def test_reconstruction_roundtrip(c):
    t = grid(256)
    hp = smooth_interval_hp(t, c)
    back = hukuhara_derivative(hp.F)
    err = back.hausdorff_to(hp.Phi)
    # the forward quotient of a trapezoid integral is the cell average of Phi
    assert np.max(err) <= 10 * (c[1] ** 2 + 1) * (abs(c[0]) + c[2] ** 2 + 1) * (t[1] - t[0])


def test_polygon_roundtrip():
    t = grid(6)
    tri = Polygon([[0, 0], [2, 0], [0, 1]])
    hp = HukuharaPath(np.array([1.0, -1.0]), SetValuedSampledPath(t, (tri,) * t.size))
    Phi = hukuhara_derivative(hp.F)
    assert max(hausdorff(A, tri) for A in Phi.bodies) < 1e-9
    again = HukuharaPath.from_set_path(hp.F)
    assert np.allclose(again.x0, [1, -1])


# --- Steiner selections -----------------------------------------------------


def test_uniform_selection_of_unit_interval():
    t = grid()
    hp = HukuharaPath(np.array([0.3]), const_interval(t))
    m = steiner_selection(hp, SteinerDensity.uniform(1))
    assert np.allclose(m.phi.values, 0.5)
    assert np.allclose(m.f.values[:, 0], 0.3 + t / 2)


def test_singleton_derivative_unique_selection():
    t = grid()
    v = np.sin(3 * t)
    hp = HukuharaPath.from_intervals(t, v, v, x0=1.0)
    values = selection_family(hp, 6).values()
    assert np.allclose(values, values[0], atol=1e-15)


@given(coefs)
def test_commutation_defect(c):
    hp = smooth_interval_hp(grid(128), c)
    for m in selection_family(hp, 8):
        assert m.commutation_defect < 1e-8


@given(coefs)
def test_family_members_are_selections(c):
    hp = smooth_interval_hp(grid(128), c)
    fam = selection_family(hp, 8)
    assert fam[0].mu.tilt == 0
    for m in fam:
        assert membership_check(m.f, hp.F)
        assert membership_check(m.phi, hp.Phi)


@given(coefs, st.sampled_from([1.5, 2.0, 3.0]))
def test_selection_vp_bound(c, p):
    hp = smooth_interval_hp(grid(128), c)
    for vf, vF in selection_vp_bound(selection_family(hp, 8), p):
        assert vf <= vF + 1e-6


def test_family_hull_widens():
    hp = ramp(64)
    gaps = [hausdorff(selection_family(hp, n, check=False).hull_at(-1), Interval(0, 1)) for n in (1, 2, 4, 16, 64)]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < gaps[0]


@given(coefs, coefs, st.integers(0, 5))
def test_sum_of_selections(c1, c2, k):
    t = grid(128)
    hp1, hp2 = smooth_interval_hp(t, c1), smooth_interval_hp(t, c2)
    mu = density_family(6, 1)[k]
    a, b = steiner_selection(hp1, mu), steiner_selection(hp2, mu)
    total = a.f + b.f
    assert membership_check(total, (hp1 + hp2).F)
    joint = steiner_selection(hp1 + hp2, mu)
    assert np.allclose(joint.f.values, total.values, atol=1e-12)


def test_planar_family():
    t = grid(16)
    tri = Polygon([[0, 0], [1, 0], [0.2, 0.8]])
    hp = HukuharaPath(np.zeros(2), SetValuedSampledPath(t, (tri,) * t.size))
    fam = selection_family(hp, 4)
    for m in fam:
        assert membership_check(m.f, hp.F)
    g = SampledPath(t, t**2)
    assert isinstance(sv_young_integral(hp, g, n_selections=4), Polygon)


def test_hull_dimension_limit():
    with pytest.raises(UnsupportedBody):
        _hull(np.zeros((3, 3)))


# --- stitching --------------------------------------------------------------


def test_oplus_examples():
    t = grid(8)
    f = SampledPath(t, np.sin(t))
    g = SampledPath(t, np.cos(t))
    assert np.allclose(oplus(f, g, 0.0).values, g.values + f.values[0] - g.values[0])
    assert np.array_equal(oplus(f, f, 1.0).values, f.values)
    assert np.allclose(oplus(f, g, 0.0).values[:, 0] - g.values[:, 0], np.sin(0) - np.cos(0))


def test_oplus_stitch_leaves_the_set():
    t = grid(8)
    zero = SampledPath(t, np.zeros(t.size))
    tent = SampledPath(t, np.minimum(t, 1 - t))
    h = oplus(zero, tent, 0.5)
    assert np.allclose(h.values[4:, 0], 0.5 - t[4:])
    assert h.values[-1, 0] == -0.5
    F = ramp(8).F
    assert membership_check(zero, F).defect == 0
    assert membership_check(tent, F).defect == 0
    res = membership_check(h, F)
    assert not res.ok and res.defect == 0.5 and res.worst_time == 1.0


def test_oplus_off_grid():
    t = grid(8)
    f = SampledPath(t, t)
    with pytest.raises(NodesNotOnGrid):
        oplus(f, f, 0.3)


@given(coefs, st.integers(0, 7), st.integers(0, 7), st.integers(0, 128))
def test_oplus_closure(c, i, j, k):
    hp = smooth_interval_hp(grid(128), c)
    fam = selection_family(hp, 8, check=False)
    assert membership_check(oplus(fam[i].f, fam[j].f, hp.grid[k]), hp.F)


def test_membership_extreme_selection():
    hp = smooth_interval_hp(grid(128), (1.0, 2.0, 0.5, 0.0))
    top = SampledPath(hp.grid, hp.F.hi)
    assert membership_check(top, hp.F)
    res = membership_check(top + SampledPath(hp.grid, np.full(129, 1e-3)), hp.F)
    assert not res.ok and res.defect == pytest.approx(1e-3)


# --- approximation ----------------------------------------------------------


def test_approximate_member_exactly():
    hp = ramp(512)
    fam = selection_family(hp, 16, check=False)
    rep = approximate_selection(fam[5].f, fam, 1e-6)
    assert rep.error == 0 and rep.success


def test_approximate_midpoint():
    hp = ramp(512)
    fam = selection_family(hp, 16, check=False)
    mid = SampledPath(hp.grid, hp.grid / 2)
    rep = approximate_selection(mid, fam, 0.05)
    assert rep.success and rep.error < 0.05


def test_approximate_negative_control():
    hp = ramp(512)
    fam = selection_family(hp, 16, check=False)
    target = SampledPath(hp.grid, hp.grid / 2 + hp.grid**2 / 16)
    assert membership_check(target, hp.F)
    rep = approximate_selection(target, fam, 1e-4)
    assert not rep.success and rep.error > 0


# --- set-valued Young integral ----------------------------------------------


def test_sv_young_singleton():
    t = grid(128)
    g = fbm_path(FbmSpec(0.8, 128, seed=4))
    hp = HukuharaPath.from_intervals(t, np.zeros(t.size), np.zeros(t.size), x0=2.0)
    H = sv_young_integral(hp, g, n_selections=8)
    want = 2.0 * (g.values[-1, 0] - g.values[0, 0])
    assert H.lo == pytest.approx(want, abs=1e-13) and H.hi == pytest.approx(want, abs=1e-13)


def test_sv_young_midpoint_member():
    hp = ramp(1024)
    g = SampledPath(hp.grid, hp.grid)
    fam = selection_family(hp, 8, check=False)
    vals = member_integrals(fam, g, t=0.5)
    assert vals[0, 0] == pytest.approx(0.25**2, abs=1e-3)
    H = sv_young_integral(hp, g, t=0.5, n_selections=8)
    assert H.lo <= vals[0, 0] <= H.hi
    assert 0 <= H.lo and H.hi <= 0.5**2 / 2


def test_sv_young_tol_matches_fixed():
    hp = ramp(256)
    g = SampledPath(hp.grid, hp.grid**2)
    fam = selection_family(hp, 4, check=False)
    assert np.allclose(member_integrals(fam, g, tol=1e-1), member_integrals(fam, g), atol=1e-1)


def test_sv_young_hull_converges_in_n():
    hp = ramp(256)
    g = fbm_path(FbmSpec(0.8, 256, seed=2))
    ref = sv_young_integral(hp, g, n_selections=64)
    gaps = [hausdorff(sv_young_integral(hp, g, n_selections=n), ref) for n in (1, 2, 4, 16, 64)]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] == 0


# --- verification procedures --------------------------------------------------


def test_hull_distance_identical_pair():
    hp = smooth_interval_hp(grid(256), (1.0, 3.0, 0.5, 0.2))
    g = fbm_path(FbmSpec(0.8, 256, seed=6))
    rep = verify_th6(hp, hp, g, rho=0.625, alpha=0.75)
    assert rep.lhs == 0 and rep.ratio == 0


def test_hull_distance_theta_sweep_picks_minimum():
    t = grid(256)
    hp1 = smooth_interval_hp(t, (1.0, 3.0, 0.5, 0.2))
    hp2 = hp1.dilate(0.1)
    g = fbm_path(FbmSpec(0.8, 256, seed=6))
    rep = verify_th6(hp1, hp2, g, rho=0.625, alpha=0.75)
    assert rep.bracket == min(rep.brackets.values())
    assert rep.lhs <= rep.bracket * max(1.0, rep.ratio)
    assert np.isfinite(rep.ratio) and rep.ratio > 0


def test_hull_additivity_singletons():
    t = grid(64)
    z = np.zeros(t.size)
    hp1 = HukuharaPath.from_intervals(t, z + 1, z + 1, x0=0.5)
    hp2 = HukuharaPath.from_intervals(t, z - 3, z - 3, x0=-1.0)
    g = SampledPath(t, np.sin(t))
    rep = verify_th7(hp1, hp2, g)
    assert rep.identity_defect == pytest.approx(0, abs=1e-14)
    assert rep.inclusion_ok and all(v == 0 for v in rep.gaps.values())


def test_hull_additivity_interval_identity():
    t = grid(256)
    hp1 = smooth_interval_hp(t, (1.0, 3.0, 0.5, 0.2))
    hp2 = smooth_interval_hp(t, (-0.5, 2.0, 0.8, -0.1))
    g = fbm_path(FbmSpec(0.8, 256, seed=3))
    rep = verify_th7(hp1, hp2, g, n=16)
    assert rep.identity_defect < 1e-10
    assert rep.inclusion_ok


def test_perturbation_zero_perturbation():
    hp = ramp(64)
    assert np.array_equal(hp.dilate(0.0).Phi.lo, hp.Phi.lo)


def test_perturbation_ramp():
    hp = ramp(256)
    g = fbm_path(FbmSpec(0.8, 256, seed=1))
    rep = verify_cor22(hp, g)
    for k, v in rep.perturbation.items():
        assert v == pytest.approx(1 / k)
    assert rep.nonincreasing and rep.rate_ok
