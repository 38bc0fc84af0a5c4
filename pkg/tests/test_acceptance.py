"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -v``)
and then asserts the same condition at the stated tolerance.
"""

import time

import numpy as np
import pytest

from setvar.experiments import ExperimentConfig, run_experiment
from setvar.fbm import FbmSpec, fbm_path, fbm_paths


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" [{detail}]" if detail else ""))
        return ok

    return report


def run_suite(name, **kw):
    start = time.perf_counter()
    r = run_experiment(ExperimentConfig(suite=name, seed=kw.pop("seed", 0), **kw))
    elapsed = time.perf_counter() - start
    checks = {c.name: c for c in r.checks}
    failed = [c.name for c in r.checks if not c.passed]
    return r, checks, failed, elapsed


def summary(checks, names):
    return ", ".join(f"{n}={checks[n].measured:.4g}" for n in names)


def test_criterion_01_variation(verdict):
    r, c, failed, dt = run_suite("variation", n=1024)
    ok = r.passed and dt < 60
    detail = summary(c, ["additivity_max_rel_defect", "jensen_max_ratio_p1.5", "jensen_max_ratio_p2",
                         "jensen_max_ratio_p3", "riesz_t2_p2"]) + f", {dt:.1f}s"
    assert verdict(1, "variation additivity, Jensen, Riesz identity", ok, detail), failed


def test_criterion_02_interpolant_variation(verdict):
    r, c, failed, dt = run_suite("ex1", n=4096)
    vps = [c[f"vp_level{k}"].measured for k in range(6)]
    ok = r.passed and dt < 60
    detail = "V_p=" + ", ".join(f"{v:.3g}" for v in vps) + ", " + summary(c, ["sup_error_final_over_range"])
    assert verdict(2, "interpolant V_p finite and increasing, sup error shrinks", ok, detail), failed


def test_criterion_03_young(verdict):
    r, c, failed, dt = run_suite("young", n=4096)
    ok = r.passed and dt < 60
    detail = summary(c, ["int_g_dg_t2", "fractional_rho_spread", "young_loeve_violations", "young_loeve_max_ratio"])
    assert verdict(3, "Young integral, fractional form, Young-Loeve bound", ok, detail), failed


def test_criterion_04_steiner(verdict):
    r, c, failed, dt = run_suite("steiner", instances=200)
    ok = r.passed and dt < 60
    detail = summary(c, ["interval_uniform_midpoint", "polygon_membership_defect", "polygon_linearity_defect",
                         "polygon_lipschitz_excess"])
    assert verdict(4, "Steiner midpoint, membership, linearity, Lipschitz", ok, detail), failed


def test_criterion_05_stitching_control(verdict):
    r, c, failed, dt = run_suite("ex2")
    ok = (
        r.passed
        and c["stitched_defect_t1"].measured == 0.5
        and c["f1_membership_defect"].measured == 0
        and c["f2_membership_defect"].measured == 0
    )
    detail = summary(c, ["stitched_defect_t1", "f1_membership_defect", "f2_membership_defect"])
    assert verdict(5, "stitched selection leaves the set by exactly 1/2", ok, detail), failed


def test_criterion_06_additivity(verdict):
    r, c, failed, dt = run_suite("th7", n=1024, n_selections=16)
    ok = r.passed and dt < 60
    detail = summary(c, ["member_identity_defect", "hull_inclusion_defect", "gap_n4", "gap_n64"])
    assert verdict(6, "additivity identity, hull inclusion, gap(64) < gap(4)", ok, detail), failed


def test_criterion_07_stability_constant(verdict):
    r, c, failed, dt = run_suite("th6", n=1024, instances=50)
    ok = r.passed and dt < 60
    detail = summary(c, ["max_ratio_n512", "max_ratio_n1024", "max_ratio_drift"]) + f", {dt:.1f}s"
    assert verdict(7, "empirical constant finite and stable under grid doubling", ok, detail), failed


def test_criterion_08_perturbation(verdict):
    r, c, failed, dt = run_suite("cor22", n=1024)
    ok = r.passed and dt < 60
    detail = ", ".join(f"e{k}={c[f'e_n{k}'].measured:.4g}" for k in (1, 2, 4, 8, 16))
    assert verdict(8, "hull error nonincreasing and e16 <= e1/4", ok, detail), failed


def test_criterion_09_approximation(verdict):
    r, c, failed, dt = run_suite("prop3", n=512, n_selections=16)
    ok = r.passed and dt < 60
    detail = summary(c, ["midpoint_error", "control_error", "control_reported_failure"])
    assert verdict(9, "approximation succeeds at 0.05, controlled failure at 1e-4", ok, detail), failed


def test_criterion_10_fbm(verdict):
    N, n = 10_000, 64
    X = fbm_paths(FbmSpec(0.5, n, 1.0, seed=2024), N)
    worst = 0.0
    for i, j in [(0, 64), (0, 1), (16, 48), (63, 64), (7, 40)]:
        var = np.var(X[:, j] - X[:, i], ddof=1)
        want = (j - i) / n
        worst = max(worst, abs(var - want) / (want * np.sqrt(2 / (N - 1))))
    a = fbm_path(FbmSpec(0.5, n, 1.0, seed=77))
    b = fbm_path(FbmSpec(0.5, n, 1.0, seed=77))
    same = a.values.tobytes() == b.values.tobytes()
    ok = worst < 3 and same
    assert verdict(10, "increment variance within 3 sigma, bitwise determinism", ok,
                   f"max z={worst:.3g}, bitwise={same}")
