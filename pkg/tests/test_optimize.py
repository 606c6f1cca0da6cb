import math

import numpy as np
import pytest

import closed_forms as cf
from macroreal.errors import DomainError, NonMonotoneError, UnknownSpecError
from macroreal.inequalities import evaluate, get_spec, wlgi3_catalog
from macroreal.optimize import (
    coordinate_ascent,
    critical_lambda,
    golden_section_max,
    lgi_critical_lambda,
    lgi_max,
    maximize_many,
    maximize_violation,
    stationarity_check,
)
from macroreal.qm import ModelParams

# Frozen from scipy.optimize.minimize / brentq applied to the closed forms in
# closed_forms.py (independent of this package's optimizer).
SHARP_MAX = 0.5042567955924608
SHARP_ARGMAX_THETA = 1.06664446
SHARP_ARGMAX_TAU = (1.00830372, 2.13328892)
CRITICAL_AT_ROUNDED_OPT = 0.6898426704009228

ROUNDED_OPT = (cf.THETA_OPT, cf.PHI_OPT, cf.TAU_OPT)


@pytest.fixture(scope="module")
def sharp_report():
    return maximize_violation("wlgi3-4", 1.0)


@pytest.fixture(scope="module")
def sharp_catalog():
    return maximize_many(wlgi3_catalog(), 1.0)


class TestLineSearch:
    def test_golden_section_quadratic(self):
        x, fx, evals = golden_section_max(lambda t: -(t - 0.3) ** 2, -1.0, 2.0)
        assert x == pytest.approx(0.3, abs=1e-9)
        assert fx == pytest.approx(0.0, abs=1e-15)
        assert evals > 10

    def test_golden_section_boundary_max(self):
        x, _, _ = golden_section_max(lambda t: t, 0.0, 1.0)
        assert x == pytest.approx(1.0, abs=1e-9)

    def test_coordinate_ascent_coupled_quadratic(self):
        def f(p):
            dx, dy = p["theta"] - 0.7, p["tau"] - 1.3
            return -(dx**2 + dy**2 + 0.8 * dx * dy)

        point, best, sweeps = coordinate_ascent(f, {"theta": 0.2, "tau": 0.5}, {"theta": 0.5, "tau": 1.0})
        assert point["theta"] == pytest.approx(0.7, abs=1e-3)
        assert point["tau"] == pytest.approx(1.3, abs=1e-3)
        assert best == pytest.approx(0.0, abs=1e-8)
        assert sweeps >= 2


class TestMaximize:
    def test_wlgi4_sharp(self, sharp_report):
        r = sharp_report
        assert r.best_value == pytest.approx(SHARP_MAX, abs=1e-9)
        assert r.best_value == pytest.approx(0.5043, abs=5e-4)
        assert r.best_params.theta == pytest.approx(SHARP_ARGMAX_THETA, abs=1e-4)
        assert min(abs(r.best_params.tau - t) for t in SHARP_ARGMAX_TAU) < 1e-4
        assert r.best_params.phi in (np.pi / 2, 3 * np.pi / 2)
        assert r.phi_pinned
        assert r.gradient_norm_at_optimum < 1e-3
        assert r.best_value >= r.grid_value
        assert r.fallback_value <= r.best_value + 1e-6
        assert r.margin == r.best_value

    def test_rounded_location(self, sharp_report):
        p = sharp_report.best_params
        assert abs(p.theta - 1.067) < 0.01
        assert min(abs(p.tau - 1.008), abs(p.tau - 2.133)) < 0.01

    def test_wlgi5a_sharp(self, sharp_catalog):
        r = next(r for r in sharp_catalog if r.spec_name == "wlgi3-5a")
        assert r.best_value == pytest.approx(0.5043, abs=5e-4)

    def test_no_catalog_spec_beats_eq4(self, sharp_catalog):
        for r in sharp_catalog:
            assert r.best_value <= 0.5043 + 1e-4, r.spec_name
            assert r.best_value <= 1.0
            assert r.best_value >= r.grid_value

    def test_value_is_reproduced_by_evaluate(self, sharp_report):
        assert evaluate(get_spec("wlgi3-4"), sharp_report.best_params).value == pytest.approx(
            sharp_report.best_value, abs=1e-15)

    def test_unknown_spec(self):
        with pytest.raises(UnknownSpecError):
            maximize_violation("nope")

    @pytest.mark.parametrize("lam", [0.0, 1.5])
    def test_lambda_domain(self, lam):
        with pytest.raises(DomainError):
            maximize_violation("wlgi3-4", lam)

    def test_unsharp_max_below_sharp(self):
        r = maximize_violation("wlgi3-4", 0.8, grid=(91, 315, 32))
        assert 0.0 < r.best_value < SHARP_MAX

    def test_nsit_maximum(self):
        r = maximize_violation("nsit", 1.0, grid=(61, 121, 16))
        assert r.best_value == pytest.approx(0.5, abs=1e-8)


class TestStationarity:
    def test_rounded_optimum_is_stationary(self):
        d_tau, d_theta = stationarity_check(cf.THETA_OPT, cf.TAU_OPT, np.pi / 2)
        assert abs(d_tau) < 1e-3 and abs(d_theta) < 1e-3

    def test_generic_point(self):
        d_tau, d_theta = stationarity_check(0.3, 0.3, np.pi / 2)
        assert math.hypot(d_tau, d_theta) > 0.1

    @pytest.mark.parametrize("phi", [np.pi / 2, 3 * np.pi / 2])
    def test_matches_analytic_gradient(self, phi):
        for theta in np.linspace(0.05, 1.5, 10):
            for tau in np.linspace(0.05, 3.0, 10):
                fd = stationarity_check(theta, tau, phi)
                exact = cf.wlgi4_sharp_grad(theta, phi, tau)
                assert fd == pytest.approx(exact, abs=1e-5)

    def test_phi_restricted(self):
        with pytest.raises(DomainError):
            stationarity_check(1.0, 1.0, 1.0)


class TestCriticalLambda:
    def test_rounded_optimum(self):
        res = critical_lambda("wlgi3-4", ROUNDED_OPT)
        assert res.violated
        assert res.value == pytest.approx(0.69, abs=0.005)
        assert res.value == pytest.approx(CRITICAL_AT_ROUNDED_OPT, abs=1e-8)

    def test_bracketing(self):
        lc = critical_lambda("wlgi3-4", ROUNDED_OPT).value
        spec = get_spec("wlgi3-4")
        for lam in np.linspace(lc + 1e-6, 1.0, 25):
            assert evaluate(spec, ModelParams(*ROUNDED_OPT, lam)).value > 0
        for lam in np.linspace(1e-3, lc - 1e-6, 25):
            assert evaluate(spec, ModelParams(*ROUNDED_OPT, lam)).value <= 0

    def test_profile_is_monotone(self):
        lams = np.linspace(0.01, 1.0, 100)
        vals = [evaluate(get_spec("wlgi3-4"), ModelParams(*ROUNDED_OPT, lam)).value for lam in lams]
        assert np.all(np.diff(vals) >= 0)

    @pytest.mark.parametrize("point", [(0.0, np.pi / 2, 1.0), (np.pi / 4, 3 * np.pi / 2, np.pi / 4)])
    def test_no_violation(self, point):
        spec = "wlgi3-4" if point[0] == 0.0 else "nsit"
        res = critical_lambda(spec, point)
        assert res.value == 1.0 and not res.violated

    def test_non_monotone_profile(self):
        # exceeds the bound at intermediate sharpness, falls back below at lam=1
        point = (np.pi / 60, np.pi / 2, 0.35 * np.pi)
        spec = get_spec("wlgi3-4")
        assert evaluate(spec, ModelParams(*point, 0.98)).value > 0
        assert evaluate(spec, ModelParams(*point, 1.0)).value < 0
        with pytest.raises(NonMonotoneError):
            critical_lambda("wlgi3-4", point)

    def test_nonequivalence(self):
        assert critical_lambda("wlgi3-4", ROUNDED_OPT).value < lgi_critical_lambda(3) - 0.1

    def test_lgi_spec_agrees_with_formula(self):
        res = critical_lambda("lgi:3", (0.0, 0.0, np.pi / 6))
        assert res.value == pytest.approx(lgi_critical_lambda(3), abs=1e-8)


class TestLGICritical:
    def test_three(self):
        assert lgi_critical_lambda(3) == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
        assert lgi_critical_lambda(3) == pytest.approx(0.816497, abs=1e-6)

    def test_four(self):
        assert lgi_critical_lambda(4) == pytest.approx(0.5**0.25, abs=1e-12)
        assert lgi_critical_lambda(4) == pytest.approx(0.840896, abs=1e-6)

    def test_increasing(self):
        vals = [lgi_critical_lambda(n) for n in range(3, 101)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert 0.98 < vals[-1] < 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            lgi_critical_lambda(2)

    @pytest.mark.parametrize("n", range(3, 9))
    @pytest.mark.parametrize("lam", [0.6, 1.0])
    def test_numerical_max_matches_n_cos(self, n, lam):
        k, tau = lgi_max(n, lam)
        assert k == pytest.approx(lam**2 * n * math.cos(math.pi / n), abs=1e-9)
        assert cf.k_n(n, tau, lam) == pytest.approx(k, abs=1e-12)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_threshold_is_where_max_hits_bound(self, n):
        k, _ = lgi_max(n, lgi_critical_lambda(n))
        assert k == pytest.approx(n - 2, abs=1e-9)
