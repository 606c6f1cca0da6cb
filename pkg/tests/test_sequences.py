from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import closed_forms as cf
from macroreal.errors import DomainError
from macroreal.sequences import (
    Event,
    MeasurementPlan,
    correlation,
    joint_probability,
    outcome_table,
    single_time_probability,
)

thetas = st.floats(0.0, np.pi / 2)
phis = st.floats(0.0, 2 * np.pi)
taus = st.floats(0.0, 2 * np.pi)
lams = st.floats(1e-3, 1.0)


def plan(theta=0.0, phi=0.0, tau=0.0, lam=1.0, n=3):
    return MeasurementPlan(n, tau, lam, theta, phi)


class TestEvent:
    def test_parse_roundtrip(self):
        ev = Event.parse("2+,3-")
        assert ev.outcomes == ((2, 1), (3, -1))
        assert str(ev) == "2+,3-"

    def test_flipped(self):
        assert Event.parse("1+,3-").flipped() == Event.parse("1-,3+")

    @pytest.mark.parametrize("bad", ["", "2+,1-", "0+", "2*", "1+,1-"])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            Event.parse(bad)

    def test_index_beyond_plan(self):
        with pytest.raises(DomainError):
            joint_probability(plan(n=2), Event.parse("1+,3+"))

    def test_satisfied_by(self):
        ev = Event.parse("1+,3-")
        assert ev.satisfied_by((1, -1, -1))
        assert not ev.satisfied_by((1, 1, 1))


class TestJointProbability:
    @settings(max_examples=50)
    @given(thetas, phis, taus)
    def test_sharp_pp12_closed_form(self, theta, phi, tau):
        got = joint_probability(plan(theta, phi, tau), Event.parse("1+,2+"))
        assert got == pytest.approx(cf.sharp_pp12(theta, tau), abs=1e-12)

    def test_trivial_single(self):
        assert joint_probability(plan(0.0, 1.0, 0.0), Event.parse("1+")) == pytest.approx(1.0)

    def test_unsharp_terms_match_wlgi4_closed_form(self):
        p = plan(cf.THETA_OPT, cf.PHI_OPT, cf.TAU_OPT, 0.8)
        value = (joint_probability(p, Event.parse("2+,3-"))
                 - joint_probability(p, Event.parse("1+,2+"))
                 - joint_probability(p, Event.parse("1-,3-")))
        assert value == pytest.approx(cf.wlgi4_unsharp(cf.THETA_OPT, cf.PHI_OPT, cf.TAU_OPT, 0.8), abs=1e-12)

    def test_unsharp_individual_terms(self):
        # each term written as an explicit operator product with numpy as the oracle
        theta, phi, tau, lam = cf.THETA_OPT, cf.PHI_OPT, cf.TAU_OPT, 0.8
        psi = np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])
        rho = np.outer(psi, psi.conj())
        u = np.cos(tau) * np.eye(2) - 1j * np.sin(tau) * np.array([[0, 1], [1, 0]])
        fp = np.diag([(1 + lam) / 2, (1 - lam) / 2])
        fm = np.eye(2) - fp
        sp, sm = np.sqrt(fp), np.sqrt(fm)
        ud = u.conj().T
        u2 = u @ u
        p23 = np.trace(u @ sp @ (u @ rho @ ud) @ sp @ ud @ fm).real
        p12 = np.trace(u @ sp @ rho @ sp @ ud @ fp).real
        p13 = np.trace(u2 @ sm @ rho @ sm @ u2.conj().T @ fm).real
        p = plan(theta, phi, tau, lam)
        assert joint_probability(p, Event.parse("2+,3-")) == pytest.approx(p23, abs=1e-14)
        assert joint_probability(p, Event.parse("1+,2+")) == pytest.approx(p12, abs=1e-14)
        assert joint_probability(p, Event.parse("1-,3-")) == pytest.approx(p13, abs=1e-14)

    def test_null_prefix_gives_zero(self):
        assert joint_probability(plan(0.0, 0.0, 0.4), Event.parse("1-,2+,3+")) == 0.0

    @settings(max_examples=40)
    @given(thetas, phis, taus, lams, st.sampled_from([(1,), (1, 2), (2, 3), (1, 3), (1, 2, 3)]))
    def test_normalization(self, theta, phi, tau, lam, idx):
        total = sum(outcome_table(plan(theta, phi, tau, lam), idx).values())
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_broadcasts_over_arrays(self):
        tau = np.linspace(0, 3, 11)
        theta = np.linspace(0, 1.5, 4)[:, None]
        got = joint_probability(plan(theta, 0.0, tau), Event.parse("1+,2+"))
        assert got.shape == (4, 11)
        np.testing.assert_allclose(got, cf.sharp_pp12(theta, tau), atol=1e-12)


class TestSingleTime:
    def test_half_after_eighth_period(self):
        assert single_time_probability(plan(0.0, 0.0, np.pi / 4), 2, 1) == pytest.approx(0.5, abs=1e-15)

    @given(thetas, phis, taus, lams, st.integers(1, 3))
    def test_complete(self, theta, phi, tau, lam, k):
        p = plan(theta, phi, tau, lam)
        assert single_time_probability(p, k, 1) + single_time_probability(p, k, -1) == pytest.approx(1.0, abs=1e-12)

    def test_nsit_gap_at_sharp_maximum(self):
        p = plan(np.pi / 4, np.pi / 2, np.pi / 4)
        marginal = joint_probability(p, Event.parse("1+,2+")) + joint_probability(p, Event.parse("1-,2+"))
        single = single_time_probability(p, 2, 1)
        assert single - marginal == pytest.approx(0.5, abs=1e-12)


class TestCorrelation:
    def test_no_evolution(self):
        assert correlation(plan(0.3, 0.1, 0.0), 1, 2) == pytest.approx(1.0)

    def test_eighth_period(self):
        assert correlation(plan(0.3, 0.1, np.pi / 4), 1, 2) == pytest.approx(0.0, abs=1e-15)

    def test_half_sharpness(self):
        assert correlation(plan(0.3, 0.1, np.pi / 6, 0.5), 1, 2) == pytest.approx(0.125, abs=1e-14)

    def test_requires_ordered_pair(self):
        with pytest.raises(DomainError):
            correlation(plan(), 2, 1)

    @settings(max_examples=50)
    @given(thetas, phis, taus, lams)
    def test_lambda_squared_scaling(self, theta, phi, tau, lam):
        unsharp = correlation(plan(theta, phi, tau, lam), 1, 2)
        sharp = correlation(plan(theta, phi, tau, 1.0), 1, 2)
        assert unsharp == pytest.approx(lam**2 * sharp, abs=1e-10)
        assert unsharp == pytest.approx(cf.correlator(tau, lam), abs=1e-10)

    @settings(max_examples=30)
    @given(thetas, phis, thetas, phis, taus, lams, st.sampled_from([(1, 2), (2, 3), (1, 3)]))
    def test_state_independent(self, t1, p1, t2, p2, tau, lam, pair):
        a = correlation(plan(t1, p1, tau, lam), *pair)
        b = correlation(plan(t2, p2, tau, lam), *pair)
        assert a == pytest.approx(b, abs=1e-10)

    def test_non_adjacent_pair(self):
        tau = 0.37
        assert correlation(plan(0.5, 1.0, tau, 0.9), 1, 3) == pytest.approx(cf.correlator(2 * tau, 0.9), abs=1e-12)


class TestPlan:
    @pytest.mark.parametrize("kwargs", [dict(n_times=0, tau=0.1), dict(n_times=2.5, tau=0.1),
                                        dict(n_times=2, tau=0.1, lam=0.0)])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            MeasurementPlan(**kwargs)

    def test_all_outcome_strings_listed(self):
        table = outcome_table(plan(0.2, 0.3, 0.4, 0.9), (1, 2, 3))
        assert set(table) == set(product((1, -1), repeat=3))
