import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from invform.errors import (
    DegeneratePhase,
    DelayUnsupported,
    Infeasible,
    NoFeasibleCrossover,
    RealFormUnavailable,
    ResonanceFrequency,
)
from invform.networks import (
    LagParams,
    LeadLagComplexParams,
    LeadLagRealParams,
    LeadParams,
    build_omega_p_equation,
    crossover_gamma,
    design_lag,
    design_lead,
    design_leadlag,
    lag_tf,
    lead_tf,
    leadlag_complex_tf,
    leadlag_complex_to_real,
    leadlag_real_tf,
    leadlag_real_to_complex,
    leadlag_response_pq,
    leadlag_search,
    proposition1,
    real_form_condition,
    solve_pq,
)
from invform.polyfreq import TransferFunction, poly_real_roots_positive, tf_eval
from invform.stability import measure_margins
from invform.targets import DesignTargets, targets_at_gain_crossover, targets_at_phase_crossover

from conftest import EXAMPLE_PLANT, deg

Q4_GBAR = EXAMPLE_PLANT * 0.1


def _polar(M, phi):
    return M * complex(math.cos(phi), math.sin(phi))


class TestSolvePQ:
    def test_unit_example(self):
        pq = solve_pq(math.sqrt(2), math.pi / 4)
        assert pq.P == pytest.approx(1.0) and pq.Q == pytest.approx(0.0, abs=1e-15)

    def test_lead_question_values(self):
        # P = tau w, Q = alpha tau w with the published alpha, tau
        pq = solve_pq(3.4957, deg(18.84))
        assert pq.P == pytest.approx(2.6317 * 3, rel=1e-3)
        assert pq.Q == pytest.approx(0.2590 * 2.6317 * 3, rel=1e-3)

    @given(st.floats(1e-2, 1e2), st.floats(-3.1, 3.1).filter(lambda p: abs(math.sin(p)) > 1e-6))
    def test_reconstruction(self, M, phi):
        assert abs(solve_pq(M, phi).response() - _polar(M, phi)) <= 1e-12 * M

    def test_degenerate(self):
        with pytest.raises(DegeneratePhase):
            solve_pq(2.0, 0.0)


class TestLeadLag1:
    def test_lead_question(self):
        p = design_lead(targets_at_gain_crossover(EXAMPLE_PLANT * 0.5, 3.0, deg(45)))
        assert p.alpha == pytest.approx(0.2590, rel=1e-3)
        assert p.tau == pytest.approx(2.6317, rel=1e-4)
        assert p.alpha * p.tau == pytest.approx(0.6817, rel=1e-4)

    def test_lead_boundary(self):
        phi = deg(30)
        with pytest.raises(Infeasible) as e:
            design_lead(DesignTargets(1 / math.cos(phi), phi, 1.0))
        assert e.value.reason == "magnitude"

    def test_lead_wrong_quadrant(self):
        with pytest.raises(Infeasible) as e:
            design_lead(DesignTargets(5.0, deg(-10), 1.0))
        assert e.value.reason == "phase"
        assert "no solutions with a Lead network" in str(e.value)

    def test_lag_question(self):
        p = design_lag(targets_at_gain_crossover(EXAMPLE_PLANT * 10, 1.0, deg(60)))
        assert p.alpha == pytest.approx(0.0829, rel=1e-3)
        assert p.tau == pytest.approx(25.3559, rel=1e-4)

    def test_lag_boundary(self):
        phi = deg(-30)
        with pytest.raises(Infeasible) as e:
            design_lag(DesignTargets(math.cos(phi), phi, 1.0))
        assert e.value.reason == "magnitude"

    def test_lag_with_injected_phase_crossover_pair(self):
        gm = 3.0
        p = design_lag(DesignTargets(2 / (gm * math.sqrt(29)), deg(-15.0685), 4.0))
        assert p.alpha == pytest.approx(0.11836, rel=1e-3)
        assert p.tau == pytest.approx(6.8390, rel=1e-3)

    def test_lag_infeasible_at_literal_phase_crossover(self):
        t = targets_at_phase_crossover(EXAMPLE_PLANT * 10, 4.0, 3.0)
        with pytest.raises(Infeasible):
            design_lag(t)

    @given(st.floats(1e-3, 0.5 * math.pi - 1e-3), st.floats(1.001, 50), st.floats(0.01, 100))
    def test_lead_response(self, phi, excess, w):
        M = excess / math.cos(phi)
        p = design_lead(DesignTargets(M, phi, w))
        assert 0 < p.alpha < 1 and p.tau > 0
        assert abs(tf_eval(lead_tf(p), w) - _polar(M, phi)) <= 1e-9 * M

    @given(st.floats(-0.5 * math.pi + 1e-3, -1e-3), st.floats(0.001, 0.999), st.floats(0.01, 100))
    def test_lag_response(self, phi, frac, w):
        M = frac * math.cos(phi)
        p = design_lag(DesignTargets(M, phi, w))
        assert 0 < p.alpha < 1 and p.tau > 0
        assert abs(tf_eval(lag_tf(p), w) - _polar(M, phi)) <= 1e-9 * max(M, 1e-3)

    def test_gain_is_carried(self):
        p = design_lead(DesignTargets(3.0, deg(20), 1.0), K=0.5)
        assert tf_eval(lead_tf(p), 1e-9) == pytest.approx(0.5)


class TestLeadLagResponse:
    def test_low_frequency(self):
        pq = leadlag_response_pq(LeadLagComplexParams(1.0, 2.0, 0.5, 3.0), 3e-9)
        assert abs(pq.P) < 1e-8 and abs(pq.Q) < 1e-8

    @given(st.floats(0.1, 10), st.floats(0.01, 100))
    def test_equal_damping(self, z, w):
        if abs(w - 1.0) < 1e-6:
            return
        pq = leadlag_response_pq(LeadLagComplexParams(1.0, z, z, 1.0), w)
        assert pq.P == pq.Q

    def test_resonance(self):
        with pytest.raises(ResonanceFrequency):
            leadlag_response_pq(LeadLagComplexParams(1.0, 2.0, 0.5, 3.0), 3.0)

    @given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.01, 100))
    def test_matches_transfer_function(self, z1, z2, wn, w):
        if abs(w - wn) < 1e-3 * wn:
            return
        p = LeadLagComplexParams(1.0, z1, z2, wn)
        got = leadlag_response_pq(p, w).response()
        assert abs(got - tf_eval(leadlag_complex_tf(p), w)) <= 1e-9 * abs(got)


class TestOmegaPEquation:
    def test_question_polynomial(self):
        tg = targets_at_gain_crossover(Q4_GBAR, 1.0, deg(45))
        gamma = crossover_gamma(tg)
        K = 0.1
        r2 = math.sqrt(2)
        assert gamma == pytest.approx((170 - 103 * r2 * K) / (103 * r2 * K - 202 * K * K), rel=1e-9)
        poly = build_omega_p_equation(Q4_GBAR, 3.0, gamma)
        roots = poly_real_roots_positive(poly)
        assert roots == pytest.approx([2.3686, 3.9591], abs=1e-3)
        # generic omega^2 coefficient 100 - 10 H - 10 gamma H + gamma H^2 with H = GM K
        H = 3.0 * K
        assert poly.coeffs[2] == pytest.approx(100 - 10 * H - 10 * gamma * H + gamma * H * H, rel=1e-12)

    def test_constant_plant_has_no_roots(self):
        c, gm, gamma = 0.5, 2.0, 0.7
        poly = build_omega_p_equation(TransferFunction([c], [1.0]), gm, gamma)
        assert poly.degree == 0
        assert poly.coeffs[0] == pytest.approx(gamma * gm * (c + gm * c * c) + 1 + gm * c)

    def test_roots_satisfy_crossover_relation(self):
        tg = targets_at_gain_crossover(Q4_GBAR, 1.0, deg(45))
        gamma, gm = crossover_gamma(tg), 3.0
        for wp in poly_real_roots_positive(build_omega_p_equation(Q4_GBAR, gm, gamma)):
            tp = targets_at_phase_crossover(Q4_GBAR, wp, gm)
            rhs = (tp.M - math.cos(tp.phi)) / (math.cos(tp.phi) - 1 / tp.M)
            assert abs(gamma - rhs) < 1e-6 * abs(gamma)

    def test_delay_rejected(self):
        with pytest.raises(DelayUnsupported):
            build_omega_p_equation(TransferFunction([1], [1, 1], delay=0.2), 2.0, 1.0)


class TestDesignLeadLag:
    def test_question(self):
        search = leadlag_search(Q4_GBAR, 1.0, deg(45), 3.0, K=0.1)
        byw = {round(c.omega_p, 4): c for c in search.candidates}
        assert set(byw) == {2.3686, 3.9591}
        acc = byw[2.3686]
        assert acc.accepted and all(v < 0 for v in (acc.phi1, acc.phi2, acc.psi1, acc.psi2))
        assert not byw[3.9591].accepted
        assert search.H == pytest.approx(0.3)

        sols = design_leadlag(Q4_GBAR, 1.0, deg(45), 3.0, K=0.1)
        assert len(sols) == 1
        p = sols[0].params
        assert p.zeta1 == pytest.approx(20.7474, rel=1e-4)
        assert p.zeta2 == pytest.approx(1.6747, rel=1e-4)
        assert p.omega_n == pytest.approx(0.2980, rel=1e-3)

    def test_question_meets_both_margins(self):
        sol = design_leadlag(Q4_GBAR, 1.0, deg(45), 3.0, K=0.1)[0]
        c = leadlag_complex_tf(sol.params, unity=True)
        lg = tf_eval(c, 1.0) * tf_eval(Q4_GBAR, 1.0)
        lp = tf_eval(c, sol.omega_p) * tf_eval(Q4_GBAR, sol.omega_p)
        assert abs(lg) == pytest.approx(1.0, abs=1e-6)
        assert np.angle(lg) == pytest.approx(deg(45) - math.pi, abs=1e-6)
        assert abs(lp) == pytest.approx(1 / 3, abs=1e-6)
        assert abs(abs(np.angle(lp)) - math.pi) < 1e-6

    def test_response_at_gain_crossover(self):
        sol = design_leadlag(Q4_GBAR, 1.0, deg(45), 3.0, K=0.1)[0]
        tg = targets_at_gain_crossover(Q4_GBAR, 1.0, deg(45))
        got = leadlag_response_pq(sol.params, 1.0).response()
        assert abs(got - tg.point) < 1e-6 * tg.M

    def test_identity_when_plant_already_meets_specs(self):
        g = EXAMPLE_PLANT * 0.5
        m = measure_margins(g)
        sols = design_leadlag(g, m.omega_g_list[0], m.pm, m.gm)
        p = sols[0].params
        assert p.zeta1 == p.zeta2
        assert abs(tf_eval(leadlag_complex_tf(p, unity=True), 0.7) - 1) < 1e-9

    def test_no_feasible_crossover(self):
        # first-order plant: the phase never reaches -180 deg
        with pytest.raises(NoFeasibleCrossover):
            design_leadlag(TransferFunction([2.0], [1.0, 1.0]), 1.0, deg(60), 2.0)

    def test_wrong_phase(self):
        with pytest.raises(Infeasible):
            design_leadlag(Q4_GBAR, 1.0, deg(170), 3.0)

    def test_sampled_search_matches_polynomial(self):
        a = leadlag_search(Q4_GBAR, 1.0, deg(45), 3.0, method="polynomial")
        b = leadlag_search(Q4_GBAR, 1.0, deg(45), 3.0, method="sampled")
        assert b.omega_p_candidates == pytest.approx(a.omega_p_candidates, rel=1e-9)

    def test_delay_plant_uses_sampling(self):
        g = TransferFunction(Q4_GBAR.num, Q4_GBAR.den, delay=0.05)
        sol = design_leadlag(g, 1.0, deg(45), 3.0, K=0.1)[0]
        m = measure_margins(leadlag_complex_tf(sol.params, unity=True) * g)
        i = int(np.argmin([abs(w - 1.0) for w in m.omega_g_list]))
        assert m.omega_g_list[i] == pytest.approx(1.0, rel=1e-6)
        assert m.pm_list[i] == pytest.approx(deg(45), abs=1e-6)
        j = int(np.argmin([abs(w - sol.omega_p) for w in m.omega_p_list]))
        assert m.gm_list[j] == pytest.approx(3.0, rel=1e-6)

    def test_gain_margin_must_exceed_one(self):
        with pytest.raises(ValueError):
            design_leadlag(Q4_GBAR, 1.0, deg(45), 1.0)


finite = st.floats(-10, 10).filter(lambda x: abs(x) > 1e-3)


class TestProposition1:
    @given(finite, finite, finite, finite, st.floats(0.1, 10), st.floats(0.1, 10))
    def test_equals_formal_positivity(self, f1, f2, s1, s2, wg, wp):
        if abs(wg - wp) < 1e-6:
            return
        d = wg * wg - wp * wp
        # zeta1, zeta2, omega_n real and positive exactly when these hold
        brute = f1 * f2 > 0 and s1 * s2 > 0 and d / f2 > 0 and d / s2 > 0
        assert proposition1(wg, wp, f1, f2, s1, s2) == brute

    @given(finite, finite, finite, finite, st.floats(0.1, 10), st.floats(0.1, 10))
    def test_real_form_condition_equals_damping_above_one(self, f1, f2, s1, s2, wg, wp):
        if abs(wg - wp) < 1e-6 or not proposition1(wg, wp, f1, f2, s1, s2):
            return
        d2 = (wg * wg - wp * wp) ** 2
        z1sq, z2sq = d2 / (4 * wg * wp * f1 * f2), d2 / (4 * wg * wp * s1 * s2)
        if min(abs(z1sq - 1), abs(z2sq - 1)) < 1e-9:
            return
        assert real_form_condition(wg, wp, f1, f2, s1, s2) == (z1sq > 1 and z2sq > 1)

    def test_real_form_condition_on_question(self):
        sol = design_leadlag(Q4_GBAR, 1.0, deg(45), 3.0, K=0.1)[0]
        c = sol.candidate
        assert real_form_condition(1.0, sol.omega_p, c.phi1, c.phi2, c.psi1, c.psi2)
        assert sol.real_forms
        # w_g w_p (w_g^2 - w_p^2)/4 is negative here, so it cannot be the bound
        assert 1.0 * sol.omega_p * (1 - sol.omega_p**2) / 4 < 0


class TestConversions:
    def test_equal_time_constants(self):
        c = leadlag_real_to_complex(LeadLagRealParams(1.0, 0.999999, 2.0, 2.0))
        assert c.zeta1 == pytest.approx(1.0) and c.omega_n == pytest.approx(0.5)
        assert c.zeta2 == pytest.approx(1.0, abs=1e-11)

    @given(st.floats(0.01, 0.99), st.floats(0.1, 10))
    def test_equal_taus_am_gm(self, a, tau):
        c = leadlag_real_to_complex(LeadLagRealParams(1.0, a, tau, tau))
        assert c.zeta2 == pytest.approx((a + 1 / a) / 2) and c.zeta2 >= 1

    def test_question_real_form(self):
        forms = leadlag_complex_to_real(LeadLagComplexParams(0.1, 20.747395714354706,
                                                             1.6747030159148613, 0.2979694769577182))
        alphas = sorted(f.alpha for f in forms)
        assert any(a == pytest.approx(0.0728, rel=2e-2) for a in alphas)
        for f in forms:
            assert {round(f.tau1, 2), round(f.tau2, 2)} == {139.18, 0.08}

    def test_unavailable(self):
        with pytest.raises(RealFormUnavailable):
            leadlag_complex_to_real(LeadLagComplexParams(1.0, 0.7, 2.0, 1.0))

    def test_equal_damping_gives_cancelling_form(self):
        p = LeadLagComplexParams(1.0, 2.0, 2.0, 1.5)
        forms = leadlag_complex_to_real(p)
        assert len(forms) == 1
        for w in (0.1, 1.0, 10.0):
            assert abs(tf_eval(leadlag_real_tf(forms[0]), w) - 1) < 1e-12

    @given(st.floats(1.001, 30), st.floats(1.001, 30), st.floats(0.05, 20))
    def test_round_trip_response(self, z1, z2, wn):
        p = LeadLagComplexParams(1.0, z1, z2, wn)
        w = np.geomspace(wn / 100, wn * 100, 100)
        ref = tf_eval(leadlag_complex_tf(p), w)
        forms = leadlag_complex_to_real(p)
        assert forms
        for f in forms:
            assert np.max(np.abs(tf_eval(leadlag_real_tf(f), w) - ref) / np.abs(ref)) < 1e-9
            back = leadlag_real_to_complex(f)
            assert back.zeta1 == pytest.approx(z1, rel=1e-9)
            assert back.zeta2 == pytest.approx(z2, rel=1e-9)
            assert back.omega_n == pytest.approx(wn, rel=1e-9)

    @given(st.floats(0.01, 0.99), st.floats(0.01, 100), st.floats(0.01, 100))
    def test_pole_zero_sets_match(self, a, t1, t2):
        # a double root moves by sqrt(eps) under rounding, so keep roots apart
        if abs(math.log(t1 / t2)) < 1e-3 or abs(math.log(a * a * t1 / t2)) < 1e-3:
            return
        r = LeadLagRealParams(1.0, a, t1, t2)
        c = leadlag_real_to_complex(r)
        real_tf, cplx_tf = leadlag_real_tf(r), leadlag_complex_tf(c)
        for x, y in ((real_tf.zeros(), cplx_tf.zeros()), (real_tf.poles(), cplx_tf.poles())):
            x, y = sorted(x, key=lambda z: (z.real, z.imag)), sorted(y, key=lambda z: (z.real, z.imag))
            for u, v in zip(x, y):
                assert abs(u - v) <= 1e-8 * max(abs(u), 1e-12)

    def test_transfer_function_templates(self):
        assert lead_tf(LeadParams(0.2590, 2.6317, 0.5)).num.coeffs == pytest.approx((0.5, 0.5 * 2.6317))
        assert lag_tf(LagParams(0.5, 2.0)).den.coeffs == (1.0, 2.0)
