from dataclasses import replace

import pytest

from leastaction import fixture as F
from leastaction.action import (ActionWindow, action_closed_form, action_profile, action_quadrature, action_report,
                                compare, cumulative_action, default_window, glued_action_coefficient,
                                region_action_density)
from leastaction.eos import DEFAULT_EOS, State, action_density
from leastaction.errors import DomainError, HorizonError
from leastaction.riemann import RiemannData
from leastaction.spacetime import Wild, build_1d_solution, build_glued_solution

RHO_M = 93.71793743725075
SIGMA = F.V_MINUS / (RHO_M - 1)
K_1D = F.k_1d(RHO_M, SIGMA)


def test_region_densities(fx):
    eos = DEFAULT_EOS
    assert action_density(eos, fx.data.left) == pytest.approx(F.A_MINUS, rel=1e-14)
    assert region_action_density(eos, Wild(3.0, 0.0, 0.0, F.C1)) == pytest.approx(F.A_WILD, rel=1e-14)
    assert action_density(eos, fx.sub.state) == F.A_1
    assert action_density(eos, State(60.0, 0.0, F.V2)) == pytest.approx(F.A_2, rel=1e-13)


def test_window_validation():
    for bad in [(0, 1, 1), (1, -1, 1), (1, 1, 0)]:
        with pytest.raises(DomainError):
            ActionWindow(*bad)


def test_fixture_coefficients(glued, oned, window):
    assert action_closed_form(glued, window) == pytest.approx(F.K_EX, rel=1e-12)
    assert action_closed_form(oned, window) == pytest.approx(K_1D, rel=1e-12)
    assert F.K_EX - K_1D == pytest.approx(F.k_ex_minus_k_1d(RHO_M, SIGMA), rel=1e-10)
    assert F.K_EX - K_1D < 0


def test_self_similar_scaling(fx):
    for T in (0.25, 1.0):
        assert glued_action_coefficient(fx.data, fx.sub, T) == pytest.approx(F.K_EX, rel=1e-12)
    oned = build_1d_solution(fx.data, 0.7)
    w = default_window([build_glued_solution(fx.data, fx.sub, 0.35, 0.7), oned], 0.7)
    assert action_closed_form(oned, w) / 0.49 == pytest.approx(K_1D, rel=1e-12)


def test_horizon_rejected(fx, glued):
    # a solution record carried past its horizon is refused by the integrator
    stretched = replace(glued, T=2.0)
    with pytest.raises(HorizonError):
        action_closed_form(stretched, ActionWindow(1.0, 60.0, 1.2))
    with pytest.raises(DomainError):
        action_closed_form(build_1d_solution(fx.data, 1.0), ActionWindow(1.0, 60.0, 1.5))


def test_constant_solution_exact():
    s = State(2.0, 0.3, -0.4)
    sol = build_1d_solution(RiemannData(s, s), 1.0)
    w = ActionWindow(1.5, 2.0, 1.0)
    a = action_density(DEFAULT_EOS, s)
    assert action_closed_form(sol, w) == pytest.approx(a * 4 * 1.5 * 2.0 * 1.0, rel=1e-14)
    assert action_quadrature(sol, w, (7, 9)) == pytest.approx(a * 12.0, rel=1e-13)


def test_profile_jump_at_seam(fx, glued, window):
    prof = action_profile(glued, window)
    jumps = prof.jumps()
    assert len(jumps) == 1
    t, d = jumps[0]
    assert t == 0.5
    assert d == pytest.approx(2 * window.L1 * (F.MU1 - F.MU0) * 0.5 * (F.A_1 - F.A_WILD), rel=1e-11)
    assert d < 0
    assert prof.integral() == pytest.approx(F.K_EX, rel=1e-12)


def test_1d_profile_linear(oned, window):
    prof = action_profile(oned, window)
    assert prof.jumps() == []
    slopes = {round(s.slope, 3) for s in prof.segments}
    expect = 2 * window.L1 * 2 * SIGMA * (action_density(DEFAULT_EOS, State(RHO_M)) - F.A_MINUS)
    assert len(slopes) == 1 and prof.segments[0].slope == pytest.approx(expect, rel=1e-11)
    assert prof(0.0) == pytest.approx(4 * window.L1 * window.L2 * F.A_MINUS, rel=1e-13)


def test_cumulative(fx, glued, oned):
    w_half = default_window([build_glued_solution(fx.data, fx.sub, 0.25, 0.5), build_1d_solution(fx.data, 0.5)],
                            0.5)
    cum = cumulative_action(action_profile(oned, w_half))
    assert cum(0.0) == 0.0
    assert cum(0.5) == pytest.approx(K_1D * 0.25, rel=1e-12)
    assert cum.final == pytest.approx(K_1D * 0.25, rel=1e-12)


def test_consistency_chain(glued, window):
    rep = action_report(glued, window)
    v = rep.value_closed_form
    assert rep.profile.integral() == pytest.approx(v, rel=1e-12)
    assert rep.cumulative.final == pytest.approx(v, rel=1e-12)
    assert rep.K == pytest.approx(F.K_EX, rel=1e-12)


def test_half_time_scaling(fx):
    w1 = default_window([build_glued_solution(fx.data, fx.sub, 0.5, 1.0)], 1.0)
    full = action_closed_form(build_glued_solution(fx.data, fx.sub, 0.5, 1.0), w1)
    w2 = ActionWindow(1.0, w1.L2 / 2, 0.5)
    half = action_closed_form(build_glued_solution(fx.data, fx.sub, 0.25, 0.5), w2)
    assert full / half == pytest.approx(4.0, rel=1e-12)


def test_half_domain_symmetry(oned, window):
    # the data is even in y up to v -> -v, which leaves every density unchanged
    prof = action_profile(oned, window)
    left = 2 * window.L1 * (F.A_MINUS * (window.L2 - SIGMA * 0.5)
                            + action_density(DEFAULT_EOS, State(RHO_M)) * SIGMA * 0.5)
    assert prof(0.5) == pytest.approx(2 * left, rel=1e-12)


def test_enlarging_L2_keeps_difference(glued, oned, window):
    c1 = compare(glued, oned, window)
    c2 = compare(glued, oned, ActionWindow(window.L1, 3 * window.L2, window.T))
    assert c2.difference == pytest.approx(c1.difference, rel=1e-9)
    assert c1.verdict == "a_lower"


def test_compare_crossing(glued, oned, window):
    c = compare(glued, oned, window)
    assert c.crossings == pytest.approx([0.701908481317808], rel=1e-10)
    t = c.crossings[0]
    assert float(c.cumulative_a(t)) == pytest.approx(float(c.cumulative_b(t)), rel=1e-10)
    assert c.to_dict()["verdict"] == "a_lower"


def test_compare_self(glued, window):
    c = compare(glued, glued, window)
    assert c.difference == 0.0 and c.verdict == "equal" and c.crossings == []


def test_window_clipping_warns(glued):
    with pytest.warns(UserWarning):
        action_closed_form(glued, ActionWindow(1.0, 10.0, 1.0))


def test_clipped_closed_form_matches_quadrature(glued):
    w = ActionWindow(1.0, 10.0, 1.0)
    with pytest.warns(UserWarning):
        exact = action_closed_form(glued, w)
        quad = action_quadrature(glued, w, (1023, 1023))
    assert quad == pytest.approx(exact, rel=2e-3)


def test_rarefaction_closed_form_vs_quadrature():
    sol = build_1d_solution(RiemannData(State(1.0, 0.0, -0.5), State(3.0, 0.0, 0.5)), 1.0)
    w = default_window([sol], 1.0)
    exact = action_closed_form(sol, w)
    q1 = action_quadrature(sol, w, (255, 255))
    q2 = action_quadrature(sol, w, (511, 511))
    assert abs(q2 - exact) < abs(q1 - exact)
    assert q2 == pytest.approx(exact, rel=1e-3)
    # clipped fan: nested quadrature path
    wc = ActionWindow(1.0, 0.5 * w.L2, 1.0)
    with pytest.warns(UserWarning):
        ec = action_closed_form(sol, wc)
        qc = action_quadrature(sol, wc, (511, 511))
    assert qc == pytest.approx(ec, rel=1e-3)
    with pytest.warns(UserWarning), pytest.raises(DomainError):
        action_profile(sol, wc)


@pytest.mark.parametrize("n", [255, 511])
def test_quadrature_converges_first_order(glued, window, n):
    e1 = action_quadrature(glued, window, (n, n)) - F.K_EX
    e2 = action_quadrature(glued, window, (2 * n + 1, 2 * n + 1)) - F.K_EX
    assert 1.7 < e1 / e2 < 2.3


def test_richardson_extrapolation(glued, window):
    a, b = 4095, 8191
    ea = action_quadrature(glued, window, (a, a))
    eb = action_quadrature(glued, window, (b, b))
    ext = (eb * b - ea * a) / (b - a)
    assert abs(ext - F.K_EX) / F.K_EX < 1e-6
