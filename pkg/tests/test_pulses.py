"""Tests for pulse families: window integrals, total masses, moment kernels.

The Brownian path machinery is checked for exact-law marginals (variance of
the integral, path consistency under out-of-order queries) and the moment
kernels against brute-force quadrature/Monte Carlo.
"""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from heavyagg import heavy_tail as ht
from heavyagg import pulses
from heavyagg import streams


def rng_for(tag, index=0):
    return streams.stream(77, tag, index)


def pareto(alpha=1.5, x_min=1.0):
    return ht.RegVaryingDist(alpha, x_min)


# -- window integral closed forms ---------------------------------------------------


def test_rect_window_overlap():
    p = pulses.RealizedPulse("rect-indep", 3.0, amp=2.0)
    assert pulses.integrate_window(p, 1.0, 5.0) == pytest.approx(4.0)
    assert pulses.integrate_window(p, 0.0, 1.0) == pytest.approx(2.0)
    assert pulses.integrate_window(p, 3.0, 9.0) == 0.0


def test_zero_duration_pulse():
    p = pulses.RealizedPulse("rect-indep", 0.0, amp=5.0)
    assert pulses.integrate_window(p, 0.0, 10.0) == 0.0


def test_exp_damped_window():
    p = pulses.RealizedPulse("exp-damped", 2.0, amp=1.0)
    assert pulses.integrate_window(p, 0.0, 2.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)
    # window past the support adds nothing
    assert pulses.integrate_window(p, 0.0, 50.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)


def test_exp_damped_tiny_rate_limit():
    p = pulses.RealizedPulse("exp-damped", 4.0, amp=1e-13)
    assert pulses.integrate_window(p, 0.0, 4.0) == pytest.approx(4.0, rel=1e-9)


def test_window_validation():
    p = pulses.RealizedPulse("rect-indep", 1.0, amp=1.0)
    with pytest.raises(ValueError):
        pulses.integrate_window(p, 2.0, 1.0)
    with pytest.raises(ValueError):
        pulses.integrate_window(p, -1.0, 1.0)


def test_window_additivity_closed_forms():
    rng = rng_for("pl/additivity")
    models = [
        pulses.RectIndep(ht.UniformDist(0.5, 2.0), pareto()),
        pulses.RectCoupled(pareto(), 0.6),
        pulses.ExpDamped(ht.LowTailPowerDist(0.4), pareto()),
        pulses.OnOff(pareto(), ht.ExponentialDist(1.0)),
        pulses.Workload(pareto(2.5), ht.ExponentialDist(1.0)),
        pulses.RenewalReward(pareto(), pulses.RewardLaw("independent", dist=ht.UniformDist(0.0, 1.0))),
    ]
    for model in models:
        p = pulses.draw_pulse(model, rng)
        for a, b, c in [(0.0, 0.7, 1.9), (0.2, 1.0, 3.0)]:
            whole = pulses.integrate_window(p, a, c)
            split = pulses.integrate_window(p, a, b) + pulses.integrate_window(p, b, c)
            assert whole == pytest.approx(split, abs=1e-12), model.kind


def test_total_mass_equals_full_window():
    rng = rng_for("pl/mass")
    models = [
        pulses.RectIndep(ht.DegenerateDist(1.0), pareto()),
        pulses.RectCoupled(pareto(), 0.5),
        pulses.ExpDamped(ht.LowTailPowerDist(0.4), pareto()),
        pulses.OnOff(pareto(), ht.ExponentialDist(1.0)),
        pulses.Workload(pareto(2.5), ht.ExponentialDist(1.0)),
    ]
    for model in models:
        p = pulses.draw_pulse(model, rng)
        assert pulses.total_mass(p) == pytest.approx(
            pulses.integrate_window(p, 0.0, p.duration), rel=1e-12
        ), model.kind


def test_rect_coupled_mass_is_r():
    p = pulses.RealizedPulse("rect-coupled", 16.0**0.5, amp=16.0**0.5)
    assert pulses.total_mass(p) == pytest.approx(16.0)


def test_exp_damped_mass_long_duration_limit():
    p = pulses.RealizedPulse("exp-damped", 1e9, amp=1.0)
    assert pulses.total_mass(p) == pytest.approx(1.0, rel=1e-9)


def test_rect_coupled_p1_collapses_to_indicator():
    model = pulses.RectCoupled(pareto(), 1.0)
    p = pulses.draw_pulse(model, rng_for("pl/p1"))
    assert p.amp == pytest.approx(1.0)
    assert p.duration >= 1.0


# -- Brownian paths -------------------------------------------------------------------


def test_brownian_path_consistency_out_of_order():
    rng = rng_for("pl/bm-consistency")
    path = pulses.BrownianPath(rng)
    v2 = path.integral(0.0, 2.0)
    v1 = path.integral(0.0, 1.0)
    v12 = path.integral(1.0, 2.0)
    assert v1 + v12 == pytest.approx(v2, abs=1e-12)
    # repeated queries return stored values
    assert path.integral(0.0, 1.0) == v1


def test_brownian_integral_marginal_law():
    n = 40_000
    rng = rng_for("pl/bm-marginal")
    vals = np.empty(n)
    for i in range(n):
        path = pulses.BrownianPath(rng)
        vals[i] = path.integral(0.0, 2.0)
    # integral of B over [0, t] is N(0, t^3/3)
    assert stats.kstest(vals / math.sqrt(8.0 / 3.0), "norm").pvalue > 0.01


def test_brownian_insertion_preserves_law():
    """Midpoint value inserted after the endpoint is still N(0, t) marginally."""
    n = 30_000
    rng = rng_for("pl/bm-insert")
    mids = np.empty(n)
    for i in range(n):
        path = pulses.BrownianPath(rng)
        path.value_and_integral(2.0)
        mids[i] = path.value_and_integral(0.7)[0]
    assert stats.kstest(mids / math.sqrt(0.7), "norm").pvalue > 0.01


def test_brownian_mass_in_law():
    """Total mass of a Brownian pulse is Z * sqrt(R^3/3) in law."""
    n = 30_000
    rng = rng_for("pl/bm-mass")
    model = pulses.BrownianPulse(pareto(3.5))
    zs = np.empty(n)
    for i in range(n):
        p = pulses.draw_pulse(model, rng)
        zs[i] = pulses.total_mass(p) / math.sqrt(p.duration**3 / 3.0)
    assert stats.kstest(zs, "norm").pvalue > 0.01


# -- moment kernels -------------------------------------------------------------------


def test_mean_w_rect_indep():
    model = pulses.RectIndep(ht.UniformDist(0.0, 2.0), pareto())
    assert pulses.mean_W(model, 4.0) == pytest.approx(1.0 * 0.125)
    assert pulses.mean_W(model, 0.5) == pytest.approx(1.0)


def test_corr_kernel_against_monte_carlo():
    rng = rng_for("pl/kernel-mc")
    n = 60_000
    cases = [
        (pulses.RectIndep(ht.UniformDist(0.0, 2.0), pareto()), 0.8, 1.1),
        (pulses.RectCoupled(pareto(1.7), 0.7), 0.8, 1.1),
        (pulses.ExpDamped(ht.LowTailPowerDist(0.4), pareto()), 0.5, 0.9),
        (pulses.BrownianPulse(pareto(2.6)), 0.8, 1.1),
        (pulses.OnOff(pareto(), ht.ExponentialDist(1.0)), 0.8, 1.1),
        (pulses.Workload(pareto(5.0), ht.ExponentialDist(1.0)), 0.6, 0.8),
    ]
    for model, u, t in cases:
        vals = np.empty(40_000 if model.kind == "brownian" else n)
        for i in range(vals.size):
            p = pulses.draw_pulse(model, rng)
            if model.kind == "brownian":
                # W(t) is the path value itself; no window differencing needed
                if u + t <= p.duration:
                    vals[i] = p.path.value_and_integral(u)[0] * p.path.value_and_integral(u + t)[0]
                else:
                    vals[i] = 0.0
            else:
                eps = 1e-9
                wa = pulses.integrate_window(p, u - eps, u + eps) / (2 * eps)
                wb = pulses.integrate_window(p, u + t - eps, u + t + eps) / (2 * eps)
                vals[i] = wa * wb
        want = pulses.corr_kernel(model, u, t)
        se = np.std(vals) / math.sqrt(vals.size)
        assert abs(np.mean(vals) - want) < 4 * se + 1e-4, model.kind


def test_corr_kernel_integrates_to_known_covariance():
    """For the unit-amplitude rectangular family the u-integral has a closed form."""
    model = pulses.RectIndep(ht.DegenerateDist(1.0), pareto(1.5, 1.0))
    for t in (1.0, 2.0, 4.0):
        val, _ = integrate.quad(lambda u: pulses.corr_kernel(model, u, t), 0, np.inf, limit=200)
        assert val == pytest.approx(2.0 * t**-0.5, rel=1e-8)


def test_exp_damped_kernel_closed_form():
    model = pulses.ExpDamped(ht.LowTailPowerDist(0.4), pareto())
    u, t = 0.7, 1.3
    brute, _ = integrate.quad(
        lambda a: math.exp(-a * (2 * u + t)) * 0.4 * a ** (0.4 - 1.0), 0, 1.0
    )
    want = brute * float(pareto().survival(u + t))
    assert pulses.corr_kernel(model, u, t) == pytest.approx(want, rel=1e-8)


def test_workload_kernel_requires_finite_second_moment():
    model = pulses.Workload(pareto(1.5), ht.ExponentialDist(1.0))
    with pytest.raises(ValueError):
        pulses.corr_kernel(model, 1.0, 1.0)


# -- aged pulses ---------------------------------------------------------------------


def test_aged_pulse_age_law():
    model = pulses.RectIndep(ht.DegenerateDist(1.0), pareto())
    rng = rng_for("pl/age")
    ages = np.array([pulses.sample_aged_pulse(model, rng)[0] for _ in range(50_000)])
    cdf = lambda t: 1.0 - ht.residual_survival(pareto(), t)
    assert stats.kstest(ages, cdf).pvalue > 0.01


def test_aged_pulse_duration_exceeds_age():
    models = [
        pulses.RectIndep(ht.DegenerateDist(1.0), pareto()),
        pulses.RectCoupled(pareto(), 0.5),
        pulses.BrownianPulse(pareto(2.5)),
        pulses.OnOff(pareto(), ht.ExponentialDist(1.0)),
        pulses.RenewalReward(pareto(), pulses.vanishing_reward(0.5)),
    ]
    rng = rng_for("pl/age-dur")
    for model in models:
        for _ in range(200):
            age, p = pulses.sample_aged_pulse(model, rng)
            assert 0.0 <= age <= p.duration, model.kind


def test_on_off_cycle_mixture_marginals():
    """Length-biased sum cycle: E[Z] under the biased law is E[Z^2]/E[Z]."""
    model = pulses.OnOff(pareto(4.0, 1.0), ht.ExponentialDist(0.5))
    rng = rng_for("pl/cycle-lb")
    n = 120_000
    zs = np.empty(n)
    for i in range(n):
        _, p = pulses.sample_aged_pulse(model, rng)
        zs[i] = p.duration
    z_on, z_off = pareto(4.0, 1.0), ht.ExponentialDist(0.5)
    ez = z_on.mean() + z_off.mean()
    ez2 = z_on.moment(2.0) + 2 * z_on.mean() * z_off.mean() + z_off.moment(2.0)
    target = ez2 / ez
    # variance of the biased draw via third moments
    ez3 = (
        z_on.moment(3.0)
        + 3 * z_on.moment(2.0) * z_off.mean()
        + 3 * z_on.mean() * z_off.moment(2.0)
        + z_off.moment(3.0)
    )
    se = math.sqrt(max(ez3 / ez - target**2, 0.0) / n)
    assert abs(np.mean(zs) - target) < 3.5 * se


# -- reward laws ---------------------------------------------------------------------


def test_reward_law_independent():
    law = pulses.RewardLaw("independent", dist=ht.UniformDist(0.0, 2.0))
    z = np.array([1.0, 5.0, 10.0])
    assert np.allclose(law.cond_mean(z), 1.0)
    assert np.allclose(law.cond_moment2(z), 4.0 / 3.0)
    assert law.limit_expect(lambda w: w**2) == pytest.approx(4.0 / 3.0)


def test_vanishing_reward_default():
    law = pulses.vanishing_reward(0.5)
    z = np.array([0.0, 3.0, 80.0])
    assert np.allclose(law.cond_mean(z), 0.0, atol=1e-12)
    want = (1.0 + z) ** -1.0 / 3.0  # E(2U-1)^2 = 1/3
    assert np.allclose(law.cond_moment2(z), want, rtol=1e-9)
    assert law.limit_expect(lambda w: (w - 0.25) ** 2) == pytest.approx(0.0625)
    rng = rng_for("pl/reward")
    w = law.sample_given_z(np.full(200_000, 2.0), rng)
    assert np.all(np.abs(w) <= 3.0**-0.5 + 1e-12)
    assert abs(np.mean(w)) < 3 * np.std(w) / math.sqrt(w.size)


def test_mixture_pulse_moments():
    m1 = pulses.RectIndep(ht.DegenerateDist(1.0), pareto())
    m2 = pulses.ExpDamped(ht.LowTailPowerDist(0.4), pareto())
    mix = pulses.MixturePulse((m1, m2), (0.3, 0.7))
    t, u = 1.5, 0.8
    assert pulses.mean_W(mix, t) == pytest.approx(0.3 * pulses.mean_W(m1, t) + 0.7 * pulses.mean_W(m2, t))
    assert pulses.corr_kernel(mix, u, t) == pytest.approx(
        0.3 * pulses.corr_kernel(m1, u, t) + 0.7 * pulses.corr_kernel(m2, u, t)
    )
