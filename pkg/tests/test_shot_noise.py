"""Shot-noise sampler, covariance oracle, and regime table."""

import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from heavyagg import heavy_tail as ht
from heavyagg import numerics as nm
from heavyagg import pulses as pl
from heavyagg import shot_noise as sn
from heavyagg import streams

SEED = 55


def rng_for(tag, index=0):
    return streams.stream(SEED, tag, index)


def rect_unit_source(alpha=1.5):
    return sn.ShotNoiseSource(
        pl.RectIndep(A=ht.DegenerateDist(1.0), R=ht.RegVaryingDist(alpha, 1.0))
    )


def exp_damped_source(rho=1.2, kappa=0.5):
    return sn.ShotNoiseSource(
        pl.ExpDamped(A=ht.LowTailPowerDist(kappa), R=ht.RegVaryingDist(rho, 1.0))
    )


# -- construction ------------------------------------------------------------------


def test_cycle_pulse_rejected():
    cyc = pl.OnOff(Zon=ht.RegVaryingDist(1.5, 1.0), Zoff=ht.ExponentialDist(1.0))
    with pytest.raises(ValueError, match="cycle"):
        sn.ShotNoiseSource(cyc)


def test_infinite_mean_duration_rejected():
    with pytest.raises(ValueError, match="infinite"):
        sn.ShotNoiseSource(pl.RectIndep(A=ht.DegenerateDist(1.0), R=ht.RegVaryingDist(0.9, 1.0)))


def test_square_integrability_windows_enforced():
    with pytest.raises(ValueError, match="2 - p"):
        sn.ShotNoiseSource(pl.RectCoupled(R=ht.RegVaryingDist(1.1, 1.0), p=0.5))
    with pytest.raises(ValueError, match="> 2"):
        sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(1.8, 1.0)))
    with pytest.raises(ValueError, match="rate"):
        sn.ShotNoiseSource(rect_unit_source().pulse, rate=0.0)


def test_null_pulse_integrates_to_zero():
    src = sn.ShotNoiseSource(pl.RectIndep(A=ht.DegenerateDist(0.0), R=ht.RegVaryingDist(1.5, 1.0)))
    rng = rng_for("null")
    assert sn.integrated_sample(src, 5.0, rng) == 0.0
    assert np.all(sn.integrated_sample_batch(src, 5.0, rng, 50) == 0.0)


# -- mean and variance against closed forms ----------------------------------------


def test_mean_matches_t_times_level():
    # E R = 3 for a unit-scale tail-1.5 duration, so the T=10 window integrates to 30.
    src = rect_unit_source()
    assert src.mean_level() == pytest.approx(3.0)
    vals = sn.integrated_sample_batch(src, 10.0, rng_for("mean"), 100_000)
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - 30.0) <= 3.0 * se


def test_exp_damped_mean_level():
    src = exp_damped_source()
    vals = sn.integrated_sample_batch(src, 20.0, rng_for("mean-exp"), 30_000)
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - 20.0 * src.mean_level()) <= 3.5 * se


def _variance_check(src, T, n, tag):
    vals = sn.integrated_sample_batch(src, T, rng_for(tag), n)
    s2 = vals.var(ddof=1)
    centered = vals - vals.mean()
    se_var = math.sqrt((np.mean(centered**4) - s2**2) / n)
    oracle = sn.integral_variance(src, T)
    assert abs(s2 - oracle) <= 3.5 * se_var


def test_variance_identity_rect():
    _variance_check(rect_unit_source(), 64.0, 20_000, "var-rect")


def test_variance_identity_exp_damped():
    _variance_check(exp_damped_source(), 16.0, 20_000, "var-exp")


def test_variance_identity_mixture():
    mix = pl.MixturePulse(
        components=(rect_unit_source().pulse, exp_damped_source().pulse), weights=(0.5, 0.5)
    )
    _variance_check(sn.ShotNoiseSource(mix), 8.0, 20_000, "var-mix")


# -- covariance oracle ---------------------------------------------------------------


def test_covariance_rect_closed_form():
    src = rect_unit_source()
    assert sn.covariance_oracle(src, 4.0) == pytest.approx(1.0, rel=1e-12)
    assert sn.covariance_oracle(src, 0.5) == pytest.approx(2.5, rel=1e-12)
    assert sn.covariance_oracle(src, 0.0) == pytest.approx(3.0, rel=1e-12)


def test_covariance_exp_damped_limit_constant():
    rho, kappa = 1.2, 0.5
    src = exp_damped_source(rho, kappa)
    c_x = special.gamma(kappa + 1) * special.hyp2f1(kappa, 1.0, kappa + rho, -1.0) / (kappa + rho - 1)
    for t in (4_000.0, 8_000.0):
        assert t ** (rho + kappa - 1) * sn.covariance_oracle(src, t) == pytest.approx(c_x, rel=1e-4)


def test_covariance_brownian_closed_form():
    rho = 2.5
    src = sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(rho, 1.0)))
    c_x = 1.0 / ((rho - 1.0) * (rho - 2.0))
    for t in (2.0, 10.0):
        assert sn.covariance_oracle(src, t) == pytest.approx(c_x * t ** (2 - rho), rel=1e-8)


def test_covariance_rect_coupled_closed_form():
    rho, p = 1.7, 0.8
    src = sn.ShotNoiseSource(pl.RectCoupled(R=ht.RegVaryingDist(rho, 1.0), p=p))
    t = 2.0

    # independent route: Cov(t) = E[ R^{2-2p} (R^p - t)_+ ]
    brute, _ = integrate.quad(
        lambda r: r ** (2 - 2 * p) * (r**p - t) * rho * r ** (-1 - rho),
        t ** (1.0 / p),
        np.inf,
        limit=400,
    )
    got = sn.covariance_oracle(src, t)
    assert got == pytest.approx(brute, rel=1e-7)

    c_x = rho * p / ((rho + 2 * p - 2) * (rho + p - 2))
    assert got == pytest.approx(c_x * t ** (-(rho + p - 2) / p), rel=1e-7)


# -- regime table ---------------------------------------------------------------------


def test_regime_examples():
    spec = sn.regime_of(rect_unit_source(), gamma=1.0)
    assert spec.gamma0 == pytest.approx(0.5)
    assert spec.limit_kind == "FBS"
    assert spec.H == pytest.approx(1.25)

    coupled = sn.ShotNoiseSource(pl.RectCoupled(R=ht.RegVaryingDist(1.5, 1.0), p=0.75))
    spec = sn.regime_of(coupled, gamma=0.5)
    assert spec.gamma0 == pytest.approx(1.0)
    assert spec.limit_kind == "StableSheet"
    assert spec.H == pytest.approx(1.0)
    assert spec.alpha == pytest.approx(1.5)

    spec = sn.regime_of(exp_damped_source(1.2, 0.5), gamma=0.7)
    assert spec.limit_kind == "Intermediate"
    assert spec.H == pytest.approx(1.0)
    assert spec.alpha == pytest.approx(1.7)


def test_regime_constants_frozen():
    # fast branch: C_W^2 = c_X / ((2 H1 - 1) H1) with c_X = 2, H1 = 0.75
    fast = sn.regime_of(rect_unit_source(), gamma=1.0)
    assert fast.constants["c_X"] == pytest.approx(2.0)
    assert fast.constants["C_W"] == pytest.approx(math.sqrt(16.0 / 3.0), rel=1e-12)

    # slow branch: totally skewed 1.5-stable with sigma^1.5 = sqrt(2 pi)
    slow = sn.regime_of(rect_unit_source(), gamma=0.25)
    params = slow.constants["stable"]
    assert params.beta == pytest.approx(1.0)
    assert params.sigma**1.5 == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-12)
    assert slow.H == pytest.approx(1.25 / 1.5)


def test_regime_brownian_symmetric_tails():
    rho = 2.5
    src = sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(rho, 1.0)))
    spec = sn.regime_of(src, gamma=1.0)
    assert spec.limit_kind == "StableSheet"
    assert spec.alpha == pytest.approx(5.0 / 3.0)
    assert spec.constants["c_plus"] == spec.constants["c_minus"]
    assert spec.constants["stable"].beta == 0.0

    # absolute Gaussian moment behind c_+: quadrature vs the closed form used inside
    q = spec.alpha
    brute, _ = integrate.quad(lambda z: 2 * z**q * math.exp(-z * z / 2) / math.sqrt(2 * math.pi), 0, np.inf)
    closed = 2.0 ** (q / 2) * special.gamma((q + 1) / 2) / math.sqrt(math.pi)
    assert closed == pytest.approx(brute, rel=1e-10)
    assert spec.constants["c_plus"] == pytest.approx(0.5 * brute * 3.0 ** (-rho / 3.0), rel=1e-9)


def test_exp_damped_tail_constant_matches_exact_tail():
    # P((1 - e^{-AR})/A > x) has the exact value c_+ x^{-(rho+kappa)} once x >= 1,
    # computable directly by integrating the duration tail over the damping law.
    # tanh-sinh quadrature resolves the log-scale boundary layer at a*x -> 1.
    import mpmath as mp

    rho, kappa = 1.2, 0.5
    spec = sn.regime_of(exp_damped_source(rho, kappa), gamma=0.3)
    x = mp.mpf(1000)

    def integrand(a):
        if a * x >= 1:
            return mp.mpf(0)
        thresh = -mp.log1p(-a * x) / a
        return thresh ** (-rho) * kappa * a ** (kappa - 1)

    tail = mp.quad(integrand, [0, 1 / x])
    assert float(x ** (rho + kappa) * tail) == pytest.approx(spec.constants["c_plus"], rel=1e-9)


def test_regime_h_continuous_at_gamma0():
    sources = [
        rect_unit_source(),
        sn.ShotNoiseSource(pl.RectCoupled(R=ht.RegVaryingDist(1.7, 1.0), p=0.8)),
        exp_damped_source(),
        sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(2.5, 1.0))),
    ]
    for src in sources:
        g0 = sn.regime_of(src, 0.1).gamma0
        above = sn.regime_of(src, g0 + 1e-10)
        below = sn.regime_of(src, g0 - 1e-10)
        at = sn.regime_of(src, g0)
        assert above.limit_kind == "FBS" and below.limit_kind == "StableSheet"
        assert at.limit_kind == "Intermediate"
        assert abs(above.H - below.H) <= 1e-9
        assert abs(at.H - above.H) <= 1e-9


def test_regime_window_rejections():
    with pytest.raises(ValueError, match="duration tail"):
        sn.regime_of(rect_unit_source(alpha=2.5), gamma=1.0)
    with pytest.raises(ValueError, match="alpha \\+ kappa"):
        sn.regime_of(exp_damped_source(1.8, 0.5), gamma=1.0)
    with pytest.raises(ValueError, match="\\(2,3\\)"):
        sn.regime_of(sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(3.5, 1.0))), gamma=1.0)
    with pytest.raises(ValueError, match="gamma"):
        sn.regime_of(rect_unit_source(), gamma=0.0)


# -- stationarity and superposition ---------------------------------------------------


def test_retiming_leaves_law_unchanged():
    src = rect_unit_source()
    a = sn.integrated_sample_batch(src, 4.0, rng_for("shift-a"), 10_000)
    b = sn.integrated_sample_batch(src, 4.0, rng_for("shift-b"), 10_000, origin=3.0)
    assert stats.ks_2samp(a, b).pvalue > 0.01
    se = math.hypot(a.std(ddof=1), b.std(ddof=1)) / math.sqrt(a.size)
    assert abs(a.mean() - b.mean()) <= 3.5 * se


def test_retiming_brownian_pulse():
    src = sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(2.5, 1.0)))
    a = sn.integrated_sample_batch(src, 4.0, rng_for("shift-bm-a"), 8_000)
    b = sn.integrated_sample_batch(src, 4.0, rng_for("shift-bm-b"), 8_000, origin=2.5)
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_superposition_of_two_half_rate_sources():
    p1 = rect_unit_source().pulse
    p2 = pl.ExpDamped(A=ht.LowTailPowerDist(0.6), R=ht.RegVaryingDist(1.3, 1.0))
    mix = sn.ShotNoiseSource(pl.MixturePulse(components=(p1, p2), weights=(0.5, 0.5)))
    half1 = sn.ShotNoiseSource(p1, rate=0.5)
    half2 = sn.ShotNoiseSource(p2, rate=0.5)

    n, T = 1_000_000, 2.0
    a = sn.integrated_sample_batch(mix, T, rng_for("super-mix"), n)
    b = sn.integrated_sample_batch(half1, T, rng_for("super-1"), n) + sn.integrated_sample_batch(
        half2, T, rng_for("super-2"), n
    )
    for theta in (0.25, 0.5, 1.0, 2.0, 4.0):
        ea, eb = np.exp(1j * theta * a), np.exp(1j * theta * b)
        diff = ea.mean() - eb.mean()
        se_re = math.hypot(ea.real.std(ddof=1), eb.real.std(ddof=1)) / math.sqrt(n)
        se_im = math.hypot(ea.imag.std(ddof=1), eb.imag.std(ddof=1)) / math.sqrt(n)
        assert abs(diff.real) <= 3.0 * se_re
        assert abs(diff.imag) <= 3.0 * se_im


# -- intermediate-limit characteristic function ---------------------------------------


def test_compensated_trig_helpers():
    import mpmath as mp

    mp.mp.dps = 60  # the z=1e-12 references cancel down to 1e-50
    for z in (1e-12, 1e-8, 1e-4, 9.9e-4, 1.1e-3, 0.5, 3.0, -2.2, -1e-5):
        zz = mp.mpf(z)
        assert nm.cos_minus_one(z) == pytest.approx(float(mp.cos(zz) - 1), rel=1e-8, abs=1e-300)
        assert nm.sin_minus_z(z) == pytest.approx(float(mp.sin(zz) - zz), rel=1e-8, abs=1e-300)
        assert nm.one_minus_cos_minus_half_sq(z) == pytest.approx(
            float(1 - mp.cos(zz) - zz * zz / 2), rel=1e-8, abs=1e-300
        )


def split_levy_quad(f, rho, c_rho, break_r):
    """Integrate a complex f against rho c r^{-1-rho} dr, split at the kink.

    Head segment runs in the q = sqrt(r) variable so the adaptive rule is not
    starved by the r^{1-rho}-type endpoint singularity.
    """

    def w(r):
        return f(r) * rho * c_rho * r ** (-1 - rho)

    sq = math.sqrt(break_r)
    re1, _ = integrate.quad(lambda q: w(q * q).real * 2 * q, 0.0, sq, limit=300)
    im1, _ = integrate.quad(lambda q: w(q * q).imag * 2 * q, 0.0, sq, limit=300)
    re2, _ = integrate.quad(lambda r: w(r).real, break_r, np.inf, limit=300)
    im2, _ = integrate.quad(lambda r: w(r).imag, break_r, np.inf, limit=300)
    return complex(re1 + re2, im1 + im2)


def brute_rect_logchf(theta, x, y, rho, c_rho):
    """Independent route: numeric inner integral over arrival positions."""

    def overlap(u, r):
        return max(0.0, min(u + r, x) - max(u, 0.0))

    def inner(r):
        kinks = sorted({p for p in (0.0, x - r) if -r < p < x})
        re, _ = integrate.quad(
            lambda u: nm.cos_minus_one(theta * overlap(u, r)), -r, x, points=kinks, limit=200
        )
        im, _ = integrate.quad(
            lambda u: nm.sin_minus_z(theta * overlap(u, r)), -r, x, points=kinks, limit=200
        )
        return complex(re, im)

    return y * split_levy_quad(inner, rho, c_rho, x)


def test_intermediate_logchf_rect_dual_route():
    model = rect_unit_source().pulse
    x, y = 1.5, 2.0
    for theta in (0.5, -1.0, 2.0):
        got = sn.intermediate_logchf(model, theta, x, y)
        want = brute_rect_logchf(theta, x, y, 1.5, 1.0)
        assert got == pytest.approx(want, rel=1e-6, abs=1e-9)


def test_intermediate_logchf_rect_variance_anchor():
    # small-theta curvature recovers Var = 2 c x^{3-a} / ((a-1)(2-a)(3-a)) = 16/3
    model = rect_unit_source().pulse
    theta = 0.01
    val = sn.intermediate_logchf(model, theta, 1.0, 1.0)
    assert -2.0 * val.real / theta**2 == pytest.approx(16.0 / 3.0, rel=5e-4)


def test_intermediate_logchf_coupled_matches_brute():
    rho, p = 1.7, 0.8
    model = pl.RectCoupled(R=ht.RegVaryingDist(rho, 1.0), p=p)
    theta, x = 1.0, 1.0

    def inner(r):
        d, h = r**p, r ** (1 - p)

        def mass(u):
            return h * max(0.0, min(u + d, x) - max(u, 0.0))

        kinks = sorted({q for q in (0.0, x - d) if -d < q < x})
        re, _ = integrate.quad(lambda u: nm.cos_minus_one(theta * mass(u)), -d, x, points=kinks, limit=200)
        im, _ = integrate.quad(
            lambda u: nm.sin_minus_z(theta * mass(u)), -d, x, points=kinks, limit=200
        )
        return complex(re, im)

    want = split_levy_quad(inner, rho, 1.0, x ** (1.0 / p))
    assert sn.intermediate_logchf(model, theta, x, 1.0) == pytest.approx(want, rel=1e-6)


def test_intermediate_logchf_brownian_real_and_frozen():
    # Expected value computed offline at 22-digit precision with tanh-sinh
    # quadrature in two independent integration orders (durations outer with a
    # 1/r tail substitution, and arrivals outer); the orders agree to 3e-8.
    rho = 2.5
    model = pl.BrownianPulse(R=ht.RegVaryingDist(rho, 1.0))
    got = sn.intermediate_logchf(model, 1.2, 1.0, 1.0)
    assert got.imag == 0.0
    assert got.real == pytest.approx(-1.70699501211, rel=2e-5)


def test_intermediate_logchf_zero_and_conjugate_symmetry():
    model = exp_damped_source().pulse
    assert sn.intermediate_logchf(model, 0.0, 1.0, 1.0) == 0.0
    plus = sn.intermediate_logchf(model, 0.8, 1.0, 1.0)
    minus = sn.intermediate_logchf(model, -0.8, 1.0, 1.0)
    assert minus == pytest.approx(plus.conjugate(), rel=1e-6, abs=1e-8)


def test_intermediate_logchf_exp_damped_variance_anchor():
    # independent curvature check: Var J(x,1) = int du int P_A(da) int mass^2 nu(dr)
    rho, kappa = 1.2, 0.5
    model = exp_damped_source(rho, kappa).pulse
    x = 1.0

    def mass(a, u, r):
        lo, hi = max(0.0, -u), min(r, x - u)
        if hi <= lo:
            return 0.0
        return math.exp(-a * lo) * (-math.expm1(-a * (hi - lo))) / a

    def inner(r):
        kinks = [p for p in (0.0, x - r) if -r < p < x]

        def a_integrand(t):
            a = t * t  # flattens the a^{kappa-1} singularity for kappa = 1/2
            val, _ = integrate.quad(lambda u: mass(a, u, r) ** 2, -r, x, points=kinks, limit=60)
            return val * 2.0 * kappa * t ** (2.0 * kappa - 1.0)

        val, _ = integrate.quad(a_integrand, 0.0, 1.0, limit=60)
        return val

    var = split_levy_quad(lambda r: complex(inner(r), 0.0), rho, 1.0, x).real
    theta = 0.05
    val = sn.intermediate_logchf(model, theta, x, 1.0)
    assert -2.0 * val.real / theta**2 == pytest.approx(var, rel=5e-3)


def test_intermediate_logchf_scales_linearly_in_y():
    model = rect_unit_source().pulse
    one = sn.intermediate_logchf(model, 0.7, 1.3, 1.0)
    three = sn.intermediate_logchf(model, 0.7, 1.3, 3.0)
    assert three == pytest.approx(3.0 * one, rel=1e-12)


# -- multi-window path sampler ---------------------------------------------------------


def path_test_sources():
    return [
        rect_unit_source(),
        sn.ShotNoiseSource(pl.RectCoupled(R=ht.RegVaryingDist(2.6, 1.0), p=0.5), rate=1.5),
        exp_damped_source(),
        sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(2.5, 1.0))),
        sn.ShotNoiseSource(
            pl.MixturePulse(
                components=(
                    pl.RectIndep(A=ht.DegenerateDist(1.0), R=ht.RegVaryingDist(1.5, 1.0)),
                    pl.BrownianPulse(R=ht.RegVaryingDist(2.5, 1.0)),
                ),
                weights=(0.6, 0.4),
            ),
            rate=1.3,
        ),
    ]


def test_path_single_cut_is_bitwise_the_single_window_sampler():
    for src in path_test_sources():
        one = sn.integrated_sample_batch(src, 3.0, rng_for("path-one"), 400)
        path = sn.integrated_path_batch(src, [3.0], rng_for("path-one"), 400)
        assert path.shape == (400, 1)
        assert np.array_equal(one, path[:, 0])


def test_path_window_means_and_light_tail_variance():
    src = sn.ShotNoiseSource(
        pl.RectIndep(A=ht.DegenerateDist(1.0), R=ht.RegVaryingDist(3.5, 1.0)), rate=1.5
    )
    cuts = np.array([0.7, 1.9, 2.5, 4.0])
    n = 150_000
    vals = sn.integrated_path_batch(src, cuts, rng_for("path-law"), n)
    widths = np.diff(np.concatenate(([0.0], cuts)))
    level = src.mean_level()
    for j, w in enumerate(widths):
        se = vals[:, j].std() / math.sqrt(n)
        assert vals[:, j].mean() == pytest.approx(level * w, abs=4 * se)
    tot = vals.sum(axis=1)
    assert tot.var() == pytest.approx(sn.integral_variance(src, 4.0), rel=0.03)


def test_path_cross_window_covariance_matches_variance_identity():
    # Cov of two windows follows from the single-window variance at the four gaps
    src = sn.ShotNoiseSource(
        pl.RectIndep(A=ht.DegenerateDist(1.0), R=ht.RegVaryingDist(3.5, 1.0)), rate=1.5
    )
    cuts = np.array([0.7, 1.9, 2.5, 4.0])
    pre = np.concatenate(([0.0], cuts))
    n = 150_000
    vals = sn.integrated_path_batch(src, cuts, rng_for("path-cov"), n)
    V = lambda t: sn.integral_variance(src, t)
    for i, j in [(0, 1), (1, 2), (0, 3)]:
        a, b, c, d = pre[i], pre[i + 1], pre[j], pre[j + 1]
        want = 0.5 * (V(d - a) - V(c - a) - V(d - b) + V(c - b))
        got = np.cov(vals[:, i], vals[:, j])[0, 1]
        prod = (vals[:, i] - vals[:, i].mean()) * (vals[:, j] - vals[:, j].mean())
        se = prod.std() / math.sqrt(n)
        assert got == pytest.approx(want, abs=4 * se)


def test_path_brownian_total_matches_single_window_in_law():
    src = sn.ShotNoiseSource(pl.BrownianPulse(R=ht.RegVaryingDist(2.5, 1.0)))
    n = 120_000
    tot = sn.integrated_path_batch(src, [0.7, 1.9, 2.5, 4.0], rng_for("path-bm"), n).sum(axis=1)
    one = sn.integrated_sample_batch(src, 4.0, rng_for("path-bm-one"), n)
    assert stats.ks_2samp(tot, one).pvalue > 0.01


def test_path_validation():
    src = rect_unit_source()
    rng = rng_for("path-bad")
    for cuts in ([], [0.0, 1.0], [2.0, 1.0], [-1.0], [1.0, 1.0]):
        with pytest.raises(ValueError, match="cuts"):
            sn.integrated_path_batch(src, cuts, rng, 4)
    with pytest.raises(ValueError, match="n_rep"):
        sn.integrated_path_batch(src, [1.0], rng, 0)
