"""Pulse families: the random session shapes W(t) that drive both input classes.

Seven families are supported.  Four of them feed the shot-noise input
(rectangular with independent amplitude, rectangular with duration-coupled
height, exponentially damped, Brownian); three describe one regenerative cycle
(ON/OFF indicator, workload triangle, constant reward over a cycle).  The unit
of work is a realized pulse together with exact window integrals

    integrate_window(pulse, a, b) = int_a^b w(t) dt,

closed form everywhere except the Brownian family, which carries a lazily
extended exact path: per subinterval of length h the pair (increment of B,
integral of B) is jointly Gaussian with Var = (h, h^3/3) and Cov = h^2/2, and
breakpoints are inserted by exact Gaussian conditioning, so no discretization
error enters anywhere.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .heavy_tail import (
    DegenerateDist,
    LowTailPowerDist,
    RegVaryingDist,
    sample_length_biased_pair,
)

__all__ = [
    "RectIndep",
    "RectCoupled",
    "ExpDamped",
    "BrownianPulse",
    "OnOff",
    "Workload",
    "RenewalReward",
    "MixturePulse",
    "RewardLaw",
    "vanishing_reward",
    "RealizedPulse",
    "BrownianPath",
    "draw_pulse",
    "sample_aged_pulse",
    "integrate_window",
    "total_mass",
    "mean_W",
    "corr_kernel",
    "duration_dist",
    "duration_mean",
]


# -- reward laws -----------------------------------------------------------------


@dataclass(frozen=True)
class RewardLaw:
    """Bounded reward attached to a renewal cycle.

    kind "independent": draw W from ``dist`` independently of the cycle length;
    the law must be bounded (|W| <= bound).  kind "coupled": W = g(Z, U) with U
    uniform on (0,1) and g bounded by ``bound``; ``limit_dist`` is the law of
    the large-Z limit of g(Z, U) when one exists (None means the limit is 0).
    """

    kind: str
    dist: object | None = None
    g: object | None = None
    bound: float = 1.0
    limit_dist: object | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("independent", "coupled"):
            raise ValueError("reward kind must be 'independent' or 'coupled'")
        if self.kind == "independent" and self.dist is None:
            raise ValueError("independent reward needs a dist")
        if self.kind == "coupled" and self.g is None:
            raise ValueError("coupled reward needs a function g(z, u)")
        if not self.bound > 0:
            raise ValueError("bound must be positive")

    def sample_given_z(self, z, rng: np.random.Generator):
        z = np.asarray(z, dtype=float)
        if self.kind == "independent":
            return np.asarray(self.dist.sample(rng, z.size)).reshape(z.shape)
        u = rng.random(z.shape)
        return np.asarray(self.g(z, u), dtype=float)

    def cond_mean(self, z):
        """E[W | Z = z], vectorized (Gauss-Legendre in u for coupled laws)."""
        z = np.asarray(z, dtype=float)
        if self.kind == "independent":
            return np.full(z.shape, self.dist.mean())
        nodes, weights = np.polynomial.legendre.leggauss(24)
        u = 0.5 * (nodes + 1.0)
        vals = np.array([self.g(z, np.full(z.shape, ui)) for ui in u])
        return 0.5 * np.tensordot(weights, vals, axes=1)

    def cond_moment2(self, z):
        """E[W^2 | Z = z], vectorized."""
        z = np.asarray(z, dtype=float)
        if self.kind == "independent":
            return np.full(z.shape, self.dist.moment(2.0))
        nodes, weights = np.polynomial.legendre.leggauss(24)
        u = 0.5 * (nodes + 1.0)
        vals = np.array([np.asarray(self.g(z, np.full(z.shape, ui))) ** 2 for ui in u])
        return 0.5 * np.tensordot(weights, vals, axes=1)

    def limit_expect(self, func) -> float:
        """E[func(W_infinity)] under the large-cycle limit law of the reward."""
        if self.kind == "independent":
            lim = self.dist
        else:
            lim = self.limit_dist
        if lim is None:
            return float(func(0.0))
        if isinstance(lim, DegenerateDist):
            return float(func(lim.value))
        if hasattr(lim, "expect"):
            return float(lim.expect(func))
        raise ValueError("limit law does not support expectations")


def vanishing_reward(delta: float) -> RewardLaw:
    """Default coupled reward g(z, u) = (1+z)^(-delta) * (2u-1): bounded, limit 0."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return RewardLaw(
        kind="coupled",
        g=lambda z, u: (1.0 + z) ** (-delta) * (2.0 * u - 1.0),
        bound=1.0,
        limit_dist=None,
    )


# -- pulse models ----------------------------------------------------------------


@dataclass(frozen=True)
class RectIndep:
    """W(t) = A * 1(0 < t <= R) with amplitude A independent of the duration R."""

    A: object
    R: RegVaryingDist

    kind = "rect-indep"


@dataclass(frozen=True)
class RectCoupled:
    """W(t) = R^(1-p) * 1(0 < t <= R^p): height and duration tied to one draw."""

    R: RegVaryingDist
    p: float

    kind = "rect-coupled"

    def __post_init__(self) -> None:
        if not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")


@dataclass(frozen=True)
class ExpDamped:
    """W(t) = exp(-A t) * 1(0 < t <= R): random damping rate A, duration R."""

    A: LowTailPowerDist
    R: RegVaryingDist

    kind = "exp-damped"


@dataclass(frozen=True)
class BrownianPulse:
    """W(t) = B(t) * 1(0 < t <= R) with B a standard Brownian motion."""

    R: RegVaryingDist

    kind = "brownian"


@dataclass(frozen=True)
class OnOff:
    """Cycle Z = Z_on + Z_off, W(t) = 1(t < Z_on): the ON indicator comes first."""

    Zon: RegVaryingDist
    Zoff: object

    kind = "on-off"


@dataclass(frozen=True)
class Workload:
    """Cycle Z = Z_on + Z_off, W(t) = (Z_on - t)_+: residual work drains at unit rate."""

    Zon: RegVaryingDist
    Zoff: object

    kind = "workload"


@dataclass(frozen=True)
class RenewalReward:
    """Cycle length Z, constant reward W over the whole cycle: W(t) = W * 1(t < Z)."""

    Z: RegVaryingDist
    reward: RewardLaw

    kind = "renewal-reward"


@dataclass(frozen=True)
class MixturePulse:
    """Pick one of several pulse models with the given probabilities."""

    components: tuple
    weights: tuple

    kind = "mixture"

    def __post_init__(self) -> None:
        if len(self.components) != len(self.weights) or not self.components:
            raise ValueError("components and weights must be nonempty and equal length")
        if abs(sum(self.weights) - 1.0) > 1e-12 or min(self.weights) < 0:
            raise ValueError("weights must be a probability vector")


CYCLE_KINDS = ("on-off", "workload", "renewal-reward")


# -- exact lazy Brownian path -------------------------------------------------------


class BrownianPath:
    """Exact Brownian motion queried through (value, running integral) pairs.

    Breakpoints are created on demand: extension beyond the last breakpoint
    draws the joint (increment, integral) Gaussian pair; insertion between two
    existing breakpoints conditions that pair on the recorded endpoint data.
    Repeated queries at a stored time return the stored values, so window
    integrals are mutually consistent no matter the query order.
    """

    def __init__(self, rng: np.random.Generator, t0: float = 0.0, b0: float = 0.0):
        self.rng = rng
        self.ts = [t0]
        self.bs = [b0]
        self.Is = [0.0]  # integral of B over [t0, t_i]

    def value_and_integral(self, t: float) -> tuple[float, float]:
        if t < self.ts[0] - 1e-15:
            raise ValueError(f"path starts at {self.ts[0]}, cannot query {t}")
        i = bisect.bisect_left(self.ts, t)
        if i < len(self.ts) and abs(self.ts[i] - t) < 1e-15:
            return self.bs[i], self.Is[i]
        if i == len(self.ts):
            self._extend(t)
            return self.bs[-1], self.Is[-1]
        self._insert(i, t)
        return self.bs[i], self.Is[i]

    def integral(self, a: float, b: float) -> float:
        """Integral of B over [a, b] (a <= b, both at or after the path origin)."""
        _, ia = self.value_and_integral(a)
        _, ib = self.value_and_integral(b)
        return ib - ia

    def _extend(self, t: float) -> None:
        h = t - self.ts[-1]
        db = math.sqrt(h) * self.rng.standard_normal()
        j = 0.5 * h * db + math.sqrt(h**3 / 12.0) * self.rng.standard_normal()
        b_prev = self.bs[-1]
        self.ts.append(t)
        self.bs.append(b_prev + db)
        self.Is.append(self.Is[-1] + b_prev * h + j)

    def _insert(self, i: int, t: float) -> None:
        tl, tr = self.ts[i - 1], self.ts[i]
        h1, h2 = t - tl, tr - t
        db_full = self.bs[i] - self.bs[i - 1]
        j_full = self.Is[i] - self.Is[i - 1] - self.bs[i - 1] * (tr - tl)
        # X = (dB1, J1, dB2, J2) independent blocks; condition on
        # (dB1 + dB2, J1 + J2 + h2*dB1) = (db_full, j_full)
        def block(h):
            return np.array([[h, h * h / 2.0], [h * h / 2.0, h**3 / 3.0]])

        cov = np.zeros((4, 4))
        cov[:2, :2] = block(h1)
        cov[2:, 2:] = block(h2)
        obs = np.array([[1.0, 0.0, 1.0, 0.0], [h2, 1.0, 0.0, 1.0]])
        s = obs @ cov @ obs.T
        gain = cov @ obs.T @ np.linalg.inv(s)
        mean = gain @ np.array([db_full, j_full])
        cond = cov - gain @ obs @ cov
        top = cond[:2, :2]
        # symmetrize and guard the factorization against roundoff
        top = 0.5 * (top + top.T) + 1e-30 * np.eye(2)
        chol = np.linalg.cholesky(top)
        db1, j1 = mean[:2] + chol @ self.rng.standard_normal(2)
        self.ts.insert(i, t)
        self.bs.insert(i, self.bs[i - 1] + db1)
        self.Is.insert(i, self.Is[i - 1] + self.bs[i - 1] * h1 + j1)


# -- realized pulses ----------------------------------------------------------------


@dataclass
class RealizedPulse:
    """One realized pulse: family tag, duration, and the drawn parameters.

    ``amp`` holds the family's scalar mark: the amplitude A (rect-indep), the
    height R^(1-p) (rect-coupled), the damping rate A (exp-damped), or the
    reward W (renewal-reward).  Cycle families store the ON length separately;
    Brownian pulses carry their lazily extended path.
    """

    family: str
    duration: float
    amp: float = 0.0
    z_on: float = 0.0
    path: BrownianPath | None = None


def draw_pulse(model, rng: np.random.Generator) -> RealizedPulse:
    """Draw a fresh pulse (age zero) from the model."""
    kind = model.kind
    if kind == "rect-indep":
        return RealizedPulse(kind, float(model.R.sample(rng)), amp=float(model.A.sample(rng)))
    if kind == "rect-coupled":
        r = float(model.R.sample(rng))
        return RealizedPulse(kind, r**model.p, amp=r ** (1.0 - model.p))
    if kind == "exp-damped":
        return RealizedPulse(kind, float(model.R.sample(rng)), amp=float(model.A.sample(rng)))
    if kind == "brownian":
        return RealizedPulse(kind, float(model.R.sample(rng)), path=BrownianPath(rng))
    if kind == "on-off" or kind == "workload":
        z_on = float(model.Zon.sample(rng))
        z_off = float(model.Zoff.sample(rng))
        return RealizedPulse(kind, z_on + z_off, z_on=z_on)
    if kind == "renewal-reward":
        z = float(model.Z.sample(rng))
        w = float(np.asarray(model.reward.sample_given_z(np.array([z]), rng))[0])
        return RealizedPulse(kind, z, amp=w)
    if kind == "mixture":
        idx = rng.choice(len(model.components), p=model.weights)
        return draw_pulse(model.components[idx], rng)
    raise ValueError(f"unknown pulse family {kind!r}")


def duration_dist(model):
    """The law of the pulse duration D (cycle length for cycle families).

    Closed form for every family: rect-coupled durations R^p are again exact
    Pareto with index alpha/p and scale x_min^p; mixtures and two-part cycles
    have no single RegVaryingDist and return None.
    """
    kind = model.kind
    if kind in ("rect-indep", "exp-damped", "brownian"):
        return model.R
    if kind == "rect-coupled":
        if model.R.kind != "pareto-exact":
            return None
        return RegVaryingDist(model.R.alpha / model.p, model.R.x_min**model.p, "pareto-exact")
    if kind == "renewal-reward":
        return model.Z
    return None


def duration_mean(model) -> float:
    """E[D]; for cycles E[Z] = E[Z_on] + E[Z_off]."""
    kind = model.kind
    if kind in ("on-off", "workload"):
        return model.Zon.mean() + model.Zoff.mean()
    if kind == "mixture":
        return float(sum(w * duration_mean(c) for w, c in zip(model.weights, model.components)))
    d = duration_dist(model)
    if d is None:
        raise ValueError(f"no duration law for family {kind!r}")
    return d.mean()


def sample_aged_pulse(model, rng: np.random.Generator) -> tuple[float, RealizedPulse]:
    """Stationary (age, pulse) draw for a pulse alive at time zero.

    Jointly exact: the duration is drawn length biased and the age uniform on
    (0, duration), which realizes the density P(D > s) / E[D] for the age with
    the correct conditional duration.  Brownian paths start at the age with the
    exact N(0, age) marginal for B(age); the path before the age is never used.
    """
    kind = model.kind
    if kind == "rect-indep":
        age, _, r = sample_length_biased_pair(model.R, rng)
        return age, RealizedPulse(kind, r, amp=float(model.A.sample(rng)))
    if kind == "rect-coupled":
        d = duration_dist(model)
        if d is None:
            raise ValueError("rect-coupled aged sampling needs a pareto-exact R")
        age, _, dur = sample_length_biased_pair(d, rng)
        return age, RealizedPulse(kind, dur, amp=dur ** ((1.0 - model.p) / model.p))
    if kind == "exp-damped":
        age, _, r = sample_length_biased_pair(model.R, rng)
        return age, RealizedPulse(kind, r, amp=float(model.A.sample(rng)))
    if kind == "brownian":
        age, _, r = sample_length_biased_pair(model.R, rng)
        b_age = math.sqrt(age) * rng.standard_normal() if age > 0 else 0.0
        return age, RealizedPulse(kind, r, path=BrownianPath(rng, t0=age, b0=b_age))
    if kind in ("on-off", "workload"):
        mu_on, mu_off = model.Zon.mean(), model.Zoff.mean()
        if rng.random() < mu_on / (mu_on + mu_off):
            z_on = float(model.Zon.sample_length_biased(rng))
            z_off = float(model.Zoff.sample(rng))
        else:
            z_on = float(model.Zon.sample(rng))
            z_off = float(model.Zoff.sample_length_biased(rng))
        z = z_on + z_off
        return rng.random() * z, RealizedPulse(kind, z, z_on=z_on)
    if kind == "renewal-reward":
        age, _, z = sample_length_biased_pair(model.Z, rng)
        w = float(np.asarray(model.reward.sample_given_z(np.array([z]), rng))[0])
        return age, RealizedPulse(kind, z, amp=w)
    raise ValueError(f"aged sampling not available for family {kind!r}")


# -- window integrals ----------------------------------------------------------------


def integrate_window(pulse: RealizedPulse, a: float, b: float) -> float:
    """Exact int_a^b w(t) dt in pulse-local time, 0 <= a <= b."""
    if a < 0 or b < a:
        raise ValueError("need 0 <= a <= b")
    d = pulse.duration
    fam = pulse.family
    if fam in ("rect-indep", "rect-coupled"):
        return pulse.amp * (min(b, d) - min(a, d)) if d > 0 else 0.0
    if fam == "exp-damped":
        lo, hi = min(a, d), min(b, d)
        rate = pulse.amp
        return math.exp(-rate * lo) * (-math.expm1(-rate * (hi - lo))) / rate
    if fam == "brownian":
        lo, hi = min(a, d), min(b, d)
        if hi <= lo:
            return 0.0
        return pulse.path.integral(lo, hi)
    if fam == "on-off":
        z = pulse.z_on
        return min(b, z) - min(a, z)
    if fam == "workload":
        z = pulse.z_on
        lo, hi = min(a, z), min(b, z)
        return 0.5 * ((z - lo) ** 2 - (z - hi) ** 2)
    if fam == "renewal-reward":
        return pulse.amp * (min(b, d) - min(a, d))
    raise ValueError(f"unknown pulse family {fam!r}")


def total_mass(pulse: RealizedPulse) -> float:
    """The total integral of the realized pulse over its whole support."""
    fam = pulse.family
    if fam in ("rect-indep", "rect-coupled", "renewal-reward"):
        return pulse.amp * pulse.duration
    if fam == "exp-damped":
        return -math.expm1(-pulse.amp * pulse.duration) / pulse.amp
    if fam == "brownian":
        return pulse.path.integral(pulse.path.ts[0], pulse.duration) if pulse.duration > pulse.path.ts[0] else 0.0
    if fam == "on-off":
        return pulse.z_on
    if fam == "workload":
        return 0.5 * pulse.z_on**2
    raise ValueError(f"unknown pulse family {fam!r}")


# -- first and second pulse moments ---------------------------------------------------


def mean_W(model, t: float) -> float:
    """E[W(t)] for shot-noise families; E[W(t) 1(t < Z)] for cycle families (t > 0)."""
    if t <= 0:
        return 0.0
    kind = model.kind
    if kind == "rect-indep":
        return model.A.mean() * float(model.R.survival(t))
    if kind == "rect-coupled":
        return model.R.partial_moment(1.0 - model.p, t ** (1.0 / model.p))
    if kind == "exp-damped":
        return float(model.A.laplace(t)) * float(model.R.survival(t))
    if kind == "brownian":
        return 0.0
    if kind == "on-off":
        return float(model.Zon.survival(t))
    if kind == "workload":
        return float(model.Zon.integrated_survival(t))
    if kind == "renewal-reward":
        if model.reward.kind == "independent":
            return model.reward.dist.mean() * float(model.Z.survival(t))
        val, _ = integrate.quad(
            lambda z: float(model.reward.cond_mean(np.array([z]))[0]) * float(model.Z.pdf(z)),
            t,
            np.inf,
            limit=200,
        )
        return val
    if kind == "mixture":
        return float(sum(w * mean_W(c, t) for w, c in zip(model.weights, model.components)))
    raise ValueError(f"unknown pulse family {kind!r}")


def corr_kernel(model, u: float, t: float) -> float:
    """E[W(u) W(u+t)] (with the in-cycle indicator for cycle families); u, t >= 0."""
    if u <= 0:
        return 0.0
    s = u + t
    kind = model.kind
    if kind == "rect-indep":
        return model.A.moment(2.0) * float(model.R.survival(s))
    if kind == "rect-coupled":
        return model.R.partial_moment(2.0 - 2.0 * model.p, s ** (1.0 / model.p))
    if kind == "exp-damped":
        return float(model.A.laplace(2.0 * u + t)) * float(model.R.survival(s))
    if kind == "brownian":
        return u * float(model.R.survival(s))
    if kind == "on-off":
        return float(model.Zon.survival(s))
    if kind == "workload":
        if model.Zon.alpha <= 2.0:
            raise ValueError("workload correlation kernel needs alpha > 2 (finite E Z_on^2)")
        val, _ = integrate.quad(
            lambda v: (2.0 * v - 2.0 * u - t) * float(model.Zon.survival(v)), s, np.inf, limit=200
        )
        return val
    if kind == "renewal-reward":
        if model.reward.kind == "independent":
            return model.reward.dist.moment(2.0) * float(model.Z.survival(s))
        val, _ = integrate.quad(
            lambda z: float(model.reward.cond_moment2(np.array([z]))[0]) * float(model.Z.pdf(z)),
            s,
            np.inf,
            limit=200,
        )
        return val
    if kind == "mixture":
        return float(sum(w * corr_kernel(c, u, t) for w, c in zip(model.weights, model.components)))
    raise ValueError(f"unknown pulse family {kind!r}")
