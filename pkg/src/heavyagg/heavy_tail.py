"""Heavy-tailed building blocks.

This module is the probabilistic bedrock of the lab: regularly varying
distributions with exact inverse-CDF samplers, totally and partially skewed
stable laws with the Chambers-Mallows-Stuck sampler, the tail-constant to
stable-parameter map, the Hill tail-index estimator, and exact length-biased
(stationary age / residual) sampling used to start regenerative processes in
steady state.

Conventions
-----------
* ``survival(x)`` is P(X > x); all distribution methods are vectorized.
* Stable laws use the parameterization in which the log characteristic
  function of X ~ (alpha, sigma, beta) is
  ``-sigma**alpha * |t|**alpha * (1 - i*beta*sign(t)*tan(pi*alpha/2))``,
  so for alpha in (1, 2) the law is centered (zero mean).
* "Tail constant" c means survival(x) ~ c * x**(-alpha) as x -> infinity,
  with equality beyond the threshold for the exact-Pareto kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

__all__ = [
    "RegVaryingDist",
    "ExponentialDist",
    "DegenerateDist",
    "UniformDist",
    "LowTailPowerDist",
    "StableParams",
    "stable_params_from_tails",
    "sample_stable",
    "hill_estimate",
    "sample_length_biased_pair",
    "residual_survival",
]

_KINDS = ("pareto-exact", "pareto-shifted", "user-mixture")


@dataclass(frozen=True)
class RegVaryingDist:
    """A positive law whose survival function is regularly varying of index -alpha.

    Parameters
    ----------
    alpha : float
        Tail index, > 0.  Most of the lab lives in (1, 2), but larger values
        are allowed (e.g. pulse-length laws with finite variance).
    x_min : float
        Scale parameter, > 0.
    kind : str
        ``"pareto-exact"``   : P(X > x) = (x_min / x)**alpha for x >= x_min.
        ``"pareto-shifted"`` : Lomax law, P(X > x) = (x_min / (x_min + x))**alpha
        on x >= 0; same tail constant x_min**alpha, but support touching zero.
        ``"user-mixture"``   : weight * pareto-exact + (1 - weight) * U(0, bulk_high);
        a rough-bulk stress test with the pure power tail intact.
    weight, bulk_high : float
        Mixture parameters, used only by ``"user-mixture"``.
    """

    alpha: float
    x_min: float
    kind: str = "pareto-exact"
    weight: float = 0.5
    bulk_high: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.x_min > 0:
            raise ValueError(f"x_min must be positive, got {self.x_min}")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "user-mixture":
            if not 0 < self.weight <= 1:
                raise ValueError("mixture weight must lie in (0, 1]")
            if not self.bulk_high > 0:
                raise ValueError("bulk_high must be positive")

    # -- distribution function ------------------------------------------------

    def survival(self, x):
        """P(X > x), elementwise."""
        x = np.asarray(x, dtype=float)
        if self.kind == "pareto-exact":
            return np.where(x < self.x_min, 1.0, (self.x_min / np.maximum(x, self.x_min)) ** self.alpha)
        if self.kind == "pareto-shifted":
            xp = np.maximum(x, 0.0)
            return np.where(x < 0, 1.0, (self.x_min / (self.x_min + xp)) ** self.alpha)
        pareto = np.where(x < self.x_min, 1.0, (self.x_min / np.maximum(x, self.x_min)) ** self.alpha)
        bulk = np.clip(1.0 - x / self.bulk_high, 0.0, 1.0)
        bulk = np.where(x < 0, 1.0, bulk)
        return self.weight * pareto + (1.0 - self.weight) * bulk

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def pdf(self, x):
        """Density, elementwise (the mixture kind has an atomless density too)."""
        x = np.asarray(x, dtype=float)
        a, xm = self.alpha, self.x_min
        if self.kind == "pareto-exact":
            return np.where(x < xm, 0.0, a * xm**a * np.maximum(x, xm) ** (-a - 1.0))
        if self.kind == "pareto-shifted":
            xp = np.maximum(x, 0.0)
            return np.where(x < 0, 0.0, (a / xm) * (1.0 + xp / xm) ** (-a - 1.0))
        pareto = np.where(x < xm, 0.0, a * xm**a * np.maximum(x, xm) ** (-a - 1.0))
        bulk = np.where((x >= 0) & (x < self.bulk_high), 1.0 / self.bulk_high, 0.0)
        return self.weight * pareto + (1.0 - self.weight) * bulk

    def isf(self, u):
        """Inverse survival function: the x with survival(x) = u, u in (0, 1]."""
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0) or np.any(u > 1):
            raise ValueError("isf argument must lie in (0, 1]")
        if self.kind == "pareto-exact":
            return self.x_min * u ** (-1.0 / self.alpha)
        if self.kind == "pareto-shifted":
            return self.x_min * (u ** (-1.0 / self.alpha) - 1.0)
        return self._mixture_isf(u)

    def ppf(self, q):
        return self.isf(1.0 - np.asarray(q, dtype=float))

    def _mixture_isf(self, u):
        u_flat = np.atleast_1d(u).astype(float)
        hi_tail = self.x_min * (self.weight / np.minimum(u_flat, self.weight)) ** (1.0 / self.alpha)
        out = np.empty_like(u_flat)
        for i, (ui, hi) in enumerate(zip(u_flat, hi_tail)):
            if ui == 1.0:
                out[i] = 0.0
                continue
            bracket_hi = max(hi, self.bulk_high, self.x_min) + 1.0
            out[i] = optimize.brentq(lambda x: self.survival(x) - ui, 0.0, bracket_hi, xtol=1e-13, rtol=1e-14)
        return out.reshape(np.shape(u)) if np.ndim(u) else float(out[0])

    # -- moments ----------------------------------------------------------------

    def mean(self) -> float:
        if self.alpha <= 1:
            raise ValueError("mean is infinite for alpha <= 1")
        if self.kind == "pareto-exact":
            return self.alpha * self.x_min / (self.alpha - 1.0)
        if self.kind == "pareto-shifted":
            return self.x_min / (self.alpha - 1.0)
        pareto = self.alpha * self.x_min / (self.alpha - 1.0)
        return self.weight * pareto + (1.0 - self.weight) * self.bulk_high / 2.0

    def moment(self, q: float) -> float:
        """E[X**q] for 0 < q < alpha (closed form for every kind)."""
        if not 0 < q < self.alpha:
            raise ValueError(f"moment of order {q} is infinite or undefined for alpha={self.alpha}")
        if self.kind == "pareto-exact":
            return self.alpha * self.x_min**q / (self.alpha - q)
        if self.kind == "pareto-shifted":
            return self.x_min**q * special.gamma(q + 1.0) * special.gamma(self.alpha - q) / special.gamma(self.alpha)
        pareto = self.alpha * self.x_min**q / (self.alpha - q)
        return self.weight * pareto + (1.0 - self.weight) * self.bulk_high**q / (q + 1.0)

    def tail_constant(self) -> float:
        """c with survival(x) ~ c * x**(-alpha); exact past the threshold for pareto-exact."""
        if self.kind == "user-mixture":
            return self.weight * self.x_min**self.alpha
        return self.x_min**self.alpha

    def partial_moment(self, q: float, m: float) -> float:
        """E[X**q; X > m] for q < alpha (closed form for pareto-exact, quadrature otherwise)."""
        if not q < self.alpha:
            raise ValueError(f"partial moment of order {q} diverges for alpha={self.alpha}")
        if q == 0.0:
            return float(self.survival(max(m, 0.0)))
        if self.kind == "pareto-exact":
            lo = max(m, self.x_min)
            return self.alpha * self.x_min**self.alpha * lo ** (q - self.alpha) / (self.alpha - q)
        # integration by parts: E[X^q; X>m] = m^q S(m) + q * int_m^inf x^(q-1) S(x) dx
        m = max(m, 0.0)
        tail, _ = integrate.quad(
            lambda x: x ** (q - 1.0) * float(self.survival(x)), max(m, 1e-300), np.inf, limit=200
        )
        head = m**q * float(self.survival(m)) if m > 0 else 0.0
        return head + q * tail

    def integrated_survival(self, t):
        """Integral of the survival function over (t, infinity)."""
        if self.alpha <= 1:
            raise ValueError("integrated survival diverges for alpha <= 1")
        t = np.asarray(t, dtype=float)
        a, xm = self.alpha, self.x_min
        if self.kind == "pareto-exact":
            above = xm**a * np.maximum(t, xm) ** (1.0 - a) / (a - 1.0)
            return np.where(t < xm, (xm - t) + xm / (a - 1.0), above)
        if self.kind == "pareto-shifted":
            tp = np.maximum(t, 0.0)
            core = xm**a * (xm + tp) ** (1.0 - a) / (a - 1.0)
            return np.where(t < 0, core - t, core)
        exact = RegVaryingDist(a, xm, "pareto-exact").integrated_survival(np.maximum(t, 0.0))
        b = self.bulk_high
        bulk = np.where(t < b, (b - np.clip(t, 0.0, b)) ** 2 / (2.0 * b), 0.0)
        both = self.weight * exact + (1.0 - self.weight) * bulk
        return np.where(t < 0, both - t, both)

    # -- sampling ----------------------------------------------------------------

    def sample(self, rng: np.random.Generator, size=None):
        """Exact draw(s) by inverse-CDF (components mixed exactly for the mixture kind)."""
        if self.kind == "user-mixture":
            n = 1 if size is None else int(size)
            pick = rng.random(n) < self.weight
            u = rng.random(n)
            pareto = self.x_min * u ** (-1.0 / self.alpha)
            bulk = u * self.bulk_high
            out = np.where(pick, pareto, bulk)
            return float(out[0]) if size is None else out
        u = rng.random(size)
        u = np.maximum(u, np.finfo(float).tiny)
        return self.isf(u)

    def sample_exceed(self, s: float, rng: np.random.Generator, size=None):
        """Draw X conditioned on X > s (exact: isf(U * survival(s)) per component)."""
        surv = float(self.survival(s))
        if surv <= 0:
            raise ValueError("conditioning event has probability zero")
        if self.kind != "user-mixture":
            u = rng.random(size)
            u = np.maximum(u, np.finfo(float).tiny)
            return self.isf(u * surv)
        n = 1 if size is None else int(size)
        sp = float(np.where(s < self.x_min, 1.0, (self.x_min / max(s, self.x_min)) ** self.alpha))
        sb = float(np.clip(1.0 - max(s, 0.0) / self.bulk_high, 0.0, 1.0))
        p_pareto = self.weight * sp / surv
        pick = rng.random(n) < p_pareto
        u = np.maximum(rng.random(n), np.finfo(float).tiny)
        pareto = self.x_min * (u * sp) ** (-1.0 / self.alpha)
        lo = max(s, 0.0)
        bulk = lo + u * (self.bulk_high - lo) if sb > 0 else np.full(n, np.nan)
        out = np.where(pick, pareto, bulk)
        return float(out[0]) if size is None else out

    def sample_length_biased(self, rng: np.random.Generator, size=None):
        """Draw from the length-biased law, density x * f(x) / mean.

        pareto-exact(alpha) length-biases to pareto-exact(alpha - 1) exactly.
        The Lomax kind uses an exact rejection step (acceptance rate 1/alpha)
        and the mixture mixes its components' exact length-biased laws with
        weights proportional to their mean contributions.
        """
        if self.alpha <= 1:
            raise ValueError("length-biased law undefined for alpha <= 1 (infinite mean)")
        a, xm = self.alpha, self.x_min
        if self.kind == "pareto-exact":
            return RegVaryingDist(a - 1.0, xm, "pareto-exact").sample(rng, size)
        if self.kind == "pareto-shifted":
            n = 1 if size is None else int(size)
            out = np.empty(n)
            todo = np.arange(n)
            while todo.size:
                # propose x_min + Y with Y length-biased exact-Pareto, accept w.p. y/(y + x_min)
                y = xm * (rng.random(todo.size) ** (-1.0 / (a - 1.0)) - 1.0)
                keep = rng.random(todo.size) * (y + xm) < y
                out[todo[keep]] = y[keep]
                todo = todo[~keep]
            return float(out[0]) if size is None else out
        n = 1 if size is None else int(size)
        mu_p = a * xm / (a - 1.0)
        mu_b = self.bulk_high / 2.0
        p_pareto = self.weight * mu_p / (self.weight * mu_p + (1.0 - self.weight) * mu_b)
        pick = rng.random(n) < p_pareto
        u = np.maximum(rng.random(n), np.finfo(float).tiny)
        pareto = xm * u ** (-1.0 / (a - 1.0))
        bulk = self.bulk_high * np.sqrt(u)
        out = np.where(pick, pareto, bulk)
        return float(out[0]) if size is None else out


@dataclass(frozen=True)
class ExponentialDist:
    """Exponential law with the given mean (used for light-tailed cycle parts)."""

    mean_value: float = 1.0

    def __post_init__(self) -> None:
        if not self.mean_value > 0:
            raise ValueError("mean_value must be positive")

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, 1.0, np.exp(-np.maximum(x, 0.0) / self.mean_value))

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, 0.0, np.exp(-np.maximum(x, 0.0) / self.mean_value) / self.mean_value)

    def isf(self, u):
        return -self.mean_value * np.log(np.asarray(u, dtype=float))

    def mean(self) -> float:
        return self.mean_value

    def moment(self, q: float) -> float:
        return self.mean_value**q * float(special.gamma(q + 1.0))

    def integrated_survival(self, t):
        t = np.asarray(t, dtype=float)
        core = self.mean_value * np.exp(-np.maximum(t, 0.0) / self.mean_value)
        return np.where(t < 0, core - t, core)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(self.mean_value, size)

    def sample_exceed(self, s: float, rng: np.random.Generator, size=None):
        return max(s, 0.0) + rng.exponential(self.mean_value, size)

    def sample_length_biased(self, rng: np.random.Generator, size=None):
        return rng.gamma(2.0, self.mean_value, size)


@dataclass(frozen=True)
class DegenerateDist:
    """Point mass (e.g. a constant pulse amplitude)."""

    value: float

    def __post_init__(self) -> None:
        if not self.value >= 0:
            raise ValueError("value must be nonnegative")

    def survival(self, x):
        return np.where(np.asarray(x, dtype=float) < self.value, 1.0, 0.0)

    def mean(self) -> float:
        return self.value

    def moment(self, q: float) -> float:
        return self.value**q

    def sample(self, rng: np.random.Generator, size=None):
        return self.value if size is None else np.full(int(size), self.value)

    def sample_length_biased(self, rng: np.random.Generator, size=None):
        return self.sample(rng, size)


@dataclass(frozen=True)
class UniformDist:
    """Uniform law on [lo, hi] (bounded rewards, stress-test amplitudes)."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def moment(self, q: float) -> float:
        if q == 1.0:
            return self.mean()
        if self.lo < 0 and q != int(q):
            raise ValueError("non-integer moment of a law with negative support")
        span = self.hi - self.lo
        return (self.hi ** (q + 1.0) - self.lo ** (q + 1.0)) / ((q + 1.0) * span)

    def expect(self, func) -> float:
        val, _ = integrate.quad(func, self.lo, self.hi, limit=200)
        return val / (self.hi - self.lo)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(self.lo, self.hi, size)


@dataclass(frozen=True)
class LowTailPowerDist:
    """Law on (0, c**(-1/kappa)] with P(X <= x) = c * x**kappa.

    The regular variation sits at the *origin*: small values are what carry
    the heavy behavior (slow exponential damping rates).  With c = 1 this is
    X = U**(1/kappa) for U uniform on (0, 1].
    """

    kappa: float
    c: float = 1.0

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")

    @property
    def upper(self) -> float:
        return self.c ** (-1.0 / self.kappa)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip(self.c * np.maximum(x, 0.0) ** self.kappa, 0.0, 1.0)

    def mean(self) -> float:
        return self.moment(1.0)

    def moment(self, q: float) -> float:
        if q <= -self.kappa:
            raise ValueError(f"moment of order {q} diverges for kappa={self.kappa}")
        return self.kappa * self.c ** (-q / self.kappa) / (self.kappa + q)

    def laplace(self, s):
        """E[exp(-s X)], exact via the lower incomplete gamma function."""
        s = np.asarray(s, dtype=float)
        safe = np.maximum(s, 1e-300)
        val = self.kappa * self.c * special.gamma(self.kappa) * safe ** (-self.kappa) \
            * special.gammainc(self.kappa, safe * self.upper)
        return np.where(s < 1e-12, 1.0 - s * self.mean(), val)

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size)
        u = np.maximum(u, np.finfo(float).tiny)
        return (u / self.c) ** (1.0 / self.kappa)


# -- stable laws ------------------------------------------------------------------


@dataclass(frozen=True)
class StableParams:
    """Strictly stable law with index in (1, 2): (alpha, sigma, beta), zero mean."""

    alpha: float
    sigma: float
    beta: float

    def __post_init__(self) -> None:
        if not 1.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [-1, 1]")

    def logchf(self, theta):
        """log E[exp(i * theta * X)], elementwise in theta."""
        th = np.asarray(theta, dtype=float)
        skew = 1.0 - 1j * self.beta * np.sign(th) * math.tan(math.pi * self.alpha / 2.0)
        return -(self.sigma**self.alpha) * np.abs(th) ** self.alpha * skew

    def chf(self, theta):
        return np.exp(self.logchf(theta))


def stable_params_from_tails(alpha: float, c_plus: float, c_minus: float) -> StableParams:
    """Stable parameters whose law has tail constants (c_plus, c_minus).

    For the centered law with P(X > x) ~ c_plus * x**(-alpha) and
    P(X < -x) ~ c_minus * x**(-alpha):

        sigma**alpha = Gamma(2 - alpha) / (1 - alpha) * cos(pi*alpha/2) * (c_plus + c_minus)
        beta         = (c_plus - c_minus) / (c_plus + c_minus)

    (both factors in sigma**alpha are negative on (1, 2), so it is positive).
    """
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    if c_plus < 0 or c_minus < 0:
        raise ValueError("tail constants must be nonnegative")
    total = c_plus + c_minus
    if total == 0:
        return StableParams(alpha, 0.0, 0.0)
    sigma_alpha = special.gamma(2.0 - alpha) / (1.0 - alpha) * math.cos(math.pi * alpha / 2.0) * total
    beta = (c_plus - c_minus) / total
    return StableParams(alpha, sigma_alpha ** (1.0 / alpha), beta)


def sample_stable(params: StableParams, rng: np.random.Generator, size=None):
    """Chambers-Mallows-Stuck draw(s) from a stable law with zero mean.

    Uses the standard polar construction: with V uniform on (-pi/2, pi/2) and
    W standard exponential,

        X = S * sin(a(V+B)) / cos(V)**(1/a) * (cos(V - a(V+B)) / W)**((1-a)/a)

    where B = atan(beta tan(pi a/2)) / a and S = (1 + beta^2 tan^2(pi a/2))**(1/2a);
    sigma scales the result.
    """
    a, beta, sigma = params.alpha, params.beta, params.sigma
    n = 1 if size is None else int(size)
    if sigma == 0.0:
        out = np.zeros(n)
        return float(out[0]) if size is None else out
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, n)
    w = rng.exponential(1.0, n)
    t = math.tan(math.pi * a / 2.0)
    b = math.atan(beta * t) / a
    s = (1.0 + beta * beta * t * t) ** (1.0 / (2.0 * a))
    core = s * np.sin(a * (v + b)) / np.cos(v) ** (1.0 / a) \
        * (np.cos(v - a * (v + b)) / w) ** ((1.0 - a) / a)
    out = sigma * core
    return float(out[0]) if size is None else out


# -- estimation and steady-state sampling ------------------------------------------


def hill_estimate(samples, k: int | None = None) -> float:
    """Hill estimator of the tail index from the k largest order statistics.

    alpha_hat = k / sum_{i=1..k} log(x_(n-i+1) / x_(n-k)); k defaults to
    ceil(n**0.6).  Samples must be positive; k must satisfy 1 <= k < n.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples")
    if np.any(x <= 0):
        raise ValueError("samples must be positive")
    if k is None:
        k = math.ceil(n**0.6)
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    top = x[n - k:]
    threshold = x[n - k - 1]
    return k / float(np.sum(np.log(top / threshold)))


def sample_length_biased_pair(dist, rng: np.random.Generator, size=None):
    """Stationary (age, residual, total) triple(s) for cycles with law ``dist``.

    The total is a length-biased draw and the age is uniform on (0, total);
    marginally both age and residual then follow the stationary excess law
    with survival ``integrated_survival(t) / mean``.
    """
    total = np.asarray(dist.sample_length_biased(rng, size), dtype=float)
    u = rng.random(size)
    age = u * total
    residual = total - age
    if size is None:
        return float(age), float(residual), float(total)
    return age, residual, total


def residual_survival(dist, t):
    """Survival function of the stationary excess (residual life) law of ``dist``."""
    return dist.integrated_survival(t) / dist.mean()
