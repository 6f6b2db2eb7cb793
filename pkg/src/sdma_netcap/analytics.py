"""Closed-form network metrics for limited-feedback zero-forcing SDMA.

All functions take a :class:`~sdma_netcap.core.NetworkParams`. Rates are in
nats/s/Hz, throughput in bits/s/Hz per unit area. Perfect CSI is the
``bits = inf`` case of the same formulas (delta = 0).

Where the quantized-CSI analysis writes the antenna count M for quantities
that really depend on the number of active streams (the interference
constant and the number of intra-cluster interferers), K is used; the two
coincide for fully loaded clusters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (NetworkParams, NumericalError, ValidationError, check_alpha,
                   check_epsilon, validate)
from .specfun import (DEFAULT_QUADRATURE, QuadratureConfig, beta_fn, cosine_integral,
                      digamma, gamma_fn, gauss_2f1, harmonic, integrate_interval,
                      integrate_semi_infinite, sine_integral)

DEFAULT_HOLDER_GRID = (1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0)


class DivergentRate(NumericalError):
    """The ergodic-rate integral diverges (no interference, no noise, no
    residual self-interference)."""


class InfeasibleRegime(NumericalError):
    """No feedback budget yields positive transmission capacity."""


class NoiseNotZero(ValidationError):
    code = "NoiseNotZero"


class DegenerateScale(NumericalError):
    pass


@dataclass(frozen=True)
class OutageResult:
    per_user: tuple[float, ...]

    @property
    def success_per_user(self) -> tuple[float, ...]:
        return tuple(1.0 - p for p in self.per_user)


@dataclass(frozen=True)
class TcResult:
    max_density: float
    capacity: float
    feasible: bool


@dataclass(frozen=True)
class BoundSet:
    lower: float
    exact: float
    upper: float
    method_tags: dict[str, str] = field(default_factory=dict)


# ------------------------------------------------------------ interference

def interference_constant(k_streams: int, alpha: float) -> float:
    """Laplace-exponent constant I_K of a Poisson field with Gamma(K, 1) marks.

    I_K = (2 pi / alpha) sum_{m=0}^{K-1} C(K, m) B(m + 2/alpha, K - m - 2/alpha)
    """
    check_alpha(alpha)
    if k_streams < 1:
        raise ValueError(f"k_streams must be >= 1, got {k_streams}")
    a = 2.0 / alpha
    terms = [math.comb(k_streams, m) * beta_fn(m + a, k_streams - m - a)
             for m in range(k_streams)]
    return 2.0 * math.pi / alpha * math.fsum(terms)


def interference_constant_large_k(k_streams: float, alpha: float) -> float:
    """Large-K form pi * Gamma(1 - 2/alpha) * K^(2/alpha)."""
    check_alpha(alpha)
    if k_streams < 1:
        raise ValueError(f"k_streams must be >= 1, got {k_streams}")
    return math.pi * gamma_fn(1.0 - 2.0 / alpha) * k_streams ** (2.0 / alpha)


# ------------------------------------------------------------------ outage

def _check_user(params: NetworkParams, user: int) -> None:
    if not 0 <= user < params.k_streams:
        raise IndexError(f"user index {user} out of range for K={params.k_streams}")


def _success(lam, i_k, zeta, alpha, noise, rho, beta, delta, k):
    return (math.exp(-lam * i_k * zeta ** (2.0 / alpha)) * math.exp(-noise * zeta / rho)
            / (1.0 + beta * delta) ** (k - 1))


def success_probability(params: NetworkParams, user: int = 0) -> float:
    ds = validate(params)
    _check_user(params, user)
    i_k = interference_constant(params.k_streams, params.alpha)
    return _success(params.lam, i_k, ds.zeta_per_user[user], params.alpha, params.noise,
                    ds.rho, params.beta_per_user[user], ds.delta, params.k_streams)


def outage_probability(params: NetworkParams, user: int = 0) -> float:
    """Outage probability of the ``user``-th receiver of the typical cluster."""
    return 1.0 - success_probability(params, user)


def outage_all(params: NetworkParams) -> OutageResult:
    return OutageResult(tuple(outage_probability(params, k) for k in range(params.k_streams)))


def success_probability_max(params: NetworkParams) -> float:
    """Success probability of a user at the worst-case threshold zeta_max."""
    ds = validate(params)
    i_k = interference_constant(params.k_streams, params.alpha)
    return _success(params.lam, i_k, ds.zeta_max, params.alpha, params.noise, ds.rho,
                    params.beta, ds.delta, params.k_streams)


# -------------------------------------------------------------- throughput

def network_throughput(params: NetworkParams) -> float:
    """lambda * sum_k P(success_k) * log2(1 + beta_k)."""
    validate(params)
    if params.lam == 0:
        return 0.0
    return params.lam * math.fsum(
        success_probability(params, k) * math.log2(1.0 + params.beta_per_user[k])
        for k in range(params.k_streams))


def network_throughput_lb(params: NetworkParams) -> float:
    """Throughput lower bound with every user moved to zeta_max and target beta_max."""
    validate(params)
    return (params.k_streams * params.lam * success_probability_max(params)
            * math.log2(1.0 + params.beta))


def optimal_density(params: NetworkParams) -> float:
    """Density maximizing the throughput lower bound, 1/(I_K beta^(2/a) d_max^2)."""
    validate(params)
    i_k = interference_constant(params.k_streams, params.alpha)
    return 1.0 / (i_k * params.beta ** (2.0 / params.alpha) * params.d_max ** 2)


def throughput_ratio(params: NetworkParams) -> float:
    """Perfect-CSI over quantized-CSI throughput, (1 + beta delta)^(K-1)."""
    ds = validate(params)
    return (1.0 + params.beta * ds.delta) ** (params.k_streams - 1)


# ----------------------------------------------------- transmission capacity

def _tc_bracket(params: NetworkParams, epsilon: float, delta: float | None = None) -> float:
    ds = validate(params)
    d = ds.delta if delta is None else delta
    return (math.log(1.0 / (1.0 - epsilon)) - params.noise * ds.zeta_max / ds.rho
            - (params.k_streams - 1) * math.log1p(params.beta * d))


def transmission_capacity(params: NetworkParams, epsilon: float) -> TcResult:
    """Multi-stream transmission capacity C = K lambda_eps (1 - eps).

    A non-positive bracket means no positive contention density meets the
    outage constraint; both outputs are then clamped to zero.
    """
    check_epsilon(epsilon)
    ds = validate(params)
    i_k = interference_constant(params.k_streams, params.alpha)
    bracket = _tc_bracket(params, epsilon)
    if not bracket > 0:
        return TcResult(0.0, 0.0, False)
    lam_eps = bracket / (i_k * ds.zeta_max ** (2.0 / params.alpha))
    return TcResult(lam_eps, params.k_streams * lam_eps * (1.0 - epsilon), True)


def tc_gap(params: NetworkParams, epsilon: float) -> float:
    """Capacity lost to quantization, C_perfect - C (unclamped)."""
    check_epsilon(epsilon)
    ds = validate(params)
    k = params.k_streams
    i_k = interference_constant(k, params.alpha)
    return (k * (1.0 - epsilon) / (i_k * ds.zeta_max ** (2.0 / params.alpha))
            * (k - 1) * math.log1p(params.beta * ds.delta))


def tc_feasible_bits(params: NetworkParams, epsilon: float) -> int:
    """Smallest integer feedback budget giving positive transmission capacity.

    Raises :class:`InfeasibleRegime` when even perfect CSI cannot meet the
    outage constraint, i.e. (1 - eps) exp(sigma^2 zeta_max / rho) >= 1.
    """
    check_epsilon(epsilon)
    ds = validate(params)
    noise_term = params.noise * ds.zeta_max / ds.rho
    if not (1.0 - epsilon) * math.exp(noise_term) < 1.0:
        raise InfeasibleRegime(
            f"outage target {epsilon} unreachable at this SNR even with perfect CSI")
    k, m = params.k_streams, params.m_antennas
    if k == 1 or m == 1:
        return 0
    q = (math.exp(-noise_term) / (1.0 - epsilon)) ** (1.0 / (k - 1)) - 1.0
    x = (m - 1) * math.log2(params.beta / q)
    # strict inequality: TC is zero when B equals x exactly
    return max(0, math.floor(x) + 1)


# ----------------------------------------------------------- ergodic rate

def _rate_constants(params: NetworkParams, user: int):
    ds = validate(params)
    _check_user(params, user)
    d = params.dist_per_user[user]
    c1 = params.noise * d ** params.alpha / ds.rho
    c2 = params.lam * interference_constant(params.k_streams, params.alpha) * d * d
    return c1, c2, ds.delta


def _intra_factor(x, delta, k):
    return (1.0 + delta * x) ** (k - 1)


def ergodic_rate(params: NetworkParams, user: int = 0,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Mean rate E[ln(1 + SINR)] of one user, by quadrature of the CCDF integral."""
    c1, c2, delta = _rate_constants(params, user)
    k, a = params.k_streams, 2.0 / params.alpha
    if c1 == 0 and c2 == 0 and (delta == 0 or k == 1):
        raise DivergentRate("no noise, no interference and no residual "
                            "self-interference: the rate is unbounded")

    def integrand(x):
        return np.exp(-c1 * x - c2 * x ** a) / ((1.0 + x) * _intra_factor(x, delta, k))

    return integrate_semi_infinite(integrand, cfg)


def rate_jensen_ub(params: NetworkParams, user: int = 0) -> float:
    """Jensen-type upper bound on the mean rate (finite even as P -> inf).

    Needs at least two streams: the bound rests on the log-moment of one
    intra-cluster interference term, which does not exist for K = 1.
    """
    ds = validate(params)
    _check_user(params, user)
    m, k, alpha = params.m_antennas, params.k_streams, params.alpha
    if m < 2 or k < 2:
        raise ValidationError("Jensen rate bound needs M >= 2 and K >= 2")
    half = math.ceil(alpha / 2.0)
    if half < 2:
        raise ValidationError("Jensen rate bound needs ceil(alpha/2) >= 2")
    if math.isinf(params.bits):
        return math.inf
    d = params.dist_per_user[user]
    inner = (1.0 + d ** (2 * alpha) * (math.pi * params.lam / (half - 1)) ** (alpha / 2.0)
             + ds.delta * (m - 1) + d ** alpha * params.noise / ds.rho)
    return (params.bits * math.log(2.0) / (m - 1) + harmonic(m - 1) - digamma(m)
            + math.log(inner))


def holder_a(v: float, delta: float, k_streams: int,
             cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """A(v) = int_0^inf [(1 + delta x)^(1-K) / (1 + x)]^v dx, by quadrature."""
    if not v > 1:
        raise ValueError(f"Holder exponent must exceed 1, got {v}")
    if delta == 0 or k_streams == 1:
        return 1.0 / (v - 1.0)
    return integrate_semi_infinite(
        lambda x: ((1.0 + x) * _intra_factor(x, delta, k_streams)) ** (-v), cfg)


def holder_a_closed(v: float, delta: float, k_streams: int) -> float:
    """Hypergeometric form of :func:`holder_a` (cross-check only, 0 < delta < 1).

    With x = t/(1-t) the integral becomes an Euler integral,
    A(v) = 2F1((K-1)v, 1; Kv; 1 - delta) / (Kv - 1).
    """
    if not 0 < delta <= 1:
        raise ValueError("closed form needs 0 < delta <= 1")
    g = (k_streams - 1) * v
    return gauss_2f1(g, 1.0, v + g, 1.0 - delta) / (v + g - 1.0)


def _exp_integral(scale1, scale2, a, cfg):
    """int_0^inf exp(-scale1 x - scale2 x^a) dx."""
    if scale1 == 0 and scale2 == 0:
        return math.inf
    if scale2 == 0:
        return 1.0 / scale1
    if scale1 == 0:
        return scale2 ** (-1.0 / a) * gamma_fn(1.0 + 1.0 / a)
    return integrate_semi_infinite(lambda x: np.exp(-scale1 * x - scale2 * x ** a), cfg)


def holder_candidates(params: NetworkParams, user: int = 0,
                      exponent_grid: Sequence[float] = DEFAULT_HOLDER_GRID,
                      cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> dict[float, float]:
    """Single-Holder upper bound for each exponent u1 (with 1/u1 + 1/v1 = 1)."""
    c1, c2, delta = _rate_constants(params, user)
    a = 2.0 / params.alpha
    out = {}
    for u in exponent_grid:
        if not u > 1:
            raise ValueError(f"Holder exponents must exceed 1, got {u}")
        v = u / (u - 1.0)
        first = _exp_integral(u * c1, u * c2, a, cfg)
        out[u] = first ** (1.0 / u) * holder_a(v, delta, params.k_streams, cfg) ** (1.0 / v)
    return out


def rate_holder_ub(params: NetworkParams, user: int = 0,
                   exponent_grid: Sequence[float] = DEFAULT_HOLDER_GRID,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Tightest single-Holder upper bound over ``exponent_grid``."""
    return min(holder_candidates(params, user, exponent_grid, cfg).values())


def rate_holder_ub_closed(params: NetworkParams, user: int = 0, u1: float = 2.0,
                          u2: float = 2.0, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Double-Holder bound: noise and interference exponentials split apart.

    Infinite when either the noise or the interference term vanishes.
    """
    c1, c2, delta = _rate_constants(params, user)
    if c1 == 0 or c2 == 0:
        return math.inf
    alpha = params.alpha
    v1 = u1 / (u1 - 1.0)
    v2 = u2 / (u2 - 1.0)
    return ((u1 * u2 * c1) ** (-1.0 / (u1 * u2))
            * gamma_fn(1.0 + alpha / 2.0) ** (1.0 / (u1 * v2))
            * (u1 * v2 * c2) ** (-alpha / (2.0 * u1 * v2))
            * holder_a(v1, delta, params.k_streams, cfg) ** (1.0 / v1))


def rate_holder_ub_no_noise(params: NetworkParams, user: int = 0,
                            cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Interference-limited Holder bound; scales as lambda^(-1/2) and 1/d_k."""
    if params.noise != 0:
        raise NoiseNotZero(f"bound requires zero noise, got sigma^2 = {params.noise}")
    validate(params)
    _check_user(params, user)
    alpha = params.alpha
    if params.lam == 0:
        return math.inf
    i_k = interference_constant(params.k_streams, alpha)
    delta = validate(params).delta
    d = params.dist_per_user[user]
    a_val = holder_a(alpha / (alpha - 1.0), delta, params.k_streams, cfg)
    return (gamma_fn(1.0 + alpha / 2.0) ** (1.0 / alpha) / (d * math.sqrt(alpha * params.lam * i_k))
            * a_val ** (1.0 - 1.0 / alpha))


# ----------------------------------------------------- Bernoulli bounds

def _g_sqrt(c: float) -> float:
    """int_0^inf exp(-c sqrt(x)) / (1 + x) dx for c > 0."""
    return (-2.0 * math.cos(c) * cosine_integral(c)
            + math.sin(c) * (math.pi - 2.0 * sine_integral(c)))


def bernoulli_closed_form(c2: float, r: float) -> tuple[float, float]:
    """Si/Ci forms of the Bernoulli bounds for alpha = 4 and no noise.

    ``r`` is (K-1) delta. Returns ``(lower, upper)``; the lower value is the
    untruncated lower bound, which is never larger than the truncated one.
    """
    if not c2 > 0:
        raise ValueError("closed form needs c2 > 0")
    g = _g_sqrt(c2)
    lower = (1.0 + r) * g - 2.0 * r / (c2 * c2)
    if r == 0:
        return lower, g
    if abs(r - 1.0) < 1e-12:
        raise DegenerateScale("(K-1) delta = 1 makes the closed upper form 0/0")
    upper = (g - _g_sqrt(c2 / math.sqrt(r))) / (1.0 - r)
    return lower, upper


def rate_bernoulli_bounds(params: NetworkParams, user: int = 0,
                          cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> BoundSet:
    """Lower/exact/upper rate triple from Bernoulli's inequality on the
    intra-cluster factor (1 + delta x)^(K-1).

    Upper: (1 + delta x)^(K-1) >= 1 + (K-1) delta x in the denominator.
    Lower: (1 + delta x)^(1-K) >= max(0, 1 - (K-1) delta x), integrated up to
    the zero crossing. For alpha = 4 without noise the upper bound is also
    evaluated in closed form and the two values recorded in ``method_tags``.
    """
    c1, c2, delta = _rate_constants(params, user)
    k, a = params.k_streams, 2.0 / params.alpha
    r = (k - 1) * delta
    exact = ergodic_rate(params, user, cfg)
    if r == 0:
        return BoundSet(exact, exact, exact,
                        {"lower": "exact (no residual interference)",
                         "exact": "quadrature", "upper": "exact (no residual interference)"})

    def upper_f(x):
        return np.exp(-c1 * x - c2 * x ** a) / ((1.0 + x) * (1.0 + r * x))

    def lower_f(x):
        return np.exp(-c1 * x - c2 * x ** a) * (1.0 - r * x) / (1.0 + x)

    upper = integrate_semi_infinite(upper_f, cfg)
    # x = t/(1-t) keeps the panels dense near 0 when 1/r is large
    end = 1.0 / r
    lower = integrate_interval(lambda t: lower_f(t / (1.0 - t)) / (1.0 - t) ** 2,
                               0.0, end / (1.0 + end), cfg)
    tags = {"lower": "quadrature, truncated Bernoulli", "exact": "quadrature",
            "upper": "quadrature, Bernoulli"}
    if params.alpha == 4.0 and params.noise == 0 and c2 > 0 and abs(r - 1.0) > 1e-12:
        _, closed_upper = bernoulli_closed_form(c2, r)
        tags["upper_closed_form"] = repr(closed_upper)
    return BoundSet(lower, exact, upper, tags)


# --------------------------------------------------------------- summary

def evaluate_all(params: NetworkParams, epsilon: float = 0.1,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> dict[str, float]:
    """Every metric for one parameter point, as an ordered flat record."""
    validate(params)
    rec: dict[str, float] = {}
    for k in range(params.k_streams):
        rec[f"outage[{k}]"] = outage_probability(params, k)
    rec["throughput"] = network_throughput(params)
    rec["throughput_lb"] = network_throughput_lb(params)
    rec["optimal_density"] = optimal_density(params)
    rec["throughput_ratio"] = throughput_ratio(params)
    tc = transmission_capacity(params, epsilon)
    rec["epsilon"] = epsilon
    rec["tc_capacity"] = tc.capacity
    rec["tc_max_density"] = tc.max_density
    rec["tc_feasible"] = float(tc.feasible)
    rec["tc_gap"] = tc_gap(params, epsilon)
    try:
        rec["tc_feasible_bits"] = float(tc_feasible_bits(params, epsilon))
    except InfeasibleRegime:
        rec["tc_feasible_bits"] = math.nan
    for k in range(params.k_streams):
        bs = rate_bernoulli_bounds(params, k, cfg)
        rec[f"rate[{k}]"] = bs.exact
        rec[f"rate_bernoulli_lb[{k}]"] = bs.lower
        rec[f"rate_bernoulli_ub[{k}]"] = bs.upper
        rec[f"rate_holder_ub[{k}]"] = rate_holder_ub(params, k, cfg=cfg)
        rec[f"rate_holder_ub_closed[{k}]"] = rate_holder_ub_closed(params, k, cfg=cfg)
        if params.noise == 0:
            rec[f"rate_holder_ub_no_noise[{k}]"] = rate_holder_ub_no_noise(params, k, cfg)
        if params.m_antennas >= 2 and params.k_streams >= 2:
            rec[f"rate_jensen_ub[{k}]"] = rate_jensen_ub(params, k)
    return rec
