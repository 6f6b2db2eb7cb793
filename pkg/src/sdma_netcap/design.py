"""Planners built on the closed-form metrics.

Integer enumeration is the authoritative optimizer for the stream and
antenna counts; the large-K approximations are offered alongside for the
adaptive schemes. Feedback planners return the smallest integer bit budget
and re-check the target inequality against :mod:`analytics`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

from scipy.optimize import brentq

from . import analytics
from .core import NetcapError, NetworkParams, ValidationError, check_epsilon, linear_to_db, validate
from .specfun import gamma_fn


class OffsetOutOfRange(NetcapError, ValueError):
    """Requested offset lies outside the planner's validity window."""


class SingleStream(ValidationError):
    """A throughput ratio is identically 1 with one stream; nothing to plan."""

    code = "SingleStream"


class StreamMethod(enum.Enum):
    ENUMERATION = "enumeration"
    LARGE_K = "large_k_approx"


@dataclass(frozen=True)
class StreamPlan:
    k_star: int
    objective_curve: tuple[float, ...]
    method: StreamMethod
    # continuous stationary point behind a large-K answer
    k_continuous: float = math.nan


@dataclass(frozen=True)
class TcGap:
    c: float


@dataclass(frozen=True)
class ThroughputRatio:
    r: float


@dataclass(frozen=True)
class ThreeDbRule:
    pass


OffsetKind = Union[TcGap, ThroughputRatio, ThreeDbRule]


@dataclass(frozen=True)
class FeedbackPlan:
    bits_required: int
    offset_kind: OffsetKind
    # the real-valued bound the integer was rounded from
    bits_bound: float = math.nan


def _argmax_small_k(values) -> int:
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best + 1


# ------------------------------------------------------------ stream count

def throughput_curve(params: NetworkParams) -> tuple[float, ...]:
    """Throughput lower bound for K = 1..M; delta stays at its M-antenna value."""
    validate(params)
    return tuple(analytics.network_throughput_lb(params.with_streams(k))
                 for k in range(1, params.m_antennas + 1))


def _throughput_large_k(params: NetworkParams) -> float:
    """Continuous maximizer x^alpha of K exp(-c1 K - c2 K^(2/alpha)).

    The stationary condition is c1 x^alpha + (2/alpha) c2 x^2 = 1 with
    K = x^alpha.
    """
    ds = validate(params)
    a = params.alpha
    zeta = ds.zeta_max
    c1 = params.noise * zeta / params.power + math.log1p(params.beta * ds.delta)
    c2 = params.lam * math.pi * gamma_fn(1.0 - 2.0 / a) * zeta ** (2.0 / a)
    if c1 == 0 and c2 == 0:
        return math.inf

    def f(x):
        return c1 * x ** a + (2.0 / a) * c2 * x * x - 1.0

    hi = 1.0
    while f(hi) < 0:
        hi *= 2.0
    return brentq(f, 0.0, hi, xtol=1e-14, rtol=1e-14) ** a


def _clamp_ceil(x: float, m: int) -> int:
    if math.isinf(x):
        return m
    return min(max(math.ceil(x - 1e-12), 1), m)


def optimal_streams_throughput(params: NetworkParams,
                               method: StreamMethod = StreamMethod.ENUMERATION) -> StreamPlan:
    curve = throughput_curve(params)
    if method is StreamMethod.ENUMERATION:
        return StreamPlan(_argmax_small_k(curve), curve, method)
    x = _throughput_large_k(params)
    return StreamPlan(_clamp_ceil(x, params.m_antennas), curve, method, x)


def tc_curve(params: NetworkParams, epsilon: float) -> tuple[float, ...]:
    check_epsilon(epsilon)
    validate(params)
    return tuple(analytics.transmission_capacity(params.with_streams(k), epsilon).capacity
                 for k in range(1, params.m_antennas + 1))


def optimal_streams_tc(params: NetworkParams, epsilon: float,
                       method: StreamMethod = StreamMethod.ENUMERATION) -> StreamPlan:
    """Stream count maximizing transmission capacity.

    The large-K answer is ceil((1 - 2/a) C4 / ((2 - 2/a) C3)), with
    C3 = sigma^2 zeta/P + ln(1 + beta delta), C4 = -ln(1 - eps) + ln(1 + beta delta).
    """
    curve = tc_curve(params, epsilon)
    if method is StreamMethod.ENUMERATION:
        return StreamPlan(_argmax_small_k(curve), curve, method)
    ds = validate(params)
    a = params.alpha
    l1 = math.log1p(params.beta * ds.delta)
    c3 = params.noise * ds.zeta_max / params.power + l1
    c4 = -math.log1p(-epsilon) + l1
    x = math.inf if c3 == 0 else (1 - 2 / a) * c4 / ((2 - 2 / a) * c3)
    return StreamPlan(_clamp_ceil(x, params.m_antennas), curve, method, x)


def optimal_antennas_throughput(params: NetworkParams, m_max: int) -> int:
    """Fully loaded antenna count M = K in 1..m_max with the largest
    throughput lower bound at the given per-user bit budget."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    validate(params)
    curve = antenna_curve(params, m_max)
    return _argmax_small_k(curve)


def antenna_curve(params: NetworkParams, m_max: int) -> tuple[float, ...]:
    return tuple(analytics.network_throughput_lb(params.with_antennas(m))
                 for m in range(1, m_max + 1))


# ---------------------------------------------------------- feedback bits

def tc_gap_per_stream(params: NetworkParams, epsilon: float) -> float:
    """Capacity offset without the leading stream factor,
    (1 - eps)(K - 1) ln(1 + beta delta) / (I_K zeta_max^(2/a))."""
    return analytics.tc_gap(params, epsilon) / params.k_streams


def _bits_bound(m: int, beta: float, q: float) -> float:
    """(M - 1)(log2 beta - log2 q): real bit count at which beta*delta = q."""
    return (m - 1) * (math.log2(beta) - math.log2(q))


def _smallest_bits(start: int, ok) -> int:
    """Walk from ``start`` to the smallest B >= 0 with ok(B) true."""
    b = max(start, 0)
    while not ok(b):
        b += 1
    while b > 0 and ok(b - 1):
        b -= 1
    return b


def bits_for_tc_offset(params: NetworkParams, epsilon: float, c: float) -> FeedbackPlan:
    """Smallest B with capacity offset Delta C <= ln c."""
    check_epsilon(epsilon)
    ds = validate(params)
    k, m = params.k_streams, params.m_antennas
    kind = TcGap(c)
    if k == 1 or m == 1:
        # no intra-cluster interference: the offset is zero for any budget
        if c < 1:
            raise OffsetOutOfRange(f"offset factor c={c} must be >= 1")
        return FeedbackPlan(0, kind, -math.inf)
    i_k = analytics.interference_constant(k, params.alpha)
    expo = i_k * ds.zeta_max ** (2.0 / params.alpha) / (k * (k - 1) * (1.0 - epsilon))
    upper = (1.0 + params.beta) ** (1.0 / expo)
    if not 1.0 < c <= upper * (1 + 1e-12):
        raise OffsetOutOfRange(
            f"offset factor c={c} outside (1, {upper:.6g}]; c=1 would need perfect CSI")
    bound = _bits_bound(m, params.beta, math.expm1(expo * math.log(c)))
    target = math.log(c) * (1 + 1e-12)
    b = _smallest_bits(math.ceil(bound - 1e-9),
                       lambda bb: analytics.tc_gap(params.replace(bits=float(bb)), epsilon) <= target)
    return FeedbackPlan(b, kind, bound)


def bits_for_throughput_ratio(params: NetworkParams, r: float) -> FeedbackPlan:
    """Smallest B with throughput ratio (1 + beta delta)^(K-1) <= r."""
    validate(params)
    k, m = params.k_streams, params.m_antennas
    if k == 1:
        raise SingleStream("throughput ratio is identically 1 with a single stream")
    upper = (1.0 + params.beta) ** (k - 1)
    if not 1.0 < r <= upper * (1 + 1e-12):
        raise OffsetOutOfRange(
            f"ratio r={r} outside (1, {upper:.6g}]; r=1 would need perfect CSI")
    bound = _bits_bound(m, params.beta, math.expm1(math.log(r) / (k - 1)))
    target = r * (1 + 1e-12)
    b = _smallest_bits(math.ceil(bound - 1e-9),
                       lambda bb: analytics.throughput_ratio(params.replace(bits=float(bb))) <= target)
    return FeedbackPlan(b, ThroughputRatio(r), bound)


def bits_three_db_rule(params: NetworkParams) -> FeedbackPlan:
    """Rule of thumb (M - 1) beta_dB / 3 bits, rounded up.

    Sets beta delta = 1 (with 10 log10 2 taken as 3 dB), which makes the
    throughput ratio about 2^(K-1).
    """
    validate(params)
    bound = (params.m_antennas - 1) * linear_to_db(params.beta) / 3.0
    return FeedbackPlan(max(0, math.ceil(bound - 1e-9)), ThreeDbRule(), bound)
