"""Domain types, parameter validation and derived scalars.

Every engine in the package (closed-form analytics, Monte Carlo, design
planners) consumes a :class:`NetworkParams` and the :class:`DerivedScalars`
computed from it by :func:`validate`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

INF = math.inf


class NetcapError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(NetcapError, ValueError):
    """One or more parameter invariants are violated.

    ``violations`` lists ``(code, message)`` pairs for every violated
    invariant, not only the first one.
    """

    code = "ValidationError"

    def __init__(self, message: str, violations: Sequence[tuple[str, str]] | None = None):
        super().__init__(message)
        self.violations = list(violations) if violations else [(self.code, message)]

    @property
    def codes(self) -> list[str]:
        return [c for c, _ in self.violations]


class AlphaOutOfRange(ValidationError):
    code = "AlphaOutOfRange"


class StreamsExceedAntennas(ValidationError):
    code = "StreamsExceedAntennas"


class NonPositiveDistance(ValidationError):
    code = "NonPositiveDistance"


class EpsilonOutOfRange(ValidationError):
    code = "EpsilonOutOfRange"


class NumericalError(NetcapError, ArithmeticError):
    """A numerical procedure failed (no convergence, divergence, singularity)."""


_CODE_TO_CLASS = {
    cls.code: cls
    for cls in (ValidationError, AlphaOutOfRange, StreamsExceedAntennas,
                NonPositiveDistance, EpsilonOutOfRange)
}


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


class QuantizationScheme(enum.Enum):
    """Channel-direction feedback model."""

    PERFECT_CSI = "perfect"
    QCA = "qca"
    RVQ = "rvq"

    @classmethod
    def parse(cls, value: "str | QuantizationScheme") -> "QuantizationScheme":
        if isinstance(value, cls):
            return value
        v = str(value).strip().lower().replace("-", "_")
        aliases = {"perfect": cls.PERFECT_CSI, "perfect_csi": cls.PERFECT_CSI,
                   "perfectcsi": cls.PERFECT_CSI, "qca": cls.QCA, "rvq": cls.RVQ}
        try:
            return aliases[v]
        except KeyError:
            raise ValueError(f"unknown quantization scheme {value!r}") from None

    def check(self, m_antennas: int, bits: float) -> None:
        if self is QuantizationScheme.RVQ and math.isinf(bits):
            raise ValidationError("RVQ requires a finite number of feedback bits")
        if self is QuantizationScheme.QCA and not math.isinf(bits) and m_antennas < 2:
            raise ValidationError("QCA with finite bits requires at least 2 antennas")


@dataclass(frozen=True)
class NetworkParams:
    """Full parameter tuple of the limited-feedback ZF network model.

    ``bits`` is the per-user feedback budget; ``math.inf`` means perfect
    CSI. ``beta_per_user`` holds linear SINR targets. ``power`` is the total
    transmit power P, split equally over the K streams.
    """

    lam: float
    alpha: float
    m_antennas: int
    k_streams: int
    bits: float
    beta_per_user: tuple[float, ...]
    dist_per_user: tuple[float, ...]
    power: float = 1.0
    noise: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta_per_user", tuple(float(b) for b in self.beta_per_user))
        object.__setattr__(self, "dist_per_user", tuple(float(d) for d in self.dist_per_user))

    @classmethod
    def uniform(cls, lam: float, alpha: float, m_antennas: int, k_streams: int | None = None,
                bits: float = INF, beta: float | None = None, dist: float = 1.0,
                *, beta_db: float | None = None, snr_db: float | None = None,
                power: float | None = None, noise: float | None = None) -> "NetworkParams":
        """Build params with identical target and distance for every user.

        Exactly one of ``beta`` / ``beta_db`` must be given. ``snr_db`` is the
        transmit SNR P/sigma^2 (noise fixed to 1), so clusters with different
        stream counts built from one value share the same total power; the
        per-stream SNR ``rho/sigma^2`` is then P/(K sigma^2). ``snr_db=inf``
        (or omitting all of snr/power/noise) gives a noiseless network.
        """
        k = m_antennas if k_streams is None else k_streams
        if (beta is None) == (beta_db is None):
            raise ValueError("give exactly one of beta or beta_db")
        b = db_to_linear(beta_db) if beta_db is not None else float(beta)
        if snr_db is not None:
            if power is not None or noise is not None:
                raise ValueError("snr_db excludes explicit power/noise")
            if math.isinf(snr_db):
                power, noise = 1.0, 0.0
            else:
                power, noise = db_to_linear(snr_db), 1.0
        power = 1.0 if power is None else power
        noise = 0.0 if noise is None else noise
        return cls(lam=lam, alpha=alpha, m_antennas=m_antennas, k_streams=k, bits=bits,
                   beta_per_user=(b,) * max(k, 0), dist_per_user=(dist,) * max(k, 0),
                   power=power, noise=noise)

    @property
    def rho(self) -> float:
        """Per-stream power P/K."""
        return self.power / self.k_streams

    @property
    def snr(self) -> float:
        """Per-stream SNR rho/sigma^2 (``inf`` when noiseless)."""
        return INF if self.noise == 0 else self.rho / self.noise

    @property
    def beta(self) -> float:
        """Common SINR target; the largest one when targets differ."""
        return max(self.beta_per_user)

    @property
    def d_max(self) -> float:
        return max(self.dist_per_user)

    @property
    def perfect_csi(self) -> bool:
        return math.isinf(self.bits) or self.m_antennas == 1

    def replace(self, **changes) -> "NetworkParams":
        return replace(self, **changes)

    def with_streams(self, k: int) -> "NetworkParams":
        """Same cluster with ``k`` streams, equal targets and distance d_max.

        The total power P is held fixed, so the per-stream power becomes P/k.
        """
        return replace(self, k_streams=k, beta_per_user=(self.beta,) * k,
                       dist_per_user=(self.d_max,) * k)

    def with_antennas(self, m: int, k: int | None = None) -> "NetworkParams":
        p = replace(self, m_antennas=m)
        return p.with_streams(m if k is None else k)

    @property
    def transmit_snr(self) -> float:
        """P/sigma^2 (``inf`` when noiseless)."""
        return INF if self.noise == 0 else self.power / self.noise

    def with_snr_db(self, snr_db: float) -> "NetworkParams":
        """Keep P and set sigma^2 so that P/sigma^2 hits ``snr_db``."""
        if math.isinf(snr_db):
            return replace(self, noise=0.0)
        return replace(self, noise=self.power / db_to_linear(snr_db))


@dataclass(frozen=True)
class DerivedScalars:
    delta: float
    zeta_per_user: tuple[float, ...]
    zeta_max: float
    rho: float
    snr: float


def quantization_delta(bits: float, m_antennas: int) -> float:
    """Quantization error bound 2^(-B/(M-1)); zero for perfect CSI or M = 1."""
    if m_antennas <= 1 or math.isinf(bits):
        return 0.0
    return 2.0 ** (-bits / (m_antennas - 1))


def _violations(p: NetworkParams) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    if not (p.lam >= 0 and math.isfinite(p.lam)):
        out.append(("ValidationError", f"lambda must be finite and >= 0, got {p.lam}"))
    if not p.alpha > 2 or not math.isfinite(p.alpha):
        out.append(("AlphaOutOfRange", f"path-loss exponent must exceed 2, got {p.alpha}"))
    if int(p.m_antennas) != p.m_antennas or p.m_antennas < 1:
        out.append(("ValidationError", f"antennas must be an integer >= 1, got {p.m_antennas}"))
    if int(p.k_streams) != p.k_streams or p.k_streams < 1:
        out.append(("ValidationError", f"streams must be an integer >= 1, got {p.k_streams}"))
    elif p.k_streams > p.m_antennas:
        out.append(("StreamsExceedAntennas",
                    f"streams K={p.k_streams} exceed antennas M={p.m_antennas}"))
    if math.isnan(p.bits) or p.bits < 0:
        out.append(("ValidationError", f"feedback bits must be >= 0, got {p.bits}"))
    k = p.k_streams if isinstance(p.k_streams, int) else -1
    if len(p.beta_per_user) != k:
        out.append(("ValidationError",
                    f"beta_per_user has {len(p.beta_per_user)} entries, expected K={k}"))
    if len(p.dist_per_user) != k:
        out.append(("ValidationError",
                    f"dist_per_user has {len(p.dist_per_user)} entries, expected K={k}"))
    if any(not b > 0 for b in p.beta_per_user):
        out.append(("ValidationError", "every SINR target must be > 0"))
    if any(not d > 0 for d in p.dist_per_user):
        out.append(("NonPositiveDistance", "every link distance must be > 0"))
    if not p.power > 0:
        out.append(("ValidationError", f"power must be > 0, got {p.power}"))
    if not p.noise >= 0:
        out.append(("ValidationError", f"noise variance must be >= 0, got {p.noise}"))
    return out


def raise_violations(violations: list[tuple[str, str]]) -> None:
    if not violations:
        return
    specific = [c for c, _ in violations if c != ValidationError.code and c in _CODE_TO_CLASS]
    cls = _CODE_TO_CLASS[specific[0]] if specific else ValidationError
    msg = "; ".join(f"{c}: {m}" for c, m in violations)
    raise cls(msg, violations)


def validate(params: NetworkParams) -> DerivedScalars:
    """Check every invariant of ``params`` and compute the derived scalars.

    All violated invariants are reported together; the raised class is the
    one matching the first violation that has a dedicated class.
    """
    raise_violations(_violations(params))
    delta = quantization_delta(params.bits, params.m_antennas)
    zetas = tuple(b * d ** params.alpha
                  for b, d in zip(params.beta_per_user, params.dist_per_user))
    zeta_max = params.beta * params.d_max ** params.alpha
    return DerivedScalars(delta=delta, zeta_per_user=zetas, zeta_max=zeta_max,
                          rho=params.rho, snr=params.snr)


def check_alpha(alpha: float) -> None:
    if not alpha > 2 or not math.isfinite(alpha):
        raise AlphaOutOfRange(f"path-loss exponent must exceed 2, got {alpha}")


def check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon < 1:
        raise EpsilonOutOfRange(f"outage constraint must lie in (0, 1), got {epsilon}")
