"""Monte Carlo simulation of a typical broadcast cluster in a Poisson field.

Two fidelity levels share one driver:

* ``SimMode.FAST`` samples every random gain from its analytical law:
  Exp(1) signal gain, Gamma(K, 1) interferer marks, and intra-cluster terms
  X * Beta(1, M-2) with X ~ Gamma(M-1, delta) (QCA).
* ``SimMode.FULL`` builds every gain from explicit vectors: CN(0, I)
  channels, quantized directions, normalized ZF precoders, and for each
  interferer a precoder computed from its own quantized users.

Randomness is organised in fixed blocks of ``BLOCK`` trials. Block ``b``
draws stream ``s`` of user ``u`` from ``SeedSequence(seed, spawn_key=(b, s, u))``
and always generates the full block, so the samples of trial ``i`` depend
only on ``(seed, i)``, never on the total trial count or the number of
workers. Stream 0 is the own cluster, stream ``1 + j`` the j-th annulus of
the interference window.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .core import NetcapError, NetworkParams, NumericalError, QuantizationScheme, validate

BLOCK = 1024
# interferers per full-physics chunk; bounds memory at ~50k x K x M complex
_FULL_CHUNK = 50_000
RVQ_MAX_BITS = 20
SINGULAR_COND = 1e12


class SingularMatrix(NumericalError):
    pass


class CodebookTooLarge(NetcapError, ValueError):
    pass


class SimMode(enum.Enum):
    FAST = "fast"
    FULL = "full"


@dataclass(frozen=True)
class FixedRadius:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("window radius must be positive")


@dataclass(frozen=True)
class AdaptiveDoubling:
    """Grow the interference window by doubling its radius until the
    estimate moves by less than ``rel_tol`` (relative).

    ``init_radius=None`` means 20 * d_max.
    """

    init_radius: float | None = None
    rel_tol: float = 5e-3
    max_doublings: int = 8

    def __post_init__(self):
        if self.init_radius is not None and not self.init_radius > 0:
            raise ValueError("window radius must be positive")
        if not 0 < self.rel_tol <= 0.1:
            raise ValueError("rel_tol must lie in (0, 0.1]")


WindowPolicy = Union[FixedRadius, AdaptiveDoubling]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SDMA_NETCAP_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SimConfig:
    trials: int = 10_000
    seed: int = 0
    window: WindowPolicy = field(default_factory=AdaptiveDoubling)
    quantization: QuantizationScheme = QuantizationScheme.QCA
    mode: SimMode = SimMode.FAST
    workers: int = field(default_factory=default_workers)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        object.__setattr__(self, "quantization", QuantizationScheme.parse(self.quantization))


@dataclass(frozen=True)
class SinrSample:
    """Per-user quantities of one trial (all arrays have length K)."""

    per_user_sinr: np.ndarray
    signal: np.ndarray
    inter_cluster: np.ndarray
    intra_cluster: np.ndarray


@dataclass(frozen=True)
class MetricEstimate:
    value: float
    half_width: float
    trials: int
    radius: float = math.nan


# ---------------------------------------------------------------- metrics

@dataclass(frozen=True)
class Outage:
    """P(SINR_k <= beta_k); ``beta=None`` uses the targets in the params."""

    beta: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Throughput:
    pass


@dataclass(frozen=True)
class MeanRate:
    pass


Metric = Union[Outage, Throughput, MeanRate]


# ---------------------------------------------------------- random pieces

def _block_rng(seed: int, block: int, stream: int, user: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block, stream, user)))


def sample_ppp(lam: float, radius: float, rng: np.random.Generator,
               inner_radius: float = 0.0) -> np.ndarray:
    """Distances to the points of a PPP of intensity ``lam`` in the disc
    (or annulus, with ``inner_radius``) around the origin."""
    if lam < 0 or not radius > inner_radius >= 0:
        raise ValueError("need lam >= 0 and radius > inner_radius >= 0")
    if lam == 0:
        return np.empty(0)
    n = rng.poisson(lam * math.pi * (radius ** 2 - inner_radius ** 2))
    r2 = inner_radius ** 2 + (radius ** 2 - inner_radius ** 2) * rng.random(n)
    return np.sqrt(r2)


def draw_channel(m: int, rng: np.random.Generator, size: tuple[int, ...] = ()) -> np.ndarray:
    """CN(0, 1) entries; trailing axis has length ``m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    shape = tuple(size) + (m,)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(0.5)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _orthogonal_unit(hbar: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Isotropic unit vectors orthogonal (hbar . u^H = 0) to each row of ``hbar``."""
    u = draw_channel(hbar.shape[-1], rng, hbar.shape[:-1])
    u = u - np.sum(u * hbar.conj(), axis=-1, keepdims=True) * hbar
    return _unit(u)


def quantize_qca(h: np.ndarray, bits: float, rng: np.random.Generator
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Quantization-cell model of B-bit direction feedback.

    sin^2(phi) is drawn from the CDF 2^B x^(M-1) on [0, delta] by inversion
    and the quantized direction is rotated away from h/|h| by phi towards
    an isotropic orthogonal direction. Works on a single channel or on any
    stack of channels (last axis = antennas).
    """
    m = h.shape[-1]
    if m < 2:
        raise ValueError("QCA needs M >= 2")
    if math.isinf(bits):
        return _unit(h), np.zeros(h.shape[:-1])
    delta = 2.0 ** (-bits / (m - 1))
    hbar = _unit(h)
    sin2 = delta * rng.random(h.shape[:-1]) ** (1.0 / (m - 1))
    u = _orthogonal_unit(hbar, rng)
    hq = np.sqrt(1.0 - sin2)[..., None] * hbar + np.sqrt(sin2)[..., None] * u
    return hq, sin2


def random_codebook(m: int, bits: int, rng: np.random.Generator) -> np.ndarray:
    """2^B independent isotropic unit vectors, one per row."""
    if bits > RVQ_MAX_BITS:
        raise CodebookTooLarge(f"RVQ codebook with {bits} bits exceeds the {RVQ_MAX_BITS}-bit guard")
    return _unit(draw_channel(m, rng, (2 ** int(bits),)))


def quantize_rvq(h: np.ndarray, codebook: np.ndarray) -> np.ndarray:
    """Codeword with the largest |hbar . v^H|^2 (smallest chordal distance)."""
    hbar = _unit(h)
    scores = np.abs(hbar @ codebook.conj().T) ** 2
    return codebook[np.argmax(scores, axis=-1)]


def zf_beamformers(hq: np.ndarray) -> np.ndarray:
    """Unit-norm zero-forcing beams for the K x M matrix of quantized rows.

    Returns an M x K matrix whose column k is orthogonal to every row j != k.
    """
    w, bad = _zf_batch(hq[None, ...])
    if bad[0]:
        raise SingularMatrix("quantized channel matrix is (numerically) rank deficient")
    return w[0]


def _zf_batch(hq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched pseudo-inverse with column normalization; flags ill-conditioned rows."""
    hh = np.conj(np.swapaxes(hq, -1, -2))
    gram = hq @ hh
    cond = np.linalg.cond(gram)
    bad = ~(cond < SINGULAR_COND)
    if np.any(bad):
        gram = gram.copy()
        gram[bad] = np.eye(gram.shape[-1])
    w = hh @ np.linalg.inv(gram)
    return w / np.linalg.norm(w, axis=-2, keepdims=True), bad


def _quantize_batch(h: np.ndarray, scheme: QuantizationScheme, bits: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Quantized directions for a stack of channels (..., M)."""
    m = h.shape[-1]
    if scheme is QuantizationScheme.PERFECT_CSI or m == 1 or math.isinf(bits):
        return _unit(h)
    if scheme is QuantizationScheme.QCA:
        return quantize_qca(h, bits, rng)[0]
    if bits > RVQ_MAX_BITS:
        raise CodebookTooLarge(f"RVQ codebook with {bits} bits exceeds the {RVQ_MAX_BITS}-bit guard")
    flat = h.reshape(-1, h.shape[-1]) if h.ndim > 1 else h[None, :]
    # one fresh codebook per channel realization
    books = _unit(draw_channel(m, rng, (flat.shape[0], 2 ** int(bits))))
    scores = np.abs(np.einsum("nm,ncm->nc", _unit(flat), books.conj())) ** 2
    picked = books[np.arange(flat.shape[0]), np.argmax(scores, axis=1)]
    return picked.reshape(h.shape)


def _precoders(n: int, k: int, m: int, scheme: QuantizationScheme, bits: float,
               rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Own-user channels and unit-norm ZF precoders for ``n`` clusters.

    Ill-conditioned draws are re-drawn from the same stream, so the result
    stays a deterministic function of the generator state.
    """
    h = draw_channel(m, rng, (n, k))
    hq = _quantize_batch(h, scheme, bits, rng)
    w, bad = _zf_batch(hq)
    while np.any(bad):
        idx = np.flatnonzero(bad)
        h[idx] = draw_channel(m, rng, (idx.size, k))
        hq_new = _quantize_batch(h[idx], scheme, bits, rng)
        w_new, bad_new = _zf_batch(hq_new)
        w[idx] = w_new
        bad = np.zeros_like(bad)
        bad[idx] = bad_new
    return h, w


# --------------------------------------------------------- block sampling

def _rvq_sin2(m: int, bits: float, rng: np.random.Generator, size) -> np.ndarray:
    # min of 2^B iid Beta(M-1, 1): CDF 1 - (1 - x^(M-1))^(2^B)
    u = rng.random(size)
    n = 2.0 ** bits
    return (-np.expm1(np.log1p(-u) / n)) ** (1.0 / (m - 1))


def _own_cluster_block(params: NetworkParams, cfg: SimConfig, block: int
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Normalized signal gains |h_k w_k|^2 and intra-cluster sums
    sum_{j != k} |h_k w_j|^2, both shaped (BLOCK, K)."""
    rng = _block_rng(cfg.seed, block, 0)
    k, m = params.k_streams, params.m_antennas
    scheme = cfg.quantization
    perfect = scheme is QuantizationScheme.PERFECT_CSI or params.perfect_csi
    if cfg.mode is SimMode.FAST:
        signal = rng.standard_exponential((BLOCK, k))
        if perfect or k == 1:
            return signal, np.zeros((BLOCK, k))
        if scheme is QuantizationScheme.QCA:
            delta = 2.0 ** (-params.bits / (m - 1))
            x = rng.gamma(m - 1, delta, (BLOCK, k, k - 1))
        else:
            x = rng.gamma(m, 1.0, (BLOCK, k, k - 1)) * _rvq_sin2(m, params.bits, rng,
                                                                  (BLOCK, k, k - 1))
        beta = rng.beta(1.0, m - 2, (BLOCK, k, k - 1)) if m > 2 else np.ones((BLOCK, k, k - 1))
        return signal, np.sum(x * beta, axis=2)
    h, w = _precoders(BLOCK, k, m, QuantizationScheme.PERFECT_CSI if perfect else scheme,
                      params.bits, rng)
    gains = np.abs(h @ w) ** 2  # [n, user k, beam j]
    signal = np.diagonal(gains, axis1=1, axis2=2).copy()
    intra = gains.sum(axis=2) - signal
    if perfect:
        intra[:] = 0.0
    return signal, intra


def _ring_bounds(r0: float, ring: int) -> tuple[float, float]:
    if ring == 0:
        return 0.0, r0
    return r0 * 2.0 ** (ring - 1), r0 * 2.0 ** ring


def _ring_block(params: NetworkParams, cfg: SimConfig, block: int, r0: float,
                ring: int, users: tuple[int, ...]) -> np.ndarray:
    """Normalized inter-cluster interference sum S_i D_i^-alpha of one
    annulus for every trial of the block and each listed user, shaped
    (BLOCK, len(users)). Each user has its own stream, so the values do not
    depend on which other users are simulated."""
    k, m = params.k_streams, params.m_antennas
    out = np.zeros((BLOCK, len(users)))
    if params.lam == 0:
        return out
    inner, outer = _ring_bounds(r0, ring)
    mean_count = params.lam * math.pi * (outer ** 2 - inner ** 2)
    scheme = QuantizationScheme.PERFECT_CSI if params.perfect_csi else cfg.quantization
    for col, user in enumerate(users):
        rng = _block_rng(cfg.seed, block, 1 + ring, user)
        counts = rng.poisson(mean_count, BLOCK)
        total = int(counts.sum())
        r2 = inner ** 2 + (outer ** 2 - inner ** 2) * rng.random(total)
        path = r2 ** (-params.alpha / 2.0)
        if cfg.mode is SimMode.FAST:
            marks = rng.gamma(k, 1.0, total)
        else:
            marks = _full_marks(total, k, m, scheme, params.bits, rng)
        owner = np.repeat(np.arange(BLOCK), counts)
        out[:, col] = np.bincount(owner, weights=marks * path, minlength=BLOCK)
    return out


def _full_marks(n: int, k: int, m: int, scheme: QuantizationScheme, bits: float,
                rng: np.random.Generator) -> np.ndarray:
    """||g W_i||^2 for ``n`` interferers, each with its own ZF precoder."""
    out = np.empty(n)
    for start in range(0, n, _FULL_CHUNK):
        c = min(_FULL_CHUNK, n - start)
        _, w = _precoders(c, k, m, scheme, bits, rng)
        g = draw_channel(m, rng, (c,))
        out[start:start + c] = np.sum(np.abs(np.einsum("nm,nmk->nk", g, w)) ** 2, axis=1)
    return out


def _block_task(args):
    kind, params, cfg, block, r0, ring, users = args
    if kind == "own":
        return _own_cluster_block(params, cfg, block)
    return _ring_block(params, cfg, block, r0, ring, users)


def _n_blocks(trials: int) -> int:
    return -(-trials // BLOCK)


def _run_blocks(tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [_block_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_block_task, tasks, chunksize=1))


class _TrialSet:
    """Normalized gains of ``cfg.trials`` trials, with a growable window."""

    def __init__(self, params: NetworkParams, cfg: SimConfig, r0: float,
                 users: tuple[int, ...] | None = None):
        validate(params)
        self.users = tuple(range(params.k_streams)) if users is None else tuple(users)
        cfg.quantization.check(params.m_antennas, params.bits)
        self.params, self.cfg, self.r0 = params, cfg, r0
        self.blocks = _n_blocks(cfg.trials)
        own = _run_blocks([("own", params, cfg, b, r0, 0, ()) for b in range(self.blocks)],
                          cfg.workers)
        n, cols = cfg.trials, list(self.users)
        self.signal = np.concatenate([o[0] for o in own])[:n, cols]
        self.intra = np.concatenate([o[1] for o in own])[:n, cols]
        self.inter = np.zeros_like(self.signal)
        self.rings = 0
        self.add_ring()

    @property
    def radius(self) -> float:
        return _ring_bounds(self.r0, self.rings - 1)[1]

    def add_ring(self) -> None:
        ring = self.rings
        parts = _run_blocks([("ring", self.params, self.cfg, b, self.r0, ring, self.users)
                             for b in range(self.blocks)], self.cfg.workers)
        self.inter = self.inter + np.concatenate(parts)[:self.cfg.trials]
        self.rings += 1

    def sinr(self) -> np.ndarray:
        """SINR of the simulated users, shaped (trials, len(users))."""
        p = self.params
        path = np.asarray([p.dist_per_user[u] for u in self.users]) ** (-p.alpha)
        return (self.signal * path) / (self.inter + self.intra * path + p.noise / p.rho)


def _initial_radius(params: NetworkParams, window: WindowPolicy) -> float:
    if isinstance(window, FixedRadius):
        return window.radius
    return window.init_radius if window.init_radius is not None else 20.0 * params.d_max


def simulate_cluster(params: NetworkParams, cfg: SimConfig, trial: int) -> SinrSample:
    """One trial of the typical cluster, with the window's initial radius."""
    if not 0 <= trial < cfg.trials:
        raise IndexError(f"trial {trial} outside [0, {cfg.trials})")
    validate(params)
    cfg.quantization.check(params.m_antennas, params.bits)
    r0 = _initial_radius(params, cfg.window)
    block, row = divmod(trial, BLOCK)
    signal, intra = _own_cluster_block(params, cfg, block)
    inter = _ring_block(params, cfg, block, r0, 0, tuple(range(params.k_streams)))
    rho = params.rho
    path = np.asarray(params.dist_per_user) ** (-params.alpha)
    sig = rho * signal[row] * path
    i_p = rho * inter[row]
    i_q = rho * intra[row] * path
    return SinrSample(per_user_sinr=sig / (i_p + i_q + params.noise), signal=sig,
                      inter_cluster=i_p, intra_cluster=i_q)


def _per_trial(metric: Metric, params: NetworkParams, sinr: np.ndarray, user: int) -> np.ndarray:
    """Per-trial values; ``sinr`` holds only ``user`` except for Throughput."""
    if isinstance(metric, Outage):
        beta = params.beta_per_user if metric.beta is None else metric.beta
        return (sinr[:, 0] <= beta[user]).astype(float)
    if isinstance(metric, MeanRate):
        return np.log1p(sinr[:, 0])
    if isinstance(metric, Throughput):
        beta = np.asarray(params.beta_per_user)
        return params.lam * ((sinr > beta) * np.log2(1.0 + beta)).sum(axis=1)
    raise TypeError(f"unknown metric {metric!r}")


def _summarize(values: np.ndarray, radius: float) -> MetricEstimate:
    n = values.size
    mean = float(np.mean(values))
    hw = 1.959963984540054 * float(np.std(values, ddof=1)) / math.sqrt(n) if n > 1 else math.inf
    return MetricEstimate(mean, hw, n, radius)


def estimate(params: NetworkParams, cfg: SimConfig, metric: Metric, user: int = 0
             ) -> MetricEstimate:
    """Sample mean of ``metric`` over ``cfg.trials`` trials with a 95%
    normal-approximation half-width.

    With :class:`AdaptiveDoubling` the window radius doubles until the
    estimate changes by less than ``rel_tol`` between consecutive radii.
    """
    if cfg.trials < 100:
        raise ValueError("estimate needs at least 100 trials")
    if not 0 <= user < params.k_streams:
        raise IndexError(f"user index {user} out of range")
    r0 = _initial_radius(params, cfg.window)
    users = None if isinstance(metric, Throughput) else (user,)
    ts = _TrialSet(params, cfg, r0, users)
    values = _per_trial(metric, params, ts.sinr(), user)
    if isinstance(cfg.window, AdaptiveDoubling) and params.lam > 0:
        current = float(np.mean(values))
        for _ in range(cfg.window.max_doublings):
            ts.add_ring()
            values = _per_trial(metric, params, ts.sinr(), user)
            new = float(np.mean(values))
            if abs(new - current) <= cfg.window.rel_tol * abs(new):
                break
            current = new
    return _summarize(values, ts.radius)


def sample_gains(params: NetworkParams, cfg: SimConfig) -> dict[str, np.ndarray]:
    """Raw normalized gains of ``cfg.trials`` trials (signal, intra, inter)
    with the window's initial radius; used by the distributional tests."""
    ts = _TrialSet(params, cfg, _initial_radius(params, cfg.window))
    return {"signal": ts.signal, "intra": ts.intra, "inter": ts.inter, "sinr": ts.sinr()}


def sample_interferer_marks(params: NetworkParams, cfg: SimConfig, n: int) -> np.ndarray:
    """``n`` interferer marks ||h W_i||^2 in the configured mode."""
    rng = _block_rng(cfg.seed, 0, 10_000)
    k, m = params.k_streams, params.m_antennas
    if cfg.mode is SimMode.FAST:
        return rng.gamma(k, 1.0, n)
    scheme = QuantizationScheme.PERFECT_CSI if params.perfect_csi else cfg.quantization
    return _full_marks(n, k, m, scheme, params.bits, rng)


def sample_cross_gains(params: NetworkParams, cfg: SimConfig, n: int
                       ) -> tuple[np.ndarray, np.ndarray]:
    """QCA error-direction cross gains |v_k w_j|^2 and sin^2(phi_k).

    v_k is the unit component of hbar_k orthogonal to the quantized
    direction; w_j (j != k) is the ZF beam of another user of the cluster.
    """
    k, m = params.k_streams, params.m_antennas
    if k < 2 or m < 3:
        raise ValueError("cross gains need K >= 2 and M >= 3")
    rng = _block_rng(cfg.seed, 0, 10_001)
    h = draw_channel(m, rng, (n, k))
    hq, sin2 = quantize_qca(h, params.bits, rng)
    w, bad = _zf_batch(hq)
    hbar = _unit(h)
    proj = np.sum(hbar * hq.conj(), axis=-1, keepdims=True)
    v = _unit(hbar - proj * hq)
    keep = ~bad
    cross = np.abs(np.einsum("nm,nm->n", v[:, 0, :], w[:, :, 1])) ** 2
    return cross[keep], sin2[keep, 0]


# ------------------------------------------------------------ Laplace oracle

def laplace_transform_estimate(lam: float, alpha: float, k_streams: int,
                               s_values, trials: int, radius: float, seed: int = 0
                               ) -> np.ndarray:
    """Empirical E[exp(-s * sum_i S_i |X_i|^-alpha)] for Gamma(K, 1) marks.

    The field is simulated in a disc of ``radius``; the mean contribution of
    the points outside the disc, 2 pi lam s K R^(2-alpha) / (alpha - 2), is
    restored in the exponent (first-order tail correction).
    """
    s_values = np.asarray(s_values, dtype=float)
    acc = np.zeros((trials, s_values.size))
    done = 0
    block = 0
    while done < trials:
        rng = _block_rng(seed, block, 20_000)
        n = min(BLOCK, trials - done)
        counts = rng.poisson(lam * math.pi * radius ** 2, BLOCK)
        total = int(counts.sum())
        r2 = radius ** 2 * rng.random(total)
        marks = rng.gamma(k_streams, 1.0, total)
        owner = np.repeat(np.arange(BLOCK), counts)
        field_ = np.bincount(owner, weights=marks * r2 ** (-alpha / 2.0), minlength=BLOCK)[:n]
        acc[done:done + n] = field_[:, None]
        done += n
        block += 1
    tail = 2.0 * math.pi * lam * k_streams * radius ** (2.0 - alpha) / (alpha - 2.0)
    return np.mean(np.exp(-acc * s_values), axis=0) * np.exp(-tail * s_values)


def fit_interference_constant(k_streams: int, alpha: float, trials: int = 50_000,
                              seed: int = 0, lam: float = 1.0,
                              exponent_targets=(0.5, 1.0, 1.5)) -> float:
    """Least-squares fit of -ln L(s) = lam * I * s^(2/alpha) on simulated fields.

    The evaluation points s are placed where the exponent is roughly
    ``exponent_targets`` using the crude scale pi * K^(2/alpha) (only the
    placement depends on it, not the fitted value).
    """
    crude = math.pi * k_streams ** (2.0 / alpha) * 2.0
    s_vals = np.array([(t / (lam * crude)) ** (alpha / 2.0) for t in exponent_targets])
    # window large enough that the first-order tail term is below 5% of the exponent
    radius = max(5.0, (2 * math.pi * k_streams * s_vals.max()
                       / ((alpha - 2) * 0.05 * min(exponent_targets) / lam))
                 ** (1.0 / (alpha - 2)))
    radius = min(radius, 60.0 / math.sqrt(lam))
    est = laplace_transform_estimate(lam, alpha, k_streams, s_vals, trials, radius, seed)
    x = lam * s_vals ** (2.0 / alpha)
    y = -np.log(est)
    return float(np.dot(x, y) / np.dot(x, x))
