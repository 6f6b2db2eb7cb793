import math

import pytest
from hypothesis import given, settings, strategies as st

from sdma_netcap import analytics as an
from sdma_netcap import design as ds
from sdma_netcap.core import EpsilonOutOfRange, NetworkParams, db_to_linear, validate

from _grids import stream_grid

ENUM, LARGE = ds.StreamMethod.ENUMERATION, ds.StreamMethod.LARGE_K


def net(lam=0.01, alpha=4.0, m=4, k=None, bits=10.0, beta_db=1.0, dist=1.0, snr_db=20.0):
    p = NetworkParams.uniform(lam, alpha, m, bits=bits, beta_db=beta_db, dist=dist, snr_db=snr_db)
    return p if k is None else p.with_streams(k)


# ------------------------------------------------------------ streams

def test_per_user_throughput_decreasing():
    p = net(lam=0.02, m=6, bits=12.0)
    curve = ds.throughput_curve(p)
    per_user = [t / k for k, t in enumerate(curve, start=1)]
    assert all(b < a for a, b in zip(per_user, per_user[1:]))


def test_dense_regime_single_stream():
    p = net(lam=0.5, m=6)
    plan = ds.optimal_streams_throughput(p)
    assert plan.k_star == 1 and plan.method is ENUM


@pytest.mark.parametrize("bits,expect", [(3.0, 1), (5.0, 2)])
def test_sparse_two_antenna_hand_check(bits, expect):
    # lambda -> 0, no noise: objective ~ K log2(1+beta)/(1+beta delta)^(K-1)
    p = net(lam=1e-9, m=2, bits=bits, beta_db=10.0, snr_db=math.inf)
    bd = 10.0 * 2.0 ** -bits
    assert (2 / (1 + bd) > 1) == (expect == 2)
    assert ds.optimal_streams_throughput(p).k_star == expect


def test_enumeration_invariants():
    for p, _ in stream_grid(n=20, seed=3):
        plan = ds.optimal_streams_throughput(p)
        assert 1 <= plan.k_star <= p.m_antennas
        best = plan.objective_curve[plan.k_star - 1]
        assert best >= plan.objective_curve[0] and best >= plan.objective_curve[-1]
        assert best == max(plan.objective_curve)


def test_large_k_throughput_within_one():
    for p, _ in stream_grid():
        a = ds.optimal_streams_throughput(p, ENUM).k_star
        b = ds.optimal_streams_throughput(p, LARGE).k_star
        assert abs(a - b) <= 1


def test_large_k_tc_direct_substitution():
    # choose the noise so that C4 = 3 C3 at alpha = 4
    eps = 0.5
    p = net(alpha=4.0, bits=12.0)
    delta = 2.0 ** (-12.0 / 3)
    l1 = math.log1p(p.beta * delta)
    c4 = -math.log1p(-eps) + l1
    zeta = validate(p).zeta_max
    noise = (c4 / 3 - l1) * p.power / zeta
    q = p.replace(noise=noise)
    plan = ds.optimal_streams_tc(q, eps, LARGE)
    assert plan.k_continuous == pytest.approx(1.0, rel=1e-9)
    assert plan.k_star == 1


@pytest.mark.parametrize("eps", [0.01, 0.02, 0.05, 0.1])
def test_fig11_single_stream(eps):
    p = net(lam=0.01, alpha=4.5, m=4, bits=12.0, beta_db=1.0, dist=1.0)
    assert ds.optimal_streams_tc(p, eps).k_star == 1


def test_large_k_tc_within_one():
    for p, eps in stream_grid():
        a = ds.optimal_streams_tc(p, eps, ENUM).k_star
        b = ds.optimal_streams_tc(p, eps, LARGE).k_star
        assert abs(a - b) <= 1


def test_tc_epsilon_checked():
    with pytest.raises(EpsilonOutOfRange):
        ds.optimal_streams_tc(net(), 1.0)


# ----------------------------------------------------------- antennas

def test_fig3_dense_regime_one_antenna():
    p = net(lam=0.1, alpha=4.2, m=1, bits=10.0, beta_db=3.0, dist=1.5, snr_db=15.0)
    assert ds.optimal_antennas_throughput(p, 8) == 1


def test_perfect_csi_sparse_returns_max():
    p = net(lam=1e-9, m=1, bits=math.inf, snr_db=math.inf)
    assert ds.optimal_antennas_throughput(p, 6) == 6


def test_antenna_argmax_consistent():
    p = net(lam=0.01, alpha=4.2, m=1, bits=10.0, beta_db=3.0, dist=1.5, snr_db=15.0)
    curve = ds.antenna_curve(p, 6)
    m_star = ds.optimal_antennas_throughput(p, 6)
    assert curve[m_star - 1] == max(curve)


def test_antennas_bad_max():
    with pytest.raises(ValueError):
        ds.optimal_antennas_throughput(net(), 0)


# ----------------------------------------------------------- feedback

def _window_upper(p, eps):
    k = p.k_streams
    i_k = an.interference_constant(k, p.alpha)
    expo = i_k * validate(p).zeta_max ** (2 / p.alpha) / (k * (k - 1) * (1 - eps))
    return (1 + p.beta) ** (1 / expo)


def test_tc_offset_window_top_needs_no_bits():
    p = net(m=4, beta_db=3.0)
    assert ds.bits_for_tc_offset(p, 0.1, _window_upper(p, 0.1)).bits_required == 0


@pytest.mark.parametrize("c", [1.05, 1.2, 1.5])
@pytest.mark.parametrize("m", [3, 4, 6])
def test_tc_offset_verified(c, m):
    p = net(m=m, beta_db=3.0)
    plan = ds.bits_for_tc_offset(p, 0.1, c)
    b = plan.bits_required
    assert isinstance(plan.offset_kind, ds.TcGap)
    assert an.tc_gap(p.replace(bits=float(b)), 0.1) <= math.log(c) * (1 + 1e-12)
    if b > 0:
        assert an.tc_gap(p.replace(bits=float(b - 1)), 0.1) > math.log(c)


def test_bits_shift_when_beta_quadruples():
    # with the log2(q) term held fixed, only the (M-1) log2 beta term moves
    for m in (2, 4, 7):
        assert ds._bits_bound(m, 8.0, 0.3) - ds._bits_bound(m, 2.0, 0.3) == pytest.approx(2 * (m - 1))
    p = net(m=4, beta_db=3.0)
    q = p.replace(beta_per_user=(4 * p.beta,) * 4)
    a = ds.bits_for_throughput_ratio(p, 1.5)
    b = ds.bits_for_throughput_ratio(q, 1.5)
    assert b.bits_bound - a.bits_bound == pytest.approx(2 * 3, abs=1e-9)
    # the TC exponent also carries zeta_max = beta d^alpha, which claws part of it back
    c = ds.bits_for_tc_offset(p, 0.1, 1.1)
    d = ds.bits_for_tc_offset(q, 0.1, 1.1)
    assert c.bits_required < d.bits_required < c.bits_required + 6


def test_tc_offset_out_of_range():
    p = net(m=4)
    with pytest.raises(ds.OffsetOutOfRange):
        ds.bits_for_tc_offset(p, 0.1, 1.0)
    with pytest.raises(ds.OffsetOutOfRange):
        ds.bits_for_tc_offset(p, 0.1, 10 * _window_upper(p, 0.1))


def test_tc_offset_single_stream_zero():
    assert ds.bits_for_tc_offset(net(m=4, k=1), 0.1, 1.2).bits_required == 0


def test_ratio_three_db_offset_nine_bits():
    p = net(m=4, beta_db=3.0)
    plan = ds.bits_for_throughput_ratio(p, db_to_linear(3.0))
    assert plan.bits_required == 9
    plan2 = ds.bits_for_throughput_ratio(p, 2.0)
    assert plan2.bits_required == 9


def test_three_db_rule():
    assert ds.bits_three_db_rule(net(m=4, beta_db=6.0)).bits_required == 6


@pytest.mark.parametrize("m,beta_db", [(4, 6.0), (4, 9.0), (6, 12.0), (8, 9.0)])
def test_three_db_rule_ratio_near_power_of_two(m, beta_db):
    p = net(m=m, beta_db=beta_db)
    b = ds.bits_three_db_rule(p).bits_required
    qt = an.throughput_ratio(p.replace(bits=float(b)))
    target = 2.0 ** (m - 1)
    assert 0.9 * target <= qt <= 1.1 * target


def test_ratio_single_stream():
    with pytest.raises(ds.SingleStream):
        ds.bits_for_throughput_ratio(net(m=4, k=1), 1.5)


def test_ratio_out_of_range():
    with pytest.raises(ds.OffsetOutOfRange):
        ds.bits_for_throughput_ratio(net(m=4), 1.0)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(2, 8), beta_db=st.floats(0.5, 12), dm=st.integers(0, 3),
       dbeta=st.floats(0, 6), r_frac=st.floats(0.05, 0.9))
def test_ratio_bits_monotone(m, beta_db, dm, dbeta, r_frac):
    # hold the target per-stream ratio fixed so that both queries are in range
    p = net(m=m, beta_db=beta_db)
    q = net(m=m + dm, beta_db=beta_db + dbeta)
    per = 1 + r_frac * p.beta
    r_p = per ** (p.k_streams - 1)
    r_q = per ** (q.k_streams - 1)
    assert (ds.bits_for_throughput_ratio(q, r_q).bits_required
            >= ds.bits_for_throughput_ratio(p, r_p).bits_required)


def test_qt_scaling_spot_check():
    eta = 1.5
    grow, fixed = [], []
    for m in (4, 8, 16, 32):
        p = net(m=m, beta_db=3.0)
        grow.append(an.throughput_ratio(p.replace(bits=(m - 1) * math.log2(m ** eta))))
        fixed.append(an.throughput_ratio(p.replace(bits=8.0)))
    assert all(b < a for a, b in zip(grow, grow[1:])) and grow[-1] > 1
    assert all(b > a for a, b in zip(fixed, fixed[1:]))
