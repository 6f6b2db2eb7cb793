import math

import pytest
from hypothesis import given, strategies as st

from sdma_netcap.core import (AlphaOutOfRange, NetworkParams, NonPositiveDistance,
                              QuantizationScheme, StreamsExceedAntennas, ValidationError,
                              db_to_linear, quantization_delta, validate)


def params(**kw):
    base = dict(lam=0.01, alpha=4.0, m=4, bits=9, beta_db=1.0, dist=1.5)
    base.update(kw)
    m = base.pop("m")
    return NetworkParams.uniform(base.pop("lam"), base.pop("alpha"), m, bits=base.pop("bits"),
                                 **base)


def test_delta_m4_b9():
    assert validate(params()).delta == 0.125


def test_delta_m2_b0():
    assert validate(params(m=2, bits=0)).delta == 1.0


def test_zeta_hand_value():
    ds = validate(params(beta=1.2589, beta_db=None, dist=1.5, alpha=4.0))
    assert ds.zeta_per_user[0] == pytest.approx(1.2589 * 1.5 ** 4, rel=1e-12)
    assert ds.zeta_per_user[0] == pytest.approx(6.373, abs=5e-4)


def test_perfect_csi_delta_zero():
    assert validate(params(bits=math.inf)).delta == 0.0


def test_single_antenna_ignores_bits():
    p = NetworkParams.uniform(0.01, 4.0, 1, bits=3, beta_db=1.0)
    assert validate(p).delta == 0.0
    assert p.perfect_csi


def test_rho_and_snr():
    p = NetworkParams.uniform(0.01, 4.0, 4, beta_db=1.0, snr_db=20.0)
    assert p.transmit_snr == pytest.approx(100.0)
    assert p.rho == pytest.approx(25.0)
    assert p.snr == pytest.approx(25.0)
    assert NetworkParams.uniform(0.01, 4.0, 4, beta_db=1.0).snr == math.inf
    assert p.with_snr_db(30.0).transmit_snr == pytest.approx(1000.0)


def test_with_streams_keeps_total_power():
    p = NetworkParams.uniform(0.01, 4.0, 4, beta_db=1.0, snr_db=20.0)
    q = p.with_streams(2)
    assert q.power == p.power and q.rho == pytest.approx(2 * p.rho)
    assert len(q.beta_per_user) == 2 and len(q.dist_per_user) == 2


@pytest.mark.parametrize("alpha", [2.0, 1.5, -1.0])
def test_alpha_out_of_range(alpha):
    with pytest.raises(AlphaOutOfRange):
        validate(params(alpha=alpha))


def test_streams_exceed_antennas():
    p = NetworkParams.uniform(0.01, 4.0, 2, 3, beta_db=1.0)
    with pytest.raises(StreamsExceedAntennas):
        validate(p)


def test_nonpositive_distance():
    with pytest.raises(NonPositiveDistance):
        validate(params(dist=0.0))


def test_all_violations_reported():
    p = NetworkParams(lam=-1.0, alpha=1.0, m_antennas=2, k_streams=3, bits=4,
                      beta_per_user=(1.0,) * 3, dist_per_user=(-1.0,) * 3)
    with pytest.raises(ValidationError) as info:
        validate(p)
    codes = info.value.codes
    assert {"AlphaOutOfRange", "StreamsExceedAntennas", "NonPositiveDistance"} <= set(codes)
    assert isinstance(info.value, AlphaOutOfRange)


def test_list_length_mismatch():
    p = NetworkParams(lam=0.1, alpha=4.0, m_antennas=4, k_streams=2, bits=4,
                      beta_per_user=(1.0,), dist_per_user=(1.0, 1.0))
    with pytest.raises(ValidationError):
        validate(p)


def test_quantization_scheme_rules():
    with pytest.raises(ValidationError):
        QuantizationScheme.RVQ.check(4, math.inf)
    with pytest.raises(ValidationError):
        QuantizationScheme.QCA.check(1, 4)
    QuantizationScheme.QCA.check(1, math.inf)
    assert QuantizationScheme.parse("Perfect-CSI") is QuantizationScheme.PERFECT_CSI
    with pytest.raises(ValueError):
        QuantizationScheme.parse("lattice")


@given(st.integers(2, 16), st.integers(1, 40))
def test_delta_decreasing_in_bits(m, b):
    assert quantization_delta(b + 1, m) < quantization_delta(b, m)


@given(st.integers(2, 16), st.integers(1, 40))
def test_delta_increasing_in_antennas(m, b):
    assert quantization_delta(b, m + 1) > quantization_delta(b, m)


@given(st.floats(0.1, 10), st.floats(0.1, 5), st.floats(2.1, 6))
def test_zeta_increasing(beta, d, alpha):
    def z(b, dd):
        return validate(NetworkParams.uniform(0.1, alpha, 1, beta=b, dist=dd)).zeta_max
    assert z(beta * 1.01, d) > z(beta, d)
    assert z(beta, d * 1.01) > z(beta, d)


def test_db_roundtrip():
    assert db_to_linear(3.0) == pytest.approx(1.9952623149688795)
