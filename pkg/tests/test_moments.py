import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeropair import moments as mo
from zeropair.errors import DomainError, IncompleteSetError
from zeropair.scale import log_scale, m_main
from zeropair.zero_source import Provenance, SyntheticSpec, ZeroSet, synthesize
from zeropair.zeta_eval import rs_theta, s_direct


def _simple(gammas, lo=0.0, hi=20.0):
    g = np.asarray(gammas, dtype=float)
    return ZeroSet(np.full(g.size, 0.5), g, np.ones(g.size, np.int64), lo, hi,
                   Provenance.SYNTHETIC, True)


def _riemann_N2(zs, T, U, start=0.0, step=1e-5):
    t = np.arange(start + step / 2, T, step)
    cum = np.concatenate(([0], np.cumsum(zs.mult)))
    dn = cum[np.searchsorted(zs.gamma, t + U, "right")] - cum[np.searchsorted(zs.gamma, t, "right")]
    return float(np.sum(dn.astype(float) ** 2) * step)


def test_m_main_values():
    assert m_main(2 * math.pi * math.e) == pytest.approx(0.0, abs=1e-12)
    assert m_main(100.0) == pytest.approx(28.127, abs=1e-3)
    for T in (50.0, 100.0, 1e3, 1e5):
        assert mo.m_main_integral(T) == pytest.approx(m_main(T), rel=1e-12, abs=1e-12)


def test_m_main_rvm_1000():
    T = 1000.0
    assert abs(m_main(T) + 7 / 8 + s_direct(T) - 649) < 0.5


def test_moment_single_zero():
    assert mo.delta_u_moment2_N(_simple([5.0]), 10.0, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_moment_two_zeros():
    zs = _simple([5.0, 5.5])
    assert mo.delta_u_moment2_N(zs, 10.0, 1.0) == pytest.approx(3.0, abs=1e-15)
    p = mo.pair_triangle_sum(zs, 10.0, 1.0)
    assert p.direct == pytest.approx(3.0) and p.stieltjes == pytest.approx(3.0)


def test_pair_triangle_single_zero():
    p = mo.pair_triangle_sum(_simple([7.0]), 10.0, 0.8)
    assert p.direct == pytest.approx(0.8) and p.N_circledast == 1


def test_moment_riemann_oracle():
    zs = synthesize(SyntheticSpec(200, 0, 0, ((1, 0.7), (2, 0.3)), (0.0, 60.0), 12))
    exact = mo.delta_u_moment2_N(zs, 50.0, 1.0)
    assert exact == pytest.approx(_riemann_N2(zs, 50.0, 1.0), rel=1e-3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 60), st.integers(0, 8), st.integers(0, 5), st.integers(0, 2 ** 32),
       st.floats(0.05, 2.0))
def test_boundary_free_exactness(nc, nq, nh, seed, U):
    T = 100.0
    spec = SyntheticSpec(nc, nq, nh, ((1, 0.6), (2, 0.3), (3, 0.1)), (U, T - U), seed)
    zs = synthesize(spec)
    zs = ZeroSet(zs.beta, zs.gamma, zs.mult, 0.0, T + U, zs.provenance, True)
    exact = mo.delta_u_moment2_N(zs, T, U)
    p = mo.pair_triangle_sum(zs, T, U)
    assert abs(exact - p.direct) <= 1e-9 * max(1.0, exact)
    assert abs(p.stieltjes - p.direct) <= 1e-9 * max(1.0, p.direct)


def test_overlap_measure_examples():
    assert mo.overlap_measure(5, 5, 1, 10) == 1
    assert mo.overlap_measure(5, 6.5, 1, 10) == 0
    assert mo.overlap_measure(0.3, 0.5, 1, 10) == pytest.approx(0.3)


def test_window_must_be_complete():
    zs = _simple([5.0], hi=10.5)
    with pytest.raises(IncompleteSetError):
        mo.delta_u_moment2_N(zs, 10.0, 1.0)
    with pytest.raises(DomainError):
        mo.delta_u_moment2_N(zs, 10.0, 0.0)


def test_s_from_zeros(zeros_10k):
    g1 = zeros_10k.gamma[0]
    s = mo.s_from_zeros(zeros_10k, g1 - 1e-9)
    assert s == pytest.approx(-rs_theta(g1 - 1e-9) / math.pi - 1) and abs(s) < 1
    jump = mo.s_from_zeros(zeros_10k, g1 + 1e-9) - s
    assert jump == pytest.approx(1.0, abs=1e-6)
    assert mo.s_from_zeros(zeros_10k, 100.0) == pytest.approx(s_direct(100.0), abs=1e-4)


def test_segment_integral_no_zeros():
    zs = _simple([], lo=10.0, hi=40.0)
    val = mo.segment_integral(zs, 30.0, 0.5, lambda t, dn: (dn - 0.1 * t) ** 2)
    assert val == pytest.approx(0.01 * (30.0 ** 3 - 10.0 ** 3) / 3, rel=1e-12)


def test_s_moment_riemann_oracle():
    zs = synthesize(SyntheticSpec(40, 0, 0, range=(10.0, 40.0), seed=3))
    T, U, step = 30.0, 0.5, 1e-5
    t = np.arange(10.0 + step / 2, T, step)
    cum = np.concatenate(([0], np.cumsum(zs.mult)))
    dn = cum[np.searchsorted(zs.gamma, t + U, "right")] - cum[np.searchsorted(zs.gamma, t, "right")]
    ds = dn - (rs_theta(t + U) - rs_theta(t)) / math.pi
    for k in (1, 2):
        ref = float(np.sum(ds ** (2 * k)) * step)
        assert mo.delta_u_moment_S(zs, T, U, k) == pytest.approx(ref, rel=1e-4)


def test_trivial_bounds(zeros_10k):
    for U in (0.5, 1.0):
        cn, cs_ = mo.trivial_bound_constants(zeros_10k, 9000.0, U)
        assert cn < 3 and cs_ < 3


def test_tsang_params():
    p = mo.TsangParams(T=1e4, H=1e4, h=0.1, k=2)
    assert p.A_k == pytest.approx(3 / math.pi ** 4, rel=1e-15)
    assert p.A_k == pytest.approx(0.030798, abs=1e-6)
    one = mo.TsangParams(T=1e4, H=1e4, h=0.1)
    assert mo.tsang_prediction(one) == pytest.approx(1e4 / math.pi ** 2 * math.log(2 + 0.1 * math.log(1e4)))
    zero = mo.TsangParams(T=1e4, H=5e3, h=0.0, k=3)
    assert mo.tsang_prediction(zero) == pytest.approx(5e3 * zero.A_k * math.log(2) ** 3)
    with pytest.raises(DomainError):
        mo.TsangParams(T=1e4, H=10.0, h=0.1)
    with pytest.raises(DomainError):
        mo.TsangParams(T=1e4, H=1e4, h=-1.0)
    with pytest.raises(DomainError):
        mo.TsangParams(T=1e4, H=1e4, h=0.1, eta=0.4)


def test_report_fields(zeros_10k):
    T = 9990.0
    U = 1.0 / float(log_scale(T))
    r = mo.proposition_report(zeros_10k, T, U)
    assert r.lam == pytest.approx(1.0)
    assert r.prop1_residual == pytest.approx(r.exact_N_moment - r.pair_sum)
    assert abs(r.pair_sum - r.stieltjes_sum) < 1e-9 * r.pair_sum
    assert abs(r.prop1_residual) <= 4 * r.boundary_bound
    assert '"prop1_residual"' in r.to_json()


def test_lem2_residual_scaling(zeros_10k):
    # |lem2_residual| / (T U^2 L) calibrated at 10^3 should hold within a factor 3 at 10^4
    lam = 2.0
    cs_ = []
    for T in (1e3, 9990.0):
        L = float(log_scale(T))
        U = lam / L
        r = mo.proposition_report(zeros_10k, T, U)
        cs_.append(abs(r.lem2_residual) / (T * U * U * L))
    assert 1 / 3 <= cs_[1] / cs_[0] <= 3
