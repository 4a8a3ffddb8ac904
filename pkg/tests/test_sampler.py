"""Sampler layer: determinism, exact-law checks, and oracle cross-validation.

Monte Carlo assertions run on pinned seeds, so they are deterministic; the
tolerances were chosen with at least a 2x margin over the observed deviation
at these seeds.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats
from scipy.special import stdtr

from qrmt.params import EnsembleParams, ParameterError, Regime, RegimeError
from qrmt.sampler import (
    MatrixSample,
    RngStream,
    sample_batch,
    sample_beta,
    sample_bounded_trace,
    sample_ensemble,
    sample_gamma,
    sample_gaussian,
    sample_goe,
    sample_levy_stable,
    sample_q_gt1,
    sample_q_lt1,
)

from oracles import rejection_sample_q_lt1


def _ks(sample, cdf) -> float:
    x = np.sort(np.asarray(sample))
    n = len(x)
    c = cdf(x)
    grid = np.arange(1, n + 1) / n
    return float(max(np.max(grid - c), np.max(c - (grid - 1 / n))))


def test_rng_stream_determinism():
    a = RngStream(7, 3).generator().normal(size=5)
    b = RngStream(7, 3).generator().normal(size=5)
    assert np.array_equal(a, b)
    c = RngStream(7, 4).generator().normal(size=5)
    assert not np.array_equal(a, c)
    d = RngStream(8, 3).generator().normal(size=5)
    assert not np.array_equal(a, d)


def test_resolve_rng_rejects_garbage():
    with pytest.raises(TypeError):
        sample_goe(2, 1.0, "not an rng")


def test_scalar_helpers_validate():
    g = RngStream(1, 0)
    with pytest.raises(ParameterError):
        sample_gaussian(0.0, 0.0, g)
    with pytest.raises(ParameterError):
        sample_gamma(-1.0, g)
    with pytest.raises(ParameterError):
        sample_beta(0.0, 1.0, g)


def test_beta_sampler_law():
    g = RngStream(21, 0).generator()
    draws = np.array([sample_beta(3.0, 2.0, g) for _ in range(4000)])
    assert _ks(draws, lambda x: stats.beta.cdf(x, 3.0, 2.0)) < 0.03


def test_goe_symmetry_bit_exact():
    s = sample_goe(6, 0.7, RngStream(3, 0))
    assert np.array_equal(s.h, s.h.T)
    assert s.h.shape == (6, 6)
    assert s.xi is None


def test_goe_determinism():
    a = sample_goe(5, 1.0, RngStream(11, 2))
    b = sample_goe(5, 1.0, RngStream(11, 2))
    assert np.array_equal(a.h, b.h)


def test_goe_entry_variances():
    # density exp(-alpha tr H^2): Var diag = 1/(2 alpha), offdiag = 1/(4 alpha)
    alpha, n = 0.7, 8
    g = RngStream(42, 0).generator()
    diag, off = [], []
    for _ in range(3000):
        h = sample_goe(n, alpha, g).h
        diag.append(np.diag(h))
        off.append(h[np.triu_indices(n, 1)])
    vd = float(np.var(np.concatenate(diag)))
    vo = float(np.var(np.concatenate(off)))
    assert vd == pytest.approx(1 / (2 * alpha), rel=0.05)
    assert vo == pytest.approx(1 / (4 * alpha), rel=0.05)


def test_goe_diag_offdiag_ratio_large_alpha():
    # the two variances must track alpha jointly
    g = RngStream(43, 0).generator()
    h = np.stack([sample_goe(4, 25.0, g).h for _ in range(4000)])
    vd = float(np.var(h[:, 0, 0]))
    assert vd == pytest.approx(0.02, rel=0.1)


def test_mixture_requires_levy_branch():
    with pytest.raises(RegimeError):
        sample_q_gt1(EnsembleParams.gaussian(3, alpha=1.0), RngStream(1, 0))


def test_mixture_marginals_are_student_t():
    # element marginal is Student t with 2*lambda degrees of freedom,
    # scale 1/sqrt(2 alpha) on the diagonal and 1/sqrt(4 alpha) off it
    params = EnsembleParams.from_lambda(3, 1.5, alpha=0.8)
    g = RngStream(105, 0).generator()
    dd, oo = np.empty(4000), np.empty(4000)
    for i in range(4000):
        h = sample_q_gt1(params, g).h
        dd[i] = h[0, 0]
        oo[i] = h[0, 1]
    lam, al = params.lam, params.alpha
    assert _ks(dd, lambda x: stdtr(2 * lam, x * np.sqrt(2 * al))) < 0.03
    assert _ks(oo, lambda x: stdtr(2 * lam, x * np.sqrt(4 * al))) < 0.03


def test_mixture_xi_recorded_and_trace_moment():
    # E[tr H^2] = f lam / (2 alpha (lam - 1)) for lam > 1
    params = EnsembleParams.from_lambda(4, 3.0, alpha=1.0)
    g = RngStream(106, 0).generator()
    samples = [sample_q_gt1(params, g) for _ in range(5000)]
    assert all(s.xi is not None and s.xi > 0 for s in samples)
    mean_tr = float(np.mean([s.trace_sq() for s in samples]))
    expect = params.f * 3.0 / (2.0 * 1.0 * 2.0)
    assert mean_tr == pytest.approx(expect, rel=0.1)


def test_restricted_trace_support_strict():
    params = EnsembleParams.from_q(3, 0.0, alpha=1.0)
    g = RngStream(107, 0).generator()
    bound = -params.lam / params.alpha
    for _ in range(2000):
        s = sample_q_lt1(params, g)
        assert s.trace_sq() < bound
        assert s.xi is None
        assert np.array_equal(s.h, s.h.T)


def test_restricted_trace_radial_law():
    # q = 0, n = 3: u = alpha tr H^2 / |lam| follows Beta(3, 2)
    params = EnsembleParams.from_q(3, 0.0, alpha=1.0)
    g = RngStream(108, 0).generator()
    u = np.array(
        [sample_q_lt1(params, g).trace_sq() * params.alpha / -params.lam for _ in range(4000)]
    )
    assert _ks(u, lambda x: stats.beta.cdf(x, 3.0, 2.0)) < 0.03


def test_restricted_trace_matches_rejection_oracle():
    # same law as plain rejection sampling on the matrix density
    params = EnsembleParams.from_q(2, 0.5, alpha=1.3)
    g = RngStream(109, 0).generator()
    mine = np.array([sample_q_lt1(params, g).trace_sq() for _ in range(3000)])
    hs = rejection_sample_q_lt1(params, RngStream(110, 0).generator(), 3000)
    theirs = np.einsum("kij,kij->k", hs, hs)
    d = stats.ks_2samp(mine, theirs).statistic
    assert d < 0.04


def test_bounded_trace_limit():
    # q -> -inf: uniform on the ball, so u^(f/2) is uniform on (0, 1)
    n, alpha = 3, 0.5
    g = RngStream(111, 0).generator()
    f = 6
    bound = f / (2 * alpha)
    u_pow = np.empty(4000)
    for i in range(4000):
        t = sample_bounded_trace(n, alpha, g).trace_sq()
        assert t < bound
        u_pow[i] = (t / bound) ** (f / 2)
    assert _ks(u_pow, lambda x: np.clip(x, 0.0, 1.0)) < 0.03


def test_sample_q_lt1_rejects_levy_params():
    with pytest.raises(RegimeError):
        sample_q_lt1(EnsembleParams.from_lambda(3, 2.0, alpha=1.0), RngStream(1, 0))


def test_stable_sigma2_is_gaussian():
    # CF exp(-(scale k)^2) means Normal(0, 2 scale^2)
    x = sample_levy_stable(2.0, 0.8, RngStream(112, 0), size=20000)
    assert float(np.var(x)) == pytest.approx(2 * 0.64, rel=0.05)
    assert _ks(x, lambda v: stats.norm.cdf(v, scale=math.sqrt(2) * 0.8)) < 0.02


def test_stable_sigma1_is_cauchy():
    x = sample_levy_stable(1.0, 1.5, RngStream(113, 0), size=20000)
    assert _ks(x, lambda v: stats.cauchy.cdf(v, scale=1.5)) < 0.02


def test_stable_cf_midrange_exponent():
    # empirical characteristic function at k = 1 vs exp(-|scale k|^sigma)
    x = sample_levy_stable(1.5, 1.0, RngStream(114, 0), size=40000)
    emp = float(np.mean(np.cos(x)))
    assert emp == pytest.approx(math.exp(-1.0), abs=0.02)


def test_stable_scalar_and_validation():
    v = sample_levy_stable(1.5, 1.0, RngStream(5, 0))
    assert isinstance(v, float)
    with pytest.raises(ParameterError):
        sample_levy_stable(0.0, 1.0, RngStream(5, 0))
    with pytest.raises(ParameterError):
        sample_levy_stable(2.1, 1.0, RngStream(5, 0))
    with pytest.raises(ParameterError):
        sample_levy_stable(1.5, 0.0, RngStream(5, 0))


def test_sample_ensemble_dispatch():
    g = EnsembleParams.gaussian(3, alpha=1.0)
    assert sample_ensemble(g, RngStream(6, 0)).xi is None
    lv = EnsembleParams.from_lambda(3, 2.0, alpha=1.0)
    assert sample_ensemble(lv, RngStream(6, 0)).xi is not None
    rt = EnsembleParams.from_q(3, 0.0, alpha=1.0)
    assert sample_ensemble(rt, RngStream(6, 0)).xi is None


def test_batch_threads_do_not_change_draws():
    params = EnsembleParams.from_lambda(4, 1.0, alpha=2.0)
    one = sample_batch(params, 12, master_seed=99, threads=1)
    two = sample_batch(params, 12, master_seed=99, threads=3)
    for a, b in zip(one, two):
        assert np.array_equal(a.h, b.h)
        assert a.xi == b.xi
    assert [s.sample_index for s in one] == list(range(12))
    assert one[5].seed_path == (99, 5)


def test_batch_master_seed_controls_everything():
    params = EnsembleParams.gaussian(3, alpha=1.0)
    a = sample_batch(params, 4, master_seed=1)
    b = sample_batch(params, 4, master_seed=1)
    c = sample_batch(params, 4, master_seed=2)
    assert all(np.array_equal(x.h, y.h) for x, y in zip(a, b))
    assert not np.array_equal(a[0].h, c[0].h)


def test_batch_count_validation():
    params = EnsembleParams.gaussian(2, alpha=1.0)
    with pytest.raises(ParameterError):
        sample_batch(params, -1, master_seed=0)
    assert sample_batch(params, 0, master_seed=0) == []


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=5),
    q=st.floats(min_value=-20.0, max_value=0.95),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_restricted_trace_support_property(n, q, seed):
    params = EnsembleParams.from_q(n, q, alpha=1.0)
    s = sample_q_lt1(params, RngStream(seed, 0))
    assert s.trace_sq() < -params.lam / params.alpha
    assert np.array_equal(s.h, s.h.T)
