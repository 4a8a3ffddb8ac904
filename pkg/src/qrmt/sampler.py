"""Exact samplers for the three ensemble regimes.

Every draw is a pure function of (params, stream): streams are derived from
(master_seed, sample_index) through SeedSequence spawn keys, so a batch is
bit-for-bit reproducible no matter how many workers execute it or in which
order.  Scalar primitives come from numpy's Generator (normal: ziggurat;
gamma: Marsaglia-Tsang with the shape < 1 boost); Beta is built explicitly as
a Gamma ratio.

The q > 1 sampler realizes the ensemble as a Gamma-weighted superposition of
Gaussian ensembles: draw xi ~ Gamma(lambda, 1), then a GOE matrix at the
rescaled confinement alpha * xi / lambda.  The q < 1 sampler is an exact
radial decomposition on the trace ball: in the weighted coordinates
x_ii = H_ii, x_ij = sqrt(2) H_ij (i < j) the density depends on |x| alone, so
a uniform direction times a Beta-distributed squared radius is an exact draw;
rejection would be exponentially wasteful in f.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence

from .params import EnsembleParams, ParameterError, Regime, RegimeError

__all__ = [
    "RngStream",
    "MatrixSample",
    "sample_gaussian",
    "sample_gamma",
    "sample_beta",
    "sample_goe",
    "sample_q_gt1",
    "sample_q_lt1",
    "sample_bounded_trace",
    "sample_levy_stable",
    "sample_ensemble",
    "sample_batch",
]


@dataclass(frozen=True)
class RngStream:
    """One deterministic random stream per sample index.

    Identical (master_seed, stream_id) reproduces an identical draw regardless
    of worker count or scheduling.
    """

    master_seed: int
    stream_id: int

    def generator(self) -> Generator:
        return Generator(PCG64(SeedSequence(self.master_seed, spawn_key=(self.stream_id,))))


@dataclass(frozen=True)
class MatrixSample:
    """A single real symmetric draw with its generation metadata."""

    h: np.ndarray
    params: EnsembleParams
    # Gamma mixing variable; None outside the heavy-tailed branch
    xi: float | None
    sample_index: int
    # (master_seed, stream_id) when drawn from an RngStream, else None
    seed_path: tuple[int, int] | None

    def trace_sq(self) -> float:
        return float(np.sum(self.h * self.h))


def _resolve_rng(rng) -> tuple[Generator, tuple[int, int] | None]:
    if isinstance(rng, RngStream):
        return rng.generator(), (rng.master_seed, rng.stream_id)
    if isinstance(rng, Generator):
        return rng, None
    raise TypeError(f"rng must be an RngStream or numpy Generator, got {type(rng)!r}")


def sample_gaussian(mean: float, variance: float, rng) -> float:
    """One normal variate (numpy ziggurat under the hood)."""
    if not variance > 0:
        raise ParameterError(f"variance must be positive, got {variance}")
    g, _ = _resolve_rng(rng)
    return float(g.normal(mean, math.sqrt(variance)))


def sample_gamma(shape: float, rng) -> float:
    """One Gamma(shape, 1) variate (Marsaglia-Tsang, shape < 1 boosted)."""
    if not shape > 0:
        raise ParameterError(f"shape must be positive, got {shape}")
    g, _ = _resolve_rng(rng)
    return float(g.gamma(shape))


def sample_beta(a: float, b: float, rng) -> float:
    """One Beta(a, b) variate built as the Gamma ratio g1 / (g1 + g2)."""
    if not (a > 0 and b > 0):
        raise ParameterError(f"Beta parameters must be positive, got ({a}, {b})")
    g, _ = _resolve_rng(rng)
    while True:
        g1 = g.gamma(a)
        g2 = g.gamma(b)
        s = g1 + g2
        if s > 0.0:  # guard against simultaneous underflow at tiny shapes
            return float(g1 / s)


def _draw_goe_entries(n: int, alpha: float, g: Generator) -> np.ndarray:
    """Symmetric matrix with density exp(-alpha tr H^2).

    Expanding the trace fixes the element variances: diagonal 1/(2 alpha),
    off-diagonal 1/(4 alpha).  Draw order (off-diagonal block first, then the
    diagonal) is part of the determinism contract.
    """
    h = np.zeros((n, n))
    m = n * (n - 1) // 2
    if m:
        h[np.triu_indices(n, 1)] = g.normal(0.0, math.sqrt(0.25 / alpha), size=m)
        h = h + h.T  # exact bit-for-bit symmetry: both triangles share each value
    h[np.diag_indices(n)] = g.normal(0.0, math.sqrt(0.5 / alpha), size=n)
    return h


def sample_goe(n: int, alpha: float, rng, sample_index: int = 0) -> MatrixSample:
    """Gaussian-regime draw: density proportional to exp(-alpha tr H^2)."""
    params = EnsembleParams.gaussian(n, alpha)
    g, path = _resolve_rng(rng)
    return MatrixSample(
        h=_draw_goe_entries(n, alpha, g),
        params=params,
        xi=None,
        sample_index=sample_index,
        seed_path=path,
    )


def sample_q_gt1(params: EnsembleParams, rng, sample_index: int = 0) -> MatrixSample:
    """Heavy-tailed branch draw via the Gamma mixture of Gaussian ensembles."""
    if params.regime is not Regime.LEVY_BRANCH:
        raise RegimeError(f"sample_q_gt1 requires the heavy-tailed branch, got {params.regime}")
    g, path = _resolve_rng(rng)
    xi = float(g.gamma(params.lam))
    while xi == 0.0:  # underflow guard for very small shapes
        xi = float(g.gamma(params.lam))
    h = _draw_goe_entries(params.n, params.alpha * xi / params.lam, g)
    return MatrixSample(h=h, params=params, xi=xi, sample_index=sample_index, seed_path=path)


def sample_q_lt1(params: EnsembleParams, rng, sample_index: int = 0) -> MatrixSample:
    """Restricted-trace draw, exact on the ball tr H^2 < -lambda/alpha.

    In the weighted coordinates x (diagonal entries, then sqrt(2) times the
    upper off-diagonals) the matrix measure is Lebesgue and the density is a
    function of |x|^2 alone, so direction and radius separate: the direction
    is a normalized Gaussian f-vector and u = alpha |x|^2 / |lambda| follows
    Beta(f/2, 1/(1-q) + 1).  Every draw satisfies the trace bound by
    construction (u < 1 almost surely).
    """
    if params.regime is not Regime.RESTRICTED_TRACE:
        raise RegimeError(f"sample_q_lt1 requires the restricted-trace regime, got {params.regime}")
    n, f, lam = params.n, params.f, params.lam
    g, path = _resolve_rng(rng)
    v = g.normal(0.0, 1.0, size=f)
    norm = float(np.linalg.norm(v))
    while norm == 0.0:
        v = g.normal(0.0, 1.0, size=f)
        norm = float(np.linalg.norm(v))
    # second Beta parameter is 1/(1-q) + 1 = -(lambda + f/2) + 1, written in
    # lambda form so the q = -inf (bounded trace) limit lands on exactly 1
    b_radial = 1.0 - (lam + f / 2.0)
    u = sample_beta(f / 2.0, b_radial, g)
    radius = math.sqrt(u * (-lam) / params.alpha)
    x = v * (radius / norm)
    h = np.zeros((n, n))
    h[np.triu_indices(n, 1)] = x[n:] / math.sqrt(2.0)
    h = h + h.T
    h[np.diag_indices(n)] = x[:n]
    return MatrixSample(h=h, params=params, xi=None, sample_index=sample_index, seed_path=path)


def sample_bounded_trace(n: int, alpha: float, rng, sample_index: int = 0) -> MatrixSample:
    """Uniform draw on the ball tr H^2 < f/(2 alpha), the q -> -inf limit."""
    params = EnsembleParams.from_q(n, -math.inf, alpha)
    return sample_q_lt1(params, rng, sample_index)


def sample_levy_stable(sigma: float, scale: float, rng, size: int | None = None):
    """Symmetric stable variate(s) with characteristic function exp(-|scale k|^sigma).

    Chambers-Mallows-Stuck transform of a uniform angle and a unit exponential.
    Boundary cases under this scale convention: sigma = 2 is Normal(0, 2 scale^2)
    and sigma = 1 is Cauchy with half-width `scale`.
    """
    if not 0.0 < sigma <= 2.0:
        raise ParameterError(f"stable exponent must lie in (0, 2], got {sigma}")
    if not scale > 0:
        raise ParameterError(f"scale must be positive, got {scale}")
    g, _ = _resolve_rng(rng)
    phi = g.uniform(-math.pi / 2.0, math.pi / 2.0, size=size)
    if sigma == 1.0:
        x = np.tan(phi)
    else:
        w = g.exponential(1.0, size=size)
        x = (
            np.sin(sigma * phi)
            / np.cos(phi) ** (1.0 / sigma)
            * (np.cos((1.0 - sigma) * phi) / w) ** ((1.0 - sigma) / sigma)
        )
    out = scale * x
    return float(out) if size is None else out


def sample_ensemble(params: EnsembleParams, rng, sample_index: int = 0) -> MatrixSample:
    """Regime dispatch: one draw from whatever member `params` describes."""
    if params.regime is Regime.GAUSSIAN:
        g, path = _resolve_rng(rng)
        h = _draw_goe_entries(params.n, params.alpha, g)
        return MatrixSample(h=h, params=params, xi=None, sample_index=sample_index, seed_path=path)
    if params.regime is Regime.LEVY_BRANCH:
        return sample_q_gt1(params, rng, sample_index)
    return sample_q_lt1(params, rng, sample_index)


def sample_batch(
    params: EnsembleParams,
    count: int,
    master_seed: int,
    threads: int = 1,
) -> list[MatrixSample]:
    """Draw `count` samples on per-index streams, ordered by sample_index.

    The result is identical for any `threads` value: stream i depends only on
    (master_seed, i).
    """
    if count < 0:
        raise ParameterError(f"count must be nonnegative, got {count}")

    def one(i: int) -> MatrixSample:
        return sample_ensemble(params, RngStream(master_seed, i), sample_index=i)

    if threads is None or threads <= 1:
        return [one(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(count)))
