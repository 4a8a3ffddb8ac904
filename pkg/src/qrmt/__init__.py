"""Numerical laboratory for the q-generalized Gaussian orthogonal ensembles.

One parameter family interpolating between a bounded-trace ensemble (q < 1),
the Gaussian orthogonal ensemble (q = 1), and heavy-tailed ensembles with
power-law element marginals (1 < q < q_max).  The package samples the family
exactly, evaluates its closed-form spectral laws, and cross-checks the two
against each other.
"""
from .params import (
    EnsembleParams,
    MarginalTailError,
    ParameterError,
    Regime,
    RegimeError,
    alpha_scaling,
    characteristic_energy,
    dof,
    lambda_from_q,
    q_from_lambda,
    q_max,
    tail_params,
)
from .sampler import (
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
from .analytic import (
    AnalyticCurve,
    density_curve,
    element_cdf,
    element_char_fn,
    element_correlation,
    element_curve,
    element_pdf,
    gap_curve,
    gap_probability,
    gap_probability_bulk,
    goe_counting,
    goe_gap,
    joint_eigen_density,
    level_density,
    level_density_mixture,
    log_partition,
    matrix_pdf,
    mean_count,
    semicircle_density,
    wigner_surmise,
    wigner_surmise_cdf,
)
from .spectral import (
    GapEstimate,
    Histogram,
    SpectrumBatch,
    TailIndexEstimate,
    eigenvalues,
    empirical_density,
    empirical_gap,
    ks_distance,
    ks_distance_two,
    nn_spacing,
    nn_spacings,
    spectra_from_samples,
    tail_index,
)
from .specfun import (
    QuadratureResult,
    bessel_k,
    erf,
    kummer_m,
    kummer_m_transformed,
    levy_density,
    ln_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticCurve",
    "EnsembleParams",
    "GapEstimate",
    "Histogram",
    "MarginalTailError",
    "MatrixSample",
    "ParameterError",
    "QuadratureResult",
    "Regime",
    "RegimeError",
    "RngStream",
    "SpectrumBatch",
    "TailIndexEstimate",
    "__version__",
    "alpha_scaling",
    "bessel_k",
    "characteristic_energy",
    "density_curve",
    "dof",
    "eigenvalues",
    "element_cdf",
    "element_char_fn",
    "element_correlation",
    "element_curve",
    "element_pdf",
    "empirical_density",
    "empirical_gap",
    "erf",
    "gap_curve",
    "gap_probability",
    "gap_probability_bulk",
    "goe_counting",
    "goe_gap",
    "joint_eigen_density",
    "ks_distance",
    "ks_distance_two",
    "kummer_m",
    "kummer_m_transformed",
    "lambda_from_q",
    "level_density",
    "level_density_mixture",
    "levy_density",
    "ln_gamma",
    "log_partition",
    "matrix_pdf",
    "mean_count",
    "nn_spacing",
    "nn_spacings",
    "q_from_lambda",
    "q_max",
    "sample_batch",
    "sample_beta",
    "sample_bounded_trace",
    "sample_ensemble",
    "sample_gamma",
    "sample_gaussian",
    "sample_goe",
    "sample_levy_stable",
    "sample_q_gt1",
    "sample_q_lt1",
    "semicircle_density",
    "spectra_from_samples",
    "tail_index",
    "tail_params",
    "wigner_surmise",
    "wigner_surmise_cdf",
]
