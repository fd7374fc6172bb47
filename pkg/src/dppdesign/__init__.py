"""Entropy-optimal experimental designs via fixed-rank determinantal sampling.

The package selects n-point designs from a discrete candidate set so that the
determinant of the induced correlation matrix is large, by emulating the mode
of a fixed-rank determinantal point process instead of running a combinatorial
search.  It also ships the exact fixed-rank sampler, batch-sequential design
construction with a non-collapsing projection rule, classical baselines (Latin
hypercube, exchange algorithm, uniform random), point-pattern diagnostics
(F, G, Ripley's K), and a designed-mini-batch SGD experiment.
"""

__version__ = "0.1.0"

from .kernel_spectral import (CandidateSet, EigenSystem, KernelError,
                              KernelMatrix, KernelSpec, build_kernel_matrix,
                              condition_kernel, eigendecompose)
from .dpp_sampler import (CBTables, Design, SamplerError, build_cb_tables,
                          dpp_log_pmf, sample_conditional_bernoulli,
                          sample_fixed_rank_dpp, sample_projection_dpp)
from .emulator import (SequentialState, emulate_design, select_mode_subset,
                       sequential_design, violating_set)
from .baselines import (LhsDesign, clustered_design, fedorov_exchange,
                        lhs_design, random_design)
from .diagnostics import (PointPatternSummary, csr_k, default_reference_grid,
                          entropy_criterion, f_function, g_function,
                          lhs_intensity_check, ripley_k, summarize_pattern)
from .sgd_design import (FriedmanDataset, SgdConfig, designed_batches,
                         feature_map, feature_matrix, friedman_generate,
                         mse_ratio_experiment, sgd_fit)

__all__ = [
    "__version__",
    "CandidateSet", "KernelSpec", "KernelMatrix", "EigenSystem", "KernelError",
    "build_kernel_matrix", "eigendecompose", "condition_kernel",
    "CBTables", "Design", "SamplerError", "build_cb_tables",
    "sample_conditional_bernoulli", "sample_projection_dpp",
    "sample_fixed_rank_dpp", "dpp_log_pmf",
    "SequentialState", "select_mode_subset", "emulate_design",
    "violating_set", "sequential_design",
    "LhsDesign", "lhs_design", "fedorov_exchange", "random_design",
    "clustered_design",
    "PointPatternSummary", "f_function", "g_function", "ripley_k", "csr_k",
    "entropy_criterion", "lhs_intensity_check", "default_reference_grid",
    "summarize_pattern",
    "FriedmanDataset", "SgdConfig", "friedman_generate", "feature_map",
    "feature_matrix", "sgd_fit", "designed_batches", "mse_ratio_experiment",
]
