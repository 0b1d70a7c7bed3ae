"""Compact Bayesian neural networks via Langevin MCMC with posterior pruning."""
from ._core import (  # noqa: F401
    BnnTarget,
    Chain,
    ModelSpec,
    PosteriorStats,
    PriorConfig,
    PruneMask,
    PruneMethod,
    SamplerConfig,
    Task,
    accuracy_percent,
    apply_mask,
    build_mask,
    build_random_mask,
    chain_statistics,
    forward,
    gelman_rubin,
    log_posterior_gradient,
    one_hot,
    psrf_max,
    resample_chain,
    rmse,
    roc_auc,
    run_experiment_config,
    sample_chain,
    split_psrf_max,
    pruning_scores,
    window_series,
)
