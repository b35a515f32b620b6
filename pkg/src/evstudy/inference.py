"""Unit-level stratified bootstrap standard errors and confidence intervals.

Units are resampled with replacement within their treatment group, so every
replicate keeps the original group sizes and no replicate can lose a group.
Replicate k's resample indices derive deterministically from the bootstrap
seed via SeedSequence([seed, k]); results are therefore reproducible and
independent of any execution schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from statistics import NormalDist

import numpy as np

from . import kernels
from .dgp import derive_seed
from .estimators import (
    TAG_CODES,
    EventStudyEstimate,
    UnknownEstimator,
    bjs_closed_form,
    estimate,
)
from .panel import PanelDataset


@dataclass(frozen=True)
class BootstrapConfig:
    replications: int = 999
    seed: int = 0
    level: float = 0.95
    method: str = "normal"  # "normal" | "percentile"

    def __post_init__(self):
        if self.replications < 2:
            raise ValueError("need at least 2 bootstrap replications")
        if not (0.0 < self.level < 1.0):
            raise ValueError(f"confidence level must be in (0, 1), got {self.level}")
        if self.method not in ("normal", "percentile"):
            raise ValueError(f"method must be 'normal' or 'percentile', got {self.method!r}")


def _resample_indices(n: int, B: int, seed: int, stream: int) -> np.ndarray:
    """(B, n) matrix of with-replacement row indices, one row per replicate."""
    out = np.empty((B, n), dtype=np.int64)
    for k in range(B):
        rng = np.random.default_rng(derive_seed(seed, 2 * k + stream))
        out[k] = rng.integers(0, n, size=n)
    return out


def _bjs_pooled_reps(y1, y0, idx1, idx0, j0, n_pre):
    """Replicate coefficients for BJS with pooled omitted pre periods."""
    g = y1[idx1].mean(axis=1) - y0[idx0].mean(axis=1)
    pool_hi = j0 - n_pre
    out = np.full_like(g, np.nan)
    base_pre = g[:, : pool_hi + 1].mean(axis=1, keepdims=True)
    out[:, pool_hi + 1 : j0 + 1] = g[:, pool_hi + 1 : j0 + 1] - base_pre
    out[:, j0 + 1 :] = g[:, j0 + 1 :] - g[:, : j0 + 1].mean(axis=1, keepdims=True)
    return out


def bootstrap(
    panel: PanelDataset,
    estimator: str,
    config: BootstrapConfig,
    *,
    n_pre: int | None = None,
) -> EventStudyEstimate:
    """Point estimate plus bootstrap se/ci for the named estimator.

    The returned coefficients are exactly the non-bootstrap estimator output;
    the bootstrap only fills the se and ci fields. ``n_pre`` applies to the
    bjs estimator only and pools earlier pre periods into the baseline.
    """
    if estimator not in TAG_CODES:
        raise UnknownEstimator(f"unknown estimator {estimator!r}")
    if n_pre is not None and estimator != "bjs":
        raise ValueError("n_pre applies to the bjs estimator only")
    if estimator == "bjs" and n_pre is not None:
        point = bjs_closed_form(panel, n_pre=n_pre)
    else:
        point = estimate(panel, estimator)

    y1 = panel.outcomes[panel.treated]
    y0 = panel.outcomes[~panel.treated]
    B = config.replications
    idx1 = _resample_indices(y1.shape[0], B, config.seed, stream=0)
    idx0 = _resample_indices(y0.shape[0], B, config.seed, stream=1)
    if estimator == "bjs" and n_pre is not None and n_pre != -panel.t_min:
        reps = _bjs_pooled_reps(y1, y0, idx1, idx0, -panel.t_min, n_pre)
    else:
        reps = kernels.bootstrap_coefs(y1, y0, idx1, idx0, panel.t_min, TAG_CODES[estimator])

    rel_times = list(range(panel.t_min - 1, panel.t_max))
    se: dict[int, float] = {}
    ci: dict[int, tuple[float, float]] = {}
    z = NormalDist().inv_cdf(0.5 + config.level / 2)
    lo_q, hi_q = (1 - config.level) / 2, (1 + config.level) / 2
    for j, r in enumerate(rel_times):
        if r not in point.coefficients:
            continue
        draws = reps[:, j]
        s = float(draws.std(ddof=1))
        se[r] = s
        if config.method == "normal":
            c = point.coefficients[r]
            ci[r] = (c - z * s, c + z * s)
        else:
            ci[r] = (float(np.quantile(draws, lo_q)), float(np.quantile(draws, hi_q)))
    return replace(point, se=se, ci=ci, level=config.level)
