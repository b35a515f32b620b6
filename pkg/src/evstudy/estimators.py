"""Event-study estimators for the common-treatment-date setting.

Each estimator is a difference-of-group-means construction; they differ only
in the baseline used for each relative time r (period t = r + 1):

  * ``twfe``             -- every period compared to period 0 (r = -1 omitted).
  * ``cs_dcdh_default``  -- pre periods compared to the prior period
    ("short differences"), post periods to period 0; earliest r omitted.
  * ``cs_dcdh_universal``-- period-0 baseline everywhere, identical to TWFE.
  * ``bjs``              -- pre periods compared to the earliest period, post
    periods to the unit-level pre-treatment mean; earliest r omitted.

``twfe_regression`` and ``bjs_imputation`` run the genuine least-squares /
imputation algorithms and must agree with the closed forms; the tests use
that agreement as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .panel import PanelDataset

TAGS = ("twfe", "cs_dcdh_default", "cs_dcdh_universal", "bjs")

TAG_CODES = {
    "twfe": kernels.TWFE,
    "cs_dcdh_default": kernels.CS_DEFAULT,
    "cs_dcdh_universal": kernels.CS_UNIVERSAL,
    "bjs": kernels.BJS,
}


class UnknownEstimator(ValueError):
    """Estimator tag not recognized."""


class SingularDesign(RuntimeError):
    """Least-squares design matrix is rank deficient."""


@dataclass(frozen=True)
class EventStudyEstimate:
    """Coefficients by relative time, with omitted-category metadata.

    ``se``/``ci`` stay None until filled by the bootstrap; ``ci`` maps r to
    (low, high) at confidence level ``level``.
    """

    estimator: str
    coefficients: dict[int, float]
    omitted: frozenset[int]
    se: dict[int, float] | None = None
    ci: dict[int, tuple[float, float]] | None = None
    level: float | None = None

    @property
    def rel_times(self) -> list[int]:
        return sorted(self.coefficients)


@dataclass(frozen=True)
class FixedEffectsFit:
    """Unit and period effects from least squares on a subset of cells.

    Only alpha_i + lambda_t is identified; ``normalization`` documents the
    constraint that pins the individual effects.
    """

    alpha: dict[str, float]
    lam: dict[int, float]
    normalization: str

    def predict(self, unit_id: str, t: int) -> float:
        return self.alpha[unit_id] + self.lam[t]


@dataclass(frozen=True)
class ImputationResult:
    """Per-cell effect estimates tau_it = Y_it - Yhat_it on treated post cells."""

    tau: dict[tuple[str, int], float]
    fit: FixedEffectsFit


def _group_gap(panel: PanelDataset) -> np.ndarray:
    """Treated-minus-control mean outcome per period."""
    y = panel.outcomes
    return y[panel.treated].mean(axis=0) - y[~panel.treated].mean(axis=0)


def _to_estimate(tag: str, panel: PanelDataset, values: np.ndarray, omitted: set[int]) -> EventStudyEstimate:
    coefs = {}
    for j, r in enumerate(range(panel.t_min - 1, panel.t_max)):
        if r not in omitted:
            coefs[r] = float(values[j])
    return EventStudyEstimate(tag, coefs, frozenset(omitted))


def twfe_closed_form(panel: PanelDataset) -> EventStudyEstimate:
    """Dynamic TWFE coefficients via the difference-of-means identity."""
    g = _group_gap(panel)
    j0 = -panel.t_min
    return _to_estimate("twfe", panel, g - g[j0], {-1})


def cs_dcdh_default(panel: PanelDataset) -> EventStudyEstimate:
    """Default CS / dCDH plot: short differences pre, long differences post."""
    g = _group_gap(panel)
    j0 = -panel.t_min
    out = np.empty_like(g)
    out[1 : j0 + 1] = g[1 : j0 + 1] - g[0:j0]
    out[j0 + 1 :] = g[j0 + 1 :] - g[j0]
    return _to_estimate("cs_dcdh_default", panel, out, {panel.t_min - 1})


def cs_dcdh_universal(panel: PanelDataset) -> EventStudyEstimate:
    """CS / dCDH with the universal period-0 baseline; equals TWFE exactly."""
    g = _group_gap(panel)
    j0 = -panel.t_min
    return _to_estimate("cs_dcdh_universal", panel, g - g[j0], {-1})


def bjs_closed_form(panel: PanelDataset, n_pre: int | None = None) -> EventStudyEstimate:
    """Imputation-style coefficients via their sample-mean reduction.

    Pre coefficients compare each period to the earliest period (or, when
    fewer than the maximal ``n_pre`` coefficients are requested, to the mean
    of the pooled omitted periods); post coefficients compare to the
    unit-level mean outcome over t <= 0.
    """
    t_low = -panel.t_min  # number of pre coefficients available
    if n_pre is None:
        n_pre = t_low
    if not (1 <= n_pre <= t_low):
        raise ValueError(f"n_pre must be in [1, {t_low}], got {n_pre}")
    g = _group_gap(panel)
    j0 = -panel.t_min
    # Pooled baseline periods: t in [t_min, -n_pre]; default n_pre leaves
    # only the earliest period in the pool.
    pool_hi = j0 - n_pre
    base_pre = g[: pool_hi + 1].mean()
    out = np.empty_like(g)
    out[: pool_hi + 1] = np.nan
    out[pool_hi + 1 : j0 + 1] = g[pool_hi + 1 : j0 + 1] - base_pre
    out[j0 + 1 :] = g[j0 + 1 :] - g[: j0 + 1].mean()
    omitted = set(range(panel.t_min - 1, -n_pre))
    return _to_estimate("bjs", panel, out, omitted)


def _double_demean(v: np.ndarray) -> np.ndarray:
    """Within transformation for a balanced (units x periods) matrix."""
    return v - v.mean(axis=1, keepdims=True) - v.mean(axis=0, keepdims=True) + v.mean()


def twfe_regression(panel: PanelDataset) -> EventStudyEstimate:
    """Dynamic TWFE via genuine least squares (within/demeaning route).

    Unit and period effects are absorbed by double demeaning, exact on a
    balanced panel; the event-time coefficients then come from OLS on the
    demeaned interactions.
    """
    n, T = panel.outcomes.shape
    d = panel.treated.astype(float)[:, None]
    y_dm = _double_demean(panel.outcomes).ravel()
    periods = [t for t in range(panel.t_min, panel.t_max + 1) if t != 0]
    cols = []
    for t in periods:
        x = np.zeros((n, T))
        x[:, panel.period_index(t)] = d[:, 0]
        cols.append(_double_demean(x).ravel())
    X = np.column_stack(cols)
    beta, _, rank, _ = np.linalg.lstsq(X, y_dm, rcond=None)
    if rank < X.shape[1]:
        raise SingularDesign("demeaned event-time design is rank deficient")
    coefs = {t - 1: float(b) for t, b in zip(periods, beta)}
    return EventStudyEstimate("twfe", dict(sorted(coefs.items())), frozenset({-1}))


def _untreated_mask(panel: PanelDataset) -> np.ndarray:
    """Boolean (units x periods) mask of cells that are untreated."""
    mask = np.ones_like(panel.outcomes, dtype=bool)
    post = panel.times >= panel.treatment_date
    mask[np.ix_(panel.treated, post)] = False
    return mask


def _fe_design(panel: PanelDataset, mask: np.ndarray):
    """Intercept + unit/period dummy design over the masked cells."""
    rows, cols = np.nonzero(mask)
    n, T = panel.outcomes.shape
    n_obs = rows.size
    X = np.zeros((n_obs, 1 + (n - 1) + (T - 1)))
    X[:, 0] = 1.0
    for k in range(n_obs):
        if rows[k] > 0:
            X[k, rows[k]] = 1.0
        if cols[k] > 0:
            X[k, n + cols[k] - 1] = 1.0
    y = panel.outcomes[rows, cols]
    return X, y, rows, cols


def fit_twfe_on_untreated(panel: PanelDataset) -> FixedEffectsFit:
    """Least-squares unit and period effects on the untreated cells only.

    Untreated cells are all control-unit cells plus treated-unit cells with
    t <= 0. Normalization: the first unit absorbs the intercept and the
    earliest period's effect is zero; predictions do not depend on it.
    """
    mask = _untreated_mask(panel)
    if not mask.any(axis=1).all() or not mask.any(axis=0).all():
        raise SingularDesign("a unit or period has no untreated cell")
    X, y, _, _ = _fe_design(panel, mask)
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise SingularDesign("fixed-effects design on untreated cells is rank deficient")
    n, T = panel.outcomes.shape
    alpha = {panel.unit_ids[0]: float(beta[0])}
    for i in range(1, n):
        alpha[panel.unit_ids[i]] = float(beta[0] + beta[i])
    lam = {panel.t_min: 0.0}
    for j in range(1, T):
        lam[panel.t_min + j] = float(beta[n + j - 1])
    return FixedEffectsFit(
        alpha=alpha,
        lam=lam,
        normalization=f"unit {panel.unit_ids[0]!r} absorbs the intercept; period {panel.t_min} effect pinned to 0",
    )


def impute_treatment_effects(panel: PanelDataset) -> ImputationResult:
    """tau_it = Y_it - (alpha_i + lambda_t) on treated-unit post cells."""
    fit = fit_twfe_on_untreated(panel)
    tau = {}
    for i in np.nonzero(panel.treated)[0]:
        uid = panel.unit_ids[i]
        for t in range(panel.treatment_date, panel.t_max + 1):
            tau[(uid, t)] = float(panel.outcomes[i, panel.period_index(t)] - fit.predict(uid, t))
    return ImputationResult(tau=tau, fit=fit)


def bjs_imputation(panel: PanelDataset) -> EventStudyEstimate:
    """Imputation estimator via its genuine two-step algorithm.

    Post coefficients average the imputed effects tau_it at each lag. Pre
    coefficients come from a dynamic TWFE regression on untreated cells with
    indicators for periods until treatment, earliest pre period normalized
    to zero.
    """
    imp = impute_treatment_effects(panel)
    treated_ids = [panel.unit_ids[i] for i in np.nonzero(panel.treated)[0]]
    coefs: dict[int, float] = {}
    for r in range(0, panel.t_max):
        t = r + 1
        coefs[r] = float(np.mean([imp.tau[(uid, t)] for uid in treated_ids]))

    # Pre side: untreated-cell regression with treated x period indicators
    # for t in [t_min + 1, 0] (relative times t_min .. -1).
    mask = _untreated_mask(panel)
    X_fe, y, rows, cols = _fe_design(panel, mask)
    d = panel.treated[rows].astype(float)
    pre_periods = list(range(panel.t_min + 1, panel.treatment_date))
    dyn = np.zeros((rows.size, len(pre_periods)))
    for k, t in enumerate(pre_periods):
        dyn[:, k] = d * (cols == panel.period_index(t))
    X = np.hstack([X_fe, dyn])
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise SingularDesign("pre-period dynamic design is rank deficient")
    n_fe = X_fe.shape[1]
    for k, t in enumerate(pre_periods):
        coefs[t - 1] = float(beta[n_fe + k])

    return EventStudyEstimate(
        "bjs", dict(sorted(coefs.items())), frozenset({panel.t_min - 1})
    )


# Closed-form route per tag; the regression/imputation routes are the
# cross-checked twins for twfe and bjs.
ESTIMATOR_FUNCS = {
    "twfe": twfe_closed_form,
    "cs_dcdh_default": cs_dcdh_default,
    "cs_dcdh_universal": cs_dcdh_universal,
    "bjs": bjs_closed_form,
}


def estimate(panel: PanelDataset, tag: str) -> EventStudyEstimate:
    """Run the estimator named by ``tag`` (closed-form route)."""
    try:
        fn = ESTIMATOR_FUNCS[tag]
    except KeyError:
        raise UnknownEstimator(f"unknown estimator {tag!r}; choose from {TAGS}") from None
    return fn(panel)
