"""Analytic population coefficient curves and a brute-force sample oracle.

The population functions give each estimator's probability limit under the
linear-trend-violation DGP (treated trend gamma per period, no effects).
``brute_force_did`` recomputes any single coefficient by literal row
iteration with no code shared with the estimators module, so the two can
falsify each other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .panel import PanelDataset, TimeOutOfRange


class OmittedCategory(ValueError):
    """Requested relative time is a normalized category with no coefficient."""


@dataclass(frozen=True)
class PopulationCurve:
    """Population coefficients beta_r for one estimator over a period range."""

    estimator: str
    values: dict[int, float]
    gamma: float
    t_min: int
    t_max: int


def population_twfe(gamma: float, r: int) -> float:
    """TWFE limit gamma * (r + 1): a straight line through (-1, 0)."""
    if r == -1:
        raise OmittedCategory("r = -1 is the TWFE omitted category")
    return gamma * (r + 1)


def population_cs_dcdh(gamma: float, r: int, t_min: int | None = None) -> float:
    """CS/dCDH default limit: flat gamma pre, gamma * (r + 1) post (a kink)."""
    if t_min is not None and r == t_min - 1:
        raise OmittedCategory(f"r = {r} is the earliest category, omitted by CS/dCDH")
    return gamma if r < 0 else gamma * (r + 1)


def population_bjs(gamma: float, r: int, t_min: int) -> float:
    """BJS limit: gamma*(r+1+T) pre, gamma*(r+1+T/2) post, T = -t_min (a jump)."""
    t_low = -t_min
    if r == t_min - 1:
        raise OmittedCategory(f"r = {r} is the earliest category, omitted by BJS")
    if r < 0:
        return gamma * (r + 1 + t_low)
    return gamma * (r + 1 + t_low / 2)


def population_curve(tag: str, gamma: float, t_min: int, t_max: int) -> PopulationCurve:
    """Population values on the non-omitted relative times of the estimator."""
    values: dict[int, float] = {}
    for r in range(t_min - 1, t_max):
        if tag == "twfe" or tag == "cs_dcdh_universal":
            if r != -1:
                values[r] = population_twfe(gamma, r)
        elif tag == "cs_dcdh_default":
            if r != t_min - 1:
                values[r] = population_cs_dcdh(gamma, r, t_min)
        elif tag == "bjs":
            if r != t_min - 1:
                values[r] = population_bjs(gamma, r, t_min)
        else:
            raise ValueError(f"unknown estimator tag {tag!r}")
    return PopulationCurve(tag, values, gamma, t_min, t_max)


def brute_force_did(panel: PanelDataset, r_target: int, base_spec) -> float:
    """DiD for relative time ``r_target`` by naive summation over rows.

    ``base_spec`` is one of ``("period", t0)``, ``("pre_mean",)`` or
    ``("prior_period",)``. Deliberately shares no code with the estimators:
    plain dict accumulation over the row list.
    """
    rows = panel.to_rows()
    t_hi = r_target + 1
    times = sorted({t for _, t, _, _ in rows})
    if t_hi not in times:
        raise TimeOutOfRange(f"period {t_hi} not in panel")

    def mean_at(t, d):
        total, count = 0.0, 0
        for _, time, treat, y in rows:
            if time == t and treat == d:
                total += y
                count += 1
        return total / count

    kind = base_spec[0]
    if kind == "period":
        t0 = base_spec[1]
        if t0 not in times:
            raise TimeOutOfRange(f"base period {t0} not in panel")
        base = mean_at(t0, 1) - mean_at(t0, 0)
    elif kind == "prior_period":
        t0 = r_target
        if t0 not in times:
            raise TimeOutOfRange(f"base period {t0} not in panel")
        base = mean_at(t0, 1) - mean_at(t0, 0)
    elif kind == "pre_mean":
        # Group means of unit-level averages over t <= 0.
        sums: dict[str, float] = {}
        counts: dict[str, int] = {}
        groups: dict[str, int] = {}
        for uid, time, treat, y in rows:
            groups[uid] = treat
            if time <= 0:
                sums[uid] = sums.get(uid, 0.0) + y
                counts[uid] = counts.get(uid, 0) + 1
        def group_pre_mean(d):
            vals = [sums[u] / counts[u] for u in sums if groups[u] == d]
            return sum(vals) / len(vals)
        base = group_pre_mean(1) - group_pre_mean(0)
    else:
        raise ValueError(f"unknown base spec {base_spec!r}")

    return (mean_at(t_hi, 1) - mean_at(t_hi, 0)) - base


def matching_base_spec(tag: str, r: int, t_min: int):
    """Base specification that reproduces estimator ``tag`` at relative time r."""
    if tag in ("twfe", "cs_dcdh_universal"):
        return ("period", 0)
    if tag == "cs_dcdh_default":
        return ("prior_period",) if r < 0 else ("period", 0)
    if tag == "bjs":
        return ("period", t_min) if r < 0 else ("pre_mean",)
    raise ValueError(f"unknown estimator tag {tag!r}")
