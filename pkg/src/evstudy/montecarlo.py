"""Repeated-simulation driver comparing mean estimates to population curves."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .dgp import DgpConfig, derive_seed, simulate
from .estimators import TAG_CODES, UnknownEstimator
from .oracle import population_curve


@dataclass(frozen=True)
class McReport:
    """Per-estimator Monte Carlo means against the analytic population values.

    ``mc_se`` is the standard error of each mean coefficient across draws;
    ``max_abs_dev`` the largest |mean - population| over relative times.
    """

    draws: int
    means: dict[str, dict[int, float]]
    population: dict[str, dict[int, float]]
    max_abs_dev: dict[str, float]
    mc_se: dict[str, dict[int, float]]


def run_mc(dgp: DgpConfig, estimators: list[str], draws: int, master_seed: int) -> McReport:
    """Average each estimator over ``draws`` independent simulated panels.

    Draw k simulates with seed SeedSequence([master_seed, k]); the per-draw
    coefficient vectors are summed, so the report does not depend on the
    order in which draws are evaluated.
    """
    if draws < 2:
        raise ValueError("need at least 2 Monte Carlo draws")
    for tag in estimators:
        if tag not in TAG_CODES:
            raise UnknownEstimator(f"unknown estimator {tag!r}")

    codes = [TAG_CODES[tag] for tag in estimators]
    n_r = dgp.t_max - dgp.t_min + 1
    total = np.zeros((len(estimators), n_r))
    total_sq = np.zeros_like(total)
    for k in range(draws):
        panel = simulate(replace(dgp, seed=derive_seed(master_seed, k)))
        mat = kernels.coef_matrix(panel.outcomes, panel.treated, panel.t_min)
        sel = mat[codes]
        total += sel
        total_sq += sel * sel

    mean = total / draws
    var = (total_sq - draws * mean * mean) / (draws - 1)
    mc_se_mat = np.sqrt(np.maximum(var, 0.0) / draws)

    rel_times = list(range(dgp.t_min - 1, dgp.t_max))
    means: dict[str, dict[int, float]] = {}
    population: dict[str, dict[int, float]] = {}
    max_abs_dev: dict[str, float] = {}
    mc_se: dict[str, dict[int, float]] = {}
    for e, tag in enumerate(estimators):
        pop = population_curve(tag, dgp.gamma, dgp.t_min, dgp.t_max).values
        means[tag] = {}
        mc_se[tag] = {}
        dev = 0.0
        for j, r in enumerate(rel_times):
            if r not in pop:
                continue
            m = float(mean[e, j])
            means[tag][r] = m
            mc_se[tag][r] = float(mc_se_mat[e, j])
            dev = max(dev, abs(m - pop[r]))
        population[tag] = pop
        max_abs_dev[tag] = dev
    return McReport(draws=draws, means=means, population=population,
                    max_abs_dev=max_abs_dev, mc_se=mc_se)
