"""Simulates the linear-trend-violation data generating process.

Treated units follow Y_it = gamma * t + eps_it, control units Y_it = eps_it,
with eps_it iid normal(0, error_sd^2) and no treatment effects. The group
difference in trends is gamma per period in every period, so any kink or
jump an estimator shows at the treatment date is an artifact of its
baseline construction, not of the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .panel import PanelDataset

# Identity of the deterministic noise transform, echoed in CLI output so a
# simulated panel can be reproduced exactly from (generator, config, seed).
GENERATOR_ID = (
    "numpy Philox(4x64, key=seed) standard_normal; "
    "draw order: treated units then control units, times ascending"
)


class InvalidConfig(ValueError):
    """DGP configuration violates its invariants."""


@dataclass(frozen=True)
class DgpConfig:
    """Parameters of the simulation design.

    Defaults reproduce the illustrative design: gamma=0.5, periods -15..10,
    100 units with half treated, unit-variance noise.
    """

    gamma: float = 0.5
    t_min: int = -15
    t_max: int = 10
    n_treated: int = 50
    n_control: int = 50
    error_sd: float = 1.0
    seed: int = 1

    def __post_init__(self):
        if self.t_min > -1 or self.t_max < 1:
            raise InvalidConfig(f"need t_min <= -1 and t_max >= 1, got [{self.t_min}, {self.t_max}]")
        if self.n_treated < 1 or self.n_control < 1:
            raise InvalidConfig("need at least one treated and one control unit")
        if not self.error_sd > 0:
            raise InvalidConfig(f"error_sd must be positive, got {self.error_sd}")
        if not (0 <= self.seed < 2**64):
            raise InvalidConfig(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def simulate(config: DgpConfig) -> PanelDataset:
    """Draw one balanced panel from the DGP; bit-identical for equal configs.

    Philox is counter-based, so the seed alone fixes every draw; the noise
    matrix is filled row-major with treated units first, which pins the
    draw order independent of any execution schedule.
    """
    n = config.n_treated + config.n_control
    times = np.arange(config.t_min, config.t_max + 1)
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    outcomes = rng.standard_normal((n, times.size)) * config.error_sd
    outcomes[: config.n_treated] += config.gamma * times

    width = len(str(max(config.n_treated, config.n_control) - 1))
    unit_ids = tuple(
        [f"t{i:0{width}d}" for i in range(config.n_treated)]
        + [f"c{i:0{width}d}" for i in range(config.n_control)]
    )
    treated = np.zeros(n, dtype=bool)
    treated[: config.n_treated] = True
    return PanelDataset(
        unit_ids=unit_ids,
        treated=treated,
        t_min=config.t_min,
        t_max=config.t_max,
        outcomes=outcomes,
    )


def expected_outcome(config: DgpConfig, t: int, d: int) -> float:
    """Population mean outcome at period t for group d: gamma*t if treated, else 0."""
    from .panel import TimeOutOfRange

    if not (config.t_min <= t <= config.t_max):
        raise TimeOutOfRange(f"period {t} outside [{config.t_min}, {config.t_max}]")
    return config.gamma * t if d else 0.0


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for an independent stream k of a master seed.

    SeedSequence([master_seed, k]) is the documented derivation rule for
    Monte Carlo draws and bootstrap replicates; distinct (master, k) pairs
    yield statistically independent streams regardless of schedule.
    """
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
