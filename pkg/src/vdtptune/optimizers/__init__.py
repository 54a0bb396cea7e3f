"""Population and trajectory optimizers behind one budget-accounted runner."""

from __future__ import annotations

import time

import numpy as np

from ..space import Bounds
from .common import (
    ALGORITHMS,
    BudgetExhausted,
    ObjectiveHandle,
    OptimizerParams,
    RunRecord,
    blend_crossover,
    reset_one_gene,
    tournament_pick,
)
from .de import run_de
from .es import run_es
from .ga import run_ga
from .pso import run_pso
from .sa import run_sa

__all__ = [
    "ALGORITHMS",
    "BudgetExhausted",
    "ObjectiveHandle",
    "OptimizerParams",
    "RunRecord",
    "blend_crossover",
    "default_params",
    "reset_one_gene",
    "run",
    "tournament_pick",
]

_RUNNERS = {
    "pso": run_pso,
    "de": run_de,
    "ga": run_ga,
    "es": run_es,
    "sa": run_sa,
}


def default_params(algorithm: str, **overrides) -> OptimizerParams:
    """OptimizerParams with the stock defaults for the given algorithm."""
    return OptimizerParams(algorithm, **overrides)


def run(
    params: OptimizerParams,
    objective,
    bounds: Bounds,
    seed: int = 0,
    max_evaluations: int = 1000,
) -> RunRecord:
    """One optimizer run against a physical-coordinate objective.

    The search happens in the unit cube; `bounds` maps points to physical
    coordinates right before each objective call. The run always spends the
    whole budget (or the generations cap, when one is set) and returns the
    per-evaluation best-so-far trace.
    """
    params.check_budget(max_evaluations)
    budget = max_evaluations
    if params.generations is not None:
        budget = min(budget, params.generation_size() * params.generations)

    handle = ObjectiveHandle(objective, bounds, budget)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(0,)))

    t_start = time.perf_counter()
    try:
        _RUNNERS[params.algorithm](handle, params, rng, bounds.dim)
    except BudgetExhausted:
        pass
    wall = time.perf_counter() - t_start

    return RunRecord(
        algorithm=params.algorithm,
        seed=int(seed),
        best_position=handle.best_position,
        best_fitness=handle.best_fitness,
        trace=tuple(handle.trace),
        evaluations=handle.evaluations_used,
        best_eval_index=handle.best_eval_index,
        wall_time_s=wall,
        time_to_best_s=handle.time_to_best_s,
    )
