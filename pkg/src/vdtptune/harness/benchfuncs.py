"""Analytic benchmark functions and a uniform random-search baseline.

Used to validate the optimizers independently of the transfer simulator.
All functions have their global minimum value 0 at the origin (rosenbrock
at the all-ones point).
"""

from __future__ import annotations

import math
import time

import numpy as np

from ..optimizers import BudgetExhausted, ObjectiveHandle, RunRecord
from ..space import Bounds

__all__ = ["BENCH_FUNCTIONS", "bench_bounds", "get_function", "random_search"]


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.dot(x, x))


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * len(x) + np.sum(x * x - 10.0 * np.cos(2.0 * math.pi * x)))


BENCH_FUNCTIONS = {
    "sphere": sphere,
    "rosenbrock": rosenbrock,
    "rastrigin": rastrigin,
}


def get_function(name: str):
    key = name.strip().lower()
    if key not in BENCH_FUNCTIONS:
        known = ", ".join(sorted(BENCH_FUNCTIONS))
        raise ValueError(f"unknown benchmark function {name!r}; known: {known}")
    return BENCH_FUNCTIONS[key]


def bench_bounds(dims: int) -> Bounds:
    """The [-5, 5]^dims benchmark box."""
    if dims < 1:
        raise ValueError("dims must be >= 1")
    return Bounds((-5.0,) * dims, (5.0,) * dims)


def random_search(objective, bounds: Bounds, seed: int = 0, max_evaluations: int = 1000) -> RunRecord:
    """Uniform sampling over the box, same budget accounting as the optimizers."""
    handle = ObjectiveHandle(objective, bounds, max_evaluations)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(0,)))
    t_start = time.perf_counter()
    try:
        while True:
            handle.evaluate(rng.random(bounds.dim))
    except BudgetExhausted:
        pass
    return RunRecord(
        algorithm="random",
        seed=int(seed),
        best_position=handle.best_position,
        best_fitness=handle.best_fitness,
        trace=tuple(handle.trace),
        evaluations=handle.evaluations_used,
        best_eval_index=handle.best_eval_index,
        wall_time_s=time.perf_counter() - t_start,
        time_to_best_s=handle.time_to_best_s,
    )
