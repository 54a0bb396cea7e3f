"""Shared machinery for the optimizers.

All algorithms search the unit cube [0, 1]^d; the ObjectiveHandle maps points
to physical coordinates, enforces the evaluation budget and records the
best-so-far trace. Variation operators shared between GA, ES and SA live here.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..space import Bounds, VdtpConfig

__all__ = [
    "ALGORITHMS",
    "BudgetExhausted",
    "ObjectiveHandle",
    "OptimizerParams",
    "RunRecord",
    "blend_crossover",
    "reset_one_gene",
    "tournament_pick",
]

ALGORITHMS = ("pso", "de", "ga", "es", "sa")


class BudgetExhausted(Exception):
    """Raised by ObjectiveHandle when the evaluation budget is spent."""


class ObjectiveHandle:
    """Budget-accounted objective over the unit cube.

    evaluate() maps the unit-cube point into the physical bounds, calls the
    wrapped function, and appends (evaluation_index, best_so_far) to the
    trace. Once max_evaluations calls have been made it raises
    BudgetExhausted, which the run loop treats as clean termination.
    """

    def __init__(self, fn, bounds: Bounds, max_evaluations: int = 1000):
        if max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        self.fn = fn
        self.bounds = bounds
        self.max_evaluations = max_evaluations
        self.evaluations_used = 0
        self.trace = []
        self.best_fitness = math.inf
        self.best_position = None
        self.best_eval_index = 0
        self.time_to_best_s = 0.0
        self._t_start = time.perf_counter()

    def evaluate(self, u) -> float:
        if self.evaluations_used >= self.max_evaluations:
            raise BudgetExhausted
        x = self.bounds.from_unit(u)
        f = float(self.fn(x))
        self.evaluations_used += 1
        if f < self.best_fitness:
            self.best_fitness = f
            self.best_position = np.array(x, dtype=float)
            self.best_eval_index = self.evaluations_used
            self.time_to_best_s = time.perf_counter() - self._t_start
        self.trace.append((self.evaluations_used, self.best_fitness))
        return f


@dataclass(frozen=True)
class OptimizerParams:
    """Algorithm tag plus tuning knobs. Unused knobs are ignored per algorithm.

    p_cross / p_mut default differently for GA (0.8 / 0.2) and ES (0.9 / 0.1);
    leave them None to get the per-algorithm default.
    """

    algorithm: str
    population_size: int = 20
    generations: int | None = None
    w: float = 0.5
    cr: float = 0.9
    mu_de: float = 0.1
    p_cross: float | None = None
    p_mut: float | None = None
    alpha_temp: float = 0.8
    markov_chain_length: int = 20
    temp_probes: int = 20
    target_accept: float = 0.8
    mu_es: int = 4
    lambda_es: int = 20
    ga_variant: str = "generational"
    es_selection: str = "comma"

    def __post_init__(self):
        alg = self.algorithm.strip().lower()
        if alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; known: {ALGORITHMS}")
        object.__setattr__(self, "algorithm", alg)
        if self.p_cross is None:
            object.__setattr__(self, "p_cross", 0.9 if alg == "es" else 0.8)
        if self.p_mut is None:
            object.__setattr__(self, "p_mut", 0.1 if alg == "es" else 0.2)

        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if alg == "de" and self.population_size < 4:
            raise ValueError("DE needs population_size >= 4 (three donors distinct from the target)")
        for name in ("cr", "p_cross", "p_mut"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.w < 0.0:
            raise ValueError("w must be >= 0")
        if not self.mu_de > 0.0:
            raise ValueError("mu_de must be > 0")
        if not 0.0 < self.alpha_temp < 1.0:
            raise ValueError("alpha_temp must be in (0, 1)")
        if self.markov_chain_length < 1 or self.temp_probes < 1:
            raise ValueError("markov_chain_length and temp_probes must be >= 1")
        if not 0.0 < self.target_accept < 1.0:
            raise ValueError("target_accept must be in (0, 1)")
        if self.mu_es < 1 or self.lambda_es < self.mu_es:
            raise ValueError("ES needs lambda_es >= mu_es >= 1")
        if self.es_selection not in ("plus", "comma"):
            raise ValueError("es_selection must be 'plus' or 'comma'")
        if self.es_selection == "comma" and self.lambda_es <= self.mu_es:
            raise ValueError("comma selection needs lambda_es > mu_es")
        if self.ga_variant not in ("generational", "steady"):
            raise ValueError("ga_variant must be 'generational' or 'steady'")
        if self.generations is not None and self.generations < 1:
            raise ValueError("generations must be >= 1 when set")

    def generation_size(self) -> int:
        if self.algorithm == "es":
            return self.lambda_es
        if self.algorithm == "sa":
            return self.markov_chain_length
        return self.population_size

    def check_budget(self, max_evaluations: int) -> None:
        if max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        if self.generations is not None:
            need = self.generation_size() * self.generations
            if need > max_evaluations:
                raise ValueError(
                    f"{self.generation_size()} x {self.generations} generations "
                    f"exceed the budget of {max_evaluations} evaluations"
                )


@dataclass(frozen=True)
class RunRecord:
    """Result of one optimizer run."""

    algorithm: str
    seed: int
    best_position: np.ndarray
    best_fitness: float
    trace: tuple
    evaluations: int
    best_eval_index: int
    wall_time_s: float
    time_to_best_s: float

    @property
    def best_config(self):
        """Best point as a VdtpConfig (3-dimensional runs only)."""
        if len(self.best_position) != 3:
            return None
        return VdtpConfig.from_array(self.best_position)


# --- shared variation operators (unit-cube coordinates) ----------------------


def blend_crossover(a, b, rng) -> np.ndarray:
    """Per-coordinate convex blend with a fresh weight per coordinate."""
    beta = rng.random(len(a))
    return beta * a + (1.0 - beta) * b


def reset_one_gene(x, rng) -> np.ndarray:
    """Pick one coordinate uniformly, reset it uniformly within its range."""
    y = np.array(x, dtype=float)
    j = int(rng.integers(len(y)))
    y[j] = rng.random()
    return y


def tournament_pick(fitness, rng) -> int:
    """Binary tournament: two uniform draws, lower fitness wins."""
    i = int(rng.integers(len(fitness)))
    j = int(rng.integers(len(fitness)))
    return i if fitness[i] <= fitness[j] else j
