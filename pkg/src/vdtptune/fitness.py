"""Objective value of a candidate configuration.

One evaluation runs N replicated transfer simulations and averages
(time + losses) / log10(data + 2) over them, where data is the per-session
mean delivered kBytes. The +2 keeps the denominator finite when nothing is
transferred. Lower is better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sim.scenario import Scenario
from .sim.transfer import TransferOutcome, simulate_replication
from .space import VdtpConfig

__all__ = ["FitnessReport", "fitness_term", "aggregate_fitness", "evaluate", "make_objective"]

C_CONSTANT = 2.0
DEFAULT_REPLICATIONS = 10


def fitness_term(time_s: float, lost_packets: float, data_kbytes: float, c: float = C_CONSTANT) -> float:
    """Cost of a single replication: (time + losses) / log10(data + c)."""
    return (time_s + lost_packets) / math.log10(data_kbytes + c)


def aggregate_fitness(terms) -> float:
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one replication")
    return float(sum(terms)) / len(terms)


@dataclass(frozen=True)
class FitnessReport:
    fitness: float
    replications: tuple
    config: VdtpConfig
    n: int = DEFAULT_REPLICATIONS
    c_constant: float = C_CONSTANT


def _outcome_term(outcome: TransferOutcome) -> float:
    return fitness_term(
        outcome.transmission_time_s,
        outcome.lost_packets,
        outcome.per_session_kbytes(),
    )


def evaluate(config: VdtpConfig, scenario: Scenario, n: int = DEFAULT_REPLICATIONS, seed=0) -> FitnessReport:
    """Score one configuration with n independent replications.

    `seed` may be an int or a numpy SeedSequence; each replication gets its
    own derived stream. Counts as a single unit of optimizer budget no matter
    what n is.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    outcomes = tuple(
        simulate_replication(config, scenario, child) for child in ss.spawn(n)
    )
    fit = aggregate_fitness(_outcome_term(o) for o in outcomes)
    return FitnessReport(fitness=fit, replications=outcomes, config=config, n=n)


def make_objective(scenario: Scenario, n: int, seed):
    """Objective closure for the optimizers: physical 3-vector -> fitness.

    Successive calls use successive evaluation indices to derive replication
    seeds, so the whole run is reproducible from `seed` while each evaluation
    still sees fresh channel randomness (the objective is stochastic, as a
    network simulator would be).
    """
    entropy = int(seed) if not isinstance(seed, np.random.SeedSequence) else seed.entropy
    spawn_base = () if not isinstance(seed, np.random.SeedSequence) else seed.spawn_key
    counter = [0]

    def objective(x) -> float:
        k = counter[0]
        counter[0] += 1
        child = np.random.SeedSequence(entropy, spawn_key=tuple(spawn_base) + (1, k))
        return evaluate(VdtpConfig.from_array(x), scenario, n=n, seed=child).fitness

    return objective
