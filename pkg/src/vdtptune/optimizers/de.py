"""Differential evolution, rand/1/bin, synchronous generations."""

from __future__ import annotations

import numpy as np

from .common import ObjectiveHandle, OptimizerParams

__all__ = ["accept_trial", "binomial_mask", "mutant_vector", "run_de"]


def mutant_vector(base, top, bottom, mu):
    """base + mu * (top - bottom), all arrays."""
    return np.asarray(base, dtype=float) + mu * (
        np.asarray(top, dtype=float) - np.asarray(bottom, dtype=float)
    )


def binomial_mask(draws, forced_index, cr):
    """Coordinates taken from the mutant: draw <= cr, plus one forced index."""
    mask = np.asarray(draws, dtype=float) <= cr
    mask[forced_index] = True
    return mask


def accept_trial(trial_fitness: float, target_fitness: float) -> bool:
    """Greedy one-to-one selection; ties go to the trial."""
    return bool(trial_fitness <= target_fitness)


def run_de(handle: ObjectiveHandle, params: OptimizerParams, rng, dim: int) -> None:
    """Runs until the handle raises BudgetExhausted.

    Donors come from the current generation; replacements take effect only
    when the whole generation has been evaluated. A trial replaces its target
    when its fitness is less than or equal to the target's.
    """
    pop = params.population_size
    pos = rng.random((pop, dim))
    fit = np.empty(pop)
    for i in range(pop):
        fit[i] = handle.evaluate(pos[i])

    while True:
        new_pos = pos.copy()
        new_fit = fit.copy()
        for i in range(pop):
            picks = rng.choice(pop - 1, size=3, replace=False)
            # skip-index trick keeps the three donors distinct from target i
            r1, r2, r3 = (int(p) + 1 if p >= i else int(p) for p in picks)
            trial_src = mutant_vector(pos[r1], pos[r2], pos[r3], params.mu_de)
            forced = int(rng.integers(dim))
            mask = binomial_mask(rng.random(dim), forced, params.cr)
            trial = np.where(mask, trial_src, pos[i])
            np.clip(trial, 0.0, 1.0, out=trial)
            f = handle.evaluate(trial)
            if accept_trial(f, fit[i]):
                new_pos[i] = trial
                new_fit[i] = f
        pos = new_pos
        fit = new_fit
