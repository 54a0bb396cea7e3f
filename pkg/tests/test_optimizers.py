import math

import numpy as np
import pytest

from vdtptune.harness.benchfuncs import bench_bounds, sphere
from vdtptune.optimizers import (
    ALGORITHMS,
    BudgetExhausted,
    ObjectiveHandle,
    OptimizerParams,
    blend_crossover,
    default_params,
    reset_one_gene,
    run,
    tournament_pick,
)
from vdtptune.optimizers.de import binomial_mask, mutant_vector
from vdtptune.optimizers.es import select_survivors
from vdtptune.optimizers.ga import make_offspring
from vdtptune.optimizers.pso import velocity_update
from vdtptune.optimizers.sa import acceptance_probability, initial_temperature
from vdtptune.space import Bounds


BOUNDS3 = bench_bounds(3)


# --- parameter validation ----------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(algorithm="hillclimb"),
        dict(algorithm="pso", population_size=0),
        dict(algorithm="de", population_size=3),
        dict(algorithm="de", cr=1.5),
        dict(algorithm="ga", p_cross=-0.1),
        dict(algorithm="ga", p_mut=1.01),
        dict(algorithm="pso", w=-1.0),
        dict(algorithm="de", mu_de=0.0),
        dict(algorithm="sa", alpha_temp=0.0),
        dict(algorithm="sa", alpha_temp=1.0),
        dict(algorithm="sa", markov_chain_length=0),
        dict(algorithm="sa", temp_probes=0),
        dict(algorithm="sa", target_accept=1.0),
        dict(algorithm="es", mu_es=0),
        dict(algorithm="es", mu_es=8, lambda_es=4),
        dict(algorithm="es", mu_es=4, lambda_es=4, es_selection="comma"),
        dict(algorithm="es", es_selection="elitist"),
        dict(algorithm="ga", ga_variant="island"),
        dict(algorithm="ga", generations=0),
    ],
)
def test_params_rejected(kwargs):
    with pytest.raises(ValueError):
        OptimizerParams(**kwargs)


def test_params_algorithm_normalized():
    assert OptimizerParams(" PSO ").algorithm == "pso"


def test_params_per_algorithm_probability_defaults():
    es = OptimizerParams("es")
    ga = OptimizerParams("ga")
    assert (es.p_cross, es.p_mut) == (0.9, 0.1)
    assert (ga.p_cross, ga.p_mut) == (0.8, 0.2)
    assert OptimizerParams("es", p_cross=0.5).p_cross == 0.5
    assert OptimizerParams("es", mu_es=4, lambda_es=4, es_selection="plus").lambda_es == 4


def test_generation_size_per_algorithm():
    assert OptimizerParams("pso", population_size=30).generation_size() == 30
    assert OptimizerParams("es", mu_es=5, lambda_es=25).generation_size() == 25
    assert OptimizerParams("sa", markov_chain_length=12).generation_size() == 12


def test_check_budget_enforces_population_times_generations():
    p = OptimizerParams("ga", population_size=20, generations=10)
    p.check_budget(200)  # exactly fits
    with pytest.raises(ValueError):
        p.check_budget(199)
    with pytest.raises(ValueError):
        p.check_budget(0)


# --- budget accounting -------------------------------------------------------


def test_handle_maps_unit_cube_to_physical():
    seen = []
    bounds = Bounds(lower=(10.0, -2.0), upper=(20.0, 2.0))
    h = ObjectiveHandle(lambda x: seen.append(np.array(x)) or 0.0, bounds, 10)
    h.evaluate(np.zeros(2))
    h.evaluate(np.ones(2))
    h.evaluate(np.array([0.5, 0.25]))
    assert np.allclose(seen[0], [10.0, -2.0])
    assert np.allclose(seen[1], [20.0, 2.0])
    assert np.allclose(seen[2], [15.0, -1.0])


def test_handle_budget_and_trace():
    h = ObjectiveHandle(lambda x: float(x[0]), Bounds(lower=(0.0,), upper=(1.0,)), 3)
    assert h.evaluate(np.array([0.5])) == 0.5
    assert h.evaluate(np.array([0.9])) == 0.9
    assert h.evaluate(np.array([0.1])) == pytest.approx(0.1)
    with pytest.raises(BudgetExhausted):
        h.evaluate(np.array([0.2]))
    assert h.evaluations_used == 3
    assert [i for i, _ in h.trace] == [1, 2, 3]
    assert [b for _, b in h.trace] == [0.5, 0.5, pytest.approx(0.1)]
    assert h.best_eval_index == 3


def test_handle_rejects_empty_budget():
    with pytest.raises(ValueError):
        ObjectiveHandle(lambda x: 0.0, BOUNDS3, 0)


# --- operator oracles --------------------------------------------------------


def test_velocity_update_hand_values():
    assert velocity_update(1.0, 0.0, 2.0, 4.0, 0.5, 1.0, 1.0) == 6.5
    assert velocity_update(3.0, 1.0, 9.0, 9.0, 1.0, 0.0, 0.0) == 3.0
    got = velocity_update(
        np.array([1.0, -1.0]),
        np.array([0.5, 0.5]),
        np.array([1.0, 0.0]),
        np.array([0.0, 1.0]),
        0.5,
        np.array([2.0, 0.0]),
        np.array([0.0, 2.0]),
    )
    assert np.allclose(got, [1.5, 0.5])


def test_mutant_vector_hand_value():
    got = mutant_vector(np.ones(3), np.full(3, 3.0), np.ones(3), 0.1)
    assert np.allclose(got, 1.2)
    assert np.allclose(mutant_vector(np.zeros(2), np.zeros(2), np.ones(2), 0.5), -0.5)


def test_binomial_mask_semantics():
    draws = np.array([0.5, 0.9, 0.90001])
    assert binomial_mask(draws, 0, 0.9).tolist() == [True, True, False]
    # inclusive threshold, and the forced coordinate always crosses
    assert binomial_mask(np.array([1.0, 0.9]), 0, 0.9).tolist() == [True, True]
    assert binomial_mask(np.array([0.3, 0.7, 0.5]), 1, 0.0).tolist() == [False, True, False]


def test_blend_crossover_convex():
    rng = np.random.default_rng(0)
    a = np.array([0.0, 1.0, 0.5])
    b = np.array([1.0, 0.0, 0.5])
    for _ in range(20):
        child = blend_crossover(a, b, rng)
        assert np.all(child >= np.minimum(a, b) - 1e-15)
        assert np.all(child <= np.maximum(a, b) + 1e-15)
    same = blend_crossover(a, a, rng)
    assert np.allclose(same, a)


def test_reset_one_gene_touches_single_coordinate():
    rng = np.random.default_rng(5)
    x = np.full(6, 0.5)
    for _ in range(20):
        y = reset_one_gene(x, rng)
        assert np.count_nonzero(y != x) == 1
        assert np.all((y >= 0.0) & (y <= 1.0))
    assert np.all(x == 0.5)  # input untouched


def test_tournament_prefers_lower_fitness():
    rng = np.random.default_rng(11)
    fitness = np.array([0.0, 1.0])
    wins = sum(tournament_pick(fitness, rng) == 0 for _ in range(20000))
    # two uniform draws, index 0 wins 3 of the 4 outcomes
    assert wins / 20000 == pytest.approx(0.75, abs=0.01)


def test_make_offspring_without_variation_is_a_clone():
    rng = np.random.default_rng(3)
    pos = np.random.default_rng(1).random((6, 3))
    fit = np.arange(6.0)
    for _ in range(10):
        child = make_offspring(pos, fit, 0.0, 0.0, rng)
        assert any(np.array_equal(child, row) for row in pos)


def test_make_offspring_stays_in_unit_cube():
    rng = np.random.default_rng(4)
    pos = np.random.default_rng(2).random((8, 3))
    fit = np.random.default_rng(3).random(8)
    for _ in range(50):
        child = make_offspring(pos, fit, 1.0, 1.0, rng)
        assert np.all((child >= 0.0) & (child <= 1.0))


def test_select_survivors_plus_keeps_parent_on_tie():
    parents = np.array([[0.1, 0.1]])
    offspring = np.array([[0.9, 0.9]])
    pos, fit = select_survivors(parents, [1.0], offspring, [1.0], 1, "plus")
    assert np.array_equal(pos[0], parents[0])
    assert fit[0] == 1.0


def test_select_survivors_plus_keeps_parent_when_child_worse():
    pos, fit = select_survivors(
        np.array([[0.2, 0.2]]), [1.0], np.array([[0.8, 0.8]]), [2.0], 1, "plus"
    )
    assert np.array_equal(pos[0], [0.2, 0.2])


def test_select_survivors_comma_ignores_parents():
    pos, fit = select_survivors(
        np.array([[0.2, 0.2]]), [0.0], np.array([[0.8, 0.8], [0.6, 0.6]]), [5.0, 4.0], 1, "comma"
    )
    assert np.array_equal(pos[0], [0.6, 0.6])
    assert fit[0] == 4.0


def test_select_survivors_sorted_ascending():
    parents = np.random.default_rng(0).random((4, 2))
    offspring = np.random.default_rng(1).random((8, 2))
    pf = [3.0, 1.0, 4.0, 1.5]
    of = [2.0, 0.5, 6.0, 7.0, 0.9, 5.0, 8.0, 9.0]
    _, fit = select_survivors(parents, pf, offspring, of, 4, "plus")
    assert fit.tolist() == [0.5, 0.9, 1.0, 1.5]


def test_sa_acceptance_probability():
    assert acceptance_probability(0.0, 1.0) == 1.0
    assert acceptance_probability(1.0, 1.0) == pytest.approx(2.0 / (1.0 + math.e))
    assert acceptance_probability(1e9, 1e-9) == 0.0  # exp overflow guard
    p_small = acceptance_probability(1e-12, 1.0)
    assert 0.99 < p_small <= 1.0


def test_sa_initial_temperature_inverts_target():
    d = 3.7
    t0 = initial_temperature([d, d, d], target_accept=0.8)
    assert t0 == pytest.approx(d / math.log(1.5))
    assert acceptance_probability(d, t0) == pytest.approx(0.8)
    assert initial_temperature([d], target_accept=0.5) == pytest.approx(d / math.log(3.0))
    # only worsening probes inform the estimate; improving ones are ignored
    assert initial_temperature([d, -100.0], target_accept=0.8) == pytest.approx(d / math.log(1.5))
    assert initial_temperature([], target_accept=0.8) == 1.0
    assert initial_temperature([-1.0, -2.0], target_accept=0.8) == 1.0


# --- end-to-end runs ---------------------------------------------------------


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_run_spends_exact_budget(alg):
    rec = run(default_params(alg), sphere, BOUNDS3, seed=1, max_evaluations=200)
    assert rec.evaluations == 200
    assert len(rec.trace) == 200
    assert [i for i, _ in rec.trace] == list(range(1, 201))
    best = [b for _, b in rec.trace]
    assert all(b2 <= b1 for b1, b2 in zip(best, best[1:]))
    assert rec.best_fitness == best[-1]
    assert rec.trace[rec.best_eval_index - 1][1] == rec.best_fitness
    assert rec.algorithm == alg
    assert len(rec.best_position) == 3


@pytest.mark.parametrize("alg", ALGORITHMS)
@pytest.mark.parametrize("budget", [20, 30])
def test_run_handles_partial_generations(alg, budget):
    rec = run(default_params(alg), sphere, BOUNDS3, seed=2, max_evaluations=budget)
    assert rec.evaluations == budget
    assert len(rec.trace) == budget


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_run_deterministic_per_seed(alg):
    a = run(default_params(alg), sphere, BOUNDS3, seed=9, max_evaluations=150)
    b = run(default_params(alg), sphere, BOUNDS3, seed=9, max_evaluations=150)
    c = run(default_params(alg), sphere, BOUNDS3, seed=10, max_evaluations=150)
    assert a.trace == b.trace
    assert np.array_equal(a.best_position, b.best_position)
    assert a.best_fitness == b.best_fitness
    assert a.best_eval_index == b.best_eval_index
    assert a.trace != c.trace


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_run_improves_on_initial_sample(alg):
    rec = run(default_params(alg), sphere, BOUNDS3, seed=3, max_evaluations=1000)
    first = rec.trace[0][1]
    assert rec.best_fitness < first
    assert rec.best_fitness < 1.0  # 3-d sphere over [-5, 5]^3 with 1000 evals


def test_run_generations_cap_limits_evaluations():
    p = OptimizerParams("ga", population_size=10, generations=3)
    rec = run(p, sphere, BOUNDS3, seed=0, max_evaluations=1000)
    assert rec.evaluations == 30


def test_run_generations_cap_must_fit_budget():
    p = OptimizerParams("ga", population_size=10, generations=5)
    with pytest.raises(ValueError):
        run(p, sphere, BOUNDS3, seed=0, max_evaluations=40)


def test_run_positions_respect_bounds():
    for alg in ALGORITHMS:
        rec = run(default_params(alg), sphere, BOUNDS3, seed=4, max_evaluations=100)
        assert np.all(rec.best_position >= -5.0)
        assert np.all(rec.best_position <= 5.0)


def test_best_config_requires_three_dimensions():
    rec = run(default_params("pso"), sphere, bench_bounds(2), seed=0, max_evaluations=50)
    assert rec.best_config is None
    rec3 = run(default_params("pso"), sphere, BOUNDS3, seed=0, max_evaluations=50)
    assert rec3.best_config is not None
