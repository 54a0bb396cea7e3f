"""Multi-seed experiment orchestration with per-run checkpointing.

Run i of every algorithm shares one derived seed, which is what makes the
paired signed-rank comparison by run index legitimate. Completed runs are
written as JSON checkpoints; re-running the same campaign picks up where it
stopped.
"""

from __future__ import annotations

import configparser
import json
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import optimizers
from ..fitness import make_objective
from ..optimizers import ALGORITHMS, OptimizerParams, RunRecord
from ..sim.scenario import Scenario, load_scenario, preset
from ..space import DEFAULT_BOUNDS
from ..stats import FriedmanTable, PairedTestResult, SampleSummary, friedman_ranks, summarize, wilcoxon_signed_rank

__all__ = [
    "CampaignResult",
    "ExperimentConfig",
    "load_experiment_config",
    "resolve_scenario",
    "run_campaign",
    "run_seed",
    "qos_seed",
]


def run_seed(master_seed: int, run_index: int) -> int:
    """Seed for run i, shared across algorithms (pairing by run index)."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(run_index),))
    return int(ss.generate_state(1, np.uint64)[0])


def qos_seed(master_seed: int) -> int:
    """Seed for post-campaign scoring runs; the two-element spawn key keeps
    it disjoint from every run stream."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(1, 0))
    return int(ss.generate_state(1, np.uint64)[0])


def resolve_scenario(name_or_path) -> Scenario:
    """A preset name, or a path to a scenario .cfg file."""
    if isinstance(name_or_path, Scenario):
        return name_or_path
    text = str(name_or_path)
    if os.path.exists(text):
        return load_scenario(text)
    return preset(text)


def _default_algorithms() -> tuple:
    return tuple(OptimizerParams(name) for name in ALGORITHMS)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "urban"
    algorithms: tuple = field(default_factory=_default_algorithms)
    runs: int = 30
    max_evaluations: int = 1000
    replications: int = 10
    master_seed: int = 1
    output_dir: str = "results"
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.algorithms:
            raise ValueError("need at least one algorithm")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        names = [p.algorithm for p in self.algorithms]
        if len(set(names)) != len(names):
            raise ValueError("algorithm list contains duplicates")
        for params in self.algorithms:
            params.check_budget(self.max_evaluations)

    @property
    def algorithm_names(self) -> tuple:
        return tuple(p.algorithm for p in self.algorithms)


_INT_KNOBS = {
    "population_size",
    "generations",
    "markov_chain_length",
    "temp_probes",
    "mu_es",
    "lambda_es",
}
_FLOAT_KNOBS = {"w", "cr", "mu_de", "p_cross", "p_mut", "alpha_temp", "target_accept"}
_STR_KNOBS = {"ga_variant", "es_selection"}


def parse_knob(name: str, raw: str):
    if name in _INT_KNOBS:
        return int(raw)
    if name in _FLOAT_KNOBS:
        return float(raw)
    if name in _STR_KNOBS:
        return raw.strip()
    raise ValueError(f"unknown optimizer knob {name!r}")


def load_experiment_config(path, **overrides) -> ExperimentConfig:
    """Experiment description from a flat key-value .cfg file.

    The [campaign] section holds scalars; an optional section per algorithm
    holds its knob overrides. Keyword overrides win over file values.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(str(path))
    if not read:
        raise ValueError(f"cannot read experiment config {path!r}")
    if not cp.has_section("campaign"):
        raise ValueError(f"{path}: missing [campaign] section")

    camp = cp["campaign"]
    kwargs = {
        "scenario": camp.get("scenario", "urban"),
        "runs": camp.getint("runs", 30),
        "max_evaluations": camp.getint("max_evaluations", 1000),
        "replications": camp.getint("replications", 10),
        "master_seed": camp.getint("master_seed", 1),
        "output_dir": camp.get("output_dir", "results"),
        "workers": camp.getint("workers", 1),
    }
    names = [t.strip().lower() for t in camp.get("algorithms", ",".join(ALGORITHMS)).split(",") if t.strip()]
    algs = []
    for name in names:
        knobs = {}
        if cp.has_section(name):
            for key, raw in cp.items(name):
                knobs[key] = parse_knob(key, raw)
        algs.append(OptimizerParams(name, **knobs))
    kwargs["algorithms"] = tuple(algs)
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


# --- checkpoint serialization ------------------------------------------------


def record_to_dict(rec: RunRecord) -> dict:
    return {
        "algorithm": rec.algorithm,
        "seed": rec.seed,
        "best_position": [float(v) for v in rec.best_position],
        "best_fitness": rec.best_fitness,
        "trace": [[int(i), float(f)] for i, f in rec.trace],
        "evaluations": rec.evaluations,
        "best_eval_index": rec.best_eval_index,
        "wall_time_s": rec.wall_time_s,
        "time_to_best_s": rec.time_to_best_s,
    }


def record_from_dict(data: dict) -> RunRecord:
    return RunRecord(
        algorithm=data["algorithm"],
        seed=int(data["seed"]),
        best_position=np.array(data["best_position"], dtype=float),
        best_fitness=float(data["best_fitness"]),
        trace=tuple((int(i), float(f)) for i, f in data["trace"]),
        evaluations=int(data["evaluations"]),
        best_eval_index=int(data["best_eval_index"]),
        wall_time_s=float(data["wall_time_s"]),
        time_to_best_s=float(data["time_to_best_s"]),
    )


def _checkpoint_path(ckpt_dir: Path, algorithm: str, run_index: int) -> Path:
    return ckpt_dir / f"run_{algorithm}_{run_index}.json"


def _save_checkpoint(path: Path, rec: RunRecord) -> None:
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        json.dump(record_to_dict(rec), fh, sort_keys=True)
    os.replace(tmp, path)


# --- execution ---------------------------------------------------------------


def execute_run(params, scenario, replications, run_index, seed, max_evaluations, objective_factory=None):
    """One (algorithm, run index) cell. Top-level so worker processes can call it."""
    factory = objective_factory or make_objective
    objective = factory(scenario, replications, seed)
    rec = optimizers.run(params, objective, DEFAULT_BOUNDS, seed=seed, max_evaluations=max_evaluations)
    return run_index, rec


@dataclass(frozen=True)
class CampaignResult:
    config: ExperimentConfig
    scenario: Scenario
    records: dict  # algorithm -> tuple of RunRecord ordered by run index
    summaries: dict  # algorithm -> SampleSummary of best fitnesses
    tests: dict  # (alg_a, alg_b) -> PairedTestResult, a before b in config order
    friedman: FriedmanTable | None
    mean_time_to_best: dict
    mean_run_time: dict

    def fitness_samples(self, algorithm: str):
        return [rec.best_fitness for rec in self.records[algorithm]]

    def best_record(self, algorithm: str) -> RunRecord:
        return min(self.records[algorithm], key=lambda r: r.best_fitness)


def _assemble(config: ExperimentConfig, scenario: Scenario, records: dict) -> CampaignResult:
    for recs in records.values():
        for rec in recs:
            assert rec.best_fitness == rec.trace[-1][1], "trace must end at the best fitness"

    names = config.algorithm_names
    samples = {a: [r.best_fitness for r in records[a]] for a in names}
    summaries = {a: summarize(samples[a]) for a in names}

    tests = {}
    friedman = None
    if config.runs >= 2:
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                tests[(a, b)] = wilcoxon_signed_rank(samples[a], samples[b])
        if len(names) >= 2:
            blocks = [[samples[a][i] for a in names] for i in range(config.runs)]
            friedman = friedman_ranks(blocks)

    mean_tb = {a: float(np.mean([r.time_to_best_s for r in records[a]])) for a in names}
    mean_tr = {a: float(np.mean([r.wall_time_s for r in records[a]])) for a in names}
    return CampaignResult(
        config=config,
        scenario=scenario,
        records={a: tuple(records[a]) for a in names},
        summaries=summaries,
        tests=tests,
        friedman=friedman,
        mean_time_to_best=mean_tb,
        mean_run_time=mean_tr,
    )


def run_campaign(config: ExperimentConfig, objective_factory=None, progress=None) -> CampaignResult:
    """Runs the full runs x algorithms grid, resuming from checkpoints.

    `objective_factory(scenario, replications, seed)` defaults to the
    simulation-backed objective; tests inject cheap stand-ins. `progress`
    is called as `(algorithm, run_index, record)` when each run lands.
    """
    scenario = resolve_scenario(config.scenario)
    out = Path(config.output_dir)
    ckpt_dir = out / "checkpoints"
    ckpt_dir.mkdir(parents=True, exist_ok=True)

    records = {a: [None] * config.runs for a in config.algorithm_names}
    pending = []
    for params in config.algorithms:
        for i in range(config.runs):
            path = _checkpoint_path(ckpt_dir, params.algorithm, i)
            if path.exists():
                with open(path) as fh:
                    records[params.algorithm][i] = record_from_dict(json.load(fh))
            else:
                pending.append((params, i))

    def _land(params, run_index, rec):
        records[params.algorithm][run_index] = rec
        _save_checkpoint(_checkpoint_path(ckpt_dir, params.algorithm, run_index), rec)
        if progress is not None:
            progress(params.algorithm, run_index, rec)

    if config.workers == 1 or len(pending) <= 1:
        for params, i in pending:
            _, rec = execute_run(
                params, scenario, config.replications, i,
                run_seed(config.master_seed, i), config.max_evaluations,
                objective_factory,
            )
            _land(params, i, rec)
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = {
                pool.submit(
                    execute_run, params, scenario, config.replications, i,
                    run_seed(config.master_seed, i), config.max_evaluations,
                    objective_factory,
                ): params
                for params, i in pending
            }
            remaining = set(futures)
            while remaining:
                done, remaining = wait(remaining, return_when=FIRST_COMPLETED)
                for fut in done:
                    run_index, rec = fut.result()
                    _land(futures[fut], run_index, rec)

    return _assemble(config, scenario, {a: records[a] for a in config.algorithm_names})
