"""One-parameter-at-a-time tuning sweeps driven by a small grid file.

Grid format, one parameter per line, '#' comments allowed:

    w = 0.1 0.3 0.5 0.7 0.9
    population_size = 10 20 40

Each (parameter, value) pair is run `runs` times with all other knobs at
the algorithm defaults; the table reports mean best fitness per pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import optimizers
from ..fitness import make_objective
from ..optimizers import OptimizerParams
from ..space import DEFAULT_BOUNDS
from .campaign import parse_knob, resolve_scenario, run_seed

__all__ = ["GridLine", "SweepResult", "parse_grid", "render_sweep", "run_sweep", "sweep_rows"]


@dataclass(frozen=True)
class GridLine:
    line_number: int
    param: str
    values: tuple


def parse_grid(text: str):
    """Grid lines from file text; errors name the offending line number."""
    grid = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"grid line {lineno}: expected 'param = v1 v2 ...', got {raw.strip()!r}")
        name, _, rest = line.partition("=")
        name = name.strip().lower()
        tokens = rest.split()
        if not tokens:
            raise ValueError(f"grid line {lineno}: no values for {name!r}")
        values = []
        for tok in tokens:
            try:
                values.append(parse_knob(name, tok))
            except ValueError as exc:
                raise ValueError(f"grid line {lineno}: {exc}") from exc
        grid.append(GridLine(lineno, name, tuple(values)))
    if not grid:
        raise ValueError("grid file lists no parameter combinations")
    return grid


def _validated_params(algorithm: str, line: GridLine):
    out = []
    for value in line.values:
        try:
            out.append(OptimizerParams(algorithm, **{line.param: value}))
        except ValueError as exc:
            raise ValueError(f"grid line {line.line_number}: {line.param}={value}: {exc}") from exc
    return out


@dataclass(frozen=True)
class SweepResult:
    algorithm: str
    scenario_name: str
    runs: int
    rows: tuple  # (param, value, mean_best_fitness)


def run_sweep(
    algorithm: str,
    grid,
    scenario,
    runs: int = 5,
    master_seed: int = 1,
    max_evaluations: int = 1000,
    replications: int = 10,
    objective_factory=None,
) -> SweepResult:
    """All grid combinations, each scored by the mean best fitness of
    `runs` seeded runs. Every combination sees the same run seeds."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    scenario = resolve_scenario(scenario)
    factory = objective_factory or make_objective
    combos = []
    for line in grid:
        for value, params in zip(line.values, _validated_params(algorithm, line)):
            params.check_budget(max_evaluations)
            combos.append((line.param, value, params))

    seeds = [run_seed(master_seed, i) for i in range(runs)]
    rows = []
    for param, value, params in combos:
        total = 0.0
        for seed in seeds:
            objective = factory(scenario, replications, seed)
            rec = optimizers.run(params, objective, DEFAULT_BOUNDS, seed=seed, max_evaluations=max_evaluations)
            total += rec.best_fitness
        rows.append((param, value, total / runs))
    return SweepResult(algorithm, scenario.name, runs, tuple(rows))


SWEEP_HEADER = ["parameter", "value", "mean_best_fitness", "runs", "scenario"]


def sweep_rows(result: SweepResult):
    for param, value, fitness in result.rows:
        yield (param, value, fitness, result.runs, result.scenario_name)


def render_sweep(result: SweepResult) -> str:
    """One text row per swept parameter, one column per candidate value."""
    by_param = {}
    for param, value, fitness in result.rows:
        by_param.setdefault(param, []).append((value, fitness))
    width = max(len(vals) for vals in by_param.values())
    headers = ["parameter"] + [f"value_{i + 1}" for i in range(width)]
    lines = []
    for param, vals in by_param.items():
        row = [param] + [f"{v}:{f:.4f}" for v, f in vals]
        row += [""] * (width - len(vals))
        lines.append(row)
    cells = [headers] + lines
    widths = [max(len(str(r[i])) for r in cells) for i in range(len(headers))]
    out = []
    for r, row in enumerate(cells):
        out.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
        if r == 0:
            out.append("-" * len(out[0]))
    return "\n".join(out)
