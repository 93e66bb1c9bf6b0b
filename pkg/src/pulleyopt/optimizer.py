"""Pulley placement optimisation.

The cost of a layout is the sum over both legs and the x/y/z axes of the
RMS parasitic force, after calibrating every slack length to the shortest
path seen in the trajectory. A bound-constrained genetic algorithm searches
the eight layout parameters; ``grid_search`` is the brute-force oracle for
reduced problems.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .forces import TendonSystem, parasitic_cost, simulate_forces
from .gait import GaitTrajectory
from .geometry import (
    DEFAULT_STIFFNESS,
    DEFAULT_X_OFFSET,
    PARAM_NAMES,
    PulleyLayout,
    RoutingMode,
    SingularGeometryError,
    TendonRouting,
)

DEFAULT_BOUNDS = {
    "w1": (0.0, 0.1), "h1": (0.5, 1.0),
    "w2": (0.4, 0.8), "h2": (0.1, 0.3),
    "w3": (0.0, 0.1), "h3": (0.5, 1.0),
    "w4": (0.4, 0.8), "h4": (0.1, 0.3),
}


@dataclass(frozen=True)
class ParameterBounds:
    """Box bounds on the layout vector, ordered as ``PARAM_NAMES``."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if len(lower) != 8 or len(upper) != 8:
            raise ValueError("bounds need 8 lower and 8 upper values")
        for name, lo, hi in zip(PARAM_NAMES, lower, upper):
            if not np.isfinite(lo) or not np.isfinite(hi):
                raise ValueError(f"{name}: bounds must be finite")
            if lo > hi:
                raise ValueError(f"{name}: lower bound {lo} exceeds upper bound {hi}")
            if name.startswith("w") and lo < 0:
                raise ValueError(f"{name}: widths must be >= 0, got lower bound {lo}")
            if name.startswith("h") and lo <= 0:
                raise ValueError(f"{name}: heights must be > 0, got lower bound {lo}")

    @classmethod
    def default(cls) -> "ParameterBounds":
        return cls.from_dict(DEFAULT_BOUNDS)

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterBounds":
        unknown = set(d) - set(PARAM_NAMES)
        if unknown:
            raise ValueError(f"unknown bound parameters {sorted(unknown)}")
        merged = {**DEFAULT_BOUNDS, **{k: tuple(v) for k, v in d.items()}}
        return cls(tuple(merged[n][0] for n in PARAM_NAMES), tuple(merged[n][1] for n in PARAM_NAMES))

    @classmethod
    def point(cls, params: Sequence[float]) -> "ParameterBounds":
        return cls(tuple(params), tuple(params))

    def fix(self, values: dict) -> "ParameterBounds":
        """Collapse the named parameters to the given values."""
        lo, hi = list(self.lower), list(self.upper)
        for name, value in values.items():
            if name not in PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
            i = PARAM_NAMES.index(name)
            if not lo[i] <= value <= hi[i]:
                raise ValueError(f"{name}: fixed value {value} outside [{lo[i]}, {hi[i]}]")
            lo[i] = hi[i] = float(value)
        return ParameterBounds(tuple(lo), tuple(hi))

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (np.array(self.lower) + np.array(self.upper))

    @property
    def free(self) -> tuple:
        return tuple(i for i, (lo, hi) in enumerate(zip(self.lower, self.upper)) if hi > lo)

    def contains(self, params) -> bool:
        p = np.asarray(params, dtype=float)
        return bool(np.all(p >= np.array(self.lower)) and np.all(p <= np.array(self.upper)))

    def as_dict(self) -> dict:
        return {n: [lo, hi] for n, lo, hi in zip(PARAM_NAMES, self.lower, self.upper)}


@dataclass(frozen=True)
class GaParams:
    population_size: int = 200
    max_generations: int = 100
    elite_count: int = 10
    crossover_fraction: float = 0.8
    mutation_sigma_fraction: float = 0.1
    tournament_size: int = 2
    stall_window: int = 50
    function_tolerance: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.elite_count < 1:
            raise ValueError("elite_count must be >= 1")
        if self.population_size < 2 * self.elite_count:
            raise ValueError(
                f"population_size ({self.population_size}) must be at least "
                f"2 * elite_count ({2 * self.elite_count})"
            )
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        for name in ("crossover_fraction", "mutation_sigma_fraction"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {value}")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")
        # 0 disables the tolerance stop; used to force a full-length run
        if not self.function_tolerance >= 0:
            raise ValueError(f"function_tolerance must be >= 0, got {self.function_tolerance}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def as_dict(self) -> dict:
        return asdict(self)


class TerminationReason(str, Enum):
    MAX_GENERATIONS = "MaxGenerations"
    FUNCTION_TOLERANCE = "FunctionTolerance"


@dataclass(frozen=True)
class OptimizationResult:
    best_params: tuple
    best_cost: float
    trace: tuple
    generations: int
    termination: TerminationReason
    seed: int
    n_evaluations: int

    @property
    def best_layout(self) -> dict:
        return dict(zip(PARAM_NAMES, self.best_params))

    def as_dict(self) -> dict:
        return {
            "best_params": self.best_layout,
            "best_cost": self.best_cost,
            "generations": self.generations,
            "termination": self.termination.value,
            "seed": self.seed,
            "n_evaluations": self.n_evaluations,
            "trace": list(self.trace),
        }


class LayoutCost:
    """Callable cost of a layout vector over one or more trajectories."""

    def __init__(self, trajs: Sequence[GaitTrajectory], routing_mode=RoutingMode.INDEPENDENT,
                 stiffness: float = DEFAULT_STIFFNESS, x_off: float = DEFAULT_X_OFFSET,
                 pretension: float | Sequence[float] = 0.0):
        if isinstance(trajs, GaitTrajectory):
            trajs = [trajs]
        self.trajs = list(trajs)
        if not self.trajs:
            raise ValueError("need at least one trajectory")
        self.routing = TendonRouting(routing_mode)
        self.stiffness = stiffness
        self.x_off = x_off
        self.pretension = pretension

    def per_trajectory(self, params) -> list:
        layout = PulleyLayout.from_params(params, self.x_off)
        costs = []
        for i, traj in enumerate(self.trajs):
            try:
                system = TendonSystem.calibrated(traj, layout, self.routing, self.stiffness, self.pretension)
                costs.append(parasitic_cost(simulate_forces(traj, system)))
            except SingularGeometryError as exc:
                err = SingularGeometryError(f"trajectory {i}: {exc}")
                err.frame, err.trajectory = exc.frame, i
                raise err from exc
        return costs

    def __call__(self, params) -> float:
        return float(np.mean(self.per_trajectory(params)))


def cost(params, trajs, routing_mode=RoutingMode.INDEPENDENT, stiffness: float = DEFAULT_STIFFNESS,
         x_off: float = DEFAULT_X_OFFSET, pretension=0.0) -> float:
    """Mean over trajectories of the summed per-axis RMS leg force (N)."""
    return LayoutCost(trajs, routing_mode, stiffness, x_off, pretension)(params)


def _rng(seed: int, generation: int, index: int) -> np.random.Generator:
    # one stream per (generation, individual) so scheduling cannot matter
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(generation, index)))


def _tournament(rng, costs, size) -> int:
    picks = rng.integers(0, len(costs), size=size)
    return int(min(picks, key=lambda i: (costs[i], i)))


def _mean_relative_change(trace, window) -> float:
    recent = np.asarray(trace[-(window + 1):])
    prev, cur = recent[:-1], recent[1:]
    scale = np.maximum(np.abs(prev), np.finfo(float).tiny)
    change = np.where(prev == cur, 0.0, np.abs(prev - cur) / scale)
    return float(np.mean(change))


def optimize_layout(
    trajs,
    bounds: ParameterBounds | None = None,
    ga: GaParams | None = None,
    routing_mode=RoutingMode.INDEPENDENT,
    stiffness: float = DEFAULT_STIFFNESS,
    x_off: float = DEFAULT_X_OFFSET,
    pretension=0.0,
    workers: int = 1,
    callback: Callable[[int, float], None] | None = None,
) -> OptimizationResult:
    """Minimise the layout cost with a seeded genetic algorithm.

    Generation 1 is the initial population: the bound midpoint plus uniform
    samples. Each later generation keeps ``elite_count`` elites and breeds
    the rest, a ``crossover_fraction`` share by uniform crossover of two
    tournament winners and the remainder by clipped Gaussian mutation of one.
    The run stops at ``max_generations`` or when the mean relative change of
    the best cost over the last ``stall_window`` generations drops below
    ``function_tolerance``.

    ``workers`` only parallelises cost evaluation; results do not depend on it.
    """
    bounds = bounds or ParameterBounds.default()
    ga = ga or GaParams()
    objective = LayoutCost(trajs, routing_mode, stiffness, x_off, pretension)
    lo, hi = np.array(bounds.lower), np.array(bounds.upper)
    span = hi - lo
    P, E = ga.population_size, ga.elite_count

    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def evaluate(rows):
        if executor is None:
            return np.array([objective(r) for r in rows])
        return np.array(list(executor.map(objective, rows)))

    try:
        if not bounds.free:
            point = bounds.midpoint
            c = objective(point)
            return OptimizationResult(tuple(point.tolist()), c, (c,), 1,
                                      TerminationReason.FUNCTION_TOLERANCE, ga.seed, 1)

        pop = np.empty((P, 8))
        pop[0] = bounds.midpoint
        for i in range(1, P):
            pop[i] = _rng(ga.seed, 0, i).uniform(lo, hi)
        pop = np.clip(pop, lo, hi)
        costs = evaluate(pop)
        n_evals = P
        trace = [float(costs.min())]
        if callback:
            callback(1, trace[-1])
        reason = TerminationReason.MAX_GENERATIONS
        sigma = ga.mutation_sigma_fraction * span

        for gen in range(2, ga.max_generations + 1):
            order = np.lexsort((np.arange(P), costs))
            elites, elite_costs = pop[order[:E]], costs[order[:E]]
            children = np.empty((P - E, 8))
            for i in range(P - E):
                rng = _rng(ga.seed, gen, i)
                if rng.random() < ga.crossover_fraction:
                    a = pop[_tournament(rng, costs, ga.tournament_size)]
                    b = pop[_tournament(rng, costs, ga.tournament_size)]
                    children[i] = np.where(rng.random(8) < 0.5, a, b)
                else:
                    parent = pop[_tournament(rng, costs, ga.tournament_size)]
                    children[i] = np.clip(parent + rng.normal(0.0, 1.0, 8) * sigma, lo, hi)
            pop = np.vstack([elites, children])
            costs = np.concatenate([elite_costs, evaluate(children)])
            n_evals += P - E
            trace.append(float(costs.min()))
            if callback:
                callback(gen, trace[-1])
            if len(trace) > ga.stall_window and \
                    _mean_relative_change(trace, ga.stall_window) < ga.function_tolerance:
                reason = TerminationReason.FUNCTION_TOLERANCE
                break
    finally:
        if executor is not None:
            executor.shutdown()

    best = int(np.lexsort((np.arange(P), costs))[0])
    return OptimizationResult(tuple(pop[best].tolist()), float(costs[best]), tuple(trace),
                              len(trace), reason, ga.seed, n_evals)


@dataclass(frozen=True)
class GridSearchResult:
    params: tuple
    cost: float
    n_evaluations: int
    runtime: float
    free: tuple


def grid_search(
    trajs,
    bounds: ParameterBounds,
    resolution: int | Sequence[int] = 41,
    fixed: Sequence[bool] | None = None,
    base: Sequence[float] | None = None,
    routing_mode=RoutingMode.INDEPENDENT,
    stiffness: float = DEFAULT_STIFFNESS,
    x_off: float = DEFAULT_X_OFFSET,
    pretension=0.0,
    max_free: int = 3,
) -> GridSearchResult:
    """Exhaustive search over a lattice of at most ``max_free`` free parameters.

    ``fixed`` defaults to the parameters whose bounds are collapsed; fixed
    parameters take their value from ``base`` (default: bound midpoint).
    Lattice points are visited in lexicographic order and only a strictly
    lower cost replaces the incumbent, so ties go to the smallest vector.
    """
    if fixed is None:
        free = bounds.free
    else:
        if len(fixed) != 8:
            raise ValueError("fixed mask needs 8 entries")
        free = tuple(i for i, f in enumerate(fixed) if not f)
    if len(free) > max_free:
        raise ValueError(f"grid search over {len(free)} free parameters exceeds the limit of {max_free}")
    if isinstance(resolution, int):
        resolution = [resolution] * len(free)
    if len(resolution) != len(free):
        raise ValueError(f"need one resolution per free parameter ({len(free)})")
    point = np.array(base if base is not None else bounds.midpoint, dtype=float)
    axes = []
    for i, r in zip(free, resolution):
        lo, hi = bounds.lower[i], bounds.upper[i]
        axes.append(np.linspace(lo, hi, r) if hi > lo else np.array([lo]))

    objective = LayoutCost(trajs, routing_mode, stiffness, x_off, pretension)
    start = time.perf_counter()
    best_cost, best_point, n = np.inf, point.copy(), 0
    for values in itertools.product(*axes):
        point[list(free)] = values
        c = objective(point)
        n += 1
        if c < best_cost:
            best_cost, best_point = c, point.copy()
    return GridSearchResult(tuple(best_point.tolist()), float(best_cost), n,
                            time.perf_counter() - start, free)


def flatness_probe(
    params,
    trajs,
    index: int,
    n_points: int = 21,
    bounds: ParameterBounds | None = None,
    routing_mode=RoutingMode.INDEPENDENT,
    stiffness: float = DEFAULT_STIFFNESS,
    x_off: float = DEFAULT_X_OFFSET,
    pretension=0.0,
) -> float:
    """Largest cost change when one parameter sweeps its bounds (N).

    Slack lengths are recalibrated at every sweep point, so a parameter that
    only moves time-constant inter-pulley segments reports ~0.
    """
    if not 0 <= index < 8:
        raise ValueError(f"parameter index must be in [0, 7], got {index}")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    bounds = bounds or ParameterBounds.default()
    objective = LayoutCost(trajs, routing_mode, stiffness, x_off, pretension)
    base = np.array(params, dtype=float)
    reference = objective(base)
    deviation = 0.0
    for value in np.linspace(bounds.lower[index], bounds.upper[index], n_points):
        p = base.copy()
        p[index] = value
        deviation = max(deviation, abs(objective(p) - reference))
    return deviation
