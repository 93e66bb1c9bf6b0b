"""Grid search vs genetic algorithm on the two-parameter (w2, h2) problem.

The other six parameters stay at the implemented layout. Prints both optima,
evaluation counts and wall-clock times.
"""

import argparse
import time

from pulleyopt.fixtures import IMP_PARAMS, standard_gait
from pulleyopt.geometry import PARAM_NAMES
from pulleyopt.optimizer import GaParams, ParameterBounds, grid_search, optimize_layout


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--resolution", type=int, default=41)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--routing", choices=["independent", "coupled"], default="independent")
    args = parser.parse_args()

    traj = standard_gait()
    bounds = ParameterBounds.default().fix(
        {n: v for n, v in zip(PARAM_NAMES, IMP_PARAMS) if n not in ("w2", "h2")})

    grid = grid_search([traj], bounds, resolution=args.resolution, routing_mode=args.routing)
    print(f"grid {args.resolution}x{args.resolution}: cost {grid.cost:.4f} N at "
          f"w2={grid.params[2]:.3f} h2={grid.params[3]:.3f} "
          f"({grid.n_evaluations} evaluations, {grid.runtime:.2f} s)")

    start = time.perf_counter()
    res = optimize_layout([traj], bounds, GaParams(seed=args.seed), routing_mode=args.routing)
    elapsed = time.perf_counter() - start
    print(f"GA seed {args.seed}: cost {res.best_cost:.4f} N at "
          f"w2={res.best_params[2]:.3f} h2={res.best_params[3]:.3f} "
          f"({res.n_evaluations} evaluations, {res.generations} generations, "
          f"{res.termination.value}, {elapsed:.2f} s)")
    print(f"GA / grid = {res.best_cost / grid.cost:.6f}")


if __name__ == "__main__":
    main()
