"""Write the standard synthetic gait (and optional variants) as trajectory CSVs."""

import argparse
from pathlib import Path

from pulleyopt.fixtures import standard_gait
from pulleyopt.gait import save_trajectory


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("configs/data"))
    parser.add_argument("--duration", type=float, default=None)
    parser.add_argument("--cadence", type=float, default=None)
    args = parser.parse_args()

    overrides = {k: v for k, v in (("duration", args.duration), ("cadence", args.cadence)) if v is not None}
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "standard_gait.csv"
    save_trajectory(standard_gait(**overrides), path)
    print(path)


if __name__ == "__main__":
    main()
