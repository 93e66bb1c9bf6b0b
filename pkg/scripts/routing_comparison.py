"""Parasitic cost and anterior peak timing for both routings on one layout."""

import argparse

from pulleyopt.fixtures import IMP_PARAMS, OPTIMAL_LAYOUTS, standard_gait
from pulleyopt.forces import TendonSystem, parasitic_cost, simulate_forces, summarize_forces
from pulleyopt.gait import detect_events
from pulleyopt.geometry import PulleyLayout, TendonRouting


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--layout", default="Imp", choices=["Imp", *OPTIMAL_LAYOUTS])
    parser.add_argument("--stiffness", type=float, default=300.0)
    args = parser.parse_args()

    params = IMP_PARAMS if args.layout == "Imp" else OPTIMAL_LAYOUTS[args.layout]
    layout = PulleyLayout.from_params(params)
    traj = standard_gait()
    events = [detect_events(traj, leg) for leg in ("left", "right")]
    for mode in ("independent", "coupled"):
        system = TendonSystem.calibrated(traj, layout, TendonRouting(mode), args.stiffness)
        fts = simulate_forces(traj, system)
        summary = summarize_forces(fts, events)
        print(f"{mode}: cost {parasitic_cost(fts):.2f} N")
        for p in summary.peaks:
            print(f"  {p.leg:>5} {p.group:<9} peak {p.force:7.2f} N at frame {p.frame:4d}"
                  f"  nearest {p.event_leg} {p.nearest_event} ({p.frame_distance} frames)")


if __name__ == "__main__":
    main()
