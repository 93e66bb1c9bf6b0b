"""Command-line entry point: ``pulleyopt {simulate,optimize,gait,score,synth}``."""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig
from .fixtures import STANDARD_GAIT
from .forces import TendonSystem, parasitic_cost, simulate_forces, summarize_forces
from .gait import (
    LEGS,
    NoCyclesError,
    TrajectoryError,
    detect_events,
    load_trajectory,
    save_trajectory,
    step_metrics,
    synthesize_gait,
)
from .geometry import PARAM_NAMES, SingularGeometryError, TendonRouting
from .optimizer import optimize_layout
from .questionnaires import ResponseError, read_responses, sus_score, ueq_score, vanderlaan_scores

SIG_DIGITS = 9


def _round(obj):
    if isinstance(obj, float):
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_round(obj), indent=2) + "\n", encoding="utf-8")


def _load_trajectories(cfg: RunConfig) -> list:
    """[(name, trajectory)] from files, then synthetic specs."""
    out = []
    for p in cfg.trajectories:
        out.append((Path(p).stem, load_trajectory(cfg.resolve(p))))
    for i, spec in enumerate(cfg.synthetic):
        name = "synthetic" if len(cfg.synthetic) == 1 else f"synthetic_{i + 1}"
        out.append((name, synthesize_gait(**{**STANDARD_GAIT, **spec})))
    if not out:
        raise ConfigError("config.trajectories", "no trajectory files or synthetic gait given")
    return out


def _events(traj):
    events, metrics = [], {}
    for leg in LEGS:
        try:
            ev = detect_events(traj, leg)
            events.append(ev)
            metrics[leg] = step_metrics(traj, ev).as_dict()
        except NoCyclesError as exc:
            metrics[leg] = {"error": str(exc)}
    return events, metrics


def cmd_simulate(cfg: RunConfig, out: Path, threads: int = 1) -> dict:
    if cfg.layout is None:
        raise ConfigError("config.layout", "required for simulate")
    layout = cfg.layout_obj()
    routing = TendonRouting(cfg.routing)
    trajs = _load_trajectories(cfg)
    report = {"version": __version__, "config": cfg.echo(), "trajectories": []}
    timings = {}
    for name, traj in trajs:
        start = time.perf_counter()
        try:
            system = TendonSystem.calibrated(traj, layout, routing, cfg.stiffness, cfg.pretension)
            fts = simulate_forces(traj, system)
        except SingularGeometryError as exc:
            raise SingularGeometryError(f"trajectory {name}: {exc}") from exc
        events, metrics = _events(traj)
        summary = summarize_forces(fts, events)
        csv_name = "forces.csv" if len(trajs) == 1 else f"forces_{name}.csv"
        fts.to_csv(out / csv_name, SIG_DIGITS)
        report["trajectories"].append({
            "name": name,
            "n_frames": traj.n_frames,
            "sample_rate": traj.sample_rate,
            "paths": list(fts.path_names),
            "slack_lengths": [t.slack_length for t in system.tendons],
            "cost": parasitic_cost(fts),
            "force_summary": summary.as_dict(),
            "step_metrics": metrics,
            "forces_csv": csv_name,
        })
        timings[name] = time.perf_counter() - start
    write_json(out / "summary.json", report)
    # wall-clock numbers go to stdout so the report files stay reproducible
    for name, seconds in timings.items():
        print(f"{name}: cost {_report_cost(report, name):.6g} N, {seconds:.3f} s")
    return report


def _report_cost(report: dict, name: str) -> float:
    return next(t["cost"] for t in report["trajectories"] if t["name"] == name)


def cmd_optimize(cfg: RunConfig, out: Path, threads: int = 1) -> dict:
    if cfg.layout is not None:
        raise ConfigError("config.layout", "optimize takes 'bounds', not a fixed layout")
    trajs = _load_trajectories(cfg)
    start = time.perf_counter()
    result = optimize_layout(
        [t for _, t in trajs],
        bounds=cfg.bounds_obj(),
        ga=cfg.ga_params(),
        routing_mode=cfg.routing,
        stiffness=cfg.stiffness,
        x_off=cfg.x_off,
        pretension=cfg.pretension,
        workers=threads,
    )
    elapsed = time.perf_counter() - start
    report = {
        "version": __version__,
        "config": cfg.echo(),
        "trajectories": [name for name, _ in trajs],
        "result": result.as_dict(),
    }
    write_json(out / "result.json", report)
    with open(out / "trace.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["generation", "best_cost"])
        for g, c in enumerate(result.trace, start=1):
            writer.writerow([g, f"{c:.{SIG_DIGITS}g}"])
    print(" ".join(PARAM_NAMES))
    print(" ".join(f"{v:.2f}" for v in result.best_params))
    print(f"cost {result.best_cost:.6g} N after {result.generations} generations "
          f"({result.termination.value}), {elapsed:.3f} s")
    return report


def cmd_gait(cfg: RunConfig, out: Path, threads: int = 1) -> dict:
    trajs = _load_trajectories(cfg)
    report = {}
    for name, traj in trajs:
        legs = {}
        rows = []
        for leg in LEGS:
            ev = detect_events(traj, leg)
            try:
                metrics = step_metrics(traj, ev)
            except NoCyclesError as exc:
                raise NoCyclesError(f"trajectory {name}: {exc}") from None
            legs[leg] = metrics.as_dict()
            rows += [(leg, "toe_off", f) for f in ev.toe_offs]
            rows += [(leg, "heel_strike", f) for f in ev.heel_strikes]
        rows.sort(key=lambda r: (r[2], r[0]))
        write_json(out / f"gait_{name}.json", {"version": __version__, "config": cfg.echo(),
                                               "trajectory": name, "legs": legs})
        with open(out / f"events_{name}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["leg", "event", "frame", "t"])
            for leg, kind, f in rows:
                writer.writerow([leg, kind, f, f"{traj.t[f]:.{SIG_DIGITS}g}"])
        report[name] = legs
    return report


def cmd_score(cfg: RunConfig, out: Path, threads: int = 1) -> dict:
    if not cfg.questionnaires:
        raise ConfigError("config.questionnaires", "no response files given")
    report = {"version": __version__}
    q = cfg.questionnaires
    if "sus" in q:
        rows = read_responses(cfg.resolve(q["sus"]), n_items=10, low=1, high=5)
        scores = {rid: sus_score(items) for rid, items in rows}
        report["sus"] = {"respondents": scores, "mean": _mean(scores.values()),
                         "median": _median(scores.values())}
    if "vanderlaan" in q:
        rows = read_responses(cfg.resolve(q["vanderlaan"]), n_items=9)
        scores = {rid: vanderlaan_scores(items) for rid, items in rows}
        report["vanderlaan"] = {
            "respondents": scores,
            "median": {k: _median(s[k] for s in scores.values()) for k in ("usefulness", "satisfying")},
        }
    if "ueq" in q:
        rows = read_responses(cfg.resolve(q["ueq"]))
        agg = ueq_score([items for _, items in rows])
        agg["respondents"] = [rid for rid, _ in rows]
        report["ueq"] = agg
    write_json(out / "questionnaires.json", report)
    return report


def _mean(values):
    values = list(values)
    return sum(values) / len(values) if values else None


def _median(values):
    values = list(values)
    return statistics.median(values) if values else None


def cmd_synth(cfg: RunConfig, out: Path, threads: int = 1) -> dict:
    specs = cfg.synthetic or [{}]
    written = []
    for i, spec in enumerate(specs):
        traj = synthesize_gait(**{**STANDARD_GAIT, **spec})
        name = "synthetic.csv" if len(specs) == 1 else f"synthetic_{i + 1}.csv"
        save_trajectory(traj, out / name)
        written.append(name)
    return {"files": written}


COMMANDS = {
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "gait": cmd_gait,
    "score": cmd_score,
    "synth": cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulleyopt", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON run configuration")
        p.add_argument("--seed", type=int, help="overrides the config seed")
        p.add_argument("--threads", type=int, default=1, help="max worker threads for cost evaluation")
        p.add_argument("--out", type=Path, help="output directory (overrides config)")
    return parser


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message.replace("\n", " ")}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        if args.seed is not None:
            cfg.set_seed(args.seed)
        if args.threads < 1:
            raise ConfigError("--threads", "must be >= 1")
        out = args.out if args.out is not None else cfg.resolve(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](cfg, out, args.threads)
    except ConfigError as exc:
        return _fail("config", str(exc), 2)
    except NoCyclesError as exc:
        return _fail("no_cycles", str(exc), 1)
    except (TrajectoryError, ResponseError) as exc:
        return _fail("input", str(exc), 1)
    except SingularGeometryError as exc:
        return _fail("singular_geometry", str(exc), 1)
    except (ValueError, OSError) as exc:
        return _fail(type(exc).__name__, str(exc), 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
