"""Per-frame tendon tensions and net Cartesian forces on the legs."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gait import LEGS, GaitEvents, GaitTrajectory
from .geometry import (
    DEFAULT_STIFFNESS,
    ElasticTendon,
    PulleyLayout,
    RoutingMode,
    SingularGeometryError,
    TendonPath,
    TendonRouting,
)

GROUPS = ("anterior", "posterior")


@dataclass(frozen=True)
class TendonSystem:
    """Layout + routing + one ElasticTendon per routed path."""

    layout: PulleyLayout
    routing: TendonRouting
    tendons: tuple

    def __post_init__(self):
        object.__setattr__(self, "tendons", tuple(self.tendons))
        if len(self.tendons) != self.routing.n_paths:
            raise ValueError(
                f"{self.routing.mode.value} routing has {self.routing.n_paths} paths "
                f"but {len(self.tendons)} tendons were given"
            )

    @classmethod
    def calibrated(cls, traj: GaitTrajectory, layout: PulleyLayout, routing: TendonRouting,
                   stiffness: float | Sequence[float] = DEFAULT_STIFFNESS,
                   pretension: float | Sequence[float] = 0.0) -> "TendonSystem":
        """Slack lengths set to the shortest path length seen in ``traj``."""
        slack = calibrate_slack(traj, layout, routing)
        k = np.broadcast_to(np.asarray(stiffness, dtype=float), slack.shape)
        dl = np.broadcast_to(np.asarray(pretension, dtype=float), slack.shape)
        tendons = tuple(ElasticTendon(float(ki), float(li), float(di)) for ki, li, di in zip(k, slack, dl))
        return cls(layout, routing, tendons)


@dataclass(frozen=True, eq=False)
class ForceTimeSeries:
    t: np.ndarray
    left: np.ndarray
    right: np.ndarray
    tensions: np.ndarray
    lengths: np.ndarray
    path_names: tuple
    # (leg, group) -> (N, 3) force from that tendon group on that leg
    group_forces: dict = field(default_factory=dict)

    @property
    def n_frames(self) -> int:
        return len(self.t)

    def leg(self, name: str) -> np.ndarray:
        return self.left if name == "left" else self.right

    def to_csv(self, path, digits: int = 9) -> None:
        fmt = f"{{:.{digits}g}}"
        header = ["t", "fl_x", "fl_y", "fl_z", "fr_x", "fr_y", "fr_z"]
        header += [f"tension_{i + 1}" for i in range(self.tensions.shape[1])]
        block = np.column_stack([self.t, self.left, self.right, self.tensions])
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in block:
                writer.writerow([fmt.format(v) for v in row])


@dataclass(frozen=True)
class PeakInfo:
    leg: str
    group: str
    force: float
    frame: int
    time: float
    nearest_event: str | None = None
    event_leg: str | None = None
    event_frame: int | None = None
    frame_distance: int | None = None


@dataclass(frozen=True)
class ForceSummary:
    rms: dict
    peaks: tuple

    def as_dict(self) -> dict:
        return {
            "rms": {leg: dict(comps) for leg, comps in self.rms.items()},
            "peaks": [vars(p).copy() for p in self.peaks],
        }


def _segment(a: np.ndarray, b: np.ndarray, what: str) -> tuple:
    """Lengths and unit vectors from ``a`` towards ``b`` for every frame."""
    d = b - a
    dist = np.sqrt(np.einsum("ij,ij->i", d, d))
    if np.any(dist == 0.0):
        frame = int(np.argmax(dist == 0.0))
        raise SingularGeometryError(f"{what} coincides with its pulley", frame=frame)
    return dist, d / dist[:, None]


def _path_geometry(traj: GaitTrajectory, layout: PulleyLayout, path: TendonPath):
    pulleys = [layout.pulley(name) for name in path.pulleys]
    start = traj.attachment(path.start)
    length, u_start = _segment(start, np.broadcast_to(pulleys[0], start.shape), path.start)
    inner = sum(float(np.linalg.norm(q - p)) for p, q in zip(pulleys[:-1], pulleys[1:]))
    length = length + inner
    u_end = None
    if path.end is not None:
        end = traj.attachment(path.end)
        end_len, u_end = _segment(end, np.broadcast_to(pulleys[-1], end.shape), path.end)
        length = length + end_len
    return length, u_start, u_end


def path_lengths(traj: GaitTrajectory, layout: PulleyLayout, routing: TendonRouting) -> np.ndarray:
    """(N, n_paths) total path length per frame."""
    return np.column_stack([_path_geometry(traj, layout, p)[0] for p in routing.paths])


def calibrate_slack(traj: GaitTrajectory, layout: PulleyLayout, routing: TendonRouting) -> np.ndarray:
    """Shortest length of each path over all frames."""
    return path_lengths(traj, layout, routing).min(axis=0)


def simulate_forces(traj: GaitTrajectory, system: TendonSystem) -> ForceTimeSeries:
    """Tension per path and the resulting force on each attached leg.

    Every path pulls its start attachment towards its first pulley; a coupled
    path also pulls its end attachment towards its last pulley with the same
    tension.
    """
    n = traj.n_frames
    routing = system.routing
    totals = {leg: np.zeros((n, 3)) for leg in LEGS}
    groups = {}
    lengths = np.empty((n, routing.n_paths))
    tensions = np.empty((n, routing.n_paths))
    for j, (path, tendon) in enumerate(zip(routing.paths, system.tendons)):
        length, u_start, u_end = _path_geometry(traj, system.layout, path)
        tension = tendon.stiffness * np.maximum(0.0, length - tendon.effective_slack)
        lengths[:, j] = length
        tensions[:, j] = tension
        for attachment, u in ((path.start, u_start), (path.end, u_end)):
            if attachment is None:
                continue
            leg = attachment.split("_")[0]
            f = tension[:, None] * u
            totals[leg] += f
            key = (leg, path.group)
            groups[key] = groups[key] + f if key in groups else f
    return ForceTimeSeries(
        t=traj.t,
        left=totals["left"],
        right=totals["right"],
        tensions=tensions,
        lengths=lengths,
        path_names=tuple(p.name for p in routing.paths),
        group_forces=groups,
    )


def rms_by_component(fts: ForceTimeSeries) -> dict:
    return {
        leg: dict(zip("xyz", (float(v) for v in np.sqrt(np.mean(fts.leg(leg) ** 2, axis=0)))))
        for leg in LEGS
    }


def summarize_forces(fts: ForceTimeSeries, events: Iterable[GaitEvents] = ()) -> ForceSummary:
    """RMS per leg and component, plus the peak of each tendon group.

    Each peak is labelled with the nearest supplied gait event (of either
    leg) and its distance in frames. All-zero groups report no peak.
    """
    if fts.n_frames == 0:
        raise ValueError("empty force series")
    events = list(events)
    candidates = []
    for ev in events:
        candidates += [(f, "toe_off", ev.leg) for f in ev.toe_offs]
        candidates += [(f, "heel_strike", ev.leg) for f in ev.heel_strikes]
    peaks = []
    for leg in LEGS:
        for group in GROUPS:
            f = fts.group_forces.get((leg, group))
            if f is None:
                continue
            mag = np.linalg.norm(f, axis=1)
            frame = int(np.argmax(mag))
            if mag[frame] <= 0:
                continue
            info = dict(leg=leg, group=group, force=float(mag[frame]), frame=frame, time=float(fts.t[frame]))
            if candidates:
                ev_frame, label, ev_leg = min(
                    candidates, key=lambda c: (abs(c[0] - frame), c[2] != leg, c[0]))
                info.update(nearest_event=label, event_leg=ev_leg, event_frame=int(ev_frame),
                            frame_distance=abs(int(ev_frame) - frame))
            peaks.append(PeakInfo(**info))
    return ForceSummary(rms_by_component(fts), tuple(peaks))


def parasitic_cost(fts: ForceTimeSeries) -> float:
    """Sum over both legs and x/y/z of the RMS force over time."""
    return float(sum(sum(comps.values()) for comps in rms_by_component(fts).values()))

