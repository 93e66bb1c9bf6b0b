"""Gait trajectories of the four leg attachment points.

Loading/saving the trajectory CSV, a sinusoidal synthetic gait, event
detection (toe-off = anterior attachment farthest back, heel strike =
farthest forward), per-cycle step metrics and resampling.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from .geometry import ATTACHMENTS

CSV_COLUMNS = (
    "t",
    "la_x", "la_y", "la_z",
    "lp_x", "lp_y", "lp_z",
    "ra_x", "ra_y", "ra_z",
    "rp_x", "rp_y", "rp_z",
)

TIME_TOLERANCE = 1e-6
PROMINENCE_FRACTION = 0.1
LEGS = ("left", "right")


class TrajectoryError(ValueError):
    pass


class NoCyclesError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GaitTrajectory:
    """Time stamps ``t`` (N,) and four (N, 3) attachment point arrays."""

    t: np.ndarray
    left_anterior: np.ndarray
    left_posterior: np.ndarray
    right_anterior: np.ndarray
    right_posterior: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        object.__setattr__(self, "t", t)
        if t.ndim != 1 or len(t) < 2:
            raise TrajectoryError("a trajectory needs at least 2 frames")
        if not np.all(np.isfinite(t)):
            raise TrajectoryError("non-finite time stamp")
        for name in ATTACHMENTS:
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (len(t), 3):
                raise TrajectoryError(f"{name} has shape {arr.shape}, expected ({len(t)}, 3)")
            if not np.all(np.isfinite(arr)):
                row = int(np.argwhere(~np.isfinite(arr))[0][0])
                raise TrajectoryError(f"{name}: non-finite coordinate at frame {row}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        t.setflags(write=False)
        dt = np.diff(t)
        if np.any(dt <= 0):
            row = int(np.argmax(dt <= 0)) + 1
            raise TrajectoryError(f"time stamps not strictly increasing at frame {row}")
        step = (t[-1] - t[0]) / (len(t) - 1)
        bad = np.abs(dt - step) > TIME_TOLERANCE
        if np.any(bad):
            row = int(np.argmax(bad)) + 1
            raise TrajectoryError(f"non-uniform sampling at frame {row}")
        for leg in LEGS:
            gap = np.linalg.norm(getattr(self, leg + "_anterior") - getattr(self, leg + "_posterior"), axis=1)
            if np.any(gap == 0):
                row = int(np.argmax(gap == 0))
                raise TrajectoryError(f"{leg} anterior and posterior attachments coincide at frame {row}")

    @property
    def n_frames(self) -> int:
        return len(self.t)

    @property
    def sample_rate(self) -> float:
        return (len(self.t) - 1) / (self.t[-1] - self.t[0])

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    def attachment(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def mirrored(self) -> "GaitTrajectory":
        """Reflect y -> -y and swap the left and right legs."""
        flip = np.array([1.0, -1.0, 1.0])
        return GaitTrajectory(
            self.t,
            self.right_anterior * flip,
            self.right_posterior * flip,
            self.left_anterior * flip,
            self.left_posterior * flip,
            dict(self.meta),
        )

    def translated(self, offset) -> "GaitTrajectory":
        offset = np.asarray(offset, dtype=float)
        return GaitTrajectory(self.t, *(getattr(self, a) + offset for a in ATTACHMENTS), dict(self.meta))

    def shifted(self, dt: float) -> "GaitTrajectory":
        return GaitTrajectory(self.t + dt, *(getattr(self, a) for a in ATTACHMENTS), dict(self.meta))

    def slice(self, start: int, stop: int) -> "GaitTrajectory":
        return GaitTrajectory(self.t[start:stop], *(getattr(self, a)[start:stop] for a in ATTACHMENTS),
                              dict(self.meta))


@dataclass(frozen=True)
class GaitEvents:
    leg: str
    toe_offs: tuple
    heel_strikes: tuple

    def cycles(self) -> list:
        """(start, stop) frame pairs between consecutive toe-offs."""
        return list(zip(self.toe_offs[:-1], self.toe_offs[1:]))


@dataclass(frozen=True)
class StepMetrics:
    step_length: float
    step_height: float
    cycle_lengths: tuple
    cycle_heights: tuple

    @property
    def n_cycles(self) -> int:
        return len(self.cycle_lengths)

    def as_dict(self) -> dict:
        return {
            "step_length": self.step_length,
            "step_height": self.step_height,
            "cycle_lengths": list(self.cycle_lengths),
            "cycle_heights": list(self.cycle_heights),
            "n_cycles": self.n_cycles,
        }


def _parse_float(text, line, column, path):
    try:
        value = float(text)
    except ValueError:
        raise TrajectoryError(f"{path}:{line}: column '{column}': cannot parse {text!r}") from None
    if not math.isfinite(value):
        raise TrajectoryError(f"{path}:{line}: column '{column}': non-finite value {text!r}")
    return value


def load_trajectory(path) -> GaitTrajectory:
    """Read a trajectory CSV (header ``t,la_x,...,rp_z``), validating every cell.

    Errors name the file line (the header is line 1) and the column.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise TrajectoryError(f"{path}: empty file") from None
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise TrajectoryError(f"{path}:1: missing columns {missing}")
        index = [header.index(c) for c in CSV_COLUMNS]
        rows = []
        for line, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != len(header):
                raise TrajectoryError(
                    f"{path}:{line}: expected {len(header)} fields, got {len(record)}"
                )
            rows.append((line, [_parse_float(record[i].strip(), line, c, path)
                                for i, c in zip(index, CSV_COLUMNS)]))
    if len(rows) < 2:
        raise TrajectoryError(f"{path}: need at least 2 data rows, got {len(rows)}")
    for (_, prev), (line, cur) in zip(rows[:-1], rows[1:]):
        if cur[0] <= prev[0]:
            raise TrajectoryError(f"{path}:{line}: time stamp {cur[0]} not greater than {prev[0]}")
    data = np.array([r for _, r in rows])
    try:
        return GaitTrajectory(
            data[:, 0],
            data[:, 1:4], data[:, 4:7], data[:, 7:10], data[:, 10:13],
            {"source": str(path)},
        )
    except TrajectoryError as exc:
        raise TrajectoryError(f"{path}: {exc}") from None


def save_trajectory(traj: GaitTrajectory, path) -> None:
    # repr gives the shortest round-tripping decimal for each float
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        block = np.column_stack([traj.t] + [getattr(traj, a) for a in ATTACHMENTS])
        for row in block:
            writer.writerow([repr(float(v)) for v in row])


def synthesize_gait(
    speed: float = 1.0,
    cadence: float = 100.0,
    forward_excursion: float = 0.58,
    lift_height: float = 0.16,
    attachment_height: float = 0.10,
    duration: float = 10.0,
    rate: float = 100.0,
    phase_offset: float = 0.5,
    hip_half_width: float = 0.10,
    attachment_spacing: float = 0.10,
) -> GaitTrajectory:
    """Sinusoidal treadmill gait in the belt frame.

    Per leg, with stride frequency ``f = cadence / 120`` (two steps per
    stride) and phase ``phi`` (0 for the left leg, ``2*pi*phase_offset``
    for the right)::

        x = forward_excursion / 2 * sin(2*pi*f*t + phi)
        z = attachment_height + lift_height * max(0, sin(2*pi*f*t + phi))**2

    The anterior and posterior attachments sit ``attachment_spacing / 2``
    in front of and behind that point; y is ``+/-hip_half_width``.
    ``speed`` is recorded in ``meta`` only (the belt frame is stationary).
    """
    if duration <= 0:
        raise ValueError(f"duration must be > 0, got {duration}")
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    for name, value in [("speed", speed), ("cadence", cadence), ("forward_excursion", forward_excursion),
                        ("attachment_height", attachment_height), ("attachment_spacing", attachment_spacing)]:
        if value <= 0:
            raise ValueError(f"{name} must be > 0, got {value}")
    if lift_height < 0 or hip_half_width < 0:
        raise ValueError("lift_height and hip_half_width must be >= 0")

    n = int(round(duration * rate))
    if n < 2:
        raise ValueError(f"duration * rate gives {n} frames, need at least 2")
    t = np.arange(n) / rate
    f = cadence / 120.0
    points = {}
    for leg, phi, side in (("left", 0.0, 1.0), ("right", 2 * np.pi * phase_offset, -1.0)):
        s = np.sin(2 * np.pi * f * t + phi)
        x = 0.5 * forward_excursion * s
        z = attachment_height + lift_height * np.maximum(0.0, s) ** 2
        y = np.full(n, side * hip_half_width)
        half = 0.5 * attachment_spacing
        points[leg + "_anterior"] = np.column_stack([x + half, y, z])
        points[leg + "_posterior"] = np.column_stack([x - half, y, z])
    meta = {
        "synthetic": True,
        "speed": speed,
        "cadence": cadence,
        "stride_period": 1.0 / f,
        "forward_excursion": forward_excursion,
        "lift_height": lift_height,
    }
    return GaitTrajectory(t, *(points[a] for a in ATTACHMENTS), meta)


def _alternate(toe_offs, heel_strikes, x):
    """Merge runs of same-type extrema, keeping the most extreme one."""
    events = sorted([(int(i), "to") for i in toe_offs] + [(int(i), "hs") for i in heel_strikes])
    cleaned = []
    for idx, kind in events:
        if cleaned and cleaned[-1][1] == kind:
            prev = cleaned[-1][0]
            better = x[idx] < x[prev] if kind == "to" else x[idx] > x[prev]
            if better:
                cleaned[-1] = (idx, kind)
            continue
        cleaned.append((idx, kind))
    return (tuple(i for i, k in cleaned if k == "to"),
            tuple(i for i, k in cleaned if k == "hs"))


def detect_events(traj: GaitTrajectory, leg: str) -> GaitEvents:
    """Toe-offs at local minima and heel strikes at local maxima of the
    anterior attachment's forward coordinate.

    Extrema need a prominence of at least 10% of the x range, which keeps
    sensor jitter from registering as events.
    """
    if leg not in LEGS:
        raise ValueError(f"leg must be one of {LEGS}, got {leg!r}")
    x = traj.attachment(leg + "_anterior")[:, 0]
    x_range = float(np.ptp(x))
    if x_range <= 1e-12:
        raise NoCyclesError(f"no cycles: {leg} attachment does not move forward/back")
    prominence = PROMINENCE_FRACTION * x_range
    heel, _ = find_peaks(x, prominence=prominence)
    toe, _ = find_peaks(-x, prominence=prominence)
    toe_offs, heel_strikes = _alternate(toe, heel, x)
    if not toe_offs or not heel_strikes:
        raise NoCyclesError(f"no cycles: no complete swing detected for {leg} leg")
    return GaitEvents(leg, toe_offs, heel_strikes)


def step_metrics(traj: GaitTrajectory, events: GaitEvents, leg: str | None = None) -> StepMetrics:
    """Median per-cycle x and z ranges of the anterior attachment.

    A cycle runs from one toe-off to the next, both frames included.
    """
    leg = leg or events.leg
    cycles = events.cycles()
    if not cycles:
        raise NoCyclesError(f"no cycles: need two toe-offs for {leg} leg, got {len(events.toe_offs)}")
    p = traj.attachment(leg + "_anterior")
    lengths, heights = [], []
    for start, stop in cycles:
        seg = p[start:stop + 1]
        lengths.append(float(np.ptp(seg[:, 0])))
        heights.append(float(np.ptp(seg[:, 2])))
    return StepMetrics(float(np.median(lengths)), float(np.median(heights)),
                       tuple(lengths), tuple(heights))


def resample(traj: GaitTrajectory, new_rate: float) -> GaitTrajectory:
    """Linear interpolation onto a uniform grid spanning the same interval.

    The frame count is ``round(span * new_rate) + 1`` so both end points are
    kept; the realised rate is the closest one that tiles the span exactly.
    """
    if not new_rate > 0:
        raise ValueError(f"new_rate must be > 0, got {new_rate}")
    span = traj.duration
    n = int(round(span * new_rate)) + 1
    if n < 2:
        raise ValueError(f"rate {new_rate} Hz leaves fewer than 2 frames over {span} s")
    if n == traj.n_frames:
        new_t = traj.t.copy()
    else:
        new_t = np.linspace(traj.t[0], traj.t[-1], n)
    cols = {}
    for a in ATTACHMENTS:
        arr = traj.attachment(a)
        cols[a] = np.column_stack([np.interp(new_t, traj.t, arr[:, k]) for k in range(3)])
    return GaitTrajectory(new_t, *(cols[a] for a in ATTACHMENTS), dict(traj.meta))
