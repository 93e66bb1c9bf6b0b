"""Pulley layout, tendon routing and the elastic tendon force law.

Frame: origin at the belt centre on the walking surface, x forward,
y lateral (positive left), z up. Pulleys are ideal points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

PARAM_NAMES = ("w1", "h1", "w2", "h2", "w3", "h3", "w4", "h4")
DEFAULT_X_OFFSET = 0.75
DEFAULT_STIFFNESS = 300.0

# pulley name -> (front/back sign, width param, height param, side sign)
_PULLEY_SPEC = {
    "front_upper_left": (+1, "w1", "h1", +1),
    "front_upper_right": (+1, "w1", "h1", -1),
    "front_lower_left": (+1, "w2", "h2", +1),
    "front_lower_right": (+1, "w2", "h2", -1),
    "back_upper_left": (-1, "w3", "h3", +1),
    "back_upper_right": (-1, "w3", "h3", -1),
    "back_lower_left": (-1, "w4", "h4", +1),
    "back_lower_right": (-1, "w4", "h4", -1),
}
PULLEY_NAMES = tuple(_PULLEY_SPEC)

ATTACHMENTS = ("left_anterior", "left_posterior", "right_anterior", "right_posterior")


class SingularGeometryError(ValueError):
    """An attachment point coincides with the pulley it pulls towards."""

    def __init__(self, message, frame=None):
        self.frame = frame
        if frame is not None:
            message = f"frame {frame}: {message}"
        super().__init__(message)


def vec3(x, y, z) -> np.ndarray:
    v = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite coordinate in {v}")
    return v


@dataclass(frozen=True)
class PulleyLayout:
    """The eight placement parameters plus the fixed longitudinal offset.

    ``w*`` are the lateral distances between the two pulleys of a pair and
    ``h*`` their common height. Pairs 1/2 are front upper/lower, 3/4 are
    back upper/lower.
    """

    w1: float
    h1: float
    w2: float
    h2: float
    w3: float
    h3: float
    w4: float
    h4: float
    x_off: float = DEFAULT_X_OFFSET

    def __post_init__(self):
        for name in PARAM_NAMES + ("x_off",):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        for name in ("w1", "w2", "w3", "w4"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("h1", "h2", "h3", "h4"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.x_off <= 0:
            raise ValueError(f"x_off must be > 0, got {self.x_off}")

    @classmethod
    def from_params(cls, params: Sequence[float], x_off: float = DEFAULT_X_OFFSET) -> "PulleyLayout":
        """Build from a vector ordered as ``PARAM_NAMES`` (w1 h1 w2 h2 ...)."""
        params = [float(p) for p in params]
        if len(params) != 8:
            raise ValueError(f"expected 8 layout parameters, got {len(params)}")
        return cls(*params, x_off=float(x_off))

    @classmethod
    def from_coordinates(cls, coords: dict) -> "PulleyLayout":
        """Recover a layout from named pulley coordinates.

        Raises ``ValueError`` if the coordinates are not a valid layout
        (pairs at different heights, x planes not at +/- x_off, ...).
        """
        x_front = coords["front_upper_left"][0]
        values = {}
        for pair, (name_l, name_r) in {
            "1": ("front_upper_left", "front_upper_right"),
            "2": ("front_lower_left", "front_lower_right"),
            "3": ("back_upper_left", "back_upper_right"),
            "4": ("back_lower_left", "back_lower_right"),
        }.items():
            left, right = np.asarray(coords[name_l]), np.asarray(coords[name_r])
            if left[2] != right[2] or left[0] != right[0]:
                raise ValueError(f"pulley pair {pair} is not level")
            if left[1] != -right[1]:
                raise ValueError(f"pulley pair {pair} is not symmetric about y=0")
            values["w" + pair] = float(abs(left[1] - right[1]))
            values["h" + pair] = float(left[2])
            if abs(left[0]) != abs(x_front):
                raise ValueError(f"pulley pair {pair} is off the +/-x_off planes")
        return cls(**values, x_off=float(abs(x_front)))

    @property
    def params(self) -> tuple:
        return tuple(getattr(self, n) for n in PARAM_NAMES)

    def pulley(self, name: str) -> np.ndarray:
        sx, w, h, sy = _PULLEY_SPEC[name]
        return np.array([sx * self.x_off, sy * getattr(self, w) / 2.0, getattr(self, h)])

    def pulleys(self) -> dict:
        return {name: self.pulley(name) for name in PULLEY_NAMES}

    def coordinates(self) -> np.ndarray:
        """(8, 3) array in ``PULLEY_NAMES`` order."""
        return np.stack([self.pulley(n) for n in PULLEY_NAMES])

    def as_dict(self) -> dict:
        d = {n: getattr(self, n) for n in PARAM_NAMES}
        d["x_off"] = self.x_off
        return d


def build_layout(params: Sequence[float], x_off: float = DEFAULT_X_OFFSET) -> PulleyLayout:
    return PulleyLayout.from_params(params, x_off)


def mirror_layout(layout: PulleyLayout) -> PulleyLayout:
    """Reflect every pulley through the sagittal plane (y -> -y).

    Left and right pulleys swap roles, so the result is rebuilt from the
    reflected coordinates rather than copied.
    """
    coords = layout.pulleys()
    reflected = {}
    for name, p in coords.items():
        other = name.replace("left", "#").replace("right", "left").replace("#", "right")
        reflected[other] = p * np.array([1.0, -1.0, 1.0])
    return PulleyLayout.from_coordinates(reflected)


class RoutingMode(str, Enum):
    INDEPENDENT = "independent"
    COUPLED = "coupled"


@dataclass(frozen=True)
class TendonPath:
    """One elastic path: attachment, pulleys, and an optional far attachment.

    ``end`` is None when the tendon is anchored at its last pulley.
    """

    name: str
    group: str
    start: str
    pulleys: tuple
    end: str | None = None

    @property
    def legs(self) -> tuple:
        legs = (self.start.split("_")[0],)
        if self.end is not None:
            legs += (self.end.split("_")[0],)
        return legs


@dataclass(frozen=True)
class TendonRouting:
    mode: RoutingMode = RoutingMode.INDEPENDENT

    def __post_init__(self):
        object.__setattr__(self, "mode", RoutingMode(self.mode))

    @property
    def paths(self) -> tuple:
        if self.mode is RoutingMode.INDEPENDENT:
            return (
                TendonPath("anterior_left", "anterior", "left_anterior",
                           ("front_lower_left", "front_upper_left")),
                TendonPath("anterior_right", "anterior", "right_anterior",
                           ("front_lower_right", "front_upper_right")),
                TendonPath("posterior_left", "posterior", "left_posterior",
                           ("back_lower_left", "back_upper_left")),
                TendonPath("posterior_right", "posterior", "right_posterior",
                           ("back_lower_right", "back_upper_right")),
            )
        return (
            TendonPath("anterior", "anterior", "left_anterior",
                       ("front_lower_left", "front_upper_left",
                        "front_upper_right", "front_lower_right"),
                       "right_anterior"),
            TendonPath("posterior", "posterior", "left_posterior",
                       ("back_lower_left", "back_upper_left",
                        "back_upper_right", "back_lower_right"),
                       "right_posterior"),
        )

    @property
    def n_paths(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class ElasticTendon:
    """Linear spring that only pulls. ``pretension`` shortens the slack length."""

    stiffness: float = DEFAULT_STIFFNESS
    slack_length: float = 1.0
    pretension: float = 0.0

    def __post_init__(self):
        if not self.stiffness >= 0:
            raise ValueError(f"stiffness must be >= 0, got {self.stiffness}")
        if not self.slack_length > 0:
            raise ValueError(f"slack_length must be > 0, got {self.slack_length}")
        if not self.effective_slack > 0:
            raise ValueError(
                f"pretension {self.pretension} leaves no positive slack length "
                f"(slack_length {self.slack_length})"
            )

    @property
    def effective_slack(self) -> float:
        return self.slack_length - self.pretension


def path_length(points) -> float:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected a sequence of 3-D points, got shape {pts.shape}")
    if len(pts) < 2:
        raise ValueError("a path needs at least 2 points")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite point in path")
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def tendon_tension(length, tendon: ElasticTendon):
    """Tension in N; works elementwise on arrays of lengths."""
    elongation = np.maximum(0.0, np.asarray(length, dtype=float) - tendon.effective_slack)
    tension = tendon.stiffness * elongation
    return float(tension) if np.ndim(tension) == 0 else tension


def elastic_energy(length, tendon: ElasticTendon):
    elongation = np.maximum(0.0, np.asarray(length, dtype=float) - tendon.effective_slack)
    energy = 0.5 * tendon.stiffness * elongation**2
    return float(energy) if np.ndim(energy) == 0 else energy


def leg_force(attachment, first_pulley, tension: float) -> np.ndarray:
    """Force on the attachment: ``tension`` along the direction to the pulley."""
    if tension < 0:
        raise ValueError(f"tension must be >= 0, got {tension}")
    d = np.asarray(first_pulley, dtype=float) - np.asarray(attachment, dtype=float)
    dist = np.linalg.norm(d)
    if dist == 0.0:
        raise SingularGeometryError("attachment coincides with its first pulley")
    return tension * (d / dist)
