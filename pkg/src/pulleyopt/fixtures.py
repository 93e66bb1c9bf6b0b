"""Reference layouts, participant metadata and the standard synthetic gait."""

from __future__ import annotations

from .gait import GaitTrajectory, synthesize_gait
from .geometry import PARAM_NAMES, PulleyLayout

# Optimal layouts per training participant and the implemented ("Imp")
# layout, in metres, columns w1 h1 w2 h2 w3 h3 w4 h4.
OPTIMAL_LAYOUTS = {
    "A": (0.00, 0.50, 0.40, 0.10, 0.00, 0.74, 0.56, 0.10),
    "B": (0.00, 0.50, 0.40, 0.10, 0.00, 0.76, 0.40, 0.10),
    "C": (0.00, 0.57, 0.80, 0.10, 0.00, 0.69, 0.80, 0.10),
    "D": (0.00, 0.50, 0.74, 0.10, 0.00, 0.62, 0.40, 0.10),
    "E": (0.00, 0.56, 0.40, 0.10, 0.00, 0.78, 0.80, 0.10),
    "F": (0.00, 0.56, 0.40, 0.10, 0.00, 0.79, 0.55, 0.10),
}
IMP_PARAMS = (0.00, 0.50, 0.80, 0.13, 0.00, 0.50, 0.80, 0.13)

# Layout-optimisation training set: sex, age (yr), height (m), mass (kg).
TRAINING_PARTICIPANTS = {
    "A": ("F", 30, 1.55, 51.0),
    "B": ("M", 26, 1.73, 63.7),
    "C": ("M", 25, 1.76, 63.6),
    "D": ("F", 23, 1.71, 56.2),
    "E": ("M", 30, 1.87, 72.5),
    "F": ("M", 30, 1.81, 71.0),
}

# Feasibility study: sex, age (yr), height (m), mass (kg), speed (km/h).
# "T" is the physical therapist.
STUDY_PARTICIPANTS = {
    "1": ("F", 63, 1.60, 79, 3.0),
    "2": ("F", 23, 1.65, 70, 3.0),
    "3": ("M", 26, 1.85, 72, 2.5),
    "4": ("M", 61, 1.73, 79, 3.5),
    "5": ("M", 22, 1.86, 94, 3.5),
    "6": ("M", 24, 1.91, 86, 3.5),
    "7": ("F", 24, 1.67, 70, 3.0),
    "8": ("F", 60, 1.63, 71, 2.5),
    "T": ("M", 49, 1.81, 73, 3.0),
}

# Baseline medians from the feasibility study, used as synthetic ground truth.
BASELINE_STEP_LENGTH = 0.58
BASELINE_STEP_HEIGHT = 0.16
TREADMILL_SPEED = 1.0

STANDARD_GAIT = dict(
    speed=TREADMILL_SPEED,
    cadence=100.0,
    forward_excursion=BASELINE_STEP_LENGTH,
    lift_height=BASELINE_STEP_HEIGHT,
    attachment_height=0.10,
    duration=6.0,
    rate=100.0,
    phase_offset=0.5,
)


def imp_layout(x_off: float = 0.75) -> PulleyLayout:
    return PulleyLayout.from_params(IMP_PARAMS, x_off)


def imp_dict() -> dict:
    return dict(zip(PARAM_NAMES, IMP_PARAMS))


def standard_gait(**overrides) -> GaitTrajectory:
    """Five 1.2 s strides at 100 Hz with baseline step length and height."""
    return synthesize_gait(**{**STANDARD_GAIT, **overrides})
