"""JSON run configuration shared by the CLI subcommands."""

from __future__ import annotations

import inspect
import json
from dataclasses import dataclass, field
from pathlib import Path

from .gait import synthesize_gait
from .geometry import PARAM_NAMES, PulleyLayout, RoutingMode
from .optimizer import GaParams, ParameterBounds

SCHEMA_VERSION = 1
_SYNTH_KEYS = set(inspect.signature(synthesize_gait).parameters)
_KNOWN_KEYS = {
    "schema_version", "layout", "bounds", "x_off", "stiffness", "pretension", "routing",
    "trajectories", "synthetic", "ga", "seed", "out", "questionnaires",
}
_INSTRUMENTS = ("sus", "vanderlaan", "ueq")


class ConfigError(ValueError):
    """Invalid configuration; ``path`` is the dotted location of the problem."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _number(value, path, positive=False, non_negative=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(path, f"must be > 0, got {value}")
    if non_negative and not value >= 0:
        raise ConfigError(path, f"must be >= 0, got {value}")
    return float(value)


@dataclass
class RunConfig:
    layout: dict | None = None
    bounds: dict | None = None
    x_off: float = 0.75
    stiffness: float = 300.0
    pretension: float | list = 0.0
    routing: RoutingMode = RoutingMode.INDEPENDENT
    trajectories: list = field(default_factory=list)
    synthetic: list = field(default_factory=list)
    ga: dict = field(default_factory=dict)
    seed: int = 0
    out: str = "out"
    questionnaires: dict = field(default_factory=dict)
    base_dir: Path = field(default=Path("."), repr=False)

    @classmethod
    def from_dict(cls, d: dict, base_dir=".") -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config", "top level must be a JSON object")
        unknown = set(d) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"config.{sorted(unknown)[0]}", "unknown field")
        version = d.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError("config.schema_version", f"unsupported version {version!r}")
        cfg = cls(base_dir=Path(base_dir))

        if "layout" in d and "bounds" in d:
            raise ConfigError("config", "give either 'layout' or 'bounds', not both")
        if "x_off" in d:
            cfg.x_off = _number(d["x_off"], "config.x_off", positive=True)
        if "layout" in d:
            layout = d["layout"]
            if not isinstance(layout, dict):
                raise ConfigError("config.layout", "expected an object")
            missing = [n for n in PARAM_NAMES if n not in layout]
            if missing:
                raise ConfigError(f"config.layout.{missing[0]}", "missing")
            extra = set(layout) - set(PARAM_NAMES) - {"x_off"}
            if extra:
                raise ConfigError(f"config.layout.{sorted(extra)[0]}", "unknown field")
            values = {n: _number(layout[n], f"config.layout.{n}") for n in PARAM_NAMES}
            if "x_off" in layout:
                cfg.x_off = _number(layout["x_off"], "config.layout.x_off", positive=True)
            try:
                PulleyLayout(**values, x_off=cfg.x_off)
            except ValueError as exc:
                name = str(exc).split(" ")[0]
                raise ConfigError(f"config.layout.{name}", str(exc)) from None
            cfg.layout = values
        if "bounds" in d:
            bounds = d["bounds"]
            if not isinstance(bounds, dict):
                raise ConfigError("config.bounds", "expected an object")
            clean = {}
            for name, pair in bounds.items():
                p = f"config.bounds.{name}"
                if name not in PARAM_NAMES:
                    raise ConfigError(p, "unknown parameter")
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ConfigError(p, "expected [lower, upper]")
                clean[name] = [_number(pair[0], p + "[0]"), _number(pair[1], p + "[1]")]
            try:
                ParameterBounds.from_dict(clean)
            except ValueError as exc:
                name = str(exc).split(":")[0]
                raise ConfigError(f"config.bounds.{name}", str(exc)) from None
            cfg.bounds = clean
        if "stiffness" in d:
            cfg.stiffness = _number(d["stiffness"], "config.stiffness", non_negative=True)
        if "pretension" in d:
            pt = d["pretension"]
            if isinstance(pt, list):
                cfg.pretension = [_number(v, f"config.pretension[{i}]") for i, v in enumerate(pt)]
            else:
                cfg.pretension = _number(pt, "config.pretension")
        if "routing" in d:
            try:
                cfg.routing = RoutingMode(d["routing"])
            except ValueError:
                raise ConfigError("config.routing", f"expected one of "
                                  f"{[m.value for m in RoutingMode]}, got {d['routing']!r}") from None
        if "trajectories" in d:
            trajs = d["trajectories"]
            if not isinstance(trajs, list) or not all(isinstance(t, str) for t in trajs):
                raise ConfigError("config.trajectories", "expected a list of file paths")
            for i, t in enumerate(trajs):
                if not cfg.resolve(t).is_file():
                    raise ConfigError(f"config.trajectories[{i}]", f"file not found: {t}")
            cfg.trajectories = list(trajs)
        if "synthetic" in d:
            synth = d["synthetic"]
            synth = [synth] if isinstance(synth, dict) else synth
            if not isinstance(synth, list):
                raise ConfigError("config.synthetic", "expected an object or a list of objects")
            for i, s in enumerate(synth):
                if not isinstance(s, dict):
                    raise ConfigError(f"config.synthetic[{i}]", "expected an object")
                bad = set(s) - _SYNTH_KEYS
                if bad:
                    raise ConfigError(f"config.synthetic[{i}].{sorted(bad)[0]}", "unknown field")
                for k, v in s.items():
                    _number(v, f"config.synthetic[{i}].{k}")
            cfg.synthetic = synth
        if "ga" in d:
            if not isinstance(d["ga"], dict):
                raise ConfigError("config.ga", "expected an object")
            allowed = set(GaParams.__dataclass_fields__) - {"seed"}
            bad = set(d["ga"]) - allowed
            if bad:
                raise ConfigError(f"config.ga.{sorted(bad)[0]}", "unknown field")
            cfg.ga = dict(d["ga"])
        if "seed" in d:
            cfg.seed = d["seed"]
        cfg.set_seed(cfg.seed)
        try:
            cfg.ga_params()
        except (TypeError, ValueError) as exc:
            raise ConfigError("config.ga", str(exc)) from None
        if "out" in d:
            if not isinstance(d["out"], str):
                raise ConfigError("config.out", "expected a directory path")
            cfg.out = d["out"]
        if "questionnaires" in d:
            q = d["questionnaires"]
            if not isinstance(q, dict):
                raise ConfigError("config.questionnaires", "expected an object")
            for name, p in q.items():
                if name not in _INSTRUMENTS:
                    raise ConfigError(f"config.questionnaires.{name}", f"expected one of {_INSTRUMENTS}")
                if not isinstance(p, str) or not cfg.resolve(p).is_file():
                    raise ConfigError(f"config.questionnaires.{name}", f"file not found: {p}")
            cfg.questionnaires = dict(q)
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            d = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError("config", f"file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(d, base_dir=path.parent)

    def set_seed(self, seed) -> None:
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise ConfigError("config.seed", f"expected an unsigned 64-bit integer, got {seed!r}")
        self.seed = seed

    def resolve(self, p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p

    def layout_obj(self) -> PulleyLayout:
        return PulleyLayout(**self.layout, x_off=self.x_off)

    def bounds_obj(self) -> ParameterBounds:
        return ParameterBounds.from_dict(self.bounds or {})

    def ga_params(self) -> GaParams:
        return GaParams(**self.ga, seed=self.seed)

    def echo(self) -> dict:
        """Every setting that can influence results (no output dir, no threads)."""
        d = {
            "schema_version": SCHEMA_VERSION,
            "x_off": self.x_off,
            "stiffness": self.stiffness,
            "pretension": self.pretension,
            "routing": self.routing.value,
            "trajectories": list(self.trajectories),
            "synthetic": list(self.synthetic),
            "seed": self.seed,
        }
        if self.layout is not None:
            d["layout"] = dict(self.layout)
        if self.layout is None:
            d["bounds"] = self.bounds_obj().as_dict()
            d["ga"] = self.ga_params().as_dict()
        if self.questionnaires:
            d["questionnaires"] = dict(self.questionnaires)
        return d
