"""JSON experiment configs and group specs.

A group spec is a preset name, a path to a presentation JSON file, or an
inline mapping ``{"preset": ...}`` / ``{"presentation": path-or-dict}``.
Config names without a path resolve to the bundled ``configs/`` directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .floyd import FloydFunction, make_floyd_function
from .groups import PRESETS, GroupBackend, Presentation, PresentationError, load_presentation, preset
from .quotient import Epimorphism, EpimorphismError
from .tightness import TightnessConfig

__all__ = ["ConfigError", "ExperimentConfig", "resolve_group", "load_config", "bundled_configs"]


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


_KNOWN = {
    "name", "description", "source", "target", "gen_map", "h", "rep_radius", "k_max", "n_schedule",
    "L", "s_grid", "growth_radius_source", "growth_radius_target", "seed", "assume_infinite_kernel",
    "max_words", "floyd", "out",
}


def _bundled_dir(sub: str) -> Path:
    return Path(str(resources.files("floydtight") / sub))


def bundled_configs() -> list[str]:
    return sorted(p.stem for p in _bundled_dir("configs").glob("*.json"))


def resolve_group(spec: str | Mapping[str, Any], base: Path | None = None) -> GroupBackend:
    """Turn a group spec into a backend; raises ConfigError on anything unusable."""
    try:
        if isinstance(spec, Mapping):
            if "preset" in spec:
                return preset(spec["preset"])
            if "presentation" in spec:
                p = spec["presentation"]
                if isinstance(p, Mapping):
                    return load_presentation(Presentation.from_dict(p))
                return _group_from_file(Path(p), base)
            # a bare presentation mapping
            return load_presentation(Presentation.from_dict(spec))
        if isinstance(spec, str):
            if spec.lower() in PRESETS:
                return preset(spec)
            bundled = _bundled_dir("presentations") / f"{spec}.json"
            if bundled.exists():
                return _group_from_file(bundled, None)
            return _group_from_file(Path(spec), base)
    except (PresentationError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad group spec {spec!r}: {exc}") from exc
    raise ConfigError(f"bad group spec {spec!r}")


def _group_from_file(path: Path, base: Path | None) -> GroupBackend:
    if not path.is_absolute() and base is not None and not path.exists():
        path = base / path
    if not path.exists():
        raise ConfigError(f"group file {str(path)!r} does not exist")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return load_presentation(Presentation.from_dict(data, name=path.stem))


@dataclass
class ExperimentConfig:
    """Parsed experiment config; ``raw`` keeps the JSON it came from."""

    name: str
    pi: Epimorphism
    h: str
    rep_radius: int = 8
    k_max: int = 3
    n_schedule: tuple[int, ...] = (1, 2, 4, 8)
    L: float | None = None
    s_grid: tuple[float, ...] = (0.1, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5)
    growth_radius_source: int = 12
    growth_radius_target: int = 40
    seed: int = 0
    assume_infinite_kernel: bool = False
    max_words: int = 4_000_000
    floyd: FloydFunction | None = None
    out: str | None = None
    raw: dict = field(default_factory=dict, repr=False)

    def tightness(self, workers: int = 1, seed: int | None = None) -> TightnessConfig:
        return TightnessConfig(
            pi=self.pi,
            h=self.h,
            rep_radius=self.rep_radius,
            k_max=self.k_max,
            n_schedule=self.n_schedule,
            L=self.L,
            s_grid=self.s_grid,
            growth_radius_source=self.growth_radius_source,
            growth_radius_target=self.growth_radius_target,
            assume_infinite_kernel=self.assume_infinite_kernel,
            max_words=self.max_words,
            seed=self.seed if seed is None else seed,
            workers=workers,
            name=self.name,
        )


def _positive_int(data: Mapping, key: str, default: int) -> int:
    v = data.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise ConfigError(f"{key} must be a positive integer, got {v!r}")
    return v


def _locate(name_or_path: str | Path) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    bundled = _bundled_dir("configs") / f"{name_or_path}.json"
    if bundled.exists():
        return bundled
    raise ConfigError(f"config {str(name_or_path)!r} not found (bundled: {', '.join(bundled_configs())})")


def load_config(name_or_path: str | Path | Mapping) -> ExperimentConfig:
    if isinstance(name_or_path, Mapping):
        data, base, default_name = dict(name_or_path), None, "experiment"
    else:
        path = _locate(name_or_path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        base, default_name = path.parent, path.stem
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)!r}")
    for key in ("source", "target", "gen_map", "h"):
        if key not in data:
            raise ConfigError(f"config is missing {key!r}")
    source = resolve_group(data["source"], base)
    target = resolve_group(data["target"], base)
    if not isinstance(data["gen_map"], Mapping):
        raise ConfigError("gen_map must be an object letter -> letter")
    try:
        pi = Epimorphism(source, target, dict(data["gen_map"]))
    except (EpimorphismError, ValueError) as exc:
        raise ConfigError(f"bad epimorphism: {exc}") from exc
    h = data["h"]
    if not isinstance(h, str):
        raise ConfigError("h must be a word")
    try:
        source.alphabet.check(h)
    except ValueError as exc:
        raise ConfigError(f"h: {exc}") from exc
    n_schedule = tuple(data.get("n_schedule", (1, 2, 4, 8)))
    if not n_schedule or any(not isinstance(n, int) or n < 1 for n in n_schedule):
        raise ConfigError(f"n_schedule must be positive integers, got {n_schedule!r}")
    s_grid = tuple(float(s) for s in data.get("s_grid", (0.1, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5)))
    if any(not s > 0 for s in s_grid):
        raise ConfigError("s_grid values must be positive")
    L = data.get("L")
    if L is not None and (not isinstance(L, (int, float)) or L < 0):
        raise ConfigError(f"L must be a non-negative number, got {L!r}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    floyd = None
    if "floyd" in data:
        fs = data["floyd"]
        try:
            floyd = make_floyd_function(fs["kind"], fs.get("params", ()), fs.get("probe_N", 100))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad floyd spec: {exc}") from exc
    return ExperimentConfig(
        name=data.get("name", default_name),
        pi=pi,
        h=h,
        rep_radius=_positive_int(data, "rep_radius", 8),
        k_max=_positive_int(data, "k_max", 3),
        n_schedule=n_schedule,
        L=L,
        s_grid=s_grid,
        growth_radius_source=_positive_int(data, "growth_radius_source", 12),
        growth_radius_target=_positive_int(data, "growth_radius_target", 40),
        seed=seed,
        assume_infinite_kernel=bool(data.get("assume_infinite_kernel", False)),
        max_words=_positive_int(data, "max_words", 4_000_000),
        floyd=floyd,
        out=data.get("out"),
        raw=data,
    )
