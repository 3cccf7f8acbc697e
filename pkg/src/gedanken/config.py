"""Run configuration: schema, defaults, strict parsing, and overrides.

Configs are plain JSON objects.  Parsing is strict — unknown keys are
rejected — and every module-level precondition that can be checked without
running the scenario is checked here, with the offending key in the message.
Flag overrides (``--set key.path=value``) are applied on top of the file
before validation, so a flag always wins.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import ConfigurationError
from .propagation import Aperture
from .state import Grid

SCHEMA_VERSION = 1

SCENARIOS = ("microscope", "single-slit", "double-slit", "von-neumann", "landau-peierls")


@dataclass(frozen=True)
class Option:
    """One leaf of the config schema: default value, type, optional choices."""

    default: Any
    kind: type
    choices: tuple | None = None
    allow_none: bool = False


def _grid_schema(x_min: float, x_max: float, n_points: int) -> dict:
    return {
        "x_min": Option(float(x_min), float),
        "x_max": Option(float(x_max), float),
        "n_points": Option(int(n_points), int),
    }


_PACKET_SCHEMA = {
    "x0": Option(0.0, float),
    "p0": Option(0.0, float),
    "sigma_x": Option(1.0, float),
}

_KERNEL_SCHEMA = {
    "kind": Option("gaussian", str, choices=("identity", "gaussian", "lens_aperture")),
    "s": Option(1.0, float),
    "lam": Option(0.5, float),
    "epsilon": Option(math.pi / 6.0, float),
}

_FLIGHT_SCHEMA = {
    "distance": Option(100.0, float),
    "mass": Option(1.0, float),
    "p0": Option(40.0 * math.pi, float),
}

_PROFILE_OPTION = Option("gaussian", str, choices=("gaussian", "hard"))

SCHEMAS: dict[str, dict] = {
    "microscope": {
        "grid": _grid_schema(-40.0, 40.0, 4096),
        "packet": dict(_PACKET_SCHEMA),
        "kernel": dict(_KERNEL_SCHEMA),
    },
    "single-slit": {
        "grid": _grid_schema(-40.0, 40.0, 2048),
        "packet": dict(_PACKET_SCHEMA),
        "aperture": {
            "center": Option(0.0, float),
            "width": Option(0.5, float),
        },
        "flight": dict(_FLIGHT_SCHEMA),
        "slit_profile": _PROFILE_OPTION,
    },
    "double-slit": {
        # fringe bookkeeping needs a wide far field, hence the larger default grid
        "grid": _grid_schema(-80.0, 80.0, 8192),
        "packet": dict(_PACKET_SCHEMA),
        "aperture": {
            "center": Option(0.0, float),
            "width": Option(0.1, float),
            "separation": Option(1.0, float),
        },
        "mode": Option("fixed", str, choices=("fixed", "recoiling", "photon")),
        "kernel": dict(_KERNEL_SCHEMA),
        "flight": dict(_FLIGHT_SCHEMA),
        "window_fraction": Option(0.2, float),
        "slit_profile": _PROFILE_OPTION,
    },
    "von-neumann": {
        "system": {
            "levels": Option(4, int),
            "coeffs": Option(None, list, allow_none=True),
            "eigenvalues": Option(None, list, allow_none=True),
            "seed": Option(7, int),
        },
    },
    "landau-peierls": {
        "scan": {
            "t": Option(1.0, float),
            "delta_e_max": Option(None, float, allow_none=True),
            "n_scan": Option(4001, int),
        },
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Validated scenario configuration with every default filled in."""

    scenario: str
    data: dict

    def __getitem__(self, key: str) -> Any:
        return self.data[key]

    def echo(self) -> dict:
        """Deep copy suitable for embedding in a report; parses back identically."""
        return copy.deepcopy(self.data)


def _coerce(path: str, value: Any, opt: Option) -> Any:
    if value is None:
        if opt.allow_none:
            return None
        raise ConfigurationError(f"{path}: null is not allowed")
    if opt.kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"{path}: expected a number, got {value!r}")
        value = float(value)
    elif opt.kind is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"{path}: expected an integer, got {value!r}")
        if isinstance(value, float):
            if not value.is_integer():
                raise ConfigurationError(f"{path}: expected an integer, got {value!r}")
            value = int(value)
    elif not isinstance(value, opt.kind):
        raise ConfigurationError(
            f"{path}: expected {opt.kind.__name__}, got {type(value).__name__}"
        )
    if opt.choices is not None and value not in opt.choices:
        raise ConfigurationError(
            f"{path}: {value!r} is not one of {', '.join(map(repr, opt.choices))}"
        )
    return value


def _fill(schema: Mapping, user: Mapping, prefix: str = "") -> dict:
    if not isinstance(user, Mapping):
        raise ConfigurationError(f"{prefix or 'config'}: expected an object")
    for key in user:
        if key not in schema:
            raise ConfigurationError(f"unknown key {prefix + str(key)!r}")
    out: dict = {}
    for key, node in schema.items():
        path = prefix + key
        if isinstance(node, Option):
            if key in user:
                out[key] = _coerce(path, user[key], node)
            else:
                out[key] = copy.deepcopy(node.default)
        else:
            out[key] = _fill(node, user.get(key, {}), path + ".")
    return out


def _set_nested(target: dict, dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    node = target
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigurationError(f"cannot override below non-object key {part!r}")
    node[parts[-1]] = value


def _apply_overrides(base: dict, overrides: Iterable[str]) -> dict:
    merged = copy.deepcopy(base)
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigurationError(f"override {item!r} has an empty key")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        _set_nested(merged, key, value)
    return merged


def _validate_grid(grid_cfg: dict) -> Grid:
    try:
        return Grid(grid_cfg["x_min"], grid_cfg["x_max"], grid_cfg["n_points"])
    except ConfigurationError as exc:
        raise ConfigurationError(f"grid: {exc}") from None


def _validate_packet(packet: dict, grid: Grid) -> None:
    sigma = packet["sigma_x"]
    if sigma < 4.0 * grid.dx:
        raise ConfigurationError(
            f"packet.sigma_x: {sigma} is below the resolvable minimum 4*dx = {4.0 * grid.dx:.6g}"
        )
    if sigma > grid.extent / 8.0:
        raise ConfigurationError(
            f"packet.sigma_x: {sigma} exceeds the containment maximum extent/8 = {grid.extent / 8.0:.6g}"
        )


def _validate_kernel(kernel: dict) -> None:
    kind = kernel["kind"]
    if kind == "gaussian" and kernel["s"] <= 0.0:
        raise ConfigurationError("kernel.s: gaussian kernel width must be positive")
    if kind == "lens_aperture":
        if kernel["lam"] <= 0.0:
            raise ConfigurationError("kernel.lam: wavelength must be positive")
        if not 0.0 < kernel["epsilon"] < math.pi / 2.0:
            raise ConfigurationError("kernel.epsilon: half-angle must lie in (0, pi/2)")


def _validate_aperture(ap_cfg: dict, grid: Grid, kind: str) -> None:
    try:
        ap = Aperture(kind, ap_cfg["center"], ap_cfg["width"], ap_cfg.get("separation"))
        ap.validate_on(grid)
    except ConfigurationError as exc:
        raise ConfigurationError(f"aperture: {exc}") from None


def _validate_flight(flight: dict) -> None:
    for key in ("distance", "mass", "p0"):
        if flight[key] <= 0.0:
            raise ConfigurationError(f"flight.{key}: must be positive")


def _validate(scenario: str, cfg: dict) -> None:
    if scenario in ("microscope", "single-slit", "double-slit"):
        grid = _validate_grid(cfg["grid"])
        _validate_packet(cfg["packet"], grid)
    if scenario == "microscope":
        _validate_kernel(cfg["kernel"])
    if scenario == "single-slit":
        _validate_aperture(cfg["aperture"], grid, "single")
        _validate_flight(cfg["flight"])
    if scenario == "double-slit":
        _validate_aperture(cfg["aperture"], grid, "double")
        _validate_kernel(cfg["kernel"])
        _validate_flight(cfg["flight"])
        if not 0.0 < cfg["window_fraction"] <= 1.0:
            raise ConfigurationError("window_fraction: must lie in (0, 1]")
    if scenario == "von-neumann":
        system = cfg["system"]
        if system["levels"] < 2:
            raise ConfigurationError("system.levels: need at least 2 levels")
        if system["coeffs"] is not None:
            if len(system["coeffs"]) != system["levels"]:
                raise ConfigurationError("system.coeffs: length must equal system.levels")
            for i, entry in enumerate(system["coeffs"]):
                if (
                    not isinstance(entry, list)
                    or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
                ):
                    raise ConfigurationError(
                        f"system.coeffs[{i}]: expected a [real, imaginary] pair"
                    )
        if system["eigenvalues"] is not None:
            if len(system["eigenvalues"]) != system["levels"]:
                raise ConfigurationError("system.eigenvalues: length must equal system.levels")
            for i, value in enumerate(system["eigenvalues"]):
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ConfigurationError(f"system.eigenvalues[{i}]: expected a number")
    if scenario == "landau-peierls":
        scan = cfg["scan"]
        if scan["t"] <= 0.0:
            raise ConfigurationError("scan.t: elapsed time must be positive")
        if scan["n_scan"] < 101:
            raise ConfigurationError("scan.n_scan: need at least 101 scan points")
        if scan["delta_e_max"] is not None and scan["delta_e_max"] <= 0.0:
            raise ConfigurationError("scan.delta_e_max: must be positive")


def _fill_derived(scenario: str, cfg: dict) -> None:
    if scenario == "landau-peierls" and cfg["scan"]["delta_e_max"] is None:
        # cover the first five transition-probability zeros with headroom
        cfg["scan"]["delta_e_max"] = 11.0 * math.pi / cfg["scan"]["t"]


def parse_config(
    scenario: str,
    path: str | Path | None = None,
    overrides: Iterable[str] = (),
    data: Mapping | None = None,
) -> RunConfig:
    """Load, override, and validate a scenario configuration.

    ``data`` may supply an in-memory config instead of ``path``; both may be
    omitted to run on the documented defaults.
    """
    if scenario not in SCHEMAS:
        raise ConfigurationError(
            f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}"
        )
    if path is not None and data is not None:
        raise ConfigurationError("pass either a config path or in-memory data, not both")
    base: Mapping
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
        try:
            base = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(
                f"config parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    else:
        base = data if data is not None else {}
    if not isinstance(base, Mapping):
        raise ConfigurationError("config root must be a JSON object")
    merged = _apply_overrides(dict(base), overrides)
    filled = _fill(SCHEMAS[scenario], merged)
    _fill_derived(scenario, filled)
    _validate(scenario, filled)
    return RunConfig(scenario, filled)
