"""Run configuration: flat key-path text format, defaults, validation.

Config files are lines of ``dotted.key.path = value`` (a TOML-compatible
subset): ``#`` starts a comment, values are numbers, booleans, quoted or
bare strings, or ``[v1, v2, ...]`` lists of numbers.  Unknown keys are
rejected with their path; parse errors carry the line number.  An empty
file yields the full default parameter set of the reference device, with
gate-specific working points (SQUID asymmetry, flux bias, Fock sizes)
filled in per gate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import device as dev
from .constants import MU0, TWO_PI
from .models import GateKind

__all__ = ["ConfigError", "Overrides", "RunConfig", "load_config", "parse_config_text",
           "default_config"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Overrides:
    """Direct coupling values (rad/s) bypassing the derived chain."""

    I_x: float | None = None
    J1: float | None = None
    J2: float | None = None
    g1: float | None = None
    g2: float | None = None
    g_tilde1: float | None = None


@dataclass(frozen=True)
class RunConfig:
    gate: GateKind
    device: dev.DeviceConfig
    dim_qubit: int
    dim_magnon: int
    sweep_ratios: tuple[float, ...]
    magnon_init: str               # "vacuum" | "thermal"
    n_th_init: float | None        # thermal init occupation; None = from formula
    overrides: Overrides
    csv_path: str | None
    svg_path: str | None
    timings: bool
    seed: int
    workers: int = 1


# reference device (sweep-figure caption parameter set)
_MAGNET_DEFAULTS = dict(
    L_x=16e-6,
    L_z=3.9e-6,
    d=3.9e-6 + 10e-9,
    R=25e-6,
    N_T=0.45,
    M_s=0.246 / MU0,
    rho_s=2.1e28,
    gamma0=TWO_PI * 28e9,
    I_x=-0.12e6,
)
_ENV_DEFAULTS = dict(
    temperature=0.01,
    T1=100e-6,
    T_phi=100e-6,
    alpha_G=1e-4,
    kappa_tilde=TWO_PI * 0.1e6,
)
_TRANSMON_BASE = dict(E_C=150e6, E_J_sigma=35e9)

# gate working points: (a_J, phi_b, phi_ac) per transmon
_GATE_TRANSMONS = {
    GateKind.ISWAP: (dict(a_J=0.9, phi_b=np.pi / 2, phi_ac=0.0),
                     dict(a_J=0.9, phi_b=np.pi / 2, phi_ac=0.0)),
    GateKind.SQRT_ISWAP: (dict(a_J=0.9, phi_b=np.pi / 2, phi_ac=0.0),
                          dict(a_J=0.9, phi_b=np.pi / 2, phi_ac=0.0)),
    GateKind.CZ: (dict(a_J=0.0, phi_b=np.pi / 4, phi_ac=0.0),
                  dict(a_J=0.0, phi_b=np.pi / 4, phi_ac=0.0)),
    GateKind.ICNOT: (dict(a_J=0.0, phi_b=0.0, phi_ac=np.pi / 10),
                     dict(a_J=0.9, phi_b=np.pi / 2, phi_ac=0.0)),
}


def _default_sweep(gate: GateKind) -> tuple[float, ...]:
    if gate is GateKind.CZ:
        return tuple(np.geomspace(0.005, 0.2, 60))
    return tuple(np.linspace(0.5, 0.995, 50))


def _default_dim_magnon(gate: GateKind, magnon_init: str) -> int:
    if gate is GateKind.CZ:
        return 12 if magnon_init == "thermal" else 6
    return 4


_FLOAT_KEYS = {
    "device.transmon1.E_C", "device.transmon1.E_J_sigma", "device.transmon1.a_J",
    "device.transmon1.phi_b", "device.transmon1.phi_ac",
    "device.transmon2.E_C", "device.transmon2.E_J_sigma", "device.transmon2.a_J",
    "device.transmon2.phi_b", "device.transmon2.phi_ac",
    "device.magnet.L_x", "device.magnet.L_z", "device.magnet.d", "device.magnet.R",
    "device.magnet.N_T", "device.magnet.M_s", "device.magnet.rho_s",
    "device.magnet.gamma0", "device.magnet.I_x",
    "device.environment.temperature", "device.environment.T1",
    "device.environment.T_phi", "device.environment.alpha_G",
    "device.environment.kappa_tilde",
    "magnon_init.n_th",
    "overrides.I_x", "overrides.J1", "overrides.J2", "overrides.g1", "overrides.g2",
    "overrides.g_tilde1",
    "sweep.start", "sweep.stop",
}
_INT_KEYS = {"dims.qubit", "dims.magnon", "sweep.points", "seed", "workers"}
_STR_KEYS = {"gate", "magnon_init.kind", "sweep.spacing", "output.csv", "output.svg"}
_BOOL_KEYS = {"output.timings"}
_LIST_KEYS = {"sweep.ratios"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _BOOL_KEYS | _LIST_KEYS

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")


def _parse_value(raw: str, lineno: int):
    raw = raw.strip()
    if raw.startswith("[") and raw.endswith("]"):
        inner = raw[1:-1].strip()
        if not inner:
            return []
        try:
            return [float(x) for x in inner.split(",")]
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse list {raw!r}") from None
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    if (raw.startswith('"') and raw.endswith('"')) or (raw.startswith("'") and raw.endswith("'")):
        return raw[1:-1]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw  # bare string


def parse_config_text(text: str) -> dict:
    """Parse the flat key-path format into a {key: value} dict."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"line {lineno}: malformed key {key!r}")
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(raw, lineno)
    return values


def _coerce(values: dict):
    for key, val in values.items():
        where = f"config field {key!r}"
        if key in _FLOAT_KEYS and not isinstance(val, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {val!r}")
        if key in _INT_KEYS and not isinstance(val, int):
            raise ConfigError(f"{where}: expected an integer, got {val!r}")
        if key in _BOOL_KEYS and not isinstance(val, bool):
            raise ConfigError(f"{where}: expected true/false, got {val!r}")
        if key in _LIST_KEYS and not isinstance(val, list):
            raise ConfigError(f"{where}: expected a list, got {val!r}")
        if key in _STR_KEYS and not isinstance(val, str):
            raise ConfigError(f"{where}: expected a string, got {val!r}")


def _build_config(values: dict) -> RunConfig:
    _coerce(values)
    gate_name = values.get("gate", "iswap")
    try:
        gate = GateKind(gate_name)
    except ValueError:
        names = ", ".join(k.value for k in GateKind)
        raise ConfigError(f"config field 'gate': unknown gate {gate_name!r} (one of {names})")

    def group(prefix: str, defaults: dict) -> dict:
        out = dict(defaults)
        for name in out:
            key = f"{prefix}.{name}"
            if key in values:
                out[name] = values[key]
        return out

    t1_defaults = {**_TRANSMON_BASE, **_GATE_TRANSMONS[gate][0]}
    t2_defaults = {**_TRANSMON_BASE, **_GATE_TRANSMONS[gate][1]}
    try:
        transmon1 = dev.TransmonDesign(**group("device.transmon1", t1_defaults))
        transmon2 = dev.TransmonDesign(**group("device.transmon2", t2_defaults))
        magnet = dev.MagnetSpec(**group("device.magnet", _MAGNET_DEFAULTS))
        environment = dev.Environment(**group("device.environment", _ENV_DEFAULTS))
    except ValueError as exc:
        raise ConfigError(f"config field 'device': {exc}") from exc
    device = dev.DeviceConfig(transmon1=transmon1, transmon2=transmon2,
                              magnet=magnet, environment=environment)

    magnon_init = values.get("magnon_init.kind", "vacuum")
    if magnon_init not in ("vacuum", "thermal"):
        raise ConfigError(
            f"config field 'magnon_init.kind': expected vacuum or thermal, got {magnon_init!r}"
        )

    if "sweep.ratios" in values:
        ratios = tuple(float(r) for r in values["sweep.ratios"])
    elif any(k in values for k in ("sweep.start", "sweep.stop", "sweep.points")):
        start = float(values.get("sweep.start", 0.5))
        stop = float(values.get("sweep.stop", 0.995))
        points = int(values.get("sweep.points", 50))
        spacing = values.get("sweep.spacing", "linear")
        if spacing == "linear":
            ratios = tuple(np.linspace(start, stop, points))
        elif spacing == "log":
            ratios = tuple(np.geomspace(start, stop, points))
        else:
            raise ConfigError(
                f"config field 'sweep.spacing': expected linear or log, got {spacing!r}"
            )
    else:
        ratios = _default_sweep(gate)
    if len(ratios) == 0:
        raise ConfigError("config field 'sweep.ratios': sweep must be nonempty")
    if any(r <= 0 or r >= 1.5 for r in ratios):
        raise ConfigError("config field 'sweep.ratios': ratios must lie in (0, 1.5)")

    dim_qubit = values.get("dims.qubit", 3)
    dim_magnon = values.get("dims.magnon", _default_dim_magnon(gate, magnon_init))
    if dim_qubit < 3:
        raise ConfigError("config field 'dims.qubit': transmons need at least 3 levels")
    if dim_magnon < 2:
        raise ConfigError("config field 'dims.magnon': magnon needs at least 2 levels")

    overrides = Overrides(
        I_x=values.get("overrides.I_x"),
        J1=values.get("overrides.J1"),
        J2=values.get("overrides.J2"),
        g1=values.get("overrides.g1"),
        g2=values.get("overrides.g2"),
        g_tilde1=values.get("overrides.g_tilde1"),
    )

    return RunConfig(
        gate=gate,
        device=device,
        dim_qubit=int(dim_qubit),
        dim_magnon=int(dim_magnon),
        sweep_ratios=ratios,
        magnon_init=magnon_init,
        n_th_init=values.get("magnon_init.n_th"),
        overrides=overrides,
        csv_path=values.get("output.csv"),
        svg_path=values.get("output.svg"),
        timings=bool(values.get("output.timings", False)),
        seed=int(values.get("seed", 12345)),
        workers=int(values.get("workers", 1)),
    )


def load_config(path: str | None = None, extra: list[str] | None = None) -> RunConfig:
    """Load a config file; ``extra`` lines (e.g. CLI --set) take precedence."""
    text = ""
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    values = parse_config_text(text)
    for line in extra or []:
        patch = parse_config_text(line)
        values.update(patch)
    return _build_config(values)


def default_config(gate: str | GateKind = GateKind.ISWAP, **set_values) -> RunConfig:
    """Programmatic config: defaults for a gate plus key-path overrides."""
    if isinstance(gate, str):
        try:
            gate = GateKind(gate)
        except ValueError:
            names = ", ".join(k.value for k in GateKind)
            raise ConfigError(
                f"config field 'gate': unknown gate {gate!r} (one of {names})"
            ) from None
    values: dict = {"gate": gate.value}
    for key, val in set_values.items():
        dotted = key.replace("__", ".")
        if dotted not in _ALL_KEYS:
            raise ConfigError(f"unknown key {dotted!r}")
        values[dotted] = val
    return _build_config(values)
