"""Command-line interface.

Subcommands: params, geometry, sweep, dynamics, scenarios, verify-sw.
Every subcommand takes --config <path> plus targeted overrides; errors
leave as JSON lines on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import device as dev
from . import geometry as geo
from . import models as mdl
from . import schrieffer_wolff as sw
from .config import ConfigError, RunConfig, load_config
from .constants import TWO_PI
from .emit import emit_csv, emit_svg
from .models import GateKind
from .operators import SpaceLayout
from .sweep import (
    PAPER_OPTIMA,
    build_scenario,
    find_optimum,
    resolve_point,
    run_dynamics,
    run_scenarios,
    run_sweep,
)

__all__ = ["main"]


def _fail(kind: str, message: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    raise SystemExit(code)


def _load(args) -> RunConfig:
    extra = []
    if getattr(args, "gate", None):
        extra.append(f"gate = {args.gate}")
    extra.extend(getattr(args, "set", []) or [])
    try:
        return load_config(args.config, extra=extra)
    except FileNotFoundError as exc:
        _fail("config-not-found", str(exc), 2)
    except ConfigError as exc:
        _fail("config-error", str(exc), 2)


def _default_ratio(config: RunConfig, args) -> float:
    if getattr(args, "ratio", None) is not None:
        return args.ratio
    return PAPER_OPTIMA[config.gate]


def cmd_params(args):
    config = _load(args)
    ratio = _default_ratio(config, args)
    phys = resolve_point(config, ratio)
    scenario = build_scenario(config, ratio)
    rows = [
        ("gate", config.gate.value),
        ("omega_m / omega_ref", f"{ratio:g}"),
        ("omega_q1 / 2pi", f"{phys.omega_q1 / TWO_PI / 1e9:.4f} GHz"),
        ("omega_q2 / 2pi", f"{phys.omega_q2 / TWO_PI / 1e9:.4f} GHz"),
        ("omega_m / 2pi", f"{phys.omega_m / TWO_PI / 1e6:.4f} MHz"),
        ("H0", f"{phys.H0:.6g} A/m"),
        ("squeezing e^r", f"{phys.e_r:.4f}"),
        ("mu_zpf", f"{dev.mu_zpf(config.device.magnet):.4g} J/T"),
        ("J1 / 2pi", f"{phys.J1 / TWO_PI / 1e6:.4f} MHz"),
        ("J2 / 2pi", f"{phys.J2 / TWO_PI / 1e6:.4f} MHz"),
        ("g1 / 2pi", f"{phys.g1 / TWO_PI / 1e6:.4f} MHz"),
        ("g2 / 2pi", f"{phys.g2 / TWO_PI / 1e6:.4f} MHz"),
        ("g_tilde1 / 2pi", f"{phys.g_tilde1 / TWO_PI / 1e6:.4f} MHz"),
        ("effective coupling / 2pi", f"{scenario.coupling / TWO_PI / 1e6:.6f} MHz"),
        ("gate time", f"{scenario.T_gate * 1e6:.4f} us"),
        ("kappa / 2pi", f"{phys.kappa / TWO_PI / 1e6:.4f} MHz"),
        ("n_th", f"{phys.n_th:.6g}"),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")


def cmd_geometry(args):
    config = _load(args)
    magnet = config.device.magnet
    model = geo.model_for_magnet(magnet, variant=args.model)
    loop = geo.default_loop(magnet)
    ix = geo.geometrical_factor(model, loop, "x")
    iy = geo.geometrical_factor(model, loop, "y")
    ok, margin = geo.critical_field_check(model, magnet, args.critical_field)
    print(f"model                {args.model}")
    print(f"I_x                  {ix * 1e-6:.5f} /um")
    print(f"I_y                  {iy * 1e-6:.2e} /um")
    print(f"configured I_x       {magnet.I_x * 1e-6:.5f} /um")
    print(f"B_z(1.01 L_z)        {geo.stray_field_bz(model, magnet, 1.01 * magnet.L_z):.4f} T")
    print(f"critical field       {args.critical_field} T -> "
          f"{'ok' if ok else 'EXCEEDED'} (margin {margin:.3g})")


def cmd_sweep(args):
    config = _load(args)
    rows = run_sweep(config)
    csv_path = args.csv or config.csv_path
    svg_path = args.svg or config.svg_path
    if csv_path:
        emit_csv(rows, csv_path, timings=args.timings or config.timings)
        print(f"wrote {csv_path}")
    if svg_path:
        emit_svg(rows, svg_path, title=f"{config.gate.value} sweep")
        print(f"wrote {svg_path}")
    failed = [r for r in rows if r.error]
    best = find_optimum(rows)
    print(f"points: {len(rows)} ({len(failed)} failed)")
    print(f"optimum: ratio {best.omega_m_ratio:.4f}, "
          f"F = {best.avg_fidelity * 100:.3f}%, "
          f"T_gate = {best.T_gate_s * 1e6:.4f} us, "
          f"coupling/2pi = {best.coupling_Hz / 1e6:.4f} MHz")
    if not csv_path:
        names = ("ratio", "F", "T_gate_us")
        print(" ".join(f"{n:>12}" for n in names))
        for r in rows:
            if r.error:
                print(f"{r.omega_m_ratio:>12.5f} {'failed':>12} {r.error}")
            else:
                print(f"{r.omega_m_ratio:>12.5f} {r.avg_fidelity:>12.6f} "
                      f"{r.T_gate_s * 1e6:>12.5f}")


def cmd_dynamics(args):
    config = _load(args)
    ratio = _default_ratio(config, args)
    try:
        table = run_dynamics(config, args.state, ratio, n_times=args.points)
    except ValueError as exc:
        _fail("dynamics-error", str(exc), 2)
    names = [k for k in table if k not in ("T_gate_s",)]
    print(f"# T_gate = {table['T_gate_s'] * 1e6:.4f} us")
    print(",".join(names))
    for i in range(len(table["t"])):
        print(",".join(f"{table[name][i]:.8g}" for name in names))


def cmd_scenarios(args):
    config = _load(args)
    report = run_scenarios(config)
    print(f"sqrt-iSWAP Bell fidelity   {report['sqrt_iswap_bell_fidelity'] * 100:.3f}%")
    print(f"CZ vacuum (magnon dim 12)  {report['cz_vacuum_fidelity_dim12'] * 100:.3f}%")
    print(f"CZ thermal (n_th = 0.99)   {report['cz_thermal_fidelity'] * 100:.3f}%")
    dec = report["decoupling"]
    print(f"decoupling amplitudes      resonant {dec['amplitude_resonant']:.4f}, "
          f"detuned {dec['amplitude_detuned']:.4f}, ratio {dec['ratio']:.4f}")


def cmd_verify_sw(args):
    config = _load(args)
    ratio = _default_ratio(config, args)
    phys = resolve_point(config, ratio)
    layout = SpaceLayout((4, 4, args.dim_magnon), ("q1", "q2", "m"))
    e_c = TWO_PI * config.device.transmon1.E_C
    gs = sw.GeneratorSpec(layout=layout, omega_q1=phys.omega_q1, omega_q2=phys.omega_q2,
                          omega_m=phys.omega_m, E_C=e_c,
                          J1=phys.J1, J2=phys.J2,
                          g1=phys.g1 if phys.g1 else phys.g_tilde1 / 2.0,
                          g2=phys.g2)
    h_sw, pieces = sw.sw_hamiltonian(gs)
    closed = sw.closed_form_pieces(gs)
    p = sw.interior_projector(layout)
    print(f"{'check':<38}{'value':>14}")
    print(f"{'[S,H0]+H_int residual (interior)':<38}{sw.commutator_residual(gs):>14.3e}")
    for key in ("JJ", "Jg", "gJ", "gg"):
        den = np.linalg.norm(p @ closed[key] @ p)
        if den == 0:
            print(f"{'piece ' + key + ' (zero by regime)':<38}{0.0:>14.3e}")
            continue
        num = np.linalg.norm(p @ (pieces[key] - closed[key]) @ p)
        print(f"{'piece ' + key + ' vs closed form':<38}{num / den:>14.3e}")
    scenario = build_scenario(config, ratio)
    coupling = scenario.coupling
    if config.gate in (GateKind.ISWAP, GateKind.SQRT_ISWAP):
        got = sw.iswap_coupling(h_sw, layout).real
    elif config.gate is GateKind.CZ:
        got = -sw.cz_zz_coefficient(h_sw, layout).real
    else:
        # the SW oracle sees the rotating-frame substitutions directly
        gs = sw.GeneratorSpec(layout=layout,
                              omega_q1=phys.omega_q1 - phys.omega_ac,
                              omega_q2=phys.omega_q2 - phys.omega_ac,
                              omega_m=phys.omega_m - phys.omega_ac, E_C=e_c,
                              J2=phys.J2, g1=phys.g_tilde1 / 2.0)
        h_sw, _ = sw.sw_hamiltonian(gs)
        got = sw.icnot_coupling(h_sw, layout).real
    print(f"{'two-level coupling vs formula':<38}{abs(got - coupling) / abs(coupling):>14.3e}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="magnon-gates",
        description="Simulate magnon-mediated two-qubit gates between transmons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ratio=True):
        p.add_argument("--config", default=None, help="config file (flat key = value)")
        p.add_argument("--gate", choices=[k.value for k in GateKind], default=None)
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config entry (repeatable)")
        if ratio:
            p.add_argument("--ratio", type=float, default=None,
                           help="magnon frequency ratio (default: per-gate optimum)")

    p = sub.add_parser("params", help="print the derived parameter chain")
    common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("geometry", help="flux factor and stray-field check")
    common(p, ratio=False)
    p.add_argument("--model", choices=["point-dipole", "ellipsoid-surface-charge"],
                   default="ellipsoid-surface-charge")
    p.add_argument("--critical-field", type=float, default=10e-3,
                   help="superconducting critical field in T (default 10 mT)")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("sweep", help="fidelity vs magnon frequency")
    common(p, ratio=False)
    p.add_argument("--csv", default=None, help="write rows to this CSV file")
    p.add_argument("--svg", default=None, help="write a chart to this SVG file")
    p.add_argument("--timings", action="store_true", help="keep wall times in the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dynamics", help="occupation traces for one input state")
    common(p)
    p.add_argument("--state", default="10", help="input label, e.g. 10 or 1+")
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("scenarios", help="Bell, thermal-CZ and off-switch benchmarks")
    common(p, ratio=False)
    p.set_defaults(func=cmd_scenarios)

    p = sub.add_parser("verify-sw", help="Schrieffer-Wolff residual table")
    common(p)
    p.add_argument("--dim-magnon", type=int, default=6)
    p.set_defaults(func=cmd_verify_sw)

    args = parser.parse_args(argv)
    try:
        args.func(args)
    except SystemExit:
        raise
    except Exception as exc:
        _fail(type(exc).__name__, str(exc), 1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
