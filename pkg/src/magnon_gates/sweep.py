"""Pipeline orchestration: device chain -> model -> channel -> fidelity.

Each sweep point resolves the full chain at one magnon frequency ratio,
simulates the dissipative gate channel, and records the average gate
fidelity.  Points run independently (optionally on a thread pool) and
results keep input order; failures are recorded in-row and the sweep
continues.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import device as dev
from . import models as mdl
from .config import RunConfig
from .constants import TWO_PI
from .fidelity import average_gate_fidelity, tomography
from .lindblad import GateChannel, observable_trace
from .models import GateKind, GateScenario, ModelSpec
from .operators import SpaceLayout, fock_state

__all__ = ["SweepRow", "PointPhysics", "PAPER_OPTIMA", "PAPER_COUPLINGS",
           "direct_coupling_config", "resolve_point", "build_scenario", "run_point",
           "run_sweep", "find_optimum", "run_dynamics", "run_scenarios",
           "decoupling_check"]

# published working points: optimal frequency ratio and effective coupling
PAPER_OPTIMA = {GateKind.ISWAP: 0.94, GateKind.SQRT_ISWAP: 0.94,
                GateKind.CZ: 0.027, GateKind.ICNOT: 0.97}
PAPER_COUPLINGS = {GateKind.ISWAP: TWO_PI * 0.49e6,
                   GateKind.SQRT_ISWAP: TWO_PI * 0.49e6,
                   GateKind.CZ: TWO_PI * 2.1e6,
                   GateKind.ICNOT: TWO_PI * 46e3}


@dataclass(frozen=True)
class SweepRow:
    """One record of a frequency sweep."""

    omega_m_ratio: float
    omega_m_Hz: float
    e_r: float
    n_th: float
    kappa_Hz: float
    coupling_Hz: float
    T_gate_s: float
    avg_fidelity: float
    leakage: float
    wall_time_s: float
    error: str = ""

    @staticmethod
    def field_names() -> list[str]:
        return [f.name for f in fields(SweepRow)]


@dataclass(frozen=True)
class PointPhysics:
    """Resolved physical quantities at one sweep point (angular units)."""

    omega_q1: float
    omega_q2: float
    omega_m: float
    H0: float
    e_r: float
    J1: float
    J2: float
    g1: float
    g2: float
    g_tilde1: float
    omega_ac: float
    kappa: float
    n_th: float


def _magnet_with_override(config: RunConfig) -> dev.MagnetSpec:
    if config.overrides.I_x is None:
        return config.device.magnet
    return replace(config.device.magnet, I_x=config.overrides.I_x)


def reference_frequency(config: RunConfig) -> float:
    """Angular frequency the sweep ratio multiplies (omega_q2 for iCNOT)."""
    which = config.device.transmon2 if config.gate is GateKind.ICNOT else config.device.transmon1
    return TWO_PI * dev.qubit_frequency(which)


def resolve_point(config: RunConfig, ratio: float) -> PointPhysics:
    """Run the device chain at one magnon-frequency ratio."""
    magnet = _magnet_with_override(config)
    t1, t2 = config.device.transmon1, config.device.transmon2
    env = config.device.environment
    omega_q1 = TWO_PI * dev.qubit_frequency(t1)
    omega_q2 = TWO_PI * dev.qubit_frequency(t2)
    omega_m = ratio * reference_frequency(config)
    H0 = dev.field_for_frequency(omega_m, magnet)
    ov = config.overrides

    gate = config.gate
    J1 = J2 = g1 = g2 = g_tilde1 = 0.0
    omega_ac = 0.0
    if gate in (GateKind.ISWAP, GateKind.SQRT_ISWAP):
        J1 = ov.J1 if ov.J1 is not None else dev.coupling_J(t1, magnet, H0)
        J2 = ov.J2 if ov.J2 is not None else dev.coupling_J(t2, magnet, H0)
    elif gate is GateKind.CZ:
        g1 = ov.g1 if ov.g1 is not None else dev.coupling_g(t1, magnet, H0)
        g2 = ov.g2 if ov.g2 is not None else dev.coupling_g(t2, magnet, H0)
    elif gate is GateKind.ICNOT:
        J2 = ov.J2 if ov.J2 is not None else dev.coupling_J(t2, magnet, H0)
        g_tilde1 = ov.g_tilde1 if ov.g_tilde1 is not None else dev.coupling_g_tilde(t1, magnet, H0)
        omega_ac = omega_q2 + J2**2 / (omega_q2 - omega_m)
    return PointPhysics(
        omega_q1=omega_q1, omega_q2=omega_q2, omega_m=omega_m, H0=H0,
        e_r=dev.squeezing(H0, magnet), J1=J1, J2=J2, g1=g1, g2=g2,
        g_tilde1=g_tilde1, omega_ac=omega_ac,
        kappa=dev.linewidth(omega_m, env),
        n_th=dev.thermal_occupation(omega_m, env.temperature),
    )


def build_scenario(config: RunConfig, ratio: float) -> GateScenario:
    """Assemble the gate scenario at one sweep point."""
    phys = resolve_point(config, ratio)
    layout = SpaceLayout((config.dim_qubit, config.dim_qubit, config.dim_magnon),
                         ("q1", "q2", "m"))
    e_c = TWO_PI * config.device.transmon1.E_C
    gate = config.gate
    if gate in (GateKind.ISWAP, GateKind.SQRT_ISWAP):
        # the rotated-frame model assumes identical qubits
        omega_q = phys.omega_q1
        J = 0.5 * (phys.J1 + phys.J2)
        spec = ModelSpec(layout=layout, omega_q1=omega_q, omega_q2=omega_q,
                         omega_m=phys.omega_m, E_C=e_c, J1=J, J2=J)
    elif gate is GateKind.CZ:
        spec = ModelSpec(layout=layout, omega_q1=phys.omega_q1, omega_q2=phys.omega_q2,
                         omega_m=phys.omega_m, E_C=e_c, g1=phys.g1, g2=phys.g2)
    else:
        spec = ModelSpec(layout=layout, omega_q1=phys.omega_q1, omega_q2=phys.omega_q2,
                         omega_m=phys.omega_m, E_C=e_c, J2=phys.J2,
                         g_tilde1=phys.g_tilde1, omega_ac=phys.omega_ac)
    h_total = mdl.build_gate_hamiltonian(gate, spec)
    coupling = mdl.effective_coupling(gate, spec)
    t_gate = mdl.gate_time(gate, coupling)
    return GateScenario(
        kind=gate,
        model=spec,
        H_total=h_total,
        H_effective=mdl.effective_two_qubit_hamiltonian(gate, coupling),
        U_ideal=mdl.ideal_unitary(gate, np.sign(coupling)),
        T_gate=t_gate,
        coupling=coupling,
        dissipators=mdl.build_dissipators(spec, config.device.environment,
                                          phys.kappa, phys.n_th),
    )


def _channel_for(config: RunConfig, scenario: GateScenario) -> GateChannel:
    if config.magnon_init == "thermal":
        n_th = config.n_th_init
        if n_th is None:
            n_th = dev.thermal_occupation(scenario.model.omega_m,
                                          config.device.environment.temperature)
        return GateChannel(scenario, magnon_init="thermal", n_th=n_th)
    return GateChannel(scenario, magnon_init="vacuum")


def run_point(config: RunConfig, ratio: float) -> SweepRow:
    """Full pipeline at one ratio; failures land in the row's error field."""
    start = time.perf_counter()
    try:
        phys = resolve_point(config, ratio)
        scenario = build_scenario(config, ratio)
        channel = _channel_for(config, scenario)
        tomo = tomography(channel)
        fid = average_gate_fidelity(tomo, scenario.U_ideal)
        return SweepRow(
            omega_m_ratio=ratio,
            omega_m_Hz=phys.omega_m / TWO_PI,
            e_r=phys.e_r,
            n_th=phys.n_th,
            kappa_Hz=phys.kappa / TWO_PI,
            coupling_Hz=scenario.coupling / TWO_PI,
            T_gate_s=scenario.T_gate,
            avg_fidelity=fid,
            leakage=tomo.max_leakage,
            wall_time_s=time.perf_counter() - start,
        )
    except Exception as exc:  # recorded in-row; the sweep continues
        return SweepRow(
            omega_m_ratio=ratio, omega_m_Hz=float("nan"), e_r=float("nan"),
            n_th=float("nan"), kappa_Hz=float("nan"), coupling_Hz=float("nan"),
            T_gate_s=float("nan"), avg_fidelity=float("nan"), leakage=float("nan"),
            wall_time_s=time.perf_counter() - start,
            error=f"{type(exc).__name__}: {exc}",
        )


def run_sweep(config: RunConfig) -> list[SweepRow]:
    """One row per sweep ratio, in input order."""
    ratios = list(config.sweep_ratios)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(lambda r: run_point(config, r), ratios))
    return [run_point(config, r) for r in ratios]


def find_optimum(rows: list[SweepRow]) -> SweepRow:
    """Row with maximal fidelity; ties break toward larger magnon frequency."""
    if len(rows) < 3:
        raise ValueError(f"need at least 3 sweep rows, got {len(rows)}")
    good = [r for r in rows if not r.error and np.isfinite(r.avg_fidelity)]
    if not good:
        raise ValueError("all sweep points failed")
    return max(good, key=lambda r: (r.avg_fidelity, r.omega_m_ratio))


_STATE_KETS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "-": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
}


def _parse_state_label(label: str) -> np.ndarray:
    """Two-qubit product ket from a label like '10' or '1+' (or '|1+>')."""
    chars = label.strip().lstrip("|").rstrip(">").replace(" ", "")
    if len(chars) != 2 or any(c not in _STATE_KETS for c in chars):
        known = "".join(_STATE_KETS)
        raise ValueError(f"unknown state label {label!r}; use two of [{known}]")
    return np.kron(_STATE_KETS[chars[0]], _STATE_KETS[chars[1]])


def run_dynamics(config: RunConfig, state_label: str, ratio: float,
                 times=None, n_times: int = 101) -> dict:
    """Observable traces for one input state at one sweep ratio.

    Columns: t, transmon occupations, magnon occupation, and the target
    qubit's sigma_x expectation.
    """
    scenario = build_scenario(config, ratio)
    layout = scenario.model.layout
    d1, d2, dm = layout.dims
    if times is None:
        times = np.linspace(0.0, scenario.T_gate, n_times)
    psi_q = _parse_state_label(state_label)
    # embed the 2x2-level ket into the transmon levels, magnon from config
    psi_full = np.zeros(d1 * d2, dtype=complex)
    for n1 in (0, 1):
        for n2 in (0, 1):
            psi_full[n1 * d2 + n2] = psi_q[n1 * 2 + n2]
    rho_q = np.outer(psi_full, psi_full.conj())
    if config.magnon_init == "thermal":
        from .operators import thermal_state
        n_th = config.n_th_init
        if n_th is None:
            n_th = dev.thermal_occupation(scenario.model.omega_m,
                                          config.device.environment.temperature)
        rho_m = thermal_state(dm, n_th)
    else:
        ket0 = fock_state(dm, 0)
        rho_m = np.outer(ket0, ket0.conj())
    rho0 = np.kron(rho_q, rho_m)

    from .operators import annihilation, embed
    sx = np.zeros((d2, d2), dtype=complex)
    sx[0, 1] = sx[1, 0] = 1.0
    observables = {}
    for k, name in ((0, "n_q1"), (1, "n_q2"), (2, "n_m")):
        a = embed(annihilation(layout.dims[k]), k, layout)
        observables[name] = a.conj().T @ a
    observables["sigma_x_q2"] = embed(sx, 1, layout)
    table = observable_trace(scenario, rho0, times, observables)
    table["T_gate_s"] = scenario.T_gate
    return table


def _unitary_population_trace(h: np.ndarray, layout: SpaceLayout, psi0: np.ndarray,
                              times, op: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(h)
    coeff = vecs.conj().T @ psi0
    out = np.empty(len(times))
    for k, t in enumerate(times):
        psi_t = vecs @ (np.exp(-1j * evals * t) * coeff)
        out[k] = float(np.real(psi_t.conj() @ op @ psi_t))
    return out


def decoupling_check(config: RunConfig, ratio: float, phi_b_off: float = np.pi / 3.0,
                     n_times: int = 161) -> dict:
    """Swap-oscillation amplitude with one qubit flux-detuned vs resonant.

    Dissipation-free lab-frame evolution of |10>; occupations are
    invariant under the number-diagonal frame rotation, so the lab frame
    is exact for this check.  Returns the two amplitudes and their ratio.
    """
    scenario = build_scenario(config, ratio)
    spec = scenario.model
    layout = spec.layout
    d1, d2, dm = layout.dims
    phys = resolve_point(config, ratio)
    magnet = _magnet_with_override(config)

    spec_lab = replace(spec, J1=phys.J1, J2=phys.J2)
    detuned = mdl.detuned_variant(spec_lab, config.device.transmon1, magnet, phys.H0,
                                  phi_b=phi_b_off)

    psi0 = np.zeros(layout.total_dim, dtype=complex)
    psi0[(1 * d2 + 0) * dm] = 1.0  # |10, 0_m>
    from .operators import annihilation, embed
    a2 = embed(annihilation(d2), 1, layout)
    n2 = a2.conj().T @ a2
    window = np.linspace(scenario.T_gate, 2.0 * scenario.T_gate, n_times)

    amp = {}
    for name, model_spec in (("resonant", spec_lab), ("detuned", detuned)):
        h = mdl.build_H_tot(model_spec)
        trace = _unitary_population_trace(h, layout, psi0, window, n2)
        amp[name] = float(trace.max() - trace.min())
    return {
        "amplitude_resonant": amp["resonant"],
        "amplitude_detuned": amp["detuned"],
        "ratio": amp["detuned"] / amp["resonant"],
    }


def direct_coupling_config(gate, ratio: float | None = None,
                           coupling: float | None = None, **extra) -> RunConfig:
    """Config whose overrides pin the effective coupling to a target value.

    Defaults to the published coupling and optimal ratio for the gate.
    Inverts the effective-coupling formula for the microscopic J or g
    (the iCNOT keeps the derived J2 and solves for the drive coupling).
    """
    from .config import default_config

    gate = GateKind(gate) if isinstance(gate, str) else gate
    ratio = PAPER_OPTIMA[gate] if ratio is None else ratio
    coupling = PAPER_COUPLINGS[gate] if coupling is None else coupling
    base = default_config(gate, **extra)
    phys = resolve_point(base, ratio)
    if gate in (GateKind.ISWAP, GateKind.SQRT_ISWAP):
        j = float(np.sqrt(coupling * (phys.omega_q1 - phys.omega_m)))
        extra.update(overrides__J1=j, overrides__J2=j)
    elif gate is GateKind.CZ:
        g = float(np.sqrt(coupling * phys.omega_m / 2.0))
        extra.update(overrides__g1=g, overrides__g2=g)
    else:
        delta_m = phys.omega_m - phys.omega_ac
        bracket = 0.25 * phys.J2 * (1.0 / (phys.omega_q2 - phys.omega_m) - 1.0 / delta_m)
        extra.update(overrides__g_tilde1=float(coupling / bracket))
    return default_config(gate, sweep__ratios=[ratio], **extra)


def run_scenarios(config: RunConfig) -> dict:
    """The named benchmark scenarios: Bell preparation via sqrt-iSWAP,
    thermal-initial-state CZ (vs vacuum at the same truncation), and the
    flux-detuning off-switch.

    The CZ scenarios pin the effective coupling to its published value:
    at low magnon frequency the fidelity rides the phase of the
    parametric magnon oscillation (omega_m T_Z), so percent-level
    coupling changes move it by a couple of points, and only the pinned
    coupling reproduces the reference numbers.  The off-switch check
    runs the derived device chain.
    """
    from .config import default_config

    report: dict = {}

    row = run_point(direct_coupling_config(GateKind.SQRT_ISWAP), 0.94)
    if row.error:
        raise RuntimeError(f"sqrt-iSWAP scenario failed: {row.error}")
    report["sqrt_iswap_bell_fidelity"] = row.avg_fidelity

    cz_vac = direct_coupling_config(GateKind.CZ, dims__magnon=12)
    row_vac = run_point(cz_vac, 0.027)
    cz_th = direct_coupling_config(GateKind.CZ, dims__magnon=12,
                                   magnon_init__kind="thermal", magnon_init__n_th=0.99)
    row_th = run_point(cz_th, 0.027)
    for label, row_ in (("vacuum", row_vac), ("thermal", row_th)):
        if row_.error:
            raise RuntimeError(f"CZ {label} scenario failed: {row_.error}")
    report["cz_vacuum_fidelity_dim12"] = row_vac.avg_fidelity
    report["cz_thermal_fidelity"] = row_th.avg_fidelity
    report["cz_thermal_n_th_init"] = 0.99

    iswap_cfg = default_config(GateKind.ISWAP)
    report["decoupling"] = decoupling_check(iswap_cfg, 0.94)
    return report
