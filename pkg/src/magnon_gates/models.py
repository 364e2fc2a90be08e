"""Gate-specific Hamiltonians, effective couplings, gate times, targets.

All frequencies entering Hamiltonians are angular (rad/s) with hbar set
to 1, so matrix entries are rates.  The simulated Hamiltonians are the
rotated-frame forms in which single-qubit rotations are already
cancelled; the lab-frame rotation itself is diagonal in the number basis
and never applied numerically.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import device as dev
from .constants import TWO_PI
from .operators import SpaceLayout, annihilation, embed, is_hermitian

__all__ = [
    "GateKind",
    "ModelSpec",
    "GateScenario",
    "build_H_tot",
    "build_H_tot_iswap",
    "build_H_tot_cz",
    "build_H_tot_icnot",
    "build_gate_hamiltonian",
    "icnot_drive_frequency",
    "effective_coupling",
    "effective_two_qubit_hamiltonian",
    "gate_time",
    "ideal_unitary",
    "build_dissipators",
    "detuned_variant",
]


class GateKind(Enum):
    ISWAP = "iswap"
    SQRT_ISWAP = "sqrt-iswap"
    CZ = "cz"
    ICNOT = "icnot"


# dispersive-validity thresholds: hard failure above FAIL, warning above WARN
REGIME_FAIL = 0.3
REGIME_WARN = 0.15


@dataclass(frozen=True)
class ModelSpec:
    """Frequencies and couplings of the two-transmon + magnon model (rad/s)."""

    layout: SpaceLayout
    omega_q1: float
    omega_q2: float
    omega_m: float
    E_C: float                 # anharmonicity energy as angular frequency
    J1: float = 0.0
    J2: float = 0.0
    g1: float = 0.0
    g2: float = 0.0
    g_tilde1: float = 0.0
    omega_ac: float = 0.0      # iCNOT drive frequency

    def operators(self):
        """Embedded (c1, c2, m) lowering operators."""
        d1, d2, dm = self.layout.dims
        c1 = embed(annihilation(d1), 0, self.layout)
        c2 = embed(annihilation(d2), 1, self.layout)
        m = embed(annihilation(dm), 2, self.layout)
        return c1, c2, m


@dataclass(frozen=True)
class GateScenario:
    """A fully resolved simulation: Hamiltonians, target, time, dissipators."""

    kind: GateKind
    model: ModelSpec
    H_total: np.ndarray
    H_effective: np.ndarray
    U_ideal: np.ndarray
    T_gate: float
    coupling: float                       # effective two-qubit rate, rad/s
    dissipators: tuple[np.ndarray, ...]   # rates absorbed, units sqrt(1/s)

    def __post_init__(self):
        if not is_hermitian(self.H_total, 1e-12):
            raise ValueError("H_total must be Hermitian")
        if not is_hermitian(self.H_effective, 1e-12):
            raise ValueError("H_effective must be Hermitian")
        u = self.U_ideal
        if np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() > 1e-12:
            raise ValueError("U_ideal must be unitary")


def _check_regime(value: float, limit: float, what: str):
    ratio = abs(value / limit)
    if ratio > REGIME_FAIL:
        raise ValueError(f"{what} violated: ratio {ratio:.3f} > {REGIME_FAIL}")
    if ratio > REGIME_WARN:
        warnings.warn(f"{what} marginal: ratio {ratio:.3f} > {REGIME_WARN}", stacklevel=3)


def build_H_tot(spec: ModelSpec) -> np.ndarray:
    """Lab-frame total Hamiltonian: magnon + transmons + J and g couplings."""
    c1, c2, m = spec.operators()
    n1, n2 = c1.conj().T @ c1, c2.conj().T @ c2
    h = spec.omega_m * (m.conj().T @ m)
    for (cc, nn, j, g, wq) in ((c1, n1, spec.J1, spec.g1, spec.omega_q1),
                               (c2, n2, spec.J2, spec.g2, spec.omega_q2)):
        h = h + wq * nn - 0.5 * spec.E_C * (cc.conj().T @ cc.conj().T @ cc @ cc)
        h = h + j * (cc.conj().T @ m + cc @ m.conj().T)
        h = h + g * nn @ (m.conj().T + m)
    return h


def build_H_tot_iswap(spec: ModelSpec) -> np.ndarray:
    """Rotated-frame iSWAP Hamiltonian (identical qubits, g = 0).

    Equals the lab-frame Hamiltonian shifted by
    (omega_q + J^2/(omega_q - omega_m)) times the total excitation number.
    """
    if spec.g1 != 0 or spec.g2 != 0:
        raise ValueError("iSWAP regime requires g1 = g2 = 0")
    if spec.omega_q1 != spec.omega_q2 or spec.J1 != spec.J2:
        raise ValueError("iSWAP model assumes identical qubits (omega_q, J)")
    delta = spec.omega_q1 - spec.omega_m
    _check_regime(spec.J1, delta, "iSWAP dispersive regime J << omega_q - omega_m")
    c1, c2, m = spec.operators()
    n1, n2, nm = c1.conj().T @ c1, c2.conj().T @ c2, m.conj().T @ m
    stark = spec.J1**2 / delta
    h = (spec.omega_m - spec.omega_q1 - stark) * nm
    for cc, nn in ((c1, n1), (c2, n2)):
        h = h - stark * nn - 0.5 * spec.E_C * (cc.conj().T @ cc.conj().T @ cc @ cc)
        h = h + spec.J1 * (cc.conj().T @ m + cc @ m.conj().T)
    return h


def build_H_tot_cz(spec: ModelSpec) -> np.ndarray:
    """Rotated-frame CZ Hamiltonian (J = 0, radiation-pressure coupling)."""
    if spec.J1 != 0 or spec.J2 != 0:
        raise ValueError("CZ regime requires J1 = J2 = 0")
    for g in (spec.g1, spec.g2):
        _check_regime(g, spec.omega_m, "CZ regime g << omega_m")
    c1, c2, m = spec.operators()
    h = spec.omega_m * (m.conj().T @ m)
    x_m = m.conj().T + m
    for cc, g in ((c1, spec.g1), (c2, spec.g2)):
        nn = cc.conj().T @ cc
        h = h + (g**2 / spec.omega_m) * nn
        h = h - 0.5 * spec.E_C * (cc.conj().T @ cc.conj().T @ cc @ cc)
        h = h + g * nn @ x_m
    return h


def icnot_drive_frequency(spec: ModelSpec) -> float:
    """Drive frequency matching the Stark-shifted target qubit:
    omega_ac = omega_q2 + J2^2 / (omega_q2 - omega_m)."""
    return spec.omega_q2 + spec.J2**2 / (spec.omega_q2 - spec.omega_m)


def build_H_tot_icnot(spec: ModelSpec) -> np.ndarray:
    """Rotated-frame iCNOT Hamiltonian (drive on qubit 1, exchange on 2)."""
    if spec.J1 != 0 or spec.g2 != 0:
        raise ValueError("iCNOT regime requires J1 = g2 = 0")
    if spec.omega_ac <= 0:
        raise ValueError("iCNOT model needs the drive frequency omega_ac")
    delta_m = spec.omega_m - spec.omega_ac
    delta_q2 = spec.omega_q2 - spec.omega_ac
    _check_regime(spec.J2, spec.omega_q2 - spec.omega_m,
                  "iCNOT dispersive regime J2 << omega_q2 - omega_m")
    _check_regime(spec.g_tilde1, 2.0 * delta_m, "iCNOT regime g_tilde1 << 2 delta_m")
    _check_regime(spec.g_tilde1, 4.0 * spec.omega_ac, "iCNOT RWA g_tilde1 << 4 omega_ac")
    c1, c2, m = spec.operators()
    n1, n2, nm = c1.conj().T @ c1, c2.conj().T @ c2, m.conj().T @ m
    h = delta_m * nm
    h = h + (spec.g_tilde1**2 / (4.0 * delta_m)) * n1
    h = h + delta_q2 * n2
    for cc in (c1, c2):
        h = h - 0.5 * spec.E_C * (cc.conj().T @ cc.conj().T @ cc @ cc)
    h = h + 0.5 * spec.g_tilde1 * n1 @ (m.conj().T + m)
    h = h + spec.J2 * (c2.conj().T @ m + c2 @ m.conj().T)
    return h


_BUILDERS = {
    GateKind.ISWAP: build_H_tot_iswap,
    GateKind.SQRT_ISWAP: build_H_tot_iswap,
    GateKind.CZ: build_H_tot_cz,
    GateKind.ICNOT: build_H_tot_icnot,
}


def build_gate_hamiltonian(kind: GateKind, spec: ModelSpec) -> np.ndarray:
    return _BUILDERS[kind](spec)


def effective_coupling(kind: GateKind, spec: ModelSpec) -> float:
    """Second-order qubit-qubit coupling rate for the given gate, rad/s."""
    if kind in (GateKind.ISWAP, GateKind.SQRT_ISWAP):
        d1 = spec.omega_q1 - spec.omega_m
        d2 = spec.omega_q2 - spec.omega_m
        if d1 == 0 or d2 == 0:
            raise ZeroDivisionError("qubit-magnon detuning vanishes")
        return 0.5 * spec.J1 * spec.J2 * (1.0 / d1 + 1.0 / d2)
    if kind is GateKind.CZ:
        if spec.omega_m == 0:
            raise ZeroDivisionError("magnon frequency vanishes")
        return 2.0 * spec.g1 * spec.g2 / spec.omega_m
    if kind is GateKind.ICNOT:
        delta_m = spec.omega_m - spec.omega_ac
        delta_q2 = spec.omega_q2 - spec.omega_ac
        if delta_m == 0 or delta_q2 == delta_m:
            raise ZeroDivisionError("iCNOT detuning vanishes")
        return 0.25 * spec.g_tilde1 * spec.J2 * (1.0 / (delta_q2 - delta_m) - 1.0 / delta_m)
    raise ValueError(f"unknown gate kind {kind}")


def gate_time(kind: GateKind, coupling: float) -> float:
    """Gate duration from the effective coupling rate."""
    if coupling == 0:
        raise ZeroDivisionError("effective coupling vanishes; no finite gate time")
    c = abs(coupling)
    if kind is GateKind.ISWAP:
        return np.pi / (2.0 * c)
    if kind is GateKind.SQRT_ISWAP:
        return np.pi / (4.0 * c)
    if kind is GateKind.CZ:
        return np.pi / c
    if kind is GateKind.ICNOT:
        return np.pi / (2.0 * c)
    raise ValueError(f"unknown gate kind {kind}")


def effective_two_qubit_hamiltonian(kind: GateKind, coupling: float) -> np.ndarray:
    """4x4 effective Hamiltonian (single-qubit rotations cancelled).

    Generates the ideal gate: matrix_exp(-1j * H * gate_time) equals
    ideal_unitary for every kind.  Basis |q1 q2>; the longitudinal terms
    use the excited-state projector convention.
    """
    h = np.zeros((4, 4), dtype=complex)
    if kind in (GateKind.ISWAP, GateKind.SQRT_ISWAP):
        h[1, 2] = h[2, 1] = coupling          # sigma1+ sigma2- + h.c.
    elif kind is GateKind.CZ:
        h[3, 3] = -coupling                   # -g_Z n1 n2
    elif kind is GateKind.ICNOT:
        h[2, 3] = h[3, 2] = coupling          # n1 (sigma2+ + sigma2-)
    else:
        raise ValueError(f"unknown gate kind {kind}")
    return h


def ideal_unitary(kind: GateKind, sign: float = 1.0) -> np.ndarray:
    """Target 4x4 unitary in the |q1 q2> computational basis.

    The phase branch (-i for positive coupling, +i for negative) follows
    the sign of the effective coupling.
    """
    ph = -1j if sign >= 0 else 1j
    u = np.eye(4, dtype=complex)
    if kind is GateKind.ISWAP:
        u[1, 1] = u[2, 2] = 0.0
        u[1, 2] = u[2, 1] = ph
    elif kind is GateKind.SQRT_ISWAP:
        u[1, 1] = u[2, 2] = 1.0 / np.sqrt(2.0)
        u[1, 2] = u[2, 1] = ph / np.sqrt(2.0)
    elif kind is GateKind.CZ:
        u[3, 3] = -1.0
    elif kind is GateKind.ICNOT:
        u[2, 2] = u[3, 3] = 0.0
        u[2, 3] = u[3, 2] = ph
    else:
        raise ValueError(f"unknown gate kind {kind}")
    return u


def build_dissipators(spec: ModelSpec, env: dev.Environment, kappa: float,
                      n_th: float) -> tuple[np.ndarray, ...]:
    """Six Lindblad operators with rates absorbed (units sqrt(1/s)).

    Magnon decay and thermal pumping, transmon decay, and transmon pure
    dephasing on both qubits.
    """
    if kappa < 0 or n_th < 0:
        raise ValueError("rates must be nonnegative")
    c1, c2, m = spec.operators()
    return (
        np.sqrt(kappa * (1.0 + n_th)) * m,
        np.sqrt(kappa * n_th) * m.conj().T,
        np.sqrt(1.0 / env.T1) * c1,
        np.sqrt(1.0 / env.T1) * c2,
        np.sqrt(1.0 / env.T_phi) * (c1.conj().T @ c1),
        np.sqrt(1.0 / env.T_phi) * (c2.conj().T @ c2),
    )


def detuned_variant(spec: ModelSpec, design1: dev.TransmonDesign,
                    magnet: dev.MagnetSpec, H0: float,
                    phi_b: float = np.pi / 3.0) -> ModelSpec:
    """Qubit-1 flux moved to switch the iSWAP interaction off.

    Recomputes omega_q1, J1 and g1 through the device chain at the new
    reduced flux; everything else is kept.  At phi_b = pi/3 the g
    coupling reawakens (sin(2 phi_b) != 0), so the returned spec is only
    suitable for the general lab-frame builder.
    """
    moved = dev.TransmonDesign(E_C=design1.E_C, E_J_sigma=design1.E_J_sigma,
                               a_J=design1.a_J, phi_b=phi_b, phi_ac=design1.phi_ac)
    return ModelSpec(
        layout=spec.layout,
        omega_q1=TWO_PI * dev.qubit_frequency(moved),
        omega_q2=spec.omega_q2,
        omega_m=spec.omega_m,
        E_C=spec.E_C,
        J1=dev.coupling_J(moved, magnet, H0),
        J2=spec.J2,
        g1=dev.coupling_g(moved, magnet, H0),
        g2=spec.g2,
        g_tilde1=spec.g_tilde1,
        omega_ac=spec.omega_ac,
    )
