"""Average gate fidelity of a two-qubit channel against a target unitary.

The channel is probed on the 16 product states built from
{|0>, |1>, |+>, |i->} per qubit; by linearity these reconstruct the
channel on the full Pauli basis, and the fidelity follows from

    F = (sum_j tr[U_j^dag U^dag E[U_j] U] + d^2) / (d^2 (d + 1)),  d = 4,

with U_j ranging over the two-qubit Pauli products.  Channel outputs are
never renormalized: leakage out of the computational block enters the
fidelity as infidelity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "INPUT_LABELS",
    "PAULI",
    "ChannelTomography",
    "tomography",
    "channel_on_pauli",
    "average_gate_fidelity",
    "unitary_channel_fidelity",
    "haar_mc_fidelity",
    "choi_matrix",
]

_KETS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
    "i-": np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
}
INPUT_LABELS = ("0", "1", "+", "i-")

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_LABELS = ("I", "X", "Y", "Z")

# Pauli matrices as combinations of the four input projectors, in the order
# (rho_0, rho_1, rho_+, rho_i-).  The Y row sign is calibrated so that the
# identity channel reproduces PAULI["Y"] exactly: with |i-> = (|0> - i|1>)/sqrt2
# one has 2 rho_i- - rho_0 - rho_1 = -sigma_y, hence the overall minus.
_PAULI_IN_STATES = {
    "I": np.array([1.0, 1.0, 0.0, 0.0]),
    "X": np.array([-1.0, -1.0, 2.0, 0.0]),
    "Y": np.array([1.0, 1.0, 0.0, -2.0]),
    "Z": np.array([1.0, -1.0, 0.0, 0.0]),
}


def input_state(label: str) -> np.ndarray:
    ket = _KETS[label]
    return np.outer(ket, ket.conj())


def two_qubit_input(label_pair) -> np.ndarray:
    a, b = label_pair
    return np.kron(input_state(a), input_state(b))


@dataclass
class ChannelTomography:
    """Cached channel action on the 16 product input states."""

    outputs: dict          # (a, b) -> 4x4 computational block
    leakage: dict          # (a, b) -> trace deficit
    outputs_full: dict     # (a, b) -> full two-transmon reduced state

    @property
    def max_leakage(self) -> float:
        return max(self.leakage.values())


def _normalize_channel(channel):
    """Accept a GateChannel-like object or a bare callable on 4x4 states."""
    if hasattr(channel, "apply_batch"):
        return channel.apply_batch
    def batch(states):
        out = []
        for rho in states:
            res = channel(rho)
            out.append((res, float(1.0 - np.real(np.trace(res))), res))
        return out
    return batch


def tomography(channel) -> ChannelTomography:
    """Evaluate the channel once on each of the 16 product inputs."""
    pairs = [(a, b) for a in INPUT_LABELS for b in INPUT_LABELS]
    batch = _normalize_channel(channel)
    results = batch([two_qubit_input(p) for p in pairs])
    outputs, leakage, full = {}, {}, {}
    for pair, (block, leak, rho_full) in zip(pairs, results):
        outputs[pair] = block
        leakage[pair] = leak
        full[pair] = rho_full
    return ChannelTomography(outputs=outputs, leakage=leakage, outputs_full=full)


def channel_on_pauli(tomo: ChannelTomography, pauli_pair) -> np.ndarray:
    """E[sigma_k kron sigma_l] assembled by linearity from the tomography."""
    k, l = pauli_pair
    ck, cl = _PAULI_IN_STATES[k], _PAULI_IN_STATES[l]
    out = np.zeros((4, 4), dtype=complex)
    for i, a in enumerate(INPUT_LABELS):
        if ck[i] == 0:
            continue
        for j, b in enumerate(INPUT_LABELS):
            if cl[j] == 0:
                continue
            out += ck[i] * cl[j] * tomo.outputs[(a, b)]
    return out


def average_gate_fidelity(tomo: ChannelTomography, u_ideal: np.ndarray) -> float:
    """Pauli-basis average gate fidelity against a 4x4 target unitary."""
    u = np.asarray(u_ideal, dtype=complex)
    if np.abs(u @ u.conj().T - np.eye(4)).max() > 1e-10:
        raise ValueError("target must be unitary")
    d = 4
    total = 0.0 + 0.0j
    for k in PAULI_LABELS:
        for l in PAULI_LABELS:
            uj = np.kron(PAULI[k], PAULI[l])
            ej = channel_on_pauli(tomo, (k, l))
            total += np.trace(uj.conj().T @ u.conj().T @ ej @ u)
    if abs(total.imag) > 1e-9:
        raise ValueError(f"fidelity sum has imaginary residue {total.imag:.3e}")
    return float((total.real + d**2) / (d**2 * (d + 1)))


def unitary_channel_fidelity(u_ideal: np.ndarray, v: np.ndarray) -> float:
    """Closed form for a unitary channel: (|tr(U^dag V)|^2 + d) / (d^2 + d)."""
    d = u_ideal.shape[0]
    overlap = abs(np.trace(u_ideal.conj().T @ v)) ** 2
    return float((overlap + d) / (d**2 + d))


def haar_mc_fidelity(channel, u_ideal: np.ndarray, samples: int = 2000,
                     seed: int = 7) -> tuple[float, float]:
    """Monte-Carlo average fidelity over Haar-random pure states.

    Returns (mean, standard error).  Deterministic for a fixed seed.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples for a stable estimate")
    batch = _normalize_channel(channel)
    rng = np.random.default_rng(seed)
    u = np.asarray(u_ideal, dtype=complex)
    vals = np.empty(samples)
    for k in range(samples):
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi /= np.linalg.norm(psi)
        block = batch([np.outer(psi, psi.conj())])[0][0]
        target = u @ psi
        vals[k] = float(np.real(target.conj() @ block @ target))
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))


def choi_matrix(tomo: ChannelTomography) -> np.ndarray:
    """Choi matrix from the cached tomography, using the full outputs.

    J = sum_ij |i><j| kron E[|i><j|] over the 16 computational matrix
    units, which are linear combinations of the product inputs.  Built
    from the full (trace-preserving) outputs so that a CPTP channel
    yields a PSD matrix with identity input marginal.
    """
    pairs = [(a, b) for a in INPUT_LABELS for b in INPUT_LABELS]
    basis = np.column_stack([two_qubit_input(p).reshape(-1) for p in pairs])
    coeffs = np.linalg.solve(basis, np.eye(16, dtype=complex))
    d_out = next(iter(tomo.outputs_full.values())).shape[0]
    j = np.zeros((4 * d_out, 4 * d_out), dtype=complex)
    for i in range(4):
        for jdx in range(4):
            c = coeffs[:, i * 4 + jdx]  # flat index of the (i, jdx) matrix unit
            e_unit = sum(ci * tomo.outputs_full[p] for ci, p in zip(c, pairs))
            j[i * d_out:(i + 1) * d_out, jdx * d_out:(jdx + 1) * d_out] = e_unit
    return j


def choi_input_marginal(j: np.ndarray, d_out: int) -> np.ndarray:
    """Tr_out of a Choi matrix laid out as (in kron out)."""
    d_in = j.shape[0] // d_out
    blocks = j.reshape(d_in, d_out, d_in, d_out)
    return np.trace(blocks, axis1=1, axis2=3)
