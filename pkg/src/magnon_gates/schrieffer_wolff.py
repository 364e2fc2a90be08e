"""Numerical checks of the second-order Schrieffer-Wolff machinery.

The generator splits as S = S_J + S_g with

    S_J = sum_i J_i ( chi_i(n_i) c_i^dag m - c_i m^dag chi_i(n_i) ),
    S_g = sum_i (g_i / omega_m) n_i (m^dag - m),

and the transmon susceptibility is taken as

    chi_i(n) = 1 / (omega_qi - omega_m - E_C (n - 1)),

the sign for which [S, H_0] = -H_int holds exactly (the commutator
residual below is the arbiter; the opposite overall sign appears in one
published form of chi and fails that identity).  The transformed
Hamiltonian H_SW = H_0 + [S, H_int] / 2 splits into four pieces
[S_J, H_J], [S_J, H_g], [S_g, H_J], [S_g, H_g], each compared against
its closed form on the interior of the truncated Fock space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import SpaceLayout, annihilation, embed, matrix_exp, partial_trace

__all__ = [
    "GeneratorSpec",
    "build_generator",
    "h0_matrix",
    "h_int_matrix",
    "interior_projector",
    "commutator_residual",
    "sw_hamiltonian",
    "closed_form_pieces",
    "TwoLevelReduction",
    "two_level_reduction",
    "iswap_coupling",
    "cz_zz_coefficient",
    "icnot_coupling",
    "dynamics_agreement",
]


@dataclass(frozen=True)
class GeneratorSpec:
    """Frequencies and couplings defining the SW generator (rad/s)."""

    layout: SpaceLayout
    omega_q1: float
    omega_q2: float
    omega_m: float
    E_C: float
    J1: float = 0.0
    J2: float = 0.0
    g1: float = 0.0
    g2: float = 0.0

    def __post_init__(self):
        for qi, wq in ((0, self.omega_q1), (1, self.omega_q2)):
            d = self.layout.dims[qi]
            n = np.arange(-1, d + 2)
            denom = wq - self.omega_m - self.E_C * (n - 1)
            if np.any(np.abs(denom) < 1e-9 * max(abs(wq), abs(self.omega_m), 1.0)):
                raise ValueError(
                    f"singular transmon susceptibility for qubit {qi + 1}: a "
                    "transition is resonant with the magnon"
                )

    def chi(self, which: int, shift: int = 0) -> np.ndarray:
        """chi_i(n + shift) as a diagonal matrix on the full space."""
        wq = self.omega_q1 if which == 0 else self.omega_q2
        d = self.layout.dims[which]
        n = np.arange(d) + shift
        vals = 1.0 / (wq - self.omega_m - self.E_C * (n - 1))
        return embed(np.diag(vals).astype(complex), which, self.layout)

    def operators(self):
        d1, d2, dm = self.layout.dims
        c1 = embed(annihilation(d1), 0, self.layout)
        c2 = embed(annihilation(d2), 1, self.layout)
        m = embed(annihilation(dm), 2, self.layout)
        return c1, c2, m


def build_generator(gs: GeneratorSpec) -> np.ndarray:
    """Anti-Hermitian generator S = S_J + S_g."""
    s_j, s_g = _generator_parts(gs)
    return s_j + s_g


def _generator_parts(gs: GeneratorSpec):
    c1, c2, m = gs.operators()
    s_j = np.zeros_like(c1)
    s_g = np.zeros_like(c1)
    for i, (cc, j, g) in enumerate(((c1, gs.J1, gs.g1), (c2, gs.J2, gs.g2))):
        chi = gs.chi(i)
        s_j = s_j + j * (chi @ cc.conj().T @ m - cc @ m.conj().T @ chi)
        nn = cc.conj().T @ cc
        s_g = s_g + (g / gs.omega_m) * nn @ (m.conj().T - m)
    return s_j, s_g


def h0_matrix(gs: GeneratorSpec) -> np.ndarray:
    """Decoupled Hamiltonian: magnon plus anharmonic transmons."""
    c1, c2, m = gs.operators()
    h = gs.omega_m * (m.conj().T @ m)
    for cc, wq in ((c1, gs.omega_q1), (c2, gs.omega_q2)):
        h = h + wq * (cc.conj().T @ cc)
        h = h - 0.5 * gs.E_C * (cc.conj().T @ cc.conj().T @ cc @ cc)
    return h


def h_int_matrix(gs: GeneratorSpec) -> np.ndarray:
    """Exchange plus radiation-pressure interaction."""
    c1, c2, m = gs.operators()
    h = np.zeros_like(c1)
    for cc, j, g in ((c1, gs.J1, gs.g1), (c2, gs.J2, gs.g2)):
        h = h + j * (cc.conj().T @ m + cc @ m.conj().T)
        h = h + g * (cc.conj().T @ cc) @ (m.conj().T + m)
    return h


def interior_projector(layout: SpaceLayout, margin: int = 2) -> np.ndarray:
    """Projector onto states with every occupation <= dim - 1 - margin.

    H_int moves one quantum per subsystem and [S, .] two, so a margin of
    two keeps all intermediate states inside the truncation.
    """
    masks = [np.arange(d) <= d - 1 - margin for d in layout.dims]
    keep = masks[0][:, None, None] & masks[1][None, :, None] & masks[2][None, None, :]
    return np.diag(keep.reshape(-1).astype(complex))


def commutator_residual(gs: GeneratorSpec, margin: int = 2) -> float:
    """|| P ([S, H0] + H_int) P ||_F / || P H_int P ||_F.

    Vanishes (to rounding) when the generator solves the first-order SW
    condition [S, H0] = -H_int on the interior subspace.
    """
    s = build_generator(gs)
    h0 = h0_matrix(gs)
    h_int = h_int_matrix(gs)
    p = interior_projector(gs.layout, margin)
    num = np.linalg.norm(p @ (s @ h0 - h0 @ s + h_int) @ p)
    den = np.linalg.norm(p @ h_int @ p)
    if den == 0:
        return 0.0
    return float(num / den)


def sw_hamiltonian(gs: GeneratorSpec):
    """Second-order transformed Hamiltonian and its four commutator pieces.

    Returns (H_SW, pieces) with pieces keyed "JJ", "Jg", "gJ", "gg";
    H_SW = H_0 + (sum of pieces) / 2.
    """
    s_j, s_g = _generator_parts(gs)
    c1, c2, m = gs.operators()
    h_j = np.zeros_like(c1)
    h_g = np.zeros_like(c1)
    for cc, j, g in ((c1, gs.J1, gs.g1), (c2, gs.J2, gs.g2)):
        h_j = h_j + j * (cc.conj().T @ m + cc @ m.conj().T)
        h_g = h_g + g * (cc.conj().T @ cc) @ (m.conj().T + m)
    com = lambda a, b: a @ b - b @ a
    pieces = {
        "JJ": com(s_j, h_j),
        "Jg": com(s_j, h_g),
        "gJ": com(s_g, h_j),
        "gg": com(s_g, h_g),
    }
    h_sw = h0_matrix(gs) + 0.5 * sum(pieces.values())
    return h_sw, pieces


def closed_form_pieces(gs: GeneratorSpec) -> dict:
    """The four second-order pieces evaluated from their closed forms.

    Independent of the commutator route in :func:`sw_hamiltonian`; the
    two agree on the interior subspace and differ at the truncation
    boundary.
    """
    c1, c2, m = gs.operators()
    eye = np.eye(c1.shape[0], dtype=complex)
    md, mm = m.conj().T, m
    n_m = md @ mm
    qubits = ((0, c1, gs.J1, gs.g1), (1, c2, gs.J2, gs.g2))

    jj = np.zeros_like(c1)
    for i, cc, j, _g in qubits:
        cd = cc.conj().T
        nn = cd @ cc
        chi0 = gs.chi(i, 0)
        chi_m1 = gs.chi(i, -1)
        chi_p1 = gs.chi(i, 1)
        chi_p2 = gs.chi(i, 2)
        # magnon-number coefficient 2 chi(n+1)(n+1) - 2 chi(n) n: the
        # published form carries (1 - n) in place of (1 + n) with the
        # opposite relative sign, which fails the commutator cross-check
        # for excited transmons at finite anharmonicity (they coincide
        # at n = 0 and for E_C = 0, so the two-level results agree)
        jj = jj + j**2 * (
            2.0 * chi0 @ nn
            - (2.0 * chi_p1 @ (eye + nn) - 2.0 * chi0 @ nn) @ n_m
            + (chi0 - chi_m1) @ cd @ cd @ mm @ mm
            + (chi_p2 - chi_p1) @ cc @ cc @ md @ md
        )
    c1d, c2d = c1.conj().T, c2.conj().T
    chi1, chi2 = gs.chi(0), gs.chi(1)
    jj = jj + gs.J1 * gs.J2 * (chi1 @ c1d @ c2 + c1 @ chi1 @ c2d)
    jj = jj + gs.J1 * gs.J2 * (chi2 @ c2d @ c1 + c2 @ chi2 @ c1d)

    jg = np.zeros_like(c1)
    x_m = md + mm
    for i, cc, j, g in qubits:
        cd = cc.conj().T
        nn = cd @ cc
        jg = jg + j * g * (
            gs.chi(i, 0) @ cd @ (nn - x_m @ mm)
            + gs.chi(i, 1) @ cc @ (nn - x_m @ md)
        )
    n1 = c1d @ c1
    n2 = c2d @ c2
    jg = jg + gs.J1 * gs.g2 * n2 @ (chi1 @ c1d + c1 @ chi1)
    jg = jg + gs.g1 * gs.J2 * n1 @ (chi2 @ c2d + c2 @ chi2)

    gj = np.zeros_like(c1)
    for i, cc, j, g in qubits:
        cd = cc.conj().T
        gj = gj + (j * g / gs.omega_m) * (
            (cd + cc) @ (n_m + eye)
            - cc @ md @ md
            - cd @ mm @ mm
            - cd @ cc @ cd
            - cc @ cd @ cc
        )
    gj = gj - (gs.g1 * gs.J2 / gs.omega_m) * n1 @ (c2d + c2)
    gj = gj - (gs.J1 * gs.g2 / gs.omega_m) * (c1d + c1) @ n2

    gg = (
        -(2.0 * gs.g1**2 / gs.omega_m) * (n1 @ n1)
        - (2.0 * gs.g2**2 / gs.omega_m) * (n2 @ n2)
        - (4.0 * gs.g1 * gs.g2 / gs.omega_m) * (n1 @ n2)
    )
    return {"JJ": jj, "Jg": jg, "gJ": gj, "gg": gg}


@dataclass
class TwoLevelReduction:
    """Qubit-{0,1} block of a composite-space Hamiltonian."""

    block: np.ndarray          # (4 dm, 4 dm), ordered (q-block, magnon)
    off_block_weight: float    # relative weight connecting into higher levels


def two_level_reduction(h: np.ndarray, layout: SpaceLayout,
                        off_block_tol: float | None = None) -> TwoLevelReduction:
    """Project onto qubit occupations {0, 1}, keeping all magnon levels.

    The reported off-block weight is ||Q H P||_F / ||H||_F with P the
    computational projector; the exact SW Hamiltonian carries
    O(J^2 E_C / Delta^2) qubit-level-changing terms, so a hard bound is
    opt-in via ``off_block_tol``.
    """
    d1, d2, dm = layout.dims
    d = layout.total_dim
    mask = np.zeros(layout.dims, dtype=bool)
    mask[:2, :2, :] = True
    idx = np.flatnonzero(mask.reshape(-1))
    rest = np.setdiff1d(np.arange(d), idx)
    block = h[np.ix_(idx, idx)]
    off = np.linalg.norm(h[np.ix_(rest, idx)])
    weight = float(off / max(np.linalg.norm(h), 1e-300))
    if off_block_tol is not None and weight > off_block_tol:
        raise ValueError(f"off-block weight {weight:.3e} exceeds {off_block_tol}")
    return TwoLevelReduction(block=block, off_block_weight=weight)


def _block_index(n1: int, n2: int, k: int, dm: int) -> int:
    return (n1 * 2 + n2) * dm + k


def iswap_coupling(h: np.ndarray, layout: SpaceLayout) -> complex:
    """<10, 0_m| H |01, 0_m> of the two-level reduction."""
    red = two_level_reduction(h, layout)
    dm = layout.dims[2]
    return complex(red.block[_block_index(1, 0, 0, dm), _block_index(0, 1, 0, dm)])


def cz_zz_coefficient(h: np.ndarray, layout: SpaceLayout) -> complex:
    """Coefficient of n1 n2 in the two-level reduction at magnon vacuum."""
    red = two_level_reduction(h, layout)
    dm = layout.dims[2]
    e = lambda n1, n2: red.block[_block_index(n1, n2, 0, dm), _block_index(n1, n2, 0, dm)]
    return complex(e(1, 1) - e(1, 0) - e(0, 1) + e(0, 0))


def icnot_coupling(h: np.ndarray, layout: SpaceLayout) -> complex:
    """<11, 0_m| H |10, 0_m>: target-qubit flip with control excited."""
    red = two_level_reduction(h, layout)
    dm = layout.dims[2]
    return complex(red.block[_block_index(1, 1, 0, dm), _block_index(1, 0, 0, dm)])


def dynamics_agreement(h_full: np.ndarray, h_eff4: np.ndarray, layout: SpaceLayout,
                       t_gate: float, n_times: int = 41,
                       psi0: np.ndarray | None = None) -> float:
    """Max trace distance between full and effective two-qubit dynamics.

    Dissipation-free: the full state starts in |psi0> kron |0_m>,
    evolves under ``h_full``, and the magnon is traced out; the
    effective state evolves under the 4x4 ``h_eff4``.  Expected to scale
    as (J / Delta)^2 in the dispersive regime.  Defaults to |10>, the
    input used in the published dynamics traces.
    """
    d1, d2, dm = layout.dims
    if psi0 is None:
        psi0 = np.array([0.0, 0.0, 1.0, 0.0], dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    psi0 = psi0 / np.linalg.norm(psi0)

    # lift |psi0> to the full space at magnon vacuum
    full0 = np.zeros(layout.total_dim, dtype=complex)
    comp = [(n1, n2) for n1 in (0, 1) for n2 in (0, 1)]
    for amp, (n1, n2) in zip(psi0, comp):
        full0[(n1 * d2 + n2) * dm] = amp

    evals, vecs = np.linalg.eigh(h_full)
    coeff = vecs.conj().T @ full0
    times = np.linspace(0.0, t_gate, n_times)
    worst = 0.0
    for t in times:
        psi_t = vecs @ (np.exp(-1j * evals * t) * coeff)
        rho_qq = partial_trace(np.outer(psi_t, psi_t.conj()), layout, keep=(0, 1))
        u_eff = matrix_exp(-1j * h_eff4 * t)
        psi_eff = u_eff @ psi0
        rho_eff = np.zeros_like(rho_qq)
        idx = [n1 * d2 + n2 for n1, n2 in comp]
        rho_eff[np.ix_(idx, idx)] = np.outer(psi_eff, psi_eff.conj())
        diff_eigs = np.linalg.eigvalsh(rho_qq - rho_eff)
        worst = max(worst, 0.5 * float(np.abs(diff_eigs).sum()))
    return worst
