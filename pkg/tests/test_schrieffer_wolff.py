import numpy as np
import pytest

from magnon_gates import models as mdl
from magnon_gates import schrieffer_wolff as sw
from magnon_gates.constants import TWO_PI
from magnon_gates.models import GateKind
from magnon_gates.operators import SpaceLayout

WQ = TWO_PI * 6.0e9
EC = TWO_PI * 150e6
LAYOUT = SpaceLayout((4, 4, 6), ("q1", "q2", "m"))


def make_spec(J1=0.0, J2=0.0, g1=0.0, g2=0.0, ratio=0.94, wq2=None, layout=LAYOUT):
    # ratio 0.94 keeps every transmon transition clear of the magnon
    # (0.9 would put the 4 -> 5 transition exactly at 4 E_C)
    return sw.GeneratorSpec(layout=layout, omega_q1=WQ, omega_q2=wq2 or WQ,
                            omega_m=ratio * WQ, E_C=EC, J1=J1, J2=J2, g1=g1, g2=g2)


def test_generator_basics():
    gs = make_spec(J1=TWO_PI * 10e6, J2=TWO_PI * 12e6, g1=TWO_PI * 3e6, g2=TWO_PI * 4e6)
    s = sw.build_generator(gs)
    assert np.abs(s + s.conj().T).max() <= 1e-12 * max(np.abs(s).max(), 1.0)
    assert np.abs(sw.build_generator(make_spec())).max() == 0.0
    # first-order structure: ||S|| linear in J at fixed detuning
    s1 = sw.build_generator(make_spec(J1=TWO_PI * 5e6))
    s2 = sw.build_generator(make_spec(J1=TWO_PI * 10e6))
    assert np.linalg.norm(s2) == pytest.approx(2 * np.linalg.norm(s1), rel=1e-12)


def test_singular_susceptibility_raises():
    # magnon resonant with the 1->2 transition: omega_m = omega_q - E_C
    with pytest.raises(ValueError, match="resonant"):
        sw.GeneratorSpec(layout=LAYOUT, omega_q1=WQ, omega_q2=WQ,
                         omega_m=WQ - EC, E_C=EC, J1=1e6)


def test_commutator_residual_interior():
    gs = make_spec(J1=TWO_PI * 13e6, J2=TWO_PI * 13e6, g1=TWO_PI * 5e6, g2=TWO_PI * 6e6)
    assert sw.commutator_residual(gs) <= 1e-10
    # the first-order identity is local: it even survives at the boundary
    assert sw.commutator_residual(gs, margin=0) <= 1e-10


def test_commutator_residual_g_only_unprojected():
    gs = make_spec(g1=TWO_PI * 5e6, g2=TWO_PI * 7e6)
    assert sw.commutator_residual(gs, margin=0) <= 1e-12


def test_sw_pieces_match_closed_forms_on_interior():
    """The commutator route and the closed forms are independent paths;
    they agree on the interior and differ O(1) at the truncation edge."""
    gs = make_spec(J1=TWO_PI * 13e6, J2=TWO_PI * 11e6, g1=TWO_PI * 5e6, g2=TWO_PI * 6e6)
    h_sw, pieces = sw.sw_hamiltonian(gs)
    closed = sw.closed_form_pieces(gs)
    p = sw.interior_projector(gs.layout, margin=2)
    assert np.abs(h_sw - h_sw.conj().T).max() <= 1e-13 * np.abs(h_sw).max()
    for key in ("JJ", "Jg", "gJ", "gg"):
        num = np.linalg.norm(p @ (pieces[key] - closed[key]) @ p)
        den = np.linalg.norm(p @ closed[key] @ p)
        assert num <= 1e-9 * den
        # without the projection the truncation boundary dominates
        full = np.linalg.norm(pieces[key] - closed[key]) / np.linalg.norm(closed[key])
        assert full > 1e-3


def test_sw_pieces_vanish_by_regime():
    h_sw, pieces = sw.sw_hamiltonian(make_spec(J1=TWO_PI * 13e6, J2=TWO_PI * 13e6))
    assert np.abs(pieces["Jg"]).max() == 0.0
    assert np.abs(pieces["gJ"]).max() == 0.0
    assert np.abs(pieces["gg"]).max() == 0.0
    assert np.abs(pieces["JJ"]).max() > 0.0
    h_sw, pieces = sw.sw_hamiltonian(make_spec(g1=TWO_PI * 5e6, g2=TWO_PI * 6e6))
    assert np.abs(pieces["JJ"]).max() == 0.0
    assert np.abs(pieces["gg"]).max() > 0.0


def test_gg_closed_form_exact_below_magnon_edge():
    """g-only: -2 g_i^2/w_m n_i^2 - 4 g1 g2/w_m n1 n2.

    [m^dag - m, m^dag + m] is -2 everywhere except the top truncated
    magnon level, so the closed form is exact once that level is
    projected out (full qubit range retained)."""
    gs = make_spec(g1=TWO_PI * 5e6, g2=TWO_PI * 6e6)
    _, pieces = sw.sw_hamiltonian(gs)
    closed = sw.closed_form_pieces(gs)
    diff = pieces["gg"] - closed["gg"]
    d1, d2, dm = gs.layout.dims
    keep = np.ones(gs.layout.dims, dtype=bool)
    keep[:, :, dm - 1] = False
    idx = np.flatnonzero(keep.reshape(-1))
    scale = np.abs(closed["gg"]).max()
    assert np.abs(diff[np.ix_(idx, idx)]).max() <= 1e-12 * scale
    # and the defect really does live on the top magnon level
    assert np.abs(diff).max() > 1e-3 * scale


def test_two_level_reduction_iswap():
    j = TWO_PI * 13e6
    gs = make_spec(J1=j, J2=j, ratio=0.94)
    h_sw, _ = sw.sw_hamiltonian(gs)
    got = sw.iswap_coupling(h_sw, gs.layout)
    delta = WQ - gs.omega_m
    g_s = j * j / delta
    assert abs(got - g_s) <= 1e-9 * abs(g_s)
    red = sw.two_level_reduction(h_sw, gs.layout)
    assert red.block.shape == (4 * 6, 4 * 6)
    assert red.off_block_weight < 1e-3  # small but nonzero level-2 admixture
    with pytest.raises(ValueError, match="off-block"):
        sw.two_level_reduction(h_sw, gs.layout, off_block_tol=1e-12)


def test_two_level_reduction_cz():
    g1, g2 = TWO_PI * 12e6, TWO_PI * 10e6
    gs = make_spec(g1=g1, g2=g2, ratio=0.027)
    h_sw, _ = sw.sw_hamiltonian(gs)
    got = sw.cz_zz_coefficient(h_sw, gs.layout)
    g_z = 2 * g1 * g2 / gs.omega_m
    assert abs(got - (-g_z)) <= 1e-9 * abs(g_z)


def test_two_level_reduction_icnot():
    """With the rotating-frame substitutions the coupling is g_tilde_NOT."""
    j2 = TWO_PI * 13e6
    gt1 = TWO_PI * 1.24e6
    wm = 0.97 * WQ
    wac = WQ + j2**2 / (WQ - wm)
    gs = sw.GeneratorSpec(layout=LAYOUT, omega_q1=TWO_PI * 6.2e9 - wac,
                          omega_q2=WQ - wac, omega_m=wm - wac, E_C=EC,
                          J2=j2, g1=gt1 / 2.0)
    h_sw, _ = sw.sw_hamiltonian(gs)
    got = sw.icnot_coupling(h_sw, gs.layout)
    dm = wm - wac
    dq2 = WQ - wac
    g_not = 0.25 * gt1 * j2 * (1 / (dq2 - dm) - 1 / dm)
    assert abs(got - g_not) <= 1e-9 * abs(g_not)
    # the drive-frequency choice cancels the target-qubit frequency term
    dm_ = gs.layout.dims[2]
    red = sw.two_level_reduction(h_sw, gs.layout)
    e = lambda n1, n2: red.block[(n1 * 2 + n2) * dm_, (n1 * 2 + n2) * dm_].real
    sz2_coeff = e(0, 1) - e(0, 0)
    assert abs(sz2_coeff) <= abs(g_not) / 10.0


def test_dynamics_agreement_scaling():
    wq = TWO_PI * 6e9
    layout = SpaceLayout((3, 3, 5), ("q1", "q2", "m"))
    distances = []
    ratios_jd = (0.02, 0.05, 0.1)
    for jd in ratios_jd:
        wm = 0.9 * wq
        j = jd * (wq - wm)
        spec = mdl.ModelSpec(layout=layout, omega_q1=wq, omega_q2=wq, omega_m=wm,
                             E_C=EC, J1=j, J2=j)
        h_full = mdl.build_H_tot_iswap(spec)
        coupling = mdl.effective_coupling(GateKind.ISWAP, spec)
        h_eff = mdl.effective_two_qubit_hamiltonian(GateKind.ISWAP, coupling)
        t_gate = mdl.gate_time(GateKind.ISWAP, coupling)
        dist = sw.dynamics_agreement(h_full, h_eff, layout, t_gate)
        distances.append(dist)
        assert dist <= 10.0 * jd**2
    assert distances[0] < distances[1] < distances[2]


def test_dynamics_agreement_decoupled():
    wq = TWO_PI * 6e9
    layout = SpaceLayout((3, 3, 5), ("q1", "q2", "m"))
    spec = mdl.ModelSpec(layout=layout, omega_q1=wq, omega_q2=wq, omega_m=0.9 * wq,
                         E_C=EC)
    h_full = mdl.build_H_tot_iswap(spec)
    h_eff = np.zeros((4, 4))
    assert sw.dynamics_agreement(h_full, h_eff, layout, 1e-7) <= 1e-9
