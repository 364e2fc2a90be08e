"""Walk the device parameter chain at the three gate working points.

Everything downstream (Hamiltonians, gate times, fidelities) is built
from these few numbers: transmon energies and flux bias fix the qubit
frequency and which coupling survives; the magnet shape and applied
field fix the magnon frequency, its squeezing enhancement, and the
zero-point moment threading flux through the SQUID loops.
"""

import warnings

import numpy as np

from magnon_gates import device as dev
from magnon_gates.config import default_config
from magnon_gates.constants import TWO_PI
from magnon_gates.sweep import PAPER_OPTIMA, build_scenario, resolve_point

warnings.simplefilter("ignore")  # low-frequency points sit near the M_s/2 bound

for gate in ("iswap", "cz", "icnot"):
    cfg = default_config(gate)
    ratio = PAPER_OPTIMA[cfg.gate]
    phys = resolve_point(cfg, ratio)
    scen = build_scenario(cfg, ratio)
    magnet = cfg.device.magnet

    print(f"=== {gate} working point (omega_m = {ratio} x omega_ref) ===")
    print(f"  qubit 1: a_J = {cfg.device.transmon1.a_J}, "
          f"phi_b = {cfg.device.transmon1.phi_b / np.pi:.2f} pi, "
          f"omega_q1/2pi = {phys.omega_q1 / TWO_PI / 1e9:.3f} GHz")
    print(f"  qubit 2: a_J = {cfg.device.transmon2.a_J}, "
          f"phi_b = {cfg.device.transmon2.phi_b / np.pi:.2f} pi, "
          f"omega_q2/2pi = {phys.omega_q2 / TWO_PI / 1e9:.3f} GHz")
    print(f"  magnon: omega_m/2pi = {phys.omega_m / TWO_PI / 1e6:.1f} MHz at "
          f"H0 = {phys.H0:.3g} A/m, squeezing e^r = {phys.e_r:.3f}")
    print(f"  zero-point moment mu_zpf = {dev.mu_zpf(magnet):.3g} J/T")
    print(f"  couplings/2pi: J1 = {phys.J1 / TWO_PI / 1e6:.3f} MHz, "
          f"J2 = {phys.J2 / TWO_PI / 1e6:.3f} MHz, "
          f"g1 = {phys.g1 / TWO_PI / 1e6:.3f} MHz, "
          f"g2 = {phys.g2 / TWO_PI / 1e6:.3f} MHz, "
          f"g~1 = {phys.g_tilde1 / TWO_PI / 1e6:.3f} MHz")
    print(f"  effective two-qubit coupling/2pi = {scen.coupling / TWO_PI / 1e6:.4f} MHz "
          f"-> gate time {scen.T_gate * 1e6:.3f} us")
    print(f"  magnon linewidth kappa/2pi = {phys.kappa / TWO_PI / 1e6:.3f} MHz, "
          f"thermal occupation n_th = {phys.n_th:.3g}")
    print()
