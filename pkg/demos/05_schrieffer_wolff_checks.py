"""Verify the Schrieffer-Wolff machinery numerically.

The generator is fixed by [S, H0] = -H_int; the transformed Hamiltonian
H0 + [S, H_int]/2 must reproduce the closed-form second-order pieces on
the interior of the truncated Fock space, and its two-level reduction
must carry exactly the effective couplings that set the gate times.
Finally, effective and full dynamics are compared state by state.
"""

import numpy as np

from magnon_gates import models as mdl
from magnon_gates import schrieffer_wolff as sw
from magnon_gates.constants import TWO_PI
from magnon_gates.models import GateKind
from magnon_gates.operators import SpaceLayout

layout = SpaceLayout((4, 4, 6), ("q1", "q2", "m"))
wq = TWO_PI * 6.0e9
e_c = TWO_PI * 150e6
j = TWO_PI * 13.4e6

gs = sw.GeneratorSpec(layout=layout, omega_q1=wq, omega_q2=wq, omega_m=0.94 * wq,
                      E_C=e_c, J1=j, J2=j, g1=TWO_PI * 3e6, g2=TWO_PI * 4e6)
print(f"[S, H0] + H_int residual (interior): {sw.commutator_residual(gs):.2e}")

h_sw, pieces = sw.sw_hamiltonian(gs)
closed = sw.closed_form_pieces(gs)
p = sw.interior_projector(layout)
for key in ("JJ", "Jg", "gJ", "gg"):
    interior = np.linalg.norm(p @ (pieces[key] - closed[key]) @ p)
    boundary = np.linalg.norm(pieces[key] - closed[key])
    scale = np.linalg.norm(closed[key])
    print(f"piece {key}: closed-form mismatch {interior / scale:.2e} interior, "
          f"{boundary / scale:.2f} with the truncation boundary included")

# two-level reduction reproduces the iSWAP coupling that sets T_S
g_s = j * j / (wq - gs.omega_m)
h_iswap, _ = sw.sw_hamiltonian(sw.GeneratorSpec(
    layout=layout, omega_q1=wq, omega_q2=wq, omega_m=0.94 * wq, E_C=e_c, J1=j, J2=j))
got = sw.iswap_coupling(h_iswap, layout).real
print(f"\ntwo-level qubit-qubit coupling: {got / TWO_PI / 1e6:.6f} MHz "
      f"(formula {g_s / TWO_PI / 1e6:.6f} MHz)")

# the effective 4x4 model tracks the full dynamics at O((J/Delta)^2)
small = SpaceLayout((3, 3, 5), ("q1", "q2", "m"))
print("\n  J/Delta   max trace distance   bound 10 (J/Delta)^2")
for jd in (0.02, 0.05, 0.1):
    wm = 0.9 * wq
    jj = jd * (wq - wm)
    spec = mdl.ModelSpec(layout=small, omega_q1=wq, omega_q2=wq, omega_m=wm,
                         E_C=e_c, J1=jj, J2=jj)
    coupling = mdl.effective_coupling(GateKind.ISWAP, spec)
    dist = sw.dynamics_agreement(
        mdl.build_H_tot_iswap(spec),
        mdl.effective_two_qubit_hamiltonian(GateKind.ISWAP, coupling),
        small, mdl.gate_time(GateKind.ISWAP, coupling))
    print(f"  {jd:7.2f}   {dist:18.5f}   {10 * jd**2:20.5f}")
