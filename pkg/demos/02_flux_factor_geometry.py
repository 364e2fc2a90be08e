"""Compute the geometrical flux factor I_x and the stray-field margin.

The SQUID loop picks up flux from the transverse zero-point moment of
the magnet.  A point dipole badly overestimates the pickup because the
magnet is stretched along x, away from the loop plane; the
surface-charge model of the actual ellipsoid lands on the reference
value of about -0.12 per micrometer.
"""

import numpy as np

from magnon_gates import geometry as geo
from magnon_gates.config import default_config

magnet = default_config("iswap").device.magnet
loop = geo.default_loop(magnet)

dipole = geo.PotentialModel(variant="point-dipole",
                            semi_axes=(magnet.L_x, magnet.L_z, magnet.L_z))
ellipsoid = geo.model_for_magnet(magnet)

print(f"magnet: semi-axes ({magnet.L_x * 1e6:.1f}, {magnet.L_z * 1e6:.1f}, "
      f"{magnet.L_z * 1e6:.1f}) um, loop radius {magnet.R * 1e6:.0f} um, "
      f"closest approach {(magnet.d - magnet.L_z) * 1e9:.0f} nm")

for name, model in (("point dipole", dipole), ("ellipsoid", ellipsoid)):
    ix = geo.geometrical_factor(model, loop, "x")
    iy = geo.geometrical_factor(model, loop, "y")
    print(f"{name:>14}: I_x = {ix * 1e-6:+.4f}/um   I_y = {iy * 1e-6:+.1e}/um")

# the closed-form oracle for the origin-centered annulus placement
annulus = geo.equatorial_annulus(magnet)
quad = geo.geometrical_factor(dipole, annulus, "x")
exact = geo.dipole_annulus_flux_factor(magnet.d, magnet.R)
print(f"annulus quadrature vs closed form: {quad * 1e-6:.6f} vs {exact * 1e-6:.6f} /um")

print(f"volume-matched sphere / ellipsoid coupling ratio: "
      f"{geo.sphere_comparison_ratio(magnet):.2f}")

# stray field along the z axis in units of a NbTiN-scale critical field
print("\n  z/L_z   B_z (T)    B_z/B_c(20 T)")
for zf in (1.01, 1.2, 1.5, 2.0, 3.0, 5.0):
    bz = geo.stray_field_bz(ellipsoid, magnet, zf * magnet.L_z)
    print(f"  {zf:5.2f}   {bz:8.4f}   {bz / 20.0:10.2e}")
