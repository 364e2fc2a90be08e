"""Physical parameter chain: from device geometry and energies to couplings.

Conventions
-----------
* Transmon energies ``E_C`` and ``E_J_sigma`` are configured as ordinary
  frequencies in Hz (energy divided by the Planck constant).
* ``qubit_frequency`` returns Hz; everything fed into Hamiltonians is
  converted to angular frequency (rad/s) by the model builders.
* Magnet fields are in A/m, the gyromagnetic ratio in rad/s/T, and the
  flux-factor ``I_x`` in 1/m.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, KB, MU0, PHI0, TWO_PI

__all__ = [
    "TransmonDesign",
    "MagnetSpec",
    "Environment",
    "DeviceConfig",
    "squid_factor",
    "qubit_frequency",
    "magnon_frequency",
    "field_for_frequency",
    "squeezing",
    "mu_zpf",
    "demag_factor",
    "aspect_for_demag_factor",
    "coupling_J",
    "coupling_g",
    "coupling_g_tilde",
    "linewidth",
    "thermal_occupation",
]

TRANSMON_REGIME_MIN = 20.0  # warn when E_J_sigma * S / E_C falls below this


@dataclass(frozen=True)
class TransmonDesign:
    """Flux-tunable transmon: energies in Hz, fluxes in radians."""

    E_C: float
    E_J_sigma: float
    a_J: float
    phi_b: float
    phi_ac: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.a_J <= 1.0:
            raise ValueError(f"SQUID asymmetry must lie in [0, 1], got {self.a_J}")
        if self.E_C <= 0 or self.E_J_sigma <= 0:
            raise ValueError("transmon energies must be positive")
        ratio = self.E_J_sigma * squid_factor(self.a_J, self.phi_b) / self.E_C
        if ratio < TRANSMON_REGIME_MIN:
            warnings.warn(
                f"outside the transmon regime: E_J^Sigma S / E_C = {ratio:.1f} < "
                f"{TRANSMON_REGIME_MIN}",
                stacklevel=2,
            )


@dataclass(frozen=True)
class MagnetSpec:
    """Ellipsoidal magnet (semi-axes L_x >= L_y = L_z) and loop geometry."""

    L_x: float            # long semi-axis, m
    L_z: float            # short semi-axis, m
    d: float              # minimal magnet-center-to-loop distance, m
    R: float              # loop radius, m
    N_T: float            # transverse demagnetization factor
    M_s: float            # saturation magnetization, A/m
    rho_s: float          # spin density, 1/m^3
    gamma0: float         # gyromagnetic ratio modulus, rad/s/T
    I_x: float            # geometrical flux factor, 1/m

    def __post_init__(self):
        if not self.L_x >= self.L_z > 0:
            raise ValueError(f"need L_x >= L_z > 0, got L_x={self.L_x}, L_z={self.L_z}")
        if self.d < self.L_z:
            raise ValueError(f"loop distance d={self.d} lies inside the magnet (L_z={self.L_z})")
        if not (1.0 / 3.0 <= self.N_T < 0.5):
            raise ValueError(f"N_T={self.N_T} outside the prolate range [1/3, 1/2)")
        if self.M_s <= 0 or self.rho_s <= 0 or self.gamma0 <= 0:
            raise ValueError("M_s, rho_s and gamma0 must be positive")
        if self.N_s < 1e6:
            raise ValueError(
                f"macrospin approximation needs N_s >> 1; got N_s = {self.N_s:.3g}"
            )

    @property
    def volume(self) -> float:
        """V_m = 4 pi L_x L_z^2 / 3."""
        return 4.0 * np.pi * self.L_x * self.L_z**2 / 3.0

    @property
    def N_s(self) -> float:
        """Total number of spins."""
        return self.rho_s * self.volume


@dataclass(frozen=True)
class Environment:
    """Temperatures, qubit coherence times and magnon damping."""

    temperature: float     # K
    T1: float              # s
    T_phi: float           # s
    alpha_G: float         # Gilbert damping, dimensionless
    kappa_tilde: float     # inhomogeneous magnon damping, rad/s

    def __post_init__(self):
        for name in ("temperature", "T1", "T_phi", "alpha_G", "kappa_tilde"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class DeviceConfig:
    transmon1: TransmonDesign
    transmon2: TransmonDesign
    magnet: MagnetSpec
    environment: Environment


def squid_factor(a_J: float, phi_b: float) -> float:
    """S(phi_b) = sqrt(cos^2 phi_b + a_J^2 sin^2 phi_b)."""
    return float(np.sqrt(np.cos(phi_b) ** 2 + a_J**2 * np.sin(phi_b) ** 2))


def qubit_frequency(design: TransmonDesign) -> float:
    """Transmon frequency omega_q / 2pi in Hz.

    omega_q/2pi = sqrt(8 E_C E_J^Sigma S(phi_b)) - E_C with energies in Hz.
    """
    s = squid_factor(design.a_J, design.phi_b)
    return float(np.sqrt(8.0 * design.E_C * design.E_J_sigma * s) - design.E_C)


def _stability_field(magnet: MagnetSpec) -> float:
    return (3.0 * magnet.N_T - 1.0) * magnet.M_s


def magnon_frequency(H0: float, magnet: MagnetSpec) -> float:
    """Kittel-mode frequency in rad/s for applied field H0 (A/m).

    Raises if H0 is below the shape-anisotropy stability bound
    (3 N_T - 1) M_s, where the mode softens to zero.  H0 <= M_s/2 only
    triggers a warning: for N_T < 1/2 the mode stays stable slightly
    below that bound, and the low-frequency working points sit there.
    """
    h_min = _stability_field(magnet)
    if H0 <= h_min:
        raise ValueError(
            f"magnon mode unstable: H0 = {H0:.4g} A/m <= (3 N_T - 1) M_s = {h_min:.4g} A/m"
        )
    if H0 <= magnet.M_s / 2.0:
        warnings.warn(
            f"H0 = {H0:.4g} A/m below M_s/2 = {magnet.M_s / 2:.4g} A/m; "
            "close to the magnon stability edge",
            stacklevel=2,
        )
    return float(
        MU0 * magnet.gamma0 * H0 * np.sqrt(1.0 - (magnet.M_s / H0) * (3.0 * magnet.N_T - 1.0))
    )


def field_for_frequency(omega_m: float, magnet: MagnetSpec) -> float:
    """Applied field H0 (A/m) that produces magnon frequency omega_m (rad/s).

    Closed-form positive root of x^2 - x b - omega_m^2 = 0 in
    x = mu0 gamma0 H0, with b = mu0 gamma0 M_s (3 N_T - 1).
    """
    if omega_m <= 0:
        raise ValueError(f"magnon frequency must be positive, got {omega_m}")
    b = MU0 * magnet.gamma0 * _stability_field(magnet)
    x = 0.5 * (b + np.sqrt(b**2 + 4.0 * omega_m**2))
    return float(x / (MU0 * magnet.gamma0))


def squeezing(H0: float, magnet: MagnetSpec) -> float:
    """Squeezing enhancement e^r = (1 - (M_s/H0)(3 N_T - 1))^(-1/4)."""
    h_min = _stability_field(magnet)
    if H0 <= h_min:
        raise ValueError(
            f"magnon mode unstable: H0 = {H0:.4g} A/m <= (3 N_T - 1) M_s = {h_min:.4g} A/m"
        )
    return float((1.0 - (magnet.M_s / H0) * (3.0 * magnet.N_T - 1.0)) ** -0.25)


def mu_zpf(magnet: MagnetSpec) -> float:
    """Zero-point magnetic moment hbar gamma0 sqrt(N_s / 2), in J/T."""
    return float(HBAR * magnet.gamma0 * np.sqrt(magnet.N_s / 2.0))


def demag_factor(aspect: float) -> float:
    """Transverse demagnetization factor N_T of a prolate spheroid.

    ``aspect`` is the long-to-short axis ratio L_x / L_z >= 1.  Uses the
    standard prolate closed form for the longitudinal factor and
    N_T = (1 - N_long) / 2.
    """
    if aspect < 1:
        raise ValueError(f"prolate aspect ratio must be >= 1, got {aspect}")
    if aspect == 1:
        return 1.0 / 3.0
    m = float(aspect)
    e = np.sqrt(m**2 - 1.0)
    n_long = (m / (2.0 * e) * np.log((m + e) / (m - e)) - 1.0) / (m**2 - 1.0)
    return float((1.0 - n_long) / 2.0)


def aspect_for_demag_factor(N_T: float, hi: float = 1e4) -> float:
    """Invert demag_factor by bisection."""
    if not (1.0 / 3.0 <= N_T < 0.5):
        raise ValueError(f"N_T={N_T} outside the prolate range [1/3, 1/2)")
    lo, hi_ = 1.0, hi
    for _ in range(200):
        mid = 0.5 * (lo + hi_)
        if demag_factor(mid) < N_T:
            lo = mid
        else:
            hi_ = mid
    return 0.5 * (lo + hi_)


def _flux_prefactor(magnet: MagnetSpec, H0: float) -> float:
    """-mu0 I_x mu_zpf e^r / (4 Phi0); dimensionless."""
    return -MU0 * magnet.I_x * mu_zpf(magnet) * squeezing(H0, magnet) / (4.0 * PHI0)


def coupling_J(design: TransmonDesign, magnet: MagnetSpec, H0: float) -> float:
    """Exchange coupling J in rad/s.

    J = -mu0 I_x mu_zpf a_J e^r / (4 Phi0) * (2 E_C (E_J^Sigma)^3 / S^5)^(1/4),
    with the energy bracket evaluated in Hz and converted to rad/s.
    """
    s = squid_factor(design.a_J, design.phi_b)
    bracket_hz = (2.0 * design.E_C * design.E_J_sigma**3 / s**5) ** 0.25
    return _flux_prefactor(magnet, H0) * design.a_J * TWO_PI * bracket_hz


def coupling_g(design: TransmonDesign, magnet: MagnetSpec, H0: float) -> float:
    """Radiation-pressure coupling g in rad/s.

    g = -mu0 I_x mu_zpf e^r / (8 Phi0) * (2 E_C E_J^Sigma / S^3)^(1/2)
        * sin(2 phi_b) (1 - a_J^2).
    """
    s = squid_factor(design.a_J, design.phi_b)
    bracket_hz = np.sqrt(2.0 * design.E_C * design.E_J_sigma / s**3)
    return (
        0.5
        * _flux_prefactor(magnet, H0)
        * TWO_PI
        * bracket_hz
        * np.sin(2.0 * design.phi_b)
        * (1.0 - design.a_J**2)
    )


def coupling_g_tilde(design: TransmonDesign, magnet: MagnetSpec, H0: float) -> float:
    """Drive-induced coupling g_tilde in rad/s, first order in phi_ac.

    g_tilde = -mu0 I_x mu_zpf e^r sqrt(8 E_C E_J^Sigma) phi_ac / (8 Phi0).
    This is the small-flux limit of ``coupling_g`` under an ac bias; the
    1/d that appears in one published form of the expression is
    dimensionally inconsistent with that limit and is deliberately
    omitted here (the series-expansion test pins the convention).
    """
    if abs(design.phi_ac) > 0.5:
        raise ValueError(
            f"phi_ac = {design.phi_ac} too large for the linear-drive expansion (need <= 0.5)"
        )
    bracket_hz = np.sqrt(8.0 * design.E_C * design.E_J_sigma)
    return 0.5 * _flux_prefactor(magnet, H0) * TWO_PI * bracket_hz * design.phi_ac


def linewidth(omega_m: float, env: Environment) -> float:
    """Magnon linewidth kappa = alpha_G omega_m + kappa_tilde, rad/s."""
    return env.alpha_G * omega_m + env.kappa_tilde


def thermal_occupation(omega_m: float, temperature: float) -> float:
    """Bose-Einstein occupation of the magnon mode."""
    if omega_m <= 0 or temperature <= 0:
        raise ValueError("omega_m and temperature must be positive")
    return float(1.0 / np.expm1(HBAR * omega_m / (KB * temperature)))
