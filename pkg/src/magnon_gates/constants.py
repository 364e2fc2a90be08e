"""Physical constants used throughout the package (SI units)."""

import numpy as np
from scipy import constants as _const

HBAR = _const.hbar
H_PLANCK = _const.h
KB = _const.k
MU0 = _const.mu_0
E_CHARGE = _const.e
PHI0 = _const.h / (2.0 * _const.e)  # superconducting flux quantum, Wb

TWO_PI = 2.0 * np.pi
