"""Closed-form constants of the two-shock counterexample.

Every value is built from surds at import time; nothing is typed in as a
decimal literal.
"""
from math import sqrt

S35 = sqrt(35)
S915 = sqrt(915)
S1281 = sqrt(1281)

# Riemann data (rho_-, u_-, v_-) and (rho_+, u_+, v_+) = (rho_-, u_-, -v_-)
RHO_MINUS = 1.0
V_MINUS = 57 * S35 / 10 + 59 * S915 / 30

# fan subsolution
RHO1 = 3.0
U1 = 0.0
V1 = 0.0
GAMMA1 = -1121 * S1281 / 40 - 28013 / 24
DELTA1 = 0.0
C1 = 1121 * S1281 / 20 + 28037 / 12
MU0 = -57 * S35 / 20 - 59 * S915 / 60
MU1 = -MU0

# states and speeds of the two Riemann problems at t = T0
RHO2 = 60.0
V2 = 57 * S35 / 10
MU2 = -S915 / 30 + 57 * S35 / 10
MU3 = 6 * S35
MU4 = -MU3
MU5 = -MU2

# action densities
A_MINUS = 1121 * S1281 / 20 + 28045 / 12
A_WILD = 3363 * S1281 / 40 + 27965 / 8
A_1 = -9.0
A_2 = 61029 / 2

K_EX = (25590093 * S35 + 4675573 * S915) / 800


def k_1d(rho_m: float, sigma: float) -> float:
    """Action coefficient of the one-dimensional solution, A = K_1d T^2."""
    return (3349377 * S35 / 100 + 6149393 * S915 / 900
            - sigma * (2 * rho_m**2 + 1121 * S1281 / 10 + 28045 / 6))


def k_ex_minus_k_1d(rho_m: float, sigma: float) -> float:
    return ((2 * rho_m**2 + 1121 * S1281 / 10 + 28045 / 6) * sigma
            - 1204923 * S35 / 800 - 7114987 * S915 / 7200)
