"""Frozen closed-form oracle values used by the test suite.

Regenerate with `python tests/make_oracle_values.py`; every number here is an
exact rational or a closed form evaluated by symbolic integration, never by
the code under test.
"""

import math

PI = math.pi

# clamped polynomial bump v = x^2 (1-x)^2 y^2 (1-y)^2
BUMP_INTEGRAL = 1.0 / 900.0                     # int v
BUMP_L2_SQ = 1.0 / 396900.0                     # int v^2
BUMP_H2_SQ = 4.0 / 1225.0                       # int |Delta v|^2
BUMP_I = 4.0 / 12006225.0                       # int v_x v_y v_xy
BUMP_W14 = 202.0 / 34493884425.0                # int |grad v|^4
BUMP_J = 19598.0 / 12006225.0                   # BUMP_H2_SQ/2 - BUMP_I
BUMP_RAY_PEAK = 7115526.0 / 1225.0              # BUMP_H2_SQ^3 / (54 BUMP_I^2)
BUMP_HOLDER_GAP = 7.600570379638772e-07         # 1/4 sqrt(H2_SQ * W14) - I

# first sine mode v = sin(pi x) sin(pi y)
SINE_INTEGRAL = 4.0 / PI**2                     # int v
SINE_L2_SQ = 0.25
SINE_H2_SQ = PI**4
SINE_I = 4.0 * PI**2 / 9.0
SINE_J = PI**4 / 2.0 - 4.0 * PI**2 / 9.0        # ~ 44.318
SINE_J_NEG = PI**4 / 2.0 + 4.0 * PI**2 / 9.0    # ~ 53.091 (J is not even)
SINE_GRADSQ_GAP = -4.0 * PI**2 / 9.0            # continuum gradient-square residual

# hinged bilaplacian eigenvalues
NAVIER_LAMBDA_11 = 4.0 * PI**4                  # ~ 389.636
NAVIER_LAMBDA_12 = 25.0 * PI**4                 # ~ 2435.23
NAVIER_LAMBDA_23 = 169.0 * PI**4

# radial profiles
PHI_PARABOLA = -51.0 / 70.0                     # Phi(1 - r^2)
PHI_HINGED_PROFILE = -5083.0 / 2520.0           # Phi(2(1-r^2) + (1-r^2)^2)
