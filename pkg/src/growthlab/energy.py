"""Energy landscape of the stationary problem Delta^2 u = det(D^2 u).

The working norm is ||u||^2 = int |Delta u|^2, the cubic term is
I(u) = int u_x u_y u_xy, and the energy is J = ||u||^2/2 - I.  The Nehari
classification splits the phase space by the sign of ||u||^2 - 3 I(u).
Two integral identities are tracked as residuals rather than assumed:

  cubic pairing:    int u det(D^2 u) = 3 I(u)
  gradient square:  I(u) = -1/4 int Delta(u) |grad u|^2

Both hold on the continuum for clamped fields; their discrete residuals
vanish at O(h^2) on clamped-compatible samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    Field2D,
    dx_values,
    dxy_values,
    dy_values,
    hessian_det_values,
    integrate_values,
    lap_values,
)

N_PLUS = "NPlus"
ON_N = "OnN"
N_MINUS = "NMinus"
ZERO = "Zero"

DEFAULT_NEHARI_TOL = 1e-8


@dataclass(frozen=True)
class NormBundle:
    """(||u||_2, ||Delta u||_2, int |grad u|^4) of one field."""

    l2: float
    h2: float
    w14_4: float


@dataclass(frozen=True)
class NehariClass:
    tag: str
    margin: float  # ||v||^2 - 3 I(v)


def nonlinear_I(v: Field2D) -> float:
    """Cubic functional int v_x v_y v_xy (centered differences, rectangle rule)."""
    h = v.grid.h
    a = v.values
    return integrate_values(dx_values(a, h) * dy_values(a, h) * dxy_values(a, h), h)


def energy_J(v: Field2D) -> float:
    """J(v) = 1/2 int |Delta v|^2 - I(v)."""
    h = v.grid.h
    return 0.5 * integrate_values(lap_values(v.values, h) ** 2, h) - nonlinear_I(v)


def norms(v: Field2D) -> NormBundle:
    h = v.grid.h
    a = v.values
    l2 = np.sqrt(max(integrate_values(a**2, h), 0.0))
    h2 = np.sqrt(max(integrate_values(lap_values(a, h) ** 2, h), 0.0))
    vx = dx_values(a, h)
    vy = dy_values(a, h)
    w14 = integrate_values((vx**2 + vy**2) ** 2, h)
    return NormBundle(float(l2), float(h2), float(w14))


def cubic_pairing_residual(v: Field2D) -> float:
    """int v det(D^2 v) - 3 I(v); small for clamped-compatible fields.

    On the axis-aligned square this also vanishes for merely hinged fields:
    u = 0 along each straight edge kills the tangential gradient component,
    and the edge normals have nu_x * nu_y = 0, so every boundary term of the
    by-parts chain drops.  A curved or rotated boundary would not do that.
    """
    h = v.grid.h
    a = v.values
    pairing = integrate_values(a * hessian_det_values(a, h), h)
    return pairing - 3.0 * nonlinear_I(v)


def gradient_square_residual(v: Field2D) -> float:
    """I(v) + 1/4 int Delta(v) |grad v|^2; the discriminating clamped identity."""
    h = v.grid.h
    a = v.values
    vx = dx_values(a, h)
    vy = dy_values(a, h)
    quarter = 0.25 * integrate_values(lap_values(a, h) * (vx**2 + vy**2), h)
    return nonlinear_I(v) + quarter


def holder_gap(v: Field2D) -> float:
    """1/4 ||Delta v||_2 (int |grad v|^4)^(1/2) - I(v), nonnegative on clamped fields."""
    nb = norms(v)
    return 0.25 * nb.h2 * np.sqrt(nb.w14_4) - nonlinear_I(v)


def nehari_classify(v: Field2D, tol: float = DEFAULT_NEHARI_TOL) -> NehariClass:
    """Classify v against the Nehari manifold by the sign of ||v||^2 - 3 I(v).

    tol is relative to scale = max(||v||^2, |3 I(v)|); the zero field gets its
    own verdict since the manifold excludes it.
    """
    nb = norms(v)
    h2sq = nb.h2**2
    three_i = 3.0 * nonlinear_I(v)
    margin = h2sq - three_i
    scale = max(h2sq, abs(three_i))
    if scale == 0.0:
        return NehariClass(ZERO, 0.0)
    if margin > tol * scale:
        tag = N_PLUS
    elif margin < -tol * scale:
        tag = N_MINUS
    else:
        tag = ON_N
    return NehariClass(tag, float(margin))


def i_gradient_values(a: np.ndarray, h: float) -> np.ndarray:
    """Exact discrete gradient of I in the h-weighted L2 inner product.

    The centered first differences are skew-adjoint and the cross difference
    is self-adjoint under zero padding, so
      grad I = -Dx(vy*vxy) - Dy(vx*vxy) + Dxy(vx*vy),
    a divergence-form estimator of det(D^2 v) consistent at O(h^2).
    """
    vx = dx_values(a, h)
    vy = dy_values(a, h)
    vxy = dxy_values(a, h)
    return (
        -dx_values(vy * vxy, h)
        - dy_values(vx * vxy, h)
        + dxy_values(vx * vy, h)
    )
