"""Uniform grid on the unit square and the finite-difference calculus on it.

Fields live on the n x n interior nodes of a uniform grid over (0,1)^2 with
spacing h = 1/(n+1); the value of u on the boundary ring is identically zero
for both boundary-condition flavors.  All derivative operators are centered
second-order stencils.  Only the fourth-order operator needs values outside
the closed square, supplied by ghost reflection:

  * clamped ("dirichlet"):  u(-h) =  u(h)   encodes  u_nu = 0 on the wall,
  * hinged  ("navier"):     u(-h) = -u(h)   encodes  Delta u = 0 on the wall.

Quadrature is the interior rectangle rule h^2 * sum, consistent with the zero
boundary and with the second-order stencils.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DIRICHLET = "dirichlet"
NAVIER = "navier"


@dataclass(frozen=True)
class Grid2D:
    """Interior-node descriptor of the unit square: n nodes per side, bc tag."""

    n: int
    bc: str = DIRICHLET

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"grid needs n >= 4 interior nodes per side, got {self.n}")
        if self.bc not in (DIRICHLET, NAVIER):
            raise ValueError(f"unknown boundary-condition tag {self.bc!r}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n + 1)

    def coords(self):
        """Meshgrid (X, Y) of interior node coordinates, ij-indexed."""
        x = np.arange(1, self.n + 1) * self.h
        X, Y = np.meshgrid(x, x, indexing="ij")
        return X, Y


@dataclass
class Field2D:
    """Grid function: interior nodal values of a scalar field, zero on the boundary."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid n={self.grid.n}"
            )

    def check_finite(self) -> "Field2D":
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")
        return self

    def copy(self) -> "Field2D":
        return Field2D(self.grid, self.values.copy())

    def __add__(self, other: "Field2D") -> "Field2D":
        return Field2D(self.grid, self.values + other.values)

    def __sub__(self, other: "Field2D") -> "Field2D":
        return Field2D(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "Field2D":
        return Field2D(self.grid, c * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "Field2D":
        return Field2D(self.grid, -self.values)


def zero_field(grid: Grid2D) -> Field2D:
    return Field2D(grid, np.zeros((grid.n, grid.n)))


def sample(grid: Grid2D, f) -> Field2D:
    """Sample a callable f(x, y) (vectorized) at the interior nodes."""
    X, Y = grid.coords()
    return Field2D(grid, np.asarray(f(X, Y), dtype=float))


# ---------------------------------------------------------------------------
# array-level stencils (values padded with the zero boundary ring)
# ---------------------------------------------------------------------------

def _pad(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    p = np.zeros((n + 2, n + 2))
    p[1:-1, 1:-1] = a
    return p


def lap_values(a: np.ndarray, h: float) -> np.ndarray:
    p = _pad(a)
    return (p[2:, 1:-1] + p[:-2, 1:-1] + p[1:-1, 2:] + p[1:-1, :-2] - 4.0 * a) / h**2


def dx_values(a: np.ndarray, h: float) -> np.ndarray:
    p = _pad(a)
    return (p[2:, 1:-1] - p[:-2, 1:-1]) / (2.0 * h)


def dy_values(a: np.ndarray, h: float) -> np.ndarray:
    p = _pad(a)
    return (p[1:-1, 2:] - p[1:-1, :-2]) / (2.0 * h)


def dxx_values(a: np.ndarray, h: float) -> np.ndarray:
    p = _pad(a)
    return (p[2:, 1:-1] - 2.0 * a + p[:-2, 1:-1]) / h**2


def dyy_values(a: np.ndarray, h: float) -> np.ndarray:
    p = _pad(a)
    return (p[1:-1, 2:] - 2.0 * a + p[1:-1, :-2]) / h**2


def dxy_values(a: np.ndarray, h: float) -> np.ndarray:
    p = _pad(a)
    return (p[2:, 2:] - p[2:, :-2] - p[:-2, 2:] + p[:-2, :-2]) / (4.0 * h**2)


def hessian_det_values(a: np.ndarray, h: float) -> np.ndarray:
    return dxx_values(a, h) * dyy_values(a, h) - dxy_values(a, h) ** 2


def biharmonic_values(a: np.ndarray, h: float, bc: str) -> np.ndarray:
    """13-point bilaplacian: two ghost layers, outer one reflected per bc."""
    n = a.shape[0]
    p = np.zeros((n + 4, n + 4))
    p[2:-2, 2:-2] = a
    s = 1.0 if bc == DIRICHLET else -1.0
    p[0, 2:-2] = s * a[0, :]
    p[-1, 2:-2] = s * a[-1, :]
    p[2:-2, 0] = s * a[:, 0]
    p[2:-2, -1] = s * a[:, -1]
    c = p[2:-2, 2:-2]
    out = (
        p[:-4, 2:-2] + p[4:, 2:-2] + p[2:-2, :-4] + p[2:-2, 4:]
        + 2.0 * (p[1:-3, 1:-3] + p[1:-3, 3:-1] + p[3:-1, 1:-3] + p[3:-1, 3:-1])
        - 8.0 * (p[1:-3, 2:-2] + p[3:-1, 2:-2] + p[2:-2, 1:-3] + p[2:-2, 3:-1])
        + 20.0 * c
    )
    return out / h**4


# ---------------------------------------------------------------------------
# field-level operators
# ---------------------------------------------------------------------------

def laplacian(u: Field2D) -> Field2D:
    """Centered 5-point Laplacian; boundary neighbors read as zero."""
    return Field2D(u.grid, lap_values(u.values, u.grid.h))


def biharmonic(u: Field2D) -> Field2D:
    """13-point bilaplacian with ghost reflection chosen by the grid's bc tag."""
    return Field2D(u.grid, biharmonic_values(u.values, u.grid.h, u.grid.bc))


def gradient(u: Field2D) -> tuple[Field2D, Field2D]:
    """Centered first differences (u_x, u_y)."""
    h = u.grid.h
    return (Field2D(u.grid, dx_values(u.values, h)),
            Field2D(u.grid, dy_values(u.values, h)))


def hessian_det(u: Field2D) -> Field2D:
    """Nodewise u_xx u_yy - u_xy^2 from centered second differences."""
    return Field2D(u.grid, hessian_det_values(u.values, u.grid.h))


def integrate(w: Field2D) -> float:
    """Interior rectangle rule h^2 * sum."""
    return float(w.grid.h**2 * np.sum(w.values))


def integrate_values(a: np.ndarray, h: float) -> float:
    return float(h**2 * np.sum(a))


def l2_norm(u: Field2D) -> float:
    return float(np.sqrt(max(integrate_values(u.values**2, u.grid.h), 0.0)))


# ---------------------------------------------------------------------------
# samplers used by property sweeps, optimizer restarts, and experiments
# ---------------------------------------------------------------------------

def clamped_bump(grid: Grid2D) -> Field2D:
    """The polynomial bump x^2(1-x)^2 y^2(1-y)^2; vanishes with its gradient on the walls."""
    return sample(grid, lambda X, Y: (X * (1 - X)) ** 2 * (Y * (1 - Y)) ** 2)


def random_clamped_field(grid: Grid2D, rng: np.random.Generator, modes: int = 4) -> Field2D:
    """Random combination sum a_kl B_k(x) B_l(y) with B_k = sin(k pi x) x(1-x).

    Every B_k vanishes to second order at the walls, so samples are compatible
    with the clamped boundary (u and u_nu both ~ 0 at the wall to O(h^2)).
    """
    X, Y = grid.coords()
    a = rng.standard_normal((modes, modes))
    bx = [np.sin(k * np.pi * X) * X * (1 - X) for k in range(1, modes + 1)]
    by = [np.sin(l * np.pi * Y) * Y * (1 - Y) for l in range(1, modes + 1)]
    vals = np.zeros_like(X)
    for k in range(modes):
        for l in range(modes):
            vals += a[k, l] * bx[k] * by[l]
    return Field2D(grid, vals)
