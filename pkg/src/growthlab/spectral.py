"""Double-sine spectral representation for the hinged (Navier) square.

The functions phi_kl(x,y) = 2 sin(k pi x) sin(l pi y) are L2-orthonormal on
the unit square and diagonalize the bilaplacian under u = Delta u = 0:
Delta^2 phi_kl = pi^4 (k^2+l^2)^2 phi_kl.  Transforms between coefficient
space and nodal values are plain matrix products with the sine sample matrix;
at desk scale this is cheap and bitwise deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Field2D, Grid2D, NAVIER


def spectrum(k: int, l: int) -> float:
    """Hinged-plate bilaplacian eigenvalue of the (k,l) sine mode."""
    if k < 1 or l < 1:
        raise ValueError("mode indices start at 1")
    return float(np.pi**4 * (k**2 + l**2) ** 2)


@dataclass
class SpectralField:
    """Truncated double-sine coefficient array c_kl, modes 1..K per direction."""

    K: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (self.K, self.K):
            raise ValueError(f"coefficient shape {self.coeffs.shape} != ({self.K},{self.K})")

    def copy(self) -> "SpectralField":
        return SpectralField(self.K, self.coeffs.copy())


def zero_spectral(K: int) -> SpectralField:
    return SpectralField(K, np.zeros((K, K)))


def _sine_matrix(n: int, K: int) -> np.ndarray:
    # S[i, k] = sin((k+1) pi x_i), x_i = (i+1)/(n+1)
    x = np.arange(1, n + 1) / (n + 1)
    k = np.arange(1, K + 1)
    return np.sin(np.pi * np.outer(x, k))


def to_physical(s: SpectralField, grid: Grid2D) -> Field2D:
    """Evaluate the sine sum at the grid nodes.  Requires K <= n."""
    if s.K > grid.n:
        raise ValueError(f"K={s.K} exceeds n={grid.n}: retained modes would alias")
    S = _sine_matrix(grid.n, s.K)
    return Field2D(grid, 2.0 * (S @ s.coeffs @ S.T))


def from_physical(u: Field2D, K: int) -> SpectralField:
    """Discrete sine coefficients of a nodal field.  Requires K <= n.

    Exact inverse of to_physical for band-limited fields: the interior sine
    samples satisfy sum_i sin(k pi x_i) sin(k' pi x_i) = (n+1)/2 delta_kk'.
    """
    n = u.grid.n
    if K > n:
        raise ValueError(f"K={K} exceeds n={n}: coefficients would alias")
    S = _sine_matrix(n, K)
    return SpectralField(K, (2.0 / (n + 1) ** 2) * (S.T @ u.values @ S))


def spectrum_grid(K: int) -> np.ndarray:
    """K x K array of bilaplacian eigenvalues, entry (k-1, l-1) = spectrum(k, l)."""
    k = np.arange(1, K + 1)
    ksq = k[:, None] ** 2 + k[None, :] ** 2
    return np.pi**4 * ksq.astype(float) ** 2


def dealiased_grid(K: int, n: int | None = None) -> Grid2D:
    """Evaluation grid for quadratic nonlinearities: n >= 2K removes their aliasing."""
    n_eval = max(2 * K, n or 0)
    return Grid2D(n_eval, NAVIER)
