"""Sparse operator matrices on the interior grid, with factorization caches.

The 5-point Laplacian matrix L encodes the zero boundary ring.  The hinged
bilaplacian is exactly L @ L; the clamped one adds the even-reflection ghost
contribution +2/h^4 on the diagonal of wall-adjacent nodes (+4/h^4 in the
corners).  Both agree entrywise with the stencil operators in grid.py.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grid import DIRICHLET, Grid2D


@lru_cache(maxsize=32)
def laplacian_matrix(n: int) -> sp.csr_matrix:
    h = 1.0 / (n + 1)
    T = sp.diags(
        [np.full(n - 1, 1.0), np.full(n, -2.0), np.full(n - 1, 1.0)], [-1, 0, 1]
    )
    I = sp.identity(n)
    return ((sp.kron(I, T) + sp.kron(T, I)) / h**2).tocsr()


@lru_cache(maxsize=32)
def biharmonic_matrix(n: int, bc: str) -> sp.csr_matrix:
    h = 1.0 / (n + 1)
    L = laplacian_matrix(n)
    A = (L @ L).tocsr()
    if bc == DIRICHLET:
        wall = np.zeros((n, n))
        wall[0, :] += 1.0
        wall[-1, :] += 1.0
        wall[:, 0] += 1.0
        wall[:, -1] += 1.0
        A = (A + sp.diags(2.0 * wall.ravel() / h**4)).tocsr()
    return A


@lru_cache(maxsize=8)
def biharmonic_solver(n: int, bc: str):
    """LU of the bilaplacian itself (preconditioner / direct stationary solves)."""
    return spla.splu(biharmonic_matrix(n, bc).tocsc())


class _SteppingCache:
    """LU factors of (I + dt*A) keyed by dt, bounded size, per (n, bc)."""

    def __init__(self, n: int, bc: str, maxsize: int = 48):
        self.A = biharmonic_matrix(n, bc)
        self.n = n
        self.maxsize = maxsize
        self._lus: dict[float, object] = {}

    def solve(self, dt: float, rhs: np.ndarray) -> np.ndarray:
        lu = self._lus.get(dt)
        if lu is None:
            if len(self._lus) >= self.maxsize:
                self._lus.clear()
            lu = spla.splu((sp.identity(self.n**2) + dt * self.A).tocsc())
            self._lus[dt] = lu
        return lu.solve(rhs)


@lru_cache(maxsize=8)
def stepping_cache(n: int, bc: str) -> _SteppingCache:
    return _SteppingCache(n, bc)


def apply_matrix(A: sp.spmatrix, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    return (A @ a.ravel()).reshape(n, n)


def clamped_form(grid: Grid2D, a: np.ndarray) -> float:
    """Quadratic form h^2 <a, A a> of the grid's bilaplacian matrix.

    For clamped-compatible fields this is the discrete realization of
    int |Delta u|^2 whose minimizers keep u_nu -> 0; the zero-extension
    form h^2 |L a|^2 differs from it by an O(h) boundary term.
    """
    A = biharmonic_matrix(grid.n, grid.bc)
    return float(grid.h**2 * np.dot(a.ravel(), A @ a.ravel()))
