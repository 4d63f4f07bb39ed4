"""Sine transforms: round-trips, Parseval, diagonalization, eigenvalue oracle."""

import numpy as np
import pytest

import oracle_values as ov
from growthlab.grid import Field2D, Grid2D, NAVIER, biharmonic, integrate
from growthlab.spectral import (
    SpectralField,
    from_physical,
    spectrum,
    to_physical,
    zero_spectral,
)


def test_spectrum_values():
    assert spectrum(1, 1) == pytest.approx(ov.NAVIER_LAMBDA_11, rel=1e-15)
    assert spectrum(1, 2) == pytest.approx(ov.NAVIER_LAMBDA_12, rel=1e-15)
    assert spectrum(2, 3) == spectrum(3, 2) == pytest.approx(ov.NAVIER_LAMBDA_23, rel=1e-15)
    with pytest.raises(ValueError):
        spectrum(0, 1)


def test_single_mode_roundtrip():
    grid = Grid2D(32, NAVIER)
    s = zero_spectral(8)
    s.coeffs[0, 0] = 1.0
    u = to_physical(s, grid)
    X, Y = grid.coords()
    assert np.allclose(u.values, 2.0 * np.sin(np.pi * X) * np.sin(np.pi * Y), atol=1e-13)
    back = from_physical(u, 8)
    assert back.coeffs[0, 0] == pytest.approx(1.0, abs=1e-12)
    off = back.coeffs.copy()
    off[0, 0] = 0.0
    assert np.abs(off).max() <= 1e-12


def test_zero_field_zero_coefficients():
    grid = Grid2D(16, NAVIER)
    u = Field2D(grid, np.zeros((16, 16)))
    assert np.all(from_physical(u, 4).coeffs == 0.0)


def test_random_roundtrip(rng):
    grid = Grid2D(64, NAVIER)
    c = rng.standard_normal((16, 16))
    s = SpectralField(16, c)
    back = from_physical(to_physical(s, grid), 16)
    assert np.abs(back.coeffs - c).max() <= 1e-10


def test_direct_summation_oracle(rng):
    # K = 4: compare the matrix transform against naive double loops
    K, n = 4, 12
    grid = Grid2D(n, NAVIER)
    c = rng.standard_normal((K, K))
    u = to_physical(SpectralField(K, c), grid)
    x = np.arange(1, n + 1) / (n + 1)
    naive = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(1, K + 1):
                for l in range(1, K + 1):
                    acc += c[k - 1, l - 1] * 2.0 * np.sin(k * np.pi * x[i]) * np.sin(l * np.pi * x[j])
            naive[i, j] = acc
    assert np.abs(u.values - naive).max() <= 1e-12


def test_aliasing_rejected():
    grid = Grid2D(8, NAVIER)
    with pytest.raises(ValueError):
        to_physical(zero_spectral(9), grid)
    with pytest.raises(ValueError):
        from_physical(Field2D(grid, np.zeros((8, 8))), 9)


def test_parseval(rng):
    grid = Grid2D(48, NAVIER)
    c = rng.standard_normal((12, 12))
    u = to_physical(SpectralField(12, c), grid)
    mass = integrate(Field2D(grid, u.values**2))
    assert mass == pytest.approx(float(np.sum(c**2)), rel=1e-12)


def test_diagonalization():
    # FD bilaplacian on a single mode reproduces the exact eigenvalue at O(h^2)
    errs = {}
    for n in (64, 128):
        grid = Grid2D(n, NAVIER)
        s = zero_spectral(4)
        s.coeffs[1, 2] = 1.0
        u = to_physical(s, grid)
        bi = biharmonic(u)
        lam = spectrum(2, 3)
        errs[n] = float(np.abs(bi.values - lam * u.values).max()) / lam
    assert errs[64] < 0.05
    assert 3.3 <= errs[64] / errs[128] <= 4.7


def test_mode_ode_closed_form():
    # linear coefficient flow: c'(t) = -lambda c(t) has closed-form decay
    lam = spectrum(1, 2)
    t = 0.01
    assert np.exp(-lam * t) == pytest.approx(np.exp(-ov.NAVIER_LAMBDA_12 * t), rel=1e-14)
