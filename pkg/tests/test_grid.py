"""Stencil exactness, refinement order, linearity, and quadrature oracles."""

import numpy as np
import pytest

import oracle_values as ov
from growthlab.grid import (
    DIRICHLET,
    Field2D,
    Grid2D,
    NAVIER,
    biharmonic,
    clamped_bump,
    gradient,
    hessian_det,
    integrate,
    laplacian,
    random_clamped_field,
    sample,
    zero_field,
)

from conftest import sine_field


def max_interior_error(field, exact, margin):
    """Max-norm error at nodes at least `margin` nodes away from the walls."""
    n = field.grid.n
    sl = slice(margin, n - margin)
    return float(np.abs(field.values[sl, sl] - exact[sl, sl]).max())


def test_grid_invariants():
    g = Grid2D(16)
    assert g.h * (g.n + 1) == 1.0
    with pytest.raises(ValueError):
        Grid2D(3)
    with pytest.raises(ValueError):
        Grid2D(8, bc="periodic")


def test_field_validation(grid32):
    with pytest.raises(ValueError):
        Field2D(grid32, np.zeros((3, 3)))
    bad = zero_field(grid32)
    bad.values[0, 0] = np.nan
    with pytest.raises(ValueError):
        bad.check_finite()


def test_laplacian_exact_on_quadratic():
    grid = Grid2D(24)
    u = sample(grid, lambda X, Y: X**2 + Y**2)
    lap = laplacian(u)
    assert max_interior_error(lap, np.full((24, 24), 4.0), 1) < 1e-10


def test_laplacian_zero():
    grid = Grid2D(8)
    assert np.all(laplacian(zero_field(grid)).values == 0.0)


def test_laplacian_sine_refinement():
    errs = {}
    for n in (64, 128):
        grid = Grid2D(n)
        u = sine_field(grid)
        exact = -2.0 * np.pi**2 * u.values
        errs[n] = float(np.abs(laplacian(u).values - exact).max())
    assert 3.5 <= errs[64] / errs[128] <= 4.5


def test_biharmonic_exact_on_x2y2():
    grid = Grid2D(24, DIRICHLET)
    u = sample(grid, lambda X, Y: X**2 * Y**2)
    bi = biharmonic(u)
    assert max_interior_error(bi, np.full((24, 24), 8.0), 2) < 1e-8
    assert np.all(biharmonic(zero_field(grid)).values == 0.0)


def test_biharmonic_navier_sine_refinement():
    errs = {}
    for n in (64, 128):
        grid = Grid2D(n, NAVIER)
        u = sine_field(grid)
        exact = 4.0 * np.pi**4 * u.values
        errs[n] = float(np.abs(biharmonic(u).values - exact).max())
    assert 3.5 <= errs[64] / errs[128] <= 4.5


def test_hessian_det_quadratics():
    grid = Grid2D(20)
    paraboloid = sample(grid, lambda X, Y: X**2 + Y**2)
    assert max_interior_error(hessian_det(paraboloid), np.full((20, 20), 4.0), 1) < 1e-9
    saddle = sample(grid, lambda X, Y: X * Y)
    assert max_interior_error(hessian_det(saddle), np.full((20, 20), -1.0), 1) < 1e-10
    cylinder = sample(grid, lambda X, Y: X**2)
    assert max_interior_error(hessian_det(cylinder), np.zeros((20, 20)), 1) < 1e-10


def test_gradient_linears_and_refinement():
    grid = Grid2D(20)
    ux, uy = gradient(sample(grid, lambda X, Y: X + 0.0 * Y))
    assert max_interior_error(ux, np.ones((20, 20)), 1) < 1e-12
    assert max_interior_error(uy, np.zeros((20, 20)), 1) < 1e-12
    errs = {}
    for n in (64, 128):
        g = Grid2D(n)
        u = sine_field(g)
        gx, gy = gradient(u)
        X, Y = g.coords()
        ex = np.pi * np.cos(np.pi * X) * np.sin(np.pi * Y)
        ey = np.pi * np.sin(np.pi * X) * np.cos(np.pi * Y)
        errs[n] = max(float(np.abs(gx.values - ex).max()), float(np.abs(gy.values - ey).max()))
    assert 3.5 <= errs[64] / errs[128] <= 4.5


def test_integrate_constant():
    grid = Grid2D(16)
    one = sample(grid, lambda X, Y: np.ones_like(X))
    assert integrate(one) == pytest.approx((grid.n / (grid.n + 1)) ** 2, rel=1e-14)


def test_integrate_oracles():
    # sine: 4/pi^2; bump: 1/900, both to O(h^2) with measured constants
    for n, tol_sine, tol_bump in ((32, 4e-3, 2e-6), (64, 1e-3, 5e-7)):
        grid = Grid2D(n)
        assert integrate(sine_field(grid)) == pytest.approx(ov.SINE_INTEGRAL, abs=tol_sine)
        assert integrate(clamped_bump(grid)) == pytest.approx(ov.BUMP_INTEGRAL, abs=tol_bump)


def test_operator_linearity(rng, grid32):
    u = random_clamped_field(grid32, rng)
    v = random_clamped_field(grid32, rng)
    a, b = 1.7, -0.4
    for op in (laplacian, hessian_det):
        combo = op(a * u + b * v).values
        if op is laplacian:
            parts = a * op(u).values + b * op(v).values
            assert np.allclose(combo, parts, rtol=1e-12, atol=1e-10)
    lin = laplacian(a * u + b * v).values
    assert np.allclose(lin, a * laplacian(u).values + b * laplacian(v).values,
                       rtol=1e-12, atol=1e-10)
    bi = biharmonic(a * u + b * v).values
    assert np.allclose(bi, a * biharmonic(u).values + b * biharmonic(v).values,
                       rtol=1e-12, atol=1e-6)


def test_laplacian_symmetry(rng):
    # <lap u, v> = <u, lap v> exactly for the discrete operator with zero boundary
    grid = Grid2D(16)
    u = random_clamped_field(grid, rng)
    v = random_clamped_field(grid, rng)
    lhs = integrate(Field2D(grid, laplacian(u).values * v.values))
    rhs = integrate(Field2D(grid, u.values * laplacian(v).values))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-14)
