"""Level estimation: scale invariance, descent, KKT, bound ordering, stationarity."""

import numpy as np
import pytest

import oracle_values as ov
from growthlab.energy import nehari_classify, nonlinear_I
from growthlab.grid import DIRICHLET, Grid2D, NAVIER, clamped_bump, random_clamped_field
from growthlab.matrices import clamped_form
from growthlab.mountain_pass import (
    MountainPassOptions,
    RayHasNoPeak,
    embedding_constant,
    minimize_level,
    minimize_level_restarts,
    ray_peak_level,
    stationary_solution,
)

OPTS = MountainPassOptions(kkt_tol_rel=1e-7)


@pytest.fixture(scope="module")
def est32():
    return minimize_level(Grid2D(32, DIRICHLET), opts=OPTS)


def test_ray_peak_scale_invariance(bump32):
    base = ray_peak_level(bump32)
    for c in (0.5, 3.0):
        assert ray_peak_level(c * bump32) == pytest.approx(base, rel=1e-11)


def test_ray_peak_rejects_wrong_sign(bump32):
    with pytest.raises(RayHasNoPeak):
        ray_peak_level(-1.0 * bump32)


def test_ray_peak_bump_oracle():
    # the symmetric bump's peak approaches its closed-form value; the clamped
    # quadratic form carries the boundary layer, so the band is percent-level
    grid = Grid2D(64, DIRICHLET)
    assert ray_peak_level(clamped_bump(grid)) == pytest.approx(ov.BUMP_RAY_PEAK, rel=0.1)


def test_minimizer_contract(est32):
    assert nonlinear_I(est32.v_star) == pytest.approx(1.0, abs=1e-9)
    assert est32.kkt_residual <= OPTS.kkt_tol_rel * est32.level_norm_sq
    assert est32.d_min == pytest.approx(est32.level_norm_sq**3 / 54.0, rel=1e-13)
    assert est32.d_min == pytest.approx(est32.d_upper, rel=1e-10)
    assert est32.d_lower <= est32.d_min
    assert est32.d_min == pytest.approx(2985.7, rel=2e-3)  # pinned by this build


def test_minimality_over_random_rays(est32, rng):
    grid = est32.v_star.grid
    for _ in range(20):
        w = random_clamped_field(grid, rng)
        if nonlinear_I(w) < 0:
            w = -1.0 * w
        if nonlinear_I(w) <= 0:
            continue
        assert ray_peak_level(w) >= est32.d_min * (1.0 - 1e-12)


def test_grid_stability_and_restart_spread():
    d32 = minimize_level(Grid2D(32, DIRICHLET), opts=OPTS).d_min
    est64 = minimize_level(Grid2D(64, DIRICHLET), opts=OPTS)
    assert abs(est64.d_min - d32) / est64.d_min <= 0.05
    multi = minimize_level_restarts(Grid2D(24, DIRICHLET), OPTS, restarts=3, seed=11)
    assert multi.restart_values
    assert min(multi.restart_values) == pytest.approx(multi.d_min, rel=1e-12)


def test_embedding_bound_ordering():
    grid = Grid2D(32, DIRICHLET)
    s32 = embedding_constant(grid, OPTS)
    s64 = embedding_constant(Grid2D(64, DIRICHLET), OPTS)
    assert abs(s64 - s32) / s64 <= 0.05
    est = minimize_level(grid, opts=OPTS)
    assert (8.0 / 27.0) * s32 <= est.d_min


def test_embedding_scale_invariance(bump32):
    # the quotient the embedding solver minimizes is degree-0 homogeneous
    grid = bump32.grid
    from growthlab.energy import norms

    def quotient(v):
        fa = clamped_form(grid, v.values)
        return fa**2 / norms(v).w14_4

    q = quotient(bump32)
    for c in (0.5, 3.0):
        assert quotient(c * bump32) == pytest.approx(q, rel=1e-10)


def test_stationary_solution(est32):
    u_star, res = stationary_solution(est32)
    # ray-peak algebra: the clamped-form energy of u* equals d_min exactly
    f = clamped_form(u_star.grid, u_star.values)
    j_form = 0.5 * f - nonlinear_I(u_star)
    assert j_form == pytest.approx(est32.d_min, rel=1e-10)
    # stationarity residual at n=32, pinned by the refinement study
    assert res <= 0.08
    est64 = minimize_level(Grid2D(64, DIRICHLET), opts=OPTS)
    _, res64 = stationary_solution(est64)
    assert res64 <= 0.02
    assert res64 < res
    # the scaled minimizer sits near the Nehari manifold; the zero-extension
    # margin carries the O(h) boundary-form gap, hence the wide band
    tag = nehari_classify(u_star, tol=8.0 * u_star.grid.h).tag
    assert tag == "OnN"


def test_descent_monotonicity():
    # objective values along the iteration are non-increasing by construction;
    # re-verify via a crude re-run with a tiny budget that must not blow up
    grid = Grid2D(16, DIRICHLET)
    opts = MountainPassOptions(kkt_tol_rel=1e-3, max_iter=50)
    est = minimize_level(grid, opts=opts)
    assert est.iterations <= 50
    assert est.d_min > 0


def test_rejects_hinged_grid():
    with pytest.raises(ValueError):
        minimize_level(Grid2D(16, NAVIER))
