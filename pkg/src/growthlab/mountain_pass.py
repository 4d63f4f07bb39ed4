"""Mountain-pass level of the clamped stationary problem.

Two independent estimators of d = min {||v||^6/54 : I(v) = 1}:

  * constrained minimization of the clamped energy form subject to I(v) = 1,
    by H2-preconditioned projected gradient descent with exact constraint
    restoration v <- v / I(v)^(1/3) (I is cubic-homogeneous, so the rescale
    is closed-form and drift-free);
  * the embedding lower bound d >= (8/27) min (int |Delta v|^2)^2 / int |grad v|^4.

All level algebra in this module (d = ||v||^6/54, ray peak s* = ||v||^2/3)
uses the clamped operator form <v, A v> consistently; see matrices.clamped_form
for why the zero-extension form is not interchangeable with it at finite h.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .energy import i_gradient_values, nonlinear_I
from .grid import (
    DIRICHLET,
    Field2D,
    Grid2D,
    clamped_bump,
    dx_values,
    dxy_values,
    dy_values,
    hessian_det_values,
    integrate_values,
    random_clamped_field,
)
from .matrices import apply_matrix, biharmonic_matrix, biharmonic_solver, clamped_form


class RayHasNoPeak(ValueError):
    """The ray through v never crosses the Nehari manifold (I(v) <= 0)."""


class OptimizationError(RuntimeError):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class MountainPassOptions:
    kkt_tol_rel: float = 1e-6     # stop when projected-gradient norm <= tol * objective
    max_iter: int = 100000
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 50


@dataclass
class MountainPassEstimate:
    d_min: float
    d_upper: float
    d_lower: float
    v_star: Field2D = field(repr=False)
    kkt_residual: float
    iterations: int
    level_norm_sq: float          # <v*, A v*>, the norm the level algebra uses
    restart_values: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "d_min": self.d_min,
            "d_upper": self.d_upper,
            "d_lower": self.d_lower,
            "kkt_residual": self.kkt_residual,
            "iterations": self.iterations,
            "level_norm_sq": self.level_norm_sq,
            "restart_values": list(self.restart_values),
        }


def ray_peak_level(v: Field2D) -> float:
    """Peak of s -> J(sv): ||v||^6 / (54 I(v)^2).  Requires I(v) > 0."""
    iv = nonlinear_I(v)
    if iv <= 0.0:
        raise RayHasNoPeak(f"I(v) = {iv:.3e} <= 0: no crossing on this ray")
    f = clamped_form(v.grid, v.values)
    return float(f**3 / (54.0 * iv**2))


def minimize_level(grid: Grid2D, init: Field2D | None = None,
                   opts: MountainPassOptions = MountainPassOptions()) -> MountainPassEstimate:
    """Minimize the clamped energy form over {I(v) = 1} from one start field.

    Each step preconditions both gradients with one bilaplacian solve, projects
    the objective gradient off the constraint gradient, backtracks (Armijo),
    and restores the constraint by the exact cubic rescale.  Returns the full
    estimate record, including the embedding lower bound.
    """
    if grid.bc != DIRICHLET:
        raise ValueError("the level minimization is posed on the clamped grid")
    n, h = grid.n, grid.h
    A = biharmonic_matrix(n, grid.bc)
    lu = biharmonic_solver(n, grid.bc)

    def i_of(a):
        return integrate_values(
            dx_values(a, h) * dy_values(a, h) * dxy_values(a, h), h
        )

    def form(a):
        return float(h**2 * np.dot(a.ravel(), A @ a.ravel()))

    v = (init if init is not None else clamped_bump(grid)).values.copy()
    iv = i_of(v)
    if iv <= 0.0:
        raise RayHasNoPeak(f"init has I = {iv:.3e} <= 0")
    v = v / iv ** (1.0 / 3.0)
    f = form(v)

    kkt = np.inf
    it = 0
    for it in range(1, opts.max_iter + 1):
        g = 2.0 * apply_matrix(A, v)
        gi = i_gradient_values(v, h)
        mg = lu.solve(g.ravel()).reshape(n, n)
        mgi = lu.solve(gi.ravel()).reshape(n, n)
        denom = h**2 * np.sum(gi * mgi)
        alpha = (h**2 * np.sum(gi * mg)) / denom
        step = -(mg - alpha * mgi)
        predicted = -(h**2) * np.sum(g * step)
        kkt = float(np.sqrt(max(predicted, 0.0)))
        if kkt <= opts.kkt_tol_rel * f:
            break
        s = 1.0
        accepted = False
        for _ in range(opts.max_backtracks):
            w = v + s * step
            iw = i_of(w)
            if iw > 0.0:
                w = w / iw ** (1.0 / 3.0)
                fw = form(w)
                if fw <= f - opts.armijo * s * predicted:
                    v, f = w, fw
                    accepted = True
                    break
            s *= opts.backtrack
        if not accepted:
            raise OptimizationError(
                f"line search stalled at iteration {it} (kkt={kkt:.3e})",
                best=Field2D(grid, v),
            )
    else:
        raise OptimizationError(
            f"iteration budget {opts.max_iter} exhausted (kkt={kkt:.3e})",
            best=Field2D(grid, v),
        )

    v_star = Field2D(grid, v)
    d_min = f**3 / 54.0
    s_emb = embedding_constant(grid, opts)
    return MountainPassEstimate(
        d_min=float(d_min),
        d_upper=float(ray_peak_level(v_star)),
        d_lower=float(8.0 / 27.0 * s_emb),
        v_star=v_star,
        kkt_residual=kkt,
        iterations=it,
        level_norm_sq=float(f),
    )


def minimize_level_restarts(grid: Grid2D, opts: MountainPassOptions = MountainPassOptions(),
                            restarts: int = 5, seed: int = 0) -> MountainPassEstimate:
    """Bump start plus seeded random restarts; keeps the least d_min, reports all."""
    best = minimize_level(grid, clamped_bump(grid), opts)
    values = [best.d_min]
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        w = random_clamped_field(grid, rng)
        if nonlinear_I(w) < 0:
            w = -w
        if nonlinear_I(w) <= 0:
            continue
        try:
            est = minimize_level(grid, w, opts)
        except OptimizationError:
            continue
        values.append(est.d_min)
        if est.d_min < best.d_min:
            best = est
    best.restart_values = values
    return best


def embedding_constant(grid: Grid2D, opts: MountainPassOptions = MountainPassOptions()) -> float:
    """min (clamped energy form)^2 / int |grad v|^4 by normalized descent.

    The quotient is degree-0 homogeneous; iterates are renormalized to unit
    form value each step, so plain preconditioned descent converges cleanly.
    """
    if grid.bc != DIRICHLET:
        raise ValueError("the embedding constant is posed on the clamped grid")
    n, h = grid.n, grid.h
    A = biharmonic_matrix(n, grid.bc)
    lu = biharmonic_solver(n, grid.bc)

    def w14(a):
        vx = dx_values(a, h)
        vy = dy_values(a, h)
        return integrate_values((vx**2 + vy**2) ** 2, h), vx, vy

    def quotient(a):
        fa = float(h**2 * np.dot(a.ravel(), A @ a.ravel()))
        w, _, _ = w14(a)
        return fa**2 / w, fa, w

    v = clamped_bump(grid).values.copy()
    q, fa, w = quotient(v)
    v /= np.sqrt(fa)
    q, fa, w = quotient(v)

    for it in range(1, opts.max_iter + 1):
        _, vx, vy = w14(v)
        g_f = 2.0 * apply_matrix(A, v)
        g_w = -4.0 * (
            dx_values((vx**2 + vy**2) * vx, h) + dy_values((vx**2 + vy**2) * vy, h)
        )
        g = (2.0 * fa * w * g_f - fa**2 * g_w) / w**2
        mg = lu.solve(g.ravel()).reshape(n, n)
        predicted = h**2 * np.sum(g * mg)
        if np.sqrt(max(predicted, 0.0)) <= opts.kkt_tol_rel * q:
            break
        s = 1.0
        accepted = False
        for _ in range(opts.max_backtracks):
            wv = v - s * mg
            qw, faw, ww = quotient(wv)
            if np.isfinite(qw) and qw <= q - opts.armijo * s * predicted:
                v = wv / np.sqrt(faw)
                q, fa, w = quotient(v)
                accepted = True
                break
            s *= opts.backtrack
        if not accepted:
            break
    return float(q)


def stationary_solution(est: MountainPassEstimate) -> tuple[Field2D, float]:
    """Scale the constrained minimizer to the ray peak: u* = (||v*||^2/3) v*.

    Returns (u*, stationarity residual), the residual being
    ||A u* - det(D^2 u*)||_2 / ||A u*||_2 on the clamped grid.
    """
    s = est.level_norm_sq / 3.0
    u = s * est.v_star
    grid = u.grid
    A = biharmonic_matrix(grid.n, grid.bc)
    au = apply_matrix(A, u.values)
    det = hessian_det_values(u.values, grid.h)
    num = np.sqrt(integrate_values((au - det) ** 2, grid.h))
    den = np.sqrt(integrate_values(au**2, grid.h))
    return u, float(num / den)
