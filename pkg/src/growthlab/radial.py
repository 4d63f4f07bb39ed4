"""Radial hinged problem on the unit disk: u_t = u_r u_rr / r - Delta_r^2 u.

Profiles live on r_j = j/m, j = 0..m, with u(1) = 0 pinned and the origin
handled by symmetry (ghost u(-hr) = u(hr), so u_r(0) = 0 exactly and
Delta_r u(0) = 2 u_rr(0); the nonlinear quotient u_r u_rr / r tends to
u_rr(0)^2 there).  The fourth-order operator is the square of the discrete
radial Laplacian matrix, which imposes Delta_r u(1) = 0 through its own
boundary row - the hinged condition is inherited, not re-discretized.

The blow-up functional Phi(u) = int_0^1 (4/5 r^5 - 9/4 r^4 + 5/2 r^2) u_r dr
decreases to -infinity along exploding solutions; its by-parts twin
-int (4r^4 - 9r^3 + 5r) u dr and its evolution identity
  dPhi/dt = int (6r-9) u_r^2 r dr - 36 int u_r r dr
are tracked per step.  These runs cease to exist by gradient steepening: the
r-weighted L2 norm stays modest while max|u_r| explodes, so the verdict rule
keys on gradient growth plus dt collapse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .evolution import BLOW_UP, DECAYED, FateVerdict, UNDECIDED


@dataclass
class RadialField:
    """Radial profile u_j at r_j = j/m, j = 0..m, with u_m = 0."""

    m: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.m + 1,):
            raise ValueError(f"need {self.m + 1} nodes, got {self.values.shape}")
        if self.values[-1] != 0.0:
            raise ValueError("boundary value u(1) must be zero")

    @property
    def hr(self) -> float:
        return 1.0 / self.m

    @property
    def r(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    def copy(self) -> "RadialField":
        return RadialField(self.m, self.values.copy())


def radial_sample(m: int, f) -> RadialField:
    r = np.arange(m + 1) / m
    vals = np.asarray(f(r), dtype=float)
    vals[-1] = 0.0
    return RadialField(m, vals)


def hinged_profile(r: np.ndarray) -> np.ndarray:
    """2(1-r^2) + (1-r^2)^2: vanishes at r=1 together with its radial Laplacian."""
    return 2.0 * (1.0 - r**2) + (1.0 - r**2) ** 2


def radial_operators(u: RadialField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u_r, u_rr, Delta_r u) at all nodes, centered; one-sided second order at r=1."""
    a = u.values
    m, hr, r = u.m, u.hr, u.r
    ur = np.zeros(m + 1)
    ur[1:m] = (a[2:] - a[:-2]) / (2 * hr)
    ur[0] = 0.0
    ur[m] = (3 * a[m] - 4 * a[m - 1] + a[m - 2]) / (2 * hr)
    urr = np.zeros(m + 1)
    urr[1:m] = (a[2:] - 2 * a[1:m] + a[:-2]) / hr**2
    urr[0] = 2.0 * (a[1] - a[0]) / hr**2
    urr[m] = (2 * a[m] - 5 * a[m - 1] + 4 * a[m - 2] - a[m - 3]) / hr**2
    lap = np.zeros(m + 1)
    lap[0] = 2.0 * urr[0]
    lap[1:] = urr[1:] + ur[1:] / r[1:]
    return ur, urr, lap


@lru_cache(maxsize=16)
def radial_laplacian_matrix(m: int) -> sp.csr_matrix:
    """Delta_r on the unknowns u_0..u_{m-1} (u_m = 0 implicit)."""
    hr = 1.0 / m
    r = np.arange(m + 1) * hr
    G = sp.lil_matrix((m, m))
    G[0, 0] = -4.0 / hr**2
    G[0, 1] = 4.0 / hr**2
    for j in range(1, m):
        G[j, j - 1] = 1.0 / hr**2 - 1.0 / (2 * hr * r[j])
        G[j, j] = -2.0 / hr**2
        if j + 1 < m:
            G[j, j + 1] = 1.0 / hr**2 + 1.0 / (2 * hr * r[j])
    return G.tocsr()


@lru_cache(maxsize=16)
def radial_bilaplacian_matrix(m: int) -> sp.csr_matrix:
    # squaring G makes the outer application read Delta_r u(1) = 0 implicitly
    G = radial_laplacian_matrix(m)
    return (G @ G).tocsr()


POLY_WEIGHT = (0.8, -2.25, 2.5)  # coefficients of 4/5 r^5 - 9/4 r^4 + 5/2 r^2 on u_r


def blowup_functional(u: RadialField) -> float:
    """Trapezoid of (4/5 r^5 - 9/4 r^4 + 5/2 r^2) u_r over [0, 1]."""
    r = u.r
    ur, _, _ = radial_operators(u)
    w = POLY_WEIGHT[0] * r**5 + POLY_WEIGHT[1] * r**4 + POLY_WEIGHT[2] * r**2
    return float(np.trapezoid(w * ur, dx=u.hr))


def blowup_functional_byparts(u: RadialField) -> float:
    """The by-parts twin -int (4r^4 - 9r^3 + 5r) u dr of the same functional."""
    r = u.r
    return float(-np.trapezoid((4 * r**4 - 9 * r**3 + 5 * r) * u.values, dx=u.hr))


def functional_rhs(u: RadialField) -> float:
    """int (6r - 9) u_r^2 r dr - 36 int u_r r dr (the dPhi/dt identity's RHS)."""
    r = u.r
    ur, _, _ = radial_operators(u)
    first = np.trapezoid((6 * r - 9) * ur**2 * r, dx=u.hr)
    second = 36.0 * np.trapezoid(ur * r, dx=u.hr)
    return float(first - second)


def weighted_l2(u: RadialField) -> float:
    r = u.r
    return float(np.sqrt(max(np.trapezoid(u.values**2 * r, dx=u.hr), 0.0)))


def l1_monitor(u: RadialField) -> float:
    """int (4r^4 - 9r^3 + 5r) u dr, logged without any claim attached."""
    return -blowup_functional_byparts(u)


@dataclass(frozen=True)
class RadialOptions:
    T: float = 2.0
    dt_init_rel: float = 1e-4
    dt_min_rel: float = 1e-12
    dt_max_rel: float = 1e-2
    dt_growth: float = 1.25
    step_tol: float = 0.1
    decay_floor_rel: float = 1e-6
    gradient_growth: float = 50.0   # max|u_r| growth declaring loss of existence
    max_steps: int = 500_000

    @property
    def dt_init(self):
        return self.dt_init_rel * self.T

    @property
    def dt_min(self):
        return self.dt_min_rel * self.T

    @property
    def dt_max(self):
        return self.dt_max_rel * self.T


@dataclass
class RadialSeries:
    """Per accepted step: t, dt, l2, phi, phi_byparts, rhs (plus gradient extrema)."""

    rows: list[tuple] = field(default_factory=list)
    max_grad: float = 0.0

    def column(self, i: int) -> np.ndarray:
        return np.array([r[i] for r in self.rows], dtype=float)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,dt,l2,phi,phi_byparts,rhs\n")
            for r in self.rows:
                fh.write(",".join(repr(float(x)) for x in r) + "\n")


def simulate_radial(u0: RadialField, opts: RadialOptions = RadialOptions()
                    ) -> tuple[RadialSeries, FateVerdict]:
    """IMEX march of the radial problem with bounded-increment acceptance.

    No energy law is available here, so a step is accepted iff the r-weighted
    L2 increment stays below step_tol * (1 + ||u||); rejected steps halve dt.
    Verdict: Decayed when ||u|| falls to the decay floor; BlowUp when dt
    collapses at dt_min while max|u_r| has grown by gradient_growth.
    """
    m = u0.m
    B = radial_bilaplacian_matrix(m)
    r = u0.r
    u = u0.copy()
    ur0, _, _ = radial_operators(u)
    grad0 = max(float(np.abs(ur0).max()), 1e-300)
    l2_0 = max(weighted_l2(u), 1e-300)
    t = 0.0
    dt = min(opts.dt_init, opts.dt_max)
    lus: dict[float, object] = {}
    series = RadialSeries()
    steps = 0

    def solver(dt):
        lu = lus.get(dt)
        if lu is None:
            if len(lus) >= 48:
                lus.clear()
            lu = spla.splu((sp.identity(m) + dt * B).tocsc())
            lus[dt] = lu
        return lu

    while t < opts.T and steps < opts.max_steps:
        dt = min(dt, opts.T - t)
        if dt < opts.dt_min:
            dt = opts.dt_min
        ur, urr, _ = radial_operators(u)
        with np.errstate(over="ignore", invalid="ignore"):
            N = np.zeros(m)
            N[0] = urr[0] ** 2
            N[1:m] = ur[1:m] * urr[1:m] / r[1:m]
            new_vals = np.zeros(m + 1)
            new_vals[:m] = solver(dt).solve(u.values[:m] + dt * N)
            un = RadialField(m, new_vals)
            inc = weighted_l2(RadialField(m, new_vals - u.values))
        ok = bool(np.all(np.isfinite(new_vals)) and inc <= opts.step_tol * (1.0 + weighted_l2(u)))
        if not ok:
            if dt <= opts.dt_min * (1.0 + 1e-12):
                grown = series.max_grad >= opts.gradient_growth * grad0
                if grown:
                    return series, FateVerdict(BLOW_UP, t, "dt collapse with gradient growth")
                return series, FateVerdict(UNDECIDED, None,
                                           "dt collapsed without gradient growth")
            dt = max(dt * 0.5, opts.dt_min)
            continue
        t += dt
        u = un
        steps += 1
        ur, _, _ = radial_operators(u)
        series.max_grad = max(series.max_grad, float(np.abs(ur).max()))
        series.rows.append((t, dt, weighted_l2(u), blowup_functional(u),
                            blowup_functional_byparts(u), functional_rhs(u)))
        if weighted_l2(u) <= opts.decay_floor_rel * l2_0:
            return series, FateVerdict(DECAYED, None, "weighted L2 reached the decay floor")
        dt = min(dt * opts.dt_growth, opts.dt_max)
    return series, FateVerdict(UNDECIDED, None, "reached final time")


def functional_ode_residual(series: RadialSeries) -> float:
    """max |dPhi/dt - RHS| / (1 + |RHS|) over consecutive accepted steps."""
    rows = series.rows
    worst = 0.0
    for prev, cur in zip(rows, rows[1:]):
        dt = cur[1]
        if dt <= 0:
            continue
        dphi = (cur[3] - prev[3]) / dt
        rhs = cur[5]
        worst = max(worst, abs(dphi - rhs) / (1.0 + abs(rhs)))
    return float(worst)


@dataclass(frozen=True)
class SweepResult:
    amplitudes: list[float]
    verdicts: list[str]
    t_stars: list[float | None]
    threshold: float | None        # bisection estimate of the blow-up onset


def amplitude_sweep(m: int, base: float = 0.5, opts: RadialOptions = RadialOptions(),
                    max_doublings: int = 12, bisect_iters: int = 6) -> SweepResult:
    """Double the profile amplitude until existence is lost, then bisect the onset.

    Stops the doubling leg after two consecutive BlowUp verdicts; the tested
    set plus the bracket endpoints exhibit the monotone onset.
    """
    def run(a):
        u0 = radial_sample(m, lambda r: a * hinged_profile(r))
        _, verdict = simulate_radial(u0, opts)
        return verdict

    amps, verdicts, tstars = [], [], []
    a = base
    last_decayed = None
    first_blowup = None
    consecutive = 0
    for _ in range(max_doublings):
        v = run(a)
        amps.append(a)
        verdicts.append(v.kind)
        tstars.append(v.t_star_estimate)
        if v.kind == BLOW_UP:
            consecutive += 1
            if first_blowup is None:
                first_blowup = a
            if consecutive >= 2:
                break
        else:
            consecutive = 0
            first_blowup = None
            last_decayed = a
        a *= 2.0
    threshold = None
    if first_blowup is not None and last_decayed is not None:
        lo, hi = last_decayed, first_blowup
        for _ in range(bisect_iters):
            mid = 0.5 * (lo + hi)
            v = run(mid)
            amps.append(mid)
            verdicts.append(v.kind)
            tstars.append(v.t_star_estimate)
            if v.kind == BLOW_UP:
                hi = mid
            else:
                lo = mid
        threshold = 0.5 * (lo + hi)
    return SweepResult(amps, verdicts, tstars, threshold)
