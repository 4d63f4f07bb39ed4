"""Time integration of u_t + Delta^2 u = det(D^2 u) + lambda f.

First-order IMEX splitting: the stiff bilaplacian is treated implicitly
(backward Euler over a cached sparse LU on the clamped grid; exact
exponential integration per mode on the hinged spectral grid), the
nonlinearity and source explicitly.

Step control is dissipation-based on clamped source-free runs: a step is
accepted iff J does not increase beyond a roundoff allowance, rejected steps
halve dt, accepted ones grow it by 1.25 up to dt_max.  Hinged nonlinear runs
have no known energy law, so they fall back to a bounded-relative-increment
rule; sourced runs additionally cap dt by c*h^4.

Each accepted step appends one diagnostics row
    (t, dt, l2, h2, J, I, w14_4, nehari, ut_l2, cum_grad)
and the terminal verdict is one of Decayed / BlowUp / Stationary / Undecided,
never silent: a dt collapse without the blow-up signature is reported as
Undecided.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .energy import (
    DEFAULT_NEHARI_TOL,
    N_MINUS,
    N_PLUS,
    nehari_classify,
    nonlinear_I,
    norms,
)
from .grid import (
    DIRICHLET,
    Field2D,
    Grid2D,
    NAVIER,
    dx_values,
    dy_values,
    hessian_det_values,
    integrate_values,
    lap_values,
    zero_field,
)
from .matrices import stepping_cache
from .spectral import (
    SpectralField,
    dealiased_grid,
    from_physical,
    spectrum_grid,
    to_physical,
)

DECAYED = "Decayed"
BLOW_UP = "BlowUp"
STATIONARY = "Stationary"
UNDECIDED = "Undecided"

DIAGNOSTIC_COLUMNS = ("t", "dt", "l2", "h2", "J", "I", "w14_4", "nehari", "ut_l2", "cum_grad")


@dataclass(frozen=True)
class EvolveOptions:
    T: float = 1.0
    dt_init_rel: float = 1e-4     # fractions of T
    dt_min_rel: float = 1e-12
    dt_max_rel: float = 1e-2
    dt_growth: float = 1.25
    tol_e_rel: float = 1e-10      # energy-decrement allowance per unit dt
    step_tol: float = 0.1         # increment rule for runs without an energy law
    growth_factor: float = 1e6    # h2 growth declaring blow-up (with dt collapse)
    decay_floor_rel: float = 1e-6
    stat_floor_rel: float = 1e-8
    stat_window: int = 100
    cfl_c: float = 1.0            # dt <= cfl_c * h^4 cap for sourced nonlinear runs
    tstar_window: int = 20
    nehari_tol: float = DEFAULT_NEHARI_TOL
    nonlinearity: bool = True     # False = verification mode (linear equation)
    pair_window: int = 16         # history depth for the L2-Cauchy check
    max_steps: int = 2_000_000
    checkpoint_every: int = 0

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
class EvolutionState:
    """One in-flight simulation: field (or spectral coeffs), clock, source."""

    grid: Grid2D
    t: float
    dt: float
    u: Field2D
    coeffs: SpectralField | None = None   # hinged runs advance these
    lam: float = 0.0
    f: object = None                      # Field2D or callable t -> Field2D


@dataclass(frozen=True)
class FateVerdict:
    kind: str
    t_star_estimate: float | None
    trigger: str


@dataclass
class Diagnostics:
    """Per-accepted-step scalar series plus run-level extrema."""

    rows: list[tuple] = field(default_factory=list)
    max_abs_u: float = 0.0
    lemma_pair_violation: float = 0.0      # exact-chain L2-Cauchy violation
    lemma_pair_violation_energy: float = 0.0  # same pairs, J-difference form
    first_step_h2_jump: float = 0.0
    final_state: dict = field(default_factory=dict)  # resumable snapshot

    def column(self, name: str) -> np.ndarray:
        i = DIAGNOSTIC_COLUMNS.index(name)
        if name == "nehari":
            return np.array([r[i] for r in self.rows])
        return np.array([float(r[i]) for r in self.rows], dtype=float)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(",".join(DIAGNOSTIC_COLUMNS) + "\n")
            for r in self.rows:
                fh.write(",".join(x if isinstance(x, str) else repr(float(x)) for x in r) + "\n")

    @staticmethod
    def from_csv(path) -> "Diagnostics":
        diag = Diagnostics()
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            if tuple(header) != DIAGNOSTIC_COLUMNS:
                raise ValueError(f"unexpected diagnostics header {header}")
            for line in fh:
                parts = line.strip().split(",")
                row = tuple(
                    p if i == DIAGNOSTIC_COLUMNS.index("nehari") else float(p)
                    for i, p in enumerate(parts)
                )
                diag.rows.append(row)
        return diag


def _source_at(state: EvolutionState, t: float) -> Field2D | None:
    if state.lam == 0.0 or state.f is None:
        return None
    f = state.f(t) if callable(state.f) else state.f
    return f


def _explicit_term(state: EvolutionState, t_mid: float) -> np.ndarray:
    """N = det(D^2 u) + lambda f at the current state (sources at midpoints)."""
    grid = state.grid
    n = np.zeros((grid.n, grid.n))
    f = _source_at(state, t_mid)
    if f is not None:
        n = n + state.lam * f.values
    return n


def step_imex(state: EvolutionState, opts: EvolveOptions) -> EvolutionState:
    """One IMEX step of size state.dt; pure function of the state."""
    dt = state.dt
    t_mid = state.t + 0.5 * dt
    if state.grid.bc == NAVIER and state.coeffs is not None:
        return _step_navier(state, opts, dt, t_mid)
    return _step_dirichlet(state, opts, dt, t_mid)


def _step_dirichlet(state, opts, dt, t_mid):
    grid = state.grid
    rhs_extra = _explicit_term(state, t_mid)
    with np.errstate(over="ignore", invalid="ignore"):
        if opts.nonlinearity:
            rhs_extra = rhs_extra + hessian_det_values(state.u.values, grid.h)
        rhs = state.u.values + dt * rhs_extra
        cache = stepping_cache(grid.n, grid.bc)
        new_vals = cache.solve(dt, rhs.ravel()).reshape(grid.n, grid.n)
    return replace(state, t=state.t + dt, u=Field2D(grid, new_vals))


def _step_navier(state, opts, dt, t_mid):
    coeffs = state.coeffs
    K = coeffs.K
    lam_grid = spectrum_grid(K)
    decay = np.exp(-lam_grid * dt)
    grid = state.grid
    with np.errstate(over="ignore", invalid="ignore"):
        nhat = np.zeros((K, K))
        if opts.nonlinearity:
            det = hessian_det_values(state.u.values, grid.h)
            nhat = nhat + from_physical(Field2D(grid, det), K).coeffs
        f = _source_at(state, t_mid)
        if f is not None:
            nhat = nhat + state.lam * from_physical(f, K).coeffs
        new_coeffs = SpectralField(K, decay * coeffs.coeffs + (1.0 - decay) / lam_grid * nhat)
        u_new = to_physical(new_coeffs, grid)
    return replace(state, t=state.t + dt, u=u_new, coeffs=new_coeffs)


def _row(t, dt, u, ut_l2, cum_grad, nehari_tol):
    nb = norms(u)
    iv = nonlinear_I(u)
    j = 0.5 * nb.h2**2 - iv
    tag = nehari_classify(u, nehari_tol).tag
    return (t, dt, nb.l2, nb.h2, j, iv, nb.w14_4, tag, ut_l2, cum_grad), j, nb


def simulate(u0: Field2D, lam: float = 0.0, f=None,
             opts: EvolveOptions = EvolveOptions(),
             K: int | None = None, resume_state: dict | None = None,
             checkpoint_cb=None) -> tuple[Diagnostics, FateVerdict]:
    """Advance from u0 with adaptive IMEX stepping until T or a verdict.

    Clamped grids evolve nodal values; hinged grids with K set evolve sine
    coefficients (u0 is projected).  Acceptance: on clamped source-free runs
    the energy-decrement rule; otherwise the bounded-increment rule; sourced
    nonlinear runs also cap dt at cfl_c * h^4.

    Passing a previous run's diag.final_state as resume_state continues it
    step-for-step; checkpoint_cb(snapshot) fires every opts.checkpoint_every
    accepted steps.
    """
    grid = u0.grid
    state = EvolutionState(grid=grid, t=0.0, dt=min(opts.dt_init, opts.dt_max),
                           u=u0.copy(), lam=lam, f=f)
    if grid.bc == NAVIER:
        if K is None:
            raise ValueError("hinged evolution needs the spectral truncation K")
        state.coeffs = from_physical(u0, K)
        state.u = to_physical(state.coeffs, grid)

    energy_rule = grid.bc == DIRICHLET and lam == 0.0 and opts.nonlinearity
    dt_cap = opts.dt_max
    if lam != 0.0 and opts.nonlinearity:
        dt_cap = min(dt_cap, opts.cfl_c * grid.h**4)

    diag = Diagnostics()
    nb0 = norms(state.u)
    h2_0 = nb0.h2
    row0, j_prev, _ = _row(0.0, state.dt, state.u, 0.0, 0.0, opts.nehari_tol)
    cum_grad = 0.0
    stat_run = 0
    first_h2 = None

    if resume_state is not None:
        state.t = float(resume_state["t"])
        state.dt = float(resume_state["dt"])
        state.u = Field2D(grid, np.asarray(resume_state["u"], dtype=float).copy())
        if grid.bc == NAVIER:
            state.coeffs = SpectralField(K, np.asarray(resume_state["coeffs"]).copy())
        h2_0 = float(resume_state["h2_0"])
        j_prev = float(resume_state["j_prev"])
        cum_grad = float(resume_state["cum_grad"])
        stat_run = int(resume_state["stat_run"])
        first_h2 = resume_state.get("first_h2")

    def snapshot():
        snap = {"t": state.t, "dt": state.dt, "u": state.u.values.copy(),
                "h2_0": h2_0, "j_prev": j_prev, "cum_grad": cum_grad,
                "stat_run": stat_run}
        if first_h2 is not None:
            snap["first_h2"] = first_h2
        if state.coeffs is not None:
            snap["coeffs"] = state.coeffs.coeffs.copy()
        return snap

    if h2_0 == 0.0 and lam == 0.0 and resume_state is None:
        diag.rows.append(_row(0.0, 0.0, state.u, 0.0, 0.0, opts.nehari_tol)[0])
        diag.final_state = snapshot()
        return diag, FateVerdict(DECAYED, 0.0, "zero initial data")

    if resume_state is None:
        diag.rows.append((row0[0], 0.0) + row0[2:])

    pair_hist = deque(maxlen=opts.pair_window + 1)
    pair_hist.append((state.t, j_prev, 0.0, state.u.values.copy()))
    verdict = None
    steps = 0

    while state.t < opts.T and steps < opts.max_steps:
        state.dt = min(state.dt, dt_cap, opts.T - state.t)
        if state.dt < opts.dt_min:
            state.dt = opts.dt_min
        new_state = step_imex(state, opts)
        u_new = new_state.u.values
        finite = bool(np.all(np.isfinite(u_new)))
        accept = False
        j_new = math.nan
        if finite:
            with np.errstate(over="ignore", invalid="ignore"):
                if energy_rule:
                    iv = nonlinear_I(new_state.u)
                    h2_new_sq = integrate_values(lap_values(u_new, grid.h) ** 2, grid.h)
                    j_new = 0.5 * h2_new_sq - iv
                    tol = opts.tol_e_rel * max(1.0, abs(j_prev))
                    accept = math.isfinite(j_new) and j_new <= j_prev + tol * state.dt
                elif opts.nonlinearity:
                    inc = np.sqrt(integrate_values((u_new - state.u.values) ** 2, grid.h))
                    base = 1.0 + np.sqrt(integrate_values(state.u.values**2, grid.h))
                    accept = bool(np.isfinite(inc) and inc <= opts.step_tol * base)
                else:
                    # linear verification mode: the implicit/exponential solve
                    # is unconditionally stable, nothing to guard
                    accept = True

        if not accept:
            if state.dt <= opts.dt_min * (1.0 + 1e-12):
                h2_last = diag.rows[-1][3] if diag.rows else h2_0
                if h2_last >= opts.growth_factor * h2_0:
                    verdict = FateVerdict(BLOW_UP, _tstar(diag, opts), "dt collapse with h2 growth")
                else:
                    verdict = FateVerdict(UNDECIDED, None,
                                          "dt collapsed to dt_min without blow-up signature")
                break
            state.dt = max(state.dt * 0.5, opts.dt_min)
            continue

        dt_used = new_state.t - state.t
        ut = np.sqrt(integrate_values((u_new - state.u.values) ** 2, grid.h)) / dt_used
        with np.errstate(over="ignore", invalid="ignore"):
            gx = dx_values(u_new, grid.h)
            gy = dy_values(u_new, grid.h)
            cum_grad += dt_used * integrate_values(
                lap_values(u_new, grid.h) * (gx**2 + gy**2), grid.h
            )
        row, j_new_row, nb = _row(new_state.t, dt_used, new_state.u, ut, cum_grad, opts.nehari_tol)
        diag.rows.append(row)
        diag.max_abs_u = max(diag.max_abs_u, float(np.abs(u_new).max()))
        if first_h2 is None:
            first_h2 = nb.h2
            diag.first_step_h2_jump = nb.h2 / h2_0 if h2_0 > 0 else 1.0

        # L2-Cauchy chain across the trailing window
        t_new = new_state.t
        sum_ut = pair_hist[-1][2] + dt_used * ut**2
        for (t_old, j_old, s_old, u_old) in pair_hist:
            delta = t_new - t_old
            if delta <= 0:
                continue
            lhs = integrate_values((u_new - u_old) ** 2, grid.h)
            rhs_exact = delta * (sum_ut - s_old)
            rhs_energy = delta * (j_old - j_new_row)
            scale = 1.0 + abs(rhs_exact)
            diag.lemma_pair_violation = max(diag.lemma_pair_violation, (lhs - rhs_exact) / scale)
            diag.lemma_pair_violation_energy = max(
                diag.lemma_pair_violation_energy, (lhs - rhs_energy) / (1.0 + abs(rhs_energy))
            )
        pair_hist.append((t_new, j_new_row, sum_ut, u_new.copy()))

        state = new_state
        j_prev = j_new_row
        steps += 1
        if checkpoint_cb is not None and opts.checkpoint_every > 0 \
                and steps % opts.checkpoint_every == 0:
            checkpoint_cb(snapshot())

        if nb.h2 <= opts.decay_floor_rel * h2_0:
            verdict = FateVerdict(DECAYED, None, "h2 reached the decay floor")
            break
        if ut <= opts.stat_floor_rel * h2_0:
            stat_run += 1
            if stat_run >= opts.stat_window:
                verdict = FateVerdict(STATIONARY, None,
                                      f"ut_l2 below floor for {opts.stat_window} steps")
                break
        else:
            stat_run = 0
        if nb.h2 >= opts.growth_factor * h2_0 and state.dt <= opts.dt_min * 4.0:
            verdict = FateVerdict(BLOW_UP, _tstar(diag, opts), "h2 growth with dt at floor")
            break
        state.dt = min(state.dt * opts.dt_growth, dt_cap)

    if verdict is None:
        trigger = ("step budget exhausted" if steps >= opts.max_steps
                   else "reached final time without a decay/blow-up signature")
        verdict = FateVerdict(UNDECIDED, None, trigger)
    diag.final_state = snapshot()
    return diag, verdict


def _tstar(diag: Diagnostics, opts: EvolveOptions) -> float | None:
    """Blow-up time by linear extrapolation of 1/h2 over the trailing window."""
    if len(diag.rows) < 3:
        return None
    t = diag.column("t")
    h2 = diag.column("h2")
    w = min(opts.tstar_window, len(t))
    tt, yy = t[-w:], 1.0 / h2[-w:]
    A = np.vstack([np.ones_like(tt), tt]).T
    (a, b), *_ = np.linalg.lstsq(A, yy, rcond=None)
    if b >= 0:
        return float(t[-1])
    return float(-a / b)


def detect_blowup(diag: Diagnostics, opts: EvolveOptions) -> FateVerdict:
    """Classify a finished diagnostics series; BlowUp needs growth AND dt collapse.

    The trigger string records which monitored norm (h2, l2, w14) crossed its
    growth threshold.
    """
    if not diag.rows:
        return FateVerdict(UNDECIDED, None, "empty diagnostics")
    h2 = diag.column("h2")
    l2 = diag.column("l2")
    w14 = diag.column("w14_4")
    dt = diag.column("dt")
    grown = h2[-1] >= opts.growth_factor * h2[0]
    collapsed = dt[-1] <= opts.dt_min * 4.0
    if grown and collapsed:
        exceeded = ["h2"]
        if l2[0] > 0 and l2[-1] >= opts.growth_factor * l2[0]:
            exceeded.append("l2")
        if w14[0] > 0 and w14[-1] >= opts.growth_factor ** 2 * w14[0]:
            exceeded.append("w14")
        return FateVerdict(BLOW_UP, _tstar(diag, opts),
                           "growth in " + ",".join(exceeded) + " with dt collapse")
    return FateVerdict(UNDECIDED, None, "no blow-up signature")


@dataclass(frozen=True)
class DissipationResiduals:
    r1: float          # energy dissipation identity, relative
    r2: float          # L2-mass balance identity, relative
    r3: float          # L2-Cauchy chain violation (exact discrete form)
    r3_energy_form: float  # same pairs through the J-difference form


def dissipation_residuals(diag: Diagnostics) -> DissipationResiduals:
    """Per-trajectory maxima of the source-free dissipation residuals.

    r1: |dJ/dt + ||u_t||^2| / (1 + ||u_t||^2), first-order in dt.
    r2: |(1/2) d(l2^2)/dt + h2^2 - 3I| / (1 + h2^2), first-order in dt.
    r3: violation of ||u(t+d)-u(t)||_2^2 <= d * sum dt ||u_t||^2 over stored
        pairs (exact discrete Cauchy-Schwarz: roundoff-level by construction);
        the J-difference form of the same inequality is reported alongside and
        carries the r1-sized first-order defect.
    """
    rows = diag.rows
    r1 = r2 = 0.0
    for prev, cur in zip(rows, rows[1:]):
        dt = cur[1]
        if dt <= 0:
            continue
        ut2 = cur[8] ** 2
        r1 = max(r1, abs((cur[4] - prev[4]) / dt + ut2) / (1.0 + ut2))
        dl2 = (cur[2] ** 2 - prev[2] ** 2) / dt
        r2 = max(r2, abs(0.5 * dl2 + cur[3] ** 2 - 3.0 * cur[5]) / (1.0 + cur[3] ** 2))
    return DissipationResiduals(r1, r2, diag.lemma_pair_violation,
                                diag.lemma_pair_violation_energy)


@dataclass(frozen=True)
class MonotonicityReport:
    checked: int
    violations: int
    max_excess: float


def monotonicity_monitor(diag: Diagnostics, tol_scale: float = 1.0) -> MonotonicityReport:
    """Check the sign law of d||u||_2/dt against the Nehari tag, row by row.

    On an NMinus row l2 must not decrease, on an NPlus row not increase,
    beyond a (h^2 + dt)-sized allowance per unit value.
    """
    rows = diag.rows
    checked = violations = 0
    max_excess = 0.0
    for prev, cur in zip(rows, rows[1:]):
        tag = cur[7]
        if tag not in (N_PLUS, N_MINUS):
            continue
        checked += 1
        dl2 = cur[2] - prev[2]
        dt = cur[1]
        tol = tol_scale * (dt + 1e-4) * (1.0 + cur[2])
        excess = 0.0
        if tag == N_MINUS and dl2 < -tol:
            excess = -dl2 - tol
        if tag == N_PLUS and dl2 > tol:
            excess = dl2 - tol
        if excess > 0:
            violations += 1
            max_excess = max(max_excess, excess)
    return MonotonicityReport(checked, violations, max_excess)


def nehari_crossings(diag: Diagnostics) -> int:
    """Direct NPlus <-> NMinus transitions with no OnN row between them."""
    count = 0
    tags = [r[7] for r in diag.rows]
    for a, b in zip(tags, tags[1:]):
        if {a, b} == {N_PLUS, N_MINUS}:
            count += 1
    return count


@dataclass(frozen=True)
class LinearVerification:
    sup_h2_sq: float
    sum_dt_biharm_sq: float
    sum_dt_ut_sq: float
    rhs: float
    constant: float


def linear_apriori(u0: Field2D, lam: float, f, opts: EvolveOptions,
                   K: int | None = None) -> LinearVerification:
    """Run the linear equation and assemble the a-priori estimate pieces.

    Checks sup h2^2 + sum dt ||Delta^2 u||^2 + sum dt ||u_t||^2 against
    C (h2(0)^2 + lam^2 sum dt ||f||^2) by direct accumulation.
    """
    from .matrices import apply_matrix, biharmonic_matrix

    grid = u0.grid
    opts = replace(opts, nonlinearity=False)
    state = EvolutionState(grid=grid, t=0.0, dt=min(opts.dt_init, opts.dt_max),
                           u=u0.copy(), lam=lam, f=f)
    if grid.bc == NAVIER:
        if K is None:
            raise ValueError("hinged run needs K")
        state.coeffs = from_physical(u0, K)
        state.u = to_physical(state.coeffs, grid)
    A = biharmonic_matrix(grid.n, grid.bc)
    h = grid.h
    h2sq0 = integrate_values(lap_values(state.u.values, h) ** 2, h)
    sup_h2 = h2sq0
    s_bi = s_ut = s_f = 0.0
    while state.t < opts.T - 1e-15 * opts.T:
        state.dt = min(state.dt, opts.T - state.t)
        new_state = step_imex(state, opts)
        dt = new_state.t - state.t
        un = new_state.u.values
        sup_h2 = max(sup_h2, integrate_values(lap_values(un, h) ** 2, h))
        s_bi += dt * integrate_values(apply_matrix(A, un) ** 2, h)
        s_ut += dt * integrate_values(((un - state.u.values) / dt) ** 2, h)
        fv = _source_at(state, state.t + 0.5 * dt)
        if fv is not None:
            s_f += dt * integrate_values(fv.values**2, h)
        state = new_state
    rhs = h2sq0 + lam**2 * s_f
    lhs = sup_h2 + s_bi + s_ut
    return LinearVerification(sup_h2, s_bi, s_ut, rhs, lhs / rhs if rhs > 0 else math.inf)
