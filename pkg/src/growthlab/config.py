"""Strict line-oriented experiment configuration.

Format: one `key = value` per line, `#` comments, dotted section keys
(grid.n, time.T, ...).  Unknown keys, malformed values, and out-of-range
values are parse errors that name the offending line.  Every constant that a
design decision introduced is a key here, and the effective configuration
(defaults plus overrides) is echoed verbatim into each run summary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

EXPERIMENTS = (
    "verify-identities",
    "mp-level",
    "eigen",
    "nehari-dichotomy",
    "eq43-blowup",
    "radial-sweep",
    "linear-verification",
)


class ConfigError(ValueError):
    pass


def _positive(x):
    return x > 0


def _nonneg(x):
    return x >= 0


# key -> (type, default, validator, description)
SCHEMA: dict[str, tuple] = {
    "experiment":        (str, None, lambda s: s in EXPERIMENTS, f"one of {', '.join(EXPERIMENTS)}"),
    "grid.n":            (int, 32, lambda n: n >= 4, "interior nodes per side, >= 4"),
    "grid.K":            (int, 16, _positive, "sine modes per direction (hinged runs)"),
    "grid.bc":           (str, "dirichlet", lambda s: s in ("dirichlet", "navier"), "boundary conditions"),
    "time.T":            (float, 1.0, _positive, "final time"),
    "time.dt_init_rel":  (float, 1e-4, _positive, "initial dt as a fraction of T"),
    "time.dt_min_rel":   (float, 1e-12, _positive, "dt floor as a fraction of T"),
    "time.dt_max_rel":   (float, 1e-2, _positive, "dt cap as a fraction of T"),
    "time.dt_growth":    (float, 1.25, lambda x: x > 1, "dt growth factor after accepted steps"),
    "physics.lambda":    (float, 0.0, lambda x: True, "source coefficient"),
    "physics.f":         (str, "zero", None, "zero | constant <c> | mode <k> <l> <a>"),
    "seeds.master":      (int, 20250809, _nonneg, "master RNG seed"),
    "output.dir":        (str, "runs", None, "output directory"),
    "evolve.tol_e_rel":  (float, 1e-10, _positive, "energy-decrement allowance"),
    "evolve.step_tol":   (float, 0.1, _positive, "bounded-increment acceptance tolerance"),
    "evolve.growth_factor": (float, 1e6, lambda x: x > 1, "h2 growth declaring blow-up"),
    "evolve.decay_floor_rel": (float, 1e-6, _positive, "h2 decay floor"),
    "evolve.stat_floor_rel":  (float, 1e-8, _positive, "stationarity floor on ut_l2"),
    "evolve.stat_window": (int, 100, _positive, "steps below the floor for Stationary"),
    "evolve.cfl_c":      (float, 1.0, _positive, "dt <= c h^4 cap for sourced nonlinear runs"),
    "evolve.tstar_window": (int, 20, lambda x: x >= 3, "rows in the 1/h2 extrapolation"),
    "nehari.tol_rel":    (float, 1e-8, _positive, "relative Nehari classification tolerance"),
    "mp.kkt_tol_rel":    (float, 1e-6, _positive, "projected-gradient stop, relative"),
    "mp.max_iter":       (int, 100000, _positive, "optimizer iteration budget"),
    "mp.restarts":       (int, 5, _nonneg, "random restarts"),
    "mp.samples":        (int, 20, _positive, "random fields for the upper-bound sweep"),
    "eigen.m":           (int, 8, _positive, "eigenpairs to compute"),
    "eigen.tol_rel":     (float, 1e-8, _positive, "relative eigen residual"),
    "eigen.poincare_k":  (int, 4, lambda x: x >= 2, "projector cut for the ratio sweep"),
    "eigen.poincare_samples": (int, 100, _positive, "random fields in the ratio sweep"),
    "radial.m":          (int, 256, lambda x: x >= 8, "radial nodes"),
    "radial.base":       (float, 0.5, _positive, "first amplitude of the sweep"),
    "radial.max_doublings": (int, 12, _positive, "doubling budget"),
    "radial.bisect_iters": (int, 6, _nonneg, "onset bisection iterations"),
    "radial.step_tol":   (float, 0.1, _positive, "radial increment acceptance tolerance"),
    "radial.gradient_growth": (float, 50.0, lambda x: x > 1, "max|u_r| growth for BlowUp"),
    "radial.eps_small":  (float, 0.01, _positive, "amplitude of the small-data run"),
    "dichotomy.eps":     (float, 0.1, lambda x: 0 < x < 1, "scale offset around u*"),
    "verify.n_coarse":   (int, 32, lambda n: n >= 8, "refinement levels for identity checks"),
    "verify.n_mid":      (int, 64, lambda n: n >= 8, ""),
    "verify.n_fine":     (int, 128, lambda n: n >= 8, ""),
    "eq43.margin":       (float, 1.2, lambda x: x > 1, "eigen-data blow-up margin factor"),
    "eq43.i_floor":      (float, 1e-10, _positive, "degeneracy threshold on I(e1)"),
    "linear.mode_k":     (int, 1, _positive, "single-mode verification indices"),
    "linear.mode_l":     (int, 1, _positive, ""),
    "linear.apriori_c":  (float, 10.0, _positive, "a-priori estimate constant"),
}


@dataclass
class ExperimentConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def with_overrides(self, overrides: dict[str, str]) -> "ExperimentConfig":
        cfg = ExperimentConfig(dict(self.values))
        for key, raw in overrides.items():
            cfg.values[key] = _parse_value(key, raw, where=f"override --{key}")
        _validate(cfg.values)
        return cfg


def _parse_value(key: str, raw: str, where: str):
    if key not in SCHEMA:
        raise ConfigError(f"{where}: unknown key {key!r}")
    typ, _, check, desc = SCHEMA[key]
    raw = raw.strip()
    try:
        if typ is int:
            val = int(raw)
        elif typ is float:
            val = float(raw)
        else:
            val = raw
    except ValueError:
        raise ConfigError(f"{where}: cannot read {key} = {raw!r} as {typ.__name__}") from None
    if check is not None and not check(val):
        hint = f" ({desc})" if desc else ""
        raise ConfigError(f"{where}: value {raw!r} out of range for {key}{hint}")
    return val


def _validate(values: dict):
    if values.get("experiment") is None:
        raise ConfigError("missing required key 'experiment'")
    kind, *rest = str(values["physics.f"]).split()
    if kind == "zero":
        ok = not rest
    elif kind == "constant":
        ok = len(rest) == 1 and _is_float(rest[0])
    elif kind == "mode":
        ok = len(rest) == 3 and rest[0].isdigit() and rest[1].isdigit() and _is_float(rest[2])
    else:
        ok = False
    if not ok:
        raise ConfigError(f"physics.f = {values['physics.f']!r} is not "
                          "'zero', 'constant <c>', or 'mode <k> <l> <a>'")


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def parse_config(text: str) -> ExperimentConfig:
    """Parse key = value lines; fill defaults; reject anything unknown."""
    values = {key: default for key, (_, default, _, _) in SCHEMA.items()}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        values[key] = _parse_value(key, raw, where=f"line {lineno}")
    _validate(values)
    return ExperimentConfig(values)


def render_config(cfg: ExperimentConfig) -> str:
    """Canonical text form; parse(render(cfg)) reproduces cfg exactly."""
    lines = []
    for key in SCHEMA:
        val = cfg.values.get(key)
        if val is None:
            continue
        lines.append(f"{key} = {val!r}" if isinstance(val, float) else f"{key} = {val}")
    return "\n".join(lines) + "\n"
