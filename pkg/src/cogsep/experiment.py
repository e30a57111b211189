"""Experiment configs, sweep execution, and machine-readable results.

Configs are flat ``key = value`` files with ``[section]`` headers (sections:
scenario, mixture, constraints, sweep, monte_carlo, output). For each sweep
point the runner resolves the transmit powers from the active constraint mode
(average-interference optimization / cap, or the instantaneous peak policy),
evaluates the requested engines, and writes one CSV row; an optional JSON
mirror carries the identical numbers.
"""

import configparser
import json
import math
import sys
from dataclasses import dataclass, replace

from .analytic import (
    ConstraintSet,
    Scenario,
    Scheme,
    max_power_osa,
    optimize_powers_sss,
    sep_peak_interference,
    sep_peak_interference_exact,
    sep_rayleigh,
    sep_upper_bound,
)
from .mathcore import GaussianMixture
from .modulation import ConstellationSpec
from .sensing import SensingModel
from .simulation import InsufficientDataError, MonteCarloConfig, run_monte_carlo

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SweepSpec",
    "ResultRow",
    "parse_config",
    "parse_config_file",
    "validate",
    "run_experiment",
    "write_csv",
    "write_json",
]

SWEEP_AXES = ("q_avg_db", "p_pk_db", "p_detect", "p_false_alarm")
ENGINES = ("analytic", "bound", "monte_carlo")
ENGINE_ALIASES = {"a": "analytic", "b": "bound", "mc": "monte_carlo"}


def normalize_engines(raw: str) -> tuple[str, ...]:
    """Split a comma list of engine names, expanding the a/b/mc shorthands."""
    tokens = (tok.strip().lower() for tok in raw.split(","))
    return tuple(ENGINE_ALIASES.get(tok, tok) for tok in tokens if tok)


CSV_COLUMNS = (
    "sweep_value", "p0", "p1", "sep_analytic", "sep_bound",
    "sep_mc", "sep_mc_ci95", "skip_fraction", "trials",
)

DEFAULT_TRIALS = 200_000
DEFAULT_SEED = 12345
DEFAULT_CHUNK = 65_536


class ConfigError(ValueError):
    """Structural or semantic problem in an experiment config."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    step: float

    def values(self) -> list[float]:
        if self.step <= 0 or self.stop < self.start:
            return []
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to run one sweep: scenario, constraints, engines."""

    scheme: Scheme
    m_inphase: int
    m_quadrature: int
    p_detect: float
    p_false_alarm: float
    prior_busy: float
    noise_variance: float
    mixture_weights: tuple[float, ...]
    mixture_variances: tuple[float, ...]
    p_pk_db: float
    q_avg_db: float | None
    q_pk_db: float | None
    mean_gain_to_primary: float
    sweep: SweepSpec
    engines: tuple[str, ...]
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    chunk_size: int = DEFAULT_CHUNK
    output_path: str | None = None
    json_path: str | None = None
    p0_db: float | None = None
    p1_db: float | None = None

    @property
    def constraint_mode(self) -> str:
        return "peak" if self.q_pk_db is not None else "average"


@dataclass(frozen=True)
class ResultRow:
    """One sweep point. Engine columns are None when not requested."""

    sweep_value: float
    p0: float | None
    p1: float | None
    sep_analytic: float | None
    sep_bound: float | None
    sep_mc: float | None
    sep_mc_ci95: float | None
    skip_fraction: float | None
    trials: int | None


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.split(",") if tok.strip())


def parse_config(text: str) -> ExperimentConfig:
    """Parse a config document; raises ConfigError with a diagnostic."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc

    def need(section: str) -> configparser.SectionProxy:
        if not cp.has_section(section):
            raise ConfigError(f"missing required section [{section}]")
        return cp[section]

    scn = need("scenario")
    mix = need("mixture")
    con = need("constraints")
    swp = need("sweep")
    mc = cp["monte_carlo"] if cp.has_section("monte_carlo") else {}
    out = cp["output"] if cp.has_section("output") else {}

    try:
        scheme_raw = scn.get("scheme", "")
        try:
            scheme = Scheme(scheme_raw.strip().lower())
        except ValueError:
            raise ConfigError(f"scenario.scheme must be sss or osa, got {scheme_raw!r}")

        modulation = scn.get("modulation", "")
        try:
            mi_raw, mq_raw = modulation.lower().split("x")
            mi, mq = int(mi_raw), int(mq_raw)
        except ValueError:
            raise ConfigError(
                f"scenario.modulation must look like '4x2', got {modulation!r}")

        def fget(section, key, default=None):
            raw = section.get(key)
            if raw is None:
                if default is None:
                    raise ConfigError(f"missing required key {key!r}")
                return default
            try:
                return float(raw)
            except ValueError:
                raise ConfigError(f"key {key!r} is not a number: {raw!r}")

        def fopt(section, key):
            raw = section.get(key)
            return None if raw is None else fget(section, key)

        engines = normalize_engines(out.get("engines", "analytic,bound,monte_carlo"))

        return ExperimentConfig(
            scheme=scheme,
            m_inphase=mi,
            m_quadrature=mq,
            p_detect=fget(scn, "p_detect"),
            p_false_alarm=fget(scn, "p_false_alarm"),
            prior_busy=fget(scn, "prior_busy"),
            noise_variance=fget(scn, "noise_variance"),
            mixture_weights=_float_list(mix.get("weights", "")),
            mixture_variances=_float_list(mix.get("variances", "")),
            p_pk_db=fget(con, "p_pk_db"),
            q_avg_db=fopt(con, "q_avg_db"),
            q_pk_db=fopt(con, "q_pk_db"),
            mean_gain_to_primary=fget(con, "mean_gain_to_primary", 1.0),
            sweep=SweepSpec(
                axis=swp.get("axis", "").strip(),
                start=fget(swp, "start"),
                stop=fget(swp, "stop"),
                step=fget(swp, "step"),
            ),
            engines=engines,
            trials=int(fget(mc, "trials", DEFAULT_TRIALS)),
            seed=int(fget(mc, "seed", DEFAULT_SEED)),
            chunk_size=int(fget(mc, "chunk_size", DEFAULT_CHUNK)),
            output_path=out.get("path") or None,
            json_path=out.get("json_path") or None,
            p0_db=fopt(scn, "p0_db"),
            p1_db=fopt(scn, "p1_db"),
        )
    except ConfigError:
        raise
    except Exception as exc:  # defensive: surface anything else as a config error
        raise ConfigError(f"invalid config: {exc}") from exc


def parse_config_file(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config(text)


# ---------------------------------------------------------------------------
# Validation (structural + invariants, no execution)
# ---------------------------------------------------------------------------

def validate(config: ExperimentConfig) -> list[str]:
    """Return every invariant violation found; empty means runnable."""
    diags: list[str] = []

    if config.m_inphase < 1 or config.m_quadrature < 1:
        diags.append("modulation axis sizes must be >= 1")
    elif config.m_inphase * config.m_quadrature < 2:
        diags.append("constellation needs at least 2 points")

    for name in ("p_detect", "p_false_alarm", "prior_busy"):
        value = getattr(config, name)
        if not 0.0 <= value <= 1.0:
            diags.append(f"{name} must lie in [0, 1], got {value}")
    if not config.noise_variance > 0:
        diags.append("noise_variance must be positive")

    w, v = config.mixture_weights, config.mixture_variances
    if not w or not v:
        diags.append("mixture weights and variances are required")
    elif len(w) != len(v):
        diags.append("mixture weights and variances must have equal length")
    else:
        if any(x < 0 for x in w):
            diags.append("mixture weights must be nonnegative")
        if abs(sum(w) - 1.0) > 1e-12:
            diags.append(f"mixture weights must sum to 1 (got {sum(w)!r})")
        if any(x <= 0 for x in v):
            diags.append("mixture variances must be positive")

    if config.q_avg_db is None and config.q_pk_db is None:
        diags.append("one of constraints.q_avg_db / q_pk_db is required")
    if config.q_avg_db is not None and config.q_pk_db is not None:
        diags.append("q_avg_db and q_pk_db are mutually exclusive")
    if not config.mean_gain_to_primary > 0:
        diags.append("mean_gain_to_primary must be positive")

    if config.scheme is Scheme.OSA and config.p1_db is not None:
        diags.append("OSA forbids transmission when sensed busy: P1 = 0, remove p1_db")
    if (config.p0_db is None) != (config.p1_db is None) and config.scheme is Scheme.SSS:
        diags.append("explicit powers for SSS need both p0_db and p1_db")
    if config.p0_db is not None and config.q_pk_db is not None:
        diags.append("explicit powers cannot be combined with the peak policy")
    if config.p0_db is not None and config.q_pk_db is None:
        ppk = db_to_linear(config.p_pk_db)
        gain = config.mean_gain_to_primary
        p0 = db_to_linear(config.p0_db)
        p1 = db_to_linear(config.p1_db) if config.p1_db is not None else 0.0
        if p0 > ppk * (1 + 1e-12) or p1 > ppk * (1 + 1e-12):
            diags.append("explicit powers exceed the peak power constraint")
        if config.q_avg_db is not None:
            q_avg = db_to_linear(config.q_avg_db)
            load = (1 - config.p_detect) * p0 * gain + config.p_detect * p1 * gain
            if load > q_avg * (1 + 1e-12):
                diags.append("explicit powers violate the average interference constraint")

    if config.sweep.axis not in SWEEP_AXES:
        diags.append(f"sweep.axis must be one of {SWEEP_AXES}, got {config.sweep.axis!r}")
    if not config.sweep.values():
        diags.append("sweep range is empty (need start <= stop and step > 0)")
    elif config.sweep.axis in ("p_detect", "p_false_alarm"):
        values = config.sweep.values()
        if values[0] < 0 or values[-1] > 1 + 1e-12:
            diags.append(f"sweep over {config.sweep.axis} leaves [0, 1]")
    if config.sweep.axis == "q_avg_db" and config.q_pk_db is not None:
        diags.append("sweeping q_avg_db requires the average-interference mode")

    if not config.engines:
        diags.append("at least one engine is required")
    for engine in config.engines:
        if engine not in ENGINES:
            diags.append(f"unknown engine {engine!r} (choose from {ENGINES})")
    if config.trials < 1:
        diags.append("monte_carlo.trials must be >= 1")
    if config.chunk_size < 1:
        diags.append("monte_carlo.chunk_size must be >= 1")

    return diags


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------

def _materialize(config: ExperimentConfig, sweep_value: float):
    """Build the Scenario for one sweep point, resolving transmit powers.

    Returns (scenario, p0, p1) with the powers that go into the result row.
    """
    p_detect, p_false_alarm = config.p_detect, config.p_false_alarm
    p_pk_db, q_avg_db = config.p_pk_db, config.q_avg_db
    axis = config.sweep.axis
    if axis == "p_detect":
        p_detect = sweep_value
    elif axis == "p_false_alarm":
        p_false_alarm = sweep_value
    elif axis == "p_pk_db":
        p_pk_db = sweep_value
    elif axis == "q_avg_db":
        q_avg_db = sweep_value

    sensing = SensingModel(p_detect, p_false_alarm, config.prior_busy)
    mixture = GaussianMixture.from_lists(config.mixture_weights,
                                         config.mixture_variances)
    constraints = ConstraintSet(
        peak_power=db_to_linear(p_pk_db),
        avg_interference=None if q_avg_db is None else db_to_linear(q_avg_db),
        peak_interference=None if config.q_pk_db is None else db_to_linear(config.q_pk_db),
        mean_gain_to_primary=config.mean_gain_to_primary,
    )
    mi, mq = config.m_inphase, config.m_quadrature

    if config.constraint_mode == "peak":
        p0 = p1 = constraints.peak_power  # cap; instantaneous level tracks the gain
        policy = "peak_interference"
    elif config.p0_db is not None:
        p0 = db_to_linear(config.p0_db)
        p1 = db_to_linear(config.p1_db) if config.p1_db is not None else 0.0
        policy = "fixed"
    elif config.scheme is Scheme.OSA:
        p0 = max_power_osa(constraints, sensing.p_detect)
        p1 = 0.0
        policy = "fixed"
    else:
        template = ConstellationSpec(mi, mq, constraints.peak_power)
        best = optimize_powers_sss(template, sensing, config.noise_variance,
                                   mixture, constraints)
        p0, p1 = best.p0, best.p1
        policy = "fixed"

    spec_idle = ConstellationSpec(mi, mq, p0)
    spec_busy = None
    if config.scheme is Scheme.SSS:
        spec_busy = ConstellationSpec(mi, mq, p1)
    scenario = Scenario(
        scheme=config.scheme,
        spec_idle=spec_idle,
        spec_busy=spec_busy,
        sensing=sensing,
        noise_variance=config.noise_variance,
        interference=mixture,
        constraints=constraints,
        power_policy=policy,
    )
    return scenario, p0, (p1 if config.scheme is Scheme.SSS else 0.0)


def _evaluate_point(config: ExperimentConfig, index: int, sweep_value: float,
                    workers: int) -> ResultRow:
    scenario, p0, p1 = _materialize(config, sweep_value)
    peak = config.constraint_mode == "peak"

    sep_analytic = sep_bound = sep_mc = ci = skip = trials = None
    if "analytic" in config.engines:
        sep_analytic = (sep_peak_interference_exact(scenario) if peak
                        else sep_rayleigh(scenario))
    if "bound" in config.engines:
        sep_bound = (sep_peak_interference(scenario) if peak
                     else sep_upper_bound(scenario))
    if "monte_carlo" in config.engines:
        mc_config = MonteCarloConfig(
            trials=config.trials,
            master_seed=config.seed + index,  # distinct stream per sweep point
            chunk_size=config.chunk_size,
        )
        estimate = run_monte_carlo(scenario, mc_config, workers=workers)
        sep_mc = estimate.sep
        ci = estimate.ci95_half_width
        skip = estimate.skip_fraction
        trials = estimate.trials

    return ResultRow(sweep_value, p0, p1, sep_analytic, sep_bound,
                     sep_mc, ci, skip, trials)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[ResultRow]:
    """Run every sweep point and write the configured outputs.

    Rows appear in sweep order. Infeasible points are reported on stderr and
    emitted with empty engine columns; a RuntimeError is raised afterwards so
    the CLI can map it to a nonzero exit.
    """
    diags = validate(config)
    if diags:
        raise ConfigError("; ".join(diags))

    rows: list[ResultRow] = []
    failures: list[str] = []
    for index, value in enumerate(config.sweep.values()):
        try:
            rows.append(_evaluate_point(config, index, value, workers))
        except (ValueError, ArithmeticError, InsufficientDataError) as exc:
            failures.append(f"sweep point {value:g}: {exc}")
            print(f"cogsep: infeasible sweep point {value:g}: {exc}", file=sys.stderr)
            rows.append(ResultRow(value, None, None, None, None, None, None,
                                  None, None))

    if config.output_path:
        write_csv(rows, config.output_path)
    if config.json_path:
        write_json(rows, config.json_path)
    if failures:
        raise RuntimeError(f"{len(failures)} sweep point(s) failed: " +
                           "; ".join(failures))
    return rows


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


def _row_strings(row: ResultRow) -> list[str]:
    return [
        _fmt(row.sweep_value), _fmt(row.p0), _fmt(row.p1),
        _fmt(row.sep_analytic), _fmt(row.sep_bound), _fmt(row.sep_mc),
        _fmt(row.sep_mc_ci95), _fmt(row.skip_fraction), _fmt(row.trials),
    ]


def write_csv(rows: list[ResultRow], path: str) -> None:
    """UTF-8 CSV, LF line endings, 9 significant digits per decimal value."""
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(",".join(_row_strings(row)) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(rows: list[ResultRow], path: str) -> None:
    """JSON mirror of the CSV carrying numerically identical values."""
    payload = []
    for row in rows:
        cells = _row_strings(row)
        record = {}
        for column, cell in zip(CSV_COLUMNS, cells):
            if cell == "":
                record[column] = None
            elif column == "trials":
                record[column] = int(cell)
            else:
                record[column] = float(cell)
        payload.append(record)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
