"""
CLI command handlers
Each handler takes a RunRequest and returns a CommandOutput; app.py routes to
them and turns toolkit errors into exit codes

VERSION HISTORY:
1.3.0 - JSON tables and ComparisonFailed - 18/10/26
      CHANGES:
      - curve and sweep honor --json (columns, params, rows)
      - compare and verify report exit 4 through ComparisonFailed
1.2.0 - verify command against closed forms - 18/10/26
      ADDITIONS:
      - cmd_verify checks catalog integrands against hand-derived norms
1.1.0 - Parallel parameter sweeps - 18/10/26
      PERFORMANCE IMPROVEMENTS:
      - ThreadPoolExecutor over grid points, rows kept in grid order
1.0.0 - list, compute, curve and compare - 18/10/26
KEY FUNCTIONS:
- RunRequest / CommandOutput
- resolve_source (catalog label or spec file, with overrides)
- cmd_list, cmd_compute, cmd_curve, cmd_compare, cmd_sweep, cmd_verify
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from components import reports
from config import get_settings
from modules.catalog import CatalogEntry, catalog, closed_form_norm, get_entry
from modules.distance import (
    DistanceReport,
    GaugeChoice,
    QuadratureConfig,
    compare,
    density_integrand,
    distance_density,
    distance_pure,
    pure_integrand,
    sample_curve,
)
from modules.errors import ComparisonFailed, RequestError
from modules.trajectory import HamiltonianSpec, Kind, TrajectorySpec, load_spec
from utils.csv_utils import curve_frame, render_csv, write_atomic

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_CURVE_SAMPLES = 101
DEFAULT_COMPARE_SAMPLES = 1000
DEFAULT_VERIFY_SAMPLES = 201
VERIFY_TOL = 1e-10
FUNCTIONALS = ("density", "pure")


@dataclass
class RunRequest:
    """One parsed command-line invocation"""

    command: str
    example: Optional[str] = None
    spec_path: Optional[str] = None
    overrides: Dict[str, float] = field(default_factory=dict)
    interval: Optional[Tuple[float, float]] = None
    tol: Optional[float] = None
    samples: Optional[int] = None
    gauge: str = "optimal"
    functional: Optional[str] = None
    sweeps: List[Tuple[str, List[float]]] = field(default_factory=list)
    json: bool = False
    out: Optional[str] = None

    def __post_init__(self):
        if self.interval is not None:
            t0, t1 = self.interval
            if not (math.isfinite(t0) and math.isfinite(t1) and t0 < t1):
                raise RequestError(f"Invalid interval {t0}:{t1}; need t0 < t1")
        if self.tol is not None and not self.tol > 0:
            raise RequestError("--tol must be positive")
        if self.samples is not None and self.samples < 2:
            raise RequestError("--samples must be at least 2")
        if self.functional is not None and self.functional not in FUNCTIONALS:
            raise RequestError(f"--functional must be one of {FUNCTIONALS}")


@dataclass(frozen=True)
class CommandOutput:
    text: str
    exit_code: int = 0
    message: str = ""


@dataclass(frozen=True, eq=False)
class Source:
    """Resolved trajectory, Hamiltonian and (for catalog sources) the entry"""

    trajectory: TrajectorySpec
    hamiltonian: HamiltonianSpec
    label: str
    entry: Optional[CatalogEntry] = None

    @property
    def is_pure_state(self) -> bool:
        return self.trajectory.kind is Kind.PURE_STATE


def parse_interval(text: str) -> Tuple[float, float]:
    """'t0:t1' with decimal literals"""
    try:
        t0, t1 = (float(part) for part in text.split(":"))
    except ValueError:
        raise RequestError(f"Interval must look like T0:T1, got {text!r}") from None
    return t0, t1


def parse_assignment(text: str) -> Tuple[str, float]:
    """'name=value'"""
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise RequestError(f"Expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise RequestError(f"Value of {name.strip()} must be a number, got {value!r}") from None


def parse_sweep(text: str) -> Tuple[str, List[float]]:
    """
    'name=start:stop:step' -> (name, inclusive grid)

    Raises:
        RequestError: malformed text or an empty range
    """
    name, sep, spec = text.partition("=")
    parts = spec.split(":")
    if not sep or not name.strip() or len(parts) != 3:
        raise RequestError(f"Sweep must look like NAME=START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError:
        raise RequestError(f"Sweep bounds must be numbers, got {spec!r}") from None
    if not step > 0 or stop < start:
        raise RequestError(f"Empty sweep range {spec!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return name.strip(), [start + i * step for i in range(count)]


def resolve_source(req: RunRequest) -> Source:
    """
    Load the catalog entry or spec file named by the request and apply
    parameter overrides and the interval

    Raises:
        RequestError: neither or both sources given, unknown label/parameter
        SpecValidationError: the resulting spec is invalid
    """
    if bool(req.example) == bool(req.spec_path):
        raise RequestError("Give exactly one of --example LABEL or --spec FILE")
    entry = None
    if req.example:
        entry = get_entry(req.example)
        trajectory, hamiltonian, label = entry.as_tuple()
    else:
        trajectory, hamiltonian = load_spec(req.spec_path)
        label = trajectory.label or req.spec_path
    if req.overrides or req.interval:
        trajectory = trajectory.with_params(req.overrides, interval=req.interval)
    return Source(trajectory, hamiltonian, label, entry)


def _functional(source: Source, req: RunRequest) -> str:
    functional = req.functional or ("pure" if source.is_pure_state else "density")
    if functional == "pure" and not source.is_pure_state:
        raise RequestError(f"'{source.label}' is a density matrix; the pure functional needs a pure state")
    return functional


def _integrand(source: Source, functional: str, gauge: GaugeChoice) -> Callable[[float], float]:
    if functional == "pure":
        return lambda t: pure_integrand(source.trajectory, source.hamiltonian, gauge, t)
    return lambda t: density_integrand(source.trajectory, source.hamiltonian, t)


def _distance(
    trajectory: TrajectorySpec,
    hamiltonian: HamiltonianSpec,
    functional: str,
    gauge: GaugeChoice,
    tol: Optional[float],
) -> DistanceReport:
    cfg = QuadratureConfig.from_settings(*trajectory.interval, abs_tol=tol)
    if functional == "pure":
        return distance_pure(trajectory, hamiltonian, cfg, gauge)
    return distance_density(trajectory, hamiltonian, cfg)


def _failed(text: str, failure: ComparisonFailed) -> CommandOutput:
    logger.warning(str(failure))
    return CommandOutput(text, failure.exit_code, f"error: {failure}")


def _emit_table(
    command: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[float]],
    params: Mapping[str, float],
    req: RunRequest,
) -> CommandOutput:
    if req.json:
        text = reports.to_json(reports.table_payload(command, columns, rows, params))
    else:
        text = render_csv(curve_frame(rows, list(columns)))
    if req.out:
        write_atomic(text, req.out)
        return CommandOutput(f"wrote {len(rows)} rows to {req.out}\n")
    return CommandOutput(text)


def cmd_list(req: RunRequest) -> CommandOutput:
    """Catalog labels, defaults, pure/impure beta values and intervals"""
    entries = catalog()
    if req.json:
        return CommandOutput(reports.to_json(reports.catalog_payload(entries)))
    return CommandOutput("\n".join(reports.catalog_lines(entries)) + "\n")


def cmd_compute(req: RunRequest) -> CommandOutput:
    """Distance of one trajectory over its interval"""
    source = resolve_source(req)
    functional = _functional(source, req)
    gauge = GaugeChoice.from_text(req.gauge)
    report = _distance(source.trajectory, source.hamiltonian, functional, gauge, req.tol)
    params = source.trajectory.params
    if req.json:
        return CommandOutput(reports.to_json(reports.distance_payload("compute", report, params)))
    return CommandOutput(reports.distance_text(source.label, functional, source.trajectory.interval, params, report))


def cmd_curve(req: RunRequest) -> CommandOutput:
    """Integrand sampled on a uniform grid, as CSV (t,value) or a JSON table"""
    source = resolve_source(req)
    functional = _functional(source, req)
    integrand = _integrand(source, functional, GaugeChoice.from_text(req.gauge))
    samples = req.samples or DEFAULT_CURVE_SAMPLES
    rows = sample_curve(integrand, *source.trajectory.interval, samples)
    return _emit_table("curve", ["t", "value"], rows, source.trajectory.params, req)


def cmd_compare(req: RunRequest) -> CommandOutput:
    """
    Pure-state functional against the density functional of ψψ†

    Catalog twins are paired with their density entry at the pure beta;
    pure_state spec files are compared against their own projector.
    """
    source = resolve_source(req)
    if not source.is_pure_state:
        raise RequestError(f"'{source.label}' is not a pure-state source; compare needs one")

    pure_spec = source.trajectory
    density_spec, density_label = pure_spec, f"{source.label} (projector)"
    if source.entry is not None and source.entry.twin:
        twin = get_entry(source.entry.twin)
        shared = {k: v for k, v in req.overrides.items() if k in twin.trajectory.params}
        density_spec = twin.trajectory.with_params(
            {**source.entry.twin_params, **shared}, interval=pure_spec.interval
        )
        density_label = twin.label

    settings = get_settings()
    cfg = QuadratureConfig.from_settings(*pure_spec.interval, abs_tol=req.tol)
    result = compare(
        pure_spec,
        density_spec,
        source.hamiltonian,
        cfg,
        req.samples or DEFAULT_COMPARE_SAMPLES,
        GaugeChoice.from_text(req.gauge),
    )
    passed = result.max_pointwise_gap <= settings.compare_tol and result.distance_gap <= settings.compare_tol
    params = pure_spec.params
    if req.json:
        text = reports.to_json(reports.comparison_payload(result, params, passed))
    else:
        text = reports.comparison_text(source.label, density_label, params, result, passed)
    if not passed:
        return _failed(text, ComparisonFailed(
            f"Comparison failed for {source.label}: pointwise gap {result.max_pointwise_gap:.3e}, "
            f"distance gap {result.distance_gap:.3e} (tolerance {settings.compare_tol:g})"
        ))
    return CommandOutput(text)


def cmd_sweep(req: RunRequest) -> CommandOutput:
    """
    Distance over a grid of one or two parameters, as CSV (swept names
    followed by distance) or a JSON table whose params are the unswept values
    """
    if not 1 <= len(req.sweeps) <= 2:
        raise RequestError("sweep needs one or two --sweep NAME=START:STOP:STEP options")
    names = [name for name, _ in req.sweeps]
    if len(set(names)) != len(names):
        raise RequestError("Each swept parameter may appear only once")
    source = resolve_source(req)
    functional = _functional(source, req)
    gauge = GaugeChoice.from_text(req.gauge)
    grid = list(itertools.product(*(values for _, values in req.sweeps)))

    def run_point(values: Sequence[float]) -> float:
        spec = source.trajectory.with_params(dict(zip(names, values)))
        return _distance(spec, source.hamiltonian, functional, gauge, req.tol).distance

    workers = min(get_settings().sweep_workers, len(grid))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        distances = list(pool.map(run_point, grid))

    rows = [(*values, d) for values, d in zip(grid, distances)]
    fixed = {k: v for k, v in source.trajectory.params.items() if k not in names}
    return _emit_table("sweep", [*names, "distance"], rows, fixed, req)


def cmd_verify(req: RunRequest) -> CommandOutput:
    """Catalog density integrands against their closed forms, every sub-case"""
    samples = req.samples or DEFAULT_VERIFY_SAMPLES
    results = []
    for entry in catalog():
        if entry.family is None:
            continue
        for case, beta, _ in entry.cases:
            overrides = {"beta": beta, **{k: v for k, v in req.overrides.items() if k != "beta"}}
            spec = entry.trajectory.with_params(overrides, interval=req.interval)
            lam = spec.params["lambda"]
            worst = 0.0
            for t in np.linspace(*spec.interval, samples):
                numeric = density_integrand(spec, entry.hamiltonian, float(t))
                worst = max(worst, abs(numeric - closed_form_norm(entry.family, float(t), beta, lam)))
            results.append((entry.label, case, beta, worst, worst <= VERIFY_TOL))
    if req.json:
        payload = {
            "command": "verify",
            "cases": [
                {"label": label, "case": case, "beta": beta, "max_deviation": worst, "ok": ok}
                for label, case, beta, worst, ok in results
            ],
        }
        text = reports.to_json(payload)
    else:
        text = reports.verify_text(results)
    mismatched = [f"{label} {case}" for label, case, _, _, ok in results if not ok]
    if mismatched:
        return _failed(text, ComparisonFailed(
            f"Closed forms differ by more than {VERIFY_TOL:g} for {', '.join(mismatched)}"
        ))
    return CommandOutput(text)


COMMANDS: Dict[str, Callable[[RunRequest], CommandOutput]] = {
    "list": cmd_list,
    "compute": cmd_compute,
    "curve": cmd_curve,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}
