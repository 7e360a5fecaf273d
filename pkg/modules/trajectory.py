"""
Time-dependent states and density matrices
Declarative specs whose entries are expressions in t, exact-derivative
sampling, purity classification and JSON ingestion

VERSION HISTORY:
1.3.0 - Stricter spec-file ingestion - 18/10/26
      CHANGES:
      - Malformed params, interval and Hamiltonian values raise SpecValidationError
      - Unknown strictness values are rejected
      - State checks use CQDIST_HERMITIAN_TOL
      - Warn mode logs each failed check once per spec
1.2.0 - Optional Hamiltonian block and strictness in spec files - 18/10/26
      ADDITIONS:
      - "hamiltonian" object with constant entries and a scale parameter
      - "strictness" per file (strict | warn)
1.1.0 - Construction-time validation grid - 18/10/26
      CHANGES:
      - 64 Chebyshev nodes plus endpoints over the declared interval
      - Positive semidefiniteness checked with Jacobi eigenvalues
1.0.0 - Density and pure-state specs with dual-number sampling - 18/10/26
KEY FUNCTIONS:
- TrajectorySpec / HamiltonianSpec (immutable)
- sample(spec, t) -> SampledPoint (value and entrywise d/dt)
- purity, classify, pure_bound
- density_from_state, density_derivative_from_state
- spec_from_dict / load_spec (JSON trajectory files)
"""
import json
import math
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from config import get_settings
from config.settings import STRICTNESS_LEVELS
from modules import cmatrix
from modules.cmatrix import ComplexMatrix, ComplexVector
from modules.errors import (
    CqdistError,
    InvalidStateError,
    RequestError,
    SpecValidationError,
)
from modules.expr import ZERO, ExprNode, check_param_name, eval_dual, free_params, parse

# Configure logging
logger = logging.getLogger(__name__)

HAMILTONIAN_TOL = 1e-12
VALIDATION_NODES = 64


class Kind(str, Enum):
    DENSITY = "density"
    PURE_STATE = "pure_state"


class Purity(str, Enum):
    PURE = "pure"
    IMPURE = "impure"


@dataclass(frozen=True)
class Cell:
    """One complex entry as a (re, im) expression pair"""

    re: ExprNode
    im: ExprNode = ZERO

    @classmethod
    def from_text(cls, re: str, im: Optional[str] = None) -> "Cell":
        return cls(parse(re), parse(im) if im else ZERO)


@dataclass(frozen=True, eq=False)
class SampledPoint:
    """A sampled matrix or vector together with its entrywise time derivative"""

    t: float
    value: Union[ComplexMatrix, ComplexVector]
    deriv: Union[ComplexMatrix, ComplexVector]


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """
    Constant Hermitian matrix, optionally multiplied by a named parameter

    Args:
        base: Constant matrix
        scale: Parameter name multiplying base (None for no scaling)
        label: Display name
    """

    base: ComplexMatrix
    scale: Optional[str] = "lambda"
    label: str = ""

    def __post_init__(self):
        base = cmatrix.as_matrix(self.base)
        if not cmatrix.is_hermitian(base, HAMILTONIAN_TOL):
            raise SpecValidationError(f"Hamiltonian '{self.label}' is not Hermitian")
        base.setflags(write=False)
        object.__setattr__(self, "base", base)

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    def matrix(self, params: Mapping[str, float]) -> ComplexMatrix:
        """H for the given parameter values"""
        if self.scale is None:
            return self.base
        if self.scale not in params:
            raise RequestError(f"Hamiltonian scale parameter '{self.scale}' is not set")
        return float(params[self.scale]) * self.base

    @classmethod
    def zero(cls, dim: int) -> "HamiltonianSpec":
        return cls(np.zeros((dim, dim)), scale=None, label="zero")


@dataclass(frozen=True, eq=False)
class TrajectorySpec:
    """
    Time-dependent density matrix or pure state

    Cells are stored row-major (dim*dim for density, dim for pure states).
    Construction validates the spec on a Chebyshev grid over the interval;
    strict mode raises, warn mode logs each failed check once and proceeds.
    strictness and state_tol default to CQDIST_STRICTNESS and
    CQDIST_HERMITIAN_TOL.
    """

    kind: Kind
    dim: int
    cells: Tuple[Cell, ...]
    params: Mapping[str, float] = field(default_factory=dict)
    label: str = ""
    interval: Tuple[float, float] = (0.0, math.pi)
    strictness: Optional[str] = None
    validate: bool = True
    state_tol: Optional[float] = None

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError:
            raise SpecValidationError(f"Spec '{self.label}': unknown kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", MappingProxyType(_coerce_params(self.params, self.label)))
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "interval", _coerce_interval(self.interval, self.label))
        settings = get_settings()
        if self.strictness is None:
            object.__setattr__(self, "strictness", settings.strictness)
        if self.strictness not in STRICTNESS_LEVELS:
            raise SpecValidationError(
                f"Spec '{self.label}': strictness must be one of {STRICTNESS_LEVELS}, got {self.strictness!r}"
            )
        if self.state_tol is None:
            object.__setattr__(self, "state_tol", settings.hermitian_tol)
        # checks already reported in warn mode
        object.__setattr__(self, "_warned", set())

        if self.dim < 1:
            raise SpecValidationError(f"Spec '{self.label}': dim must be positive")
        expected = self.dim * self.dim if kind is Kind.DENSITY else self.dim
        if len(self.cells) != expected:
            raise SpecValidationError(
                f"Spec '{self.label}': expected {expected} entries for {kind.value} of dim {self.dim}, "
                f"got {len(self.cells)}"
            )
        for name in self.params:
            if not check_param_name(name):
                raise SpecValidationError(f"Spec '{self.label}': invalid parameter name '{name}'")
        used = set()
        for cell in self.cells:
            used |= free_params(cell.re) | free_params(cell.im)
        missing = sorted(used - set(self.params))
        if missing:
            raise SpecValidationError(f"Spec '{self.label}': no value for parameters {missing}")
        t0, t1 = self.interval
        if not (math.isfinite(t0) and math.isfinite(t1) and t0 < t1):
            raise SpecValidationError(f"Spec '{self.label}': invalid interval {self.interval}")
        if self.validate:
            validate_spec(self)

    def with_params(
        self,
        overrides: Mapping[str, float],
        interval: Optional[Tuple[float, float]] = None,
    ) -> "TrajectorySpec":
        """
        Copy with some parameter values (and optionally the interval) replaced;
        the copy is revalidated

        Raises:
            RequestError: an override names a parameter the spec does not declare
        """
        unknown = sorted(set(overrides) - set(self.params))
        if unknown:
            raise RequestError(f"Spec '{self.label}' has no parameters {unknown}")
        merged = dict(self.params)
        merged.update({k: float(v) for k, v in overrides.items()})
        return replace(self, params=merged, interval=interval or self.interval)

    def sample(self, t: float) -> SampledPoint:
        return sample(self, t)


def _coerce_params(params: Any, label: str) -> Dict[str, float]:
    if not isinstance(params, Mapping):
        raise SpecValidationError(f"Spec '{label}': 'params' must be an object of name -> number")
    coerced = {}
    for name, value in params.items():
        try:
            coerced[name] = float(value)
        except (TypeError, ValueError):
            raise SpecValidationError(f"Spec '{label}': params.{name} must be a number, got {value!r}") from None
    return coerced


def _coerce_interval(interval: Any, label: str) -> Tuple[float, float]:
    if isinstance(interval, (str, bytes)) or not isinstance(interval, Sequence) or len(interval) != 2:
        raise SpecValidationError(f"Spec '{label}': 'interval' must be [t0, t1], got {interval!r}")
    try:
        return float(interval[0]), float(interval[1])
    except (TypeError, ValueError):
        raise SpecValidationError(f"Spec '{label}': 'interval' bounds must be numbers, got {interval!r}") from None


def _report(spec: TrajectorySpec, check: str, message: str):
    if spec.strictness == "strict":
        raise SpecValidationError(f"Spec '{spec.label}': {message}")
    if check in spec._warned:
        logger.debug(f"Spec '{spec.label}': {message}")
        return
    spec._warned.add(check)
    logger.warning(f"Spec '{spec.label}': {message} (further '{check}' failures logged at DEBUG)")


def _check_point(spec: TrajectorySpec, point: SampledPoint):
    t, tol = point.t, spec.state_tol
    if spec.kind is Kind.DENSITY:
        if not cmatrix.is_hermitian(point.value, tol):
            _report(spec, "hermitian", f"matrix is not Hermitian at t={t!r}")
        if abs(cmatrix.trace(point.value) - 1.0) > tol:
            _report(spec, "trace", f"trace is not 1 at t={t!r}")
        if not cmatrix.is_hermitian(point.deriv, tol):
            _report(spec, "derivative", f"derivative is not Hermitian at t={t!r}")
    else:
        if abs(cmatrix.vector_norm(point.value) - 1.0) > tol:
            _report(spec, "normalization", f"state is not normalized at t={t!r}")


def sample(spec: TrajectorySpec, t: float) -> SampledPoint:
    """
    Evaluate the spec and its time derivative at t

    Args:
        spec: Trajectory spec
        t: Time (natural units)

    Returns:
        SampledPoint with value and entrywise derivative

    Raises:
        ExprDomainError: an entry is undefined at t
        SpecValidationError: an invariant fails in strict mode
    """
    values = np.empty(len(spec.cells), dtype=np.complex128)
    derivs = np.empty(len(spec.cells), dtype=np.complex128)
    for i, cell in enumerate(spec.cells):
        re = eval_dual(cell.re, t, spec.params)
        im = eval_dual(cell.im, t, spec.params)
        values[i] = complex(re.value, im.value)
        derivs[i] = complex(re.deriv, im.deriv)
    if spec.kind is Kind.DENSITY:
        values = values.reshape(spec.dim, spec.dim)
        derivs = derivs.reshape(spec.dim, spec.dim)
    point = SampledPoint(float(t), values, derivs)
    _check_point(spec, point)
    return point


def validation_grid(t0: float, t1: float, nodes: int = VALIDATION_NODES) -> np.ndarray:
    """Chebyshev nodes over [t0, t1] plus both endpoints, ascending"""
    k = np.arange(nodes)
    cheb = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * np.cos((2 * k + 1) * np.pi / (2 * nodes))
    return np.concatenate(([t0], np.sort(cheb), [t1]))


def validate_spec(spec: TrajectorySpec):
    """
    Check Hermiticity, unit trace and positivity (density) or normalization
    (pure state) on the validation grid
    """
    for t in validation_grid(*spec.interval):
        try:
            point = sample(spec, float(t))
        except SpecValidationError:
            raise
        except CqdistError as e:
            _report(spec, "evaluation", f"cannot be evaluated: {e}")
            continue
        if spec.kind is Kind.DENSITY:
            lowest = cmatrix.min_eigenvalue(point.value)
            if lowest < -spec.state_tol:
                _report(spec, "positivity", f"not positive semidefinite at t={float(t)!r} (eigenvalue {lowest:.3e})")
    logger.debug(f"Spec '{spec.label}' validated on {spec.interval}")


def purity(rho: ComplexMatrix) -> float:
    """Tr(ρ²): 1 for pure states, below 1 for impure states"""
    return float(np.real(cmatrix.trace(rho @ rho)))


def purity_from_entries(a: float, b: complex) -> float:
    """Tr(ρ²) for ρ = [[a, b], [b*, 1−a]], i.e. 2a² + 2|b|² + 1 − 2a"""
    return 2 * a * a + 2 * abs(b) ** 2 + 1 - 2 * a


def classify(rho: ComplexMatrix, tol: Optional[float] = None) -> Purity:
    """
    Pure iff Tr(ρ²) ≥ 1 − tol

    Raises:
        InvalidStateError: Tr(ρ²) exceeds 1 + tol
    """
    tol = get_settings().purity_tol if tol is None else tol
    p = purity(rho)
    if p > 1 + tol:
        raise InvalidStateError(f"Purity {p!r} exceeds 1; not a density matrix")
    return Purity.PURE if p >= 1 - tol else Purity.IMPURE


def pure_bound(a: float) -> float:
    """Largest |b| for which [[a, b], [b*, 1−a]] is still a pure state"""
    if not 0.0 <= a <= 1.0:
        raise InvalidStateError(f"Diagonal entry a={a!r} outside [0, 1]")
    return math.sqrt(max(a - a * a, 0.0))


def density_from_state(psi: ComplexVector, tol: Optional[float] = None) -> ComplexMatrix:
    """
    Projector ψψ† of a normalized state (norm within tol, CQDIST_HERMITIAN_TOL by default)

    Raises:
        InvalidStateError: psi is not normalized
    """
    tol = get_settings().hermitian_tol if tol is None else tol
    norm = cmatrix.vector_norm(psi)
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"State has norm {norm!r}, expected 1")
    return np.outer(psi, np.conj(psi))


def density_derivative_from_state(psi: ComplexVector, psi_dot: ComplexVector) -> ComplexMatrix:
    """d/dt (ψψ†) = ψ̇ψ† + ψψ̇†"""
    return np.outer(psi_dot, np.conj(psi)) + np.outer(psi, np.conj(psi_dot))


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------

def _cell_from_json(raw: Any, where: str) -> Cell:
    if isinstance(raw, str):
        return Cell.from_text(raw)
    if isinstance(raw, (int, float)):
        return Cell.from_text(repr(float(raw)))
    if isinstance(raw, dict) and "re" in raw:
        re, im = raw["re"], raw.get("im")
        return Cell.from_text(str(re), str(im) if im is not None else None)
    raise SpecValidationError(f"Entry {where} must be an expression or an object with 're'")


def _hamiltonian_entry(entry: Any, where: str) -> complex:
    try:
        if isinstance(entry, dict):
            return complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        return complex(float(entry))
    except (TypeError, ValueError):
        raise SpecValidationError(f"hamiltonian.entries{where} must be a number or {{re, im}}, got {entry!r}") from None


def _hamiltonian_from_json(raw: Any, dim: int) -> HamiltonianSpec:
    if not isinstance(raw, dict):
        raise SpecValidationError("'hamiltonian' must be an object with 'entries'")
    scale = raw.get("scale")
    if scale is not None and not isinstance(scale, str):
        raise SpecValidationError(f"hamiltonian.scale must be a parameter name, got {scale!r}")
    rows = raw.get("entries")
    if not isinstance(rows, list) or len(rows) != dim:
        raise SpecValidationError(f"Hamiltonian must have {dim} rows")
    base = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise SpecValidationError(f"Hamiltonian row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            base[i, j] = _hamiltonian_entry(entry, f"[{i}][{j}]")
    return HamiltonianSpec(base, scale=scale, label=str(raw.get("label", "")))


def spec_from_dict(doc: Mapping[str, Any]) -> Tuple[TrajectorySpec, HamiltonianSpec]:
    """
    Build a trajectory spec (and its Hamiltonian) from a parsed JSON document

    Raises:
        SpecValidationError: malformed document or invalid trajectory
        ExprSyntaxError: an entry does not parse
    """
    try:
        kind = Kind(doc["kind"])
        dim = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, ValueError, TypeError) as e:
        raise SpecValidationError(f"Spec document needs 'kind', 'dim' and 'entries': {e}") from None

    cells: List[Cell] = []
    if kind is Kind.DENSITY:
        if not isinstance(entries, list) or len(entries) != dim:
            raise SpecValidationError(f"Density entries must be {dim} rows")
        for i, row in enumerate(entries):
            if not isinstance(row, list) or len(row) != dim:
                raise SpecValidationError(f"Row {i} must have {dim} entries")
            cells.extend(_cell_from_json(raw, f"[{i}][{j}]") for j, raw in enumerate(row))
    else:
        if not isinstance(entries, list):
            raise SpecValidationError("Pure-state entries must be a flat list")
        cells.extend(_cell_from_json(raw, f"[{i}]") for i, raw in enumerate(entries))

    spec = TrajectorySpec(
        kind=kind,
        dim=dim,
        cells=tuple(cells),
        params=doc.get("params", {}),
        label=str(doc.get("label", "")),
        interval=doc.get("interval", (0.0, math.pi)),
        strictness=doc.get("strictness"),
    )

    if "hamiltonian" in doc:
        hamiltonian = _hamiltonian_from_json(doc["hamiltonian"], dim)
        if hamiltonian.scale is not None and hamiltonian.scale not in spec.params:
            raise SpecValidationError(
                f"Hamiltonian scale '{hamiltonian.scale}' is not among the spec parameters"
            )
    else:
        logger.warning(f"Spec '{spec.label}' has no Hamiltonian; using H = 0")
        hamiltonian = HamiltonianSpec.zero(dim)
    return spec, hamiltonian


def load_spec(path: Union[str, Path]) -> Tuple[TrajectorySpec, HamiltonianSpec]:
    """Read a trajectory spec JSON file"""
    try:
        doc: Dict[str, Any] = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise RequestError(f"Cannot read spec file {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise SpecValidationError(f"Spec file {path} is not valid JSON: {e.msg} (line {e.lineno})") from None
    if not isinstance(doc, dict):
        raise SpecValidationError(f"Spec file {path} must contain a JSON object")
    return spec_from_dict(doc)
