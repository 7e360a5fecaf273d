"""
Built-in example catalog
The four general 2x2 examples (two density families times two Hamiltonians)
with their pure/impure sub-cases, pure-state twins for the comparison workflow,
and the closed-form deviation norms used as regression references

VERSION HISTORY:
1.1.0 - Pure-state twins for the second Hamiltonian - 18/10/26
      ADDITIONS:
      - ex2a-psi and ex4a-psi paired with ex2 (beta=1/2) and ex4 (beta=1)
1.0.0 - ex1..ex4, ex1a-psi, ex3a-psi and closed forms - 18/10/26
KEY FUNCTIONS:
- catalog() -> list of CatalogEntry
- get_entry(label) with "ex1a" style aliases for pure-state twins
- closed_form_norm(family, t, beta, lam)
"""
import math
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from modules.errors import RequestError
from modules.trajectory import Cell, HamiltonianSpec, Kind, Purity, TrajectorySpec

# Configure logging
logger = logging.getLogger(__name__)

PERIODIC_INTERVAL = (0.0, math.pi)
RATIONAL_INTERVAL = (-4.0, 4.0)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """
    A named trajectory with its Hamiltonian

    Args:
        label: Catalog label (ex1, ex1a-psi, ...)
        trajectory: Default-parameter trajectory spec
        hamiltonian: Hamiltonian spec (scaled by lambda)
        description: One-line summary
        pure_beta: beta value giving a pure state (density families)
        cases: Named sub-cases as (name, beta, purity)
        family: Closed-form family for closed_form_norm
        twin: Density entry paired with a pure-state twin
        twin_params: Parameter values selecting the pure case of the twin
    """

    label: str
    trajectory: TrajectorySpec
    hamiltonian: HamiltonianSpec
    description: str
    pure_beta: Optional[float] = None
    cases: Tuple[Tuple[str, float, Purity], ...] = ()
    family: Optional[str] = None
    twin: Optional[str] = None
    twin_params: Mapping[str, float] = field(default_factory=dict)

    @property
    def interval(self) -> Tuple[float, float]:
        return self.trajectory.interval

    @property
    def is_pure_state(self) -> bool:
        return self.trajectory.kind is Kind.PURE_STATE

    def as_tuple(self) -> Tuple[TrajectorySpec, HamiltonianSpec, str]:
        return self.trajectory, self.hamiltonian, self.label


def _h1() -> HamiltonianSpec:
    return HamiltonianSpec(np.diag([1.0, -1.0]), scale="lambda", label="H1 = lambda*diag(1,-1)")


def _h2() -> HamiltonianSpec:
    return HamiltonianSpec(np.array([[0.0, 1.0], [1.0, 0.0]]), scale="lambda", label="H2 = lambda*[[0,1],[1,0]]")


def _density(label: str, a: str, b: str, d: str, beta: float, interval) -> TrajectorySpec:
    cells = [Cell.from_text(a), Cell.from_text(b), Cell.from_text(b), Cell.from_text(d)]
    return TrajectorySpec(
        kind=Kind.DENSITY,
        dim=2,
        cells=tuple(cells),
        params={"beta": beta, "lambda": 1.0},
        label=label,
        interval=interval,
        strictness="strict",
    )


def _pure(label: str, first: str, second: str, interval) -> TrajectorySpec:
    return TrajectorySpec(
        kind=Kind.PURE_STATE,
        dim=2,
        cells=(Cell.from_text(first), Cell.from_text(second)),
        params={"lambda": 1.0},
        label=label,
        interval=interval,
        strictness="strict",
    )


def _cases(number: int, pure: float) -> Tuple[Tuple[str, float, Purity], ...]:
    return (
        (f"{number}a", pure, Purity.PURE),
        (f"{number}b", pure / 2, Purity.IMPURE),
        (f"{number}c", 0.0, Purity.IMPURE),
    )


@lru_cache(maxsize=1)
def _build() -> Tuple[CatalogEntry, ...]:
    trig = ("cos(t)^2", "beta*sin(2*t)", "sin(t)^2")
    rational = ("1/(1+t^2)", "beta*t/(1+t^2)", "t^2/(1+t^2)")
    entries = [
        CatalogEntry(
            "ex1", _density("ex1", *trig, beta=0.5, interval=PERIODIC_INTERVAL), _h1(),
            "a = cos^2 t, b = beta sin 2t with H1", pure_beta=0.5, cases=_cases(1, 0.5), family="ex1",
        ),
        CatalogEntry(
            "ex2", _density("ex2", *trig, beta=0.5, interval=PERIODIC_INTERVAL), _h2(),
            "a = cos^2 t, b = beta sin 2t with H2", pure_beta=0.5, cases=_cases(2, 0.5), family="ex2",
        ),
        CatalogEntry(
            "ex3", _density("ex3", *rational, beta=1.0, interval=RATIONAL_INTERVAL), _h1(),
            "a = 1/(1+t^2), b = beta t/(1+t^2) with H1", pure_beta=1.0, cases=_cases(3, 1.0), family="ex3",
        ),
        CatalogEntry(
            "ex4", _density("ex4", *rational, beta=1.0, interval=RATIONAL_INTERVAL), _h2(),
            "a = 1/(1+t^2), b = beta t/(1+t^2) with H2", pure_beta=1.0, cases=_cases(4, 1.0), family="ex4",
        ),
        CatalogEntry(
            "ex1a-psi", _pure("ex1a-psi", "cos(t)", "sin(t)", PERIODIC_INTERVAL), _h1(),
            "psi = (cos t, sin t) with H1, pure twin of ex1 at beta=0.5",
            twin="ex1", twin_params={"beta": 0.5},
        ),
        CatalogEntry(
            "ex2a-psi", _pure("ex2a-psi", "cos(t)", "sin(t)", PERIODIC_INTERVAL), _h2(),
            "psi = (cos t, sin t) with H2, pure twin of ex2 at beta=0.5",
            twin="ex2", twin_params={"beta": 0.5},
        ),
        CatalogEntry(
            "ex3a-psi", _pure("ex3a-psi", "1/sqrt(1+t^2)", "t/sqrt(1+t^2)", RATIONAL_INTERVAL), _h1(),
            "psi = (1, t)/sqrt(1+t^2) with H1, pure twin of ex3 at beta=1",
            twin="ex3", twin_params={"beta": 1.0},
        ),
        CatalogEntry(
            "ex4a-psi", _pure("ex4a-psi", "1/sqrt(1+t^2)", "t/sqrt(1+t^2)", RATIONAL_INTERVAL), _h2(),
            "psi = (1, t)/sqrt(1+t^2) with H2, pure twin of ex4 at beta=1",
            twin="ex4", twin_params={"beta": 1.0},
        ),
    ]
    logger.debug(f"Built catalog with {len(entries)} entries")
    return tuple(entries)


def catalog() -> List[CatalogEntry]:
    """All built-in entries in display order"""
    return list(_build())


def get_entry(label: str) -> CatalogEntry:
    """
    Look up a catalog entry; "ex1a" resolves to "ex1a-psi"

    Raises:
        RequestError: unknown label
    """
    by_label: Dict[str, CatalogEntry] = {entry.label: entry for entry in _build()}
    for candidate in (label, f"{label}-psi"):
        if candidate in by_label:
            return by_label[candidate]
    raise RequestError(f"Unknown catalog label '{label}' (known: {', '.join(by_label)})")


def closed_form_norm(family: str, t: float, beta: float, lam: float) -> float:
    """
    Hand-derived ‖iρ̇ − [H, ρ]‖ for the four general examples

    Args:
        family: ex1 | ex2 | ex3 | ex4
        t: Time
        beta: Off-diagonal coefficient
        lam: Hamiltonian scale

    Returns:
        Deviation norm at t
    """
    if family == "ex1":
        c, s = math.cos(t), math.sin(t)
        return math.sqrt(
            4 * c * c * s * s
            + 4 * beta ** 2 * math.cos(2 * t) ** 2
            + 4 * lam ** 2 * beta ** 2 * math.sin(2 * t) ** 2
        )
    if family == "ex2":
        return math.sqrt(math.sin(2 * t) ** 2 + math.cos(2 * t) ** 2 * (4 * beta ** 2 + lam ** 2))
    u = 1 + t * t
    if family == "ex3":
        return math.sqrt(
            4 * t * t + beta ** 2 * (1 - t * t) ** 2 + 4 * lam ** 2 * beta ** 2 * t * t * u * u
        ) / (u * u)
    if family == "ex4":
        return math.sqrt(4 * t * t + beta ** 2 * (1 - t * t) ** 2 + lam ** 2 * (t ** 4 - 1) ** 2) / (u * u)
    raise RequestError(f"No closed form for family '{family}'")
