"""
Report rendering for CLI commands
Plain-text panels for people, single JSON objects for scripts

VERSION HISTORY:
1.1.0 - JSON tables for curve and sweep - 18/10/26
1.0.0 - Text and JSON renderers for compute, compare, list and verify - 18/10/26
"""
import json
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

from modules.catalog import CatalogEntry
from modules.distance import ComparisonResult, DistanceReport


def to_json(payload: Mapping[str, Any]) -> str:
    """Deterministic JSON (sorted keys, exact float repr)"""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _fmt_params(params: Mapping[str, float]) -> str:
    return ", ".join(f"{name}={value:g}" for name, value in sorted(params.items())) or "-"


def _fmt_interval(interval: Tuple[float, float]) -> str:
    return f"[{interval[0]!r}, {interval[1]!r}]"


def distance_payload(command: str, report: DistanceReport, params: Mapping[str, float]) -> Dict[str, Any]:
    return {
        "command": command,
        "distance": report.distance,
        "error_estimate": report.error_estimate,
        "evaluations": report.evaluations,
        "params": dict(params),
    }


def distance_text(
    label: str,
    functional: str,
    interval: Tuple[float, float],
    params: Mapping[str, float],
    report: DistanceReport,
) -> str:
    lines = [
        f"source:         {label}",
        f"functional:     {functional}",
        f"interval:       {_fmt_interval(interval)}",
        f"params:         {_fmt_params(params)}",
        f"distance:       {report.distance:.12f}",
        f"error_estimate: {report.error_estimate:.3e}",
        f"evaluations:    {report.evaluations}",
    ]
    return "\n".join(lines) + "\n"


def comparison_payload(result: ComparisonResult, params: Mapping[str, float], passed: bool) -> Dict[str, Any]:
    payload = distance_payload("compare", result.pure, params)
    payload.update(
        {
            "density_distance": result.density.distance,
            "max_pointwise_gap": result.max_pointwise_gap,
            "worst_t": result.worst_t,
            "distance_gap": result.distance_gap,
            "passed": passed,
        }
    )
    return payload


def comparison_text(
    pure_label: str,
    density_label: str,
    params: Mapping[str, float],
    result: ComparisonResult,
    passed: bool,
) -> str:
    lines = [
        f"pure state:        {pure_label}",
        f"density matrix:    {density_label}",
        f"params:            {_fmt_params(params)}",
        f"pure distance:     {result.pure.distance:.12f}",
        f"density distance:  {result.density.distance:.12f}",
        f"max pointwise gap: {result.max_pointwise_gap:.3e} (t={result.worst_t:.6g})",
        f"distance gap:      {result.distance_gap:.3e}",
        "PASS" if passed else "FAIL",
    ]
    return "\n".join(lines) + "\n"


def catalog_lines(entries: Iterable[CatalogEntry]) -> List[str]:
    lines = []
    for entry in entries:
        spec = entry.trajectory
        head = f"{entry.label:<10} {spec.kind.value:<10} params: {_fmt_params(spec.params)}"
        if entry.pure_beta is not None:
            head += f"; pure at beta={entry.pure_beta:g}"
        if entry.twin:
            head += f"; pure-state twin of {entry.twin} ({_fmt_params(entry.twin_params)})"
        head += f"; interval {_fmt_interval(entry.interval)}"
        lines.append(head)
        lines.append(f"{'':<10} {entry.description}; {entry.hamiltonian.label}")
        if entry.cases:
            cases = ", ".join(f"{name}: beta={beta:g} ({purity.value})" for name, beta, purity in entry.cases)
            lines.append(f"{'':<10} cases {cases}")
    return lines


def catalog_payload(entries: Iterable[CatalogEntry]) -> Dict[str, Any]:
    return {
        "command": "list",
        "entries": [
            {
                "label": entry.label,
                "kind": entry.trajectory.kind.value,
                "params": dict(entry.trajectory.params),
                "pure_beta": entry.pure_beta,
                "interval": list(entry.interval),
                "twin": entry.twin,
                "description": entry.description,
            }
            for entry in entries
        ],
    }


def verify_text(rows: Sequence[Tuple[str, str, float, float, bool]]) -> str:
    lines = [
        f"{label:<6} {case:<4} beta={beta:<6g} max deviation {worst:.3e} {'OK' if ok else 'MISMATCH'}"
        for label, case, beta, worst, ok in rows
    ]
    return "\n".join(lines) + "\n"


def table_payload(
    command: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[float]],
    params: Mapping[str, float],
) -> Dict[str, Any]:
    """Curve and sweep tables as one JSON object, one record per row"""
    return {
        "command": command,
        "columns": list(columns),
        "params": dict(params),
        "rows": [dict(zip(columns, (float(v) for v in row))) for row in rows],
    }
