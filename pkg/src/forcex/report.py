"""Report assembly and serialization.

A report's key set is fixed by this module, never by what the sample
did: consumers can rely on every field existing.  JSON output is fully
sorted so identical analyses serialize to identical bytes, apart from
the two wall-clock fields.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

from .explorer import ExplorationResult, coverage_ratio
from .interpreter import Budgets
from .policies import Finding, max_severity

SCHEMA_VERSION = 1

# stripped before byte-comparison; everything else must be stable
TIMESTAMP_FIELDS = ("generated_at", ("stats", "wall_time_s"))


def engine_echo(budgets: Budgets) -> dict:
    return {
        "seed": budgets.seed,
        "loop_budget_ms": budgets.loop_budget_ms,
        "recursion_cap": budgets.recursion_cap,
        "sample_timeout_s": budgets.sample_timeout_s,
        "activex_mode": budgets.activex_mode,
        "spray_chunk_len": budgets.spray_chunk_len,
    }


def build_report(sample: str, result: ExplorationResult | None,
                 findings: list, budgets: Budgets,
                 error: str | None = None) -> dict:
    """Assemble the full report dict for one sample.

    result may be None for samples that never reached the engine
    (unreadable file); error carries the reason in that case.
    """
    findings = list(findings)
    terminations: dict = {}
    event_counts: dict = {}
    units = []
    flipped = set()
    runs = 0
    wall = 0.0
    exhausted = True
    coverage_pct = 0.0
    if result is not None:
        runs = result.total_runs
        wall = result.wall_time_s
        exhausted = result.exhausted
        coverage_pct = round(100.0 * coverage_ratio(result), 2)
        for unit_name, run_index, ev in result.events:
            event_counts[ev.kind] = event_counts.get(ev.kind, 0) + 1
        for ur in result.units:
            for run in ur.runs:
                terminations[run.outcome.terminated_by] = (
                    terminations.get(run.outcome.terminated_by, 0) + 1)
                for anchor, direction in run.switches:
                    if anchor in run.outcome.fired_switches:
                        flipped.add((str(anchor), direction))
            units.append({
                "name": ur.name,
                "kind": ur.kind,
                "runs": len(ur.runs),
                "parse_error": ur.parse_error,
            })
        if error is None:
            error = result.error

    return {
        "schema_version": SCHEMA_VERSION,
        "sample": sample,
        "verdict": max_severity(findings),
        "error": error,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "engine": engine_echo(budgets),
        "stats": {
            "runs": runs,
            "predicates_flipped": len(flipped),
            "units_discovered": len(units),
            "coverage_pct": coverage_pct,
            "wall_time_s": round(wall, 3),
            "exhausted": exhausted,
            "terminations": terminations,
            "events": event_counts,
        },
        "findings": [finding_dict(f) for f in findings],
        "units": units,
    }


def finding_dict(f: Finding) -> dict:
    return {
        "policy": f.policy,
        "severity": f.severity,
        "evidence": f.evidence,
        "anchor": f.anchor,
        "run": f.run,
        "operational": f.operational,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_text(report: dict) -> str:
    lines = []
    lines.append(f"sample:  {report['sample']}")
    lines.append(f"verdict: {report['verdict'].upper()}")
    if report["error"]:
        lines.append(f"error:   {report['error']}")
    st = report["stats"]
    lines.append(
        f"runs: {st['runs']}  units: {st['units_discovered']}  "
        f"flipped: {st['predicates_flipped']}  coverage: {st['coverage_pct']}%  "
        f"wall: {st['wall_time_s']}s" + ("" if st["exhausted"] else "  (timed out)"))
    if st["terminations"]:
        parts = ", ".join(f"{k}={v}" for k, v in sorted(st["terminations"].items()))
        lines.append(f"terminations: {parts}")
    if st["events"]:
        parts = ", ".join(f"{k}={v}" for k, v in sorted(st["events"].items()))
        lines.append(f"events: {parts}")
    if report["findings"]:
        lines.append("findings:")
        for f in report["findings"]:
            where = f" @ {f['anchor']}" if f["anchor"] else ""
            run = f" (run {f['run']})" if f["run"] is not None else ""
            lines.append(f"  [{f['severity']}] {f['policy']}{where}{run}")
            lines.append(f"      {f['evidence']}")
    else:
        lines.append("findings: none")
    return "\n".join(lines) + "\n"


def strip_timestamps(report: dict) -> dict:
    """Copy of the report with wall-clock fields nulled, for comparisons."""
    out = json.loads(json.dumps(report))
    out["generated_at"] = None
    out["stats"]["wall_time_s"] = None
    return out
