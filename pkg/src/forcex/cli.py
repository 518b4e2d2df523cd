"""Batch command-line front end.

`analyze` takes sample paths, runs each through exploration and the
policy set, and writes one report per sample (stdout by default, files
under --out).  Exit status encodes the batch verdict: 0 all benign,
2 any malicious, 1 operational trouble with no malice found.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from pathlib import Path

from .explorer import explore_units
from .hostenv import extract_scripts
from .interpreter import Budgets
from .policies import builtin_policies, evaluate_policies
from .report import build_report, to_json, to_text

EXIT_BENIGN = 0
EXIT_OPERATIONAL = 1
EXIT_MALICIOUS = 2


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="analyze",
        description="Forced-execution analysis of JavaScript samples.",
    )
    p.add_argument("paths", nargs="+", help=".js, .html or .htm sample files")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", metavar="DIR",
                   help="write one report file per sample plus an index")
    p.add_argument("--seed", type=int, default=None,
                   help="engine seed (default: FORCEX_SEED env or 0)")
    p.add_argument("--sample-timeout", type=float, default=300.0, metavar="SECS")
    p.add_argument("--loop-budget", type=float, default=2000.0, metavar="MS")
    p.add_argument("--recursion-cap", type=int, default=512, metavar="N")
    p.add_argument("--activex", choices=("fake", "throw"), default="throw")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    p.add_argument("--policy-config", metavar="FILE",
                   help="JSON file of per-policy threshold overrides")
    return p


def resolve_seed(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("FORCEX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def load_policy_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("policy config must be a JSON object")
    return cfg


def sample_units(path: str, text: str):
    """Split a sample into its root units: one per page script, or the
    raw text for plain .js input."""
    suffix = Path(path).suffix.lower()
    if suffix in (".html", ".htm"):
        scripts = extract_scripts(text, Path(path).stem)
        if not scripts:
            return []
        return scripts
    return [(Path(path).name, text)]


def analyze_sample(path: str, budgets: Budgets, policy_config: dict) -> dict:
    """Explore one sample and evaluate the policy set over it."""
    try:
        with open(path, "r", encoding="utf-8", errors="replace") as fh:
            text = fh.read()
    except OSError as exc:
        return build_report(path, None, [], budgets, error=f"unreadable: {exc}")

    roots = sample_units(path, text)
    if not roots:
        return build_report(path, None, [], budgets,
                            error="no script content found")
    result = explore_units(roots, budgets)
    findings = evaluate_policies(result, builtin_policies(policy_config))
    return build_report(path, result, findings, budgets)


def _worker(job):
    path, budgets, policy_config = job
    return analyze_sample(path, budgets, policy_config)


def report_name(path: str, fmt: str) -> str:
    return Path(path).name + (".report.json" if fmt == "json" else ".report.txt")


def run_cli(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    budgets = Budgets(
        loop_budget_ms=args.loop_budget,
        recursion_cap=args.recursion_cap,
        sample_timeout_s=args.sample_timeout,
        seed=resolve_seed(args.seed),
        activex_mode=args.activex,
    )
    try:
        policy_config = load_policy_config(args.policy_config)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"analyze: bad policy config: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL

    jobs = [(path, budgets, policy_config) for path in args.paths]
    if args.jobs > 1 and len(jobs) > 1:
        with multiprocessing.Pool(min(args.jobs, len(jobs))) as pool:
            reports = pool.map(_worker, jobs)
    else:
        reports = [_worker(job) for job in jobs]

    out_dir = None
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

    index = []
    for path, report in zip(args.paths, reports):
        rendered = to_json(report) if args.format == "json" else to_text(report)
        if out_dir is not None:
            target = out_dir / report_name(path, args.format)
            target.write_text(rendered, encoding="utf-8")
            index.append({
                "sample": path,
                "report": target.name,
                "verdict": report["verdict"],
                "error": report["error"],
            })
        else:
            sys.stdout.write(rendered)
    if out_dir is not None:
        index_text = json.dumps(index, sort_keys=True, indent=2) + "\n"
        (out_dir / "index.json").write_text(index_text, encoding="utf-8")

    worst = EXIT_BENIGN
    for report in reports:
        if report["verdict"] == "malicious":
            worst = EXIT_MALICIOUS
            break
        if report["error"] or any(f["operational"] for f in report["findings"]):
            worst = EXIT_OPERATIONAL
    return worst


def main() -> None:
    sys.exit(run_cli())
