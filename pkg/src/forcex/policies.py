"""Detection policies evaluated over finished explorations.

Policies are deliberately separate from the engine: the engine records
what the sample did, a policy decides what that behavior means.  Each
policy is pure over the ExplorationResult it reads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .explorer import ExplorationResult

SEVERITIES = ("info", "suspicious", "malicious")

# event kinds that count as payload activity inside a catch arm
PAYLOAD_KINDS = (
    "shellcode_policy_hit",
    "eval_string",
    "document_write",
    "faked_function_string_arg",
)


@dataclass
class Finding:
    policy: str
    severity: str
    evidence: str
    anchor: str | None = None
    run: int | None = None
    operational: bool = False


def severity_rank(severity: str) -> int:
    return SEVERITIES.index(severity)


def max_severity(findings) -> str:
    """Verdict for a finding list: worst severity seen, info when empty."""
    worst = 0
    for f in findings:
        if not f.operational:
            worst = max(worst, severity_rank(f.severity))
    return SEVERITIES[worst]


class Policy:
    name = "policy"

    def evaluate(self, result: ExplorationResult) -> list:
        raise NotImplementedError


class ShellcodeDensityPolicy(Policy):
    """Long runs of %uXXXX or \\uXXXX units in observed strings.

    The engine reports every run of 8 or more units; only runs at or
    above the threshold are worth a verdict.  Short runs show up in
    legitimate URL handling.
    """

    name = "shellcode_density"

    def __init__(self, min_units: int = 32):
        self.min_units = min_units

    def evaluate(self, result):
        findings = []
        seen = set()
        for unit_name, run_index, ev in result.events:
            if ev.kind != "shellcode_policy_hit":
                continue
            units = ev.extra.get("units", 0)
            if units < self.min_units:
                continue
            key = (str(ev.anchor), ev.payload[:64])
            if key in seen:
                continue
            seen.add(key)
            findings.append(Finding(
                self.name, "malicious",
                f"{units} consecutive escape units ({ev.extra.get('where', '?')}): "
                f"{ev.payload[:96]}",
                anchor=str(ev.anchor), run=run_index,
            ))
        return findings


class EvalChainPolicy(Policy):
    """Dynamic code that itself generates more dynamic code."""

    name = "eval_chain"

    def __init__(self, min_depth: int = 2):
        self.min_depth = min_depth

    def evaluate(self, result):
        findings = []
        for ur in result.units:
            if ur.kind == "root":
                continue
            depth = ur.name.count(":")
            if depth < self.min_depth:
                continue
            first_run = ur.runs[0].index if ur.runs else None
            excerpt = ur.text[:80].replace("\n", " ")
            findings.append(Finding(
                self.name, "suspicious",
                f"generation-{depth} dynamic code {ur.name}: {excerpt}",
                anchor=None, run=first_run,
            ))
        return findings


class HeapSprayPolicy(Policy):
    """Repeated indexed writes of very large strings."""

    name = "heap_spray"

    def __init__(self, min_len: int = 65536, min_writes: int = 1000):
        self.min_len = min_len
        self.min_writes = min_writes

    def evaluate(self, result):
        best = {}  # anchor -> (big, max_len, run index)
        for ur in result.units:
            for run in ur.runs:
                for anchor, st in run.outcome.indexed_writes.items():
                    if st.big >= self.min_writes and st.max_len >= self.min_len:
                        key = str(anchor)
                        prior = best.get(key)
                        if prior is None or st.big > prior[0]:
                            best[key] = (st.big, st.max_len, run.index)
        findings = []
        for key in sorted(best):
            big, max_len, run_index = best[key]
            findings.append(Finding(
                self.name, "malicious",
                f"{big} indexed writes of strings up to {max_len} chars",
                anchor=key, run=run_index,
            ))
        return findings


class ActiveXCatchPolicy(Policy):
    """An ActiveX probe paired with payload activity inside a catch arm.

    The probe-then-catch shape exists to detect emulators: the control
    never loads in one, so the payload hides in the handler.
    """

    name = "activex_catch"

    def __init__(self, payload_kinds=PAYLOAD_KINDS):
        self.payload_kinds = tuple(payload_kinds)

    def evaluate(self, result):
        probe = None
        for unit_name, run_index, ev in result.events:
            if ev.kind == "activex_probe":
                probe = ev
                break
        if probe is None:
            return []
        for unit_name, run_index, ev in result.events:
            if ev.kind in self.payload_kinds and ev.in_catch:
                progid = probe.extra.get("progid", probe.payload)
                return [Finding(
                    self.name, "malicious",
                    f"ActiveX probe '{progid}' with {ev.kind} in catch arm",
                    anchor=str(ev.anchor), run=run_index,
                )]
        return []


def builtin_policies(config: dict | None = None) -> list:
    """The shipped policy set, thresholds adjustable per policy name."""
    config = config or {}
    return [
        ShellcodeDensityPolicy(**config.get("shellcode_density", {})),
        EvalChainPolicy(**config.get("eval_chain", {})),
        HeapSprayPolicy(**config.get("heap_spray", {})),
        ActiveXCatchPolicy(**config.get("activex_catch", {})),
    ]


def evaluate_policies(result: ExplorationResult, policies=None) -> list:
    """Run every policy; one blowing up never silences the others."""
    if policies is None:
        policies = builtin_policies()
    findings = []
    for policy in policies:
        try:
            findings.extend(policy.evaluate(result))
        except Exception as exc:
            findings.append(Finding(
                policy.name, "info",
                f"policy failed: {exc.__class__.__name__}: {exc}",
                operational=True,
            ))
    findings.sort(key=lambda f: (-severity_rank(f.severity), f.policy,
                                 f.anchor or "", f.run if f.run is not None else -1))
    return findings
