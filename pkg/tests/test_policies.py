"""Detection policies: thresholds, dedupe, isolation, and ordering."""

import pytest

from forcex import explore
from forcex.explorer import ExplorationResult, RunRecord, UnitResult
from forcex.interpreter import DetectionEvent, ExecutionOutcome, WriteStats
from forcex.jsast import SourceAnchor
from forcex.policies import (
    ActiveXCatchPolicy,
    EvalChainPolicy,
    Finding,
    HeapSprayPolicy,
    Policy,
    ShellcodeDensityPolicy,
    builtin_policies,
    evaluate_policies,
    max_severity,
    severity_rank,
)


def _ev(kind, payload="", anchor=None, in_catch=False, **extra):
    return DetectionEvent(kind, payload, anchor, in_catch, extra)


def _events_result(*events):
    """Result carrying only events, tagged (unit, run, event)."""
    return ExplorationResult(events=[("root", i, e) for i, e in enumerate(events)])


def _outcome(indexed_writes=None):
    return ExecutionOutcome(
        preds=[], new_js=[], events=[], recoveries=[], terminated_by="normal",
        fired_switches=set(), prefix_mismatch=False,
        indexed_writes=indexed_writes or {}, callbacks_invoked=0)


ANCHOR = SourceAnchor("root", 7)


# ---- severity helpers ----

def test_severity_rank_order():
    assert severity_rank("info") < severity_rank("suspicious") < severity_rank(
        "malicious")


def test_max_severity_empty_is_info():
    assert max_severity([]) == "info"


def test_max_severity_takes_worst():
    fs = [Finding("a", "suspicious", ""), Finding("b", "malicious", ""),
          Finding("c", "info", "")]
    assert max_severity(fs) == "malicious"


def test_max_severity_ignores_operational():
    fs = [Finding("a", "malicious", "", operational=True)]
    assert max_severity(fs) == "info"


# ---- shellcode density ----

def test_shellcode_fires_at_threshold():
    pol = ShellcodeDensityPolicy(min_units=32)
    r = _events_result(
        _ev("shellcode_policy_hit", "%u9090" * 32, ANCHOR,
            units=32, where="unescape_arg"))
    (f,) = pol.evaluate(r)
    assert f.severity == "malicious"
    assert "32" in f.evidence
    assert f.anchor == str(ANCHOR)


def test_shellcode_abstains_below_threshold():
    pol = ShellcodeDensityPolicy(min_units=32)
    r = _events_result(
        _ev("shellcode_policy_hit", "%u9090" * 31, ANCHOR, units=31))
    assert pol.evaluate(r) == []


def test_shellcode_dedupes_repeat_observations():
    # the same spray string observed on every run must not multiply
    payload = "%u4141" * 40
    pol = ShellcodeDensityPolicy()
    r = _events_result(
        _ev("shellcode_policy_hit", payload, ANCHOR, units=40),
        _ev("shellcode_policy_hit", payload, ANCHOR, units=40))
    assert len(pol.evaluate(r)) == 1


def test_shellcode_distinct_payloads_both_reported():
    pol = ShellcodeDensityPolicy()
    r = _events_result(
        _ev("shellcode_policy_hit", "%u9090" * 40, ANCHOR, units=40),
        _ev("shellcode_policy_hit", "%u4242" * 40, ANCHOR, units=40))
    assert len(pol.evaluate(r)) == 2


def test_shellcode_ignores_other_event_kinds():
    pol = ShellcodeDensityPolicy(min_units=1)
    r = _events_result(_ev("eval_string", "%u9090" * 64, ANCHOR, units=64))
    assert pol.evaluate(r) == []


# ---- eval chain ----

def _unit(name, kind="eval", runs=()):
    return UnitResult(name, kind, "var x = 1;", runs=list(runs))


def test_eval_chain_needs_depth_two():
    pol = EvalChainPolicy()
    shallow = ExplorationResult(units=[_unit("root:eval@4#1")])
    assert pol.evaluate(shallow) == []
    deep = ExplorationResult(units=[_unit("root:eval@4#1:eval@0#1")])
    (f,) = pol.evaluate(deep)
    assert f.severity == "suspicious"
    assert "generation-2" in f.evidence


def test_eval_chain_skips_root_units():
    # a root unit named with colons must not look like dynamic code
    pol = EvalChainPolicy()
    r = ExplorationResult(units=[_unit("pages:fetched:copy", kind="root")])
    assert pol.evaluate(r) == []


def test_eval_chain_threshold_configurable():
    pol = EvalChainPolicy(min_depth=1)
    r = ExplorationResult(units=[_unit("root:eval@4#1")])
    assert len(pol.evaluate(r)) == 1


def test_eval_chain_reports_first_run_index():
    runs = [RunRecord((), _outcome(), 9)]
    pol = EvalChainPolicy()
    (f,) = pol.evaluate(ExplorationResult(
        units=[_unit("root:eval@1#1:eval@0#1", runs=runs)]))
    assert f.run == 9


def test_eval_chain_end_to_end():
    r = explore('eval("eval(\'var deep = 1;\');");')
    findings = [f for f in evaluate_policies(r) if f.policy == "eval_chain"]
    assert len(findings) == 1
    assert findings[0].severity == "suspicious"


# ---- heap spray ----

def _spray_result(**stats):
    st = WriteStats(**stats)
    runs = [RunRecord((), _outcome({ANCHOR: st}), 0)]
    return ExplorationResult(units=[UnitResult("root", "root", "", runs=runs)])


def test_heap_spray_fires_at_thresholds():
    pol = HeapSprayPolicy()
    (f,) = pol.evaluate(_spray_result(total=1000, big=1000, max_len=65536))
    assert f.severity == "malicious"
    assert f.anchor == str(ANCHOR)


@pytest.mark.parametrize("stats", [
    dict(total=999, big=999, max_len=65536),
    dict(total=5000, big=5000, max_len=65535),
    dict(total=5000, big=0, max_len=70000),
])
def test_heap_spray_abstains_below_either_threshold(stats):
    assert HeapSprayPolicy().evaluate(_spray_result(**stats)) == []


def test_heap_spray_keeps_best_run_per_site():
    runs = [
        RunRecord((), _outcome({ANCHOR: WriteStats(2000, 2000, 70000)}), 0),
        RunRecord((), _outcome({ANCHOR: WriteStats(9000, 9000, 70000)}), 1),
    ]
    r = ExplorationResult(units=[UnitResult("root", "root", "", runs=runs)])
    (f,) = HeapSprayPolicy().evaluate(r)
    assert "9000" in f.evidence
    assert f.run == 1


def test_heap_spray_thresholds_configurable():
    pol = HeapSprayPolicy(min_len=8, min_writes=2)
    (f,) = pol.evaluate(_spray_result(total=3, big=3, max_len=8))
    assert f.severity == "malicious"


# ---- activex plus catch ----

def test_activex_with_payload_in_catch():
    r = _events_result(
        _ev("activex_probe", "Wscript.Shell", ANCHOR, progid="Wscript.Shell"),
        _ev("eval_string", "payload()", ANCHOR, in_catch=True))
    (f,) = ActiveXCatchPolicy().evaluate(r)
    assert f.severity == "malicious"
    assert "Wscript.Shell" in f.evidence


def test_activex_probe_alone_is_silent():
    r = _events_result(_ev("activex_probe", "X", ANCHOR, progid="X"))
    assert ActiveXCatchPolicy().evaluate(r) == []


def test_catch_payload_without_probe_is_silent():
    r = _events_result(_ev("eval_string", "x", ANCHOR, in_catch=True))
    assert ActiveXCatchPolicy().evaluate(r) == []


def test_payload_outside_catch_is_silent():
    r = _events_result(
        _ev("activex_probe", "X", ANCHOR, progid="X"),
        _ev("eval_string", "x", ANCHOR, in_catch=False))
    assert ActiveXCatchPolicy().evaluate(r) == []


def test_non_payload_kind_in_catch_is_silent():
    r = _events_result(
        _ev("activex_probe", "X", ANCHOR, progid="X"),
        _ev("callback_registered", "fn", ANCHOR, in_catch=True))
    assert ActiveXCatchPolicy().evaluate(r) == []


def test_activex_reports_once_per_sample():
    r = _events_result(
        _ev("activex_probe", "X", ANCHOR, progid="X"),
        _ev("eval_string", "a", ANCHOR, in_catch=True),
        _ev("document_write", "b", ANCHOR, in_catch=True))
    assert len(ActiveXCatchPolicy().evaluate(r)) == 1


def test_activex_catch_end_to_end():
    src = ('try { var o = new ActiveXObject("Wm.Bad"); }'
           'catch (e) { eval("var p = 1;"); }')
    findings = evaluate_policies(explore(src))
    hits = [f for f in findings if f.policy == "activex_catch"]
    assert len(hits) == 1
    assert "Wm.Bad" in hits[0].evidence


# ---- the shipped set ----

def test_builtin_policies_stable_order():
    names = [p.name for p in builtin_policies()]
    assert names == ["shellcode_density", "eval_chain", "heap_spray",
                     "activex_catch"]


def test_builtin_policies_accept_config():
    pols = builtin_policies({
        "shellcode_density": {"min_units": 8},
        "heap_spray": {"min_writes": 10},
    })
    by_name = {p.name: p for p in pols}
    assert by_name["shellcode_density"].min_units == 8
    assert by_name["heap_spray"].min_writes == 10
    assert by_name["eval_chain"].min_depth == 2


def test_builtin_policies_reject_unknown_keys():
    with pytest.raises(TypeError):
        builtin_policies({"heap_spray": {"min_wrrites": 10}})


class _Exploder(Policy):
    name = "exploder"

    def evaluate(self, result):
        raise RuntimeError("boom")


def test_policy_failure_is_isolated():
    r = _events_result(
        _ev("activex_probe", "X", ANCHOR, progid="X"),
        _ev("eval_string", "x", ANCHOR, in_catch=True))
    findings = evaluate_policies(r, [_Exploder(), ActiveXCatchPolicy()])
    ops = [f for f in findings if f.operational]
    assert len(ops) == 1
    assert ops[0].policy == "exploder"
    assert "RuntimeError" in ops[0].evidence
    assert ops[0].severity == "info"
    # the healthy policy still reported
    assert any(f.policy == "activex_catch" for f in findings)
    assert max_severity(findings) == "malicious"


def test_findings_sorted_most_severe_first():
    class _Canned(Policy):
        name = "canned"

        def __init__(self, findings):
            self._findings = findings

        def evaluate(self, result):
            return list(self._findings)

    fs = [
        Finding("zeta", "suspicious", ""),
        Finding("alpha", "malicious", "", anchor="b"),
        Finding("alpha", "malicious", "", anchor="a"),
        Finding("mid", "info", ""),
    ]
    out = evaluate_policies(ExplorationResult(), [_Canned(fs)])
    assert [(f.policy, f.severity, f.anchor) for f in out] == [
        ("alpha", "malicious", "a"),
        ("alpha", "malicious", "b"),
        ("zeta", "suspicious", None),
        ("mid", "info", None),
    ]


def test_default_policy_set_runs_when_none_given():
    findings = evaluate_policies(_events_result(
        _ev("activex_probe", "X", ANCHOR, progid="X"),
        _ev("eval_string", "x", ANCHOR, in_catch=True)))
    assert any(f.policy == "activex_catch" for f in findings)
