"""Worklist exploration: run scheduling, coverage, dynamic unit discovery."""

import pytest

from forcex import Budgets, coverage_ratio, explore, explore_units, parse
from forcex.explorer import (
    ExplorationResult,
    QueuedUnit,
    SourceQueue,
    UnitResult,
    covered,
    mark_covered,
    schedule_unit,
    static_branch_anchors,
)


def _switch_seqs(result, name="root"):
    return [run.switches for run in result.unit(name).runs]


# ---- worklist ops ----

def test_source_queue_dedupes_by_text():
    q = SourceQueue()
    assert schedule_unit(q, QueuedUnit("a", "var x = 1;", "eval"))
    assert not schedule_unit(q, QueuedUnit("b", "var x = 1;", "eval"))
    assert schedule_unit(q, QueuedUnit("c", "var x = 2;", "eval"))
    assert len(q) == 2
    assert q.pop().name == "a"
    assert q.pop().name == "c"
    assert not q


def test_coverage_ops():
    cov = {}
    anchor = object()
    assert not covered(cov, anchor, True)
    mark_covered(cov, anchor, True)
    assert covered(cov, anchor, True)
    assert not covered(cov, anchor, False)
    mark_covered(cov, anchor, True)
    assert cov[anchor] == {True}


def test_static_branch_anchors_in_source_order():
    src = ("if (a) { while (b) { } } "
           "x = c && d; "
           "for (i = 0; i < 3; i++) { } "
           "for (;;) { break; } "
           "x ? 1 : 2; "
           "try { } catch (e) { } "
           "try { } finally { }")
    anchors = static_branch_anchors(parse(src, "u"))
    # if, while, &&, for-with-cond, try-with-handler; never the bare
    # for(;;), the ternary, or the try/finally
    assert len(anchors) == 5
    assert [a.offset for a in anchors] == sorted(a.offset for a in anchors)
    assert len(set(anchors)) == 5


def test_switch_cases_are_individual_branch_points():
    anchors = static_branch_anchors(
        parse("switch (v) { case 1: break; case 2: break; default: x = 1; }",
              "u"))
    assert len(anchors) == 2


# ---- run scheduling shapes ----

def test_straight_line_is_one_run():
    r = explore("var a = 1; var b = a + 2;")
    assert r.total_runs == 1
    assert _switch_seqs(r) == [()]
    assert r.exhausted
    assert r.error is None


def test_single_if_is_two_runs():
    r = explore("var a = 0; if (a) { b = 1; }")
    assert r.total_runs == 2
    (p,) = r.unit("root").static_anchors
    assert _switch_seqs(r) == [(), ((p, True),)]
    assert r.coverage["root"][p] == {True, False}


def test_two_sequential_ifs_are_four_runs():
    """Both flips and their combination each get a run."""
    r = explore("var a = 0; if (a) { x = 1; } var b = 0; if (b) { y = 1; }")
    p1, p2 = r.unit("root").static_anchors
    assert _switch_seqs(r) == [
        (),
        ((p1, True),),
        ((p2, True),),
        ((p1, True), (p2, True)),
    ]
    assert r.total_runs == 4
    assert coverage_ratio(r) == 1.0


def test_three_sequential_ifs_skip_covered_combinations():
    # the triple never runs: by the time the pairs execute, every
    # direction they could add is already covered
    src = "var a = 0; if (a) { } if (a) { } if (a) { }"
    r = explore(src)
    seqs = _switch_seqs(r)
    assert r.total_runs == 7
    assert max(len(s) for s in seqs) == 2


def test_nested_if_reached_through_forcing():
    r = explore("var g = 0; if (g) { if (h) { } }")
    p_outer, p_inner = r.unit("root").static_anchors
    assert r.total_runs == 3
    assert r.coverage["root"][p_outer] == {True, False}
    assert r.coverage["root"][p_inner] == {True, False}
    assert coverage_ratio(r) == 1.0


def test_loop_covers_both_directions_in_one_run():
    r = explore("var i = 0; while (i < 2) { i = i + 1; }")
    assert r.total_runs == 1
    (p,) = r.unit("root").static_anchors
    assert r.coverage["root"][p] == {True, False}


def test_flip_that_precomputes_other_branch():
    # forcing the first if false leaves n at 0, so the second if goes
    # false naturally; the flip of the second was already scheduled
    # before that and still runs, but no combination is ever needed
    src = "var n = 0; if (n == 0) { n = 1; } if (n == 1) { }"
    r = explore(src)
    assert r.total_runs == 3
    assert max(len(s) for s in _switch_seqs(r)) == 1
    assert coverage_ratio(r) == 1.0


def test_run_indices_are_global_and_ordered():
    r = explore("var a = 0; if (a) { } eval('var b = 0; if (b) { }');")
    indices = [run.index for _, run in r.outcomes()]
    assert sorted(indices) == list(range(r.total_runs))


# ---- dynamic unit discovery ----

def test_eval_body_becomes_child_unit():
    r = explore("eval('var k = 1;');")
    assert len(r.units) == 2
    child = r.units[1]
    assert child.kind == "eval"
    assert child.name.startswith("root:eval@")
    assert child.text == "var k = 1;"
    assert len(child.runs) == 1


def test_child_units_get_their_own_exploration():
    r = explore("eval('var q = 0; if (q) { r = 1; }');")
    child = r.units[1]
    assert len(child.runs) == 2
    assert coverage_ratio(r) == 1.0


def test_identical_eval_text_is_one_unit():
    r = explore("eval('var k = 1;'); eval('var k = 1;');")
    assert len(r.units) == 2


def test_distinct_eval_texts_are_separate_units():
    r = explore("eval('var k = 1;'); eval('var k = 2;');")
    assert len(r.units) == 3
    assert {u.kind for u in r.units[1:]} == {"eval"}


def test_nested_eval_chains_unit_names():
    r = explore('eval("eval(\'var deep = 1;\');");')
    names = [u.name for u in r.units]
    assert len(names) == 3
    # the inner unit is named under the outer eval unit, so nesting
    # depth stays readable off the name
    assert names[2].startswith(names[1] + ":")
    assert names[2].count(":") == 2


def test_timer_strings_and_write_bodies_join_queue():
    src = ("setTimeout('var t = 1;', 50);"
           "document.write('<script>var w = 1;</' + 'script>');")
    r = explore(src)
    kinds = sorted(u.kind for u in r.units[1:])
    assert kinds == ["document_write", "timer_string"]


def test_discovery_happens_on_every_run_not_just_first():
    # the eval only fires inside a forced branch
    r = explore("var c = 0; if (c) { eval('var inner = 1;'); }")
    assert len(r.units) == 2
    assert r.units[1].kind == "eval"


def test_events_tagged_with_unit_and_run_index():
    r = explore("eval('var z = 1;'); document.write('hello');")
    assert r.total_runs == 2
    by_kind = {ev.kind: (name, idx) for name, idx, ev in r.events}
    assert by_kind["eval_string"][0] == "root"
    assert by_kind["eval_string"][1] == 0
    assert "document_write" in by_kind
    all_indices = {idx for _, idx, _ in r.events}
    assert all(0 <= i < r.total_runs for i in all_indices)


# ---- parse failures ----

def test_sole_root_syntax_error_drops_analysis():
    r = explore("var = ;")
    assert r.error is not None
    assert "syntax error" in r.error
    assert r.total_runs == 0
    assert r.units[0].parse_error


def test_dynamic_unit_syntax_error_is_survivable():
    src = "eval('var broken = ;'); eval('var fine = 1;');"
    r = explore(src)
    assert r.error is None
    assert r.exhausted
    broken = next(u for u in r.units if u.text == "var broken = ;")
    fine = next(u for u in r.units if u.text == "var fine = 1;")
    assert broken.parse_error
    assert len(broken.runs) == 1
    assert broken.runs[0].outcome.terminated_by == "syntax_error_in_dynamic_unit"
    assert fine.parse_error is None
    assert fine.runs[0].outcome.terminated_by == "normal"


def test_multi_root_parse_failure_is_not_fatal():
    r = explore_units([("page#script0", "var = broken"),
                       ("page#script1", "var ok = 1;")])
    assert r.error is None
    assert r.unit("page#script0").parse_error
    assert r.unit("page#script1").runs[0].outcome.terminated_by == "normal"


def test_identical_root_blocks_run_once():
    # two byte-identical script blocks behave identically under a
    # deterministic engine, so the second is dropped at scheduling
    r = explore_units([("page#script0", "var twin = 1;"),
                       ("page#script1", "var twin = 1;")])
    assert len(r.units) == 1


def test_multi_roots_share_dedupe_and_run_order():
    r = explore_units([("page#script0", "eval('var shared = 1;');"),
                       ("page#script1", "var pad = 0; eval('var shared = 1;');")])
    assert len(r.units) == 3
    assert sum(u.kind == "eval" for u in r.units) == 1
    indices = [run.index for _, run in r.outcomes()]
    assert sorted(indices) == list(range(r.total_runs))


# ---- budgets ----

def test_zero_timeout_returns_partial_result():
    r = explore("var a = 0; if (a) { }", Budgets(sample_timeout_s=0.0))
    assert not r.exhausted
    assert r.total_runs == 0
    assert r.error is None


def test_timeout_mid_exploration_keeps_finished_runs():
    # a loop that burns its whole per-run budget, many branches to visit
    src = "while (spin) { x = x + 1; } " + " ".join(
        "if (g%d) { }" % i for i in range(30))
    budgets = Budgets(loop_budget_ms=150.0, sample_timeout_s=0.6)
    r = explore(src, budgets)
    assert not r.exhausted
    assert 1 <= r.total_runs < 31
    assert r.wall_time_s < 2.0


def test_exhaustive_exploration_reports_exhausted():
    r = explore("var a = 0; if (a) { }")
    assert r.exhausted
    assert r.wall_time_s >= 0.0


# ---- coverage ratio ----

def test_coverage_ratio_no_branches_is_full():
    assert coverage_ratio(explore("var a = 1;")) == 1.0


def test_coverage_ratio_counts_directions():
    program = parse("if (a) { }", "u")
    (anchor,) = static_branch_anchors(program)
    result = ExplorationResult(
        units=[UnitResult("u", "root", "", static_anchors=(anchor,))],
        coverage={"u": {anchor: {True}}})
    assert coverage_ratio(result) == 0.5
    mark_covered(result.coverage["u"], anchor, False)
    assert coverage_ratio(result) == 1.0


def test_coverage_ratio_spans_units():
    r = explore("var a = 0; if (a) { } eval('var b = 0; if (b) { }');")
    assert coverage_ratio(r) == 1.0
    assert set(r.coverage) == {u.name for u in r.units}
