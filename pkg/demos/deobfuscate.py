"""Peel a layered eval packer without running it for real.

The sample below builds its next stage as a string three times over;
each eval hands the engine a new unit, and the unit names chain at the
call site, so the nesting depth is readable straight off the name.

    python demos/deobfuscate.py
"""

from forcex import explore
from forcex.policies import builtin_policies, evaluate_policies

SAMPLE = r"""
var q = String.fromCharCode(34);
var stage2 = "var mark = secret + 2;";
var stage1 = "eval(" + q + stage2 + q + "); var flag = 1;";
function wrap(s) { return s + " var tail = done;"; }
eval(wrap(stage1));
document.write("<script>var planted = lure + 1;</scr" + "ipt>");
"""


def main():
    result = explore(SAMPLE)

    print("recovered units (%d runs total):" % result.total_runs)
    for unit in result.units:
        depth = unit.name.count(":")
        print("  %s%-14s %s" % ("  " * depth, unit.kind, unit.name))
        if unit.kind != "root":
            print("  %s  | %s" % ("  " * depth, unit.text.strip()))

    print("\ncaptured events:")
    for name, run, ev in result.events:
        print("  run %-2d %-24s %r" % (run, ev.kind, ev.payload[:60]))

    print("\nfindings:")
    findings = evaluate_policies(result, builtin_policies({}))
    if not findings:
        print("  none")
    for f in findings:
        print("  %-10s %-18s %s" % (f.severity, f.policy, f.evidence))


if __name__ == "__main__":
    main()
