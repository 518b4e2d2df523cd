"""Walk a cloaked drive-by page that hides from plain emulation.

The page only detonates when three environment checks line up, and it
parks its redirect behind a 3-second timer.  Natural execution (run 0)
sees nothing; the forced runs flip the guards one at a time until the
catch-block payload fires, and the timer body runs immediately as its
own unit.

    python demos/explore_page.py
"""

import time

from forcex.explorer import coverage_ratio, explore_units
from forcex.hostenv import extract_scripts
from forcex.policies import builtin_policies, evaluate_policies

PAGE = """\
<html><body>
<script>
if ((navigator.appName.indexOf("Microsoft") == -1) &&
    (navigator.userAgent.indexOf("NT 5.1") == -1)) {
    att = btt + 1;
}
if (att == 0) {
    try {
        new ActiveXObject("Sh.Gate");
    } catch (e) {
        var sled = unescape("%u9090%u9090%u9090%u9090%u9090%u9090" +
                            "%u54eb%u758b%u8b3c%u3574%u0378%u56f5");
        document.body.innerHTML += sled.length;
    }
}
setTimeout("go();", 3000);
</script>
</body></html>
"""


def main():
    started = time.monotonic()
    result = explore_units(extract_scripts(PAGE, "page"))
    wall = time.monotonic() - started

    for unit in result.units:
        print("unit %-12s %s" % (unit.kind, unit.name))
        for run in unit.runs:
            flips = ", ".join("%s@%d->%s" % (a.unit, a.offset, d)
                              for a, d in run.switches) or "natural"
            print("  run %-2d  [%s]" % (run.index, flips))

    print("\nevents (the natural run registers the timer and nothing else):")
    for name, run, ev in result.events:
        where = " in catch" if ev.in_catch else ""
        print("  run %-2d %-20s%s %r" % (run, ev.kind, where, ev.payload[:48]))

    print("\nbranch coverage: %.0f%%  runs: %d  wall: %.2fs (timer asked for 3s)"
          % (coverage_ratio(result) * 100, result.total_runs, wall))

    print("\nverdicts:")
    for f in evaluate_policies(result, builtin_policies({})):
        print("  %-10s %-18s run=%s" % (f.severity, f.policy, f.run))


if __name__ == "__main__":
    main()
