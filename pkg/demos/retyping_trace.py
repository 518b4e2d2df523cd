"""Show how undefined names are faked and then retyped on use.

Every reference error is healed with a faked object, and each operator
that touches one narrows it to the type the operation needs.  The
recovery log below is the engine's own audit trail.  The second half
shows why this matters: with naive null-patching the spray loop's bound
collapses to NaN and the body never runs; with retyping it runs to
completion.

    python demos/retyping_trace.py
"""

from forcex import execute, parse
from forcex.interpreter import Interpreter

SNIPPET = """\
var n = seed * 3;
var s = host.name;
victim(n);
var box = new Maker();
slots[4] = n;
"""

SPRAY_HEAD = """\
c = a / 2;
count = 0;
for (i = c; i < 5000; i++) { count = count + 1; }
"""


def main():
    out = execute(parse(SNIPPET, "demo"))
    print("recovery log for:\n%s" % "\n".join("    " + l for l in SNIPPET.splitlines()))
    print("%-6s %-16s %-10s %s" % ("offset", "rule", "target", "became"))
    for r in out.recoveries:
        offset = r.anchor.offset if r.anchor else "-"
        print("%-6s %-16s %-10s %s" % (offset, r.kind, r.target, r.detail))

    interp = Interpreter(parse(SPRAY_HEAD, "spray"), (), None, None)
    out = interp.run()
    print("\nspray head with undefined divisor: body ran %.0f times (NaN-free)"
          % interp.peek_var("count"))
    print("terminated_by: %s" % out.terminated_by)


if __name__ == "__main__":
    main()
