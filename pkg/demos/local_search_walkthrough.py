"""Noisy local search on a random GF(3) matroid, checked against the exact k-swap optimum."""
import random

from mxl.catalog import build_family
from mxl.localsearch import check_robustness, run_trace
from mxl.matroid import enumerate_bases

rng = random.Random(7)
m = build_family("linear(GF3,4,8)", rng)
w = [rng.randint(-10, 10) for _ in range(m.n)]
B0 = enumerate_bases(m)[0]
print("weights:", w)

for schedule in ([0, 0, 0], [2, 5, 1]):
    trace = run_trace(m, w, B0, len(schedule), schedule, "adversarial")
    rep = check_robustness(trace)
    print(f"eps {schedule}: bases {[sorted(b) for b in trace.bases]}")
    print(f"  errors {[str(e) for e in trace.errors]}  final {rep.final_value}  "
          f"best within 3 swaps {rep.ball_max}  slack {rep.slack}")
