"""Which finite sets recur syndetically, and which orbit closures are minimal.

Run: python3 demos/recurrence_and_quasifactors.py
"""
import itertools

from quasilab import A, ABAR, B, BBAR, TABLES, closed_set, d_star_estimate, quasifactor_check, recurrence_report
from quasilab.symbolic import in_fixed_set

eps, horizon = 2 ** -4, 4 ** 8
bases = {"a": A, "abar": ABAR, "b": B, "bbar": BBAR}

print(f"2-subsets of the bases, eps = {eps}, horizon = {horizon}")
print(f"  {'set':12s} {'verdict':20s} {'max gap':>8s} {'returns':>8s}  fixed by")
for (n1, p1), (n2, p2) in itertools.combinations(bases.items(), 2):
    r = recurrence_report(closed_set([p1, p2]), eps, horizon)
    fixed = [t for t, tab in TABLES.items() if in_fixed_set(tab, p1) and in_fixed_set(tab, p2)]
    print(f"  {{{n1},{n2}}}".ljust(14) + f"{r.verdict:20s} {r.max_gap:8d} {len(r.return_times):8d}  {fixed or '-'}")

print("\norbit closures in the hyperspace")
for S in ([B, BBAR], [A, B]):
    members = d_star_estimate(closed_set(S), horizon, eps)
    v = quasifactor_check(members, eps, horizon)
    print(f"  {S}: {len(members)} members, {v.verdict}, witness {v.witness}")
