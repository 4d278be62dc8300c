"""Walk through the four Morse idempotents: tables, certified time nets, cluster sets.

Run: python3 demos/morse_idempotents.py
"""
from quasilab import A, ABAR, B, BBAR, TABLES, closed_set, cluster_set, timenet_for_idempotent
from quasilab.spaces import window
from quasilab.symbolic import apply_to_finite_set, quasi_order_check

names = {"a": A, "abar": ABAR, "b": B, "bbar": BBAR}

print("windows on |k| < 8 of the four fixed points")
for n, p in names.items():
    print(f"  {n:5s} {window(p, 8)}")

print("\ntables (image of each base)")
for t in TABLES.values():
    print(f"  {t.name}: " + ", ".join(f"{k}->{v}" for k, v in t.images))

print("\nquasi-order")
for s in TABLES:
    print("  " + "  ".join(f"{s},{t}: {quasi_order_check(TABLES[s], TABLES[t]):12s}" for t in TABLES))

print("\ntime nets: (window radius, first time) pairs")
for t in TABLES.values():
    net = timenet_for_idempotent(t)
    print(f"  {net.label}: {list(net.certificate)}")

eps = 2 ** -6
print(f"\ncluster sets along the u1 net at eps = {eps}")
u1 = timenet_for_idempotent(TABLES["u1"])
for S in ([A], [A, ABAR], [A, B], [B, BBAR]):
    c = cluster_set(closed_set(S), u1, eps)
    table = apply_to_finite_set(TABLES["u1"], closed_set(S))
    print(f"  {S} -> {list(c.result.points)}  converged={c.converged}  matches table: {c.result == table}")
