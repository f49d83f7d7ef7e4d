"""How the bound on a modality changes what a coalition can enforce.

Run:  python demos/budgets_and_release.py
"""
from dimres import check, parse_formula, witnesses

m1 = witnesses.m1()
print("M1: from s0 the agent may go to s1 (where p holds) or stay; each step costs 1.")
for b in range(3):
    phi = parse_formula(f"<{{1}}:[1=({b})]> (q U p)")
    print(f"  {phi}  holds at {sorted(check(m1, phi))}")

# Release is satisfied when the agent runs out of resources while the
# invariant still holds, so a smaller budget can make it true.
m2 = witnesses.m2()
print("\nM2: the only action costs 2 and leaves the p-state.")
for b in range(4):
    phi = parse_formula(witnesses.m2_release(b))
    print(f"  {phi}  holds at {sorted(check(m2, phi))}")
