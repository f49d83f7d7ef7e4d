"""Perfect information versus strongly uniform strategies.

In M3 agent 1 cannot tell s0 from s0' and must pick alpha at s0 but beta
at s0'.  A uniform strategy picks one of them at both, and has to work
from every state the agent confuses with the current one.

Run:  python demos/uniform_strategies.py
"""
from dimres import check, check_i, parse_formula, witnesses
from dimres.formula import to_text
from dimres.imperfect import audit_uniformity, label_i, search_modality

cases = [
    ("M3", witnesses.m3(), witnesses.M3_NEXT),
    ("M3, alpha works from both", witnesses.m3(shared=True), witnesses.M3_NEXT),
    ("M3, confusion lasts two steps", witnesses.m3_two_step(), witnesses.M3_TWO_STEP_UNTIL),
]
for name, model, text in cases:
    phi = parse_formula(text)
    print(f"{name}: {text}")
    print(f"  perfect information: {sorted(check(model, phi))}")
    print(f"  uniform strategies:  {sorted(check_i(model, phi))}")

# the closed set of a successful search records one action per history
model = witnesses.m3(shared=True)
phi = parse_formula(witnesses.M3_NEXT)
closed = search_modality(model, phi, "s0", label_i(model, phi))
print(f"\nwinning branches for {to_text(phi)} from s0 (shared variant):")
for node in closed:
    print(f"  {' -> '.join(node.trace)} via {[c[0] for c in node.choices]}")
print(f"uniformity problems: {audit_uniformity(model, ('1',), closed) or 'none'}")
