"""RAL#: endowments, the down-arrow modality and resource-bounded opponents.

Run:  python demos/bounded_opponents.py
"""
from dimres import parse_allocation, parse_formula, ral_check, witnesses

chain = witnesses.chain()
phi = parse_formula(witnesses.CHAIN_DOWN)
print(f"chain s0 -> s1 -> s2, one unit per step: {phi}")
for k in (1, 2):
    eta = parse_allocation(f"[1=({k})]")
    print(f"  initial endowment {eta}: holds at {sorted(ral_check(chain, phi, eta))}")

blocker = witnesses.blocker()
print("\nagent 2 can divert agent 1 from p, but blocking costs 2 units")
for text in ("<{1}|{} down> X p", "<{1}|{2} down> X p"):
    for endow in ("[1=(1),2=(1)]", "[1=(1),2=(2)]"):
        states = ral_check(blocker, parse_formula(text), parse_allocation(endow))
        print(f"  {text:22} with {endow}: s0 {'yes' if 's0' in states else 'no'}")
print("agents outside the opponent set are unconstrained, so only a bounded,"
      " poor opponent is beaten")
