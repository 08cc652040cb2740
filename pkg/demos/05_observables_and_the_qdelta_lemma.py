"""Quantum observables and the Q-Delta lemma checker.

A classical observable is a Q-closed element; it extends to a quantum
observable O + hbar O_1 + ... with K(O) = 0 exactly when its class lifts.
Separately, the Q-Delta analogue of the del-delbar lemma,

    im(Q Delta) = im(Delta Q) = im(Q) n ker(Delta) = im(Delta) n ker(Q),

forces degeneration, but is strictly stronger: the polynomial algebra below
violates the lemma yet still degenerates.
"""

import json

from dbv import (
    degeneration_check,
    landau_ginzburg,
    observable_extend,
    qdelta_gap_example,
    qdelta_lemma_check,
    square_zero_example,
)

A = landau_ginzburg("x^3")

print("== observables ==")
series, _ = observable_extend(A, A.from_poly_string("x"))
print(f"x is already flat: O = {series!r}")
series, _ = observable_extend(A, A.from_poly_string("3x^4"))
print(f"the exact observable 3x^4 extends: O = {series!r}")
S = square_zero_example()
_, obstruction = observable_extend(S, S.vector({1: 1}))
print(f"on the counterexample, a is obstructed with witness class "
      f"{sorted(obstruction.witness_class)}")
print()

print("== the Q-Delta lemma fails on the polynomial algebra ==")
report = qdelta_lemma_check(A, window=6)
print(f"holds: {report.holds}")
info = report.degrees[0]
print(f"  degree 0 dims: im(Q Delta) = {info['im(Q Delta)']}, "
      f"im(Q) n ker(Delta) = {info['im(Q) n ker(Delta)']}")
for w in report.witnesses:
    if w["degree"] == 0:
        print(f"  witness for '{w['equality']}': {json.dumps(w['witness'])}")
        break
print(f"...yet the spectral sequence degenerates anyway: "
      f"{degeneration_check(A).degenerate}")
print()

print("== the printed form of the fourth space is not the standard one ==")
G = qdelta_gap_example()
report = qdelta_lemma_check(G)
print(f"standard chain holds: {report.holds}; literal fourth space matches: "
      f"{report.literal_matches_standard}")
for w in report.witnesses:
    if "literal" in w["equality"]:
        print(f"  discrepancy witness: {json.dumps(w['witness'])} "
              f"(in ker Delta but not in ker Q)")
