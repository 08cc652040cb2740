"""Deciding degeneration of the hbar-filtration spectral sequence.

A classical class [h] survives quantization when it lifts to a K-closed
series h + hbar h_1 + hbar^2 h_2 + ...; the spectral sequence of the
filtration hbar^p V[[hbar]] degenerates exactly when every class lifts.
The 3-dimensional square-zero algebra below is the minimal counterexample:
Delta(a) = b is not exact, so [a] is stuck at the very first hbar stage.
"""

import json

from dbv import (
    build_beta,
    compute_homology,
    degeneration_check,
    landau_ginzburg,
    obstruction_grid,
    square_zero_example,
)
from dbv.errors import DegenerationRefusedError

print("== the polynomial algebra degenerates ==")
A = landau_ginzburg("x^3")
report = degeneration_check(A)
print(f"degenerate: {report.degenerate} (every lift terminates exactly)")
for name, lift in sorted(report.lifts.items()):
    print(f"  {name}: gamma = {lift.series!r}  (K gamma = 0 exactly)")
print()

print("== the square-zero counterexample does not ==")
S = square_zero_example()
report = degeneration_check(S)
print(f"degenerate: {report.degenerate}")
bad = report.first_obstruction()
print(f"  class {bad.class_name} is obstructed at hbar stage {bad.obstruction.stage}:")
print(f"  Delta(gamma_0) = {bad.obstruction.witness!r} represents the nonzero class "
      f"{sorted(bad.obstruction.witness_class)}")
print("  so no K-closed lift exists, for any choice of representative")
print()

print("a quantum splitting therefore cannot exist:")
_, dec = compute_homology(S)
try:
    build_beta(S, dec)
except DegenerationRefusedError as exc:
    print(f"  refused: {exc}")
print()

print("the obstruction array (row 1 is the degeneration row):")
grid = obstruction_grid(S, 3, 3)
print(json.dumps(grid.to_json(), indent=2))
