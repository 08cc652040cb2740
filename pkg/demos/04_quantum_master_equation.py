"""Solving the quantum master equation through the splitting.

Once the spectral sequence degenerates there is a chain map beta from (V, Q)
into (V[[hbar]], K) splitting the hbar = 0 evaluation.  The solver seeds
Gamma_1 = sum beta(gamma_i) t^i and corrects order by order: at t-order n it
forms y = ord_n(hbar^n e^{Gamma/hbar}) (which has no negative hbar powers),
divides (1 - beta alpha) y by hbar a total of n - 1 times, and takes
Gamma_n = -y_1.  Each identity the construction rests on is asserted at
runtime, and the final residual is checked to be literally zero.
"""

import json

from dbv import (
    build_beta,
    compute_homology,
    landau_ginzburg,
    quantum_solve,
    residual,
    solution_from_json,
    verify_solution,
)

A = landau_ginzburg("x^3")
H, dec = compute_homology(A)
beta = build_beta(A, dec)

print("the splitting on some interesting vectors:")
for name, v in (("1", A.unit_vector()), ("x", A.from_poly_string("x")),
                ("3x^4 = Q(x^2 eta)", A.from_poly_string("3x^4"))):
    print(f"  beta({name}) = {beta.apply(v)!r}")
print()

sol = quantum_solve(A, beta, 3, 3)
print(f"versal solution: Gamma = {sol.gamma!r}")
res = sol.residual()
print(f"K(Gamma) + [Gamma,Gamma]/2 identically zero: {res.is_zero()}")
print()

print("the hbar = 0 projection solves the classical Maurer-Cartan equation:")
classical = sol.gamma.set_hbar_zero()
print(f"  Q-residual of Gamma|_(hbar=0): zero = "
      f"{residual(A, classical, 'classical-q').is_zero()}")
print()

print("solutions round-trip through their canonical JSON file:")
data = json.loads(sol.dumps())
again = solution_from_json(A, data)
print(f"  verify_solution(round-tripped) accepted: "
      f"{verify_solution(A, again).accepted}")

print()
print("tamper with one coefficient and verification pinpoints it:")
data["series"]["terms"][1]["vector"] = {"x": "2"}
bad = solution_from_json(A, data)
result = verify_solution(A, bad)
print(f"  accepted: {result.accepted}")
for reason in result.reasons:
    print(f"  reason: {reason}")
