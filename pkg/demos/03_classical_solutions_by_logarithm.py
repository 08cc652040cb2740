"""Versal Maurer-Cartan solutions from the logarithm construction.

For the differentials Delta and Q + Delta the master equation always has a
versal solution: with closed representatives gamma_i,

    Gamma = log(1 + sum_i gamma_i t^i)

works, because D(e^Gamma) = D(1 + sum gamma_i t^i) = 0 and the exponential
converts that into D(Gamma) + (1/2)[Gamma, Gamma] = 0.  The residual is
computed exactly and is literally the zero series.
"""

from dbv import (
    classical_solve_log,
    closed_representatives,
    landau_ginzburg,
    random_finite,
    square_zero_example,
)

print("== one even class: the alternating-sign expansion ==")
A = landau_ginzburg("x^3")
sol = classical_solve_log(A, [A.from_poly_string("x")], 4)
print(f"Gamma = {sol.gamma!r}")
print(f"residual identically zero: {sol.residual().is_zero()}")
print()

print("== the square-zero algebra under the Delta flavor ==")
S = square_zero_example()
reps = closed_representatives(S, "classical-delta")
print(f"H(Delta) representatives: {[repr(r) for r in reps]}")
sol = classical_solve_log(S, reps, 5)
print(f"Gamma = {sol.gamma!r}")
print(f"residual identically zero: {sol.residual().is_zero()}")
print()

print("== a random square-zero-product algebra, Q + Delta flavor ==")
R = random_finite(dim=6, seed=7)
reps = closed_representatives(R, "classical-q-plus-delta")
sol = classical_solve_log(R, reps, 6, flavor="classical-q-plus-delta")
print(f"{len(reps)} classes, t-order 6: residual identically zero: "
      f"{sol.residual().is_zero()}")
print(f"versality initial condition holds: {sol.check_versality()}")
