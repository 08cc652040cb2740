"""Tour of the polynomial (Landau-Ginzburg style) backend.

The carrier is V = k[x] (+) k[x]*eta with deg x = 0, deg eta = -1,
Delta = d^2/(dx deta), and Q = [W, .] for a potential W(x).  Everything is
exact rational arithmetic; the x-degree window below only caps the finite
slice used for the exhaustive axiom check.
"""

from dbv import check_axioms, compute_homology, landau_ginzburg
from dbv.series import Series

A = landau_ginzburg("x^3")

print("potential W = x^3, so Q(f + g eta) = 3x^2 g and Delta(f + g eta) = g'")
print()

report = check_axioms(A, window=6)
print(f"axiom check over the x-degree-6 slice: all_passed = {report.all_passed}")
for c in report.checks:
    print(f"  {c.name:24s} {'ok' if c.passed else 'FAILED'}")
print()

x = A.from_poly_string("x")
eta = A.from_poly_string("1", eta=True)
xeta = A.from_poly_string("x", eta=True)
print("the derived bracket turns V into an odd Lie algebra:")
print(f"  [x, eta]  = {A.bracket(x, eta)!r}")
print(f"  [eta, x]  = {A.bracket(eta, x)!r}")
print(f"  [x^2, x*eta] = {A.bracket(A.from_poly_string('x^2'), xeta)!r}   (= (x^2)' * x)")
print()

s = Series.from_vector(A, (), xeta, 0, None)
print(f"K = Q + hbar Delta:  K(x*eta) = {A.K(s)!r}")
print()

H, dec = compute_homology(A)
print("homology of (V, Q) is the Jacobian ring k[x]/(W'):")
for cls in H:
    print(f"  degree {cls.degree}: class {cls.name}, representative {cls.representative!r}")
print(f"  (dimension {len(H)} = deg W - 1; the eta part has no homology)")
print()

b, h, c = dec.split(A.from_poly_string("x^4 + x + 2"))
print("adapted decomposition of x^4 + x + 2 as (im Q) + (representatives) + (complement):")
print(f"  exact part      {b!r}")
print(f"  harmonic part   {h!r}")
print(f"  complement part {c!r}")
