"""Built-in example algebras and the seeded random generator.

The examples are shipped as generators rather than checked-in files so every
instance carries its construction parameters.

The random generator produces square-zero-product algebras (all products of
non-unit elements vanish) with differentials that satisfy the axioms by
construction: pick disjoint sets of source elements for Q and for Delta,
send each source to a random combination of eligible targets (non-unit,
non-source elements of the right degree), and the identities Q^2 = 0,
Delta^2 = 0 and Q Delta + Delta Q = 0 hold because images consist of
elements both operators kill.  An optional random graded automorphism of the
square-zero product then densifies the matrices without touching any axiom
(in the automorphism basis Q is a strictly triangular nilpotent map).  Every
candidate is re-verified by the axiom checker before being returned.
"""

import random
from fractions import Fraction

from . import polys
from .algebras import FiniteDimDBV, LandauGinzburgDBV
from .axioms import check_axioms
from .vectors import GradedBasis


def landau_ginzburg(potential="x^3", x_window=8):
    """The polynomial dBV algebra for a potential, e.g. "x^3" or {3: 1}."""
    if isinstance(potential, str):
        potential = polys.parse(potential)
    return LandauGinzburgDBV(potential, x_window=x_window)


def square_zero_example():
    """The 3-dimensional counterexample to degeneration.

    Basis {1, a (degree 0), b (degree -1)}, all products of non-unit
    elements zero, Q = 0, Delta(a) = b.  The class [a] cannot be lifted:
    Delta(a) = b is not exact (im Q = 0), so the spectral sequence does not
    degenerate and no quantum splitting exists.
    """
    basis = GradedBasis([("1", 0), ("a", 0), ("b", -1)], unit="1")
    product = _unit_products(basis)
    algebra = FiniteDimDBV(basis, product, {}, {1: {2: Fraction(1)}})
    report = check_axioms(algebra)
    assert report.all_passed, "square-zero example must satisfy the axioms"
    return algebra


def qdelta_gap_example():
    """A 5-dimensional algebra where the literal and standard forms of the
    fourth Q-Delta space differ: im(Delta) n ker(Delta) strictly contains
    im(Delta) n ker(Q).

    Basis {1, e (1), f (0), p (2), g (1)}, square-zero products,
    Q: e -> p, f -> g and Delta: e -> f, p -> -g.  Then f = Delta(e) lies in
    ker Delta but not in ker Q (Qf = g), so the two fourth spaces disagree.
    """
    basis = GradedBasis([("1", 0), ("e", 1), ("f", 0), ("p", 2), ("g", 1)], unit="1")
    product = _unit_products(basis)
    q = {1: {3: Fraction(1)}, 2: {4: Fraction(1)}}
    delta = {1: {2: Fraction(1)}, 3: {4: Fraction(-1)}}
    algebra = FiniteDimDBV(basis, product, q, delta)
    report = check_axioms(algebra)
    assert report.all_passed, "qdelta gap example must satisfy the axioms"
    return algebra


def _unit_products(basis):
    u = basis.unit_index
    product = {}
    for i in basis:
        product[(u, i)] = {i: Fraction(1)}
        if i != u:
            product[(i, u)] = {i: Fraction(1)}
    return product


def random_finite(dim=6, seed=0, degree_span=1, density=0.6, conjugate=True,
                  q_sources=None, delta_sources=None):
    """Seeded random finite dBV algebra, valid by construction.

    dim counts the unit; degrees are drawn from [-degree_span, degree_span].
    `q_sources` / `delta_sources` override how many elements feed each
    differential (both 0 gives an algebra with Q = Delta = 0, on which the
    Q-Delta lemma holds trivially).
    """
    rng = random.Random(seed)
    n = int(dim)
    if n < 1:
        raise ValueError("dim must be >= 1")
    names = ["1"] + [f"e{i}" for i in range(1, n)]
    degrees = [0] + [rng.randint(-degree_span, degree_span) for _ in range(n - 1)]
    basis = GradedBasis(list(zip(names, degrees)), unit="1")
    others = [i for i in basis if i != basis.unit_index]
    rng.shuffle(others)
    n_q = rng.randint(0, max(0, len(others) - 2)) if q_sources is None else q_sources
    n_d = (rng.randint(0, max(0, len(others) - 2 - n_q))
           if delta_sources is None else delta_sources)
    q_src = others[:n_q]
    d_src = others[n_q:n_q + n_d]
    targets = others[n_q + n_d:]

    def random_image(src, shift):
        want = basis.degree(src) + shift
        eligible = [t for t in targets if basis.degree(t) == want]
        image = {}
        for t in eligible:
            if rng.random() < density:
                image[t] = Fraction(rng.randint(-3, 3))
        return {t: c for t, c in image.items() if c != 0}

    q = {s: random_image(s, 1) for s in q_src}
    delta = {s: random_image(s, -1) for s in d_src}
    q = {s: img for s, img in q.items() if img}
    delta = {s: img for s, img in delta.items() if img}
    algebra = FiniteDimDBV(basis, _unit_products(basis), q, delta)

    if conjugate:
        algebra = _conjugate(algebra, rng)
    report = check_axioms(algebra)
    assert report.all_passed, f"random algebra (seed {seed}) failed the axiom check"
    return algebra


def _conjugate(algebra, rng):
    """Transport Q and Delta through a random degree-preserving automorphism
    of the square-zero product (any graded isomorphism fixing the unit)."""
    basis = algebra.basis
    n = len(basis)
    unit = basis.unit_index
    # unipotent phi = 1 + strictly-random same-degree mixing, always invertible
    phi = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    others = [i for i in basis if i != unit]
    for i in others:
        for j in others:
            if i < j and basis.degree(i) == basis.degree(j) and rng.random() < 0.5:
                phi[j][i] = Fraction(rng.randint(-2, 2))

    def mat_vec(mat, col):
        return [sum((mat[r][c] * col[c] for c in range(n)), Fraction(0)) for r in range(n)]

    # invert the unipotent matrix by forward substitution on each basis vector
    inv_cols = []
    for j in range(n):
        e = [Fraction(1) if r == j else Fraction(0) for r in range(n)]
        x = list(e)
        for r in range(n):
            x[r] = e[r] - sum((phi[r][c] * x[c] for c in range(n) if c != r), Fraction(0))
        inv_cols.append(x)

    def transported(table):
        out = {}
        for j in range(n):
            col = [Fraction(0)] * n
            col[j] = Fraction(1)
            # phi^{-1} e_j, then the original operator, then phi
            x = [inv_cols[j][r] for r in range(n)]
            y = [Fraction(0)] * n
            for c in range(n):
                if x[c] == 0:
                    continue
                for k, val in table.get(c, {}).items():
                    y[k] += x[c] * val
            z = mat_vec(phi, y)
            entry = {k: z[k] for k in range(n) if z[k] != 0}
            if entry:
                out[j] = entry
        return out

    return FiniteDimDBV(
        basis,
        algebra._product,
        transported(algebra._q),
        transported(algebra._delta),
    )
