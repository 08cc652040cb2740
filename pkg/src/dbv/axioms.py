"""Exhaustive verification of the differential BV axioms.

Checks run over all basis pairs/triples of a finite backend, or over all
monomial pairs/triples up to a configurable x-degree window for the
polynomial backend (where each identity is polynomial in the degree, so a
windowed exhaustive check is the honest finite substitute -- the report
records the window used).  Each failure carries a witness: the offending
basis elements plus the nonzero defect vector.

Checked identities, with |v| the degree of v and d_v(w) the derivation
defect of Delta:

* graded commutativity, associativity, unit law
* Q^2 = 0, Delta^2 = 0, Q Delta + Delta Q = 0
* Q(vw) = Q(v) w + (-1)^{|v|} v Q(w)
* d_v is a derivation of degree |v| - 1  (Delta is second order)
* [v,w] = -(-1)^{(|v|+1)(|w|+1)} [w,v]
* [v,[w,u]] = [[v,w],u] + (-1)^{(|v|+1)(|w|+1)} [w,[v,u]]
* Delta[v,w] = [Delta v, w] + (-1)^{|v|+1} [v, Delta w]
"""

import json
from dataclasses import dataclass, field


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: dict | None = None

    def to_json(self):
        out = {"axiom": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class AxiomReport:
    checks: list = field(default_factory=list)
    window: int | None = None

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        out = {
            "all_passed": self.all_passed,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.window is not None:
            out["window_note"] = (
                f"identities checked exhaustively on basis monomials up to "
                f"x-degree {self.window}; arithmetic is exact"
            )
        return out

    def __str__(self):
        return json.dumps(self.to_json(), indent=2)


def _first_failure(algebra, elems, defect_fn, describe):
    """Scan tuples; return a witness dict for the first nonzero defect."""
    for tup in elems:
        defect = defect_fn(*tup)
        if not defect.is_zero():
            return {
                "elements": [algebra.key_name(k) for k, _ in tup],
                "defect": defect.to_json(),
                "identity": describe,
            }
    return None


def check_axioms(algebra, window=None):
    """Run the full axiom suite; failures are report entries, not errors."""
    keys = algebra.slice_keys(window) if window is not None else algebra.slice_keys()
    deg = algebra.key_degree
    vec = algebra.basis_vector
    elems = [(k, vec(k)) for k in keys]
    pairs = [(a, b) for a in elems for b in elems]
    triples = [(a, b, c) for a in elems for b in elems for c in elems]
    unit = algebra.unit_vector()

    # bilinear maps expanded over cached basis-pair tables: the identities
    # below revisit the same products and brackets thousands of times
    prod_table, br_table = {}, {}

    def _table(table, fn, k1, k2):
        key = (k1, k2)
        if key not in table:
            table[key] = fn(algebra.basis_vector(k1), algebra.basis_vector(k2))
        return table[key]

    def _expand(table, fn, v, w):
        out = algebra.zero_vector()
        for k1, c1 in v.coeffs.items():
            for k2, c2 in w.coeffs.items():
                out = out + _table(table, fn, k1, k2).scale(c1 * c2)
        return out

    def mul(v, w):
        return _expand(prod_table, algebra.product, v, w)

    def br(v, w):
        return _expand(br_table, algebra.bracket, v, w)

    q_table, d_table = {}, {}

    def Q(v):
        out = algebra.zero_vector()
        for k, c in v.coeffs.items():
            if k not in q_table:
                q_table[k] = algebra.q_key(k)
            out = out + q_table[k].scale(c)
        return out

    def D(v):
        out = algebra.zero_vector()
        for k, c in v.coeffs.items():
            if k not in d_table:
                d_table[k] = algebra.delta_key(k)
            out = out + d_table[k].scale(c)
        return out

    def sgn(n):
        return -1 if n % 2 else 1

    effective_window = window if window is not None else getattr(algebra, "x_window", None)
    report = AxiomReport(window=effective_window)

    def add(name, elem_tuples, defect_fn, describe):
        w = _first_failure(algebra, elem_tuples, defect_fn, describe)
        report.checks.append(AxiomCheck(name, w is None, w))

    add(
        "graded_commutativity", pairs,
        lambda a, b: mul(a[1], b[1]) - mul(b[1], a[1]).scale(sgn(deg(a[0]) * deg(b[0]))),
        "vw - (-1)^{|v||w|} wv",
    )
    add(
        "associativity", triples,
        lambda a, b, c: mul(mul(a[1], b[1]), c[1]) - mul(a[1], mul(b[1], c[1])),
        "(vw)u - v(wu)",
    )
    add(
        "unit", [(e,) for e in elems],
        lambda a: mul(unit, a[1]) - a[1],
        "1v - v",
    )
    add("q_squared", [(e,) for e in elems], lambda a: Q(Q(a[1])), "Q(Q(v))")
    add("delta_squared", [(e,) for e in elems], lambda a: D(D(a[1])), "Delta(Delta(v))")
    add(
        "anticommutation", [(e,) for e in elems],
        lambda a: Q(D(a[1])) + D(Q(a[1])),
        "(Q Delta + Delta Q)(v)",
    )
    add(
        "q_derivation", pairs,
        lambda a, b: Q(mul(a[1], b[1]))
        - mul(Q(a[1]), b[1])
        - mul(a[1], Q(b[1])).scale(sgn(deg(a[0]))),
        "Q(vw) - Q(v)w - (-1)^{|v|} v Q(w)",
    )

    def d_v(a, w):
        return D(mul(a[1], w)) - mul(D(a[1]), w) - mul(a[1], D(w)).scale(sgn(deg(a[0])))

    add(
        "delta_second_order", triples,
        lambda a, b, c: d_v(a, mul(b[1], c[1]))
        - mul(d_v(a, b[1]), c[1])
        - mul(b[1], d_v(a, c[1])).scale(sgn((deg(a[0]) + 1) * deg(b[0]))),
        "d_v(wu) - d_v(w)u - (-1)^{(|v|-1)|w|} w d_v(u)",
    )
    add(
        "bracket_antisymmetry", pairs,
        lambda a, b: br(a[1], b[1])
        + br(b[1], a[1]).scale(sgn((deg(a[0]) + 1) * (deg(b[0]) + 1))),
        "[v,w] + (-1)^{(|v|+1)(|w|+1)} [w,v]",
    )
    add(
        "odd_jacobi", triples,
        lambda a, b, c: br(a[1], br(b[1], c[1]))
        - br(br(a[1], b[1]), c[1])
        - br(b[1], br(a[1], c[1])).scale(sgn((deg(a[0]) + 1) * (deg(b[0]) + 1))),
        "[v,[w,u]] - [[v,w],u] - (-1)^{(|v|+1)(|w|+1)} [w,[v,u]]",
    )
    add(
        "delta_bracket_leibniz", pairs,
        lambda a, b: D(br(a[1], b[1]))
        - br(D(a[1]), b[1])
        - br(a[1], D(b[1])).scale(sgn(deg(a[0]) + 1)),
        "Delta[v,w] - [Delta v, w] - (-1)^{|v|+1} [v, Delta w]",
    )
    return report
