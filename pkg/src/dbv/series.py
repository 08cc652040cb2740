"""Truncated formal series in hbar and graded deformation coordinates t^i.

An element is a finite sum  sum_m  v_m * m  where each m is a monomial
t^{i_1}...t^{i_n} hbar^p (vector coefficients on the left, coordinates on
the right) and v_m is a sparse :class:`~dbv.vectors.Vector`.  Odd coordinates
anticommute, so monomials are kept in a canonical sorted order and the Koszul
sign of the sorting permutation is folded into the coefficient.

Truncation metadata travels with every series: `t_order` is the maximal
trusted t-degree, `hbar_order` the maximal trusted hbar exponent (None means
the series is exact in hbar, i.e. an hbar-polynomial with nothing hidden
behind a truncation).  Arithmetic takes the floor of its inputs' orders, and
dividing by hbar lowers the trusted hbar order, so a chain of the proof-style
1/hbar steps can never silently over-claim.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BasisMismatchError, HbarDivisionError, PreconditionError
from .vectors import Vector


@dataclass(frozen=True)
class DeformationVariable:
    """A dual coordinate t^i: 1-based index plus an integer degree.

    The degree is chosen as minus the degree of the homology representative
    the coordinate is dual to, so that versal solutions are degree zero.
    An odd variable (odd degree) squares to zero.
    """

    index: int
    degree: int

    @property
    def odd(self):
        return self.degree % 2 != 0

    def to_json(self):
        return {"index": self.index, "degree": self.degree}


@dataclass(frozen=True)
class Monomial:
    """t^{i_1}...t^{i_n} hbar^p with a normalization sign.

    `tvars` is sorted; `sign` is the Koszul sign relative to that canonical
    order.  Series storage always folds the sign into the coefficient and
    keeps sign == +1 keys, so equal monomials hash equal.
    """

    tvars: tuple
    hbar: int
    sign: int = 1

    @property
    def t_order(self):
        return len(self.tvars)

    def degree(self, variables, hbar_degree):
        return sum(variables[i - 1].degree for i in self.tvars) + hbar_degree * self.hbar

    def parity(self, variables):
        return sum(variables[i - 1].degree for i in self.tvars) % 2

    def canonical(self):
        return Monomial(self.tvars, self.hbar, 1)

    def __repr__(self):
        parts = [f"t{i}" for i in self.tvars]
        if self.hbar:
            parts.append("h" if self.hbar == 1 else f"h^{self.hbar}")
        body = "*".join(parts) if parts else "1"
        return body if self.sign == 1 else f"-{body}"


def _merge_sorted(a, b, variables):
    """Merge two sorted index tuples, tracking the Koszul sign.

    Returns (merged, sign) or None when an odd index repeats.  Moving an odd
    variable past another odd variable flips the sign; even variables move
    freely.
    """
    odd = [variables[i - 1].odd for i in range(1, len(variables) + 1)]
    # number of odd entries in a[k:] for each k
    odd_suffix = [0] * (len(a) + 1)
    for k in range(len(a) - 1, -1, -1):
        odd_suffix[k] = odd_suffix[k + 1] + (1 if odd[a[k] - 1] else 0)
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] <= b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] crosses every remaining element of a
            if odd[b[j] - 1] and odd_suffix[i] % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    for k in range(len(merged) - 1):
        if merged[k] == merged[k + 1] and odd[merged[k] - 1]:
            return None
    return tuple(merged), sign


def monomial_mul(a, b, variables):
    """Product of monomials; None when an odd coordinate squares to zero.

    The result is canonically sorted, its sign the product of the input signs
    and the Koszul sign of the sorting permutation.
    """
    res = _merge_sorted(a.tvars, b.tvars, variables)
    if res is None:
        return None
    merged, sign = res
    return Monomial(merged, a.hbar + b.hbar, a.sign * b.sign * sign)


def normalized_monomial(indices, hbar, variables):
    """Canonical monomial from an arbitrarily ordered index sequence.

    Returns (Monomial-with-sign-1, sign) or None for an odd square.
    """
    m = Monomial((), hbar, 1)
    for i in indices:
        m = monomial_mul(m, Monomial((int(i),), 0, 1), variables)
        if m is None:
            return None
    return m.canonical(), m.sign


def _min_hbar(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Series:
    """Sparse truncated series with Vector coefficients."""

    __slots__ = ("algebra", "variables", "data", "t_order", "hbar_order")

    def __init__(self, algebra, variables, data, t_order, hbar_order):
        self.algebra = algebra
        self.variables = tuple(variables)
        for pos, var in enumerate(self.variables):
            if var.index != pos + 1:
                raise ValueError("deformation variables must be numbered 1..m in order")
        self.t_order = int(t_order)
        self.hbar_order = None if hbar_order is None else int(hbar_order)
        clean = {}
        for m, v in data.items():
            if v.is_zero():
                continue
            if m.hbar < 0:
                raise ValueError("public series never store negative hbar powers")
            if m.sign != 1:
                v = v.scale(m.sign)
                m = m.canonical()
            if m.t_order > self.t_order:
                continue
            if self.hbar_order is not None and m.hbar > self.hbar_order:
                continue
            if m in clean:
                v = clean[m] + v
            if v.is_zero():
                clean.pop(m, None)
            else:
                clean[m] = v
        self.data = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(algebra, variables, t_order, hbar_order=None):
        return Series(algebra, variables, {}, t_order, hbar_order)

    @staticmethod
    def from_vector(algebra, variables, vector, t_order, hbar_order=None, hbar=0):
        return Series(
            algebra, variables, {Monomial((), hbar): vector}, t_order, hbar_order
        )

    @staticmethod
    def unit(algebra, variables, t_order, hbar_order=None):
        return Series.from_vector(algebra, variables, algebra.unit_vector(), t_order, hbar_order)

    def term(self, indices, vector, hbar=0):
        """self + vector * t^{indices} hbar^p, indices in any order."""
        norm = normalized_monomial(indices, hbar, self.variables)
        if norm is None:
            return self
        m, sign = norm
        extra = Series(
            self.algebra,
            self.variables,
            {m: vector.scale(sign)},
            self.t_order,
            self.hbar_order,
        )
        return self + extra

    # -- bookkeeping ----------------------------------------------------------

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise BasisMismatchError("series over different algebras")
        if self.variables != other.variables:
            raise BasisMismatchError("series over different variable sets")

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        return (
            isinstance(other, Series)
            and self.algebra is other.algebra
            and self.variables == other.variables
            and self.data == other.data
        )

    def __hash__(self):
        raise TypeError("series are not hashable")

    def max_hbar_power(self):
        return max((m.hbar for m in self.data), default=0)

    def total_degree(self):
        """Degree of a homogeneous series; raises on mixed terms."""
        hdeg = self.algebra.hbar_degree
        degs = set()
        for m, v in self.data.items():
            for d, _ in v.homogeneous_parts():
                degs.add(d + m.degree(self.variables, hdeg))
        if not degs:
            raise ValueError("the zero series has no degree")
        if len(degs) > 1:
            raise ValueError(f"series is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def is_homogeneous(self, degree):
        if self.is_zero():
            return True
        try:
            return self.total_degree() == degree
        except ValueError:
            return False

    # -- linear structure -----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        out = dict(self.data)
        for m, v in other.data.items():
            out[m] = out[m] + v if m in out else v
        return Series(
            self.algebra,
            self.variables,
            out,
            min(self.t_order, other.t_order),
            _min_hbar(self.hbar_order, other.hbar_order),
        )

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def __neg__(self):
        return self.scale(Fraction(-1))

    def scale(self, c):
        c = Fraction(c)
        return Series(
            self.algebra,
            self.variables,
            {m: v.scale(c) for m, v in self.data.items()},
            self.t_order,
            self.hbar_order,
        )

    def apply_linear(self, op):
        """Apply a linear map Vector -> Vector to every coefficient.

        Coefficients sit to the left of the coordinates, so no Koszul sign is
        incurred regardless of the operator's degree.
        """
        out = {}
        for m, v in self.data.items():
            w = op(v)
            if not w.is_zero():
                out[m] = w
        return Series(self.algebra, self.variables, out, self.t_order, self.hbar_order)

    def map_coefficients(self, op):
        """Apply Vector -> [(hbar_shift, Vector)] to every coefficient,
        shifting monomial hbar exponents accordingly (used for maps into
        hbar-polynomials such as the quantum splitting)."""
        out = {}
        for m, v in self.data.items():
            for p, w in op(v):
                if w.is_zero():
                    continue
                key = Monomial(m.tvars, m.hbar + p)
                out[key] = out[key] + w if key in out else w
        return Series(self.algebra, self.variables, out, self.t_order, self.hbar_order)

    # -- multiplication ---------------------------------------------------------

    def mul(self, other, bilinear=None, operation_parity=0):
        """Graded-bilinear extension of a map on V over the coordinate ring.

        (v*m)(w*m') = (-1)^{deg m * (deg w + p)} B(v, w) * (m m'), truncated
        to the floor of both inputs' orders, where p = `operation_parity` is
        the parity of B itself: both the operation and the second vector
        cross the first monomial.  `bilinear` defaults to the (even) algebra
        product; the degree -1 bracket needs operation_parity=1, which is
        what makes V (x) k[t, hbar] a BV algebra extension (and the
        exp/bracket identity hold) rather than just a sign convention.
        """
        self._check(other)
        if bilinear is None:
            bilinear = self.algebra.product
        t_ord = min(self.t_order, other.t_order)
        h_ord = _min_hbar(self.hbar_order, other.hbar_order)
        acc = {}
        for m1, v1 in self.data.items():
            m1_parity = m1.parity(self.variables)
            for m2, v2 in other.data.items():
                if m1.t_order + m2.t_order > t_ord:
                    continue
                if h_ord is not None and m1.hbar + m2.hbar > h_ord:
                    continue
                m = monomial_mul(m1, m2, self.variables)
                if m is None:
                    continue
                even2, odd2 = v2.parity_parts()
                w = Vector.zero(self.algebra)
                for par2, v2p in ((0, even2), (1, odd2)):
                    if v2p.is_zero():
                        continue
                    part = bilinear(v1, v2p)
                    if m1_parity and (par2 + operation_parity) % 2:
                        part = part.scale(-1)
                    w = w + part
                if w.is_zero():
                    continue
                key = m.canonical()
                w = w.scale(m.sign)
                acc[key] = acc[key] + w if key in acc else w
        return Series(self.algebra, self.variables, acc, t_ord, h_ord)

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.mul(other)
        return self.scale(other)

    def bracket(self, other):
        return self.mul(other, bilinear=self.algebra.bracket, operation_parity=1)

    # -- t-order and hbar manipulation ----------------------------------------

    def ord_n(self, n):
        """Exactly the t-order-n part, all hbar exponents retained."""
        if n > self.t_order:
            return Series.zero(self.algebra, self.variables, self.t_order, self.hbar_order)
        data = {m: v for m, v in self.data.items() if m.t_order == n}
        return Series(self.algebra, self.variables, data, self.t_order, self.hbar_order)

    def ord_leq(self, n):
        data = {m: v for m, v in self.data.items() if m.t_order <= n}
        return Series(self.algebra, self.variables, data, self.t_order, self.hbar_order)

    def constant_term(self):
        """The t-order-0, hbar-order-0 coefficient vector."""
        return self.data.get(Monomial((), 0), Vector.zero(self.algebra))

    def set_hbar_zero(self):
        """Drop every monomial with a positive hbar exponent (the hbar=0
        evaluation map); idempotent and a chain map by construction."""
        data = {m: v for m, v in self.data.items() if m.hbar == 0}
        return Series(self.algebra, self.variables, data, self.t_order, self.hbar_order)

    def mul_hbar(self, k=1):
        out = {}
        for m, v in self.data.items():
            p = m.hbar + k
            if self.hbar_order is not None and p > self.hbar_order:
                continue
            out[Monomial(m.tvars, p)] = v
        return Series(self.algebra, self.variables, out, self.t_order, self.hbar_order)

    def hbar_divide(self, k):
        """Divide by hbar^k; every stored term must carry hbar^k.

        The trusted hbar order drops by k: terms beyond the old truncation
        would have contributed below it.
        """
        if k <= 0:
            raise ValueError("k must be a positive integer")
        for m, v in self.data.items():
            if m.hbar < k:
                raise HbarDivisionError(
                    f"term {m!r} has hbar exponent {m.hbar} < {k}: series is not "
                    f"divisible by hbar^{k}"
                )
        out = {Monomial(m.tvars, m.hbar - k): v for m, v in self.data.items()}
        new_order = None if self.hbar_order is None else self.hbar_order - k
        return Series(self.algebra, self.variables, out, self.t_order, new_order)

    def truncate(self, t_order=None, hbar_order=None):
        t_ord = self.t_order if t_order is None else min(self.t_order, t_order)
        h_ord = self.hbar_order if hbar_order is None else _min_hbar(self.hbar_order, hbar_order)
        return Series(self.algebra, self.variables, self.data, t_ord, h_ord)

    def with_variables(self, variables):
        """Reinterpret over a larger variable set (indices must be valid)."""
        return Series(self.algebra, tuple(variables), self.data, self.t_order, self.hbar_order)

    # -- exp / log ----------------------------------------------------------------

    def exp(self):
        """Truncated exponential sum a^n / n!.

        Requires a zero t-constant term (so the sum terminates at the t-order
        truncation) and total degree zero (so powers are unambiguous).
        """
        if not self.ord_n(0).is_zero():
            raise PreconditionError("exp requires a zero t-constant term")
        if not self.is_homogeneous(0):
            raise PreconditionError("exp requires total degree zero")
        result = Series.unit(self.algebra, self.variables, self.t_order, self.hbar_order)
        power = Series.unit(self.algebra, self.variables, self.t_order, self.hbar_order)
        for n in range(1, self.t_order + 1):
            power = power.mul(self).scale(Fraction(1, n))
            if power.is_zero():
                break
            result = result + power
        return result

    def log(self):
        """Truncated logarithm of unit + (t-order >= 1 terms)."""
        rest = self - Series.unit(self.algebra, self.variables, self.t_order, self.hbar_order)
        if not rest.ord_n(0).is_zero():
            raise PreconditionError("log requires constant term exactly the unit")
        result = Series.zero(self.algebra, self.variables, self.t_order, self.hbar_order)
        power = Series.unit(self.algebra, self.variables, self.t_order, self.hbar_order)
        for n in range(1, self.t_order + 1):
            power = power.mul(rest)
            if power.is_zero():
                break
            result = result + power.scale(Fraction((-1) ** (n + 1), n))
        return result

    # -- display / serialization ---------------------------------------------------

    def sorted_terms(self):
        return sorted(self.data.items(), key=lambda kv: (kv[0].tvars, kv[0].hbar))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for m, v in self.sorted_terms():
            coeff = repr(v)
            if len(v.coeffs) > 1:
                coeff = f"({coeff})"
            parts.append(coeff if m == Monomial((), 0) else f"{coeff}*{m!r}")
        return " + ".join(parts)

    def to_json(self):
        terms = [
            {
                "monomial": {"t": list(m.tvars), "hbar": m.hbar, "sign": 1},
                "vector": v.to_json(),
            }
            for m, v in self.sorted_terms()
        ]
        return {
            "variables": [v.to_json() for v in self.variables],
            "t_order": self.t_order,
            "hbar_order": self.hbar_order,
            "terms": terms,
        }

    @staticmethod
    def from_json(algebra, data):
        variables = tuple(
            DeformationVariable(int(v["index"]), int(v["degree"]))
            for v in data.get("variables", [])
        )
        if [v.index for v in variables] != list(range(1, len(variables) + 1)):
            raise ValueError("variables must be numbered 1..m")
        t_order = int(data["t_order"])
        hbar_order = data.get("hbar_order")
        out = Series.zero(algebra, variables, t_order, hbar_order)
        for rec in data.get("terms", []):
            mon = rec["monomial"]
            sign = int(mon.get("sign", 1))
            if sign not in (1, -1):
                raise ValueError("monomial sign must be +1 or -1")
            vec = Vector.from_json(algebra, rec["vector"]).scale(sign)
            out = out.term([int(i) for i in mon["t"]], vec, hbar=int(mon.get("hbar", 0)))
        return out
