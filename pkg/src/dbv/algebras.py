"""The two differential BV backends behind one interface.

A backend supplies the fourtuple data: a graded commutative associative
unital product, a degree +1 differential Q squaring to zero, and a square
zero second-order operator Delta anticommuting with Q.  From these the
derived bracket

    [v, w] = (-1)^{|v|} ( Delta(vw) - Delta(v) w - (-1)^{|v|} v Delta(w) )

and the combined differential K = Q + hbar Delta are defined uniformly.

The (-1)^{|v|} prefactor normalizes the bracket so that it satisfies the odd
Lie identities ([x,eta] = -[eta,x] etc.); without it the raw defect of Delta
being a derivation is graded symmetric rather than odd antisymmetric.

Backends:

* :class:`FiniteDimDBV` -- explicit structure constants over a finite graded
  basis.  Nothing is assumed: run :func:`dbv.axioms.check_axioms` to verify
  a candidate really is a dBV algebra.
* :class:`LandauGinzburgDBV` -- the polynomial algebra k[x] (+) k[x]*eta with
  Delta = d^2/(dx deta) and Q = [W, .] for a potential W(x).  This carrier is
  infinite dimensional; arithmetic is exact and uncapped, the x-degree window
  is only used to present finite slices (axiom checks, reports).

The hbar degree is deg Q - deg Delta per backend, so that K is homogeneous:
+2 for the finite backend (Delta has degree -1), 0 for the polynomial one
(there Delta = d^2/(dx deta) raises degree by 1, since deg eta = -1).
"""

import hashlib
import json
from abc import ABC, abstractmethod
from fractions import Fraction

from . import polys
from .errors import AlgebraSpecError, PreconditionError
from .scalars import rational, rational_str
from .series import Series
from .vectors import GradedBasis, Vector


class DBVAlgebra(ABC):
    """Uniform contract both backends satisfy."""

    hbar_degree = 2

    # -- key protocol -------------------------------------------------------

    @abstractmethod
    def key_degree(self, key):
        ...

    @abstractmethod
    def key_name(self, key):
        ...

    @abstractmethod
    def key_from_name(self, name):
        ...

    @abstractmethod
    def key_sort_key(self, key):
        ...

    @abstractmethod
    def unit_key(self):
        ...

    @abstractmethod
    def slice_keys(self, window=None):
        """Homogeneous basis enumeration up to a degree / x-degree window."""

    # -- structure maps on keys ----------------------------------------------

    @abstractmethod
    def product_keys(self, k1, k2):
        ...

    @abstractmethod
    def q_key(self, key):
        ...

    @abstractmethod
    def delta_key(self, key):
        ...

    # -- vectors ------------------------------------------------------------

    def vector(self, coeffs):
        return Vector(self, {k: rational(c) for k, c in coeffs.items()})

    def basis_vector(self, key):
        return Vector(self, {key: Fraction(1)})

    def unit_vector(self):
        return self.basis_vector(self.unit_key())

    def zero_vector(self):
        return Vector.zero(self)

    def vector_from_names(self, named):
        return Vector.from_json(self, named)

    # -- linear / bilinear extensions -------------------------------------------
    # backends are immutable, so key-level values are memoized per instance

    def _memo(self, name, key, fn):
        cache = self.__dict__.setdefault(name, {})
        if key not in cache:
            cache[key] = fn(key)
        return cache[key]

    def product(self, v, w):
        out = Vector.zero(self)
        for k1, c1 in v.coeffs.items():
            for k2, c2 in w.coeffs.items():
                img = self._memo("_product_memo", (k1, k2), lambda kk: self.product_keys(*kk))
                out = out + img.scale(c1 * c2)
        return out

    def Q(self, v):
        out = Vector.zero(self)
        for k, c in v.coeffs.items():
            out = out + self._memo("_q_memo", k, self.q_key).scale(c)
        return out

    def Delta(self, v):
        out = Vector.zero(self)
        for k, c in v.coeffs.items():
            out = out + self._memo("_delta_memo", k, self.delta_key).scale(c)
        return out

    def q_plus_delta(self, v):
        return self.Q(v) + self.Delta(v)

    def bracket(self, v, w):
        """Derived bracket, extended bilinearly from homogeneous parts of v."""
        out = Vector.zero(self)
        for d, vp in v.homogeneous_parts():
            sign = -1 if d % 2 else 1
            term = self.Delta(self.product(vp, w)) - self.product(self.Delta(vp), w)
            out = out + term.scale(sign) - self.product(vp, self.Delta(w))
        return out

    # -- series helpers -----------------------------------------------------------

    def K(self, s):
        """K = Q + hbar Delta applied coefficient-wise to a series.

        The series must be able to hold at least one hbar power.
        """
        if s.hbar_order is not None and s.hbar_order < 1:
            raise PreconditionError("applying K needs hbar truncation >= 1")
        return s.apply_linear(self.Q) + s.apply_linear(self.Delta).mul_hbar(1)

    def series(self, variables, t_order, hbar_order=None):
        return Series.zero(self, tuple(variables), t_order, hbar_order)

    def unit_series(self, variables, t_order, hbar_order=None):
        return Series.unit(self, tuple(variables), t_order, hbar_order)

    # -- descriptions ----------------------------------------------------------------

    @abstractmethod
    def to_json(self):
        ...

    def canonical_json(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def content_hash(self):
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


class FiniteDimDBV(DBVAlgebra):
    """Structure-constant backend over a finite graded basis.

    `product` maps (i, j) index pairs to sparse coefficient dicts; missing
    pairs are filled from graded commutativity when only one order is given,
    and mean zero when neither is.  Q and Delta are sparse matrices given
    column-wise.  Construction validates degrees (product additive, Q of
    degree +1, Delta of degree -1); the algebraic identities themselves are
    checked by :func:`dbv.axioms.check_axioms`, not assumed.
    """

    hbar_degree = 2

    def __init__(self, basis, product, q, delta):
        self.basis = basis
        self._product = {}
        for (i, j), entry in product.items():
            vec = {int(k): rational(c) for k, c in entry.items() if rational(c) != 0}
            self._product[(int(i), int(j))] = vec
        # fill the graded-commutative mirror image for pairs given one way only
        for (i, j), entry in list(self._product.items()):
            if (j, i) not in self._product:
                sign = -1 if (basis.degree(i) % 2) and (basis.degree(j) % 2) else 1
                self._product[(j, i)] = {k: sign * c for k, c in entry.items()}
        self._q = {int(i): {int(k): rational(c) for k, c in e.items() if rational(c) != 0}
                   for i, e in q.items()}
        self._delta = {int(i): {int(k): rational(c) for k, c in e.items() if rational(c) != 0}
                       for i, e in delta.items()}
        self._validate_degrees()

    def _validate_degrees(self):
        deg = self.basis.degree
        for (i, j), entry in self._product.items():
            for k in entry:
                if deg(k) != deg(i) + deg(j):
                    raise AlgebraSpecError(
                        f"product {self.basis.name(i)}*{self.basis.name(j)} has a "
                        f"component of wrong degree ({self.basis.name(k)})"
                    )
        for table, shift, label in ((self._q, 1, "Q"), (self._delta, -1, "Delta")):
            for i, entry in table.items():
                for k in entry:
                    if deg(k) != deg(i) + shift:
                        raise AlgebraSpecError(
                            f"{label}({self.basis.name(i)}) has a component of wrong "
                            f"degree ({self.basis.name(k)})"
                        )

    # -- key protocol -------------------------------------------------------

    def key_degree(self, key):
        return self.basis.degree(key)

    def key_name(self, key):
        return self.basis.name(key)

    def key_from_name(self, name):
        try:
            return self.basis.index[name]
        except KeyError:
            raise AlgebraSpecError(f"unknown basis element {name!r}") from None

    def key_sort_key(self, key):
        return key

    def unit_key(self):
        return self.basis.unit_index

    def slice_keys(self, window=None):
        keys = list(self.basis)
        if window is not None:
            if isinstance(window, int):
                lo, hi = -window, window
            else:
                lo, hi = window
            keys = [k for k in keys if lo <= self.basis.degree(k) <= hi]
        return keys

    def degrees(self):
        return sorted(set(self.basis.degrees))

    def keys_of_degree(self, d):
        return [k for k in self.basis if self.basis.degree(k) == d]

    # -- structure maps ---------------------------------------------------------

    def product_keys(self, k1, k2):
        return Vector(self, self._product.get((k1, k2), {}))

    def q_key(self, key):
        return Vector(self, self._q.get(key, {}))

    def delta_key(self, key):
        return Vector(self, self._delta.get(key, {}))

    # -- serialization ---------------------------------------------------------------

    def to_json(self):
        def table_json(table):
            out = []
            for i in sorted(table):
                entry = table[i]
                if not entry:
                    continue
                out.append([
                    self.basis.name(i),
                    {self.basis.name(k): rational_str(c) for k, c in sorted(entry.items())},
                ])
            return out

        prod = []
        for (i, j) in sorted(self._product):
            entry = self._product[(i, j)]
            if not entry:
                continue
            prod.append([
                self.basis.name(i),
                self.basis.name(j),
                {self.basis.name(k): rational_str(c) for k, c in sorted(entry.items())},
            ])
        return {
            "kind": "finite",
            "basis": [
                {"name": n, "degree": d}
                for n, d in zip(self.basis.names, self.basis.degrees)
            ],
            "unit": self.basis.name(self.basis.unit_index),
            "product": prod,
            "Q": table_json(self._q),
            "Delta": table_json(self._delta),
        }


class LandauGinzburgDBV(DBVAlgebra):
    """Polynomial backend: V = k[x] (+) k[x]*eta, deg x = 0, deg eta = -1.

    Delta = d^2/(dx deta) and Q = [W, .], concretely Q(f + g eta) = W'(x) g
    and Q(f) = 0.  Delta(W) = 0 and [W, W] = 0 hold automatically (W has no
    eta), so this is a dBV algebra for every potential of degree >= 2.

    Keys are (exponent, eta_flag) pairs.  `x_window` caps only the finite
    slices used for presentation and exhaustive checks; arithmetic itself is
    exact on full polynomials.
    """

    # both Q and Delta raise degree by 1 here, so hbar is degree 0
    hbar_degree = 0

    def __init__(self, potential, x_window=8):
        self.potential = polys.normalize({int(e): rational(c) for e, c in potential.items()})
        d = polys.degree(self.potential)
        if d is None or d < 2:
            raise AlgebraSpecError("potential must be a polynomial of degree >= 2")
        self.w_prime = polys.diff(self.potential)
        self.x_window = int(x_window)

    # -- key protocol -------------------------------------------------------

    def key_degree(self, key):
        _, eta = key
        return -1 if eta else 0

    def key_name(self, key):
        k, eta = key
        if eta:
            return {0: "eta", 1: "x*eta"}.get(k, f"x^{k}*eta")
        return {0: "1", 1: "x"}.get(k, f"x^{k}")

    def key_from_name(self, name):
        base, _, tail = name.partition("*")
        eta = False
        if tail == "eta":
            eta = True
        elif base == "eta" and not tail:
            base, eta = "1", True
        elif tail:
            raise AlgebraSpecError(f"unknown basis element {name!r}")
        if base == "1":
            k = 0
        elif base == "x":
            k = 1
        elif base.startswith("x^"):
            k = int(base[2:])
        else:
            raise AlgebraSpecError(f"unknown basis element {name!r}")
        if k < 0:
            raise AlgebraSpecError(f"unknown basis element {name!r}")
        return (k, eta)

    def key_sort_key(self, key):
        k, eta = key
        return (1 if eta else 0, k)

    def unit_key(self):
        return (0, False)

    def slice_keys(self, window=None):
        d = self.x_window if window is None else int(window)
        return [(k, False) for k in range(d + 1)] + [(k, True) for k in range(d + 1)]

    # -- polynomial views ---------------------------------------------------------

    def parts(self, v):
        """Split a vector into its (f, g) polynomial pair, v = f + g eta."""
        f, g = {}, {}
        for (k, eta), c in v.coeffs.items():
            (g if eta else f)[k] = c
        return polys.normalize(f), polys.normalize(g)

    def from_parts(self, f, g=None):
        coeffs = {(k, False): c for k, c in polys.normalize(f).items()}
        if g:
            coeffs.update({(k, True): c for k, c in polys.normalize(g).items()})
        return Vector(self, coeffs)

    def from_poly_string(self, text, eta=False):
        p = polys.parse(text)
        return self.from_parts({}, p) if eta else self.from_parts(p)

    # -- structure maps ----------------------------------------------------------

    def product_keys(self, k1, k2):
        (e1, eta1), (e2, eta2) = k1, k2
        if eta1 and eta2:
            return Vector.zero(self)
        return self.basis_vector((e1 + e2, eta1 or eta2))

    def q_key(self, key):
        k, eta = key
        if not eta:
            return Vector.zero(self)
        return self.from_parts(polys.mul(self.w_prime, {k: Fraction(1)}))

    def delta_key(self, key):
        k, eta = key
        if not eta or k == 0:
            return Vector.zero(self)
        return self.from_parts({k - 1: Fraction(k)})

    # -- serialization ----------------------------------------------------------------

    def to_json(self):
        return {
            "kind": "landau-ginzburg",
            "potential": {str(e): rational_str(c) for e, c in sorted(self.potential.items())},
        }


def algebra_from_json(data):
    """Build a backend from its JSON description (see module formats)."""
    if not isinstance(data, dict) or "kind" not in data:
        raise AlgebraSpecError("algebra description must be an object with a 'kind'")
    kind = data["kind"]
    if kind == "landau-ginzburg":
        try:
            return LandauGinzburgDBV(data["potential"], x_window=data.get("x_window", 8))
        except (KeyError, ValueError, TypeError) as exc:
            raise AlgebraSpecError(f"bad landau-ginzburg description: {exc}") from exc
    if kind != "finite":
        raise AlgebraSpecError(f"unknown algebra kind {kind!r}")
    try:
        basis = GradedBasis(
            [(b["name"], b["degree"]) for b in data["basis"]],
            data["unit"],
        )
        index = basis.index
        product = {}
        for a, b, entry in data.get("product", []):
            key = (index[a], index[b])
            if key in product:
                raise AlgebraSpecError(f"duplicate product entry for ({a}, {b})")
            product[key] = {index[n]: rational(c) for n, c in entry.items()}
        tables = []
        for label in ("Q", "Delta"):
            table = {}
            for a, entry in data.get(label, []):
                if index[a] in table:
                    raise AlgebraSpecError(f"duplicate {label} entry for {a}")
                table[index[a]] = {index[n]: rational(c) for n, c in entry.items()}
            tables.append(table)
        return FiniteDimDBV(basis, product, tables[0], tables[1])
    except AlgebraSpecError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise AlgebraSpecError(f"bad finite algebra description: {exc}") from exc
