"""Graded bases and sparse vectors with exact rational coefficients.

A :class:`Vector` is a sparse map from basis keys to Fractions, tied to the
algebra backend it lives over.  Keys are backend-specific (integers for the
finite backend, (exponent, eta) pairs for the polynomial backend); the
backend supplies degrees and display names.  Vectors are immutable by
convention: every operation returns a fresh value.
"""

from fractions import Fraction

from .errors import BasisMismatchError
from .scalars import rational, rational_str


class GradedBasis:
    """Ordered homogeneous basis with a distinguished unit element."""

    def __init__(self, elements, unit):
        """elements: iterable of (name, degree); unit: name of the unit."""
        elements = [(str(n), int(d)) for n, d in elements]
        names = [n for n, _ in elements]
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        if unit not in names:
            raise ValueError(f"unit {unit!r} is not a basis element")
        self.names = tuple(names)
        self.degrees = tuple(d for _, d in elements)
        self.unit_index = names.index(unit)
        if self.degrees[self.unit_index] != 0:
            raise ValueError("unit element must have degree 0")
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(range(len(self.names)))

    def degree(self, i):
        return self.degrees[i]

    def name(self, i):
        return self.names[i]


class Vector:
    """Sparse element of the graded carrier of an algebra backend."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = {k: c for k, c in coeffs.items() if c != 0}

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(algebra):
        return Vector(algebra, {})

    def is_zero(self):
        return not self.coeffs

    # -- linear structure --------------------------------------------------

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise BasisMismatchError("vectors over different algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Vector(self.algebra, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) - c
        return Vector(self.algebra, out)

    def __neg__(self):
        return Vector(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return Vector.zero(self.algebra)
        return Vector(self.algebra, {k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return (
            isinstance(other, Vector)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        raise TypeError("vectors are not hashable")

    # -- grading ------------------------------------------------------------

    def degree(self):
        """Degree of a homogeneous vector; raises on mixed terms."""
        ds = {self.algebra.key_degree(k) for k in self.coeffs}
        if not ds:
            raise ValueError("the zero vector has no degree")
        if len(ds) > 1:
            raise ValueError(f"vector is not homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def homogeneous_parts(self):
        """List of (degree, part) pairs, sorted by degree."""
        parts = {}
        for k, c in self.coeffs.items():
            parts.setdefault(self.algebra.key_degree(k), {})[k] = c
        return [(d, Vector(self.algebra, parts[d])) for d in sorted(parts)]

    def parity_parts(self):
        """(even_part, odd_part) split by degree mod 2."""
        even, odd = {}, {}
        for k, c in self.coeffs.items():
            (odd if self.algebra.key_degree(k) % 2 else even)[k] = c
        return Vector(self.algebra, even), Vector(self.algebra, odd)

    # -- display / serialization --------------------------------------------

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda kv: self.algebra.key_sort_key(kv[0]))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in self.sorted_items():
            name = self.algebra.key_name(k)
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{rational_str(c)}*{name}")
        return " + ".join(parts)

    def to_json(self):
        return {self.algebra.key_name(k): rational_str(c) for k, c in self.sorted_items()}

    @staticmethod
    def from_json(algebra, data):
        coeffs = {}
        for name, c in data.items():
            k = algebra.key_from_name(name)
            coeffs[k] = coeffs.get(k, Fraction(0)) + rational(c)
        return Vector(algebra, coeffs)
