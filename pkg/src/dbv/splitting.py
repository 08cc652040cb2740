"""Classical homology, adapted decompositions, lifting, and degeneration.

The central object is an adapted decomposition V = B (+) H_rep (+) C per
degree, where B = im Q, H_rep is a chosen set of homology representatives,
and C is a complement of ker Q mapped bijectively onto the next B by Q.
Everything downstream -- the hbar-lifting of classes, the degeneration
verdict for the hbar-filtration spectral sequence, the quantum splitting
beta, and the obstruction grid -- is driven by this decomposition.

Lifting a class h means finding gamma = gamma_0 + hbar gamma_1 + ... with
K(gamma) = 0, i.e. solving Q(gamma_{j+1}) = -Delta(gamma_j) stage by stage,
with the freedom to re-choose each gamma_j inside its coset.  Deciding
obstructions honestly requires searching the whole affine space of choices,
so the finite backend solves one affine linear system per stage rather than
lifting greedily; on a Z-graded algebra with degrees in a finite window the
corrections vanish identically past a computable stage, which makes the
exact (all orders of hbar) verdict decidable.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, polys
from .errors import DegenerationRefusedError, PreconditionError
from .scalars import rational_str
from .series import Monomial, Series
from .vectors import Vector


@dataclass
class HomologyClass:
    name: str
    degree: int
    representative: Vector

    def to_json(self):
        return {
            "class": self.name,
            "degree": self.degree,
            "representative": self.representative.to_json(),
        }


class HomologyBasis:
    """Ordered homology classes; the order fixes the t^i numbering."""

    def __init__(self, classes):
        self.classes = list(classes)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    def by_name(self, name):
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def dimensions(self):
        dims = {}
        for c in self.classes:
            dims[c.degree] = dims.get(c.degree, 0) + 1
        return dims

    def to_json(self):
        return [c.to_json() for c in self.classes]


# ---------------------------------------------------------------------------
# adapted decompositions
# ---------------------------------------------------------------------------


class FiniteAdaptedDecomposition:
    """V = im Q (+) H_rep (+) C for the structure-constant backend.

    Built once per algebra by exact Gaussian elimination, degree by degree.
    Representatives are echelon-form pivots of ker Q modulo im Q with
    lowest-index pivots, so outputs are deterministic.
    """

    def __init__(self, algebra, representative_override=None):
        self.algebra = algebra
        self.degrees = algebra.degrees()
        self._keys = {d: algebra.keys_of_degree(d) for d in self.degrees}
        self._build(representative_override or {})

    # dense coordinates of the degree-d component of a vector
    def _dense(self, v, d):
        keys = self._keys.get(d, [])
        return [v.coeffs.get(k, Fraction(0)) for k in keys]

    def _vector(self, row, d):
        keys = self._keys.get(d, [])
        return Vector(self.algebra, {k: c for k, c in zip(keys, row)})

    def _q_matrix(self, d):
        """Rows indexed by degree d+1 keys, columns by degree d keys."""
        src = self._keys.get(d, [])
        dst = self._keys.get(d + 1, [])
        images = [self._dense(self.algebra.q_key(k), d + 1) for k in src]
        return [[images[j][r] for j in range(len(src))] for r in range(len(dst))]

    def _build(self, override):
        self._b_rows = {}
        self._b_pivots = {}
        self._h_rows = {}
        self._h_names = {}
        self._c_rows = {}
        self._split_inverse = {}
        classes = []
        for d in self.degrees:
            src = self._keys[d]
            n = len(src)
            # B^d = im(Q: V^{d-1} -> V^d)
            below = self._keys.get(d - 1, [])
            image_rows = [self._dense(self.algebra.q_key(k), d) for k in below]
            b_rows, b_pivots = linalg.rref(image_rows)
            self._b_rows[d], self._b_pivots[d] = b_rows, b_pivots
            # ker Q^d
            ker_rows = linalg.nullspace(self._q_matrix(d), n)
            ker_ech, _ = linalg.rref(ker_rows)
            # representatives: extend the B echelon basis inside ker Q
            acc_rows, acc_pivots = list(b_rows), list(b_pivots)
            h_rows, h_names = [], []
            for row in ker_ech:
                residue, _ = linalg.reduce_against(acc_rows, acc_pivots, row)
                lead = next((i for i, x in enumerate(residue) if x != 0), None)
                if lead is None:
                    continue
                residue = [x / residue[lead] for x in residue]
                h_rows.append(residue)
                h_names.append(self.algebra.key_name(src[lead]))
                acc_rows, acc_pivots = linalg.rref(acc_rows + [residue])
            self._h_rows[d], self._h_names[d] = h_rows, h_names
            for name, row in zip(h_names, h_rows):
                rep = self._vector(row, d)
                classes.append(HomologyClass(f"[{name}]", d, rep))
        # second pass: the complement C^d needs B^{d+1}, built above
        for d in self.degrees:
            q_rows = self._q_matrix(d)
            c_rows = []
            for b_next in self._b_rows.get(d + 1, []):
                sol = linalg.solve(q_rows, b_next)
                if sol is None:
                    raise AssertionError("B^{d+1} vector without preimage")
                c_rows.append(sol)
            self._c_rows[d] = c_rows
        # apply representative overrides (coset re-choices from lifting)
        if override:
            for d in self.degrees:
                names = [f"[{n}]" for n in self._h_names[d]]
                for i, full_name in enumerate(names):
                    if full_name in override:
                        self._h_rows[d][i] = self._dense(override[full_name], d)
            classes = []
            for d in self.degrees:
                for name, row in zip(self._h_names[d], self._h_rows[d]):
                    classes.append(HomologyClass(f"[{name}]", d, self._vector(row, d)))
        self.homology = HomologyBasis(classes)
        # split solver: inverse of the column matrix [B | H | C] per degree
        for d in self.degrees:
            n = len(self._keys[d])
            cols = self._b_rows[d] + self._h_rows[d] + self._c_rows[d]
            if len(cols) != n:
                raise AssertionError(
                    f"decomposition at degree {d} has {len(cols)} parts for dim {n}"
                )
            matrix = [[cols[j][r] for j in range(n)] for r in range(n)]
            inverse = []
            for r in range(n):
                e = linalg.zeros(n)
                e[r] = Fraction(1)
                col = linalg.solve(matrix, e)
                if col is None:
                    raise AssertionError(f"decomposition at degree {d} is singular")
                inverse.append(col)
            # inverse stored column-wise: coords(v) = sum_r v[r] * inverse[r]
            self._split_inverse[d] = inverse

    def with_representatives(self, new_reps):
        """Same B and C, representatives replaced inside their cosets."""
        for name, vec in new_reps.items():
            old = self.homology.by_name(name)
            diff = vec - old.representative
            d = old.degree
            if not diff.is_zero():
                if linalg.in_span(
                    self._b_rows[d], self._b_pivots[d], self._dense(diff, d)
                ) is None:
                    raise PreconditionError(
                        f"replacement representative for {name} is not in the same coset"
                    )
        return FiniteAdaptedDecomposition(self.algebra, representative_override=new_reps)

    def _coords(self, v, d):
        dense = self._dense(v, d)
        n = len(dense)
        coords = [Fraction(0)] * n
        for r, x in enumerate(dense):
            if x != 0:
                col = self._split_inverse[d][r]
                coords = [a + x * b for a, b in zip(coords, col)]
        return coords

    def split(self, v):
        """v = b + h + c with b in im Q, h in span(H_rep), c in C."""
        b = Vector.zero(self.algebra)
        h = Vector.zero(self.algebra)
        c = Vector.zero(self.algebra)
        for d, part in v.homogeneous_parts():
            coords = self._coords(part, d)
            nb, nh = len(self._b_rows[d]), len(self._h_rows[d])
            for i, x in enumerate(coords[:nb]):
                if x != 0:
                    b = b + self._vector(self._b_rows[d][i], d).scale(x)
            for i, x in enumerate(coords[nb : nb + nh]):
                if x != 0:
                    h = h + self._vector(self._h_rows[d][i], d).scale(x)
            for i, x in enumerate(coords[nb + nh :]):
                if x != 0:
                    c = c + self._vector(self._c_rows[d][i], d).scale(x)
        return b, h, c

    def h_coords(self, v):
        """Coordinates of the H_rep part of v, as {class name: coefficient}."""
        out = {}
        for d, part in v.homogeneous_parts():
            coords = self._coords(part, d)
            nb, nh = len(self._b_rows[d]), len(self._h_rows[d])
            for name, x in zip(self._h_names[d], coords[nb : nb + nh]):
                if x != 0:
                    out[f"[{name}]"] = x
        return out

    def q_preimage(self, b):
        """The unique c in C with Q(c) = b, for b in im Q."""
        out = Vector.zero(self.algebra)
        for d, part in b.homogeneous_parts():
            dense = self._dense(part, d)
            coords = linalg.in_span(self._b_rows[d], self._b_pivots[d], dense)
            if coords is None:
                raise PreconditionError("q_preimage called on a vector outside im Q")
            for x, c_row in zip(coords, self._c_rows[d - 1]):
                if x != 0:
                    out = out + self._vector(c_row, d - 1).scale(x)
        return out

    def class_of(self, v):
        """Homology class coordinates of a Q-closed vector (h-part coords)."""
        b, h, c = self.split(v)
        if not c.is_zero():
            raise PreconditionError("class_of called on a vector that is not Q-closed")
        return self.h_coords(h)

    def verification_samples(self, limit=None):
        b_samples, h_samples, c_samples = [], [], []
        for d in self.degrees:
            b_samples += [self._vector(r, d) for r in self._b_rows[d]]
            h_samples += [self._vector(r, d) for r in self._h_rows[d]]
            c_samples += [self._vector(r, d) for r in self._c_rows[d]]
        return b_samples, h_samples, c_samples

    # degree window data used by the lifting system
    def space_dim(self, d):
        return len(self._keys.get(d, []))

    def min_degree(self):
        return min(self.degrees)

    def keys_of_degree(self, d):
        return self._keys.get(d, [])

    def b_rows(self, d):
        return self._b_rows.get(d, [])


class LGAdaptedDecomposition:
    """Adapted decomposition of the polynomial backend, via exact division.

    Degree 0: k[x] = W' k[x] (+) span{1, x, .., x^{deg W' - 1}}; the first
    summand is im Q, the quotient basis realizes the Jacobian ring
    k[x]/(W'), and ker Q is all of k[x] so C^0 = 0.
    Degree -1: Q is injective on k[x] eta (W' != 0), so everything is C.
    """

    def __init__(self, algebra):
        self.algebra = algebra
        self.w_prime = algebra.w_prime
        self._h_dim = polys.degree(self.w_prime)
        classes = [
            HomologyClass(
                f"[{algebra.key_name((k, False))}]",
                0,
                algebra.basis_vector((k, False)),
            )
            for k in range(self._h_dim)
        ]
        self.homology = HomologyBasis(classes)

    def with_representatives(self, new_reps):
        for name, vec in new_reps.items():
            if vec != self.homology.by_name(name).representative:
                raise PreconditionError("polynomial backend representatives are fixed")
        return self

    def split(self, v):
        f, g = self.algebra.parts(v)
        q, r = polys.divmod_poly(f, self.w_prime)
        b = self.algebra.from_parts(polys.mul(q, self.w_prime))
        h = self.algebra.from_parts(r)
        c = self.algebra.from_parts({}, g)
        return b, h, c

    def h_coords(self, v):
        f, _ = self.algebra.parts(v)
        _, r = polys.divmod_poly(f, self.w_prime)
        return {
            f"[{self.algebra.key_name((k, False))}]": c
            for k, c in sorted(r.items())
        }

    def q_preimage(self, b):
        f, g = self.algebra.parts(b)
        if g:
            raise PreconditionError("q_preimage called on a vector outside im Q")
        q, r = polys.divmod_poly(f, self.w_prime)
        if r:
            raise PreconditionError("q_preimage called on a vector outside im Q")
        return self.algebra.from_parts({}, q)

    def class_of(self, v):
        f, g = self.algebra.parts(v)
        if g:
            raise PreconditionError("class_of called on a vector that is not Q-closed")
        return self.h_coords(v)

    def verification_samples(self, limit=None):
        w = self.algebra.x_window if limit is None else limit
        b = [
            self.algebra.from_parts(polys.mul(self.w_prime, {k: Fraction(1)}))
            for k in range(w + 1)
        ]
        h = [c.representative for c in self.homology]
        c = [self.algebra.from_parts({}, {k: Fraction(1)}) for k in range(w + 1)]
        return b, h, c


def compute_homology(algebra, window=None):
    """Exact homology of (V, Q) plus the adapted decomposition behind it.

    Finite backend: rational Gaussian elimination per degree.  Polynomial
    backend: H^0 = k[x]/(W') by polynomial division, H^{-1} = 0; errors out
    on a degenerate potential (W' = 0, impossible for degree >= 2).
    """
    from .algebras import LandauGinzburgDBV

    if isinstance(algebra, LandauGinzburgDBV):
        if not algebra.w_prime:
            raise PreconditionError("degenerate potential: W' = 0")
        dec = LGAdaptedDecomposition(algebra)
    else:
        dec = FiniteAdaptedDecomposition(algebra)
    return dec.homology, dec


# ---------------------------------------------------------------------------
# lifting classes to K-closed series
# ---------------------------------------------------------------------------


@dataclass
class Obstruction:
    """Witness that a class cannot be lifted past a given hbar stage."""

    stage: int           # first j with [Delta gamma_j] != 0 for every choice
    witness: Vector      # Delta gamma_j for one maximal partial lift
    witness_class: dict  # its nonzero homology coordinates

    def to_json(self):
        return {
            "stage": self.stage,
            "witness": self.witness.to_json(),
            "witness_class": {k: rational_str(v) for k, v in sorted(self.witness_class.items())},
        }


@dataclass
class Lift:
    """Result of lifting one homology class."""

    class_name: str
    series: Series            # gamma_0 + hbar gamma_1 + ... (variables = ())
    certified: int | None     # None: K(gamma) = 0 exactly; else valid mod hbar^{c+1}
    obstruction: Obstruction | None = None

    @property
    def exact(self):
        return self.certified is None

    def certified_at_least(self, j):
        return self.exact or self.certified >= j

    def hbar_poly(self):
        return [(m.hbar, v) for m, v in sorted(self.series.data.items(), key=lambda kv: kv[0].hbar)]

    def to_json(self):
        out = {
            "class": self.class_name,
            "certified_hbar_order": "exact" if self.exact else self.certified,
            "series": self.series.to_json(),
        }
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction.to_json()
        return out


def _series_from_stages(algebra, stages):
    data = {}
    for p, v in enumerate(stages):
        if not v.is_zero():
            data[Monomial((), p)] = v
    # stage vectors are exact data; `certified` on the Lift records how far
    # K-closedness is guaranteed
    return Series(algebra, (), data, 0, None)


def _finite_lift(algebra, dec, cls, allow_coset_moves=True):
    """Affine stage-by-stage solve over the full space of coset choices."""
    d0 = cls.degree
    h = cls.representative
    dmin = dec.min_degree()
    j_max = max(0, (d0 - dmin) // 2) if d0 >= dmin else 0
    keys = {j: dec.keys_of_degree(d0 - 2 * j) for j in range(j_max + 2)}
    dims = {j: len(keys[j]) for j in keys}
    b_rows0 = dec.b_rows(d0)

    def dense(v, d):
        ks = dec.keys_of_degree(d)
        return [v.coeffs.get(k, Fraction(0)) for k in ks]

    def op_columns(op, d):
        """Columns of a linear map on the degree-d basis, as dense images."""
        return [op(algebra.basis_vector(k)) for k in dec.keys_of_degree(d)]

    def solve_stage(s, final, coset_free):
        """System for gamma_0..gamma_s; returns stage vectors or None.

        Unknowns: u (coset coordinates of gamma_0 over the B basis, if
        allowed) then the coordinates of gamma_1..gamma_s.  Constraints:
        Q gamma_{j+1} + Delta gamma_j = 0 for j < s, plus Delta gamma_s = 0
        when `final` (the exact, all-orders condition).
        """
        nb = len(b_rows0) if coset_free else 0
        offsets = [0, nb]
        for j in range(1, s + 1):
            offsets.append(offsets[-1] + dims[j])
        nvars = offsets[-1]
        rows, rhs = [], []

        def add_block(j):
            """Constraint at hbar^{j+1}: Q gamma_{j+1} + Delta gamma_j = 0
            (gamma_{s+1} = 0 when j = s)."""
            out_d = d0 - 2 * j - 1
            out_keys = dec.keys_of_degree(out_d)
            if not out_keys:
                return
            n_out = len(out_keys)
            block = [linalg.zeros(nvars) for _ in range(n_out)]
            const = [Fraction(0)] * n_out
            # Delta gamma_j
            if j == 0:
                dh = dense(algebra.Delta(h), out_d)
                for r in range(n_out):
                    const[r] -= dh[r]
                if coset_free and nb:
                    for i, b_row in enumerate(b_rows0):
                        img = algebra.Delta(
                            Vector(algebra, dict(zip(dec.keys_of_degree(d0), b_row)))
                        )
                        col = dense(img, out_d)
                        for r in range(n_out):
                            block[r][offsets[0] + i] = col[r]
            else:
                for i, img in enumerate(op_columns(algebra.Delta, d0 - 2 * j)):
                    col = dense(img, out_d)
                    for r in range(n_out):
                        block[r][offsets[j] + i] = col[r]
            # Q gamma_{j+1}
            if j + 1 <= s:
                for i, img in enumerate(op_columns(algebra.Q, d0 - 2 * (j + 1))):
                    col = dense(img, out_d)
                    for r in range(n_out):
                        block[r][offsets[j + 1] + i] = col[r]
            rows.extend(block)
            rhs.extend(const)

        for j in range(s):
            add_block(j)
        if final:
            add_block(s)
        sol = linalg.solve(rows, rhs) if rows else ([Fraction(0)] * nvars)
        if sol is None:
            return None
        stages = []
        g0 = h
        if coset_free and nb:
            for i, b_row in enumerate(b_rows0):
                if sol[offsets[0] + i] != 0:
                    g0 = g0 + Vector(
                        algebra, dict(zip(dec.keys_of_degree(d0), b_row))
                    ).scale(sol[offsets[0] + i])
        stages.append(g0)
        for j in range(1, s + 1):
            coeffs = {
                k: sol[offsets[j] + i]
                for i, k in enumerate(keys[j])
                if sol[offsets[j] + i] != 0
            }
            stages.append(Vector(algebra, coeffs))
        return stages

    # exact attempt, preferring to keep the chosen representative
    for coset_free in ((False, True) if allow_coset_moves else (False,)):
        stages = solve_stage(j_max, final=True, coset_free=coset_free)
        if stages is not None:
            return Lift(cls.name, _series_from_stages(algebra, stages), None)

    # obstructed: find the maximal certified stage and a witness
    best = [h]
    certified = 0
    for s in range(1, j_max + 1):
        stages = solve_stage(s, final=False, coset_free=allow_coset_moves)
        if stages is None:
            break
        best, certified = stages, s
    witness = algebra.Delta(best[-1])
    wclass = dec.class_of(witness)
    if not wclass:
        raise AssertionError("obstruction witness is exact; lifting logic is broken")
    return Lift(
        cls.name,
        _series_from_stages(algebra, best),
        certified,
        Obstruction(stage=certified, witness=witness, witness_class=wclass),
    )


def lift_to_K_closed(algebra, dec, cls, hbar_order=None):
    """Lift a homology class to a K-closed hbar-polynomial, or report the
    first genuinely unavoidable obstruction (searching all coset choices).

    `hbar_order` caps the certification requested by the caller; the analysis
    itself always runs to the exact verdict, which is decidable because the
    stage-j correction lives in degree deg(h) - 2j and the degree window is
    finite.
    """
    if isinstance(dec, LGAdaptedDecomposition):
        rep = cls.representative
        if not algebra.Delta(rep).is_zero():
            raise AssertionError("polynomial representatives are Delta-closed by construction")
        return Lift(cls.name, _series_from_stages(algebra, [rep]), None)
    return _finite_lift(algebra, dec, cls)


# ---------------------------------------------------------------------------
# degeneration verdict
# ---------------------------------------------------------------------------


@dataclass
class DegenerationReport:
    degenerate: bool
    requested_order: int | None   # None: exact (all hbar orders)
    certified_order: int | None   # None: exact; else min certified over classes
    lifts: dict                   # class name -> Lift

    def first_obstruction(self):
        for lift in self.lifts.values():
            if lift.obstruction is not None:
                return lift
        return None

    def to_json(self):
        return {
            "degenerate": self.degenerate,
            "requested_hbar_order": "exact" if self.requested_order is None else self.requested_order,
            "certified_hbar_order": "exact" if self.certified_order is None else self.certified_order,
            "classes": [self.lifts[k].to_json() for k in sorted(self.lifts)],
        }


def degeneration_check(algebra, dec=None, hbar_order=None):
    """Decide E_1-degeneration of the hbar-filtration spectral sequence.

    Degenerate (up to the requested order) iff every classical class lifts to
    a K-closed series (modulo hbar^{R+1}).  With the default hbar_order=None
    the verdict is exact: lifts either terminate or are obstructed at a
    provable stage.
    """
    if dec is None:
        _, dec = compute_homology(algebra)
    lifts = {}
    for cls in dec.homology:
        lifts[cls.name] = lift_to_K_closed(algebra, dec, cls, hbar_order=hbar_order)
    finite_orders = [l.certified for l in lifts.values() if not l.exact]
    certified = None if not finite_orders else min(finite_orders)
    if hbar_order is None:
        degenerate = all(l.exact for l in lifts.values())
    else:
        degenerate = all(l.certified_at_least(hbar_order) for l in lifts.values())
    return DegenerationReport(degenerate, hbar_order, certified, lifts)


# ---------------------------------------------------------------------------
# the quantum splitting beta
# ---------------------------------------------------------------------------


class QuantumSplitting:
    """A chain map beta: (V, Q) -> (V[[hbar]], K) with alpha . beta = id.

    Defined clause by clause on the adapted basis: identity on C, the lifted
    K-closed series on representatives, and K(beta(c)) = Qc + hbar Delta(c)
    on B = Q(C).  alpha . beta = id holds exactly; K beta = beta Q holds
    exactly on B (+) C and to the certified hbar order on representatives.
    """

    def __init__(self, algebra, dec, lifts, certified):
        self.algebra = algebra
        self.dec = dec
        self.lifts = lifts
        self.certified = certified  # None = exact chain map
        self._lift_polys = {name: lift.hbar_poly() for name, lift in lifts.items()}

    @property
    def homology(self):
        return self.dec.homology

    def certified_at_least(self, j):
        return self.certified is None or self.certified >= j

    def apply_poly(self, v):
        """beta(v) as a list of (hbar power, Vector) pairs."""
        b, h, c = self.dec.split(v)
        out = {}

        def add(p, w):
            if w.is_zero():
                return
            out[p] = out[p] + w if p in out else w

        add(0, b + c)
        if not b.is_zero():
            add(1, self.algebra.Delta(self.dec.q_preimage(b)))
        for name, coeff in self.dec.h_coords(h).items():
            for p, w in self._lift_polys[name]:
                add(p, w.scale(coeff))
        return sorted(out.items())

    def apply(self, v):
        """beta(v) as an exact hbar-polynomial series (no t variables).

        The values of beta are always exact; `certified` limits only the
        hbar order to which K beta = beta Q is guaranteed on representatives.
        """
        data = {Monomial((), p): w for p, w in self.apply_poly(v)}
        return Series(self.algebra, (), data, 0, None)

    def apply_to_series(self, s):
        return s.map_coefficients(self.apply_poly)

    def beta_alpha(self, s):
        """The projector beta . alpha on series (set hbar to zero, re-lift)."""
        return self.apply_to_series(s.set_hbar_zero())

    def _verify(self):
        A = self.algebra
        b_samples, h_samples, c_samples = self.dec.verification_samples()

        def check(name, series):
            if not series.is_zero():
                raise AssertionError(f"quantum splitting postcondition failed: {name}: {series!r}")

        for c in c_samples:
            check("beta(Qc) = K(beta(c))", self.apply(A.Q(c)) - A.K(self.apply(c)))
        for b in b_samples:
            check("K(beta(b)) = 0 on im Q", A.K(self.apply(b)))
        for cls in self.dec.homology:
            h = cls.representative
            # exact for exact lifts; otherwise zero modulo hbar^{certified+1}
            residual = A.K(self.apply(h))
            if self.certified is not None:
                residual = residual.truncate(hbar_order=self.certified)
            check("K(beta(h)) = 0 on representatives", residual)
        for v in b_samples + h_samples + c_samples:
            check("alpha . beta = id",
                  self.apply(v).set_hbar_zero() - Series.from_vector(A, (), v, 0, None))


def build_beta(algebra, dec, report=None, hbar_order=None):
    """Construct the quantum splitting from a degeneration analysis.

    Refuses when the spectral sequence does not degenerate (to the requested
    order): no chain splitting can exist then.  If lifting had to re-choose
    representatives inside their cosets, the decomposition is updated so that
    alpha . beta = id holds on the nose.
    """
    if report is None:
        report = degeneration_check(algebra, dec, hbar_order=hbar_order)
    if not report.degenerate:
        bad = report.first_obstruction()
        raise DegenerationRefusedError(
            f"spectral sequence does not degenerate: class {bad.class_name} is "
            f"obstructed at hbar stage {bad.obstruction.stage} "
            f"(witness class {sorted(bad.obstruction.witness_class)})"
        )
    new_reps = {}
    for name, lift in report.lifts.items():
        rep0 = lift.series.set_hbar_zero().constant_term()
        if rep0 != dec.homology.by_name(name).representative:
            new_reps[name] = rep0
    if new_reps:
        dec = dec.with_representatives(new_reps)
    certified = None if report.requested_order is None else report.requested_order
    splitting = QuantumSplitting(algebra, dec, report.lifts, certified)
    splitting._verify()
    return splitting


# ---------------------------------------------------------------------------
# the obstruction grid
# ---------------------------------------------------------------------------


VANISHES = "vanishes"
FAILS = "fails"
NOT_COMPUTED = "not-computed"


@dataclass
class ObstructionReport:
    """Status grid over (t-order n >= 1, hbar-order j >= 0) cells.

    Row n = 1 reproduces the degeneration verdict; rows n >= 2 record whether
    each exactness condition met while building the versal solution held.
    Cells beyond the solver's trusted truncation are marked not-computed.
    """

    t_order: int
    hbar_order: int
    cells: dict          # (n, j) -> status string
    witnesses: dict      # (n, j) -> witness json for failing cells

    def status(self, n, j):
        return self.cells.get((n, j), NOT_COMPUTED)

    @property
    def all_computed_vanish(self):
        return all(s != FAILS for s in self.cells.values())

    def to_json(self):
        rows = []
        for n in range(1, self.t_order + 1):
            row = {"t_order": n, "cells": []}
            for j in range(self.hbar_order + 1):
                cell = {"hbar": j, "status": self.status(n, j)}
                if (n, j) in self.witnesses:
                    cell["witness"] = self.witnesses[(n, j)]
                row["cells"].append(cell)
            rows.append(row)
        return {"t_order": self.t_order, "hbar_order": self.hbar_order, "rows": rows}


def obstruction_grid(algebra, t_order, hbar_order, dec=None):
    """Fill the first-quadrant obstruction array cell by cell.

    Row 1 comes from lifting each class; higher rows from running the
    versal solver and recording the exactness conditions it needed.
    """
    from .solver import best_effort_quantum_cells

    if dec is None:
        _, dec = compute_homology(algebra)
    report = degeneration_check(algebra, dec)
    cells, witnesses = {}, {}
    # row 1: a cell vanishes when every class lifts mod hbar^{j+1}
    for j in range(hbar_order + 1):
        blocking = [
            l for l in report.lifts.values() if not l.certified_at_least(j)
        ]
        if not blocking:
            cells[(1, j)] = VANISHES
        else:
            worst = min(blocking, key=lambda l: (l.certified, l.class_name))
            cells[(1, j)] = FAILS
            witnesses[(1, j)] = {
                "class": worst.class_name,
                "obstruction": worst.obstruction.to_json(),
            }
    # rows >= 2: run the solver (with an exact beta when available, else the
    # best partial one) and record how far each order's division chain is trusted
    if len(dec.homology) == 0:
        for n in range(2, t_order + 1):
            for j in range(hbar_order + 1):
                cells[(n, j)] = VANISHES
        return ObstructionReport(t_order, hbar_order, cells, witnesses)
    if report.degenerate:
        splitting = build_beta(algebra, dec, report)
    else:
        finite_orders = [l.certified for l in report.lifts.values() if not l.exact]
        cap = min(finite_orders)
        capped = degeneration_check(algebra, dec, hbar_order=cap)
        splitting = build_beta(algebra, dec, capped, hbar_order=cap)
    reliability = best_effort_quantum_cells(algebra, splitting, t_order, hbar_order)
    for n in range(2, t_order + 1):
        trusted = reliability.get(n)
        for j in range(hbar_order + 1):
            if trusted is None:
                cells[(n, j)] = NOT_COMPUTED
            elif trusted == "all" or j <= trusted:
                cells[(n, j)] = VANISHES
            else:
                cells[(n, j)] = NOT_COMPUTED
    return ObstructionReport(t_order, hbar_order, cells, witnesses)


# ---------------------------------------------------------------------------
# the Q-Delta lemma checker
# ---------------------------------------------------------------------------


@dataclass
class QDeltaReport:
    holds: bool                # the standard four-space chain, all degrees
    literal_matches_standard: bool
    degrees: dict              # degree -> space dims and equality verdicts
    witnesses: list

    def to_json(self):
        return {
            "holds": self.holds,
            "literal_matches_standard": self.literal_matches_standard,
            "degrees": {
                str(d): info for d, info in sorted(self.degrees.items())
            },
            "witnesses": self.witnesses,
        }


def qdelta_lemma_check(algebra, window=None):
    """Check im(Q Delta) = im(Delta Q) = im(Q) n ker(Delta) = im(Delta) n ker(Q).

    The final space in the chain is the standard one; the variant with
    ker(Delta) in its place (which is just im(Delta), as Delta squares to
    zero) is computed and reported alongside, labeled "literal".  Witnesses
    are vectors exhibiting each failed equality.  On the polynomial backend
    all spaces are computed inside the x-degree window, which the report
    records.
    """
    from .algebras import LandauGinzburgDBV

    is_lg = isinstance(algebra, LandauGinzburgDBV)
    if is_lg:
        w = algebra.x_window if window is None else window
        shift = polys.degree(algebra.w_prime)
        ambient = {
            0: [(k, False) for k in range(w + 1)],
            -1: [(k, True) for k in range(w + 1)],
        }
        domains = {
            "Q": {0: [(k, True) for k in range(max(0, w - shift) + 1)], -1: []},
            "Delta": {0: [(k, True) for k in range(w + 2)], -1: []},
            "QDelta": {0: [], -1: []},
            "DeltaQ": {0: [], -1: []},
        }
    else:
        w = None
        ambient = {d: algebra.keys_of_degree(d) for d in algebra.degrees()}
        domains = {
            "Q": {d: algebra.keys_of_degree(d - 1) for d in ambient},
            "Delta": {d: algebra.keys_of_degree(d + 1) for d in ambient},
            "QDelta": {d: algebra.keys_of_degree(d) for d in ambient},
            "DeltaQ": {d: algebra.keys_of_degree(d) for d in ambient},
        }

    def dense(v, keys):
        return [v.coeffs.get(k, Fraction(0)) for k in keys]

    def image_rows(op, dom_keys, amb_keys):
        rows = [dense(op(algebra.basis_vector(k)), amb_keys) for k in dom_keys]
        return linalg.rref(rows)[0]

    def kernel_rows(op, amb_keys):
        mat = []
        images = [op(algebra.basis_vector(k)) for k in amb_keys]
        out_keys = sorted(
            {k for img in images for k in img.coeffs}, key=algebra.key_sort_key
        )
        for r in out_keys:
            mat.append([img.coeffs.get(r, Fraction(0)) for img in images])
        return linalg.rref(linalg.nullspace(mat, len(amb_keys)))[0]

    degrees_info = {}
    witnesses = []
    holds = True
    literal_ok = True
    for d, amb in sorted(ambient.items()):
        if not amb:
            continue
        QD = lambda v: algebra.Q(algebra.Delta(v))
        DQ = lambda v: algebra.Delta(algebra.Q(v))
        im_qd = image_rows(QD, domains["QDelta"][d], amb)
        im_dq = image_rows(DQ, domains["DeltaQ"][d], amb)
        im_q = image_rows(algebra.Q, domains["Q"][d], amb)
        im_delta = image_rows(algebra.Delta, domains["Delta"][d], amb)
        ker_q = kernel_rows(algebra.Q, amb)
        ker_delta = kernel_rows(algebra.Delta, amb)
        s3 = linalg.span_intersection(im_q, ker_delta)
        s4 = linalg.span_intersection(im_delta, ker_q)
        s4_literal = linalg.span_intersection(im_delta, ker_delta)
        spaces = [("im(Q Delta)", im_qd), ("im(Delta Q)", im_dq),
                  ("im(Q) n ker(Delta)", s3), ("im(Delta) n ker(Q)", s4)]
        info = {name: len(rows) for name, rows in spaces}
        info["im(Delta) n ker(Delta) [literal]"] = len(s4_literal)
        eq_chain = True
        for (name_a, a), (name_b, b) in zip(spaces, spaces[1:]):
            if not linalg.spans_equal(a, b):
                eq_chain = False
                wv = linalg.span_difference_witness(a, b) or linalg.span_difference_witness(b, a)
                side = f"{name_a} vs {name_b}"
                witness_vec = Vector(algebra, dict(zip(amb, wv)))
                witnesses.append({
                    "degree": d,
                    "equality": side,
                    "witness": witness_vec.to_json(),
                })
        if not linalg.spans_equal(s4, s4_literal):
            literal_ok = False
            wv = linalg.span_difference_witness(s4_literal, s4) or linalg.span_difference_witness(s4, s4_literal)
            witnesses.append({
                "degree": d,
                "equality": "literal im(Delta) n ker(Delta) vs standard im(Delta) n ker(Q)",
                "witness": Vector(algebra, dict(zip(amb, wv))).to_json(),
            })
        info["equalities_hold"] = eq_chain
        degrees_info[d] = info
        holds = holds and eq_chain
    report = QDeltaReport(holds, literal_ok, degrees_info, witnesses)
    if is_lg:
        for info in report.degrees.values():
            info["window_note"] = f"computed within x-degree <= {w}"
    return report
