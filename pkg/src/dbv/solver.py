"""Versal solvers for the classical and quantum master equations.

Classical (always succeeds on BV data): with closed representatives gamma_i,

    Gamma = log(1 + sum_i gamma_i t^i)

solves D(Gamma) + (1/2)[Gamma, Gamma] = 0 identically, because
D(e^Gamma) = D(1 + sum gamma_i t^i) = 0 and D(e^g) = (D g + (1/2)[g,g]) e^g.

Quantum (needs the spectral sequence to degenerate): with a splitting beta,

    Gamma_1 = sum_i beta(gamma_i) t^i,

and each higher t-order n is corrected by the division chain

    y   = ord_n(hbar^n e^{Gamma/hbar})        (no negative hbar powers)
    y_k = ((1 - beta alpha)/hbar)^k y,        K(y_{n-k}) = hbar^{n-k-1} x
    Gamma_n = -y_1,                           K(Gamma_n) = -x

where x = ord_n((1/2)[Gamma, Gamma]).  Every identity the construction rests
on is asserted at runtime, so a Koszul sign error anywhere upstream is caught
at the first failing step rather than silently corrupting the output.  With
an exact splitting all arithmetic here is exact hbar-polynomial arithmetic
and the residual of the result vanishes identically modulo t^{N+1}.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import (
    DegenerationRefusedError,
    HbarDivisionError,
    PreconditionError,
    SolverInvariantError,
)
from .series import DeformationVariable, Monomial, Series
from .splitting import compute_homology, lift_to_K_closed
from .vectors import Vector

FLAVORS = ("quantum", "classical-q", "classical-delta", "classical-q-plus-delta")


def flavor_differential(algebra, flavor):
    if flavor == "quantum":
        return algebra.K
    if flavor == "classical-q":
        return lambda s: s.apply_linear(algebra.Q)
    if flavor == "classical-delta":
        return lambda s: s.apply_linear(algebra.Delta)
    if flavor == "classical-q-plus-delta":
        return lambda s: s.apply_linear(algebra.q_plus_delta)
    raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


def flavor_vector_differential(algebra, flavor):
    if flavor == "classical-q":
        return algebra.Q
    if flavor == "classical-delta":
        return algebra.Delta
    if flavor == "classical-q-plus-delta":
        return algebra.q_plus_delta
    raise ValueError(f"no single vector differential for flavor {flavor!r}")


def variables_for(representatives):
    """t^i dual to the representatives: deg t^i = -deg gamma_i, so that the
    versal series is homogeneous of total degree zero."""
    out = []
    for i, rep in enumerate(representatives, start=1):
        try:
            d = rep.degree()
        except ValueError as exc:
            raise PreconditionError(f"representative {i} must be homogeneous: {exc}") from exc
        out.append(DeformationVariable(i, -d))
    return tuple(out)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


@dataclass
class Residual:
    """D(Gamma) + (1/2)[Gamma, Gamma] plus a per-(t, hbar) zero summary."""

    flavor: str
    value: Series

    def is_zero(self):
        return self.value.is_zero()

    def cell_summary(self):
        """(t-order, hbar-order) -> False for each nonzero stored cell."""
        cells = {}
        for n in range(self.value.t_order + 1):
            part = self.value.ord_n(n)
            for m, v in part.data.items():
                cells[(n, m.hbar)] = False
        return cells

    def first_nonzero_cell(self):
        cells = sorted(self.cell_summary())
        return cells[0] if cells else None

    def hbar_stratification(self):
        """The residual split by hbar power: the tower of equations one gets
        expanding the quantum master equation in powers of hbar."""
        strata = {}
        for m, v in self.value.data.items():
            strata.setdefault(m.hbar, {})[Monomial(m.tvars, 0)] = v
        return {
            p: Series(self.value.algebra, self.value.variables, data,
                      self.value.t_order, self.value.hbar_order)
            for p, data in sorted(strata.items())
        }

    def to_json(self):
        return {
            "flavor": self.flavor,
            "is_zero": self.is_zero(),
            "nonzero_cells": [list(c) for c in sorted(self.cell_summary())],
            "value": self.value.to_json(),
        }


def residual(algebra, gamma, flavor):
    """Exact truncated evaluation of D(Gamma) + (1/2)[Gamma, Gamma]."""
    if not gamma.ord_n(0).is_zero():
        raise PreconditionError("versal series must have zero constant term")
    if not gamma.is_homogeneous(0):
        raise PreconditionError("versal series must be homogeneous of degree 0")
    D = flavor_differential(algebra, flavor)
    value = D(gamma) + gamma.bracket(gamma).scale(Fraction(1, 2))
    return Residual(flavor, value)


# ---------------------------------------------------------------------------
# versal solutions
# ---------------------------------------------------------------------------


@dataclass
class VersalSolution:
    algebra: object
    flavor: str
    gamma: Series
    representatives: list        # HomologyClass list fixing the t^i numbering
    t_order: int
    hbar_order: int | None       # None: exact in hbar

    def residual(self):
        return residual(self.algebra, self.gamma, self.flavor)

    def check_versality(self):
        """ord_1(Gamma) at hbar = 0 must be exactly sum_i gamma_i t^i."""
        lead = self.gamma.ord_n(1).set_hbar_zero()
        expect = Series.zero(self.algebra, self.gamma.variables,
                             self.gamma.t_order, self.gamma.hbar_order)
        for i, cls in enumerate(self.representatives, start=1):
            expect = expect.term([i], cls.representative)
        return (lead - expect).is_zero()

    def to_json(self):
        return {
            "format": "dbv-solution",
            "algebra_hash": self.algebra.content_hash(),
            "flavor": self.flavor,
            "t_order": self.t_order,
            "hbar_order": self.hbar_order,
            "representatives": [c.to_json() for c in self.representatives],
            "series": self.gamma.to_json(),
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def solution_from_json(algebra, data):
    from .splitting import HomologyClass

    if data.get("format") != "dbv-solution":
        raise PreconditionError("not a solution file")
    if data.get("algebra_hash") != algebra.content_hash():
        raise PreconditionError("solution file was produced for a different algebra")
    reps = [
        HomologyClass(r["class"], int(r["degree"]),
                      Vector.from_json(algebra, r["representative"]))
        for r in data["representatives"]
    ]
    gamma = Series.from_json(algebra, data["series"])
    return VersalSolution(
        algebra, data["flavor"], gamma, reps,
        int(data["t_order"]),
        None if data.get("hbar_order") is None else int(data["hbar_order"]),
    )


# ---------------------------------------------------------------------------
# classical solver: the logarithm construction
# ---------------------------------------------------------------------------


def classical_solve_log(algebra, representatives, t_order, flavor="classical-delta"):
    """Versal Maurer-Cartan solution Gamma = log(1 + sum gamma_i t^i).

    `representatives` may be HomologyClass objects or bare vectors; each must
    be homogeneous and closed under the chosen differential (Delta or
    Q + Delta).  The residual is computed and asserted to vanish identically
    at all computed orders before returning.
    """
    if flavor not in ("classical-delta", "classical-q-plus-delta"):
        raise ValueError("the log construction applies to flavors "
                         "'classical-delta' and 'classical-q-plus-delta'")
    from .splitting import HomologyClass

    classes = []
    for i, rep in enumerate(representatives, start=1):
        if isinstance(rep, HomologyClass):
            classes.append(rep)
        else:
            classes.append(HomologyClass(f"[g{i}]", rep.degree(), rep))
    D = flavor_vector_differential(algebra, flavor)
    for cls in classes:
        if not D(cls.representative).is_zero():
            raise PreconditionError(
                f"representative {cls.name} is not closed under the chosen differential"
            )
    variables = variables_for([c.representative for c in classes]) if classes else ()
    u = Series.unit(algebra, variables, t_order, 0)
    for i, cls in enumerate(classes, start=1):
        u = u.term([i], cls.representative)
    gamma = u.log()
    solution = VersalSolution(algebra, flavor, gamma, classes, t_order, 0)
    res = solution.residual()
    if not res.is_zero():
        raise SolverInvariantError(
            f"log construction produced a nonzero residual at {res.first_nonzero_cell()}"
        )
    if not solution.check_versality():
        raise SolverInvariantError("log construction broke the versality initial condition")
    return solution


def closed_representatives(algebra, flavor):
    """Homogeneous representatives of the homology of Delta or Q + Delta.

    Used by the command-line front end to seed the log construction.  On the
    polynomial backend these are known in closed form ([eta] for Delta; the
    Jacobian-ring monomials for Q + Delta, since every element of
    im(Q + Delta) = {W'g + g'} has degree >= deg W').  On the finite backend
    Delta is degree-homogeneous and handled per degree; Q + Delta is not, so
    its homology is computed ungraded and representatives are required to
    come out homogeneous (a Z-graded carrier cannot give the inhomogeneous
    ones a coordinate degree).
    """
    from . import polys
    from .algebras import LandauGinzburgDBV

    if isinstance(algebra, LandauGinzburgDBV):
        if flavor == "classical-delta":
            return [algebra.from_parts({}, {0: Fraction(1)})]
        d = polys.degree(algebra.potential)
        return [algebra.basis_vector((k, False)) for k in range(d - 1)]

    def dense(v, keys):
        return [v.coeffs.get(k, Fraction(0)) for k in keys]

    def echelon_quotient(im_rows, ker_rows, keys):
        """Extend the image echelon basis inside the kernel; the new rows
        are the representatives."""
        acc_rows, acc_pivots = linalg.rref(im_rows)
        reps = []
        for row in linalg.rref(ker_rows)[0]:
            residue, _ = linalg.reduce_against(acc_rows, acc_pivots, row)
            lead = next((i for i, x in enumerate(residue) if x != 0), None)
            if lead is None:
                continue
            residue = [x / residue[lead] for x in residue]
            reps.append(Vector(algebra, dict(zip(keys, residue))))
            acc_rows, acc_pivots = linalg.rref(acc_rows + [residue])
        return reps

    D = flavor_vector_differential(algebra, flavor)
    if flavor == "classical-delta":
        out = []
        for deg in algebra.degrees():
            keys = algebra.keys_of_degree(deg)
            sources = algebra.keys_of_degree(deg + 1)
            im_rows = [dense(D(algebra.basis_vector(k)), keys) for k in sources]
            out_keys = algebra.keys_of_degree(deg - 1)
            mat = [
                [D(algebra.basis_vector(k)).coeffs.get(r, Fraction(0)) for k in keys]
                for r in out_keys
            ]
            ker_rows = linalg.nullspace(mat, len(keys))
            out.extend(echelon_quotient(im_rows, ker_rows, keys))
        return out
    # Q + Delta: ungraded elimination over the whole basis
    keys = algebra.slice_keys()
    im_rows = [dense(D(algebra.basis_vector(k)), keys) for k in keys]
    mat = [
        [D(algebra.basis_vector(k)).coeffs.get(r, Fraction(0)) for k in keys]
        for r in keys
    ]
    ker_rows = linalg.nullspace(mat, len(keys))
    reps = echelon_quotient(im_rows, ker_rows, keys)
    for rep in reps:
        try:
            rep.degree()
        except ValueError as exc:
            raise PreconditionError(
                "H(Q + Delta) has no homogeneous representative basis here; "
                f"a Z-graded versal series cannot be formed: {exc}"
            ) from exc
    return reps


# ---------------------------------------------------------------------------
# quantum solver: beta iteration
# ---------------------------------------------------------------------------


def _order_n_exponential_piece(gamma, n):
    """ord_n(hbar^n e^{Gamma/hbar}) = sum_{k=1..n} hbar^{n-k}/k! ord_n(Gamma^k).

    Gamma has zero constant term, so only k <= n contributes and no negative
    hbar powers appear.
    """
    out = Series.zero(gamma.algebra, gamma.variables, gamma.t_order, gamma.hbar_order)
    power = Series.unit(gamma.algebra, gamma.variables, gamma.t_order, gamma.hbar_order)
    fact = 1
    for k in range(1, n + 1):
        power = power.mul(gamma)
        fact *= k
        piece = power.ord_n(n)
        if piece.is_zero():
            continue
        out = out + piece.mul_hbar(n - k).scale(Fraction(1, fact))
    return out


# count of proof-step identities asserted at runtime (inspectable by tests)
RUNTIME_IDENTITIES_CHECKED = 0


def _assert_zero(series, label):
    global RUNTIME_IDENTITIES_CHECKED
    RUNTIME_IDENTITIES_CHECKED += 1
    if not series.is_zero():
        raise SolverInvariantError(f"runtime identity failed: {label}: {series!r}")


def quantum_solve(algebra, splitting, t_order, hbar_order=None):
    """Versal solution of the quantum master equation via the splitting.

    Requires the splitting's chain-map certificate to cover the internal
    working order: each t-order-n step divides by hbar up to n-1 times, each
    division consuming one trusted hbar order, so a finite certificate R
    supports hbar order R - (N - 1) in the answer.  An exact splitting (the
    degenerate case) supports everything: the result's residual is then
    identically zero modulo t^{N+1}, at every power of hbar.
    """
    N = int(t_order)
    if N < 1:
        raise ValueError("t_order must be >= 1")
    needed = None if hbar_order is None else hbar_order + N
    if splitting.certified is not None:
        if needed is None or splitting.certified < needed:
            raise DegenerationRefusedError(
                f"splitting certified only to hbar order {splitting.certified}; "
                f"solving to t-order {N} at hbar order "
                f"{'exact' if hbar_order is None else hbar_order} needs "
                f"{'an exact splitting' if needed is None else f'order {needed}'}"
            )
    classes = list(splitting.homology)
    reps = [c.representative for c in classes]
    variables = variables_for(reps) if reps else ()
    working_order = None if splitting.certified is None else splitting.certified
    gamma = Series.zero(algebra, variables, N, working_order)
    for i, cls in enumerate(classes, start=1):
        for p, w in splitting.apply_poly(cls.representative):
            gamma = gamma.term([i], w, hbar=p)
    krem = algebra.K(gamma) if reps else gamma
    _assert_zero(krem, "K(Gamma_1) = 0")

    for n in range(2, N + 1):
        x = gamma.bracket(gamma).scale(Fraction(1, 2)).ord_n(n)
        y = _order_n_exponential_piece(gamma, n)
        _assert_zero(algebra.K(y) - x.mul_hbar(n - 1), "K(y) = hbar^{n-1} x")
        for k in range(1, n):
            bay = splitting.beta_alpha(y)
            _assert_zero(algebra.K(bay), "K(beta alpha y) = 0")
            diff = y - bay
            try:
                y = diff.hbar_divide(1)
            except HbarDivisionError as exc:
                raise SolverInvariantError(
                    f"(1 - beta alpha) y not divisible by hbar at t-order {n}: {exc}"
                ) from exc
            _assert_zero(algebra.K(y) - x.mul_hbar(n - 1 - k),
                         "K(y_{n-k}) = hbar^{n-k-1} x")
        gamma_n = -y
        _assert_zero(algebra.K(gamma_n) + x, "K(Gamma_n) = -x")
        gamma = gamma + gamma_n

    solution = VersalSolution(
        algebra, "quantum", gamma, classes, N,
        hbar_order if hbar_order is not None else None,
    )
    res = solution.residual()
    check = res.value if hbar_order is None else res.value.truncate(hbar_order=hbar_order)
    _assert_zero(check, "K(Gamma) + 1/2 [Gamma, Gamma] = 0")
    if not solution.check_versality():
        raise SolverInvariantError("versality initial condition failed")
    return solution


def best_effort_quantum_cells(algebra, splitting, t_order, hbar_order):
    """Run the induction as far as the splitting's certificate allows.

    Returns {t-order n: trusted hbar order}, where the value is "all" when
    the step was exact, an integer j when the step's exactness conditions
    were verified modulo hbar^{j+1}, and None when nothing at that order
    could be trusted.  Used to fill the rows n >= 2 of the obstruction grid.
    """
    N = int(t_order)
    classes = list(splitting.homology)
    reps = [c.representative for c in classes]
    variables = variables_for(reps) if reps else ()
    exact = splitting.certified is None
    working = None if exact else splitting.certified
    gamma = Series.zero(algebra, variables, N, working)
    for i, cls in enumerate(classes, start=1):
        for p, w in splitting.apply_poly(cls.representative):
            gamma = gamma.term([i], w, hbar=p)
    out = {}
    trusted = None if exact else splitting.certified
    for n in range(2, N + 1):
        if not exact and (trusted is None or trusted < 0):
            out[n] = None
            continue
        x = gamma.bracket(gamma).scale(Fraction(1, 2)).ord_n(n)
        if x.is_zero():
            # nothing to correct: Gamma_n = 0 is exact at this order
            out[n] = "all" if exact else trusted
            continue
        steps_needed = n - 1
        if not exact and trusted - steps_needed < 0:
            out[n] = None
            continue
        y = _order_n_exponential_piece(gamma, n)
        for k in range(1, n):
            y = (y - splitting.beta_alpha(y)).hbar_divide(1)
        gamma = gamma - y
        if not exact:
            trusted -= steps_needed
        out[n] = "all" if exact else trusted
    return out


# ---------------------------------------------------------------------------
# the conjugation identity (negative hbar powers, kept local)
# ---------------------------------------------------------------------------


class HbarLaurent:
    """hbar^{-offset} * (ordinary series): a truncated hbar-Laurent value.

    Negative hbar powers arise only while checking the conjugation identity;
    they are represented by an explicit offset so the public Series type
    never stores them.  Arithmetic is exact (Laurent polynomials in hbar,
    truncated in t only).
    """

    def __init__(self, offset, series):
        if offset < 0:
            series = series.mul_hbar(-offset)
            offset = 0
        low = min((m.hbar for m in series.data), default=offset)
        drop = min(offset, low)
        if drop:
            series = series.hbar_divide(drop)
            offset -= drop
        self.offset = offset
        self.series = series

    @staticmethod
    def from_series(s):
        # stored terms are taken as an exact hbar-polynomial
        return HbarLaurent(0, Series(s.algebra, s.variables, s.data, s.t_order, None))

    def _aligned(self, other):
        off = max(self.offset, other.offset)
        return (
            off,
            self.series.mul_hbar(off - self.offset),
            other.series.mul_hbar(off - other.offset),
        )

    def __add__(self, other):
        off, a, b = self._aligned(other)
        return HbarLaurent(off, a + b)

    def __sub__(self, other):
        off, a, b = self._aligned(other)
        return HbarLaurent(off, a - b)

    def scale(self, c):
        return HbarLaurent(self.offset, self.series.scale(c))

    def mul(self, other, bilinear=None):
        return HbarLaurent(self.offset + other.offset, self.series.mul(other.series, bilinear))

    def times_hbar(self, k=1):
        return HbarLaurent(self.offset - k, self.series)

    def apply_K(self, algebra):
        return HbarLaurent(self.offset, algebra.K(self.series))

    def is_zero(self):
        return self.series.is_zero()

    def exp(self):
        """Power sum exp = sum a^k / k!; needs a zero t-constant term so the
        sum terminates at the t truncation (no degree restriction here)."""
        if not self.series.ord_n(0).is_zero():
            raise PreconditionError("Laurent exp requires a zero t-constant term")
        alg, vs, N = self.series.algebra, self.series.variables, self.series.t_order
        out = HbarLaurent(0, Series.unit(alg, vs, N, None))
        power = HbarLaurent(0, Series.unit(alg, vs, N, None))
        fact = 1
        for k in range(1, N + 1):
            power = power.mul(self)
            if power.is_zero():
                break
            fact *= k
            out = out + power.scale(Fraction(1, fact))
        return out

    def to_series(self):
        """Back to an ordinary series; fails if negative powers remain."""
        if self.offset == 0:
            return self.series
        try:
            return self.series.hbar_divide(self.offset)
        except HbarDivisionError as exc:
            raise PreconditionError(
                f"Laurent value has genuine negative hbar powers: {exc}"
            ) from exc


def conjugated_master_operator(algebra, gamma):
    """e^{-gamma/hbar} * hbar K(e^{gamma/hbar}), as an ordinary series.

    For degree-zero gamma with zero constant term this equals
    K(gamma) + (1/2)[gamma, gamma]; the quantum solver's division chain is
    correct because of exactly this identity, so it is exposed here for
    independent property testing.  The intermediate exponentials carry
    negative hbar powers; the result provably does not.
    """
    if not gamma.ord_n(0).is_zero():
        raise PreconditionError("gamma must have a zero constant term")
    if not gamma.is_homogeneous(0):
        raise PreconditionError("gamma must be homogeneous of degree 0")
    g = HbarLaurent.from_series(gamma).times_hbar(-1)   # gamma / hbar
    e_plus = g.exp()
    e_minus = g.scale(-1).exp()
    value = e_minus.mul(e_plus.apply_K(algebra).times_hbar(1))
    return value.to_series()


# ---------------------------------------------------------------------------
# solution verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationResult:
    accepted: bool
    reasons: list

    def to_json(self):
        return {"accepted": self.accepted, "reasons": self.reasons}


def verify_solution(algebra, solution, dec=None):
    """Recheck a (possibly deserialized) solution from scratch.

    Recomputes the residual, checks the versality initial condition (the
    hbar = 0 linear coefficients represent a basis of H(V, Q)), and for
    quantum solutions checks that setting hbar = 0 solves the classical
    Maurer-Cartan equation for (V, Q).
    """
    reasons = []
    try:
        res = solution.residual()
    except PreconditionError as exc:
        return VerificationResult(False, [str(exc)])
    check = res.value
    if solution.hbar_order is not None:
        check = check.truncate(hbar_order=solution.hbar_order)
    if not check.is_zero():
        cells = sorted(
            (n, m.hbar)
            for n in range(check.t_order + 1)
            for m in check.ord_n(n).data
        )
        reasons.append(
            f"nonzero residual at (t-order, hbar-order) = {cells[0]}"
        )
    if not solution.check_versality():
        reasons.append("t-order-1 coefficients at hbar = 0 differ from the "
                       "declared representatives")
    if dec is None:
        _, dec = compute_homology(algebra)
    # the linear coefficients must represent a full basis of H(V, Q)
    coeff_classes = []
    lead = solution.gamma.ord_n(1).set_hbar_zero()
    for i in range(1, len(solution.representatives) + 1):
        vec = Vector.zero(algebra)
        for m, v in lead.data.items():
            if m.tvars == (i,):
                vec = vec + v
        try:
            coeff_classes.append(dec.class_of(vec))
        except PreconditionError:
            reasons.append(f"t^{i} coefficient is not Q-closed at hbar = 0")
            coeff_classes.append({})
    names = sorted({c.name for c in dec.homology})
    if len(solution.representatives) != len(names):
        reasons.append(
            f"solution is not versal: {len(solution.representatives)} coordinates "
            f"for dim H = {len(names)}"
        )
    else:
        rows = [[cc.get(nm, Fraction(0)) for nm in names] for cc in coeff_classes]
        if linalg.rank(rows) != len(names):
            reasons.append("t-order-1 classes do not span H(V, Q)")
    if solution.flavor == "quantum":
        classical = solution.gamma.set_hbar_zero()
        cres = residual(algebra, classical, "classical-q")
        if not cres.is_zero():
            reasons.append(
                "hbar = 0 projection does not solve the classical Maurer-Cartan "
                f"equation (first nonzero cell {cres.first_nonzero_cell()})"
            )
    return VerificationResult(not reasons, reasons)


# ---------------------------------------------------------------------------
# quantum observables
# ---------------------------------------------------------------------------


def observable_extend(algebra, observable, dec=None, hbar_order=None):
    """Extend a Q-closed element to a K-closed series, or report why not.

    Splits O = b + h: the exact part extends through beta(b) (a chain-map
    identity, always unobstructed), the class part through the hbar-lifts of
    its homology coordinates.  Returns (Series, None) on success or
    (None, Obstruction) when some class coordinate is obstructed.
    """
    if dec is None:
        _, dec = compute_homology(algebra)
    if not algebra.Q(observable).is_zero():
        raise PreconditionError("classical observables must be Q-closed")
    b, h, c = dec.split(observable)
    if not c.is_zero():
        raise AssertionError("Q-closed vector with a nonzero complement part")
    data = {}

    def add(p, w):
        if w.is_zero():
            return
        key = Monomial((), p)
        data[key] = data[key] + w if key in data else w

    add(0, b)
    if not b.is_zero():
        add(1, algebra.Delta(dec.q_preimage(b)))
    worst = None
    for name, coeff in sorted(dec.h_coords(h).items()):
        cls = dec.homology.by_name(name)
        lift = lift_to_K_closed(algebra, dec, cls, hbar_order=hbar_order)
        if lift.obstruction is not None and (
            hbar_order is None or not lift.certified_at_least(hbar_order)
        ):
            if worst is None or lift.obstruction.stage < worst.stage:
                worst = lift.obstruction
            continue
        for p, w in lift.hbar_poly():
            add(p, w.scale(coeff))
    if worst is not None:
        return None, worst
    series = Series(algebra, (), data, 0, hbar_order)
    check = algebra.K(series)
    if hbar_order is not None:
        check = check.truncate(hbar_order=hbar_order)
    _assert_zero(check, "K(O) = 0")
    return series, None
