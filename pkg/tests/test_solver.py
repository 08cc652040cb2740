"""Classical and quantum versal solvers, residuals, verification, observables."""

import json
import random
from fractions import Fraction

import pytest

from dbv.errors import DegenerationRefusedError, PreconditionError
from dbv.generators import landau_ginzburg, random_finite
from dbv.series import DeformationVariable, Series
from dbv.solver import (
    classical_solve_log,
    closed_representatives,
    conjugated_master_operator,
    observable_extend,
    quantum_solve,
    residual,
    solution_from_json,
    verify_solution,
)
from dbv.splitting import HomologyClass, build_beta, compute_homology, degeneration_check
from conftest import random_degree_zero_series
from oracles import qme_cell_pattern

HALF = Fraction(1, 2)


class TestClassicalSolver:
    def test_single_even_class_expansion(self, lg_x3):
        # Gamma = gamma t - 1/2 gamma^2 t^2 + 1/3 gamma^3 t^3, residual 0
        x = lg_x3.from_poly_string("x")
        sol = classical_solve_log(lg_x3, [x], 3)
        vs = sol.gamma.variables
        expect = (
            Series.zero(lg_x3, vs, 3)
            .term([1], x)
            .term([1, 1], lg_x3.from_poly_string("x^2").scale(-HALF))
            .term([1, 1, 1], lg_x3.from_poly_string("x^3").scale(Fraction(1, 3)))
        )
        assert sol.gamma == expect
        assert sol.residual().is_zero()

    def test_empty_homology_gives_zero(self):
        algebra = random_finite(dim=1, seed=0)  # just the unit
        sol = classical_solve_log(algebra, [], 4)
        assert sol.gamma.is_zero()
        assert sol.residual().is_zero()

    def test_square_zero_unit_class(self, square_zero):
        # flavor Delta: H(Delta) = {[1]}; Gamma = log(1 + t) * 1 and
        # Delta(e^Gamma) = Delta(1 + t) = 0 at every order
        reps = closed_representatives(square_zero, "classical-delta")
        assert reps == [square_zero.unit_vector()]
        sol = classical_solve_log(square_zero, reps, 5)
        one = square_zero.unit_vector()
        vs = sol.gamma.variables
        expect = Series.zero(square_zero, vs, 5)
        for n in range(1, 6):
            expect = expect.term([1] * n, one.scale(Fraction((-1) ** (n + 1), n)))
        assert sol.gamma == expect
        e = sol.gamma.exp()
        assert e.apply_linear(square_zero.Delta).is_zero()

    def test_rejects_unclosed_representatives(self, square_zero):
        a = square_zero.vector({1: 1})  # Delta(a) = b != 0
        with pytest.raises(PreconditionError):
            classical_solve_log(square_zero, [a], 3)

    def test_q_plus_delta_flavor(self, lg_x3):
        reps = closed_representatives(lg_x3, "classical-q-plus-delta")
        assert [r.to_json() for r in reps] == [{"1": "1"}, {"x": "1"}]
        sol = classical_solve_log(lg_x3, reps, 4, flavor="classical-q-plus-delta")
        assert sol.residual().is_zero()

    def test_randomized_fuzzer_algebras(self):
        solved = 0
        for seed in range(25):
            algebra = random_finite(dim=6, seed=400 + seed)
            reps = closed_representatives(algebra, "classical-delta")
            sol = classical_solve_log(algebra, reps, 6)
            assert sol.residual().is_zero()
            assert sol.check_versality()
            solved += 1
        assert solved >= 20

    def test_lg_delta_flavor_odd_class(self, lg_x3):
        # H(Delta) of the polynomial backend is spanned by [eta]
        reps = closed_representatives(lg_x3, "classical-delta")
        assert [r.to_json() for r in reps] == [{"eta": "1"}]
        sol = classical_solve_log(lg_x3, reps, 4)
        # eta^2 = 0 kills everything past order 1
        assert sol.gamma == Series.zero(lg_x3, sol.gamma.variables, 4).term(
            [1], lg_x3.from_poly_string("1", eta=True)
        )
        assert sol.residual().is_zero()


class TestResidual:
    def test_zero_series(self, lg_x3):
        z = Series.zero(lg_x3, (), 3, None)
        assert residual(lg_x3, z, "quantum").is_zero()

    def test_K_closed_linear_part_leaves_half_bracket(self, lg_x3):
        # for Gamma with K-closed coefficients the residual is exactly
        # (1/2)[Gamma, Gamma]
        vs = (DeformationVariable(1, 0), DeformationVariable(2, 0))
        g = (
            Series.zero(lg_x3, vs, 3, None)
            .term([1], lg_x3.from_poly_string("x"))
            .term([2], lg_x3.from_poly_string("x^2 - 2"))
        )
        assert lg_x3.K(g).is_zero()
        res = residual(lg_x3, g, "quantum")
        assert res.value == g.bracket(g).scale(HALF)

    def test_definitional_identity_on_random_series(self, lg_x3, rng):
        for _ in range(15):
            g = random_degree_zero_series(lg_x3, rng, t_order=3, n_vars=2, hbar_max=1)
            res = residual(lg_x3, g, "quantum")
            assert res.value == lg_x3.K(g) + g.bracket(g).scale(HALF)

    def test_hbar_stratification_splits_the_value(self, lg_x3, rng):
        g = random_degree_zero_series(lg_x3, rng, t_order=3, n_vars=2, hbar_max=2)
        res = residual(lg_x3, g, "quantum")
        strata = res.hbar_stratification()
        total = Series.zero(lg_x3, g.variables, g.t_order, g.hbar_order)
        for p, s in strata.items():
            total = total + s.mul_hbar(p)
        assert total == res.value

    def test_rejects_nonzero_constant_term(self, lg_x3):
        s = Series.from_vector(lg_x3, (), lg_x3.from_poly_string("x"), 0, None)
        with pytest.raises(PreconditionError):
            residual(lg_x3, s, "classical-q")


class TestConjugationIdentity:
    def test_matches_master_operator_everywhere(self, lg_x3, square_zero, rng):
        algebras = [lg_x3, square_zero, random_finite(dim=6, seed=77)]
        checked = 0
        for algebra in algebras:
            for _ in range(70):
                g = random_degree_zero_series(algebra, rng, t_order=3, n_vars=2, hbar_max=1)
                lhs = conjugated_master_operator(algebra, g)
                rhs = algebra.K(g) + g.bracket(g).scale(HALF)
                assert lhs == rhs
                checked += 1
        assert checked >= 200


class TestQuantumSolver:
    def test_lg_x3_solution(self, lg_x3):
        H, dec = compute_homology(lg_x3)
        beta = build_beta(lg_x3, dec)
        sol = quantum_solve(lg_x3, beta, 3, 3)
        vs = sol.gamma.variables
        expect = (
            Series.zero(lg_x3, vs, 3, None)
            .term([1], lg_x3.unit_vector())
            .term([2], lg_x3.from_poly_string("x"))
        )
        assert sol.gamma == expect
        assert sol.residual().is_zero()
        assert sol.check_versality()

    def test_lg_quartic_potential(self):
        algebra = landau_ginzburg("x^4")
        H, dec = compute_homology(algebra)
        beta = build_beta(algebra, dec)
        sol = quantum_solve(algebra, beta, 3)
        assert sol.residual().is_zero()
        assert sol.check_versality()

    def test_empty_homology(self):
        # the unit itself is exact here (Q v = 1), so H = 0 and Gamma = 0
        from dbv.algebras import algebra_from_json

        algebra = algebra_from_json({
            "kind": "finite",
            "basis": [{"name": "1", "degree": 0}, {"name": "v", "degree": -1}],
            "unit": "1",
            "product": [["1", "1", {"1": "1"}], ["1", "v", {"v": "1"}]],
            "Q": [["v", {"1": "1"}]],
            "Delta": [],
        })
        from dbv.axioms import check_axioms

        assert check_axioms(algebra).all_passed
        H, dec = compute_homology(algebra)
        assert len(H) == 0
        beta = build_beta(algebra, dec)
        sol = quantum_solve(algebra, beta, 3, 3)
        assert sol.gamma.is_zero()
        assert sol.residual().is_zero()

    def test_fuzzer_degenerate_algebras_solve_exactly(self):
        solved = 0
        for seed in range(30):
            algebra = random_finite(dim=6, seed=500 + seed)
            report = degeneration_check(algebra)
            if not report.degenerate:
                continue
            _, dec = compute_homology(algebra)
            beta = build_beta(algebra, dec, report)
            sol = quantum_solve(algebra, beta, 4)
            assert sol.residual().is_zero()
            assert sol.check_versality()
            solved += 1
        assert solved >= 10

    def test_projection_to_classical_solution(self):
        # setting hbar = 0 in a quantum solution solves Maurer-Cartan for (V, Q)
        for seed in (500, 501, 502):
            algebra = random_finite(dim=6, seed=seed)
            report = degeneration_check(algebra)
            if not report.degenerate:
                continue
            _, dec = compute_homology(algebra)
            sol = quantum_solve(algebra, build_beta(algebra, dec, report), 3)
            classical = sol.gamma.set_hbar_zero()
            assert residual(algebra, classical, "classical-q").is_zero()

    def test_refuses_on_obstruction(self, square_zero):
        _, dec = compute_homology(square_zero)
        with pytest.raises(DegenerationRefusedError):
            build_beta(square_zero, dec)

    def test_insufficient_certificate_refused(self):
        # a splitting certified to a finite order cannot honestly serve a
        # request that needs more division headroom
        algebra = random_finite(dim=6, seed=500)
        report = degeneration_check(algebra, hbar_order=1)
        assert report.degenerate
        _, dec = compute_homology(algebra)
        beta = build_beta(algebra, dec, report, hbar_order=1)
        assert beta.certified == 1
        with pytest.raises(DegenerationRefusedError):
            quantum_solve(algebra, beta, 3, 3)


class TestOracleAgreement:
    def test_cells_and_residuals_match(self):
        compared = 0
        for seed in range(12):
            algebra = random_finite(dim=6, seed=600 + seed)
            H, dec = compute_homology(algebra)
            cells, oracle_gamma, worst = qme_cell_pattern(algebra, H, 3, 3)
            report = degeneration_check(algebra, dec)
            if report.degenerate:
                assert all(cells.values()), seed
                beta = build_beta(algebra, dec, report)
                sol = quantum_solve(algebra, beta, 3)
                assert sol.residual().is_zero()
                assert residual(algebra, oracle_gamma, "quantum").is_zero()
            else:
                assert worst == report.certified_order, seed
                assert all(
                    ok == (j <= worst) for (n, j), ok in cells.items()
                ), seed
            compared += 1
        assert compared == 12


class TestVerification:
    def test_round_trip_accepts(self, lg_x3):
        _, dec = compute_homology(lg_x3)
        sol = quantum_solve(lg_x3, build_beta(lg_x3, dec), 3, 3)
        data = json.loads(sol.dumps())
        again = solution_from_json(lg_x3, data)
        result = verify_solution(lg_x3, again)
        assert result.accepted, result.reasons

    def test_perturbed_coefficient_rejected(self, lg_x3):
        _, dec = compute_homology(lg_x3)
        sol = quantum_solve(lg_x3, build_beta(lg_x3, dec), 3, 3)
        data = json.loads(sol.dumps())
        # perturb one stored coefficient
        data["series"]["terms"][0]["vector"] = {"x^3": "7"}
        bad = solution_from_json(lg_x3, data)
        result = verify_solution(lg_x3, bad)
        assert not result.accepted
        assert any("residual" in r or "representatives" in r for r in result.reasons)

    def test_wrong_algebra_hash_rejected(self, lg_x3):
        _, dec = compute_homology(lg_x3)
        sol = quantum_solve(lg_x3, build_beta(lg_x3, dec), 2, 2)
        data = json.loads(sol.dumps())
        other = landau_ginzburg("x^4")
        with pytest.raises(PreconditionError):
            solution_from_json(other, data)

    def test_classical_solution_fails_quantum_flavor(self, square_zero):
        # Gamma = a t solves Maurer-Cartan for (V, Q) (Q = 0, zero bracket)
        # but K(Gamma) = hbar b t != 0: classical and quantum genuinely differ
        a = square_zero.vector({1: 1})
        cls = HomologyClass("[a]", 0, a)
        vs = (DeformationVariable(1, 0),)
        gamma = Series.zero(square_zero, vs, 3, None).term([1], a)
        from dbv.solver import VersalSolution

        classical = VersalSolution(square_zero, "classical-q", gamma, [cls], 3, 0)
        assert residual(square_zero, gamma, "classical-q").is_zero()
        quantum = VersalSolution(square_zero, "quantum", gamma, [cls], 3, None)
        result = verify_solution(square_zero, quantum)
        assert not result.accepted
        assert any("residual" in r or "versal" in r for r in result.reasons)

    def test_versality_failure_detected(self, lg_x3):
        # a solution whose linear part misses a homology class is not versal
        _, dec = compute_homology(lg_x3)
        one = lg_x3.unit_vector()
        cls = HomologyClass("[1]", 0, one)
        vs = (DeformationVariable(1, 0),)
        gamma = Series.zero(lg_x3, vs, 2, None).term([1], one)
        from dbv.solver import VersalSolution

        sol = VersalSolution(lg_x3, "quantum", gamma, [cls], 2, None)
        result = verify_solution(lg_x3, sol)
        assert not result.accepted
        assert any("versal" in r for r in result.reasons)


class TestObservables:
    def test_lg_x_is_already_quantum(self, lg_x3):
        series, obstruction = observable_extend(lg_x3, lg_x3.from_poly_string("x"))
        assert obstruction is None
        assert series == Series.from_vector(lg_x3, (), lg_x3.from_poly_string("x"), 0, None)

    def test_square_zero_obstructed(self, square_zero):
        a = square_zero.vector({1: 1})
        series, obstruction = observable_extend(square_zero, a)
        assert series is None
        assert obstruction.witness_class == {"[b]": Fraction(1)}

    def test_exact_observables_always_extend(self):
        rng = random.Random(3)
        from conftest import random_vector

        found = 0
        for seed in (21, 22, 23, 24):
            algebra = random_finite(dim=7, seed=seed, q_sources=3, delta_sources=2)
            for _ in range(15):
                v = random_vector(algebra, rng)
                o = algebra.Q(v)
                if o.is_zero():
                    continue
                series, obstruction = observable_extend(algebra, o)
                assert obstruction is None
                assert algebra.K(series).is_zero()
                found += 1
        assert found >= 5

    def test_rejects_non_closed_input(self):
        # a non-Q-closed vector must be refused
        for seed in range(13, 30):
            algebra = random_finite(dim=6, seed=seed, q_sources=2, delta_sources=1)
            for k in algebra.slice_keys():
                v = algebra.basis_vector(k)
                if not algebra.Q(v).is_zero():
                    with pytest.raises(PreconditionError):
                        observable_extend(algebra, v)
                    return
        raise AssertionError("no seed produced a non-closed basis vector")
