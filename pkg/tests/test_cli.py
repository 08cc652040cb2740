"""The command-line front end: exit codes, determinism, thin-shell parity."""

import json

import pytest

from dbv.cli import main
from dbv.generators import landau_ginzburg
from dbv.splitting import degeneration_check, qdelta_lemma_check


@pytest.fixture(scope="module")
def lg_spec(tmp_path_factory):
    path = tmp_path_factory.mktemp("specs") / "lg.json"
    assert main(["example", "lg", "--potential", "x^3", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture(scope="module")
def sq_spec(tmp_path_factory):
    path = tmp_path_factory.mktemp("specs") / "sq.json"
    assert main(["example", "square-zero", "--out", str(path)]) == 0
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestExitCodes:
    def test_check_axioms_pass(self, capsys, lg_spec):
        code, out = run(capsys, ["check-axioms", lg_spec, "--window", "4"])
        assert code == 0
        assert json.loads(out)["all_passed"]

    def test_degeneration_positive_negative(self, capsys, lg_spec, sq_spec):
        assert run(capsys, ["degeneration", lg_spec])[0] == 0
        code, out = run(capsys, ["degeneration", sq_spec])
        assert code == 1
        report = json.loads(out)
        assert not report["degenerate"]

    def test_qdelta_negative_with_witness(self, capsys, lg_spec):
        code, out = run(capsys, ["qdelta", lg_spec, "--window", "6"])
        assert code == 1
        report = json.loads(out)
        assert not report["holds"]
        assert report["witnesses"]

    def test_solve_qme_and_verify_round_trip(self, capsys, lg_spec, tmp_path):
        sol = tmp_path / "sol.json"
        code, _ = run(capsys, ["solve-qme", lg_spec, "--t-order", "3",
                               "--hbar-order", "3", "--out", str(sol)])
        assert code == 0
        data = json.loads(sol.read_text())
        terms = data["series"]["terms"]
        assert [t["monomial"]["t"] for t in terms] == [[1], [2]]
        assert terms[0]["vector"] == {"1": "1"}
        assert terms[1]["vector"] == {"x": "1"}
        code, out = run(capsys, ["verify", lg_spec, str(sol)])
        assert code == 0 and json.loads(out)["accepted"]

    def test_solve_qme_obstructed(self, capsys, sq_spec):
        code, out = run(capsys, ["solve-qme", sq_spec])
        assert code == 1
        report = json.loads(out)
        assert report["obstructed_class"] == "[a]"

    def test_verify_rejects_tampered_solution(self, capsys, lg_spec, tmp_path):
        sol = tmp_path / "sol.json"
        run(capsys, ["solve-qme", lg_spec, "--out", str(sol)])
        data = json.loads(sol.read_text())
        data["series"]["terms"][1]["vector"] = {"x": "2"}
        sol.write_text(json.dumps(data))
        code, out = run(capsys, ["verify", lg_spec, str(sol)])
        assert code == 1
        assert not json.loads(out)["accepted"]

    def test_observable_positive_negative(self, capsys, lg_spec, sq_spec):
        code, out = run(capsys, ["observable", lg_spec, "--vector", '{"x": "1"}'])
        assert code == 0 and json.loads(out)["extended"]
        code, out = run(capsys, ["observable", sq_spec, "--vector", '{"a": "1"}'])
        assert code == 1
        assert json.loads(out)["obstruction"]["witness_class"] == {"[b]": "1"}

    def test_solve_classical(self, capsys, sq_spec):
        code, out = run(capsys, ["solve-classical", sq_spec, "--flavor", "delta",
                                 "--t-order", "4"])
        assert code == 0
        assert json.loads(out)["residual_is_zero"]

    def test_obstructions(self, capsys, lg_spec, sq_spec):
        assert run(capsys, ["obstructions", lg_spec])[0] == 0
        assert run(capsys, ["obstructions", sq_spec])[0] == 1

    def test_usage_errors_are_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["homology", str(bad)]) == 2
        bad.write_text(json.dumps({"kind": "mystery"}))
        assert main(["homology", str(bad)]) == 2

    def test_axiom_failure_rejected_at_parse(self, capsys, tmp_path, sq_spec):
        data = json.loads(open(sq_spec).read())
        # break anticommutation: Q(b) = a with Delta(a) = b gives QDelta(a) = a
        data["Q"] = [["b", {"a": "1"}]]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert main(["degeneration", str(bad)]) == 2
        assert main(["degeneration", str(bad), "--skip-axioms"]) in (0, 1)

    def test_random_finite_example_is_seeded(self, capsys):
        _, a = run(capsys, ["example", "random-finite", "--dim", "6", "--seed", "5"])
        _, b = run(capsys, ["example", "random-finite", "--dim", "6", "--seed", "5"])
        assert a == b


class TestDeterminism:
    def test_reports_byte_identical(self, capsys, lg_spec):
        outputs = set()
        for _ in range(3):
            _, out = run(capsys, ["degeneration", lg_spec])
            outputs.add(out)
        assert len(outputs) == 1
        for _ in range(2):
            _, out = run(capsys, ["qdelta", lg_spec])
            outputs.add(out)
        assert len(outputs) == 2


class TestThinShell:
    def test_degeneration_matches_library(self, capsys, lg_spec, sq_spec):
        for spec, algebra in ((lg_spec, landau_ginzburg("x^3")),):
            code, out = run(capsys, ["degeneration", spec])
            lib = degeneration_check(algebra)
            assert (code == 0) == lib.degenerate
            assert json.loads(out)["degenerate"] == lib.degenerate

    def test_qdelta_matches_library(self, capsys, lg_spec):
        code, out = run(capsys, ["qdelta", lg_spec])
        lib = qdelta_lemma_check(landau_ginzburg("x^3"))
        assert (code == 0) == lib.holds
        assert json.loads(out)["holds"] == lib.holds
