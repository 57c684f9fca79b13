import json

import pytest

from hurwitztau.cli import covering_to_spec, load_covering, main, spec_to_covering
from hurwitztau.samples import builtin_example


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if isinstance(doc, dict) else doc, encoding="utf-8")
    return str(p)


def _a2_file(tmp_path):
    return _write(tmp_path, "a2.json", covering_to_spec(builtin_example("a2")))


def _h12_file(tmp_path):
    return _write(tmp_path, "h12.json", covering_to_spec(builtin_example("h12")))


class TestAnalyze:
    def test_cubic_report_values(self, tmp_path, capsys):
        rc = main(["analyze", _a2_file(tmp_path), "--json"])
        assert rc == 0
        rep = json.loads(capsys.readouterr().out)
        lams = sorted(v[0] for v in rep["canonical"]["lambda"])
        assert abs(lams[0] + 2) < 1e-10 and abs(lams[1] - 2) < 1e-10
        hs = sorted(v[0] for v in rep["hamiltonians"]["quadratic"])
        assert abs(hs[0] + 1 / 288) < 1e-12 and abs(hs[1] - 1 / 288) < 1e-12
        assert rep["hamiltonians"]["status"] == "checked"
        assert rep["hamiltonians"]["max_discrepancy"] < 1e-10

    def test_malformed_json(self, tmp_path, capsys):
        path = _write(tmp_path, "bad.json", '{"genus": 0,\n  "profile": [3,],\n}')
        rc = main(["analyze", path])
        err = capsys.readouterr().err
        assert rc == 2
        assert "line" in err and "column" in err

    def test_coincident_poles(self, tmp_path, capsys):
        doc = {
            "genus": 0,
            "profile": [1, 1, 1],
            "poly_coeffs": [],
            "poles": [
                {"b": [1.0, 0.0], "c": [[1.0, 0.0]]},
                {"b": [1.0, 0.0], "c": [[2.0, 0.0]]},
            ],
        }
        rc = main(["analyze", _write(tmp_path, "s1.json", doc)])
        assert rc == 3
        assert "S1" in capsys.readouterr().err

    def test_strict_near_caustic(self, tmp_path, capsys):
        # nearly-cube polynomial: interior point with colliding critical
        # values (no boundary component involved)
        doc = {
            "genus": 0,
            "profile": [3],
            "poly_coeffs": [[0.0, 0.0], [-3e-8, 0.0]],
            "poles": [],
        }
        rc = main(["analyze", _write(tmp_path, "c.json", doc), "--strict"])
        assert rc == 4
        rc = main(["analyze", _write(tmp_path, "c.json", doc), "--json"])
        assert rc == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["caustic"]["warned"] is True

    def test_human_output(self, tmp_path, capsys):
        rc = main(["analyze", _a2_file(tmp_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "Hamiltonians" in out and "tau" in out

    def test_json_schema_stable(self, tmp_path, capsys):
        main(["analyze", _a2_file(tmp_path), "--json"])
        rep1 = json.loads(capsys.readouterr().out)
        other = covering_to_spec(builtin_example("h0_surf", seed=7))
        main(["analyze", _write(tmp_path, "o.json", other), "--json"])
        rep2 = json.loads(capsys.readouterr().out)
        assert set(rep1) == set(rep2)
        for key in rep1:
            if isinstance(rep1[key], dict):
                assert set(rep1[key]) == set(rep2[key]), key
        # complex numbers are [re, im] pairs everywhere
        assert all(len(v) == 2 for v in rep1["canonical"]["lambda"])


class TestCheck:
    def test_cubic_all_pass(self, tmp_path, capsys):
        rc = main(["check", _a2_file(tmp_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "FAIL" not in out
        assert out.count("PASS") >= 8

    def test_order_two_elliptic_family_all_pass(self, tmp_path, capsys):
        rc = main(["check", _h12_file(tmp_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "modulus-flow" in out
        assert "FAIL" not in out

    def test_unrealistic_tolerance_fails(self, tmp_path, capsys):
        rc = main(["check", _a2_file(tmp_path), "--tol", "1e-15"])
        out = capsys.readouterr().out
        assert rc == 1
        assert "FAIL" in out

    def test_deterministic_under_seed(self, tmp_path, capsys):
        f = _a2_file(tmp_path)
        main(["check", f, "--seed", "7"])
        out1 = capsys.readouterr().out
        main(["check", f, "--seed", "7"])
        out2 = capsys.readouterr().out
        assert out1 == out2


class TestSweep:
    def test_genus0_ratio_constancy(self, tmp_path, capsys):
        cov = builtin_example("h0_surf", seed=3)
        path = _write(tmp_path, "g0.json", covering_to_spec(cov))
        b = cov.poles[0].b
        rc = main([
            "sweep", path, "--param", "poles.0.b",
            "--to", f"{b.real + 0.25},{b.imag + 0.1}", "--steps", "20", "--json",
        ])
        assert rc == 0
        res = json.loads(capsys.readouterr().out)
        assert res["max_drift"]["route_ratio"] < 1e-7
        assert res["max_drift"]["resultant_ratio"] < 1e-8

    def test_crossing_pole_collision_exits(self, tmp_path, capsys):
        doc = {
            "genus": 0,
            "profile": [1, 1, 1],
            "poly_coeffs": [],
            "poles": [
                {"b": [0.8, 0.1], "c": [[0.9, 0.2]]},
                {"b": [-0.7, -0.4], "c": [[1.1, -0.3]]},
            ],
        }
        rc = main([
            "sweep", _write(tmp_path, "x.json", doc), "--param", "poles.0.b",
            "--to=-0.7,-0.4", "--steps", "10",
        ])
        assert rc == 5

    def test_genus1_ratio_constancy(self, tmp_path, capsys):
        path = _h12_file(tmp_path)
        rc = main([
            "sweep", path, "--param", "poles.0.c.1",
            "--to", "1.4,0.12", "--steps", "20", "--json",
        ])
        assert rc == 0
        res = json.loads(capsys.readouterr().out)
        assert res["max_drift"]["route_ratio"] < 1e-7


class TestExample:
    @pytest.mark.parametrize("name", ["a2", "h0_surf", "h12"])
    def test_roundtrip(self, name, tmp_path, capsys):
        out_file = tmp_path / f"{name}.json"
        rc = main(["example", name, "--out", str(out_file)])
        assert rc == 0
        cov = load_covering(str(out_file))
        assert covering_to_spec(cov) == covering_to_spec(builtin_example(name))

    def test_cubic_spec_content(self, capsys):
        rc = main(["example", "a2"])
        doc = json.loads(capsys.readouterr().out)
        assert doc == {
            "genus": 0,
            "profile": [3],
            "poly_coeffs": [[0.0, 0.0], [-3.0, 0.0]],
            "poles": [],
        }

    def test_order_two_elliptic_spec_content(self, capsys):
        rc = main(["example", "h12"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["genus"] == 1
        assert doc["profile"] == [2]
        assert len(doc["poles"]) == 1

    def test_unknown_name(self, capsys):
        rc = main(["example", "nope"])
        assert rc == 2

    def test_seeded_generator_deterministic(self, capsys):
        main(["example", "h0_surf", "--seed", "5"])
        doc1 = capsys.readouterr().out
        main(["example", "h0_surf", "--seed", "5"])
        doc2 = capsys.readouterr().out
        assert doc1 == doc2


class TestEnvOverrides:
    def test_truncation_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("HURWITZ_TRUNC", "99")
        doc = covering_to_spec(builtin_example("h12"))
        cov = spec_to_covering(doc)
        assert cov.modulus.truncation == 99
