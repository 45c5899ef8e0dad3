"""Command-line behavior: exit codes, output shapes, determinism."""

import json

import pytest

from nlab.cli import main

from conftest import SCENES

R3 = str(SCENES / "canonical_r3.nlab")
R2 = str(SCENES / "poisson_r2.nlab")
BAD = str(SCENES / "bad_r6.nlab")


class TestValidate:
    def test_canonical_passes(self, capsys):
        assert main(["validate", R3, "--trials", "5"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_bad_structure_fails_with_witness(self, capsys):
        assert main(["validate", BAD, "--trials", "5"]) == 1
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "trial=" in out

    def test_missing_scene_is_usage_error(self, capsys):
        assert main(["validate", "/nonexistent/scene.nlab"]) == 2
        assert "error" in capsys.readouterr().err

    def test_json_shape(self, capsys):
        assert main(["validate", R3, "--trials", "3", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["suite"] == "fundamental-identity"
        assert payload["passed"] is True
        assert payload["seed"] == 42


class TestBracket:
    def test_worked_example_both_variants(self, capsys):
        for variant in ("ibanez", "hagiwara"):
            code = main(["bracket", R3, "--alpha", "a", "--beta", "b", "--variant", variant])
            assert code == 0
            assert capsys.readouterr().out.strip() == "(-1)*dx2^dx3"

    def test_unknown_section(self, capsys):
        assert main(["bracket", R3, "--alpha", "a", "--beta", "nope"]) == 2
        assert "unknown section" in capsys.readouterr().err

    def test_json_reparses(self, capsys):
        assert main(
            ["bracket", R3, "--alpha", "a", "--beta", "b", "--format", "json"]
        ) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["result"] == "(-1)*dx2^dx3"
        assert payload["variant"] == "ibanez(dimension)"


class TestAnchor:
    def test_agreement(self, capsys):
        assert main(["anchor", R3, "--alpha", "a"]) == 0
        out = capsys.readouterr().out
        assert "derived   (x)*e1" in out
        assert "insertion (x)*e1" in out
        assert "agree     true" in out

    def test_zero_section_handled(self, tmp_path, capsys):
        scene = tmp_path / "zero.nlab"
        scene.write_text(
            "dim 3\ncoords x y z\nstructure L order 3 = (1)*e1^e2^e3\n"
            "section z0 = (0)*dx1^dx2\n"
        )
        assert main(["anchor", str(scene), "--alpha", "z0"]) == 0
        out = capsys.readouterr().out
        assert "agree     true" in out

    def test_json(self, capsys):
        assert main(["anchor", R3, "--alpha", "c", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["derived"] == "(1)*e3"
        assert payload["insertion"] == "(1)*e3"
        assert payload["agree"] is True
        assert payload["extraction_failure"] is None


class TestVerify:
    def test_all_suites_pass_on_canonical(self, capsys):
        code = main(["verify", R3, "--trials", "3"])
        assert code == 0
        out = capsys.readouterr().out
        for suite in (
            "leibniz-id",
            "leibniz-rule",
            "anchor-hom",
            "anchor-hom-derived",
            "derivation",
            "antisym-anchored",
            "variant-compare",
        ):
            assert f"suite={suite}" in out

    def test_bad_structure_fails(self, capsys):
        assert main(["verify", BAD, "--suite", "leibniz-id", "--trials", "2"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_unknown_suite(self, capsys):
        assert main(["verify", R3, "--suite", "nope"]) == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_suite_subset_and_variant_flags(self, capsys):
        code = main(
            ["verify", R2, "--suite", "anchor-hom,leibniz-id", "--variant", "hagiwara",
             "--trials", "3"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("suite=") == 2
        assert "variant=hagiwara" in out

    def test_json_determinism(self, capsys):
        argv = ["verify", R3, "--trials", "3", "--format", "json", "--seed", "11"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        reports = json.loads(first)
        assert [r["suite"] for r in reports] == [
            "leibniz-id", "leibniz-rule", "anchor-hom", "anchor-hom-derived",
            "derivation", "antisym-anchored", "variant-compare",
        ]
        assert all(r["seed"] == 11 for r in reports)

    def test_trials_validated(self, capsys):
        assert main(["verify", R3, "--trials", "0"]) == 2


class TestSeedHandling:
    def test_env_seed_used_as_default(self, capsys, monkeypatch):
        monkeypatch.setenv("NLAB_SEED", "77")
        assert main(["validate", R3, "--trials", "3", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["seed"] == 77

    def test_explicit_seed_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("NLAB_SEED", "77")
        assert main(["validate", R3, "--trials", "3", "--seed", "5", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["seed"] == 5

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("NLAB_SEED", "not-a-number")
        assert main(["validate", R3, "--trials", "3"]) == 2


class TestSceneErrors:
    def test_parse_error_reported(self, tmp_path, capsys):
        scene = tmp_path / "broken.nlab"
        scene.write_text("dim 3\ncoords x x z\n")
        assert main(["validate", str(scene)]) == 2
        err = capsys.readouterr().err
        assert "line 2" in err

    def test_no_structures(self, tmp_path, capsys):
        scene = tmp_path / "empty.nlab"
        scene.write_text("dim 2\ncoords x y\n")
        assert main(["validate", str(scene)]) == 2
        assert "no structures" in capsys.readouterr().err

    def test_unknown_structure_name(self, capsys):
        assert main(["validate", R3, "--structure", "missing", "--trials", "2"]) == 2
        assert "unknown structure" in capsys.readouterr().err
