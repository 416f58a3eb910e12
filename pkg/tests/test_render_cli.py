"""SVG output and the command-line interface."""

import json
import time

import pytest

from fuchsian.cli import main
from fuchsian.duality import build_omega_dual
from fuchsian.render import (
    omega_dual_spec,
    omega_geo_spec,
    omega_spec,
    polygon_spec,
    render_svg,
)

EXAMPLE_WORD = "PPPPQPQQPPQQ"


class TestRender:
    def test_omega_has_24_labeled_rectangles(self, solved_example, domain_example):
        svg = render_svg(omega_spec(solved_example, domain_example))
        for i in range(1, 13):
            assert f"<title>lower_{i}</title>" in svg
            assert f"<title>upper_{i}</title>" in svg
        assert svg.startswith("<?xml")
        assert svg.rstrip().endswith("</svg>")

    def test_omega_deterministic(self, solved_example, domain_example):
        a = render_svg(omega_spec(solved_example, domain_example))
        b = render_svg(omega_spec(solved_example, domain_example))
        assert a == b

    def test_dual_chart_mirrors_domain(self, solved_example, domain_example):
        dual_domain = build_omega_dual(solved_example)
        svg = render_svg(omega_dual_spec(solved_example, dual_domain))
        assert "wide_1" in svg
        # Degenerate rectangles are not drawn.
        params = solved_example.params
        s = solved_example.surface
        for i in range(1, 13):
            if params.choice(s.sigma(i)) == "Q":
                assert f"<title>tail_{i}</title>" not in svg

    def test_geo_chart_has_boundary_curves(self, genus2):
        svg = render_svg(omega_geo_spec(genus2))
        assert svg.count("<polyline") >= 24  # two boundary families

    def test_polygon_chart_labels_sides(self, genus2):
        svg = render_svg(polygon_spec(genus2))
        for i in range(1, 13):
            assert f">{i}</text>" in svg
        assert svg.count("<path") == 12

    def test_unknown_chart_rejected(self):
        from fuchsian.render import RenderSpec

        with pytest.raises(ValueError):
            render_svg(RenderSpec(chart="sphere"))


class TestCli:
    def test_solve_emits_expected_words(self, capsys):
        assert main(["solve", "--genus", "2", "--params", EXAMPLE_WORD]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["params"] == EXAMPLE_WORD
        entry9 = doc["solution"][8]
        assert entry9["G"]["word"] == [6, 3] and entry9["G"]["base"] == "P1"
        assert entry9["D"]["word"] == [11] and entry9["D"]["base"] == "P1"

    def test_solve_rejects_malformed_word(self, capsys):
        assert main(["solve", "--genus", "2", "--params", "PPP"]) == 2
        assert main(["solve", "--genus", "2", "--params", "PPPPQPQQPPQX"]) == 2

    def test_solve_runtime_under_a_second(self, capsys):
        start = time.monotonic()
        assert main(["solve", "--genus", "2", "--params", EXAMPLE_WORD]) == 0
        assert time.monotonic() - start < 1.0
        capsys.readouterr()

    def test_surface_json(self, capsys):
        assert main(["surface", "--genus", "3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["genus"] == 3
        assert len(doc["vertices"]) == 20
        assert len(doc["sigma"]) == 20

    def test_omega_json(self, capsys):
        assert main(["omega", "--genus", "2", "--params", EXAMPLE_WORD]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["rectangles"]) == 24

    def test_dual_json(self, capsys):
        assert main(["dual", "--genus", "2", "--params", EXAMPLE_WORD]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["source_params"] == EXAMPLE_WORD
        assert len(doc["rectangles"]) == 36

    @pytest.mark.parametrize("what", ["bijectivity", "conjugacy", "duality", "markov"])
    def test_verify_passes(self, capsys, what):
        code = main(
            [
                "verify", what, "--genus", "2", "--params", EXAMPLE_WORD,
                "--samples", "2000", "--seed", "5",
            ]
        )
        out = capsys.readouterr().out
        assert code == 0, out
        assert json.loads(out)["passed"] is True

    def test_verify_reports_are_deterministic(self, capsys):
        args = [
            "verify", "bijectivity", "--genus", "2", "--params", EXAMPLE_WORD,
            "--samples", "1000", "--seed", "9",
        ]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_code_roundtrip(self, capsys, genus2):
        assert (
            main(
                [
                    "code", "--genus", "2", "--params", "P" * 12,
                    "--u", str(genus2.p(1).angle), "--w", str(genus2.q(2).angle),
                    "--future", "5", "--past", "2",
                ]
            )
            == 0
        )
        doc = json.loads(capsys.readouterr().out)
        assert doc["future"] == [genus2.sigma(2)] * 5
        assert doc["truncated"] is False

    def test_sweep_subset(self, capsys):
        code = main(
            ["sweep", "--genus", "3", "--random", "5", "--samples", "200", "--seed", "1"]
        )
        out = capsys.readouterr().out
        assert code == 0, out
        lines = out.strip().splitlines()
        assert len(lines) == 6
        assert all(line.endswith("PASS") for line in lines[:-1])
        assert "failures=0" in lines[-1]

    def test_sweep_deterministic(self, capsys):
        args = ["sweep", "--genus", "3", "--random", "3", "--samples", "100", "--seed", "2"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first

    def test_sweep_genus2_attempts_every_word(self, capsys):
        assert main(["sweep", "--genus", "2", "--analytic-only"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4097  # one per word plus the summary
        assert lines[-1].startswith("sweep genus=2 words=4096 failures=0")
        assert len({line.split()[0] for line in lines[:-1]}) == 4096

    def test_verify_markov_writes_grid_and_graph(self, tmp_path, capsys):
        grid = tmp_path / "matrix.txt"
        sofic = tmp_path / "sofic.json"
        code = main(
            [
                "verify", "markov", "--genus", "2", "--params", EXAMPLE_WORD,
                "--matrix-out", str(grid), "--sofic-out", str(sofic),
            ]
        )
        capsys.readouterr()
        assert code == 0
        rows = grid.read_text().strip().splitlines()
        assert len(rows) == 24 and all(len(r) == 24 and set(r) <= {"0", "1"} for r in rows)
        doc = json.loads(sofic.read_text())
        assert doc["vertices"] == list(range(1, 13))
        assert all({"from", "to", "label"} == set(e) for e in doc["edges"])

    def test_attractor_labeled_exploratory(self, capsys):
        code = main(
            [
                "attractor", "--genus", "2", "--params", EXAMPLE_WORD,
                "--iters", "10", "--samples", "500", "--seed", "3",
            ]
        )
        out = capsys.readouterr().out
        assert code == 0
        doc = json.loads(out)
        assert doc["exploratory"] is True
        assert doc["forward_invariant_ok"] is True

    def test_render_to_file(self, tmp_path, capsys):
        out = tmp_path / "omega.svg"
        assert (
            main(
                ["render", "--what", "omega", "--genus", "2", "--params", EXAMPLE_WORD,
                 "--out", str(out)]
            )
            == 0
        )
        text = out.read_text()
        assert text.startswith("<?xml") and text.rstrip().endswith("</svg>")
        out2 = tmp_path / "omega2.svg"
        main(
            ["render", "--what", "omega", "--genus", "2", "--params", EXAMPLE_WORD,
             "--out", str(out2)]
        )
        assert out2.read_text() == text

    def test_render_requires_params_for_domains(self, capsys):
        assert main(["render", "--what", "omega", "--genus", "2"]) == 2

    def test_render_polygon_needs_no_params(self, tmp_path):
        out = tmp_path / "poly.svg"
        assert main(["render", "--what", "polygon", "--genus", "2", "--out", str(out)]) == 0
        assert "</svg>" in out.read_text()

    def test_tolerance_env_override(self, monkeypatch, capsys):
        monkeypatch.setenv("FUCHSIAN_TOL", "1e-8")
        from fuchsian.cli import default_tol

        assert default_tol() == 1e-8
        monkeypatch.delenv("FUCHSIAN_TOL")
        assert default_tol() == 1e-9
