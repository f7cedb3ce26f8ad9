"""End-to-end CLI behavior: exit codes, report schemas, determinism."""

import json

import numpy as np
import pytest

from cnpkit.cli import main

from conftest import FIXTURES


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def szego_points_file(tmp_path):
    rng = np.random.default_rng(2024)
    r = 0.8 * np.sqrt(rng.uniform(0, 1, 6))
    th = rng.uniform(0, 2 * np.pi, 6)
    z = r * np.exp(1j * th)
    return write(
        tmp_path / "pts.json",
        {"kernel": {"type": "szego"}, "points": [[c.real, c.imag] for c in z]},
    )


@pytest.fixture
def phi_problem_file(tmp_path):
    # the unique-interpolant data: multiplier phi(z) = z
    return write(
        tmp_path / "prob.json",
        {
            "sample": {"kernel": {"type": "szego"}, "points": [[0, 0], [0.5, 0]]},
            "targets": {"scalar": [[0, 0], [0.5, 0]]},
        },
    )


class TestCertifyCommand:
    def test_szego_exits_zero(self, szego_points_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["certify", "--points", szego_points_file, "--output", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["verdict"] is True
        assert report["method"] == "h_inertia"
        assert report["block_inertias"][0]["n_pos"] == 1
        assert report["tolerances"]["zero_eig_rel"] == 1e-9
        assert report["seed"] == 1729

    def test_kernel_flag_overrides(self, tmp_path):
        pts = write(tmp_path / "p.json", [[0, 0], [0.5, 0]])
        out = tmp_path / "r.json"
        code = main(["certify", "--kernel", "szego", "--points", pts, "--output", str(out)])
        assert code == 0

    def test_bergman_witness_exits_one(self, tmp_path):
        doc = json.loads((FIXTURES / "bergman_witness.json").read_text())
        pts = write(tmp_path / "w.json", doc)
        out = tmp_path / "r.json"
        code = main(["certify", "--points", pts, "--output", str(out)])
        assert code == 1
        report = json.loads(out.read_text())
        assert report["verdict"] is False
        assert report["witness"]["inertia"][0] == 2

    def test_malformed_json_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"kernel": ')
        assert main(["certify", "--points", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "line" in err and "column" in err

    def test_out_of_domain_point_exits_two(self, tmp_path, capsys):
        pts = write(
            tmp_path / "p.json",
            {"kernel": {"type": "szego"}, "points": [[1.5, 0]]},
        )
        assert main(["certify", "--points", pts]) == 2


class TestPartitionCommand:
    def test_inconsistent_gram_exits_one(self, tmp_path):
        doc = {
            "type": "gram",
            "matrix": [
                [[1, 0], [1, 0], [0, 0]],
                [[1, 0], [1, 0], [1, 0]],
                [[0, 0], [1, 0], [1, 0]],
            ],
        }
        pts = write(tmp_path / "g.json", doc)
        out = tmp_path / "r.json"
        code = main(["partition", "--points", pts, "--output", str(out)])
        assert code == 1
        report = json.loads(out.read_text())
        assert report["consistent"] is False
        assert report["violations"] == [[0, 2]]

    def test_block_diagonal_blocks(self, tmp_path):
        doc = {
            "type": "gram",
            "matrix": [
                [[1, 0], [0.5, 0], [0, 0]],
                [[0.5, 0], [1, 0], [0, 0]],
                [[0, 0], [0, 0], [2, 0]],
            ],
        }
        pts = write(tmp_path / "g.json", doc)
        out = tmp_path / "r.json"
        assert main(["partition", "--points", pts, "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["blocks"] == [[0, 1], [2]]


class TestEmbedCommand:
    def test_embed_json(self, szego_points_file, tmp_path):
        out = tmp_path / "emb.json"
        code = main(["embed", "--points", szego_points_file, "--output", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["embedded"] is True
        assert report["m"] == 1  # disk kernel embeds with one coordinate
        assert report["reconstruction_error"] < 1e-9
        assert len(report["points"]) == 6

    def test_embed_csv(self, szego_points_file, tmp_path):
        out = tmp_path / "emb.csv"
        code = main(
            ["embed", "--points", szego_points_file, "--format", "csv", "--output", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "# command=embed"
        header_at = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_at].split(",")[:3] == ["label", "delta_re", "delta_im"]
        assert len(lines) == header_at + 1 + 6

    def test_embed_non_cnp_exits_one(self, tmp_path):
        doc = json.loads((FIXTURES / "bergman_witness.json").read_text())
        pts = write(tmp_path / "w.json", doc)
        out = tmp_path / "r.json"
        # base 0 of the frozen witness exposes a non-PSD form
        codes = set()
        for b in range(3):
            codes.add(
                main(["embed", "--points", pts, "--base", str(b), "--output", str(out)])
            )
        assert 1 in codes

    def test_csv_rejected_elsewhere(self, szego_points_file, capsys):
        assert main(["certify", "--points", szego_points_file, "--format", "csv"]) == 2


class TestInterpolateCommand:
    def test_unique_interpolant_values(self, phi_problem_file, tmp_path):
        evals = write(tmp_path / "evals.json", {"points": [[0.25, 0], [-0.3, 0.1]]})
        out = tmp_path / "r.json"
        code = main(
            ["interpolate", "--problem", phi_problem_file, "--eval", evals, "--output", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["solvable"] is True and report["cnp_certified"] is True
        vals = [complex(re, im) for re, im in report["values"]]
        assert abs(vals[0] - 0.25) < 1e-8
        assert abs(vals[1] - (-0.3 + 0.1j)) < 1e-8

    def test_unsolvable_exits_one(self, tmp_path):
        prob = write(
            tmp_path / "prob.json",
            {
                "sample": {"kernel": {"type": "szego"}, "points": [[0, 0], [0.5, 0]]},
                "targets": {"scalar": [[0, 0], [0.9, 0]]},
            },
        )
        out = tmp_path / "r.json"
        code = main(["interpolate", "--problem", prob, "--output", str(out)])
        assert code == 1
        report = json.loads(out.read_text())
        assert report["solvable"] is False
        assert "eigenvector" in report["witness"]


class TestExtendCommand:
    def test_schwarz_disk(self, tmp_path):
        prob = write(
            tmp_path / "prob.json",
            {
                "sample": {"kernel": {"type": "szego"}, "points": [[0, 0]]},
                "targets": {"scalar": [[0, 0]]},
            },
        )
        evals = write(tmp_path / "new.json", [[0.5, 0]])
        out = tmp_path / "r.json"
        code = main(["extend", "--problem", prob, "--eval", evals, "--output", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["feasible"] is True
        assert abs(report["disk"]["radius"] - 0.5) < 1e-9

    def test_infeasible_extension_exits_one(self, tmp_path):
        fixture = json.loads(
            (FIXTURES / "bergman_row_infeasible.json").read_text()
        )
        prob = write(tmp_path / "prob.json", fixture["problem"])
        evals = write(tmp_path / "new.json", [fixture["new_point"]])
        out = tmp_path / "r.json"
        code = main(["extend", "--problem", prob, "--eval", evals, "--output", str(out)])
        assert code == 1
        report = json.loads(out.read_text())
        assert report["feasible"] is False
        assert "witness" in report

    def test_matrix_ball(self, tmp_path):
        prob = write(
            tmp_path / "prob.json",
            {
                "sample": {"kernel": {"type": "szego"}, "points": [[0, 0], [0.4, 0]]},
                "targets": {
                    "matrix": {
                        "mu": 1,
                        "nu": 2,
                        "data": [
                            [[[0.1, 0], [0.2, 0]]],
                            [[[0.15, 0], [0.1, 0.05]]],
                        ],
                    }
                },
            },
        )
        evals = write(tmp_path / "new.json", [[0.2, 0.2]])
        out = tmp_path / "r.json"
        code = main(["extend", "--problem", prob, "--eval", evals, "--output", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["feasible"] is True
        assert len(report["ball"]["center"]) == 1
        assert len(report["ball"]["right_factor"]) == 2


class TestCheckEquivalencesCommand:
    def test_all_pass(self, tmp_path, monkeypatch):
        out = tmp_path / "r.json"
        code = main(["check-equivalences", "--seed", "1729", "--output", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["all_passed"] is True
        assert report["certificate_equivalence"]["agreements"] == 500
        assert report["norm_pick"]["agreements"] == 300
        assert report["vector_complete"]["row_extension_ok"] == 100


class TestOutputRouting:
    def test_report_to_stdout_without_output_flag(self, szego_points_file, capsys):
        code = main(["certify", "--points", szego_points_file])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["command"] == "certify" and report["verdict"] is True

    def test_module_entry_point(self, szego_points_file, tmp_path):
        import subprocess
        import sys

        out = tmp_path / "r.json"
        proc = subprocess.run(
            [sys.executable, "-m", "cnpkit", "certify", "--points",
             szego_points_file, "--output", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0
        assert json.loads(out.read_text())["verdict"] is True


class TestSeedHandling:
    def test_env_var_overrides_flag(self, szego_points_file, tmp_path, monkeypatch):
        monkeypatch.setenv("CNPKIT_SEED", "777")
        out = tmp_path / "r.json"
        main(["certify", "--points", szego_points_file, "--seed", "3", "--output", str(out)])
        assert json.loads(out.read_text())["seed"] == 777

    def test_bad_env_var_exits_two(self, szego_points_file, monkeypatch, capsys):
        monkeypatch.setenv("CNPKIT_SEED", "not-an-int")
        assert main(["certify", "--points", szego_points_file]) == 2


class TestDeterminism:
    def test_reports_byte_identical(self, szego_points_file, phi_problem_file, tmp_path):
        evals = write(tmp_path / "evals.json", [[0.25, 0]])
        gram_doc = {
            "type": "gram",
            "matrix": [[[1, 0], [0.5, 0]], [[0.5, 0], [1, 0]]],
        }
        gram_file = write(tmp_path / "g.json", gram_doc)
        runs = {
            "certify": ["certify", "--points", szego_points_file],
            "embed": ["embed", "--points", szego_points_file],
            "embed-csv": ["embed", "--points", szego_points_file, "--format", "csv"],
            "interpolate": [
                "interpolate", "--problem", phi_problem_file, "--eval", evals,
            ],
            "extend": ["extend", "--problem", phi_problem_file, "--eval", evals],
            "partition": ["partition", "--points", gram_file],
            "check-equivalences": ["check-equivalences"],
        }
        for name, argv in runs.items():
            out1 = tmp_path / f"{name}-1.out"
            out2 = tmp_path / f"{name}-2.out"
            assert main(argv + ["--output", str(out1)]) == main(
                argv + ["--output", str(out2)]
            )
            assert out1.read_bytes() == out2.read_bytes(), name
