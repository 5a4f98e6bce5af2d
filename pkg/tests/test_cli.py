import json

import pytest

from tvhom.cli import main, parse_args
from tvhom.io import read_csv_report

PAIR_A_TWICE = {"n": 2, "m": 2, "P": [[0.5, 0.5], [0.5, 0.5]], "Q": [[0.75, 0.25], [0.75, 0.25]]}


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(PAIR_A_TWICE))
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestParseArgs:
    def test_seed_default(self, monkeypatch):
        monkeypatch.delenv("TVH_SEED", raising=False)
        assert parse_args(["verify"]).seed == 42

    def test_seed_env(self, monkeypatch):
        monkeypatch.setenv("TVH_SEED", "9")
        assert parse_args(["verify"]).seed == 9
        assert parse_args(["verify", "--seed", "3"]).seed == 3

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["verify", "--n-min", "4", "--n-max", "2"],
            ["verify", "--count", "-1"],
            ["constants", "--grid-lo", "0.5", "--grid-hi", "0.1"],
            ["constants", "--grid-steps", "3"],
            ["tv-product"],
            ["tv-product", "-i", "x.json", "--smooth", "1.5"],
            ["search", "--family", "poisson"],
        ],
    )
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as exc:
            parse_args(argv)
        assert exc.value.code == 2

    def test_lambdas(self):
        assert parse_args(["verify", "--lambdas", "1,2.5"]).lambdas == (1.0, 2.5)


class TestFileCommands:
    def test_tv_product(self, capsys, pair_file):
        code, out = run_json(capsys, ["tv-product", "-i", pair_file])
        assert code == 0
        assert out["tv_product"] == pytest.approx(0.3125, abs=1e-15)

    def test_tv_homog(self, capsys, pair_file):
        code, out = run_json(capsys, ["tv-homog", "-i", pair_file])
        assert code == 0
        assert out["tv_homogenized"] == pytest.approx(0.3125, abs=1e-15)

    def test_oracle(self, capsys, pair_file):
        code, out = run_json(capsys, ["oracle", "-i", pair_file])
        assert code == 0
        assert out["match"] is True
        assert out["tv_bruteforce"] == pytest.approx(0.3125, abs=1e-15)

    def test_encode(self, capsys, pair_file):
        code, out = run_json(capsys, ["encode", "-i", pair_file])
        assert code == 0
        assert len(out["etas"]) == 2
        assert all(a["admissible"] for a in out["admissibility"])
        assert out["t_values"] == pytest.approx([0.25, 0.25], abs=1e-15)

    def test_out_file(self, tmp_path, pair_file):
        dest = tmp_path / "out.json"
        assert main(["tv-product", "-i", pair_file, "-o", str(dest)]) == 0
        assert json.loads(dest.read_text())["tv_product"] == pytest.approx(0.3125)

    def test_smoothing_zero_entries(self, capsys, tmp_path):
        path = tmp_path / "z.json"
        path.write_text(json.dumps({"n": 1, "m": 2, "P": [[1.0, 0.0]], "Q": [[0.5, 0.5]]}))
        assert main(["tv-product", "-i", str(path)]) == 2
        capsys.readouterr()
        code, out = run_json(capsys, ["tv-product", "-i", str(path), "--smooth", "0.01"])
        assert code == 0
        assert out["tv_product"] == pytest.approx(0.495, abs=1e-12)
        assert out["smoothing"]["value_at_delta_over_10"] == pytest.approx(0.4995, abs=1e-12)


class TestInputErrors:
    @pytest.mark.parametrize(
        "text,needle",
        [
            ("{not json", "line 1"),
            ('{"n": 1, "m": 2, "P": [[0.5, 0.5]]}', "'Q'"),
            ('{"n": 1, "m": 2, "P": [[0.5, "a"]], "Q": [[0.5, 0.5]]}', "P[0][1]"),
            ('{"n": 2, "m": 2, "P": [[0.5, 0.5]], "Q": [[0.5, 0.5]]}', "expected n = 2"),
            ('{"n": 1, "m": 2, "P": [[0.5, 0.6]], "Q": [[0.5, 0.5]]}', "P[0]"),
        ],
    )
    def test_exit_2(self, tmp_path, caplog, text, needle):
        path = tmp_path / "bad.json"
        path.write_text(text)
        assert main(["tv-product", "-i", str(path)]) == 2
        assert needle in caplog.text

    def test_missing_file(self, tmp_path):
        assert main(["oracle", "-i", str(tmp_path / "nope.json")]) == 2


class TestConstants:
    def test_default(self, capsys):
        code, out = run_json(capsys, ["constants"])
        assert code == 0
        assert out["c0_upper"] <= 6.7129
        assert out["c_lower"] >= 0.1489
        assert out["at_eps"]["c_eps"] == pytest.approx(6.71287, abs=1e-3)

    def test_infeasible_grid(self):
        assert main(["constants", "--grid-lo", "10", "--grid-hi", "20"]) == 2


class TestVerify:
    def test_json_summary(self, capsys):
        code, out = run_json(capsys, ["verify", "--count", "15", "--summary-only"])
        assert code == 0
        assert out["summary"]["instances"] == 15
        assert out["config"]["seed"] == 42
        assert "reports" not in out

    def test_csv_round_trip(self, capsys):
        assert main(["verify", "--count", "5", "--format", "csv"]) == 0
        rows = read_csv_report(capsys.readouterr().out)
        assert {r["instance_id"] for r in rows} == set(range(5))
        assert all(r["status"] in ("pass", "skip") for r in rows)

    def test_seed_changes_corpus(self, capsys):
        _, a = run_json(capsys, ["verify", "--count", "3", "--seed", "1", "--summary-only"])
        _, b = run_json(capsys, ["verify", "--count", "3", "--seed", "2", "--summary-only"])
        assert a["summary"]["max_ratio"] != b["summary"]["max_ratio"]

    def test_file(self, capsys, pair_file):
        code, out = run_json(capsys, ["verify", "-i", pair_file])
        assert code == 0
        assert out["reports"][0]["quantities"]["ratio"] == pytest.approx(1.0)


def test_search(capsys):
    code, out = run_json(capsys, ["search", "--restarts", "2", "--steps", "5", "--n-max", "4"])
    assert code == 0
    assert out["best_ratio"] >= 0
    assert out["restarts"] == 2
