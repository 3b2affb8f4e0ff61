import json

import pytest

from qitest.cli import main


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture
def sample_csv(tmp_path):
    return write(tmp_path, "d.csv",
                 "entry,exit,event\n0,3,1\n1,2,0\n1.5,4,1\n0.5,5,0\n2,6,1\n"
                 "0.2,2.6,0\n1.1,3.3,1\n0.8,4.4,0\n2.5,5.5,1\n0.1,1.9,0\n")


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestTestCommand:
    def test_table_output(self, capsys, sample_csv):
        code, out = run(capsys, ["test", sample_csv, "--event", "event",
                                 "--g", "sign", "--h", "sign"])
        assert code == 0
        assert "chi-square" in out

    def test_json_output(self, capsys, sample_csv):
        code, out = run(capsys, ["test", sample_csv, "--event", "event", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["censored_mode"] is True
        assert 0 <= doc["result"]["p_value"] <= 1

    def test_uncensored_when_no_event_column(self, capsys, tmp_path):
        path = write(tmp_path, "u.csv",
                     "entry,exit\n0,3\n1,2\n0.5,4\n1.2,5\n0.2,2.5\n")
        code, out = run(capsys, ["test", path, "--format", "json"])
        assert code == 0
        assert json.loads(out)["result"]["censored_mode"] is False

    def test_reverse_flag(self, capsys, sample_csv):
        code, out = run(capsys, ["test", sample_csv, "--event", "event",
                                 "--reverse", "--format", "json"])
        assert code == 0

    def test_assumption_warning_for_non_sign_exit(self, capsys, sample_csv):
        code, out = run(capsys, ["test", sample_csv, "--event", "event",
                                 "--g", "linear", "--h", "linear", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert any("reversed-role" in w for w in doc["warnings"])

    def test_missing_file_exit_code(self, capsys, tmp_path):
        code = main(["test", str(tmp_path / "absent.csv")])
        assert code == 2

    def test_validation_exit_code(self, capsys, tmp_path):
        path = write(tmp_path, "bad.csv", "entry,exit\n3,3\n")
        code = main(["test", path])
        assert code == 3

    def test_degenerate_exit_code(self, capsys, tmp_path):
        # disjoint windows: no comparable pairs
        path = write(tmp_path, "deg.csv", "entry,exit\n0,1\n5,6\n10,11\n")
        code = main(["test", path])
        assert code == 4


class TestChanningCommand:
    def test_both_groups_row_count(self, capsys):
        code, out = run(capsys, ["channing", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        rows = doc["result"]
        assert len(rows) == 16  # 5 association + 3 reversed, per group
        men_assoc = [r for r in rows if r["group"] == "men" and r["table"] == "association"]
        assert len(men_assoc) == 5

    def test_published_values(self, capsys):
        code, out = run(capsys, ["channing", "--group", "men", "--format", "json"])
        rows = json.loads(out)["result"]
        ss = next(r for r in rows if r["table"] == "association"
                  and r["g_kernel"] == "sign" and r["h_kernel"] == "sign")
        assert ss["statistic"] == pytest.approx(3.972, abs=0.1)
        assert ss["p_value"] == pytest.approx(0.046, abs=0.005)

    def test_csv_format(self, capsys):
        code, out = run(capsys, ["channing", "--group", "women", "--format", "csv"])
        assert code == 0
        assert out.splitlines()[0] == "group,table,g_kernel,h_kernel,statistic,p_value"
        assert len(out.strip().splitlines()) == 9


class TestSimulateCommand:
    def test_small_run(self, capsys):
        code, out = run(capsys, ["simulate", "--scenario", "exp-null", "--n", "60",
                                 "--reps", "10", "--seed", "5", "--threads", "1",
                                 "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert len(doc["result"]) == 5
        assert doc["seeds"] == [5]

    def test_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("QITEST_SEED", "123")
        code, out = run(capsys, ["simulate", "--scenario", "exp-null", "--n", "50",
                                 "--reps", "4", "--threads", "1", "--format", "json"])
        assert code == 0
        assert json.loads(out)["seeds"] == [123]


class TestAreCommand:
    def test_table(self, capsys):
        code, out = run(capsys, ["are", "--format", "csv"])
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 25  # header + 24 cells

    def test_no_regularize_fails_cleanly(self, capsys):
        code = main(["are", "--no-regularize"])
        assert code == 6


class TestCoxCheckCommand:
    def test_identities_reported(self, capsys, sample_csv):
        code, out = run(capsys, ["cox-check", sample_csv, "--event", "event",
                                 "--format", "json"])
        assert code == 0
        rows = json.loads(out)["result"]
        for row in rows:
            assert row["sweep"] == pytest.approx(row["direct"], rel=1e-12, abs=1e-12)
            assert row["sweep"] == pytest.approx(row["pairwise_form"], rel=1e-12, abs=1e-12)
