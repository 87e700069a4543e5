import csv
import io
import subprocess
import sys

import pytest

from overlap_graph_lab import cli, covers
from overlap_graph_lab.graph import Graph, read_edge_list, write_edge_list


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_generate_is_deterministic(capsys, tmp_path):
    argv = ["generate", "--n", "30", "--m", "20", "--dist", "point:x=4,y=0.6", "--seed", "5"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    _, second, _ = run(capsys, *argv)
    assert first == second
    n, m = map(int, first.splitlines()[0].split())
    assert n == 30 and m == len(first.splitlines()) - 1


def test_generate_writes_files(capsys, tmp_path):
    out, layers = tmp_path / "g.txt", tmp_path / "layers.txt"
    code, _, _ = run(capsys, "generate", "--n", "20", "--m", "6", "--dist", "point:x=3,y=1",
                     "--out", str(out), "--layers", str(layers))
    assert code == 0
    g = read_edge_list(out)
    assert g.n == 20
    dump = layers.read_text().splitlines()
    assert len(dump) == 6 and all(" : " in line for line in dump)


def test_generate_oversized_layer_is_a_guard_error(capsys):
    code, _, err = run(capsys, "generate", "--n", "4", "--m", "2", "--dist", "point:x=6,y=0.5")
    assert code == 3
    assert "exceeds n=4" in err


def test_count(capsys, tmp_path):
    path = tmp_path / "k5.txt"
    write_edge_list(Graph.complete(5), path)
    code, out, _ = run(capsys, "count", "--in", str(path), "--pattern", "clique:3", "--pattern", "cycle:5",
                       "--pattern", "custom:0-1,1-2")
    assert code == 0
    got = {r["pattern"]: int(r["count"]) for r in rows(out)}
    assert got == {"clique:3": 10, "cycle:5": 12, "custom:0-1,1-2": 30}
    assert out.splitlines()[0] == "pattern,count,elapsed_ms"


def test_count_cycle_range_guard(capsys, tmp_path):
    path = tmp_path / "c9.txt"
    write_edge_list(Graph.cycle(9), path)
    # beyond r_max the brute-force counter takes over, which is fine on 9 nodes
    code, out, _ = run(capsys, "count", "--in", str(path), "--pattern", "cycle:9")
    assert code == 0 and rows(out)[0]["count"] == "1"
    code, out, _ = run(capsys, "count", "--in", str(path), "--pattern", "cycle:9", "--r-max", "9")
    assert code == 0 and rows(out)[0]["count"] == "1"
    big = tmp_path / "c13.txt"
    write_edge_list(Graph.cycle(13), big)
    code, _, err = run(capsys, "count", "--in", str(big), "--pattern", "cycle:9")
    assert code == 3 and "error" in err


def test_count_rejects_malformed_input(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 2\n0 1\n0 1\n")
    code, _, err = run(capsys, "count", "--in", str(path), "--pattern", "clique:3")
    assert code == 1 and "line 3" in err


def test_theory(capsys):
    code, out, _ = run(capsys, "theory", "--n", "1000", "--m", "1000", "--dist", "point:x=5,y=0.5",
                       "--pattern", "clique:3", "--pattern", "cycle:4")
    assert code == 0
    header = "pattern,leading,U,L_upper,f_lower,f_upper,EN_lower,EN_upper,p_er"
    assert out.splitlines()[0] == header
    k3, c4 = rows(out)
    assert float(k3["leading"]) == pytest.approx(1250)
    assert float(c4["leading"]) == pytest.approx(937.5)
    for r in (k3, c4):
        assert 0 <= float(r["EN_lower"]) <= float(r["EN_upper"])
        assert float(r["p_er"]) == pytest.approx(1 - (1 - 10 / 999000) ** 1000)


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "500", "--m", "0", "--dist", "point:x=5,y=0.5", "--pattern", "clique:3")
    assert code == 0
    (r,) = rows(out)
    assert float(r["u_bound"]) == 0 and float(r["l_bound"]) == 0
    code, out, _ = run(capsys, "bounds", "--n", "500", "--m", "100", "--dist", "point:x=5,y=0.5",
                       "--pattern", "cycle:4", "--x", "6", "--y", "0.5")
    (r,) = rows(out)
    assert float(r["x"]) == 6 and float(r["u_bound"]) > 0
    code, _, _ = run(capsys, "bounds", "--n", "4", "--m", "3", "--dist", "point:x=5,y=0.5", "--pattern", "clique:3")
    assert code == 3


@pytest.mark.parametrize(
    "argv, cases",
    [
        (["--lemma", "1", "--pattern", "clique:3"], None),
        (["--lemma", "2", "--pattern", "clique:3", "--pattern2", "clique:3"], 203),
        (["--lemma", "6"], 3 + 31 + 511),
        (["--lemma", "6", "--pattern", "clique:4"], 31),
    ],
)
def test_verify(capsys, argv, cases):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0
    assert out.splitlines()[0] == "lemma,cases_checked,violations"
    lemma, checked, violations = out.splitlines()[1].split(",")
    assert violations == "0"
    if cases is not None:
        assert int(checked) == cases


def test_verify_violation_exit_code(capsys, monkeypatch):
    def broken(r):
        return covers.CheckReport("6", cases_checked=1, violations=1)

    monkeypatch.setattr(covers, "check_clique_splits", broken)
    code, out, _ = run(capsys, "verify", "--lemma", "6", "--pattern", "clique:3")
    assert code == 2
    assert out.splitlines()[1] == "6,1,1"


def test_experiment_and_summarize(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for n, path in (("40", a), ("80", b)):
        code, out, _ = run(capsys, "experiment", "--n", n, "--dist", "point:x=4,y=0.5", "--pattern", "clique:3",
                           "--replicates", "3", "--seed", "1", "--out", str(path))
        assert code == 0
        assert out.startswith("n,m,pattern,replicates,mean_count")
    assert a.read_text().startswith("# overlap-graph-lab v1\n")
    code, out, _ = run(capsys, "summarize", str(a), str(b))
    assert code == 0
    assert [r["n"] for r in rows(out)] == ["40", "80"]
    code, _, err = run(capsys, "summarize", str(a))
    assert code == 1


def test_experiment_config_file_and_override(capsys, tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("n = 30\ndist = point:x=3,y=1\npatterns = clique:3\nreplicates = 2\nseed = 4\n")
    code, out, err = run(capsys, "experiment", "--config", str(conf))
    assert code == 0
    body = rows(out.split("\n", 1)[1])
    assert len(body) == 2 and {r["n"] for r in body} == {"30"}
    code, out, _ = run(capsys, "experiment", "--config", str(conf), "--replicates", "4", "--m", "7")
    body = rows(out.split("\n", 1)[1])
    assert len(body) == 4 and {r["m"] for r in body} == {"7"}


def test_experiment_guard_exit(capsys, tmp_path, monkeypatch):
    from overlap_graph_lab import experiment

    monkeypatch.setattr(experiment.ExperimentConfig, "validate", lambda self: None)
    code, out, _ = run(capsys, "experiment", "--n", "6", "--dist", "binom:N=12,p=0.5,y=0.5", "--pattern", "clique:3",
                       "--replicates", "2")
    assert code == 3
    assert "# error" in out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["verify"],
        ["verify", "--lemma", "3"],
        ["count", "--in"],
        ["generate", "--n", "ten"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--n", "10", "--m", "3"],
        ["generate", "--n", "10", "--m", "3", "--dist", "gauss:mu=1"],
        ["theory", "--n", "10", "--m", "3", "--dist", "point:x=3,y=0.5", "--pattern", "wheel:5"],
        ["experiment", "--n", "10", "--dist", "point:x=3,y=0.5", "--pattern", "clique:3", "--replicates", "0"],
        ["experiment", "--config", "/nonexistent/run.conf"],
    ],
)
def test_config_errors_exit_1(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_regime_demo_zero_strength(capsys):
    code, out, err = run(capsys, "regime-demo", "--n", "100", "--p", "0", "--replicates", "2")
    assert code == 0
    (r,) = rows(out)
    assert float(r["mean_C4"]) == 0 and float(r["mean_K4"]) == 0
    assert "warning" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "overlap_graph_lab", "bounds", "--n", "100", "--m", "0",
                           "--dist", "point:x=3,y=1", "--pattern", "clique:3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("pattern,x,y,c,u_bound,l_bound")
