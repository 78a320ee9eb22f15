import json
import subprocess
import sys

import pytest

from sandpile_lab.cli import main, read_config_file, UsageError
from sandpile_lab.graph_core import example_graph

GRAPH = json.dumps(example_graph().to_json())
RUNNING = json.dumps({"m": 4, "n": 6, "nonsink": [1, 2, 2, 3, 3, 3], "sinkpart": [0, 3, 5]})
UP, LO = "ENNENENN", "NNNEENENN"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.count("\n") == 1
    return json.loads(out)


def test_classify(capsys):
    data = run_json(capsys, "classify", "--graph", GRAPH, "--config", "[0,0,2,0,2,2]")
    assert data == {"parking": False, "recurrent": False, "stable": True}
    data = run_json(capsys, "classify", "--graph", GRAPH, "--config", '{"heights":[1,1,2,2,2,2]}')
    assert data["recurrent"] and not data["parking"]


def test_classify_unstable_is_not_an_error(capsys):
    data = run_json(capsys, "classify", "--graph", GRAPH, "--config", "[0,0,2,1,-1,3]")
    assert data == {"parking": False, "recurrent": False, "stable": False}


def test_inputs_from_files(capsys, tmp_path):
    (tmp_path / "g.json").write_text(GRAPH)
    (tmp_path / "c.json").write_text("[0,0,0,0,0,0]")
    data = run_json(capsys, "classify", "--graph", str(tmp_path / "g.json"),
                    "--config", str(tmp_path / "c.json"))
    assert data["parking"]


@pytest.mark.parametrize("op, output, extra", [
    ("psi", [1, 1, 0, 0, 2, 2], {"subset": [1, 2]}),
    ("beta", [1, 1, 0, 2, 0, 0], {}),
    ("recurrent", [1, 1, 2, 2, 2, 2], {"steps": 9}),
])
def test_apply_general(capsys, op, output, extra):
    data = run_json(capsys, "apply", "--graph", GRAPH, "--config", "[0,0,2,0,2,2]", "--op", op)
    assert data["output"] == output
    for key, value in extra.items():
        assert data[key] == value


def test_apply_bipartite(capsys):
    data = run_json(capsys, "apply", "--bipartite", RUNNING, "--op", "phi")
    assert data["output"] == {"m": 4, "n": 6, "nonsink": [0, 0, 1, 1, 1, 3], "sinkpart": [2, 4, 5]}
    assert data["grade"] == 2
    data = run_json(capsys, "apply", "--bipartite", RUNNING, "--op", "rho-beta")
    assert data["output"]["nonsink"] == [0, 0, 0, 1, 1, 2]


def test_walk_bipartite(capsys):
    data = run_json(capsys, "walk", "--bipartite", RUNNING)
    assert [w["grade"] for w in data["walk"]] == [3, 2, 1, 0]
    assert data["walk"][-1]["nonsink"] == [0, 0, 0, 2, 3, 3]
    assert data["index_of_input"] == 0


def test_walk_general(capsys):
    data = run_json(capsys, "walk", "--graph", GRAPH, "--config", "[1,1,0,0,2,2]")
    assert data["steps"] == 10 and data["trajectory"][-1] == [0] * 6


def test_frame(capsys):
    data = run_json(capsys, "frame", "--upper", UP, "--lower", LO, "--anchor", "5,9")
    assert data["measure"] == {"nonsink": [1, 2, 2, 3, 3, 3], "sinkpart": [0, 3, 5]}
    assert data["stable_intersections"] == [[5, 9], [3, 4], [2, 3], [0, 0]]
    assert data["is_stable_intersection"]
    nxt = run_json(capsys, "frame", "--upper", UP, "--lower", LO, "--anchor", "5,9",
                   "--jump", "next")
    assert nxt["anchor"] == [3, 4]


def test_frame_from_bipartite(capsys):
    data = run_json(capsys, "frame", "--bipartite", RUNNING)
    assert data["measure"]["nonsink"] == [1, 2, 2, 3, 3, 3]


def test_cyclic_verify(capsys):
    data = run_json(capsys, "cyclic-verify", "--m", "3", "--n", "3")
    assert data["agree"] and data["parts"] == 20
    data = run_json(capsys, "cyclic-verify", "--m", "4", "--n", "6", "--pair", UP, LO)
    assert data["agree"] and data["mode"] == "sample"


def test_enumerate_and_count(capsys):
    data = run_json(capsys, "enumerate", "--m", "2", "--n", "2")
    assert data["count"] == 3
    assert data["polyominoes"][0] == {"lower": "EENN", "upper": "NENE"}
    assert run_json(capsys, "enumerate", "--pattern", "ENEN")["count"] == 1
    assert run_json(capsys, "count", "--m", "2", "--n", "2", "--brute") == \
        {"agree": True, "brute": 3, "formula": 3, "m": 2, "n": 2}
    data = run_json(capsys, "count", "--kind", "double", "--a", "1", "--b", "2", "--c", "1",
                    "--brute")
    assert data["formula"] == data["brute"] == 3


def test_kn(capsys):
    data = run_json(capsys, "kn", "--n", "5", "--heights", "0,2,2,3", "--engine", "general")
    assert data["output"] == [3, 0, 0, 1] and data["k"] == 2
    assert data["lifted"][1] == {"nonsink": [1, 2, 3, 4, 0], "sinkpart": [2, 4, 4, 0]}
    back = run_json(capsys, "kn", "--n", "5", "--heights", "0,0,1,3", "--op", "psi")
    assert back["output"] == [0, 2, 2, 3]


def test_render_ascii_to_stdout_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "render", "--polyomino", "NNEE", "EENN")
    assert code == 0 and out.startswith("+") and "###" in out
    target = tmp_path / "pair.svg"
    code, out, _ = run(capsys, "render", "--polyomino", "NNEE", "EENN", "--format", "svg",
                       "--out", str(target))
    assert code == 0 and json.loads(out) == {"written": str(target)}
    assert target.read_text().startswith("<svg")


def test_render_png(capsys, tmp_path):
    target = tmp_path / "pair.png"
    code, _, _ = run(capsys, "render", "--upper", UP, "--lower", LO, "--anchor", "5,9",
                     "--format", "png", "--out", str(target))
    assert code == 0 and target.stat().st_size > 0


def test_table_format(capsys):
    code, out, _ = run(capsys, "walk", "--bipartite", RUNNING, "--format", "table")
    assert code == 0
    assert out.startswith("index_of_input") and out.count("--") == 3


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "1", "2")
    assert code == 0
    assert out.splitlines()[-1] == "2/2 criteria passed"
    assert all(line.startswith("[PASS]") for line in out.splitlines()[:-1])


def test_output_is_deterministic(capsys):
    argv = ["enumerate", "--m", "3", "--n", "3", "--threads", "2"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


@pytest.mark.parametrize("argv", [
    ["classify", "--graph", GRAPH, "--config", "[0,0,3,0,0,0]", "--nope"],
    ["kn", "--n", "5"],
    ["frame", "--anchor", "5;9", "--upper", UP, "--lower", LO],
    ["nonexistent"],
])
def test_argparse_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["classify", "--graph", "{not json", "--config", "[0]"],
    ["classify", "--graph", "/no/such/file.json", "--config", "[0]"],
    ["apply", "--op", "psi"],
    ["apply", "--bipartite", RUNNING, "--op", "beta"],
    ["frame", "--upper", UP],
    ["render", "--polyomino", "NNEE", "EENN", "--format", "png"],
    ["count", "--kind", "simple", "--a", "1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--graph", '{"vertices": 3, "edges": [[1, 2]]}', "--config", "[0, 0]"],
    ["apply", "--graph", GRAPH, "--config", "[0,0,3,0,0,0]", "--op", "psi"],
    ["kn", "--n", "4", "--heights", "0,0,3"],
    ["enumerate", "--m", "9", "--n", "9"],
    ["count", "--kind", "double", "--a", "2", "--b", "2", "--c", "1"],
    ["render", "--polyomino", "NENE", "ENEN"],
    ["frame", "--upper", UP, "--lower", LO, "--anchor", "2,7", "--jump", "next"],
    ["cyclic-verify", "--m", "4", "--n", "6", "--pair", "EN", "NEN"],
])
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and err


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("# lab settings\nthreads = 2\nenum_bound = 4  # tiny\n")
    assert read_config_file(str(cfg))["threads"] == 2
    code, _, err = run(capsys, "--config-file", str(cfg), "enumerate", "--m", "3", "--n", "3")
    assert code == 1 and "bound 4" in err
    assert run_json(capsys, "--config-file", str(cfg), "enumerate", "--m", "3", "--n", "3",
                    "--bound", "6")["count"] == 20


@pytest.mark.parametrize("text", ["threads 2\n", "colour = red\n", "threads = many\n"])
def test_bad_config_file(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    with pytest.raises(UsageError):
        read_config_file(str(cfg))


def test_missing_config_file_exits_2(capsys):
    code, _, _ = run(capsys, "--config-file", "/no/such.cfg", "count", "--m", "2", "--n", "2")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sandpile_lab", "count", "--m", "3", "--n", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["formula"] == 20
