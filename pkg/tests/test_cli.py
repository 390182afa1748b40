import json

import pytest

from phylofix.cli import main, parse_config
from phylofix.core import from_newick, is_fixed, parse_permutation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["count", "fixed-trees", "--partition", "8,4,2"], "33"),
        (["count", "fixed-trees", "--partition", "2,8,4"], "33"),
        (["count", "fixed-trees", "--partition", "3,1"], "0"),
        (["count", "chains", "--n", "4", "--k", "2"], "13"),
        (["count", "chains", "--n", "5", "--k", "2"], "114"),
    ],
)
def test_count(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == expected


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "fixed-trees", "--partition", "2,x"],
        ["count", "fixed-trees", "--partition", "0,2"],
        ["count", "fixed-trees"],
        ["count", "chains", "--n", "0", "--k", "2"],
        ["count", "chains", "--n", "3", "--k", "0"],
    ],
)
def test_count_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code != 0 and out == "" and "error" in err


def test_sample_single_cycle_tree(capsys):
    for seed in ("7", "8"):
        code, out, _ = run(capsys, "sample", "tree", "--permutation", "(1,2,3,4)", "--seed", seed)
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("#") and f"seed={seed}" in lines[0]
        assert lines[1:] == ["((1,3),(2,4));"]


def test_sample_tree_empty_support(capsys):
    code, out, err = run(capsys, "sample", "tree", "--permutation", "(1,2,3)", "--seed", "1")
    assert code == 2 and out == "" and "empty support" in err


def test_sample_tree_fixed_and_json(capsys):
    code, out, _ = run(capsys, "sample", "tree", "--permutation", "(1,2)(3,4)(5,6,7,8)", "--n", "10",
                       "--seed", "3", "--count", "5", "--format", "json")
    doc = json.loads(out)
    assert set(doc) >= {"n", "k", "seed", "trees"} and doc["seed"] == 3 and doc["n"] == 10
    sigma = parse_permutation("(1,2)(3,4)(5,6,7,8)", range(1, 11))
    assert len(doc["trees"]) == 5
    assert all(is_fixed(from_newick(t), sigma) for t in doc["trees"])


def test_sample_chain_deterministic(capsys):
    argv = ["sample", "chain", "--n", "3", "--k", "2", "--seed", "1", "--count", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    body = first.splitlines()[1:]
    chains = [block for block in "\n".join(body).split("\n\n")]
    assert len(chains) == 3
    assert all(len(c.splitlines()) == 2 for c in chains)


def test_sample_workers_do_not_change_output(capsys):
    argv = ["sample", "chain", "--n", "6", "--k", "2", "--seed", "99", "--count", "12", "--format", "json"]
    _, serial, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--workers", "3")
    assert serial == parallel


def test_sample_auto_seed_is_reported(capsys):
    code, out, _ = run(capsys, "sample", "chain", "--n", "4", "--k", "2", "--format", "json")
    seed = json.loads(out)["seed"]
    assert 0 <= seed < 2**64
    _, again, _ = run(capsys, "sample", "chain", "--n", "4", "--k", "2", "--format", "json", "--seed", str(seed))
    assert again == out


def test_sample_partition_frequency_table(capsys):
    code, out, _ = run(capsys, "sample", "partition", "--n", "4", "--k", "2", "--count", "100000", "--seed", "5")
    assert code == 0
    lines = out.splitlines()
    rows = [l.split("\t") for l in lines if not l.startswith(("#", "tv="))]
    assert {r[0] for r in rows} == {"4", "2,2", "2,1,1", "1,1,1,1"}
    assert sum(int(r[1]) for r in rows) == 100000
    tv = float(lines[-1].split("=")[1])
    assert tv < 0.01


def test_sample_partition_json(capsys):
    _, out, _ = run(capsys, "sample", "partition", "--n", "8", "--k", "2", "--count", "50", "--seed", "5",
                    "--format", "json")
    doc = json.loads(out)
    assert doc["count"] == 50 and sum(doc["partitions"].values()) == 50


def test_enumerate(capsys):
    _, out, _ = run(capsys, "enumerate", "--n", "3")
    assert out.splitlines() == ["((1,2),3);", "((1,3),2);", "(1,(2,3));", "count=3"]
    _, out, _ = run(capsys, "enumerate", "--n", "4", "--fixed-by", "(1,2)(3,4)")
    assert len(out.splitlines()) == 4 and out.splitlines()[-1] == "count=3"
    _, out, _ = run(capsys, "enumerate", "--n", "1")
    assert out.splitlines() == ["1;", "count=1"]


def test_enumerate_guard(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "12")
    assert code == 2 and "9" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "5")
    assert code == 0
    assert out.splitlines() and all(line.startswith("PASS") for line in out.splitlines())


def test_verify_guard(capsys):
    code, out, err = run(capsys, "verify", "--max-n", "20")
    assert code == 2 and "guard" in err


def test_config_dataclass():
    cfg = parse_config(["sample", "chain", "--n", "5", "--seed", "3"])
    assert (cfg.command, cfg.target, cfg.n, cfg.k, cfg.seed, cfg.count) == ("sample", "chain", 5, 2, 3, 1)
