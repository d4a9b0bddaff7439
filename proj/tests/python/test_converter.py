import os
import pathlib
import pickle
import subprocess
import sys

import numpy as np
import pytest
import scipy.sparse as sp

ROOT = pathlib.Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "tools"))
import planetoid_to_tsv as conv  # noqa: E402


def read_out(out):
    header, *rows = (out / "attrs.tsv").read_text().splitlines()
    edges = [tuple(map(int, l.split("\t"))) for l in (out / "edges.tsv").read_text().splitlines()]
    labels = dict(tuple(map(int, l.split("\t"))) for l in (out / "labels.tsv").read_text().splitlines())
    return header, [tuple(map(int, r.split("\t"))) for r in rows], edges, labels


def test_linqs(tmp_path):
    (tmp_path / "cora.content").write_text("p10\t1\t0\t1\tTheory\np3\t0\t1\t0\tAI\np7\t0\t0\t0\tTheory\n")
    (tmp_path / "cora.cites").write_text("p10\tp3\np3\tp10\np3\tp3\np7\tghost\np7\tp10\n")
    assert conv.main([str(tmp_path), str(tmp_path / "out")]) == 0
    header, attrs, edges, labels = read_out(tmp_path / "out")
    assert header == "3\t3"
    assert attrs == [(0, 0, 1), (0, 2, 1), (1, 1, 1)]
    assert edges == [(0, 1), (0, 2)]
    assert labels == {0: 1, 1: 0, 2: 1}


def test_planetoid_reorders_test_rows(tmp_path):
    allx = sp.csr_matrix(np.array([[1, 0, 0], [0, 1, 0]]))
    ally = np.array([[1, 0], [0, 1]])
    tx = sp.csr_matrix(np.array([[0, 0, 1], [1, 1, 0]]))  # rows for test ids 3 then 2
    ty = np.array([[0, 1], [1, 0]])
    parts = {"x": allx[:1], "y": ally[:1], "allx": allx, "ally": ally, "tx": tx, "ty": ty,
             "graph": {0: [1, 3], 1: [0], 2: [3], 3: [0, 2]}}
    for k, v in parts.items():
        with open(tmp_path / f"ind.cora.{k}", "wb") as fh:
            pickle.dump(v, fh)
    (tmp_path / "ind.cora.test.index").write_text("3\n2\n")
    assert conv.main([str(tmp_path), str(tmp_path / "out"), "--format", "planetoid"]) == 0
    header, attrs, edges, labels = read_out(tmp_path / "out")
    assert header == "4\t3"
    assert attrs == [(0, 0, 1), (1, 1, 1), (2, 0, 1), (2, 1, 1), (3, 2, 1)]
    assert edges == [(0, 1), (0, 3), (2, 3)]
    assert labels == {0: 0, 1: 1, 2: 0, 3: 1}


def test_output_loads_in_the_cli(tmp_path):
    exe = pathlib.Path(os.environ.get("SATGRAPH", ROOT / "build" / "tools" / "satgraph"))
    if not exe.exists():
        pytest.skip("satgraph not built")
    (tmp_path / "cora.content").write_text("".join(f"p{i}\t{i % 2}\t{1 - i % 2}\tC{i % 2}\n" for i in range(12)))
    (tmp_path / "cora.cites").write_text("".join(f"p{i}\tp{(i + 1) % 12}\n" for i in range(12)))
    assert conv.main([str(tmp_path), str(tmp_path / "out")]) == 0
    r = subprocess.run([str(exe), "split", "--data", str(tmp_path / "out"), "--out", str(tmp_path / "s.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "5 observed" in r.stdout
