#!/usr/bin/env python3
"""Convert Cora / Citeseer releases into the edges.tsv / attrs.tsv / labels.tsv layout.

Two input layouts are understood:

  linqs      <name>.content (id, binary words..., label) and <name>.cites (cited, citing)
  planetoid  ind.<name>.{x,tx,allx,y,ty,ally,graph,test.index} pickles

Nodes are renumbered 0..N-1 (LINQS: in .content order; Planetoid: allx rows then the test
rows in index order, as the public loaders do). Citations that mention unknown papers and
self-citations are dropped; duplicate and reciprocal citations collapse into one edge.
"""

import argparse
import pathlib
import pickle
import sys

import numpy as np
import scipy.sparse as sp


def write_dataset(out, features, labels, edges):
    out.mkdir(parents=True, exist_ok=True)
    features = sp.csr_matrix(features)
    features.eliminate_zeros()
    n, f = features.shape
    with open(out / "attrs.tsv", "w") as fh:
        fh.write(f"{n}\t{f}\n")
        coo = features.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            fh.write(f"{r}\t{c}\t{1 if v != 0 else 0}\n")
    canon = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    with open(out / "edges.tsv", "w") as fh:
        for u, v in canon:
            fh.write(f"{u}\t{v}\n")
    with open(out / "labels.tsv", "w") as fh:
        for i, y in enumerate(labels):
            if y >= 0:
                fh.write(f"{i}\t{y}\n")
    return n, f, len(canon)


def read_linqs(src, name):
    ids, rows, labels, classes = {}, [], [], {}
    with open(src / f"{name}.content") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            ids[parts[0]] = len(ids)
            rows.append([int(float(v) != 0) for v in parts[1:-1]])
            labels.append(classes.setdefault(parts[-1], len(classes)))
    # class ids in sorted name order so the numbering does not depend on file order
    remap = {old: new for new, (_, old) in enumerate(sorted(classes.items()))}
    labels = [remap[y] for y in labels]
    edges = []
    with open(src / f"{name}.cites") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) == 2 and parts[0] in ids and parts[1] in ids:
                edges.append((ids[parts[0]], ids[parts[1]]))
    return sp.csr_matrix(np.array(rows, dtype=np.int8)), labels, edges


def read_planetoid(src, name):
    def load(part):
        with open(src / f"ind.{name}.{part}", "rb") as fh:
            return pickle.load(fh, encoding="latin1")

    x, tx, allx = load("x"), load("tx"), load("allx")
    y, ty, ally = load("y"), load("ty"), load("ally")
    graph = load("graph")
    test_index = [int(line) for line in open(src / f"ind.{name}.test.index") if line.strip()]
    del x, y
    test_sorted = sorted(test_index)
    # Citeseer has test ids with no feature row; give them empty rows and no label
    full = range(test_sorted[0], test_sorted[-1] + 1)
    tx_ext = sp.lil_matrix((len(full), tx.shape[1]))
    ty_ext = np.zeros((len(full), ty.shape[1]))
    tx_ext[np.array(test_sorted) - test_sorted[0], :] = tx
    ty_ext[np.array(test_sorted) - test_sorted[0], :] = ty
    features = sp.vstack((allx, tx_ext)).tolil()
    onehot = np.vstack((ally, ty_ext))
    features[test_index, :] = features[test_sorted, :]
    onehot[test_index, :] = onehot[test_sorted, :]
    labels = [int(np.argmax(row)) if row.any() else -1 for row in onehot]
    n = features.shape[0]
    edges = [(u, v) for u, nbrs in graph.items() for v in nbrs if u < n and v < n]
    return sp.csr_matrix(features), labels, edges


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("src", type=pathlib.Path, help="directory holding the raw release")
    ap.add_argument("out", type=pathlib.Path, help="output directory, e.g. data/cora")
    ap.add_argument("--name", default="cora", help="dataset prefix in the raw file names")
    ap.add_argument("--format", choices=["auto", "linqs", "planetoid"], default="auto")
    args = ap.parse_args(argv)

    fmt = args.format
    if fmt == "auto":
        fmt = "linqs" if (args.src / f"{args.name}.content").exists() else "planetoid"
    reader = read_linqs if fmt == "linqs" else read_planetoid
    try:
        features, labels, edges = reader(args.src, args.name)
    except FileNotFoundError as e:
        print(f"missing input: {e.filename}", file=sys.stderr)
        return 3
    n, f, m = write_dataset(args.out, features, labels, edges)
    print(f"{args.out}: {n} nodes, {f} attributes, {m} edges, {len(set(y for y in labels if y >= 0))} classes")
    return 0


if __name__ == "__main__":
    sys.exit(main())
