#!/usr/bin/env python3
"""Download the benchmark graphs and write them as edge lists.

Each graph is made undirected, self-loops and duplicate edges are dropped,
and vertices are renumbered 0..n-1 in sorted id order. The output starts
with a `# vertices: n` header so isolated vertices survive.

    python3 scripts/fetch_datasets.py [--out data] [--lcc] [name ...]

Already downloaded archives can be converted offline with --from FILE.
"""

import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

SOURCES = {
    "netscience": "https://nrvis.com/download/data/ca/ca-netscience.zip",
    "bio-diseasome": "https://nrvis.com/download/data/bio/bio-diseasome.zip",
    "polblogs": "https://raw.githubusercontent.com/danielzuegner/gnn-meta-attack/master/data/polblogs.npz",
}

# sizes reported for the versions used in the experiments
EXPECTED = {
    "netscience": (379, 914),
    "bio-diseasome": (516, 1188),
    "polblogs": (1490, 16715),
}


def edges_from_text(text):
    """Edge list or MatrixMarket body; the first two columns are vertex ids."""
    lines = text.splitlines()
    mtx = bool(lines) and lines[0].startswith("%%MatrixMarket")
    header_seen = False
    vertices = set()
    edges = []
    for line in lines:
        line = line.strip()
        if not line or line[0] in "%#":
            continue
        parts = line.replace(",", " ").split()
        if mtx and not header_seen:
            header_seen = True
            rows = int(parts[0])
            vertices.update(range(1, rows + 1))
            continue
        u, v = int(parts[0]), int(parts[1])
        vertices.update((u, v))
        edges.append((u, v))
    return vertices, edges


def edges_from_npz(data):
    import numpy as np
    import scipy.sparse as sp

    z = np.load(io.BytesIO(data), allow_pickle=True)
    adj = sp.csr_matrix((z["adj_data"], z["adj_indices"], z["adj_indptr"]), shape=tuple(z["adj_shape"]))
    coo = adj.tocoo()
    return set(range(adj.shape[0])), list(zip(coo.row.tolist(), coo.col.tolist()))


def extract(name, data):
    if data[:2] != b"PK":
        return edges_from_text(data.decode())
    with zipfile.ZipFile(io.BytesIO(data)) as zf:
        names = zf.namelist()
        if any(m.endswith(".npy") for m in names):
            return edges_from_npz(data)
        members = [m for m in names if m.endswith((".mtx", ".edges", ".txt"))]
        if not members:
            sys.exit(f"{name}: no edge file in archive")
        return edges_from_text(zf.read(members[0]).decode())


def normalize(vertices, edges, lcc):
    adj = {v: set() for v in vertices}
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    if lcc:
        best = set()
        seen = set()
        for s in adj:
            if s in seen:
                continue
            comp, stack = {s}, [s]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            if len(comp) > len(best):
                best = comp
        adj = {v: adj[v] & best for v in best}
    index = {v: i for i, v in enumerate(sorted(adj))}
    pairs = sorted({(min(index[u], index[v]), max(index[u], index[v])) for u in adj for v in adj[u]})
    return len(index), pairs


def write(path, n, pairs):
    with open(path, "w") as f:
        f.write(f"# vertices: {n}\n# edges: {len(pairs)}\n")
        for u, v in pairs:
            f.write(f"{u} {v}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("names", nargs="*", default=list(SOURCES))
    ap.add_argument("--out", default="data")
    ap.add_argument("--lcc", action="store_true", help="keep only the largest connected component")
    ap.add_argument("--from", dest="local", help="convert this file instead of downloading (one name only)")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in args.names:
        if name not in SOURCES:
            sys.exit(f"unknown dataset {name}; choose from {', '.join(SOURCES)}")
        try:
            if args.local:
                data = Path(args.local).read_bytes()
            else:
                with urllib.request.urlopen(SOURCES[name], timeout=60) as r:
                    data = r.read()
        except OSError as e:
            print(f"{name}: download failed: {e}", file=sys.stderr)
            status = 1
            continue
        n, pairs = normalize(*extract(name, data), args.lcc)
        path = out / f"{name}.edges"
        write(path, n, pairs)
        want = EXPECTED[name]
        note = "" if (n, len(pairs)) == want else f" (expected |V|={want[0]} |E|={want[1]})"
        print(f"{name}: |V|={n} |E|={len(pairs)} -> {path}{note}")
    sys.exit(status)


if __name__ == "__main__":
    main()
