"""Byte-stable serialisation of complexes and result tables.

Complex JSON layout (schema ``wagoner.complex/1``)::

    {"schema": "wagoner.complex/1", "config_digest": ..., "name": ...,
     "vertices": [{"key": ..., "subgroup": ..., "rep": ..., "rep_digest": ...}],
     "edges": [[i, j], ...],
     "simplices": {"2": [[i, j, k], ...], ...},
     "f_vector": [...], "digest": ...}

Vertex keys of coset complexes are ``(subgroup key, rep index)``; other
complexes carry whatever hashable key they were built with, written as
nested lists.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json

import numpy as np

from .complexes import SimplicialComplex, _jsonable, _unjson

SCHEMA_VERSION = 1
COMPLEX_SCHEMA = f"wagoner.complex/{SCHEMA_VERSION}"
TABLE_SCHEMA = f"wagoner.table/{SCHEMA_VERSION}"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def canonical_json(obj):
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj):
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def _rep_digest(key):
    return hashlib.sha256(canonical_json(_jsonable(key)).encode()).hexdigest()[:16]


def complex_to_dict(cx, config_digest=""):
    verts = []
    for key in cx.keys:
        entry = {"key": _jsonable(key), "rep_digest": _rep_digest(key)}
        if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], str):
            entry["subgroup"], entry["rep"] = key[0], int(key[1])
        verts.append(entry)
    simp = {str(k): rows.tolist() for k, rows in sorted(cx.simplices.items()) if k >= 1}
    return {
        "schema": COMPLEX_SCHEMA,
        "config_digest": config_digest,
        "name": cx.name,
        "vertices": verts,
        "edges": simp.get("1", []),
        "simplices": simp,
        "f_vector": list(cx.f_vector),
        "digest": cx.digest(),
    }


def complex_to_json(cx, config_digest=""):
    return canonical_json(complex_to_dict(cx, config_digest)) + "\n"


def complex_from_json(text):
    data = json.loads(text)
    if data.get("schema") != COMPLEX_SCHEMA:
        raise ValueError(f"unsupported schema {data.get('schema')!r}")
    keys = [_unjson(v["key"]) for v in data["vertices"]]
    simp = {int(k): np.array(rows, dtype=np.int64).reshape(-1, int(k) + 1)
            for k, rows in data["simplices"].items()}
    cx = SimplicialComplex(keys, simp, name=data["name"])
    if cx.digest() != data["digest"]:
        raise ValueError("digest mismatch after re-import")
    return cx


def complex_to_dot(cx, config_digest=""):
    """1-skeleton as an undirected DOT graph."""
    lines = [f"// schema {COMPLEX_SCHEMA} config {config_digest}",
             f"graph \"{cx.name}\" {{"]
    for v in range(cx.n_vertices):
        lines.append(f"  {v};")
    for a, b in cx.edges.tolist():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def table_to_csv(header, rows, config_digest=""):
    buf = io.StringIO()
    buf.write(f"# schema {TABLE_SCHEMA} config {config_digest}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_plain(x) for x in r])
    return buf.getvalue()


def table_from_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def homology_rows(groups):
    """One row per degree: free rank and the torsion invariant factors."""
    rows = [(h.k, h.free_rank, " ".join(str(t) for t in h.torsion)) for h in groups]
    return ["k", "free_rank", "torsion"], rows
