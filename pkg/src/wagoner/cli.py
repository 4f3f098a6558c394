"""Batch driver: ``wagoner <operation> [flags]``.

Every run writes its artifacts and a manifest into ``--out`` (or prints the
manifest when no directory is given).  Exit codes: 0 success, 2 bad
configuration, 3 a cap was exhausted, 4 a verification failed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import resource
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .export import (COMPLEX_SCHEMA, SCHEMA_VERSION, TABLE_SCHEMA, canonical_json, complex_from_json,
                     complex_to_dot, complex_to_json, digest, table_to_csv)

OPERATIONS = ("build", "pi0", "pi1", "homology", "steinberg", "intervals", "affine",
              "side-conditions", "verify", "export")
COMPLEX_KINDS = ("wagoner", "parabolic", "building", "building-flag", "apartment", "coxeter")
FORMATS = ("json", "csv", "dot")

EXIT_OK, EXIT_CONFIG, EXIT_OVERFLOW, EXIT_VERIFY = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def parse_coxeter_matrix(text):
    """``"[[1,3],[3,1]]"`` or ``"1,3;3,1"``; ``inf`` marks an infinite entry."""
    from .coxeter import INF
    if text is None:
        return None
    text = text.strip()
    try:
        if text.startswith("["):
            rows = json.loads(text.replace("inf", "0").replace("∞", "0"))
        else:
            rows = [[0 if x.strip() in ("inf", "∞") else int(x) for x in r.split(",")]
                    for r in text.split(";")]
    except (ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse Coxeter matrix {text!r}: {exc}") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ConfigError(f"Coxeter matrix {text!r} is not square")
    return [[INF if x == 0 else int(x) for x in r] for r in rows]


@dataclass
class RunConfig:
    operation: str
    family: str | None = None
    n: int | None = None
    q: int | None = None
    coxeter_matrix: list | None = None
    radius: int = 8
    tc_cap: int = field(default_factory=lambda: _env_int("WAGONER_TC_CAP", 1_000_000))
    group_cap: int = field(default_factory=lambda: _env_int("WAGONER_GROUP_CAP", 500_000))
    skeleton_dim: int = 2
    seed: int = 0
    format: str = "json"
    out: str | None = None
    complex: str = "wagoner"
    tier: str = "fast"
    artifact: str | None = None

    def validate(self):
        if self.operation not in OPERATIONS:
            raise ConfigError(f"unknown operation {self.operation!r}")
        for name in ("radius", "tc_cap", "group_cap", "skeleton_dim"):
            if getattr(self, name) is None or getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.complex not in COMPLEX_KINDS:
            raise ConfigError(f"unknown complex {self.complex!r}")
        if self.tier not in ("fast", "full"):
            raise ConfigError(f"unknown tier {self.tier!r}")
        needs_instance = self.operation in ("build", "pi0", "pi1", "steinberg", "side-conditions")
        if self.operation == "build" and self.complex == "coxeter":
            needs_instance = False
            if self.coxeter_matrix is None:
                raise ConfigError("--complex coxeter needs --coxeter-matrix")
        if self.operation == "homology" and self.coxeter_matrix is None:
            needs_instance = True
        if self.operation == "intervals" and self.coxeter_matrix is None:
            needs_instance = True
        if needs_instance and not (self.family and self.n and self.q):
            raise ConfigError(f"{self.operation} needs --family, --n and --q")
        if self.operation == "affine" and not self.family:
            raise ConfigError("affine needs --family (A1, A2 or C2)")
        if self.operation == "export" and not self.artifact:
            raise ConfigError("export needs --artifact")
        return self

    def to_json(self):
        return canonical_json(asdict(self))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    def digest(self):
        """Digest of everything that affects results (output path excluded)."""
        data = asdict(self)
        data.pop("out")
        return digest(data)


@dataclass
class RunManifest:
    config: dict
    config_digest: str
    version: str
    schema_version: int
    wall_seconds: float
    peak_rss_kb: int
    results: dict
    result_digest: str
    verdicts: list
    artifacts: dict
    exit_code: int

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ----------------------------------------------------------------------
# pipelines; each returns (results, verdicts, artifacts, exit code)


def _instance(cfg):
    from .rootdata import instantiate
    return instantiate(cfg.family, cfg.n, cfg.q, cap=cfg.group_cap)


def _build_complex(cfg, inst=None):
    from . import complexes
    from .coxeter import CoxeterSystem
    if cfg.complex == "coxeter":
        cx, _ = complexes.coxeter_flag_complex(CoxeterSystem(cfg.coxeter_matrix))
        return cx
    inst = inst or _instance(cfg)
    if cfg.complex == "wagoner":
        return complexes.build_wagoner(inst, cfg.skeleton_dim)
    if cfg.complex == "parabolic":
        return complexes.build_parabolic_complex(inst, cfg.skeleton_dim)
    if cfg.complex == "building":
        return complexes.building_complex(inst)
    if cfg.complex == "building-flag":
        return complexes.build_building_flag(inst)
    return complexes.standard_apartment(inst).complex


def _complex_artifact(cfg, cx, stem, config_digest=None):
    config_digest = cfg.digest() if config_digest is None else config_digest
    if cfg.format == "dot":
        return {f"{stem}.dot": complex_to_dot(cx, config_digest)}
    if cfg.format == "csv":
        raise ConfigError("complexes export as json or dot, not csv")
    return {f"{stem}.json": complex_to_json(cx, config_digest)}


def _table_artifact(cfg, stem, name, header, rows, config_digest=None):
    config_digest = cfg.digest() if config_digest is None else config_digest
    if cfg.format == "csv":
        return {f"{stem}.csv": table_to_csv(header, rows, config_digest)}
    if cfg.format == "dot":
        raise ConfigError("tables export as json or csv, not dot")
    data = {"schema": TABLE_SCHEMA, "config_digest": config_digest, "name": name,
            "header": list(header), "rows": [list(r) for r in rows]}
    return {f"{stem}.json": canonical_json(data) + "\n"}


def op_build(cfg):
    from .homotopy import components
    cx = _build_complex(cfg)
    res = {"name": cx.name, "f_vector": cx.f_vector, "euler_characteristic": cx.euler_characteristic,
           "components": components(cx).count, "digest": cx.digest()}
    return res, [f"built {cx.name} with f-vector {cx.f_vector}"], _complex_artifact(cfg, cx, cfg.complex), EXIT_OK


def op_pi0(cfg):
    from .complexes import build_wagoner
    from .homotopy import components
    from .rootdata import g_dagger_index
    inst = _instance(cfg)
    comps = components(build_wagoner(inst, 1)).count
    index = g_dagger_index(inst)
    verdict = f"components={comps}, index={index}, {'MATCH' if comps == index else 'MISMATCH'}"
    res = {"instance": inst.label, "components": comps, "index": index, "match": comps == index}
    table = _table_artifact(cfg, "pi0", "pi0", ["instance", "components", "index"], [[inst.label, comps, index]])
    return res, [verdict], table, EXIT_OK if comps == index else EXIT_VERIFY


def op_pi1(cfg):
    from .homotopy import pi1_wagoner
    inst = _instance(cfg)
    out = pi1_wagoner(inst, cap=cfg.tc_cap)
    res, rows, verdicts = {}, [], []
    for method, r in out.items():
        res[method] = {"status": r.status, "kernel_order": r.kernel_order, "colimit_order": r.colimit_order,
                       "group_order": r.group_order, "abelianization": r.abelianization,
                       "label": r.label, "notes": r.notes, "cap": cfg.tc_cap}
        rows.append([method, r.status, r.kernel_order, r.abelianization, r.label])
        verdicts.append(f"{method}: {r.status}, kernel order {r.kernel_order}")
    code = EXIT_OVERFLOW if out["stabilizer-colimit"].status != "complete" else EXIT_OK
    table = _table_artifact(cfg, "pi1", "pi1", ["method", "status", "kernel_order", "abelianization", "label"], rows)
    return res, verdicts, table, code


def op_homology(cfg):
    from .homology import homology
    from .export import homology_rows
    if cfg.coxeter_matrix is not None and not cfg.family:
        cfg_cx = RunConfig(**{**asdict(cfg), "complex": "coxeter"})
        cx = _build_complex(cfg_cx)
        degrees = range(cx.dimension + 1)
    else:
        cx = _build_complex(cfg)
        degrees = range(cx.dimension + 1 if cfg.complex != "wagoner" else cfg.skeleton_dim)
    groups = [homology(cx, k) for k in degrees]
    res = {"complex": cx.name, "f_vector": cx.f_vector, "homology": {h.k: str(h) for h in groups}}
    header, rows = homology_rows(groups)
    return res, [f"H_{h.k} = {h}" for h in groups], _table_artifact(cfg, "homology", cx.name, header, rows), EXIT_OK


def op_steinberg(cfg):
    from .homotopy import tilde_g_checks, steinberg_order
    inst = _instance(cfg)
    orders = {v: steinberg_order(inst, v, cfg.tc_cap) for v in ("all-prenilpotent", "non-nested-only")}
    rep = tilde_g_checks(inst, cfg.tc_cap)
    rows = [[v, o.status, o.order, o.cap] for v, o in orders.items()]
    rows.append(["tilde-G", rep.g_tilde.status, rep.g_tilde.order, rep.g_tilde.cap])
    res = {"orders": {v: o.order for v, o in orders.items()}, "g_tilde": rep.g_tilde.order,
           "subsystems_ok": rep.subsystems_ok, "status": [r[1] for r in rows], "cap": cfg.tc_cap}
    overflow = any(r[1] != "complete" for r in rows)
    agree = not overflow and len({r[2] for r in rows}) == 1 and rep.subsystems_ok
    verdicts = [f"{r[0]}: {r[1]} order {r[2]}" for r in rows]
    if not overflow:
        verdicts.append("orders agree" if agree else "orders disagree")
    code = EXIT_OVERFLOW if overflow else (EXIT_OK if agree else EXIT_VERIFY)
    return res, verdicts, _table_artifact(cfg, "steinberg", "steinberg", ["system", "status", "order", "cap"], rows), code


def op_intervals(cfg):
    from .coxeter import CoxeterSystem, polygon_labelling, prenilpotent_classify, root_interval
    W = CoxeterSystem(cfg.coxeter_matrix) if cfg.coxeter_matrix is not None else _instance(cfg).coxeter
    if not W.spherical:
        roots = W.roots(cfg.radius)
    else:
        roots = W.roots()
    names = {r: repr(r) for r in roots}
    position = None
    if W.rank == 2 and W.spherical:
        _, poly = polygon_labelling(W)
        names = {r: f"a{i}" for i, r in enumerate(poly)}
        roots = poly
        position = {r: i for i, r in enumerate(poly)}
    rows = []
    for a in roots:
        for b in roots:
            cls = prenilpotent_classify(a, b)
            if cls.kind == "not-prenilpotent":
                continue
            if cls.nested and a != b and not W.spherical:
                rows.append([names[a], names[b], cls.kind, "unsupported"])
                continue
            members = root_interval(a, b).members
            if position is not None:
                # walk the polygon from a towards b
                k = len(roots)
                members = sorted(members, key=lambda m: (position[m] - position[a]) % k)
                if position[b] != position[members[-1]]:
                    members = sorted(members, key=lambda m: (position[a] - position[m]) % k)
            rows.append([names[a], names[b], cls.kind, " ".join(names.get(m, repr(m)) for m in members)])
    res = {"rank": W.rank, "roots": len(roots), "pairs": len(rows)}
    table = _table_artifact(cfg, "intervals", "intervals", ["alpha", "beta", "kind", "interval"], rows)
    return res, [f"{len(rows)} prenilpotent pairs"], table, EXIT_OK


def op_affine(cfg):
    from .affine import affine_apartment, n_cell, rescale_iso_check, WindowTooSmall
    n = cfg.n or 1
    apt = affine_apartment(cfg.family, cfg.radius)
    rows = []
    for i in apt.interior_faces():
        try:
            c = n_cell(apt, i, n)
        except WindowTooSmall:
            continue
        rows.append([list(apt.faces[i].code), apt.faces[i].dim, list(c.lower), list(c.upper), len(c.alcoves)])
    rep = rescale_iso_check(cfg.family, n, cfg.radius)
    ok = rep.bijective and rep.order_preserving and rep.weyl_equivariant
    res = {"kind": apt.system.kind, "n": n, "radius": cfg.radius, "faces": len(apt.faces),
           "cells": rep.cells, "rescale": {"bijective": rep.bijective, "order_preserving": rep.order_preserving,
                                           "weyl_equivariant": rep.weyl_equivariant}}
    table = _table_artifact(cfg, "cells", f"{n}-cells", ["face", "dim", "lower", "upper", "alcoves"], rows)
    return res, [f"{rep.cells} distinct {n}-cells; rescaling {'verified' if ok else 'FAILED'}"], table, \
        EXIT_OK if ok else EXIT_VERIFY


def op_side_conditions(cfg):
    from .rootdata import side_conditions
    inst = _instance(cfg)
    rep = side_conditions(inst)
    rows = [[f"{s},{t}", x, z, quo] for (s, t), (x, z, quo) in sorted(rep.rank2_orders.items())]
    res = {"co_star": rep.co_star, "culprit": rep.culprit,
           "commutator": {str(k): v for k, v in rep.commutator_condition.items()}}
    verdicts = [f"Co*: {'PASS' if rep.co_star else 'FAIL'}" + (f" ({rep.culprit})" if rep.culprit else ""),
                f"commutator condition: {'PASS' if rep.commutator_ok else 'FAIL'}"]
    return res, verdicts, _table_artifact(cfg, "side-conditions", "rank-2 subgroups",
                                          ["pair", "order_X", "order_Z", "order_X_mod_Z"], rows), EXIT_OK


def op_verify(cfg):
    from .acceptance import verify_suite
    results = verify_suite(cfg.tier, emit=lambda line: print(line, file=sys.stderr, flush=True))
    res = {r.number: {"passed": r.passed, "within_budget": r.within_budget, "detail": r.detail,
                      "digest": r.digest} for r in results}
    rows = [[r.number, r.title, r.passed and r.within_budget, round(r.seconds, 3), r.budget] for r in results]
    ok = all(r.passed and r.within_budget for r in results)
    table = _table_artifact(cfg, "verify", f"verify-{cfg.tier}", ["criterion", "title", "passed", "seconds", "budget"],
                            rows)
    return res, [r.line() for r in results], table, EXIT_OK if ok else EXIT_VERIFY


def op_export(cfg):
    try:
        with open(cfg.artifact, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read artifact: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise ConfigError("artifacts are read from their JSON form") from None
    stem = os.path.splitext(os.path.basename(cfg.artifact))[0]
    schema = data.get("schema")
    # converted files keep the digest of the run that produced the data
    source = data.get("config_digest", "")
    if schema == COMPLEX_SCHEMA:
        cx = complex_from_json(text)
        out = _complex_artifact(cfg, cx, stem, source)
        res = {"kind": "complex", "f_vector": cx.f_vector, "digest": cx.digest()}
    elif schema == TABLE_SCHEMA:
        out = _table_artifact(cfg, stem, data["name"], data["header"], data["rows"], source)
        res = {"kind": "table", "rows": len(data["rows"])}
    else:
        raise ConfigError(f"unsupported artifact schema {schema!r}")
    return res, [f"exported {stem} as {cfg.format}"], out, EXIT_OK


PIPELINES = {
    "build": op_build, "pi0": op_pi0, "pi1": op_pi1, "homology": op_homology, "steinberg": op_steinberg,
    "intervals": op_intervals, "affine": op_affine, "side-conditions": op_side_conditions,
    "verify": op_verify, "export": op_export,
}


def _atomic_write(path, text):
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def run(cfg):
    """Execute the configured pipeline; returns (manifest, artifacts)."""
    from .affine import WindowTooSmall
    from .coxeter import BallCapExceeded, CoxeterError
    from .rootdata import GroupCapExceeded

    cfg.validate()
    start = time.perf_counter()
    try:
        results, verdicts, artifacts, code = PIPELINES[cfg.operation](cfg)
    except (GroupCapExceeded, BallCapExceeded, WindowTooSmall) as exc:
        results, verdicts, artifacts, code = ({"overflow": type(exc).__name__, "message": str(exc),
                                               "tc_cap": cfg.tc_cap, "group_cap": cfg.group_cap},
                                              [f"budget exhausted: {exc}"], {}, EXIT_OVERFLOW)
    except CoxeterError as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    wall = time.perf_counter() - start
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    manifest = RunManifest(
        config=json.loads(cfg.to_json()), config_digest=cfg.digest(), version=__version__,
        schema_version=SCHEMA_VERSION, wall_seconds=round(wall, 3), peak_rss_kb=int(peak),
        results=json.loads(canonical_json(results)), result_digest=digest(results), verdicts=verdicts,
        artifacts={name: hashlib.sha256(text.encode()).hexdigest() for name, text in sorted(artifacts.items())},
        exit_code=code)
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        for name, text in sorted(artifacts.items()):
            _atomic_write(os.path.join(cfg.out, name), text)
        _atomic_write(os.path.join(cfg.out, f"manifest-{cfg.operation}.json"), manifest.to_json())
    return manifest, artifacts


def build_parser():
    p = argparse.ArgumentParser(prog="wagoner", description="Wagoner complexes of groups with root data.")
    p.add_argument("operation", choices=OPERATIONS)
    p.add_argument("--family", help="SL, GL or Sp for groups; A1, A2 or C2 for affine cells")
    p.add_argument("--n", type=int, help="matrix size (groups) or cell scale (affine)")
    p.add_argument("--q", type=int, help="field order")
    p.add_argument("--coxeter-matrix", help='e.g. "1,3;3,1" or "[[1,3],[3,1]]"; inf for infinity')
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--tc-cap", type=int, default=None, help="coset cap (default $WAGONER_TC_CAP or 1e6)")
    p.add_argument("--skeleton-dim", type=int, default=2)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="directory for artifacts and manifest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--complex", choices=COMPLEX_KINDS, default="wagoner")
    p.add_argument("--tier", choices=("fast", "full"), default="fast")
    p.add_argument("--artifact", help="JSON artifact to convert (export)")
    p.add_argument("--config", help="read the run configuration from a JSON file")
    return p


def config_from_args(args):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = RunConfig.from_json(fh.read())
        cfg.operation = args.operation
        return cfg
    kw = dict(operation=args.operation, family=args.family, n=args.n, q=args.q,
              coxeter_matrix=parse_coxeter_matrix(args.coxeter_matrix), radius=args.radius,
              skeleton_dim=args.skeleton_dim, seed=args.seed, format=args.format, out=args.out,
              complex=args.complex, tier=args.tier, artifact=args.artifact)
    if args.tc_cap is not None:
        kw["tc_cap"] = args.tc_cap
    return RunConfig(**kw)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        manifest, artifacts = run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for v in manifest.verdicts:
        print(v)
    if not cfg.out:
        for name, text in sorted(artifacts.items()):
            if name.endswith((".csv", ".dot")):
                sys.stdout.write(text)
    return manifest.exit_code


def entry():
    sys.exit(main())
