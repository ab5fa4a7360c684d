"""Command-line interface: ``torideg <command> [options]``.

Exit codes: 0 on success, 1 on a validation failure (a JSON error object is
written to stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from . import exactcore as ec
from .catalog import Fixture, fixtures
from .errors import InvalidGradedPoint, NonNormalPolytope, ToridegError
from .fanalgebra import generator_set, homogenize, kernel_bases, polynomial_to_json, shadow_report, weight_vector
from .monoidfan import component_report, default_level_bound, degree_one_submonoid, fan_of_monoids
from .papercheck import REGISTRY, run_all
from .polytope import FaceLattice, LatticePolytope, is_normal, lattice_points
from .stratification import build_triangulation, default_marking, extremal_data, integral_marking, parse_marking
from .svg import render_svg
from .valuation import AOrder, quasi_valuation, quasi_valuation_point, quasi_valuation_via_min, terms
from .valuation import to_json as qv_json


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    polytope: Path
    marking: str = "barycentric"
    multipliers: dict = field(default_factory=dict)
    level_bound: int | None = None
    degree_bound: int = 2
    linearization: str = "default"
    out: Path | None = None

    @classmethod
    def from_args(cls, args) -> "JobConfig":
        return cls(
            args.polytope,
            getattr(args, "marking", "barycentric"),
            parse_multipliers(getattr(args, "multipliers", None)),
            getattr(args, "level_bound", None),
            getattr(args, "degree_bound", 2),
            getattr(args, "linearization", "default"),
            args.out,
        )


# --------------------------------------------------------------------------
# Argument parsing


_POINT = re.compile(r"^\s*(-?\d+)\s*:\s*\(?\s*([-\d,\s]*?)\s*\)?\s*$")


def parse_point(text: str) -> tuple[int, ...]:
    """``"3:(1,0)"`` -> ``(3, 1, 0)``."""
    mt = _POINT.match(text)
    if not mt:
        raise UsageError(f"cannot parse graded point {text!r}; expected m:(a,b,...)")
    eta = [int(x) for x in mt.group(2).split(",") if x.strip()]
    return (int(mt.group(1)),) + tuple(eta)


def parse_multipliers(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"multiplier {part!r} must look like FACE=INT")
            k, v = part.split("=", 1)
            try:
                out[k.strip()] = int(v)
            except ValueError:
                raise UsageError(f"multiplier {part!r} must look like FACE=INT") from None
    return out


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("bounds must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torideg", description="Exact computations for flag triangulations "
                                 "of lattice polytopes and the associated toric degenerations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, marking=True):
        p.add_argument("--polytope", type=Path, required=True, help="polytope JSON {dim, vertices}")
        if marking:
            p.add_argument("--marking", default="barycentric",
                           help="barycentric, integral, or a marking JSON file")
            p.add_argument("--multipliers", action="append", metavar="FACE=K",
                           help="degree multiplier for a face, e.g. P=2 (repeatable)")
            p.add_argument("--linearization", default="default",
                           help="default, alternate, or comma-separated face ids in increasing order")
        p.add_argument("--out", type=Path, help="write the report into this directory")

    for name in ("faces", "normality"):
        common(sub.add_parser(name), marking=False)
    for name in ("triangulate", "render"):
        common(sub.add_parser(name))
    p = sub.add_parser("nu")
    common(p)
    p.add_argument("--point", action="append", metavar="M:(ETA)", help="graded point, e.g. 3:(1,0)")
    p = sub.add_parser("fan")
    common(p)
    p.add_argument("--level-bound", type=_positive)
    for name in ("algebra", "shadow"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--level-bound", type=_positive)
        p.add_argument("--degree-bound", type=_positive, default=2)
    p = sub.add_parser("paper-examples")
    p.add_argument("--list", action="store_true", help="list the checks without running them")
    p.add_argument("--fixture", action="append", metavar="NAME=PATH",
                   help="replace a built-in fixture by a JSON file")
    return ap


# --------------------------------------------------------------------------
# Pipeline


def _read_json(path: Path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ToridegError(f"{path}: invalid JSON ({e.msg})") from None


def load_polytope(path: Path, require_normal: bool = True) -> LatticePolytope:
    P = LatticePolytope.from_json(_read_json(path))
    if require_normal:
        ok, w = is_normal(P)
        if not ok:
            raise NonNormalPolytope("the polytope is not normal", w)
    return P


def resolve_marking(mode: str, L: FaceLattice, cli_multipliers: dict):
    if mode == "barycentric":
        return default_marking(L), dict(cli_multipliers)
    if mode == "integral":
        return integral_marking(L), dict(cli_multipliers)
    marking, mult = parse_marking(_read_json(Path(mode)))
    mult.update(cli_multipliers)
    return marking, mult


def resolve_order(spec: str, L: FaceLattice) -> AOrder:
    if spec == "default":
        return AOrder.default(L)
    if spec == "alternate":
        return AOrder.alternate(L)
    return AOrder([s.strip() for s in spec.split(",") if s.strip()], L)


@dataclass
class Job:
    P: LatticePolytope
    L: FaceLattice
    marking: dict
    multipliers: dict
    order: AOrder

    @cached_property
    def T(self):
        return build_triangulation(self.marking, self.L)

    @cached_property
    def E(self):
        return extremal_data(self.T.marking, self.multipliers)


def make_job(cfg: JobConfig) -> Job:
    P = load_polytope(cfg.polytope)
    L = FaceLattice(P)
    marking, mult = resolve_marking(cfg.marking, L, cfg.multipliers)
    return Job(P, L, marking, mult, resolve_order(cfg.linearization, L))


def _point_json(p):
    return {"m": p[0], "eta": list(p[1:])}


# --------------------------------------------------------------------------
# Commands


def cmd_faces(cfg, args):
    P = load_polytope(cfg.polytope)
    L = FaceLattice(P)
    out = L.to_json()
    out["facets"] = [{"normal": list(f.normal), "offset": f.offset} for f in P.facets]
    out["counts"] = {"faces": len(L), "maximal_chains": len(L.maximal_chains)}
    return out


def cmd_normality(cfg, args):
    P = load_polytope(cfg.polytope, require_normal=False)
    ok, w = is_normal(P)
    return {"normal": ok, "witness": None if w is None else _point_json(w), "levels_checked": [2, P.dim - 1]}


def cmd_triangulate(cfg, args):
    job = make_job(cfg)
    out = job.T.to_json()
    ver = job.T.verify()
    out["verification"] = {**ver, "volume": ec.format_fraction(ver["volume"])}
    return out


def _read_stdin_points():
    data = sys.stdin.read().strip()
    if not data:
        raise UsageError("no --point given and nothing on stdin")
    try:
        return [json.loads(data)]
    except json.JSONDecodeError as e:
        raise UsageError(f"stdin is not JSON: {e.msg}") from None


def cmd_nu(cfg, args):
    job = make_job(cfg)
    T, E = job.T, job.E
    inputs = [parse_point(s) for s in args.point] if args.point else _read_stdin_points()
    results = []
    for g in inputs:
        ts = terms(g)
        for p in ts:
            if len(p) != job.P.dim + 1:
                raise InvalidGradedPoint(f"{p!r} does not have {job.P.dim + 1} entries")
        if len(ts) == 1:
            p = next(iter(ts))
            nu, chain = quasi_valuation_point(p, T, E)
            check = quasi_valuation_via_min(p, T.maximal_chains, E, job.order)
        else:
            nu = quasi_valuation(ts, T, E, job.order)
            chain = None
            check = quasi_valuation_via_min(ts, T.maximal_chains, E, job.order, job.P)
        results.append({
            "input": [{"coeff": ec.format_fraction(c), **_point_json(p)} for p, c in ts.items()],
            "nu": qv_json(nu),
            "chain_used": list(chain) if chain else None,
            "agrees_with_min_over_chains": nu == check,
        })
    return results[0] if len(results) == 1 else results


def _level_bound(cfg, n):
    return cfg.level_bound or default_level_bound(n)


def cmd_fan(cfg, args):
    job = make_job(cfg)
    bound = _level_bound(cfg, job.P.dim)
    F = fan_of_monoids(job.T, job.E, bound)
    out = F.to_json()
    for rec, ch in zip(component_report(F), out["chains"]):
        ch["component"] = rec.to_json()
        ch["degree_one"] = [list(g) for g in degree_one_submonoid(rec.chain, job.T)]
    return out


def cmd_algebra(cfg, args):
    job = make_job(cfg)
    F = fan_of_monoids(job.T, job.E, _level_bound(cfg, job.P.dim))
    G = generator_set(F, job.order)
    d = cfg.degree_bound
    K = kernel_bases(G, d)
    W = weight_vector(G, d, job.order, K)
    hom = []
    for f in K.kernel_elements():
        fh = homogenize(f, W.lam)
        hom.append({"binomial": polynomial_to_json(f, G.ids),
                    "homogenized": polynomial_to_json(fh, G.ids + ["u"])})
    return {"generators": G.to_json(), "kernel": K.to_json(G.ids), "weight_vector": W.to_json(),
            "homogenized": hom}


def cmd_shadow(cfg, args):
    job = make_job(cfg)
    rep = shadow_report(job.T, job.E, cfg.degree_bound, job.order)
    gens = [(1,) + x for x in lattice_points(job.P, 1)]
    ids = [f"g{i}" for i in range(len(gens))]
    out = rep.to_json(ids)
    out["generators"] = [{"id": i, **_point_json(g)} for i, g in zip(ids, gens)]
    return out


def cmd_render(cfg, args):
    job = make_job(cfg)
    return render_svg(job.T)


def cmd_paper_examples(args):
    if args.list:
        for chk in REGISTRY:
            fx = ",".join(chk.fixtures) or "-"
            print(f"{chk.name}  [{fx}]")
        return 0
    fx = fixtures()
    for item in args.fixture or []:
        if "=" not in item:
            raise UsageError(f"--fixture {item!r} must look like NAME=PATH")
        name, path = item.split("=", 1)
        if name not in fx:
            raise UsageError(f"unknown fixture {name!r}; known: {', '.join(fx)}")
        fx[name] = Fixture.from_json(name, _read_json(Path(path)), fx[name])
    results = run_all(fx)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    failed = sum(1 for _, ok, _ in results if not ok)
    print(f"{len(results) - failed}/{len(results)} passed")
    return 1 if failed else 0


HANDLERS = {
    "faces": cmd_faces,
    "normality": cmd_normality,
    "triangulate": cmd_triangulate,
    "nu": cmd_nu,
    "fan": cmd_fan,
    "algebra": cmd_algebra,
    "shadow": cmd_shadow,
    "render": cmd_render,
}


def _error_json(e: Exception) -> dict:
    out = {"error": type(e).__name__, "message": str(e)}
    for attr in ("face_id", "witness"):
        v = getattr(e, attr, None)
        if v is not None:
            out[attr] = _point_json(v) if attr == "witness" else v
    if hasattr(e, "errors"):
        out["errors"] = [_error_json(x) for x in e.errors]
    return out


def _emit(command: str, report, out_dir: Path | None):
    if isinstance(report, str):
        text, name = report, "triangulation.svg"
    else:
        text, name = json.dumps(report, indent=2) + "\n", f"{command}.json"
    if out_dir is None:
        sys.stdout.write(text)
    else:
        os.makedirs(out_dir, exist_ok=True)
        (Path(out_dir) / name).write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "paper-examples":
            return cmd_paper_examples(args)
        cfg = JobConfig.from_args(args)
        report = HANDLERS[args.command](cfg, args)
        _emit(args.command, report, cfg.out)
        return 0
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"torideg: error: {e}", file=sys.stderr)
        return 2
    except ToridegError as e:
        print(json.dumps(_error_json(e)), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
