"""Command-line interface: ``chevalley <command> ...``.

Machine output is one JSON report on stdout; a short summary goes to
stderr.  Exit status is 0 when every check passed, 1 when some check
failed, and 2 when the input could not be used.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import autos, group
from .algebra import StructureTable, build_structure_table, verify_antisymmetry, verify_jacobi
from .classical import classical_oracle
from .errors import ChevalleyError
from .matrix import Matrix
from .report import Report
from .rings import QQ, Product, Rationals, element_from_json, element_to_json, parse_ring
from .roots import build_root_system, dynkin_symmetries, root_label, word_from_json
from .suites import SUITES, run_all, run_suite, suite_registry

SEED_ENV = "CHEVALLEY_SEED"


class UsageError(Exception):
    """Malformed command-line input (exit status 2)."""


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _system(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--type", dest="kind", required=required, help="root system type A..G")
    p.add_argument("--rank", type=int, required=required)


def _table(args, min_rank: int = 1) -> StructureTable:
    if args.kind is None or args.rank is None:
        raise UsageError("--type and --rank are required")
    table = build_structure_table(build_root_system(args.kind, args.rank))
    if table.rank < min_rank:
        raise UsageError(f"this command needs rank >= {min_rank}")
    return table


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _result(rep: Report, obj, out: str | None) -> Report:
    if out:
        _write_json(out, obj)
        rep.result = {"written": out}
    else:
        rep.result = obj
    return rep


# -- roots / algebra --------------------------------------------------------

def cmd_roots_show(args) -> Report:
    rs = build_root_system(args.kind, args.rank)
    obj = rs.to_json()
    obj["labels"] = [root_label(r) for r in rs.roots]
    obj["symmetries"] = [[i + 1 for i in d] for d in dynkin_symmetries(rs)]
    rep = Report("roots", meta={"system": rs.name})
    return _result(rep, obj, args.out)


def cmd_algebra_build(args) -> Report:
    table = _table(args)
    rep = Report("algebra-build", meta={"system": table.rs.name, "dim": table.dim})
    return _result(rep, table.to_json(), args.out)


def cmd_algebra_verify(args) -> Report:
    table = StructureTable.from_json(_load_json(args.table))
    return verify_jacobi(table) if args.check == "jacobi" else verify_antisymmetry(table)


def cmd_algebra_oracle(args) -> Report:
    table = _table(args)
    oracle = classical_oracle(table.rs.kind, table.rank)
    rep = Report("classical-oracle", meta={"system": table.rs.name})
    for pair, n in table.N.items():
        got = oracle.get(pair)
        rep.record(got == abs(n), "magnitude", {"pair": [root_label(pair[0]), root_label(pair[1])]},
                   f"table {abs(n)} vs model {got}")
    rep.record(set(oracle) == set(table.N), "pairs", {})
    return rep.finish()


# -- group ------------------------------------------------------------------

def _ring(args):
    return parse_ring(args.ring) if getattr(args, "ring", None) else QQ


def cmd_group_gen(args) -> Report:
    table = _table(args, 2)
    ring = _ring(args)
    a = table.rs.parse(args.root)
    r = element_from_json(ring, args.r)
    g = group.exp_generator(table, a, r)
    rep = Report("group-gen", meta={"system": table.rs.name, "ring": str(ring)})
    rep.record(g.det() == ring.one(), "det", {"root": args.root, "r": element_to_json(r)})
    rep.record(group.is_lie_automorphism(table, g), "automorphism", {"root": args.root})
    return _result(rep, g.to_json(), args.out)


def cmd_group_verify(args) -> Report:
    return group.verify_steinberg(_table(args, 2))


def _matrix_from(obj, ring, dim: int) -> Matrix:
    rows = obj["matrix"] if isinstance(obj, dict) else obj
    m = Matrix.from_json(ring, rows)
    if m.shape != (dim, dim):
        raise UsageError(f"expected a {dim}x{dim} matrix, got {m.shape}")
    return m


def cmd_group_unipotence(args) -> Report:
    table = _table(args, 2)
    m = _matrix_from(_load_json(args.matrix), _ring(args), table.dim)
    cert = group.lemma1_certificate(m, args.p, args.q, args.d, args.m_max)
    rep = Report("unipotence", meta={"system": table.rs.name, "p": args.p, "q": args.q, "d": args.d})
    ok = cert.status != "inconclusive"
    if cert.status == "certified":
        nil = m - Matrix.identity(m.ring, table.dim)
        ok = (nil ** cert.m).is_zero()
    rep.record(ok, "certificate", {"status": cert.status}, cert.detail)
    rep.result = cert.to_json()
    return rep.finish()


# -- curves -----------------------------------------------------------------

def cmd_curves(args) -> Report:
    table = _table(args, 2)
    name = {"formula1": "formula1", "prop6": "prop6", "retraction": "retraction-laws"}[args.check]
    return run_suite(name, table, args.seed, args.samples)


# -- autos ------------------------------------------------------------------

def _parse_list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_autos_make(args) -> Report:
    table = _table(args, 2)
    ring = _ring(args)
    kind = args.kind_aut
    if kind == "identity":
        f = autos.SemilinearAut.identity(table, ring)
    elif kind == "torus":
        f = autos.torus(table, [element_from_json(ring, c) for c in _parse_list(args.c or "")], ring)
    elif kind == "diagram":
        delta = tuple(int(i) - 1 for i in _parse_list(args.delta or ""))
        f = autos.diagram(table, [(ring.one(), delta)], ring)
    elif kind == "weyl":
        f = autos.weyl(table, word_from_json(_parse_list(args.word or ""), table.rank), ring)
    else:
        word = []
        for item in _parse_list(args.word or ""):
            label, _, val = item.partition(":")
            word.append((table.rs.parse(label), element_from_json(ring, val or "1")))
        f = autos.inner(group.GroupElement.from_word(table, word, ring))
    if args.sigma:
        if not isinstance(ring, Product):
            raise UsageError("--sigma needs a product ring such as Q2")
        sigma = [int(s) - 1 for s in _parse_list(args.sigma)]
        f = autos.SemilinearAut.coordinate_permutation(table, ring, sigma) @ f
    rep = Report("autos-make", meta={"system": table.rs.name, "ring": str(ring), "kind": kind})
    rep.record(f.is_automorphism(), "automorphism", {"kind": kind})
    return _result(rep, f.to_json(), args.out)


def _load_aut(args, min_rank: int = 2) -> autos.SemilinearAut:
    obj = _load_json(args.aut)
    if args.kind is None and args.rank is None:
        if "type" not in obj:
            raise UsageError("automorphism file has no type; pass --type and --rank")
        args.kind, args.rank = obj["type"], int(obj["rank"])
    table = _table(args, min_rank)
    ring = parse_ring(args.ring) if args.ring else None
    return autos.SemilinearAut.from_json(obj, table, ring)


def cmd_autos_decompose(args) -> Report:
    f = _load_aut(args)
    table = f.table
    rep = Report("autos-decompose", meta={"system": table.rs.name, "ring": str(f.ring)})
    try:
        if not f.is_linear:
            lin = autos.SemilinearAut(table, f.linear)
            decs = autos.decompose_blockwise(lin)
        else:
            decs = autos.decompose_blockwise(f)
    except ChevalleyError as exc:
        rep.record(False, "decompose", {}, f"{type(exc).__name__}: {exc}")
        return rep.finish()
    again = autos.recompose_blockwise(table, decs)
    target = f if f.is_linear else autos.SemilinearAut(table, f.linear)
    rep.record(again == target, "recompose", {})
    if isinstance(f.ring, Rationals):
        rep.result = decs[0].to_json()
    else:
        rep.result = {"sigma": [s + 1 for s in f.sigma], "blocks": [d.to_json() for d in decs]}
    return rep.finish()


def cmd_autos_probe(args) -> Report:
    return autos.centralizer_probe(_load_aut(args))


def cmd_autos_extract(args) -> Report:
    f = _load_aut(args)
    rep = Report("autos-extract", meta={"system": f.table.rs.name, "ring": str(f.ring)})
    rep.record(f.is_automorphism(), "automorphism", {})
    rep.record(f.check_semilinear(), "semilinear", {})
    rep.result = {"sigma": [s + 1 for s in f.sigma],
                  "linear": autos.SemilinearAut(f.table, f.linear).to_json()}
    return rep.finish()


def cmd_autos_differential(args) -> Report:
    f = _load_aut(args)
    rep = Report("autos-differential", meta={"system": f.table.rs.name, "ring": str(f.ring)})
    d = autos.differential_of_standard(f)
    rep.record(d == f.linear, "equals-linear-part", {})
    return rep.finish()


# -- suites -----------------------------------------------------------------

def cmd_suite(args) -> Report:
    if args.name == "list":
        rep = Report("registry")
        rep.result = [{"name": n, "description": d} for n, d in suite_registry()]
        return rep.finish()
    if args.name != "all" and args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}; try 'suite list'")
    min_rank = 2 if args.name == "all" else SUITES[args.name].min_rank
    table = _table(args, min_rank)
    if args.name == "all":
        return run_all(table, args.seed, args.samples)
    return run_suite(args.name, table, args.seed, args.samples)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 0)")
    common.add_argument("--timing", action="store_true", help="include durations in the JSON report")
    common.add_argument("--out", default=None, help="write the produced artifact to this path")

    p = argparse.ArgumentParser(prog="chevalley", description="Chevalley algebras and groups over exact rings")
    sub = p.add_subparsers(dest="command", required=True)

    roots = sub.add_parser("roots").add_subparsers(dest="action", required=True)
    s = roots.add_parser("show", parents=[common])
    _system(s)
    s.set_defaults(func=cmd_roots_show)

    alg = sub.add_parser("algebra").add_subparsers(dest="action", required=True)
    s = alg.add_parser("build", parents=[common])
    _system(s)
    s.set_defaults(func=cmd_algebra_build)
    s = alg.add_parser("verify", parents=[common])
    s.add_argument("check", choices=["jacobi", "antisymmetry"])
    s.add_argument("table")
    s.set_defaults(func=cmd_algebra_verify)
    s = alg.add_parser("oracle", parents=[common])
    _system(s)
    s.set_defaults(func=cmd_algebra_oracle)

    grp = sub.add_parser("group").add_subparsers(dest="action", required=True)
    s = grp.add_parser("gen", parents=[common])
    _system(s)
    s.add_argument("--root", required=True)
    s.add_argument("--r", required=True)
    s.add_argument("--ring", default="Q")
    s.set_defaults(func=cmd_group_gen)
    s = grp.add_parser("verify", parents=[common])
    s.add_argument("check", choices=["steinberg"])
    _system(s)
    s.set_defaults(func=cmd_group_verify)
    s = grp.add_parser("unipotence", parents=[common])
    s.add_argument("matrix")
    _system(s)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--m-max", dest="m_max", type=int, default=8)
    s.add_argument("--ring", default="Q")
    s.set_defaults(func=cmd_group_unipotence)

    cur = sub.add_parser("curves").add_subparsers(dest="action", required=True)
    for name in ("formula1", "prop6", "retraction"):
        s = cur.add_parser(name, parents=[common])
        _system(s)
        s.add_argument("--samples", type=int, default=None)
        s.set_defaults(func=cmd_curves, check=name)

    aut = sub.add_parser("autos").add_subparsers(dest="action", required=True)
    s = aut.add_parser("make", parents=[common])
    s.add_argument("kind_aut", choices=["identity", "torus", "diagram", "weyl", "inner"])
    _system(s)
    s.add_argument("--ring", default="Q")
    s.add_argument("--c", help="torus coordinates, e.g. 2,3")
    s.add_argument("--delta", help="diagram symmetry as 1-based images, e.g. 2,1")
    s.add_argument("--word", help="weyl word a1,a2 or inner word a1:1/2,a2:1")
    s.add_argument("--sigma", help="compose with a coordinate permutation of Q^d, e.g. 2,1")
    s.set_defaults(func=cmd_autos_make)
    for name, func in (("decompose", cmd_autos_decompose), ("probe-centralizer", cmd_autos_probe),
                       ("extract", cmd_autos_extract), ("differential", cmd_autos_differential)):
        s = aut.add_parser(name, parents=[common])
        s.add_argument("aut")
        _system(s, required=False)
        s.add_argument("--ring", default=None)
        s.set_defaults(func=func)

    s = sub.add_parser("suite", parents=[common])
    s.add_argument("name", help="suite name, 'all', or 'list'")
    _system(s, required=False)
    s.add_argument("--samples", type=int, default=None)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        rep = args.func(args)
    except (UsageError, ChevalleyError, ValueError, KeyError, TypeError, OSError, ZeroDivisionError,
            json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if rep.duration == 0.0:
        rep.finish()
    sys.stdout.write(rep.dumps(timing=args.timing) + "\n")
    print(rep.summary(), file=sys.stderr)
    return 0 if rep.ok else 1


__all__ = ["main", "build_parser"]
