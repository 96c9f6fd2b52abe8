"""Batch command line front end with stable JSON I/O.

Every subcommand reads JSON from a file (or stdin via "-") and writes a
canonically ordered JSON document to stdout.  Exit codes: 0 success,
1 validation failure, 2 malformed input.  A one-line human summary goes
to stderr unless --quiet is given, keeping stdout parseable.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import ade, config, cover, descent, examples
from .config import BranchConfiguration
from .cover import PlaneBranchCurve, canonical_resolution, double_plane_invariants, is_negligible
from .descent import SDCase
from .lattice import DivisorClass, IntLattice

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MALFORMED = 2


class MalformedInput(Exception):
    """Input that cannot even be parsed into the domain types."""


def _read_doc(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON in {path}: {exc}") from exc


def _load(builder, doc):
    try:
        return builder(doc)
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc


def _load_graph(doc) -> ade.DualGraph:
    def build(d):
        if "lattice" not in d or "vertices" not in d:
            raise ValueError("graph document requires 'lattice' and 'vertices'")
        lat = IntLattice.from_json(d["lattice"])
        verts = [DivisorClass(tuple(v)) for v in d["vertices"]]
        return ade.build_dual_graph(lat, verts)

    return _load(build, doc)


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _summary(line: str, quiet: bool) -> None:
    if not quiet:
        print(line, file=sys.stderr)


def _cmd_validate(args) -> int:
    cfg = _load(BranchConfiguration.from_json, _read_doc(args.input))
    report = config.validate(cfg)
    _emit(report.to_json())
    if report.ok:
        _summary(f"valid: t={report.t} K2={report.t - 8} Bp2={report.Bp2}", args.quiet)
        return EXIT_OK
    _summary(f"invalid: {len(report.violations)} violation(s)", args.quiet)
    return EXIT_INVALID


def _cmd_invariants(args) -> int:
    cfg = _load(BranchConfiguration.from_json, _read_doc(args.input))
    inv = config.invariants(cfg)
    _emit(inv.to_json())
    _summary(f"q={inv.q} p_g={inv.p_g} K2={inv.K2} chi={inv.chi}", args.quiet)
    return EXIT_OK


def _component_docs(g: ade.DualGraph, with_markings: bool) -> list[dict]:
    docs = []
    for comp in g.components():
        dynkin = ade.classify(g, comp)
        doc = {"vertices": list(comp), "type": str(dynkin)}
        if with_markings:
            doc["markings"] = (
                [list(s) for s in ade.even_markings(g, comp)] if dynkin.is_ade else []
            )
        docs.append(doc)
    return docs


def _cmd_classify(args) -> int:
    g = _load_graph(_read_doc(args.input))
    docs = _component_docs(g, with_markings=False)
    _emit(docs)
    _summary(f"{len(docs)} component(s)", args.quiet)
    return EXIT_OK


def _cmd_markings(args) -> int:
    g = _load_graph(_read_doc(args.input))
    docs = _component_docs(g, with_markings=True)
    _emit(docs)
    _summary(f"{len(docs)} component(s)", args.quiet)
    return EXIT_OK


def _cmd_resolve(args) -> int:
    curve = _load(PlaneBranchCurve.from_json, _read_doc(args.input))
    state = canonical_resolution(curve)
    chi, kv2 = double_plane_invariants(state)
    doc = state.to_json()
    doc["chi"] = chi
    doc["KV2"] = kv2
    doc["points"] = [
        {"id": p.id, "mult": p.mult, "negligible": is_negligible(curve, p.id)}
        for p in curve.points
    ]
    _emit(doc)
    _summary(f"chi={chi} KV2={kv2} blowups={len(state.log)}", args.quiet)
    return EXIT_OK


def _cmd_descend(args) -> int:
    cfg = _load(BranchConfiguration.from_json, _read_doc(args.input))
    steps = []
    chain = [cfg]
    limit = args.steps if args.steps is not None else cfg.t - 9
    for _ in range(max(limit, 0)):
        if chain[-1].t <= 9:
            break
        step, nxt = descent.descent_step(chain[-1])
        steps.append(step)
        chain.append(nxt)
    final = chain[-1]
    doc = {
        "K2_sequence": [c.t - 8 for c in chain],
        "steps": [s.to_json() for s in steps],
        "final": {
            "t": final.t,
            "K2": final.t - 8,
            "Bp2": final.lattice.square(final.Bp),
            "configuration": final.to_json(),
        },
    }
    _emit(doc)
    _summary(
        f"{len(steps)} step(s): K2 {cfg.t - 8} -> {final.t - 8}", args.quiet
    )
    return EXIT_OK


def _cmd_sd_check(args) -> int:
    doc_in = _read_doc(args.input)

    def build(d):
        if "lattice" not in d or "D" not in d:
            raise ValueError("case document requires 'lattice' and 'D'")
        return (
            IntLattice.from_json(d["lattice"]),
            DivisorClass(tuple(d["D"])),
            SDCase.from_json(d),
        )

    lat, D, case = _load(build, doc_in)
    valid = descent.verify_sd_case(lat, D, case)
    _emit({"case": case.tag, "valid": valid, "D2": lat.square(D)})
    _summary(f"case {case.tag}: {'valid' if valid else 'invalid'}", args.quiet)
    return EXIT_OK if valid else EXIT_INVALID


def _check_fixture(descriptor) -> dict:
    cfg = examples.build_example(descriptor.name)
    report = config.validate(cfg)
    got_census = config.xi_census(cfg) if report.ok else {}
    matches = (
        report.ok
        and cfg.t == descriptor.expected_t
        and report.Bp2 == descriptor.expected_Bp2
        and cfg.t - 8 == descriptor.expected_K2
        and got_census == descriptor.expected_census
    )
    return {
        "name": descriptor.name,
        "valid": report.ok,
        "matches_expected": matches,
        "t": cfg.t,
        "Bp2": report.Bp2,
        "census": got_census,
    }


def _cmd_example(args) -> int:
    if args.list:
        _emit([d.to_json() for d in examples.list_examples()])
        return EXIT_OK
    if args.all:
        results = [_check_fixture(d) for d in examples.list_examples()]
        ok = all(r["matches_expected"] for r in results)
        if args.check:
            _emit({"fixtures": results, "ok": ok})
            _summary(f"{len(results)} fixture(s), ok={ok}", args.quiet)
            return EXIT_OK if ok else EXIT_INVALID
        _emit([examples.build_example(d.name).to_json() for d in examples.list_examples()])
        return EXIT_OK
    if args.name is None:
        raise MalformedInput("example requires a fixture name, --all or --list")
    name = args.name
    if name == "kummer":
        if args.j is None:
            raise MalformedInput("example kummer requires --j 0..7")
        name = f"kummer-{args.j}"
    cfg = examples.build_example(name)
    _emit(cfg.to_json())
    _summary(f"{name}: t={cfg.t} K2={cfg.t - 8}", args.quiet)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="todorov",
        description="Branch configurations on K3 lattices: validation, ADE "
        "classification, descent and double-plane resolution.",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress the stderr summary")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, with_input=True):
        p = sub.add_parser(name, help=help_text)
        if with_input:
            p.add_argument("input", help="JSON file path, or - for stdin")
        p.set_defaults(handler=handler)
        return p

    add("validate", _cmd_validate, "check a branch configuration clause by clause")
    add("invariants", _cmd_invariants, "surface invariants of a valid configuration")
    add("classify", _cmd_classify, "Dynkin types of a dual graph's components")
    add("markings", _cmd_markings, "parity-admissible markings per component")
    add("resolve", _cmd_resolve, "canonical resolution of a plane branch curve")
    p_desc = add("descend", _cmd_descend, "run the K^2 descent")
    group = p_desc.add_mutually_exclusive_group()
    group.add_argument("--full", action="store_true", help="descend to t = 9 (default)")
    group.add_argument("--steps", type=int, metavar="N", help="run at most N steps")
    add("sd-check", _cmd_sd_check, "verify a cone-case configuration")
    p_ex = add("example", _cmd_example, "emit or check shipped fixtures", with_input=False)
    p_ex.add_argument("name", nargs="?", help="fixture name (see --list), or 'kummer' with --j")
    p_ex.add_argument("--j", type=int, choices=range(8), help="node count for the kummer family")
    p_ex.add_argument("--all", action="store_true", help="process every fixture")
    p_ex.add_argument("--check", action="store_true", help="with --all: run the regression")
    p_ex.add_argument("--list", action="store_true", help="list fixture descriptors")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except MalformedInput as exc:
        _emit({"error": str(exc)})
        _summary(f"malformed input: {exc}", args.quiet)
        return EXIT_MALFORMED
    except ValueError as exc:
        _emit({"error": str(exc)})
        _summary(f"error: {exc}", args.quiet)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
