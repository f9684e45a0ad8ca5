"""Command-line entry point: ``nckit <subcommand> ...``.

Exit codes: 0 success/PASS, 1 some check FAILED, 2 Undetermined (symbolic
verifier), 3 usage or input error.  Reports are deterministic JSON; a
timestamp is only added with ``--timestamp``.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .complex import SimplicialComplex, barycentric_subdivision, flag_saturation, is_full, skeleton
from .crossed import CrossedHarness, cutoff_projection, graded_projection_from_group_algebra, support_report
from .errors import NckitError
from .groups import FiniteGroup, ball, parse_group, sigma_f_presentation
from .homology import homology, rational_k_ranks
from .numerics import DEFAULT_TOL, ToleranceConfig, clifford_round_trip_defect, clifford_sphere_rep, MatrixRep, verify_matrix_rep
from .homomorphisms import sphere_algebra
from .presentations import AlgebraPresentation, GeneratorAssignment, Status, Variant, verify_assignment
from .report import Check, Report
from .suite import SUITE_NAMES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_UNDETERMINED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which means Undetermined here
        raise UsageError(f"{self.prog}: {message}")


# -- input helpers -----------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None


def _read_complex(path: str) -> SimplicialComplex:
    data = _read_json(path)
    if not isinstance(data, dict) or "maximal" not in data:
        raise UsageError(f"{path}: expected {{'vertices': [...], 'maximal': [[...], ...]}}")
    return SimplicialComplex.from_json(data)


def _read_presentation(path: str) -> AlgebraPresentation:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a presentation or complex object")
    try:
        return AlgebraPresentation.from_json(data)
    except KeyError as exc:
        raise UsageError(f"{path}: missing field {exc}") from None


def _parse_tol(items: Sequence[str] | None) -> ToleranceConfig:
    overrides = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects key=value, got {item!r}")
        try:
            overrides[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--tol {key}: not a number: {val!r}") from None
    try:
        return DEFAULT_TOL.with_overrides(overrides)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"--tol: {exc}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("NCKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"NCKIT_SEED must be an integer, got {env!r}") from None


def _elements(G, text: str) -> list:
    """Element lists: JSON (``[1, [0,1]]``) or separated by ';' (or ',' when there is no ';')."""
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError:
            raw = None
        if isinstance(raw, list):
            return [G.canonical(tuple(x) if isinstance(x, list) else x) if not isinstance(x, str) else G.parse(x) for x in raw]
    sep = ";" if ";" in text else ","
    return [G.parse(tok) for tok in text.split(sep) if tok.strip()]


def _window(G, spec: str | None):
    if spec is None or spec == "all":
        if not G.finite:
            raise UsageError("infinite groups need --window ball:R, range:a:b or list:...")
        return None
    kind, _, arg = spec.partition(":")
    if kind == "ball":
        try:
            return ball(G, int(arg))
        except ValueError:
            raise UsageError(f"bad ball radius {arg!r}") from None
    if kind == "range":
        lo, _, hi = arg.partition(":")
        try:
            a, b = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"bad range {arg!r}") from None
        rank = getattr(G, "rank", None)
        if rank is None:
            raise UsageError("range windows need a group zn:k")
        import itertools

        pts = list(range(a, b + 1))
        return [p if rank == 1 else tuple(p) for p in (pts if rank == 1 else itertools.product(pts, repeat=rank))]
    if kind == "list":
        return _elements(G, arg)
    raise UsageError(f"unknown window spec {spec!r}")


def _finite_group(spec: str) -> FiniteGroup:
    G = parse_group(spec)
    if not isinstance(G, FiniteGroup):
        raise UsageError(f"{spec}: a finite group is required here")
    return G


# -- subcommands ---------------------------------------------------------------


def cmd_complex(args, report: Report) -> int:
    sigma = _read_complex(args.input)
    if args.action == "info":
        report.result = {
            "vertices": len(sigma.vertices),
            "maximal": len(sigma.maximal),
            "dimension": sigma.dimension,
            "f_vector": sigma.f_vector(),
            "euler_characteristic": sigma.euler_characteristic(),
            "full": is_full(sigma),
        }
        return EXIT_OK
    if args.action == "skeleton":
        if args.k is None:
            raise UsageError("complex skeleton needs --k")
        out = skeleton(sigma, args.k)
    elif args.action == "flag":
        out = flag_saturation(sigma)
    else:
        out = barycentric_subdivision(sigma)
    report.result = out.to_json()
    return EXIT_OK


def cmd_homology(args, report: Report) -> int:
    sigma = _read_complex(args.input)
    H = homology(sigma, reduced=args.reduced)
    report.result = {"homology": H.to_json(), "k_ranks": rational_k_ranks(sigma).to_json()}
    return EXIT_OK


def cmd_sigma_f(args, report: Report) -> int:
    G = parse_group(args.group)
    F = _elements(G, args.F)
    W = _window(G, args.window)
    P = sigma_f_presentation(G, F, W, Variant.parse(args.variant))
    sigma = P.complex
    report.result = {
        "presentation": P.to_json(),
        "vertices": len(sigma.vertices),
        "maximal": len(sigma.maximal),
        "dimension": sigma.dimension,
        "unital": P.unital,
        "closed_vertices": len(P.closed_vertices),
    }
    return EXIT_OK


def cmd_verify_hom(args, report: Report) -> int:
    source = _read_presentation(args.presentation)
    data = _read_json(args.assignment)
    if not isinstance(data, (dict, list)):
        raise UsageError(f"{args.assignment}: expected an assignment object")
    target = source
    if isinstance(data, dict) and "target" in data:
        try:
            target = AlgebraPresentation.from_json(data["target"])
        except KeyError as exc:
            raise UsageError(f"{args.assignment}: target is missing {exc}") from None
    if isinstance(data, dict) and "images" not in data:
        data = {"images": {k: v for k, v in data.items() if k not in ("target", "name")}, "name": data.get("name", "")}
    if isinstance(data, dict) and isinstance(data["images"], dict):
        # JSON object keys are strings; resolve them through the generator labels
        by_label = {str(g): g for g in source.generators}
        data = {**data, "images": [[by_label.get(k, k), v] for k, v in data["images"].items()]}
    if isinstance(data, list):
        data = {"images": data}
    a = GeneratorAssignment.from_json(source, target, data)
    v = verify_assignment(a)
    report.result = v.to_json()
    for c in v.checks:
        report.add(Check(c.relation, c.status is Status.VERIFIED, detail=c.to_json(), status=c.status.value))
    return v.exit_code


def _rep_checks(report: Report, rep_report, prefix: str = "") -> None:
    for e in rep_report.entries:
        report.add(Check(prefix + e.name, e.passed, e.residual, e.tolerance, e.worst or None))


def cmd_verify_rep(args, report: Report) -> int:
    P = _read_presentation(args.presentation)
    data = _read_json(args.rep)
    if not isinstance(data, dict) or "images" not in data:
        raise UsageError(f"{args.rep}: expected {{'images': ...}}")
    rep = MatrixRep.from_json(data)
    by_label = {str(g): g for g in P.generators}
    rep.images = {by_label.get(k, k) if isinstance(k, str) else k: m for k, m in rep.images.items()}
    _rep_checks(report, verify_matrix_rep(rep, P, report.config["tol"]))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_clifford(args, report: Report) -> int:
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    tol = report.config["tol"]
    c = clifford_sphere_rep(args.n, spectral=args.spectral)
    _rep_checks(report, verify_matrix_rep(c.rep, sphere_algebra(args.n), tol))
    report.add(Check.residual("round trip x_i = h_+^1/2 - h_-^1/2", clifford_round_trip_defect(c), 1e-10))
    report.result = {"dim": c.rep.dim, "rep": c.rep.to_json() if args.emit_rep else None}
    if report.result["rep"] is None:
        del report.result["rep"]
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_crossed(args, report: Report) -> int:
    G = _finite_group(args.group)
    tol = report.config["tol"]
    H = _elements(G, args.subgroup) if args.subgroup else None
    if H is not None and not G.is_subgroup(H):
        raise UsageError("--subgroup is not a subgroup")
    fam = graded_projection_from_group_algebra(G, args.dim, report.config["seed"], H)
    h = CrossedHarness(fam)
    _rep_checks(report, fam.relation_report(tol), "graded family: ")
    _rep_checks(report, h.projection_report(tol), "")
    _rep_checks(report, h.f_report(tol), "f-family: ")
    comp = h.compression_report(args.max_len, 1e-8)
    report.add(Check(comp.name, comp.passed, comp.residual, comp.tolerance, comp.worst or None))
    sr = support_report(fam, tol)
    report.add(Check("graded support symmetric", sr["symmetric"]))
    report.add(Check("graded support contains 1", sr["contains_identity"]))
    if H is not None:
        report.add(Check("graded support inside the subgroup", sr["within_subgroup"]))
    report.result = {"support": sr["support"], "strict_relation_table": h.strict_relation_table(args.table_len)}
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_cutoff(args, report: Report) -> int:
    G = _finite_group(args.group)
    tol = report.config["tol"]
    F = _elements(G, args.F)
    raw = _read_json(args.points)
    if not isinstance(raw, list) or not all(isinstance(p, dict) for p in raw):
        raise UsageError(f"{args.points}: expected a list of {{element: weight}} objects")
    pts = [{G.parse(str(k)): v for k, v in p.items()} for p in raw]
    rep = cutoff_projection(G, F, pts, tol=tol)
    for e in rep.to_json()["entries"]:
        report.add(Check.residual(e["name"], e["residual"], e["tolerance"]))
    report.result = {"samples": len(rep.points), "trace_of_e": rep.rank}
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_suite(args, report: Report) -> int:
    if args.name not in SUITE_NAMES:
        raise UsageError(f"unknown suite {args.name!r}; choose from {sorted(SUITE_NAMES)}")
    for c in run_suite(report.config["seed"], mutate_boundary=args.mutate_boundary):
        report.add(c)
    return EXIT_OK if report.passed else EXIT_FAIL


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", action="append", metavar="KEY=VALUE", help="tolerance override (herm, eig, rel, idem, supp)")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $NCKIT_SEED or 0)")
    common.add_argument("--output", "-o", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("--timestamp", action="store_true", help="embed a UTC timestamp in the report")

    p = _Parser(prog="nckit", description="Noncommutative simplicial complex toolkit")
    p.add_argument("--version", action="version", version=f"nckit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("complex", parents=[common], help="complex operations")
    c.add_argument("action", choices=["info", "skeleton", "flag", "barycentric"])
    c.add_argument("input", nargs="?", default="-", help="complex JSON file or - for stdin")
    c.add_argument("--k", type=int, default=None, help="skeleton dimension")
    c.set_defaults(func=cmd_complex)

    h = sub.add_parser("homology", parents=[common], help="integral homology and rational K-ranks")
    h.add_argument("input", nargs="?", default="-")
    h.add_argument("--reduced", action="store_true")
    h.set_defaults(func=cmd_homology)

    s = sub.add_parser("sigma-f", parents=[common], help="build a window of the group complex")
    s.add_argument("--group", required=True, help="zn:k, free:k, cyclic:n, sym:n or a group-table JSON file")
    s.add_argument("--F", required=True, help="elements of F, e.g. '-1,0,1' or '[[1,0],[0,1]]'")
    s.add_argument("--window", default=None, help="all, ball:R, range:a:b or list:...")
    s.add_argument("--variant", default="flag", help="s (full), flag or ab")
    s.set_defaults(func=cmd_sigma_f)

    v = sub.add_parser("verify-hom", parents=[common], help="symbolically verify a generator assignment")
    v.add_argument("presentation")
    v.add_argument("assignment")
    v.set_defaults(func=cmd_verify_hom)

    r = sub.add_parser("verify-rep", parents=[common], help="check relations in a matrix representation")
    r.add_argument("presentation")
    r.add_argument("rep")
    r.set_defaults(func=cmd_verify_rep)

    cl = sub.add_parser("clifford", parents=[common], help="Clifford representation of the sphere algebra")
    cl.add_argument("--n", type=int, required=True)
    cl.add_argument("--spectral", action="store_true", help="build from spectral parts instead of the closed form")
    cl.add_argument("--emit-rep", action="store_true", help="include the matrices in the report")
    cl.set_defaults(func=cmd_clifford)

    cr = sub.add_parser("crossed", parents=[common], help="crossed-product harness on a generated family")
    cr.add_argument("--group", required=True)
    cr.add_argument("--subgroup", default=None)
    cr.add_argument("--dim", type=int, default=1)
    cr.add_argument("--max-len", type=int, default=3, help="longest word in the compression check")
    cr.add_argument("--table-len", type=int, default=4, help="longest word in the strict-relation table")
    cr.set_defaults(func=cmd_crossed)

    cu = sub.add_parser("cutoff", parents=[common], help="cut-off projection on sampled points")
    cu.add_argument("--group", required=True)
    cu.add_argument("--F", required=True)
    cu.add_argument("--points", required=True, help="JSON list of {element: weight}")
    cu.set_defaults(func=cmd_cutoff)

    su = sub.add_parser("suite", parents=[common], help="run the consolidated check battery")
    su.add_argument("name", nargs="?", default="acceptance", help="acceptance (alias: paper)")
    su.add_argument("--mutate-boundary", action="store_true", help="inject a sign bug into the boundary map")
    su.set_defaults(func=cmd_suite)
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, Report | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        tol = _parse_tol(args.tol)
        seed = _seed(args)
        config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "tol", "seed", "output", "timestamp")}
        config.update(seed=seed, tol=tol)
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if args.timestamp else None
        report = Report(args.command, config, version=__version__, timestamp=stamp)
        code = args.func(args, report)
        if isinstance(report.config.get("tol"), ToleranceConfig):
            report.config["tol"] = report.config["tol"].as_dict()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except (NckitError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    text = report.dumps()
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE, report
    else:
        sys.stdout.write(text)
    return code, report


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, _ = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    return code


if __name__ == "__main__":
    sys.exit(main())
