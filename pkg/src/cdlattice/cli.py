"""Command-line front end.

    cdlattice cd REF [--engine auto|brute|class2] [--output report.json] [--figure hasse.png]
    cdlattice verify [CHECK ...] [--p P --n N] [--corpus REF ...] [--json out.json]
    cdlattice export report.json [--format dot|png] [--output PATH]

A group REF is a group-spec JSON file or a builtin reference such as
``builtin:paper_Gn?p=3&n=2``, ``dihedral:8`` or ``symmetric3``.
Exit codes: 0 success / all checks passed, 1 verification failure or
invariant violation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence
from urllib.parse import parse_qsl

from . import class2 as c2
from . import group_core as gc
from . import verify as vf
from .cd_engine import ClosureViolation, cd_lattice
from .class2 import Class2Presentation
from .constructions import BUILDERS, RecipeError, build, factor
from .fp_linalg import subspace_count
from .report import ReportError, cd_report, dumps, load_report, plot_hasse, to_dot

DEFAULT_CORPUS = [
    "cyclic:12",
    "symmetric3",
    "dihedral:8",
    "quaternion:8",
    "extraspecial?p=2&n=2&kind=plus",
    "extraspecial?p=2&n=2&kind=minus",
    "paper_P:2",
    "paper_P:3",
    "paper_Gn?p=2&n=2",
    "paper_Gn?p=3&n=2",
]
THEOREM_B_DEFAULTS = [(2, 1), (3, 1), (2, 2), (3, 2)]
SCALAR_DEFAULTS = [(2, 2), (3, 2), (3, 3), (4, 5), (5, 3)]
_MAXIMAL_MEMBER_SUBSPACE_LIMIT = 5000


class InputError(ValueError):
    pass


def _coerce(value: str) -> Any:
    try:
        return int(value)
    except ValueError:
        return value


def parse_builtin(ref: str) -> tuple[str, dict]:
    """``[builtin:]name[:arg][?k=v&...]`` -> (name, params)."""
    body = ref[len("builtin:"):] if ref.startswith("builtin:") else ref
    body, _, query = body.partition("?")
    name, _, arg = body.partition(":")
    if name not in BUILDERS:
        raise InputError(f"unknown builtin group {name!r}; known: {', '.join(sorted(BUILDERS))}")
    params = {k: _coerce(v) for k, v in parse_qsl(query, keep_blank_values=True)}
    if arg:
        names = BUILDERS[name][1]
        if not names:
            raise InputError(f"{name} takes no parameters")
        params.setdefault(names[0], _coerce(arg))
    return name, params


def load_group_spec(data: Any) -> gc.CayleyGroup | Class2Presentation:
    """Parse a group-spec object (kind = cayley | class2 | builtin)."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("group spec must be an object with a 'kind' field")
    kind = data["kind"]
    name = data.get("name", "G")
    try:
        if kind == "cayley":
            table = data["table"]
            order = data.get("order", len(table))
            if len(table) != order:
                raise InputError(f"table has {len(table)} rows but order is {order}")
            for i, row in enumerate(table):
                if len(row) != order:
                    raise InputError(f"row {i} has {len(row)} entries, expected {order}")
            return gc.CayleyGroup(table, data.get("labels"), name=name)
        if kind == "class2":
            p, r, s = int(data["p"]), int(data["r"]), int(data["s"])
            comms = []
            for entry in data.get("commutators", []):
                i, j, vec = entry
                comms.append((int(i), int(j), [int(x) for x in vec]))
            return Class2Presentation(p, r, s, comms, data.get("powers"), name=name)
        if kind == "builtin":
            params = data.get("params", {})
            product = build(data["name"], **params).product
            return product
    except KeyError as exc:
        raise InputError(f"group spec is missing field {exc}") from None
    except (gc.GroupError, c2.PresentationError, RecipeError, TypeError) as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    raise InputError(f"unknown group spec kind {kind!r}")


def resolve(ref: str) -> gc.CayleyGroup | Class2Presentation:
    path = Path(ref)
    if ref.endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read group spec {ref}: {exc}") from None
        return load_group_spec(data)
    name, params = parse_builtin(ref)
    try:
        return build(name, **params).product
    except (RecipeError, gc.GroupError, ValueError) as exc:
        raise InputError(str(exc)) from None


def compute_cd(group, engine: str = "auto", cap: int = gc.DEFAULT_CAP, budget: int = c2.DEFAULT_BUDGET):
    if engine == "auto":
        engine = "class2" if isinstance(group, Class2Presentation) else "brute"
    if engine == "class2":
        if not isinstance(group, Class2Presentation):
            raise InputError("the class2 engine needs a class2 presentation")
        return c2.cd_lattice_class2(group, budget)
    if engine == "brute":
        if isinstance(group, Class2Presentation):
            group, _ = c2.to_cayley(group, cap)
        return cd_lattice(group, cap)
    raise InputError(f"unknown engine {engine!r}")


def cmd_cd(args) -> int:
    group = resolve(args.group)
    cd = compute_cd(group, args.engine, args.cap, args.budget)
    report = cd_report(cd)
    text = dumps(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.figure:
        plot_hasse(report, args.figure)
    return 0


def cmd_export(args) -> int:
    try:
        report = load_report(args.report)
    except ReportError as exc:
        raise InputError(str(exc)) from None
    if args.format == "dot":
        text = to_dot(report)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        out = args.output or str(Path(args.report).with_suffix("." + args.format))
        plot_hasse(report, out)
    return 0


def _builtin_name(ref: str) -> str | None:
    try:
        return parse_builtin(ref)[0]
    except InputError:
        return None


def _suite_for_group(ref: str, group, checks: set[str], seed: int, trials: int | None) -> list[vf.CheckReport]:
    reports = []
    cd = compute_cd(group)
    for name, fn in vf.CD_CHECKS.items():
        if name in checks:
            reports.append(fn(cd))
    if isinstance(group, Class2Presentation):
        if "theorem-a" in checks:
            reports.append(vf.check_theorem_a(group))
        if "cross-engine" in checks and group.order <= 64:
            reports.append(vf.check_cross_engine(group))
        if "maximal-member-lemma" in checks:
            if subspace_count(group.r, group.p) <= _MAXIMAL_MEMBER_SUBSPACE_LIMIT:
                reports.append(vf.check_maximal_member_lemma(group))
            elif _builtin_name(ref) in ("paper_Gn", "paper_P"):
                cands = [factor(group, i) for i in range(group.r // 3)]
                reports.append(vf.check_maximal_member_lemma(group, candidates=cands))
    else:
        if "isaacs-inequality" in checks:
            reports.append(vf.check_isaacs_inequality(group, trials=trials, seed=seed))
        if "ratio-lemma" in checks:
            reports.append(vf.check_ratio_lemma(group))
        if "maximal-member-lemma" in checks:
            reports.append(vf.check_maximal_member_lemma(group))
        if "theorem-a" in checks:
            reports.append(vf.check_theorem_a(group))
    return reports


def run_suite(checks: Sequence[str], corpus: Sequence[str] = DEFAULT_CORPUS, p: int | None = None,
              n: int | None = None, seed: int = vf.DEFAULT_SEED, trials: int | None = None) -> list[vf.CheckReport]:
    wanted = set(vf.CHECK_NAMES) if "all" in checks else set(checks)
    unknown = wanted - set(vf.CHECK_NAMES)
    if unknown:
        raise InputError(f"unknown check(s): {', '.join(sorted(unknown))}; known: {', '.join(vf.CHECK_NAMES)}")
    reports: list[vf.CheckReport] = []
    group_checks = wanted - set(vf.PARAM_CHECKS)
    if group_checks:
        for ref in corpus:
            reports.extend(_suite_for_group(ref, resolve(ref), group_checks, seed, trials))
    if "theorem-b" in wanted:
        params = [(p, n)] if p is not None and n is not None else THEOREM_B_DEFAULTS
        reports.extend(vf.check_theorem_b(pp, nn) for pp, nn in params)
    if "scalar-matrix-lemma" in wanted:
        params = [(n, p)] if p is not None and n is not None else SCALAR_DEFAULTS
        reports.extend(vf.check_scalar_matrix_lemma(nn, pp) for nn, pp in params)
    return reports


def cmd_verify(args) -> int:
    checks = args.checks or ["all"]
    reports = run_suite(checks, args.corpus or DEFAULT_CORPUS, args.p, args.n, args.seed, args.trials)
    for r in reports:
        print(r.line())
    failed = sum(r.status == vf.FAIL for r in reports)
    print(f"{len(reports)} checks, {failed} failed")
    if args.json:
        Path(args.json).write_text(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdlattice", description="Chermak-Delgado lattices of finite groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cd = sub.add_parser("cd", help="compute a Chermak-Delgado lattice")
    p_cd.add_argument("group", help="group-spec JSON file or builtin reference")
    p_cd.add_argument("--engine", choices=["auto", "brute", "class2"], default="auto")
    p_cd.add_argument("--output", "-o", help="write the JSON report here (default: stdout)")
    p_cd.add_argument("--figure", help="also render the Hasse diagram to this image file")
    p_cd.add_argument("--cap", type=int, default=gc.DEFAULT_CAP, help="brute-force order cap")
    p_cd.add_argument("--budget", type=int, default=c2.DEFAULT_BUDGET, help="class2 subspace budget")
    p_cd.set_defaults(func=cmd_cd)

    p_v = sub.add_parser("verify", help="run theorem checks")
    p_v.add_argument("checks", nargs="*", help=f"check names or 'all' ({', '.join(vf.CHECK_NAMES)})")
    p_v.add_argument("--p", type=int)
    p_v.add_argument("--n", type=int)
    p_v.add_argument("--corpus", nargs="+", help="group references to check instead of the default corpus")
    p_v.add_argument("--seed", type=int, default=vf.DEFAULT_SEED)
    p_v.add_argument("--trials", type=int, help="sample this many subgroup pairs for the Isaacs inequality")
    p_v.add_argument("--json", help="write the reports as JSON here")
    p_v.set_defaults(func=cmd_verify)

    p_e = sub.add_parser("export", help="convert a lattice report")
    p_e.add_argument("report")
    p_e.add_argument("--format", choices=["dot", "png", "svg", "pdf"], default="dot")
    p_e.add_argument("--output", "-o")
    p_e.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (gc.CapExceededError, c2.BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ClosureViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
