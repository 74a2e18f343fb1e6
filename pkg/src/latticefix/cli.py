"""Command-line front end.

Exit codes: 0 when every requested check holds, 1 when a property fails or a
witness is found (the witness is printed), 2 for malformed input or usage.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .correspondence import (
    THEOREMS,
    fixed_points_brute,
    greatest_fixed_point,
    is_ascending,
    is_v_ascending,
    least_fixed_point_infC,
    least_fixed_point_minsel,
    sup_fix_over_subset,
    theorem_id,
    values_complete,
    values_subcomplete,
    verify_fix_complete,
)
from .documents import (
    correspondence_from_doc,
    correspondence_to_doc,
    dumps,
    lattice_to_doc,
    load_path,
    poset_from_doc,
)
from .errors import (
    DocumentError,
    EquivalenceViolation,
    ForeignSubset,
    HypothesisViolated,
    LatticeFixError,
    NotALattice,
    NotFixedPoints,
)
from .game import (
    build_game,
    check_increasing_differences,
    check_supermodular,
    game_to_doc,
    nash_brute,
    nash_via_fixpoint,
)
from .lab import (
    DROPPABLE,
    STRATEGIES,
    TARGETS,
    GeneratorConfig,
    run_game_suite,
    run_theorem_suite,
    search_counterexample,
    verify_witness,
)
from .lattice import CheckReport, _plain, as_lattice
from .rng import DEFAULT_SEED

OK, FAILED, USAGE = 0, 1, 2

PROPERTIES = ("ascending", "v-ascending", "subcomplete-values", "complete-values")
FIX_METHODS = ("brute", "inf-c", "min-sel", "dual")
SUP_VARIANTS = ("chain-subcomplete", "complete-values")
THEOREM_CHOICES = ("fact-zhou", "myzhou", "cpltval") + THEOREMS


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Out:
    """Collects one report; renders it as text or as a JSON document."""

    def __init__(self, json_mode: bool, stream):
        self.json_mode = json_mode
        self.stream = stream

    def emit(self, doc: dict, lines: list[str]):
        if self.json_mode:
            self.stream.write(dumps(doc))
        else:
            for line in lines:
                self.stream.write(line + "\n")


def _set(items) -> str:
    return "{" + ",".join(items) + "}"


def _nash_set(keys) -> str:
    return "{" + ",".join(f"({k})" for k in keys) + "}"


def _check_line(name, rep) -> str:
    mark = "yes" if rep.holds else "no"
    line = f"{name}: {mark}"
    if rep.detail:
        line += f" ({rep.detail})"
    return line


def _load_corr(path, allow_empty=False):
    doc = load_path(path)
    return correspondence_from_doc(doc, base_dir=Path(path).parent, allow_empty=allow_empty)


# -- subcommands -----------------------------------------------------------


def cmd_lattice_check(args, out):
    P = poset_from_doc(load_path(args.file))
    doc = {"command": "lattice check", "input": lattice_to_doc(P)}
    try:
        L = as_lattice(P)
    except NotALattice as exc:
        doc.update(holds=False, witness=[exc.x, exc.y, exc.bound], detail=str(exc))
        out.emit(doc, [f"not a lattice: {exc}", f"witness: {exc.x}, {exc.y} ({exc.bound})"])
        return FAILED
    doc.update(holds=True, witness=None, size=len(L), bottom=L.bottom, top=L.top,
               detail="complete lattice")
    out.emit(doc, [f"lattice with {len(L)} elements; bottom {L.bottom}, top {L.top}"])
    return OK


def _property_report(F, name):
    if name == "ascending":
        return is_ascending(F)
    if name == "v-ascending":
        rep = is_v_ascending(F)
        w = rep.witnesses.get("lower_v") or rep.witnesses.get("upper_v")
        detail = "lower and upper V-ascending" if rep.v_ascending else (
            "not lower V-ascending" if not rep.lower_v else "not upper V-ascending")
        return CheckReport(rep.v_ascending, w, detail)
    if name == "subcomplete-values":
        return values_subcomplete(F)
    return values_complete(F)


def cmd_corr_check(args, out):
    F = _load_corr(args.file)
    names = [args.property] if args.property else list(PROPERTIES)
    reports = {n: _property_report(F, n) for n in names}
    doc = {"command": "corr check", "input": correspondence_to_doc(F),
           "properties": {n: r.to_doc() for n, r in reports.items()}}
    out.emit(doc, [_check_line(n, r) for n, r in reports.items()]
             + [f"witness for {n}: {_plain(r.witness)}" for n, r in reports.items() if not r.holds])
    return OK if all(r.holds for r in reports.values()) else FAILED


def cmd_fix_compute(args, out):
    F = _load_corr(args.file)
    doc = {"command": "fix compute", "method": args.method, "input": correspondence_to_doc(F)}
    if args.method == "brute":
        fix = fixed_points_brute(F)
        doc["result"] = fix.to_doc()
        lines = [f"Fix = {_set(fix.members.ordered())}",
                 f"least {fix.least}, greatest {fix.greatest}",
                 "complete lattice" if fix.is_complete_lattice else "not a complete lattice"]
        out.emit(doc, lines)
        return OK
    try:
        if args.method == "inf-c":
            doc["result"] = {"least": least_fixed_point_infC(F)}
        elif args.method == "min-sel":
            doc["result"] = {"least": least_fixed_point_minsel(F)}
        else:
            doc["result"] = {"greatest": greatest_fixed_point(F, "infC")}
    except HypothesisViolated as exc:
        doc["error"] = {"detail": exc.detail, "witness": _plain(exc.witness)}
        out.emit(doc, [f"hypotheses not met: {exc.detail}", f"witness: {_plain(exc.witness)}"])
        return FAILED
    out.emit(doc, [f"{k} fixed point: {v}" for k, v in doc["result"].items()])
    return OK


def cmd_fix_verify(args, out):
    F = _load_corr(args.file)
    theorem = theorem_id(args.theorem)
    rep = verify_fix_complete(F, theorem)
    doc = {"command": "fix verify", "theorem": theorem, "input": correspondence_to_doc(F),
           "report": rep.to_doc()}
    lines = [rep.detail]
    if not rep.holds:
        # headline first, the specific cause on its own line
        prefix, sep, rest = rep.detail.partition(": ")
        head, sep2, reason = rest.partition(": ")
        if sep and sep2:
            lines = [f"{prefix}: {head}", f"reason: {reason}"]
        lines.append(f"witness: {_plain(rep.witness)}")
    out.emit(doc, lines)
    return OK if rep.holds else FAILED


def cmd_fix_sup(args, out):
    F = _load_corr(args.file)
    subset = [s.strip() for s in args.subset.split(",") if s.strip()]
    if not subset:
        raise UsageError("--subset needs at least one element")
    variant = args.variant.replace("-", "_")
    doc = {"command": "fix sup", "variant": variant, "subset": subset, "input": correspondence_to_doc(F)}
    try:
        sup = sup_fix_over_subset(F, subset, variant)
    except HypothesisViolated as exc:
        doc["error"] = {"detail": exc.detail, "witness": _plain(exc.witness)}
        out.emit(doc, [f"hypotheses not met: {exc.detail}", f"witness: {_plain(exc.witness)}"])
        return FAILED
    doc["sup"] = sup
    out.emit(doc, [f"sup in Fix of {_set(subset)} = {sup}"])
    return OK


def cmd_game_check(args, out):
    g = build_game(load_path(args.file))
    reps = {"supermodular": check_supermodular(g), "increasing_differences": check_increasing_differences(g)}
    doc = {"command": "game check", "input": game_to_doc(g),
           "checks": {k: r.to_doc() for k, r in reps.items()}}
    out.emit(doc, [_check_line(k, r) for k, r in reps.items()]
             + [f"witness for {k}: {_plain(r.witness)}" for k, r in reps.items() if not r.holds])
    return OK if all(r.holds for r in reps.values()) else FAILED


def cmd_game_solve(args, out):
    g = build_game(load_path(args.file))
    doc = {"command": "game solve", "method": args.method, "input": game_to_doc(g)}
    try:
        eq = nash_brute(g) if args.method == "brute" else nash_via_fixpoint(g)
    except (HypothesisViolated, EquivalenceViolation) as exc:
        witness = _plain(getattr(exc, "witness", None))
        doc["error"] = {"detail": str(exc), "witness": witness}
        out.emit(doc, [f"failed: {exc}"])
        return FAILED
    doc["nash"] = eq.to_doc()
    lines = [f"Nash = {_nash_set(eq.keys())}"]
    if eq.members:
        lines.append(f"least ({doc['nash']['least']}), greatest ({doc['nash']['greatest']})")
    out.emit(doc, lines)
    return OK if eq.members else FAILED


def cmd_game_suite(args, out):
    rep = run_game_suite(args.seed, args.trials, max_players=args.max_players,
                         max_strategies=args.max_strategies, workers=args.workers)
    doc = {"command": "game suite", "report": rep.to_doc()}
    d = rep.to_doc()
    lines = [f"{d['trials']} games ({d['non_product']} non-product), {d['equilibria_total']} equilibria",
             f"validator failures {d['validator_failures']}, equivalence violations "
             f"{d['equivalence_violations']}, Nash violations {d['nash_violations']}, "
             f"affine violations {d['affine_violations']}"]
    lines += [f"witness: trial {w['trial']} ({w['kind']}): {w['detail']}" for w in d["witnesses"]]
    out.emit(doc, lines)
    return OK if rep.passed else FAILED


def _config(args, target):
    return GeneratorConfig(seed=args.seed, max_lattice_size=args.max_size,
                           max_value_size=args.max_value_size, target_class=target,
                           strategy=args.strategy)


def cmd_fuzz(args, out):
    cfg = _config(args, args.target)
    rep = run_theorem_suite(args.theorem, cfg, args.trials, oracles=not args.no_oracles,
                            workers=args.workers)
    doc = {"command": "fuzz", "report": rep.to_doc()}
    lines = [f"{rep.theorem}: {rep.trials} trials, {rep.skipped} skipped, "
             f"{rep.hypothesis_hits} hypothesis hits, {rep.conclusion_verified} verified, "
             f"{rep.conclusion_violations} violations",
             f"oracle checks {rep.oracle_checks}, mismatches {rep.oracle_mismatches}"]
    lines += [f"witness: trial {w['trial']} ({w['kind']}): {w['detail']}" for w in rep.witnesses]
    out.emit(doc, lines)
    return OK if rep.passed else FAILED


def cmd_search(args, out):
    cfg = _config(args, "unconstrained")
    w = search_counterexample(args.dropped, cfg, args.trials)
    doc = {"command": "search", "dropped": args.dropped, "trials": args.trials, "seed": args.seed}
    if w is None:
        doc["witness"] = None
        out.emit(doc, [f"no witness in {args.trials} trials (inconclusive)"])
        return OK
    doc["witness"] = w.to_doc()
    doc["reverified"] = verify_witness(w)
    lines = [f"witness at trial {w.trial}: {w.reason}",
             f"Fix = {_set(w.fixed_points)}"]
    if w.subset is not None:
        lines.append(f"subset without bound in Fix: {_set(w.subset)}")
    lines.append("map: " + "; ".join(f"F({x})={_set(w.correspondence.value(x))}"
                                     for x in w.correspondence.lattice.elements))
    out.emit(doc, lines)
    return FAILED


# -- parser ----------------------------------------------------------------


class _Once(argparse.Action):
    """Reject a second occurrence instead of silently keeping the last one."""

    def __call__(self, parser, namespace, values, option_string=None):
        seen = getattr(namespace, "_seen", set())
        if self.dest in seen:
            parser.error(f"{option_string} given more than once")
        namespace._seen = seen | {self.dest}
        setattr(namespace, self.dest, values)


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _seed(text):
    try:
        n = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= n < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report document")

    parser = _Parser(prog="latticefix", description="Fixed points of set-valued maps on finite lattices.")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    lat = top.add_parser("lattice", help="lattice documents").add_subparsers(dest="action", required=True)
    p = lat.add_parser("check", parents=[common], help="check that a poset document is a lattice")
    p.add_argument("file")
    p.set_defaults(run=cmd_lattice_check)

    corr = top.add_parser("corr", help="correspondence documents").add_subparsers(dest="action", required=True)
    p = corr.add_parser("check", parents=[common], help="check properties of a correspondence")
    p.add_argument("file")
    p.add_argument("--property", choices=PROPERTIES)
    p.set_defaults(run=cmd_corr_check)

    fix = top.add_parser("fix", help="fixed points").add_subparsers(dest="action", required=True)
    p = fix.add_parser("compute", parents=[common], help="compute fixed points")
    p.add_argument("file")
    p.add_argument("--method", choices=FIX_METHODS, default="brute", action=_Once)
    p.set_defaults(run=cmd_fix_compute)
    p = fix.add_parser("verify", parents=[common], help="check a theorem on one correspondence")
    p.add_argument("file")
    p.add_argument("--theorem", choices=THEOREM_CHOICES, required=True, action=_Once)
    p.set_defaults(run=cmd_fix_verify)
    p = fix.add_parser("sup", parents=[common], help="least upper bound of fixed points within Fix")
    p.add_argument("file")
    p.add_argument("--subset", required=True, help="comma-separated fixed points")
    p.add_argument("--variant", choices=SUP_VARIANTS, default="chain-subcomplete", action=_Once)
    p.set_defaults(run=cmd_fix_sup)

    game = top.add_parser("game", help="supermodular games").add_subparsers(dest="action", required=True)
    p = game.add_parser("check", parents=[common], help="check supermodularity and increasing differences")
    p.add_argument("file")
    p.set_defaults(run=cmd_game_check)
    p = game.add_parser("solve", parents=[common], help="Nash equilibria")
    p.add_argument("file")
    p.add_argument("--method", choices=("brute", "fixpoint"), default="brute", action=_Once)
    p.set_defaults(run=cmd_game_solve)
    p = game.add_parser("suite", parents=[common], help="seeded random game suite")
    p.add_argument("--trials", type=_positive, default=500)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--max-players", type=_positive, default=3)
    p.add_argument("--max-strategies", type=_positive, default=4)
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(run=cmd_game_suite)

    gen = _Parser(add_help=False)
    gen.add_argument("--trials", type=_positive, default=1000)
    gen.add_argument("--max-size", type=_positive, default=8)
    gen.add_argument("--max-value-size", type=_positive, default=None)
    gen.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    gen.add_argument("--strategy", choices=STRATEGIES, default="chain_product_closure")

    p = top.add_parser("fuzz", parents=[common, gen], help="hypothesis-conditioned theorem fuzzing")
    p.add_argument("--theorem", choices=THEOREM_CHOICES, required=True, action=_Once)
    p.add_argument("--target", choices=TARGETS, default="v_ascending")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--no-oracles", action="store_true", help="skip the brute-force oracle comparisons")
    p.set_defaults(run=cmd_fuzz)

    p = top.add_parser("search", parents=[common, gen], help="counterexample search with one hypothesis dropped")
    p.add_argument("--dropped", choices=DROPPABLE, required=True)
    p.set_defaults(run=cmd_search)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else OK
    out = _Out(args.json, stdout)
    try:
        return args.run(args, out)
    except UsageError as exc:
        stderr.write(f"latticefix: {exc}\n")
        return USAGE
    except (DocumentError, NotFixedPoints, ForeignSubset, ValueError) as exc:
        stderr.write(f"latticefix: {exc}\n")
        return USAGE
    except NotALattice as exc:
        # a lattice field inside a correspondence or game document
        stderr.write(f"latticefix: input is not a lattice: {exc}\n")
        return USAGE
    except LatticeFixError as exc:
        stderr.write(f"latticefix: {exc}\n")
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
