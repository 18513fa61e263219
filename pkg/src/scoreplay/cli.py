"""Command-line front end.

Data goes to stdout, diagnostics to stderr; exit status 0 on success.
Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from scoreplay.games import (
    NotationError,
    final_scores,
    format_score,
    is_impartial,
    outcome,
    parse_game,
    render_game,
    render_tree,
)
from scoreplay.octal import (
    BudgetExceededError,
    ExpansionLimitError,
    GrundySolver,
    OctalRules,
    Position,
    RulesError,
    iter_heap_multisets,
    legal_moves,
    parse_position,
    render_position,
    resolve_rules_ref,
)
from scoreplay.periods import (
    certified_start,
    check_lemma,
    detect_certified_period,
    detect_period,
    parse_scan_spec,
    run_scan,
    sequence_digest,
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (NotationError, RulesError, BudgetExceededError, ExpansionLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoreplay",
        description="Evaluate scoring-play games, tabulate heap-game values, and analyze periods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="final scores, outcome, and impartiality of a game")
    p.add_argument("--game", required=True, help="game notation, e.g. '{4|3|2}'")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("sum", help="long-rule sum of two games in canonical notation")
    p.add_argument("--game", action="append", required=True, help="give exactly twice")
    p.add_argument("--eval", action="store_true", help="also evaluate the sum")
    p.set_defaults(handler=_cmd_sum)

    p = sub.add_parser("tree", help="indented tree rendering of a game")
    p.add_argument("--game", required=True)
    p.set_defaults(handler=_cmd_tree)

    p = sub.add_parser("gs", help="value and best moves of a heap position")
    p.add_argument("--rules", action="append", required=True, metavar="REF",
                   help="rules file, preset name, sub:/nim: shorthand, or inline document")
    p.add_argument("--position", required=True, help="comma-separated size@ruleset terms, '-' for empty")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(handler=_cmd_gs)

    p = sub.add_parser("table", help="CSV value table for a growing heap")
    p.add_argument("--rules", action="append", required=True, metavar="REF")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--var", help="which ruleset the growing heap uses (default: the only one)")
    p.add_argument("--fixed", default="-", help="base position added to every entry")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--format", choices=("csv", "structured"), default="csv")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("period", help="detect and certify the eventual period of a value sweep")
    p.add_argument("--rules", action="append", required=True, metavar="REF")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--var", help="which ruleset the growing heap uses (default: the only one)")
    p.add_argument("--fixed", default="-", help="base position (certification needs an empty base)")
    p.add_argument("--min-window", type=int, default=3)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(handler=_cmd_period)

    p = sub.add_parser("lemma", help="alternation identity for a take-s-score-s subtraction set")
    p.add_argument("--set", required=True, help="subtraction amounts, e.g. '4,5'")
    p.add_argument("--imax", type=int, default=15)
    p.set_defaults(handler=_cmd_lemma)

    p = sub.add_parser("scan", help="run an evidence scan from a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", metavar="PREFIX", help="also write PREFIX.csv and PREFIX.txt")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("oracle", help="cross-check evaluator values against expanded game trees")
    p.add_argument("--rules", action="append", required=True, metavar="REF")
    p.add_argument("--max-total", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(handler=_cmd_oracle)

    return parser


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def _load_rules(refs: list[str]) -> dict[str, OctalRules]:
    out: dict[str, OctalRules] = {}
    for ref in refs:
        rules = resolve_rules_ref(ref)
        if rules.name in out and out[rules.name] != rules:
            raise RulesError(f"conflicting rulesets named {rules.name!r}")
        out[rules.name] = rules
    return out


def _eval_line(game) -> str:
    sl, sr = final_scores(game)
    return (
        f"sl={format_score(sl)} sr={format_score(sr)} "
        f"outcome={outcome(game).value} impartial={_bool(is_impartial(game))}"
    )


def _cmd_eval(args) -> int:
    print(_eval_line(parse_game(args.game)))
    return 0


def _cmd_sum(args) -> int:
    if len(args.game) != 2:
        raise ValueError("sum needs exactly two --game arguments")
    total = parse_game(args.game[0]) + parse_game(args.game[1])
    print(render_game(total))
    if args.eval:
        print(_eval_line(total))
    return 0


def _cmd_tree(args) -> int:
    print(render_tree(parse_game(args.game)))
    return 0


def _cmd_gs(args) -> int:
    rules = _load_rules(args.rules)
    position = parse_position(args.position, known=rules)
    solver = GrundySolver(rules, budget=args.budget)
    print(f"value={format_score(solver.value(position))}")
    if not legal_moves(position, rules):
        print("best=none")
        return 0
    for move in solver.best_moves(position):
        taken = position.total - move.next.total
        print(
            f"best: take={taken} points={format_score(move.points)} "
            f"next={render_position(move.next)}"
        )
    return 0


def _sweep_values(args):
    rules = _load_rules(args.rules)
    base = parse_position(args.fixed, known=rules)
    solver = GrundySolver(rules, budget=args.budget)
    var = args.var
    if var is None and len(rules) == 1:
        var = next(iter(rules))
    values = solver.sweep(args.max_n, var=var, base=base)
    return rules, base, var, values


def _cmd_table(args) -> int:
    rules, base, var, values = _sweep_values(args)
    body = "n,value\n" + "\n".join(f"{n},{format_score(v)}" for n, v in enumerate(values))
    if args.format == "structured":
        print("format: table")
        print(f"rules: {var}")
        print(f"rules-digest: {rules[var].digest}")
        print(f"fixed: {render_position(base)}")
        print(f"max-n: {args.max_n}")
        print(f"values-digest: {sequence_digest(values)}")
        print()
    print(body)
    return 0


def _cmd_period(args) -> int:
    rules, base, var, values = _sweep_values(args)
    digest = sequence_digest(values)
    if base.heaps:
        print("note: fixed base position, certification skipped", file=sys.stderr)
        report = detect_period(values, args.min_window)
    else:
        report = detect_certified_period(rules[var], values, args.min_window)
    if report is None:
        print(f"period=none checked_up_to={args.max_n} values_digest={digest}")
        return 0
    cert_from = ""
    if report.certified:
        cert_from = f" certified_from={certified_start(rules[var], report)}"
    elif rules[var].splits_heaps:
        print("note: rules can split heaps, report stays empirical", file=sys.stderr)
    elif not base.heaps:
        print("note: no candidate period certifies within this sweep", file=sys.stderr)
    print(
        f"preperiod={report.preperiod} period={report.period} "
        f"certified={_bool(report.certified)}{cert_from} "
        f"checked_up_to={args.max_n} values_digest={digest}"
    )
    return 0


def _cmd_lemma(args) -> int:
    amounts = [int(tok) for tok in args.set.replace(",", " ").split()]
    report = check_lemma(amounts, args.imax)
    joined = ",".join(map(str, report.subtraction_set))
    print(f"set={{{joined}}} k={report.k} imax={report.i_max}")
    for s, i, lhs, rhs in report.identity_failures:
        print(f"identity-failure: s={s} i={i} lhs={format_score(lhs)} rhs={format_score(rhs)}")
    for r, i, value, bound, which in report.bound_failures:
        print(
            f"bound-failure: r={r} i={i} value={format_score(value)} "
            f"bound={format_score(bound)} ({which})"
        )
    print(f"identity-failures={len(report.identity_failures)}")
    print(f"bound-failures={len(report.bound_failures)}")
    print(f"status={'pass' if report.passed else 'fail'}")
    return 0


def _cmd_scan(args) -> int:
    spec = parse_scan_spec(Path(args.spec).read_text(encoding="utf-8"))
    report = run_scan(spec)
    sys.stdout.write(report.to_csv())
    if args.out:
        Path(args.out + ".csv").write_text(report.to_csv(), encoding="utf-8")
        Path(args.out + ".txt").write_text(report.to_detail(), encoding="utf-8")
    return 0


def _cmd_oracle(args) -> int:
    rules = _load_rules(args.rules)
    failures = 0
    total_positions = 0
    for name in sorted(rules):
        solver = GrundySolver({name: rules[name]}, budget=args.budget)
        cache: dict = {}
        checked = 0
        bad = 0
        for heaps in iter_heap_multisets(args.max_total):
            position = Position(tuple((name, size) for size in heaps))
            value = solver.value(position)
            scores = final_scores(solver.to_game(position, max_total=args.max_total), cache)
            if not (value == scores.sl == -scores.sr):
                bad += 1
                print(
                    f"mismatch: ruleset={name} position={render_position(position)} "
                    f"value={format_score(value)} sl={format_score(scores.sl)} "
                    f"sr={format_score(scores.sr)}"
                )
            checked += 1
        print(f"ruleset {name}: positions={checked} {'pass' if bad == 0 else 'FAIL'}")
        failures += bad
        total_positions += checked
    verdict = "pass" if failures == 0 else "FAIL"
    print(f"oracle: {verdict} (rulesets={len(rules)}, positions={total_positions})")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
