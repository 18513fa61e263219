"""Eventual-period analysis of exact value sequences, plus evidence scans.

Detection finds the smallest period and preperiod visible in a finite
sequence.  For single-heap games whose digits never split a heap, the value
recurrence only looks back as far as the digit count, so a verified window
certifies the period forever.  Scanners only ever report evidence; nothing
here asserts a conjecture is true.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from scoreplay.games import Score, format_score
from scoreplay.octal import (
    BudgetExceededError,
    GrundySolver,
    OctalRules,
    Position,
    parse_position,
    render_position,
    resolve_rules_ref,
    rules_from_name,
    subtraction_rules,
)


def sequence_digest(values: Sequence[Score]) -> str:
    """Stable checksum of a value sequence under exact rational rendering."""
    payload = ",".join(format_score(v) for v in values)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class PeriodReport:
    preperiod: int
    period: int
    checked_up_to: int  # last index of the analyzed sequence
    certified: bool
    sequence_digest: str


def verify_period(values: Sequence[Score], preperiod: int, period: int) -> bool:
    """Recheck v(n+period) == v(n) for every n from preperiod to the end."""
    last = len(values) - 1
    return all(
        values[n + period] == values[n] for n in range(preperiod, last - period + 1)
    )


def _period_candidates(values: Sequence[Score], min_window: int):
    """Qualifying (preperiod, period) reports in ascending period order.

    For each period the preperiod is minimal; a candidate qualifies when
    the tail from the preperiod holds at least ``min_window`` complete
    copies of the period block.  Every candidate is re-verified before
    being yielded.
    """
    if min_window < 1:
        raise ValueError("min_window must be at least 1")
    count = len(values)
    if count < min_window:
        raise ValueError(f"sequence of length {count} is shorter than min_window={min_window}")
    last = count - 1
    digest = sequence_digest(values)
    for period in range(1, count // min_window + 1):
        preperiod = 0
        for n in range(last - period, -1, -1):
            if values[n + period] != values[n]:
                preperiod = n + 1
                break
        if count - preperiod < min_window * period:
            continue
        if not verify_period(values, preperiod, period):
            raise RuntimeError("period self-check failed")  # pragma: no cover
        yield PeriodReport(preperiod, period, last, False, digest)


def detect_period(values: Sequence[Score], min_window: int = 3) -> PeriodReport | None:
    """Smallest period, then smallest preperiod, visible in ``values``.

    Purely empirical: a short run at the very end of the sequence can
    qualify (three trailing equal values admit period 1), so callers after
    an eventual period should prefer :func:`detect_certified_period`.
    Returns None when nothing qualifies.
    """
    return next(_period_candidates(values, min_window), None)


def certified_start(rules: OctalRules, report: PeriodReport) -> int:
    """First index the finite-lookback argument is applied from."""
    return max(report.preperiod, len(rules.digits) + 1)


def certify_period(rules: OctalRules, report: PeriodReport, values: Sequence[Score]) -> bool:
    """Prove a detected period of a single-heap sweep continues forever.

    Valid only when no digit splits heaps: past the digit count f, the value
    of heap n is a fixed function of the previous f values, so a verified
    window of period + f matches starting past f extends by induction to all
    larger heaps.  Splitting rules always return False (the report stays
    empirical).  The caller must have swept these rules alone from an empty
    base.
    """
    if rules.splits_heaps:
        return False
    lookback = len(rules.digits)
    start = certified_start(rules, report)
    needed = start + 2 * report.period + lookback
    if len(values) < needed:
        raise ValueError(
            f"certification window needs values through n={needed - 1}, "
            f"have up to n={len(values) - 1}"
        )
    return all(
        values[n + report.period] == values[n]
        for n in range(start, start + report.period + lookback)
    )


def detect_certified_period(
    rules: OctalRules, values: Sequence[Score], min_window: int = 3
) -> PeriodReport | None:
    """Detection that prefers a provable period over a shorter empirical one.

    Walks the qualifying candidates in ascending period order and returns
    the first that certification proves, marked certified.  A certificate
    is a proof, so a spurious short period (say, a constant run at the end
    of the sequence) can never win here: it either lacks the data for its
    window or fails verification, and the search moves on.  When nothing
    certifies — splitting rules, or too short a sweep — the plain
    :func:`detect_period` answer is returned unmarked, or None if there is
    no candidate at all.
    """
    first: PeriodReport | None = None
    for candidate in _period_candidates(values, min_window):
        if first is None:
            first = candidate
        if rules.splits_heaps:
            break
        try:
            proven = certify_period(rules, candidate, values)
        except ValueError:
            continue
        if proven:
            return replace(candidate, certified=True)
    return first


# ---------------------------------------------------------------------------
# Alternation identity for take-s-score-s subtraction games


@dataclass(frozen=True)
class LemmaReport:
    """Checked alternation identity for one subtraction set.

    With k the largest allowed removal, values at s+2ik must equal k minus
    the value one k-block earlier; residues r never exceed r on even blocks
    and never drop below k-r on odd blocks.  Failure entries are
    (s, i, lhs, rhs) and (r, i, value, bound, which) tuples.
    """

    subtraction_set: tuple[int, ...]
    k: int
    i_max: int
    identity_failures: tuple[tuple, ...]
    bound_failures: tuple[tuple, ...]

    @property
    def passed(self) -> bool:
        return not self.identity_failures and not self.bound_failures


def check_lemma(amounts: Iterable[int], i_max: int, budget: int | None = None) -> LemmaReport:
    """Check the alternation identity and its residue bounds up to ``i_max``."""
    s_set = sorted(set(int(a) for a in amounts))
    if not s_set or s_set[0] < 1:
        raise ValueError(f"subtraction amounts must be positive integers: {s_set}")
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    k = s_set[-1]
    solver = GrundySolver(subtraction_rules(s_set), budget=budget)
    seq = solver.sweep(2 * (i_max + 1) * k)

    identity = []
    for s in s_set:
        for i in range(1, i_max + 1):
            lhs = seq[s + 2 * i * k]
            rhs = k - seq[s + (2 * i - 1) * k]
            if lhs != rhs:
                identity.append((s, i, lhs, rhs))

    bounds = []
    for r in range(0, k + 1):
        for i in range(0, i_max + 1):
            even_value = seq[r + 2 * i * k]
            if even_value > r:
                bounds.append((r, i, even_value, Fraction(r), "even-block value above residue"))
            odd_value = seq[r + (2 * i + 1) * k]
            if odd_value < k - r:
                bounds.append((r, i, odd_value, Fraction(k - r), "odd-block value below k-r"))

    return LemmaReport(tuple(s_set), k, i_max, tuple(identity), tuple(bounds))


# ---------------------------------------------------------------------------
# Evidence scans


@dataclass(frozen=True)
class ScanInstance:
    name: str
    rules: OctalRules
    extra_rules: tuple[OctalRules, ...] = ()
    fixed: Position = Position()
    max_n: int = 500
    min_window: int = 3
    budget: int | None = 1_000_000


@dataclass(frozen=True)
class ScanSpec:
    seed: int
    instances: tuple[ScanInstance, ...]
    digest: str


@dataclass(frozen=True)
class ScanRow:
    instance: str
    status: str  # ok | not-found | budget-exceeded
    preperiod: int | None
    period: int | None
    certified: bool
    certified_from: int | None
    conjectured_2k: int | None
    divides_2k: bool | None
    in_hypothesis: bool
    counterexample: bool
    max_n: int
    values_digest: str
    rules_digest: str


@dataclass(frozen=True)
class ScanReport:
    spec_digest: str
    seed: int
    rows: tuple[ScanRow, ...]

    def to_csv(self) -> str:
        lines = [_CSV_HEADER]
        for row in self.rows:
            lines.append(
                ",".join(
                    (
                        row.instance,
                        row.status,
                        _opt_int(row.preperiod),
                        _opt_int(row.period),
                        _bool(row.certified),
                        _opt_int(row.certified_from),
                        _opt_int(row.conjectured_2k),
                        "" if row.divides_2k is None else _bool(row.divides_2k),
                        _bool(row.in_hypothesis),
                        _bool(row.counterexample),
                        str(row.max_n),
                        row.values_digest,
                        row.rules_digest,
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def to_detail(self) -> str:
        lines = [
            "scan-report",
            f"spec-digest: {self.spec_digest}",
            f"seed: {self.seed}",
            f"instances: {len(self.rows)}",
        ]
        for row in self.rows:
            lines.append("")
            lines.append(f"instance: {row.instance}")
            lines.append(f"status: {row.status}")
            lines.append(f"max-n: {row.max_n}")
            lines.append(f"preperiod: {_opt_int(row.preperiod) or '-'}")
            lines.append(f"period: {_opt_int(row.period) or '-'}")
            lines.append(f"certified: {_bool(row.certified)}")
            lines.append(f"certified-from: {_opt_int(row.certified_from) or '-'}")
            lines.append(f"conjectured-2k: {_opt_int(row.conjectured_2k) or '-'}")
            lines.append(
                "divides-2k: " + ("-" if row.divides_2k is None else _bool(row.divides_2k))
            )
            lines.append(f"in-hypothesis: {_bool(row.in_hypothesis)}")
            lines.append(f"counterexample: {_bool(row.counterexample)}")
            lines.append(f"values-digest: {row.values_digest}")
            lines.append(f"rules-digest: {row.rules_digest}")
        return "\n".join(lines) + "\n"


_CSV_HEADER = (
    "instance,status,preperiod,period,certified,certified_from,conjectured_2k,"
    "divides_2k,in_hypothesis,counterexample,max_n,values_digest,rules_digest"
)


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def _opt_int(value: int | None) -> str:
    return "" if value is None else str(value)


def parse_scan_spec(text: str) -> ScanSpec:
    """Parse a scan spec: directives, one per line.

    ``seed:``, ``max-n:``, ``min-window:``, ``budget:`` set defaults for the
    instances that follow.  ``subtraction-family:`` enumerates every
    nonempty subset of a ground set (elements or ``a-b`` ranges) as
    take-s-score-s games.  ``instance:`` adds one ruleset reference with
    optional ``fixed=``, ``max-n=``, ``min-window=``, ``budget=`` settings.
    """
    seed = 0
    max_n = 500
    min_window = 3
    budget: int | None = 1_000_000
    instances: list[ScanInstance] = []
    seen_names: set[str] = set()

    def add_instance(inst: ScanInstance) -> None:
        if inst.name in seen_names:
            raise ValueError(f"duplicate scan instance {inst.name!r}")
        seen_names.add(inst.name)
        instances.append(inst)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"scan spec line {lineno}: expected 'key: value', got {raw.strip()!r}")
        key = key.strip().lower()
        value = value.strip()
        try:
            if key == "seed":
                seed = int(value)
            elif key == "max-n":
                max_n = int(value)
            elif key == "min-window":
                min_window = int(value)
            elif key == "budget":
                budget = None if value.lower() == "none" else int(value)
            elif key == "subtraction-family":
                ground = _parse_ground_set(value)
                for subset in _nonempty_subsets(ground):
                    rules = subtraction_rules(subset)
                    add_instance(
                        ScanInstance(rules.name, rules, (), Position(), max_n, min_window, budget)
                    )
            elif key == "instance":
                add_instance(
                    _parse_instance_line(value, max_n, min_window, budget)
                )
            else:
                raise ValueError(f"unknown directive {key!r}")
        except ValueError as exc:
            raise ValueError(f"scan spec line {lineno}: {exc}") from None
    if not instances:
        raise ValueError("scan spec declares no instances")
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
    return ScanSpec(seed, tuple(instances), digest)


def _parse_ground_set(value: str) -> list[int]:
    ground: set[int] = set()
    for token in value.replace(",", " ").split():
        if "-" in token:
            lo, _, hi = token.partition("-")
            ground.update(range(int(lo), int(hi) + 1))
        else:
            ground.add(int(token))
    if not ground or min(ground) < 1:
        raise ValueError(f"ground set must contain positive integers: {sorted(ground)}")
    return sorted(ground)


def _nonempty_subsets(ground: list[int]):
    from itertools import combinations

    for size in range(1, len(ground) + 1):
        yield from combinations(ground, size)


def _parse_instance_line(value: str, max_n: int, min_window: int, budget: int | None) -> ScanInstance:
    tokens = value.split()
    if not tokens:
        raise ValueError("instance directive needs a rules reference")
    rules = resolve_rules_ref(tokens[0])
    fixed_literal = "-"
    for token in tokens[1:]:
        key, sep, setting = token.partition("=")
        if not sep:
            raise ValueError(f"bad instance setting {token!r}")
        if key == "fixed":
            fixed_literal = setting
        elif key == "max-n":
            max_n = int(setting)
        elif key == "min-window":
            min_window = int(setting)
        elif key == "budget":
            budget = None if setting.lower() == "none" else int(setting)
        else:
            raise ValueError(f"unknown instance setting {key!r}")
    fixed = parse_position(fixed_literal)
    extra = []
    for name in sorted({heap_rules for heap_rules, _ in fixed.heaps}):
        if name == rules.name:
            continue
        rebuilt = rules_from_name(name)
        if rebuilt is None:
            raise ValueError(f"fixed position references unknown ruleset {name!r}")
        extra.append(rebuilt)
    return ScanInstance(rules.name, rules, tuple(extra), fixed, max_n, min_window, budget)


def _respects_take_equals_score(rules: OctalRules) -> bool:
    for take, (digit, points) in enumerate(zip(rules.digits, rules.points), start=1):
        if digit == 0:
            if points != 0:
                return False
        elif digit <= 3:
            if points != take:
                return False
        else:
            return False
    return True


def _largest_remainder_take(rules: OctalRules) -> int | None:
    """Largest removal size whose digit allows the heap to survive the move."""
    best = None
    for take, digit in enumerate(rules.digits, start=1):
        if digit not in (0, 1):
            best = take
    return best


def _in_hypothesis(instance: ScanInstance) -> bool:
    rulesets = (instance.rules,) + instance.extra_rules
    if any(not _respects_take_equals_score(r) for r in rulesets):
        return False
    return _largest_remainder_take(instance.rules) is not None


def scan_instance(instance: ScanInstance) -> ScanRow:
    """Sweep one instance, detect and (when possible) certify its period."""
    rules_map = {instance.rules.name: instance.rules}
    for extra in instance.extra_rules:
        rules_map[extra.name] = extra
    solver = GrundySolver(rules_map, budget=instance.budget)
    k = _largest_remainder_take(instance.rules)
    two_k = None if k is None else 2 * k
    in_hypothesis = _in_hypothesis(instance)
    try:
        values = solver.sweep(instance.max_n, var=instance.rules.name, base=instance.fixed)
    except BudgetExceededError:
        return ScanRow(
            instance.name, "budget-exceeded", None, None, False, None,
            two_k, None, in_hypothesis, False, instance.max_n, "", instance.rules.digest,
        )
    digest = sequence_digest(values)
    if instance.fixed.heaps:
        report = detect_period(values, instance.min_window)
    else:
        report = detect_certified_period(instance.rules, values, instance.min_window)
    if report is None:
        return ScanRow(
            instance.name, "not-found", None, None, False, None,
            two_k, None, in_hypothesis, False, instance.max_n, digest, instance.rules.digest,
        )
    certified = report.certified
    cert_from = certified_start(instance.rules, report) if certified else None
    divides = None if two_k is None else (two_k % report.period == 0)
    counterexample = bool(certified and in_hypothesis and divides is False)
    return ScanRow(
        instance.name, "ok", report.preperiod, report.period, certified, cert_from,
        two_k, divides, in_hypothesis, counterexample, instance.max_n, digest,
        instance.rules.digest,
    )


def run_scan(spec: ScanSpec) -> ScanReport:
    """Run every instance and assemble rows sorted by instance name.

    Instances are independent; this runs them serially, which is one valid
    schedule, and sorting makes the report stable either way.
    """
    rows = tuple(scan_instance(inst) for inst in sorted(spec.instances, key=lambda i: i.name))
    return ScanReport(spec.digest, spec.seed, rows)
