"""Heap games ruled by removal digits, scored by per-removal point awards.

A ruleset pairs each removal size k with an octal digit and a rational
award.  Digit bits say what may remain of the heap afterwards: 1 - nothing
(the move took the whole heap), 2 - a single smaller heap, 4 - two nonempty
heaps.  The evaluator computes the first player's optimal score differential
with both players maximizing what they collect.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Iterable, Iterator, Mapping

from scoreplay.games import Game, Score, as_score, format_score, parse_score

_ZERO = Fraction(0)


class RulesError(ValueError):
    """Malformed or inconsistent ruleset definition."""


class UnknownRulesetError(RulesError):
    """A position referenced a ruleset id that is not loaded."""


class BudgetExceededError(RuntimeError):
    """The evaluator hit its position-count budget."""


class ExpansionLimitError(RuntimeError):
    """A position was too large to expand into an explicit game tree."""


_BAD_NAME_RE = re.compile(r"[\s,@|]")


@dataclass(frozen=True)
class OctalRules:
    """Digits and point awards for one heap game.

    ``digits[k-1]`` governs removing k beans, ``points[k-1]`` is the award.
    Digits above 7 would allow splits into three or more heaps and are
    rejected; 0..7 covers take-and-break into at most two heaps.
    """

    name: str
    digits: tuple[int, ...]
    points: tuple[Score, ...]

    def __post_init__(self):
        if not self.name or _BAD_NAME_RE.search(self.name):
            raise RulesError(
                f"ruleset name must be nonempty without spaces, commas, '@' or '|': {self.name!r}"
            )
        digits = tuple(int(d) for d in self.digits)
        points = tuple(as_score(p) for p in self.points)
        if not digits:
            raise RulesError("digit list must be nonempty")
        if len(digits) != len(points):
            raise RulesError(f"{len(digits)} digits but {len(points)} point entries")
        bad = [d for d in digits if d < 0 or d > 7]
        if bad:
            raise RulesError(f"digits must lie in 0..7, got {bad}")
        if not any(digits):
            raise RulesError("at least one digit must be nonzero")
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "points", points)

    @property
    def splits_heaps(self) -> bool:
        """True when some digit allows breaking a heap in two."""
        return any(d & 4 for d in self.digits)

    @property
    def digest(self) -> str:
        payload = "{}|{}|{}".format(
            self.name,
            ",".join(map(str, self.digits)),
            ",".join(map(format_score, self.points)),
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


def subtraction_rules(amounts: Iterable[int], name: str | None = None) -> OctalRules:
    """Remove exactly s beans for s in the set; the mover scores s points."""
    cleaned = sorted(set(int(a) for a in amounts))
    if not cleaned or cleaned[0] < 1:
        raise RulesError(f"subtraction amounts must be positive integers: {cleaned}")
    if name is None:
        joiner = "" if cleaned[-1] <= 9 else "-"
        name = "sub" + joiner.join(map(str, cleaned))
    top = cleaned[-1]
    digits = tuple(3 if k in cleaned else 0 for k in range(1, top + 1))
    points = tuple(Fraction(k) if k in cleaned else _ZERO for k in range(1, top + 1))
    return OctalRules(name, digits, points)


def standard_nim(max_take: int, name: str | None = None) -> OctalRules:
    """Take any number of beans up to ``max_take``, one point per bean."""
    if max_take < 1:
        raise RulesError("max_take must be at least 1")
    if name is None:
        name = f"nim{max_take}"
    return OctalRules(
        name,
        tuple(3 for _ in range(max_take)),
        tuple(Fraction(k) for k in range(1, max_take + 1)),
    )


PRESETS = {
    "sub45": lambda: subtraction_rules((4, 5), name="sub45"),
    "o3333p2": lambda: OctalRules("o3333p2", (3, 3, 3, 3), (2, 2, 2, 2)),
    "o26": lambda: OctalRules("o26", (2, 6), (1, 2)),
}


def _tokens(value: str) -> list[str]:
    stripped = value.strip()
    if stripped.startswith("[") and stripped.endswith("]"):
        stripped = stripped[1:-1]
    return [tok for tok in re.split(r"[,\s]+", stripped) if tok]


def parse_rules_document(text: str) -> OctalRules:
    """Parse a ``name:/digits:/points:`` rules document.

    One ruleset per document; ``#`` starts a comment and ``;`` works as a
    line break so documents can be passed inline.
    """
    fields: dict[str, str] = {}
    for raw in text.replace(";", "\n").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise RulesError(f"malformed rules line (expected 'key: value'): {raw.strip()!r}")
        key = key.strip().lower()
        if key in fields:
            raise RulesError(f"duplicate rules field {key!r}")
        fields[key] = value.strip()
    unknown = sorted(set(fields) - {"name", "digits", "points"})
    if unknown:
        raise RulesError(f"unknown rules fields: {', '.join(unknown)}")
    missing = sorted({"name", "digits", "points"} - set(fields))
    if missing:
        raise RulesError(f"missing rules fields: {', '.join(missing)}")
    try:
        digits = tuple(int(tok) for tok in _tokens(fields["digits"]))
    except ValueError as exc:
        raise RulesError(f"bad digit in rules document: {exc}") from None
    points = tuple(parse_score(tok) for tok in _tokens(fields["points"]))
    return OctalRules(fields["name"], digits, points)


def rules_from_name(name: str) -> OctalRules | None:
    """Rebuild a ruleset from a generated name like ``sub45`` or ``nim9``."""
    builder = PRESETS.get(name)
    if builder is not None:
        return builder()
    match = re.fullmatch(r"nim(\d+)", name)
    if match:
        return standard_nim(int(match.group(1)))
    match = re.fullmatch(r"sub([1-9]+)", name)
    if match:
        return subtraction_rules(int(ch) for ch in match.group(1))
    return None


def resolve_rules_ref(ref: str) -> OctalRules:
    """Resolve a rules reference to a ruleset.

    Tries, in order: an existing file path, ``sub:4,5`` / ``nim:9``
    shorthand, a preset or generated name, an inline document.
    """
    ref = ref.strip()
    if not ref:
        raise RulesError("empty rules reference")
    if os.path.isfile(ref):
        with open(ref, "r", encoding="utf-8") as handle:
            return parse_rules_document(handle.read())
    if ref.startswith("sub:"):
        try:
            amounts = [int(tok) for tok in _tokens(ref[4:])]
        except ValueError:
            raise RulesError(f"bad subtraction amounts in {ref!r}") from None
        return subtraction_rules(amounts)
    if ref.startswith("nim:"):
        try:
            return standard_nim(int(ref[4:]))
        except ValueError:
            raise RulesError(f"bad heap bound in {ref!r}") from None
    named = rules_from_name(ref)
    if named is not None:
        return named
    if ":" in ref:
        return parse_rules_document(ref)
    raise RulesError(f"cannot resolve rules reference {ref!r}")


@dataclass(frozen=True)
class Position:
    """A multiset of heaps as ``(ruleset id, size)`` pairs, canonically sorted.

    Zero-size heaps are dropped, so equal multisets always compare equal.
    Heaps under different rulesets may share one position.
    """

    heaps: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        cleaned = []
        for ruleset, size in self.heaps:
            size = int(size)
            if size < 0:
                raise ValueError(f"heap size cannot be negative: {size}")
            if size:
                cleaned.append((str(ruleset), size))
        object.__setattr__(self, "heaps", tuple(sorted(cleaned)))

    @property
    def total(self) -> int:
        return sum(size for _, size in self.heaps)

    def add_heap(self, ruleset: str, size: int) -> Position:
        return Position(self.heaps + ((ruleset, size),))


def parse_position(text: str, known: Collection[str] | None = None) -> Position:
    """Parse ``size@ruleset`` terms separated by commas; ``-`` is empty.

    When exactly one ruleset is known, a bare size is accepted.  Unknown
    ruleset ids raise when ``known`` is given.
    """
    stripped = text.strip()
    if stripped in ("", "-"):
        return Position()
    heaps = []
    for term in stripped.split(","):
        term = term.strip()
        match = re.fullmatch(r"(\d+)\s*@\s*(\S+)", term)
        if match:
            size, name = int(match.group(1)), match.group(2)
        elif term.isdigit() and known is not None and len(known) == 1:
            size, name = int(term), next(iter(known))
        else:
            raise ValueError(f"bad heap term {term!r}; expected size@ruleset")
        if known is not None and name not in known:
            raise UnknownRulesetError(f"position references unknown ruleset {name!r}")
        heaps.append((name, size))
    return Position(tuple(heaps))


def render_position(position: Position) -> str:
    """Canonical literal for a position; the empty position renders as ``-``."""
    if not position.heaps:
        return "-"
    return ",".join(f"{size}@{name}" for name, size in position.heaps)


@dataclass(frozen=True)
class MoveOutcome:
    """One legal move: the points awarded to the mover and the position left."""

    points: Score
    next: Position


def _move_key(move: MoveOutcome):
    return (move.points, move.next.heaps)


def _replace_heap(position: Position, heap: tuple[str, int], parts: tuple[int, ...]) -> Position:
    heaps = list(position.heaps)
    heaps.remove(heap)
    heaps.extend((heap[0], part) for part in parts)
    return Position(tuple(heaps))


def legal_moves(position: Position, rules: Mapping[str, OctalRules]) -> list[MoveOutcome]:
    """All distinct moves from a position, in canonical order.

    Moves that award the same points and reach the same position are merged,
    e.g. taking either of two equal heaps.
    """
    found: dict[tuple, MoveOutcome] = {}
    for heap in set(position.heaps):
        ruleset_id, size = heap
        ruleset = rules.get(ruleset_id)
        if ruleset is None:
            raise UnknownRulesetError(f"position references unknown ruleset {ruleset_id!r}")
        digits = ruleset.digits
        points = ruleset.points
        for take in range(1, min(size, len(digits)) + 1):
            digit = digits[take - 1]
            if not digit:
                continue
            award = points[take - 1]
            rest = size - take
            if digit & 1 and rest == 0:
                move = MoveOutcome(award, _replace_heap(position, heap, ()))
                found[_move_key(move)] = move
            if digit & 2 and rest >= 1:
                move = MoveOutcome(award, _replace_heap(position, heap, (rest,)))
                found[_move_key(move)] = move
            if digit & 4 and rest >= 2:
                for small in range(1, rest // 2 + 1):
                    move = MoveOutcome(award, _replace_heap(position, heap, (small, rest - small)))
                    found[_move_key(move)] = move
    return sorted(found.values(), key=_move_key)


class GrundySolver:
    """Memoized evaluator for the first player's optimal score differential.

    The value of a position is the best over all moves of the award minus
    the value of the position left behind; positions without moves are worth
    zero.  One memo table serves every query, so sweeps share work.  Not
    thread-safe: give each worker its own solver (values do not depend on
    evaluation order).
    """

    def __init__(self, rules, budget: int | None = None):
        self.rules = _normalize_rules(rules)
        self.budget = budget
        self._values: dict[Position, Score] = {}
        self._games: dict[tuple[Position, Score], Game] = {}

    @property
    def positions_evaluated(self) -> int:
        return len(self._values)

    def clear_cache(self) -> None:
        self._values.clear()
        self._games.clear()

    def value(self, position: Position) -> Score:
        """Optimal score differential for the player to move."""
        values = self._values
        got = values.get(position)
        if got is not None:
            return got
        budget = self.budget
        pending_moves: dict[Position, list[MoveOutcome]] = {}
        stack = [position]
        # explicit stack: sweep chains can outrun the recursion limit
        while stack:
            pos = stack[-1]
            if pos in values:
                stack.pop()
                continue
            moves = pending_moves.get(pos)
            if moves is None:
                moves = legal_moves(pos, self.rules)
                pending_moves[pos] = moves
                if budget is not None and len(values) + len(pending_moves) > budget:
                    raise BudgetExceededError(
                        f"position budget exceeded ({budget} positions) "
                        f"evaluating {render_position(position)}"
                    )
            missing = [move.next for move in moves if move.next not in values]
            if missing:
                stack.extend(missing)
                continue
            if moves:
                values[pos] = max(move.points - values[move.next] for move in moves)
            else:
                values[pos] = _ZERO
            del pending_moves[pos]
            stack.pop()
        return values[position]

    def best_moves(self, position: Position) -> list[MoveOutcome]:
        """Moves achieving the optimal value, in canonical order."""
        moves = legal_moves(position, self.rules)
        if not moves:
            raise ValueError(f"no legal moves from {render_position(position)}")
        best = max(move.points - self.value(move.next) for move in moves)
        return [move for move in moves if move.points - self.value(move.next) == best]

    def sweep(self, max_n: int, var: str | None = None, base: Position = Position()) -> list[Score]:
        """Values of ``base`` plus one growing heap, for sizes 0..max_n.

        Entry 0 is the value of the base alone.  The memo persists across
        entries and across sweeps.
        """
        if max_n < 0:
            raise ValueError("max_n must be nonnegative")
        var = self._resolve_var(var)
        return [self.value(base.add_heap(var, n)) for n in range(max_n + 1)]

    def to_game(self, position: Position, max_total: int = 16) -> Game:
        """Expand the full play tree as an explicit game, root score zero.

        Left's awards add to the running score and Right's subtract, so the
        final scores of the expansion match the evaluator's value and its
        negation.  Subtrees are shared where the same sub-position and
        running score recur; ``max_total`` bounds the beans in play.
        """
        if position.total > max_total:
            raise ExpansionLimitError(
                f"position has {position.total} beans, expansion bound is {max_total}"
            )
        return self._expand(position, _ZERO)

    def _expand(self, position: Position, offset: Score) -> Game:
        key = (position, offset)
        got = self._games.get(key)
        if got is None:
            moves = legal_moves(position, self.rules)
            left = [self._expand(move.next, offset + move.points) for move in moves]
            right = [self._expand(move.next, offset - move.points) for move in moves]
            got = Game(offset, left, right)
            self._games[key] = got
        return got

    def _resolve_var(self, var: str | None) -> str:
        if var is None:
            if len(self.rules) != 1:
                raise ValueError("several rulesets loaded; specify which heap varies")
            return next(iter(self.rules))
        if var not in self.rules:
            raise UnknownRulesetError(f"unknown ruleset {var!r}")
        return var


def _normalize_rules(rules) -> dict[str, OctalRules]:
    if isinstance(rules, OctalRules):
        return {rules.name: rules}
    if isinstance(rules, Mapping):
        for key, value in rules.items():
            if not isinstance(value, OctalRules):
                raise TypeError(f"expected OctalRules, got {type(value).__name__}")
            if key != value.name:
                raise RulesError(f"rules map key {key!r} does not match ruleset name {value.name!r}")
        return dict(rules)
    out: dict[str, OctalRules] = {}
    for item in rules:
        if not isinstance(item, OctalRules):
            raise TypeError(f"expected OctalRules, got {type(item).__name__}")
        if item.name in out and out[item.name] != item:
            raise RulesError(f"conflicting rulesets named {item.name!r}")
        out[item.name] = item
    if not out:
        raise RulesError("no rulesets given")
    return out


def iter_heap_multisets(max_total: int) -> Iterator[tuple[int, ...]]:
    """Every multiset of positive heap sizes with total at most ``max_total``.

    Yields weakly decreasing tuples, the empty one first; deterministic
    order.
    """

    def parts(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        yield ()
        for first in range(min(remaining, cap), 0, -1):
            for rest in parts(remaining - first, first):
                yield (first,) + rest

    yield from parts(max_total, max_total)
