"""Scoring-play game trees with exact rational arithmetic.

Every node of a game carries a score, a multiset of Left options and a
multiset of Right options.  Play of a single game ends when the player to
move has no option; the score standing at that node is final, and its sign
decides the winner.  Sums follow the long rule: the compound game ends only
when the mover has no option in any component.
"""

from __future__ import annotations

import random
import re
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, NamedTuple

Score = Fraction

_ZERO = Fraction(0)


class NotationError(ValueError):
    """Bad game notation or score literal."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at character {position})"
        super().__init__(message)
        self.position = position


def as_score(value: int | str | Fraction) -> Score:
    """Coerce an int, rational string, or Fraction to an exact score.

    Floats are rejected: binary floats misrepresent most decimal inputs and
    every score here must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("cannot use a bool as a score")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_score(value)
    raise TypeError(f"cannot use {type(value).__name__} as a score")


_SCORE_TOKEN = r"[+-]?\d+(?:\.\d+|/\d+)?"
_SCORE_RE = re.compile(_SCORE_TOKEN)
_FULL_SCORE_RE = re.compile(rf"\s*({_SCORE_TOKEN})\s*$")


def parse_score(text: str) -> Score:
    """Parse ``12``, ``-7/3``, or ``2.25`` (decimals convert exactly)."""
    match = _FULL_SCORE_RE.match(text)
    if match is None:
        raise NotationError(f"not a rational score literal: {text!r}")
    return _score_from_token(match.group(1), 0)


def _score_from_token(token: str, position: int) -> Score:
    if "/" in token:
        num, _, den = token.partition("/")
        if int(den) == 0:
            raise NotationError("score denominator must be positive", position)
        return Fraction(int(num), int(den))
    return Fraction(token)


def format_score(value: Score) -> str:
    """Integers bare, other rationals as ``num/den``; never decimal."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Game:
    """An immutable scoring-play game in canonical form.

    Option sets are stored deduplicated and sorted under
    :func:`game_order`, so structurally equal games compare equal and hash
    equal regardless of how they were built.  ``g + h`` is the long-rule
    disjunctive sum, ``-g`` the mirror image.  Instances are safe to share
    across threads.
    """

    __slots__ = ("score", "left", "right", "_hash")

    def __init__(self, score, left: Iterable[Game] = (), right: Iterable[Game] = ()):
        self.score = as_score(score)
        self.left = _canonical_options(left)
        self.right = _canonical_options(right)
        # cached so hashing stays O(branch) even on heavily shared trees
        self._hash = hash((self.score, self.left, self.right))

    @property
    def is_number(self) -> bool:
        """True when the game has no options (a bare final score)."""
        return not self.left and not self.right

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.score == other.score
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return add(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return add(self, negate(other))

    def __repr__(self):
        return f"Game({render_game(self)!r})"


def game_order(a: Game, b: Game) -> int:
    """Total order on games: score, then left options, then right options.

    Option lists compare lexicographically under the same order.  Returns
    negative, zero, or positive like a three-way comparison.
    """
    if a is b:
        return 0
    if a.score != b.score:
        return -1 if a.score < b.score else 1
    c = _sequence_order(a.left, b.left)
    if c:
        return c
    return _sequence_order(a.right, b.right)


def _sequence_order(xs: tuple[Game, ...], ys: tuple[Game, ...]) -> int:
    for x, y in zip(xs, ys):
        c = game_order(x, y)
        if c:
            return c
    return (len(xs) > len(ys)) - (len(xs) < len(ys))


_ORDER_KEY = cmp_to_key(game_order)


def _canonical_options(options: Iterable[Game]) -> tuple[Game, ...]:
    opts = tuple(options)
    for opt in opts:
        if not isinstance(opt, Game):
            raise TypeError(f"game options must be Game instances, got {type(opt).__name__}")
    if len(opts) > 1:
        opts = sorted(opts, key=_ORDER_KEY)
        # options form a set: drop duplicates, which sorting made adjacent
        opts = tuple(
            opt for i, opt in enumerate(opts) if i == 0 or opt != opts[i - 1]
        )
    return opts


def number(score) -> Game:
    """The game with no options and the given final score."""
    return Game(score)


def negate(game: Game) -> Game:
    """Mirror image: swap the option sides and negate every score."""
    memo: dict[int, Game] = {}

    def go(node: Game) -> Game:
        got = memo.get(id(node))
        if got is None:
            got = Game(
                -node.score,
                [go(child) for child in node.right],
                [go(child) for child in node.left],
            )
            memo[id(node)] = got
        return got

    return go(game)


def translate(game: Game, amount) -> Game:
    """Add ``amount`` to every score in the tree."""
    amount = as_score(amount)
    if amount == 0:
        return game
    memo: dict[int, Game] = {}

    def go(node: Game) -> Game:
        got = memo.get(id(node))
        if got is None:
            got = Game(
                node.score + amount,
                [go(child) for child in node.left],
                [go(child) for child in node.right],
            )
            memo[id(node)] = got
        return got

    return go(game)


def add(g: Game, h: Game) -> Game:
    """Long-rule disjunctive sum.

    A move in the sum is a move in one component with the other left alone,
    so play continues while the mover has an option anywhere; node scores
    add.  Memoized over subtree pairs, which keeps shared structure shared.
    """
    memo: dict[tuple[int, int], Game] = {}

    def go(a: Game, b: Game) -> Game:
        key = (id(a), id(b))
        got = memo.get(key)
        if got is None:
            left = [go(al, b) for al in a.left]
            left += [go(a, bl) for bl in b.left]
            right = [go(ar, b) for ar in a.right]
            right += [go(a, br) for br in b.right]
            got = Game(a.score + b.score, left, right)
            memo[key] = got
        return got

    return go(g, h)


class FinalScores(NamedTuple):
    sl: Score  # final score under optimal play, Left moving first
    sr: Score  # final score under optimal play, Right moving first


def final_scores(game: Game, cache: dict[Game, FinalScores] | None = None) -> FinalScores:
    """Optimal final scores for both move orders.

    Iterative, so deep trees cannot hit the interpreter recursion limit.
    Pass a shared ``cache`` to reuse work across games with common subtrees.
    """
    if cache is None:
        cache = {}
    got = cache.get(game)
    if got is not None:
        return got
    stack = [game]
    while stack:
        node = stack[-1]
        if node in cache:
            stack.pop()
            continue
        missing = [child for child in node.left if child not in cache]
        missing += [child for child in node.right if child not in cache]
        if missing:
            stack.extend(missing)
            continue
        sl = max(cache[child].sr for child in node.left) if node.left else node.score
        sr = min(cache[child].sl for child in node.right) if node.right else node.score
        cache[node] = FinalScores(sl, sr)
        stack.pop()
    return cache[game]


class Outcome(Enum):
    L = "L"
    R = "R"
    N = "N"
    P = "P"
    TIE = "Tie"


def outcome(game: Game, cache: dict[Game, FinalScores] | None = None) -> Outcome:
    """Outcome class from the signs of the two optimal final scores.

    Left wins when both signs favor her and at least one is strict; same for
    Right.  (+,-) favors whoever moves first, (-,+) whoever moves second,
    and (0,0) is a tie.
    """
    sl, sr = final_scores(game, cache)
    a = (sl > 0) - (sl < 0)
    b = (sr > 0) - (sr < 0)
    if a >= 0 and b >= 0:
        return Outcome.TIE if a == 0 and b == 0 else Outcome.L
    if a <= 0 and b <= 0:
        return Outcome.R
    return Outcome.N if a > 0 else Outcome.P


def is_impartial(game: Game) -> bool:
    """Do both players hold mirror-image move sets at the root?

    After shifting the root score to zero, every left option must equal the
    negation of some right option and vice versa (duplicates collapse; the
    mirror condition recurses through structural equality of the subtrees).
    Games with options on exactly one side are never impartial.
    """
    if not game.left and not game.right:
        return True
    if not game.left or not game.right:
        return False
    shift = -game.score
    lefts = {translate(option, shift) for option in game.left}
    mirrored_rights = {negate(translate(option, shift)) for option in game.right}
    return lefts == mirrored_rights


def identity_game() -> Game:
    """The zero-scored unit: sums with impartial games keep their final scores.

    Each side gets a two-move dance worth nothing, so either player can
    answer a move here without touching the rest of the sum.
    """
    pivot = Game(0, [number(0)], [number(0)])
    return Game(0, [pivot], [pivot])


def generate_impartial(max_depth: int, max_branch: int, score_bound=4, seed: int = 0) -> Game:
    """Random impartial game, deterministic in ``seed``.

    Left options are generated recursively; each right option is the exact
    mirror of a left option after shifting that node's score to zero.  The
    mirror construction is applied at every node, so the whole tree, not
    just the root, is impartial.
    """
    if max_depth < 0 or max_branch < 0:
        raise ValueError("max_depth and max_branch must be nonnegative")
    bound = as_score(score_bound)
    if bound < 0:
        raise ValueError("score_bound must be nonnegative")
    rng = random.Random(seed)

    def random_score() -> Score:
        den = rng.choice((1, 1, 2, 3))
        top = int(bound * den)
        return Fraction(rng.randint(-top, top), den)

    def build(depth: int) -> Game:
        score = random_score()
        width = rng.randint(0, max_branch) if depth > 0 else 0
        lefts = [build(depth - 1) for _ in range(width)]
        rights = [translate(negate(translate(option, -score)), score) for option in lefts]
        return Game(score, lefts, rights)

    return build(max_depth)


# ---------------------------------------------------------------------------
# Notation: game := "{" opts "|" score "|" opts "}" | score


def parse_game(text: str) -> Game:
    """Parse ``{options|score|options}`` notation; a bare score is a leaf game."""
    parser = _Parser(text)
    game = parser.parse_game()
    parser.expect_end()
    return game


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        text = self.text
        while self.pos < len(text) and text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_game(self) -> Game:
        if self.peek() == "{":
            self.pos += 1
            left = self.parse_options()
            self.expect("|")
            score = self.parse_score_literal()
            self.expect("|")
            right = self.parse_options()
            self.expect("}")
            return Game(score, left, right)
        return Game(self.parse_score_literal())

    def parse_options(self) -> list[Game]:
        if self.peek() in ("|", "}"):
            return []
        options = [self.parse_game()]
        while self.peek() == ",":
            self.pos += 1
            options.append(self.parse_game())
        return options

    def parse_score_literal(self) -> Score:
        self._skip_ws()
        match = _SCORE_RE.match(self.text, self.pos)
        if match is None:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise NotationError(f"expected a score, found {found!r}", self.pos)
        self.pos = match.end()
        return _score_from_token(match.group(), match.start())

    def expect(self, wanted: str) -> None:
        if self.peek() != wanted:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise NotationError(f"expected {wanted!r}, found {found!r}", self.pos)
        self.pos += 1

    def expect_end(self) -> None:
        self._skip_ws()
        if self.pos != len(self.text):
            raise NotationError("unexpected trailing input", self.pos)


def render_game(game: Game) -> str:
    """Canonical notation; ``parse_game(render_game(g)) == g``."""
    if game.is_number:
        return format_score(game.score)
    left = ",".join(render_game(option) for option in game.left)
    right = ",".join(render_game(option) for option in game.right)
    return f"{{{left}|{format_score(game.score)}|{right}}}"


def render_tree(game: Game) -> str:
    """Indented tree, one line per node, options tagged L or R."""
    lines: list[str] = []

    def walk(node: Game, depth: int, tag: str) -> None:
        prefix = "  " * depth + (f"{tag} " if tag else "")
        lines.append(prefix + format_score(node.score))
        for child in node.left:
            walk(child, depth + 1, "L")
        for child in node.right:
            walk(child, depth + 1, "R")

    walk(game, 0, "")
    return "\n".join(lines)
