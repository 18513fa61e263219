"""Shared helpers for the test suite.

The minimax oracle here is deliberately independent of the library's
evaluator: straight recursion over option lists, no shared caches, so the
two implementations can check each other.
"""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from scoreplay.games import Game, number


def naive_final_scores(game: Game, memo: dict | None = None) -> tuple[Fraction, Fraction]:
    """(Left-first, Right-first) final scores by direct recursion."""
    if memo is None:
        memo = {}
    cached = memo.get(game)
    if cached is not None:
        return cached
    if game.left:
        sl = max(naive_final_scores(option, memo)[1] for option in game.left)
    else:
        sl = game.score
    if game.right:
        sr = min(naive_final_scores(option, memo)[0] for option in game.right)
    else:
        sr = game.score
    memo[game] = (sl, sr)
    return sl, sr


def naive_sl(game: Game) -> Fraction:
    return naive_final_scores(game)[0]


def naive_sr(game: Game) -> Fraction:
    return naive_final_scores(game)[1]


def greedy_nim_value(heaps) -> Fraction:
    """Alternating sum of the heap sizes in descending order.

    The value of scoring nim where each move empties the largest heap:
    the first player takes the biggest heap, the opponent the next, and
    so on, so sizes alternate sign from largest to smallest.
    """
    total = Fraction(0)
    for index, size in enumerate(sorted(heaps, reverse=True)):
        total += size if index % 2 == 0 else -size
    return total


scores = st.one_of(
    st.integers(min_value=-9, max_value=9).map(Fraction),
    st.builds(Fraction, st.integers(min_value=-9, max_value=9), st.sampled_from([2, 3, 4])),
)


def _shallow_games(children):
    options = st.lists(children, max_size=3).map(tuple)
    return st.builds(Game, scores, options, options)


games = st.recursive(scores.map(number), _shallow_games, max_leaves=12)
