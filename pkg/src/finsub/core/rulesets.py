"""Rulesets and terminal seeds for one-heap subtraction games."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from functools import reduce
from typing import Iterable

P = "P"
N = "N"


class RulesetError(ValueError):
    """Raised for malformed rulesets, seeds or out-of-domain arguments."""


@dataclass(frozen=True)
class Ruleset:
    """A finite set of positive move sizes, kept strictly increasing."""

    moves: tuple[int, ...]

    def __post_init__(self):
        moves = tuple(int(m) for m in self.moves)
        if not moves:
            raise RulesetError("ruleset must be nonempty")
        if any(m < 1 for m in moves):
            raise RulesetError(f"moves must be positive: {moves}")
        if any(a >= b for a, b in zip(moves, moves[1:])):
            raise RulesetError(f"moves must be strictly increasing: {moves}")
        object.__setattr__(self, "moves", moves)

    @classmethod
    def of(cls, moves: Iterable[int]) -> "Ruleset":
        """Build from any iterable; sorts, but rejects duplicates."""
        ms = [int(m) for m in moves]
        if len(set(ms)) != len(ms):
            raise RulesetError(f"duplicate moves in {ms}")
        return cls(tuple(sorted(ms)))

    @property
    def max_s(self) -> int:
        return self.moves[-1]

    @property
    def min_s(self) -> int:
        return self.moves[0]

    @property
    def k(self) -> int:
        return len(self.moves)

    @property
    def gcd(self) -> int:
        return reduce(gcd, self.moves)

    def __iter__(self):
        return iter(self.moves)

    def __len__(self):
        return len(self.moves)

    def __contains__(self, s) -> bool:
        return s in self.moves

    def union(self, *extra: int) -> "Ruleset":
        return Ruleset(tuple(sorted(set(self.moves) | set(extra))))

    def __str__(self):
        return "{" + ",".join(map(str, self.moves)) + "}"


def as_ruleset(S) -> Ruleset:
    return S if isinstance(S, Ruleset) else Ruleset.of(S)


@dataclass(frozen=True)
class Seed:
    """Outcome symbols for heap positions -max_s .. -1.

    ``symbols[i]`` belongs to position ``-len(symbols) + i``: the leftmost
    symbol is the most negative position.
    """

    symbols: str

    def __post_init__(self):
        sym = "".join(self.symbols).upper()
        bad = set(sym) - {P, N}
        if bad:
            raise RulesetError(f"seed symbols must be P or N, got {sorted(bad)}")
        object.__setattr__(self, "symbols", sym)

    @classmethod
    def default(cls, max_s: int) -> "Seed":
        # all-N: moving below zero never wins, i.e. ordinary normal play
        return cls(N * max_s)

    def __len__(self):
        return len(self.symbols)

    def at(self, position: int) -> str:
        """Symbol at a negative heap position."""
        if not -len(self.symbols) <= position < 0:
            raise IndexError(position)
        return self.symbols[len(self.symbols) + position]

    def check(self, S: Ruleset) -> None:
        if len(self.symbols) != S.max_s:
            raise RulesetError(
                f"seed length {len(self.symbols)} does not match max move {S.max_s}"
            )


def misere_seed(S: Ruleset) -> Seed:
    """The seed N^min(S) P^(max(S)-min(S)), leftmost symbol at -max(S)."""
    return Seed(N * S.min_s + P * (S.max_s - S.min_s))
