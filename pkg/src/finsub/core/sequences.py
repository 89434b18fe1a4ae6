"""Outcome and Grundy sequences of finite subtraction games.

Outcomes are stored one byte per heap size with ``1`` meaning P and ``0``
meaning N. The hot loops are compiled with numba; each position only looks
back at most ``max_s`` steps, so a single sequential pass is optimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .rulesets import N, P, Ruleset, RulesetError, Seed, as_ruleset

DEFAULT_LIMIT = 10_000_000


@numba.njit(cache=True)
def _outcome_kernel(moves, ext, m):
    # ext[:m] holds the seed, ext[m + x] receives position x
    for i in range(m, ext.shape[0]):
        bit = 1
        for s in moves:
            if ext[i - s] == 1:
                bit = 0
                break
        ext[i] = bit


@numba.njit(cache=True)
def _grundy_kernel(moves, out):
    k = moves.shape[0]
    stamp = np.zeros(k + 2, dtype=np.int64)
    for x in range(out.shape[0]):
        for s in moves:
            if s > x:
                break
            v = out[x - s]
            if v <= k:
                stamp[v] = x + 1
        v = 0
        while stamp[v] == x + 1:
            v += 1
        out[x] = v


@numba.njit(cache=True)
def _misere_kernel(moves, out):
    lo = moves[0]
    for x in range(out.shape[0]):
        if x < lo:
            out[x] = 0
            continue
        bit = 1
        for s in moves:
            if s > x:
                break
            if out[x - s] == 1:
                bit = 0
                break
        out[x] = bit


@numba.njit(cache=True)
def _fnv1a64(data):
    h = np.uint64(0xCBF29CE484222325)
    prime = np.uint64(0x100000001B3)
    for b in data:
        h = (h ^ np.uint64(b)) * prime
    return h


def fnv1a64(data) -> int:
    """64-bit FNV-1a of a bytes-like object or uint8 array."""
    arr = np.frombuffer(bytes(data), dtype=np.uint8) if not isinstance(data, np.ndarray) else data
    return int(_fnv1a64(np.ascontiguousarray(arr, dtype=np.uint8)))


def default_horizon(S: Ruleset, limit: int = DEFAULT_LIMIT) -> int:
    return min(4 * 2 ** min(S.max_s, 20), limit)


@dataclass
class OutcomeSequence:
    bits: np.ndarray  # uint8, 1 = P
    ruleset: Ruleset
    seed: Seed | None = None
    misere: bool = False

    @property
    def symbols(self) -> str:
        return self.bits.tobytes().translate(_SYMBOLS).decode()

    @property
    def horizon(self) -> int:
        return int(self.bits.shape[0])

    def __len__(self):
        return self.horizon

    def __getitem__(self, x):
        return self.symbols[x] if isinstance(x, slice) else (P if self.bits[x] else N)

    def values(self) -> np.ndarray:
        return self.bits

    def digest(self) -> int:
        return fnv1a64(self.bits)


@dataclass
class GrundySequence:
    values_: np.ndarray = field(repr=False)
    ruleset: Ruleset

    @property
    def horizon(self) -> int:
        return int(self.values_.shape[0])

    def __len__(self):
        return self.horizon

    def __getitem__(self, x):
        return self.values_[x].tolist()

    def values(self) -> np.ndarray:
        return self.values_

    def word(self, start: int, length: int) -> str:
        return "".join(map(str, self.values_[start:start + length].tolist()))

    def digest(self) -> int:
        return fnv1a64(self.values_.astype("<u4").tobytes())


_SYMBOLS = bytes.maketrans(b"\x00\x01", b"NP")


def _moves_array(S: Ruleset) -> np.ndarray:
    return np.asarray(S.moves, dtype=np.int64)


def _check_horizon(horizon: int) -> int:
    horizon = int(horizon)
    if horizon < 1:
        raise RulesetError(f"horizon must be positive, got {horizon}")
    return horizon


def outcomes(S, seed: Seed | str | None = None, horizon: int = 64) -> OutcomeSequence:
    """Outcomes of heaps ``0 .. horizon-1``.

    Positions below zero resolve through ``seed`` (default all N, which is
    ordinary normal play).
    """
    S = as_ruleset(S)
    horizon = _check_horizon(horizon)
    if seed is None:
        seed = Seed.default(S.max_s)
    elif isinstance(seed, str):
        seed = Seed(seed)
    seed.check(S)
    m = S.max_s
    ext = np.empty(m + horizon, dtype=np.uint8)
    ext[:m] = np.frombuffer(seed.symbols.encode(), dtype=np.uint8) == ord(P)
    _outcome_kernel(_moves_array(S), ext, m)
    return OutcomeSequence(ext[m:].copy(), S, seed)


def grundy(S, horizon: int = 64) -> GrundySequence:
    S = as_ruleset(S)
    horizon = _check_horizon(horizon)
    out = np.empty(horizon, dtype=np.int64)
    _grundy_kernel(_moves_array(S), out)
    return GrundySequence(out, S)


def misere_outcomes(S, horizon: int = 64) -> OutcomeSequence:
    """Misère outcomes: a player with no legal move wins."""
    S = as_ruleset(S)
    horizon = _check_horizon(horizon)
    out = np.empty(horizon, dtype=np.uint8)
    _misere_kernel(_moves_array(S), out)
    return OutcomeSequence(out, S, None, misere=True)


def recheck_outcome(seq: OutcomeSequence, x: int) -> str:
    """Recompute position ``x`` from its predecessors; used as an oracle."""
    S = seq.ruleset
    seed = seq.seed or Seed.default(S.max_s)

    def look(i):
        if i >= 0:
            return P if seq.bits[i] else N
        return seed.at(i)

    return N if any(look(x - s) == P for s in S) else P
