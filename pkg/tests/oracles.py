"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations


def outcome_list(moves, horizon, seed=None):
    """P/N by direct recursion; ``seed`` covers heaps -max..-1, leftmost first."""
    m = max(moves)
    seed = seed or "N" * m
    vals = list(seed)
    for x in range(horizon):
        i = x + m
        vals.append("N" if any(vals[i - s] == "P" for s in moves) else "P")
    return "".join(vals[m:])


def grundy_list(moves, horizon):
    g = []
    for x in range(horizon):
        opts = {g[x - s] for s in moves if s <= x}
        v = 0
        while v in opts:
            v += 1
        g.append(v)
    return g


def misere_list(moves, horizon):
    out = []
    for x in range(horizon):
        opts = [x - s for s in moves if s <= x]
        # no move available: the player to move wins in misère play
        out.append("N" if not opts or any(out[y] == "P" for y in opts) else "P")
    return "".join(out)


def state_period(seq, width):
    """(preperiod, period) from the first repeated window of ``width`` values.

    The next value depends only on the previous ``width`` values, so a repeated
    window proves periodicity; it is then shrunk to the minimal pair.
    """
    seen = {}
    for x in range(width, len(seq) + 1):
        key = tuple(seq[x - width:x])
        if key in seen:
            y = seen[key]
            q = x - y
            break
        seen[key] = x
    else:
        return None
    start = y - width
    tail = seq[start:x]
    p = next(d for d in range(1, q + 1) if q % d == 0
             and all(tail[i] == tail[i + d] for i in range(len(tail) - d)))
    pre = start
    while pre > 0 and seq[pre - 1] == seq[pre - 1 + p]:
        pre -= 1
    return pre, p


def outcome_period(moves, horizon=4096, seed=None):
    m = max(moves)
    seed = seed or "N" * m
    full = seed + outcome_list(moves, horizon, seed)
    r = state_period(full, m)
    if r is None:
        return None
    pre, p = r
    return max(pre - m, 0), p


def grundy_period(moves, horizon=4096):
    return state_period(grundy_list(moves, horizon), max(moves))
