"""All-but nim (finite excluded subtraction).

From a heap of n a player may remove any m in 1..n except the members of a
finite excluded set S. Nim-values are unbounded and grow linearly, and the
sequence is arithmetic periodic: G(n+p) = G(n) + s from some n on.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import reduce
from math import gcd

import numba
import numpy as np

from .core.rulesets import RulesetError


@dataclass(frozen=True)
class FesRuleset:
    excluded: tuple[int, ...]

    def __post_init__(self):
        ex = tuple(int(x) for x in self.excluded)
        if not ex:
            raise RulesetError("excluded set must be nonempty")
        if any(x < 1 for x in ex):
            raise RulesetError(f"excluded moves must be positive: {ex}")
        if any(a >= b for a, b in zip(ex, ex[1:])):
            raise RulesetError(f"excluded moves must be strictly increasing: {ex}")
        object.__setattr__(self, "excluded", ex)

    @classmethod
    def of(cls, moves) -> "FesRuleset":
        ms = [int(m) for m in moves]
        if len(set(ms)) != len(ms):
            raise RulesetError(f"duplicate moves in {ms}")
        return cls(tuple(sorted(ms)))

    @property
    def gcd(self) -> int:
        return reduce(gcd, self.excluded)

    def reduced(self) -> "FesRuleset":
        g = self.gcd
        return FesRuleset(tuple(x // g for x in self.excluded))

    def __str__(self):
        return "!" + ",".join(map(str, self.excluded))


def as_fes(S) -> FesRuleset:
    return S if isinstance(S, FesRuleset) else FesRuleset.of(S)


@numba.njit(cache=True)
def _fes_kernel(excluded, out):
    # count[v] = how many earlier heaps have value v. The values present are
    # always 0..distinct-1, so the mex over "all earlier heaps minus the few
    # excluded ones" is the least value whose count drops to zero, else distinct.
    h = out.shape[0]
    count = np.zeros(h + 1, dtype=np.int64)
    removed = np.zeros(h + 1, dtype=np.int64)
    distinct = 0
    for n in range(h):
        best = distinct
        for s in excluded:
            if s > n:
                break
            removed[out[n - s]] += 1
        for s in excluded:
            if s > n:
                break
            v = out[n - s]
            if removed[v] == count[v] and v < best:
                best = v
        for s in excluded:
            if s > n:
                break
            removed[out[n - s]] = 0
        out[n] = best
        if count[best] == 0:
            distinct += 1
        count[best] += 1


def fes_grundy(S, horizon: int) -> np.ndarray:
    S = as_fes(S)
    if horizon < 1:
        raise RulesetError(f"horizon must be positive, got {horizon}")
    out = np.empty(int(horizon), dtype=np.int64)
    _fes_kernel(np.asarray(S.excluded, dtype=np.int64), out)
    return out


def fes_grundy_naive(S, horizon: int) -> list[int]:
    """Direct mex over every legal option. Quadratic; test oracle only."""
    S = set(as_fes(S).excluded)
    g: list[int] = []
    for n in range(horizon):
        opts = {g[n - m] for m in range(1, n + 1) if m not in S}
        v = 0
        while v in opts:
            v += 1
        g.append(v)
    return g


MIN_WINDOW = 1000


@dataclass(frozen=True)
class ArithmeticPeriodicity:
    preperiod: int
    period: int
    saltus: int
    window: int  # number of n with G(n+p) - G(n) == saltus verified
    empirical: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def detect_arithmetic_periodicity(values, min_window: int = MIN_WINDOW
                                  ) -> ArithmeticPeriodicity | None:
    """Minimal (preperiod, period, saltus) fitting the computed values.

    A candidate must hold for at least ``max(3 * p, min_window)`` consecutive
    n ending at the last computed value. Returns None when no candidate fits.
    """
    g = np.asarray(values, dtype=np.int64)
    h = len(g)
    for p in range(1, h):
        need = max(3 * p, min_window)
        if h - p < need:
            return None
        d = g[p:] - g[:-p]
        s = int(d[-1])
        if s <= 0:
            continue
        bad = np.flatnonzero(d != s)
        pre = int(bad[-1]) + 1 if len(bad) else 0
        if h - p - pre >= need:
            return ArithmeticPeriodicity(pre, p, s, h - p - pre)
    return None


@dataclass(frozen=True)
class ClosedForm:
    block: tuple[int, ...]
    repetitions: int
    saltus: int
    matches: bool
    checked: int

    @property
    def period(self) -> int:
        return len(self.block) * self.repetitions

    def value(self, n: int) -> int:
        q, r = divmod(n, self.period)
        return q * self.saltus + self.block[r % len(self.block)]


def fes_closed_form(S, horizon: int = 2000) -> ClosedForm:
    """Siegel's forms for one or two excluded moves, checked against fes_grundy."""
    S = as_fes(S)
    ex = S.excluded
    if len(ex) > 2:
        raise RulesetError("closed form known only for one or two excluded moves")
    a = ex[0]
    reps = 3 if len(ex) == 2 and ex[1] == 2 * a else 2
    form = ClosedForm(tuple(range(a)), reps, a, False, 0)
    g = fes_grundy(S, horizon)
    pred = np.array([form.value(n) for n in range(horizon)], dtype=np.int64)
    return ClosedForm(form.block, reps, a, bool(np.array_equal(g, pred)), horizon)


def gcd_scaling_check(S, horizon: int = 2000) -> bool:
    """G_S(n) == G_S'(n // g) * g + n % g for all n < horizon, S' = S / g."""
    S = as_fes(S)
    g = S.gcd
    left = fes_grundy(S, horizon)
    if g == 1:
        return True
    small = fes_grundy(S.reduced(), horizon // g + 1)
    n = np.arange(horizon)
    right = small[n // g] * g + n % g
    return bool(np.array_equal(left, right))


# --- conjecture harness ---------------------------------------------------

@dataclass
class Verdict:
    name: str
    parameters: dict
    excluded: tuple[int, ...]
    status: str  # "holds-over-window" | "violated-at-n" | "inconclusive"
    predicted: dict
    detected: dict | None
    witness: int | None = None
    case: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


class PremiseError(RulesetError):
    pass


def _sleator_slusky(a: int, b: int) -> tuple[tuple[int, ...], dict, str]:
    if not b > 3 * a:
        raise PremiseError("Sleator-Slusky premise b > 3a failed")
    if gcd(a, b) != 1:
        raise PremiseError("Sleator-Slusky premise gcd(a, b) = 1 failed")
    ms = [m for m in range(b + 1, a + b) if m % (2 * a) == 0]
    if ms:
        return (a, b, a + b), {"period": 3 * a * ms[0], "pure": True}, f"m={ms[0]}"
    # second clause: p = 3an for some b < n < a+b
    return (a, b, a + b), {"period_in": [3 * a * n for n in range(b + 1, a + b)],
                           "pure": True}, "no multiple of 2a"


def _four_move_lemma(a: int, b: int) -> tuple[tuple[int, ...], dict, str]:
    if b == 2 * a:
        raise PremiseError("lemma premise b != 2a failed")
    ms = [m for m in range(1, b // a + 1) if 2 * m * a <= b <= (2 * m + 1) * a]
    if not ms:
        raise PremiseError("lemma premise 2ma <= b <= (2m+1)a failed")
    m = ms[0]
    return (a, b, a + b, 2 * a + b), {"period": (2 * m + 3) * a + b, "pure": True}, f"m={m}"


def _four_move_f(a: int, b: int) -> tuple[tuple[int, ...], dict, str]:
    # S = {a, b, a+b, a+2b}
    if not a < b:
        raise PremiseError("need a < b")
    i = (b - a) // (2 * a)
    j = (b - (2 * i + 1) * a) // a
    k = b - (2 * i + j + 1) * a
    f = 4 * (i + j) * (i + 1) * a * a + (4 * i + 3) * k * a + k * k
    g = gcd(a, b)
    if a < b < 2 * a:
        case, div = "a<b<2a", b - a
    elif g == a:
        case, div = "b>=2a, gcd=a", ((a + b - 1) // (2 * a)) * a
    else:
        case, div = "b>=2a, gcd!=a", g
    pred = {"pure": True}
    if div and f % div == 0:
        pred["period"] = f // div
    else:
        pred["period_fraction"] = [f, div]
    return (a, b, a + b, a + 2 * b), pred, case


def _four_move_pure(a: int, b: int) -> tuple[tuple[int, ...], dict, str]:
    if not b > 2 * a:
        raise PremiseError("premise b > 2a failed")
    return (a, b, a + b, 2 * a + b), {"pure": True}, "b>2a"


def _four_move_f_prime(a: int, b: int) -> tuple[tuple[int, ...], dict, str]:
    ms = [m for m in range(0, b // a + 1) if (2 * m + 1) * a < b < (2 * m + 2) * a]
    if not ms:
        raise PremiseError("premise (2m+1)a < b < (2m+2)a failed")
    fp = ((b + 2 * a - 1) // (2 * a)) * 4 * a * a + 3 * a * (b % a)
    g = gcd(a, b)
    pred = {"pure": True}
    if fp % g == 0:
        pred["period"] = fp // g
    else:
        pred["period_fraction"] = [fp, g]
    return (a, b, a + b, 2 * a + b), pred, f"m={ms[0]}"


def _four_move_exception(a: int, b: int) -> tuple[tuple[int, ...], dict, str]:
    ex = tuple(sorted({a, b, a + b, a + 2 * b}))
    if len(ex) != 4:
        raise PremiseError("excluded set must have four distinct members")
    return ex, {}, "report-only"


CONJECTURES = {
    "sleator-slusky": _sleator_slusky,
    "four-move-lemma": _four_move_lemma,
    "four-move-f": _four_move_f,
    "four-move-pure": _four_move_pure,
    "four-move-f-prime": _four_move_f_prime,
    "four-move-exception": _four_move_exception,
}


def conjecture_harness(name: str, parameters: dict, horizon: int = 50_000) -> Verdict:
    """Evaluate a conjectured period/purity statement against computed values."""
    try:
        make = CONJECTURES[name]
    except KeyError:
        raise RulesetError(f"unknown conjecture {name!r}; known: {sorted(CONJECTURES)}")
    a, b = int(parameters["a"]), int(parameters["b"])
    if not 0 < a < b:
        raise PremiseError("need 0 < a < b")
    excluded, predicted, case = make(a, b)
    g = fes_grundy(excluded, horizon)
    det = detect_arithmetic_periodicity(g)
    verdict = Verdict(name, {"a": a, "b": b}, excluded, "inconclusive", predicted,
                      det.to_dict() if det else None, case=case)
    if det is None:
        return verdict
    status, witness = "holds-over-window", None
    if "period" in predicted and predicted["period"] != det.period:
        status = "violated-at-n"
    if "period_in" in predicted and det.period not in predicted["period_in"]:
        status = "violated-at-n"
    if predicted.get("pure") and det.preperiod != 0:
        status = "violated-at-n"
    if status == "violated-at-n":
        witness = _witness(g, predicted.get("period"), det)
    verdict.status, verdict.witness = status, witness
    return verdict


def _witness(g: np.ndarray, period: int | None, det: ArithmeticPeriodicity) -> int:
    """First n where the conjectured shape visibly fails."""
    if period is None or period >= len(g):
        return max(det.preperiod - 1, 0)
    d = g[period:] - g[:-period]
    s = int(d[-1])
    bad = np.flatnonzero(d != s)
    return int(bad[0]) if len(bad) else max(det.preperiod - 1, 0)
