"""Ruleset enumeration, record-holder searches and parameterized families."""

from __future__ import annotations

import itertools
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import (
    PeriodicityCertificate,
    Ruleset,
    RulesetError,
    Seed,
    as_ruleset,
    grundy_certificate,
    is_max_symmetric,
    outcome_certificate,
)

FILTERS = ("all", "max_symmetric")


def _normalize_filter(name: str) -> str:
    name = name.replace("-", "_")
    if name not in FILTERS:
        raise RulesetError(f"unknown filter {name!r}; expected one of {FILTERS}")
    return name


def enumerate_rulesets(max_s_bound: int, k: int, filter: str = "all",
                       exact_max: bool = False) -> Iterator[Ruleset]:
    """All k-move rulesets with max <= max_s_bound, in lexicographic order.

    With ``exact_max`` only rulesets whose largest move equals the bound.
    """
    if k < 1:
        raise RulesetError("k must be at least 1")
    flt = _normalize_filter(filter)
    if exact_max:
        combos = (c + (max_s_bound,) for c in itertools.combinations(range(1, max_s_bound), k - 1))
    else:
        combos = itertools.combinations(range(1, max_s_bound + 1), k)
    for c in combos:
        S = Ruleset(c)
        if flt == "max_symmetric" and not is_max_symmetric(S):
            continue
        yield S


def all_rulesets(max_s_bound: int) -> Iterator[Ruleset]:
    """Every ruleset (any size) with max <= max_s_bound."""
    for m in range(1, max_s_bound + 1):
        for k in range(1, m + 1):
            yield from enumerate_rulesets(m, k, exact_max=True)


# --- parallel evaluation ----------------------------------------------------

@dataclass(frozen=True)
class RulesetResult:
    ruleset: tuple[int, ...]
    outcome: PeriodicityCertificate
    nim: PeriodicityCertificate | None


def _evaluate(args) -> RulesetResult:
    moves, limit, with_nim = args
    oc = outcome_certificate(moves, limit=limit)
    nc = grundy_certificate(moves, limit=limit) if with_nim else None
    return RulesetResult(tuple(moves), oc, nc)


def evaluate_many(rulesets: Iterable, limit: int | None = None, with_nim: bool = True,
                  threads: int = 1) -> list[RulesetResult]:
    """Certificates for many rulesets; input order is preserved whatever ``threads`` is."""
    jobs = [(tuple(as_ruleset(S).moves), limit, with_nim) for S in rulesets]
    if threads <= 1 or len(jobs) < 2:
        return [_evaluate(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (8 * threads))))


# --- record holders -----------------------------------------------------------

@dataclass
class RecordRow:
    max_s: int
    ruleset: tuple[int, ...]
    outcome_period: int
    outcome_preperiod: int
    nim_period: int | None
    nim_preperiod: int | None
    outcome_certified: bool
    nim_certified: bool | None


@dataclass
class RecordTable:
    k: int
    filter: str
    rows: list[RecordRow]
    uncertified: dict[int, int] = field(default_factory=dict)
    evaluated: dict[int, int] = field(default_factory=dict)

    def best(self, max_s: int) -> list[RecordRow]:
        return [r for r in self.rows if r.max_s == max_s]

    def to_dict(self) -> dict:
        return asdict(self)

    CSV_COLUMNS = ("max_s", "ruleset", "outcome_preperiod", "outcome_period",
                   "nim_preperiod", "nim_period", "outcome_certified", "nim_certified")

    def csv_rows(self) -> list[list]:
        out = []
        for r in self.rows:
            d = asdict(r)
            d["ruleset"] = " ".join(map(str, r.ruleset))
            out.append([d[c] for c in self.CSV_COLUMNS])
        return out


def record_holders(max_s_range: Sequence[int] | range, k: int, filter: str = "all",
                   limit: int | None = None, threads: int = 1, with_nim: bool = True
                   ) -> RecordTable:
    """Per max_s, the k-move rulesets with the largest certified outcome period.

    Ties are all listed in lexicographic order. Rulesets that fail to certify
    within ``limit`` are counted per max_s, never silently dropped.
    """
    flt = _normalize_filter(filter)
    table = RecordTable(k, flt, [])
    for m in max_s_range:
        if m < k:
            continue
        rulesets = list(enumerate_rulesets(m, k, flt, exact_max=True))
        results = evaluate_many(rulesets, limit, with_nim, threads)
        table.evaluated[m] = len(results)
        good = [r for r in results if r.outcome.certified]
        table.uncertified[m] = len(results) - len(good)
        if not good:
            continue
        top = max(r.outcome.period for r in good)
        for r in sorted((r for r in good if r.outcome.period == top), key=lambda r: r.ruleset):
            table.rows.append(RecordRow(
                m, r.ruleset, r.outcome.period, r.outcome.preperiod,
                r.nim.period if r.nim else None, r.nim.preperiod if r.nim else None,
                True, r.nim.certified if r.nim else None))
    return table


# --- three-move classification ---------------------------------------------

CLASSES = ("s2+s3", "s1+s3", "s1+s2", "diagonal", "other", "unknown", "invalid")


def period_class(s1: int, s2: int, s3: int, period: int) -> str:
    """Smallest of the three pair sums that the period divides, else "other"."""
    for name, total in (("s1+s2", s1 + s2), ("s1+s3", s1 + s3), ("s2+s3", s2 + s3)):
        if total % period == 0:
            return name
    return "other"


@dataclass
class ClassGrid:
    s3: int
    s1_values: list[int]
    s2_values: list[int]
    labels: list[list[str]]  # labels[row][col], row indexes s2, col indexes s1
    periods: list[list[int | None]]
    period_classes: list[list[str | None]]

    def cell(self, s1: int, s2: int) -> str:
        return self.labels[self.s2_values.index(s2)][self.s1_values.index(s1)]

    def period(self, s1: int, s2: int) -> int | None:
        return self.periods[self.s2_values.index(s2)][self.s1_values.index(s1)]

    def period_class_of(self, s1: int, s2: int) -> str | None:
        return self.period_classes[self.s2_values.index(s2)][self.s1_values.index(s1)]

    def counts(self) -> dict[str, int]:
        out = {c: 0 for c in CLASSES}
        for row in self.labels:
            for lab in row:
                out[lab] += 1
        return out


def classify_three_move(s3: int, s1_range: Iterable[int], s2_range: Iterable[int],
                        limit: int | None = None, threads: int = 1) -> ClassGrid:
    """Label each (s1, s2) cell of {s1, s2, s3} by the form of its outcome period.

    Cells on s1 + s2 = s3 are "diagonal" whatever their period; the class the
    period alone would get is kept in ``period_classes``.
    """
    s1s, s2s = list(s1_range), list(s2_range)
    cells = [(a, b) for b in s2s for a in s1s if 0 < a < b < s3]
    results = dict(zip(cells, evaluate_many([(a, b, s3) for a, b in cells], limit, False, threads)))
    labels, periods, pclasses = [], [], []
    for b in s2s:
        lrow, prow, crow = [], [], []
        for a in s1s:
            if (a, b) not in results:
                lrow.append("invalid"), prow.append(None), crow.append(None)
                continue
            cert = results[(a, b)].outcome
            if not cert.certified:
                pc = "unknown"
            else:
                pc = period_class(a, b, s3, cert.period)
            lrow.append("diagonal" if a + b == s3 else pc)
            prow.append(cert.period if cert.certified else None)
            crow.append(pc)
        labels.append(lrow), periods.append(prow), pclasses.append(crow)
    return ClassGrid(s3, s1s, s2s, labels, periods, pclasses)


# --- parameterized families -------------------------------------------------

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(?:\*?\s*([a-z])(?:\s*(?:\^|\*\*)\s*(\d+))?)?")


def parse_polynomial(text: str) -> tuple[int, ...]:
    """Integer polynomial in one variable, e.g. ``"56n^3+52n^2+9n+1"``.

    Returns coefficients, constant term first.
    """
    s = text.replace(" ", "").replace("²", "^2").replace("³", "^3")
    if not s:
        raise RulesetError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    var = None
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise RulesetError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, digits, v, exp = m.groups()
        if pos > 0 and not sign:
            raise RulesetError(f"missing operator in {text!r} at position {pos}")
        if v:
            if var is None:
                var = v
            elif v != var:
                raise RulesetError(f"polynomial {text!r} mixes variables")
        c = int(digits) if digits else 1
        deg = (int(exp) if exp else 1) if v else 0
        coeffs[deg] = coeffs.get(deg, 0) + (-c if sign == "-" else c)
        pos = m.end()
    top = max(coeffs)
    return tuple(coeffs.get(d, 0) for d in range(top + 1))


def eval_polynomial(coeffs: Sequence[int], n: int) -> int:
    return sum(c * n ** d for d, c in enumerate(coeffs))


@dataclass(frozen=True)
class FamilySpec:
    """Ruleset family {c_i * n + d_i} with optional predicted polynomials."""

    name: str
    moves: tuple[tuple[int, int], ...]  # (c, d) per move
    outcome_period: tuple[int, ...] | None = None
    nim_period: tuple[int, ...] | None = None
    outcome_preperiod: tuple[int, ...] | None = None
    nim_preperiod: tuple[int, ...] | None = None

    @classmethod
    def parse(cls, name: str, moves: str, **predictions: str | None) -> "FamilySpec":
        affine = []
        for part in moves.split(","):
            co = parse_polynomial(part)
            if len(co) > 2:
                raise RulesetError(f"move {part!r} is not affine in n")
            affine.append((co[1] if len(co) > 1 else 0, co[0]))
        preds = {k: parse_polynomial(v) for k, v in predictions.items() if v}
        return cls(name, tuple(affine), **preds)

    def instantiate(self, n: int) -> Ruleset:
        vals = [c * n + d for c, d in self.moves]
        if any(v < 1 for v in vals) or len(set(vals)) != len(vals):
            raise RulesetError(f"{self.name} is not a valid ruleset at n={n}: {vals}")
        return Ruleset(tuple(sorted(vals)))

    def admissible(self, n: int) -> bool:
        try:
            self.instantiate(n)
        except RulesetError:
            return False
        return True


FAMILIES: dict[str, FamilySpec] = {
    f.name: f for f in (
        FamilySpec.parse("althofer-3", "n,2n+1,3n+1", outcome_preperiod="0"),
        FamilySpec.parse("althofer-4", "n,4n,12n+1,16n+1",
                         outcome_period="56n^3+52n^2+9n+1", outcome_preperiod="0"),
        FamilySpec.parse("althofer-5", "n,8n,30n+1,37n+1,38n+1"),
        FamilySpec.parse("long-preperiod", "5n-2,5n+3,10n+2", outcome_preperiod="45n^2-1"),
        FamilySpec.parse("flammenkamp-S1", "n,n+3,3n-1,3n+3",
                         outcome_period="4n+2", nim_period="12n+6"),
        FamilySpec.parse("flammenkamp-S2", "2,4n-1,4n+1,4n+5,8n-2",
                         outcome_period="4", nim_period="8n"),
        FamilySpec.parse("flammenkamp-S3", "2,4n+1,4n+3,4n+7,8n+2",
                         outcome_period="4", nim_period="8n+4"),
        FamilySpec.parse("flammenkamp-S4", "n,2n+1,4n+2,5n+3,6n+3",
                         outcome_period="10n+4", nim_period="10n^2+4n"),
        FamilySpec.parse("bipartite-k", "n,n+2,2n+3"),
    )
}


@dataclass
class FamilyRow:
    n: int
    ruleset: tuple[int, ...] | None
    outcome: PeriodicityCertificate | None
    nim: PeriodicityCertificate | None
    predicted: dict[str, int]
    checks: dict[str, bool | None]  # None = inconclusive

    @property
    def consistent(self) -> bool | None:
        vals = list(self.checks.values())
        if any(v is False for v in vals):
            return False
        if any(v is None for v in vals):
            return None
        return True


def family_eval(f: FamilySpec, ns: Iterable[int], limit: int | None = None) -> list[FamilyRow]:
    rows = []
    for n in ns:
        try:
            S = f.instantiate(n)
        except RulesetError:
            rows.append(FamilyRow(n, None, None, None, {}, {"admissible": False}))
            continue
        oc = outcome_certificate(S, limit=limit)
        need_nim = f.nim_period is not None or f.nim_preperiod is not None
        nc = grundy_certificate(S, limit=limit) if need_nim else None
        predicted, checks = {}, {}
        for key, poly, cert, attr in (
            ("outcome_period", f.outcome_period, oc, "period"),
            ("outcome_preperiod", f.outcome_preperiod, oc, "preperiod"),
            ("nim_period", f.nim_period, nc, "period"),
            ("nim_preperiod", f.nim_preperiod, nc, "preperiod"),
        ):
            if poly is None:
                continue
            predicted[key] = eval_polynomial(poly, n)
            checks[key] = (getattr(cert, attr) == predicted[key]) if cert.certified else None
        rows.append(FamilyRow(n, S.moves, oc, nc, predicted, checks))
    return rows


@dataclass(frozen=True)
class DivergentReport:
    outcome: PeriodicityCertificate
    nim: PeriodicityCertificate
    ratio: float | None  # None when inconclusive


def divergent_period_check(S, limit: int | None = None) -> DivergentReport:
    oc = outcome_certificate(S, limit=limit)
    nc = grundy_certificate(S, limit=limit)
    ratio = nc.period / oc.period if oc.certified and nc.certified else None
    return DivergentReport(oc, nc, ratio)


# --- growth fitting ---------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    alpha: float  # period ~ 2 ** (alpha * max_s)
    alpha_intercept: float
    alpha_residual: float
    beta: float  # period ~ max_s ** beta
    beta_intercept: float
    beta_residual: float


def fit_growth(points: Sequence[tuple[int, int]]) -> GrowthFit:
    """Least-squares slopes of log2(period) vs max_s and ln(period) vs ln(max_s)."""
    if len(points) < 3:
        raise ValueError("need at least three points")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.any(y <= 0) or np.any(x <= 0):
        raise ValueError("max_s and periods must be positive")
    if np.ptp(x) == 0:
        raise ValueError("degenerate input: all max_s values are equal")

    def fit(u, v):
        (slope, icpt), res, *_ = np.polyfit(u, v, 1, full=True)
        return float(slope), float(icpt), float(np.sqrt(res[0] / len(u))) if len(res) else 0.0

    a = fit(x, np.log2(y))
    b = fit(np.log(x), np.log(y))
    return GrowthFit(*a, *b)


# --- seeded family ------------------------------------------------------------

def seeded_family(n: int) -> tuple[Ruleset, Seed]:
    """S_n = {n, 4n-1, 4n^2} with seed N^(5n-1) (P^j N^(4n-1-j) for j = 1..n-1).

    The seed is written leftmost = heap -max(S). The N padding is whatever
    makes the seed exactly max(S) long, which works out to 5n - 1.
    """
    if n < 2:
        raise RulesetError("seeded family needs n >= 2")
    S = Ruleset((n, 4 * n - 1, 4 * n * n))
    word = "".join("P" * j + "N" * (4 * n - 1 - j) for j in range(1, n))
    seed = Seed("N" * (S.max_s - len(word)) + word)
    seed.check(S)
    return S, seed


# --- single-move adjoin scans ---------------------------------------------------

@dataclass
class LinearFit:
    slope: float
    intercept: float
    max_deviation: float
    points: int


def _linear_fit(cs: Sequence[int], ys: Sequence[int]) -> LinearFit | None:
    if len(cs) < 2:
        return None
    x, y = np.asarray(cs, dtype=float), np.asarray(ys, dtype=float)
    if np.ptp(x) == 0:
        return None
    slope, icpt = np.polyfit(x, y, 1)
    dev = float(np.max(np.abs(y - (slope * x + icpt))))
    return LinearFit(float(slope), float(icpt), dev, len(cs))


@dataclass
class ZhangScan:
    base: Ruleset
    base_period: int
    modulus: int
    residue: int
    threshold: int  # c above this counts as "sufficiently large"
    rows: list[tuple[int, int, int]]  # (c, preperiod, period), certified only
    excluded: list[int]  # uncertified c
    fit_all: dict[str, LinearFit | None]
    fit_large: dict[str, LinearFit | None]


def zhang_scan(S, residue: int, modulus: int, cs: Iterable[int], limit: int | None = None
               ) -> ZhangScan:
    """Outcome (preperiod, period) of S + {c} for c = residue mod modulus."""
    S = as_ruleset(S)
    base = outcome_certificate(S, limit=limit)
    if not base.certified:
        raise RulesetError(f"base ruleset {S} did not certify")
    if modulus % base.period:
        raise RulesetError(f"modulus {modulus} is not a multiple of the period {base.period}")
    threshold = 4 * base.period * S.max_s
    rows, excluded = [], []
    for c in cs:
        if c % modulus != residue % modulus or c in S:
            continue
        cert = outcome_certificate(S.union(c), limit=limit)
        if cert.certified:
            rows.append((c, cert.preperiod, cert.period))
        else:
            excluded.append(c)

    def fits(sel):
        return {"preperiod": _linear_fit([r[0] for r in sel], [r[1] for r in sel]),
                "period": _linear_fit([r[0] for r in sel], [r[2] for r in sel])}

    large = [r for r in rows if r[0] > threshold]
    return ZhangScan(S, base.period, modulus, residue % modulus, threshold, rows, excluded,
                     fits(rows), fits(large))
