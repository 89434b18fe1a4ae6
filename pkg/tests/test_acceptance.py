"""Acceptance criteria, one check per criterion.

Each ``check_N`` returns ``(ok, detail)``. Under pytest every criterion prints
one ``criterion N: PASS|FAIL`` line; ``python tests/test_acceptance.py``
prints the same lines without pytest.
"""

from __future__ import annotations

import random
import time
from math import gcd

import numpy as np
import pytest

from finsub.core import (
    certified_grundy,
    certified_outcomes,
    expansion_set,
    bipartite_check,
    fibonacci_bound,
    fibonacci_premise,
    grundy,
    grundy_certificate,
    is_max_symmetric,
    outcome_certificate,
    outcomes,
    predict_two_move_nim,
    short_period_premise,
    short_period_word,
    two_move_period,
)
from finsub.fes import (
    conjecture_harness,
    detect_arithmetic_periodicity,
    fes_closed_form,
    fes_grundy,
    gcd_scaling_check,
)
from finsub.search import (
    FAMILIES,
    all_rulesets,
    classify_three_move,
    divergent_period_check,
    family_eval,
    seeded_family,
)
from finsub.twod import FIG2_RULESET, outcomes2d, read_pgm, render_pgm
from oracles import grundy_list, outcome_list

FIG2_DIGEST = 0x90B44BDBC62A9AB9


def _report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    return line


# 1 -----------------------------------------------------------------------------

TABLES = {
    (2, 5): "PPNNPNNPPNNPNNPPN",
    (2, 3, 5): "PPNNNNNPPNNNNNPPN",
    (2, 5, 7): "PPNNPNNNNNPNNPPNNNNNNNPPNNPNNN",
    (2, 4, 7): "PPNNNNPNNPNNPNNPN",
}


def check_1():
    bad = [S for S, want in TABLES.items() if outcomes(S, horizon=len(want)).symbols != want]
    # the tables were transcribed by hand; the slow oracle must agree too
    bad += [S for S, want in TABLES.items() if outcome_list(S, len(want)) != want]
    return not bad, f"4 tables, mismatches: {bad}"


# 2 -----------------------------------------------------------------------------

def check_2():
    t = time.perf_counter()
    bad = []
    for b in range(2, 31):
        for a in range(1, b):
            c = outcome_certificate((a, b))
            if not c.certified or (c.preperiod, c.period) != (0, two_move_period(a, b)):
                bad.append((a, b))
    dt = time.perf_counter() - t
    return not bad and dt < 1.0, f"435 pairs, mismatches {bad[:5]}, {dt:.2f}s"


# 3 -----------------------------------------------------------------------------

AUSTIN_WORDS = {
    (4, 13, 22): "0000 11110000 11112 0000 11112",
    (4, 9, 14): "000011110222103321",
    (4, 7, 10): "0000111122223",
}


def check_3():
    bad_pairs = [(a, b) for b in range(2, 21) for a in range(1, b)
                 if b % a and not predict_two_move_nim(a, b).matches]
    bad_words = []
    for S, word in AUSTIN_WORDS.items():
        seq, cert = certified_grundy(S)
        seen = seq.word(cert.preperiod, cert.period)
        if not (cert.certified and cert.preperiod == 0 and seen == word.replace(" ", "")):
            bad_words.append((S, seen))
    detail = f"2-move mismatches {bad_pairs}; word mismatches {bad_words}"
    return not bad_pairs and not bad_words, detail


# 4 -----------------------------------------------------------------------------

def _period_exceptions(bound, divisor=False):
    out = []
    for S in all_rulesets(bound):
        c = grundy_certificate(S)
        assert c.certified
        sums = {a + b for a in S for b in S}
        ok = any(s % c.period == 0 for s in sums) if divisor else c.period in sums
        if not ok:
            out.append((S.moves, c.period))
    return out


def check_4():
    exc = _period_exceptions(7)
    return [m for m, _ in exc] == [(2, 5, 7)], f"exceptions (period, max S <= 7): {exc}"


def check_4_divisor_reading():
    exc = _period_exceptions(7, divisor=True)
    return [m for m, _ in exc] == [(2, 5, 7)], f"exceptions (period divides a pair sum): {exc}"


# 5 -----------------------------------------------------------------------------

def check_5():
    problems = []
    for a in (1, 2, 3):
        S = (a, 4 * a, 12 * a + 1, 16 * a + 1)
        c = outcome_certificate(S)
        want = 56 * a ** 3 + 52 * a ** 2 + 9 * a + 1
        if not (c.certified and c.preperiod == 0 and c.period == want):
            problems.append(("althofer", a, (c.preperiod, c.period)))
    for n in (1, 2, 3):
        S = (5 * n - 2, 5 * n + 3, 10 * n + 2)
        c = outcome_certificate(S)
        if not (c.certified and c.preperiod == 45 * n * n - 1):
            problems.append(("long-preperiod", n, c.preperiod))
    t = time.perf_counter()
    for name in ("flammenkamp-S1", "flammenkamp-S2", "flammenkamp-S3", "flammenkamp-S4"):
        for row in family_eval(FAMILIES[name], (2, 3)):
            if row.consistent is not True:
                got = None if row.outcome is None else (row.outcome.period, row.nim.period)
                problems.append((name, row.n, row.ruleset, got))
    dt = time.perf_counter() - t
    return not problems, f"failures {problems}; Flammenkamp families {dt:.2f}s"


# 6 -----------------------------------------------------------------------------

def check_6():
    ratios = {S: divergent_period_check(S).ratio for S in [(4, 6, 11, 14), (5, 7, 14, 17)]}
    return all(r == 2 for r in ratios.values()), f"nim/outcome ratios {ratios}"


# 7 -----------------------------------------------------------------------------

def symmetric_sets(max_bound):
    """Every S with max S <= max_bound closed under s -> p - s, for each p."""
    seen = set()
    for p in range(2, 2 * max_bound + 1):
        lo = max(1, p - max_bound)
        pairs = sorted({tuple(sorted((s, p - s))) for s in range(lo, p) if p - s >= lo})
        for mask in range(1, 2 ** len(pairs)):
            S = tuple(sorted({x for i, pr in enumerate(pairs) if mask >> i & 1 for x in pr}))
            if (S, p) not in seen:
                seen.add((S, p))
                yield S, p


def check_7():
    v = {}
    n_sym = 0
    for S, p in symmetric_sets(20):
        n_sym += 1
        for cert in (outcome_certificate(S), grundy_certificate(S)):
            if not (cert.certified and cert.preperiod == 0 and p % cert.period == 0):
                v.setdefault("symmetric", []).append((S, p))
    n_max = 0
    for S in all_rulesets(16):
        if is_max_symmetric(S):
            n_max += 1
            if outcome_certificate(S).preperiod or grundy_certificate(S).preperiod:
                v.setdefault("max-symmetric", []).append(S.moves)
    rng = random.Random(20240601)
    for _ in range(500):
        S = tuple(sorted(rng.sample(range(1, 31), rng.randint(1, 6))))
        g = grundy(S, 10_000).values()
        a = S[0]
        if not np.array_equal(g[a:] == 1, g[:-a] == 0):
            v.setdefault("ferguson", []).append(S)
    n_short = 0
    for S in all_rulesets(15):
        if short_period_premise(S):
            n_short += 1
            seq, c = certified_outcomes(S)
            if not (c.certified and c.preperiod == 0
                    and seq.symbols[:c.period] == short_period_word(S)):
                v.setdefault("short-period", []).append(S.moves)
    n_fib = 0
    for S in all_rulesets(16):
        if fibonacci_premise(S):
            n_fib += 1
            c = outcome_certificate(S)
            if not (c.certified and c.period <= fibonacci_bound(S)):
                v.setdefault("fibonacci", []).append(S.moves)
    detail = (f"symmetric {n_sym}, max-symmetric {n_max}, ferguson 500, short-period {n_short}, "
              f"fibonacci {n_fib}; violations {({k: x[:3] for k, x in v.items()})}")
    return not v, detail


# 8 -----------------------------------------------------------------------------

def _translates(base, period, bound):
    return sorted({x + n * period for x in base for n in range(bound // period + 1)
                   if x + n * period <= bound})


def check_8():
    bad = []
    for b in range(3, 13):
        for a in range(2, b):
            if gcd(a, b) != 1:
                continue
            bound, p = 4 * (a + b), a + b
            rep = expansion_set((a, b), bound, 64 * p)
            core = range(a, b + 1) if a + 1 < b <= 2 * a else (a, b)
            if not rep.certified or rep.full != _translates(core, p, bound):
                bad.append(((a, b), rep.full))
    for a in (3, 5):
        for b in (4, 6, 8):
            if b < a:
                continue  # {1,b,a} with b < a falls outside the ordered statement
            S, p = (1, a, b), a + b
            seq, cert = certified_grundy(S)
            word = "01" * (b // 2) + "23" * ((a - 1) // 2) + "2"
            core = list(range(1, a + 1, 2)) + list(range(b, b + a, 2))
            rep = expansion_set(S, 4 * p, 64 * p)
            if not (cert.certified and cert.preperiod == 0 and cert.period == p
                    and seq.word(0, p) == word and rep.full == _translates(core, p, 4 * p)):
                bad.append((S, seq.word(0, cert.period), rep.full))
    return not bad, f"mismatches {bad[:4]}"


# 9 -----------------------------------------------------------------------------

def check_9():
    bad = []
    for S in all_rulesets(15):
        if S.gcd != 1:
            continue
        g = grundy_list(S.moves, 2 * S.max_s + 4)
        actual = all(v == x % 2 for x, v in enumerate(g))
        if bipartite_check(S).bipartite != actual:
            bad.append(S.moves)
    fams = ([tuple(2 ** j + 1 for j in range(1, k + 1)) for k in (3, 4, 5)]
            + [(3, 5, 2 ** k + 1) for k in (3, 4, 5)]
            + [(k, k + 2, 2 * k + 3) for k in (3, 5, 7)])
    not_ub = [S for S in fams if bipartite_check(S).ultimately_bipartite is not True]
    return not bad and not not_ub, f"criterion mismatches {bad[:5]}; families not detected {not_ub}"


# 10 ----------------------------------------------------------------------------

def check_10():
    bad = []
    for b in range(1, 13):
        if not fes_closed_form((b,)).matches:
            bad.append((b,))
        for a in range(1, b):
            if not fes_closed_form((a, b)).matches:
                bad.append((a, b))
    rng = random.Random(7)
    for _ in range(50):
        g = rng.randint(2, 5)
        S = tuple(sorted(g * x for x in rng.sample(range(1, 10), rng.randint(1, 4))))
        if not gcd_scaling_check(S, 2000):
            bad.append(("gcd", S))
    det = detect_arithmetic_periodicity(fes_grundy((2, 3, 5, 7), 5000))
    if det is None or det.preperiod != 2:
        bad.append(("{2,3,5,7}", det))
    anomalies = 0
    for _ in range(200):
        S = tuple(sorted(rng.sample(range(1, 25), 3)))
        d = detect_arithmetic_periodicity(fes_grundy(S, 50_000))
        anomalies += d is None or d.preperiod != 0
    for name, pairs in (("sleator-slusky", [(2, 7), (2, 9), (3, 10)]),
                        ("four-move-lemma", [(2, 9), (3, 13)])):
        for a, b in pairs:
            v = conjecture_harness(name, {"a": a, "b": b})
            if v.status != "holds-over-window":
                bad.append((name, a, b, v.status))
    return not bad, f"failures {bad}; |S|=3 non-pure (report only) {anomalies}/200"


# 11 ----------------------------------------------------------------------------

def check_11():
    lengths = {n: len(seeded_family(n)[1]) for n in range(2, 11)}
    len_ok = all(lengths[n] == 4 * n * n for n in lengths)
    ratios = []
    for n in (2, 3, 4):
        S, seed = seeded_family(n)
        c = outcome_certificate(S, seed)
        if not c.certified:
            return False, f"n={n} did not certify"
        ratios.append(c.period / S.max_s)
    inc = all(x < y for x, y in zip(ratios, ratios[1:]))
    return len_ok and inc, f"seed lengths ok={len_ok}; period/maxS for n=2,3,4: " + \
        ", ".join(f"{r:.4f}" for r in ratios)


# 12 ----------------------------------------------------------------------------

def check_12(tmp_dir=None):
    import tempfile
    from pathlib import Path

    problems = []
    rng = random.Random(12)
    for _ in range(50):
        S = tuple(sorted(rng.sample(range(1, 16), rng.randint(1, 5))))
        g = outcomes2d([(s, 0) for s in S], 300, 2)
        if not np.array_equal(g.row(1), outcomes(S, horizon=300).bits):
            problems.append(S)
    g = outcomes2d([(1, 0), (0, 1)], 64, 64)
    yy, xx = np.mgrid[0:64, 0:64]
    if not np.array_equal(g.bits == 1, (xx + yy) % 2 == 0):
        problems.append("parity")
    t = time.perf_counter()
    big = outcomes2d(FIG2_RULESET, 3600, 2000)
    dt = time.perf_counter() - t
    with tempfile.TemporaryDirectory() as d:
        path = Path(tmp_dir or d) / "fig2.pgm"
        render_pgm(big, path)
        img = read_pgm(path.read_bytes())
    if img.shape != (2000, 3600):
        problems.append("pgm shape")
    digests = {big.digest(), outcomes2d(FIG2_RULESET, 3600, 2000).digest(),
               outcomes2d(FIG2_RULESET, 3600, 2000, threads=2).digest()}
    if digests != {FIG2_DIGEST}:
        problems.append(("digest", [hex(x) for x in digests]))
    if dt >= 60:
        problems.append(("time", dt))
    return not problems, f"problems {problems}; 3600x2000 grid in {dt:.2f}s"


# 13 ----------------------------------------------------------------------------

def check_13():
    cg = classify_three_move(60, range(1, 60), range(1, 60))
    counts = cg.counts()
    real = {k: v for k, v in counts.items() if k in ("s1+s2", "s1+s3", "s2+s3", "other")}
    plurality = max(real, key=real.get)
    return plurality == "s1+s3", f"s3=60 class counts {real} (record periods skipped)"


CHECKS = {
    "1": check_1, "2": check_2, "3": check_3, "4": check_4, "4-divisor": check_4_divisor_reading,
    "5": check_5, "6": check_6, "7": check_7, "8": check_8, "9": check_9, "10": check_10,
    "11": check_11, "12": check_12, "13": check_13,
}


def _run(name):
    ok, detail = CHECKS[name]()
    _report(name, ok, detail)
    assert ok, detail


@pytest.mark.parametrize("name", [k for k in CHECKS if k != "13"])
def test_criterion(name, capsys):
    with capsys.disabled():
        print()
        _run(name)


def test_criterion_13_partial(capsys):
    # record periods near 10^11 are out of reach; only the plurality claim runs
    with capsys.disabled():
        print()
        _run("13")
    pytest.skip("record periods such as 147429129464 are not reproducible at desk scale")


if __name__ == "__main__":
    import sys

    failed = 0
    for key, fn in CHECKS.items():
        ok, detail = fn()
        _report(key, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
