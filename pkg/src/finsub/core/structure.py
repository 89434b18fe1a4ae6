"""Structural predicates on rulesets and move-adjoining machinery."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

import numpy as np

from .periodicity import (
    PeriodicityCertificate,
    certify_periodicity,
    certified_grundy,
    grundy_certificate,
)
from .rulesets import Ruleset, RulesetError, as_ruleset, misere_seed
from .sequences import grundy, misere_outcomes, outcomes


def is_symmetric(S) -> int | None:
    """Smallest p with p - s in S for every s in S, if any.

    p - max(S) >= min(S) and p - min(S) <= max(S) force p = min(S) + max(S).
    """
    S = as_ruleset(S)
    moves = set(S.moves)
    p = S.min_s + S.max_s
    return p if all(p - s in moves for s in moves) else None


def is_max_symmetric(S) -> bool:
    S = as_ruleset(S)
    moves = set(S.moves)
    m = S.max_s
    return all(s in moves for s in range(1, m + 1) if m - s in moves)


@dataclass
class ExpansionReport:
    base: Ruleset
    horizon: int
    adjoinable: list[int]
    certified: bool
    unproven: list[int] = field(default_factory=list)

    @property
    def full(self) -> list[int]:
        """Adjoinable moves together with the base moves."""
        return sorted(set(self.adjoinable) | set(self.base.moves))


def adjoin_test(S: Ruleset, c: int, base: np.ndarray, base_cert: PeriodicityCertificate
                ) -> tuple[bool, bool]:
    """(same nim-sequence on the computed range, equality proven for all heaps).

    Two eventually periodic sequences that agree on
    ``[0, max(preperiods) + lcm(periods))`` agree everywhere.
    """
    horizon = len(base)
    ext = grundy(S.union(c), horizon)
    if not np.array_equal(ext.values(), base):
        return False, True
    cert = certify_periodicity(ext)
    if not (cert.certified and base_cert.certified):
        return True, False
    need = max(cert.preperiod, base_cert.preperiod) + lcm(cert.period, base_cert.period)
    return True, need <= horizon


def expansion_set(S, candidate_bound: int, horizon: int) -> ExpansionReport:
    """Moves c <= candidate_bound outside S that leave the nim-sequence unchanged."""
    S = as_ruleset(S)
    if candidate_bound < 1 or horizon < 1:
        raise RulesetError("candidate_bound and horizon must be positive")
    base = grundy(S, horizon)
    base_cert = certify_periodicity(base)
    found, unproven = [], []
    for c in range(1, candidate_bound + 1):
        if c in S:
            continue
        same, proven = adjoin_test(S, c, base.values(), base_cert)
        if same:
            found.append(c)
            if not proven:
                unproven.append(c)
    certified = base_cert.certified and not unproven and horizon - candidate_bound >= S.max_s
    return ExpansionReport(S, horizon, found, certified, unproven)


class AustinPreconditionError(RulesetError):
    pass


def austin_adjoin_check(S, limit: int | None = None) -> list[int]:
    """Moves p - s (s in S, p - s > 0) that can be adjoined, each verified.

    Raises when the nim-sequence is not certified purely periodic.
    """
    S = as_ruleset(S)
    seq, cert = certified_grundy(S, limit)
    if not cert.certified or cert.preperiod != 0:
        raise AustinPreconditionError(
            f"precondition of Austin's theorem not met for {S}: {cert}")
    p = cert.period
    targets = sorted({p - s for s in S if p - s > 0})
    horizon = max(len(seq), 4 * (p + max(targets, default=0)) + 2 * S.max_s)
    base = grundy(S, horizon)
    base_cert = certify_periodicity(base)
    verified = []
    for c in targets:
        if c in S:
            verified.append(c)
            continue
        same, proven = adjoin_test(S, c, base.values(), base_cert)
        if same and proven:
            verified.append(c)
    return verified


@dataclass(frozen=True)
class BipartiteReport:
    applicable: bool  # gcd(S) == 1, where the closed criterion is stated
    bipartite: bool | None
    ultimately_bipartite: bool | None  # None when periodicity is uncertified
    onset: int | None
    certificate: PeriodicityCertificate


def bipartite_check(S, horizon: int | None = None) -> BipartiteReport:
    S = as_ruleset(S)
    applicable = S.gcd == 1
    bip = (1 in S and all(s % 2 for s in S)) if applicable else None
    seq, cert = certified_grundy(S, horizon)
    if not cert.certified:
        return BipartiteReport(applicable, bip, None, None, cert)
    vals = seq.values()
    tail = vals[cert.preperiod:cert.preperiod + 2].tolist()
    parity_ok = cert.period == 2 and all(
        int(vals[x]) == x % 2 for x in range(cert.preperiod, cert.preperiod + 2))
    ub = bool(parity_ok and sorted(tail) == [0, 1])
    return BipartiteReport(applicable, bip, ub, cert.preperiod if ub else None, cert)


def misere_seed_divergence(S, horizon: int = 256) -> dict:
    """Compare direct misère play with the N^min P^(max-min) seed.

    Both seed orientations are tried; for each, the first heap where the
    seeded outcome differs from misère play is reported (None if none).
    """
    S = as_ruleset(S)
    direct = misere_outcomes(S, horizon).symbols
    seed = misere_seed(S)
    report = {}
    for name, sym in (("left_is_most_negative", seed.symbols),
                      ("left_is_minus_one", seed.symbols[::-1])):
        got = outcomes(S, sym, horizon).symbols
        diff = next((i for i, (u, v) in enumerate(zip(direct, got)) if u != v), None)
        report[name] = diff
    return report
