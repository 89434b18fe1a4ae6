"""Closed-form period laws for small rulesets, each checked against brute force."""

from __future__ import annotations

from dataclasses import dataclass

from .periodicity import PeriodicityCertificate, certified_grundy, outcome_certificate
from .rulesets import Ruleset, RulesetError, as_ruleset


def _check_pair(a: int, b: int) -> None:
    if a < 1 or a >= b:
        raise RulesetError(f"need 0 < a < b, got a={a}, b={b}")


def two_move_period(a: int, b: int) -> int:
    """Outcome period of {a, b}: a+b, or 2a when 2a divides a+b."""
    _check_pair(a, b)
    return 2 * a if (a + b) % (2 * a) == 0 else a + b


def two_move_law(a: int, b: int) -> PeriodicityCertificate:
    """The law's (0, p), flagged certified only if brute force agrees."""
    p = two_move_period(a, b)
    seen = outcome_certificate((a, b))
    ok = seen.certified and (seen.preperiod, seen.period) == (0, p)
    return PeriodicityCertificate(0, p, ok, seen.horizon)


@dataclass(frozen=True)
class TwoMoveNimPrediction:
    a: int
    b: int
    n: int | None
    r: int
    form: str  # "odd" for b=(2n-1)a+r, "even" for b=2na+r, "uncovered" when r=0
    word: str  # predicted period word, or the observed one when uncovered
    observed: str
    certificate: PeriodicityCertificate

    @property
    def covered(self) -> bool:
        return self.form != "uncovered"

    @property
    def matches(self) -> bool:
        return (self.certificate.certified and self.certificate.preperiod == 0
                and self.word == self.observed)


def two_move_nim_word(a: int, b: int) -> tuple[int | None, int, str, str]:
    """Austin's period word for the nim-values of {a, b}.

    Returns ``(n, r, form, word)``; ``word`` is empty when ``a`` divides ``b``
    since neither form applies there.
    """
    _check_pair(a, b)
    q, r = divmod(b, a)
    if r == 0:
        return None, 0, "uncovered", ""
    block = "0" * a + "1" * a
    if q % 2:
        n = (q + 1) // 2
        return n, r, "odd", block * n + "2" * r
    n = q // 2
    return n, r, "even", block * n + "0" * r + "2" * (a - r) + "1" * r


def predict_two_move_nim(a: int, b: int) -> TwoMoveNimPrediction:
    n, r, form, word = two_move_nim_word(a, b)
    seq, cert = certified_grundy((a, b))
    observed = seq.word(cert.preperiod, cert.period)
    if form == "uncovered":
        word = observed
    return TwoMoveNimPrediction(a, b, n, r, form, word, observed, cert)


def _lucas(n: int) -> int:
    x, y = 2, 1
    for _ in range(n):
        x, y = y, x + y
    return x


def fibonacci_premise(S) -> bool:
    """True when two distinct moves sum to at most max(S)."""
    S = as_ruleset(S)
    return S.k >= 3 and S.moves[0] + S.moves[1] <= S.max_s


def ceil_two_phi_power(n: int) -> int:
    """Exact ceil(2 * phi**n), phi the golden ratio.

    With Lucas numbers, 2*phi**n = 2*L(n) - 2*psi**n and |2*psi**n| < 1 for
    n >= 2, so the correction only depends on the parity of n.
    """
    if n < 0:
        raise ValueError(n)
    if n == 0:
        return 2
    if n == 1:
        return 4
    return 2 * _lucas(n) + (n % 2)


def fibonacci_bound(S) -> int | None:
    S = as_ruleset(S)
    return ceil_two_phi_power(S.max_s) if fibonacci_premise(S) else None


def short_period_premise(S) -> bool:
    """Every gap between consecutive moves is at most the smallest move."""
    S = as_ruleset(S)
    return all(b - a <= S.min_s for a, b in zip(S.moves, S.moves[1:]))


def short_period_word(S) -> str:
    S = as_ruleset(S)
    return "P" * S.min_s + "N" * S.max_s
