"""Certified eventual periodicity of subtraction-game sequences.

Every value at heap ``x >= max_s`` is a function of the ``max_s`` values just
before it. So if the window ``seq[t:t+max_s]`` reappears at ``t+p``, the
sequence repeats with period ``p`` forever after ``t``. That single match is
the certificate; no infinite check is needed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .rulesets import Ruleset, Seed, as_ruleset
from .sequences import (
    DEFAULT_LIMIT,
    GrundySequence,
    OutcomeSequence,
    default_horizon,
    grundy,
    outcomes,
)


@dataclass(frozen=True)
class PeriodicityCertificate:
    preperiod: int
    period: int
    certified: bool
    horizon: int

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def pure(self) -> bool:
        return self.preperiod == 0


def _byte_view(values: np.ndarray) -> tuple[bytes, int]:
    values = np.asarray(values)
    if values.size and (values.min() < 0 or values.max() > 255):
        return values.astype("<i8").tobytes(), 8
    return values.astype(np.uint8).tobytes(), 1


def _first_recurrence(data: bytes, width: int, start: int, window: int) -> int | None:
    """Smallest shift q > 0 with data[start+q : start+q+window] == data[start : start+window]."""
    needle = data[start * width:(start + window) * width]
    pos = data.find(needle, (start + 1) * width)
    while pos != -1:
        if pos % width == 0:
            return pos // width - start
        pos = data.find(needle, pos + 1)
    return None


def _tail_period(data: bytes, width: int, start: int, n: int, max_q: int) -> int | None:
    """Smallest q <= max_q such that the tail data[start:n] has period q."""
    tail = data[start * width:n * width]
    length = n - start
    probe = tail[: max(1, min(64, length // 4)) * width]
    pos = tail.find(probe, width)
    while pos != -1 and pos // width <= max_q:
        if pos % width == 0:
            q = pos // width
            if tail[q * width:] == tail[: (length - q) * width]:
                return q
        pos = tail.find(probe, pos + 1)
    return None


def minimal_preperiod(values: np.ndarray, period: int) -> int:
    """Smallest l with values[x] == values[x+period] for every l <= x < n-period."""
    values = np.asarray(values)
    diff = np.flatnonzero(values[:-period] != values[period:]) if period < len(values) else []
    return int(diff[-1]) + 1 if len(diff) else 0


def certify_periodicity(seq: OutcomeSequence | GrundySequence, window: int | None = None
                        ) -> PeriodicityCertificate:
    """Minimal (preperiod, period) of a computed sequence, with a window proof.

    The search anchors at the middle of the computed range. When the anchor
    window never reappears, the result carries ``certified=False`` and the
    best period that fits the computed tail.
    """
    values = np.asarray(seq.values())
    n = len(values)
    m = seq.ruleset.max_s if window is None else window
    data, width = _byte_view(values)
    start = n // 2
    q = None
    if n - start >= m + 1:
        q = _first_recurrence(data, width, start, m)
    if q is not None and start + q + m <= n:
        tail_start = start
        # window match implies the rest matches; verify anyway (cheap, in C)
        a = data[tail_start * width:(n - q) * width]
        b = data[(tail_start + q) * width:n * width]
        if a == b:
            pre = minimal_preperiod(values[: n], q)
            return PeriodicityCertificate(pre, q, True, n)
    q = _tail_period(data, width, start, n, max(1, (n - start) // 2))
    if q is None:
        return PeriodicityCertificate(start, max(1, n - start), False, n)
    return PeriodicityCertificate(minimal_preperiod(values, q), q, False, n)


def _initial_horizon(S: Ruleset) -> int:
    return max(256, 32 * S.max_s)


def outcome_certificate(S, seed: Seed | str | None = None, limit: int | None = None
                        ) -> PeriodicityCertificate:
    """Grow the horizon by doubling until the outcome sequence is certified.

    The largest horizon tried is ``4 * 2**min(max_s, 20)`` capped by ``limit``
    (default 10**7); past that the uncertified best guess is returned.
    """
    S = as_ruleset(S)
    cap = default_horizon(S, DEFAULT_LIMIT if limit is None else limit)
    h = min(_initial_horizon(S), cap)
    while True:
        cert = certify_periodicity(outcomes(S, seed, h))
        if cert.certified or h >= cap:
            return cert
        h = min(2 * h, cap)


def grundy_certificate(S, limit: int | None = None) -> PeriodicityCertificate:
    S = as_ruleset(S)
    cap = default_horizon(S, DEFAULT_LIMIT if limit is None else limit)
    h = min(_initial_horizon(S), cap)
    while True:
        cert = certify_periodicity(grundy(S, h))
        if cert.certified or h >= cap:
            return cert
        h = min(2 * h, cap)


def certified_outcomes(S, seed=None, limit=None) -> tuple[OutcomeSequence, PeriodicityCertificate]:
    cert = outcome_certificate(S, seed, limit)
    return outcomes(S, seed, cert.horizon), cert


def certified_grundy(S, limit=None) -> tuple[GrundySequence, PeriodicityCertificate]:
    cert = grundy_certificate(S, limit)
    return grundy(S, cert.horizon), cert
