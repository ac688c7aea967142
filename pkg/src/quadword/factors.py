"""Suffix-automaton factor index, complexity profiles and periodicity checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import HorizonError, ResourceLimitError
from .words import FiniteWord, WordStream, max_prefix


class FactorIndex:
    """Suffix automaton of a finite word.

    Every state carries the longest length it represents, its suffix link,
    the end position of the first occurrence of its strings, and the number
    of end positions (occurrence count) of its strings.
    """

    def __init__(self, word: FiniteWord) -> None:
        if len(word) < 1:
            raise ValueError("cannot index the empty word")
        cap = max_prefix()
        if len(word) > cap:
            raise ResourceLimitError(f"word of length {len(word)} exceeds cap {cap}")
        self.word = word
        self.alphabet = word.alphabet
        self.source_length = len(word)
        k = word.alphabet.size
        self._k = k

        length = [0]
        link = [-1]
        first = [-1]
        own = [0]
        nxt = [-1] * k
        last = 0
        for pos, c in enumerate(word.letters):
            cur = len(length)
            length.append(length[last] + 1)
            link.append(0)
            first.append(pos)
            own.append(1)
            nxt.extend([-1] * k)
            p = last
            while p != -1 and nxt[p * k + c] == -1:
                nxt[p * k + c] = cur
                p = link[p]
            if p != -1:
                q = nxt[p * k + c]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = len(length)
                    length.append(length[p] + 1)
                    link.append(link[q])
                    first.append(first[q])
                    own.append(0)
                    nxt.extend(nxt[q * k : q * k + k])
                    while p != -1 and nxt[p * k + c] == q:
                        nxt[p * k + c] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur

        # endpos sizes: push counts up the suffix-link tree, longest states first
        order = np.argsort(np.asarray(length, dtype=np.int64), kind="stable")[::-1].tolist()
        cnt = own
        for v in order:
            parent = link[v]
            if parent >= 0:
                cnt[parent] += cnt[v]

        self._next = nxt
        self.length = np.asarray(length, dtype=np.int64)
        self.link = np.asarray(link, dtype=np.int64)
        self.first_end = np.asarray(first, dtype=np.int64)
        self.count = np.asarray(cnt, dtype=np.int64)
        self._min_length = np.where(self.link >= 0, self.length[np.maximum(self.link, 0)] + 1, 0)

    @property
    def num_states(self) -> int:
        return len(self.length)

    def _walk(self, letters: bytes) -> int:
        k, nxt = self._k, self._next
        state = 0
        for c in letters:
            if c >= k:
                return -1
            state = nxt[state * k + c]
            if state == -1:
                return -1
        return state

    def __contains__(self, w: FiniteWord) -> bool:
        return self._walk(w.letters) != -1

    def occurrences(self, w: FiniteWord) -> int:
        """Overlapping occurrence count of ``w`` in the indexed word."""
        if len(w) == 0:
            return self.source_length + 1
        state = self._walk(w.letters)
        return 0 if state == -1 else int(self.count[state])

    def complexity_counts(self, within: int | None = None) -> np.ndarray:
        """Array ``c`` with ``c[n]`` the number of distinct length-n factors.

        With ``within`` set, only factors occurring in the first ``within``
        letters are counted (read off first-occurrence end positions).
        """
        lo, hi = self._min_length[1:], self.length[1:]
        if within is not None:
            keep = self.first_end[1:] < within
            lo, hi = lo[keep], hi[keep]
        size = self.source_length + 2
        diff = np.bincount(lo, minlength=size) - np.bincount(hi + 1, minlength=size)
        counts = np.cumsum(diff)[: self.source_length + 1]
        counts[0] = 1
        return counts

    def complexity(self, n: int) -> int:
        if not 1 <= n <= self.source_length:
            raise HorizonError(f"factor length {n} outside 1..{self.source_length}")
        hit = (self._min_length[1:] <= n) & (self.length[1:] >= n)
        return int(np.count_nonzero(hit))

    def factors(self, n: int) -> list[FiniteWord]:
        """All distinct factors of length ``n``; meant for small ``n``."""
        letters = self.word.letters
        hit = np.nonzero((self._min_length <= n) & (self.length >= n))[0]
        hit = hit[hit > 0] if n > 0 else hit[:1]
        out = []
        for v in hit.tolist():
            end = int(self.first_end[v])
            out.append(FiniteWord(letters[end - n + 1 : end + 1], self.alphabet))
        return sorted(out)


def build_index(word: FiniteWord) -> FactorIndex:
    return FactorIndex(word)


def complexity(index: FactorIndex, n: int) -> int:
    return index.complexity(n)


def occurrences(index: FactorIndex, w: FiniteWord) -> int:
    return index.occurrences(w)


@dataclass
class ComplexityProfile:
    """Distinct-factor counts ``p[n]`` for ``0 <= n <= n_trust``."""

    p: list[int]
    n_trust: int
    source: dict[str, Any] = field(default_factory=dict)
    alphabet_size: int = 2

    def __call__(self, n: int) -> int:
        if not 0 <= n <= self.n_trust:
            raise HorizonError(f"n={n} beyond trusted horizon {self.n_trust}")
        return self.p[n]


def trusted_profile(
    word: FiniteWord,
    n_max: int | None = None,
    source: dict[str, Any] | None = None,
    index: FactorIndex | None = None,
) -> ComplexityProfile:
    """Complexity profile of ``word`` clamped to where it is stable under halving.

    ``n_trust`` is the largest N such that the counts of the whole word and
    of its first ceil(L/2) letters agree for every n <= N (also capped by
    ``n_max`` when given).
    """
    index = index or FactorIndex(word)
    full = index.complexity_counts()
    half_len = -(-len(word) // 2)
    half = index.complexity_counts(within=half_len)
    limit = half_len if n_max is None else min(half_len, n_max)
    differ = np.nonzero(full[1 : limit + 1] != half[1 : limit + 1])[0]
    n_trust = int(differ[0]) if len(differ) else limit
    return ComplexityProfile(
        p=[int(x) for x in full[: n_trust + 1]],
        n_trust=n_trust,
        source=dict(source or {"length": len(word)}),
        alphabet_size=word.alphabet.size,
    )


def border_array(letters: bytes) -> list[int]:
    """Failure function: ``b[i]`` is the longest proper border of ``letters[:i+1]``."""
    b = [0] * len(letters)
    k = 0
    for i in range(1, len(letters)):
        while k and letters[i] != letters[k]:
            k = b[k - 1]
        if letters[i] == letters[k]:
            k += 1
        b[i] = k
    return b


def minimal_period(w: FiniteWord) -> int:
    if len(w) < 1:
        raise ValueError("minimal period of the empty word is undefined")
    return len(w) - border_array(w.letters)[-1]


@dataclass
class RecurrenceReport:
    ok: bool
    n: int
    k_min: int
    factors_checked: int
    worst_factor: str
    worst_count: int
    label: str = "at horizon"


def recurrence_check(
    stream: WordStream,
    length: int,
    n: int,
    k_min: int,
    index: FactorIndex | None = None,
) -> RecurrenceReport:
    """Every length-n factor of prefix(L/2) must occur >= k_min times in prefix(L)."""
    if length < 4 * n:
        raise HorizonError(f"prefix {length} too short for factor length {n} (need {4 * n})")
    if index is None or index.source_length != length:
        index = FactorIndex(stream.prefix(length))
    return _recurrence_from_index(index, length // 2, n, k_min)


def _recurrence_from_index(index: FactorIndex, within: int, n: int, k_min: int) -> RecurrenceReport:
    # a length-n factor lies in prefix(within) iff its first occurrence ends before `within`
    hit = (index._min_length <= n) & (index.length >= n) & (index.first_end < within)
    hit[0] = False
    states = np.nonzero(hit)[0]
    counts = index.count[states]
    worst = int(np.argmin(counts))
    v = int(states[worst])
    end = int(index.first_end[v])
    word = FiniteWord(index.word.letters[end - n + 1 : end + 1], index.alphabet)
    worst_count = int(counts[worst])
    return RecurrenceReport(
        ok=worst_count >= k_min,
        n=n,
        k_min=k_min,
        factors_checked=len(states),
        worst_factor=str(word),
        worst_count=worst_count,
    )


def recurrence_sweep(index: FactorIndex, within: int, n_max: int, k_min: int) -> list[RecurrenceReport]:
    """Recurrence reports for every factor length 1..n_max against one index."""
    return [_recurrence_from_index(index, within, n, k_min) for n in range(1, n_max + 1)]


class Periodicity(enum.Enum):
    ULTIMATELY_PERIODIC = "ultimately_periodic"
    APERIODIC_AT_HORIZON = "aperiodic_at_horizon"


@dataclass
class GapClassification:
    kind: Periodicity
    witness: int | None
    horizon: int


def bergman_gap_check(profile: ComplexityProfile) -> GapClassification:
    """A word with p(n) <= n for some n is ultimately periodic."""
    if profile.n_trust < 1:
        raise HorizonError("profile is not trusted at any n >= 1")
    for n in range(1, profile.n_trust + 1):
        if profile.p[n] <= n:
            return GapClassification(Periodicity.ULTIMATELY_PERIODIC, n, profile.n_trust)
    return GapClassification(Periodicity.APERIODIC_AT_HORIZON, None, profile.n_trust)
