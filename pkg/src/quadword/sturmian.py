"""Sturmian streams: the Fibonacci fixed point and exact mechanical words."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any

from .errors import HorizonError, RationalSlopeError
from .factors import trusted_profile
from .words import BINARY, CachedStream, WordStream


class FibonacciStream(CachedStream):
    """Fixed point of a -> ab, b -> a."""

    @property
    def descriptor(self) -> dict[str, Any]:
        return {"kind": "fibonacci"}

    def _extend(self, current: bytes, length: int) -> bytes:
        # Successive fixed-point prefixes obey s(k+1) = s(k) s(k-1).
        prev, cur = b"\x00", b"\x00\x01"
        while len(cur) < length:
            prev, cur = cur, cur + prev
        return cur


def fibonacci_stream() -> FibonacciStream:
    return FibonacciStream()


@dataclass(frozen=True)
class SlopeSpec:
    """Continued-fraction expansion ``[0; a1, a2, ..., ak]`` of a slope in (0, 1)."""

    partial_quotients: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "partial_quotients", tuple(int(a) for a in self.partial_quotients))
        if any(a < 1 for a in self.partial_quotients):
            raise ValueError("partial quotients must be positive")
        if self.depth < 2:
            raise RationalSlopeError(
                f"slope expansion of depth {self.depth} is a rational number; need depth >= 2"
            )
        p, q = self.convergent.numerator, self.convergent.denominator
        assert 0 < p < q and gcd(p, q) == 1

    @property
    def depth(self) -> int:
        return len(self.partial_quotients)

    def convergents(self) -> list[Fraction]:
        out = []
        p_prev, q_prev, p, q = 1, 0, 0, 1
        for a in self.partial_quotients:
            p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
            out.append(Fraction(p, q))
        return out

    @property
    def convergent(self) -> Fraction:
        return self.convergents()[-1]

    @property
    def horizon(self) -> int:
        """Number of leading letters on which every slope between the last two convergents agrees.

        With lo < hi Farey neighbours, the first m > 0 where floor(m*lo) and
        floor(m*hi) differ is the denominator of hi, so positions n with
        n + 1 < denominator(hi) are fixed.
        """
        lo, hi = sorted(self.convergents()[-2:])
        return max(0, hi.denominator - 1)


class MechanicalStream(WordStream):
    """Lower mechanical word of intercept 0: letter n is b iff floor((n+1)s) - floor(ns) = 1."""

    def __init__(self, slope: SlopeSpec) -> None:
        self.slope = slope
        conv = slope.convergent
        self._p, self._q = conv.numerator, conv.denominator
        self.horizon = slope.horizon
        if self.horizon < 1:
            raise RationalSlopeError(
                f"expansion {list(slope.partial_quotients)} fixes no letters of an irrational slope"
            )
        self.alphabet = BINARY

    @property
    def descriptor(self) -> dict[str, Any]:
        return {"kind": "mechanical", "partial_quotients": list(self.slope.partial_quotients)}

    def letter_at(self, i: int) -> int:
        if i < 0:
            raise IndexError("stream positions are nonnegative")
        if i >= self.horizon:
            raise HorizonError(
                f"position {i} beyond agreement horizon {self.horizon} of depth {self.slope.depth}"
            )
        p, q = self._p, self._q
        return (i + 1) * p // q - i * p // q

    def _prefix_bytes(self, length: int) -> bytes:
        if length > self.horizon:
            raise HorizonError(
                f"prefix {length} beyond agreement horizon {self.horizon} of depth {self.slope.depth}"
            )
        p, q = self._p, self._q
        floors = [n * p // q for n in range(length + 1)]
        return bytes(floors[n + 1] - floors[n] for n in range(length))


def mechanical_stream(slope: SlopeSpec | list[int] | tuple[int, ...]) -> MechanicalStream:
    if not isinstance(slope, SlopeSpec):
        slope = SlopeSpec(tuple(slope))
    return MechanicalStream(slope)


@dataclass
class SturmianReport:
    ok: bool
    n_max: int
    n_trust: int
    first_failure: int | None
    profile: dict[int, int]


def verify_sturmian(stream: WordStream, length: int, n_max: int) -> SturmianReport:
    """Check p(n) = n + 1 for 1 <= n <= n_max on a prefix of ``length`` letters."""
    if length < 3 * n_max:
        raise HorizonError(f"prefix {length} too short to certify n_max={n_max} (need {3 * n_max})")
    word = stream.prefix(length)
    profile = trusted_profile(word, n_max)
    failure = next((n for n in range(1, profile.n_trust + 1) if profile.p[n] != n + 1), None)
    if failure is None and profile.n_trust < n_max:
        raise HorizonError(f"complexity only stable to n={profile.n_trust} < {n_max}")
    return SturmianReport(
        ok=failure is None,
        n_max=n_max,
        n_trust=profile.n_trust,
        first_failure=failure,
        profile={n: profile.p[n] for n in range(1, profile.n_trust + 1)},
    )


__all__ = [
    "FibonacciStream",
    "MechanicalStream",
    "SlopeSpec",
    "SturmianReport",
    "fibonacci_stream",
    "mechanical_stream",
    "verify_sturmian",
]
