"""Alphabets, finite words and right-infinite word streams.

Letters are stored as small integer indices packed into ``bytes``; the
printable symbols live only on the :class:`Alphabet`.  Public positions in
:func:`subword` are 1-based and inclusive, everything else is 0-based.
"""

from __future__ import annotations

import os
import string
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ResourceLimitError

DEFAULT_MAX_PREFIX = 10**8


def max_prefix() -> int:
    """Global cap on materialized prefix lengths (``QUADWORD_MAX_PREFIX`` overrides)."""
    raw = os.environ.get("QUADWORD_MAX_PREFIX")
    if raw is None:
        return DEFAULT_MAX_PREFIX
    value = int(raw)
    if value < 1:
        raise ValueError("QUADWORD_MAX_PREFIX must be positive")
    return value


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 2 <= len(self.letters) <= 26:
            raise ValueError(f"alphabet size must be in 2..26, got {len(self.letters)}")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("alphabet symbols must be distinct")

    @classmethod
    def from_string(cls, symbols: str) -> Alphabet:
        return cls(tuple(symbols))

    @classmethod
    def first(cls, size: int) -> Alphabet:
        if size > 26:
            raise ValueError(f"alphabet size must be in 2..26, got {size}")
        return cls(tuple(string.ascii_lowercase[:size]))

    @property
    def size(self) -> int:
        return len(self.letters)

    def index(self, symbol: str) -> int:
        try:
            return self.letters.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {''.join(self.letters)!r}") from None

    def __str__(self) -> str:
        return "".join(self.letters)


BINARY = Alphabet(("a", "b"))


@dataclass(frozen=True)
class FiniteWord:
    """An immutable finite word; ``letters`` holds alphabet indices."""

    letters: bytes
    alphabet: Alphabet = BINARY

    def __post_init__(self) -> None:
        if not isinstance(self.letters, bytes):
            object.__setattr__(self, "letters", bytes(self.letters))
        if self.letters and max(self.letters) >= self.alphabet.size:
            raise ValueError("letter index outside the alphabet")

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> FiniteWord:
        """Parse symbols; without an alphabet, use 'a'.. up to the largest symbol seen (at least 'ab')."""
        if alphabet is None:
            top = max((string.ascii_lowercase.index(c) for c in text), default=0)
            alphabet = Alphabet.first(max(2, top + 1))
        table = {s: i for i, s in enumerate(alphabet.letters)}
        try:
            return cls(bytes(table[c] for c in text), alphabet)
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} not in alphabet {alphabet}") from None

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        symbols = self.alphabet.letters
        return "".join(symbols[i] for i in self.letters)

    def __repr__(self) -> str:
        return f"FiniteWord({str(self)!r})"

    def __add__(self, other: FiniteWord) -> FiniteWord:
        if not isinstance(other, FiniteWord):
            return NotImplemented
        return FiniteWord(self.letters + other.letters, _common(self.alphabet, other.alphabet))

    def __lt__(self, other: FiniteWord) -> bool:
        return self.letters < other.letters

    def is_factor_of(self, other: FiniteWord) -> bool:
        return self.letters in other.letters

    def endswith(self, other: FiniteWord) -> bool:
        return self.letters.endswith(other.letters)

    def startswith(self, other: FiniteWord) -> bool:
        return self.letters.startswith(other.letters)


def _common(a: Alphabet, b: Alphabet) -> Alphabet:
    if a == b:
        return a
    # A shorter alphabet that is a prefix of the other embeds into it.
    if a.letters[: b.size] == b.letters:
        return a
    if b.letters[: a.size] == a.letters:
        return b
    raise ValueError(f"incompatible alphabets {a} and {b}")


EMPTY = FiniteWord(b"")


def power(w: FiniteWord, k: int) -> FiniteWord:
    if k < 0:
        raise ValueError("power exponent must be nonnegative")
    return FiniteWord(w.letters * k, w.alphabet)


def subword(w: FiniteWord, a: int, b: int) -> FiniteWord:
    """Letters ``a`` through ``b`` of ``w``, 1-based and inclusive."""
    if not 1 <= a <= b <= len(w):
        raise IndexError(f"subword({a}, {b}) out of range for length {len(w)}")
    return FiniteWord(w.letters[a - 1 : b], w.alphabet)


class WordStream(ABC):
    """A deterministic right-infinite word with random access."""

    alphabet: Alphabet = BINARY

    @property
    @abstractmethod
    def descriptor(self) -> dict[str, Any]:
        """Parameters sufficient to rebuild the stream."""

    @abstractmethod
    def _prefix_bytes(self, length: int) -> bytes:
        """At least ``length`` leading letters."""

    def letter_at(self, i: int) -> int:
        if i < 0:
            raise IndexError("stream positions are nonnegative")
        return self._prefix_bytes(i + 1)[i]

    def symbol_at(self, i: int) -> str:
        return self.alphabet.letters[self.letter_at(i)]

    def prefix(self, length: int) -> FiniteWord:
        if length < 1:
            raise ValueError("prefix length must be at least 1")
        cap = max_prefix()
        if length > cap:
            raise ResourceLimitError(f"prefix length {length} exceeds cap {cap}")
        return FiniteWord(self._prefix_bytes(length)[:length], self.alphabet)


class CachedStream(WordStream):
    """A stream that materializes its prefix on demand and memoizes it."""

    def __init__(self) -> None:
        self._cache = b""
        self._lock = threading.Lock()

    @abstractmethod
    def _extend(self, current: bytes, length: int) -> bytes:
        """Return a prefix of at least ``length`` letters extending ``current``."""

    def _prefix_bytes(self, length: int) -> bytes:
        cache = self._cache
        if len(cache) >= length:
            return cache
        with self._lock:
            if len(self._cache) < length:
                self._cache = self._extend(self._cache, length)
            return self._cache


class UltimatelyPeriodicStream(WordStream):
    """The stream ``head · period · period · ...``."""

    def __init__(self, head: FiniteWord, period: FiniteWord) -> None:
        if len(period) == 0:
            raise ValueError("period must be nonempty")
        self.alphabet = _common(head.alphabet, period.alphabet)
        self.head = head.letters
        self.period = period.letters

    @property
    def descriptor(self) -> dict[str, Any]:
        symbols = self.alphabet.letters
        return {
            "kind": "ultimately_periodic",
            "head": "".join(symbols[i] for i in self.head),
            "period": "".join(symbols[i] for i in self.period),
        }

    def letter_at(self, i: int) -> int:
        if i < 0:
            raise IndexError("stream positions are nonnegative")
        if i < len(self.head):
            return self.head[i]
        return self.period[(i - len(self.head)) % len(self.period)]

    def _prefix_bytes(self, length: int) -> bytes:
        tail = max(0, length - len(self.head))
        reps = -(-tail // len(self.period))
        return self.head + self.period * reps


def periodic_stream(period: str | FiniteWord) -> UltimatelyPeriodicStream:
    if isinstance(period, str):
        period = FiniteWord.parse(period)
    return UltimatelyPeriodicStream(FiniteWord(b"", period.alphabet), period)


def constant_stream(symbol: str = "a") -> UltimatelyPeriodicStream:
    return periodic_stream(symbol)


class FiniteSourceStream(WordStream):
    """A stream backed by a finite word read from disk; only its prefix is addressable."""

    def __init__(self, word: FiniteWord, source: str = "<memory>") -> None:
        self.word = word
        self.alphabet = word.alphabet
        self.source = source

    @property
    def descriptor(self) -> dict[str, Any]:
        return {"kind": "file", "source": self.source, "length": len(self.word)}

    def _prefix_bytes(self, length: int) -> bytes:
        if length > len(self.word):
            raise ResourceLimitError(
                f"requested {length} letters but {self.source} holds only {len(self.word)}"
            )
        return self.word.letters


def read_word(path: str | Path, alphabet: Alphabet | None = None) -> FiniteWord:
    text = Path(path).read_text(encoding="utf-8").strip()
    return FiniteWord.parse(text, alphabet)


def write_word(path: str | Path, w: FiniteWord) -> None:
    Path(path).write_text(str(w) + "\n", encoding="utf-8")
