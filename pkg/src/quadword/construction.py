"""Anchors, palindromic power blocks and doubled stages whose limit is the word U."""

from __future__ import annotations

import threading
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Any

from .errors import ResourceLimitError, SearchHorizonError
from .words import FiniteWord, WordStream

DEFAULT_STAGE_CAP = 2**26
DEFAULT_SCAN_FACTOR = 64


def select_anchors(
    base: WordStream,
    depth: int,
    growth_factor: int = 2,
    scan_factor: int = DEFAULT_SCAN_FACTOR,
) -> list[FiniteWord]:
    """Shortest-prefix anchors: W_1 is the first letter; W_n is the shortest
    prefix of ``base`` of length >= growth_factor * |W_{n-1}| ending with W_{n-1}."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    anchors = [base.prefix(1)]
    while len(anchors) < depth:
        anchors.append(_next_anchor(base, anchors[-1], growth_factor, scan_factor))
    return anchors


def _next_anchor(base: WordStream, prev: FiniteWord, growth_factor: int, scan_factor: int) -> FiniteWord:
    m = len(prev)
    limit = scan_factor * growth_factor * m
    text = base.prefix(limit).letters
    hit = text.find(prev.letters, growth_factor * m - m)
    if hit == -1:
        raise SearchHorizonError(
            f"no prefix of length <= {limit} ends with the previous anchor of length {m}"
        )
    return FiniteWord(text[: hit + m], base.alphabet)


def exponent(anchors: list[FiniteWord], i: int, j: int) -> int:
    """ceil(|W_i| / |W_j|) for 1 <= j < i <= len(anchors)."""
    if not 1 <= j < i <= len(anchors):
        raise IndexError(f"exponent needs 1 <= j < i <= {len(anchors)}, got i={i}, j={j}")
    return -(-len(anchors[i - 1]) // len(anchors[j - 1]))


def block_layout(n: int, anchors: list[FiniteWord]) -> list[tuple[int, int]]:
    """V_n as (anchor index, repetition) pairs, left to right."""
    if n < 1 or len(anchors) < n:
        raise IndexError(f"block {n} needs {n} anchors, have {len(anchors)}")
    if n == 1:
        return [(1, 1)]
    descent = [(n, 1)] + [(j, exponent(anchors, n, j)) for j in range(n - 1, 0, -1)]
    return descent + descent[-2::-1]


def build_block(n: int, anchors: list[FiniteWord]) -> FiniteWord:
    layout = block_layout(n, anchors)
    letters = b"".join(anchors[j - 1].letters * e for j, e in layout)
    return FiniteWord(letters, anchors[0].alphabet)


@dataclass
class ConstructionParams:
    base: WordStream
    depth: int = 6
    growth_factor: int = 2
    anchor_rule: str = "shortest"
    scan_factor: int = DEFAULT_SCAN_FACTOR
    stage_cap: int = DEFAULT_STAGE_CAP

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.growth_factor < 2:
            raise ValueError("growth_factor must be at least 2")
        if self.anchor_rule != "shortest":
            raise ValueError(f"unknown anchor rule {self.anchor_rule!r}")

    @property
    def descriptor(self) -> dict[str, Any]:
        return {
            "base": self.base.descriptor,
            "depth": self.depth,
            "growth_factor": self.growth_factor,
            "anchor_rule": self.anchor_rule,
        }


@dataclass
class ConstructionTrace:
    anchors: list[FiniteWord]
    exponents: dict[tuple[int, int], int]
    blocks: list[FiniteWord]
    stage_lengths: list[int]
    u_prefix: FiniteWord
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def depth(self) -> int:
        return len(self.anchors)

    @property
    def block_lengths(self) -> list[int]:
        return [len(v) for v in self.blocks]

    def to_json(self) -> dict[str, Any]:
        checks = verify_stage_length_bound(self)
        return {
            "params": self.params,
            "anchors": [str(w) for w in self.anchors],
            "exponents": {f"{i},{j}": a for (i, j), a in sorted(self.exponents.items())},
            "block_lengths": self.block_lengths,
            "stage_lengths": self.stage_lengths,
            "length_bound_ok": all(c.ok for c in checks),
            "length_bound": [c.as_dict() for c in checks],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> ConstructionTrace:
        """Rebuild from a trace document; the U prefix is recomputed from the anchors."""
        alphabet = FiniteWord.parse("".join(data["anchors"])).alphabet
        anchors = [FiniteWord.parse(s, alphabet) for s in data["anchors"]]
        trace = trace_from_anchors(anchors)
        trace.params = dict(data.get("params", {}))
        return trace


def trace_from_anchors(anchors: list[FiniteWord]) -> ConstructionTrace:
    blocks = [build_block(n, anchors) for n in range(1, len(anchors) + 1)]
    stage = anchors[0].letters
    lengths = [len(stage)]
    for n in range(2, len(anchors) + 1):
        stage = (stage + blocks[n - 1].letters) * 2
        lengths.append(len(stage))
    exps = {(i, j): exponent(anchors, i, j) for i in range(2, len(anchors) + 1) for j in range(1, i)}
    return ConstructionTrace(
        anchors=list(anchors),
        exponents=exps,
        blocks=blocks,
        stage_lengths=lengths,
        u_prefix=FiniteWord(stage, anchors[0].alphabet),
    )


def build_trace(params: ConstructionParams) -> ConstructionTrace:
    anchors = select_anchors(params.base, params.depth, params.growth_factor, params.scan_factor)
    trace = trace_from_anchors(anchors)
    trace.params = params.descriptor
    return trace


def build_stage(n: int, trace: ConstructionTrace) -> FiniteWord:
    """U_1 = W_1 and U_n = (U_{n-1} V_n)^2."""
    if not 1 <= n <= trace.depth:
        raise IndexError(f"stage {n} outside 1..{trace.depth}")
    return FiniteWord(trace.u_prefix.letters[: trace.stage_lengths[n - 1]], trace.u_prefix.alphabet)


@dataclass
class StageBound:
    d: int
    length: int
    bound: int
    ratio: float
    ok: bool

    def as_dict(self) -> dict[str, Any]:
        return {"d": self.d, "length": self.length, "bound": self.bound, "ratio": self.ratio, "pass": self.ok}


def verify_stage_length_bound(trace: ConstructionTrace) -> list[StageBound]:
    """|U_d| <= 4 d^2 |W_d| for each stage, with the ratio |U_d| / (d^2 |W_d|)."""
    out = []
    for d, length in enumerate(trace.stage_lengths, start=1):
        w = len(trace.anchors[d - 1])
        bound = 4 * d * d * w
        out.append(StageBound(d, length, bound, length / (d * d * w), length <= bound))
    return out


class UStream(WordStream):
    """The limit word U, with stages extended lazily.

    Stages no longer than ``stage_cap`` letters are materialized; past that,
    letters are located by descending through U_n = (U_{n-1} V_n)^2 and the
    power layout of V_n, reading anchors straight from the base.
    """

    def __init__(self, params: ConstructionParams) -> None:
        self.params = params
        self.base = params.base
        self.alphabet = params.base.alphabet
        self._lock = threading.Lock()
        self._anchors: list[FiniteWord] = []
        self._layouts: list[list[tuple[int, int]]] = []
        self._block_offsets: list[list[int]] = []
        self._block_lengths: list[int] = []
        self._stage_lengths: list[int] = []
        self._stages: list[bytes] = []
        with self._lock:
            self._grow_to_stage(params.depth)

    @property
    def descriptor(self) -> dict[str, Any]:
        return {"kind": "u_construction", **self.params.descriptor}

    def trace(self, depth: int | None = None) -> ConstructionTrace:
        depth = depth or self.params.depth
        with self._lock:
            self._grow_to_stage(depth)
        trace = trace_from_anchors(self._anchors[:depth])
        trace.params = {**self.params.descriptor, "depth": depth}
        return trace

    def anchors(self, depth: int) -> list[FiniteWord]:
        with self._lock:
            self._grow_to_stage(depth)
        return self._anchors[:depth]

    def _grow_to_stage(self, n: int) -> None:
        p = self.params
        while len(self._anchors) < n:
            if not self._anchors:
                self._anchors.append(self.base.prefix(1))
            else:
                self._anchors.append(_next_anchor(self.base, self._anchors[-1], p.growth_factor, p.scan_factor))
            m = len(self._anchors)
            layout = block_layout(m, self._anchors)
            sizes = [len(self._anchors[j - 1]) * e for j, e in layout]
            self._layouts.append(layout)
            self._block_offsets.append([0, *accumulate(sizes)])
            self._block_lengths.append(sum(sizes))
            if m == 1:
                self._stage_lengths.append(len(self._anchors[0]))
            else:
                self._stage_lengths.append(2 * (self._stage_lengths[-1] + self._block_lengths[-1]))
            if len(self._stages) == m - 1 and self._stage_lengths[-1] <= p.stage_cap:
                if m == 1:
                    self._stages.append(self._anchors[0].letters)
                else:
                    block = b"".join(self._anchors[j - 1].letters * e for j, e in layout)
                    self._stages.append((self._stages[-1] + block) * 2)

    def _stage_covering(self, length: int) -> int:
        with self._lock:
            while not self._stage_lengths or self._stage_lengths[-1] < length:
                self._grow_to_stage(len(self._anchors) + 1)
            return bisect_right(self._stage_lengths, length - 1) + 1

    def stage_lengths(self, depth: int) -> list[int]:
        with self._lock:
            self._grow_to_stage(depth)
        return self._stage_lengths[:depth]

    def _block_letter(self, n: int, i: int) -> int:
        offsets = self._block_offsets[n - 1]
        seg = bisect_right(offsets, i) - 1
        j, _ = self._layouts[n - 1][seg]
        anchor = self._anchors[j - 1]
        return anchor.letters[(i - offsets[seg]) % len(anchor)]

    def letter_at(self, i: int) -> int:
        if i < 0:
            raise IndexError("stream positions are nonnegative")
        n = self._stage_covering(i + 1)
        while n > len(self._stages):
            prev = self._stage_lengths[n - 2]
            i %= prev + self._block_lengths[n - 1]
            if i >= prev:
                return self._block_letter(n, i - prev)
            n -= 1
        return self._stages[n - 1][i]

    def _prefix_bytes(self, length: int) -> bytes:
        n = self._stage_covering(length)
        if n <= len(self._stages):
            return self._stages[n - 1]
        if length > self.params.stage_cap:
            raise ResourceLimitError(f"prefix {length} exceeds the stage cap {self.params.stage_cap}")
        return self._stage_prefix(n, length)

    def _stage_prefix(self, n: int, length: int) -> bytes:
        if n <= len(self._stages):
            return self._stages[n - 1][:length]
        prev = self._stage_lengths[n - 2]
        if length <= prev:
            return self._stage_prefix(n - 1, length)
        out = bytearray(self._stage_prefix(n - 1, prev))
        block = None
        while len(out) < length:
            if block is None:
                block = b"".join(self._anchors[j - 1].letters * e for j, e in self._layouts[n - 1])
            out += block
            if len(out) < length:
                out += self._stages[n - 2] if n - 1 <= len(self._stages) else self._stage_prefix(n - 1, prev)
        return bytes(out[:length])


def u_stream(params: ConstructionParams) -> UStream:
    return UStream(params)
