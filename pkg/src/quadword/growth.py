"""Growth functions of word algebras and transfer-matrix counting for monomial presentations."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import HorizonError, QuadwordError
from .factors import ComplexityProfile
from .words import Alphabet, FiniteWord


class InsufficientWindowError(QuadwordError, ValueError):
    pass


def growth_function(profile: ComplexityProfile, n: int) -> int:
    """dim(V^n) = 1 + p(1) + ... + p(n) for V spanned by 1 and the letters."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > profile.n_trust:
        raise HorizonError(f"n={n} beyond trusted horizon {profile.n_trust}")
    return 1 + sum(profile.p[1 : n + 1])


def growth_series(profile: ComplexityProfile) -> list[int]:
    """``dims[n]`` for 0 <= n <= n_trust."""
    dims = [1]
    for n in range(1, profile.n_trust + 1):
        dims.append(dims[-1] + profile.p[n])
    return dims


def estimate_gk(dims: list[int], n_lo: int, n_hi: int) -> float:
    """Least-squares slope of log dim(V^n) against log n over ``n_lo..n_hi``."""
    if n_lo < 4 or n_hi < 4 * n_lo:
        raise InsufficientWindowError(f"window [{n_lo}, {n_hi}] needs n_hi >= 4 n_lo >= 16")
    if n_hi >= len(dims):
        raise HorizonError(f"dims known only to n={len(dims) - 1}")
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    y = np.log(np.asarray(dims[n_lo : n_hi + 1], dtype=float))
    slope, _ = np.polyfit(np.log(n), y, 1)
    return float(slope)


def estimate_growth_constant(dims: list[int], n_hi: int | None = None) -> float:
    """max dim(V^n)/n^2 over the last tenth of ``1..n_hi`` (finite limsup proxy)."""
    n_hi = len(dims) - 1 if n_hi is None else n_hi
    if n_hi < 100:
        raise InsufficientWindowError(f"growth constant needs dims to n >= 100, have {n_hi}")
    if n_hi >= len(dims):
        raise HorizonError(f"dims known only to n={len(dims) - 1}")
    lo = math.ceil(0.9 * n_hi)
    return max(dims[n] / (n * n) for n in range(lo, n_hi + 1))


def prime_budget(gc_estimate: float) -> int:
    """Upper bound floor(2 C) on co-GK-1 primes of an algebra with growth constant C."""
    return math.floor(2 * gc_estimate)


@dataclass
class BoundCheck:
    n: int
    bound: float
    actual: int
    ok: bool
    extra: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {"n": self.n, "bound": self.bound, "actual": self.actual, "pass": self.ok, **self.extra}


@dataclass
class GrowthReport:
    dims: list[int]
    gk_estimate: float | None
    gc_estimate: float | None
    c_lower: float
    c_upper: float
    gk_window: tuple[int, int] | None = None
    bound_checks: list[BoundCheck] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "dims": {str(n): d for n, d in enumerate(self.dims)},
            "gk_estimate": self.gk_estimate,
            "gk_window": list(self.gk_window) if self.gk_window else None,
            "gc_estimate": self.gc_estimate,
            "c_lower": self.c_lower,
            "c_upper": self.c_upper,
            "bound_checks": [c.as_dict() for c in self.bound_checks],
        }


def growth_report(profile: ComplexityProfile, n_max: int | None = None) -> GrowthReport:
    dims = growth_series(profile)
    if n_max is not None:
        if n_max > profile.n_trust:
            raise HorizonError(f"n_max={n_max} beyond trusted horizon {profile.n_trust}")
        dims = dims[: n_max + 1]
    top = len(dims) - 1
    window = (max(4, top // 8), top) if top >= 32 else None
    gk = estimate_gk(dims, *window) if window else None
    gc = estimate_growth_constant(dims) if top >= 100 else None
    ratios = [dims[n] / (n * n) for n in range(max(1, top // 2), top + 1)] or [float("nan")]
    return GrowthReport(dims, gk, gc, min(ratios), max(ratios), window)


def u_complexity_bound(n: int) -> float:
    """100 (n+1) (log2 n)^2, the subword bound for the word U (n >= 2)."""
    return 100 * (n + 1) * math.log2(n) ** 2


def stage_index(anchor_lengths: list[int], n: int) -> int:
    """Largest d with |W_d| <= n."""
    if anchor_lengths[-1] <= n:
        raise HorizonError(f"anchors end at length {anchor_lengths[-1]} <= {n}; extend the trace")
    return sum(1 for length in anchor_lengths if length <= n)


def check_u_bounds(profile: ComplexityProfile, anchor_lengths: list[int], n_max: int) -> list[BoundCheck]:
    """f(n) <= 100 (n+1) (log2 n)^2 and d(n) <= floor(log2 n) + 1 for 2 <= n <= n_max.

    Tightness against the intermediate counts 12 d^2 (n+1) and 2(n+1) + 16 d^2 n
    is reported but not asserted.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if n_max > profile.n_trust:
        raise HorizonError(f"n_max={n_max} beyond trusted horizon {profile.n_trust}")
    out = []
    for n in range(2, n_max + 1):
        f = profile.p[n]
        bound = u_complexity_bound(n)
        d = stage_index(anchor_lengths, n)
        d_ok = 1 <= d <= math.floor(math.log2(n)) + 1
        out.append(
            BoundCheck(
                n,
                bound,
                f,
                f <= bound and d_ok,
                {
                    "d": d,
                    "d_ok": d_ok,
                    "ratio": f / bound,
                    "ratio_12d2": f / (12 * d * d * (n + 1)),
                    "ratio_16d2": f / (2 * (n + 1) + 16 * d * d * n),
                },
            )
        )
    return out


def check_growth_sandwich(profile: ComplexityProfile, n_max: int) -> list[BoundCheck]:
    """C(n+1, 2) <= dim(V^n) <= 1 + f(1) + sum_{j=2..n} 100 (j+1)(log2 j)^2."""
    if n_max > profile.n_trust:
        raise HorizonError(f"n_max={n_max} beyond trusted horizon {profile.n_trust}")
    dims = growth_series(profile)
    upper = 1.0 + profile.p[1]
    out = []
    for n in range(1, n_max + 1):
        if n >= 2:
            upper += u_complexity_bound(n)
        lower = math.comb(n + 1, 2)
        out.append(
            BoundCheck(n, upper, dims[n], lower <= dims[n] <= upper, {"lower": lower})
        )
    return out


@dataclass
class ForbiddenPresentation:
    """Monomial algebra on ``alphabet`` with the given forbidden words as relations.

    The forbidden set is reduced at construction so that no word is a factor
    of another.
    """

    alphabet: Alphabet
    forbidden: frozenset[FiniteWord]

    def __post_init__(self) -> None:
        words = {FiniteWord(w.letters, self.alphabet) for w in self.forbidden}
        if any(len(w) == 0 for w in words):
            raise ValueError("the empty word cannot be forbidden")
        keep = [w for w in words if not any(v != w and v.letters in w.letters for v in words)]
        self.forbidden = frozenset(keep)

    @classmethod
    def parse(cls, alphabet: str, forbidden: list[str] | str) -> ForbiddenPresentation:
        if isinstance(forbidden, str):
            forbidden = [s for s in forbidden.split(",") if s]
        alpha = Alphabet.from_string(alphabet)
        return cls(alpha, frozenset(FiniteWord.parse(s, alpha) for s in forbidden))


class AvoidingAutomaton:
    """Aho-Corasick automaton of the forbidden words with dead states removed.

    Live states are the trie nodes none of whose suffixes is forbidden; the
    transition matrix counts words avoiding every forbidden factor.
    """

    def __init__(self, pres: ForbiddenPresentation) -> None:
        k = pres.alphabet.size
        goto: list[list[int]] = [[-1] * k]
        dead = [False]
        for w in sorted(pres.forbidden, key=lambda w: w.letters):
            s = 0
            for c in w.letters:
                if goto[s][c] == -1:
                    goto[s][c] = len(goto)
                    goto.append([-1] * k)
                    dead.append(False)
                s = goto[s][c]
            dead[s] = True
        fail = [0] * len(goto)
        queue = deque()
        for c in range(k):
            t = goto[0][c]
            if t == -1:
                goto[0][c] = 0
            else:
                queue.append(t)
        while queue:
            s = queue.popleft()
            dead[s] = dead[s] or dead[fail[s]]
            for c in range(k):
                t = goto[s][c]
                if t == -1:
                    goto[s][c] = goto[fail[s]][c]
                else:
                    fail[t] = goto[fail[s]][c]
                    queue.append(t)
        live = [s for s in range(len(goto)) if not dead[s]]
        rank = {s: i for i, s in enumerate(live)}
        self.size = len(live)
        self.edges = [[rank[goto[s][c]] for c in range(k) if not dead[goto[s][c]]] for s in live]

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.size, self.size), dtype=object)
        m[:, :] = 0
        for s, targets in enumerate(self.edges):
            for t in targets:
                m[s, t] += 1
        return m

    def counts(self, n_max: int) -> list[int]:
        vec = [0] * self.size
        vec[0] = 1
        out = [1]
        for _ in range(n_max):
            new = [0] * self.size
            for s, v in enumerate(vec):
                if v:
                    for t in self.edges[s]:
                        new[t] += v
            vec = new
            out.append(sum(vec))
        return out

    def structural_degree(self) -> int | None:
        """Exact polynomial degree from the cycle structure; None if growth is exponential.

        Returns -1 for finitely many words.
        """
        comp = _strongly_connected(self.edges)
        ncomp = max(comp) + 1
        internal = [0] * ncomp
        members = [0] * ncomp
        for s, targets in enumerate(self.edges):
            members[comp[s]] += 1
            for t in targets:
                if comp[t] == comp[s]:
                    internal[comp[s]] += 1
        if any(internal[c] > members[c] for c in range(ncomp)):
            return None
        cyclic = [1 if internal[c] else 0 for c in range(ncomp)]
        dag: list[set[int]] = [set() for _ in range(ncomp)]
        for s, targets in enumerate(self.edges):
            for t in targets:
                if comp[t] != comp[s]:
                    dag[comp[s]].add(comp[t])
        # Tarjan numbers components in reverse topological order.
        best = [0] * ncomp
        for c in range(ncomp):
            best[c] = cyclic[c] + max((best[t] for t in dag[c]), default=0)
        return best[comp[0]] - 1


def _strongly_connected(edges: list[list[int]]) -> list[int]:
    n = len(edges)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            while i < len(edges[v]):
                w = edges[v][i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comp


def transfer_count(pres: ForbiddenPresentation, n: int) -> int:
    """Number of length-n words avoiding every forbidden factor (exact matrix power)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    auto = AvoidingAutomaton(pres)
    result = np.zeros((1, auto.size), dtype=object)
    result[:, :] = 0
    result[0, 0] = 1
    base = auto.matrix()
    while n:
        if n & 1:
            result = result.dot(base)
        base = base.dot(base)
        n >>= 1
    return int(sum(result[0]))


def transfer_counts(pres: ForbiddenPresentation, n_max: int) -> list[int]:
    return AvoidingAutomaton(pres).counts(n_max)


class GrowthKind(enum.Enum):
    EXPONENTIAL = "exponential"
    POLYNOMIAL = "polynomial"
    FINITE = "finite"
    INCONCLUSIVE = "inconclusive"


@dataclass
class GrowthClassification:
    kind: GrowthKind
    degree: int | None = None
    rate: float | None = None
    fitted_degree: float | None = None
    structural_degree: int | None = None


RATIO_TOLERANCE = 1e-6


def classify_growth(pres: ForbiddenPresentation, horizon: int | None = None) -> GrowthClassification:
    """Polynomial/exponential classification from the count ratios at ``horizon``.

    Ratios stabilized (last ten within 1e-6) above 1 mean exponential growth;
    otherwise a log-log degree fit must agree with the degree read off the
    automaton's cycle structure.
    """
    auto = AvoidingAutomaton(pres)
    if horizon is None:
        horizon = max(64, 2 * auto.size)
    if horizon < 2 * auto.size or horizon < 12:
        raise InsufficientWindowError(f"horizon {horizon} below 2 x {auto.size} states (and 12)")
    counts = auto.counts(horizon)
    structural = auto.structural_degree()
    if counts[-1] == 0:
        return GrowthClassification(GrowthKind.FINITE, structural_degree=structural)
    ratios = [counts[n] / counts[n - 1] for n in range(horizon - 9, horizon + 1)]
    if max(ratios) - min(ratios) <= RATIO_TOLERANCE:
        rate = ratios[-1]
        if rate > 1 + RATIO_TOLERANCE:
            return GrowthClassification(GrowthKind.EXPONENTIAL, rate=rate, structural_degree=structural)
        return GrowthClassification(GrowthKind.POLYNOMIAL, degree=0, rate=rate, fitted_degree=0.0, structural_degree=structural)
    lo = horizon // 2
    ns = np.arange(lo, horizon + 1, dtype=float)
    fitted = float(np.polyfit(np.log(ns), np.log(np.asarray(counts[lo:], dtype=float)), 1)[0])
    if structural is not None and abs(fitted - structural) < 0.25:
        return GrowthClassification(GrowthKind.POLYNOMIAL, degree=structural, fitted_degree=fitted, structural_degree=structural)
    return GrowthClassification(GrowthKind.INCONCLUSIVE, fitted_degree=fitted, structural_degree=structural)
