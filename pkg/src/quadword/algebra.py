"""Exact arithmetic in word algebras A_W, periodic quotients and co-GK-1 prime candidates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Iterator, Mapping, Union

from .construction import ConstructionTrace
from .errors import HorizonError, QuadwordError
from .factors import FactorIndex, minimal_period, trusted_profile
from .words import EMPTY, FiniteWord, power

Scalar = Union[int, Fraction]


class AlgebraElement(Mapping[FiniteWord, Fraction]):
    """Finite linear combination of basis words with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[FiniteWord, Scalar] | Iterable[tuple[FiniteWord, Scalar]] = ()) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[FiniteWord, Fraction] = {}
        for w, c in items:
            acc[w] = acc.get(w, Fraction(0)) + Fraction(c)
        self._terms = {w: c for w, c in acc.items() if c != 0}
        self._hash: int | None = None

    @classmethod
    def word(cls, w: FiniteWord | str, coeff: Scalar = 1) -> AlgebraElement:
        if isinstance(w, str):
            w = FiniteWord.parse(w)
        return cls({w: coeff})

    @classmethod
    def one(cls) -> AlgebraElement:
        return cls({EMPTY: 1})

    @classmethod
    def zero(cls) -> AlgebraElement:
        return cls()

    def __getitem__(self, w: FiniteWord) -> Fraction:
        return self._terms[w]

    def __iter__(self) -> Iterator[FiniteWord]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgebraElement):
            return _same(self._terms, other._terms)
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((w.letters, c) for w, c in self._terms.items()))
        return self._hash

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement([*self._terms.items(), *other._terms.items()])

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scale(self, c: Scalar) -> AlgebraElement:
        return AlgebraElement({w: c * v for w, v in self._terms.items()})

    def __rmul__(self, c: Scalar) -> AlgebraElement:
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w in sorted(self._terms, key=lambda w: (len(w), w.letters)):
            c = self._terms[w]
            name = str(w) or "1"
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)


def _same(a: dict[FiniteWord, Fraction], b: dict[FiniteWord, Fraction]) -> bool:
    # Keys compare by letters only; the empty word and alphabet variants must not split terms.
    norm = lambda d: {w.letters: c for w, c in d.items()}  # noqa: E731
    return norm(a) == norm(b)


class WordAlgebra:
    """A_W for the factor set of an indexed word, valid up to ``horizon``.

    A product of basis words is their concatenation when that is a factor and
    zero otherwise; products longer than ``horizon`` are refused.
    """

    def __init__(self, index: FactorIndex, horizon: int | None = None) -> None:
        self.index = index
        self.alphabet = index.alphabet
        self.horizon = trusted_profile(index.word, index=index).n_trust if horizon is None else horizon

    def is_basis(self, w: FiniteWord) -> bool:
        return len(w) == 0 or w in self.index

    def element(self, w: FiniteWord | str, coeff: Scalar = 1) -> AlgebraElement:
        if isinstance(w, str):
            w = FiniteWord.parse(w, self.alphabet)
        if not self.is_basis(w):
            return AlgebraElement.zero()
        return AlgebraElement.word(w, coeff)

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        out: dict[FiniteWord, Fraction] = {}
        for u, a in x.items():
            for v, b in y.items():
                if len(u) + len(v) > self.horizon:
                    raise HorizonError(
                        f"product of length {len(u) + len(v)} beyond certified horizon {self.horizon}"
                    )
                uv = FiniteWord(u.letters + v.letters, self.alphabet)
                if self.is_basis(uv):
                    out[uv] = out.get(uv, Fraction(0)) + a * b
        return AlgebraElement(out)

    def basis(self, n: int) -> list[FiniteWord]:
        if n == 0:
            return [FiniteWord(b"", self.alphabet)]
        return self.index.factors(n)


def multiply(x: AlgebraElement, y: AlgebraElement, factors: WordAlgebra | FactorIndex) -> AlgebraElement:
    if isinstance(factors, FactorIndex):
        factors = WordAlgebra(factors)
    return factors.multiply(x, y)


def primitive_root(w: FiniteWord) -> FiniteWord:
    p = minimal_period(w)
    if len(w) % p == 0:
        return FiniteWord(w.letters[:p], w.alphabet)
    return w


def is_primitive(w: FiniteWord) -> bool:
    return len(w) > 0 and primitive_root(w) == w


def least_rotation(w: FiniteWord) -> FiniteWord:
    """Lexicographically least rotation (Booth's algorithm)."""
    s = w.letters
    n = len(s)
    if n == 0:
        return w
    ss = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        c = ss[j]
        i = f[j - k - 1]
        while i != -1 and c != ss[k + i + 1]:
            if c < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if c != ss[k + i + 1]:
            if c < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return FiniteWord(ss[k : k + n], w.alphabet)


def rotate(w: FiniteWord, r: int) -> FiniteWord:
    if len(w) == 0:
        return w
    r %= len(w)
    return FiniteWord(w.letters[r:] + w.letters[:r], w.alphabet)


@dataclass
class PeriodicQuotient:
    """A_T for T = Y^omega with Y primitive; rotations[i] is the length-d factor starting at i."""

    period_word: FiniteWord
    rotations: list[FiniteWord]

    @property
    def d(self) -> int:
        return len(self.period_word)

    @property
    def pi_degree(self) -> int:
        return 2 * self.d

    def central_element(self) -> AlgebraElement:
        return AlgebraElement([(y, 1) for y in self.rotations])

    def algebra(self, check_length: int) -> WordAlgebra:
        """The factor set of Y^omega, exact up to ``check_length``."""
        d = self.d
        reps = -(-(check_length + d) // d)
        index = FactorIndex(power(self.period_word, reps))
        return WordAlgebra(index, horizon=check_length)


def build_periodic_quotient(y: FiniteWord | str) -> PeriodicQuotient:
    if isinstance(y, str):
        y = FiniteWord.parse(y)
    if len(y) == 0:
        raise ValueError("period word must be nonempty")
    root = primitive_root(y)
    return PeriodicQuotient(root, [rotate(root, i) for i in range(len(root))])


@dataclass
class IdentityResult:
    name: str
    ok: bool
    checked: int
    witness: str | None = None


@dataclass
class QuotientReport:
    period: str
    d: int
    pi_degree: int
    check_length: int
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> dict[str, Any]:
        return {
            "period": self.period,
            "d": self.d,
            "pi_degree": self.pi_degree,
            "check_length": self.check_length,
            "pass": self.ok,
            "identities": [r.__dict__ for r in self.results],
        }


def verify_quotient_identities(q: PeriodicQuotient, check_length: int) -> QuotientReport:
    """Check in exact arithmetic that Z = Y_1 + ... + Y_d is central,
    Y_i Y_j = 0 for i != j, and Y_i^2 = Y_i Z = Z Y_i."""
    d = q.d
    if check_length < 2 * d:
        raise ValueError(f"check length {check_length} must be at least 2d = {2 * d}")
    alg = q.algebra(check_length)
    z = q.central_element()
    ys = [AlgebraElement.word(y) for y in q.rotations]

    central = IdentityResult("Z central", True, 0)
    for n in range(0, check_length - d + 1):
        for w in alg.basis(n):
            x = AlgebraElement.word(w)
            central.checked += 1
            if alg.multiply(z, x) != alg.multiply(x, z):
                central.ok = False
                central.witness = str(w) or "1"
                break
        if not central.ok:
            break

    orth = IdentityResult("Y_i Y_j = 0 (i != j)", True, 0)
    for (i, yi), (j, yj) in product(enumerate(ys), repeat=2):
        if i == j:
            continue
        orth.checked += 1
        prod = alg.multiply(yi, yj)
        if prod:
            orth.ok = False
            orth.witness = f"Y_{i + 1} Y_{j + 1} = {prod!r}"
            break

    square = IdentityResult("Y_i^2 = Y_i Z = Z Y_i", True, 0)
    for i, yi in enumerate(ys):
        square.checked += 1
        sq, right, left = alg.multiply(yi, yi), alg.multiply(yi, z), alg.multiply(z, yi)
        if not (sq == right == left):
            square.ok = False
            square.witness = f"i={i + 1}: Y^2={sq!r}, YZ={right!r}, ZY={left!r}"
            break

    return QuotientReport(str(q.period_word), d, q.pi_degree, check_length, [central, orth, square])


class CandidateStatus(enum.Enum):
    CONFIRMED_AT_K = "confirmed_at_k"
    REJECTED = "rejected"


@dataclass
class PrimeCandidate:
    canonical_word: FiniteWord
    verified_power: int
    status: CandidateStatus = CandidateStatus.CONFIRMED_AT_K

    @property
    def d(self) -> int:
        return len(self.canonical_word)

    @property
    def pi_degree(self) -> int:
        return 2 * self.d

    def as_dict(self) -> dict[str, Any]:
        return {
            "word": str(self.canonical_word),
            "d": self.d,
            "pi_degree": self.pi_degree,
            "verified_power": self.verified_power,
            "status": self.status.value,
        }


def _horizon(index: FactorIndex, horizon: int | None) -> int:
    if horizon is not None:
        return horizon
    return trusted_profile(index.word, index=index).n_trust


def enumerate_cogk1_candidates(
    index: FactorIndex,
    k: int = 4,
    d_max: int = 12,
    horizon: int | None = None,
) -> list[PrimeCandidate]:
    """Primitive words v with |v| <= d_max and v^k a factor, one per rotation class."""
    if k < 2:
        raise ValueError("power threshold must be at least 2")
    horizon = _horizon(index, horizon)
    if d_max * k > horizon:
        raise HorizonError(f"d_max * K = {d_max * k} exceeds trusted horizon {horizon}")
    found: dict[bytes, PrimeCandidate] = {}
    for d in range(1, d_max + 1):
        for x in index.factors(d * k):
            s = x.letters
            if s != s[:d] * k:
                continue
            v = FiniteWord(s[:d], x.alphabet)
            if not is_primitive(v):
                continue
            canon = least_rotation(v)
            if canon.letters in found:
                continue
            reach = k
            while (reach + 1) * d <= horizon and power(v, reach + 1) in index:
                reach += 1
            found[canon.letters] = PrimeCandidate(canon, reach)
    return sorted(found.values(), key=lambda c: (c.d, c.canonical_word.letters))


class UnverifiedPowerError(HorizonError):
    pass


@dataclass
class MatrixImageDegree:
    j: int
    anchor_length: int
    d_j: int
    pi_degree: int
    envelope: int


def periodic_closure_period(w: FiniteWord) -> int:
    """Minimal period of w^omega, read off the border array of w w."""
    return min(minimal_period(w + w), len(w))


def matrix_image_degrees(trace: ConstructionTrace, index: FactorIndex, k: int = 4) -> list[MatrixImageDegree]:
    """d_j and PI degree 2 d_j of A_{T_j}, T_j = W_j^omega, for every anchor of the trace."""
    out = []
    envelope = 0
    for j, w in enumerate(trace.anchors, start=1):
        if power(w, k) not in index:
            raise UnverifiedPowerError(f"W_{j}^{k} is not a factor of the indexed prefix")
        d = periodic_closure_period(w)
        envelope = max(envelope, d)
        out.append(MatrixImageDegree(j, len(w), d, 2 * d, envelope))
    return out


def envelope_increases(degrees: list[MatrixImageDegree]) -> int:
    return sum(1 for a, b in zip(degrees, degrees[1:]) if b.envelope > a.envelope)
