"""Shared domain types, exact arithmetic helpers, and certificate checking.

Everything downstream works over three small value types:

  SortedIntSet     -- sorted distinct nonnegative integers (the base set).
  ArithProgression -- (start, diff, length), denoting {start + j*diff : 0 <= j <= length}.
  CompactSolution  -- a multiset of (value, count) pairs certifying that a target
                      is a sum of base-set elements, either with a fold budget
                      (k-fold sumset mode) or with every count equal to 1 and all
                      values distinct (subset-sum mode, fold_budget == 0).

All density arithmetic is exact (integer cross-multiplication via Fraction);
no floating point is used on any decision path.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from hashlib import blake2b
from typing import Iterable, Iterator, Optional, Sequence

MAX_ELEMENT = 2**62  # any sum of <= 2**32 elements stays well inside 128 bits


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class ApcertError(Exception):
    """Base class for all library errors."""


class PreconditionViolated(ApcertError):
    """A documented precondition failed; `name` identifies the inequality."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        self.detail = detail
        super().__init__(f"precondition violated: {name}" + (f" ({detail})" if detail else ""))


class NegativeInput(PreconditionViolated):
    def __init__(self, value: int):
        super().__init__("nonnegative-input", f"got {value}")


class OverflowRisk(PreconditionViolated):
    def __init__(self, value: int):
        super().__init__("element-cap", f"{value} > 2^62")


class EmptySet(PreconditionViolated):
    def __init__(self):
        super().__init__("nonempty-set")


class TooSmall(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("set-too-small", detail)


class OutOfRange(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("query-out-of-range", detail)


class OutOfRegion(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("target-out-of-region", detail)


class MultiplicityExceeded(ApcertError):
    pass


class CapExceeded(ApcertError):
    pass


class Exhausted(ApcertError):
    """Construction gave up without a certificate (tuned-profile outcome)."""

    def __init__(self, reason: str, partial=None):
        self.reason = reason
        self.partial = partial
        super().__init__(f"exhausted: {reason}")


class InternalContract(ApcertError):
    """An internal invariant failed; this always indicates a bug."""


def require(cond: bool, name: str, detail: str = "") -> None:
    if not cond:
        raise PreconditionViolated(name, detail)


def contract(cond: bool, msg: str) -> None:
    if not cond:
        raise InternalContract(msg)


# ---------------------------------------------------------------------------
# Small integer helpers
# ---------------------------------------------------------------------------

def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def ceil_log2(x: int) -> int:
    """Smallest t with 2**t >= x, for x >= 1."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


# ---------------------------------------------------------------------------
# SortedIntSet
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SortedIntSet:
    """Strictly increasing nonnegative integers; the universal base set."""

    elems: tuple[int, ...]

    def __post_init__(self):
        prev = -1
        for e in self.elems:
            if e < 0:
                raise NegativeInput(e)
            if e > MAX_ELEMENT:
                raise OverflowRisk(e)
            if e <= prev:
                raise PreconditionViolated("strictly-increasing", f"{e} after {prev}")
            prev = e

    @staticmethod
    def from_iterable(values: Iterable[int]) -> "SortedIntSet":
        return SortedIntSet(tuple(sorted(set(values))))

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __contains__(self, x: int) -> bool:
        i = bisect_left(self.elems, x)
        return i < len(self.elems) and self.elems[i] == x

    @property
    def min(self) -> int:
        if not self.elems:
            raise EmptySet()
        return self.elems[0]

    @property
    def max(self) -> int:
        if not self.elems:
            raise EmptySet()
        return self.elems[-1]

    def predecessor(self, x: int) -> Optional[int]:
        """Largest element <= x, or None."""
        i = bisect_right(self.elems, x)
        return self.elems[i - 1] if i else None

    def count_range(self, lo: int, hi: int) -> int:
        """|A[lo, hi]| = number of elements in [lo, hi]."""
        if hi < lo:
            return 0
        return bisect_right(self.elems, hi) - bisect_left(self.elems, lo)

    def gaps(self) -> list[int]:
        e = self.elems
        return [e[i + 1] - e[i] for i in range(len(e) - 1)]


@dataclass(frozen=True)
class ArithProgression:
    """{start + j*diff : 0 <= j <= length}; diff >= 1, length >= 0."""

    start: int
    diff: int
    length: int

    def __post_init__(self):
        if self.diff < 1:
            raise PreconditionViolated("ap-diff-positive", f"diff={self.diff}")
        if self.length < 0:
            raise PreconditionViolated("ap-length-nonnegative", f"length={self.length}")

    def term(self, j: int) -> int:
        if not 0 <= j <= self.length:
            raise OutOfRange(f"term index {j} not in [0, {self.length}]")
        return self.start + j * self.diff

    @property
    def last(self) -> int:
        return self.start + self.length * self.diff

    def terms(self) -> Iterator[int]:
        return iter(range(self.start, self.last + 1, self.diff))

    def truncate(self, length: int) -> "ArithProgression":
        if length > self.length:
            raise OutOfRange(f"cannot extend length {self.length} to {length}")
        return ArithProgression(self.start, self.diff, length)


def normalize(raw: Sequence[int]) -> tuple[SortedIntSet, int]:
    """Sort and deduplicate; returns (set, number of duplicates dropped)."""
    for v in raw:
        if v < 0:
            raise NegativeInput(v)
        if v > MAX_ELEMENT:
            raise OverflowRisk(v)
    s = SortedIntSet.from_iterable(raw)
    return s, len(raw) - len(s)


def gcd_all(a: SortedIntSet) -> int:
    """gcd of all elements; gcd_all({0}) = 0 by convention."""
    if not len(a):
        raise EmptySet()
    g = 0
    for e in a:
        g = _gcd(g, e)
        if g == 1:
            return 1
    return g


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def shift_scale_normalize(a: SortedIntSet) -> tuple[SortedIntSet, int, int]:
    """Map A to A' = (A - min)/gcd so that 0 in A' and gcd(A') = 1.

    Solutions over A' map back by value -> value*scale + offset.
    """
    if len(a) < 2:
        raise TooSmall("shift_scale_normalize needs |A| >= 2")
    offset = a.min
    scale = 0
    for e in a:
        scale = _gcd(scale, e - offset)
    # |A| >= 2 and elements distinct, so some e - offset > 0
    contract(scale >= 1, "scale must be positive for a set of size >= 2")
    return SortedIntSet(tuple((e - offset) // scale for e in a)), offset, scale


# ---------------------------------------------------------------------------
# Density (exact rationals)
# ---------------------------------------------------------------------------

def density_with_argmin(a: SortedIntSet, z: int) -> tuple[Fraction, int]:
    """min over z' in [1, z] of |A[1, z']| / z', with a minimizing z'.

    |A[1, z']| is a step function that increases only at elements of A, so the
    ratio's minimum over [1, z] occurs immediately before a step (z' = e - 1
    for e in A with 2 <= e <= z) or at the right endpoint z' = z.
    """
    require(z >= 1, "density-z-positive", f"z={z}")
    best_num, best_den = a.count_range(1, z), z
    best_z = z
    for e in a.elems:
        zp = e - 1
        if zp < 1:
            continue
        if zp >= z:
            break
        num = a.count_range(1, zp)
        # num/zp < best_num/best_den, compared exactly
        if num * best_den < best_num * zp:
            best_num, best_den, best_z = num, zp, zp
    return Fraction(best_num, best_den), best_z


def density(a: SortedIntSet, z: int) -> Fraction:
    return density_with_argmin(a, z)[0]


# densities are exact rationals throughout; no decision path touches floats
Density = Fraction


# ---------------------------------------------------------------------------
# Residue coefficient (extended Euclid)
# ---------------------------------------------------------------------------

def solve_residue_coefficient(d: int, g: int) -> tuple[int, int]:
    """Return (d', j*) with d' = gcd(d, g) and j*·g ≡ d' (mod d), 0 <= j* <= (d-d')/d'.

    Writing g = d'·g1 and d = d'·d1 with gcd(g1, d1) = 1, j* is the inverse of
    g1 modulo d1.
    """
    require(d >= 2, "modulus-at-least-2", f"d={d}")
    require(g >= 1, "gap-positive", f"g={g}")
    dp = _gcd(d, g)
    d1 = d // dp
    g1 = (g // dp) % d1
    if d1 == 1:
        return dp, 0
    gg, x, _ = egcd(g1, d1)
    contract(gg == 1, "g/d' and d/d' must be coprime")
    jstar = x % d1
    return dp, jstar


# ---------------------------------------------------------------------------
# Compact solutions and certificate checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompactSolution:
    """Certificate that `target` is a sum of base-set elements.

    parts holds (value, count) with values strictly increasing and counts
    positive. fold_budget > 0 caps the total multiplicity (k-fold sumset mode);
    fold_budget == 0 demands count == 1 everywhere (subset-sum mode).
    """

    parts: tuple[tuple[int, int], ...]
    target: int
    fold_budget: int

    @staticmethod
    def from_counts(counts: dict[int, int], target: int, fold_budget: int) -> "CompactSolution":
        parts = tuple(sorted((v, c) for v, c in counts.items() if c))
        return CompactSolution(parts, target, fold_budget)

    def total_count(self) -> int:
        return sum(c for _, c in self.parts)


def check_solution(base: SortedIntSet, sol: CompactSolution) -> Optional[str]:
    """Return None if the certificate is valid against `base`, else a reason code."""
    seen = -1
    total = 0
    acc = 0
    for v, c in sol.parts:
        if c <= 0:
            return "nonpositive-count"
        if v <= seen:
            return "parts-not-sorted-distinct"
        seen = v
        if v not in base:
            return "value-not-in-base"
        if sol.fold_budget == 0 and c != 1:
            return "count-not-one"
        total += c
        acc += v * c
    if acc != sol.target:
        return "sum-mismatch"
    if sol.fold_budget > 0 and total > sol.fold_budget:
        return "budget-exceeded"
    return None


def verify_solution(base: SortedIntSet, sol: CompactSolution) -> bool:
    return check_solution(base, sol) is None


def merge_counts(*part_groups: Iterable[tuple[int, int]]) -> dict[int, int]:
    out: dict[int, int] = {}
    for group in part_groups:
        for v, c in group:
            out[v] = out.get(v, 0) + c
    return out


# ---------------------------------------------------------------------------
# Randomness
# ---------------------------------------------------------------------------

_MASK64 = 0xFFFFFFFFFFFFFFFF


class RandomSource:
    """Deterministic seeded RNG; one instance per query thread, never shared.

    splitmix64 core: cheap to construct (witness queries derive one stream
    per term) and reproducible across platforms. Uniform ranges use rejection
    sampling, so draws are exactly uniform.
    """

    __slots__ = ("seed", "_state", "draws")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = self.seed
        self.draws = 0

    def _next64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        self.draws += 1
        span = hi - lo + 1
        if span > _MASK64:
            # spans beyond 64 bits never arise (elements are capped at 2^62),
            # but stay correct by chaining words
            width = span.bit_length()
            while True:
                x = 0
                for _ in range((width + 63) // 64):
                    x = (x << 64) | self._next64()
                x &= (1 << width) - 1
                if x < span:
                    return lo + x
        limit = ((_MASK64 + 1) // span) * span
        while True:
            x = self._next64()
            if x < limit:
                return lo + x % span

    def derive(self, *tags) -> "RandomSource":
        """Independent child stream, stable in (seed, tags)."""
        h = blake2b(repr((self.seed,) + tags).encode(), digest_size=8)
        return RandomSource(int.from_bytes(h.digest(), "big"))

    def __repr__(self):
        return f"RandomSource(seed={self.seed})"


# ---------------------------------------------------------------------------
# Integer-set file format
# ---------------------------------------------------------------------------

def parse_int_set_text(text: str) -> list[int]:
    """Whitespace-separated decimal integers; '#' starts a comment line."""
    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for tok in line.split():
            values.append(int(tok))
    return values


def load_int_set(path: str) -> list[int]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_int_set_text(fh.read())
