"""Iterative augmentation of arithmetic progressions, with witness layers.

An ApWitness answers "give me a certificate for term j" by walking a stack of
layers from the outermost progression down to a leaf witness. Each layer maps
an outer term index to an inner term index plus a fixed bag of extra base-set
parts; the leaf resolves the innermost index to a certificate. Two layer kinds
exist:

  * a ladder layer subdivides the common difference d into a proper divisor d'
    using a set Q whose elements hit every residue s_q + i*d' modulo d;
  * a divisible-pair layer stretches the progression using h copies of a pair
    {a, a + g} with d | g.

Layer records hold O(1) metadata (plus the ladder table); parts are re-derived
at query time and memoized per ladder index.
"""

from __future__ import annotations

from typing import Optional, Protocol, Sequence

from .core import (
    ArithProgression,
    CompactSolution,
    InternalContract,
    PreconditionViolated,
    RandomSource,
    SortedIntSet,
    ceil_div,
    ceil_log2,
    contract,
    gcd_all,
    merge_counts,
    require,
    solve_residue_coefficient,
)

Parts = Sequence[tuple[int, int]]


# ---------------------------------------------------------------------------
# Witness composition
# ---------------------------------------------------------------------------

class LeafWitness(Protocol):
    ap: ArithProgression
    parts_per_query: int

    def query_parts(self, j: int, rng: RandomSource) -> Parts: ...


class Layer(Protocol):
    outer: ArithProgression
    inner: ArithProgression
    budget: int
    parts_per_query: int

    def resolve(self, j: int) -> tuple[int, Parts]: ...


class ExplicitLeaf:
    """Leaf backed by a precomputed table of parts per term (tests, toys)."""

    def __init__(self, ap: ArithProgression, table: dict[int, Parts]):
        self.ap = ap
        self.table = {j: tuple(parts) for j, parts in table.items()}
        counts = {sum(c for _, c in p) for p in self.table.values()}
        self.parts_per_query = max(counts) if counts else 0

    def query_parts(self, j: int, rng: RandomSource) -> Parts:
        return self.table[j]


class ApWitness:
    """Immutable composed witness: query(j) certifies term start + j*diff.

    fold_budget > 0 declares k-fold sumset mode; fold_budget == 0 declares
    subset-sum mode, in which all emitted parts must be distinct base elements.
    """

    def __init__(
        self,
        base_set: SortedIntSet,
        leaf: LeafWitness,
        layers: Sequence[Layer] = (),
        fold_budget: int = 0,
    ):
        self.base_set = base_set
        self.leaf = leaf
        self.layers = tuple(layers)  # outermost first
        self.fold_budget = fold_budget
        self.ap = self.layers[0].outer if self.layers else leaf.ap
        for outer_side, inner_side in zip(self.layers, self.layers[1:]):
            contract(outer_side.inner == inner_side.outer, "layer chain mismatch")
        if self.layers:
            contract(self.layers[-1].inner == leaf.ap, "innermost layer must sit on the leaf")
        self.parts_per_query = leaf.parts_per_query + sum(
            l.parts_per_query for l in self.layers
        )

    def query(self, j: int, rng: RandomSource) -> CompactSolution:
        target = self.ap.term(j)
        collected: list[tuple[int, int]] = []
        for layer in self.layers:
            j, extra = layer.resolve(j)
            collected.extend(extra)
        collected.extend(self.leaf.query_parts(j, rng))
        if self.fold_budget:
            counts = merge_counts(collected)
            sol = CompactSolution.from_counts(counts, target, self.fold_budget)
        else:
            values = [v for v, c in collected if c]
            contract(all(c == 1 for _, c in collected), "subset-sum parts must have count 1")
            contract(len(values) == len(set(values)), "subset-sum parts must be distinct")
            sol = CompactSolution(tuple(sorted((v, 1) for v in values)), target, 0)
        contract(
            sum(v * c for v, c in sol.parts) == target,
            f"certificate sums to {sum(v * c for v, c in sol.parts)}, wanted {target}",
        )
        return sol

    def truncated(self, length: int) -> "ApWitness":
        w = ApWitness.__new__(ApWitness)
        w.base_set = self.base_set
        w.leaf = self.leaf
        w.layers = self.layers
        w.fold_budget = self.fold_budget
        w.ap = self.ap.truncate(length)
        w.parts_per_query = self.parts_per_query
        return w


# ---------------------------------------------------------------------------
# Ladder accessors
# ---------------------------------------------------------------------------

class LadderAccessor(Protocol):
    d: int
    dp: int
    s_q: int
    h_min: int
    h_max: int
    budget: int
    parts_per_lookup: int

    def lookup(self, i: int) -> tuple[int, Parts]: ...


class PairLadder:
    """Ladder built from a pair {a, a+g} with d not dividing g.

    Entry i is q_i = d*a/d' + (i*jstar mod d/d') * g, a member of the
    (d/d')-fold sumset of {a, a+g}, and q_i = s_q + i*d' (mod d).
    """

    def __init__(self, d: int, a: int, g: int):
        require(d >= 2, "modulus-at-least-2", f"d={d}")
        require(g >= 1 and g % d != 0, "pair-gap-not-divisible", f"d={d}, g={g}")
        require(a >= 0, "pair-value-nonnegative", f"a={a}")
        dp, jstar = solve_residue_coefficient(d, g)
        self.d = d
        self.dp = dp
        self.a = a
        self.g = g
        self.jstar = jstar
        self.s_q = d * a // dp
        self.h_min = 0
        # rung heights are floor(j*g/d) for j < d/dp; the exact maximum (at
        # most the conservative g/dp) buys a longer progression
        self.h_max = (d // dp - 1) * g // d
        self.budget = d // dp
        self.parts_per_lookup = d // dp

    def lookup(self, i: int) -> tuple[int, Parts]:
        width = self.d // self.dp
        if not 0 <= i < width:
            raise InternalContract(f"ladder index {i} out of [0, {width})")
        j = (i * self.jstar) % width
        q = self.s_q + j * self.g
        parts = []
        if width - j:
            parts.append((self.a, width - j))
        if j:
            parts.append((self.a + self.g, j))
        return q, tuple(parts)


def ladder_from_pair(d: int, a: int, g: int) -> PairLadder:
    return PairLadder(d, a, g)


# ---------------------------------------------------------------------------
# Layers
# ---------------------------------------------------------------------------

class LadderLayer:
    """Augmentation by a ladder: P' = {s + s_q + h_max*d} + {0, d', ..., l'd'}."""

    def __init__(self, inner: ArithProgression, ladder: LadderAccessor):
        d = inner.diff
        require(ladder.d == d, "ladder-modulus-matches-diff", f"{ladder.d} != {d}")
        require(
            1 <= ladder.dp < d and d % ladder.dp == 0,
            "ladder-proper-divisor",
            f"d'={ladder.dp}, d={d}",
        )
        require(
            inner.length >= ladder.h_max - ladder.h_min,
            "ap-long-enough-for-ladder",
            f"length {inner.length} < {ladder.h_max - ladder.h_min}",
        )
        self.inner = inner
        self.ladder = ladder
        dp = ladder.dp
        new_len = (inner.length - ladder.h_max + ladder.h_min) * (d // dp)
        self.outer = ArithProgression(
            inner.start + ladder.s_q + ladder.h_max * d, dp, new_len
        )
        self.budget = ladder.budget
        self.parts_per_query = ladder.parts_per_lookup
        self._memo: dict[int, tuple[int, Parts]] = {}

    def resolve(self, j: int) -> tuple[int, Parts]:
        d = self.inner.diff
        dp = self.outer.diff
        i = (j * dp % d) // dp
        hit = self._memo.get(i)
        if hit is None:
            hit = self.ladder.lookup(i)
            self._memo[i] = hit
        q_i, parts = hit
        p = self.outer.term(j) - q_i
        off = p - self.inner.start
        contract(off >= 0 and off % d == 0, f"ladder residual {p} not on inner progression")
        inner_j = off // d
        contract(inner_j <= self.inner.length, "ladder residual beyond inner progression")
        return inner_j, parts


class DivPairLayer:
    """Augmentation by h copies of {a, a+g} with d | g: stretches the length."""

    def __init__(self, inner: ArithProgression, a: int, g: int, h: int):
        d = inner.diff
        require(g >= 1 and g % d == 0, "pair-gap-divisible", f"d={d}, g={g}")
        require(g <= inner.length * d, "pair-gap-at-most-span", f"g={g}, span={inner.length * d}")
        require(h >= 1, "fold-count-positive", f"h={h}")
        require(a >= 0, "pair-value-nonnegative", f"a={a}")
        self.inner = inner
        self.a = a
        self.g = g
        self.h = h
        self.outer = ArithProgression(inner.start + h * a, d, inner.length + h * g // d)
        self.budget = h
        self.parts_per_query = h

    def resolve(self, j: int) -> tuple[int, Parts]:
        d = self.inner.diff
        hgd = self.h * self.g // d
        if j >= hgd:
            return j - hgd, ((self.a + self.g, self.h),)
        q = j * d // self.g
        inner_j = (j * d % self.g) // d
        parts = []
        if q:
            parts.append((self.a + self.g, q))
        if self.h - q:
            parts.append((self.a, self.h - q))
        return inner_j, tuple(parts)


# ---------------------------------------------------------------------------
# Augmentation operations
# ---------------------------------------------------------------------------

def augment_by_ladder(
    p: ArithProgression, ladder: LadderAccessor
) -> tuple[ArithProgression, LadderLayer]:
    layer = LadderLayer(p, ladder)
    return layer.outer, layer


def augment_nondiv_pair(
    p: ArithProgression, a: int, g: int
) -> tuple[int, ArithProgression, LadderLayer]:
    """Subdivide P's difference using a pair whose gap d does not divide."""
    require(p.diff > 1, "diff-above-one", f"diff={p.diff}")
    require(g >= 1 and g % p.diff != 0, "pair-gap-not-divisible", f"d={p.diff}, g={g}")
    ladder = PairLadder(p.diff, a, g)
    require(
        p.length >= g // ladder.dp,
        "ap-long-enough-for-pair",
        f"length {p.length} < g/d' = {g // ladder.dp}",
    )
    p2, layer = augment_by_ladder(p, ladder)
    return ladder.dp, p2, layer


def augment_div_pair(
    p: ArithProgression, a: int, g: int, h: int
) -> tuple[ArithProgression, DivPairLayer]:
    layer = DivPairLayer(p, a, g, h)
    return layer.outer, layer


class GapPairs:
    """Result of the small-gap / large-gap dichotomy."""

    __slots__ = ("case", "pair1", "pair2")

    def __init__(self, case: int, pair1: tuple[int, int], pair2: Optional[tuple[int, int]]):
        self.case = case
        self.pair1 = pair1  # (a, g) with d not dividing g
        self.pair2 = pair2  # (a', g') with d | g', or None in case 1


def find_gap_pairs(a: SortedIntSet, d: int, m: int) -> GapPairs:
    """Find a small non-divisible gap, or one plus a large divisible run-sum.

    Case 1 (at least n/4 of the consecutive gaps are not divisible by d):
    the smallest non-divisible gap g satisfies 1 <= g <= 4m/n. Case 2: the
    largest run of consecutive divisible gaps sums to g' with d | g' and
    n*d*g/(4m) <= g' <= m. First qualifying index wins every tie.
    """
    require(d >= 2, "modulus-at-least-2", f"d={d}")
    require(len(a) >= 2, "set-at-least-two")
    require(0 in a, "zero-in-set")
    require(gcd_all(a) == 1, "gcd-one", f"gcd={gcd_all(a)}")
    require(a.max <= m, "elements-within-interval", f"max={a.max} > m={m}")
    elems = a.elems
    n = len(elems)
    gaps = [elems[i + 1] - elems[i] for i in range(n - 1)]
    nondiv = [i for i, g in enumerate(gaps) if g % d]
    contract(bool(nondiv), "gcd 1 forces a gap not divisible by d")
    h = len(nondiv)
    i_small = min(nondiv, key=lambda i: (gaps[i], i))
    g_small = gaps[i_small]
    pair1 = (elems[i_small], g_small)
    if 4 * h >= n:
        contract(g_small * n <= 4 * m, "smallest non-divisible gap exceeds 4m/n")
        return GapPairs(1, pair1, None)
    # group the divisible gaps between consecutive non-divisible indices
    best_lo, best_hi, best_size = -1, -1, 0
    boundaries = [-1] + nondiv + [n - 1]
    for b in range(len(boundaries) - 1):
        lo, hi = boundaries[b] + 1, boundaries[b + 1] - 1  # inclusive gap-index run
        size = hi - lo + 1
        if size > best_size:
            best_lo, best_hi, best_size = lo, hi, size
    contract(best_size >= 1, "case 2 needs a nonempty divisible run")
    g_big = elems[best_hi + 1] - elems[best_lo]
    contract(g_big % d == 0, "run-sum gap must be divisible by d")
    contract(g_big <= m, "run-sum gap exceeds m")
    contract(4 * m * g_big >= n * d * g_small, "run-sum gap below n*d*g/(4m)")
    return GapPairs(2, pair1, (elems[best_lo], g_big))


def augment_once(
    a: SortedIntSet, p: ArithProgression, m: int
) -> tuple[int, ArithProgression, tuple[Layer, ...], int]:
    """One combined augmentation step; returns (d', P', layers, declared budget).

    Layers are listed outermost first. The declared budget is
    d/d' + ceil(4m/(n d')) in both cases (zeros pad the unused half).
    """
    d = p.diff
    require(d >= 2, "diff-at-least-two", f"diff={d}")
    require(p.length * d >= m, "ap-span-at-least-m", f"span={p.length * d} < m={m}")
    n = len(a)
    found = find_gap_pairs(a, d, m)
    a1, g1 = found.pair1
    dp = solve_residue_coefficient(d, g1)[0]
    h = ceil_div(4 * m, n * dp)
    if found.case == 1:
        dpp, p2, ladder_layer = augment_nondiv_pair(p, a1, g1)
        contract(dpp == dp, "divisor mismatch between ladder and gcd")
        return dp, p2, (ladder_layer,), d // dp + h
    a2, g2 = found.pair2
    p_mid, div_layer = augment_div_pair(p, a2, g2, h)
    contract(
        p_mid.length >= p.length + g1 // dp,
        "divisible-pair stretch must cover the ladder loss",
    )
    dpp, p2, ladder_layer = augment_nondiv_pair(p_mid, a1, g1)
    contract(dpp == dp, "divisor mismatch between ladder and gcd")
    return dp, p2, (ladder_layer, div_layer), d // dp + h


def augment_to_full(
    a: SortedIntSet, p: ArithProgression, m: int
) -> tuple[ArithProgression, tuple[Layer, ...], int]:
    """Iterate augment_once until diff = 1 and length >= m.

    Returns (P_final, layers outermost first, declared extra fold budget),
    with the budget bounded by 2*diff_0 + ceil(8m/n).
    """
    require(0 in a, "zero-in-set")
    require(gcd_all(a) == 1, "gcd-one")
    n = len(a)
    require(
        p.length * min(p.diff, n) >= 5 * m,
        "ap-initial-size",
        f"length*min(diff, n) = {p.length * min(p.diff, n)} < 5m = {5 * m}",
    )
    d0 = p.diff
    layers: list[Layer] = []
    budget_extra = 0
    iterations = 0
    while p.diff >= 2:
        iterations += 1
        contract(iterations <= ceil_log2(d0 + 1) + 1, "too many augmentation iterations")
        try:
            _, p, new_layers, b = augment_once(a, p, m)
        except PreconditionViolated as exc:
            raise InternalContract(f"augmentation step failed mid-iteration: {exc}") from exc
        layers = list(new_layers) + layers
        budget_extra += b
        contract(p.length * p.diff >= m, "iteration lost the span invariant l*d >= m")
    contract(p.length >= m, "final progression shorter than m")
    contract(
        budget_extra <= 2 * d0 + ceil_div(8 * m, n),
        f"budget {budget_extra} exceeds 2*d0 + ceil(8m/n) = {2 * d0 + ceil_div(8 * m, n)}",
    )
    return p, tuple(layers), budget_extra
