"""Arithmetic progressions inside subset sums, built from conflict-free pairs.

Strategy: harvest conflict-free consecutive pairs with small gaps, make the
gap multiset uniform, and transfer a progression in the k-fold sumset of the
gaps into S(A) by flipping chosen pairs from their low to their high endpoint.
The short progression is then lengthened round by round: pairs whose gap the
current difference divides stretch it (one fold each), and pairs with
non-divisible gaps feed a residue ladder that subdivides the difference.

Element-disjointness is structural: every layer owns pairs drawn from a pool
that shrinks as rounds consume it, and each certificate uses each element at
most once (checked on every merge).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .augment import ApWitness, Layer, augment_by_ladder, augment_div_pair
from .core import (
    ArithProgression,
    CompactSolution,
    Exhausted,
    MultiplicityExceeded,
    RandomSource,
    SortedIntSet,
    ceil_div,
    ceil_log2,
    contract,
    gcd_all,
    normalize,
    require,
)
from .profiles import TUNED, ConstantsProfile
from .sumset_ap import ap_in_kfold_sumset

Pair = tuple[int, int]


# ---------------------------------------------------------------------------
# Conflict-free pair sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairSet:
    """Conflict-free (lo, hi) pairs: lo < hi and no integer in two pairs."""

    pairs: tuple[Pair, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for lo, hi in self.pairs:
            require(lo < hi, "pair-ordered", f"({lo}, {hi})")
            require(lo not in seen and hi not in seen, "conflict-free", f"({lo}, {hi})")
            seen.add(lo)
            seen.add(hi)

    def __len__(self) -> int:
        return len(self.pairs)

    def endpoints(self) -> SortedIntSet:
        vals: list[int] = []
        for lo, hi in self.pairs:
            vals.append(lo)
            vals.append(hi)
        return SortedIntSet(tuple(sorted(vals)))

    def gap_multiset(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for lo, hi in self.pairs:
            g = hi - lo
            out[g] = out.get(g, 0) + 1
        return out

    @property
    def base_sum(self) -> int:
        return sum(lo for lo, _ in self.pairs)


def gen_pairs(a: SortedIntSet) -> tuple[PairSet, int]:
    """At least n conflict-free consecutive pairs with gaps <= m/n, where the
    largest |A| mod 4 elements are dropped first (the count is returned)."""
    dropped = len(a) % 4
    elems = a.elems[: len(a) - dropped] if dropped else a.elems
    require(len(elems) >= 4, "set-at-least-four", f"kept {len(elems)}")
    n = len(elems) // 4
    m = elems[-1]
    odd: list[Pair] = []
    even: list[Pair] = []
    for i in range(len(elems) - 1):
        g = elems[i + 1] - elems[i]
        if g * n <= m:
            (even if i % 2 == 0 else odd).append((elems[i], elems[i + 1]))
    chosen = even if len(even) >= len(odd) else odd
    contract(len(chosen) >= n, "pigeonhole guarantees n small-gap pairs")
    return PairSet(tuple(chosen)), dropped


def _uniformize_multiplicity(keys: Sequence[int]) -> int:
    """The multiplicity u maximizing u * #{key : multiplicity >= u} (smallest
    u on ties).

    The count of keys with multiplicity >= u is constant between consecutive
    distinct multiplicities, so the score is maximized at a distinct value.
    """
    mult: dict[int, int] = {}
    for k in keys:
        mult[k] = mult.get(k, 0) + 1
    asc = sorted(mult.values())
    best_u, best_score = 1, 0
    for i, u in enumerate(asc):
        if i and u == asc[i - 1]:
            continue
        score = u * (len(asc) - i)
        if score > best_score:
            best_u, best_score = u, score
    return best_u


def uniformize(t: PairSet) -> tuple[int, PairSet]:
    """Keep exactly u pairs per surviving gap, maximizing the kept size;
    |T'| >= |T| / log2(2|T|)."""
    require(len(t) >= 1, "pairs-nonempty")
    gaps = [hi - lo for lo, hi in t.pairs]
    u = _uniformize_multiplicity(gaps)
    mult = t.gap_multiset()
    taken: dict[int, int] = {}
    kept: list[Pair] = []
    for lo, hi in t.pairs:
        g = hi - lo
        if mult[g] < u or taken.get(g, 0) >= u:
            continue
        taken[g] = taken.get(g, 0) + 1
        kept.append((lo, hi))
    out = PairSet(tuple(kept))
    contract(
        len(out) * ceil_log2(2 * len(t)) >= len(t),
        "uniform subset below |T|/log2(2|T|)",
    )
    return u, out


def _flip_pairs(
    pairs: Sequence[Pair],
    by_gap: dict[int, list[int]],
    gap_counts: Sequence[tuple[int, int]],
) -> tuple[list[tuple[int, int]], int]:
    """Choose `count` pairs per gap and emit hi for chosen, lo for the rest.

    Returns (subset-sum parts, sum of chosen gaps)."""
    chosen: set[int] = set()
    shift = 0
    for g, c in gap_counts:
        if g == 0 or c == 0:
            continue
        idxs = by_gap.get(g, ())
        if c > len(idxs):
            raise MultiplicityExceeded(f"gap {g} needs {c} pairs, only {len(idxs)} present")
        for i in idxs[:c]:
            chosen.add(i)
            shift += g
    parts = []
    for i, (lo, hi) in enumerate(pairs):
        parts.append((hi if i in chosen else lo, 1))
    return parts, shift


def pairs_to_subsetsum(t: PairSet, z: int, sol_z: CompactSolution) -> CompactSolution:
    """Convert a solution for z over the gaps (budget u) into a subset of the
    endpoints summing to base_sum + z."""
    require(sol_z.target == z, "solution-target-matches", f"{sol_z.target} != {z}")
    by_gap: dict[int, list[int]] = {}
    for i, (lo, hi) in enumerate(t.pairs):
        by_gap.setdefault(hi - lo, []).append(i)
    parts, shift = _flip_pairs(t.pairs, by_gap, sol_z.parts)
    contract(shift == z, f"chosen gaps sum to {shift}, wanted {z}")
    return CompactSolution(tuple(sorted(parts)), t.base_sum + z, 0)


# ---------------------------------------------------------------------------
# Progressions in the k-fold sumset of a set with arbitrary gcd
# ---------------------------------------------------------------------------

class _ScaledWitness:
    """Witness for c*A obtained by scaling a witness for A by c."""

    def __init__(self, inner: ApWitness, scale: int):
        self.inner = inner
        self.scale = scale
        self.ap = ArithProgression(
            inner.ap.start * scale, inner.ap.diff * scale, inner.ap.length
        )
        self.fold_budget = inner.fold_budget
        self.parts_per_query = inner.parts_per_query

    def query(self, j: int, rng: RandomSource) -> CompactSolution:
        sol = self.inner.query(j, rng)
        parts = tuple((v * self.scale, c) for v, c in sol.parts)
        return CompactSolution(parts, sol.target * self.scale, sol.fold_budget)


def ap_with_gcd_diff(g_set: SortedIntSet, bound: int):
    """{s} + {0, d, ..., bound*d} in the k-fold sumset of G, d = gcd(G).

    G must contain 0 and a positive element no larger than bound. The fold k
    is the clamped ceil((bound+1)/|G|) of the underlying pipeline.
    """
    require(0 in g_set, "zero-in-set")
    require(len(g_set) >= 2, "set-at-least-two")
    c = gcd_all(g_set)
    require(c >= 1, "positive-element")
    require(g_set.max // c <= bound,
            "elements-within-interval", f"max={g_set.max}, bound={bound}, gcd={c}")
    reduced = SortedIntSet(tuple(e // c for e in g_set.elems))
    res = ap_in_kfold_sumset(reduced, bound, ceil_div(bound + 1, len(reduced)))
    if c == 1:
        return res.witness
    return _ScaledWitness(res.witness, c)


# ---------------------------------------------------------------------------
# The pairs-to-subset-sums bridge
# ---------------------------------------------------------------------------

class PairBridgeLeaf:
    """Leaf translating gap-sumset certificates into endpoint subsets."""

    def __init__(self, inner, pairs: Sequence[Pair]):
        self.inner = inner
        self.pairs = tuple(pairs)
        self.by_gap: dict[int, list[int]] = {}
        for i, (lo, hi) in enumerate(self.pairs):
            self.by_gap.setdefault(hi - lo, []).append(i)
        self.base_sum = sum(lo for lo, _ in self.pairs)
        self.ap = ArithProgression(
            inner.ap.start + self.base_sum, inner.ap.diff, inner.ap.length
        )
        self.parts_per_query = len(self.pairs)

    def query_parts(self, j: int, rng: RandomSource):
        sol = self.inner.query(j, rng)
        parts, shift = _flip_pairs(self.pairs, self.by_gap, sol.parts)
        contract(shift == sol.target, "flipped gaps must reproduce the inner target")
        return parts


def _needed_per_value(witness, value: int) -> int:
    """Upper bound on how often `value` can appear in any certificate of the
    witness: at most the fixed total multiplicity, and at most target/value."""
    return min(witness.parts_per_query, witness.ap.last // value)


@dataclass(frozen=True)
class PairApResult:
    ap: ArithProgression
    witness: ApWitness
    t_star: PairSet


def ap_by_pairs(
    t: PairSet, g_bound: int, profile: ConstantsProfile = TUNED
) -> PairApResult:
    """AP of length g_bound in S(A_{T*}) for a small subset T* of the pairs."""
    require(len(t) >= 1, "pairs-nonempty")
    gaps_all = t.gap_multiset()
    require(
        all(1 <= g <= g_bound for g in gaps_all),
        "gaps-within-bound",
        f"gaps up to {max(gaps_all, default=0)} vs bound {g_bound}",
    )
    if profile.enforce_caps:
        require(
            g_bound * profile.pair_cap * ceil_log2(2 * len(t)) <= len(t),
            "pairs-vs-gap-cap",
            f"g_bound={g_bound}, |T|={len(t)}",
        )
    u, t_uni = uniformize(t)
    g_set = SortedIntSet.from_iterable({0} | set(t_uni.gap_multiset()))
    inner = ap_with_gcd_diff(g_set, g_bound)
    by_gap: dict[int, list[Pair]] = {}
    for lo, hi in t_uni.pairs:
        by_gap.setdefault(hi - lo, []).append((lo, hi))
    star: list[Pair] = []
    for g, plist in sorted(by_gap.items()):
        need = _needed_per_value(inner, g)
        if need > len(plist):
            raise Exhausted(
                f"gap {g} needs multiplicity {need}, uniform set has {len(plist)}"
            )
        star.extend(plist[:need])
    t_star = PairSet(tuple(star))
    if profile.enforce_caps:
        contract(len(t_star) <= profile.pair_cap * g_bound, "pair coreset above cap")
    leaf = PairBridgeLeaf(inner, t_star.pairs)
    witness = ApWitness(t_star.endpoints(), leaf, (), fold_budget=0)
    return PairApResult(leaf.ap, witness, t_star)


@dataclass(frozen=True)
class ShortApResult:
    ap: ArithProgression
    witness: ApWitness
    coreset: SortedIntSet
    t_star: PairSet
    dropped: int


def short_ap_in_subset_sums(
    a: SortedIntSet, ell: int, profile: ConstantsProfile = TUNED
) -> ShortApResult:
    """AP of length ell and diff <= m/n in S(A*) with |A*| <= 2000*ell
    (profile-scaled), where n = |A|/4."""
    require(len(a) >= 4, "set-at-least-four")
    require(a.min >= 1, "positive-elements")
    n = len(a) // 4
    m = a.max
    if profile.enforce_caps:
        require(ell * n >= m, "length-floor", f"ell={ell} < m/n={m}/{n}")
        require(
            ell * profile.pair_cap * ceil_log2(2 * n) <= n,
            "length-cap",
            f"ell={ell}, n={n}",
        )
    t, dropped = gen_pairs(a)
    res = ap_by_pairs(t, ell, profile)
    contract(res.ap.diff * n <= m, "short progression diff above m/n")
    return ShortApResult(res.ap, res.witness, res.t_star.endpoints(), res.t_star, dropped)


# ---------------------------------------------------------------------------
# Gap scan: qualifying pairs under removals, for one augmentation round
# ---------------------------------------------------------------------------

class GapScan:
    """Classifies consecutive gaps of the alive elements for fixed (d, ell,
    gamma) and serves qualifying pairs until the pool is exhausted.

    Case 1: a single gap not divisible by d, at most ell/window_div.
    Case 2: a divisible gap (or run-sum of small divisible gaps) inside
    [ell*d/(window_lo_div*gamma), ell*d/window_div]. Removing a pair merges
    the neighbouring gaps in O(1); candidate stacks revalidate lazily.
    """

    def __init__(
        self,
        values: Sequence[int],
        d: int,
        ell: int,
        gamma: Fraction,
        profile: ConstantsProfile,
    ):
        self.vals = list(values)
        n = len(self.vals)
        self.d = d
        self.case1_cap = ell // profile.window_div
        self.c2_hi = ell * d // profile.window_div
        num = ell * d * gamma.denominator
        den = profile.window_lo_div * gamma.numerator
        self.c2_lo = max(1, ceil_div(num, den))
        self.nxt = list(range(1, n)) + [-1]
        self.prv = [-1] + list(range(n - 1))
        self.alive = [True] * n
        self.c1: deque[int] = deque()
        self.c2: deque[int] = deque()
        for i in range(n - 1):
            self._classify(i)

    def _gap(self, i: int) -> Optional[int]:
        j = self.nxt[i]
        if j < 0:
            return None
        return self.vals[j] - self.vals[i]

    def _is_c1(self, g: int) -> bool:
        return g % self.d != 0 and g <= self.case1_cap

    def _is_c2_start(self, g: int) -> bool:
        if g % self.d:
            return False
        return (self.c2_lo <= g <= self.c2_hi) or (g < self.c2_lo and g <= self.case1_cap)

    def _classify(self, i: int) -> None:
        g = self._gap(i)
        if g is None or not self.alive[i]:
            return
        if self._is_c1(g):
            self.c1.append(i)
        elif self._is_c2_start(g):
            self.c2.append(i)

    def pop_case1(self) -> Optional[tuple[int, int]]:
        while self.c1:
            i = self.c1.popleft()
            if not self.alive[i]:
                continue
            g = self._gap(i)
            if g is None or not self._is_c1(g):
                continue
            return i, self.nxt[i]
        return None

    def pop_case2(self) -> Optional[tuple[int, int]]:
        while self.c2:
            i = self.c2.popleft()
            if not self.alive[i]:
                continue
            g = self._gap(i)
            if g is None or not self._is_c2_start(g):
                continue
            pair = self._walk_run(i)
            if pair is not None:
                return pair
        return None

    def _walk_run(self, start: int) -> Optional[tuple[int, int]]:
        """Accumulate consecutive divisible gaps from `start` as close to the
        window's upper edge as fits; one such run is one pair (its interior
        elements survive), so longer runs mean more length gain per pair."""
        cur = start
        total = 0
        end = start
        while True:
            g = self._gap(cur)
            if g is None or g % self.d or total + g > self.c2_hi:
                break
            total += g
            end = self.nxt[cur]
            cur = end
        if total >= self.c2_lo:
            return start, end
        return None

    def remove_pair(self, i: int, j: int) -> None:
        for idx in (j, i):
            contract(self.alive[idx], "removing a dead element")
            p, q = self.prv[idx], self.nxt[idx]
            if p >= 0:
                self.nxt[p] = q
            if q >= 0:
                self.prv[q] = p
            self.alive[idx] = False
            if p >= 0:
                self._classify(p)

    def value_pair(self, i: int, j: int) -> Pair:
        return self.vals[i], self.vals[j]


def find_aug_pair(scan: GapScan) -> Optional[tuple[int, int, int]]:
    """Next qualifying pair from the scan: (case, index_lo, index_hi).

    Pairs with a small non-divisible gap come first; otherwise a divisible
    gap (possibly a run-sum) inside the window.
    """
    hit = scan.pop_case1()
    if hit is not None:
        return 1, hit[0], hit[1]
    hit = scan.pop_case2()
    if hit is not None:
        return 2, hit[0], hit[1]
    return None


def gamma_parameter(m: int, n: int, ell: int, profile: ConstantsProfile) -> Fraction:
    return Fraction(m, n) + Fraction(ell, profile.window_div * n)


def extract_aug_pairs(
    pool: SortedIntSet,
    d: int,
    ell: int,
    m: int,
    n: int,
    profile: ConstantsProfile = TUNED,
    gain_target: Optional[int] = None,
) -> tuple[int, list[Pair]]:
    """Extract conflict-free augmentation pairs until one case reaches its
    target: case 1 at case1_pair_factor*d*log2(d) pairs, case 2 at
    window_div*gamma pairs or (when given) at a total length gain of
    gain_target. Returns (case, pairs of that case)."""
    gamma = gamma_parameter(m, n, ell, profile)
    scan = GapScan(pool.elems, d, ell, gamma, profile)
    c1_target = (
        profile.case1_pair_factor * d * ceil_log2(d) if d >= 2 else None
    )
    c2_pair_target = ceil_div(
        profile.window_div * gamma.numerator, gamma.denominator
    )
    case1: list[Pair] = []
    case2: list[Pair] = []
    gain = 0
    while True:
        hit = find_aug_pair(scan)
        if hit is None:
            break
        case, i, j = hit
        lo, hi = scan.value_pair(i, j)
        scan.remove_pair(i, j)
        if case == 1:
            case1.append((lo, hi))
            if c1_target is not None and len(case1) >= c1_target:
                return 1, case1
        else:
            case2.append((lo, hi))
            gain += (hi - lo) // d
            if gain_target is not None and gain >= gain_target:
                return 2, case2
            if len(case2) >= c2_pair_target:
                return 2, case2
    if case1:
        return 1, case1
    if case2:
        return 2, case2
    raise Exhausted(f"no qualifying augmentation pair (d={d}, ell={ell})")


# ---------------------------------------------------------------------------
# Residue ladder from non-divisible pairs
# ---------------------------------------------------------------------------

class ResidueLadderAccessor:
    """Ladder whose rungs are subset sums of pair endpoints: rung i is
    congruent to s_q + i*d' modulo d, realized by flipping pairs whose gap
    residues solve the inner progression over the residues."""

    def __init__(self, inner, t_star: PairSet, d: int, seed: int):
        self.inner = inner
        self.t_star = t_star
        self.d = d
        self.dp = inner.ap.diff
        self.seed = seed
        self.pairs = t_star.pairs
        self.by_res: dict[int, list[int]] = {}
        for idx, (lo, hi) in enumerate(self.pairs):
            self.by_res.setdefault((hi - lo) % d, []).append(idx)
        self.base_sum = t_star.base_sum
        self.s_q = self.base_sum + inner.ap.start
        u_parts = min(inner.parts_per_query, inner.ap.last)
        g_max = max((hi - lo for lo, hi in self.pairs), default=0)
        self.h_min = -ceil_div(inner.ap.start, d)
        self.h_max = (u_parts * g_max - inner.ap.start) // d
        self.budget = 0
        self.parts_per_lookup = len(self.pairs)

    def lookup(self, i: int) -> tuple[int, tuple[tuple[int, int], ...]]:
        rng = RandomSource(self.seed).derive("ladder", i)
        sol = self.inner.query(i, rng)
        chosen: set[int] = set()
        shift = 0
        for r, c in sol.parts:
            if r == 0 or r == self.d:
                continue
            idxs = self.by_res.get(r, ())
            contract(c <= len(idxs), f"residue {r} lacks pairs for count {c}")
            for idx in idxs[:c]:
                chosen.add(idx)
                shift += self.pairs[idx][1] - self.pairs[idx][0]
        q = self.base_sum + shift
        contract(
            (q - self.s_q) % self.d == (i * self.dp) % self.d,
            "ladder rung residue mismatch",
        )
        contract(
            self.h_min <= (q - self.s_q) // self.d <= self.h_max,
            "ladder rung outside its height window",
        )
        parts = tuple(
            (hi if idx in chosen else lo, 1)
            for idx, (lo, hi) in enumerate(self.pairs)
        )
        return q, parts


@dataclass(frozen=True)
class ResidueLadderResult:
    accessor: ResidueLadderAccessor
    t_star: PairSet
    dp: int


def residue_ladder(
    pairs: Sequence[Pair],
    d: int,
    profile: ConstantsProfile = TUNED,
    seed: int = 0,
) -> ResidueLadderResult:
    """Ladder over S(A_{T*}) for pairs whose gaps d does not divide.

    d' = gcd of the gap residues together with d, a proper divisor of d.
    """
    require(d >= 2, "modulus-at-least-2", f"d={d}")
    t = PairSet(tuple(pairs))
    require(
        all((hi - lo) % d for lo, hi in t.pairs),
        "gaps-not-divisible",
        "residue ladder needs d to divide no gap",
    )
    if profile.enforce_caps:
        require(
            d * profile.pair_cap * ceil_log2(2 * len(t)) <= len(t),
            "pairs-vs-modulus-cap",
            f"d={d}, |T|={len(t)}",
        )
    residues = [(hi - lo) % d for lo, hi in t.pairs]
    u = _uniformize_multiplicity(residues)
    mult: dict[int, int] = {}
    for r in residues:
        mult[r] = mult.get(r, 0) + 1
    kept: dict[int, list[Pair]] = {}
    for (lo, hi), r in zip(t.pairs, residues):
        if mult[r] < u:
            continue
        bucket = kept.setdefault(r, [])
        if len(bucket) < u:
            bucket.append((lo, hi))
    r_set = SortedIntSet.from_iterable({0, d} | set(kept))
    inner = ap_with_gcd_diff(r_set, d)
    dp = inner.ap.diff
    contract(1 <= dp < d and d % dp == 0, "residue gcd must properly divide d")
    star: list[Pair] = []
    for r, plist in sorted(kept.items()):
        need = _needed_per_value(inner, r)
        if need > len(plist):
            raise Exhausted(
                f"residue {r} needs multiplicity {need}, uniform set has {len(plist)}"
            )
        star.extend(plist[:need])
    t_star = PairSet(tuple(star))
    if profile.enforce_caps:
        contract(len(t_star) <= profile.pair_cap * d, "ladder coreset above cap")
    accessor = ResidueLadderAccessor(inner, t_star, d, seed)
    return ResidueLadderResult(accessor, t_star, dp)


# ---------------------------------------------------------------------------
# One augmentation round and the full pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtendOnceResult:
    ap: ArithProgression
    layers: tuple[Layer, ...]
    used: SortedIntSet
    case: int
    new_diff: int


def extend_ap_once(
    p: ArithProgression,
    pool: SortedIntSet,
    n: int,
    m: int,
    profile: ConstantsProfile = TUNED,
    gain_target: Optional[int] = None,
    seed: int = 0,
) -> ExtendOnceResult:
    """Grow the progression by at least gain_target (default ceil(l/2)) using
    pairs from the pool; consumed elements are reported in `used`."""
    d, ell = p.diff, p.length
    if gain_target is None:
        gain_target = ceil_div(ell, 2)
    gamma = gamma_parameter(m, n, ell, profile)
    if profile.enforce_caps:
        require(ell * n >= profile.min_len_factor * m, "aug-min-length",
                f"ell={ell} < {profile.min_len_factor}m/n")
        reserve = (
            n
            + profile.reserve_factor * d * ceil_log2(max(d, 2))
            + ceil_div(profile.window_lo_div * gamma.numerator, gamma.denominator)
        )
        require(len(pool) >= reserve, "aug-availability",
                f"|pool|={len(pool)} < {reserve}")
    case, pairs = extract_aug_pairs(pool, d, ell, m, n, profile, gain_target)
    layers: list[Layer] = []
    used_vals: list[int] = []
    if case == 2:
        cur = p
        for lo, hi in pairs:
            if cur.length >= ell + gain_target:
                break
            cur, layer = augment_div_pair(cur, lo, hi - lo, 1)
            layers.insert(0, layer)
            used_vals.extend((lo, hi))
        new_diff = d
    else:
        ladder = residue_ladder(pairs, d, profile, seed)
        if p.length < ladder.accessor.h_max - ladder.accessor.h_min:
            raise Exhausted(
                f"ladder window {ladder.accessor.h_max - ladder.accessor.h_min} "
                f"exceeds progression length {p.length}"
            )
        cur, layer = augment_by_ladder(p, ladder.accessor)
        layers = [layer]
        for lo, hi in ladder.t_star.pairs:
            used_vals.extend((lo, hi))
        new_diff = ladder.dp
    if cur.length < ell + gain_target:
        raise Exhausted(
            f"augmentation gained {cur.length - ell}, wanted {gain_target}"
        )
    return ExtendOnceResult(cur, tuple(layers), SortedIntSet.from_iterable(used_vals), case, new_diff)


def coreset_size_bound(ell: int, n: int, profile: ConstantsProfile) -> int:
    """Allowed coreset size: the scaled factor*ell*log2(n)/n law, plus the
    same factor times log2(ell) additively (any progression of length ell
    needs log2(ell) elements, which the pure ratio law drops below when
    ell << n)."""
    f = profile.coreset_factor
    return ceil_div(f * ell * ceil_log2(max(2, n)), n) + f * ceil_log2(2 * ell + 2)


@dataclass(frozen=True)
class SubsetSumApResult:
    """AP of length ell in S(coreset) with a subset-sum witness."""

    ap: ArithProgression
    witness: ApWitness
    coreset: SortedIntSet
    rounds: int
    dropped: int
    profile_name: str


def ap_in_subset_sums(
    a_raw,
    ell: int,
    profile: ConstantsProfile = TUNED,
    seed: int = 0,
) -> SubsetSumApResult:
    """{s} + {0, d, ..., ell*d} inside S(A') for a small coreset A' of A,
    with d <= 7m/n and element-disjoint certificates.

    Under the paper profile every published inequality is enforced and desk
    inputs are rejected; under the tuned profile thresholds are advisory and
    genuine construction failure raises Exhausted.
    """
    a = a_raw if isinstance(a_raw, SortedIntSet) else normalize(a_raw)[0]
    require(len(a) >= 1, "set-nonempty")
    require(a.min >= 1, "positive-elements", "subset-sum input must be within [1, m]")
    big_n = len(a)
    m = a.max
    require(ell >= 1, "length-positive", f"ell={ell}")
    if profile.enforce_caps:
        require(ell >= m, "length-at-least-max", f"ell={ell} < m={m}")
        require(
            ell * profile.length_cap_factor * ceil_log2(2 * big_n) <= big_n * big_n,
            "length-cap",
            f"ell={ell} > n^2/({profile.length_cap_factor}*log2(2n)) with n={big_n}",
        )
    nbar = big_n // 6
    require(nbar >= 1 and 7 * nbar >= big_n, "partition-floor", f"n={big_n}")
    first = SortedIntSet(a.elems[: 4 * nbar])
    rest = list(a.elems[4 * nbar:])
    ell0 = ceil_div(profile.min_len_factor * ell, nbar)
    if not profile.enforce_caps:
        # desk-scale clamp: long enough that the gap windows are nonempty,
        # short enough that the pair coreset stays small
        cap = nbar // max(1, profile.pair_cap * ceil_log2(2 * nbar))
        floor = max(2 * profile.window_div, ceil_div(2 * m, nbar))
        ell0 = min(max(ell0, floor), max(cap, floor), ell)
        ell0 = max(ell0, 1)
    short = short_ap_in_subset_sums(first, ell0, profile)
    used_first = set(short.coreset.elems)
    pool_vals = set(rest) | (set(first.elems) - used_first)
    pool = SortedIntSet.from_iterable(pool_vals)
    p = short.ap
    layers: list[Layer] = []
    coreset_vals = set(short.coreset.elems)
    rounds = 0
    round_cap = 2 * ceil_log2(max(2, nbar)) + ceil_log2(ell + 2) + 8
    while p.length < ell:
        rounds += 1
        contract(rounds <= round_cap, "augmentation rounds exceeded the cap")
        gain_target = min(ceil_div(p.length, 2), ell - p.length)
        while True:
            # a failed round consumes nothing, so retry with a smaller target
            try:
                step = extend_ap_once(p, pool, nbar, m, profile, gain_target, seed + rounds)
                break
            except Exhausted as exc:
                if profile.enforce_caps or gain_target <= 1:
                    raise Exhausted(exc.reason, partial=p) from exc
                gain_target //= 2
        p = step.ap
        layers = list(step.layers) + layers
        coreset_vals |= set(step.used.elems)
        pool = SortedIntSet.from_iterable(set(pool.elems) - set(step.used.elems))
    coreset = SortedIntSet.from_iterable(coreset_vals)
    contract(p.diff * big_n <= 7 * m, f"diff {p.diff} above 7m/n")
    bound = coreset_size_bound(ell, big_n, profile)
    if len(coreset) > bound:
        raise Exhausted(f"coreset size {len(coreset)} above bound {bound}", partial=p)
    witness = ApWitness(coreset, short.witness.leaf, layers, fold_budget=0)
    contract(witness.ap == p, "assembled witness progression mismatch")
    witness = witness.truncated(ell)
    return SubsetSumApResult(
        witness.ap, witness, coreset, rounds, short.dropped, profile.name
    )
