"""Arithmetic progressions of length m inside 332k-fold sumsets.

Pipeline: locate a dense endpoint u by a linear two-pointer scan, shift the
dense side into a set B containing {0,1}, cover {0..m} with a density witness
over B (each b expands back into two base elements), handle general sets by
working modulo the closest-pair gap, and finally subdivide the common
difference with the augmentation framework until it reaches 1.

Every stage returns an ApWitness; certificates are verified by core, never
trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from .augment import ApWitness, augment_to_full
from .core import (
    ArithProgression,
    InternalContract,
    PreconditionViolated,
    RandomSource,
    SortedIntSet,
    ceil_div,
    contract,
    gcd_all,
    normalize,
    require,
)
from .density_witness import DensityWitness, build_density_witness


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


def _scan_min_good_start(elems: Sequence[int], m: int, k: int) -> int:
    """Two-pointer scan for the smallest index i such that every pair (i, j),
    i <= j <= n, satisfies 2k(j - i) >= a_j - a_i (sentinel a_n = m + 1).

    The scan maintains the invariant that (i, t) is good for all i <= t <= j.
    """
    a = list(elems) + [m + 1]
    i = 0
    for j in range(1, len(a)):
        while 2 * k * (j - i) < a[j] - a[i]:
            i += 1
    return i


def find_dense_endpoint(a: SortedIntSet, m: int, k: int) -> tuple[int, Side]:
    """An endpoint u such that A has density >= 1/2k on one side of u.

    Left: -1 <= u <= m/2 and |A[u+1, v]| >= (v-u)/2k for every v in [u+1, m].
    Right: the mirrored condition, with u >= ceil(m/2).
    """
    n = len(a)
    require(n >= 1, "set-nonempty")
    require(k >= 1, "fold-positive", f"k={k}")
    require(n * k >= m + 1, "cardinality", f"n*k = {n * k} < m+1 = {m + 1}")
    require(a.max <= m, "elements-within-interval", f"max={a.max} > m={m}")
    aug = list(a.elems) + [m + 1]
    i = _scan_min_good_start(a.elems, m, k)
    u = aug[i] - 1
    if 2 * u <= m:
        return u, Side.LEFT
    reflected = tuple(m - e for e in reversed(a.elems))
    i2 = _scan_min_good_start(reflected, m, k)
    aug2 = list(reflected) + [m + 1]
    u2 = aug2[i2] - 1
    contract(2 * u2 <= m, "neither scan side satisfies the density condition")
    return m - u2, Side.RIGHT


class RestrictedLeaf:
    """Leaf for {s} + {0..m} in 32kA when {0,1} is in A.

    Expands each b from the density witness over B into two elements of A.
    On the right side the witness is queried at the reflected index m - j.
    """

    def __init__(self, dw: DensityWitness, base: SortedIntSet, u: int, side: Side, m: int):
        self.dw = dw
        self.base = base
        self.u = u
        self.side = side
        self.m = m
        self.parts_per_query = 2 * dw.fold_budget
        if side is Side.LEFT:
            start = dw.fold_budget * (u + 1)
        else:
            start = dw.fold_budget * u - m
        contract(start >= 0, "restricted progression start must be nonnegative")
        self.ap = ArithProgression(start, 1, m)

    def query_parts(self, j: int, rng: RandomSource):
        inner = j if self.side is Side.LEFT else self.m - j
        u = self.u
        left = self.side is Side.LEFT
        parts: list[tuple[int, int]] = []
        for b, c in self.dw.query_parts(inner, rng):
            if left:
                pair = (0, u + 1) if b == 0 else (1, u + b)
            else:
                pair = (1, u - 1) if b == 0 else (0, u - b)
            parts.append((pair[0], c))
            parts.append((pair[1], c))
        return parts


def ap_restricted(a: SortedIntSet, m: int, k: int) -> tuple[ArithProgression, ApWitness]:
    """{s} + {0, 1, ..., m} in 32kA, given {0,1} in A and n*k >= m+1."""
    require(0 in a and 1 in a, "membership", "ap_restricted needs {0,1} in A")
    require(m >= 1, "interval-bound-positive", f"m={m}")
    require(len(a) * k >= m + 1, "cardinality", f"n*k = {len(a) * k} < m+1 = {m + 1}")
    require(a.max <= m, "elements-within-interval", f"max={a.max} > m={m}")
    u, side = find_dense_endpoint(a, m, k)
    half = ceil_div(m, 2)
    if side is Side.LEFT:
        b_vals = {0} | {e - u for e in a.elems if u + 1 <= e <= u + half}
    else:
        b_vals = {0} | {u - e for e in a.elems if u - half <= e <= u - 1}
    b_set = SortedIntSet.from_iterable(b_vals)
    contract(1 in b_set, "the endpoint guarantees u+1 (resp. u-1) in A, so 1 in B")
    try:
        dw = build_density_witness(b_set, m, 8 * k)
    except PreconditionViolated as exc:
        raise InternalContract(f"shifted set lost the 1/(4k) density bound: {exc}") from exc
    leaf = RestrictedLeaf(dw, a, u, side, m)
    witness = ApWitness(a, leaf, (), fold_budget=32 * k)
    return leaf.ap, witness


class ShortLeaf:
    """Leaf for the closest-pair reduction: each b of the inner witness over
    gap-multiples expands to a pair of A-elements summing to b*g + a' + a*."""

    def __init__(self, inner: ApWitness, base: SortedIntSet, g: int, a_prime: int, a_star: int):
        self.inner = inner
        self.base = base
        self.g = g
        self.a_prime = a_prime
        self.a_star = a_star
        self.parts_per_query = 2 * inner.parts_per_query
        start = g * inner.ap.start + inner.parts_per_query * (a_prime + a_star)
        self.ap = ArithProgression(start, g, inner.ap.length)
        # the inner witness is layerless, so raw leaf parts can pass through
        # without building the intermediate certificate
        self._inner_leaf = inner.leaf if not inner.layers else None

    def query_parts(self, j: int, rng: RandomSource):
        if self._inner_leaf is not None:
            inner_parts = self._inner_leaf.query_parts(j, rng)
        else:
            inner_parts = self.inner.query(j, rng).parts
        g, ap_, a_star = self.g, self.a_prime, self.a_star
        parts: list[tuple[int, int]] = []
        for b, c in inner_parts:
            v = b * g + ap_
            if v in self.base:
                parts.append((v, c))
                parts.append((a_star, c))
            else:
                parts.append((v - g, c))
                parts.append((a_star + g, c))
        return parts


def ap_short(a: SortedIntSet, m: int, k: int) -> tuple[ArithProgression, ApWitness]:
    """{s} + {0, g, ..., l*g} in 320kA with g <= 2m/n and l*min(g, n) >= 5m."""
    n = len(a)
    require(n >= 2, "set-at-least-two", f"n={n}")
    require(m >= 1, "interval-bound-positive", f"m={m}")
    require(n * k >= m + 1, "cardinality", f"n*k = {n * k} < m+1 = {m + 1}")
    require(a.max <= m, "elements-within-interval", f"max={a.max} > m={m}")
    elems = a.elems
    g, a_star = min(
        (elems[i + 1] - elems[i], elems[i]) for i in range(n - 1)
    )
    contract(g * (n - 1) <= m, "closest gap exceeds m/(n-1)")
    residues: dict[int, int] = {}
    for e in elems:
        r = e % g
        residues[r] = residues.get(r, 0) + 1
    t = len(residues)
    r_best = min(residues, key=lambda r: (-residues[r], r))
    cls = [e for e in elems if e % g == r_best]
    a_prime = cls[0]
    b_vals = {(e - a_prime) // g for e in cls}
    b_vals |= {b + 1 for b in set(b_vals)}
    b_set = SortedIntSet.from_iterable(b_vals)
    m2 = ceil_div(5 * m, t)
    k2 = 5 * k
    contract(len(b_set) * k2 >= m2 + 1, "shifted gap set lost the cardinality bound")
    contract(b_set.max <= m2, "shifted gap set exceeds its interval")
    p_b, w_b = ap_restricted(b_set, m2, k2)
    leaf = ShortLeaf(w_b, a, g, a_prime, a_star)
    witness = ApWitness(a, leaf, (), fold_budget=320 * k)
    contract(leaf.ap.length * min(g, n) >= 5 * m, "short progression too short")
    return leaf.ap, witness


@dataclass(frozen=True)
class KfoldApResult:
    """AP of length m with diff 1 plus its witness inside the k-fold sumset."""

    ap: ArithProgression
    witness: ApWitness
    k: int
    k_eff: int
    fold_budget: int


def ap_in_kfold_sumset(
    a_raw: Union[Sequence[int], SortedIntSet], m: int, k: int
) -> KfoldApResult:
    """{s} + {0, 1, ..., m} inside 332kA, with a per-term certificate witness.

    Requires (after sorting/dedup) 0 in A, gcd(A) = 1, A within [0, m], and
    n*k >= m + 1. The pipeline internally clamps the fold to
    k_eff = ceil((m+1)/n); certificates then also hold for any budget >= that.
    """
    a = a_raw if isinstance(a_raw, SortedIntSet) else normalize(a_raw)[0]
    require(len(a) >= 1, "set-nonempty")
    require(m >= 1, "interval-bound-positive", f"m={m}")
    require(k >= 1, "fold-positive", f"k={k}")
    require(0 in a, "zero-in-set")
    require(gcd_all(a) == 1, "gcd-one", f"gcd={gcd_all(a)}")
    require(a.max <= m, "elements-within-interval", f"max={a.max} > m={m}")
    n = len(a)
    require(n * k >= m + 1, "cardinality", f"n*k = {n * k} < m+1 = {m + 1}")
    k_eff = ceil_div(m + 1, n)
    contract(k_eff <= k, "clamped fold must not exceed the requested fold")
    p0, w0 = ap_short(a, m, k_eff)
    if p0.diff == 1:
        layers: tuple = ()
        p_final, budget_extra = p0, 0
    else:
        p_final, layers, budget_extra = augment_to_full(a, p0, m)
    fold_budget = 320 * k_eff + budget_extra
    contract(fold_budget <= 332 * k_eff, f"budget {fold_budget} exceeds 332*k_eff")
    witness = ApWitness(a, w0.leaf, layers, fold_budget=fold_budget)
    contract(witness.ap == p_final, "assembled witness progression mismatch")
    contract(p_final.length >= m, "final progression shorter than m")
    witness = witness.truncated(m)
    return KfoldApResult(witness.ap, witness, k, k_eff, fold_budget)
