"""XOR-mask sets forming binary codes of minimum distance t/2.

A mask set over block length t is a list of t-bit masks such that every
mask has Hamming weight >= t/2 and every pair of distinct masks differs
in >= t/2 positions; together with the zero mask they form a binary code
of minimum distance t/2.  For power-of-two t the union is in fact a
linear [t, log2(t) + 1, t/2] code, i.e. a first-order Reed-Muller code
up to coordinate relabeling.  XOR-ing a seed bitstring with such masks
yields groups of strings that are pairwise "maximally dissimilar",
which is what the correlated sampler in :mod:`stabsparse.magic`
consumes.

Masks are little-endian integers (bit q = position q) serialized as hex.
Generation is a pure function of t; no randomness is involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

DIRECT = "DIRECT"
EVEN = "EVEN"
PADDED = "PADDED"
POW2 = "POW2"


def popcount(x: int) -> int:
    return x.bit_count()


def _is_pow2(t: int) -> bool:
    return t >= 1 and (t & (t - 1)) == 0


@dataclass(frozen=True)
class MaskSet:
    """XOR masks of a common block length with a distance-t/2 guarantee."""

    block_length: int
    masks: tuple
    strategy: str
    source_t: int

    def __len__(self) -> int:
        return len(self.masks)

    def min_weight(self) -> int:
        return min(popcount(m) for m in self.masks)

    def min_pairwise_distance(self) -> int:
        ms = self.masks
        best = self.block_length
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                best = min(best, popcount(ms[i] ^ ms[j]))
        return best

    def to_json(self) -> dict:
        return {
            "block_length": self.block_length,
            "strategy": self.strategy,
            "source_t": self.source_t,
            "masks": [format(m, "x") for m in self.masks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MaskSet":
        return cls(
            block_length=int(data["block_length"]),
            masks=tuple(int(m, 16) for m in data["masks"]),
            strategy=data["strategy"],
            source_t=int(data.get("source_t", data["block_length"])),
        )

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path: str) -> "MaskSet":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# the binary-tree bitstring family
# ---------------------------------------------------------------------------


def _complement(x: int, width: int) -> int:
    return x ^ ((1 << width) - 1)


def _complement_upper(x: int, width: int) -> int:
    half = width // 2
    return x ^ (((1 << half) - 1) << half)


def _clone(x: int, width: int) -> int:
    return x | (x << width)


def tree_bitstrings(t: int) -> list:
    """The 2t-1 't additional bitstrings' family for t a power of two.

    Grown from the two-bit seeds {10, 01, 00} by cloning each string and
    complementing the upper half of the clone, plus one extra string per
    level: the all-zeros clone with both halves complemented in turn
    (equivalently the top half of all-ones followed by zeros).  Every
    pair of outputs, and every output against the all-ones string,
    differs in at least t/2 positions.
    """
    if not _is_pow2(t) or t < 2:
        raise ValueError("t must be a power of two, at least 2")
    # seeds: alpha=10, beta=01, gamma=00 as little-endian ints of width 2
    yis = [0b01, 0b10, 0b00]
    width = 2
    while width < t:
        clones = [_clone(y, width) for y in yis]
        flipped = [_complement_upper(c, 2 * width) for c in clones]
        extra = _complement(_complement_upper(clones[2], 2 * width), 2 * width)
        yis = clones + flipped + [extra]
        width *= 2
    return yis


def generate_masks_pow2(t: int) -> MaskSet:
    """2t-1 masks of length t (t a power of two): complemented tree strings."""
    ys = tree_bitstrings(t)
    masks = tuple(_complement(y, t) for y in ys)
    return MaskSet(block_length=t, masks=masks, strategy=POW2, source_t=t)


def generate_masks_even(t: int) -> MaskSet:
    """Masks for any even t by tiling the largest power-of-two divisor.

    With 2^k the largest power of two dividing t, the 2^(k+1)-1 masks of
    length 2^k are each repeated t / 2^k times.  Tiling multiplies all
    weights and pairwise distances by the repetition count, so the
    minimum distance t/2 is preserved.
    """
    if t < 2 or t % 2 != 0:
        raise ValueError("t must be even and at least 2")
    base = t & (-t)  # largest power of two dividing t
    reps = t // base
    base_set = generate_masks_pow2(base)
    if reps == 1:
        return base_set
    masks = []
    for m in base_set.masks:
        tiled = 0
        for r in range(reps):
            tiled |= m << (r * base)
        masks.append(tiled)
    return MaskSet(block_length=t, masks=tuple(masks), strategy=EVEN, source_t=t)


def generate_masks_padded(t: int, count: int) -> MaskSet:
    """More than 2t-1 masks by moving to a longer block length.

    Picks the smallest power of two t' with 2t'-1 >= count and generates
    at block length t'.  The caller embeds its t qubits in the first t
    positions and treats the remaining t'-t as ancillas to discard at
    the end of the calculation; the inner-product cost then scales with
    t' instead of t.
    """
    if count <= 2 * t - 1:
        raise ValueError("direct generation suffices; padding not needed")
    tp = 2
    while 2 * tp - 1 < count or tp < t:
        tp *= 2
    padded = generate_masks_pow2(tp)
    return MaskSet(
        block_length=tp, masks=padded.masks, strategy=PADDED, source_t=t
    )


@dataclass(frozen=True)
class MaskReport:
    count: int
    min_weight: int
    min_pairwise_distance: int
    ok: bool


def verify_mask_set(mask_set: MaskSet) -> MaskReport:
    """Exhaustive weight / pairwise-distance check against block_length/2."""
    half = mask_set.block_length / 2.0
    wmin = mask_set.min_weight() if len(mask_set) else mask_set.block_length
    dmin = (
        mask_set.min_pairwise_distance()
        if len(mask_set) > 1
        else mask_set.block_length
    )
    return MaskReport(
        count=len(mask_set),
        min_weight=wmin,
        min_pairwise_distance=dmin,
        ok=(wmin >= half and dmin >= half),
    )


@dataclass(frozen=True)
class SupplementPlan:
    strategy: str
    block_length: int
    available: int
    realized: int


def plan_supplement(t: int, f_required: int) -> SupplementPlan:
    """Choose a generation strategy realizing at least f_required masks.

    DIRECT for power-of-two t with f_required <= 2t-1, EVEN when the
    even-t family suffices, PADDED (with the block length it implies)
    otherwise.  realized is min(f_required, available).
    """
    if f_required < 0:
        raise ValueError("f_required must be nonnegative")
    if _is_pow2(t) and t >= 2:
        avail = 2 * t - 1
        if f_required <= avail:
            return SupplementPlan(DIRECT, t, avail, f_required)
    elif t % 2 == 0 and t >= 2:
        base = t & (-t)
        avail = 2 * base - 1
        if f_required <= avail:
            return SupplementPlan(EVEN, t, avail, f_required)
    tp = 2
    while 2 * tp - 1 < f_required or tp < t:
        tp *= 2
    return SupplementPlan(PADDED, tp, 2 * tp - 1, f_required)


def generate_for_plan(t: int, plan: SupplementPlan) -> MaskSet:
    if plan.strategy == DIRECT:
        return generate_masks_pow2(t)
    if plan.strategy == EVEN:
        return generate_masks_even(t)
    return generate_masks_padded(t, max(plan.realized, 2 * t))
