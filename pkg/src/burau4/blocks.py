"""Blocks and roads of a minimal form, and the normal-braid predicate.

A block is a short stretch of the minimal form carrying one side of a braid
relation:

* a 2-block ``s1^a_p s3^b_p s2 s1^a_{p+1}`` (a single sigma_2 between two
  sigma_1 powers), or
* a 3-block ``s2^c_{p-1} s3 s2^c_p`` (a single sigma_3 between two sigma_2
  powers).

Roads are the maximal stretches not overlapping any block.  Spans are
half-open letter ranges in the minimal word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .braid import PositiveBraid, _syllable_offsets

__all__ = [
    "Block",
    "Road",
    "BlockRoadDecomposition",
    "block_road_decomposition",
    "classify_block",
    "is_normal_block",
    "is_normal_braid",
    "is_normal_braid_syllables",
    "NormalityReport",
]


@dataclass(frozen=True)
class Block:
    kind: str  # "2" or "3"
    p: int  # syllable of sigma_1^a_p (2-block) or of the lone sigma_3 (3-block)
    letters: tuple[int, int]
    cls: str = "generic"  # "initial", "singular" or "generic"

    def exponents(self, sigma: PositiveBraid) -> tuple[int, ...]:
        p = self.p
        if self.kind == "2":
            return (sigma.a(p), sigma.b(p), sigma.a(p + 1))
        return (sigma.c(p - 1), sigma.c(p))

    def to_json(self, sigma: Optional[PositiveBraid] = None) -> dict:
        out = {"kind": "block", "type": f"{self.kind}-block", "p": self.p, "span": list(self.letters), "class": self.cls}
        if sigma is not None:
            out["exponents"] = list(self.exponents(sigma))
        return out


@dataclass(frozen=True)
class Road:
    letters: tuple[int, int]

    @property
    def empty(self) -> bool:
        return self.letters[0] >= self.letters[1]

    def to_json(self) -> dict:
        return {"kind": "road", "span": list(self.letters)}


@dataclass
class BlockRoadDecomposition:
    """Alternating B_1 R_1 ... B_k R_k; B_1 is None when the word opens with a road."""

    sigma: PositiveBraid
    pieces: list[tuple[Optional[Block], Road]] = field(default_factory=list)

    @property
    def blocks(self) -> list[Block]:
        return [b for b, _ in self.pieces if b is not None]

    @property
    def roads(self) -> list[Road]:
        return [r for _, r in self.pieces]

    def to_json(self) -> list[dict]:
        out = []
        for b, r in self.pieces:
            if b is not None:
                out.append(b.to_json(self.sigma))
            out.append(r.to_json())
        return out


def _candidate_blocks(sigma: PositiveBraid) -> list[Block]:
    n = sigma.n
    off = _syllable_offsets(sigma)
    found = []
    for p in range(1, n + 1):
        a, b, c = sigma.a(p), sigma.b(p), sigma.c(p)
        # 2-block: s1^a s3^b s2 s1^a' with a single sigma_2
        if a > 0 and c == 1 and p < n and sigma.a(p + 1) > 0:
            lo = off[p - 1]
            if p == 1 and b == 0:
                # the initial block also absorbs the sigma_3 run that follows
                hi = off[p] + sigma.a(p + 1) + sigma.b(p + 1)
            else:
                hi = off[p] + sigma.a(p + 1)
            found.append(Block("2", p, (lo, hi)))
        # 3-block: s2^c s3 s2^c' with a lone sigma_3
        if p >= 2 and a == 0 and b == 1 and c > 0 and sigma.c(p - 1) > 0:
            lo = off[p - 1] - sigma.c(p - 1)
            hi = off[p]
            found.append(Block("3", p, (lo, hi)))
    found.sort(key=lambda blk: blk.letters)
    return found


def classify_block(block: Block, sigma: PositiveBraid) -> str:
    p = block.p
    if block.kind == "2":
        if p == 1 and sigma.b(1) == 0:
            return "initial"
        if sigma.b(p) == 1:
            return "singular"
        return "generic"
    if sigma.c(p) == 1 and sigma.a(p + 1) > 0:
        return "singular"
    return "generic"


def block_road_decomposition(sigma: PositiveBraid) -> BlockRoadDecomposition:
    """Locate blocks left to right (greedy on overlap) and fill roads between."""
    chosen: list[Block] = []
    for blk in _candidate_blocks(sigma):
        if chosen and blk.letters[0] < chosen[-1].letters[1]:
            continue
        chosen.append(Block(blk.kind, blk.p, blk.letters, classify_block(blk, sigma)))
    total = sigma.length
    dec = BlockRoadDecomposition(sigma)
    if not chosen or chosen[0].letters[0] > 0:
        nxt = chosen[0].letters[0] if chosen else total
        dec.pieces.append((None, Road((0, nxt))))
    for i, blk in enumerate(chosen):
        nxt = chosen[i + 1].letters[0] if i + 1 < len(chosen) else total
        dec.pieces.append((blk, Road((blk.letters[1], nxt))))
    return dec


def is_normal_block(block: Block, sigma: PositiveBraid) -> bool:
    if block.cls == "initial":
        raise ValueError("normality is only defined for non-initial blocks")
    p = block.p
    if block.kind == "2":
        a, b, a_next = sigma.a(p), sigma.b(p), sigma.a(p + 1)
        if a >= b + 1 and a_next == 2:
            return False
        if a == 1 == b and a_next == 2:
            return False
        return True
    if block.cls == "singular" or sigma.c(p) == 2:
        return False
    if sigma.a(p - 1) + 1 >= sigma.c(p) and sigma.c(p - 1) == 1:
        return False
    return True


@dataclass
class NormalityReport:
    normal: bool
    abnormal_blocks: list[Block]

    def to_json(self, sigma: Optional[PositiveBraid] = None) -> dict:
        return {"normal": self.normal, "abnormal_blocks": [b.to_json(sigma) for b in self.abnormal_blocks]}


def is_normal_braid(sigma: PositiveBraid) -> NormalityReport:
    bad = [b for b in block_road_decomposition(sigma).blocks if b.cls != "initial" and not is_normal_block(b, sigma)]
    return NormalityReport(not bad, bad)


def is_normal_braid_syllables(sigma: PositiveBraid) -> bool:
    """Direct reading of the two syllable conditions for every p < n."""
    a, b, c, n = sigma.a, sigma.b, sigma.c, sigma.n
    for p in range(1, n):
        if a(p) == 0 and b(p) == 1:
            if c(p) in (1, 2):
                return False
            if a(p - 1) + 1 >= c(p) and c(p - 1) == 1:
                return False
        if b(p) > 0 and a(p) >= b(p) + 1 and c(p) == 1 and a(p + 1) == 2:
            return False
        if a(p) == 1 and b(p) == 1 and c(p) == 1 and a(p + 1) == 2:
            return False
    return True
