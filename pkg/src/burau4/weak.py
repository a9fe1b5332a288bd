"""Bad subroads, abnormal strings and the weakly-normal predicate.

Everything here reads the minimal form through two layers:

* the isolated / non-isolated sigma_2 pieces of ``braid.isolated_sigma2_decomposition``;
* the block-road decomposition of ``blocks.block_road_decomposition``.

A subroad is a half-open letter span of the minimal word that starts and
ends on run boundaries (a sigma_2 run, or a full sigma_1^a sigma_3^b run).
Inside a non-isolated piece a subroad splits into *i-constant* stretches
(sigma_2 powers alternating with powers of one sigma_i) and *alternating*
stretches (sigma_2 powers alternating with sigma_1 sigma_3 pairs).  Inside
an isolated piece it is a single *i-initial* or *end* isolated factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .blocks import Block, block_road_decomposition, is_normal_block
from .braid import PositiveBraid, _syllable_offsets, isolated_sigma2_decomposition
from .paths import SigmaPath, is_admissible

__all__ = [
    "ElementarySubroad",
    "BadSubroad",
    "SingularSubroad",
    "BlockWidth",
    "StringBlock",
    "AbnormalString",
    "WeakNormalityReport",
    "ExtensionResult",
    "WidthError",
    "elementary_decomposition",
    "is_elementary_bad",
    "is_bad_subroad",
    "subroad_weight",
    "singular_subroad",
    "singular_weight",
    "block_width",
    "abnormal_strings",
    "string_sign",
    "is_terminal",
    "is_weakly_normal",
    "unique_bad_extension",
    "enumerate_extensions",
]


def _other(i: int) -> int:
    return 4 - i


# ---------------------------------------------------------------------------
# Runs and items.

@dataclass(frozen=True)
class _Item:
    """A sigma_2 run (kind "2") or a maximal sigma_1^a sigma_3^b run (kind "13")."""

    kind: str
    lo: int
    hi: int
    a: int = 0
    b: int = 0
    c: int = 0

    @property
    def cls(self) -> str:
        if self.kind == "2":
            return "2"
        if self.a and self.b:
            return "A"
        return "1" if self.a else "3"


def _items(word: Sequence[int], lo: int, hi: int) -> list[_Item]:
    out: list[_Item] = []
    k = lo
    while k < hi:
        if word[k] == 2:
            j = k
            while j < hi and word[j] == 2:
                j += 1
            out.append(_Item("2", k, j, c=j - k))
        else:
            j = k
            while j < hi and word[j] == 1:
                j += 1
            a = j - k
            while j < hi and word[j] == 3:
                j += 1
            out.append(_Item("13", k, j, a=a, b=j - k - a))
        k = j
    return out


def _boundaries(word: Sequence[int]) -> set[int]:
    """Letter positions where an s-subproduct of the minimal form may end."""
    return {it.lo for it in _items(word, 0, len(word))} | {len(word)}


def _powers(word: Sequence[int], lo: int, hi: int) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for g in word[lo:hi]:
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + 1)
        else:
            out.append((g, 1))
    return tuple(out)


def _isolated_letters(sigma: PositiveBraid) -> set[int]:
    """Positions of sigma_2 letters from syllables with c = 1."""
    off = _syllable_offsets(sigma)
    out = set()
    for p, s in enumerate(sigma.syllables, start=1):
        if s.c == 1:
            out.add(off[p] - 1)
    return out


# ---------------------------------------------------------------------------
# Elementary subroads.

@dataclass(frozen=True)
class ElementarySubroad:
    kind: str  # "i-constant", "alternating", "1-initial-isolated", "3-initial-isolated", "end-isolated", "sigma2"
    span: tuple[int, int]
    powers: tuple[tuple[int, int], ...]  # (generator, exponent) in word order
    i: Optional[int] = None
    n13: int = 0  # number of sigma_1 sigma_3 pairs
    m2: int = 0  # number of sigma_2 letters

    @property
    def isolated(self) -> bool:
        return self.kind.endswith("isolated")

    @property
    def first(self) -> int:
        return self.powers[0][0]

    @property
    def last(self) -> int:
        return self.powers[-1][0]

    @property
    def last_exponent(self) -> int:
        return self.powers[-1][1]

    def first_non2(self) -> Optional[int]:
        for g, _ in self.powers:
            if g != 2:
                return g
        return None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "span": list(self.span), "powers": [list(p) for p in self.powers]}
        if self.i is not None:
            out["i"] = self.i
        return out


def _split_non_isolated(word: Sequence[int], lo: int, hi: int) -> list[ElementarySubroad]:
    items = _items(word, lo, hi)
    groups = [k for k, it in enumerate(items) if it.kind == "13"]
    if not groups:
        return [ElementarySubroad("sigma2", (lo, hi), _powers(word, lo, hi), m2=hi - lo)] if hi > lo else []
    # each 13 item owns the sigma_2 run in front of it; a trailing run joins the last piece
    pieces: list[tuple[str, list[int]]] = []
    pending = None
    for k, it in enumerate(items):
        if it.kind == "2":
            pending = k
            continue
        lead = [pending] if pending is not None else []
        if pieces and pieces[-1][0] == it.cls:
            pieces[-1][1].extend(lead + [k])
        else:
            pieces.append((it.cls, lead + [k]))
        pending = None
    if pending is not None:
        pieces[-1][1].append(pending)
    out = []
    for _, ks in pieces:
        a, b = items[ks[0]].lo, items[ks[-1]].hi
        cls = next(items[k].cls for k in ks if items[k].kind == "13")
        powers = _powers(word, a, b)
        m2 = sum(items[k].c for k in ks)
        if cls == "A":
            n13 = sum(1 for k in ks if items[k].kind == "13")
            out.append(ElementarySubroad("alternating", (a, b), powers, None, n13, m2))
        else:
            out.append(ElementarySubroad("i-constant", (a, b), powers, int(cls), 0, m2))
    return out


def elementary_decomposition(sigma: PositiveBraid, span: tuple[int, int]) -> list[ElementarySubroad]:
    """Unique factorisation of the subroad ``span`` into elementary subroads."""
    lo, hi = span
    word = sigma.word
    if lo >= hi:
        return []
    out: list[ElementarySubroad] = []
    for seg in isolated_sigma2_decomposition(sigma):
        s_lo, s_hi = seg.letters
        a, b = max(lo, s_lo), min(hi, s_hi)
        if a >= b:
            continue
        if seg.kind == "non-isolated":
            out.extend(_split_non_isolated(word, a, b))
            continue
        powers = _powers(word, a, b)
        m2 = sum(e for g, e in powers if g == 2)
        n13 = sum(1 for it in _items(word, a, b) if it.cls == "A")
        if seg.type == "I" and sigma.a(seg.start) == 0:
            kind, i = "3-initial-isolated", 3
        elif seg.type == "I" and lo <= s_lo and s_hi <= hi:
            kind, i = "end-isolated", None
        else:
            kind, i = "1-initial-isolated", 1
        out.append(ElementarySubroad(kind, (a, b), powers, i, n13, m2))
    return out


def is_elementary_bad(f: ElementarySubroad) -> bool:
    if f.kind in ("i-constant", "sigma2"):
        return all(e <= 2 for _, e in f.powers)
    if f.kind == "alternating":
        return all((e == 2) if g == 2 else (e == 1) for g, e in f.powers)
    if f.kind in ("1-initial-isolated", "3-initial-isolated"):
        i = f.i
        if f.first == 2:
            if f.first_non2() not in (None, _other(i)):
                return False
        elif f.first != i:
            return False
        return all(e <= 2 for g, e in f.powers if g == i)
    if f.kind == "end-isolated":
        return all(e == 1 for g, e in f.powers if g != 2)
    return False


# ---------------------------------------------------------------------------
# Bad subroads.

@dataclass
class BadSubroad:
    span: tuple[int, int]
    factors: list[ElementarySubroad]
    switch: tuple[int, ...]  # the i in {1, 3} for which the subroad is i-switch
    n13: int

    @property
    def last_exponent(self) -> int:
        return self.factors[-1].last_exponent if self.factors else 0

    def terminal(self, i: int) -> Optional[int]:
        """Terminal index for an i-switch reading; None when the last exponent is 1."""
        if self.factors and self.last_exponent <= 1:
            return None
        return i if self.n13 % 2 == 0 else _other(i)

    def to_json(self) -> dict:
        omega, _ = subroad_weight(self, self.switch[0] if self.switch else 1)
        return {
            "span": list(self.span),
            "factors": [f.to_json() for f in self.factors],
            "switch": list(self.switch),
            "weight": omega,
        }


def _last_letter(f: ElementarySubroad) -> int:
    return f.last


def _ordering_ok(fs: list[ElementarySubroad]) -> bool:
    for j, f in enumerate(fs):
        nxt = fs[j + 1] if j + 1 < len(fs) else None
        prev = fs[j - 1] if j > 0 else None
        if f.kind in ("i-constant", "sigma2") and f.i is not None and nxt is not None:
            if nxt.kind == "i-constant" and nxt.i != f.i:
                return False
            if nxt.kind.endswith("initial-isolated") and nxt.i != f.i:
                return False
        if f.kind == "alternating" and prev is not None and nxt is not None:
            i, i2 = _last_letter(prev), nxt.first_non2()
            if i in (1, 3) and i2 in (1, 3):
                if f.n13 % 2 == 0 and i2 != i:
                    return False
                if f.n13 % 2 == 1 and i2 == i:
                    return False
        if f.isolated and nxt is not None and not nxt.isolated:
            if f.m2 % 2 != 0:
                return False
            i = _last_letter(f)
            if i in (1, 3) and nxt.kind == "i-constant" and nxt.i == _other(i):
                return False
    return True


def _resolve_sigma2(fs: list[ElementarySubroad]) -> list[ElementarySubroad]:
    """A bare sigma_2 power takes the index of the constant or initial factor after it."""
    out = list(fs)
    for j, f in enumerate(out):
        if f.kind == "sigma2" and j + 1 < len(out):
            nxt = out[j + 1]
            if nxt.kind in ("i-constant", "1-initial-isolated", "3-initial-isolated"):
                out[j] = ElementarySubroad(f.kind, f.span, f.powers, nxt.i, f.n13, f.m2)
    return out


def _switch_indices(fs: list[ElementarySubroad]) -> tuple[int, ...]:
    if not fs:
        return (1, 3)
    if fs[0].kind == "alternating":
        n, j1 = fs[0].n13, 1
    else:
        n, j1 = 0, 0
    if j1 >= len(fs):
        return (1, 3)
    f = fs[j1]
    if f.kind == "end-isolated" or (f.kind == "sigma2" and f.i is None):
        return (1, 3)
    if f.kind in ("i-constant", "sigma2", "1-initial-isolated", "3-initial-isolated"):
        i0 = f.i
        return (i0,) if n % 2 == 0 else (_other(i0),)
    return ()


def _is_subroad_span(sigma: PositiveBraid, span: tuple[int, int]) -> bool:
    """Run-aligned and disjoint from every block."""
    lo, hi = span
    b = _boundaries(sigma.word)
    if not (lo in b and hi in b and lo <= hi):
        return False
    return all(blk.letters[1] <= lo or hi <= blk.letters[0] for blk in block_road_decomposition(sigma).blocks)


def is_bad_subroad(sigma: PositiveBraid, span: tuple[int, int]) -> Optional[BadSubroad]:
    """The bad-subroad structure of ``span``, or None when it is not bad."""
    if not _is_subroad_span(sigma, span):
        return None
    fs = _resolve_sigma2(elementary_decomposition(sigma, span))
    if not all(is_elementary_bad(f) for f in fs):
        return None
    if not _ordering_ok(fs):
        return None
    switch = _switch_indices(fs)
    if fs and not switch:
        return None
    return BadSubroad(span, fs, switch, sum(f.n13 for f in fs))


def subroad_weight(r: BadSubroad, i: Optional[int] = None) -> tuple[int, int]:
    """(weight, increment) of a bad subroad read as i-switch."""
    omega = 0
    for f in r.factors:
        if not f.isolated:
            omega += sum(1 for _, e in f.powers if e == 2)
        elif f.kind.endswith("initial-isolated"):
            omega += sum(1 for g, e in f.powers if g == f.i and e == 2)
            omega += sum(e for g, e in f.powers if g == _other(f.i))
    iota = 0
    if r.factors:
        last = r.factors[-1]
        if not last.isolated:
            ends_13 = len(last.powers) >= 2 and last.powers[-2][0] == 1 and last.powers[-1][0] == 3
            # a sigma_1 sigma_3 ending has last exponent 1, so read the terminal
            # index from the parity law instead of r.terminal (which is None)
            i0 = i if i is not None else (r.switch[0] if r.switch else 1)
            term = i0 if r.n13 % 2 == 0 else _other(i0)
            if ends_13 and term == 1:
                iota = 1
        elif last.kind.endswith("initial-isolated") and last.last == _other(last.i):
            iota = -2
    return omega, iota


# ---------------------------------------------------------------------------
# Singular subroads.

@dataclass(frozen=True)
class SingularSubroad:
    span: tuple[int, int]
    M: int
    follower: str  # "isolated", "non-isolated", "end" or "other"
    block_kind: str

    @property
    def weight(self) -> int:
        return singular_weight(self.M, self.block_kind)

    def to_json(self) -> dict:
        return {"span": list(self.span), "M": self.M, "follower": self.follower, "singular_weight": self.weight}


def singular_weight(M: int, block_kind: str) -> int:
    if block_kind == "2":
        return (3 * M - 2) // 2 if M % 2 == 0 else (3 * M - 5) // 2
    return (3 * M) // 2 if M % 2 == 0 else (3 * M - 1) // 2


def singular_subroad(block: Block, sigma: PositiveBraid) -> SingularSubroad:
    word = sigma.word
    start = block.letters[1]
    segs = [s for s in isolated_sigma2_decomposition(sigma) if s.kind == "isolated"]
    seg = next((s for s in segs if s.letters[0] <= start < s.letters[1]), None)
    end = start
    if seg is not None:
        items = _items(word, start, seg.letters[1])
        for it in items:
            if it.kind == "13" and any(e not in (0, 2) for e in (it.a, it.b)):
                break
            end = it.hi
        # drop a trailing sigma_2
        while end > start and word[end - 1] == 2:
            end -= 1
    m2 = sum(1 for g in word[start:end] if g == 2)
    if end >= len(word):
        follower = "end"
    elif word[end] == 2:
        follower = "isolated" if end in _isolated_letters(sigma) else "non-isolated"
    else:
        follower = "other"
    return SingularSubroad((start, end), m2 + 1, follower, block.kind)


# ---------------------------------------------------------------------------
# Block widths.

@dataclass(frozen=True)
class BlockWidth:
    width: int
    case: str
    adjusted: Optional[int] = None

    def to_json(self) -> dict:
        return {"width": self.width, "case": self.case, "adjusted": self.adjusted}


class WidthError(ValueError):
    pass


def block_width(block: Block, sigma: PositiveBraid) -> BlockWidth:
    p = block.p
    if block.kind == "2":
        a, b = sigma.a(p), sigma.b(p)
        if block.cls == "singular":
            return BlockWidth(a, "ii")
        return BlockWidth(a - b - 1, "i")
    c0, c1 = sigma.c(p - 1), sigma.c(p)
    if block.cls == "singular":
        return BlockWidth(c0, "v")
    if c0 > 1 and c1 == 2:
        return BlockWidth(c0 - 1, "iii")
    if c0 == 1 and c1 > 1:
        return BlockWidth(sigma.a(p - 1) - c1, "iv")
    raise WidthError(f"3-block at syllable {p} with exponents ({c0}, {c1}) has no width case")


# ---------------------------------------------------------------------------
# Abnormal strings.

@dataclass
class StringBlock:
    block: Block
    i: int  # i_j
    clause: str
    road: tuple[int, int]  # R_j (for the last block, the chosen subroad R_k)
    road0: tuple[int, int]  # R_{j,0}
    singular: Optional[SingularSubroad] = None  # R_j' when nonempty by definition
    omega: Optional[int] = None  # weight of R_{j,0} minus R_j'
    width: Optional[int] = None
    adjusted: Optional[int] = None  # Omega(B_j)
    xi_prev: int = 0  # Xi_{j-1}
    switch_in: Optional[int] = None  # switch of a 2-block (j > 1)
    terminal: Optional[int] = None  # terminal index of R_{j,0}

    @property
    def rest(self) -> tuple[int, int]:
        """R_{j,0} with the singular subroad R_j' removed."""
        lo = self.singular.span[1] if self.singular is not None else self.road0[0]
        return (max(lo, self.road0[0]), self.road0[1])

    def to_json(self, sigma: PositiveBraid) -> dict:
        out = {
            "block": self.block.to_json(sigma),
            "i": self.i,
            "clause": self.clause,
            "road": list(self.road),
            "road0": list(self.road0),
            "omega": self.omega,
            "width": self.width,
            "Omega": self.adjusted,
            "Xi_prev": self.xi_prev,
        }
        if self.singular is not None:
            out["singular"] = self.singular.to_json()
        if self.switch_in is not None:
            out["switch"] = self.switch_in
        return out


@dataclass
class AbnormalString:
    blocks: list[StringBlock]
    initial: bool = False  # headed by the initial block (Example-style analogue)
    sign: Optional[str] = None
    switch: Optional[int] = None  # i-switch tag of the enclosing subproduct
    nu: bool = False  # nu-switch (True) or mu-switch (False)
    prefix_end: int = 0  # letter end of the minimal subproduct P containing the string
    terminal_clause: Optional[str] = None

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def end(self) -> int:
        return self.blocks[-1].road[1]

    def xi(self, j: int) -> int:
        """Xi_j for 1-based j (Xi_0 = 0)."""
        if j <= 0:
            return 0
        sb = self.blocks[j - 1]
        if sb.adjusted is None or sb.omega is None:
            return 0
        return sb.adjusted - sb.omega

    def to_json(self, sigma: PositiveBraid) -> dict:
        return {
            "blocks": [b.to_json(sigma) for b in self.blocks],
            "initial": self.initial,
            "sign": self.sign,
            "switch": self.switch,
            "switch_kind": "nu" if self.nu else "mu",
            "terminal": self.terminal_clause,
        }


def _string_i(block: Block, sigma: PositiveBraid, j: int) -> int:
    if block.kind == "2":
        return 1
    c0 = sigma.c(block.p - 1)
    if block.cls == "generic" and (c0 == 1 or (j > 1 and c0 == 2)):
        return 1
    return 3


def _is_abnormal(block: Block, sigma: PositiveBraid, include_initial: bool) -> bool:
    if block.cls == "initial":
        return include_initial and sigma.a(block.p + 1) == 2
    return not is_normal_block(block, sigma)


def _road_prefix_0(sigma: PositiveBraid, road: tuple[int, int]) -> tuple[int, int]:
    """Maximal (s, 2)-subroad inside ``road``: cut after its last sigma_2 run."""
    word = sigma.word
    lo, hi = road
    end = hi
    while end > lo and word[end - 1] != 2:
        end -= 1
    return (lo, end)


def _first_clause(sb: StringBlock, sigma: PositiveBraid, initial: bool) -> bool:
    """Clause (a)/(b) for the head block; fills Omega and R_1'."""
    blk = sb.block
    try:
        w = block_width(blk, sigma).width
    except WidthError:
        return False
    sb.width = w
    if blk.cls in ("generic", "initial"):
        if blk.kind == "3" and sigma.c(blk.p - 1) == 1 and not sigma.a(blk.p - 1) > sigma.c(blk.p) + 1:
            return False
        sb.clause = "a"
        sb.adjusted = w
        return True
    r1 = singular_subroad(blk, sigma)
    sb.singular = r1
    if r1.follower == "isolated":
        sb.clause, sb.adjusted = "b.i", w + 1
        return True
    if r1.follower == "non-isolated":
        sb.clause, sb.adjusted = "b.ii", w
        return True
    return False


def _d_table(sb: StringBlock, sigma: PositiveBraid, xi: int) -> Optional[tuple[str, int]]:
    r1 = sb.singular
    a = sigma.a(sb.block.p)
    ws = r1.weight
    if r1.M % 2 != 1:
        return None
    if r1.follower == "isolated":
        if xi - 5 > ws:
            return "d.i", a + 1
        if xi - 5 < ws:
            return "d.ii", a + xi - 4 - ws
    if r1.follower == "non-isolated":
        if xi - 4 > ws:
            return "d.iii", a
        if xi - 4 < ws:
            return "d.iv", a + xi - 4 - ws
    return None


def _later_clause(sb: StringBlock, sigma: PositiveBraid, xi: int, final: bool) -> Optional[bool]:
    """Clauses (c)-(e) for a block after the head.

    Returns None when no clause applies, False when a clause applies that
    keeps the string open, True when the block can only close the string.
    """
    blk = sb.block
    p = blk.p
    sb.xi_prev = xi
    if blk.kind == "2":
        a, b = sigma.a(p), sigma.b(p)
        if sigma.a(p + 1) != 2:
            return None
        sw = sb.switch_in
        if sw == 3 and b == 2:
            sb.singular = singular_subroad(blk, sigma)
            got = _d_table(sb, sigma, xi)
            if got is not None:
                sb.clause, sb.adjusted = got
                return False
            sb.clause = "d"
            return True  # Omega deferred; only a closing block
        if sw == 3 and b <= 2:
            return None
        if sw == 1 and a >= b + 2:
            sb.clause, sb.adjusted = "c.i", a - b - 2
            return False
        if sw == 3 and a >= b:
            sb.clause, sb.adjusted = "c.ii", a - b
            return False
        return None
    c0, c1 = sigma.c(p - 1), sigma.c(p)
    if c0 > 2 and c1 == 2:
        sb.clause, sb.adjusted = "e.i", c0 - 2
        return False
    if c0 == 1 and sigma.a(p - 1) > c1 + 2:
        sb.clause, sb.adjusted = "e.ii", sigma.a(p - 1) - c1 - 1
        return True
    if c0 == 2 and c1 > 2 and xi > c1 + 1:
        sb.clause, sb.adjusted = "e.iii", xi - c1
        return True
    if c0 == 2 == c1:
        sb.clause, sb.adjusted = "e.iv", xi - 2
        return True
    return None


def _best_last_road(sigma: PositiveBraid, sb: StringBlock, road: tuple[int, int]) -> tuple[int, int]:
    """Longest prefix of ``road`` that is an i-switch bad subroad with last exponent > 1."""
    word = sigma.word
    lo, hi = road
    cands = sorted(b for b in _boundaries(word) if lo <= b <= hi)
    best = (lo, lo)
    for end in cands:
        if end == lo:
            continue
        r = is_bad_subroad(sigma, (lo, end))
        if r is None or sb.i not in r.switch:
            continue
        if r.last_exponent > 1:
            best = (lo, end)
    return best


def _finish_block(sigma: PositiveBraid, sb: StringBlock, road0: tuple[int, int]) -> bool:
    sb.road0 = road0
    rest = sb.rest
    if rest[0] >= rest[1]:
        sb.omega = 0
        sb.terminal = sb.i
        return True
    r = is_bad_subroad(sigma, road0)
    if r is None or sb.i not in r.switch:
        return False
    rr = is_bad_subroad(sigma, rest)
    sb.omega = subroad_weight(rr, sb.i)[0] if rr is not None else subroad_weight(r, sb.i)[0]
    sb.terminal = r.terminal(sb.i)
    return True


def _build_string(sigma: PositiveBraid, pieces, start: int, initial: bool) -> Optional[tuple[AbnormalString, int]]:
    blk, road = pieces[start]
    head = StringBlock(blk, _string_i(blk, sigma, 1), "", road.letters, road.letters)
    if not _first_clause(head, sigma, initial):
        return None
    chain = [head]
    idx = start
    closed = False
    while not closed and idx + 1 < len(pieces):
        cur = chain[-1]
        nxt_blk, nxt_road = pieces[idx + 1]
        if cur.adjusted is None:
            break
        nxt = StringBlock(nxt_blk, _string_i(nxt_blk, sigma, len(chain) + 1), "", nxt_road.letters, nxt_road.letters)
        road0 = cur.road
        if nxt_blk.kind == "3" and nxt.i == 1:
            road0 = _road_prefix_0(sigma, cur.road)
        trial = StringBlock(**{**cur.__dict__})
        if not _finish_block(sigma, trial, road0):
            break
        if road0 != cur.road and trial.terminal != 1:
            break
        if not trial.omega + 1 < trial.adjusted:
            break
        xi = trial.adjusted - trial.omega
        if nxt_blk.kind == "2":
            nxt.switch_in = trial.terminal
        verdict = _later_clause(nxt, sigma, xi, final=False)
        if verdict is None:
            break
        chain[-1] = trial
        chain.append(nxt)
        idx += 1
        closed = verdict
    last = chain[-1]
    last.road = _best_last_road(sigma, last, last.road)
    if not _finish_block(sigma, last, last.road):
        last.road = (last.road[0], last.road[0])
        _finish_block(sigma, last, last.road)
    s = AbnormalString(chain, initial=initial)
    return s, idx


def _prefix_end(sigma: PositiveBraid, pos: int) -> int:
    return min(b for b in _boundaries(sigma.word) if b >= pos)


def _count_isolated(sigma: PositiveBraid, span: tuple[int, int]) -> int:
    iso = _isolated_letters(sigma)
    return sum(1 for k in range(span[0], span[1]) if k in iso)


def _sign_changing_ii(sb: StringBlock) -> bool:
    if not (sb.block.kind == "2" and sb.switch_in == 3 and sb.singular is not None):
        return False
    r1 = sb.singular
    if r1.M % 2 != 1:
        return False
    if r1.follower == "isolated":
        return sb.xi_prev - 5 > r1.weight
    if r1.follower == "non-isolated":
        return sb.xi_prev - 4 > r1.weight
    return False


def _is_d_block(sb: StringBlock, sigma: PositiveBraid) -> bool:
    return sb.block.kind == "2" and sb.switch_in == 3 and sigma.b(sb.block.p) == 2


def string_sign(s: AbnormalString, sigma: PositiveBraid) -> str:
    """Positive or negative, from sign-changing blocks and isolated sigma_2 counts."""
    k = s.k
    jp = 0
    for j, sb in enumerate(s.blocks, start=1):
        blk = sb.block
        if blk.cls not in ("generic", "initial"):
            continue
        if blk.kind == "2" and not (sb.switch_in == 3 and sigma.b(blk.p) <= 2):
            jp = j
        elif blk.kind == "3" and sigma.c(blk.p - 1) != 2:
            jp = j
    m_prime = 0
    if jp >= 1 and s.blocks[jp - 1].i == 3:
        m_prime += 1
    for j in range(jp + 1, k + 1):
        sb = s.blocks[j - 1]
        if sb.block.cls == "singular":
            m_prime += 1
        elif _sign_changing_ii(sb):
            m_prime += 1
        elif j == k and sb.block.kind == "3" and sigma.c(sb.block.p - 1) == 2:
            m_prime += 1
    m1 = 0
    for j in range(max(jp, 1), k + 1):
        sb = s.blocks[j - 1]
        lo = sb.singular.span[1] if sb.singular is not None else sb.road[0]
        m1 += _count_isolated(sigma, (max(lo, sb.road[0]), sb.road[1]))
    m2 = 0
    for sb in s.blocks:
        if _is_d_block(sb, sigma) and not _sign_changing_ii(sb) and sb.singular is not None:
            m2 += _count_isolated(sigma, sb.singular.span)
    m = m1 + m2
    value = (m - 3) // 2 + m_prime if s.nu else m // 2 + m_prime
    parity = value % 2
    if s.initial:
        # the head's good and bad walks already carry opposite signs
        parity ^= 1
    return "negative" if parity else "positive"


def _ends_nu(sigma: PositiveBraid, end: int) -> bool:
    """Does the prefix of length ``end`` finish inside an isolated piece after an odd number of sigma_2s?"""
    for seg in isolated_sigma2_decomposition(sigma):
        if seg.kind != "isolated":
            continue
        lo, hi = seg.letters
        if lo < end <= hi:
            m2 = sum(1 for g in sigma.word[lo:end] if g == 2)
            return m2 % 2 == 1
    return False


def abnormal_strings(sigma: PositiveBraid, include_initial: bool = False) -> list[AbnormalString]:
    """The left-to-right family of maximal abnormal strings.

    With ``include_initial`` the initial 2-block ``s1^a s2 s1^2`` may also
    head a string, modelling the global cancellation of its own walks.
    """
    dec = block_road_decomposition(sigma)
    pieces = [(b, r) for b, r in dec.pieces if b is not None]
    out: list[AbnormalString] = []
    idx = 0
    while idx < len(pieces):
        blk, _ = pieces[idx]
        if not _is_abnormal(blk, sigma, include_initial):
            idx += 1
            continue
        built = _build_string(sigma, pieces, idx, blk.cls == "initial")
        if built is None:
            idx += 1
            continue
        s, last = built
        s.prefix_end = _prefix_end(sigma, s.end)
        s.switch = s.blocks[-1].terminal
        s.nu = _ends_nu(sigma, s.prefix_end)
        s.sign = string_sign(s, sigma)
        out.append(s)
        idx = last + 1
    for n, s in enumerate(out):
        s.terminal_clause = is_terminal(s, sigma, out, n)
    return out


def _next_block_at(sigma: PositiveBraid, pos: int) -> Optional[Block]:
    for b in block_road_decomposition(sigma).blocks:
        if b.letters[0] == pos:
            return b
    return None


def _long_cancelling(s: AbnormalString, sigma: PositiveBraid) -> bool:
    last = s.blocks[-1]
    if _is_d_block(last, sigma) and last.adjusted is None:
        return False
    if last.block.kind == "3" and last.i != 3:
        return False
    return True


def _special_3_block(b: Block, sigma: PositiveBraid) -> bool:
    if b.kind != "3" or b.cls != "generic":
        return False
    p = b.p
    return sigma.c(p - 1) == 1 and sigma.a(p - 1) in (sigma.c(p) - 1, sigma.c(p), sigma.c(p) + 1)


def is_terminal(s: AbnormalString, sigma: PositiveBraid, family: Optional[list[AbnormalString]] = None,
                index: int = 0) -> Optional[str]:
    """First satisfied terminal clause among (a)-(g), or None."""
    word = sigma.word
    last = s.blocks[-1]
    k = s.k
    om = last.adjusted
    w = last.omega if last.omega is not None else 0
    xi_prev = s.xi(k - 1)
    neg = s.sign == "negative"
    pend = s.prefix_end
    follow = _items(word, pend, len(word))
    nxt_item = follow[0] if follow else None
    nxt_block = _next_block_at(sigma, pend)
    in_road = nxt_item is not None and (nxt_block is None or nxt_block.letters[0] > nxt_item.lo)
    if _long_cancelling(s, sigma) and neg and om is not None:
        d = om - w
        if nxt_item is not None and nxt_item.kind == "13" and in_road and pend > 0 and word[pend - 1] == 2:
            ap, bp = nxt_item.a, nxt_item.b
            if ap == 0 or bp == 0:
                i = 3 if ap == 0 else 1
                if s.switch == i and d == 1:
                    return "a.i"
                if s.switch == _other(i) and d == 0:
                    return "a.i"
            elif ap > 1:
                if s.switch == 1 and ((d == 0 and ap <= bp - 1) or (d == 1 and bp <= ap - 1)):
                    return "a.ii"
                if s.switch == 3 and ((d == 0 and bp <= ap - 1) or (d == 1 and ap <= bp - 2)):
                    return "a.ii"
            elif d in (0, 1):
                return "a.iii"
        if nxt_item is not None and nxt_item.kind == "2" and in_road and pend > 0 and word[pend - 1] != 2:
            prev = _items(word, 0, pend)[-1]
            ap, bp = prev.a, prev.b
            if ap == 0 or bp == 0:
                if not s.nu and d == 1:
                    return "b.i"
                if s.nu and d == 0:
                    return "b.ii"
            elif d == 1:
                return "b.iii"
        if nxt_block is not None and nxt_block.kind == "2" and d in (0, 1):
            return "c"
        if nxt_block is not None and nxt_block.kind == "3":
            p = nxt_block.p
            c0, c1 = sigma.c(p - 1), sigma.c(p)
            if c0 > 2 and d in (0, 1):
                return "d.i"
            if c0 == 1 and d == 0:
                return "d.ii"
            if c0 == 1 and d > 0 and sigma.a(p - 1) in (c1, c1 + 1, c1 + 2):
                return "d.iii"
            if c0 == 2 and c1 > 2 and xi_prev in (c1 - 1, c1, c1 + 1):
                return "d.iv"
            if c0 == 2 == c1 and d in (0, 1):
                return "d.v"
    # (e): a special generic 3-block between this string and the next, or before the first
    blocks = block_road_decomposition(sigma).blocks
    nxt_start = len(word)
    if family is not None and index + 1 < len(family):
        nxt_start = family[index + 1].blocks[0].block.letters[0]
    if any(_special_3_block(b, sigma) and s.end <= b.letters[0] < nxt_start for b in blocks):
        return "e.i"
    if index == 0 and any(_special_3_block(b, sigma) and b.letters[1] <= s.blocks[0].block.letters[0] for b in blocks):
        return "e.ii"
    if _is_d_block(last, sigma) and last.singular is not None:
        r1 = last.singular
        mk, ws = r1.M, r1.weight
        a = sigma.a(last.block.p)
        pos_ok_odd = (not neg and mk % 4 == 1) or (neg and mk % 4 == 3)
        pos_ok_even = (not neg and mk % 4 == 2) or (neg and mk % 4 == 0)
        if r1.follower == "isolated" and mk % 2 == 1 and xi_prev - 5 == ws and pos_ok_odd:
            return "f.i"
        if r1.follower == "non-isolated" and mk % 2 == 1 and xi_prev - 4 == ws and pos_ok_odd:
            return "f.ii"
        if r1.follower == "isolated" and mk % 2 == 0 and a + xi_prev - 4 == ws and pos_ok_even:
            return "f.iii"
        if r1.follower == "non-isolated" and mk % 2 == 0 and a + xi_prev - 3 == ws and pos_ok_even:
            return "f.iv"
    if last.block.kind == "3" and last.i == 1:
        r1 = singular_subroad(last.block, sigma)
        mk, ws = r1.M, r1.weight
        res_ok = (not neg and mk % 4 in (2, 3)) or (neg and mk % 4 in (0, 1))
        if om is not None:
            if r1.follower == "isolated" and om - ws == 1 and res_ok:
                return "g.i"
            if r1.follower == "non-isolated" and mk % 2 == 1 and om - ws == 0 and res_ok:
                return "g.ii"
            if r1.follower == "non-isolated" and mk % 2 == 0 and om - ws >= 0:
                return "g.iii"
        rk = last.road
        rk_powers = _powers(word, rk[0], rk[1])
        before_3 = _next_block_at(sigma, r1.span[1])
        if neg:
            if r1.span[0] == r1.span[1] and before_3 is not None and before_3.kind == "3" and len(rk_powers) == 1 and rk_powers[0][0] == 1:
                return "g.iv"
            its = _items(word, rk[0], rk[1])
            if len(its) == 1 and its[0].kind == "13" and its[0].b > 0 and its[0].a - 2 == its[0].b:
                return "g.iv"
    return None


@dataclass
class WeakNormalityReport:
    weakly_normal: bool
    terminal_strings: list[AbnormalString] = field(default_factory=list)
    strings: list[AbnormalString] = field(default_factory=list)

    def to_json(self, sigma: PositiveBraid) -> dict:
        return {
            "weakly_normal": self.weakly_normal,
            "strings": [s.to_json(sigma) for s in self.strings],
            "terminal_strings": [s.to_json(sigma) for s in self.terminal_strings],
        }


def is_weakly_normal(sigma: PositiveBraid, include_initial: bool = False) -> WeakNormalityReport:
    strings = abnormal_strings(sigma, include_initial)
    term = [s for s in strings if s.terminal_clause is not None]
    return WeakNormalityReport(not term, term, strings)


# ---------------------------------------------------------------------------
# Unique extension of bad walks across a bad subroad.

@dataclass
class ExtensionResult:
    path: Optional[SigmaPath]
    reason: str = ""

    def to_json(self) -> dict:
        return {"path": list(self.path.vertices) if self.path else None, "reason": self.reason}


def _entry_index(v: Sequence[int]) -> Optional[int]:
    """1 or 3: the vertex a walk sits on, or the vertex it came from before settling on 2."""
    end = v[-1]
    if end in (1, 3):
        return end
    for k in range(len(v) - 1, 0, -1):
        if v[k - 1] != v[k]:
            return v[k - 1]
    return None


def _extend_factor(v: list[int], word: Sequence[int], f: ElementarySubroad) -> None:
    lo, hi = f.span
    i = _entry_index(v)
    if i is None:
        i = 1
    if f.kind in ("i-constant", "sigma2", "1-initial-isolated", "3-initial-isolated"):
        if f.i is not None:
            i = f.i
        n2 = ni = 0
        for k in range(lo, hi):
            g, cur = word[k], v[-1]
            nxt = cur
            if g == 2:
                n2 += 1
                if n2 % 2 == 0 and cur == i:
                    nxt = 2
            elif g == i:
                ni += 1
                if ni % 2 == 0 and cur == 2:
                    nxt = i
            v.append(nxt)
        return
    if f.kind == "alternating":
        group = 0
        run2 = 0
        seen_13 = False
        for k in range(lo, hi):
            g, cur = word[k], v[-1]
            nxt = cur
            if g == 2:
                run2 = run2 + 1 if k > lo and word[k - 1] == 2 else 1
                seen_13 = False
                if run2 == 2 and cur != 2:
                    nxt = 2
            else:
                if not seen_13:
                    group += 1
                    seen_13 = True
                target = _other(i) if group % 2 == 1 else i
                if g == target and cur == 2:
                    nxt = target
            v.append(nxt)
        return
    if f.kind == "end-isolated":
        target = _other(i)
        for k in range(lo, hi):
            g, cur = word[k], v[-1]
            v.append(target if g == target and cur == 2 else cur)
        return
    for k in range(lo, hi):
        v.append(v[-1])


def _targets(word: Sequence[int], hi: int) -> tuple[int, ...]:
    if hi == 0:
        return (1, 2, 3)
    return (2,) if word[hi - 1] == 2 else (1, 3)


def unique_bad_extension(x: SigmaPath, sigma: PositiveBraid, span: tuple[int, int]) -> ExtensionResult:
    """Extend the bad walk ``x`` (over the first span[0] letters) across a bad subroad."""
    lo, hi = span
    word = sigma.word
    if len(x.vertices) != lo + 1:
        return ExtensionResult(None, "walk does not end where the subroad starts")
    r = is_bad_subroad(sigma, span)
    if r is None:
        return ExtensionResult(None, "not a bad subroad")
    i = _entry_index(x.vertices)
    if i not in r.switch:
        return ExtensionResult(None, f"subroad is not {i}-switch")
    if r.last_exponent <= 1:
        return ExtensionResult(None, "last exponent of the subroad is 1")
    v = list(x.vertices)
    for f in r.factors:
        _extend_factor(v, word, f)
    targets = _targets(word, hi)
    if v[-1] not in targets:
        # drop the final change
        k = len(v) - 1
        while k > lo and v[k - 1] == v[k]:
            k -= 1
        if k > lo:
            prev = v[k - 1]
            v = v[:k] + [prev] * (len(v) - k)
    if v[-1] not in targets:
        return ExtensionResult(None, "no extension with the required end vertex")
    P = PositiveBraid.from_word(word[:hi])
    try:
        path = SigmaPath(tuple(v), P)
    except ValueError as exc:
        return ExtensionResult(None, f"recipe produced an illegal walk: {exc}")
    return ExtensionResult(path, "recipe")


def enumerate_extensions(x: SigmaPath, sigma: PositiveBraid, hi: int) -> list[SigmaPath]:
    """Every admissible walk over the first ``hi`` letters extending ``x``, ending at the right vertex class."""
    word = sigma.word
    P = PositiveBraid.from_word(word[:hi])
    targets = _targets(word, hi)
    out = []

    def rec(v: list[int]) -> Iterator[tuple[int, ...]]:
        k = len(v) - 1
        if k == hi:
            if v[-1] in targets:
                yield tuple(v)
            return
        g, cur = word[k], v[-1]
        opts = [cur]
        if cur != g and abs(cur - g) == 1:
            opts.append(g)
        for o in opts:
            v.append(o)
            yield from rec(v)
            v.pop()

    for vs in rec(list(x.vertices)):
        y = SigmaPath(vs, P)
        if is_admissible(y):
            out.append(y)
    return out
