"""Braid words in the Artin generators of B4, the positive monoid, and normal forms.

Letters are signed integers: ``i`` stands for sigma_i and ``-i`` for its
inverse.  Positive braids are compared through two independent routes:

* a breadth-first closure over same-length positive words under the three
  defining relations (the reference oracle, budgeted), and
* left division by generators using word reversing, which gives the
  lexicographically minimal word greedily (the fast path).

The greedy construction works because the lexicographically least
expansion of a positive braid starts with the smallest generator that left
divides it, and its remainder is again a least expansion.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "DELTA",
    "BraidParseError",
    "BudgetExceeded",
    "Generator",
    "BraidWord",
    "Syllable",
    "PositiveBraid",
    "GarsideNormalForm",
    "Segment",
    "parse_braid_word",
    "rewrite_closure",
    "positive_equivalent",
    "left_quotient",
    "minimal_form",
    "minimal_word",
    "pack_syllables",
    "verify_minimal_constraints",
    "delta_divides",
    "garside_normal_form",
    "isolated_sigma2_decomposition",
    "s_subproducts",
    "flip",
]

DELTA: tuple[int, ...] = (1, 2, 3, 1, 2, 1)
DEFAULT_BFS_BUDGET = 5_000_000


class BraidParseError(ValueError):
    """Malformed braid word; ``offset`` is the byte offset of the bad token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class BudgetExceeded(RuntimeError):
    """A search hit its configured state budget."""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


@dataclass(frozen=True)
class Generator:
    index: int
    inverse: bool = False

    def __post_init__(self):
        if self.index not in (1, 2, 3):
            raise ValueError(f"generator index {self.index} out of range 1..3")

    @property
    def letter(self) -> int:
        return -self.index if self.inverse else self.index


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for x in self.letters:
            if abs(x) not in (1, 2, 3):
                raise ValueError(f"generator index {x} out of range 1..3")

    @classmethod
    def of(cls, letters: Iterable[int]) -> "BraidWord":
        return cls(tuple(letters))

    @property
    def generators(self) -> list[Generator]:
        return [Generator(abs(x), x < 0) for x in self.letters]

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + tuple(other))

    def __str__(self) -> str:
        return format_word(self.letters)


def format_word(letters: Sequence[int]) -> str:
    """Run-length text form, e.g. ``1^2 3 -2``; the inverse of parsing."""
    out = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        n = j - i
        out.append(str(letters[i]) if n == 1 else f"{letters[i]}^{n}")
        i = j
    return " ".join(out)


_TOKEN = re.compile(r"\S+")
_LETTER = re.compile(r"^([+-]?)(\d+)(?:\^(\d+))?$")


def parse_braid_word(text: str) -> BraidWord:
    """Parse whitespace separated tokens ``[+-]i`` with optional ``^n``."""
    letters: list[int] = []
    for m in _TOKEN.finditer(text):
        token = m.group(0)
        offset = len(text[: m.start()].encode())
        lm = _LETTER.match(token)
        if not lm:
            raise BraidParseError(f"malformed token {token!r}", offset)
        sign, idx, power = lm.groups()
        i = int(idx)
        if i not in (1, 2, 3):
            raise BraidParseError(f"generator index out of range: {i}", offset)
        n = 1 if power is None else int(power)
        if n < 1:
            raise BraidParseError("repetition must be at least 1", offset)
        letters.extend([-i if sign == "-" else i] * n)
    return BraidWord(tuple(letters))


# ---------------------------------------------------------------------------
# Reference oracle: breadth-first closure under the defining relations.

def _rewrites(w: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    n = len(w)
    for k in range(n - 1):
        x, y = w[k], w[k + 1]
        if abs(x - y) == 2:
            yield w[:k] + (y, x) + w[k + 2 :]
        if k + 2 < n and w[k + 2] == x and abs(x - y) == 1:
            yield w[:k] + (y, x, y) + w[k + 3 :]


def rewrite_closure(word: Sequence[int], budget: int = DEFAULT_BFS_BUDGET) -> set[tuple[int, ...]]:
    """All positive words equal to ``word`` in the monoid (same length)."""
    start = tuple(word)
    if any(x <= 0 for x in start):
        raise ValueError("rewrite closure needs a positive word")
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for v in _rewrites(w):
            if v not in seen:
                seen.add(v)
                if len(seen) > budget:
                    raise BudgetExceeded(f"rewrite closure exceeded {budget} states", len(seen))
                queue.append(v)
    return seen


def positive_equivalent(w1: Sequence[int], w2: Sequence[int], budget: int = DEFAULT_BFS_BUDGET) -> bool:
    a, b = tuple(w1), tuple(w2)
    if any(x <= 0 for x in a + b):
        raise ValueError("positive_equivalent rejects inverse letters")
    if len(a) != len(b):
        return False
    if a == b:
        return True
    return b in rewrite_closure(a, budget)


# ---------------------------------------------------------------------------
# Fast path: left division by word reversing.

def _reverse(word: list[int]) -> list[int]:
    """Right-reverse a signed word to the shape ``positive * negative``.

    Each ``x^-1 y`` is replaced by ``y' x'^-1`` where ``x y' = y x'`` is the
    least common multiple.  Termination holds in every spherical Artin
    monoid.
    """
    w = list(word)
    k = 0
    while k < len(w) - 1:
        x, y = w[k], w[k + 1]
        if x < 0 < y:
            a = -x
            if a == y:
                w[k : k + 2] = []
            elif abs(a - y) == 2:
                w[k : k + 2] = [y, -a]
            else:
                w[k : k + 2] = [y, a, -y, -a]
            k = max(k - 1, 0)
        else:
            k += 1
    return w


def left_quotient(divisor: Sequence[int], word: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Return ``u`` with ``divisor * u == word`` in the positive monoid, or None."""
    signed = [-x for x in reversed(divisor)] + list(word)
    w = _reverse(signed)
    if any(x < 0 for x in w):
        return None
    return tuple(w)


@lru_cache(maxsize=1 << 16)
def _minimal_word_cached(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    rest = word
    while rest:
        for i in (1, 2, 3):
            quotient = left_quotient((i,), rest)
            if quotient is not None:
                out.append(i)
                rest = quotient
                break
    return tuple(out)


def minimal_word(word: Sequence[int], method: str = "greedy", budget: int = DEFAULT_BFS_BUDGET) -> tuple[int, ...]:
    w = tuple(word)
    if any(x <= 0 for x in w):
        raise ValueError("minimal form needs a positive word")
    if method == "greedy":
        return _minimal_word_cached(w)
    if method == "bfs":
        return min(rewrite_closure(w, budget)) if w else ()
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Syllable packing.

@dataclass(frozen=True)
class Syllable:
    """Exponents of the factor sigma_1^a sigma_3^b sigma_2^c."""

    a: int
    b: int
    c: int

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def word(self) -> tuple[int, ...]:
        return (1,) * self.a + (3,) * self.b + (2,) * self.c


def pack_syllables(word: Sequence[int]) -> tuple[Syllable, ...]:
    """Group a word with no ``3 1`` factor into sigma_1^a sigma_3^b sigma_2^c blocks."""
    out: list[list[int]] = []
    phase = 3  # 0 reading sigma_1, 1 reading sigma_3, 2 reading sigma_2
    for x in word:
        if x <= 0:
            raise ValueError("packing needs a positive word")
        if x == 1:
            if phase == 1:
                raise ValueError("word contains sigma_3 sigma_1 and cannot be packed")
            if phase != 0:
                out.append([0, 0, 0])
            phase = 0
            out[-1][0] += 1
        elif x == 3:
            if phase not in (0, 1):
                out.append([0, 0, 0])
            phase = 1
            out[-1][1] += 1
        else:
            if phase == 3:
                out.append([0, 0, 0])
            phase = 2
            out[-1][2] += 1
    return tuple(Syllable(*s) for s in out)


@dataclass(frozen=True)
class PositiveBraid:
    """A positive braid stored as its minimal form in syllable packing."""

    syllables: tuple[Syllable, ...] = ()

    @classmethod
    def from_word(cls, word: Sequence[int], method: str = "greedy") -> "PositiveBraid":
        return cls(pack_syllables(minimal_word(word, method)))

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence[int]]) -> "PositiveBraid":
        """Trusted constructor from explicit (a, b, c) triples (no normalisation)."""
        return cls(tuple(Syllable(*t) for t in triples))

    @property
    def word(self) -> tuple[int, ...]:
        out: tuple[int, ...] = ()
        for s in self.syllables:
            out += s.word()
        return out

    @property
    def length(self) -> int:
        return sum(s.a + s.b + s.c for s in self.syllables)

    @property
    def n(self) -> int:
        return len(self.syllables)

    def a(self, p: int) -> int:
        """1-based exponent accessors; out-of-range syllables read as zero."""
        return self.syllables[p - 1].a if 1 <= p <= self.n else 0

    def b(self, p: int) -> int:
        return self.syllables[p - 1].b if 1 <= p <= self.n else 0

    def c(self, p: int) -> int:
        return self.syllables[p - 1].c if 1 <= p <= self.n else 0

    def to_json(self) -> list[list[int]]:
        return [[s.a, s.b, s.c] for s in self.syllables]

    @classmethod
    def from_json(cls, data) -> "PositiveBraid":
        return cls.from_triples(data)

    def __str__(self) -> str:
        return format_word(self.word) if self.syllables else "(identity)"


def minimal_form(word: Sequence[int], method: str = "greedy", budget: int = DEFAULT_BFS_BUDGET) -> PositiveBraid:
    return PositiveBraid(pack_syllables(minimal_word(word, method, budget)))


# ---------------------------------------------------------------------------
# Constraints satisfied by every minimal form.

@dataclass(frozen=True)
class Violation:
    clause: str
    position: int
    detail: str


def verify_minimal_constraints(p: PositiveBraid, include_derived: bool = False) -> list[Violation]:
    """Check the four families of local constraints on a syllable packing.

    The second sentence of the isolated-sigma_3 clause follows from the
    others; it is reported only when ``include_derived`` is set and as
    clause ``iii-b``.
    """
    n = p.n
    a, b, c = p.a, p.b, p.c
    found: list[Violation] = []
    for q in range(1, n + 1):
        tail_exception = q == n and c(q) == 0
        if a(q) == 1 and q > 1 and b(q) == 0 and not tail_exception:
            found.append(Violation("i", q, "isolated sigma_1 between sigma_2 powers"))
        if c(q) == 1 and q < n:
            if b(q) > 0 and b(q + 1) > 0:
                found.append(Violation("ii", q, "sigma_3 on both sides of an isolated sigma_2"))
            if q > 1 and b(q) == 0 and a(q + 1) > 0:
                found.append(Violation("ii", q, "sigma_1 on both sides of an isolated sigma_2"))
        if a(q) == 0 and b(q) == 1 and q > 1 and not tail_exception:
            if b(q - 1) > 0:
                found.append(Violation("iii", q, "isolated sigma_3 after a sigma_3"))
            if include_derived and q > 2 and c(q - 2) == 1 and not (q == 3 and b(1) == 0):
                found.append(Violation("iii-b", q, "isolated sigma_3 two syllables after an isolated sigma_2"))
        if b(q) == 1 and c(q) == 1 and q != n:
            if any(b(i) > 0 for i in range(1, q)):
                found.append(Violation("iv", q, "sigma_3 sigma_2 pattern preceded by a sigma_3"))
    return found


# ---------------------------------------------------------------------------
# Garside normal form.

def flip(letters: Iterable[int]) -> tuple[int, ...]:
    """Conjugation by Delta: sigma_i maps to sigma_{4-i}, signs preserved."""
    return tuple((4 - abs(x)) * (1 if x > 0 else -1) for x in letters)


def delta_divides(word: Sequence[int] | PositiveBraid) -> bool:
    """Delta is the lcm of the generators, so it divides iff all three do."""
    w = word.word if isinstance(word, PositiveBraid) else tuple(word)
    return all(left_quotient((i,), w) is not None for i in (1, 2, 3))


def delta_divides_bfs(word: Sequence[int] | PositiveBraid, budget: int = DEFAULT_BFS_BUDGET) -> bool:
    w = word.word if isinstance(word, PositiveBraid) else tuple(word)
    if len(w) < 6:
        return False
    return any(v[:6] == DELTA for v in rewrite_closure(w, budget))


def _delta_over(i: int) -> tuple[int, ...]:
    """Positive word for Delta * sigma_i^-1."""
    for v in sorted(rewrite_closure(DELTA)):
        if v[-1] == i:
            return v[:-1]
    raise AssertionError("every generator right divides Delta")


_DELTA_OVER = {i: _delta_over(i) for i in (1, 2, 3)}


@dataclass(frozen=True)
class GarsideNormalForm:
    k: int
    tail: PositiveBraid

    def word(self) -> tuple[int, ...]:
        if self.k >= 0:
            return DELTA * self.k + self.tail.word
        return tuple(-x for x in reversed(DELTA)) * (-self.k) + self.tail.word

    def to_json(self) -> dict:
        return {"k": self.k, "tail": self.tail.to_json()}


def garside_normal_form(word: Sequence[int] | BraidWord) -> GarsideNormalForm:
    """Return (k, tail) with the braid equal to Delta^k * tail, k maximal."""
    letters = tuple(word)
    # Each inverse letter becomes Delta^-1 (Delta sigma_i^-1); the Delta^-1 is
    # then moved to the far left, flipping every letter it passes.
    negatives = 0
    positive: list[int] = []
    for x in letters:
        if x > 0:
            positive.append(x)
        else:
            positive = list(flip(positive))
            negatives += 1
            positive.extend(_DELTA_OVER[-x])
    w = tuple(positive)
    k = -negatives
    while len(w) >= 6:
        rest = left_quotient(DELTA, w)
        if rest is None:
            break
        w = rest
        k += 1
    return GarsideNormalForm(k, minimal_form(w))


# ---------------------------------------------------------------------------
# Isolated sigma_2 structure and s-subproducts.

@dataclass(frozen=True)
class Segment:
    """A piece of the minimal form.

    ``start``/``end`` are 1-based syllable indices.  An isolated segment
    covers syllables ``start .. end-1`` in full (each with c = 1) plus the
    sigma_1/sigma_3 part of syllable ``end``.  ``letters`` is the half-open
    span of letter positions in the minimal word.
    """

    kind: str  # "isolated" or "non-isolated"
    start: int
    end: int
    letters: tuple[int, int]
    type: Optional[str] = None  # "I", "II" or "III" for isolated segments

    def to_json(self) -> dict:
        out = {"kind": self.kind, "syllables": [self.start, self.end], "letters": list(self.letters)}
        if self.type:
            out["type"] = self.type
        return out


def _isolated_type(p: PositiveBraid, start: int) -> str:
    if p.b(start) > 0:
        return "I"
    if start == 1 and p.a(2) > 0:
        return "III"
    return "II"


def _syllable_offsets(p: PositiveBraid) -> list[int]:
    """offsets[i] is the letter position where syllable i+1 starts."""
    out = [0]
    for s in p.syllables:
        out.append(out[-1] + s.a + s.b + s.c)
    return out


def isolated_sigma2_decomposition(p: PositiveBraid) -> list[Segment]:
    """Partition the minimal word into isolated and non-isolated sigma_2 pieces."""
    n = p.n
    off = _syllable_offsets(p)
    total = off[-1]
    isolated: list[Segment] = []
    q = 1
    while q <= n:
        if p.c(q) == 1:
            start = q
            while q <= n and p.c(q) == 1:
                q += 1
            end = q  # may be n + 1 when the word ends in an isolated sigma_2
            hi = off[end - 1] + p.a(end) + p.b(end) if end <= n else total
            isolated.append(
                Segment("isolated", start, end, (off[start - 1], hi), _isolated_type(p, start))
            )
        else:
            q += 1
    segments: list[Segment] = []
    cursor, cursor_syl = 0, 1
    for seg in isolated:
        lo = seg.letters[0]
        if lo > cursor:
            segments.append(Segment("non-isolated", cursor_syl, seg.start, (cursor, lo)))
        segments.append(seg)
        cursor, cursor_syl = seg.letters[1], seg.end
    if cursor < total:
        segments.append(Segment("non-isolated", cursor_syl, n, (cursor, total)))
    return segments


def s_subproducts(p: PositiveBraid) -> Iterator[tuple[PositiveBraid, str, int]]:
    """Yield ``(prefix, s, index)`` in increasing length, ``s`` in {"2", "13"}.

    A 2-prefix with index q consists of syllables 1..q-1 (q = n+1 only when
    the last syllable has c > 0).  A 13-prefix with index q adds the
    sigma_1/sigma_3 part of syllable q.  The empty 2-prefix is included.
    """
    syl = p.syllables
    n = len(syl)
    if n == 0:
        yield p, "2", 1
        return
    for q in range(1, n + 2):
        if q <= n or syl[n - 1].c > 0:
            yield PositiveBraid(syl[: q - 1]), "2", q
        if q <= n:
            cut = syl[: q - 1] + (Syllable(syl[q - 1].a, syl[q - 1].b, 0),)
            yield PositiveBraid(cut), "13", q
