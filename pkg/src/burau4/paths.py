"""Weighted walks on the path graph 1-2-3 that expand Burau matrix entries.

A walk for a positive word w = g_1 ... g_L is a vertex sequence v_0 .. v_L
where each step either stays put or moves onto the vertex named by the
current generator from a neighbouring vertex.  Step weights are read off
the generator matrices:

* staying on vertex i at sigma_i contributes q,
* moving from i+1 down to i contributes -q,
* moving from i-1 up to i contributes 1,
* staying on any other vertex contributes 1.

Summing weights over walks from r to s gives entry (r, s) of the product
matrix.  Many walks cancel in pairs along short local detours; the pairs
used here come in five shapes (``delta`` .. ``theta``) anchored at the last
sigma_2 of a syllable, and walks lying in no pair are *admissible*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from .braid import BudgetExceeded, PositiveBraid, Syllable
from .laurent import LaurentPoly, ZERO

__all__ = [
    "MERGED",
    "SigmaPath",
    "PathWeight",
    "DistinguishedPair",
    "PathClass",
    "WeightSummary",
    "enumerate_paths",
    "path_weight",
    "weighted_count",
    "distinguished_pairs",
    "distinguished_partner",
    "is_admissible",
    "admissible_paths",
    "admissible_weighted_count",
    "classify_path",
    "weight_summary",
    "vertex_change",
]

MERGED = "13"  # endpoint class "1 or 3" used at the end of a sigma_1/sigma_3 run
DEFAULT_PATH_BUDGET = 20_000_000

Endpoint = Union[int, str]


def _endpoints(s: Endpoint) -> tuple[int, ...]:
    if s == MERGED:
        return (1, 3)
    if s in (1, 2, 3):
        return (int(s),)
    raise ValueError(f"bad endpoint spec {s!r}")


@dataclass(frozen=True)
class PathWeight:
    sign: int
    degree: int

    def poly(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.sign, self.degree)

    def to_json(self) -> dict:
        return {"sign": self.sign, "degree": self.degree}


@dataclass(frozen=True)
class SigmaPath:
    vertices: tuple[int, ...]
    braid: PositiveBraid = field(compare=False)

    def __post_init__(self):
        word = self.braid.word
        if len(self.vertices) != len(word) + 1:
            raise ValueError("path length does not match braid length")
        for k, g in enumerate(word, start=1):
            u, v = self.vertices[k - 1], self.vertices[k]
            if u != v and not (v == g and abs(u - v) == 1):
                raise ValueError(f"illegal step {u}->{v} at generator {k} (sigma_{g})")

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "weight": path_weight(self).to_json()}

    def __str__(self) -> str:
        return ",".join(map(str, self.vertices))


def vertex_change(x: SigmaPath | Sequence[int], k: int) -> Optional[tuple[int, int]]:
    """The change (from, to) made at generator k (1-based), or None."""
    v = x.vertices if isinstance(x, SigmaPath) else x
    if k < 1 or k >= len(v):
        return None
    if v[k - 1] == v[k]:
        return None
    return (v[k - 1], v[k])


def _step_weight(g: int, u: int, v: int) -> tuple[int, int]:
    """(sign, degree) contribution of one step."""
    if u == v:
        return (1, 1) if u == g else (1, 0)
    if u == g + 1:
        return (-1, 1)
    return (1, 0)


def _weight_of(word: Sequence[int], v: Sequence[int]) -> tuple[int, int]:
    sign, degree = 1, 0
    for k, g in enumerate(word, start=1):
        s, d = _step_weight(g, v[k - 1], v[k])
        sign *= s
        degree += d
    return sign, degree


def path_weight(x: SigmaPath) -> PathWeight:
    sign, degree = _weight_of(x.braid.word, x.vertices)
    return PathWeight(sign, degree)


def _walks(word: Sequence[int], r: int, ends: tuple[int, ...], budget: int) -> Iterator[tuple[int, ...]]:
    L = len(word)
    # reach[k] holds the vertices from which an endpoint is reachable after step k
    reach = [set() for _ in range(L + 1)]
    reach[L] = set(ends)
    for k in range(L, 0, -1):
        g = word[k - 1]
        for u in (1, 2, 3):
            if u in reach[k] or (abs(u - g) == 1 and g in reach[k]):
                reach[k - 1].add(u)
    if r not in reach[0]:
        return
    count = 0
    stack: list[tuple[int, ...]] = [(r,)]
    while stack:
        v = stack.pop()
        k = len(v) - 1
        if k == L:
            count += 1
            if count > budget:
                raise BudgetExceeded(f"path enumeration exceeded {budget} paths", count)
            yield v
            continue
        g = word[k]
        u = v[-1]
        nexts = [u]
        if abs(u - g) == 1:
            nexts.append(g)
        for w in reversed(nexts):
            if w in reach[k + 1]:
                stack.append(v + (w,))


def enumerate_paths(P: PositiveBraid, r: int, s: Endpoint, budget: int = DEFAULT_PATH_BUDGET) -> list[SigmaPath]:
    out = [SigmaPath(v, P) for v in _walks(P.word, r, _endpoints(s), budget)]
    out.sort(key=lambda x: x.vertices)
    return out


def weighted_count(P: PositiveBraid, r: int, s: Endpoint) -> LaurentPoly:
    """Sum of all walk weights, by dynamic programming over (step, vertex)."""
    state = {r: ZERO + 1}
    for g in P.word:
        nxt: dict[int, LaurentPoly] = {}
        for u, w in state.items():
            targets = [u] + ([g] if abs(u - g) == 1 else [])
            for v in targets:
                sign, deg = _step_weight(g, u, v)
                nxt[v] = nxt.get(v, ZERO) + w * LaurentPoly.monomial(sign, deg)
        state = nxt
    total = ZERO
    for e in _endpoints(s):
        total = total + state.get(e, ZERO)
    return total


# ---------------------------------------------------------------------------
# Cancelling pairs.

@dataclass(frozen=True)
class DistinguishedPair:
    kind: str  # "delta", "epsilon", "zeta", "eta" or "theta"
    members: tuple[SigmaPath, SigmaPath]
    k: int  # generator index of the anchoring sigma_2 (0 for the virtual anchor)
    p: int  # syllable holding that sigma_2 (0 for the virtual anchor)
    span: tuple[int, int]  # vertex indices that differ between the members


@dataclass(frozen=True)
class _Anchor:
    p: int
    k: int
    b_p: int
    c_p: int
    nxt: Syllable


def _anchors(P: PositiveBraid) -> list[_Anchor]:
    """Positions of the last sigma_2 of each syllable followed by another syllable.

    A virtual anchor sits before the first letter (p = k = 0), as if the
    word were preceded by sigma_2; it lets pairs start at the beginning.
    """
    out = []
    syl = P.syllables
    if syl:
        out.append(_Anchor(0, 0, 0, 0, syl[0]))
    pos = 0
    for p, s in enumerate(syl, start=1):
        pos += s.a + s.b + s.c
        if p < len(syl) and s.c > 0:
            out.append(_Anchor(p, pos, s.b, s.c, syl[p]))
    return out


def _candidates(v: Sequence[int], an: _Anchor) -> Iterator[tuple[str, int, int, tuple[int, ...]]]:
    """Yield (kind, lo, hi, alt_values) for every pair at this anchor containing v.

    [lo, hi] is the inclusive range of vertex indices that the partner
    replaces, all by the single value in ``alt_values``.
    """
    k, a, b, c = an.k, an.nxt.a, an.nxt.b, an.nxt.c
    L = len(v) - 1
    real = an.p >= 1

    def change(frm: int, to: int) -> bool:
        return real and v[k - 1] == frm and v[k] == to

    # delta
    if real and a > 0 and k + 1 <= L and v[k - 1] == 1 == v[k + 1] and v[k] in (1, 2):
        exempt = an.c_p == 1 and k - an.b_p - 2 >= 0 and v[k - an.b_p - 2] == 2
        if not exempt:
            yield "delta", k, k, (3 - v[k],)
    # epsilon
    if real and b > 0 and k + a + 1 <= L and v[k - 1] == 3 == v[k + a + 1]:
        seg = set(v[k : k + a + 1])
        if seg in ({2}, {3}):
            yield "epsilon", k, k + a, (5 - v[k],)
    if c > 0 and k + a + b + 1 <= L and v[k + a + b + 1] == 2:
        # zeta
        if a == 1 and b > 0 and change(1, 2) and all(v[k + j] == 2 for j in range(a + b)) and v[k + a + b] in (2, 3):
            yield "zeta", k + a + b, k + a + b, (5 - v[k + a + b],)
        # eta
        if a >= 1 and all(v[k + j] == 2 for j in range(a)) and (a > 1 or not change(1, 2)):
            seg = set(v[k + a : k + a + b + 1])
            if seg in ({1}, {2}):
                yield "eta", k + a, k + a + b, (3 - v[k + a],)
        # theta
        if a == 0 and b >= 1 and all(v[k + j] == 2 for j in range(b)) and (b > 1 or not change(3, 2)):
            if v[k + b] in (2, 3):
                yield "theta", k + b, k + b, (5 - v[k + b],)


def distinguished_pairs(x: SigmaPath) -> list[DistinguishedPair]:
    """Every cancelling pair containing ``x``, ordered by where they start."""
    v = x.vertices
    out = []
    for an in _anchors(x.braid):
        for kind, lo, hi, (alt,) in _candidates(v, an):
            partner = SigmaPath(v[:lo] + (alt,) * (hi - lo + 1) + v[hi + 1 :], x.braid)
            out.append(DistinguishedPair(kind, (x, partner), an.k, an.p, (lo, hi)))
    out.sort(key=lambda d: d.span)
    return out


def distinguished_partner(x: SigmaPath) -> Optional[tuple[str, SigmaPath]]:
    """The earliest pair containing ``x`` as (kind, partner), or None."""
    pairs = distinguished_pairs(x)
    if not pairs:
        return None
    first = pairs[0]
    return first.kind, first.members[1]


def is_admissible(x: SigmaPath) -> bool:
    v = x.vertices
    return not any(True for an in _anchors(x.braid) for _ in _candidates(v, an))


def admissible_paths(P: PositiveBraid, r: int, s: Endpoint, budget: int = DEFAULT_PATH_BUDGET) -> list[SigmaPath]:
    return [x for x in enumerate_paths(P, r, s, budget) if is_admissible(x)]


def admissible_weighted_count(P: PositiveBraid, r: int, s: Endpoint, budget: int = DEFAULT_PATH_BUDGET) -> LaurentPoly:
    word = P.word
    total = ZERO
    anchors = _anchors(P)
    for v in _walks(word, r, _endpoints(s), budget):
        if any(True for an in anchors for _ in _candidates(v, an)):
            continue
        sign, deg = _weight_of(word, v)
        total = total + LaurentPoly.monomial(sign, deg)
    return total


# ---------------------------------------------------------------------------
# Good and bad paths at prefix boundaries.

@dataclass(frozen=True)
class PathClass:
    tag: str  # "good" or "bad"
    switch: Optional[int] = None  # 1 or 3 for walks ending at 2 that changed at the last sigma_2

    def to_json(self) -> dict:
        out = {"tag": self.tag}
        if self.switch is not None:
            out["switch"] = self.switch
        return out


def _last_index(word: Sequence[int], g: int, lo: int = 0) -> Optional[int]:
    """1-based index of the last occurrence of g in word[lo:], or None."""
    for k in range(len(word), lo, -1):
        if word[k - 1] == g:
            return k
    return None


def classify_path(x: SigmaPath, s: Endpoint, following: Optional[Syllable] = None) -> PathClass:
    """Good/bad class of an admissible walk at a prefix boundary.

    ``s`` is ``MERGED`` when the prefix ends after a sigma_1/sigma_3 run and
    ``2`` when it ends after a sigma_2 run.  For ``s == 2`` the class depends
    on the syllable that follows in the ambient braid, passed as
    ``following`` (None at the end of the braid).
    """
    P = x.braid
    word = P.word
    v = x.vertices
    if not word:
        return PathClass("good")
    if s == 2 or s == "2":
        k = _last_index(word, 2)
        ch = vertex_change(v, k) if k is not None else None
        switch = ch[0] if ch is not None and ch[1] == 2 else None
        bad = False
        if following is not None:
            if following.a > 0 and ch == (1, 2):
                bad = True
            if following.b > 0 and ch == (3, 2):
                bad = True
        return PathClass("bad" if bad else "good", switch)
    last = P.syllables[-1]
    a_p, b_p = last.a, last.b
    run_start = len(word) - a_p - b_p
    if x.end == 1:
        k1 = _last_index(word, 1, run_start) if a_p > 0 else None
        bad = k1 is not None and vertex_change(v, k1) == (2, 1)
        return PathClass("bad" if bad else "good")
    if x.end == 3:
        k3 = _last_index(word, 3, run_start) if b_p > 0 else None
        bad = False
        if k3 is not None:
            if a_p == 0:
                bad = vertex_change(v, k3) == (2, 3)
            elif a_p == 1:
                k2 = _last_index(word, 2)
                bad = (
                    vertex_change(v, k3) == (2, 3)
                    and k2 is not None
                    and vertex_change(v, k2) == (1, 2)
                )
        return PathClass("bad" if bad else "good")
    raise ValueError("walk at a sigma_1/sigma_3 boundary must end at 1 or 3")


@dataclass
class WeightSummary:
    """Weighted counts of classified walks at one prefix boundary.

    Fields are None when the prefix shape does not define them.
    """

    s: str
    r: int
    p: int
    w_lambda: Optional[LaurentPoly] = None
    w_mu1: Optional[LaurentPoly] = None
    w_mu3: Optional[LaurentPoly] = None
    w_mu: Optional[LaurentPoly] = None
    w_nu: Optional[LaurentPoly] = None
    w_lambda1: Optional[LaurentPoly] = None
    w_lambda3: Optional[LaurentPoly] = None
    flags: dict = field(default_factory=dict)

    def fields(self) -> dict[str, LaurentPoly]:
        names = ["w_lambda", "w_mu1", "w_mu3", "w_mu", "w_nu", "w_lambda1", "w_lambda3"]
        return {n: getattr(self, n) for n in names if getattr(self, n) is not None}

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "r": self.r,
            "p": self.p,
            "flags": self.flags,
            "counts": {n: w.to_json() for n, w in self.fields().items()},
        }


def _sum(paths: Sequence[SigmaPath]) -> LaurentPoly:
    total = ZERO
    for x in paths:
        total = total + path_weight(x).poly()
    return total


def weight_summary(sigma: PositiveBraid, s: str, p: int, r: int, budget: int = DEFAULT_PATH_BUDGET) -> WeightSummary:
    """Classified weighted counts at the s-prefix with index p of ``sigma``.

    ``s`` is ``"2"`` (prefix = syllables 1..p-1) or ``"13"`` (prefix also
    holds the sigma_1/sigma_3 run of syllable p).
    """
    syl = sigma.syllables
    if s == "2":
        prefix = PositiveBraid(syl[: p - 1])
        following = syl[p - 1] if p <= len(syl) else None
        a_p = following.a if following else 0
        b_p = following.b if following else 0
        c_prev = syl[p - 2].c if p >= 2 else 0
        out = WeightSummary("2", r, p, flags={"c_prev": c_prev, "a_p": a_p, "b_p": b_p})
        if p < 2:
            return out
        paths = admissible_paths(prefix, r, 2, budget)
        classes = [(x, classify_path(x, 2, following)) for x in paths]
        k2 = _last_index(prefix.word, 2)
        if c_prev >= 2:
            out.w_lambda = _sum([x for x, _ in classes if vertex_change(x, k2) is None])
            out.w_mu1 = _sum([x for x, c in classes if c.switch == 1])
            out.w_mu3 = _sum([x for x, c in classes if c.switch == 3])
            out.w_lambda1 = out.w_lambda + out.w_mu3
            out.w_lambda3 = out.w_lambda + out.w_mu1
        else:
            out.w_lambda = _sum([x for x, c in classes if c.tag == "good"])
        if a_p == 0:
            out.w_mu = _sum([x for x, c in classes if c.switch == 3])
            out.w_nu = admissible_weighted_count(prefix, r, 1, budget)
        elif b_p == 0:
            out.w_mu = _sum([x for x, c in classes if c.switch == 1])
            out.w_nu = admissible_weighted_count(prefix, r, 3, budget)
        return out
    if s != "13":
        raise ValueError(f"bad prefix kind {s!r}")
    last = syl[p - 1]
    prefix = PositiveBraid(syl[: p - 1] + (Syllable(last.a, last.b, 0),))
    a_p, b_p = last.a, last.b
    out = WeightSummary("13", r, p, flags={"a_p": a_p, "b_p": b_p, "c_prev": syl[p - 2].c if p >= 2 else 0})
    ones = [(x, classify_path(x, MERGED)) for x in admissible_paths(prefix, r, 1, budget)]
    threes = [(x, classify_path(x, MERGED)) for x in admissible_paths(prefix, r, 3, budget)]
    if a_p > 0 and b_p > 0:
        out.w_lambda1 = _sum([x for x, c in ones if c.tag == "good"])
        out.w_lambda3 = _sum([x for x, c in threes if c.tag == "good"])
        out.w_mu1 = _sum([x for x, c in ones if c.tag == "bad"])
        out.w_mu3 = _sum([x for x, c in threes if c.tag == "bad"])
    elif a_p == 0:
        out.w_lambda = _sum([x for x, c in threes if c.tag == "good"])
        out.w_mu = _sum([x for x, c in threes if c.tag == "bad"])
        out.w_nu = _sum([x for x, _ in ones])
    else:
        out.w_lambda = _sum([x for x, c in ones if c.tag == "good"])
        out.w_mu = _sum([x for x, c in ones if c.tag == "bad"])
        out.w_nu = _sum([x for x, _ in threes])
    return out
