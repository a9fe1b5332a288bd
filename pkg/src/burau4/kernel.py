"""Kernel certification, regularity diagnostics and exhaustive sweeps.

A braid word g is written as Delta^k sigma with sigma positive and not
divisible by Delta.  Its image is trivial modulo t iff the image of sigma
equals the image of Delta^-k modulo t.  The image of a power of Delta has
exactly one nonzero entry per row, so a row of the image of sigma with two
entries whose leading coefficients survive reduction modulo t is enough.
That row property is what the normal and weakly normal theorems supply;
the direct matrix comparison is the fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .blocks import is_normal_braid, is_normal_braid_syllables
from .braid import PositiveBraid, delta_divides, garside_normal_form, minimal_word
from .laurent import (
    BurauMatrix,
    LaurentPoly,
    burau_delta_power,
    burau_generator,
    burau_of_word,
    is_prime,
    leading,
    reduce_mod,
    row_multiple_leading_nonzero,
)
from .paths import weight_summary
from .weak import is_weakly_normal

__all__ = [
    "KernelVerdict",
    "RegularityReport",
    "SweepStatistics",
    "FamilyReport",
    "check_kernel",
    "regularity_report",
    "verify_theorem_sweep",
    "iter_minimal_forms",
    "exglobal_family",
    "family_word",
    "multiple_leading_rows",
    "DEFAULT_PRIMES",
    "DEFAULT_KERNEL_BUDGET",
]

DEFAULT_PRIMES = (5, 7)
DEFAULT_KERNEL_BUDGET = 4096  # letters in the positive tail


def multiple_leading_rows(m: BurauMatrix, t: int) -> list[int]:
    """Rows with at least two entries whose leading coefficient is nonzero mod t."""
    return [r for r in (1, 2, 3) if row_multiple_leading_nonzero(m, r, t)]


# ---------------------------------------------------------------------------
# Kernel verdicts.

@dataclass
class KernelVerdict:
    status: str  # "trivial", "not_in_kernel" or "unknown"
    k: int = 0
    tail: tuple[int, ...] = ()
    certificate: Optional[dict] = None
    direct_check: Optional[dict] = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status, "garside": {"k": self.k, "tail": list(self.tail)}}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.direct_check is not None:
            out["direct_check"] = self.direct_check
        if self.reason:
            out["reason"] = self.reason
        return out


def _theorem_certificate(tail: PositiveBraid, m: BurauMatrix, primes: Sequence[int]) -> Optional[dict]:
    normal = is_normal_braid(tail).normal
    if normal:
        theorem, allowed = "main", [t for t in primes if t != 2]
    else:
        if not is_weakly_normal(tail).weakly_normal:
            return None
        theorem, allowed = "mainstronger", [t for t in primes if t not in (2, 3)]
    for t in allowed:
        rows = multiple_leading_rows(m, t)
        if rows:
            r = rows[0]
            entries = []
            for s, x in enumerate(m.rows[r - 1], start=1):
                lead = leading(x)
                if lead is not None:
                    entries.append({"s": s, "degree": lead.degree, "coefficient": lead.coefficient})
            return {"theorem": theorem, "row": r, "prime": t, "leading_entries": entries}
    return None


def _direct_witness(m: BurauMatrix, target: BurauMatrix, primes: Sequence[int]) -> Optional[dict]:
    for t in primes:
        a, b = reduce_mod(m, t), reduce_mod(target, t)
        for r in range(3):
            for s in range(3):
                if a.rows[r][s] != b.rows[r][s]:
                    return {
                        "prime": t,
                        "entry": [r + 1, s + 1],
                        "tail_entry": a.rows[r][s].to_json(),
                        "delta_entry": b.rows[r][s].to_json(),
                    }
    for r in range(3):
        for s in range(3):
            if m.rows[r][s] != target.rows[r][s]:
                return {
                    "prime": None,
                    "entry": [r + 1, s + 1],
                    "tail_entry": m.rows[r][s].to_json(),
                    "delta_entry": target.rows[r][s].to_json(),
                }
    return None


def check_kernel(word: Iterable[int], primes: Sequence[int] = DEFAULT_PRIMES,
                 budget: int = DEFAULT_KERNEL_BUDGET) -> KernelVerdict:
    """Decide whether the braid lies outside the Burau kernel, with a witness.

    The theorem route certifies a row of the tail's matrix; the direct route
    compares the tail's matrix with that of Delta^-k, first modulo each
    prime and then over the integers.
    """
    primes = list(primes)
    for t in primes:
        if not is_prime(t):
            raise ValueError(f"{t} is not prime")
    letters = tuple(word)
    g = garside_normal_form(letters)
    tail = g.tail.word
    if g.k == 0 and not tail:
        return KernelVerdict("trivial", 0, ())
    if len(tail) > budget:
        return KernelVerdict("unknown", g.k, tail, reason=f"tail length {len(tail)} exceeds budget {budget}")
    m = burau_of_word(tail)
    cert = _theorem_certificate(g.tail, m, primes) if tail else None
    witness = _direct_witness(m, burau_delta_power(-g.k), primes)
    if cert is not None or witness is not None:
        return KernelVerdict("not_in_kernel", g.k, tail, certificate=cert, direct_check=witness)
    return KernelVerdict("unknown", g.k, tail, reason="image is trivial over the integers")


def verify_certificate(v: KernelVerdict, word: Iterable[int]) -> bool:
    """Re-check a not_in_kernel verdict against the directly computed image."""
    if v.status != "not_in_kernel":
        return True
    if v.certificate is None and v.direct_check is None:
        return False
    full = burau_of_word(tuple(word))
    if v.certificate is not None:
        t, r = v.certificate["prime"], v.certificate["row"]
        if not row_multiple_leading_nonzero(burau_of_word(v.tail), r, t):
            return False
        if reduce_mod(full, t).is_identity():
            return False
    if v.direct_check is not None:
        t = v.direct_check["prime"]
        if (reduce_mod(full, t) if t else full).is_identity():
            return False
    return True


__all__.append("verify_certificate")


# ---------------------------------------------------------------------------
# Regularity.

_NEG = float("-inf")


def _deg(p: Optional[LaurentPoly]) -> float:
    if p is None or p.is_zero():
        return _NEG
    return p.degree()


def _lead(p: Optional[LaurentPoly]) -> int:
    if p is None or p.is_zero():
        return 0
    return p.coefficient(p.degree())


def _smooth(c: int, primes: tuple[int, ...]) -> bool:
    if c == 0:
        return False
    c = abs(c)
    for t in primes:
        while c % t == 0:
            c //= t
    return c == 1


def _sgn(x: int) -> int:
    return 1 if x > 0 else -1


@dataclass
class RegularityReport:
    s: str
    p: int
    r: int
    case: str
    strongly_r_regular: bool  # only 2 in the leading coefficient
    strongly_r_regular_23: bool  # 2 and 3 allowed
    r_regular: bool
    sign: Optional[int] = None
    discrepancy: Optional[float] = None
    switch: list[str] = field(default_factory=list)
    pseudo_r_regular: Optional[bool] = None
    pseudo_discrepancy: Optional[float] = None
    degrees: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def num(x):
            return None if x is None or x == _NEG else int(x)

        return {
            "s": self.s,
            "p": self.p,
            "r": self.r,
            "case": self.case,
            "strongly_r_regular": self.strongly_r_regular,
            "strongly_r_regular_23": self.strongly_r_regular_23,
            "r_regular": self.r_regular,
            "sign": self.sign,
            "discrepancy": num(self.discrepancy),
            "switch": self.switch,
            "pseudo_r_regular": self.pseudo_r_regular,
            "pseudo_discrepancy": num(self.pseudo_discrepancy),
            "degrees": {k: num(v) for k, v in self.degrees.items()},
        }


def _strong(case: str, ws, flags: dict, primes: tuple[int, ...], paired: bool) -> bool:
    dl, l0 = _deg(ws.w_lambda), _lead(ws.w_lambda)
    a_p, b_p = flags["a_p"], flags["b_p"]
    if case == "a.i":
        return _smooth(l0, primes) and dl > max(_deg(ws.w_mu1), _deg(ws.w_mu3))
    if case == "a.ii":
        if not _smooth(l0, primes):
            return False
        if (a_p == 0 or b_p == 0) and not dl > _deg(ws.w_mu):
            return False
        if a_p == 0 and not _deg(ws.w_nu) <= dl:
            return False
        if b_p == 0 and a_p > 0 and not _deg(ws.w_nu) + 1 <= dl:
            return False
        return True
    if case == "b.i":
        if not (_smooth(l0, primes) and dl > _deg(ws.w_mu)):
            return False
        if a_p == 0:
            return _deg(ws.w_nu) + 1 <= dl
        return _deg(ws.w_nu) + 3 <= dl
    # b.ii
    l10, l30 = _lead(ws.w_lambda1), _lead(ws.w_lambda3)
    if not _smooth(l30, primes):
        return False
    if a_p > 1:
        sums = (l10 + l30 == 0,) if not paired else tuple(x * l10 + y * l30 == 0 for x in (1, 2) for y in (1, 2))
        return any(sums) and _deg(ws.w_lambda1) > _deg(ws.w_mu1)
    return _deg(ws.w_lambda3) + 1 >= _deg(ws.w_mu1) and _deg(ws.w_lambda3) > _deg(ws.w_mu3)


def _regular(case: str, ws, flags: dict) -> tuple[bool, Optional[int], float, list[str]]:
    """Regularity with sign, discrepancy and switch tags; primes 2 and 3 allowed."""
    P23 = (2, 3)
    dl, l0 = _deg(ws.w_lambda), _lead(ws.w_lambda)
    a_p = flags["a_p"]
    sign: Optional[int] = None
    tags: list[str] = []
    if case == "a.i":
        d1, d3 = _deg(ws.w_mu1), _deg(ws.w_mu3)
        ok = _smooth(l0, P23) and dl > min(d1, d3)
        for i, d, w in ((1, d1, ws.w_mu1), (3, d3, ws.w_mu3)):
            if dl <= d:
                ok = ok and abs(l0) == abs(_lead(w))
                sign = _sgn(_lead(w) * l0) if ok else None
                tags.append(f"{i}-switch mu")
        return ok, sign, max(d1, d3) - dl, tags
    if case in ("a.ii", "b.i"):
        psi = 0 if a_p == 0 else 1
        i, i2 = (3, 1) if a_p == 0 else (1, 3)
        slack = psi if case == "a.ii" else 2 * psi + 1
        dm, dn = _deg(ws.w_mu), _deg(ws.w_nu)
        ok = _smooth(l0, P23) and (dl > dm or dn + slack <= dl)
        if dl <= dm:
            ok = ok and abs(l0) == abs(_lead(ws.w_mu))
            sign = _sgn(_lead(ws.w_mu) * l0) if ok else None
            tags.append(f"{i}-switch mu")
        if dn + slack > dl:
            ok = ok and abs(l0) == abs(_lead(ws.w_nu))
            if ok:
                flip = (-1) ** (1 - psi) if case == "a.ii" else -1
                sign = _sgn(flip * _lead(ws.w_nu) * l0)
            tags.append(f"{i2}-switch nu")
        xi = dm - dl if dn + slack <= dl else dn + slack - dl
        return ok, sign, xi, tags
    # b.ii
    l10, l30 = _lead(ws.w_lambda1), _lead(ws.w_lambda3)
    d1, d3 = _deg(ws.w_lambda1), _deg(ws.w_lambda3)
    m1, m3 = _deg(ws.w_mu1), _deg(ws.w_mu3)
    paired = any(x * l10 + y * l30 == 0 for x in (1, 2) for y in (1, 2)) and l10 != 0
    if a_p > 1:
        if d1 < m1:
            ok = d3 + 1 >= m1 and _smooth(l30, P23)
        else:
            ok = (d1 > d3 + 1 and _smooth(l10, P23)) or (d1 < d3 + 1 and _smooth(l30, P23)) or paired
        return ok, None, (m1 - d1 if paired else 0), tags
    ok = _smooth(l30, P23) and d3 > min(m1 - 2, m3)
    if d3 <= m1 - 2:
        ok = ok and abs(l30) == abs(_lead(ws.w_mu1))
        sign = _sgn(-_lead(ws.w_mu1) * l30) if ok else None
        tags.append("1-switch mu")
    if d3 <= m3:
        ok = ok and abs(l30) == abs(_lead(ws.w_mu3))
        sign = _sgn(_lead(ws.w_mu3) * l30) if ok else None
        tags.append("3-switch mu")
    return ok, sign, max(m1 - 2, m3) - d3, tags


def _pseudo(sigma: PositiveBraid, s: str, p: int, ws) -> tuple[Optional[bool], Optional[float]]:
    syl = sigma.syllables
    P23 = (2, 3)
    if s == "13" and p >= 2:
        prev, cur = syl[p - 2], syl[p - 1]
        if prev.a > 0 and prev.c == 1 and cur.a == 2 and ws.w_mu is not None:
            dm, dn = _deg(ws.w_mu), _deg(ws.w_nu)
            m0 = _lead(ws.w_mu)
            ok = _deg(ws.w_lambda) <= dm and dm == dn + prev.a + 1 and m0 == _lead(ws.w_nu) and _smooth(m0, P23)
            return ok, (dm - _deg(ws.w_lambda) if ok else None)
    if s == "2" and p >= 3:
        prev, before = syl[p - 2], syl[p - 3]
        if prev.a == 0 and prev.b == 1 and before.c > 0 and ws.w_lambda1 is not None:
            d1, m1, m3 = _deg(ws.w_lambda1), _deg(ws.w_mu1), _deg(ws.w_mu3)
            u1 = _lead(ws.w_mu1)
            ok = d1 <= m1 and m3 == m1 + 1 and _lead(ws.w_mu3) == -u1 and _smooth(u1, P23)
            return ok, (m1 - d1 if ok else None)
    return None, None


def regularity_report(sigma: PositiveBraid, s: str, p: int, r: int) -> RegularityReport:
    """Regularity predicates of the s-subproduct with index p of ``sigma``, row r.

    ``s`` is "2" (syllables 1..p-1) or "13" (also the sigma_1/sigma_3 run of
    syllable p), as in :func:`burau4.paths.weight_summary`.
    """
    ws = weight_summary(sigma, s, p, r)
    flags = ws.flags
    if s == "2":
        case = "a.i" if flags["c_prev"] >= 2 else "a.ii"
    else:
        case = "b.ii" if flags["a_p"] > 0 and flags["b_p"] > 0 else "b.i"
    strong2 = _strong(case, ws, flags, (2,), paired=False)
    strong23 = _strong(case, ws, flags, (2, 3), paired=True)
    reg, sign, xi, tags = _regular(case, ws, flags)
    pseudo, pxi = _pseudo(sigma, s, p, ws)
    degrees = {name: _deg(w) for name, w in ws.fields().items()}
    return RegularityReport(s, p, r, case, strong2, strong23, reg, sign, xi, tags, pseudo, pxi, degrees)


# ---------------------------------------------------------------------------
# Sweeps.

def iter_minimal_forms(max_len: int, min_len: int = 1) -> Iterator[tuple[tuple[int, ...], BurauMatrix]]:
    """Depth-first walk of minimal words with their images.

    Minimal words are closed under prefixes, so each one extends a shorter
    one by a single letter.
    """
    stack: list[tuple[tuple[int, ...], BurauMatrix]] = [((), BurauMatrix.identity())]
    while stack:
        w, m = stack.pop()
        if len(w) >= min_len:
            yield w, m
        if len(w) == max_len:
            continue
        for x in (3, 2, 1):
            v = w + (x,)
            if minimal_word(v) == v:
                stack.append((v, m @ burau_generator(x)))


@dataclass
class SweepStatistics:
    max_len: int
    primes: tuple[int, ...]
    counts: dict = field(default_factory=dict)  # per length: total, normal, weakly_normal, neither
    failures: list[dict] = field(default_factory=list)

    @property
    def normal_fraction(self) -> dict[int, float]:
        return {L: c["normal"] / c["total"] for L, c in sorted(self.counts.items()) if c["total"]}

    def to_json(self) -> dict:
        return {
            "max_len": self.max_len,
            "primes": list(self.primes),
            "counts": {str(L): c for L, c in sorted(self.counts.items())},
            "normal_fraction": {str(L): f for L, f in self.normal_fraction.items()},
            "failures": self.failures,
        }


def classify_braid(sigma: PositiveBraid, syllable_reading: bool = False) -> str:
    normal = is_normal_braid(sigma).normal
    if syllable_reading:
        normal = normal or is_normal_braid_syllables(sigma)
    if normal:
        return "normal"
    if is_weakly_normal(sigma).weakly_normal:
        return "weakly_normal"
    return "neither"


__all__.append("classify_braid")


def verify_theorem_sweep(max_len: int, primes: Sequence[int] = DEFAULT_PRIMES, min_len: int = 1,
                         weak: bool = True, syllable_reading: bool = False,
                         on_record=None) -> SweepStatistics:
    """Check the row property on every Delta-indivisible minimal form up to ``max_len``.

    Normal braids are checked for each prime other than 2, weakly normal ones
    for each prime other than 2 and 3.  ``on_record`` receives one dict per
    braid when given.
    """
    primes = tuple(primes)
    stats = SweepStatistics(max_len, primes)
    for w, m in iter_minimal_forms(max_len, min_len):
        if delta_divides(w):
            continue
        sigma = PositiveBraid.from_word(w)
        if weak:
            kind = classify_braid(sigma, syllable_reading)
        else:
            normal = is_normal_braid(sigma).normal or (syllable_reading and is_normal_braid_syllables(sigma))
            kind = "normal" if normal else "unchecked"
        c = stats.counts.setdefault(len(w), {"total": 0, "normal": 0, "weakly_normal": 0, "neither": 0, "unchecked": 0})
        c["total"] += 1
        c[kind] += 1
        bad_primes = []
        if kind in ("normal", "weakly_normal"):
            skip = (2,) if kind == "normal" else (2, 3)
            bad_primes = [t for t in primes if t not in skip and not multiple_leading_rows(m, t)]
            if bad_primes:
                stats.failures.append({"word": list(w), "class": kind, "primes": bad_primes})
        if on_record is not None:
            on_record({"word": list(w), "class": kind, "ok": not bad_primes})
    return stats


# ---------------------------------------------------------------------------
# The sigma_1^n sigma_2 (sigma_1^2 sigma_2^2)^m sigma_1 family.

def family_word(n: int, m: int) -> tuple[int, ...]:
    return (1,) * n + (2,) + (1, 1, 2, 2) * m + (1,)


@dataclass
class FamilyReport:
    n: int
    m: int
    word: tuple[int, ...]
    entry_22: LaurentPoly
    row2_leading: list[Optional[tuple[int, int]]]
    row3_strongly_regular: bool
    weakly_normal: bool
    weakly_normal_literal: bool
    delta_power_free: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "word": list(self.word),
            "entry_22": self.entry_22.to_json(),
            "row2_leading": [list(x) if x else None for x in self.row2_leading],
            "row3_strongly_regular": self.row3_strongly_regular,
            "weakly_normal": self.weakly_normal,
            "weakly_normal_literal": self.weakly_normal_literal,
            "delta_power_free": self.delta_power_free,
        }


def exglobal_family(n: int, m: int, k_bound: int = 8) -> FamilyReport:
    """Matrix data and verdicts for the family braid with parameters (n, m).

    ``weakly_normal`` treats the opening 2-block as a string head, which is
    where the cancellation in this family comes from; ``weakly_normal_literal``
    ignores initial blocks.
    """
    if n < 2 or m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    w = family_word(n, m)
    sigma = PositiveBraid.from_word(w)
    mat = burau_of_word(w)
    lead = [leading(x) for x in mat.rows[1]]
    row2 = [(d.degree, d.coefficient) if d else None for d in lead]
    reg = regularity_report(sigma, "2", 2, 3).strongly_r_regular
    free = all(mat != burau_delta_power(k) for k in range(-k_bound, k_bound + 1))
    return FamilyReport(
        n, m, w, mat.rows[1][1], row2, reg,
        is_weakly_normal(sigma, include_initial=True).weakly_normal,
        is_weakly_normal(sigma).weakly_normal,
        free,
    )
