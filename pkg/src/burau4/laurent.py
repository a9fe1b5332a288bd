"""Exact Laurent polynomials in ``q`` and 3x3 Burau matrices over Z[q, q^-1].

A :class:`LaurentPoly` is an immutable sparse map from exponent to nonzero
integer coefficient.  Python integers are arbitrary precision, so leading
coefficients never overflow however long the braid.

Reduction modulo a prime reuses the same type with coefficients normalised
into ``[0, t)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

__all__ = [
    "LaurentPoly",
    "LeadingData",
    "BurauMatrix",
    "Q",
    "ONE",
    "ZERO",
    "burau_generator",
    "burau_of_word",
    "burau_delta_power",
    "reduce_mod",
    "specialize_rational",
    "leading",
    "row_multiple_leading_nonzero",
    "is_prime",
]


def is_prime(t: int) -> bool:
    if t < 2:
        return False
    if t % 2 == 0:
        return t == 2
    d = 3
    while d * d <= t:
        if t % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class LeadingData:
    degree: int
    coefficient: int


class LaurentPoly:
    """Sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, coefficient: int, exponent: int) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "LaurentPoly":
        acc: dict[int, int] = {}
        for e, c in pairs:
            acc[e] = acc.get(e, 0) + c
        return cls(acc)

    # basic queries
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, int]]:
        """Terms in descending exponent order."""
        for e in sorted(self._terms, reverse=True):
            yield e, self._terms[e]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def degree(self) -> Optional[int]:
        return max(self._terms) if self._terms else None

    def low_degree(self) -> Optional[int]:
        return min(self._terms) if self._terms else None

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self._terms or not other._terms:
            return ZERO
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly({-e * (-n): c ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def mod(self, t: int) -> "LaurentPoly":
        return LaurentPoly({e: c % t for e, c in self._terms.items()})

    def evaluate(self, value) -> Fraction:
        x = Fraction(value)
        total = Fraction(0)
        for e, c in self._terms.items():
            if e < 0 and x == 0:
                raise ZeroDivisionError("negative power of q evaluated at zero")
            total += c * x ** e
        return total

    # serialisation
    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls.from_pairs(data)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            sign = "-" if c < 0 else "+"
            body = f"{abs(c)}*q^{e}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str``: accepts ``c*q^e`` terms joined by + and -."""
        s = text.replace(" ", "")
        if s == "0":
            return ZERO
        acc: dict[int, int] = {}
        pos = 0
        for m in _TERM.finditer(s):
            if m.start() != pos or (pos > 0 and not m.group(1)):
                raise ValueError(f"malformed polynomial at offset {pos}: {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            e = int(m.group(3))
            acc[e] = acc.get(e, 0) + sign * int(m.group(2))
            pos = m.end()
        if pos != len(s) or not s:
            raise ValueError(f"malformed polynomial at offset {pos}: {text!r}")
        return cls(acc)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


_TERM = re.compile(r"([+-]?)(\d+)\*q\^(-?\d+)")


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
Q = LaurentPoly.monomial(1, 1)


def leading(p: LaurentPoly) -> Optional[LeadingData]:
    d = p.degree()
    if d is None:
        return None
    return LeadingData(d, p.coefficient(d))


class BurauMatrix:
    """Immutable 3x3 matrix of Laurent polynomials."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("Burau matrices are 3x3")
        self.rows = tuple(tuple(_coerce(x) for x in r) for r in rows)

    @classmethod
    def identity(cls) -> "BurauMatrix":
        return cls([[1 if i == j else 0 for j in range(3)] for i in range(3)])

    def entry(self, r: int, s: int) -> LaurentPoly:
        """1-based entry access, matching the (r, s) path-count convention."""
        return self.rows[r - 1][s - 1]

    def __matmul__(self, other: "BurauMatrix") -> "BurauMatrix":
        a, b = self.rows, other.rows
        return BurauMatrix(
            [
                [a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3)]
                for i in range(3)
            ]
        )

    def scale(self, p: LaurentPoly) -> "BurauMatrix":
        return BurauMatrix([[p * x for x in r] for r in self.rows])

    def determinant(self) -> LaurentPoly:
        m = self.rows
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def map(self, fn) -> "BurauMatrix":
        return BurauMatrix([[fn(x) for x in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, BurauMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_identity(self) -> bool:
        return self == BurauMatrix.identity()

    def to_json(self) -> list[list[list[list[int]]]]:
        return [[x.to_json() for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "BurauMatrix":
        return cls([[LaurentPoly.from_json(x) for x in r] for r in data])

    def __str__(self) -> str:
        cells = [[str(x) for x in r] for r in self.rows]
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self) -> str:
        return f"BurauMatrix({[[str(x) for x in r] for r in self.rows]!r})"


_QINV = LaurentPoly.monomial(1, -1)
_GENERATORS = {
    1: BurauMatrix([[Q, 0, 0], [-Q, 1, 0], [0, 0, 1]]),
    2: BurauMatrix([[1, 1, 0], [0, Q, 0], [0, -Q, 1]]),
    3: BurauMatrix([[1, 0, 0], [0, 1, 1], [0, 0, Q]]),
}
_INVERSES = {
    1: BurauMatrix([[_QINV, 0, 0], [1, 1, 0], [0, 0, 1]]),
    2: BurauMatrix([[1, -_QINV, 0], [0, _QINV, 0], [0, 1, 1]]),
    3: BurauMatrix([[1, 0, 0], [0, 1, -_QINV], [0, 0, _QINV]]),
}


def burau_generator(i: int, inverse: bool = False) -> BurauMatrix:
    if i not in _GENERATORS:
        raise ValueError(f"generator index {i} out of range 1..3")
    return _INVERSES[i] if inverse else _GENERATORS[i]


def burau_of_word(letters: Iterable[int]) -> BurauMatrix:
    """Ordered product of generator matrices; negative letters are inverses.

    Accepts any iterable of signed generator indices, including a
    :class:`burau4.braid.BraidWord` (which iterates its letters).
    """
    m = BurauMatrix.identity()
    for x in letters:
        m = m @ burau_generator(abs(x), x < 0)
    return m


def burau_delta_power(k: int) -> BurauMatrix:
    """Closed form of the image of Delta^k.

    Delta^2 is central with image q^4 I.  For odd k the matrix is
    anti-diagonal with entries q^(2k-1), -q^(2k), q^(2k+1) from the top row
    down; this was checked against the word product for |k| <= 6.
    """
    if k % 2 == 0:
        d = LaurentPoly.monomial(1, 2 * k)
        return BurauMatrix([[d, 0, 0], [0, d, 0], [0, 0, d]])
    return BurauMatrix(
        [
            [0, 0, LaurentPoly.monomial(1, 2 * k - 1)],
            [0, LaurentPoly.monomial(-1, 2 * k), 0],
            [LaurentPoly.monomial(1, 2 * k + 1), 0, 0],
        ]
    )


def reduce_mod(m: BurauMatrix, t: int) -> BurauMatrix:
    if not is_prime(t):
        raise ValueError(f"{t} is not prime")
    return m.map(lambda x: x.mod(t))


def specialize_rational(m: BurauMatrix, a: int, b: int) -> list[list[Fraction]]:
    if b == 0:
        raise ValueError("denominator must be nonzero")
    value = Fraction(a, b)
    return [[x.evaluate(value) for x in r] for r in m.rows]


def row_multiple_leading_nonzero(m: BurauMatrix, r: int, t: int) -> bool:
    """True iff at least two entries of row ``r`` have leading coefficient nonzero mod ``t``."""
    hits = 0
    for x in m.rows[r - 1]:
        lead = leading(x)
        if lead is not None and lead.coefficient % t:
            hits += 1
    return hits >= 2
