"""
Exact univariate integer polynomials in ``z``.

Coefficients are stored densely (index = exponent) as Python ints, with no
trailing zeros; the zero polynomial has no coefficients.  Rational values are
``fractions.Fraction``.

Text form lists terms by descending exponent, e.g. ``24z^4+12z^3-z+7``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ParseError

Number = Union[int, Fraction]

_TERM_RE = re.compile(r"([+-])?(\d+)?(\*?z(?:\^(\d+))?)?")


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c: int) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, k: int) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def z(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "Poly":
        if not counts:
            return cls()
        if min(counts) < 0:
            raise ValueError(f"negative exponent {min(counts)}")
        c = [0] * (max(counts) + 1)
        for k, v in counts.items():
            c[k] += v
        return cls(c)

    @classmethod
    def parse(cls, text: str) -> "Poly":
        return parse_poly(text)

    @classmethod
    def from_json(cls, data) -> "Poly":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["coeffs"])

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs)}

    # -- ring structure -------------------------------------------------

    @staticmethod
    def _lift(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x: Number) -> Number:
        return poly_eval(self, x)

    def derivative(self) -> "Poly":
        return poly_derivative(self)

    def to_counts(self) -> dict:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return format_poly(self)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_eval(p: Poly, x: Number) -> Number:
    """Horner evaluation; exact for ints and Fractions."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(p: Poly) -> Poly:
    return Poly(k * c for k, c in enumerate(p.coeffs) if k)


def format_poly(p: Poly, var: str = "z") -> str:
    if not p.coeffs:
        return "0"
    out = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else ("+" if out else "")
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + var + (f"^{k}" if k > 1 else "")
        out.append(sign + body)
    return "".join(out)


def parse_poly(text: str) -> Poly:
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial text")
    counts = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        sign, coef, zpart, exp = m.groups()
        if m.end() == pos or (coef is None and zpart is None) or (sign is None and not first):
            raise ParseError(f"malformed polynomial {text!r} at offset {pos}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        k = 0 if zpart is None else (int(exp) if exp is not None else 1)
        counts[k] = counts.get(k, 0) + c
        pos = m.end()
        first = False
    return Poly.from_counts(counts)
