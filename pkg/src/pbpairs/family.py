"""
Linear families of signed graphs.

A family is described by a polynomial transfer matrix ``M(z)`` and an initial
vector ``V_1``; the first entry of ``M^{n-1} V_1`` is the Euler-genus
polynomial of the ``n``-th member.  From ``M`` we get a homogeneous
recurrence (its characteristic polynomial), the stochastic constant ``D`` of
``M(1)``, and the exact constants governing the linear growth of the expected
genus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (DimensionError, Degenerate, EmptyDistribution, ModelViolation,
                     NotStochastic, ParseError)
from .poly import Poly, parse_poly

__all__ = [
    "PolyMatrix",
    "RecurrenceSpec",
    "FitResult",
    "AsymptoticReport",
    "transfer_sequence",
    "char_poly",
    "recurrence",
    "stochastic_check",
    "is_primitive",
    "expected_genus",
    "recurrence_constants",
    "particular_solution",
    "asymptotic_fit",
    "asymptotic_report",
    "builtin_c2",
    "parse_matrix",
    "parse_vector",
    "format_matrix",
]


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly.constant(x)
    if isinstance(x, str):
        return parse_poly(x)
    raise TypeError(f"cannot use {x!r} as a polynomial")


@dataclass(frozen=True)
class PolyMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(_as_poly(x) for x in r) for r in self.rows)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise DimensionError("transfer matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @property
    def k(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, k: int) -> "PolyMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))

    def apply(self, v: Sequence[Poly]) -> tuple:
        if len(v) != self.k:
            raise DimensionError(f"vector of length {len(v)} for a {self.k}x{self.k} matrix")
        out = []
        for r in self.rows:
            acc = Poly()
            for m, x in zip(r, v):
                if m and x:
                    acc = acc + m * x
            out.append(acc)
        return tuple(out)

    def at(self, x) -> list:
        return [[p(x) for p in r] for r in self.rows]


def transfer_sequence(M: PolyMatrix, V1: Sequence, n: int) -> list:
    """``[V_1, ..., V_n]`` with ``V_m = M V_{m-1}``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    v = tuple(_as_poly(x) for x in V1)
    if len(v) != M.k:
        raise DimensionError(f"initial vector has length {len(v)}, matrix is {M.k}x{M.k}")
    seq = [v]
    for _ in range(n - 1):
        seq.append(M.apply(seq[-1]))
    return seq


def char_poly(M: PolyMatrix) -> list:
    """Coefficients of ``det(lambda I - M)``, highest power first.

    Berkowitz's algorithm: no divisions, so it works over ``Z[z]``.
    """
    A = M.rows
    k = M.k
    vec = [Poly.constant(1), -A[0][0]]
    for r in range(1, k):
        R = [A[r][j] for j in range(r)]    # row r, left of the diagonal
        C = [A[i][r] for i in range(r)]    # column r, above the diagonal
        sub = [list(A[i][:r]) for i in range(r)]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
        col = [Poly.constant(1), -A[r][r]]
        w = C
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, w)), Poly()))
            w = [sum((sub[i][j] * w[j] for j in range(r)), Poly()) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = Poly()
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    acc = acc + col[i - j] * vec[j]
            new.append(acc)
        vec = new
    return vec


@dataclass(frozen=True)
class RecurrenceSpec:
    """``E_n = b_1 E_{n-1} + ... + b_k E_{n-k}``.

    When ``M`` and ``V1`` are given the recurrence is checked against the
    transfer sequence on construction.
    """

    coeffs: tuple
    M: Optional[PolyMatrix] = field(default=None, compare=False)
    V1: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_as_poly(b) for b in self.coeffs))
        if self.M is not None and self.V1 is not None:
            seq = transfer_sequence(self.M, self.V1, 2 * self.order + 2)
            for comp in range(self.M.k):
                vals = [v[comp] for v in seq]
                if self.extend(vals[: self.order], len(vals)) != vals:
                    raise ModelViolation(f"recurrence does not reproduce component {comp}")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def extend(self, initial: Sequence[Poly], n: int) -> list:
        """First ``n`` terms starting from the ``order`` initial terms."""
        seq = [_as_poly(x) for x in initial]
        k = self.order
        if len(seq) < k:
            raise ValueError(f"need {k} initial terms")
        while len(seq) < n:
            acc = Poly()
            for i, b in enumerate(self.coeffs, 1):
                acc = acc + b * seq[-i]
            seq.append(acc)
        return seq[:n]


def recurrence(M: PolyMatrix, V1: Optional[Sequence] = None) -> RecurrenceSpec:
    cp = char_poly(M)
    v1 = None if V1 is None else tuple(_as_poly(x) for x in V1)
    return RecurrenceSpec(tuple(-c for c in cp[1:]), M, v1)


def is_primitive(A: Sequence[Sequence]) -> bool:
    """Some power up to ``(k-1)^2 + 1`` has all entries positive (Wielandt bound)."""
    k = len(A)
    pattern = [[bool(x) for x in r] for r in A]
    cur = pattern
    for _ in range((k - 1) ** 2 + 1):
        if all(all(r) for r in cur):
            return True
        cur = [[any(cur[i][m] and pattern[m][j] for m in range(k)) for j in range(k)] for i in range(k)]
    return False


def stochastic_check(M: PolyMatrix) -> tuple:
    """``(D, primitive)`` where ``D`` is the common row sum of ``M(1)``."""
    A = M.at(1)
    sums = [sum(r) for r in A]
    if any(x < 0 for r in A for x in r) or len(set(sums)) != 1 or sums[0] <= 0:
        raise NotStochastic(sums)
    return sums[0], is_primitive(A)


def expected_genus(E: Poly) -> Fraction:
    total = E(1)
    if not E or total == 0:
        raise EmptyDistribution("expected genus of an empty distribution")
    return Fraction(E.derivative()(1), total)


def recurrence_constants(rec: RecurrenceSpec, D: int) -> tuple:
    c = tuple(Fraction(b(1), D**i) for i, b in enumerate(rec.coeffs, 1))
    d = sum((Fraction(b.derivative()(1), D**i) for i, b in enumerate(rec.coeffs, 1)), Fraction(0))
    if sum(c) != 1:
        raise ModelViolation(f"sum of c_i is {sum(c)}, not 1: D = {D} is not a root of the recurrence at z = 1")
    return c, d


def particular_solution(c: Sequence[Fraction], d: Fraction) -> tuple:
    den = 1 + sum((i * ci for i, ci in enumerate(c[1:], 1)), Fraction(0))
    if den == 0:
        raise Degenerate("1 + sum (i-1) c_i vanishes")
    B = 1 / Fraction(den)
    return B, d * B


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residuals: tuple
    period: Optional[int]


def asymptotic_fit(gammas: Sequence, max_period: int = 1, window: int = 5) -> FitResult:
    """Slope/intercept of the tail of an expected-genus sequence (``gammas[0]`` is ``n = 1``).

    ``period`` is the smallest ``p <= max_period`` for which the last
    differences repeat with period ``p`` to within ``1e-3`` of their size;
    ``None`` if no period fits.
    """
    g = [float(x) for x in gammas]
    N = len(g)
    if N < 6:
        raise ValueError("asymptotic fit needs at least 6 terms")
    C = g[-1] - g[-2]
    B = g[-1] - C * N
    start = max(1, N - window + 1)
    residuals = tuple(abs(g[n - 1] - C * n - B) for n in range(start, N + 1))
    diffs = [g[i + 1] - g[i] for i in range(N - 1)]
    # still-converging tails differ geometrically; a genuine oscillation is O(1)
    tol = max(1e-9, 1e-3 * max(abs(x) for x in diffs[-(2 * max_period):]))
    period = None
    for p in range(1, max_period + 1):
        tail = diffs[-(2 * p):] if 2 * p <= len(diffs) else None
        if tail and all(abs(tail[i] - tail[i + p]) <= tol for i in range(p)):
            period = p
            break
    return FitResult(C, B, residuals, period)


@dataclass(frozen=True)
class AsymptoticReport:
    D: int
    c: tuple
    d: Fraction
    B: Fraction
    C: Fraction
    fit: FitResult
    regular: object  # True, or "unknown" when M(1)/D is not primitive

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "c": [str(x) for x in self.c],
            "d": str(self.d),
            "B": str(self.B),
            "C": str(self.C),
            "regular": self.regular,
            "fit": {
                "slope": self.fit.slope,
                "intercept": self.fit.intercept,
                "residuals": list(self.fit.residuals),
                "period": self.fit.period,
            },
        }


def asymptotic_report(M: PolyMatrix, V1: Sequence, n: int = 12) -> AsymptoticReport:
    D, primitive = stochastic_check(M)
    rec = recurrence(M, V1)
    c, d = recurrence_constants(rec, D)
    B, C = particular_solution(c, d)
    # seed with the transfer sequence, continue with the recurrence
    first = [v[0] for v in transfer_sequence(M, V1, rec.order)]
    gammas = [expected_genus(E) for E in rec.extend(first, n)]
    fit = asymptotic_fit(gammas, max_period=M.k)
    return AsymptoticReport(D, c, d, B, C, fit, True if primitive else "unknown")


def builtin_c2() -> tuple:
    z = Poly.z()
    M = PolyMatrix((
        (4 * z, 2, 0),
        (4 * z, 0, 2 * z),
        (6 * z * z, 0, 0),
    ))
    return M, (z, z, z * z)


# -- text formats -----------------------------------------------------------

def _poly_row(line: str, lineno: int) -> tuple:
    try:
        return tuple(parse_poly(tok) for tok in line.split(","))
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_matrix(text: str) -> PolyMatrix:
    rows = [_poly_row(line, no) for no, line in _content_lines(text)]
    return PolyMatrix(tuple(rows))


def parse_vector(text: str) -> tuple:
    lines = list(_content_lines(text))
    if len(lines) != 1:
        raise ParseError("initial vector must be a single line of comma-separated polynomials")
    return _poly_row(lines[0][1], lines[0][0])


def format_matrix(M: PolyMatrix) -> str:
    return "".join(", ".join(str(p) for p in r) + "\n" for r in M.rows)
