"""Exact algebra on f-vectors.

Vectors carry the extra slot f_{-1} = χ/2.  Everything is computed with
``int`` and ``fractions.Fraction``; no floating point appears anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import (
    BadType,
    ChiMismatch,
    DimensionMismatch,
    NonIntegralCoefficient,
    ResidualNonzero,
    VerificationFailed,
)


def binom(a: int, b: int) -> int:
    """Binomial coefficient that vanishes outside 0 <= b <= a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def _norm(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class FVector:
    n: int
    f_minus1: Fraction
    f: tuple
    virtual: bool = False

    def __post_init__(self):
        object.__setattr__(self, "f_minus1", Fraction(self.f_minus1))
        object.__setattr__(self, "f", tuple(_norm(x) for x in self.f))
        if len(self.f) != self.n + 1:
            raise DimensionMismatch(f"expected {self.n + 1} entries, got {len(self.f)}")

    @classmethod
    def from_counts(cls, counts, n: int | None = None) -> "FVector":
        """Build from f_0..f_n, filling f_{-1} with half the alternating sum."""
        counts = tuple(counts)
        if n is None:
            n = len(counts) - 1
        chi = sum((-1) ** k * Fraction(c) for k, c in enumerate(counts))
        return cls(n, chi / 2, counts)

    @property
    def chi(self) -> Fraction:
        return 2 * self.f_minus1

    def full(self) -> tuple:
        """(f_{-1}, f_0, ..., f_n)."""
        return (self.f_minus1,) + self.f

    def __getitem__(self, k: int):
        return self.f_minus1 if k == -1 else self.f[k]

    def __sub__(self, other: "FVector") -> tuple:
        if self.n != other.n:
            raise DimensionMismatch("f-vectors of different dimension")
        return tuple(a - b for a, b in zip(self.f, other.f))

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.f)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.f)


@dataclass(frozen=True)
class DVector:
    n: int
    i: int
    d: tuple


@dataclass(frozen=True)
class VirtualMovePlan:
    """Signed counts x_0..x_m, m = floor((n-1)/2).

    x_i > 0 means that many i-moves, x_i < 0 that many (n-i)-moves.
    """

    n: int
    x: tuple

    @property
    def total_moves(self) -> int:
        return sum(abs(v) for v in self.x)

    def move_types(self) -> list[int]:
        """Expanded move sequence, one type per realized move."""
        out = []
        for i, v in enumerate(self.x):
            out.extend([i if v > 0 else self.n - i] * abs(v))
        return out

    def negated(self) -> "VirtualMovePlan":
        return VirtualMovePlan(self.n, tuple(-v for v in self.x))

    def describe(self) -> str:
        parts = [f"{i}:{v:+d}" for i, v in enumerate(self.x) if v]
        parts.append(f"N={self.total_moves}")
        return "; ".join(parts)


@dataclass(frozen=True)
class QMatrix:
    n: int
    rows: tuple  # indices i with floor((n+1)/2) <= i <= n
    cols: tuple  # indices j with -1 <= j <= floor((n-1)/2)
    q: tuple  # q[r][c]

    def coefficient(self, i: int, j: int) -> int:
        return self.q[self.rows.index(i)][self.cols.index(j)]


def lower_top(n: int) -> int:
    """floor((n-1)/2): largest index that stays free."""
    return (n - 1) // 2


def d_vector(n: int, i: int) -> DVector:
    if not 0 <= i <= n:
        raise BadType(f"move type {i} outside [0, {n}]")
    d = tuple(binom(n + 1 - i, k - i) - binom(i + 1, n + 1 - k) for k in range(n + 1))
    return DVector(n, i, d)


def _ds_sum(full, n: int, i: int):
    # full[j + 1] holds f_j
    return sum((-1) ** (n - j) * binom(j + 1, i + 1) * full[j + 1] for j in range(i, n + 1))


def ds_residual_closed(fv: FVector) -> tuple:
    """Residuals of the closed Dehn–Sommerville system, indexed -1..n."""
    full = fv.full()
    return tuple(_norm(full[i + 1] - _ds_sum(full, fv.n, i)) for i in range(-1, fv.n + 1))


def _pad_boundary(fvM: FVector, fvB: FVector) -> tuple:
    if fvB.n != fvM.n - 1:
        raise DimensionMismatch(f"boundary dimension {fvB.n} != {fvM.n - 1}")
    return fvB.full() + (0,)


def ds_residual_boundary(fvM: FVector, fvB: FVector) -> tuple:
    """Residuals of the Dehn–Sommerville system for a manifold with boundary."""
    full = fvM.full()
    bfull = _pad_boundary(fvM, fvB)
    return tuple(_norm(full[i + 1] - bfull[i + 1] - _ds_sum(full, fvM.n, i))
                 for i in range(-1, fvM.n + 1))


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    m = [list(r) for r in rows]
    ncols = len(m[0])
    piv_row = 0
    for c in range(ncols):
        p = next((r for r in range(piv_row, len(m)) if m[r][c] != 0), None)
        if p is None:
            continue
        m[piv_row], m[p] = m[p], m[piv_row]
        pv = m[piv_row][c]
        m[piv_row] = [x / pv for x in m[piv_row]]
        for r in range(len(m)):
            if r != piv_row and m[r][c] != 0:
                fac = m[r][c]
                m[r] = [a - fac * b for a, b in zip(m[r], m[piv_row])]
        piv_row += 1
        if piv_row == len(m):
            break
    return m


@lru_cache(maxsize=None)
def q_matrix(n: int) -> QMatrix:
    """Express f_i for i >= floor((n+1)/2) through f_{-1}..f_{floor((n-1)/2)}.

    The coefficients come from exact Gauss–Jordan elimination on the closed
    Dehn–Sommerville system with the high-index unknowns ordered first.
    """
    if n < 1:
        raise BadType("q_matrix needs n >= 1")
    m = lower_top(n)
    upper = list(range(m + 1, n + 1))
    lower = list(range(-1, m + 1))
    order = upper + lower
    # row i: f_i - sum_j (-1)^(n-j) C(j+1, i+1) f_j = 0
    system = []
    for i in range(-1, n + 1):
        coeff = {j: Fraction(0) for j in range(-1, n + 1)}
        coeff[i] += 1
        for j in range(i, n + 1):
            coeff[j] -= (-1) ** (n - j) * binom(j + 1, i + 1)
        system.append([coeff[j] for j in order])
    red = _rref(system)
    q = []
    for r, i in enumerate(upper):
        row = red[r]
        if row[r] != 1 or any(row[c] != 0 for c in range(len(upper)) if c != r):
            raise NonIntegralCoefficient(f"f_{i} is not determined by the lower half (n={n})")
        entries = []
        for c in range(len(upper), len(order)):
            val = -row[c]
            if val.denominator != 1:
                raise NonIntegralCoefficient(f"q[{i}][{order[c]}] = {val} (n={n})")
            entries.append(int(val))
        q.append(tuple(entries))
    return QMatrix(n, tuple(upper), tuple(lower), tuple(q))


def complete_f(lower, n: int) -> FVector:
    """Fill in the upper half of a closed f-vector from (f_{-1}, f_0, ..., f_m)."""
    lower = tuple(Fraction(x) for x in lower)
    m = lower_top(n)
    if len(lower) != m + 2:
        raise DimensionMismatch(f"need {m + 2} entries f_-1..f_{m}, got {len(lower)}")
    Q = q_matrix(n)
    upper = [sum(c * x for c, x in zip(row, lower)) for row in Q.q]
    return FVector(n, lower[0], tuple(lower[1:]) + tuple(upper))


def hat_f(fvM: FVector, fvB: FVector) -> FVector:
    """f(M) - f(∂M)/2 in every slot, f_{-1} included."""
    full = fvM.full()
    bfull = _pad_boundary(fvM, fvB)
    vals = [Fraction(a) - Fraction(b) / 2 for a, b in zip(full, bfull)]
    return FVector(fvM.n, vals[0], tuple(vals[1:]))


def reduced_system(n: int) -> tuple:
    """The square matrix (d_{k,i}) for 0 <= k, i <= floor((n-1)/2)."""
    m = lower_top(n)
    cols = [d_vector(n, i).d for i in range(m + 1)]
    return tuple(tuple(cols[i][k] for i in range(m + 1)) for k in range(m + 1))


def solve_virtual_plan(src: FVector, dst: FVector) -> VirtualMovePlan:
    """Signed move counts turning ``src`` into ``dst`` by forward substitution."""
    if src.n != dst.n:
        raise DimensionMismatch(f"dimensions {src.n} and {dst.n} differ")
    if src.f_minus1 != dst.f_minus1:
        raise ChiMismatch(f"chi {src.chi} != {dst.chi}")
    for label, fv in (("source", src), ("target", dst)):
        if any(ds_residual_closed(fv)):
            raise ResidualNonzero(f"{label} {fv} violates Dehn–Sommerville")
    n = src.n
    delta = [Fraction(b) - Fraction(a) for a, b in zip(src.f, dst.f)]
    A = reduced_system(n)
    x = []
    for k in range(lower_top(n) + 1):
        # unit diagonal, zero above it
        val = delta[k] - sum(A[k][i] * x[i] for i in range(k))
        x.append(val)
    if any(v.denominator != 1 for v in x):
        raise VerificationFailed(f"non-integral plan {x}")
    plan = VirtualMovePlan(n, tuple(int(v) for v in x))
    if apply_virtual(src, plan).f != dst.f:
        raise VerificationFailed("plan does not reproduce the target in every coordinate")
    return plan


def apply_virtual(fv: FVector, plan: VirtualMovePlan) -> FVector:
    if fv.n != plan.n:
        raise DimensionMismatch("plan and vector dimensions differ")
    f = [Fraction(v) for v in fv.f]
    for i, xi in enumerate(plan.x):
        d = d_vector(fv.n, i).d
        for k in range(fv.n + 1):
            f[k] += xi * d[k]
    return FVector(fv.n, fv.f_minus1, tuple(f), virtual=True)
