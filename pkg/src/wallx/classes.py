"""Topological class lattices: Hilbert polynomials, Gieseker order, the pairing chi, decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import permutations
from typing import Iterable, Sequence

from .errors import ConfigurationError, WallxError

ChernClass = tuple  # tuple[int, ...]


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class ClassLattice:
    """Integer lattice of classes with linear Hilbert-polynomial data and a pairing.

    ``hilbert[i]`` is the row giving the n^i coefficient of P_alpha as a
    functional of alpha, for i = 0..dim.  ``chi`` must be anti-symmetric.
    """

    m: int
    dim: int
    hilbert: tuple[tuple[Fraction, ...], ...]
    chi: tuple[tuple[Fraction, ...], ...]
    effective: tuple[ChernClass, ...] = field(default=())

    def __post_init__(self):
        hil = tuple(tuple(_frac(x) for x in row) for row in self.hilbert)
        chi = tuple(tuple(_frac(x) for x in row) for row in self.chi)
        eff = tuple(tuple(int(x) for x in c) for c in self.effective)
        object.__setattr__(self, "hilbert", hil)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "effective", eff)
        if self.dim < 1:
            raise ConfigurationError("dim must be at least 1")
        if len(hil) != self.dim + 1 or any(len(r) != self.m for r in hil):
            raise ConfigurationError(f"hilbert must be a {self.dim + 1} x {self.m} matrix")
        if len(chi) != self.m or any(len(r) != self.m for r in chi):
            raise ConfigurationError(f"chi must be a {self.m} x {self.m} matrix")
        for i in range(self.m):
            for j in range(self.m):
                if chi[i][j] + chi[j][i] != 0:
                    raise ConfigurationError("chi is not anti-symmetric")
        for c in eff:
            if len(c) != self.m:
                raise ConfigurationError(f"effective class {c} has wrong length")
            tilde_r(self, c)

    @classmethod
    def from_json(cls, data: dict) -> "ClassLattice":
        try:
            return cls(
                m=int(data["m"]),
                dim=int(data["dim"]),
                hilbert=data["hilbert"],
                chi=data["chi"],
                effective=data.get("effective", ()),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed lattice: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "dim": self.dim,
            "hilbert": [[_fstr(x) for x in row] for row in self.hilbert],
            "chi": [[_fstr(x) for x in row] for row in self.chi],
            "effective": [list(c) for c in self.effective],
        }

    def zero(self) -> ChernClass:
        return (0,) * self.m


def _fstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def add(a: ChernClass, b: ChernClass) -> ChernClass:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: ChernClass, b: ChernClass) -> ChernClass:
    return tuple(x - y for x, y in zip(a, b))


def is_zero(a: ChernClass) -> bool:
    return not any(a)


# ---------------------------------------------------------------------------
# Hilbert data
# ---------------------------------------------------------------------------

def hilbert(L: ClassLattice, alpha: ChernClass) -> tuple[Fraction, ...]:
    """Coefficients (c_0, ..., c_dim) of P_alpha(n), ascending."""
    return tuple(sum((h * x for h, x in zip(row, alpha)), Fraction(0)) for row in L.hilbert)


def evaluate(coeffs: Sequence[Fraction], n) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def lambda_k(L: ClassLattice, alpha: ChernClass, k: int) -> int:
    """Framing dimension P_alpha(k)."""
    v = evaluate(hilbert(L, alpha), k)
    if v.denominator != 1:
        raise ConfigurationError(f"P_{alpha}({k}) = {v} is not an integer")
    return v.numerator


def rank_r(L: ClassLattice, alpha: ChernClass) -> Fraction:
    return hilbert(L, alpha)[-1]


def tilde_r(L: ClassLattice, alpha: ChernClass) -> int:
    """(dim)! * r(alpha); must be a positive integer on effective classes."""
    if is_zero(alpha):
        raise ConfigurationError("tilde_r of the zero class")
    v = math.factorial(L.dim) * rank_r(L, alpha)
    if v <= 0 or v.denominator != 1:
        raise ConfigurationError(f"tilde_r({alpha}) = {v} is not a positive integer")
    return v.numerator


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial stored top-down: coeffs[0] == 1 is the n^degree coefficient.

    Ordered as in Gieseker stability: higher degree is smaller; equal degree
    compares by values for n >> 0.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coeffs)
        if not cs or cs[0] != 1:
            raise ValueError("MonicPoly needs leading coefficient 1")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _key(self):
        return (-self.degree, self.coeffs)

    def __lt__(self, other: "MonicPoly") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        d = self.degree
        return " + ".join(f"{c}*n^{d - i}" for i, c in enumerate(self.coeffs) if c)


def tau(L: ClassLattice, alpha: ChernClass) -> MonicPoly:
    """Reduced Hilbert polynomial P_alpha / r(alpha)."""
    coeffs = hilbert(L, alpha)
    r = coeffs[-1]
    if is_zero(alpha) or r == 0:
        raise WallxError(f"tau undefined for {alpha}: zero class or zero rank")
    return MonicPoly(tuple(c / r for c in reversed(coeffs)))


def tau_cmp(f: MonicPoly, g: MonicPoly) -> str:
    """'LT', 'EQ' or 'GT' in the Gieseker order."""
    kf, kg = f._key(), g._key()
    if kf == kg:
        return "EQ"
    return "LT" if kf < kg else "GT"


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self) -> str:
        return "+inf" if self.sign > 0 else "-inf"

    def __eq__(self, other):
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))


PLUS_INF = _Infinity(1)
MINUS_INF = _Infinity(-1)


@total_ordering
@dataclass(frozen=True)
class StabilityValue:
    first: object  # MonicPoly, PLUS_INF or MINUS_INF
    second: Fraction

    def _key(self):
        f = self.first
        if isinstance(f, _Infinity):
            head = (f.sign, ())
        else:
            head = (0, f._key())
        return (head, self.second)

    def __lt__(self, other: "StabilityValue") -> bool:
        return self._key() < other._key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilityValue):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def tau_mu(L: ClassLattice, alpha: ChernClass, dvec: Sequence[int], mu: Sequence) -> StabilityValue:
    """Stability of a framed object of class alpha with framing dimension vector dvec."""
    if len(dvec) != len(mu):
        raise ValueError("dvec and mu must have equal length")
    if is_zero(alpha) and not any(dvec):
        raise WallxError("tau_mu undefined at (0, 0)")
    pairing = sum((Fraction(m) * d for m, d in zip(mu, dvec)), Fraction(0))
    if not is_zero(alpha):
        return StabilityValue(tau(L, alpha), pairing / tilde_r(L, alpha))
    size = sum(abs(d) for d in dvec)
    return StabilityValue(PLUS_INF if pairing > 0 else MINUS_INF, pairing / size)


def tau_mu_cmp(x: StabilityValue, y: StabilityValue) -> str:
    if x == y:
        return "EQ"
    return "LT" if x < y else "GT"


# ---------------------------------------------------------------------------
# pairing, genericity, decompositions
# ---------------------------------------------------------------------------

def chi_pair(L: ClassLattice, alpha: ChernClass, beta: ChernClass) -> int:
    v = sum((a * L.chi[i][j] * b for i, a in enumerate(alpha) if a for j, b in enumerate(beta) if b),
            Fraction(0))
    if v.denominator != 1:
        raise ConfigurationError(f"chi({alpha}, {beta}) = {v} is not an integer")
    return v.numerator


def _proportional(a: ChernClass, b: ChernClass) -> bool:
    # rank of the 2 x m matrix [a; b] is <= 1
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


def is_generic(L: ClassLattice, effective: Iterable[ChernClass], alpha: ChernClass) -> bool:
    """Every effective class with the same reduced Hilbert polynomial is a multiple of alpha."""
    t = tau(L, alpha)
    return all(_proportional(beta, alpha) for beta in effective if tau(L, beta) == t)


def same_phase(L: ClassLattice, effective: Iterable[ChernClass], alpha: ChernClass) -> list[ChernClass]:
    t = tau(L, alpha)
    return sorted({tuple(b) for b in effective if tau(L, b) == t})


def decompositions(
    L: ClassLattice,
    alpha: ChernClass,
    effective: Iterable[ChernClass],
    ordered: bool = True,
    max_n: int | None = None,
) -> list[tuple[ChernClass, ...]]:
    """Tuples of effective classes of phase tau(alpha) summing to alpha.

    Terminates because tilde_r is additive on equal-phase classes and at least
    1 per part.  Unordered results are returned as sorted tuples.
    """
    alpha = tuple(alpha)
    parts = same_phase(L, effective, alpha)
    weights = {p: tilde_r(L, p) for p in parts}
    memo: dict[tuple[ChernClass, int], list[tuple[ChernClass, ...]]] = {}

    def go(rest: ChernClass, budget: int) -> list[tuple[ChernClass, ...]]:
        if is_zero(rest):
            return [()]
        key = (rest, budget)
        if key in memo:
            return memo[key]
        out = []
        if budget != 0:
            r = tilde_r_or_zero(L, rest)
            for p in parts:
                w = weights[p]
                if w <= r:
                    for tail in go(sub(rest, p), budget - 1):
                        out.append((p,) + tail)
        memo[key] = out
        return out

    result = go(alpha, -1 if max_n is None else max_n)
    if not ordered:
        result = sorted({tuple(sorted(t)) for t in result})
    return result


def tilde_r_or_zero(L: ClassLattice, alpha: ChernClass) -> Fraction:
    return math.factorial(L.dim) * rank_r(L, alpha)


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def distinct_orderings(parts: Sequence[ChernClass]) -> int:
    """Number of distinct orderings of a multiset of classes."""
    counts: dict[ChernClass, int] = {}
    for p in parts:
        counts[p] = counts.get(p, 0) + 1
    return multinomial(counts.values())


def reachable(L: ClassLattice, alpha: ChernClass) -> list[ChernClass]:
    """Nonzero classes beta with beta and alpha - beta sums of effective classes of phase tau(alpha).

    Sorted by (tilde_r, coordinates); alpha itself comes last when reachable.
    """
    alpha = tuple(alpha)
    parts = same_phase(L, L.effective, alpha)
    top = tilde_r(L, alpha)
    sums: set[ChernClass] = set()
    frontier = {L.zero()}
    while frontier:
        nxt = set()
        for b in frontier:
            for p in parts:
                c = add(b, p)
                if c not in sums and tilde_r_or_zero(L, c) <= top:
                    sums.add(c)
                    nxt.add(c)
        frontier = nxt
    if alpha not in sums:
        return []
    closed = sums | {L.zero()}
    keep = [b for b in sums if sub(alpha, b) in closed]
    return sorted(keep, key=lambda b: (tilde_r(L, b), b))


def ordered_from_unordered(parts: Sequence[ChernClass]) -> set[tuple[ChernClass, ...]]:
    return set(permutations(parts))
