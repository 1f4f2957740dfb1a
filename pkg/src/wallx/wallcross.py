"""Pair invariants from semistable invariants and back, plus the identities behind the wall-crossing relation."""

from __future__ import annotations

import warnings
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .classes import ChernClass, ClassLattice, chi_pair, lambda_k, reachable, sub, tilde_r
from .errors import ConfigurationError, FramingWarning, MissingEntryError, ZeroQuantumIntegerError
from .ring import ZERO, SPoly, SRat, qint, srat

InvariantTable = dict  # ChernClass -> SRat
PairTable = dict  # ChernClass -> SRat at a fixed k; pair tables over several k are keyed (k, class)


def _lookup(table: Mapping, alpha: ChernClass, what: str) -> SRat:
    try:
        return srat(table[alpha])
    except KeyError:
        raise MissingEntryError(f"{what} has no entry for class {list(alpha)}") from None


def _check_framing(L: ClassLattice, classes: Iterable[ChernClass], k: int) -> dict[ChernClass, int]:
    lam = {}
    for b in classes:
        lam[b] = lambda_k(L, b, k)
        if lam[b] <= 0:
            warnings.warn(
                f"lambda_{k}({list(b)}) = {lam[b]} is not positive; k is probably too small",
                FramingWarning,
                stacklevel=3,
            )
    return lam


def _scope(L: ClassLattice, alpha: ChernClass) -> list[ChernClass]:
    """Classes that can occur as partial sums of a decomposition of alpha; empty if there is none."""
    return reachable(L, tuple(alpha))


class _Expansion:
    """Prefix-sum dynamic programme over ordered decompositions inside one phase.

    ``layers[n][beta]`` is the sum over ordered tuples (a_1..a_n) of parts with
    sum beta of prod_j [lambda_k(a_j) - chi(a_1 + .. + a_{j-1}, a_j)] VW_{a_j}.
    Classes must be fed in non-decreasing tilde_r order.
    """

    def __init__(self, L: ClassLattice, k: int, scope: list[ChernClass]):
        self.L = L
        self.scope = scope
        self.lam = _check_framing(L, scope, k)
        self.vw: dict[ChernClass, SRat] = {}
        self.layers: list[dict[ChernClass, SRat]] = [{}, {}]

    def higher(self, beta: ChernClass) -> SRat:
        """Contribution of tuples of length >= 2 summing to beta (needs all smaller parts set)."""
        L, total = self.L, ZERO
        n_max = tilde_r(L, beta)
        while len(self.layers) <= n_max:
            self.layers.append({})
        for n in range(2, n_max + 1):
            acc = ZERO
            prev = self.layers[n - 1]
            for gamma, v in self.vw.items():
                if not v:
                    continue
                head = sub(beta, gamma)
                w = prev.get(head)
                if w:
                    acc = acc + w * v * qint(self.lam[gamma] - chi_pair(L, head, gamma))
            if acc:
                self.layers[n][beta] = acc
                total = total + acc / factorial(n)
        return total

    def set(self, beta: ChernClass, value: SRat) -> None:
        self.vw[beta] = value
        if value:
            self.layers[1][beta] = value * qint(self.lam[beta])


def forward_expand(
    L: ClassLattice, VW: Mapping[ChernClass, SRat], k: int, targets: Iterable[ChernClass]
) -> PairTable:
    """tilde_alpha(k) = sum over ordered decompositions of (1/n!) prod [lambda_k(a_j) - chi(prefix, a_j)] VW_{a_j}."""
    out: PairTable = {}
    for alpha in targets:
        alpha = tuple(alpha)
        scope = _scope(L, alpha)
        if not scope:
            out[alpha] = ZERO
            continue
        dp = _Expansion(L, k, scope)
        for beta in scope:
            rest = dp.higher(beta)
            dp.set(beta, _lookup(VW, beta, "invariant table"))
        out[alpha] = rest + dp.layers[1].get(alpha, ZERO)
    return out


def invert(
    L: ClassLattice, tilde: Mapping[ChernClass, SRat], k: int, targets: Iterable[ChernClass]
) -> InvariantTable:
    """Solve forward_expand(VW, k) = tilde for VW by recursion on tilde_r."""
    out: InvariantTable = {}
    for alpha in targets:
        alpha = tuple(alpha)
        scope = _scope(L, alpha)
        if not scope:
            raise ConfigurationError(
                f"{list(alpha)} is not a sum of effective classes of its phase; nothing to invert"
            )
        dp = _Expansion(L, k, scope)
        for beta in scope:
            lam = dp.lam[beta]
            if lam == 0:
                raise ZeroQuantumIntegerError(
                    f"lambda_{k}({list(beta)}) = 0, so [0]_t = 0 cannot be inverted"
                )
            rest = _lookup(tilde, beta, "pair table") - dp.higher(beta)
            dp.set(beta, rest / qint(lam))
        out[alpha] = dp.vw[alpha]
    return out


def split_pairs(L: ClassLattice, alpha: ChernClass) -> list[tuple[ChernClass, ChernClass]]:
    """Ordered pairs (a1, a2) of nonzero sums of parts with a1 + a2 = alpha."""
    alpha = tuple(alpha)
    return [(b, sub(alpha, b)) for b in reachable(L, alpha) if b != alpha]


def relation_terms(L: ClassLattice, alpha: ChernClass, k1: int, k2: int) -> list[tuple[ChernClass, ChernClass, int, int]]:
    """(a1, a2, chi(a1, a2), full shift) for every term of the quadratic sum."""
    out = []
    for a1, a2 in split_pairs(L, alpha):
        c = chi_pair(L, a1, a2)
        out.append((a1, a2, c, lambda_k(L, a1, k2) - lambda_k(L, a2, k1) + c))
    return out


def relation_residual_simple(L: ClassLattice, tilde1: Mapping, tilde2: Mapping, alpha: ChernClass, k1: int, k2: int) -> SRat:
    alpha = tuple(alpha)
    t1 = _lookup(tilde1, alpha, "first pair table")
    t2 = _lookup(tilde2, alpha, "second pair table")
    return t1 * qint(lambda_k(L, alpha, k2)) - t2 * qint(lambda_k(L, alpha, k1))


def relation_residual(L: ClassLattice, tilde1: Mapping, tilde2: Mapping, alpha: ChernClass, k1: int, k2: int) -> SRat:
    """Two-twist wall-crossing relation between pair invariants at k1 and k2; zero on consistent tables."""
    total = relation_residual_simple(L, tilde1, tilde2, alpha, k1, k2)
    for a1, a2, _, shift in relation_terms(L, alpha, k1, k2):
        v1 = _lookup(tilde1, a1, "first pair table")
        v2 = _lookup(tilde2, a2, "second pair table")
        if v1 and v2:
            total = total + v1 * v2 * qint(shift)
    return total


# ---------------------------------------------------------------------------
# integer-level identities
# ---------------------------------------------------------------------------

def _check_cdata(n: int, a: Sequence[int], b: Sequence[int], c: Sequence[Sequence[int]]) -> None:
    if n < 0 or len(a) != n or len(b) != n or len(c) != n or any(len(row) != n for row in c):
        raise ValueError(f"c_coeff needs a, b of length {n} and an {n} x {n} matrix")
    for i in range(n):
        for j in range(n):
            if c[i][j] + c[j][i] != 0:
                raise ValueError("c must be anti-symmetric")


def c_coeff(n: int, a: Sequence[int], b: Sequence[int], c: Sequence[Sequence[int]]) -> SPoly:
    """Combinatorial coefficient C for the ordered data (a_i, b_i, c_ij), 1-based in the formula, 0-based here."""
    _check_cdata(n, a, b, c)
    total = SPoly()
    for m in range(n + 1):
        shift = sum(b[:m]) - sum(a[m:]) + sum(c[i][j] for i in range(m) for j in range(m, n))
        term = qint(shift)
        if not term:
            continue
        for i in range(m):
            term = term * qint(a[i] - sum(c[q][i] for q in range(i)))
        for j in range(m, n):
            term = term * qint(b[j] - sum(c[q][j] for q in range(m, j)))
        total = total + term.scale(comb(n, m))
    return total


def perm_sum_residual(n: int, a: Sequence[int], b: Sequence[int], c: Sequence[Sequence[int]]) -> SPoly:
    """Sum of c_coeff over all simultaneous permutations of the indices; identically zero."""
    _check_cdata(n, a, b, c)
    total = SPoly()
    for sigma in permutations(range(n)):
        total = total + c_coeff(
            n,
            [a[i] for i in sigma],
            [b[i] for i in sigma],
            [[c[i][j] for j in sigma] for i in sigma],
        )
    return total


def jacobi_residual(a: int, b: int, c: int) -> SPoly:
    """[a+b][c] - [c-a][b] - [b+c][a]."""
    return qint(a + b) * qint(c) - qint(c - a) * qint(b) - qint(b + c) * qint(a)


def classical_expand(
    L: ClassLattice, VW: Mapping[ChernClass, Fraction], k: int, alpha: ChernClass
) -> Fraction:
    """The t -> 1 expansion: quantum integers [n] replaced by (-1)^(n-1) n, by literal enumeration."""
    from .classes import decompositions

    alpha = tuple(alpha)
    parts = _scope(L, alpha)
    total = Fraction(0)
    for tup in decompositions(L, alpha, parts, ordered=True):
        term = Fraction(1, factorial(len(tup)))
        prefix = L.zero()
        for part in tup:
            x = lambda_k(L, part, k) - chi_pair(L, prefix, part)
            term *= (x if x % 2 else -x) * Fraction(VW[part])
            prefix = tuple(p + q for p, q in zip(prefix, part))
        total += term
    return total
