"""Seeded random instances: s-rationals, weight multisets, fixed loci and class lattices."""

from __future__ import annotations

import random
from fractions import Fraction

from .classes import ClassLattice, MonicPoly, lambda_k, reachable, same_phase, tilde_r
from .kclass import FixedLocusDatum, KClassRep
from .ring import SPoly, SRat


def random_spoly(rng: random.Random, max_terms: int = 3, exp_range: int = 3, coeff_range: int = 3) -> SPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[rng.randint(-exp_range, exp_range)] = rng.randint(-coeff_range, coeff_range)
    return SPoly.from_terms(terms)


def random_srat(rng: random.Random, allow_den: bool = True) -> SRat:
    num = random_spoly(rng)
    if rng.random() < 0.3:
        num = num.scale(Fraction(1, rng.randint(1, 4)))
    if not allow_den or rng.random() < 0.5:
        return SRat(num)
    den = random_spoly(rng, max_terms=2, exp_range=2)
    while den.is_zero():
        den = random_spoly(rng, max_terms=2, exp_range=2)
    return SRat(num, den)


def random_kclass(
    rng: random.Random, max_rank: int = 6, a_range: int = 3, m_range: int = 4, allow_negative: bool = True
) -> KClassRep:
    """Weights z^a s^m with a != 0; total |multiplicity| at most max_rank."""
    acc: dict[tuple[int, int], int] = {}
    for _ in range(rng.randint(0, max_rank)):
        a = rng.choice([x for x in range(-a_range, a_range + 1) if x])
        m = rng.randint(-m_range, m_range)
        sign = -1 if allow_negative and rng.random() < 0.25 else 1
        acc[(a, m)] = acc.get((a, m), 0) + sign
    return KClassRep(acc)


def random_loci(rng: random.Random, max_loci: int = 4, max_rank: int = 4) -> list[FixedLocusDatum]:
    return [
        FixedLocusDatum(random_srat(rng), random_kclass(rng, max_rank=max_rank))
        for _ in range(rng.randint(1, max_loci))
    ]


def random_monic(rng: random.Random, max_degree: int = 3, coeff_range: int = 3) -> MonicPoly:
    d = rng.randint(0, max_degree)
    rest = [Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 2)) for _ in range(d)]
    return MonicPoly((Fraction(1), *rest))


def _antisymmetric(rng: random.Random, m: int, bound: int) -> list[list[int]]:
    c = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            v = rng.randint(-bound, bound)
            c[i][j], c[j][i] = v, -v
    return c


def random_lattice(
    rng: random.Random,
    max_m: int = 3,
    max_dim: int = 2,
    max_effective: int = 4,
    chi_bound: int = 2,
    generic: bool = False,
) -> ClassLattice:
    """A small lattice whose effective classes tend to share a phase.

    P_alpha = r(alpha) * tau0 + u(alpha) * delta with deg delta < dim, so classes
    in ker u all have reduced Hilbert polynomial tau0.  With ``generic`` the
    effective set is made of multiples of one primitive class plus classes of
    other phases.
    """
    m = rng.randint(1, max_m)
    dim = rng.randint(1, max_dim)
    tau0 = [rng.randint(0, 3) for _ in range(dim)] + [1]  # ascending, monic
    delta = [rng.randint(-2, 2) for _ in range(dim)] + [0]
    if not any(delta):
        delta[0] = 1
    r = [rng.randint(1, 2) for _ in range(m)]
    u = [rng.randint(-1, 1) for _ in range(m)]
    hilbert = [[Fraction(tau0[i] * r[j] + delta[i] * u[j], 1) for j in range(m)] for i in range(dim + 1)]
    # the leading row is r / dim!-compatible: tilde_r = dim! * r is automatically integral

    def ker_u(v):
        return sum(x * y for x, y in zip(u, v)) == 0

    boxes = [tuple(rng.randint(0, 2) for _ in range(m)) for _ in range(40)]
    boxes = [b for b in dict.fromkeys(boxes) if any(b)]
    n_eff = rng.randint(1, max_effective)
    if generic:
        base = next((b for b in boxes if ker_u(b)), boxes[0] if boxes else (1,) * m)
        eff = [base] + [tuple(2 * x for x in base)][: n_eff - 1]
        eff += [b for b in boxes if not ker_u(b)][: max(0, n_eff - len(eff))]
    else:
        inside = [b for b in boxes if ker_u(b)]
        outside = [b for b in boxes if not ker_u(b)]
        eff = inside[:n_eff]
        eff += outside[: max(0, n_eff - len(eff))]
    if not eff:
        eff = [tuple([1] + [0] * (m - 1))]
    chi = _antisymmetric(rng, m, chi_bound)
    return ClassLattice(m=m, dim=dim, hilbert=hilbert, chi=chi, effective=sorted(set(eff)))


def target_classes(L: ClassLattice, max_tilde: int = 4) -> list[tuple[int, ...]]:
    """Sums of effective classes of one phase with tilde_r <= max_tilde, every phase included."""
    seen: set[tuple[int, ...]] = set()
    for e in L.effective:
        parts = same_phase(L, L.effective, e)
        frontier = set(parts)
        while frontier:
            seen |= frontier
            nxt = set()
            for b in frontier:
                for p in parts:
                    c = tuple(x + y for x, y in zip(b, p))
                    if c not in seen and tilde_r(L, c) <= max_tilde:
                        nxt.add(c)
            frontier = nxt
    return sorted(seen, key=lambda c: (tilde_r(L, c), c))


def closure_of(L: ClassLattice, targets) -> list[tuple[int, ...]]:
    """Targets together with every class their expansion touches."""
    out: set[tuple[int, ...]] = set()
    for a in targets:
        out.update(reachable(L, a))
    return sorted(out, key=lambda c: (tilde_r(L, c), c))


def valid_ks(L: ClassLattice, classes, lo: int = 1, hi: int = 12) -> list[int]:
    """Twists k in [lo, hi] with lambda_k positive on every given class."""
    return [k for k in range(lo, hi + 1) if all(lambda_k(L, c, k) > 0 for c in classes)]


def random_table(rng: random.Random, classes) -> dict:
    return {tuple(c): random_srat(rng) for c in classes}
