from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wallx.classes import (
    MINUS_INF,
    PLUS_INF,
    ClassLattice,
    MonicPoly,
    StabilityValue,
    chi_pair,
    decompositions,
    distinct_orderings,
    hilbert,
    is_generic,
    lambda_k,
    rank_r,
    reachable,
    tau,
    tau_cmp,
    tau_mu,
    tau_mu_cmp,
    tilde_r,
)
from wallx.errors import ConfigurationError, WallxError
from wallx.sampling import random_lattice

TOY = ClassLattice(m=1, dim=1, hilbert=[[1], [1]], chi=[[0]], effective=[[1]])
E, E2, E3 = (1,), (2,), (3,)


def lattice2(chi=((0, 1), (-1, 0)), effective=((1, 0), (0, 1))):
    # both generators have P = n + 1
    return ClassLattice(m=2, dim=1, hilbert=[[1, 1], [1, 1]], chi=chi, effective=effective)


# -- Hilbert data ------------------------------------------------------------

def test_hilbert_examples():
    assert hilbert(TOY, (0,)) == (0, 0)
    assert hilbert(TOY, E) == (1, 1)
    assert hilbert(TOY, E2) == (2, 2)


def test_lambda_examples():
    assert lambda_k(TOY, E, 5) == 6
    assert lambda_k(TOY, (0,), 5) == 0
    assert lambda_k(TOY, E2, 5) == 12


def test_lambda_rejects_non_integral():
    L = ClassLattice(m=1, dim=2, hilbert=[["0"], ["1/2"], ["1/2"]], chi=[[0]], effective=[[1]])
    assert lambda_k(L, E, 3) == 6
    L2 = ClassLattice(m=1, dim=1, hilbert=[["1/2"], [1]], chi=[[0]], effective=[[1]])
    with pytest.raises(ConfigurationError):
        lambda_k(L2, E, 1)


def test_rank_examples():
    assert rank_r(TOY, E) == 1 and tilde_r(TOY, E) == 1
    assert tilde_r(TOY, E2) == 2
    assert rank_r(TOY, (0,)) == 0
    with pytest.raises(ConfigurationError):
        tilde_r(TOY, (0,))


def test_lattice_validation():
    with pytest.raises(ConfigurationError):
        ClassLattice(m=1, dim=1, hilbert=[[1], [1]], chi=[[1]], effective=[])
    with pytest.raises(ConfigurationError):
        ClassLattice(m=1, dim=1, hilbert=[[1]], chi=[[0]], effective=[])
    with pytest.raises(ConfigurationError):
        ClassLattice(m=1, dim=1, hilbert=[[1], [-1]], chi=[[0]], effective=[[1]])
    with pytest.raises(ConfigurationError):
        ClassLattice(m=1, dim=2, hilbert=[[0], [0], ["1/3"]], chi=[[0]], effective=[[1]])


def test_lattice_json_round_trip():
    L = lattice2()
    data = json.loads(json.dumps(L.to_json()))
    assert all(isinstance(x, str) and "/" in x for row in data["hilbert"] for x in row)
    assert ClassLattice.from_json(data) == L
    with pytest.raises(ConfigurationError):
        ClassLattice.from_json({"m": 1})


# -- order -------------------------------------------------------------------

def M(*coeffs):
    return MonicPoly(tuple(Fraction(c) for c in coeffs))


def test_tau_examples():
    L = ClassLattice(m=1, dim=1, hilbert=[[2], [2]], chi=[[0]], effective=[[1]])
    assert tau(L, E) == M(1, 1)
    L2 = ClassLattice(m=1, dim=2, hilbert=[[0], [3], [1]], chi=[[0]], effective=[[1]])
    assert tau(L2, E) == M(1, 3, 0)
    with pytest.raises(WallxError):
        tau(TOY, (0,))


def test_tau_cmp_examples():
    assert tau_cmp(M(1, 0, 0, 0), M(1, 0, 0)) == "LT"
    assert tau_cmp(M(1, 0, 1), M(1, 1, 0)) == "LT"
    assert tau_cmp(M(1, 2), M(1, 2)) == "EQ"
    with pytest.raises(ValueError):
        M(2, 1)


def oracle_cmp(f: MonicPoly, g: MonicPoly) -> str:
    """Higher degree is smaller; otherwise compare values at a large n."""
    if f.degree != g.degree:
        return "LT" if f.degree > g.degree else "GT"
    n = 10 ** 6
    vf = sum(c * n ** (f.degree - i) for i, c in enumerate(f.coeffs))
    vg = sum(c * n ** (g.degree - i) for i, c in enumerate(g.coeffs))
    return "EQ" if vf == vg else ("LT" if vf < vg else "GT")


monics = st.lists(st.fractions(-5, 5, max_denominator=3), max_size=3).map(lambda cs: MonicPoly((Fraction(1), *cs)))


@given(monics, monics)
def test_tau_cmp_matches_large_n_oracle(f, g):
    assert tau_cmp(f, g) == oracle_cmp(f, g)


@given(monics, monics, monics)
def test_tau_cmp_total_order(f, g, h):
    flip = {"LT": "GT", "GT": "LT", "EQ": "EQ"}
    assert tau_cmp(g, f) == flip[tau_cmp(f, g)]
    assert (tau_cmp(f, g) == "EQ") == (f == g)
    if tau_cmp(f, g) != "GT" and tau_cmp(g, h) != "GT":
        assert tau_cmp(f, h) != "GT"


def test_tau_and_tilde_r_additive_on_equal_phase():
    rng = random.Random(8)
    seen = 0
    for _ in range(60):
        L = random_lattice(rng)
        for a, b in itertools.product(L.effective, repeat=2):
            if tau(L, a) == tau(L, b):
                c = tuple(x + y for x, y in zip(a, b))
                assert tau(L, c) == tau(L, a)
                assert tilde_r(L, c) == tilde_r(L, a) + tilde_r(L, b)
                seen += 1
    assert seen > 60


def test_tau_mu_branches():
    L = lattice2()
    mu = [Fraction(1), Fraction(-2)]
    assert tau_mu(L, (1, 0), [0, 0], mu) == StabilityValue(tau(L, (1, 0)), Fraction(0))
    v = tau_mu(L, (0, 0), [3, 1], mu)
    assert v.first == PLUS_INF and v.second == Fraction(1, 4)
    v = tau_mu(L, (0, 0), [2, 1], mu)
    assert v.first == MINUS_INF and v.second == 0
    assert tau_mu(L, (1, 1), [1, 0], mu).second == Fraction(1, 2)
    with pytest.raises(WallxError):
        tau_mu(L, (0, 0), [0, 0], mu)


def test_tau_mu_ordering():
    L = lattice2()
    mu = [Fraction(1), Fraction(0)]
    top = tau_mu(L, (0, 0), [1, 0], mu)
    bottom = tau_mu(L, (0, 0), [0, 1], mu)
    middle = tau_mu(L, (1, 0), [1, 0], mu)
    assert bottom < middle < top
    assert tau_mu_cmp(middle, top) == "LT" and tau_mu_cmp(top, top) == "EQ"
    # same tau: second component decides
    lo = tau_mu(L, (1, 0), [0, 0], mu)
    assert tau_mu_cmp(lo, middle) == "LT"
    # lexicographic: a smaller tau wins regardless of the second entry
    L3 = ClassLattice(m=2, dim=2, hilbert=[[0, 0], [0, 1], [1, 1]], chi=[[0, 0], [0, 0]], effective=[])
    assert tau_mu(L3, (1, 0), [5, 0], mu) < tau_mu(L3, (0, 1), [0, 0], mu)


# -- pairing and genericity -----------------------------------------------------

def test_chi_pair_examples():
    L = lattice2()
    assert chi_pair(L, (1, 0), (0, 2)) == 2
    assert chi_pair(L, (1, 3), (1, 3)) == 0
    rng = random.Random(2)
    for _ in range(50):
        a = tuple(rng.randint(-4, 4) for _ in range(2))
        b = tuple(rng.randint(-4, 4) for _ in range(2))
        assert chi_pair(L, a, b) == -chi_pair(L, b, a)


def test_chi_pair_integrality():
    L = ClassLattice(m=2, dim=1, hilbert=[[1, 1], [1, 1]], chi=[[0, "1/2"], ["-1/2", 0]], effective=[])
    assert chi_pair(L, (2, 0), (0, 1)) == 1
    with pytest.raises(ConfigurationError):
        chi_pair(L, (1, 0), (0, 1))


def test_is_generic_examples():
    assert is_generic(TOY, TOY.effective, E2)
    L = lattice2()
    assert not is_generic(L, L.effective, (1, 0))
    assert is_generic(L, [], (1, 0))


def test_generic_kills_chi_on_two_part_splits():
    rng = random.Random(12)
    checked = 0
    for _ in range(80):
        L = random_lattice(rng, generic=True)
        for e in L.effective:
            if not is_generic(L, L.effective, e):
                continue
            a = tuple(3 * x for x in e)
            for tup in decompositions(L, a, L.effective, ordered=True, max_n=2):
                if len(tup) == 2:
                    assert chi_pair(L, *tup) == 0
                    checked += 1
    assert checked > 0


# -- decompositions ------------------------------------------------------------

def test_decomposition_examples():
    assert decompositions(TOY, E, [E]) == [(E,)]
    assert sorted(decompositions(TOY, E2, [E, E2])) == sorted([(E2,), (E, E)])
    assert sorted(decompositions(TOY, E3, [E, E2])) == sorted([(E, E, E), (E, E2), (E2, E)])
    assert decompositions(TOY, E3, [E2]) == []


def brute_force(L, alpha, effective):
    t = tau(L, alpha)
    parts = [e for e in set(map(tuple, effective)) if tau(L, e) == t]
    out = set()
    for n in range(1, tilde_r(L, alpha) + 1):
        for tup in itertools.product(parts, repeat=n):
            if tuple(map(sum, zip(*tup))) == tuple(alpha):
                out.add(tup)
    return out


def multiset_count(L, alpha, effective):
    """Independent route: multisets via combinations_with_replacement, weighted by orderings."""
    t = tau(L, alpha)
    parts = sorted(e for e in set(map(tuple, effective)) if tau(L, e) == t)
    total = 0
    for n in range(1, tilde_r(L, alpha) + 1):
        for combo in itertools.combinations_with_replacement(parts, n):
            if tuple(map(sum, zip(*combo))) == tuple(alpha):
                c = Counter(combo)
                k = 1
                for i in range(1, n + 1):
                    k *= i
                for v in c.values():
                    for i in range(1, v + 1):
                        k //= i
                total += k
    return total


def test_decompositions_match_brute_force():
    rng = random.Random(31)
    nontrivial = 0
    for _ in range(40):
        L = random_lattice(rng)
        for e in L.effective:
            for mult in (1, 2, 3):
                a = tuple(mult * x for x in e)
                if tilde_r(L, a) > 6:
                    continue
                got = decompositions(L, a, L.effective, ordered=True)
                assert len(got) == len(set(got))
                assert set(got) == brute_force(L, a, L.effective)
                assert len(got) == multiset_count(L, a, L.effective)
                unordered = decompositions(L, a, L.effective, ordered=False)
                assert sum(distinct_orderings(u) for u in unordered) == len(got)
                nontrivial += len(got) > 1
    assert nontrivial > 10


def test_decompositions_max_n():
    got = decompositions(TOY, (4,), [E, E2], max_n=2)
    assert sorted(got) == sorted([(E2, E2)])
    assert all(len(t) <= 3 for t in decompositions(TOY, (4,), [E, E2], max_n=3))


def test_reachable_is_the_set_of_partial_sums():
    L = lattice2(effective=((1, 0), (0, 1)))
    got = reachable(L, (1, 1))
    assert got == [(0, 1), (1, 0), (1, 1)]
    with pytest.raises(WallxError):
        reachable(L, (0, 0))
    L2 = ClassLattice(m=1, dim=1, hilbert=[[1], [1]], chi=[[0]], effective=[[2]])
    assert reachable(L2, E3) == []
