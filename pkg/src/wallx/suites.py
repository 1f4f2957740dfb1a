"""Identity sweeps behind ``wallx verify``; each returns a deterministic SuiteResult."""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .classes import (
    StabilityValue,
    add,
    chi_pair,
    is_generic,
    tau,
    tau_cmp,
    tau_mu,
    tilde_r,
)
from .errors import FramingWarning
from .kclass import master_relation_residual, projective_bundle_factor, residue_jump, sym_euler_inverse
from .residue import ZRat, kres, limit_infinity, limit_zero, nil_limit_factor
from .ring import SPoly, SRat, classical_limit, qint, qint_addition_residual
from .sampling import (
    closure_of,
    random_kclass,
    random_lattice,
    random_loci,
    random_monic,
    random_spoly,
    random_srat,
    random_table,
    target_classes,
    valid_ks,
)
from .wallcross import (
    c_coeff,
    forward_expand,
    invert,
    jacobi_residual,
    perm_sum_residual,
    relation_residual,
    relation_terms,
    split_pairs,
)

MAX_REPORTED_FAILURES = 5


@dataclass
class SuiteResult:
    check: str
    params: dict
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def record(self, ok: bool, case) -> None:
        self.cases += 1
        if not ok and len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(case)


def _antisym(rng: random.Random, n: int, bound: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        v = rng.randint(-bound, bound)
        c[i][j], c[j][i] = v, -v
    return c


def suite_qint(range_: int = 20, add_range: int = 12) -> SuiteResult:
    res = SuiteResult("qint", {"range": range_, "add_range": add_range})
    for n in range(-range_, range_ + 1):
        q = qint(n)
        res.record(qint(-n) == -q, ["odd", n])
        res.record(q.invert_variable() == q, ["palindromic", n])
        res.record(classical_limit(q) == (n if n % 2 else -n), ["classical", n])
    for a in range(-add_range, add_range + 1):
        for b in range(-add_range, add_range + 1):
            for branch in ("upper", "lower"):
                res.record(not qint_addition_residual(a, b, branch), ["addition", a, b, branch])
    return res


def suite_jacobi(range_: int = 10) -> SuiteResult:
    res = SuiteResult("jacobi", {"range": range_})
    span = range(-range_, range_ + 1)
    for a, b, c in itertools.product(span, span, span):
        res.record(not jacobi_residual(a, b, c), [a, b, c])
    return res


def suite_perm(n: int = 3, range_: int | None = None, seed: int = 0, count: int = 200) -> SuiteResult:
    """n <= 1: c_coeff itself vanishes; n == 2: exhaustive; n >= 3: random."""
    if range_ is None:
        range_ = 3 if n == 2 else 6
    res = SuiteResult("perm", {"n": n, "range": range_, "seed": seed, "count": count})
    rng = random.Random(seed)
    span = range(-range_, range_ + 1)
    if n <= 1:
        for _ in range(count):
            a = [rng.randint(-range_, range_) for _ in range(n)]
            b = [rng.randint(-range_, range_) for _ in range(n)]
            res.record(not c_coeff(n, a, b, [[0] * n for _ in range(n)]), [a, b])
    elif n == 2:
        for a1, a2, b1, b2, c12 in itertools.product(span, repeat=5):
            c = [[0, c12], [-c12, 0]]
            res.record(not perm_sum_residual(2, [a1, a2], [b1, b2], c), [[a1, a2], [b1, b2], c])
    else:
        for _ in range(count):
            a = [rng.randint(-range_, range_) for _ in range(n)]
            b = [rng.randint(-range_, range_) for _ in range(n)]
            c = _antisym(rng, n, range_)
            res.record(not perm_sum_residual(n, a, b, c), [a, b, c])
    return res


def suite_bundle(range_: int = 40) -> SuiteResult:
    res = SuiteResult("bundle", {"range": range_})
    for N in range(range_ + 1):
        res.record(projective_bundle_factor(N) == qint(N + 1), [N])
    return res


def suite_master(seed: int = 0, count: int = 500, configs: int = 100) -> SuiteResult:
    res = SuiteResult("master", {"seed": seed, "count": count, "configs": configs})
    rng = random.Random(seed)
    for _ in range(count):
        F = random_kclass(rng)
        res.record(kres(sym_euler_inverse(F)) == residue_jump(F), ["jump", F.to_list()])
    for _ in range(configs):
        loci = random_loci(rng)
        res.record(not master_relation_residual(loci), ["relation", [x.F.to_list() for x in loci]])
    s = SRat(SPoly.monomial(1))
    for N in range(1, 6):
        for a in (-3, -2, -1, 1, 2, 3):
            for m in (-2, 0, 3):
                for at in ("zero", "infinity"):
                    v = nil_limit_factor(a, m, N, at)
                    want = -s if (a > 0) == (at == "zero") else -s.inverse()
                    res.record(v.is_scalar() and v.coeffs[0] == want, ["nil", a, m, N, at])
    return res


def suite_residue(seed: int = 0, count: int = 100) -> SuiteResult:
    res = SuiteResult("residue", {"seed": seed, "count": count})
    rng = random.Random(seed)
    for _ in range(count):
        terms = {rng.randint(-4, 4): random_srat(rng) for _ in range(rng.randint(1, 4))}
        f = ZRat.from_terms(terms)
        res.record(not kres(f), ["laurent", sorted(terms)])
    for _ in range(count):
        # product of factors (x - y z^a) / (u - v z^a) with nonzero x, y, u, v: both limits exist
        f = ZRat.constant(random_srat(rng))
        for _ in range(rng.randint(1, 3)):
            a = rng.choice([-2, -1, 1, 2])
            x, y, u, v = (_nonzero_srat(rng) for _ in range(4))
            num = {0: x, a: -y}
            den = {0: u, a: -v}
            f = f * ZRat.from_terms(num, den)
        res.record(kres(f) == limit_zero(f) - limit_infinity(f), ["limits"])
    return res


def _nonzero_srat(rng: random.Random) -> SRat:
    while True:
        p = random_spoly(rng, max_terms=2, exp_range=2)
        if not p.is_zero():
            return SRat(p)


def suite_stability(seed: int = 0, count: int = 500) -> SuiteResult:
    res = SuiteResult("stability", {"seed": seed, "count": count})
    rng = random.Random(seed)
    flip = {"LT": "GT", "GT": "LT", "EQ": "EQ"}
    for _ in range(count):
        f, g, h = (random_monic(rng, max_degree=2, coeff_range=2) for _ in range(3))
        fg, gh, fh = tau_cmp(f, g), tau_cmp(g, h), tau_cmp(f, h)
        ok = flip[fg] == tau_cmp(g, f)
        ok &= (fg == "EQ") == (f == g)
        if fg in ("LT", "EQ") and gh in ("LT", "EQ"):
            ok &= fh in ("LT", "EQ")
        res.record(ok, ["order", str(f), str(g), str(h)])
    for _ in range(max(1, count // 10)):
        L = random_lattice(rng)
        for a, b in itertools.product(L.effective, repeat=2):
            if tau(L, a) == tau(L, b):
                c = add(a, b)
                res.record(
                    tau(L, c) == tau(L, a) and tilde_r(L, c) == tilde_r(L, a) + tilde_r(L, b),
                    ["additive", list(a), list(b)],
                )
        e = L.effective[0]
        mu = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)]
        d = [rng.randint(0, 3) for _ in range(2)]
        zero = L.zero()
        pairing = sum(x * y for x, y in zip(mu, d))
        v0 = tau_mu(L, e, [0, 0], mu)
        ok = v0 == StabilityValue(tau(L, e), Fraction(0))
        if any(d):
            vz = tau_mu(L, zero, d, mu)
            ok &= (vz.first.sign > 0) == (pairing > 0)
            ok &= vz.second == pairing / sum(d)
            # +inf beats every class, -inf loses to every class
            ve = tau_mu(L, e, d, mu)
            ok &= (vz > ve) if pairing > 0 else (vz < ve)
        res.record(ok, ["tau_mu", list(e), d, [str(x) for x in mu]])
    return res


def suite_theorem(seed: int = 0, count: int = 20, max_tilde: int = 5) -> SuiteResult:
    """Round trip, relation and k-independence on random lattices."""
    res = SuiteResult("theorem", {"seed": seed, "count": count, "max_tilde": max_tilde})
    rng = random.Random(seed)
    res.params["split_lattices"] = 0
    for trial in range(count):
        L = random_lattice(rng)
        C = closure_of(L, target_classes(L, max_tilde))
        res.params["split_lattices"] += any(split_pairs(L, a) for a in C)
        ks = valid_ks(L, C)
        k1, k2 = rng.sample(ks[:6], 2)
        VW = random_table(rng, C)
        t1 = forward_expand(L, VW, k1, C)
        t2 = forward_expand(L, VW, k2, C)
        back1 = invert(L, t1, k1, C)
        back2 = invert(L, t2, k2, C)
        tag = [trial, L.to_json(), k1, k2]
        res.record(back1 == VW and back2 == VW, ["round_trip", *tag])
        res.record(all(not relation_residual(L, t1, t2, a, k1, k2) for a in C), ["relation", *tag])
        res.record(back1 == back2, ["k_independence", *tag])
    return res


def suite_generic(seed: int = 0, count: int = 20, max_tilde: int = 5) -> SuiteResult:
    """Generic lattices: every chi-shift in the relation sum is zero."""
    res = SuiteResult("generic", {"seed": seed, "count": count, "max_tilde": max_tilde})
    rng = random.Random(seed)
    done = 0
    while done < count:
        L = random_lattice(rng, generic=True)
        C = closure_of(L, target_classes(L, max_tilde))
        if not all(is_generic(L, L.effective, a) for a in C):
            continue
        done += 1
        for a in C:
            terms = relation_terms(L, a, 3, 4)
            res.record(
                all(c == 0 and chi_pair(L, a1, a2) == 0 for a1, a2, c, _ in terms),
                ["generic", L.to_json(), list(a)],
            )
    return res


SUITES = {
    "qint": suite_qint,
    "jacobi": suite_jacobi,
    "perm": suite_perm,
    "bundle": suite_bundle,
    "master": suite_master,
    "residue": suite_residue,
    "stability": suite_stability,
    "theorem": suite_theorem,
    "generic": suite_generic,
}


def run_suite(name: str, seed: int | None = None, range_: int | None = None, n: int | None = None) -> list[SuiteResult]:
    """Dispatch with CLI-style knobs: --range is a sweep bound, --n a size or count."""
    if name == "all":
        return [r for key in SUITES for r in run_suite(key, seed, None, None)]
    seed = 0 if seed is None else seed
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FramingWarning)
        if name == "qint":
            return [suite_qint(*(() if range_ is None else (range_, range_)))]
        if name == "jacobi":
            return [suite_jacobi(10 if range_ is None else range_)]
        if name == "bundle":
            return [suite_bundle(40 if range_ is None else range_)]
        if name == "perm":
            if n is not None:
                return [suite_perm(n, range_, seed)]
            return [suite_perm(k, None if k > 1 else 6, seed) for k in (0, 1, 2, 3, 4)]
        if name == "master":
            return [suite_master(seed, *(() if n is None else (n, max(1, n // 5))))]
        if name in ("residue", "stability"):
            return [SUITES[name](seed, *(() if n is None else (n,)))]
        if name in ("theorem", "generic"):
            return [SUITES[name](seed, 20 if n is None else n, 5 if range_ is None else range_)]
    raise KeyError(name)
