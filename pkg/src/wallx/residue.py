"""Rational functions in z over Q(s), their expansions at 0 and oo, and the K-theoretic residue.

A :class:`ZRat` is kept fraction-free: numerator and denominator are
polynomials in ``z`` whose coefficients are Laurent polynomials in ``s``.
Canonical form (coprime, both constant terms nonzero, the denominator's
constant term normalized to lowest s-exponent 0 and leading coefficient 1)
makes equality structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Mapping, Sequence

from .errors import LimitError, WeightError
from .ring import ONE, ONE_POLY, ZERO, ZERO_POLY, SPoly, SRat, _content, _int_poly_gcd, spoly_gcd, srat

BPoly = tuple  # tuple[SPoly, ...], ascending in z, no trailing zeros


# ---------------------------------------------------------------------------
# polynomials in z over Q[s, 1/s]
# ---------------------------------------------------------------------------

def _btrim(a: list) -> BPoly:
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _bval(a: BPoly) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("valuation of the zero polynomial")


def _badd(a: BPoly, b: BPoly) -> BPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _btrim(out)


def _bmul(a: BPoly, b: BPoly) -> BPoly:
    if not a or not b:
        return ()
    out = [ZERO_POLY] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return _btrim(out)


def _bscale(a: BPoly, c: SPoly) -> BPoly:
    return _btrim([x * c for x in a])


def _bcontent(a: BPoly) -> SPoly:
    g = ZERO_POLY
    for c in a:
        if c:
            g = spoly_gcd(g, c)
            if g == ONE_POLY:
                break
    return g


def _bprimitive(a: BPoly) -> BPoly:
    g = _bcontent(a)
    if g == ONE_POLY:
        return a
    return tuple(c.exact_div(g) for c in a)


def _bprem(a: BPoly, b: BPoly) -> BPoly:
    """Pseudo-remainder over Q[s, 1/s], content removed after each elimination."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and len(a) - 1 >= db:
        la = a[-1]
        shift = len(a) - 1 - db
        g = spoly_gcd(la, lb)
        fa, fb = lb.exact_div(g), la.exact_div(g)
        a = [c * fa for c in a]
        for i, c in enumerate(b):
            a[i + shift] = a[i + shift] - fb * c
        a = list(_btrim(a))
        if a:
            a = list(_bprimitive(tuple(a)))
    return tuple(a)


def _bgcd(a: BPoly, b: BPoly) -> BPoly:
    """Gcd in Q[s, 1/s][z], up to a unit."""
    ca, cb = _bcontent(a), _bcontent(b)
    c = spoly_gcd(ca, cb)
    a = tuple(x.exact_div(ca) for x in a)
    b = tuple(x.exact_div(cb) for x in b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (c,)
        a, b = b, _bprem(a, b)
    return _bscale(_bprimitive(a), c)


def _bexact_div(a: BPoly, b: BPoly) -> BPoly:
    if len(b) == 1:
        return tuple(x.exact_div(b[0]) for x in a)
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [ZERO_POLY] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c:
            c = c.exact_div(lb)
            q[k] = c
            for i, y in enumerate(b):
                a[k + i] = a[k + i] - c * y
    if any(a[:db]):
        raise ArithmeticError("inexact division of polynomials in z")
    return _btrim(q)


def _bheuristic_gcd(a: BPoly, b: BPoly) -> BPoly | None:
    """Gcd candidate from evaluating z at a large integer; None if no candidate divides both."""
    ia, ib = _bint(a), _bint(b)
    bound = max(max((abs(c) for row in ia for c in row), default=1),
                max((abs(c) for row in ib for c in row), default=1))
    x = 2 * bound + 29
    for _ in range(4):
        va, vb = _zeval_int(ia, x), _zeval_int(ib, x)
        if any(va) and any(vb):
            h = _full_int_gcd(va, vb)
            rows: list[list[int]] = []
            half = x // 2
            for j, c in enumerate(h):
                i = 0
                while c:
                    d = c % x
                    if d > half:
                        d -= x
                    while len(rows) <= i:
                        rows.append([0] * len(h))
                    rows[i][j] = d
                    c = (c - d) // x
                    i += 1
            cand = _btrim([SPoly(r) for r in rows])
            if cand:
                try:
                    _bexact_div(a, cand)
                    _bexact_div(b, cand)
                    return cand
                except ArithmeticError:
                    pass
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def _bint(a: BPoly) -> list[list[int]]:
    """Integer image of a polynomial in z over Q[s^pm], up to a unit of Q[s^pm]."""
    lo = min(c.lo for c in a if c)
    m = 1
    for c in a:
        for x in c.coeffs:
            if type(x) is Fraction:
                m = lcm(m, x.denominator)
    rows = []
    for c in a:
        if not c:
            rows.append([])
        else:
            rows.append([0] * (c.lo - lo) + [int(x * m) for x in c.coeffs])
    return rows


def _zeval_int(rows: list[list[int]], x: int) -> list[int]:
    width = max(len(r) for r in rows)
    out = [0] * width
    for r in reversed(rows):
        out = [o * x for o in out]
        for j, c in enumerate(r):
            out[j] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def _full_int_gcd(a: list[int], b: list[int]) -> list[int]:
    """Gcd in Z[s] including the integer content; s-power factors are dropped."""
    while a and a[0] == 0:
        a = a[1:]
    while b and b[0] == 0:
        b = b[1:]
    c = gcd(_content(a), _content(b))
    g = _int_poly_gcd(a, b)
    return [c * x for x in g]


_PRIME = (1 << 61) - 1


def _coprime_by_specialization(a: BPoly, b: BPoly) -> bool:
    """Cheap certificate that gcd(a, b) has z-degree 0.

    Both polynomials are cleared to Z[s][z] and sent to GF(p)[z] by s -> x.
    A common factor of positive z-degree would survive any specialization
    that keeps both leading coefficients nonzero, so a coprime image proves
    coprimality.  A common content factor in s is handled separately.
    """
    ia, ib = _bint(a), _bint(b)
    for x in (1234567, 7654321):
        pa = [_eval_mod(r, x) for r in ia]
        pb = [_eval_mod(r, x) for r in ib]
        if pa[-1] == 0 or pb[-1] == 0:
            continue
        return _gcd_degree_mod(pa, pb) == 0
    return False


def _eval_mod(row: list[int], x: int) -> int:
    acc = 0
    for c in reversed(row):
        acc = (acc * x + c) % _PRIME
    return acc


def _gcd_degree_mod(a: list[int], b: list[int]) -> int:
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        a = list(a)
        inv = pow(b[-1], -1, _PRIME)
        while a and len(a) >= len(b):
            f = a[-1] * inv % _PRIME
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[i + shift] = (a[i + shift] - f * y) % _PRIME
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


# ---------------------------------------------------------------------------
# ZRat
# ---------------------------------------------------------------------------

class ZRat:
    """Element of Q(s)(z): ``z^v * num(z) / den(z)`` in canonical form."""

    __slots__ = ("v", "num", "den")

    def __init__(self, v: int, num: BPoly, den: BPoly):
        self.v, self.num, self.den = _zcanonical(v, tuple(num), tuple(den))

    @classmethod
    def _raw(cls, v: int, num: BPoly, den: BPoly) -> "ZRat":
        obj = object.__new__(cls)
        obj.v, obj.num, obj.den = v, num, den
        return obj

    @classmethod
    def from_terms(cls, num: Mapping[int, object], den: Mapping[int, object] | None = None) -> "ZRat":
        """Build from Laurent coefficient maps ``{z_exponent: element of Q(s)}``."""
        nlo, np_, nd = _clear_laurent({e: srat(c) for e, c in num.items()})
        if den is None:
            dlo, dp_, dd = 0, (ONE_POLY,), ONE_POLY
        else:
            dlo, dp_, dd = _clear_laurent({e: srat(c) for e, c in den.items()})
            if not dp_:
                raise ZeroDivisionError("ZRat with zero denominator")
        if not np_:
            return ZRAT_ZERO
        return cls(nlo - dlo, _bscale(np_, dd), _bscale(dp_, nd))

    @classmethod
    def constant(cls, c) -> "ZRat":
        return cls.from_terms({0: c})

    @classmethod
    def monomial(cls, k: int, c=1) -> "ZRat":
        return cls.from_terms({k: c})

    # -- views -------------------------------------------------------------

    @property
    def valuation(self) -> int:
        """Order of vanishing at z = 0 (negative for a pole)."""
        return self.v

    @property
    def degree(self) -> int:
        """Growth exponent at z = oo: f ~ c * z^degree."""
        return self.v + len(self.num) - len(self.den)

    def is_zero(self) -> bool:
        return not self.num

    def is_laurent_polynomial(self) -> bool:
        return len(self.den) == 1

    def numerator_terms(self) -> dict[int, SRat]:
        """Numerator coefficients, keyed by z-exponent (v already applied)."""
        return {self.v + i: SRat(c) for i, c in enumerate(self.num) if c}

    def denominator_terms(self) -> dict[int, SRat]:
        return {i: SRat(c) for i, c in enumerate(self.den) if c}

    # -- arithmetic ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZRat):
            try:
                other = ZRat.constant(other)
            except TypeError:
                return NotImplemented
        return self.v == other.v and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.v, self.num, self.den))

    def __neg__(self) -> "ZRat":
        return ZRat._raw(self.v, tuple(-c for c in self.num), self.den)

    def __add__(self, other) -> "ZRat":
        o = _as_zrat(other)
        if o is None:
            return NotImplemented
        if not self.num:
            return o
        if not o.num:
            return self
        w = min(self.v, o.v)
        a = _zshift(self.num, self.v - w)
        b = _zshift(o.num, o.v - w)
        if self.den == o.den:
            return ZRat(w, _badd(a, b), self.den)
        return ZRat(w, _badd(_bmul(a, o.den), _bmul(b, self.den)), _bmul(self.den, o.den))

    __radd__ = __add__

    def __sub__(self, other) -> "ZRat":
        o = _as_zrat(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "ZRat":
        o = _as_zrat(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "ZRat":
        o = _as_zrat(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return ZRAT_ZERO
        return ZRat(self.v + o.v, _bmul(self.num, o.num), _bmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "ZRat":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return ZRat(-self.v, self.den, self.num)

    def __truediv__(self, other) -> "ZRat":
        o = _as_zrat(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "ZRat":
        return _as_zrat(other) * self.inverse()

    def __pow__(self, n: int) -> "ZRat":
        if n < 0:
            return self.inverse() ** -n
        result = ZRAT_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __repr__(self) -> str:
        num = " + ".join(f"({c})*z^{self.v + i}" for i, c in enumerate(self.num) if c) or "0"
        den = " + ".join(f"({c})*z^{i}" for i, c in enumerate(self.den) if c)
        return f"ZRat[{num} / {den}]"


def _zshift(a: BPoly, k: int) -> BPoly:
    return (ZERO_POLY,) * k + a if k else a


def _as_zrat(x) -> ZRat | None:
    if isinstance(x, ZRat):
        return x
    try:
        return ZRat.constant(x)
    except TypeError:
        return None


def _clear_laurent(terms: Mapping[int, SRat]) -> tuple[int, BPoly, SPoly]:
    """Write ``{e: SRat}`` as z^lo * poly(z) / d with poly over Q[s^pm] and d in Q[s]."""
    terms = {e: c for e, c in terms.items() if c}
    if not terms:
        return 0, (), ONE_POLY
    lo, hi = min(terms), max(terms)
    d = ONE_POLY
    for c in terms.values():
        if c.den != ONE_POLY:
            d = (d * c.den).exact_div(spoly_gcd(d, c.den))
    coeffs = []
    for e in range(lo, hi + 1):
        c = terms.get(e)
        if c is None:
            coeffs.append(ZERO_POLY)
        elif c.den == ONE_POLY:
            coeffs.append(c.num * d)
        else:
            coeffs.append(c.num * d.exact_div(c.den))
    return lo, tuple(coeffs), d


def _zcanonical(v: int, num: BPoly, den: BPoly) -> tuple[int, BPoly, BPoly]:
    num = _btrim(list(num))
    den = _btrim(list(den))
    if not den:
        raise ZeroDivisionError("ZRat with zero denominator")
    if not num:
        return 0, (), (ONE_POLY,)
    vn, vd = _bval(num), _bval(den)
    num, den = num[vn:], den[vd:]
    v += vn - vd
    if len(num) > 1 and len(den) > 1 and not _coprime_by_specialization(num, den):
        gz = _bheuristic_gcd(num, den)
        if gz is not None and len(gz) > 1:
            num, den = _bexact_div(num, gz), _bexact_div(den, gz)
        if len(num) > 1 and len(den) > 1 and not _coprime_by_specialization(num, den):
            gz = _bgcd(num, den)
            if len(gz) > 1:
                num, den = _bexact_div(num, gz), _bexact_div(den, gz)
    g = spoly_gcd(_bcontent(num), _bcontent(den))
    if g != ONE_POLY:
        num = tuple(c.exact_div(g) for c in num)
        den = tuple(c.exact_div(g) for c in den)
    u = den[0]
    inv = Fraction(1) / Fraction(u.leading)
    k = u.lo
    if inv != 1 or k:
        num = tuple(c.shift(-k).scale(inv) for c in num)
        den = tuple(c.shift(-k).scale(inv) for c in den)
    return v, num, den


ZRAT_ZERO = ZRat._raw(0, (), (ONE_POLY,))
ZRAT_ONE = ZRat._raw(0, (ONE_POLY,), (ONE_POLY,))
Z = ZRat._raw(1, (ONE_POLY,), (ONE_POLY,))


# ---------------------------------------------------------------------------
# expansions and the residue map
# ---------------------------------------------------------------------------

def _series_quotient(num: BPoly, den: BPoly, count: int) -> list[SRat]:
    """First ``count`` coefficients of the power series num/den (den[0] != 0).

    Works over Q[s^pm] with the running denominator den[0]^(i+1) so only one
    reduction to Q(s) happens per coefficient.
    """
    d0 = den[0]
    out: list[SRat] = []
    p: list[SPoly] = []
    d0_pows = [ONE_POLY]
    for i in range(count):
        d0_pows.append(d0_pows[-1] * d0)
        acc = (num[i] if i < len(num) else ZERO_POLY) * d0_pows[i]
        for j in range(1, min(i, len(den) - 1) + 1):
            if den[j]:
                acc = acc - den[j] * p[i - j] * d0_pows[j - 1]
        p.append(acc)
        out.append(SRat(acc, d0_pows[i + 1]))
    return out


def _reversed_at_infinity(f: ZRat) -> tuple[int, BPoly, BPoly]:
    """f(1/w) written as w^shift * num(w)/den(w) with both constant terms nonzero."""
    num = f.num[::-1]
    den = f.den[::-1]
    shift = -f.v - (len(f.num) - 1) + (len(f.den) - 1)
    return shift, num, den


def expand_at_zero(f: ZRat, order: int) -> dict[int, SRat]:
    """Nonzero Laurent coefficients of f at z = 0 for exponents up to ``order``."""
    if order < 0 and f.v > order:
        return {}
    if not f.num:
        return {}
    count = order - f.v + 1
    if count <= 0:
        return {}
    coeffs = _series_quotient(f.num, f.den, count)
    return {f.v + i: c for i, c in enumerate(coeffs) if c}


def expand_at_infinity(f: ZRat, order: int) -> dict[int, SRat]:
    """Nonzero coefficients of f at z = oo, i.e. of the series in w = 1/z.

    ``order`` bounds the w-exponent; keys are reported as z-exponents, so the
    result covers z-exponents from ``f.degree`` down to ``-order``.
    """
    if not f.num:
        return {}
    shift, num, den = _reversed_at_infinity(f)
    count = order - shift + 1
    if count <= 0:
        return {}
    coeffs = _series_quotient(num, den, count)
    return {-(shift + i): c for i, c in enumerate(coeffs) if c}


def kres(f: ZRat) -> SRat:
    """K-theoretic residue: z^0 coefficient at 0 minus z^0 coefficient at oo."""
    if not isinstance(f, ZRat):
        f = ZRat.constant(f)
    at_zero = expand_at_zero(f, 0).get(0, ZERO)
    at_inf = expand_at_infinity(f, 0).get(0, ZERO)
    return at_zero - at_inf


def limit_zero(f: ZRat) -> SRat:
    if f.is_zero() or f.v > 0:
        return ZERO
    if f.v < 0:
        raise LimitError(f"no limit at z = 0: pole of order {-f.v}")
    return SRat(f.num[0], f.den[0])


def limit_infinity(f: ZRat) -> SRat:
    if f.is_zero() or f.degree < 0:
        return ZERO
    if f.degree > 0:
        raise LimitError(f"no limit at z = oo: growth z^{f.degree}")
    return SRat(f.num[-1], f.den[-1])


# ---------------------------------------------------------------------------
# nilpotent extension Q(s)[eps]/(eps^N)
# ---------------------------------------------------------------------------

class NilElt:
    """c_0 + c_1 eps + ... + c_{N-1} eps^{N-1} in Q(s)[eps]/(eps^N)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise ValueError("nilpotency order must be at least 1")
        self.coeffs = tuple(srat(c) for c in coeffs)

    @classmethod
    def scalar(cls, x, order: int) -> "NilElt":
        return cls([x] + [ZERO] * (order - 1))

    @classmethod
    def epsilon(cls, order: int) -> "NilElt":
        cs = [ZERO] * order
        if order > 1:
            cs[1] = ONE
        return cls(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def is_unit(self) -> bool:
        return bool(self.coeffs[0])

    def is_scalar(self) -> bool:
        """True when no eps-term survives."""
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def _check(self, other: "NilElt") -> None:
        if other.order != self.order:
            raise ValueError("nilpotency orders differ")

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilElt):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "NilElt") -> "NilElt":
        self._check(other)
        return NilElt([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "NilElt":
        return NilElt([-a for a in self.coeffs])

    def __sub__(self, other: "NilElt") -> "NilElt":
        return self + (-other)

    def __mul__(self, other) -> "NilElt":
        if not isinstance(other, NilElt):
            x = srat(other)
            return NilElt([a * x for a in self.coeffs])
        self._check(other)
        n = self.order
        out = [ZERO] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = out[i + j] + a * b
        return NilElt(out)

    __rmul__ = __mul__

    def inverse(self) -> "NilElt":
        if not self.is_unit():
            raise ZeroDivisionError("nilpotent element is not invertible")
        c0 = self.coeffs[0]
        inv0 = c0.inverse()
        # (c0 (1 + u))^-1 = c0^-1 sum (-u)^k, u nilpotent
        u = NilElt([ZERO] + [c * inv0 for c in self.coeffs[1:]])
        term = NilElt.scalar(ONE, self.order)
        total = term
        for _ in range(1, self.order):
            term = term * (-u)
            total = total + term
        return total * inv0

    def __repr__(self) -> str:
        return f"NilElt({list(self.coeffs)!r})"


def _nil_limit(num: Mapping[int, NilElt], den: Mapping[int, NilElt], at: str) -> NilElt:
    """Limit of a ratio of Laurent polynomials in z with nilpotent-ring coefficients."""
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    pick = min if at == "zero" else max
    dk = pick(den)
    order = den[dk].order
    if not num:
        return NilElt.scalar(ZERO, order)
    nk = pick(num)
    if not den[dk].is_unit():
        raise LimitError("dominant denominator coefficient is nilpotent")
    dominated = nk > dk if at == "zero" else nk < dk
    if dominated:
        return NilElt.scalar(ZERO, order)
    if nk != dk:
        raise LimitError(f"no limit at z = {'0' if at == 'zero' else 'oo'}")
    return num[nk] * den[dk].inverse()


def nil_limit_factor(a: int, m: int, order: int = 4, at: str = "zero") -> NilElt:
    """Limit of -s^-1 (s^2 - z^a s^m L) / (1 - z^a s^m L) with L = 1 + eps nilpotent-unipotent.

    The result should be eps-free: -s or -1/s by the sign of ``a`` and the
    evaluation point.
    """
    if a == 0:
        raise WeightError("weight with zero z-exponent gives a pole at w = 1")
    if order < 1:
        raise ValueError("nilpotency order must be at least 1")
    if at not in ("zero", "infinity"):
        raise ValueError("at must be 'zero' or 'infinity'")
    s = SPoly.monomial(1)
    line = NilElt.scalar(ONE, order) + NilElt.epsilon(order)
    c = line * SRat(SPoly.monomial(m))
    minus_inv_s = SRat(-SPoly.monomial(-1))
    num = {0: NilElt.scalar(minus_inv_s * (s * s), order), a: c * (-minus_inv_s)}
    den = {0: NilElt.scalar(ONE, order), a: -c}
    return _nil_limit(num, den, at)
