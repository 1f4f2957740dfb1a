"""Exact arithmetic kernel: Laurent polynomials in s, the field Q(s), quantum integers.

The variable ``s`` stands for ``t^{1/2}``, so ``t^k`` is the monomial ``s^{2k}``.
Coefficients are Python ints where possible and :class:`fractions.Fraction`
otherwise; both compare and hash consistently, so mixing them is harmless.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Iterable, Mapping, Union

from .errors import PoleError

Rat = Fraction
Number = Union[int, Fraction]


def _tidy(c: Number) -> Number:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# integer polynomial helpers (ascending coefficient lists, no trailing zeros)
# ---------------------------------------------------------------------------

def _content(p: list[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(p: list[int]) -> list[int]:
    g = _content(p)
    if p[-1] < 0:
        g = -g
    if g == 1:
        return p
    return [c // g for c in p]


def _prem_int(a: list[int], b: list[int]) -> list[int]:
    """Primitive part of the pseudo-remainder of a by b."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and len(a) - 1 >= db:
        la = a[-1]
        shift = len(a) - 1 - db
        g = gcd(la, lb)
        fa, fb = lb // g, la // g
        if fa != 1:
            a = [c * fa for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= fb * c
        while a and a[-1] == 0:
            a.pop()
    return _primitive(a) if a else a


def _int_poly_divides(g: list[int], f: list[int]) -> bool:
    """True when g divides f in Z[s] (trial division with integer quotients)."""
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    for k in range(len(f) - 1 - dg, -1, -1):
        c = f[k + dg]
        if c:
            q, r = divmod(c, lg)
            if r:
                return False
            for i, y in enumerate(g):
                f[k + i] -= q * y
    return not any(f[:dg])


def _heuristic_gcd(a: list[int], b: list[int]) -> list[int] | None:
    """Gcd by evaluation at a large integer and balanced-digit reconstruction.

    Every candidate is verified by trial division, so a returned value is the
    true primitive gcd; None means the heuristic gave up.
    """
    # xi >= 2 min(|a|, |b|) + 2 makes a candidate that divides both the true gcd
    bound = min(max(abs(c) for c in a), max(abs(c) for c in b))
    x = 2 * bound + 2
    for _ in range(6):
        va = _eval_int(a, x)
        vb = _eval_int(b, x)
        if va and vb:
            h = gcd(va, vb)
            cand = []
            half = x // 2
            while h:
                d = h % x
                if d > half:
                    d -= x
                cand.append(d)
                h = (h - d) // x
            if cand:
                cand = _primitive(cand)
                if _int_poly_divides(cand, a) and _int_poly_divides(cand, b):
                    return cand
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def _eval_int(p: list[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _int_poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of two nonzero integer polynomials, positive leading coefficient."""
    if len(a) < len(b):
        a, b = b, a
    a, b = _primitive(a), _primitive(b)
    if len(b) == 1:
        return [1]
    g = _heuristic_gcd(a, b)
    if g is not None:
        return g
    while b:
        if len(b) == 1:
            return [1]
        a, b = b, _prem_int(a, b)
    return _primitive(a)


def _to_int_list(coeffs: Iterable[Number]) -> list[int]:
    coeffs = list(coeffs)
    m = 1
    for c in coeffs:
        if type(c) is Fraction:
            m = lcm(m, c.denominator)
    if m == 1:
        return [int(c) for c in coeffs]
    return [int(c * m) for c in coeffs]


# ---------------------------------------------------------------------------
# SPoly
# ---------------------------------------------------------------------------

class SPoly:
    """Laurent polynomial in ``s`` with rational coefficients, stored densely.

    ``coeffs[i]`` is the coefficient of ``s^(lo + i)``; both ends are nonzero,
    and the zero polynomial has no coefficients.
    """

    __slots__ = ("lo", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = (), lo: int = 0):
        cs = [_tidy(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        self.coeffs = tuple(cs[start:end])
        self.lo = lo + start if self.coeffs else 0
        self._hash = None

    @classmethod
    def _raw(cls, lo: int, coeffs: tuple) -> "SPoly":
        obj = object.__new__(cls)
        obj.lo = lo
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[int, Number]) -> "SPoly":
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return ZERO_POLY
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1) -> "SPoly":
        return cls((coeff,), exponent)

    @classmethod
    def const(cls, c: Number) -> "SPoly":
        return cls((c,), 0)

    # -- structure ---------------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and self.lo == 0)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def leading(self) -> Number:
        return self.coeffs[-1]

    @property
    def trailing(self) -> Number:
        return self.coeffs[0]

    def terms(self) -> dict[int, Number]:
        return {self.lo + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def coeff(self, exponent: int) -> Number:
        i = exponent - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def shift(self, k: int) -> "SPoly":
        if not self.coeffs or k == 0:
            return self
        return SPoly._raw(self.lo + k, self.coeffs)

    def invert_variable(self) -> "SPoly":
        """Substitute s -> 1/s."""
        if not self.coeffs:
            return self
        return SPoly._raw(-self.hi, self.coeffs[::-1])

    def scale(self, c: Number) -> "SPoly":
        if c == 0 or not self.coeffs:
            return ZERO_POLY
        if c == 1:
            return self
        return SPoly._raw(self.lo, tuple(_tidy(x * c) for x in self.coeffs))

    def evaluate(self, x: Number) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if self.lo:
            acc *= x ** self.lo
        return acc

    # -- arithmetic ----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, SPoly):
            return self.lo == other.lo and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == SPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.lo, self.coeffs))
        return self._hash

    def __neg__(self) -> "SPoly":
        return SPoly._raw(self.lo, tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "SPoly":
        other = _as_spoly(other)
        if other is None:
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs, self.lo - lo):
            out[i] = c
        for i, c in enumerate(other.coeffs, other.lo - lo):
            out[i] += c
        return SPoly(out, lo)

    __radd__ = __add__

    def __sub__(self, other) -> "SPoly":
        other = _as_spoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SPoly":
        other = _as_spoly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "SPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        if len(a) < len(b):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for j, y in enumerate(b):
            if y:
                for i, x in enumerate(a, j):
                    out[i] += x * y
        return SPoly._raw(self.lo + other.lo, tuple(_tidy(c) for c in out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SPoly":
        if n < 0:
            if self.is_monomial():
                return SPoly._raw(self.lo * n, (_tidy(Fraction(1) / self.coeffs[0] ** -n),))
            raise ValueError("negative power of a non-monomial Laurent polynomial")
        result = ONE_POLY
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod_poly(self, other: "SPoly") -> tuple["SPoly", "SPoly"]:
        """Division with remainder after clearing the s-powers of both operands.

        Returns ``(q, r)`` with ``self = q * other + r`` in the Laurent ring and
        the remainder of ``s``-degree below that of ``other``'s polynomial part.
        """
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.coeffs:
            return ZERO_POLY, ZERO_POLY
        a = list(self.coeffs)
        b = other.coeffs
        lb = b[-1]
        db = len(b) - 1
        q = [0] * max(len(a) - db, 0)
        for k in range(len(a) - 1 - db, -1, -1):
            c = a[k + db]
            if c:
                if type(c) is int and type(lb) is int and c % lb == 0:
                    c = c // lb
                else:
                    c = _tidy(Fraction(c) / lb)
                q[k] = c
                for i, y in enumerate(b):
                    a[k + i] -= c * y
        quotient = SPoly(q, self.lo - other.lo)
        remainder = SPoly(a[:db], self.lo) if db else ZERO_POLY
        return quotient, remainder

    def exact_div(self, other: "SPoly") -> "SPoly":
        q, r = self.divmod_poly(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __repr__(self) -> str:
        return f"SPoly({list(self.coeffs)!r}, lo={self.lo})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.terms().items(), reverse=True):
            if e == 0:
                mono = str(c)
            else:
                power = "s" if e == 1 else f"s^{e}" if e > 0 else f"s^({e})"
                mono = power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}"
            parts.append(mono)
        return " + ".join(parts).replace("+ -", "- ")


def _as_spoly(x) -> SPoly | None:
    if isinstance(x, SPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return SPoly.const(x)
    return None


ZERO_POLY = SPoly()
ONE_POLY = SPoly((1,))
S = SPoly.monomial(1)


def spoly_gcd(a: SPoly, b: SPoly) -> SPoly:
    """Monic gcd in Q[s, 1/s], normalized to lowest exponent 0.

    Powers of ``s`` are units in the Laurent ring, so they are discarded.
    ``gcd(0, 0)`` is 0.
    """
    if not a.coeffs:
        return _monic(b)
    if not b.coeffs:
        return _monic(a)
    if len(a.coeffs) == 1 or len(b.coeffs) == 1:
        return ONE_POLY
    g = _int_poly_gcd(_to_int_list(a.coeffs), _to_int_list(b.coeffs))
    if len(g) == 1:
        return ONE_POLY
    return _monic(SPoly(g))


def _monic(p: SPoly) -> SPoly:
    if not p.coeffs:
        return p
    return SPoly._raw(0, p.coeffs).scale(Fraction(1) / Fraction(p.leading))


# ---------------------------------------------------------------------------
# SRat
# ---------------------------------------------------------------------------

class SRat:
    """Element of Q(s) in canonical reduced form.

    The denominator has lowest exponent 0 and leading coefficient 1, and is
    coprime to the numerator, so equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = _as_spoly(num) if not isinstance(num, SPoly) else num
        den = _as_spoly(den) if not isinstance(den, SPoly) else den
        if num is None or den is None:
            raise TypeError("SRat numerator and denominator must be SPoly or rational")
        self.num, self.den = _canonical(num, den)

    @classmethod
    def _raw(cls, num: SPoly, den: SPoly) -> "SRat":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def coerce(cls, x) -> "SRat":
        if isinstance(x, SRat):
            return x
        if isinstance(x, SPoly):
            return cls._raw(x, ONE_POLY)
        if isinstance(x, (int, Fraction)):
            return cls._raw(SPoly.const(x), ONE_POLY)
        raise TypeError(f"cannot interpret {x!r} as an element of Q(s)")

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def is_polynomial(self) -> bool:
        return self.den == ONE_POLY

    def __bool__(self) -> bool:
        return bool(self.num.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SRat):
            try:
                other = SRat.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.den == ONE_POLY:
            return hash(self.num)
        return hash((self.num, self.den))

    def __neg__(self) -> "SRat":
        return SRat._raw(-self.num, self.den)

    def __add__(self, other) -> "SRat":
        try:
            o = SRat.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        if not a:
            return o
        if not c:
            return self
        if b == d:
            if b == ONE_POLY:
                return SRat._raw(a + c, b)
            return SRat(a + c, b)
        if b == ONE_POLY:
            # gcd(a*d + c, d) = gcd(c, d) = 1 already
            n = a * d + c
            return SRat._raw(n, d) if n else ZERO
        if d == ONE_POLY:
            n = c * b + a
            return SRat._raw(n, b) if n else ZERO
        return SRat(a * d + c * b, b * d)

    __radd__ = __add__

    def __sub__(self, other) -> "SRat":
        try:
            o = SRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "SRat":
        try:
            o = SRat.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "SRat":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            return SRat._raw(self.num.scale(other), self.den)
        try:
            o = SRat.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not o.num:
            return ZERO
        if self.den == ONE_POLY and o.den == ONE_POLY:
            return SRat._raw(self.num * o.num, ONE_POLY)
        if o.num.is_monomial() and o.den == ONE_POLY:
            return SRat(self.num * o.num, self.den)
        return SRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "SRat":
        if not self.num:
            raise ZeroDivisionError("division by the zero element of Q(s)")
        return SRat(self.den, self.num)

    def __truediv__(self, other) -> "SRat":
        try:
            o = SRat.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by the zero element of Q(s)")
        return SRat(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "SRat":
        return SRat.coerce(other) / self

    def __pow__(self, n: int) -> "SRat":
        if n < 0:
            return self.inverse() ** -n
        return SRat._raw(self.num ** n, self.den ** n)

    def invert_variable(self) -> "SRat":
        """Substitute s -> 1/s (the t-duality t -> 1/t)."""
        return SRat(self.num.invert_variable(), self.den.invert_variable())

    def evaluate(self, x: Number) -> Fraction:
        d = self.den.evaluate(x)
        if d == 0:
            raise PoleError(f"{self} has a pole at s = {x}")
        return self.num.evaluate(x) / d

    def __repr__(self) -> str:
        if self.den == ONE_POLY:
            return f"SRat({self.num})"
        return f"SRat(({self.num}) / ({self.den}))"

    __str__ = __repr__


def _canonical(num: SPoly, den: SPoly) -> tuple[SPoly, SPoly]:
    if not den.coeffs:
        raise ZeroDivisionError("SRat with zero denominator")
    if not num.coeffs:
        return ZERO_POLY, ONE_POLY
    if den.lo:
        num = num.shift(-den.lo)
        den = den.shift(-den.lo)
    if len(den.coeffs) == 1:
        return num.scale(Fraction(1) / Fraction(den.coeffs[0])), ONE_POLY
    g = spoly_gcd(num, den)
    if g != ONE_POLY:
        num = num.exact_div(g)
        den = den.exact_div(g)
        if den.lo:
            num = num.shift(-den.lo)
            den = den.shift(-den.lo)
        if len(den.coeffs) == 1:
            return num.scale(Fraction(1) / Fraction(den.coeffs[0])), ONE_POLY
    lc = den.leading
    if lc != 1:
        inv = Fraction(1) / Fraction(lc)
        num, den = num.scale(inv), den.scale(inv)
    return num, den


ZERO = SRat._raw(ZERO_POLY, ONE_POLY)
ONE = SRat._raw(ONE_POLY, ONE_POLY)


def srat(x) -> SRat:
    """Coerce an int, Fraction, SPoly or SRat into Q(s)."""
    return SRat.coerce(x)


# ---------------------------------------------------------------------------
# quantum integers
# ---------------------------------------------------------------------------

def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@lru_cache(maxsize=4096)
def qint(n: int) -> SPoly:
    """Symmetrized quantum integer [n]_t = (-1)^(n-1) (s^n - s^-n) / (s - 1/s).

    Computed from the telescoped sum s^(n-1) + s^(n-3) + ... + s^(1-n), so no
    division ever happens.
    """
    if n == 0:
        return ZERO_POLY
    if n < 0:
        return -qint(-n)
    c = -_sign(n)  # (-1)^(n-1)
    coeffs = [0] * (2 * n - 1)
    for i in range(0, 2 * n - 1, 2):
        coeffs[i] = c
    return SPoly._raw(1 - n, tuple(coeffs))


def qint_addition_residual(a: int, b: int, branch: str = "upper") -> SPoly:
    """[a+b] - ((-1)^a s^{+-a} [b] + (-1)^b s^{-+b} [a]); always zero."""
    if branch not in ("upper", "lower"):
        raise ValueError("branch must be 'upper' or 'lower'")
    e = 1 if branch == "upper" else -1
    rhs = qint(b).shift(e * a).scale(_sign(a)) + qint(a).shift(-e * b).scale(_sign(b))
    return qint(a + b) - rhs


def classical_limit(x) -> Fraction:
    """Value at s = 1 (that is, t -> 1) of an element of Q(s)."""
    x = srat(x)
    d = x.den.evaluate(1)
    if d == 0:
        raise PoleError(f"{x} has a pole at s = 1")
    return x.num.evaluate(1) / d
