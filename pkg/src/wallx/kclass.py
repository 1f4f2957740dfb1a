"""Equivariant K-theory classes as weight multisets, Euler classes and the master-space relation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .errors import WeightError
from .residue import BPoly, ZRat, _bmul, kres
from .ring import ONE_POLY, ZERO, SPoly, SRat, srat


class Weight(NamedTuple):
    """The character z^a s^m (even m is a whole power of t)."""

    a: int
    m: int


class KClassRep:
    """Finite multiset of weights with integer (possibly negative) multiplicities."""

    __slots__ = ("_mult",)

    def __init__(self, multiplicities: Mapping[tuple[int, int], int] | None = None):
        mult: dict[Weight, int] = {}
        for w, k in (multiplicities or {}).items():
            w = Weight(*w)
            total = mult.get(w, 0) + k
            if total:
                mult[w] = total
            else:
                mult.pop(w, None)
        self._mult = dict(sorted(mult.items()))

    @classmethod
    def from_list(cls, triples: Iterable[Iterable[int]]) -> "KClassRep":
        """Build from ``[[a, m, mult], ...]``; repeated weights accumulate."""
        acc: dict[Weight, int] = {}
        for a, m, k in triples:
            w = Weight(int(a), int(m))
            acc[w] = acc.get(w, 0) + int(k)
        return cls(acc)

    def items(self):
        return self._mult.items()

    def to_list(self) -> list[list[int]]:
        return [[w.a, w.m, k] for w, k in self._mult.items()]

    @property
    def rank(self) -> int:
        return sum(self._mult.values())

    def __len__(self) -> int:
        return len(self._mult)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KClassRep):
            return NotImplemented
        return self._mult == other._mult

    def __hash__(self) -> int:
        return hash(tuple(self._mult.items()))

    def __repr__(self) -> str:
        return f"KClassRep({self.to_list()})"


def _require_moving(F: KClassRep) -> None:
    for w, _ in F.items():
        if w.a == 0:
            raise WeightError(f"weight {tuple(w)} is fixed by the z-torus (a = 0)")


@dataclass(frozen=True)
class FixedLocusDatum:
    amplitude: SRat
    F: KClassRep = field(default_factory=KClassRep)

    def __post_init__(self):
        object.__setattr__(self, "amplitude", srat(self.amplitude))
        _require_moving(self.F)


def euler(K: KClassRep) -> ZRat:
    """K-theoretic Euler class: product of (1 - w^-1)^mult over the weights."""
    result = ZRat.constant(1)
    for w, k in K.items():
        if w.a == 0 and w.m == 0:
            if k < 0:
                raise WeightError("trivial weight in the denominator: 1 - 1 is not invertible")
            return ZRat.constant(0)
        inv_w = SRat(SPoly.monomial(-w.m, -1))
        if w.a == 0:
            factor = ZRat.constant(inv_w + 1)
        else:
            factor = ZRat.from_terms({0: 1, -w.a: inv_w})
        result = result * factor ** k
    return result


def _laurent_power(shift: int, poly: BPoly, k: int) -> tuple[int, BPoly]:
    out: BPoly = (ONE_POLY,)
    for _ in range(k):
        out = _bmul(out, poly)
    return shift * k, out


def sym_euler_inverse(F: KClassRep) -> ZRat:
    """1 / e^(F^v - t^-1 F) as the product of -s^-1 (s^2 - z^a s^m) / (1 - z^a s^m)."""
    _require_moving(F)
    top_shift, top = 0, (ONE_POLY,)
    bot_shift, bot = 0, (ONE_POLY,)
    for (a, m), k in F.items():
        # numerator factor -s + s^(m-1) z^a, denominator 1 - s^m z^a, as z^shift * poly
        if a > 0:
            num_f = (0, (SPoly.monomial(1, -1),) + (SPoly(),) * (a - 1) + (SPoly.monomial(m - 1),))
            den_f = (0, (ONE_POLY,) + (SPoly(),) * (a - 1) + (SPoly.monomial(m, -1),))
        else:
            b = -a
            num_f = (a, (SPoly.monomial(m - 1),) + (SPoly(),) * (b - 1) + (SPoly.monomial(1, -1),))
            den_f = (a, (SPoly.monomial(m, -1),) + (SPoly(),) * (b - 1) + (ONE_POLY,))
        if k < 0:
            num_f, den_f, k = den_f, num_f, -k
        ns, np_ = _laurent_power(num_f[0], num_f[1], k)
        ds, dp = _laurent_power(den_f[0], den_f[1], k)
        top_shift, top = top_shift + ns, _bmul(top, np_)
        bot_shift, bot = bot_shift + ds, _bmul(bot, dp)
    return ZRat(top_shift - bot_shift, top, bot)


def mb_index(F: KClassRep) -> int:
    """Morse-Bott index: rank of the positive-weight part minus the negative part."""
    _require_moving(F)
    return sum(k if w.a > 0 else -k for w, k in F.items())


def residue_jump(F: KClassRep) -> SRat:
    """(-1)^ind (s^ind - s^-ind), the closed-form residue of sym_euler_inverse(F)."""
    ind = mb_index(F)
    sign = -1 if ind % 2 else 1
    return SRat(SPoly.from_terms({ind: sign}) - SPoly.from_terms({-ind: sign}))


def master_relation_residual(loci: Iterable[FixedLocusDatum]) -> SRat:
    """kres of the localization sum minus the sum of closed-form jumps; zero by the master-space relation."""
    total = ZRat.constant(0)
    closed = ZERO
    for locus in loci:
        total = total + sym_euler_inverse(locus.F) * locus.amplitude
        closed = closed + locus.amplitude * residue_jump(locus.F)
    return kres(total) - closed


def projective_bundle_factor(N: int) -> SPoly:
    """(-1)^N s^-N sum_{i,j} (-1)^(i+j) h^{i,j}(P^N) s^(2j), by direct summation."""
    if N < 0:
        raise ValueError("projective space dimension must be non-negative")
    total = SPoly()
    for i in range(N + 1):
        for j in range(N + 1):
            h = 1 if i == j else 0
            if h:
                total = total + SPoly.monomial(2 * j, (-1) ** (i + j) * h)
    return total.shift(-N).scale((-1) ** N)
