"""JSON encodings for exact values. Rationals are always "p/q" strings, never floats."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .classes import ClassLattice
from .errors import WallxError
from .kclass import FixedLocusDatum, KClassRep
from .residue import ZRat
from .ring import SPoly, SRat


class MalformedInput(WallxError, ValueError):
    """JSON input does not follow the documented layout."""


def rat_to_json(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rat_from_json(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise MalformedInput(f"rational must be a 'p/q' string or an integer, got {x!r}")
    if isinstance(x, Fraction):
        return x
    if not isinstance(x, (int, str)):
        raise MalformedInput(f"rational must be a 'p/q' string or an integer, got {x!r}")
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInput(f"bad rational {x!r}") from exc


def spoly_to_json(p: SPoly) -> list:
    """[[exponent, numerator, denominator], ...] by ascending exponent."""
    out = []
    for e, c in sorted(p.terms().items()):
        c = Fraction(c)
        out.append([e, c.numerator, c.denominator])
    return out


def spoly_from_json(data) -> SPoly:
    """Parse [[e, p, q], ...] (also [e, "p/q"] or [e, int]); repeated exponents accumulate."""
    if not isinstance(data, list):
        raise MalformedInput(f"expected a list of [exponent, num, den] triples, got {data!r}")
    terms: dict[int, Fraction] = {}
    for item in data:
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise MalformedInput(f"expected [exponent, num, den], got {item!r}")
        e = _int(item[0])
        if len(item) == 3:
            q = _int(item[2])
            if q == 0:
                raise MalformedInput(f"zero denominator in {item!r}")
            c = Fraction(_int(item[1]), q)
        else:
            c = rat_from_json(item[1])
        terms[e] = terms.get(e, Fraction(0)) + c
    return SPoly.from_terms(terms)


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInput(f"expected an integer, got {x!r}")
    return x


def srat_to_json(x: SRat) -> list:
    """[numerator, denominator] as coefficient lists in s = t^(1/2)."""
    return [spoly_to_json(x.num), spoly_to_json(x.den)]


def srat_from_json(data) -> SRat:
    """Accepts [num, den], [num], a bare integer or a "p/q" string."""
    if isinstance(data, (int, str)) and not isinstance(data, bool):
        return SRat(SPoly.const(rat_from_json(data)))
    if not isinstance(data, list) or len(data) not in (1, 2):
        raise MalformedInput(f"expected [numerator, denominator] coefficient lists, got {data!r}")
    num = spoly_from_json(data[0])
    den = spoly_from_json(data[1]) if len(data) == 2 else SPoly.const(1)
    if den.is_zero():
        raise MalformedInput("zero denominator")
    return SRat(num, den)


def zrat_to_json(f: ZRat) -> dict:
    return {
        "num": [[e, srat_to_json(c)] for e, c in sorted(f.numerator_terms().items())],
        "den": [[e, srat_to_json(c)] for e, c in sorted(f.denominator_terms().items())],
    }


def zrat_from_json(data) -> ZRat:
    if not isinstance(data, dict) or "num" not in data:
        raise MalformedInput("expected {\"num\": [[z_exp, s-rational], ...], \"den\": [...]}")

    def side(items) -> dict[int, SRat]:
        if not isinstance(items, list):
            raise MalformedInput(f"expected a list of [z_exp, s-rational], got {items!r}")
        out: dict[int, SRat] = {}
        for item in items:
            if not isinstance(item, list) or len(item) != 2:
                raise MalformedInput(f"expected [z_exp, s-rational], got {item!r}")
            e = _int(item[0])
            out[e] = out.get(e, SRat(0)) + srat_from_json(item[1])
        return out

    num = side(data["num"])
    den = side(data.get("den", [[0, 1]]))
    if not any(den.values()):
        raise MalformedInput("zero denominator")
    return ZRat.from_terms(num, den)


def class_to_json(alpha) -> list[int]:
    return [int(x) for x in alpha]


def class_from_json(data, m: int | None = None) -> tuple[int, ...]:
    if not isinstance(data, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in data):
        raise MalformedInput(f"a class is a list of integers, got {data!r}")
    if m is not None and len(data) != m:
        raise MalformedInput(f"class {data} should have {m} coordinates")
    return tuple(data)


def table_to_json(table: Mapping, k: int | None = None) -> dict:
    """{"k": k or null, "entries": [{"class": [...], "value": s-rational}, ...]} sorted by class."""
    return {
        "k": k,
        "entries": [{"class": class_to_json(a), "value": srat_to_json(v)} for a, v in sorted(table.items())],
    }


def table_from_json(data, m: int | None = None) -> tuple[dict, int | None]:
    if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
        raise MalformedInput("a table is {\"k\": int or null, \"entries\": [...]}")
    k = data.get("k")
    if k is not None and (not isinstance(k, int) or isinstance(k, bool)):
        raise MalformedInput(f"k must be an integer, got {k!r}")
    out = {}
    for entry in data["entries"]:
        if not isinstance(entry, dict) or "class" not in entry or "value" not in entry:
            raise MalformedInput(f"bad table entry {entry!r}")
        alpha = class_from_json(entry["class"], m)
        if alpha in out:
            raise MalformedInput(f"duplicate entry for class {list(alpha)}")
        out[alpha] = srat_from_json(entry["value"])
    return out, k


def lattice_from_json(data) -> ClassLattice:
    if not isinstance(data, dict):
        raise MalformedInput("a lattice is a JSON object")
    return ClassLattice.from_json(data)


def locus_to_json(locus: FixedLocusDatum) -> dict:
    return {"amplitude": srat_to_json(locus.amplitude), "weights": locus.F.to_list()}


def locus_from_json(data) -> FixedLocusDatum:
    if not isinstance(data, dict) or "weights" not in data:
        raise MalformedInput("a fixed locus is {\"amplitude\": s-rational, \"weights\": [[a, m, mult], ...]}")
    try:
        F = KClassRep.from_list(data["weights"])
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad weight list {data['weights']!r}") from exc
    return FixedLocusDatum(srat_from_json(data.get("amplitude", 1)), F)


def loci_to_json(loci: Iterable[FixedLocusDatum]) -> dict:
    return {"loci": [locus_to_json(x) for x in loci]}


def loci_from_json(data) -> list[FixedLocusDatum]:
    """Accepts {"loci": [...]} or the bare list."""
    if isinstance(data, dict):
        data = data.get("loci")
    if not isinstance(data, list):
        raise MalformedInput("expected a list of loci or {\"loci\": [...]}")
    return [locus_from_json(x) for x in data]


def dumps(obj: Any) -> str:
    """Canonical one-line JSON: sorted keys, no spaces, ASCII only."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj: Any) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()[:16]
