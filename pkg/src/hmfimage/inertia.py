"""Tame inertia shapes of crystalline mod-l representations over a real quadratic field.

Characters are written with fundamental characters omega (level 1), omega_2 and
omega_4; an exponent is a digit tuple (p_0, ..., p_{L-1}) standing for
p_0 + p_1*l + ... + p_{L-1}*l^{L-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

__all__ = [
    "BadWeight",
    "InertialType",
    "hodge_exponent_multiset",
    "hodge_pairs",
    "enumerate_inertial_types",
    "format_exponent",
]

_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_SUB = {1: "ω", 2: "ω₂", 4: "ω₄"}


class BadWeight(ValueError):
    pass


def _check(k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if not k:
        raise BadWeight("empty weight")
    if any(x < 2 for x in k):
        raise BadWeight(f"weights must be >= 2, got {k}")
    if len({x % 2 for x in k}) != 1:
        raise BadWeight(f"weights must share a parity, got {k}")
    return k


def hodge_pairs(k: Sequence[int]) -> list[tuple[int, int]]:
    """Per-embedding exponent pairs ((k0 - ki)/2, (k0 + ki - 2)/2)."""
    k = _check(k)
    k0 = max(k)
    return [((k0 - ki) // 2, (k0 + ki - 2) // 2) for ki in k]


def hodge_exponent_multiset(k: Sequence[int]) -> list[int]:
    """Sorted multiset {(k0 - ki)/2, (k0 + ki - 2)/2 : i}."""
    return sorted(x for pair in hodge_pairs(k) for x in pair)


def _rotate(digits: tuple[int, ...], s: int) -> tuple[int, ...]:
    # multiplying the exponent by l^s moves digit i to position i + s
    n = len(digits)
    return tuple(digits[(i - s) % n] for i in range(n))


def _period(digits: tuple[int, ...]) -> int:
    n = len(digits)
    for p in range(1, n + 1):
        if n % p == 0 and _rotate(digits, p) == digits:
            return p
    return n


def format_exponent(coeffs: Sequence[str | int]) -> str:
    """Render p_0 + p_1 l + ... with zero terms dropped."""
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0 or c == "0":
            continue
        c = str(c)
        compound = any(op in c for op in "+−-")
        if i == 0:
            terms.append(c)
            continue
        power = "ℓ" if i == 1 else "ℓ" + str(i).translate(_SUP)
        if c == "1":
            terms.append(power)
        else:
            terms.append(f"({c}){power}" if compound else f"{c}{power}")
    return "+".join(terms)


def _character(level: int, coeffs: Sequence[str | int]) -> str:
    body = format_exponent(coeffs)
    base = _SUB[level]
    if body == "":
        return "1"
    if body == "1":
        return base
    if body.isdigit():
        return base + body.translate(_SUP)
    if body == "ℓ":
        return base + "^ℓ"
    return f"{base}^{{{body}}}"


@dataclass(frozen=True)
class InertialType:
    """Semisimplified tame inertia at one prime v above l.

    ``digits`` holds the two exponents at the natural level (h or 2h) before
    reduction; ``level`` is the minimal fundamental-character level.  A
    non-empty ``family`` marks a symbolic type whose digit at position 0 is a
    parameter ``a`` running over ``family`` (position h then carries k0 - 1 - a).
    """

    level: int
    h: int
    place: str
    digits: tuple[tuple[int, ...], tuple[int, ...]]
    family: tuple[int, ...] = field(default=())

    def exponents(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        c1, c2 = self.digits
        if self.level == 1:
            return tuple(sorted(((c1[0],), (c2[0],))))
        return c1[: self.level], c2[: self.level]

    def instances(self) -> Iterator[InertialType]:
        if not self.family:
            yield self
            return
        c1, _ = self.digits
        K = c1[0] + c1[self.h]
        for a in self.family:
            d1 = list(c1)
            d1[0], d1[self.h] = a, K - a
            d1 = tuple(d1)
            yield InertialType(self.level, self.h, self.place, (d1, _rotate(d1, self.h)))

    def display(self) -> str:
        if self.family:
            c1, _ = self.digits
            K = c1[0] + c1[self.h]
            s1: list[str | int] = list(c1)
            s1[0], s1[self.h] = "a", f"{K}−a"
            s2 = list(_rotate(tuple(range(len(c1))), self.h))
            s2 = [s1[j] for j in s2]
            return f"{_character(self.level, s1)} ⊕ {_character(self.level, s2)}"
        e1, e2 = self.exponents()
        return f"{_character(self.level, e1)} ⊕ {_character(self.level, e2)}"

    def sort_key(self):
        return (self.level, self.exponents(), self.family)

    def __str__(self) -> str:
        return self.display()


def _form_key(c1: tuple[int, ...], c2: tuple[int, ...]):
    return (c1[0] == 0, c1[0], tuple(-x for x in c1[1:]), c2)


def _canonical(c1: tuple[int, ...], c2: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    L = len(c1)
    forms = []
    for s in range(L):
        a, b = _rotate(c1, s), _rotate(c2, s)
        forms += [(a, b), (b, a)]
    return min(forms, key=lambda f: _form_key(*f))


def _make(h: int, place: str, c1: tuple[int, ...], c2: tuple[int, ...]) -> InertialType:
    c1, c2 = _canonical(c1, c2)
    level = max(_period(c1), _period(c2))
    return InertialType(level, h, place, (c1, c2))


def _orbit(t: InertialType) -> set[tuple[int, ...]]:
    c1, c2 = t.digits
    return {_rotate(c, s) for c in (c1, c2) for s in range(len(c1))}


def _split_types(pairs) -> list[InertialType]:
    out = []
    # place v carries the embedding with the widest pair, as in the displays
    order = sorted(range(len(pairs)), key=lambda i: pairs[i][0])
    for n, i in enumerate(order):
        x, y = pairs[i]
        place = "v" + "'" * n
        out.append(_make(1, place, (x,), (y,)))
        out.append(_make(1, place, (x, y), (y, x)))
    return out


def _inert_types(pairs) -> list[InertialType]:
    if len(pairs) != 2:
        raise BadWeight("an inert prime needs a weight vector of length 2")
    (x0, y0), (x1, y1) = pairs
    raw = []
    for (p0, p2), (p1, p3) in product({(x0, y0), (y0, x0)}, {(x1, y1), (y1, x1)}):
        raw.append(_make(2, "v", (p0, p1), (p2, p3)))
        e = (p0, p1, p2, p3)
        raw.append(_make(2, "v", e, _rotate(e, 2)))
    types = _dedupe(raw)
    # fold level-4 types that differ only by swapping the digits at 0 and h
    merged, used = [], set()
    for t in types:
        if t in used:
            continue
        if t.level == 4:
            c1 = t.digits[0]
            K = c1[0] + c1[2]
            partner_digits = (c1[2], c1[1], c1[0], c1[3])
            partner = next(
                (u for u in types if u is not t and u.level == 4 and u not in used and partner_digits in _orbit(u)),
                None,
            )
            if partner is not None:
                used.update({t, partner})
                reps = [d for d in _orbit(t) | _orbit(partner) if d[0] < d[2]]
                rep = min(reps, key=lambda d: _form_key(d, _rotate(d, 2)))
                merged.append(InertialType(4, 2, "v", (rep, _rotate(rep, 2)), (rep[0], K - rep[0])))
                continue
        merged.append(t)
        used.add(t)
    return merged


def _dedupe(types: list[InertialType]) -> list[InertialType]:
    seen, out = set(), []
    for t in types:
        key = (t.level, t.exponents(), t.family)
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out


def enumerate_inertial_types(k: Sequence[int], splitting: str = "either") -> list[InertialType]:
    """Possible tame inertia types for weight k at a prime l unramified in F.

    ``splitting`` is "split", "inert" or "either".  Types are listed by level,
    then exponents.
    """
    pairs = hodge_pairs(k)
    if len(pairs) != 2:
        raise BadWeight("the base field must be quadratic (two weights)")
    if splitting == "split":
        types = _split_types(pairs)
    elif splitting == "inert":
        types = _inert_types(pairs)
    elif splitting == "either":
        types = _split_types(pairs) + _inert_types(pairs)
    else:
        raise ValueError(f"unknown splitting {splitting!r}")
    return sorted(_dedupe(types), key=InertialType.sort_key)
