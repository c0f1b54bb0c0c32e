"""Residue fields F_l and F_{l^2}, reduction of coefficient-field values, and
characteristic-polynomial tests for Frobenius elements."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .arith import (
    factorint,
    is_prime,
    kronecker_symbol,
    least_nonresidue,
    multiplicative_order,
    sqrt_mod,
)


class NonIntegralResidue(ValueError):
    pass


class ZeroDeterminant(ValueError):
    pass


@dataclass(frozen=True)
class ResidueField:
    ell: int
    degree: int = 1
    r: int = 0  # x^2 - r defines the degree-2 model

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.degree not in (1, 2):
            raise ValueError("only degrees 1 and 2 are supported")
        if self.degree == 2 and kronecker_symbol(self.r, self.ell) != -1:
            raise ValueError(f"{self.r} is not a non-residue mod {self.ell}")

    @property
    def q(self) -> int:
        return self.ell**self.degree

    def __call__(self, c0: int, c1: int = 0) -> FFElem:
        return FFElem(self, c0 % self.ell, c1 % self.ell if self.degree == 2 else 0)

    def zero(self) -> FFElem:
        return self(0)

    def one(self) -> FFElem:
        return self(1)

    def gen(self) -> FFElem:
        """The adjoined root t (t^2 = r)."""
        if self.degree != 2:
            raise ValueError("prime field has no adjoined root")
        return self(0, 1)

    def elements(self):
        for c1 in range(self.ell if self.degree == 2 else 1):
            for c0 in range(self.ell):
                yield self(c0, c1)

    def __str__(self) -> str:
        return f"F_{self.q}"


@lru_cache(maxsize=None)
def prime_field(ell: int) -> ResidueField:
    return ResidueField(ell)


@lru_cache(maxsize=None)
def quadratic_field(ell: int) -> ResidueField:
    if ell == 2:
        raise ValueError("characteristic 2 is excluded")
    return ResidueField(ell, 2, least_nonresidue(ell))


@dataclass(frozen=True)
class FFElem:
    field: ResidueField
    c0: int
    c1: int = 0

    def _coerce(self, other) -> FFElem:
        if isinstance(other, FFElem):
            if other.field == self.field:
                return other
            if other.field.ell == self.field.ell and other.field.degree == 1:
                return self.field(other.c0)
            if other.field.ell == self.field.ell and self.field.degree == 1 and other.c1 == 0:
                return self.field(other.c0)
            raise ValueError(f"cannot combine {self.field} and {other.field}")
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    def _lift(self, other) -> tuple[ResidueField, FFElem, FFElem]:
        # pick the larger field when a prime-field value meets a quadratic one
        if isinstance(other, FFElem) and other.field.degree > self.field.degree:
            return other.field, other.field(self.c0), other
        o = self._coerce(other)
        return self.field, self, o

    def __add__(self, other):
        if not isinstance(other, (FFElem, int)):
            return NotImplemented
        F, a, b = self._lift(other)
        return F(a.c0 + b.c0, a.c1 + b.c1)

    __radd__ = __add__

    def __neg__(self):
        return self.field(-self.c0, -self.c1)

    def __sub__(self, other):
        if not isinstance(other, (FFElem, int)):
            return NotImplemented
        F, a, b = self._lift(other)
        return F(a.c0 - b.c0, a.c1 - b.c1)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (FFElem, int)):
            return NotImplemented
        F, a, b = self._lift(other)
        if F.degree == 1:
            return F(a.c0 * b.c0)
        return F(a.c0 * b.c0 + F.r * a.c1 * b.c1, a.c0 * b.c1 + a.c1 * b.c0)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc, base = self.field.one(), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def inverse(self) -> FFElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def in_prime_field(self) -> bool:
        return self.c1 == 0

    def frobenius(self) -> FFElem:
        return self ** self.field.ell

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field(other)
        if not isinstance(other, FFElem) or other.field.ell != self.field.ell:
            return NotImplemented
        return (self.c0, self.c1) == (other.c0, other.c1)

    def __hash__(self):
        return hash((self.field.ell, self.c0, self.c1))

    def __str__(self) -> str:
        if self.field.degree == 1:
            return str(self.c0)
        return f"{self.c0}+{self.c1}*t mod {self.field.ell}"

    __repr__ = __str__

    def sqrt(self) -> FFElem | None:
        """Some square root (lexicographically smallest), or None."""
        if self.is_zero():
            return self
        if not is_square(self):
            return None
        F = self.field
        if F.degree == 1:
            return F(sqrt_mod(self.c0, F.ell))
        if self.c1 == 0:
            s = sqrt_mod(self.c0, F.ell)
            if s is not None:
                return F(s)
            # c0 a non-residue: c0 = r * (c0/r) and c0/r is a residue
            s = sqrt_mod(self.c0 * pow(F.r, -1, F.ell), F.ell)
            return F(0, s)
        roots = [y for y in F.elements() if y * y == self]
        return min(roots, key=lambda y: (y.c0, y.c1))


def is_square(x: FFElem) -> bool:
    if x.is_zero():
        return True
    return x ** ((x.field.q - 1) // 2) == 1


def charpoly_irreducible(c: FFElem, d: FFElem) -> bool:
    """x^2 - c x + d irreducible over the common field (odd characteristic)."""
    if isinstance(d, int):
        d = c.field(d)
    if isinstance(c, int):
        c = d.field(c)
    disc = c * c - 4 * d
    return not disc.is_zero() and not is_square(disc)


@dataclass(frozen=True)
class ProjectiveOrder:
    """Projective order of a Frobenius element; ``value`` None marks the
    double-root case where the order is 1 or ell."""

    value: int | None
    ell: int

    @property
    def ambiguous(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return f"{{1 or {self.ell}}}" if self.value is None else str(self.value)


def projective_frobenius_order(c: FFElem, d: FFElem) -> ProjectiveOrder:
    """Multiplicative order of the ratio of the roots of x^2 - c x + d."""
    if isinstance(d, int):
        d = c.field(d)
    if isinstance(c, int):
        c = d.field(c)
    F = c.field if c.field.degree >= d.field.degree else d.field
    c, d = F.zero() + c, F.zero() + d
    if d.is_zero():
        raise ZeroDeterminant("determinant is zero")
    disc = c * c - 4 * d
    if disc.is_zero():
        return ProjectiveOrder(None, F.ell)
    q = F.q
    # work in R = F[x]/(x^2 - c x + d); u = x^2/d is the ratio of the roots
    dinv = d.inverse()

    def mul(a, b):
        a0, a1 = a
        b0, b1 = b
        # x^2 = c x - d
        t = a1 * b1
        return (a0 * b0 - t * d, a0 * b1 + a1 * b0 + t * c)

    x2 = mul((F.zero(), F.one()), (F.zero(), F.one()))
    u = (x2[0] * dinv, x2[1] * dinv)
    one = (F.one(), F.zero())
    n = q - 1 if is_square(disc) else q + 1
    return ProjectiveOrder(multiplicative_order(u, one, mul, n), F.ell)


def split_congruence_classes(disc: int) -> list[int]:
    """Residues r mod |disc| (coprime to disc) with (disc|r) = 1."""
    n = abs(disc)
    return [r for r in range(1, n) if gcd(r, n) == 1 and kronecker_symbol(disc, r) == 1]


def signed_classes(residues: list[int], modulus: int) -> list[int]:
    """Render a symmetric residue list as the positive halves (±r)."""
    return sorted({min(r, modulus - r) for r in residues})


# -- reduction of coefficient-field values ----------------------------------


def sqrt_of_disc(disc: int, ell: int) -> FFElem:
    """The fixed image of sqrt(disc) in F_ell (split/ramified) or F_{ell^2} (inert):
    least root in F_ell, lexicographically smaller root in the quadratic model."""
    k = kronecker_symbol(disc, ell)
    if k >= 0:
        return prime_field(ell)(sqrt_mod(disc, ell))
    F = quadratic_field(ell)
    return F(disc).sqrt()


def reduce_at(alpha, ell: int, which: str = "A") -> FFElem:
    """Image of an element of O_E under O_E -> O_E/lambda.

    ``which`` selects the prime above a split ell: "A" uses the fixed root
    t of D_E (the prime containing sqrt(D_E) - t), "B" the conjugate.
    """
    if ell == 2:
        raise ValueError("ell = 2 is excluded from residue computations")
    K = alpha.field
    if K.disc % ell == 0 and kronecker_symbol(K.disc, ell) == 0:
        root = prime_field(ell)(0)
    else:
        root = sqrt_of_disc(K.disc, ell)
        if which == "B" and kronecker_symbol(K.disc, ell) == 1:
            root = -root
    # sqrt(m) = sqrt(D)/(1 or 2)
    sqrt_m = root if K.disc == K.m else root / 2
    return _reduce_coords(alpha.x, alpha.y, sqrt_m, ell)


def _reduce_coords(x: int, y: int, sqrt_m: FFElem, ell: int) -> FFElem:
    if ell == 2:
        raise NonIntegralResidue("denominator 2 is not invertible mod 2")
    return (sqrt_m * y + x) / 2


def reduce_rational(n: int, F: ResidueField) -> FFElem:
    return F(n)


def field_for(ell: int, disc: int) -> ResidueField:
    """Residue field of a prime of E=Q(sqrt disc) above ell."""
    return quadratic_field(ell) if kronecker_symbol(disc, ell) == -1 else prime_field(ell)


def primes_of_e_above(ell: int, disc: int) -> list[str]:
    """Labels of the primes lambda of E above ell."""
    return ["A", "B"] if kronecker_symbol(disc, ell) == 1 else ["A"]


__all__ = [
    "FFElem",
    "NonIntegralResidue",
    "ProjectiveOrder",
    "ResidueField",
    "ZeroDeterminant",
    "charpoly_irreducible",
    "field_for",
    "is_square",
    "prime_field",
    "primes_of_e_above",
    "projective_frobenius_order",
    "quadratic_field",
    "reduce_at",
    "split_congruence_classes",
]
