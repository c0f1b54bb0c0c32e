"""Exact arithmetic in real quadratic fields Q(sqrt m).

Elements are stored as (x + y*sqrt(m))/2 with integers x, y.  For integral
elements x = y (mod 2) when m = 1 (mod 4) and x, y are both even otherwise;
other integer pairs are allowed but represent non-integral values (denominator 2).
Ideals are Z-lattices in the basis (1, w), w = (1+sqrt m)/2 or sqrt m, kept in the
normal presentation c*(aZ + (b+w)Z).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .arith import factorint, is_prime, is_squarefree, kronecker_symbol, sqrt_mod
from .residue import (
    FFElem,
    NonIntegralResidue,
    prime_field,
    quadratic_field,
    sqrt_of_disc,
)


class Splitting(str, enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"

    def __str__(self) -> str:
        return self.value


def sign_of(x: int, y: int, m: int) -> int:
    """Exact sign of x + y*sqrt(m)."""
    sx = (x > 0) - (x < 0)
    sy = (y > 0) - (y < 0)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    return sx if x * x > m * y * y else sy


@dataclass(frozen=True)
class QuadField:
    m: int

    def __post_init__(self):
        if self.m <= 1 or not is_squarefree(self.m):
            raise ValueError(f"m = {self.m} must be a squarefree integer > 1")

    @classmethod
    def from_disc(cls, disc: int) -> QuadField:
        m = disc if disc % 4 == 1 else disc // 4
        K = cls(m)
        if K.disc != disc:
            raise ValueError(f"{disc} is not a fundamental discriminant")
        return K

    @property
    def disc(self) -> int:
        return self.m if self.m % 4 == 1 else 4 * self.m

    @property
    def half_omega(self) -> bool:
        """True when the integral basis uses w = (1+sqrt m)/2."""
        return self.m % 4 == 1

    def __call__(self, x: int, y: int = 0) -> QFElem:
        return QFElem(self, x, y)

    def from_int(self, n: int) -> QFElem:
        return QFElem(self, 2 * n, 0)

    def from_coords(self, u: int, v: int) -> QFElem:
        """u + v*w."""
        if self.half_omega:
            return QFElem(self, 2 * u + v, v)
        return QFElem(self, 2 * u, 2 * v)

    @property
    def sqrt_m(self) -> QFElem:
        return QFElem(self, 0, 2)

    @property
    def omega(self) -> QFElem:
        return self.from_coords(0, 1)

    def one(self) -> QFElem:
        return self.from_int(1)

    def zero(self) -> QFElem:
        return self.from_int(0)

    def __str__(self) -> str:
        return f"Q(sqrt {self.m})"


@dataclass(frozen=True)
class QFElem:
    field: QuadField
    x: int
    y: int

    def _check(self, other) -> QFElem:
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, QFElem):
            return NotImplemented
        if other.field != self.field:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return QFElem(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QFElem(self.field, -self.x, -self.y)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return QFElem(self.field, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        m = self.field.m
        X = self.x * o.x + m * self.y * o.y
        Y = self.x * o.y + self.y * o.x
        if X % 2 or Y % 2:
            raise ValueError("product leaves the half-integral lattice")
        return QFElem(self.field, X // 2, Y // 2)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QFElem:
        if e < 0:
            return self.unit_inverse() ** (-e)
        acc, base = self.field.one(), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def conj(self) -> QFElem:
        return QFElem(self.field, self.x, -self.y)

    def norm(self) -> int | Fraction:
        n = self.x * self.x - self.field.m * self.y * self.y
        return n // 4 if n % 4 == 0 else Fraction(n, 4)

    def trace(self) -> int:
        return self.x

    def is_integral(self) -> bool:
        if self.field.half_omega:
            return (self.x - self.y) % 2 == 0
        return self.x % 2 == 0 and self.y % 2 == 0

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def unit_inverse(self) -> QFElem:
        n = self.norm()
        if abs(n) != 1:
            raise ValueError(f"{self} is not a unit")
        return self.conj() * n

    def exact_div(self, other: QFElem | int) -> QFElem:
        """self/other, which must be integral."""
        o = self._check(other)
        n = o.norm()
        num = self * o.conj()
        if num.x % n or num.y % n:
            raise ValueError(f"{other} does not divide {self}")
        return QFElem(self.field, num.x // n, num.y // n)

    def coords(self) -> tuple[int, int]:
        """(u, v) with self = u + v*w; requires integrality."""
        if not self.is_integral():
            raise NonIntegralResidue(f"{self} is not integral")
        if self.field.half_omega:
            return (self.x - self.y) // 2, self.y
        return self.x // 2, self.y // 2

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def signs(self) -> tuple[int, int]:
        """Signs at the embeddings sqrt m -> +sqrt m and sqrt m -> -sqrt m."""
        m = self.field.m
        return sign_of(self.x, self.y, m), sign_of(self.x, -self.y, m)

    def is_totally_positive(self) -> bool:
        return self.signs() == (1, 1)

    def embeddings(self) -> tuple[float, float]:
        r = math.sqrt(self.field.m)
        return (self.x + self.y * r) / 2, (self.x - self.y * r) / 2

    def __str__(self) -> str:
        return f"({self.x}{self.y:+d}*s)/2"

    __repr__ = __str__


# -- unit group ---------------------------------------------------------------


@lru_cache(maxsize=None)
def fundamental_unit(K: QuadField) -> QFElem:
    """The unit eps > 1 generating O^x / {+-1}, from the continued fraction of w."""
    m = K.m
    s = isqrt(m)
    # w = (P + sqrt m)/Q with Q | m - P^2
    P, Q = (1, 2) if K.half_omega else (0, 1)
    tr_w, nm_w = (1, (1 - m) // 4) if K.half_omega else (0, -m)
    a = (P + s) // Q
    p_prev, p_cur = 1, a
    q_prev, q_cur = 0, 1
    while True:
        n = p_cur * p_cur - p_cur * q_cur * tr_w + q_cur * q_cur * nm_w
        if abs(n) == 1:
            # p - q*w' > 1
            return _unit_from_convergent(K, p_cur, q_cur)
        P = a * Q - P
        Q = (m - P * P) // Q
        a = (P + s) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev


def _unit_from_convergent(K: QuadField, p: int, q: int) -> QFElem:
    w_conj = K.omega.conj()
    return K.from_int(p) - w_conj * q


def unit_group_generators(K: QuadField) -> tuple[QFElem, QFElem]:
    return K.from_int(-1), fundamental_unit(K)


# -- prime splitting ------------------------------------------------------------


def splitting_type(p: int, K: QuadField) -> Splitting:
    if K.disc % p == 0:
        return Splitting.RAMIFIED
    return Splitting.SPLIT if kronecker_symbol(K.disc, p) == 1 else Splitting.INERT


# -- ideals -----------------------------------------------------------------------


def _hnf(vectors) -> tuple[int, int, int]:
    """HNF basis (A, 0), (B, C) of the Z-lattice spanned by (u, v) vectors."""
    A = 0
    u0, C = 0, 0
    for u, v in vectors:
        if v == 0:
            A = gcd(A, u)
            continue
        if C == 0:
            u0, C = u, v
            continue
        g, s, t = _xgcd(C, v)
        new = (s * u0 + t * u, g)
        kill = (v // g) * u0 - (C // g) * u
        A = gcd(A, kill)
        u0, C = new
    if C < 0:
        u0, C = -u0, -C
    if A == 0 or C == 0:
        raise ValueError("lattice is not of full rank")
    return A, u0 % A, C


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class QFIdeal:
    """Nonzero ideal c*(aZ + (b+w)Z) of the maximal order."""

    field: QuadField
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or not 0 <= self.b < self.a:
            raise ValueError(f"bad normal presentation ({self.a}, {self.b}, {self.c})")
        if _form_norm(self.field, self.b) % self.a:
            raise ValueError(f"{self.a} does not divide Nm({self.b}+w)")

    @classmethod
    def from_generators(cls, K: QuadField, gens) -> QFIdeal:
        vecs = []
        w = K.omega
        for g in gens:
            if isinstance(g, int):
                g = K.from_int(g)
            if g.is_zero():
                continue
            vecs.append(g.coords())
            vecs.append((g * w).coords())
        if not vecs:
            raise ValueError("the zero ideal has no normal presentation")
        A, B, C = _hnf(vecs)
        return cls(K, A // C, B // C, C)

    @classmethod
    def principal(cls, g: QFElem) -> QFIdeal:
        return cls.from_generators(g.field, [g])

    @classmethod
    def unit(cls, K: QuadField) -> QFIdeal:
        return cls(K, 1, 0, 1)

    @property
    def norm(self) -> int:
        return self.a * self.c * self.c

    def basis(self) -> tuple[QFElem, QFElem]:
        K = self.field
        return K.from_coords(self.c * self.a, 0), K.from_coords(self.c * self.b, self.c)

    def contains(self, x: QFElem | int) -> bool:
        if isinstance(x, int):
            x = self.field.from_int(x)
        if not x.is_integral():
            return False
        u, v = x.coords()
        A, B, C = self.c * self.a, self.c * self.b, self.c
        if v % C:
            return False
        return (u - (v // C) * B) % A == 0

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def reduce(self, x: QFElem) -> tuple[int, int]:
        """Canonical representative coordinates of x modulo the ideal."""
        u, v = x.coords()
        A, B, C = self.c * self.a, self.c * self.b, self.c
        k = v // C
        return (u - k * B) % A, v - k * C

    def is_subset_of(self, other: QFIdeal) -> bool:
        return all(other.contains(g) for g in self.basis())

    def __mul__(self, other):
        if isinstance(other, (int, QFElem)):
            other = QFIdeal.principal(other if isinstance(other, QFElem) else self.field.from_int(other))
        prods = [x * y for x in self.basis() for y in other.basis()]
        return QFIdeal.from_generators(self.field, prods)

    __rmul__ = __mul__

    def __add__(self, other: QFIdeal) -> QFIdeal:
        return QFIdeal.from_generators(self.field, [*self.basis(), *other.basis()])

    def conj(self) -> QFIdeal:
        return QFIdeal.from_generators(self.field, [g.conj() for g in self.basis()])

    def exact_div(self, n: int) -> QFIdeal:
        gens = []
        for g in self.basis():
            if g.x % n or g.y % n:
                raise ValueError(f"{n} does not divide the ideal")
            gens.append(QFElem(self.field, g.x // n, g.y // n))
        return QFIdeal.from_generators(self.field, gens)

    def is_unit_ideal(self) -> bool:
        return self.norm == 1

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}+w; {self.c}]"

    __repr__ = __str__


def _form_norm(K: QuadField, b: int) -> int:
    """Nm(b + w)."""
    if K.half_omega:
        return b * b + b + (1 - K.m) // 4
    return b * b - K.m


def primes_above(p: int, K: QuadField) -> list[QFIdeal]:
    """Prime ideals above p; split primes come in the order [A, B]."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    st = splitting_type(p, K)
    if st is Splitting.INERT:
        return [QFIdeal(K, 1, 0, p)]
    if p == 2:
        roots = [r for r in range(p) if _form_norm(K, r) % p == 0]
        ideals = [QFIdeal(K, p, r, 1) for r in roots]
        return ideals[:1] if st is Splitting.RAMIFIED else ideals
    D = K.disc
    sqrt_d = K.sqrt_m if D == K.m else K.sqrt_m * 2
    if st is Splitting.RAMIFIED:
        return [QFIdeal.from_generators(K, [p, sqrt_d])]
    t = sqrt_mod(D, p)
    return [
        QFIdeal.from_generators(K, [p, sqrt_d - t]),
        QFIdeal.from_generators(K, [p, sqrt_d + t]),
    ]


def prime_labels(p: int, K: QuadField) -> dict[str, QFIdeal]:
    ideals = primes_above(p, K)
    st = splitting_type(p, K)
    if st is Splitting.SPLIT:
        return {"split:A": ideals[0], "split:B": ideals[1]}
    return {str(st): ideals[0]}


def valuation(I: QFIdeal, P: QFIdeal, p: int) -> int:
    """Exponent of the prime P (above p) in I."""
    v = 0
    Pbar = P.conj()
    inert = P.norm == p * p
    while I.is_subset_of(P):
        I = I.exact_div(p) if inert else (I * Pbar).exact_div(p)
        v += 1
    return v


def factor_ideal(I: QFIdeal) -> list[tuple[QFIdeal, int, int]]:
    """[(P, p, e)] with I = prod P^e."""
    out = []
    for p in factorint(I.norm):
        for P in primes_above(p, I.field):
            e = valuation(I, P, p)
            if e:
                out.append((P, p, e))
    return out


def unit_group_mod_order(M: QFIdeal) -> int:
    """|(O/M)^x|."""
    n = 1
    for P, _, e in factor_ideal(M):
        N = P.norm
        n *= N ** (e - 1) * (N - 1)
    return n


def _residue_ring_ops(M: QFIdeal):
    K = M.field

    def mul(a, b):
        return M.reduce(K.from_coords(*a) * K.from_coords(*b))

    return mul


def unit_order_mod(u: QFElem, M: QFIdeal) -> int:
    """Multiplicative order of u in (O/M)^x."""
    from .arith import multiplicative_order

    if M.is_unit_ideal():
        return 1
    mul = _residue_ring_ops(M)
    one = M.reduce(M.field.one())
    return multiplicative_order(M.reduce(u), one, mul, unit_group_mod_order(M))


def power_mod(u: QFElem, e: int, M: QFIdeal) -> tuple[int, int]:
    mul = _residue_ring_ops(M)
    acc, base = M.reduce(M.field.one()), M.reduce(u)
    while e:
        if e & 1:
            acc = mul(acc, base)
        base = mul(base, base)
        e >>= 1
    return acc


def congruent_mod(x: QFElem, y: QFElem, M: QFIdeal) -> bool:
    return M.contains(x - y)


def residue_reduce(x: QFElem, P: QFIdeal) -> FFElem:
    """Image of x in O/P (F_p or F_{p^2})."""
    K = P.field
    if P.a == 1:
        # inert prime (p)
        p = P.c
        if p == 2:
            raise ValueError("F_4 residues are not supported")
        root = sqrt_of_disc(K.disc, p)
        sqrt_m = root if K.disc == K.m else root / 2
        return (sqrt_m * x.y + x.x) / 2
    p = P.a
    F = prime_field(p)
    w = F(-P.b)
    if p == 2:
        if not x.is_integral():
            raise NonIntegralResidue(f"{x} is not integral at 2")
        u, v = x.coords()
        return F(u) + w * v
    sqrt_m = (2 * w - 1) if K.half_omega else w
    return (sqrt_m * x.y + x.x) / 2


def element_ideal_gcd_norm(x: QFElem, y: QFElem) -> int:
    """Norm of the ideal (x, y)."""
    return QFIdeal.from_generators(x.field, [x, y]).norm


def mod4_square_solvable(beta: QFElem, K: QuadField | None = None) -> bool:
    """Whether u^2 = beta (mod 4) has a solution u in O/4."""
    K = K or beta.field
    four = QFIdeal(K, 1, 0, 4)
    target = four.reduce(beta)
    for u0 in range(4):
        for u1 in range(4):
            u = K.from_coords(u0, u1)
            if four.reduce(u * u) == target:
                return True
    return False


# -- indefinite binary quadratic forms --------------------------------------------


@dataclass(frozen=True)
class IndefiniteForm:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        D = self.disc
        s = isqrt(D)
        a2, b = 2 * abs(self.A), self.B
        if not 0 < b <= s:
            return False
        # sqrt(D) - b < 2|A|  and  2|A| < sqrt(D) + b
        lo = (a2 + b) ** 2 > D
        hi = a2 - b <= 0 or (a2 - b) ** 2 < D
        return lo and hi

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def transform(self, M) -> IndefiniteForm:
        (p, q), (r, s) = M
        return IndefiniteForm(
            self(p, r),
            2 * self.A * p * q + self.B * (p * s + q * r) + 2 * self.C * r * s,
            self(q, s),
        )

    def rho(self) -> tuple[IndefiniteForm, tuple]:
        """One reduction step and its transformation matrix [[0,-1],[1,t]]."""
        D = self.disc
        s = isqrt(D)
        c = self.C
        ac = abs(c)
        if ac > s:
            r = (-self.B) % (2 * ac)
            b2 = r - 2 * ac if r > ac else r
        else:
            b2 = s - ((s + self.B) % (2 * ac))
        t = (b2 + self.B) // (2 * c)
        M = ((0, -1), (1, t))
        return self.transform(M), M

    def reduced(self) -> tuple[IndefiniteForm, tuple]:
        f, M = self, ((1, 0), (0, 1))
        guard = 0
        while not f.is_reduced():
            f, S = f.rho()
            M = _matmul(M, S)
            guard += 1
            if guard > 10000:
                raise ArithmeticError(f"reduction of {self} did not terminate")
        return f, M

    def cycle(self) -> list[tuple[IndefiniteForm, tuple]]:
        """The cycle of a reduced form with cumulative transformation matrices."""
        if not self.is_reduced():
            raise ValueError("cycle() needs a reduced form")
        out = [(self, ((1, 0), (0, 1)))]
        f, M = self, ((1, 0), (0, 1))
        while True:
            f, S = f.rho()
            M = _matmul(M, S)
            if f == self:
                return out
            out.append((f, M))


def _matmul(M, N):
    (a, b), (c, d) = M
    (e, f), (g, h) = N
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def reduced_forms(D: int) -> list[IndefiniteForm]:
    """All reduced primitive forms of discriminant D > 0 (non-square)."""
    s = isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        n = -ac
        for a in range(1, isqrt(n) + 1) if n > 0 else []:
            if n % a:
                continue
            for A in {a, n // a}:
                for sA in (A, -A):
                    f = IndefiniteForm(sA, b, ac // sA)
                    if f.is_reduced() and gcd(gcd(f.A, f.B), f.C) == 1 and f not in out:
                        out.append(f)
    return sorted(out, key=lambda f: (f.A, f.B, f.C))


def form_cycles(D: int) -> list[list[IndefiniteForm]]:
    seen: set = set()
    cycles = []
    for f in reduced_forms(D):
        if f in seen:
            continue
        cyc = [g for g, _ in f.cycle()]
        seen.update(cyc)
        cycles.append(cyc)
    return cycles


def class_numbers(K: QuadField) -> tuple[int, int]:
    """(h, h_plus): wide and narrow class numbers."""
    cycles = form_cycles(K.disc)
    h_plus = len(cycles)
    index = {f: i for i, cyc in enumerate(cycles) for f in cyc}
    orbits = set()
    for i, cyc in enumerate(cycles):
        f = cyc[0]
        j = index[IndefiniteForm(-f.A, f.B, -f.C)]
        orbits.add(frozenset((i, j)))
    return len(orbits), h_plus


def ideal_form(I: QFIdeal) -> IndefiniteForm:
    """Form N(x*a + y*(b+w))/a attached to the primitive part of I."""
    K = I.field
    tr = 2 * I.b + (1 if K.half_omega else 0)
    return IndefiniteForm(I.a, tr, _form_norm(K, I.b) // I.a)


def is_principal(I: QFIdeal) -> QFElem | None:
    """A canonical generator of I when it is principal, else None."""
    K = I.field
    if I.a == 1:
        g = K.from_int(I.c)
    else:
        f, M = ideal_form(I).reduced()
        g = None
        for h, N in f.cycle():
            if abs(h.A) == 1:
                T = _matmul(M, N)
                x, y = T[0][0], T[1][0]
                beta = K.from_coords(I.b, 1)
                g = K.from_int(x * I.a) + beta * y
                break
        if g is None:
            return None
        g = g * I.c
    return canonical_associate(g)


def canonical_associate(g: QFElem) -> QFElem:
    """Among +-eps^k*g pick the one of least |trace| (ties: positive trace, then
    least |y|, then positive y)."""
    K = g.field
    eps = fundamental_unit(K)
    e1, e2 = g.embeddings()
    le = math.log(eps.embeddings()[0])
    k0 = round((math.log(abs(e2)) - math.log(abs(e1))) / (2 * le)) if e1 and e2 else 0
    best = None
    for k in range(k0 - 3, k0 + 4):
        h = g * eps**k
        for cand in (h, -h):
            key = (abs(cand.x), cand.x < 0, abs(cand.y), cand.y < 0)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def generator_label(I: QFIdeal) -> str:
    g = is_principal(I)
    return f"({g})" if g is not None else str(I)


# -- ray class groups -----------------------------------------------------------------


def ray_class_order(K: QuadField, M: QFIdeal, narrow: bool) -> int:
    h, _ = class_numbers(K)
    units_mod = unit_group_mod_order(M) if not M.is_unit_ideal() else 1
    total = h * units_mod * (4 if narrow else 1)
    return total // unit_image_order(K, M, narrow)


def unit_image_order(K: QuadField, M: QFIdeal, narrow: bool) -> int:
    """Order of the image of O^x in (O/M)^x (x signs when narrow)."""
    eps = fundamental_unit(K)
    n = unit_order_mod(eps, M)
    sign_order = 1
    if narrow and eps.signs() != (1, 1):
        sign_order = 2
    n = n * sign_order // gcd(n, sign_order)
    minus_one_trivial = M.contains(2) and not narrow
    if minus_one_trivial:
        return n
    if n % 2 == 0:
        half = eps ** (n // 2)
        if M.contains(half + 1) and (not narrow or half.signs() == (-1, -1)):
            return n
    return 2 * n


__all__ = [
    "IndefiniteForm",
    "QFElem",
    "QFIdeal",
    "QuadField",
    "Splitting",
    "canonical_associate",
    "class_numbers",
    "element_ideal_gcd_norm",
    "factor_ideal",
    "fundamental_unit",
    "is_principal",
    "mod4_square_solvable",
    "prime_labels",
    "primes_above",
    "ray_class_order",
    "residue_reduce",
    "splitting_type",
    "unit_order_mod",
]
