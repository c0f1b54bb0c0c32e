"""Independent reference implementations used as test oracles.

Nothing here imports the algorithms under test; the only shared pieces are the
integer encodings needed to translate inputs and outputs.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import gcd, isqrt

import numpy as np

# -- elementary number theory -------------------------------------------------


def trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def naive_is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def euler_legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def min_poly_root_count(D: int, p: int) -> int:
    """Roots mod p of the minimal polynomial of the integral generator w."""
    if D % 4 == 1:
        coeffs = (1, -1, -(D - 1) // 4)
    else:
        coeffs = (1, 0, -(D // 4))
    return sum(1 for x in range(p) if (coeffs[0] * x * x + coeffs[1] * x + coeffs[2]) % p == 0)


def pell_brute(D: int, bound: int, chunk: int = 1 << 20):
    """Least y in [1, bound] with x^2 - D y^2 = +-4, as (x, y, sign), or None.

    At the least y the sign -4 is preferred (it gives the smaller unit).
    Float square roots only filter candidates; hits are confirmed exactly.
    """
    assert D * bound * bound < 1 << 62
    for start in range(1, bound + 1, chunk):
        y = np.arange(start, min(start + chunk, bound + 1), dtype=np.int64)
        dy2 = D * y * y
        best = None
        for sign in (-1, 1):
            v = dy2 + 4 * sign
            x = np.rint(np.sqrt(v.astype(np.float64))).astype(np.int64)
            for i in np.nonzero(x * x == v)[0]:
                vi = int(v[i])
                if isqrt(vi) ** 2 == vi:
                    cand = (int(y[i]), sign, isqrt(vi))
                    if best is None or cand < best:
                        best = cand
                    break
        if best is not None:
            yy, sign, xx = best
            return xx, yy, sign
    return None


def zagier_reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Forms (a, b, c) of discriminant D with a > 0, c > 0, b > a + c."""
    out = set()
    for delta in range(-isqrt(D), isqrt(D) + 1):
        N = D - delta * delta
        if N <= 0:
            continue
        for u in range(1, isqrt(N) + 1):
            if N % u:
                continue
            v = N // u
            if (u + v) % 2:
                continue
            b, s = (u + v) // 2, (v - u) // 2
            if (s + delta) % 2:
                continue
            a, c = (s + delta) // 2, (s - delta) // 2
            if a > 0 and c > 0 and b > a + c and b * b - 4 * a * c == D:
                out.add((a, b, c))
    return sorted(out)


def zagier_step(f, D):
    a, b, c = f
    n = (b + isqrt(D)) // (2 * c) + 1
    g = (c, 2 * c * n - b, c * n * n - b * n + a)
    assert g[1] > g[0] + g[2] > 0 and g[0] > 0 and g[2] > 0
    return g


def narrow_class_number(D: int) -> int:
    """Number of Zagier cycles of discriminant D (primitive forms)."""
    forms = [f for f in zagier_reduced_forms(D) if gcd(gcd(*f[:2]), f[2]) == 1]
    seen, cycles = set(), 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = zagier_step(g, D)
    return cycles


# -- finite fields GF(p^n) ----------------------------------------------------


def _poly_mod(a, f, p):
    a = list(a)
    n = len(f) - 1
    while len(a) > n:
        c = a.pop()
        if c:
            for i in range(n):
                a[len(a) - n + i] = (a[len(a) - n + i] - c * f[i]) % p
    return a


def _is_irreducible(f, p):
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            # long division of f by g
            r = list(f)
            while len(r) >= len(g):
                c = r[-1]
                shift = len(r) - len(g)
                for i, gi in enumerate(g):
                    r[shift + i] = (r[shift + i] - c * gi) % p
                r.pop()
            if not any(r):
                return False
    return True


class GF:
    """GF(p^n), elements are integers sum c_i p^i over a brute-found modulus."""

    def __init__(self, p: int, n: int):
        self.p, self.n, self.q = p, n, p**n
        for tail in product(range(p), repeat=n):
            f = list(tail) + [1]
            if f[0] and _is_irreducible(f, p):
                self.f = f
                break
        self._mul = {}

    def vec(self, x):
        return [(x // self.p**i) % self.p for i in range(self.n)]

    def num(self, v):
        return sum(c * self.p**i for i, c in enumerate(v))

    def add(self, x, y):
        return self.num([(a + b) % self.p for a, b in zip(self.vec(x), self.vec(y))])

    def neg(self, x):
        return self.num([(-a) % self.p for a in self.vec(x)])

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        key = (x, y) if x <= y else (y, x)
        if key not in self._mul:
            a, b = self.vec(x), self.vec(y)
            prod = [0] * (2 * self.n - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % self.p
            self._mul[key] = self.num(_poly_mod(prod, self.f, self.p))
        return self._mul[key]

    def pow(self, x, e):
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, x)
            x = self.mul(x, x)
            e >>= 1
        return acc

    def inv(self, x):
        assert x
        return self.pow(x, self.q - 2)

    def elements(self):
        return range(self.q)

    def in_subfield(self, x, size):
        return self.pow(x, size) == x


@lru_cache(maxsize=None)
def gf(p: int, n: int) -> GF:
    return GF(p, n)


# -- brute classification of subgroups of GL2(F_q), q <= 9 -----------------------


class Embedding:
    """The encoding of F_q used by the code under test, mapped into GF(l, 2k)."""

    def __init__(self, q: int):
        f = trial_factor(q)
        (self.ell, self.k), = f.items()
        ell, k = self.ell, self.k
        self.q = q
        self.big = gf(ell, 2 * k)
        B = self.big
        if k == 1:
            self.T = None
        elif ell == 2:
            self.T = next(t for t in B.elements() if B.mul(t, t) == B.add(t, 1))
        else:
            r = next(x for x in range(2, ell) if euler_legendre(x, ell) == -1)
            self.T = next(t for t in B.elements() if B.mul(t, t) == r % ell)
        self.img = [self._image(x) for x in range(q)]
        self.back = {v: i for i, v in enumerate(self.img)}

    def _image(self, x: int) -> int:
        if self.k == 1:
            return x
        c0, c1 = x % self.ell, x // self.ell
        return self.big.add(c0, self.big.mul(c1, self.T))

    def matrix(self, code: int):
        q = self.q
        a, b, c, d = code // q**3, code // q**2 % q, code // q % q, code % q
        return tuple(self.img[v] for v in (a, b, c, d))

    def code(self, m) -> int:
        q = self.q
        a, b, c, d = (self.back[v] for v in m)
        return ((a * q + b) * q + c) * q + d


def _mmul(B, x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (
        B.add(B.mul(a, e), B.mul(b, g)),
        B.add(B.mul(a, f), B.mul(b, h)),
        B.add(B.mul(c, e), B.mul(d, g)),
        B.add(B.mul(c, f), B.mul(d, h)),
    )


def _minv(B, x):
    a, b, c, d = x
    det = B.sub(B.mul(a, d), B.mul(b, c))
    di = B.inv(det)
    return (B.mul(d, di), B.mul(B.neg(b), di), B.mul(B.neg(c), di), B.mul(a, di))


def _points(B):
    return ["inf"] + list(B.elements())


def _act(B, m, pt):
    a, b, c, d = m
    x, y = (0, 1) if pt == "inf" else (1, pt)
    nx = B.add(B.mul(a, x), B.mul(b, y))
    ny = B.add(B.mul(c, x), B.mul(d, y))
    return "inf" if nx == 0 else B.mul(ny, B.inv(nx))


def oracle_classify(gen_codes, element_codes, q: int) -> str:
    E = Embedding(q)
    B = E.big
    gens = [E.matrix(c) for c in gen_codes]
    G = set(int(c) for c in element_codes)
    rational = {"inf"} | {E.img[x] for x in range(q)}

    for pt in _points(B):
        if all(_act(B, g, pt) == pt for g in gens):
            return "Reducible"

    glq = [m for m in product(E.img, repeat=4) if B.sub(B.mul(m[0], m[3]), B.mul(m[1], m[2])) != 0]
    up, lo = (1, 1, 0, 1), (1, 0, 1, 1)
    if any(E.code(_mmul(B, _mmul(B, g, up), _minv(B, g))) in G and E.code(_mmul(B, _mmul(B, g, lo), _minv(B, g))) in G for g in glq):
        if E.k == 2:
            full = all(E.code((1, x, 0, 1)) in G and E.code((1, 0, x, 1)) in G for x in E.img)
            if not full:
                prime = set(range(E.ell))

                def in_prime_gl2_up_to_scalar(m):
                    lead = m[0] if m[0] else m[1]
                    s = B.inv(lead)
                    return all(B.mul(v, s) in prime for v in m)

                for g in glq:
                    gi = _minv(B, g)
                    conj = [_mmul(B, _mmul(B, gi, s), g) for s in gens]
                    if all(in_prime_gl2_up_to_scalar(m) for m in conj) and not all(all(v in prime for v in m) for m in conj):
                        return "ScalarExtendedSL2"
        return "ContainsSL2"

    pts = _points(B)
    split = nonsplit = False
    for i, p1 in enumerate(pts):
        for p2 in pts[i + 1:]:
            if all({_act(B, g, p1), _act(B, g, p2)} == {p1, p2} for g in gens):
                if p1 in rational and p2 in rational:
                    split = True
                else:
                    nonsplit = True
    if split:
        return "DihedralSplitCartan"
    if nonsplit:
        return "DihedralNonsplitCartan"

    def normal(m):
        lead = m[0] if m[0] else m[1]
        s = B.inv(lead)
        return tuple(B.mul(v, s) for v in m)

    PG = {normal(E.matrix(c)) for c in G}

    def derived(H):
        H = list(H)
        comms = {normal(_mmul(B, _mmul(B, x, y), _mmul(B, _minv(B, x), _minv(B, y)))) for x in H for y in H}
        closed = set(comms)
        frontier = list(closed)
        while frontier:
            nxt = []
            for x in frontier:
                for y in comms:
                    z = normal(_mmul(B, x, y))
                    if z not in closed:
                        closed.add(z)
                        nxt.append(z)
            frontier = nxt
        return closed

    n = len(PG)
    if n == 60 and len(derived(PG)) == 60:
        return "ExceptionalA5"
    if n == 24:
        D1 = derived(PG)
        if len(D1) == 12 and len(derived(D1)) == 4:
            return "ExceptionalS4"
    if n == 12 and len(derived(PG)) == 4:
        return "ExceptionalA4"
    return "Unclassified"


def oracle_closure(gen_codes, q: int) -> set[int]:
    E = Embedding(q)
    B = E.big
    gens = [E.matrix(c) for c in gen_codes]
    one = (1, 0, 0, 1)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mmul(B, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return {E.code(m) for m in seen}


def count_det_power(ell: int, f: int, m: int) -> int:
    """|{g in GL2(F_{l^f}) : det g in (F_l^x)^m}| by enumerating all matrices."""
    B = gf(ell, f)
    prime_units = [x for x in B.elements() if x and B.in_subfield(x, ell)]
    allowed = {B.pow(x, m) for x in prime_units}
    count = 0
    for a, b, c, d in product(B.elements(), repeat=4):
        if B.sub(B.mul(a, d), B.mul(b, c)) in allowed:
            count += 1
    return count
