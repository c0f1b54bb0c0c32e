"""Explicit subgroups of GL2(F_q), q = l or l^2, and their Dickson type.

Field elements of F_q are encoded as integers 0..q-1: for q = l they are
residues, for q = l^2 the integer c0 + c1*l stands for c0 + c1*t with
t^2 = r, r the least non-residue mod l (t^2 = t + 1 when l = 2).  A matrix
(a, b; c, d) is encoded as ((a*q + b)*q + c)*q + d.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator

import numpy as np

from .arith import factorint, is_prime, least_nonresidue

DEFAULT_CAP = 10**7


class CapExceeded(RuntimeError):
    pass


class NotAGroup(ValueError):
    pass


class UnsupportedParams(ValueError):
    pass


def default_cap() -> int:
    return int(os.environ.get("HMFIMAGE_CAP", DEFAULT_CAP))


# -- small fields -------------------------------------------------------------


def prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if len(f) != 1:
        raise UnsupportedParams(f"q = {q} is not a prime power")
    (ell, k), = f.items()
    if k > 2 or q > 169:
        raise UnsupportedParams(f"q = {q} must be l or l^2 with q <= 169")
    return ell, k


@dataclass(frozen=True)
class FiniteField:
    """F_q with integer-encoded elements and full operation tables."""

    q: int

    @property
    def ell(self) -> int:
        return prime_power(self.q)[0]

    @property
    def degree(self) -> int:
        return prime_power(self.q)[1]


@lru_cache(maxsize=None)
def _tables(q: int):
    ell, k = prime_power(q)
    if k == 1:
        idx = np.arange(q)
        add = (idx[:, None] + idx[None, :]) % q
        mul = (idx[:, None] * idx[None, :]) % q
    else:
        a0, a1 = np.arange(q) % ell, np.arange(q) // ell
        s0 = (a0[:, None] + a0[None, :]) % ell
        s1 = (a1[:, None] + a1[None, :]) % ell
        add = s0 + ell * s1
        p00 = a0[:, None] * a0[None, :]
        p11 = a1[:, None] * a1[None, :]
        cross = a0[:, None] * a1[None, :] + a1[:, None] * a0[None, :]
        if ell == 2:
            # t^2 = t + 1
            m0 = (p00 + p11) % 2
            m1 = (cross + p11) % 2
        else:
            r = least_nonresidue(ell)
            m0 = (p00 + r * p11) % ell
            m1 = cross % ell
        mul = m0 + ell * m1
    add = add.astype(np.int64)
    mul = mul.astype(np.int64)
    neg = np.array([int(np.where(add[x] == 0)[0][0]) for x in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv[x] = int(np.where(mul[x] == 1)[0][0])
    return add, mul, neg, inv


def ff_add(q, x, y):
    return int(_tables(q)[0][x, y])


def ff_mul(q, x, y):
    return int(_tables(q)[1][x, y])


def ff_neg(q, x):
    return int(_tables(q)[2][x])


def ff_inv(q, x):
    if x == 0:
        raise ZeroDivisionError("0 has no inverse")
    return int(_tables(q)[3][x])


def ff_sub(q, x, y):
    return ff_add(q, x, ff_neg(q, y))


def ff_pow(q, x, e):
    acc = 1
    while e:
        if e & 1:
            acc = ff_mul(q, acc, x)
        x = ff_mul(q, x, x)
        e >>= 1
    return acc


@lru_cache(maxsize=None)
def primitive_element(q: int) -> int:
    f = list(factorint(q - 1))
    if q == 2:
        return 1
    for g in range(2, q):
        if all(ff_pow(q, g, (q - 1) // p) != 1 for p in f):
            return g
    return 1


def in_prime_subfield(q: int, x: int) -> bool:
    return x < prime_power(q)[0]


# -- quadratic extension of F_q (for eigenlines) ------------------------------


@lru_cache(maxsize=None)
def _ext_param(q: int) -> tuple[str, int]:
    """F_{q^2} = F_q[u]/(u^2 - n) for odd q, F_q[u]/(u^2 + u + n) for even q."""
    squares = {ff_mul(q, x, x) for x in range(q)}
    if q % 2:
        return "sq", next(x for x in range(1, q) if x not in squares)
    for n in range(1, q):
        if all(ff_add(q, ff_add(q, ff_mul(q, x, x), x), n) != 0 for x in range(q)):
            return "as", n
    raise AssertionError("no irreducible Artin-Schreier polynomial")


@lru_cache(maxsize=None)
def _sqrt_table(q: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in range(q):
        out.setdefault(ff_mul(q, x, x), x)
    return out


class Ext:
    """Elements (x0, x1) = x0 + x1*u of F_{q^2}."""

    def __init__(self, q: int):
        self.q = q
        self.kind, self.n = _ext_param(q)

    def add(self, a, b):
        q = self.q
        return ff_add(q, a[0], b[0]), ff_add(q, a[1], b[1])

    def neg(self, a):
        return ff_neg(self.q, a[0]), ff_neg(self.q, a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        q = self.q
        t = ff_mul(q, a[1], b[1])
        c0 = ff_mul(q, a[0], b[0])
        c1 = ff_add(q, ff_mul(q, a[0], b[1]), ff_mul(q, a[1], b[0]))
        if self.kind == "sq":
            return ff_add(q, c0, ff_mul(q, t, self.n)), c1
        # u^2 = u + n in characteristic 2
        return ff_add(q, c0, ff_mul(q, t, self.n)), ff_add(q, c1, t)

    def pow(self, a, e):
        acc = (1, 0)
        while e:
            if e & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            e >>= 1
        return acc

    def inv(self, a):
        return self.pow(a, self.q * self.q - 2)

    def scalar(self, x):
        return x, 0

    def roots(self, b, c):
        """Roots of X^2 + bX + c in F_{q^2}."""
        q = self.q
        if q % 2:
            ell = prime_power(q)[0]
            half = ff_inv(q, 2 % ell)
            delta = ff_sub(q, ff_mul(q, b, b), ff_mul(q, 4 % ell, c))
            root = _sqrt_table(q).get(delta)
            if root is not None:
                r = (root, 0)
            else:
                r = (0, _sqrt_table(q)[ff_mul(q, delta, ff_inv(q, self.n))])
            mb = (ff_neg(q, b), 0)
            h = (half, 0)
            out = [self.mul(self.add(mb, r), h), self.mul(self.sub(mb, r), h)]
            return out if out[0] != out[1] else out[:1]
        out = []
        for x0 in range(self.q):
            for x1 in range(self.q):
                z = (x0, x1)
                v = self.add(self.add(self.mul(z, z), self.mul(self.scalar(b), z)), self.scalar(c))
                if v == (0, 0):
                    out.append(z)
        return out


# -- GL2 elements -------------------------------------------------------------


@dataclass(frozen=True)
class GL2Elem:
    a: int
    b: int
    c: int
    d: int
    q: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c, self.d):
            if not 0 <= v < self.q:
                raise ValueError(f"entry {v} out of range for q = {self.q}")
        if self.det() == 0:
            raise ValueError("matrix is not invertible")

    def det(self) -> int:
        q = self.q
        return ff_sub(q, ff_mul(q, self.a, self.d), ff_mul(q, self.b, self.c))

    def trace(self) -> int:
        return ff_add(self.q, self.a, self.d)

    def __mul__(self, o: GL2Elem) -> GL2Elem:
        return decode(mat_mul(self.q, encode(self), encode(o)), self.q)

    def code(self) -> int:
        return encode(self)

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c},{self.d}"


def encode(g: GL2Elem) -> int:
    q = g.q
    return ((g.a * q + g.b) * q + g.c) * q + g.d


def decode(code: int, q: int) -> GL2Elem:
    d = code % q
    c = code // q % q
    b = code // (q * q) % q
    a = code // (q * q * q)
    return GL2Elem(a, b, c, d, q)


def _split(codes: np.ndarray, q: int):
    return codes // (q ** 3), codes // (q * q) % q, codes // q % q, codes % q


def _join(a, b, c, d, q):
    return ((a * q + b) * q + c) * q + d


def mat_mul_vec(q: int, codes: np.ndarray, g: int) -> np.ndarray:
    add, mul, _, _ = _tables(q)
    a, b, c, d = _split(codes, q)
    e, f, gg, h = _split(int(g), q)
    na = add[mul[a, e], mul[b, gg]]
    nb = add[mul[a, f], mul[b, h]]
    nc = add[mul[c, e], mul[d, gg]]
    nd = add[mul[c, f], mul[d, h]]
    return _join(na, nb, nc, nd, q)


def mat_mul(q: int, x: int, y: int) -> int:
    return int(mat_mul_vec(q, np.array([x], dtype=np.int64), y)[0])


def identity(q: int) -> int:
    return _join(1, 0, 0, 1, q)


def parse_gens(text: str, q: int) -> list[GL2Elem]:
    """Parse "a,b,c,d;a,b,c,d;..." into matrices over F_q."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        vals = [int(v) for v in part.split(",")]
        if len(vals) != 4:
            raise ValueError(f"matrix {part!r} needs four entries")
        out.append(GL2Elem(*vals, q=q))
    return out


class _Visited:
    def __init__(self, size: int):
        self.bits = np.zeros((size + 7) // 8, dtype=np.uint8)

    def test(self, codes):
        return (self.bits[codes >> 3] >> (codes & 7).astype(np.uint8)) & 1

    def mark(self, codes):
        np.bitwise_or.at(self.bits, codes >> 3, (1 << (codes & 7)).astype(np.uint8))


class ElementSet:
    """A finite set of GL2(F_q) elements held as sorted integer codes."""

    def __init__(self, codes, q: int):
        self.codes = np.unique(np.asarray(codes, dtype=np.int64))
        self.q = q

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, g) -> bool:
        code = encode(g) if isinstance(g, GL2Elem) else int(g)
        i = np.searchsorted(self.codes, code)
        return bool(i < len(self.codes) and self.codes[i] == code)

    def __iter__(self) -> Iterator[GL2Elem]:
        for c in self.codes:
            yield decode(int(c), self.q)

    def contains_all(self, codes: np.ndarray) -> bool:
        i = np.searchsorted(self.codes, codes)
        i = np.minimum(i, len(self.codes) - 1)
        return bool(np.all(self.codes[i] == codes))


def closure(generators: Iterable[GL2Elem], cap: int | None = None, q: int | None = None) -> ElementSet:
    """Subgroup generated by ``generators`` (breadth-first right multiplication)."""
    gens = list(generators)
    if q is None:
        if not gens:
            raise ValueError("q is required when there are no generators")
        q = gens[0].q
    cap = default_cap() if cap is None else cap
    if cap <= 0:
        raise ValueError("cap must be positive")
    gcodes = [encode(g) for g in gens]
    seen = _Visited(q ** 4)
    start = np.array([identity(q)], dtype=np.int64)
    seen.mark(start)
    found = [start]
    total = 1
    frontier = start
    while len(frontier):
        new_parts = []
        for g in gcodes:
            prod = np.unique(mat_mul_vec(q, frontier, g))
            fresh = prod[seen.test(prod) == 0]
            if len(fresh):
                seen.mark(fresh)
                new_parts.append(fresh)
                total += len(fresh)
                if total > cap:
                    raise CapExceeded(f"group exceeds cap {cap}")
        frontier = np.concatenate(new_parts) if new_parts else np.array([], dtype=np.int64)
        if len(frontier):
            found.append(frontier)
    return ElementSet(np.concatenate(found), q)


# -- classification -----------------------------------------------------------


class Tag(str, enum.Enum):
    REDUCIBLE = "Reducible"
    DIHEDRAL_SPLIT = "DihedralSplitCartan"
    DIHEDRAL_NONSPLIT = "DihedralNonsplitCartan"
    A4 = "ExceptionalA4"
    S4 = "ExceptionalS4"
    A5 = "ExceptionalA5"
    CONTAINS_SL2 = "ContainsSL2"
    SCALAR_EXTENDED = "ScalarExtendedSL2"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SubgroupClassification:
    tag: Tag
    order: int
    projective_order: int
    det_order: int

    def __str__(self) -> str:
        return f"{self.tag} order={self.order} projective_order={self.projective_order} det_order={self.det_order}"


_EXCEPTIONAL_COUNTS = {
    Tag.A4: {1: 1, 2: 3, 3: 8},
    Tag.S4: {1: 1, 2: 9, 3: 8, 4: 6},
    Tag.A5: {1: 1, 2: 15, 3: 20, 5: 24},
}


def _as_set(G, q) -> ElementSet:
    if isinstance(G, ElementSet):
        return G
    return ElementSet([encode(g) for g in G], q)


def find_generators(G: ElementSet) -> list[GL2Elem]:
    """A small generating set of G; raises NotAGroup if G is not closed."""
    q = G.q
    if identity(q) not in G:
        raise NotAGroup("identity missing")
    gens: list[GL2Elem] = []
    H = ElementSet([identity(q)], q)
    for code in G.codes:
        if int(code) in H:
            continue
        gens.append(decode(int(code), q))
        H = _closure_within(gens, G)
        if not G.contains_all(H.codes):
            raise NotAGroup("products leave the set")
        if len(H) == len(G):
            return gens
    if len(H) != len(G):
        raise NotAGroup("set is not generated by its elements")
    return gens


def _closure_within(gens, G: ElementSet) -> ElementSet:
    try:
        return closure(gens, cap=len(G), q=G.q)
    except CapExceeded as exc:
        raise NotAGroup("products leave the set") from exc


def _is_scalar(g: GL2Elem) -> bool:
    return g.b == 0 and g.c == 0 and g.a == g.d


def _apply(ext: Ext, g: GL2Elem, pt):
    """Image of a point of P^1(F_{q^2}); points are ("inf",) or z meaning (1, z)."""
    if pt == "inf":
        x, y = (0, 0), (1, 0)
    else:
        x, y = (1, 0), pt
    s = ext.scalar
    nx = ext.add(ext.mul(s(g.a), x), ext.mul(s(g.b), y))
    ny = ext.add(ext.mul(s(g.c), x), ext.mul(s(g.d), y))
    if nx == (0, 0):
        return "inf"
    return ext.mul(ny, ext.inv(nx))


def _fixed_points(ext: Ext, g: GL2Elem) -> list:
    """Eigenlines of g in P^1(F_{q^2})."""
    q = g.q
    pts = []
    # (a + b z) w = c + d z with w = z for a fixed point (1, z): b z^2 + (a - d) z - c = 0
    if g.b == 0:
        pts.append("inf")
        if ff_sub(q, g.a, g.d) != 0:
            pts.append((ff_mul(q, g.c, ff_inv(q, ff_sub(q, g.a, g.d))), 0))
        return pts
    binv = ff_inv(q, g.b)
    return ext.roots(ff_mul(q, ff_sub(q, g.a, g.d), binv), ff_mul(q, ff_neg(q, g.c), binv))


def _is_rational(pt) -> bool:
    return pt == "inf" or pt[1] == 0


def common_eigenline(gens: list[GL2Elem], q: int):
    ext = Ext(q)
    ns = [g for g in gens if not _is_scalar(g)]
    if not ns:
        return "inf"
    for pt in _fixed_points(ext, ns[0]):
        if all(_apply(ext, g, pt) == pt for g in gens):
            return pt
    return None


def _transvection_pair(G: ElementSet):
    """Transvections x, y in G with tr((x-I)(y-I)) = 1, if any."""
    q = G.q
    add, mul, neg, _ = _tables(q)
    a, b, c, d = _split(G.codes, q)
    tr = add[a, d]
    det = add[mul[a, d], neg[mul[b, c]]]
    is_id = (a == 1) & (b == 0) & (c == 0) & (d == 1)
    two = 0 if prime_power(q)[0] == 2 else 2
    mask = (tr == two) & (det == 1) & ~is_id
    if not mask.any():
        return None
    one_neg = neg[1]
    na, nb, nc, nd = add[a[mask], one_neg], b[mask], c[mask], add[d[mask], one_neg]
    for i in range(len(na)):
        t = add[add[mul[na[i], na], mul[nb[i], nc]], add[mul[nc[i], nb], mul[nd[i], nd]]]
        hit = np.nonzero(t == 1)[0]
        if len(hit):
            j = hit[0]
            codes = G.codes[mask]
            return decode(int(codes[i]), q), decode(int(codes[j]), q)
    return None


def _conjugator_for_pair(x: GL2Elem, y: GL2Elem):
    """Basis (v1, v2) with x - I = v1 (x) phi1 and N1 v2 = v1, N2 v1 = v2."""
    q = x.q
    n1 = (ff_sub(q, x.a, 1), x.b, x.c, ff_sub(q, x.d, 1))
    n2 = (ff_sub(q, y.a, 1), y.b, y.c, ff_sub(q, y.d, 1))
    # v1 spans the image of N1
    v1 = (n1[0], n1[2]) if (n1[0], n1[2]) != (0, 0) else (n1[1], n1[3])
    # v2 = N2 v1
    v2 = (ff_add(q, ff_mul(q, n2[0], v1[0]), ff_mul(q, n2[1], v1[1])),
          ff_add(q, ff_mul(q, n2[2], v1[0]), ff_mul(q, n2[3], v1[1])))
    return GL2Elem(v1[0], v2[0], v1[1], v2[1], q)


def _inverse(g: GL2Elem) -> GL2Elem:
    q = g.q
    di = ff_inv(q, g.det())
    return GL2Elem(ff_mul(q, g.d, di), ff_mul(q, ff_neg(q, g.b), di), ff_mul(q, ff_neg(q, g.c), di), ff_mul(q, g.a, di), q)


def _normalize(g: GL2Elem) -> tuple[int, int, int, int]:
    q = g.q
    lead = g.a if g.a else g.b
    s = ff_inv(q, lead)
    return tuple(ff_mul(q, v, s) for v in (g.a, g.b, g.c, g.d))


def _scalar_count(G: ElementSet) -> int:
    a, b, c, d = _split(G.codes, G.q)
    return int(np.count_nonzero((b == 0) & (c == 0) & (a == d)))


def _det_order(G: ElementSet) -> int:
    q = G.q
    add, mul, neg, _ = _tables(q)
    a, b, c, d = _split(G.codes, q)
    return len(np.unique(add[mul[a, d], neg[mul[b, c]]]))


def _sl2_count(G: ElementSet) -> int:
    q = G.q
    add, mul, neg, _ = _tables(q)
    a, b, c, d = _split(G.codes, q)
    return int(np.count_nonzero(add[mul[a, d], neg[mul[b, c]]] == 1))


def _projective_orders(G: ElementSet) -> dict[int, int]:
    proj = {}
    for g in G:
        proj.setdefault(_normalize(g), g)
    counts: dict[int, int] = {}
    for g in proj.values():
        k, h = 1, g
        while not _is_scalar(h):
            h = h * g
            k += 1
        counts[k] = counts.get(k, 0) + 1
    return counts


def _in_gl2_prime_field_up_to_scalar(g: GL2Elem) -> tuple[bool, bool]:
    """(entries in F_l up to a scalar, entries in F_l exactly)."""
    q = g.q
    exact = all(in_prime_subfield(q, v) for v in (g.a, g.b, g.c, g.d))
    lead = g.a if g.a else g.b
    s = ff_inv(q, lead)
    scaled = all(in_prime_subfield(q, ff_mul(q, v, s)) for v in (g.a, g.b, g.c, g.d))
    return scaled, exact


def classify(G, q: int | None = None) -> SubgroupClassification:
    if not isinstance(G, ElementSet):
        G = list(G)
        if q is None:
            q = G[0].q
        G = _as_set(G, q)
    q = G.q
    ell, k = prime_power(q)
    gens = find_generators(G)
    n = len(G)
    scalars = _scalar_count(G)
    proj = n // scalars
    det_order = _det_order(G)

    def result(tag):
        return SubgroupClassification(tag, n, proj, det_order)

    if common_eigenline(gens, q) is not None:
        return result(Tag.REDUCIBLE)

    pair = _transvection_pair(G)
    if pair is not None:
        if k == 2 and _sl2_count(G) != q * (q * q - 1):
            P = _conjugator_for_pair(*pair)
            Pi = _inverse(P)
            flags = [_in_gl2_prime_field_up_to_scalar(Pi * g * P) for g in gens]
            if all(f[0] for f in flags) and not all(f[1] for f in flags):
                return result(Tag.SCALAR_EXTENDED)
        return result(Tag.CONTAINS_SL2)

    ext = Ext(q)
    split_found = nonsplit_found = False
    tried = set()
    for g in G:
        if _is_scalar(g):
            continue
        pts = _fixed_points(ext, g)
        if len(pts) != 2:
            continue
        key = tuple(sorted(map(str, pts)))
        if key in tried:
            continue
        tried.add(key)
        p1, p2 = pts
        if all({_apply(ext, h, p1), _apply(ext, h, p2)} == {p1, p2} for h in gens):
            if _is_rational(p1) and _is_rational(p2):
                split_found = True
                break
            nonsplit_found = True
    if split_found:
        return result(Tag.DIHEDRAL_SPLIT)
    if nonsplit_found:
        return result(Tag.DIHEDRAL_NONSPLIT)

    if proj in (12, 24, 60):
        counts = _projective_orders(G)
        for tag, want in _EXCEPTIONAL_COUNTS.items():
            if counts == want:
                return result(tag)
    raise RuntimeError(f"group of order {n} over F_{q} fits no Dickson case")


# -- shapes -------------------------------------------------------------------


def expected_image_order(ell: int, f: int, m: int) -> int:
    """|{g in GL2(F_{l^f}) : det g in (F_l^x)^m}|."""
    if not is_prime(ell) or ell == 2 or f not in (1, 2) or m < 1:
        raise ValueError("need an odd prime l, f in {1, 2}, m >= 1")
    Q = ell ** f
    return Q * (Q * Q - 1) * (ell - 1) // gcd(m, ell - 1)


def _sl2_gens(q: int) -> list[GL2Elem]:
    ell, k = prime_power(q)
    basis = [1] if k == 1 else [1, ell]
    out = [GL2Elem(1, x, 0, 1, q) for x in basis] + [GL2Elem(1, 0, x, 1, q) for x in basis]
    return out


def construct_shape(kind: str, q: int, m: int = 1) -> list[GL2Elem]:
    """Generators of a named subgroup of GL2(F_q)."""
    ell, k = prime_power(q)
    g = primitive_element(q)
    if kind == "Borel":
        return [GL2Elem(g, 0, 0, 1, q), GL2Elem(1, 0, 0, g, q), GL2Elem(1, 1, 0, 1, q)]
    if kind == "SplitCartanNormalizer":
        if q in (2, 4):
            raise UnsupportedParams(f"split Cartan normalizer over F_{q} is not dihedral type")
        return [GL2Elem(g, 0, 0, 1, q), GL2Elem(1, 0, 0, g, q), GL2Elem(0, 1, 1, 0, q)]
    if kind == "NonsplitCartanNormalizer":
        if q == 2:
            raise UnsupportedParams("nonsplit Cartan normalizer over F_2 is GL2(F_2)")
        ext = Ext(q)
        # multiplication by a generator of F_{q^2}^x on the basis (1, u)
        z = next(
            (x0, x1)
            for x1 in range(1, q)
            for x0 in range(q)
            if _ext_order(ext, (x0, x1)) == q * q - 1
        )
        zu = ext.mul(z, (0, 1))
        mult = GL2Elem(z[0], zu[0], z[1], zu[1], q)
        # Frobenius x -> x^q as a matrix in the same basis
        uq = ext.pow((0, 1), q)
        frob = GL2Elem(1, uq[0], 0, uq[1], q)
        return [mult, frob]
    if kind == "SL2":
        return _sl2_gens(q)
    if kind == "DetPowerSubgroup":
        if ell == 2:
            raise UnsupportedParams("determinant-power shapes need odd l")
        h = ff_pow(q, primitive_element(ell), m)
        return _sl2_gens(q) + [GL2Elem(h, 0, 0, 1, q)]
    if kind == "ScalarExtended":
        if k != 2 or ell == 2:
            raise UnsupportedParams("scalar-extended shapes need q = l^2 with l odd")
        elems = _scalar_extended_elements(ell, m)
        return find_generators(elems)
    raise UnsupportedParams(f"unknown shape {kind!r}")


def _ext_order(ext: Ext, z) -> int:
    n = ext.q * ext.q - 1
    order = n
    for p in factorint(n):
        while order % p == 0 and ext.pow(z, order // p) == (1, 0):
            order //= p
    return order


def _scalar_extended_elements(ell: int, m: int) -> ElementSet:
    """{z*g : z in F_q^x, g in GL2(F_l)} with determinant in (F_l^x)^m, q = l^2."""
    q = ell * ell
    glq = closure([GL2Elem(primitive_element(ell), 0, 0, 1, q)] + embed_prime_gens(q), q=q)
    scal = [GL2Elem(z, 0, 0, z, q) for z in range(1, q)]
    codes = np.unique(np.concatenate([mat_mul_vec(q, glq.codes, encode(s)) for s in scal]))
    S = ElementSet(codes, q)
    add, mul, neg, _ = _tables(q)
    a, b, c, d = _split(S.codes, q)
    dets = add[mul[a, d], neg[mul[b, c]]]
    allowed = {ff_pow(q, x, m) for x in range(1, ell)}
    keep = np.isin(dets, list(allowed))
    return ElementSet(S.codes[keep], q)


def embed_prime_gens(q: int) -> list[GL2Elem]:
    """Generators of SL2(F_l) inside GL2(F_q); F_l is encoded as 0..l-1."""
    return [GL2Elem(1, 1, 0, 1, q), GL2Elem(1, 0, 1, 1, q)]
