from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import euler_legendre, naive_is_prime, trial_factor

from hmfimage.arith import (
    factorint,
    is_fundamental_discriminant,
    is_prime,
    is_squarefree,
    kronecker_symbol,
    least_nonresidue,
    multiplicative_order,
    primes_below,
    sqrt_mod,
    squarefree_part,
)

odd_primes = st.sampled_from([p for p in range(3, 2000) if naive_is_prime(p)])


@given(st.integers(-10**6, 10**6), odd_primes)
def test_kronecker_matches_euler_criterion(a, p):
    assert kronecker_symbol(a, p) == euler_legendre(a, p)


@given(st.integers(-500, 500), st.integers(1, 500), st.integers(1, 500))
def test_kronecker_multiplicative_in_denominator(a, m, n):
    assert kronecker_symbol(a, m * n) == kronecker_symbol(a, m) * kronecker_symbol(a, n)


def test_kronecker_at_two():
    # (a|2) depends on a mod 8
    assert [kronecker_symbol(a, 2) for a in (1, 3, 5, 7, 4)] == [1, -1, -1, 1, 0]


@given(st.integers(2, 10**5))
def test_is_prime_small(n):
    assert is_prime(n) == naive_is_prime(n)


@pytest.mark.parametrize("n", [2**61 - 1, 2**89 - 1, 10**18 + 9])
def test_is_prime_large(n):
    assert is_prime(n)


@given(st.integers(1, 10**9))
def test_factorint_matches_trial_division(n):
    assert factorint(n) == trial_factor(n)


@given(st.lists(st.sampled_from([2**31 - 1, 1000003, 998244353, 65537, 3, 7]), min_size=1, max_size=4))
def test_factorint_products_of_large_primes(ps):
    n = prod(ps)
    f = factorint(n)
    assert prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


@given(odd_primes, st.integers(0, 10**6))
def test_sqrt_mod(p, a):
    r = sqrt_mod(a, p)
    if euler_legendre(a, p) == -1:
        assert r is None
    else:
        assert r is not None and (r * r - a) % p == 0


@given(odd_primes)
def test_least_nonresidue(p):
    r = least_nonresidue(p)
    assert euler_legendre(r, p) == -1
    assert all(euler_legendre(x, p) == 1 for x in range(1, r))


@given(st.integers(1, 10**6))
def test_squarefree_part(n):
    m, f = squarefree_part(n)
    assert m * f * f == n and is_squarefree(m)


@pytest.mark.parametrize("d,expected", [(5, True), (8, True), (12, True), (24, True), (257, True), (4, False), (9, False), (20, False), (3, False)])
def test_fundamental_discriminants(d, expected):
    assert is_fundamental_discriminant(d) == expected


def test_primes_below_is_strict():
    assert primes_below(12) == [2, 3, 5, 7, 11]
    assert primes_below(11) == [2, 3, 5, 7]


@given(odd_primes, st.integers(2, 10**6))
def test_multiplicative_order_mod_p(p, g):
    if g % p == 0:
        return
    mul = lambda a, b: a * b % p  # noqa: E731
    k = multiplicative_order(g % p, 1, mul, p - 1)
    assert pow(g, k, p) == 1
    assert all(pow(g, k // q, p) != 1 for q in trial_factor(k))
