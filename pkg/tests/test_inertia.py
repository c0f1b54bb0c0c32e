from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hmfimage.inertia import (
    BadWeight,
    enumerate_inertial_types,
    format_exponent,
    hodge_exponent_multiset,
    hodge_pairs,
)

ELL = 1009  # large enough that digits never carry
N4 = ELL**4 - 1


def weights():
    return st.tuples(st.integers(1, 6), st.integers(1, 6), st.integers(0)).map(
        lambda t: (2 * t[0] + t[2], 2 * t[1] + t[2])
    )


def _lift(level, digits):
    # exponent of omega_level written as a power of omega_4
    e = sum(d * ELL**i for i, d in enumerate(digits))
    return e * (N4 // (ELL**level - 1)) % N4


def _frob_class(chars):
    # types are equal up to multiplying every exponent by a power of l
    return min(tuple(sorted(c * ELL**s % N4 for c in chars)) for s in range(4))


def _package_classes(types):
    out = set()
    for t in types:
        for inst in t.instances():
            c1, c2 = inst.digits
            L = len(c1)
            out.add(_frob_class((_lift(L, c1), _lift(L, c2))))
    return out


def _oracle_inert(weight):
    (x0, y0), (x1, y1) = hodge_pairs(weight)
    out = set()
    for (p0, p2), (p1, p3) in product({(x0, y0), (y0, x0)}, {(x1, y1), (y1, x1)}):
        out.add(_frob_class((_lift(2, (p0, p1)), _lift(2, (p2, p3)))))
        e = _lift(4, (p0, p1, p2, p3))
        out.add(_frob_class((e, e * ELL**2 % N4)))
    return out


@given(weights())
def test_inert_types_against_oracle(weight):
    types = enumerate_inertial_types(weight, "inert")
    assert _package_classes(types) == _oracle_inert(weight)
    # each instance is a distinct type
    assert sum(len(list(t.instances())) for t in types) == len(_oracle_inert(weight))


@given(weights())
def test_split_types_against_oracle(weight):
    types = enumerate_inertial_types(weight, "split")
    expected = set()
    for x, y in hodge_pairs(weight):
        expected.add(_frob_class((_lift(1, (x,)), _lift(1, (y,)))))
        expected.add(_frob_class((_lift(2, (x, y)), _lift(2, (y, x)))))
    assert _package_classes(types) == expected


@given(weights())
def test_digits_come_from_hodge_pairs(weight):
    pairs = sorted(tuple(sorted(p)) for p in hodge_pairs(weight))
    for t in enumerate_inertial_types(weight, "inert"):
        for inst in t.instances():
            c1, c2 = inst.digits
            got = sorted(tuple(sorted((c1[i], c2[i]))) for i in range(2))
            assert got == pairs


@given(weights())
def test_listing_is_sorted_and_levels_minimal(weight):
    types = enumerate_inertial_types(weight, "either")
    keys = [t.sort_key() for t in types]
    assert keys == sorted(keys)
    for t in types:
        for c in t.digits:
            L = len(c)
            # the level is the least period of the digit strings
            assert all(c[i] == c[(i + t.level) % L] for i in range(L))


def test_known_displays():
    show = lambda k, s: [t.display() for t in enumerate_inertial_types(k, s)]  # noqa: E731
    assert show((2, 4), "split") == ["1 ⊕ ω³", "ω ⊕ ω²", "ω₂^{1+2ℓ} ⊕ ω₂^{2+ℓ}", "ω₂³ ⊕ ω₂^{3ℓ}"]
    assert show((2, 4), "inert") == [
        "ω₂ ⊕ ω₂^{2+3ℓ}",
        "ω₂^{1+3ℓ} ⊕ ω₂²",
        "ω₄^{a+3ℓ+(3−a)ℓ²} ⊕ ω₄^{3−a+aℓ²+3ℓ³}",
    ]
    assert show((2, 2), "either") == ["1 ⊕ ω", "ω₂ ⊕ ω₂^ℓ", "ω₄^{1+ℓ} ⊕ ω₄^{ℓ²+ℓ³}"]


def test_family_parameter():
    fam = [t for t in enumerate_inertial_types((2, 4), "inert") if t.family]
    assert len(fam) == 1 and fam[0].family == (1, 2)
    assert len(list(fam[0].instances())) == 2


def test_hodge_multisets():
    assert hodge_exponent_multiset((2, 4)) == [0, 1, 2, 3]
    assert hodge_exponent_multiset((2, 2)) == [0, 0, 1, 1]
    assert hodge_exponent_multiset((2,)) == [0, 1]


@pytest.mark.parametrize("k", [(), (1, 3), (2, 3), (0, 2)])
def test_bad_weights(k):
    with pytest.raises(BadWeight):
        hodge_pairs(k)


def test_bad_weight_length_for_types():
    with pytest.raises(BadWeight):
        enumerate_inertial_types((2, 2, 2))
    with pytest.raises(ValueError):
        enumerate_inertial_types((2, 2), "ramified")


def test_format_exponent():
    assert format_exponent([1, 0, 2]) == "1+2ℓ²"
    assert format_exponent(["a", 3, "3−a"]) == "a+3ℓ+(3−a)ℓ²"
    assert format_exponent([0, 1]) == "ℓ"
