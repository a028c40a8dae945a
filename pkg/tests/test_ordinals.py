import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proofbench import cnforacle as oracle
from proofbench.gens import random_ordinal, random_vec_below_w3
from proofbench.ordinals import (
    EPSILON,
    OMEGA,
    ONE,
    ZERO,
    CapExceededError,
    Cmp,
    NotationError,
    add,
    compare,
    from_int,
    mul,
    parse,
    pow2,
    succ,
    text,
)

P = parse


# --- oracle agreement (small slice; the full sweep is acceptance criterion 1)


def test_compare_add_mul_agree_with_vector_oracle():
    vecs = oracle.enumerate_below_w3(2)
    notations = {v: P(oracle.terms_text(oracle.vec_terms(*v))) for v in vecs}
    for va in vecs:
        for vb in vecs:
            ta, tb = oracle.vec_terms(*va), oracle.vec_terms(*vb)
            got = compare(notations[va], notations[vb])
            assert got.value == oracle.cmp_terms(ta, tb)
            assert text(add(notations[va], notations[vb])) == oracle.terms_text(
                oracle.add_terms(ta, tb)
            )
            assert text(mul(notations[va], notations[vb])) == oracle.terms_text(
                oracle.mul_terms(ta, tb)
            )


def test_pow2_agrees_with_recursion_oracle():
    for v in oracle.enumerate_below_w3(3):
        x = P(oracle.terms_text(oracle.vec_terms(*v)))
        assert text(pow2(x)) == oracle.pow2_vec_text(*v)


# --- pinned examples


def test_compare_examples():
    assert compare(P("w+1"), P("w")) is Cmp.GT
    assert compare(P("w^2"), P("w*5+3")) is Cmp.GT
    assert compare(P("E"), P("w^(w^w)")) is Cmp.GT


def test_add_examples():
    a = P("w^2*2+3")
    assert add(a, ZERO) == a and add(ZERO, a) == a
    assert add(ONE, OMEGA) == OMEGA
    assert add(P("w+2"), P("w*3")) == P("w*4")


def test_mul_examples():
    assert mul(from_int(2), OMEGA) == OMEGA
    assert mul(P("w*2"), OMEGA) == P("w^2")
    assert mul(OMEGA, from_int(3)) == P("w*3")


def test_pow2_examples():
    assert pow2(from_int(3)) == from_int(8)
    assert pow2(OMEGA) == OMEGA
    assert pow2(P("w+2")) == P("w*4")
    assert pow2(EPSILON) == EPSILON
    assert pow2(P("w*3+1")) == P("w^3*2")


def test_cap_errors():
    with pytest.raises(CapExceededError):
        mul(EPSILON, OMEGA)
    with pytest.raises(CapExceededError):
        mul(EPSILON, EPSILON)
    with pytest.raises(CapExceededError):
        pow2(P("E+1"))
    with pytest.raises(CapExceededError):
        pow2(P("E*2"))
    # E times a finite is fine and stays below the cap
    assert mul(P("E+1"), from_int(2)) == P("E*2+1")


# --- algebraic properties


def _rand_ordinals(n, seed, allow_e=True):
    rng = random.Random(seed)
    return [random_ordinal(rng, allow_e=allow_e) for _ in range(n)]


def test_add_associative_and_succ_compatible():
    xs = _rand_ordinals(60, 11)
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        assert add(add(a, b), c) == add(a, add(b, c))
        assert add(a, succ(b)) == succ(add(a, b))


def test_mul_associative():
    rng = random.Random(12)
    for _ in range(60):
        a, b, c = (random_ordinal(rng, depth=1, allow_e=False) for _ in range(3))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_right_monotonicity():
    xs = _rand_ordinals(80, 13, allow_e=False)
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        if compare(b, c) is Cmp.LT:
            assert compare(add(a, b), add(a, c)) is Cmp.LT
            if not a.is_zero():
                assert compare(mul(a, b), mul(a, c)) is Cmp.LT


def test_pow2_strictly_monotone():
    xs = _rand_ordinals(120, 14, allow_e=False)
    for a, b in zip(xs, xs[1:]):
        c = compare(a, b)
        if c is Cmp.EQ:
            continue
        lo, hi = (a, b) if c is Cmp.LT else (b, a)
        assert compare(pow2(lo), pow2(hi)) is Cmp.LT
    assert compare(pow2(P("w^2")), pow2(EPSILON)) is Cmp.LT


def test_compare_is_total_order():
    xs = _rand_ordinals(40, 15)
    for a in xs:
        assert compare(a, a) is Cmp.EQ
    for a, b in zip(xs, xs[1:]):
        assert compare(a, b).value == -compare(b, a).value
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        if compare(a, b) is Cmp.LT and compare(b, c) is Cmp.LT:
            assert compare(a, c) is Cmp.LT


# --- text grammar


def test_round_trip_identity():
    rng = random.Random(16)
    for _ in range(300):
        o = random_ordinal(rng, depth=3)
        assert parse(text(o)) == o


def test_examples_print_as_expected():
    assert text(P("w^2*3+w+5")) == "w^2*3+w+5"
    assert text(P("E+1")) == "E+1"
    assert text(P("w^(w+1)*2")) == "w^(w+1)*2"
    assert text(ZERO) == "0"


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "w*1",
        "w^1",
        "w^0",
        "1+1",
        "w+w",
        "w+w^2",
        "05",
        "w^(2)",
        "w^(w)",
        "E+E",
        "w+E",
        "0+1",
        "w*0",
        "w^(E)",
        "w+",
        "(w)",
    ],
)
def test_strict_parser_rejects_noncanonical(bad):
    with pytest.raises(NotationError):
        parse(bad)


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=50)
def test_finite_ordinals_round_trip(n):
    assert parse(str(n)) == from_int(n)
    assert from_int(n).nat_value() == n


def test_pow2_successor_identity_random_vectors():
    rng = random.Random(17)
    for _ in range(100):
        v = random_vec_below_w3(rng)
        a = P(oracle.terms_text(oracle.vec_terms(*v)))
        assert pow2(succ(a)) == mul(pow2(a), from_int(2))
