import pytest

from proofbench.orderings import (
    BelowOrd,
    FinOrd,
    LexOrd,
    RevOrd,
    SumOrd,
    TableOrd,
    UnsupportedRankError,
    check_lo,
    element_of_rank,
    embed_search,
    field_elements,
    in_field,
    less,
    ord_code,
    ord_decode,
    otyp,
    pair_code,
    parse_spec,
    rank,
    rankable,
    search_descending,
    segment_member,
    spec_text,
    unpair_code,
)
from proofbench.ordinals import compare, from_int, parse
from proofbench.verdict import Verdict

P = parse
W = P("w")
W2 = P("w^2")
W3 = P("w^3")


def code(s: str) -> int:
    return ord_code(P(s))


def test_codes_round_trip_and_are_shortlex():
    for s in ["0", "7", "w", "E", "w+3", "w^2*3+w+5"]:
        assert ord_decode(code(s)) == P(s)
    assert code("9") < code("w") < code("10") < code("99") < code("100")
    assert ord_decode(0) is None
    assert ord_decode(int.from_bytes(b"w*1", "big")) is None


def test_less_and_in_field():
    assert less(FinOrd(5), 2, 4)
    assert not less(FinOrd(5), 4, 4)
    assert not less(FinOrd(5), 2, 7)
    below = BelowOrd(W2)
    assert less(below, code("w+3"), code("w*2"))
    assert not less(below, code("w*2"), code("w+3"))
    assert in_field(below, code("w+3"))
    assert not in_field(below, code("w^2"))
    assert less(RevOrd(BelowOrd(W)), code("7"), code("3"))


def test_rank_examples():
    assert rank(FinOrd(5), 3) == from_int(3)
    assert rank(BelowOrd(W2), code("w+3")) == P("w+3")
    lex = LexOrd(FinOrd(2), BelowOrd(W))
    assert rank(lex, pair_code(1, code("5"))) == P("w+5")
    assert rank(lex, pair_code(0, code("5"))) == from_int(5)


def test_rank_by_enumeration_oracle():
    # in the A-major product the first block is (0, b); sorting a pool by the
    # order relation must match the computed ranks
    lex = LexOrd(FinOrd(2), BelowOrd(W))
    pool = [pair_code(0, code(str(i))) for i in range(100)]
    ordered = sorted(pool, key=lambda n: [less(lex, m, n) for m in pool].count(True))
    for expected_rank, n in enumerate(ordered):
        assert rank(lex, n) == from_int(expected_rank)


def test_sum_rank_and_otyp():
    s = SumOrd(FinOrd(2), BelowOrd(W))
    assert otyp(s) == W  # 2 + w = w
    assert rank(s, 2 * 1) == from_int(1)
    assert rank(s, 2 * code("5") + 1) == from_int(7)
    assert otyp(LexOrd(FinOrd(3), BelowOrd(W))) == P("w*3")
    assert otyp(BelowOrd(W2)) == W2
    assert otyp(TableOrd(frozenset({(4, 7), (4, 9), (7, 9)}))) == from_int(3)


def test_segment_member():
    assert segment_member(FinOrd(5), 3, from_int(4))
    assert not segment_member(FinOrd(5), 3, from_int(3))
    assert segment_member(BelowOrd(W2), code("w"), P("w+1"))
    for n in field_elements(BelowOrd(W2), 200):
        assert segment_member(BelowOrd(W2), n, W2)
        assert segment_member(BelowOrd(W2), n, otyp(BelowOrd(W2)))


def test_rank_matches_less():
    spec = SumOrd(BelowOrd(W), LexOrd(FinOrd(2), FinOrd(3)))
    elems = field_elements(spec, 60)
    for n in elems:
        for m in elems:
            assert less(spec, n, m) == (compare(rank(spec, n), rank(spec, m)).value == -1)


def test_field_elements_below_w():
    first = field_elements(BelowOrd(W), 200)
    assert first == [code(str(i)) for i in range(200)]


def test_element_of_rank_inverts_rank():
    for spec in [FinOrd(6), BelowOrd(W2), SumOrd(FinOrd(2), BelowOrd(W))]:
        for n in field_elements(spec, 40):
            assert element_of_rank(spec, rank(spec, n)) == n
    assert element_of_rank(FinOrd(3), from_int(5)) is None


def test_check_lo():
    assert check_lo(FinOrd(5), 10).verdict is Verdict.TRUE
    bad = check_lo(TableOrd(frozenset({(0, 1), (1, 2), (2, 0)})), 10)
    assert bad.verdict is Verdict.FALSE
    assert bad.violation is not None
    assert check_lo(RevOrd(BelowOrd(W)), 50).verdict is Verdict.TRUE
    for spec in [FinOrd(4), BelowOrd(W2), SumOrd(FinOrd(2), FinOrd(2)), LexOrd(FinOrd(2), FinOrd(2))]:
        assert check_lo(spec, 60).verdict is Verdict.TRUE


def test_search_descending():
    chain = search_descending(RevOrd(BelowOrd(W)), code("0"), 10)
    assert chain == [code(str(i)) for i in range(10)]
    assert search_descending(FinOrd(5), 4, 10) is None
    assert search_descending(BelowOrd(W), code("50"), 10) is None
    cyc = search_descending(TableOrd(frozenset({(0, 1), (1, 2), (2, 0)})), 0, 12)
    assert cyc is not None and len(cyc) == 12
    # reversing a finite order leaves only bounded descent
    assert search_descending(RevOrd(FinOrd(3)), 0, 10) is None
    assert search_descending(RevOrd(FinOrd(3)), 0, 3) == [0, 1, 2]


def test_rank_errors():
    with pytest.raises(UnsupportedRankError):
        rank(RevOrd(BelowOrd(W)), code("3"))
    with pytest.raises(UnsupportedRankError):
        otyp(RevOrd(FinOrd(3)))
    with pytest.raises(UnsupportedRankError):
        rank(FinOrd(3), 7)
    assert not rankable(TableOrd(frozenset({(0, 1), (1, 0)})))


def test_embed_identity_cases():
    r = embed_search(FinOrd(3), 2, FinOrd(5), 64)
    assert r.ok and r.mapping == ((0, 0), (1, 1), (2, 2))
    r = embed_search(FinOrd(3), 2, FinOrd(2), 64)
    assert not r.ok
    # Below into Below: the canonical map is the identity on notations
    r = embed_search(BelowOrd(W2), code("w*2"), BelowOrd(W3), 200)
    assert r.ok
    assert all(x == y for x, y in r.mapping)
    assert any(x == code("w") for x, _ in r.mapping)


def test_embed_respects_order_type():
    assert embed_search(BelowOrd(W2), code("w*2"), BelowOrd(W), 200).ok is False
    # restriction of type w+1 fits into w*2 but not into w
    assert embed_search(BelowOrd(W2), code("w"), BelowOrd(P("w*2")), 200).ok
    assert embed_search(BelowOrd(W2), code("w"), BelowOrd(W), 200).ok is False


def test_embed_into_reversed_order():
    r = embed_search(FinOrd(5), 4, RevOrd(BelowOrd(W)), 64)
    assert r.ok
    mapped = [img for _, img in r.mapping]
    for a, b in zip(mapped, mapped[1:]):
        assert less(RevOrd(BelowOrd(W)), a, b)


def test_pairing_round_trip():
    for a in range(25):
        for b in range(25):
            assert unpair_code(pair_code(a, b)) == (a, b)


def test_spec_sexp_round_trip():
    specs = [
        FinOrd(5),
        BelowOrd(W2),
        SumOrd(FinOrd(2), BelowOrd(W)),
        LexOrd(FinOrd(3), BelowOrd(W)),
        RevOrd(BelowOrd(W)),
        TableOrd(frozenset({(0, 1), (1, 2), (0, 2)})),
    ]
    for s in specs:
        assert parse_spec(spec_text(s)) == s
    assert spec_text(BelowOrd(W2)) == '(below "w^2")'
