import pytest

from proofbench.derivations import derive_ti
from proofbench.lab import (
    Claim,
    CulpritReport,
    Evidence,
    LabError,
    TheoryStore,
    WellFoundedUpToBudget,
    build_precT,
    chain_check,
    reflect_check,
    retype,
)
from proofbench.orderings import BelowOrd, FinOrd, RevOrd, TableOrd, field_elements, less, rank
from proofbench.ordinals import lt, parse

P = parse
W, W2, W3 = P("w"), P("w^2"), P("w^3")


def checked(spec):
    return Claim(spec, Evidence.CHECKED, derive_ti(spec))


def asserted(spec):
    return Claim(spec, Evidence.ASSERTED)


def store(name, *claims):
    return TheoryStore(name, tuple(claims))


def test_induced_relation_matches_rank_criterion():
    prec = build_precT(store("t", checked(BelowOrd(W2))), BelowOrd(W3))
    elems = field_elements(BelowOrd(W3), 40)
    for a in elems:
        for b in elems:
            expected = less(BelowOrd(W3), a, b) and lt(rank(BelowOrd(W3), b), W2)
            assert prec.less(a, b) == expected


def test_big_rank_elements_do_not_participate():
    from proofbench.orderings import ord_code

    prec = build_precT(store("t", checked(BelowOrd(W2))), BelowOrd(W3))
    big = ord_code(P("w^2*5"))
    assert not prec.less(ord_code(P("w")), big)
    assert prec.less(ord_code(P("w")), ord_code(P("w*2")))


def test_empty_store_relation_is_empty():
    prec = build_precT(store("empty"), BelowOrd(W))
    for a in field_elements(BelowOrd(W), 10):
        for b in field_elements(BelowOrd(W), 10):
            assert not prec.less(a, b)


def test_fin_claim_restricts_base():
    prec = build_precT(store("t", checked(FinOrd(5))), BelowOrd(W))
    elems = field_elements(BelowOrd(W), 20)
    for b in elems:
        participates = any(prec.less(a, b) for a in elems if a != b)
        assert participates == (0 < rank(BelowOrd(W), b).nat_value() < 5)


def test_retype_examples():
    assert retype(build_precT(store("t", checked(BelowOrd(W)), checked(BelowOrd(W2))),
                              BelowOrd(W3))) == W2
    assert retype(build_precT(store("t", checked(FinOrd(3))), BelowOrd(W))) == P("3")
    assert retype(build_precT(store("t", checked(BelowOrd(W2))), BelowOrd(W))) == W
    assert retype(build_precT(store("empty"), BelowOrd(W))) == P("0")


def test_retype_refuses_asserted():
    prec = build_precT(store("t", checked(FinOrd(2)), asserted(BelowOrd(W))), BelowOrd(W2))
    with pytest.raises(LabError):
        retype(prec)


def test_monotone_in_claims():
    base = BelowOrd(W2)
    small = build_precT(store("t", checked(FinOrd(4))), base)
    big = build_precT(store("t", checked(FinOrd(4)), checked(BelowOrd(W))), base)
    elems = field_elements(base, 25)
    for a in elems:
        for b in elems:
            if small.less(a, b):
                assert big.less(a, b)


def test_reflect_on_certified_store():
    prec = build_precT(store("t", checked(BelowOrd(W))), BelowOrd(W2))
    for budget in (10, 50, 200):
        verdict = reflect_check(prec, budget)
        assert isinstance(verdict, WellFoundedUpToBudget)
        assert verdict.claims_checked == 1


def test_reflect_finds_asserted_reversal():
    bad = asserted(RevOrd(BelowOrd(W)))
    prec = build_precT(store("t", checked(BelowOrd(W)), bad), BelowOrd(W2))
    verdict = reflect_check(prec, 50)
    assert isinstance(verdict, CulpritReport)
    assert verdict.claim_index == 1
    assert verdict.evidence is Evidence.ASSERTED
    assert len(verdict.chain) == 50
    rev = RevOrd(BelowOrd(W))
    for a, b in zip(verdict.chain, verdict.chain[1:]):
        assert less(rev, b, a)


def test_reflect_ignores_true_assertions():
    prec = build_precT(store("t", asserted(BelowOrd(W))), BelowOrd(W2))
    assert isinstance(reflect_check(prec, 50), WellFoundedUpToBudget)


def test_chain_check_descends():
    stores = [
        store("t0", checked(BelowOrd(W2))),
        store("t1", checked(BelowOrd(P("w*2")))),
        store("t2", checked(FinOrd(3))),
    ]
    report = chain_check(stores, BelowOrd(W3))
    assert report.descent_ok
    assert [e.order_type for e in report.entries] == [W2, P("w*2"), P("3")]
    assert report.entries[0].witnessed and report.entries[1].witnessed
    assert report.entries[2].witnessed is None


def test_chain_check_rejects_stalled():
    s = store("t", checked(BelowOrd(W)))
    report = chain_check([s, s], BelowOrd(W2))
    assert not report.descent_ok
    assert report.first_violation == 0


def test_chain_check_finite_descent():
    stores = [store(f"t{k}", checked(FinOrd(k))) for k in (5, 4, 3, 2, 1)]
    report = chain_check(stores, BelowOrd(W))
    assert report.descent_ok
    assert [e.order_type.nat_value() for e in report.entries] == [5, 4, 3, 2, 1]


def test_chain_check_reports_missing_witness():
    # descent holds but t0 has no checked claim covering t1's order type
    stores = [store("t0", checked(FinOrd(3))), store("t1", checked(BelowOrd(W)))]
    report = chain_check(stores, BelowOrd(W2))
    assert not report.descent_ok or report.first_violation == 0
    stores = [store("t0", checked(FinOrd(2))), store("t1", checked(FinOrd(1)))]
    report = chain_check(stores, BelowOrd(W))
    assert report.descent_ok and report.entries[0].witnessed


def test_malformed_table_claims_are_inert():
    cyc = Claim(TableOrd(frozenset({(0, 1), (1, 2), (2, 0)})), Evidence.ASSERTED)
    prec = build_precT(store("t", cyc), BelowOrd(W))
    assert prec.usable == ()
    assert isinstance(reflect_check(prec, 12), WellFoundedUpToBudget)


def test_build_rejects_bad_certificates():
    wrong = Claim(FinOrd(3), Evidence.CHECKED, derive_ti(FinOrd(2)))
    with pytest.raises(LabError):
        build_precT(store("t", wrong), BelowOrd(W))
    with pytest.raises(LabError):
        build_precT(store("t", checked(FinOrd(2))), RevOrd(BelowOrd(W)))
