"""Ramification sets, embedding criterion, commensurability, torsion."""

import warnings

import pytest

from orbigap.errors import (
    AlreadyRamified,
    OddRamification,
    RamFEmpty,
    SamePrime,
    UncheckablePlace,
)
from orbigap.numberfield import factor_prime, make_field, prime_from_label
from orbigap.quaternion import (
    OpaquePlace,
    admits_embedding,
    algebra,
    commensurability_class,
    extend_ramification,
    is_division,
    is_kleinian_admissible,
    parse_opaque,
    same_commensurability_class,
    torsion_free_check,
)
from orbigap.splitting import SplitSymbol, make_quadratic_extension, split_symbol


def cubic():
    return make_field("x^3 - 2", -108)


def test_parity_enforced():
    K = cubic()
    P5 = prime_from_label(K, "5:0")
    with pytest.raises(OddRamification):
        algebra(K, real_places=(0,), primes=(P5,), opaque=("dyadic-1",))
    B = algebra(K, real_places=(0,), primes=(P5,))
    assert B.ram.cardinality == 2


def test_kleinian_admissibility():
    K = cubic()
    P5 = prime_from_label(K, "5:0")
    ok, reasons = is_kleinian_admissible(algebra(K, real_places=(0,), primes=(P5,)))
    assert ok and not reasons
    KG = make_field("x^2 + 1", -4)
    B = algebra(KG, primes=tuple(factor_prime(KG, 3)) + tuple(factor_prime(KG, 7)))
    ok, reasons = is_kleinian_admissible(B)
    assert ok  # no real places to cover
    P7 = prime_from_label(K, "7:0")
    ok, reasons = is_kleinian_admissible(algebra(K, primes=(P5, P7)))
    assert not ok and any("real place 0" in r for r in reasons)
    KQ = make_field("x")
    ok, reasons = is_kleinian_admissible(algebra(KQ))
    assert not ok  # no complex place at all


def test_is_division():
    K = cubic()
    P5, P7 = prime_from_label(K, "5:0"), prime_from_label(K, "7:0")
    assert not is_division(algebra(K))
    assert is_division(algebra(K, real_places=(0,), primes=(P5,)))
    assert is_division(algebra(K, primes=(P5, P7)))


def test_admits_embedding_examples():
    KQ = make_field("x")
    P3 = factor_prime(KQ, 3)[0]
    B = algebra(KQ, real_places=(0,), primes=(P3,))
    L5 = make_quadratic_extension(KQ, KQ.integer(5), "L5")
    cert = admits_embedding(B, L5)
    assert not cert.admits
    assert ("real0", "split") in cert.places
    Lm1 = make_quadratic_extension(KQ, KQ.integer(-1), "Lm1")
    cert = admits_embedding(B, Lm1)
    assert cert.admits
    assert cert.places == (("real0", "inert"), ("3:0", "inert"))
    empty = algebra(KQ)
    assert admits_embedding(empty, L5).admits  # vacuous


def test_admits_embedding_opaque_uncheckable():
    K = cubic()
    P5 = prime_from_label(K, "5:0")
    B = algebra(K, real_places=(0,), primes=(P5,), opaque=("dyadic-1", "dyadic-2"))
    theta = K.generator()
    L = make_quadratic_extension(K, theta * theta - K.integer(4), "L")
    with pytest.raises(UncheckablePlace):
        admits_embedding(B, L)


def test_extend_ramification():
    K = cubic()
    P5 = prime_from_label(K, "5:0")
    P11 = prime_from_label(K, "11:0")
    P31 = prime_from_label(K, "31:0")
    B = algebra(K, real_places=(0,), primes=(P5,))
    B2 = extend_ramification(B, P11, P31)
    assert B2.ram.cardinality == 4
    assert B2.ram.cardinality % 2 == 0
    with pytest.raises(AlreadyRamified):
        extend_ramification(B, P5, P11)
    with pytest.raises(SamePrime):
        extend_ramification(B, P11, P11)
    B3 = extend_ramification(algebra(K), P11, P31)
    assert B3.ram.labels() == ("11:0", "31:0")


def test_extension_preserves_embedding():
    # if the base admits L and the added primes are inert in L, the
    # extended algebra still admits L
    K = cubic()
    theta = K.generator()
    L = make_quadratic_extension(K, theta * theta - K.integer(4), "L")
    P5 = prime_from_label(K, "5:0")
    B = algebra(K, real_places=(0,), primes=(P5,))
    assert admits_embedding(B, L).admits
    P23 = prime_from_label(K, "23:0")
    P31 = prime_from_label(K, "31:0")
    assert split_symbol(P23, L) is SplitSymbol.INERT
    assert split_symbol(P31, L) is SplitSymbol.INERT
    B2 = extend_ramification(B, P23, P31)
    assert admits_embedding(B2, L).admits


def test_same_commensurability_class():
    K = cubic()
    P5, P7 = prime_from_label(K, "5:0"), prime_from_label(K, "7:0")
    B1 = algebra(K, real_places=(0,), primes=(P5,))
    B2 = algebra(K, real_places=(0,), primes=(P5,))
    B3 = algebra(K, real_places=(0,), primes=(P7,))
    assert same_commensurability_class(B1, B2)
    assert not same_commensurability_class(B1, B3)


def test_isomorphic_fields_compare_unequal_with_warning():
    K1 = make_field("x^2 + 1", -4)
    K2 = make_field("x^2 + 4*x + 5", -4)  # the same field, different polynomial
    c1 = commensurability_class(algebra(K1))
    c2 = commensurability_class(algebra(K2))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert not same_commensurability_class(c1, c2)
    assert any("distinct" in str(w.message) for w in caught)


def test_torsion_free_check_examples():
    K = cubic()
    P109 = factor_prime(K, 109)[0]
    B = algebra(K, real_places=(0,), primes=(P109,))
    report = torsion_free_check(B, 12, 3000)
    assert report.ok
    assert [(r.n, r.witness) for r in report.rows] == [(3, "109:0"), (4, "109:0")]

    P5 = prime_from_label(K, "5:0")
    B5 = algebra(K, real_places=(0,), primes=(P5,))
    report = torsion_free_check(B5, 12, 3000)
    assert not report.ok
    rows = {r.n: r.witness for r in report.rows}
    assert rows[3] is None  # 5 = 2 mod 3, no witness
    assert rows[4] == "5:0"  # 5 = 1 mod 4

    with pytest.raises(RamFEmpty):
        torsion_free_check(algebra(K), 12, 3000)


def test_torsion_witnesses_persist_under_extension():
    K = cubic()
    P109 = factor_prime(K, 109)[0]
    B = algebra(K, real_places=(0,), primes=(P109,))
    before = torsion_free_check(B, 12, 3000)
    P11 = prime_from_label(K, "11:0")
    P31 = prime_from_label(K, "31:0")
    after = torsion_free_check(extend_ramification(B, P11, P31), 12, 3000)
    assert after.ok
    prior = {r.n: r.witness for r in before.rows}
    for row in after.rows:
        if prior.get(row.n) is not None:
            assert row.witness is not None


def test_opaque_places():
    K = cubic()
    P5 = prime_from_label(K, "5:0")
    op = parse_opaque("dyadic-1@4")
    assert op == OpaquePlace("dyadic-1", 4)
    B = algebra(K, real_places=(0,), primes=(P5,), opaque=("dyadic-1@4", "dyadic-2"))
    assert B.ram.cardinality == 4
    # declared norm 4 = 1 mod 3: usable torsion witness
    report = torsion_free_check(B, 12, 3000)
    rows = {r.n: r.witness for r in report.rows}
    assert rows[3] == "dyadic-1@4"
