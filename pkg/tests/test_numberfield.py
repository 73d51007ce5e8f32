"""Number field construction, prime splitting, place evaluation."""

import math

import pytest

from orbigap.errors import (
    DiscriminantMismatch,
    ExcludedPrime,
    NotCoprime,
    Reducible,
)
from orbigap.intervals import contains_zero, eval_poly_box, eval_poly_interval, interval_prec
from orbigap.numberfield import (
    ComplexPlace,
    RealPlace,
    evaluate_at_place,
    factor_prime,
    make_field,
    parse_element,
    prime_from_label,
    reduce_mod_prime,
    reduce_mod_prime_int,
    residue_norm_mod,
)
from orbigap.polynomials import ModPolynomial
from orbigap.sieve import primes_up_to

CORPUS = ("x", "x^2 + 1", "x^3 - x + 1", "x^3 - 2")


def corpus_fields():
    return [
        make_field("x"),
        make_field("x^2 + 1", -4),
        make_field("x^3 - x + 1"),
        make_field("x^3 - 2", -108),
    ]


def test_make_field_examples():
    K = make_field("x^3 - x + 1")
    assert K.degree == 3 and K.disc_poly == -23 and K.field_disc == -23
    assert K.signature == (1, 1)

    K = make_field("x^2 + 1", -4)
    assert K.field_disc == -4 and K.signature == (0, 1)
    assert sorted(K.excluded) == [2]

    K = make_field("x")
    assert K.degree == 1 and K.signature == (1, 0)


def test_make_field_rejects_reducible():
    with pytest.raises(Reducible):
        make_field("x^2 - 1")
    with pytest.raises(Reducible):
        make_field("x^3 + x^2 - 2")  # root 1
    with pytest.raises(Reducible):
        make_field("x^4 + 4")  # (x^2-2x+2)(x^2+2x+2), no rational root


def test_make_field_accepts_hard_irreducible():
    # reducible mod every prime, irreducible over Q; forces the bounded search
    K = make_field("x^4 + 1")
    assert K.degree == 4 and K.signature == (0, 2)


def test_discriminant_mismatch():
    with pytest.raises(DiscriminantMismatch):
        make_field("x^2 + 1", -3)  # -4 / -3 is not an integer
    with pytest.raises(DiscriminantMismatch):
        make_field("x^3 - 2", -54)  # quotient 2 is not a perfect square


def test_supplied_disc_quotient_square():
    # -108 / -27 = 4 = 2^2: a legal (if wrong) supplied discriminant
    K = make_field("x^3 - 2", -27)
    assert K.excluded == frozenset({2})


def test_excluded_primes_default_rule():
    K = make_field("x^3 - 2")  # disc -108 = -2^2 * 27, no Delta supplied
    assert sorted(K.excluded) == [2, 3]
    assert K.field_disc is None
    K = make_field("x^3 - x + 1")  # disc -23 squarefree
    assert sorted(K.excluded) == [2]


def test_factor_prime_gaussian_examples():
    K = make_field("x^2 + 1", -4)
    ideals = factor_prime(K, 5)
    assert [(p.label, p.norm, p.inertia_degree) for p in ideals] == [
        ("5:0", 5, 1),
        ("5:1", 5, 1),
    ]
    ideals = factor_prime(K, 3)
    assert [(p.norm, p.inertia_degree) for p in ideals] == [(9, 2)]
    with pytest.raises(ExcludedPrime):
        factor_prime(K, 2)


def test_factor_prime_invariants_over_corpus():
    for K in corpus_fields():
        for p in primes_up_to(500):
            p = int(p)
            if p in K.excluded:
                continue
            ideals = factor_prime(K, p)
            factors = K.factorization_mod_p(p)
            assert sum(g.degree * e for g, e in factors) == K.degree
            if all(e == 1 for _, e in factors):
                assert sum(q.inertia_degree for q in ideals) == K.degree
            prod = ModPolynomial(p, (1,))
            for g, e in factors:
                for _ in range(e):
                    prod = prod * g
            assert prod == ModPolynomial.from_int_poly(K.poly, p)
            labels = [q.label for q in ideals]
            assert len(set(labels)) == len(labels)


def test_split_count_binomial_model():
    # for x^2+1 the split p <= 1e5 should be within 5 sigma of pi(1e5)/2
    K = make_field("x^2 + 1", -4)
    primes = primes_up_to(100_000)
    split = 0
    scanned = 0
    for p in primes:
        p = int(p)
        if p in K.excluded:
            continue
        scanned += 1
        if K.factor_pattern(p) == ((1, 2),):
            split += 1
    sigma = math.sqrt(scanned * 0.25)
    assert abs(split - scanned / 2) < 5 * sigma


def test_residue_norm_mod():
    K = make_field("x^3 - 2", -108)
    P5 = prime_from_label(K, "5:0")
    assert residue_norm_mod(P5, 4) == 1
    KG = make_field("x^2 + 1", -4)
    P3 = factor_prime(KG, 3)[0]
    assert P3.norm == 9 and residue_norm_mod(P3, 4) == 1
    P109 = factor_prime(K, 109)[0]
    assert residue_norm_mod(P109, 12) == 1
    with pytest.raises(NotCoprime):
        residue_norm_mod(P5, 10)


def test_evaluate_at_place_examples():
    K = make_field("x^3 - 2", -108)
    theta = K.generator()
    place = K.real_places()[0]
    val = evaluate_at_place(theta, place, 40)
    assert abs(float(val.mid.a) - 2 ** (1 / 3)) < 1e-10
    one = evaluate_at_place(K.one(), place, 40)
    assert float(one.a) == 1.0 and float(one.b) == 1.0
    d = theta * theta - K.integer(4)
    val = evaluate_at_place(d, place, 40)
    assert abs(float(val.mid.a) - (2 ** (2 / 3) - 4)) < 1e-10


def test_generator_image_satisfies_poly():
    for K in corpus_fields():
        theta = K.generator()
        with interval_prec(192):
            for place in K.real_places():
                x = evaluate_at_place(theta, place, 50)
                assert contains_zero(eval_poly_interval(K.poly.coeffs, x))
            for place in K.complex_places():
                z = evaluate_at_place(theta, place, 50)
                assert eval_poly_box(K.poly.coeffs, z).contains_zero()


def test_field_elements():
    K = make_field("x^3 - 2", -108)
    theta = K.generator()
    x = parse_element(K, "a^2 - 4")
    assert x == theta * theta - K.integer(4)
    y = parse_element(K, "(a + 1) / 2")
    assert y.denom == 2
    # reduction mod f: a^3 = 2
    cube = theta * theta * theta
    assert cube == K.integer(2)
    half = parse_element(K, "1/2")
    assert (half + half) == K.one()


def test_reduce_mod_prime():
    K = make_field("x^3 - 2", -108)
    P5 = prime_from_label(K, "5:0")  # x + 2, theta = -2 = 3 mod 5
    theta = K.generator()
    assert reduce_mod_prime_int(theta, P5) == 3
    d = theta * theta - K.integer(4)
    assert reduce_mod_prime_int(d, P5) == 0  # 9 - 4 = 5 = 0 mod 5
    P7 = prime_from_label(K, "7:0")  # inert, degree 3
    e = reduce_mod_prime(theta, P7)
    assert e.value.coeffs == (0, 1)


def test_prime_label_round_trip():
    K = make_field("x^3 - 2", -108)
    for label in ("5:0", "5:1", "7:0", "31:2"):
        P = prime_from_label(K, label)
        assert P.label == label


def test_rationals_model_field():
    K = make_field("x")
    assert factor_prime(K, 7)[0].norm == 7
    five = K.integer(5)
    P3 = factor_prime(K, 3)[0]
    assert reduce_mod_prime_int(five, P3) == 2
    place = K.real_places()[0]
    v = evaluate_at_place(parse_element(K, "7/2"), place, 30)
    assert abs(float(v.mid.a) - 3.5) < 1e-9
