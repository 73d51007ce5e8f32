"""Pipeline validation, construction, report invariants, verification."""

import json

import pytest

from orbigap.config import TwinRequest, FieldDescription, request_from_echo
from orbigap.errors import (
    CompositumDegenerate,
    InvalidInput,
    LoxodromyFailure,
    NoTuplesFound,
    RealPlaceUnramified,
)
from orbigap.pipeline import (
    choose_p0,
    construct_twins,
    report_to_json,
    run_request,
    validate_base,
    verify_report,
)

CUBIC = FieldDescription("x^3 - 2", -108)


def cubic_request(**kw):
    defaults = dict(
        field_desc=CUBIC,
        ram_real=(0,),
        ram_prime_labels=("5:0",),
        extensions=(("trace", "a"),),
        k=2,
        window=30,
        height=20_000,
        zeta_cutoff=1000,
        max_tuples=2,
    )
    defaults.update(kw)
    return TwinRequest(**defaults)


def test_validate_base_passes():
    ctx = validate_base(cubic_request())
    assert ctx.base.ram.cardinality == 2
    assert ctx.compositum.full
    assert len(ctx.geodesics) == 1
    assert all(cert.admits for cert in ctx.base_certificates)


def test_validate_base_real_place_unramified():
    with pytest.raises(RealPlaceUnramified):
        validate_base(cubic_request(ram_real=(), ram_prime_labels=("5:0", "11:0")))


def test_validate_base_duplicate_extensions():
    with pytest.raises(CompositumDegenerate):
        validate_base(cubic_request(extensions=(("trace", "a"), ("trace", "a"))))


def test_validate_base_nonloxodromic_trace():
    with pytest.raises(LoxodromyFailure):
        validate_base(cubic_request(extensions=(("trace", "a"), ("trace", "1/2"))))


def test_choose_p0_minimal_and_override():
    ctx = validate_base(cubic_request())
    p0 = choose_p0(ctx)
    assert p0.label == "23:0"  # least inert degree-1 prime outside Ram_f
    ctx2 = validate_base(cubic_request(p0_label="31:0"))
    assert choose_p0(ctx2).label == "31:0"
    # a split prime is rejected: 17 has theta = 8, d = 60 = 3^2 * ... a square mod 17
    ctx3 = validate_base(cubic_request(p0_label="17:0"))
    with pytest.raises(InvalidInput):
        choose_p0(ctx3)
    # a prime inside Ram_f is rejected
    ctx4 = validate_base(cubic_request(p0_label="5:0"))
    with pytest.raises(InvalidInput):
        choose_p0(ctx4)


def test_construct_and_verify_round_trip():
    report = run_request(cubic_request())
    assert report["schema_version"] == 1
    assert len(report["tuples"]) >= 1
    assert verify_report(report) == []


def test_report_invariants():
    report = run_request(cubic_request())
    window = report["search"]["window"]
    base_np = report["base_volume"]["norm_product"]
    p0_norm = report["p0"]["norm"]
    for tup in report["tuples"]:
        # (a) pairwise distinct ramification sets
        rams = [tuple(a["ram"]) for a in tup["algebras"]]
        assert len(set(rams)) == len(rams)
        assert tup["pairwise_distinct"]
        for alg in tup["algebras"]:
            # (b) embedding certificates present and positive
            assert alg["embeddings"] and all(c["admits"] for c in alg["embeddings"])
            # (e) even parity, (f) nonempty finite ramification
            assert alg["cardinality"] % 2 == 0
            assert any(not lbl.startswith("real") for lbl in alg["ram"])
            # volume multiplicativity
            num, den = alg["volume_ratio_to_base"]
            assert den == 1
        # (c) bounded span
        norms = [p["norm"] for p in tup["primes"]]
        assert max(norms) - min(norms) <= window
        # (d) volume window bound
        vw = tup["volume_window"]
        assert vw["span_products"] <= vw["bound_products"]
        assert vw["bound_products"] == base_np * (p0_norm - 1) * window


def test_determinism():
    r1 = run_request(cubic_request())
    r2 = run_request(cubic_request())
    assert report_to_json(r1) == report_to_json(r2)


def test_no_tuples_found_window_zero():
    with pytest.raises(NoTuplesFound) as info:
        run_request(cubic_request(window=0))
    assert info.value.diagnostics["search"]["tuples_found"] == 0


def test_manifold_mode_filters_tuples():
    report = run_request(
        cubic_request(manifold=True, window=60, height=50_000, max_tuples=2, nmax=12)
    )
    for tup in report["tuples"]:
        for alg in tup["algebras"]:
            assert alg["torsion"]["torsion_free"]
            witnesses = {row["n"]: row["witness"] for row in alg["torsion"]["rows"]}
            assert all(w is not None for w in witnesses.values())
    # rejected tuples carry a reason
    for skip in report["skipped_tuples"]:
        assert skip["reason"].startswith("torsion")


def test_request_echo_round_trip():
    report = run_request(cubic_request())
    rebuilt = request_from_echo(report["request"])
    assert rebuilt.k == 2 and rebuilt.window == 30
    assert rebuilt.field_desc.poly_text == "x^3 - 2"
    report2 = run_request(rebuilt)
    assert report_to_json(report2) == report_to_json(report)


def test_verify_detects_tampering():
    report = run_request(cubic_request())
    tampered = json.loads(report_to_json(report))
    tampered["tuples"][0]["primes"][0]["vector"] = [0]
    problems = verify_report(tampered)
    assert problems
