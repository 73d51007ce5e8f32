"""End-to-end construction of bounded-volume-window tuples of pairwise
non-commensurable commensurability classes containing prescribed geodesics.

From (K, Ram(B), traces, k, window, height) the pipeline validates the
standing hypotheses, fixes a minimum-norm all-inert prime P0, pulls
bounded-gap tuples (P1..Pk) of all-inert degree-1 primes avoiding
Ram_f(B) and P0, and emits one algebra per tuple member with
Ram(B_i) = Ram(B) + {P0, P_i}, with embedding certificates, pairwise
distinctness, volumes and (in manifold mode) torsion witness tables.

Reports are self-contained JSON trees; identical requests produce
byte-identical reports at fixed precision settings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .config import TwinRequest, request_from_echo
from .errors import (
    CompositumDegenerate,
    EmbeddingObstruction,
    HypothesisFailure,
    KleinianInadmissible,
    LoxodromyFailure,
    NoneBelowHeight,
    NotLoxodromic,
    NoTuplesFound,
    RamFEmpty,
    RealPlaceUnramified,
    InvalidInput,
)
from .numberfield import factor_prime, parse_element, prime_from_label
from .quaternion import (
    QuaternionAlgebra,
    admits_embedding,
    algebra,
    commensurability_class,
    default_cyclotomic_bound,
    extend_ramification,
    is_division,
    is_kleinian_admissible,
    same_commensurability_class,
    torsion_free_check,
)
from .search import SearchSpec, enumerate_target_primes, find_bounded_gap_tuples
from .splitting import (
    FrobeniusVector,
    compositum_degree_check,
    extension_from_trace,
    frobenius_vector,
    make_quadratic_extension,
)
from .volume import borel_volume, dedekind_zeta_2, trace_to_geodesic, volume_ratio

SCHEMA_VERSION = 1
GEODESIC_PRECISION_BITS = 64


@dataclass
class ValidatedContext:
    request: TwinRequest
    field: object
    base: QuaternionAlgebra
    extensions: tuple
    compositum: object
    geodesics: tuple  # ((label, GeodesicDatum), ...)
    base_certificates: tuple


def build_extensions(field, request):
    extensions = []
    for i, (kind, text) in enumerate(request.extensions, 1):
        label = f"L{i}"
        element = parse_element(field, text)
        if kind == "trace":
            ext = extension_from_trace(field, element, label)
        else:
            ext = make_quadratic_extension(field, element, label)
        extensions.append(ext)
    return tuple(extensions)


def validate_base(request):
    """Check every hypothesis of the construction; one named error per
    violated condition."""
    field = request.field_desc.build()
    primes = tuple(prime_from_label(field, lbl) for lbl in request.ram_prime_labels)
    base = algebra(field, request.ram_real, primes, request.ram_opaque)

    admissible, reasons = is_kleinian_admissible(base)
    if not admissible:
        if any("real place" in r for r in reasons):
            raise RealPlaceUnramified("; ".join(reasons))
        raise KleinianInadmissible("; ".join(reasons))

    extensions = build_extensions(field, request)

    certificates = []
    for ext in extensions:
        cert = admits_embedding(base, ext)
        if not cert.admits:
            raise EmbeddingObstruction(
                f"base algebra does not admit {ext.label}: "
                + ", ".join(f"{lbl} {sym}" for lbl, sym in cert.places if sym == "split")
            )
        certificates.append(cert)

    compositum = compositum_degree_check(
        extensions, min(request.height, 10_000)
    )
    if not compositum.full:
        raise CompositumDegenerate(
            f"Frobenius vectors generate rank {compositum.rank} < {len(extensions)}"
        )

    geodesics = []
    for ext, (kind, text) in zip(extensions, request.extensions):
        if kind != "trace":
            continue
        trace = parse_element(field, text)
        try:
            datum = trace_to_geodesic(field, trace, GEODESIC_PRECISION_BITS)
        except NotLoxodromic as exc:
            raise LoxodromyFailure(f"trace {text!r} is not loxodromic: {exc}") from exc
        geodesics.append((ext.label, datum))

    return ValidatedContext(
        request, field, base, extensions, compositum, tuple(geodesics), tuple(certificates)
    )


def _search_spec(ctx, avoid, k=1, window=0):
    request = ctx.request
    return SearchSpec(
        field=ctx.field,
        extensions=ctx.extensions,
        target=(1,) * len(ctx.extensions),
        height=request.height,
        k=k,
        window=window,
        avoid=frozenset(avoid),
        policy=request.policy,
        segment_size=request.segment_size,
        workers=request.workers,
    )


def choose_p0(ctx):
    """Minimum-norm all-inert degree-1 prime outside Ram_f(B), or the
    validated user override."""
    request = ctx.request
    ram_f = set(ctx.base.ram.primes)
    if request.p0_label is not None:
        p0 = prime_from_label(ctx.field, request.p0_label)
        if p0.inertia_degree != 1:
            raise InvalidInput(f"override P0 = {p0.label} does not have degree 1")
        if p0 in ram_f:
            raise InvalidInput(f"override P0 = {p0.label} lies in Ram_f(B)")
        if not ctx.field.is_unramified(p0.p):
            raise InvalidInput(f"override P0 = {p0.label} is ramified in K")
        vec = frobenius_vector(p0, ctx.extensions)
        if not isinstance(vec, FrobeniusVector) or any(b != 1 for b in vec.bits):
            raise InvalidInput(
                f"override P0 = {p0.label} does not have the all-inert Frobenius vector"
            )
        return p0
    spec = _search_spec(ctx, ram_f)
    for prime in enumerate_target_primes(spec, precheck=False):
        return prime
    raise NoneBelowHeight(f"no all-inert degree-1 prime below {request.height}")


def _prime_dict(prime, vector=None):
    out = {
        "label": prime.label,
        "p": prime.p,
        "norm": prime.norm,
        "factor": str(prime.factor),
    }
    if vector is not None:
        out["vector"] = list(vector.bits)
    return out


def construct_twins(ctx):
    """Full construction; returns the report as a JSON-ready dict."""
    request = ctx.request
    field = ctx.field
    base = ctx.base
    extensions = ctx.extensions

    p0 = choose_p0(ctx)
    avoid = set(base.ram.primes) | {p0}
    spec = _search_spec(ctx, avoid, k=request.k, window=request.window)
    stream = list(enumerate_target_primes(spec, precheck=False))
    tuples = find_bounded_gap_tuples(spec)

    zeta = dedekind_zeta_2(field, request.zeta_cutoff, request.precision)
    base_volume = borel_volume(field, base.ram, zeta, request.precision)

    nmax = request.nmax if request.nmax is not None else default_cyclotomic_bound(field)
    base_torsion = None
    if request.manifold and base.ram.finite_count() > 0:
        try:
            base_torsion = torsion_free_check(base, nmax, request.cyclo_height).to_dict()
        except RamFEmpty:
            base_torsion = None

    accepted = []
    skipped = []
    for tup in tuples:
        if len(accepted) >= request.max_tuples:
            break
        entry = _build_tuple_entry(
            ctx, p0, tup, zeta, base_volume, nmax
        )
        if entry.get("_torsion_failures"):
            skipped.append(
                {
                    "norms": list(tup.norms),
                    "reason": "torsion: " + "; ".join(entry["_torsion_failures"]),
                }
            )
            continue
        entry.pop("_torsion_failures", None)
        accepted.append(entry)

    p0_vec = frobenius_vector(p0, extensions)
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "twin_report",
        "request": request.echo(),
        "field": {
            "poly": str(field.poly),
            "degree": field.degree,
            "signature": list(field.signature),
            "disc_poly": field.disc_poly,
            "field_disc": field.field_disc,
            "excluded": sorted(field.excluded),
        },
        "extensions": [
            {
                "label": ext.label,
                "source": ext.source,
                "radicand": str(ext.radicand),
                "inert_witness": ext.inert_witness,
            }
            for ext in extensions
        ],
        "compositum": {
            "rank": ctx.compositum.rank,
            "full": ctx.compositum.full,
            "subgroup": [list(v) for v in ctx.compositum.subgroup],
            "samples": ctx.compositum.samples,
            "height": ctx.compositum.height,
        },
        "geodesics": [
            {"label": label, **datum.to_dict()} for label, datum in ctx.geodesics
        ],
        "base_algebra": _algebra_dict(base),
        "base_embeddings": [cert.to_dict() for cert in ctx.base_certificates],
        "base_torsion": base_torsion,
        "p0": _prime_dict(p0, p0_vec),
        "zeta": zeta.to_dict(),
        "base_volume": base_volume.to_dict(),
        "search": {
            "target": [1] * len(extensions),
            "avoid": sorted(q.label for q in avoid),
            "policy": request.policy,
            "height": request.height,
            "window": request.window,
            "k": request.k,
            "stream_count": len(stream),
            "tuples_found": len(tuples),
        },
        "tuples": accepted,
        "skipped_tuples": skipped,
        "diagnostics": {
            "qualifying_algebras_below_height": len(stream),
            "note": (
                "the growth hypothesis on the count of qualifying classes is "
                "not decidable at finite height; the stream count is reported "
                "as empirical evidence only"
            ),
        },
    }
    if not accepted:
        raise NoTuplesFound(
            f"no qualifying tuple below height {request.height} "
            f"(stream size {len(stream)}, window {request.window}); "
            "consider a larger height or window",
            diagnostics=report,
        )
    _assert_report_invariants(report)
    return report


def _algebra_dict(B):
    ok, reasons = is_kleinian_admissible(B)
    return {
        "ram_real": list(B.ram.real_places),
        "ram_primes": [_prime_dict(q) for q in B.ram.primes],
        "ram_opaque": [str(o) for o in B.ram.opaque],
        "cardinality": B.ram.cardinality,
        "kleinian": ok,
        "division": is_division(B),
    }


def _build_tuple_entry(ctx, p0, tup, zeta, base_volume, nmax):
    request = ctx.request
    field = ctx.field
    algebras = []
    torsion_failures = []
    built = []
    for idx, prime in enumerate(tup.primes, 1):
        B_i = extend_ramification(ctx.base, p0, prime)
        built.append((f"B{idx}", prime, B_i))
    classes = [commensurability_class(B) for _, _, B in built]
    pairwise = all(
        not same_commensurability_class(classes[i], classes[j])
        for i in range(len(classes))
        for j in range(i + 1, len(classes))
    )
    norms = tup.norms
    bound_products = base_volume.norm_product * (p0.norm - 1) * request.window
    span_products = base_volume.norm_product * (p0.norm - 1) * (max(norms) - min(norms))
    for (label, prime, B_i), vec in zip(built, tup.vectors):
        certs = [admits_embedding(B_i, ext) for ext in ctx.extensions]
        if not all(c.admits for c in certs):
            raise HypothesisFailure(
                f"internal inconsistency: {label} rejects an extension after construction"
            )
        vol = borel_volume(field, B_i.ram, zeta, request.precision)
        ratio = volume_ratio(vol, base_volume)
        expected = (p0.norm - 1) * (prime.norm - 1)
        if ratio != expected:
            raise HypothesisFailure(
                f"volume ratio {ratio} differs from (N(P0)-1)(N(Pi)-1) = {expected}"
            )
        torsion = None
        if request.manifold:
            tf = torsion_free_check(B_i, nmax, request.cyclo_height)
            torsion = tf.to_dict()
            if not tf.ok:
                failing = [str(row.n) for row in tf.rows if row.witness is None]
                torsion_failures.append(f"{label} unwitnessed at n in {{{', '.join(failing)}}}")
        algebras.append(
            {
                "label": label,
                "added": [p0.label, prime.label],
                "ram": list(B_i.ram.labels()),
                "cardinality": B_i.ram.cardinality,
                "embeddings": [c.to_dict() for c in certs],
                "volume": vol.to_dict(),
                "volume_ratio_to_base": [ratio.numerator, ratio.denominator],
                "torsion": torsion,
            }
        )
    return {
        "primes": [_prime_dict(p, v) for p, v in zip(tup.primes, tup.vectors)],
        "span": tup.span,
        "pairwise_distinct": pairwise,
        "algebras": algebras,
        "volume_window": {
            "norm_span": max(norms) - min(norms),
            "span_products": span_products,
            "bound_products": bound_products,
        },
        "_torsion_failures": torsion_failures,
    }


def _assert_report_invariants(report):
    """Machine-checkable invariants (a)-(f) on the assembled report."""
    window = report["search"]["window"]
    for tup in report["tuples"]:
        rams = [tuple(alg["ram"]) for alg in tup["algebras"]]
        assert len(set(rams)) == len(rams), "(a) ramification sets not distinct"
        for alg in tup["algebras"]:
            assert all(cert["admits"] for cert in alg["embeddings"]), "(b) embedding failed"
            assert alg["cardinality"] % 2 == 0, "(e) odd ramification"
            finite = [lbl for lbl in alg["ram"] if not lbl.startswith("real")]
            assert finite, "(f) empty finite ramification"
        norms = [p["norm"] for p in tup["primes"]]
        assert max(norms) - min(norms) <= window, "(c) span exceeds window"
        vw = tup["volume_window"]
        assert vw["span_products"] <= vw["bound_products"], "(d) volume window exceeded"


def run_request(request):
    """validate + construct in one call."""
    ctx = validate_base(request)
    return construct_twins(ctx)


def report_to_json(report):
    """Canonical byte representation (sorted keys, fixed separators)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def verify_report(report):
    """Re-derive the report from its request echo and recheck certificates.

    Returns a list of problem strings; empty means the report verifies.
    """
    problems = []
    try:
        request = request_from_echo(report["request"])
    except Exception as exc:  # noqa: BLE001 - report any parse failure
        return [f"request echo unusable: {exc}"]

    try:
        rebuilt = run_request(request)
    except HypothesisFailure as exc:
        return [f"hypotheses no longer validate: {exc}"]
    except NoTuplesFound as exc:
        return [f"re-run found no tuples: {exc}"]

    if rebuilt != report:
        for key in sorted(set(report) | set(rebuilt)):
            if report.get(key) != rebuilt.get(key):
                problems.append(f"section {key!r} differs on re-derivation")

    problems.extend(_independent_checks(report, request))
    return problems


def _independent_checks(report, request):
    """Direct recomputation of the stored certificates, without comparing
    against a rebuilt report."""
    problems = []
    field = request.field_desc.build()
    extensions = build_extensions(field, request)
    ext_by_label = {ext.label: ext for ext in extensions}

    def check_vector(prime_entry):
        prime = prime_from_label(field, prime_entry["label"])
        if prime.norm != prime_entry["norm"]:
            problems.append(f"norm mismatch for {prime_entry['label']}")
        vec = frobenius_vector(prime, extensions)
        if not isinstance(vec, FrobeniusVector) or list(vec.bits) != prime_entry.get(
            "vector", list(vec.bits)
        ):
            problems.append(f"Frobenius vector mismatch for {prime_entry['label']}")
        return prime

    p0 = check_vector(report["p0"])
    base_primes = tuple(
        prime_from_label(field, q["label"]) for q in report["base_algebra"]["ram_primes"]
    )
    base = algebra(field, report["base_algebra"]["ram_real"], base_primes, request.ram_opaque)

    window = report["search"]["window"]
    base_np = report["base_volume"]["norm_product"]
    for tup in report["tuples"]:
        primes = [check_vector(entry) for entry in tup["primes"]]
        norms = [p.norm for p in primes]
        if max(norms) - min(norms) != tup["span"]:
            problems.append(f"span mismatch for tuple {norms}")
        if tup["span"] > window:
            problems.append(f"tuple {norms} exceeds the window")
        rams = set()
        for alg, prime in zip(tup["algebras"], primes):
            B_i = extend_ramification(base, p0, prime)
            if list(B_i.ram.labels()) != alg["ram"]:
                problems.append(f"ramification labels differ for {alg['label']}")
            rams.add(tuple(alg["ram"]))
            if B_i.ram.cardinality % 2 != 0:
                problems.append(f"odd ramification in {alg['label']}")
            for cert in alg["embeddings"]:
                ext = ext_by_label[cert["extension"]]
                fresh = admits_embedding(B_i, ext)
                if fresh.to_dict() != cert:
                    problems.append(
                        f"embedding certificate for {alg['label']}/{cert['extension']} does not re-verify"
                    )
            num, den = alg["volume_ratio_to_base"]
            expected = (p0.norm - 1) * (prime.norm - 1)
            if num != expected * den:
                problems.append(f"volume ratio mismatch for {alg['label']}")
            if alg["volume"]["norm_product"] != base_np * expected:
                problems.append(f"norm product mismatch for {alg['label']}")
        if len(rams) != len(tup["algebras"]):
            problems.append(f"tuple {norms} has coinciding ramification sets")
    return problems
