"""Enumeration of degree-1 primes with a prescribed Frobenius vector and
the bounded-gap tuple search over the resulting stream.

The stream scans rational primes p <= height with a segmented sieve,
keeps the canonically first degree-1 factor of f mod p (one prime ideal
per rational prime), filters by Frobenius vector, and is strictly
increasing in norm.  Segments may be processed concurrently; results are
merged in segment order so the stream is byte-identical to a serial run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .errors import CompositumDegenerate, InvalidInput
from .numberfield import PrimeIdeal
from .sieve import DEFAULT_SEGMENT, prime_segment, primes_up_to, segment_bounds
from .splitting import (
    FrobeniusVector,
    RamifiedCoordinates,
    compositum_degree_check,
    frobenius_vector,
)

COMPOSITUM_CHECK_CAP = 10_000


@dataclass(frozen=True)
class SearchSpec:
    """Parameters of a bounded-gap search."""

    field: object
    extensions: tuple
    target: tuple
    height: int
    k: int = 1
    window: int = 0
    avoid: frozenset = dc_field(default_factory=frozenset)
    policy: str = "sliding"
    segment_size: int = DEFAULT_SEGMENT
    workers: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput("k must be at least 1")
        if self.window < 0:
            raise InvalidInput("window must be nonnegative")
        if self.height < 3:
            raise InvalidInput("height must be at least 3")
        if len(self.target) != len(self.extensions):
            raise InvalidInput("target length must match the number of extensions")
        if any(b not in (0, 1) for b in self.target):
            raise InvalidInput("target vector must be 0/1 bits")
        if self.policy not in ("sliding", "disjoint"):
            raise InvalidInput(f"unknown policy {self.policy!r}")


@dataclass(frozen=True)
class PrimeTuple:
    """k degree-1 primes above distinct rational primes, all with the
    target Frobenius vector, with norm span at most the window."""

    primes: tuple
    vectors: tuple
    span: int

    @property
    def norms(self):
        return tuple(p.norm for p in self.primes)

    @property
    def labels(self):
        return tuple(p.label for p in self.primes)


def _skip_sets(spec):
    field = spec.field
    avoid_rational = {prime.p for prime in spec.avoid}
    denom_primes = set()
    for ext in spec.extensions:
        d = abs(ext.radicand.denom)
        q = 2
        while q * q <= d:
            if d % q == 0:
                denom_primes.add(q)
                while d % q == 0:
                    d //= q
            q += 1
        if d > 1:
            denom_primes.add(d)
    return set(field.excluded) | avoid_rational | denom_primes


def _scan_segment(spec, lo, hi, base_primes, skip):
    """Qualifying prime ideals with rational prime in [lo, hi)."""
    field = spec.field
    target = spec.target
    extensions = spec.extensions
    out = []
    for p in prime_segment(lo, hi, base_primes):
        p = int(p)
        if p in skip:
            continue
        factors = field.factorization_mod_p(p)
        first = factors[0][0]
        if first.degree != 1:
            continue
        if any(e != 1 for _, e in factors):
            continue  # ramified in K, Frobenius undefined
        prime = PrimeIdeal(field, p, 0, first)
        vec = frobenius_vector(prime, extensions)
        if isinstance(vec, RamifiedCoordinates):
            continue
        if vec.bits == target:
            out.append((prime, vec))
    return out


def check_compositum(spec):
    check = compositum_degree_check(
        spec.extensions, min(spec.height, COMPOSITUM_CHECK_CAP)
    )
    if not check.full:
        raise CompositumDegenerate(
            f"observed Frobenius subgroup has rank {check.rank} < {len(spec.extensions)}"
        )
    return check


def enumerate_target_primes(spec, precheck=True):
    """Stream of qualifying degree-1 primes, sorted by norm."""
    if precheck:
        check_compositum(spec)
    skip = _skip_sets(spec)
    base = primes_up_to(math.isqrt(spec.height))
    bounds = segment_bounds(spec.height, spec.segment_size)
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            chunks = pool.map(
                lambda b: _scan_segment(spec, b[0], b[1], base, skip), bounds
            )
            for chunk in chunks:
                for prime, _vec in chunk:
                    yield prime
    else:
        for lo, hi in bounds:
            for prime, _vec in _scan_segment(spec, lo, hi, base, skip):
                yield prime


def _collect(spec):
    check_compositum(spec)
    skip = _skip_sets(spec)
    base = primes_up_to(math.isqrt(spec.height))
    pairs = []
    for lo, hi in segment_bounds(spec.height, spec.segment_size):
        pairs.extend(_scan_segment(spec, lo, hi, base, skip))
    return pairs


def find_bounded_gap_tuples(spec):
    """Bounded-gap k-tuples from the stream.

    sliding: the stream is cut into consecutive blocks of k (anchored at
    positions 0, k, 2k, ...) and every block with span <= window is
    emitted.  disjoint: earliest-ending greedy choice of non-overlapping
    windows of k consecutive elements with span <= window, which attains
    the maximum possible number of pairwise-disjoint tuples.
    """
    pairs = _collect(spec)
    k, window = spec.k, spec.window
    tuples = []

    def emit(block):
        primes = tuple(prime for prime, _ in block)
        vectors = tuple(vec for _, vec in block)
        tuples.append(
            PrimeTuple(primes, vectors, primes[-1].norm - primes[0].norm)
        )

    if spec.policy == "sliding":
        for i in range(0, len(pairs) - k + 1, k):
            block = pairs[i : i + k]
            if block[-1][0].norm - block[0][0].norm <= window:
                emit(block)
    else:
        i = 0
        while i + k <= len(pairs):
            block = pairs[i : i + k]
            if block[-1][0].norm - block[0][0].norm <= window:
                emit(block)
                i += k
            else:
                i += 1
    return tuples


@dataclass(frozen=True)
class GapStatistics:
    height: int
    target: tuple
    stream_count: int
    scanned_primes: int
    observed_rate: float
    expected_rate: float
    binomial_sigma: float
    z_score: float
    gap_histogram: tuple
    min_span: tuple  # ((k', minimal span or None), ...)
    low_confidence: bool

    def to_dict(self):
        return {
            "height": self.height,
            "target": list(self.target),
            "stream_count": self.stream_count,
            "scanned_primes": self.scanned_primes,
            "observed_rate": self.observed_rate,
            "expected_rate": self.expected_rate,
            "binomial_sigma": self.binomial_sigma,
            "z_score": self.z_score,
            "gap_histogram": [[g, c] for g, c in self.gap_histogram],
            "min_span": [[k, s] for k, s in self.min_span],
            "low_confidence": self.low_confidence,
        }


def gap_statistics(spec):
    """Stream count and density against the Chebotarev prediction 2^-r,
    consecutive-gap histogram, and minimal observed span per tuple size."""
    pairs = _collect(spec)
    norms = [prime.norm for prime, _ in pairs]
    skip = _skip_sets(spec)
    scanned = sum(1 for p in primes_up_to(spec.height) if int(p) not in skip)
    r = len(spec.extensions)
    expected = 0.5 ** r
    count = len(norms)
    observed = count / scanned if scanned else 0.0
    sigma = math.sqrt(scanned * expected * (1 - expected)) if scanned else 0.0
    z = (count - scanned * expected) / sigma if sigma else 0.0
    hist = {}
    for a, b in zip(norms, norms[1:]):
        hist[b - a] = hist.get(b - a, 0) + 1
    min_span = []
    for kk in range(1, spec.k + 1):
        if count >= kk:
            best = min(norms[i + kk - 1] - norms[i] for i in range(count - kk + 1))
        else:
            best = None
        min_span.append((kk, best))
    return GapStatistics(
        height=spec.height,
        target=spec.target,
        stream_count=count,
        scanned_primes=scanned,
        observed_rate=observed,
        expected_rate=expected,
        binomial_sigma=sigma,
        z_score=z,
        gap_histogram=tuple(sorted(hist.items())),
        min_span=tuple(min_span),
        low_confidence=count < 30,
    )
