"""Split/inert/ramified behavior of primes in quadratic extensions K(sqrt(d)).

For an odd prime P with v_P(d) = 0 the symbol is decided by the Euler
criterion in the residue field: d^((N(P)-1)/2) is 1 exactly for squares.
Frobenius vectors over an ordered family of quadratic extensions encode
inert coordinates as 1 bits; the all-ones vector is the search target of
the bounded-gap pipeline.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import (
    ExcludedPrime,
    IndeterminateSign,
    InvalidInput,
    PossiblySquareRadicand,
)
from .intervals import sign_certified
from .isolation import DEFAULT_CAP_BITS
from .numberfield import (
    NumberField,
    RealPlace,
    evaluate_at_place,
    factor_prime,
    reduce_mod_prime,
    reduce_mod_prime_int,
)
from .sieve import primes_up_to

NON_SQUARE_CERT_HEIGHT = 10_000
DEFAULT_CYCLO_HEIGHT = 10_000


class SplitSymbol(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class QuadraticExtension:
    """K(sqrt(d)) with a nonzero, certified-nonsquare radicand d."""

    field: NumberField
    radicand: object  # FieldElement
    label: str
    source: str
    inert_witness: str

    def __repr__(self):
        return f"QuadraticExtension({self.label}: sqrt({self.radicand}))"


@dataclass(frozen=True)
class FrobeniusVector:
    bits: tuple

    def __str__(self):
        return ",".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class RamifiedCoordinates:
    """Returned instead of a vector when some coordinate is ramified."""

    indices: tuple
    labels: tuple


def make_quadratic_extension(field, radicand, label, source=None,
                             certify_height=NON_SQUARE_CERT_HEIGHT):
    """Build K(sqrt(d)), certifying d is not a square by locating one inert
    prime of norm <= certify_height; rejects the extension otherwise."""
    if radicand.is_zero():
        raise InvalidInput(f"radicand of {label} is zero")
    witness = _find_inert_witness(field, radicand, certify_height)
    if witness is None:
        raise PossiblySquareRadicand(
            f"no inert prime of norm <= {certify_height} for radicand {radicand}; "
            "the extension is possibly trivial"
        )
    return QuadraticExtension(field, radicand, label, source or f"radicand: {radicand}", witness)


def extension_from_trace(field, trace, label, certify_height=NON_SQUARE_CERT_HEIGHT):
    """Quadratic extension K(sqrt(t^2 - 4)) attached to a trace t."""
    radicand = trace * trace - field.integer(4)
    return make_quadratic_extension(
        field, radicand, label, source=f"trace: {trace}", certify_height=certify_height
    )


def _find_inert_witness(field, radicand, height):
    for p in primes_up_to(height):
        p = int(p)
        if p in field.excluded or radicand.denom % p == 0:
            continue
        for prime in factor_prime(field, p):
            if prime.norm > height:
                continue
            if split_symbol(prime, _RawExtension(field, radicand)) is SplitSymbol.INERT:
                return prime.label
    return None


class _RawExtension:
    """Uncertified stand-in so split_symbol can run during certification."""

    __slots__ = ("field", "radicand")

    def __init__(self, field, radicand):
        self.field = field
        self.radicand = radicand


def split_symbol(prime, extension):
    """Split / Inert / Ramified symbol of a finite prime in K(sqrt(d))."""
    d = extension.radicand
    p = prime.p
    if p == 2:
        raise ExcludedPrime("residue characteristic 2 is globally excluded")
    if prime.inertia_degree == 1:
        r = reduce_mod_prime_int(d, prime)
        if r == 0:
            return SplitSymbol.RAMIFIED
        return SplitSymbol.SPLIT if pow(r, (p - 1) // 2, p) == 1 else SplitSymbol.INERT
    e = reduce_mod_prime(d, prime)
    if e.is_zero():
        return SplitSymbol.RAMIFIED
    euler = e ** ((prime.norm - 1) // 2)
    if euler.is_one():
        return SplitSymbol.SPLIT
    if euler.is_minus_one():
        return SplitSymbol.INERT
    raise InvalidInput("Euler criterion returned a non-unit; modulus not irreducible?")


def split_symbol_real(place, extension, precision_bits=32, cap_bits=DEFAULT_CAP_BITS):
    """Split (image positive) or Inert (negative) at a real place; archimedean
    places are never Ramified in this model."""
    if not isinstance(place, RealPlace):
        raise InvalidInput(f"not a real place: {place!r}")
    bits = precision_bits
    while True:
        val = evaluate_at_place(extension.radicand, place, bits, cap_bits=cap_bits)
        sign = sign_certified(val)
        if sign == 1:
            return SplitSymbol.SPLIT
        if sign == -1:
            return SplitSymbol.INERT
        if extension.radicand.is_zero():
            raise InvalidInput("radicand is zero")
        if bits >= cap_bits:
            raise IndeterminateSign(
                f"sign of {extension.radicand} at {place.label()} undecided at {cap_bits} bits"
            )
        bits = min(2 * bits, cap_bits)


def frobenius_vector(prime, extensions):
    """Vector with bit 1 where the prime is inert, 0 where split; a
    RamifiedCoordinates report replaces the vector if any coordinate is
    ramified."""
    bits = []
    ramified = []
    for i, ext in enumerate(extensions):
        symbol = split_symbol(prime, ext)
        if symbol is SplitSymbol.RAMIFIED:
            ramified.append(i)
        else:
            bits.append(1 if symbol is SplitSymbol.INERT else 0)
    if ramified:
        return RamifiedCoordinates(
            tuple(ramified), tuple(extensions[i].label for i in ramified)
        )
    return FrobeniusVector(tuple(bits))


@dataclass(frozen=True)
class CompositumCheck:
    rank: int
    full: bool
    subgroup: tuple  # all observed-subgroup elements, sorted
    samples: int
    height: int


def compositum_degree_check(extensions, height):
    """Subgroup of (Z/2Z)^r generated by observed Frobenius vectors of
    primes of norm <= height; full means the compositum has degree 2^r."""
    r = len(extensions)
    if r < 1:
        raise InvalidInput("need at least one extension")
    field = extensions[0].field
    basis = []  # row-reduced bitmasks
    samples = 0
    denom_primes = {q for ext in extensions for q in _prime_factors_small(ext.radicand.denom)}
    for p in primes_up_to(height):
        p = int(p)
        if p in field.excluded or p in denom_primes:
            continue
        for prime in factor_prime(field, p):
            if prime.norm > height:
                continue
            vec = frobenius_vector(prime, extensions)
            if isinstance(vec, RamifiedCoordinates):
                continue
            samples += 1
            mask = 0
            for b in vec.bits:
                mask = (mask << 1) | b
            _gf2_insert(basis, mask)
        if len(basis) == r:
            break
    subgroup = _gf2_span(basis, r)
    return CompositumCheck(len(basis), len(basis) == r, subgroup, samples, height)


def _gf2_insert(basis, mask):
    for b in basis:
        mask = min(mask, mask ^ b)
    if mask:
        basis.append(mask)
        basis.sort(reverse=True)


def _gf2_span(basis, r):
    masks = {0}
    for b in basis:
        masks |= {m ^ b for m in masks}
    out = []
    for m in sorted(masks):
        bits = tuple((m >> (r - 1 - i)) & 1 for i in range(r))
        out.append(bits)
    return tuple(sorted(out))


def _prime_factors_small(n):
    out = set()
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def cyclotomic_quadratic_degrees(field, n_max, height=DEFAULT_CYCLO_HEIGHT):
    """Candidates n with [K(zeta_n):K] = 2, estimated from below by the
    subgroup of (Z/nZ)* generated by prime norms up to the sample height.

    One-sided: may overreport when the height is too small, never
    underreports.  A doubled-height pass is used as a self-check and its
    (sharper) answer is returned.
    """
    if n_max < 3:
        raise InvalidInput("n_max must be at least 3")
    first = _cyclo_subgroups(field, n_max, height)
    second = _cyclo_subgroups(field, n_max, 2 * height)
    return sorted(n for n, group in second.items() if len(group) == 2)


def _cyclo_subgroups(field, n_max, height):
    ns = [n for n in range(3, n_max + 1) if n % 4 != 2]
    groups = {n: {1} for n in ns}
    for p in primes_up_to(height):
        p = int(p)
        if p in field.excluded:
            continue
        pattern = field.factor_pattern(p)
        for f, count in pattern:
            norm = p ** f
            if norm > height:
                continue
            for n in ns:
                if n % p == 0:
                    continue
                g = norm % n
                if g not in groups[n]:
                    groups[n] = _closure(groups[n], g, n)
    return groups


def _closure(group, g, n):
    out = set(group)
    frontier = [g]
    while frontier:
        x = frontier.pop()
        if x in out:
            continue
        out.add(x)
        frontier.extend((x * y) % n for y in list(out))
    return out
