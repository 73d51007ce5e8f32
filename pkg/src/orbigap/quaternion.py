"""Quaternion algebras over K modeled by their ramification sets.

A ramification set (real place indices, finite primes, optional opaque
labels for places the field model cannot compute, e.g. dyadic primes) is
a complete isomorphism invariant, so the algebra type simply wraps it.
Total cardinality must be even.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import (
    AlreadyRamified,
    InvalidInput,
    OddRamification,
    RamFEmpty,
    SamePrime,
    UncheckablePlace,
)
from .splitting import (
    SplitSymbol,
    cyclotomic_quadratic_degrees,
    split_symbol,
    split_symbol_real,
)


@dataclass(frozen=True)
class OpaquePlace:
    """User-declared ramified place at an excluded prime; norm optional."""

    token: str
    norm: int | None = None

    def __str__(self):
        return self.token if self.norm is None else f"{self.token}@{self.norm}"


@dataclass(frozen=True)
class RamificationSet:
    field: object
    real_places: tuple
    primes: tuple
    opaque: tuple

    @property
    def cardinality(self):
        return len(self.real_places) + len(self.primes) + len(self.opaque)

    def finite_count(self):
        return len(self.primes) + len(self.opaque)

    def labels(self):
        return (
            tuple(f"real{i}" for i in self.real_places)
            + tuple(p.label for p in self.primes)
            + tuple(str(o) for o in self.opaque)
        )

    def __str__(self):
        return "{" + ", ".join(self.labels()) + "}"


def make_ramification_set(field, real_places=(), primes=(), opaque=()):
    real_places = tuple(sorted(set(int(i) for i in real_places)))
    for i in real_places:
        if not 0 <= i < field.r1:
            raise InvalidInput(f"real place index {i} out of range (r1 = {field.r1})")
    seen = set()
    prime_list = []
    for prime in primes:
        if prime.field != field:
            raise InvalidInput("ramified prime belongs to a different field")
        key = (prime.p, prime.index)
        if key in seen:
            raise InvalidInput(f"duplicate ramified prime {prime.label}")
        seen.add(key)
        prime_list.append(prime)
    prime_list.sort(key=lambda q: (q.norm, q.p, q.index))
    tokens = set()
    opaque_list = []
    for op in opaque:
        if isinstance(op, str):
            op = parse_opaque(op)
        if op.token in tokens:
            raise InvalidInput(f"duplicate opaque label {op.token}")
        tokens.add(op.token)
        opaque_list.append(op)
    opaque_list.sort(key=lambda o: o.token)
    ram = RamificationSet(field, real_places, tuple(prime_list), tuple(opaque_list))
    if ram.cardinality % 2 != 0:
        raise OddRamification(
            f"ramification set {ram} has odd cardinality {ram.cardinality}"
        )
    return ram


def parse_opaque(text):
    token, sep, norm_text = text.partition("@")
    if not sep:
        return OpaquePlace(token.strip())
    try:
        return OpaquePlace(token.strip(), int(norm_text))
    except ValueError as exc:
        raise InvalidInput(f"bad opaque place {text!r}") from exc


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The K-quaternion algebra with the given ramification set."""

    ram: RamificationSet

    @property
    def field(self):
        return self.ram.field

    def __str__(self):
        return f"B(Ram = {self.ram})"


def algebra(field, real_places=(), primes=(), opaque=()):
    return QuaternionAlgebra(make_ramification_set(field, real_places, primes, opaque))


def is_kleinian_admissible(B):
    """True when K has exactly one complex place and every real place is
    ramified; the reasons list names each violated condition."""
    field = B.field
    reasons = []
    if field.r2 != 1:
        reasons.append(f"field has {field.r2} complex places, need exactly 1")
    missing = [i for i in range(field.r1) if i not in B.ram.real_places]
    for i in missing:
        reasons.append(f"real place {i} unramified")
    return (not reasons), tuple(reasons)


def is_division(B):
    """Division algebra exactly when the ramification set is nonempty."""
    return B.ram.cardinality > 0


@dataclass(frozen=True)
class EmbeddingCertificate:
    extension_label: str
    admits: bool
    places: tuple  # ((place label, symbol value), ...)

    def to_dict(self):
        return {
            "extension": self.extension_label,
            "admits": self.admits,
            "places": [[label, symbol] for label, symbol in self.places],
        }


def admits_embedding(B, extension):
    """Albert-Brauer-Hasse-Noether criterion: the quadratic extension embeds
    iff no ramified place of B splits in it.  Certificate lists the symbol
    at every ramified place."""
    if B.ram.opaque:
        raise UncheckablePlace(
            f"opaque ramified places {[str(o) for o in B.ram.opaque]} cannot be checked"
        )
    entries = []
    admits = True
    for i in B.ram.real_places:
        place = B.field.real_places()[i]
        symbol = split_symbol_real(place, extension)
        entries.append((place.label(), symbol.value))
        if symbol is SplitSymbol.SPLIT:
            admits = False
    for prime in B.ram.primes:
        symbol = split_symbol(prime, extension)
        entries.append((prime.label, symbol.value))
        if symbol is SplitSymbol.SPLIT:
            admits = False
    return EmbeddingCertificate(extension.label, admits, tuple(entries))


def extend_ramification(B, p0, pi):
    """The algebra with Ram(B) plus the two given primes."""
    if p0 == pi:
        raise SamePrime(f"{p0.label} added twice")
    for prime in (p0, pi):
        if any(prime == q for q in B.ram.primes):
            raise AlreadyRamified(f"{prime.label} already ramified")
    new = make_ramification_set(
        B.field,
        B.ram.real_places,
        B.ram.primes + (p0, pi),
        B.ram.opaque,
    )
    return QuaternionAlgebra(new)


@dataclass(frozen=True)
class CommensurabilityClass:
    """Invariant pair (trace field by canonical polynomial, algebra)."""

    poly_coeffs: tuple
    field_disc: int | None
    signature: tuple
    ram_labels: tuple


def commensurability_class(B):
    field = B.field
    return CommensurabilityClass(
        field.poly.coeffs, field.field_disc, field.signature, B.ram.labels()
    )


def same_commensurability_class(c1, c2):
    """Equality of (canonical defining polynomial, labeled ramification set).

    Isomorphic fields presented by different polynomials compare unequal;
    a warning fires when the numeric invariants nevertheless match.
    """
    if isinstance(c1, QuaternionAlgebra):
        c1 = commensurability_class(c1)
    if isinstance(c2, QuaternionAlgebra):
        c2 = commensurability_class(c2)
    if c1.poly_coeffs != c2.poly_coeffs:
        if (
            len(c1.poly_coeffs) == len(c2.poly_coeffs)
            and c1.signature == c2.signature
            and c1.field_disc is not None
            and c1.field_disc == c2.field_disc
        ):
            warnings.warn(
                "fields with matching degree, signature and discriminant but "
                "different defining polynomials are treated as distinct",
                stacklevel=2,
            )
        return False
    return c1.ram_labels == c2.ram_labels


@dataclass(frozen=True)
class TorsionRow:
    n: int
    witness: str | None  # label of a ramified prime splitting in K(zeta_n)

    def to_dict(self):
        return {"n": self.n, "witness": self.witness}


@dataclass(frozen=True)
class TorsionReport:
    ok: bool
    rows: tuple
    n_max: int
    height: int

    def to_dict(self):
        return {
            "torsion_free": self.ok,
            "n_max": self.n_max,
            "height": self.height,
            "rows": [r.to_dict() for r in self.rows],
        }


def default_cyclotomic_bound(field):
    # [K(zeta_n):K] = 2 forces phi(n) <= 2 n_K, and phi(n) >= sqrt(n/2)
    return max(12, 8 * field.degree * field.degree)


def torsion_free_check(B, n_max=None, height=10_000):
    """Check that every quadratic cyclotomic extension of K has a splitting
    witness among the finite ramified primes (norm = 1 mod n).

    Witnesses require a known norm coprime to n; opaque places without a
    declared norm and primes with gcd(N, n) > 1 never witness (the
    conservative direction).
    """
    field = B.field
    if B.ram.finite_count() == 0:
        raise RamFEmpty("torsion criterion needs a finite ramified place")
    if n_max is None:
        n_max = default_cyclotomic_bound(field)
    ns = cyclotomic_quadratic_degrees(field, n_max, height)
    norms = [(p.label, p.norm) for p in B.ram.primes]
    norms += [(str(o), o.norm) for o in B.ram.opaque if o.norm is not None]
    rows = []
    ok = True
    for n in ns:
        witness = None
        for label, norm in norms:
            if _gcd(norm, n) != 1:
                continue
            if norm % n == 1:
                witness = label
                break
        if witness is None:
            ok = False
        rows.append(TorsionRow(n, witness))
    return TorsionReport(ok, tuple(rows), n_max, height)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
