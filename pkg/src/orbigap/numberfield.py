"""Number fields presented by a monic irreducible integer polynomial.

The ring model is the equation order Z[theta].  Rational primes dividing
disc(f) twice (or dividing disc(f)/Delta_K when the true field
discriminant is supplied), together with 2, are globally excluded from
splitting computations; Dedekind factorization through factor_mod_p is
valid away from that set.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .errors import (
    DenominatorNotCoprime,
    DiscriminantMismatch,
    DiscriminantUnknown,
    ExcludedPrime,
    InvalidInput,
    NotCoprime,
    PrecisionExhausted,
    Reducible,
    UndecidedIrreducibility,
)
from .intervals import eval_poly_box, eval_poly_interval, interval_prec, interval_width, ivf
from .isolation import DEFAULT_CAP_BITS, isolate_complex_roots
from .polynomials import (
    FiniteFieldElement,
    IntPolynomial,
    ModPolynomial,
    count_real_roots,
    discriminant,
    factor_degrees,
    factor_mod_p,
    is_irreducible_mod_p,
    is_probable_prime,
    parse_polynomial,
)

_IRRED_PRIME_TRIALS = 25
_FACTOR_SEARCH_BUDGET = 2_000_000
_RATIONAL_ROOT_HEIGHT = 10_000


class NumberField:
    """Field K = Q[x]/(f) with cached splitting data.

    Immutable identity (defining polynomial, discriminant data); the
    factorization and root-box caches are internally synchronized and
    transparent.
    """

    def __init__(self, poly, disc_poly, field_disc, signature, excluded, declared_splitting):
        self.poly = poly
        self.degree = poly.degree
        self.disc_poly = disc_poly
        self.field_disc = field_disc
        self.signature = signature
        self.excluded = frozenset(excluded)
        self.declared_splitting = dict(declared_splitting or {})
        self._factor_cache = {}
        self._pattern_cache = {}
        self._box_cache = {}
        self._lock = threading.Lock()

    def __eq__(self, other):
        return (
            isinstance(other, NumberField)
            and self.poly == other.poly
            and self.field_disc == other.field_disc
        )

    def __hash__(self):
        return hash(("NumberField", self.poly.coeffs, self.field_disc))

    def __repr__(self):
        return f"NumberField({self.poly})"

    @property
    def r1(self):
        return self.signature[0]

    @property
    def r2(self):
        return self.signature[1]

    def one(self):
        return FieldElement(self, IntPolynomial((1,)), 1)

    def generator(self):
        if self.degree == 1:
            return FieldElement(self, IntPolynomial(()), 1)
        return FieldElement(self, IntPolynomial((0, 1)), 1)

    def element(self, numer, denom=1):
        return FieldElement(self, numer, denom)

    def integer(self, n):
        return FieldElement(self, IntPolynomial((n,)), 1)

    # -- splitting ---------------------------------------------------------

    def factorization_mod_p(self, p):
        """Full factorization of f mod p with multiplicities (cached)."""
        with self._lock:
            got = self._factor_cache.get(p)
        if got is None:
            got = factor_mod_p(self.poly, p)
            with self._lock:
                self._factor_cache[p] = got
        return got

    def factor_pattern(self, p):
        """One (inertia degree, multiplicity) pair per distinct factor of
        f mod p, sorted; avoids the randomized equal-degree step, for bulk
        scans."""
        if self.degree == 1:
            return ((1, 1),)
        with self._lock:
            got = self._pattern_cache.get(p)
            if got is None and p in self._factor_cache:
                got = tuple(sorted((g.degree, e) for g, e in self._factor_cache[p]))
                self._pattern_cache[p] = got
        if got is None:
            got = factor_degrees(self.poly, p)
            with self._lock:
                self._pattern_cache[p] = got
        return got

    def is_unramified(self, p):
        return all(e == 1 for _, e in self.factor_pattern(p))

    # -- archimedean places ------------------------------------------------

    def place_boxes(self, bits, cap_bits=DEFAULT_CAP_BITS):
        """Certified root boxes split into real intervals and one complex
        box per conjugate pair (upper half plane), cached per precision."""
        with self._lock:
            got = self._box_cache.get(bits)
        if got is not None:
            return got
        work = bits
        while True:
            boxes = isolate_complex_roots(self.poly, work, cap_bits=cap_bits)
            real = [b for b in boxes if b.meets_real_axis()]
            if len(real) == self.r1:
                break
            if work >= cap_bits:
                raise PrecisionExhausted(
                    f"cannot separate real and complex roots of {self.poly}"
                )
            work = min(2 * work, cap_bits)
        real.sort(key=lambda b: b.midpoint().real)
        upper = [b for b in boxes if not b.meets_real_axis() and b.midpoint().imag > 0]
        upper.sort(key=lambda b: (b.midpoint().real, b.midpoint().imag))
        got = (tuple(b.re for b in real), tuple(upper))
        with self._lock:
            self._box_cache[bits] = got
        return got

    def real_places(self):
        return tuple(RealPlace(self, i) for i in range(self.r1))

    def complex_places(self):
        return tuple(ComplexPlace(self, i) for i in range(self.r2))

    def complex_place(self):
        if self.r2 != 1:
            raise InvalidInput(f"field has {self.r2} complex places, expected exactly 1")
        return ComplexPlace(self, 0)


@dataclass(frozen=True)
class RealPlace:
    field: NumberField
    index: int

    def label(self):
        return f"real{self.index}"


@dataclass(frozen=True)
class ComplexPlace:
    field: NumberField
    index: int

    def label(self):
        return f"complex{self.index}"


class FieldElement:
    """Element of K as a polynomial in the generator over a positive
    integer denominator, reduced mod the defining polynomial."""

    __slots__ = ("field", "numer", "denom")

    def __init__(self, field, numer, denom=1):
        if denom == 0:
            raise InvalidInput("zero denominator")
        if denom < 0:
            numer, denom = -numer, -denom
        if numer.degree >= field.degree:
            _, numer = numer.divmod_exact(field.poly)
        g = math.gcd(numer.content(), denom)
        if g > 1:
            numer = IntPolynomial(c // g for c in numer.coeffs)
            denom //= g
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "denom", denom)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def is_zero(self):
        return self.numer.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.numer == other.numer
            and self.denom == other.denom
        )

    def __hash__(self):
        return hash(("FieldElement", self.numer.coeffs, self.denom))

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(
            self.field,
            self.numer * other.denom + other.numer * self.denom,
            self.denom * other.denom,
        )

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(
            self.field,
            self.numer * other.denom - other.numer * self.denom,
            self.denom * other.denom,
        )

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.numer * other.numer, self.denom * other.denom)

    def __neg__(self):
        return FieldElement(self.field, -self.numer, self.denom)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidInput("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.integer(other)
        raise InvalidInput(f"cannot coerce {other!r} into the field")

    def as_rational(self):
        """Fraction value if the element is rational, else None."""
        if self.numer.degree > 0:
            return None
        c = self.numer.coeffs[0] if self.numer.coeffs else 0
        return Fraction(c, self.denom)

    def __str__(self):
        body = format_element(self.numer)
        if self.denom == 1:
            return body
        return f"({body}) / {self.denom}"

    def __repr__(self):
        return f"FieldElement({self})"


def format_element(numer):
    from .polynomials import format_polynomial

    return format_polynomial(numer.coeffs, var="a")


def parse_element(field, text):
    """Parse a field element: polynomial in the generator symbol 'a',
    optionally followed by '/ <positive integer>'."""
    text = text.strip()
    denom = 1
    if "/" in text:
        body, _, den_text = text.rpartition("/")
        try:
            denom = int(den_text.strip())
        except ValueError as exc:
            raise InvalidInput(f"bad denominator in {text!r}") from exc
        text = body.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
    poly = parse_polynomial(text, var="a") if not _is_bare_int(text) else IntPolynomial((int(text),))
    if poly.degree >= field.degree:
        _, poly = poly.divmod_exact(field.poly)
    return FieldElement(field, poly, denom)


def _is_bare_int(text):
    t = text.strip()
    if t.startswith(("+", "-")):
        t = t[1:]
    return t.isdigit()


@dataclass(frozen=True)
class PrimeIdeal:
    """Prime of the equation order, labeled (p, index into the sorted
    factor list of f mod p)."""

    field: NumberField
    p: int
    index: int
    factor: ModPolynomial

    @property
    def inertia_degree(self):
        return self.factor.degree

    @property
    def norm(self):
        return self.p ** self.factor.degree

    @property
    def label(self):
        return f"{self.p}:{self.index}"

    def __eq__(self, other):
        return (
            isinstance(other, PrimeIdeal)
            and self.field == other.field
            and self.p == other.p
            and self.index == other.index
        )

    def __hash__(self):
        return hash(("PrimeIdeal", self.p, self.index, self.field.poly.coeffs))

    def __repr__(self):
        return f"PrimeIdeal({self.label}, norm={self.norm})"


# ---------------------------------------------------------------------------
# Field construction
# ---------------------------------------------------------------------------

def make_field(poly, field_disc=None, declared_splitting=None):
    """Build a NumberField from a monic irreducible integer polynomial.

    Irreducibility is checked by mod-p certificates at several primes, a
    rational-root search, a degree-pattern sieve and a Mignotte-bounded
    factor search; Reducible is raised when a factorization is found and
    UndecidedIrreducibility if every route is exhausted inconclusively.
    """
    if isinstance(poly, str):
        poly = parse_polynomial(poly)
    if poly.degree < 1:
        raise InvalidInput("defining polynomial must have degree >= 1")
    if not poly.is_monic():
        raise InvalidInput("defining polynomial must be monic")
    _check_irreducible(poly)
    disc_poly = discriminant(poly)
    if disc_poly == 0:
        raise InvalidInput("defining polynomial is not squarefree")
    r1 = count_real_roots(poly)
    r2 = (poly.degree - r1) // 2

    if field_disc is not None:
        if field_disc == 0 or disc_poly % field_disc != 0:
            raise DiscriminantMismatch(
                f"supplied discriminant {field_disc} does not divide disc(f) = {disc_poly}"
            )
        quotient = disc_poly // field_disc
        root = math.isqrt(quotient) if quotient > 0 else -1
        if root * root != quotient:
            raise DiscriminantMismatch(
                f"disc(f)/Delta = {quotient} is not a perfect square"
            )
        excluded = {2} | set(_prime_factors(root))
    else:
        square_primes = _square_part_primes(abs(disc_poly))
        if square_primes:
            excluded = {2} | square_primes
            field_disc = None
        else:
            excluded = {2}
            field_disc = disc_poly

    field = NumberField(poly, disc_poly, field_disc, (r1, r2), excluded, declared_splitting)
    _validate_declared_splitting(field)
    return field


def _validate_declared_splitting(field):
    for p, norms in field.declared_splitting.items():
        if p not in field.excluded:
            raise InvalidInput(f"declared splitting at non-excluded prime {p}")
        total = 0
        for n in norms:
            f = _perfect_power_of(n, p)
            if f is None:
                raise InvalidInput(f"declared norm {n} is not a power of {p}")
            total += f
        if not 1 <= total <= field.degree:
            raise InvalidInput(f"declared splitting at {p} has impossible degree sum {total}")


def _perfect_power_of(n, p):
    f = 0
    while n > 1 and n % p == 0:
        n //= p
        f += 1
    return f if n == 1 and f >= 1 else None


def _prime_factors(n):
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


def _square_part_primes(n, trial_bound=1_000_000):
    """Primes p with p*p dividing n; raises if n is too opaque to classify."""
    out = set()
    for p in range(2, trial_bound + 1):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e >= 2:
                out.add(p)
    if n == 1 or is_probable_prime(n):
        return out
    root = math.isqrt(n)
    if root * root == n and is_probable_prime(root):
        out.add(root)
        return out
    cbrt = round(n ** (1 / 3))
    for c in (cbrt - 1, cbrt, cbrt + 1):
        if c > 1 and c ** 3 == n and is_probable_prime(c):
            out.add(c)
            return out
    if n < trial_bound ** 3:
        # no factor below the bound and not a perfect power: product of
        # two distinct large primes, hence squarefree
        return out
    raise DiscriminantUnknown(
        f"cannot certify the square part of disc(f) = {n}; supply the field discriminant"
    )


def _check_irreducible(poly):
    n = poly.degree
    if n == 1:
        return
    if poly.coeffs[0] == 0:
        raise Reducible("x divides the defining polynomial")
    patterns = []
    p = 2
    trials = 0
    while trials < _IRRED_PRIME_TRIALS:
        fp = ModPolynomial.from_int_poly(poly, p)
        if fp.degree == n and fp.gcd(fp.derivative()).degree == 0:
            trials += 1
            if is_irreducible_mod_p(fp):
                return
            patterns.append([d for d, count in factor_degrees(poly, p) for _ in range(count)])
        p = _next_prime(p)
    _rational_root_search(poly)
    possible = set()
    for d in range(2, n // 2 + 1):
        if all(_subset_sum(pattern, d) for pattern in patterns):
            possible.add(d)
    if not possible:
        return
    for d in sorted(possible):
        _bounded_factor_search(poly, d)
    # every surviving degree was searched exhaustively within its
    # Mignotte bound, so no proper factor exists
    return


def _next_prime(p):
    p += 1
    while not is_probable_prime(p):
        p += 1
    return p


def _subset_sum(values, target):
    reachable = 1  # bitset
    for v in values:
        reachable |= reachable << v
    return bool((reachable >> target) & 1)


def _rational_root_search(poly):
    const = abs(poly.coeffs[0])
    if const == 0:
        raise Reducible("x divides the defining polynomial")
    if const <= 10 ** 12:
        divs = {1}
        for p in _prime_factors(const):
            e = 0
            q = const
            while q % p == 0:
                q //= p
                e += 1
            divs = {a * p ** i for a in divs for i in range(e + 1)}
        divisors = {d for d in divs if d <= _RATIONAL_ROOT_HEIGHT or d == const}
    else:
        divisors = {d for d in range(1, _RATIONAL_ROOT_HEIGHT + 1) if const % d == 0}
    for d in sorted(divisors):
        for root in (d, -d):
            if poly.evaluate(root) == 0:
                raise Reducible(f"rational root {root}")


def _bounded_factor_search(poly, d):
    norm2 = math.isqrt(sum(c * c for c in poly.coeffs)) + 1
    bound = math.comb(d, d // 2) * norm2
    count = (2 * bound + 1) ** d
    if count > _FACTOR_SEARCH_BUDGET:
        raise UndecidedIrreducibility(
            f"degree-{d} factor search needs {count} candidates (budget {_FACTOR_SEARCH_BUDGET})"
        )
    span = range(-bound, bound + 1)
    for tail in itertools.product(span, repeat=d):
        candidate = IntPolynomial(list(tail) + [1])
        _, rem = poly.divmod_exact(candidate)
        if rem.is_zero():
            raise Reducible(f"factor {candidate}")


# ---------------------------------------------------------------------------
# Prime splitting and evaluation
# ---------------------------------------------------------------------------

def factor_prime(field, p):
    """Prime ideals above a non-excluded rational prime, one per distinct
    irreducible factor of f mod p, in canonical (degree, coeffs) order."""
    if p in field.excluded:
        raise ExcludedPrime(f"{p} is excluded for {field}")
    if not is_probable_prime(p):
        raise InvalidInput(f"{p} is not prime")
    factors = field.factorization_mod_p(p)
    return tuple(
        PrimeIdeal(field, p, i, g) for i, (g, _) in enumerate(factors)
    )


def prime_from_label(field, label):
    """Parse a "p:index" prime ideal label."""
    try:
        p_text, _, idx_text = label.partition(":")
        p, idx = int(p_text), int(idx_text)
    except ValueError as exc:
        raise InvalidInput(f"bad prime label {label!r}") from exc
    ideals = factor_prime(field, p)
    if not 0 <= idx < len(ideals):
        raise InvalidInput(f"no prime ideal with label {label!r}")
    return ideals[idx]


def residue_norm_mod(prime, m):
    """N(P) mod m; requires gcd(N(P), m) = 1."""
    if m < 1:
        raise InvalidInput("modulus must be positive")
    if m % prime.p == 0:
        raise NotCoprime(f"norm of {prime.label} shares the factor {prime.p} with {m}")
    return pow(prime.p, prime.inertia_degree, m)


def reduce_mod_prime(x, prime):
    """Image of a field element in the residue field of P."""
    p = prime.p
    if x.denom % p == 0:
        raise DenominatorNotCoprime(
            f"denominator {x.denom} not invertible mod {p}"
        )
    inv_den = pow(x.denom % p, -1, p)
    value = (ModPolynomial.from_int_poly(x.numer, p) % prime.factor) * inv_den
    return FiniteFieldElement(p, prime.factor, value)


def reduce_mod_prime_int(x, prime):
    """Fast path for degree-1 primes: the residue as a plain integer."""
    p = prime.p
    if x.denom % p == 0:
        raise DenominatorNotCoprime(f"denominator {x.denom} not invertible mod {p}")
    root = (-prime.factor.coeffs[0]) % p if prime.factor.degree == 1 else None
    if root is None:
        raise InvalidInput("reduce_mod_prime_int needs a degree-1 prime")
    val = 0
    for c in reversed(x.numer.coeffs):
        val = (val * root + c) % p
    return (val * pow(x.denom % p, -1, p)) % p


def evaluate_at_place(x, place, precision_bits, cap_bits=DEFAULT_CAP_BITS):
    """Certified image of a field element at an archimedean place.

    Returns a real interval (RealPlace) or a ComplexBox (ComplexPlace) of
    width at most 2**-precision_bits.
    """
    field = x.field
    target = mpf(2) ** (-precision_bits)
    work = max(64, precision_bits + 32)
    while True:
        real_boxes, complex_boxes = field.place_boxes(work, cap_bits=cap_bits)
        with interval_prec(work):
            if isinstance(place, RealPlace):
                val = eval_poly_interval(x.numer.coeffs, real_boxes[place.index]) / ivf(x.denom)
                width = interval_width(val)
            elif isinstance(place, ComplexPlace):
                val = eval_poly_box(x.numer.coeffs, complex_boxes[place.index]).scale_down(x.denom)
                width = val.width()
            else:
                raise InvalidInput(f"not a place: {place!r}")
        if width <= target:
            return val
        if work >= cap_bits:
            raise PrecisionExhausted(
                f"cannot evaluate {x} at {place} to {precision_bits} bits"
            )
        work = min(2 * work, cap_bits)
