"""Borel covolume evaluation and trace-to-geodesic conversion.

The Dedekind zeta value at 2 is a truncated Euler product with a rigorous
tail bound: the log of the missing factor is at most n_K / (X - 1) for
cutoff X.  At excluded primes the local factor either follows a declared
splitting or is bracketed between the totally split and inert extremes,
which keeps the output interval rigorous without maximal-order machinery.

All transcendental arithmetic is binary interval arithmetic with directed
rounding; reported decimals are interval midpoints with the radius shown.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv, mpf

from .errors import (
    DiscriminantUnknown,
    InvalidInput,
    NotLoxodromic,
    PrecisionExhausted,
    UnknownNorm,
)
from .intervals import (
    ComplexBox,
    DEFAULT_PRECISION,
    arg_interval,
    contains_zero,
    interval_prec,
    interval_width,
    is_exact_zero,
    ivf,
    sqrt_upper,
    wrap_angle,
)
from .isolation import DEFAULT_CAP_BITS
from .numberfield import ComplexPlace, evaluate_at_place
from .sieve import primes_up_to

DEFAULT_ZETA_CUTOFF = 1_000_000


@dataclass(frozen=True)
class ZetaValue:
    """Truncated Euler product for zeta_K(2) with rigorous error bound."""

    interval: object  # iv.mpf enclosure of the true value
    cutoff: int
    precision_bits: int
    tail_log_bound: object  # mpf

    @property
    def value(self):
        return self.interval.mid.a

    @property
    def error(self):
        return mpf(self.interval.delta.b)

    def to_dict(self):
        from mpmath import nstr

        return {
            "midpoint": nstr(self.value, 25),
            "radius": nstr(self.error / 2, 8),
            "cutoff": self.cutoff,
            "precision_bits": self.precision_bits,
            "tail_log_bound": nstr(self.tail_log_bound, 8),
        }


def _local_factor(p, pattern):
    # one Euler factor per distinct prime above p; the ramification
    # multiplicity never enters the factor
    one = iv.mpf(1)
    out = one
    ivp = ivf(p)
    for degree, _mult in pattern:
        out = out * (one / (one - one / ivp ** (2 * degree)))
    return out


def _excluded_local_factor(field, p):
    declared = field.declared_splitting.get(p)
    one = iv.mpf(1)
    if declared is not None:
        out = one
        for norm in declared:
            out = out * (one / (one - one / ivf(norm) ** 2))
        return out
    n = field.degree
    ivp = ivf(p)
    inert = one / (one - one / ivp ** (2 * n))
    split = (one / (one - one / ivp ** 2)) ** n
    return iv.mpf([inert.a, split.b])


def dedekind_zeta_2(field, cutoff=DEFAULT_ZETA_CUTOFF, precision_bits=DEFAULT_PRECISION):
    """Euler product for zeta_K(2) over p <= cutoff, as a rigorous interval.

    Splitting data comes from the factorization of f mod p; at excluded
    primes the declared or bracketed local factor is used.  The tail is
    absorbed into the interval via log-tail <= n_K / (cutoff - 1).
    """
    if cutoff < 100:
        raise InvalidInput("zeta cutoff must be at least 100")
    with interval_prec(precision_bits):
        product = iv.mpf(1)
        for p in primes_up_to(cutoff):
            p = int(p)
            if p in field.excluded:
                local = _excluded_local_factor(field, p)
            else:
                local = _local_factor(p, field.factor_pattern(p))
            product = product * local
        tail = ivf(field.degree) / ivf(cutoff - 1)
        tail_factor = iv.exp(iv.mpf([0, tail.b]))
        enclosure = product * tail_factor
        enclosure = iv.mpf([product.a, enclosure.b])
        return ZetaValue(enclosure, cutoff, precision_bits, mpf(tail.b))


@dataclass(frozen=True)
class BorelVolume:
    """Covolume of the norm-one unit group of a maximal order.

    The transcendental part (discriminant, zeta, powers of pi) is an
    interval; the product over finite ramified primes of (N(P) - 1) is
    kept as an exact integer so ratios cancel symbolically.
    """

    interval: object
    field_factor: object
    norm_product: int
    zeta: ZetaValue

    @property
    def value(self):
        return self.interval.mid.a

    @property
    def radius(self):
        return mpf(self.interval.delta.b) / 2

    def to_dict(self):
        from mpmath import nstr

        return {
            "midpoint": nstr(self.value, 25),
            "radius": nstr(self.radius, 8),
            "norm_product": self.norm_product,
            "zeta": self.zeta.to_dict(),
        }


def ramification_norm_product(ram):
    """Exact product of (N(P) - 1) over the finite ramified places."""
    out = 1
    for prime in ram.primes:
        out *= prime.norm - 1
    for op in ram.opaque:
        if op.norm is None:
            raise UnknownNorm(f"opaque place {op.token} lacks a declared norm")
        out *= op.norm - 1
    return out


def borel_volume(field, ram, zeta=None, precision_bits=DEFAULT_PRECISION,
                 cutoff=DEFAULT_ZETA_CUTOFF):
    """|Delta_K|^(3/2) zeta_K(2) (4 pi^2)^(1 - n_K) * prod (N(P) - 1)."""
    if field.field_disc is None:
        raise DiscriminantUnknown(
            "Borel volume needs the exact field discriminant; supply it at field construction"
        )
    if zeta is None:
        zeta = dedekind_zeta_2(field, cutoff, precision_bits)
    norm_product = ramification_norm_product(ram)
    with interval_prec(precision_bits):
        disc_pow = iv.sqrt(ivf(abs(field.field_disc)) ** 3)
        pi_pow = (4 * iv.pi ** 2) ** (field.degree - 1)
        field_factor = disc_pow * zeta.interval / pi_pow
        interval = field_factor * ivf(norm_product)
    return BorelVolume(interval, field_factor, norm_product, zeta)


def volume_ratio(vol_num, vol_den):
    """Exact rational ratio of two volumes over the same field: the zeta and
    field factors cancel symbolically, leaving the (N - 1) products."""
    return Fraction(vol_num.norm_product, vol_den.norm_product)


@dataclass(frozen=True)
class GeodesicDatum:
    """Certified geodesic data of a loxodromic trace.

    length = 2 log |lambda| where lambda is the larger root of
    z^2 - t z + 1 at the complex place; the holonomy angle is arg(lambda^2)
    reported as (midpoint in (-pi, pi], radius), read mod 2 pi.
    """

    trace: object
    radicand: object
    lam: ComplexBox
    length: object  # iv.mpf
    theta_mid: object  # mpf
    theta_radius: object  # mpf

    @property
    def length_mid(self):
        return self.length.mid.a

    def to_dict(self):
        from mpmath import nstr

        return {
            "trace": str(self.trace),
            "radicand": str(self.radicand),
            "length_mid": nstr(self.length_mid, 25),
            "length_radius": nstr(mpf(self.length.delta.b) / 2, 8),
            "theta_mid": nstr(self.theta_mid, 25),
            "theta_radius": nstr(self.theta_radius, 8),
        }


def _quadratic_roots(tau):
    """Enclosures of the two roots of z^2 - tau z + 1 for a complex box tau.

    Uses the square root of W = tau^2 - 4 decomposed in real interval
    arithmetic: sqrt(W) = s + i t with s = sqrt((|W|+u)/2) and
    t = sign(v) sqrt((|W|-u)/2).  When the sign of v is undecided, the
    small component of the root (t near the positive real axis, s near the
    negative one) is symmetrized; the enclosure then covers sqrt(W) or
    -sqrt(W), and since a branch flip only swaps the two roots, the
    returned pair of boxes always covers the root set.  Returns (None,
    None) when W may contain 0 (caller escalates).
    """
    w = tau * tau - 4
    u, v = w.re, w.im
    absw = iv.sqrt(u ** 2 + v ** 2)
    s = sqrt_upper((absw + u) / 2)
    t = sqrt_upper((absw - u) / 2)
    if v.a > 0:
        root = ComplexBox(s, t)
    elif v.b < 0:
        root = ComplexBox(s, -t)
    elif u.a > 0:
        root = ComplexBox(s, iv.mpf([(-t).a, t.b]))
    elif u.b < 0:
        root = ComplexBox(iv.mpf([(-s).a, s.b]), t)
    else:
        return None, None
    half = ivf(2)
    lam1 = ComplexBox((tau.re + root.re) / half, (tau.im + root.im) / half)
    lam2 = ComplexBox((tau.re - root.re) / half, (tau.im - root.im) / half)
    return lam1, lam2


def trace_to_geodesic(field, trace, precision_bits=64, cap_bits=DEFAULT_CAP_BITS):
    """Geodesic length and holonomy of a loxodromic trace at the complex place.

    Raises NotLoxodromic when the image of the trace is certified to lie on
    the real segment [-2, 2], PrecisionExhausted when loxodromy or the
    output width cannot be certified at the precision cap.
    """
    place = field.complex_place()
    target = mpf(2) ** (-precision_bits)
    work = max(64, precision_bits + 32)
    radicand = trace * trace - field.integer(4)
    while True:
        tau = evaluate_at_place(trace, place, work, cap_bits=cap_bits)
        with interval_prec(work):
            meets_segment = (
                contains_zero(tau.im)
                and not (tau.re.a > 2 or tau.re.b < -2)
            )
            if meets_segment:
                if is_exact_zero(tau.im) and -2 <= tau.re.a and tau.re.b <= 2:
                    raise NotLoxodromic(
                        f"trace image {tau.re} lies on the real segment [-2, 2]"
                    )
            else:
                lam1, lam2 = _quadratic_roots(tau)
                lam = None
                if lam1 is not None and lam1.abs_lower() > 1:
                    lam = lam1
                elif lam2 is not None and lam2.abs_lower() > 1:
                    lam = lam2
                if lam is not None:
                    mod = lam.abs()
                    length = 2 * iv.log(mod)
                    theta = 2 * arg_interval(lam)
                    theta_mid, theta_radius = wrap_angle(theta)
                    if interval_width(length) <= target and 2 * theta_radius <= target:
                        return GeodesicDatum(
                            trace, radicand, lam, length, theta_mid, theta_radius
                        )
        if work >= cap_bits:
            raise PrecisionExhausted(
                f"loxodromy/geodesic certification failed for trace {trace} at {cap_bits} bits"
            )
        work = min(2 * work, cap_bits)


@dataclass(frozen=True)
class VolumeReport:
    """Base covolume plus one volume per constructed algebra."""

    base: BorelVolume
    volumes: tuple  # ((label, BorelVolume), ...)

    def span_interval(self):
        if not self.volumes:
            return iv.mpf(0)
        products = [v.norm_product for _, v in self.volumes]
        spread = max(products) - min(products)
        return self.base.field_factor * ivf(spread)

    def to_dict(self):
        from mpmath import nstr

        span = self.span_interval()
        return {
            "base": self.base.to_dict(),
            "per_algebra": [
                {"label": label, **vol.to_dict()} for label, vol in self.volumes
            ],
            "span_mid": nstr(span.mid.a, 25),
            "span_radius": nstr(mpf(span.delta.b) / 2, 8),
        }
