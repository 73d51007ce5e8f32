"""Certified real intervals and rectangular complex boxes.

Real intervals are mpmath's ``iv.mpf`` (binary interval arithmetic with
directed rounding); complex enclosures are axis-aligned rectangles built
from two real intervals.  The mpmath interval context carries a global
precision, so every entry point here runs inside :func:`interval_prec`.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv, mp, mpf

from .errors import InvalidInput

DEFAULT_PRECISION = 128


@contextmanager
def interval_prec(bits):
    """Temporarily set the interval working precision (bits)."""
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def ivf(x):
    """Exact conversion of int / Fraction / str / mpf into an enclosing interval."""
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    return iv.mpf(x)


def interval_width(x):
    return mpf(x.delta.b)


def contains_zero(x):
    return x.a <= 0 <= x.b


def is_exact_zero(x):
    return x.a == 0 and x.b == 0


def sign_certified(x):
    """+1 or -1 when the interval excludes 0, else None."""
    if x.a > 0:
        return 1
    if x.b < 0:
        return -1
    return None


def hull(x, y):
    return iv.mpf([min(x.a, y.a), max(x.b, y.b)])


def sqrt_upper(x):
    """Interval sqrt tolerating slightly negative lower endpoints (clamped)."""
    if x.b < 0:
        raise InvalidInput("sqrt of a negative interval")
    lo = x.a if x.a > 0 else iv.mpf(0)
    return iv.sqrt(hull(lo, iv.mpf(x.b)))


class ComplexBox:
    """Axis-aligned rectangle {re + i*im} with interval sides."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        object.__setattr__(self, "re", re if hasattr(re, "a") else ivf(re))
        object.__setattr__(self, "im", im if hasattr(im, "a") else ivf(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexBox is immutable")

    @classmethod
    def point(cls, z):
        return cls(iv.mpf(z.real), iv.mpf(z.imag))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return ComplexBox(self.re + ivf(other), self.im)
        if isinstance(other, ComplexBox):
            return ComplexBox(self.re + other.re, self.im + other.im)
        return ComplexBox(self.re + other, self.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBox(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ComplexBox) else ComplexBox(-ivf(other), iv.mpf(0)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            w = ivf(other)
            return ComplexBox(self.re * w, self.im * w)
        if isinstance(other, ComplexBox):
            return ComplexBox(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return ComplexBox(self.re * other, self.im * other)

    __rmul__ = __mul__

    def scale_down(self, denom):
        d = ivf(denom)
        return ComplexBox(self.re / d, self.im / d)

    def abs_sq(self):
        return self.re ** 2 + self.im ** 2

    def abs(self):
        return iv.sqrt(self.abs_sq())

    def abs_upper(self):
        return mpf(iv.sqrt(self.abs_sq()).b)

    def abs_lower(self):
        lo = self.abs_sq().a
        if lo <= 0:
            return mpf(0)
        return mpf(iv.sqrt(iv.mpf(lo)).a)

    def contains_zero(self):
        return contains_zero(self.re) and contains_zero(self.im)

    def width(self):
        return max(interval_width(self.re), interval_width(self.im))

    def midpoint(self):
        return mp.mpc(self.re.mid.a, self.im.mid.a)

    def disjoint(self, other):
        return (
            self.re.b < other.re.a
            or other.re.b < self.re.a
            or self.im.b < other.im.a
            or other.im.b < self.im.a
        )

    def meets_real_axis(self):
        return contains_zero(self.im)

    def conjugate(self):
        return ComplexBox(self.re, -self.im)

    def __repr__(self):
        return f"ComplexBox(re={self.re}, im={self.im})"


def eval_poly_box(coeffs, box):
    """Horner evaluation of integer coefficients at a complex box."""
    out = ComplexBox(iv.mpf(0), iv.mpf(0))
    for c in reversed(coeffs):
        out = out * box + ivf(c)
    return out


def eval_poly_interval(coeffs, x):
    """Horner evaluation of integer coefficients at a real interval."""
    out = iv.mpf(0)
    for c in reversed(coeffs):
        out = out * x + ivf(c)
    return out


def arg_interval(box):
    """Enclosure of arg(z) over the box, as a real interval.

    The result may exceed pi when the box crosses the negative real axis
    (values are then to be read mod 2*pi).  The box must exclude 0.
    """
    if box.contains_zero():
        raise InvalidInput("argument of a box containing 0")
    re, im = box.re, box.im
    if re.a > 0 or im.a > 0 or im.b < 0:
        return iv.atan2(im, re)
    # box is in the closed left half-plane and straddles the real axis:
    # rotate by pi so atan2 is evaluated away from its branch cut
    rotated = iv.atan2(-im, -re)
    return rotated + iv.pi


def wrap_angle(theta):
    """Normalize an angle interval to a (midpoint in (-pi, pi], radius) pair
    of plain mpf values; the interval is read mod 2*pi."""
    two_pi = iv.pi * 2
    mid = theta.mid.a
    radius = mpf(theta.delta.b) / 2
    pi_hi = mpf(iv.pi.b)
    period = mpf(two_pi.mid.a)
    while mid > pi_hi:
        mid -= period
    while mid <= -pi_hi:
        mid += period
    return mid, radius
