"""Certified complex root isolation.

Roots are first refined by simultaneous (Durand-Kerner) iteration at a
working precision, then certified: around each approximation z we place
the disc of radius n*|f(z)/f'(z)|, which always contains at least one
root of f; if the n bounding boxes are pairwise disjoint, each contains
exactly one root.  On certification failure the working precision doubles
up to a cap, after which PrecisionExhausted is raised.
"""

from __future__ import annotations

from mpmath import iv, mp, mpf

from .errors import InvalidInput, NotSquarefree, PrecisionExhausted
from .intervals import ComplexBox, eval_poly_box, interval_prec
from .polynomials import rational_gcd

DEFAULT_CAP_BITS = 512


def _durand_kerner(coeffs, prec_bits, max_steps=200):
    """Simultaneous root iteration for a squarefree integer polynomial.

    Deterministic: fixed starting configuration, fixed step count bound.
    Returns approximations as mpc values at the given working precision.
    """
    n = len(coeffs) - 1
    with mp.workprec(prec_bits):
        lead = mp.mpf(coeffs[-1])
        cs = [mp.mpf(c) / lead for c in coeffs]
        radius = 1 + max(abs(c) for c in cs[:-1]) if n > 0 else mp.mpf(1)
        seed = mp.mpc("0.4", "0.9")
        roots = [radius * seed ** k for k in range(1, n + 1)]
        tol = mp.mpf(2) ** (-(prec_bits - 8))

        def poly(z):
            out = mp.mpf(0)
            for c in reversed(cs):
                out = out * z + c
            return out

        for _ in range(max_steps):
            moved = mp.mpf(0)
            for i in range(n):
                num = poly(roots[i])
                den = mp.mpf(1)
                for j in range(n):
                    if j != i:
                        den *= roots[i] - roots[j]
                if den == 0:
                    den = tol
                delta = num / den
                roots[i] -= delta
                moved = max(moved, abs(delta))
            if moved < tol * max(mp.mpf(1), radius):
                break
        return [mp.mpc(r) for r in roots]


def _certify(coeffs, der_coeffs, approx, out_width_bits, prec_bits):
    """Try to build disjoint certified boxes around the approximations.

    Returns a list of ComplexBox or None if certification fails at this
    working precision.
    """
    n = len(coeffs) - 1
    boxes = []
    target = mpf(2) ** (-out_width_bits)
    with interval_prec(prec_bits):
        for z in approx:
            zbox = ComplexBox.point(z)
            fval = eval_poly_box(coeffs, zbox)
            fder = eval_poly_box(der_coeffs, zbox)
            den = fder.abs_lower()
            if den <= 0:
                return None
            rad = mpf(n) * fval.abs_upper() / den
            if not rad < target / 2:
                return None
            r = iv.mpf([-rad, rad])
            boxes.append(ComplexBox(zbox.re + r, zbox.im + r))
        for i in range(n):
            for j in range(i + 1, n):
                if not boxes[i].disjoint(boxes[j]):
                    return None
    return boxes


def isolate_complex_roots(f, precision_bits, cap_bits=DEFAULT_CAP_BITS):
    """Certified pairwise-disjoint boxes, one per complex root of f.

    Each returned box has width at most 2**-precision_bits and provably
    contains exactly one root.  f must be squarefree.  Boxes are sorted by
    (real midpoint, imaginary midpoint) for deterministic downstream labels.
    """
    if f.is_zero() or f.degree < 1:
        raise InvalidInput("need a nonconstant polynomial")
    if rational_gcd(f, f.derivative()).degree != 0:
        raise NotSquarefree(f"gcd(f, f') nontrivial for {f}")
    coeffs = f.coeffs
    der = f.derivative().coeffs
    prec = max(64, 2 * precision_bits + 16)
    if prec > cap_bits:
        prec = cap_bits
    while True:
        approx = _durand_kerner(coeffs, prec)
        boxes = _certify(coeffs, der, approx, precision_bits, prec)
        if boxes is not None:
            boxes.sort(key=lambda b: (b.midpoint().real, b.midpoint().imag))
            return boxes
        if prec >= cap_bits:
            raise PrecisionExhausted(
                f"root certification failed for {f} at {cap_bits} working bits"
            )
        prec = min(2 * prec, cap_bits)
