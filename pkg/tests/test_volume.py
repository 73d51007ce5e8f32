"""Zeta Euler products against independent series oracles, Borel volume,
geodesic data."""

import math
import random

import pytest
from mpmath import mp, mpf

from orbigap.errors import DiscriminantUnknown, NotLoxodromic, UnknownNorm
from orbigap.intervals import interval_prec
from orbigap.numberfield import factor_prime, make_field, parse_element
from orbigap.quaternion import algebra, make_ramification_set
from orbigap.sieve import primes_up_to
from orbigap.volume import (
    borel_volume,
    dedekind_zeta_2,
    trace_to_geodesic,
    volume_ratio,
)


def zeta2_series_oracle():
    """Sum of 1/n^2 with an Euler-Maclaurin tail; independent of any Euler
    product.  Accurate far beyond the tolerances used here."""
    with mp.workprec(200):
        N = 10_000
        partial = mp.fsum(mp.mpf(1) / (n * n) for n in range(1, N + 1))
        tail = mp.mpf(1) / N - mp.mpf(1) / (2 * N * N) + mp.mpf(1) / (6 * N ** 3)
        return partial + tail


def catalan_series_oracle():
    """Dirichlet L(2, chi_-4) by direct alternating summation."""
    with mp.workprec(120):
        N = 200_000
        total = mp.fsum(
            (1 if k % 2 == 0 else -1) * mp.mpf(1) / (2 * k + 1) ** 2 for k in range(N)
        )
        return total  # error below (2N+1)^-2 ~ 6e-12


def test_zeta_rationals_against_series_oracle():
    oracle = zeta2_series_oracle()
    assert abs(float(oracle) - 1.6449340668482264) < 1e-12  # sanity on the oracle itself
    K = make_field("x")
    z = dedekind_zeta_2(K, 20_000)
    assert abs(z.value - oracle) <= z.error
    # enclosure actually contains the truth
    assert z.interval.a <= oracle <= z.interval.b


def test_zeta_gaussian_against_product_of_series():
    oracle = zeta2_series_oracle() * catalan_series_oracle()
    K = make_field("x^2 + 1", -4, {2: (2,)})
    z = dedekind_zeta_2(K, 20_000)
    assert abs(z.value - oracle) <= z.error
    assert z.interval.a <= oracle <= z.interval.b
    # without a declared splitting the bracketed interval still contains truth
    K2 = make_field("x^2 + 1", -4)
    z2 = dedekind_zeta_2(K2, 20_000)
    assert z2.interval.a <= oracle <= z2.interval.b
    assert z2.error > z.error  # bracketing widens the band


def test_zeta_doubling_invariant():
    for text, disc in (("x", None), ("x^2 + 1", -4), ("x^3 - x + 1", None), ("x^3 - 2", -108)):
        K = make_field(text, disc)
        z1 = dedekind_zeta_2(K, 2000)
        z2 = dedekind_zeta_2(K, 4000)
        assert abs(z2.value - z1.value) < z1.error
        # partial product is nondecreasing in the cutoff
        assert z2.interval.a >= z1.interval.a


def test_zeta_cutoff_precondition():
    K = make_field("x")
    with pytest.raises(Exception):
        dedekind_zeta_2(K, 50)


def test_borel_volume_gaussian_example():
    K = make_field("x^2 + 1", -4, {2: (2,)})
    ram = make_ramification_set(
        K, primes=(factor_prime(K, 3)[0], factor_prime(K, 7)[0])
    )
    z = dedekind_zeta_2(K, 50_000)
    vol = borel_volume(K, ram, z)
    assert vol.norm_product == 8 * 48
    # hand-audited: 4^{3/2} * zeta_K(2) / (4 pi^2) * 8 * 48
    expected = 8 * float(z.value) / (4 * math.pi ** 2) * 384
    assert abs(float(vol.value) - expected) < 1e-6
    assert float(vol.value) == pytest.approx(117.245, abs=0.01)


def test_borel_volume_empty_ramification():
    K = make_field("x^2 + 1", -4, {2: (2,)})
    z = dedekind_zeta_2(K, 10_000)
    vol = borel_volume(K, make_ramification_set(K), z)
    assert vol.norm_product == 1
    with interval_prec(128):
        assert vol.interval.a > 0


def test_borel_volume_needs_discriminant():
    K = make_field("x^3 - 2")  # disc not squarefree, none supplied
    with pytest.raises(DiscriminantUnknown):
        borel_volume(K, make_ramification_set(K), None, cutoff=1000)


def test_borel_volume_opaque_norms():
    K = make_field("x^3 - 2", -108)
    P5 = factor_prime(K, 5)[0]
    z = dedekind_zeta_2(K, 1000)
    ram = make_ramification_set(K, (0,), (P5,), ("dyadic-1@4", "other@8"))
    vol = borel_volume(K, ram, z)
    assert vol.norm_product == 4 * 3 * 7
    ram_bad = make_ramification_set(K, (0,), (P5,), ("dyadic-1", "other@8"))
    with pytest.raises(UnknownNorm):
        borel_volume(K, ram_bad, z)


def test_volume_ratio_exact():
    rng = random.Random(11)
    K = make_field("x^3 - 2", -108)
    z = dedekind_zeta_2(K, 1000)
    candidates = [q for p in (5, 7, 11, 13, 17, 19, 23, 29, 31) for q in factor_prime(K, p)]
    for _ in range(25):
        base_primes = tuple(rng.sample(candidates, 2))
        remaining = [q for q in candidates if q not in base_primes]
        p0, pi = rng.sample(remaining, 2)
        base_ram = make_ramification_set(K, (0,), (base_primes[0],))
        big_ram = make_ramification_set(K, (0,), (base_primes[0], p0, pi))
        vol_base = borel_volume(K, base_ram, z)
        vol_big = borel_volume(K, big_ram, z)
        assert volume_ratio(vol_big, vol_base) == (p0.norm - 1) * (pi.norm - 1)


def test_trace_to_geodesic_real_hyperbolic():
    K = make_field("x^2 + 1", -4)
    g = trace_to_geodesic(K, K.integer(3), 48)
    # lambda = (3 + sqrt 5)/2, length = 2 log lambda
    expected = 2 * math.log((3 + math.sqrt(5)) / 2)
    assert abs(float(g.length_mid) - expected) < 1e-12
    assert abs(float(g.theta_mid)) < 1e-12


def test_trace_to_geodesic_not_loxodromic():
    K = make_field("x^2 + 1", -4)
    with pytest.raises(NotLoxodromic):
        trace_to_geodesic(K, K.integer(2), 48)
    with pytest.raises(NotLoxodromic):
        trace_to_geodesic(K, parse_element(K, "3/2"), 48)


def test_trace_to_geodesic_imaginary():
    K = make_field("x^2 + 1", -4)
    g = trace_to_geodesic(K, K.generator(), 48)  # image i
    phi = (1 + math.sqrt(5)) / 2
    assert abs(float(g.length_mid) - 2 * math.log(phi)) < 1e-12
    # lambda^2 is negative real: angle pi (mod 2 pi)
    assert abs(abs(float(g.theta_mid)) - math.pi) < 1e-9


def test_geodesic_lambda_reconstructs_trace():
    K = make_field("x^3 - 2", -108)
    theta = K.generator()
    for trace in (theta, theta + K.integer(1), theta * theta):
        g = trace_to_geodesic(K, trace, 48)
        with interval_prec(160):
            lam = g.lam
            inv_den = lam.abs_sq()
            recon_re = lam.re + lam.re / inv_den
            recon_im = lam.im - lam.im / inv_den
            from orbigap.numberfield import evaluate_at_place

            tau = evaluate_at_place(trace, K.complex_place(), 48)
            # overlapping intervals in both coordinates
            assert not (recon_re.b < tau.re.a or tau.re.b < recon_re.a)
            assert not (recon_im.b < tau.im.a or tau.im.b < recon_im.a)


def test_volume_monotonicity_and_positivity():
    K = make_field("x^3 - x + 1")
    z = dedekind_zeta_2(K, 2000)
    P5 = factor_prime(K, 5)[0]
    base = borel_volume(K, make_ramification_set(K, (0,), (P5,)), z)
    assert base.interval.a > 0
