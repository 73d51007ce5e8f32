"""Prime enumeration: simple and segmented sieves (numpy-backed)."""

from __future__ import annotations

import math

import numpy as np

DEFAULT_SEGMENT = 1 << 20


def primes_up_to(limit):
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def prime_segment(lo, hi, base_primes=None):
    """Primes in [lo, hi) as an int64 array, sieving with precomputed base
    primes (must cover sqrt(hi - 1))."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.array([], dtype=np.int64)
    if base_primes is None:
        base_primes = primes_up_to(math.isqrt(hi - 1))
    mask = np.ones(hi - lo, dtype=bool)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        mask[start - lo :: p] = False
    if lo <= 2:
        pass  # 2 survives naturally
    for small in range(lo, min(hi, 2)):
        mask[small - lo] = False
    return (np.flatnonzero(mask) + lo).astype(np.int64)


def segment_bounds(limit, segment_size=DEFAULT_SEGMENT):
    """Half-open segment bounds [lo, hi) covering 2..limit inclusive."""
    bounds = []
    lo = 2
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        bounds.append((lo, hi))
        lo = hi
    return bounds
