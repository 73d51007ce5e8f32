"""Exact univariate polynomial arithmetic over Z and over prime fields.

Coefficients are stored lowest degree first, so ``x^3 - x + 1`` is
``(1, -1, 0, 1)``.  Two text forms are accepted wherever a polynomial is
read: the ASCII form ``x^3 - x + 1`` and the JSON-ish coefficient list
``[1, -1, 0, 1]`` (lowest degree first).

Everything here is an immutable value; all functions are pure.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction

from .errors import InvalidInput, NotSquarefree

_TERM_RE = re.compile(
    r"""(?P<sign>[+-])?\s*
        (?:
            (?P<coeff>\d+)\s*(?:\*\s*)?(?P<var1>[A-Za-z_]\w*)\s*(?:\^\s*(?P<exp1>\d+))?
          | (?P<var2>[A-Za-z_]\w*)\s*(?:\^\s*(?P<exp2>\d+))?
          | (?P<const>\d+)
        )\s*""",
    re.VERBOSE,
)


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _strip(int(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @property
    def degree(self):
        """Degree, with the zero polynomial having degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("IntPolynomial", self.coeffs))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPolynomial(out)

    __rmul__ = __mul__

    def derivative(self):
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def content(self):
        g = 0
        for c in self.coeffs:
            g = _gcd(g, abs(c))
        return g

    def divmod_exact(self, divisor):
        """Quotient and remainder by a monic divisor; exact over Z."""
        if not divisor.is_monic():
            raise InvalidInput("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if d == 0:
            return IntPolynomial(rem), IntPolynomial(())
        quo = [0] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                quo[i - d] = c
                for j, dc in enumerate(divisor.coeffs):
                    rem[i - d + j] -= c * dc
        return IntPolynomial(quo), IntPolynomial(rem[:d])

    def evaluate(self, x):
        """Horner evaluation; works for any ring element (int, Fraction,
        interval, complex box) supporting + and *."""
        out = None
        for c in reversed(self.coeffs):
            out = c if out is None else out * x + c
        return 0 if out is None else out

    def __call__(self, x):
        return self.evaluate(x)

    def __str__(self):
        return format_polynomial(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def format_polynomial(coeffs, var="x"):
    """Render a coefficient sequence (lowest degree first) as ASCII."""
    coeffs = list(coeffs)
    if not any(coeffs):
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            x = var if i == 1 else f"{var}^{i}"
            body = x if mag == 1 else f"{mag}*{x}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def parse_polynomial(text, var="x"):
    """Parse either ASCII form ("x^3 - x + 1") or list form ("[1,-1,0,1]")."""
    text = text.strip()
    if not text:
        raise InvalidInput("empty polynomial text")
    if text.startswith("["):
        try:
            items = [int(t) for t in text.strip("[]").split(",")] if text.strip("[]").strip() else []
        except ValueError as exc:
            raise InvalidInput(f"bad coefficient list {text!r}") from exc
        return IntPolynomial(items)
    coeffs = {}
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse polynomial near {text[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("const") is not None:
            exp, coeff = 0, int(m.group("const"))
        else:
            name = m.group("var1") or m.group("var2")
            if name != var:
                raise InvalidInput(f"unexpected symbol {name!r}, expected {var!r}")
            coeff = int(m.group("coeff")) if m.group("coeff") else 1
            exp_text = m.group("exp1") or m.group("exp2")
            exp = int(exp_text) if exp_text else 1
        coeffs[exp] = coeffs.get(exp, 0) + sign * coeff
        pos = m.end()
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return IntPolynomial(out)


# ---------------------------------------------------------------------------
# Rational gcd, resultants, real-root counting
# ---------------------------------------------------------------------------

def _frac_coeffs(f):
    return [Fraction(c) for c in f.coeffs]


def _frac_strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _frac_rem(a, b):
    """Remainder of a by b over Q (coefficient lists, lowest first)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        q = a[-1] / lb
        shift = len(a) - 1 - db
        for j, cb in enumerate(b):
            a[shift + j] -= q * cb
        a.pop()
        _frac_strip(a)
    return a


def rational_gcd(f, g):
    """Monic gcd of two integer polynomials over Q, returned as a primitive
    IntPolynomial (content removed, positive leading coefficient)."""
    a, b = _frac_coeffs(f), _frac_coeffs(g)
    _frac_strip(a), _frac_strip(b)
    while b:
        a, b = b, _frac_rem(a, b)
    if not a:
        return IntPolynomial(())
    lcm_den = 1
    for c in a:
        lcm_den = lcm_den * c.denominator // _gcd(lcm_den, c.denominator)
    ints = [int(c * lcm_den) for c in a]
    poly = IntPolynomial(ints)
    cont = poly.content()
    ints = [c // cont for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPolynomial(ints)


def is_squarefree(f):
    return rational_gcd(f, f.derivative()).degree == 0


def discriminant(f):
    """Discriminant of f via a fraction-free Sylvester determinant."""
    n = f.degree
    if n <= 0:
        raise InvalidInput("discriminant needs degree >= 1")
    if n == 1:
        return 1
    fp = f.derivative()
    res = _resultant(f, fp)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    num = sign * res
    if num % f.leading():
        raise InvalidInput("resultant not divisible by leading coefficient")
    return num // f.leading()


def _resultant(f, g):
    n, m = f.degree, g.degree
    size = n + m
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(m):
        rows.append([0] * i + fc + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + gc + [0] * (size - m - 1 - i))
    return _bareiss_det(rows)


def _bareiss_det(mat):
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(mat)
    if n == 0:
        return 1
    mat = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, n):
                if mat[r][k]:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[-1][-1]


def count_real_roots(f):
    """Exact count of distinct real roots of a squarefree integer polynomial,
    by Sturm sign variations at -inf and +inf."""
    if f.is_zero():
        raise InvalidInput("zero polynomial")
    if f.degree == 0:
        return 0
    if rational_gcd(f, f.derivative()).degree != 0:
        raise NotSquarefree(f"gcd(f, f') is nontrivial for {f}")
    chain = [_frac_coeffs(f), _frac_coeffs(f.derivative())]
    while chain[-1]:
        rem = _frac_rem(chain[-2], chain[-1])
        chain.append([-c for c in rem])
    chain.pop()

    def variations(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)

    at_minus = []
    at_plus = []
    for poly in chain:
        lead = 1 if poly[-1] > 0 else -1
        deg = len(poly) - 1
        at_plus.append(lead)
        at_minus.append(lead if deg % 2 == 0 else -lead)
    return variations(at_minus) - variations(at_plus)


# ---------------------------------------------------------------------------
# Arithmetic mod p
# ---------------------------------------------------------------------------

class ModPolynomial:
    """Monic-or-not polynomial over the p-element field, coefficients in [0, p)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs):
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "coeffs", _strip(int(c) % p for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("ModPolynomial is immutable")

    @classmethod
    def from_int_poly(cls, f, p):
        return cls(p, f.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, ModPolynomial)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(("ModPolynomial", self.p, self.coeffs))

    def sort_key(self):
        """Canonical factor order: degree, then coefficient sequence."""
        return (self.degree, self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.p
        return ModPolynomial(self.p, out)

    def __sub__(self, other):
        a, b = list(self.coeffs), other.coeffs
        if len(a) < len(b):
            a += [0] * (len(b) - len(a))
        for i, c in enumerate(b):
            a[i] = (a[i] - c) % self.p
        return ModPolynomial(self.p, a)

    def __mul__(self, other):
        p = self.p
        if isinstance(other, int):
            return ModPolynomial(p, ((c * other) % p for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ModPolynomial(p, ())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return ModPolynomial(p, out)

    def monic(self):
        if self.is_zero() or self.coeffs[-1] == 1:
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return self * inv

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = pow(other.coeffs[-1], -1, p)
        quo = [0] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = (rem[i] * inv_lead) % p
            if c:
                quo[i - d] = c
                for j, oc in enumerate(other.coeffs):
                    rem[i - d + j] = (rem[i - d + j] - c * oc) % p
        return ModPolynomial(p, quo), ModPolynomial(p, rem[:d])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def pow_mod(self, e, modulus):
        """self**e reduced mod modulus, by square and multiply."""
        result = ModPolynomial(self.p, (1,))
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def derivative(self):
        return ModPolynomial(self.p, ((i * c) % self.p for i, c in enumerate(self.coeffs) if i > 0))

    def evaluate(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = (out * x + c) % self.p
        return out

    def __str__(self):
        return format_polynomial(self.coeffs)

    def __repr__(self):
        return f"ModPolynomial(p={self.p}, {list(self.coeffs)!r})"


def _x_poly(p):
    return ModPolynomial(p, (0, 1))


def _one(p):
    return ModPolynomial(p, (1,))


def squarefree_decomposition(f):
    """Squarefree decomposition over F_p: list of (g, e) with f (monic) equal
    to the product of g^e, the g squarefree and pairwise coprime."""
    p = f.p
    f = f.monic()
    out = {}

    def add(g, e):
        if g.degree > 0:
            out[g] = out.get(g, 0) + e

    def p_th_root(g):
        # all exponents are multiples of p; Frobenius fixes F_p pointwise
        return ModPolynomial(p, g.coeffs[::p])

    def recurse(g, mult):
        if g.degree == 0:
            return
        gp = g.derivative()
        if gp.is_zero():
            for h, e in _sfd_list(p_th_root(g)):
                add(h, e * p * mult)
            return
        c = g.gcd(gp)
        w = (g // c).monic()
        i = 1
        while w.degree > 0:
            y = w.gcd(c)
            z = (w // y).monic()
            add(z, i * mult)
            w = y
            c = (c // y).monic()
            i += 1
        if c.degree > 0:
            for h, e in _sfd_list(p_th_root(c)):
                add(h, e * p * mult)

    def _sfd_list(g):
        saved = dict(out)
        out.clear()
        recurse(g, 1)
        items = list(out.items())
        out.clear()
        out.update(saved)
        return items

    recurse(f, 1)
    return sorted(out.items(), key=lambda ge: ge[0].sort_key())


def distinct_degree_factorization(f):
    """Split a squarefree monic f over F_p into (product, d) parts where each
    part collects all irreducible factors of degree d."""
    p = f.p
    parts = []
    x = _x_poly(p)
    h = x % f
    v = f
    d = 0
    while v.degree >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(p, v)
        g = v.gcd(h - (x % v))
        if g.degree > 0:
            parts.append((g, d))
            v = (v // g).monic()
            h = h % v
    if v.degree > 0:
        parts.append((v, v.degree))
    return parts


def _edf_bruteforce(f, d):
    """Equal-degree splitting by trial division over all monic degree-d
    polynomials; only sensible for tiny p**d (used for p = 2)."""
    p = f.p
    factors = []
    work = f

    def candidates():
        for code in range(p ** d):
            c = []
            v = code
            for _ in range(d):
                c.append(v % p)
                v //= p
            c.append(1)
            yield ModPolynomial(p, c)

    while work.degree > d:
        for cand in candidates():
            q, r = work.divmod(cand)
            if r.is_zero():
                factors.append(cand)
                work = q.monic()
                break
        else:
            raise InvalidInput("equal-degree brute force failed; input not a product of degree-d irreducibles")
    factors.append(work.monic())
    return factors


def _edf_cantor_zassenhaus(f, d):
    """Equal-degree splitting for odd p via randomized gcds; the RNG is
    seeded from the input so output is reproducible run to run."""
    p = f.p
    if f.degree == d:
        return [f.monic()]
    rng = random.Random(f"edf:{p}:{d}:{f.coeffs}")
    exponent = (p ** d - 1) // 2
    stack = [f.monic()]
    factors = []
    while stack:
        u = stack.pop()
        if u.degree == d:
            factors.append(u)
            continue
        while True:
            r = ModPolynomial(p, [rng.randrange(p) for _ in range(u.degree)] + [1])
            w = r.pow_mod(exponent, u) - _one(p)
            g = u.gcd(w)
            if 0 < g.degree < u.degree:
                stack.append(g)
                stack.append((u // g).monic())
                break
    return factors


def factor_mod_p(f, p):
    """Factor an integer polynomial mod p into monic irreducibles.

    Returns a tuple of (ModPolynomial, multiplicity), sorted by
    (degree, coefficient sequence).  The product of the factors equals f
    mod p up to the leading unit.
    """
    if f.is_zero():
        raise InvalidInput("cannot factor the zero polynomial")
    if p < 2 or not is_probable_prime(p):
        raise InvalidInput(f"{p} is not prime")
    fp = ModPolynomial.from_int_poly(f, p)
    if fp.is_zero():
        raise InvalidInput(f"polynomial vanishes mod {p}")
    if fp.degree == 0:
        return ()
    out = {}
    for g, e in squarefree_decomposition(fp):
        for part, d in distinct_degree_factorization(g):
            if part.degree == d:
                irreducibles = [part]
            elif p == 2 or p ** d <= 64:
                irreducibles = _edf_bruteforce(part, d)
            else:
                irreducibles = _edf_cantor_zassenhaus(part, d)
            for irr in irreducibles:
                out[irr] = out.get(irr, 0) + e
    return tuple(sorted(out.items(), key=lambda fe: fe[0].sort_key()))


def factor_degrees(f, p):
    """Degree pattern of f mod p: one (degree, multiplicity) pair per
    distinct irreducible factor, sorted.  Uses distinct-degree splitting
    only, so it avoids the randomized step."""
    fp = ModPolynomial.from_int_poly(f, p)
    if fp.is_zero():
        raise InvalidInput(f"polynomial vanishes mod {p}")
    pairs = []
    for g, e in squarefree_decomposition(fp):
        for part, d in distinct_degree_factorization(g):
            pairs.extend([(d, e)] * (part.degree // d))
    return tuple(sorted(pairs))


def is_irreducible_mod_p(f):
    """Rabin irreducibility test for a monic nonzero polynomial over F_p."""
    if f.is_zero():
        raise InvalidInput("zero polynomial")
    f = f.monic()
    n = f.degree
    if n == 0:
        return False
    if n == 1:
        return True
    p = f.p
    x = _x_poly(p)
    # x^(p^n) == x mod f, and gcd(x^(p^(n/q)) - x, f) == 1 for prime q | n
    h = x % f
    powers = {}
    for i in range(1, n + 1):
        h = h.pow_mod(p, f)
        powers[i] = h
    if powers[n] != x % f:
        return False
    for q in _prime_divisors(n):
        g = f.gcd(powers[n // q] - (x % f))
        if g.degree != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_probable_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed witness set)."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Residue field elements
# ---------------------------------------------------------------------------

class FiniteFieldElement:
    """Element of F_p[x]/(g) with g irreducible mod p."""

    __slots__ = ("p", "modulus", "value")

    def __init__(self, p, modulus, value):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", value % modulus)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteFieldElement is immutable")

    @classmethod
    def from_coeffs(cls, p, modulus, coeffs):
        return cls(p, modulus, ModPolynomial(p, coeffs))

    def is_zero(self):
        return self.value.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFieldElement)
            and self.p == other.p
            and self.modulus == other.modulus
            and self.value == other.value
        )

    def __hash__(self):
        return hash(("FFE", self.p, self.modulus.coeffs, self.value.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return FiniteFieldElement(self.p, self.modulus, self.value * other)
        return FiniteFieldElement(self.p, self.modulus, (self.value * other.value) % self.modulus)

    def __pow__(self, e):
        return FiniteFieldElement(self.p, self.modulus, self.value.pow_mod(e, self.modulus))

    def is_one(self):
        return self.value.coeffs == (1,)

    def is_minus_one(self):
        return self.value.coeffs == ((self.p - 1) % self.p,)

    def __repr__(self):
        return f"FiniteFieldElement({self.value!r} mod ({self.modulus}, {self.p}))"


def field_size(element):
    return element.p ** element.modulus.degree
