"""Exact arithmetic in Q(i), the field of Gaussian rationals.

All series coefficients in this package are GaussRational values.  Besides
field arithmetic the module provides complete decision procedures for e-th
roots (via factorization in the Gaussian integers) and enumeration of
Gaussian divisors, which back the rational-root searches elsewhere.
"""

from __future__ import annotations

import math
from fractions import Fraction


class GaussRational:
    """A value re + im*i with re, im exact Fractions in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_strings(re_s: str, im_s: str) -> "GaussRational":
        return GaussRational(Fraction(re_s), Fraction(im_s))

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_real(self) -> bool:
        return not self.im

    # -- field operations -------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        return GaussRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not self.im and not other.im:
            return GaussRational(self.re * other.re)
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussRational":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(i)")
        n = self.re * self.re + self.im * self.im
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """The field norm re^2 + im^2 (a rational, not the absolute value)."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(float(self.norm()))

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- presentation ------------------------------------------------------

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"

    def as_strings(self):
        return (str(self.re), str(self.im))


def _coerce(x) -> GaussRational:
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational(x)
    raise TypeError(f"cannot coerce {type(x)!r} into Q(i)")


ZERO = GaussRational(0)
ONE = GaussRational(1)
I = GaussRational(0, 1)
UNITS = (ONE, I, -ONE, -I)


# ---------------------------------------------------------------------------
# Gaussian-integer machinery: factorization, divisors, exact e-th roots.
# ---------------------------------------------------------------------------


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_norm(a):
    return a[0] * a[0] + a[1] * a[1]


def _gi_divmod(a, b):
    """Nearest-integer division in Z[i]; remainder has smaller norm."""
    nb = _gi_norm(b)
    # a * conj(b) / N(b), rounded to the nearest Gaussian integer
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    q = (_round_div(re, nb), _round_div(im, nb))
    r = (a[0] - (q[0] * b[0] - q[1] * b[1]), a[1] - (q[0] * b[1] + q[1] * b[0]))
    return q, r


def _round_div(a, b):
    # round(a/b) with ties toward zero; b > 0
    q, r = divmod(a, b)
    if 2 * r > b:
        q += 1
    return q


def _gi_divides(d, a) -> bool:
    _, r = _gi_divmod(a, d)
    return r == (0, 0)


def _gi_exact_div(a, d):
    q, r = _gi_divmod(a, d)
    if r != (0, 0):
        raise ArithmeticError("non-exact Gaussian division")
    return q


def _rational_prime_factors(n: int):
    """Trial-division factorization of a positive integer."""
    out = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 17
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _gaussian_prime_above(p: int):
    """A Gaussian prime dividing the rational prime p."""
    if p == 2:
        return (1, 1)
    if p % 4 == 3:
        return (p, 0)
    # p = 1 mod 4: find x with x^2 = -1 mod p, then gcd(p, x+i)
    x = _sqrt_minus_one_mod(p)
    a, b = _gi_gcd((p, 0), (x, 1))
    return (a, b)


def _sqrt_minus_one_mod(p: int) -> int:
    for a in range(2, p):
        x = pow(a, (p - 1) // 4, p)
        if (x * x) % p == p - 1:
            return x
    raise ArithmeticError(f"no sqrt(-1) mod {p}")


def _gi_gcd(a, b):
    while b != (0, 0):
        _, r = _gi_divmod(a, b)
        a, b = b, r
    return a


def gaussian_factor(z):
    """Factor a nonzero Gaussian integer (pair of ints) into unit * primes.

    Returns (unit, {prime: exponent}) with primes as normalized pairs.
    """
    if z == (0, 0):
        raise ZeroDivisionError("factoring zero")
    factors = {}
    n = _gi_norm(z)
    for p, _ in _rational_prime_factors(n).items():
        pi = _gaussian_prime_above(p)
        for q in (pi, (pi[0], -pi[1])):
            q = _gi_normalize(q)
            while _gi_divides(q, z) and _gi_norm(z) > 1:
                z = _gi_exact_div(z, q)
                factors[q] = factors.get(q, 0) + 1
    # z is now a unit
    unit = z
    return unit, factors


def _gi_normalize(q):
    """Canonical associate: first quadrant, re > 0, im >= 0 (re >= im for 1+i)."""
    for u in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        c = _gi_mul(q, u)
        if c[0] > 0 and c[1] >= 0:
            return c
    return q


def gaussian_divisors(z):
    """All divisors of a nonzero Gaussian integer, up to units; includes units."""
    _, factors = gaussian_factor(z)
    divs = [(1, 0)]
    for q, e in factors.items():
        divs = [_gi_mul(d, _gi_pow(q, k)) for d in divs for k in range(e + 1)]
    return divs


def _gi_pow(a, k):
    out = (1, 0)
    while k:
        if k & 1:
            out = _gi_mul(out, a)
        a = _gi_mul(a, a)
        k >>= 1
    return out


def nth_root(c: GaussRational, e: int):
    """An exact e-th root of c in Q(i), or None if no such root exists.

    Complete decision procedure: factor numerator and denominator in Z[i],
    demand every exponent be divisible by e, and match the leftover unit.
    """
    if e <= 0:
        raise ValueError("root index must be positive")
    if e == 1 or c.is_zero() or c.is_one():
        return c
    num = (c.re.numerator * c.im.denominator, c.im.numerator * c.re.denominator)
    den = c.re.denominator * c.im.denominator
    u_n, f_n = gaussian_factor(num)
    u_d, f_d = gaussian_factor((den, 0))
    # combined exponents: num minus den
    exps = dict(f_n)
    for q, k in f_d.items():
        exps[q] = exps.get(q, 0) - k
    root = ONE
    for q, k in exps.items():
        if k % e:
            return None
        root = root * GaussRational(Fraction(q[0]), Fraction(q[1])) ** (k // e)
    residual = c / (root**e)
    # residual is a unit of Z[i]; it must itself be an e-th power of a unit
    candidates = [root * u for u in UNITS if (u**e) == residual]
    if not candidates:
        # units of Q(i) without e-th roots: e.g. sqrt(i) is not in Q(i)
        return None
    # prefer the principal branch: positive real, then real, then +imaginary
    candidates.sort(key=lambda r: (not (r.is_real() and r.re > 0), not r.is_real(), r.im < 0))
    return candidates[0]


def sqrt(c: GaussRational):
    """Square root in Q(i) if it exists, else None (fast path of nth_root)."""
    if c.is_zero():
        return ZERO
    if c.is_real():
        r = _sqrt_fraction(c.re) if c.re > 0 else None
        if r is not None:
            return GaussRational(r)
        if c.re < 0:
            r = _sqrt_fraction(-c.re)
            if r is not None:
                return GaussRational(0, r)
        return None
    # c = a+bi with b != 0: x^2 = (a + sqrt(a^2+b^2))/2, y = b/(2x)
    n = _sqrt_fraction(c.norm())
    if n is None:
        return None
    x2 = (c.re + n) / 2
    x = _sqrt_fraction(x2) if x2 > 0 else None
    if x is None or x == 0:
        return None
    return GaussRational(x, c.im / (2 * x))


def _sqrt_fraction(q: Fraction):
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None
