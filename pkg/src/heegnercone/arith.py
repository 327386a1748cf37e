"""Exact number-theoretic plumbing.

Kronecker characters, Moebius, divisor sums with character, generalized
Bernoulli numbers, special L-values in closed form, certified dyadic
interval arithmetic, and the Euler-product constants entering the cone
positivity margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ParityUnsupported

# ---------------------------------------------------------------------------
# elementary arithmetic


def factorize(n: int) -> dict:
    """Prime factorization {p: e} of |n| by trial division (inputs stay small)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list:
    return sorted(factorize(n)) if abs(n) != 1 else []


def divisors(n: int) -> list:
    n = abs(n)
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    if n == 1:
        return 1
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def squarefree_decompose(n: int):
    """Return (u, v) with n = u^2 * v, v squarefree, u > 0 (n > 0)."""
    if n <= 0:
        raise ValueError("need n > 0")
    u, v = 1, 1
    for p, e in factorize(n).items():
        u *= p ** (e // 2)
        if e % 2:
            v *= p
    return u, v


def ord_p(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if isinstance(n, Fraction):
        return ord_p(n.numerator, p) - ord_p(n.denominator, p)
    n = int(n)
    if n == 0:
        raise ValueError("ord_p(0) undefined")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) with the standard conventions for n <= 0 and n even."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and a % 8 in (3, 5):
            result = -result
    return result * _jacobi(a, n)


@lru_cache(maxsize=None)
def primes_up_to(n: int) -> tuple:
    """All primes <= n via a byte sieve."""
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i in range(2, n + 1) if sieve[i])


# ---------------------------------------------------------------------------
# quadratic characters


class QuadChar:
    """The real character n -> (D/n) attached to a nonzero integer D."""

    __slots__ = ("disc",)

    def __init__(self, disc: int):
        if disc == 0:
            raise ValueError("discriminant must be nonzero")
        self.disc = int(disc)

    def __call__(self, n: int) -> int:
        return kronecker(self.disc, n)

    def __repr__(self):
        return "QuadChar(%d)" % self.disc

    def __eq__(self, other):
        return isinstance(other, QuadChar) and self.disc == other.disc

    def __hash__(self):
        return hash(("QuadChar", self.disc))

    @property
    def modulus(self) -> int:
        return abs(self.disc)

    def sign_at_minus_one(self) -> int:
        return 1 if self.disc > 0 else -1

    def primitive_core(self):
        """Write disc = D0 * t^2 with D0 a fundamental discriminant (or 1).

        Requires disc = 0 or 1 mod 4, which is the case for every character
        fed into an L-value here.  Returns (D0, t).
        """
        d = self.disc
        if d % 4 in (2, 3):
            raise ValueError("%d is not 0 or 1 mod 4" % d)
        u, v = squarefree_decompose(abs(d))
        core = v if d > 0 else -v
        if core % 4 != 1:
            core *= 4
        t2 = d // core
        t = math.isqrt(t2)
        if t * t != t2:
            raise ValueError("no fundamental core for %d" % d)
        return core, t


def sigma_char(s: int, a: int, chi: QuadChar) -> Fraction:
    """Divisor sum sum_{d|a} chi(d) d^s with exact rational value."""
    if a < 1:
        raise ValueError("need a >= 1")
    total = Fraction(0)
    for d in divisors(a):
        c = chi(d)
        if c:
            total += c * Fraction(d) ** s
    return total


def sigma_plain(s: int, a: int) -> Fraction:
    total = Fraction(0)
    for d in divisors(a):
        total += Fraction(d) ** s
    return total


# ---------------------------------------------------------------------------
# Bernoulli data


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with the B_1 = -1/2 convention."""
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        total += math.comb(n + 1, j) * bernoulli_number(j)
    return -total / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    x = Fraction(x)
    total = Fraction(0)
    for j in range(n + 1):
        total += math.comb(n, j) * bernoulli_number(j) * x ** (n - j)
    return total


def gen_bernoulli(n: int, chi: QuadChar) -> Fraction:
    """Generalized Bernoulli number of chi taken mod its defining modulus."""
    if n < 1:
        raise ValueError("need n >= 1")
    f = chi.modulus
    total = Fraction(0)
    for a in range(1, f + 1):
        c = chi(a)
        if c:
            total += c * bernoulli_poly(n, Fraction(a, f))
    return Fraction(f) ** (n - 1) * total


# ---------------------------------------------------------------------------
# exact special L-values


@dataclass(frozen=True)
class ExactLValue:
    """A value rational * pi^pi_exp * sqrt(root) with root squarefree positive."""

    rational: Fraction
    pi_exp: int
    root: int

    def as_fraction(self) -> Fraction:
        if self.pi_exp != 0 or self.root != 1:
            raise ValueError("value is not rational")
        return self.rational

    def approx(self) -> float:
        return float(self.rational) * math.pi**self.pi_exp * math.sqrt(self.root)


def _normalized_root(rational: Fraction, root_content: Fraction):
    """Reduce rational * sqrt(root_content) to (rational', squarefree int root)."""
    rc = Fraction(root_content)
    if rc <= 0:
        raise ValueError("root content must be positive")
    # sqrt(p/q) = sqrt(p*q)/q
    n = rc.numerator * rc.denominator
    u, v = squarefree_decompose(n)
    return rational * Fraction(u, rc.denominator), v


@lru_cache(maxsize=None)
def l_value_exact(s: int, chi: QuadChar) -> ExactLValue:
    """L(s, chi) in closed form for integer s >= 0 of matching parity.

    The character is reduced to its primitive core; the imprimitive part
    contributes finite Euler factors.  Raises ParityUnsupported when the
    value has no elementary closed form.
    """
    if s < 0:
        raise ValueError("need s >= 0")
    core, t = chi.primitive_core()
    parity = 0 if core > 0 else 1
    core_chi = QuadChar(core)
    if s == 0:
        if core == 1:
            raise ParityUnsupported("L(0) of a principal character")
        rat = -gen_bernoulli(1, core_chi)
        for p in prime_divisors(t):
            rat *= 1 - core_chi(p)
        return ExactLValue(rat, 0, 1)
    if s % 2 != parity:
        raise ParityUnsupported(
            "L(%d, (%d/.)) has no elementary closed form" % (s, chi.disc)
        )
    f0 = abs(core)
    bern = gen_bernoulli(s, core_chi)
    j = (s - parity) // 2
    rat = Fraction(
        (-4) ** j * math.factorial(j),
        math.factorial(2 * j) * math.factorial((s + parity) // 2 - 1),
    )
    rat *= -bern / s
    for p in prime_divisors(t):
        c = core_chi(p)
        if c:
            rat *= 1 - c * Fraction(1, p) ** s
    rat, root = _normalized_root(rat / Fraction(f0) ** s, Fraction(f0))
    return ExactLValue(rat, s, root)


def zeta_exact(s: int) -> ExactLValue:
    return l_value_exact(s, QuadChar(1))


# ---------------------------------------------------------------------------
# certified dyadic intervals


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _round_down(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(math.floor(x * s), s)


def _round_up(x: Fraction, bits: int) -> Fraction:
    s = 1 << bits
    return Fraction(math.ceil(x * s), s)


class Interval:
    """Closed interval with dyadic rational endpoints, outward rounded."""

    __slots__ = ("lo", "hi")
    BITS = 96

    def __init__(self, lo, hi=None, bits: int = None):
        bits = self.BITS if bits is None else bits
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo if _is_dyadic(lo) else _round_down(lo, bits)
        self.hi = hi if _is_dyadic(hi) else _round_up(hi, bits)

    def __repr__(self):
        return "Interval(%s, %s)" % (self.lo, self.hi)

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sign(self):
        """+1/-1 when determined, None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def __add__(self, other):
        other = other if isinstance(other, Interval) else Interval(Fraction(other))
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = other if isinstance(other, Interval) else Interval(Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = other if isinstance(other, Interval) else Interval(Fraction(other))
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self, bits: int = None):
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        bits = self.BITS if bits is None else bits
        a, b = 1 / self.hi, 1 / self.lo
        return Interval(_round_down(a, bits), _round_up(b, bits))

    def __truediv__(self, other):
        other = other if isinstance(other, Interval) else Interval(Fraction(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return Interval(Fraction(other)) * self.reciprocal()

    def __pow__(self, n: int):
        if n == 0:
            return Interval(Fraction(1))
        if n < 0:
            return (self**(-n)).reciprocal()
        out = self
        for _ in range(n - 1):
            out = out * self
        return out


def sqrt_interval(x, bits: int = Interval.BITS) -> Interval:
    """Certified enclosure of sqrt(x) for a nonnegative rational x."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Interval(Fraction(0))
    # sqrt(n/d) = sqrt(n*d)/d
    big = x.numerator * x.denominator << (2 * bits)
    r = math.isqrt(big)
    return Interval(
        Fraction(r, x.denominator << bits), Fraction(r + 1, x.denominator << bits)
    )


def _integer_nth_root(x: int, n: int) -> int:
    """floor(x ** (1/n)) for x >= 0."""
    if x < 0:
        raise ValueError
    if x == 0:
        return 0
    if n == 1:
        return x
    if n == 2:
        return math.isqrt(x)
    r = int(round(x ** (1.0 / n)))
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def pow_interval(base, exponent, bits: int = Interval.BITS) -> Interval:
    """Certified base**exponent for positive rational base, rational exponent."""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ValueError("need positive base")
    if exponent < 0:
        return pow_interval(1 / base, -exponent, bits)
    p, q = exponent.numerator, exponent.denominator
    y = base**p
    if q == 1:
        return Interval(y)
    # q-th root of y via integer root of a scaled numerator
    big = y.numerator * y.denominator ** (q - 1) << (q * bits)
    r = _integer_nth_root(big, q)
    return Interval(Fraction(r, y.denominator << bits), Fraction(r + 1, y.denominator << bits))


@lru_cache(maxsize=None)
def _arctan_inv_interval(x: int, bits: int) -> Interval:
    """Enclosure of arctan(1/x) by the alternating power series."""
    term = Fraction(1, x)
    total = Fraction(0)
    k = 0
    tol = Fraction(1, 1 << (bits + 4))
    while True:
        nxt = term / (2 * k + 1)
        if nxt < tol:
            return Interval(total - nxt, total + nxt, bits=bits)
        total += nxt if k % 2 == 0 else -nxt
        term /= x * x
        k += 1


@lru_cache(maxsize=None)
def pi_interval(bits: int = Interval.BITS) -> Interval:
    """Machin's formula with certified alternating-series remainders."""
    a = _arctan_inv_interval(5, bits + 8)
    b = _arctan_inv_interval(239, bits + 8)
    out = a * 16 - b * 4
    return Interval(out.lo, out.hi, bits=bits)


def _dirichlet_partial_scaled(values, p_terms: int, s: int, bits: int):
    """Scaled-integer enclosure of sum_{n<=P} chi(n) n^{-s} for integer s."""
    scale = 1 << bits
    lo = hi = 0
    for n in range(1, p_terms + 1):
        c = values(n)
        if not c:
            continue
        q, r = divmod(scale, n**s)
        if c > 0:
            lo += q
            hi += q + (1 if r else 0)
        else:
            lo -= q + (1 if r else 0)
            hi -= q
    return Fraction(lo, scale), Fraction(hi, scale)


def _zeta_interval(s, prec: Fraction) -> Interval:
    """Enclosure of zeta(s), s > 1, partial sum plus monotone integral tails."""
    s = Fraction(s)
    if s.denominator == 1:
        si = int(s)
        p_terms = 64
        while True:
            lo, hi = _dirichlet_partial_scaled(lambda n: 1, p_terms, si, Interval.BITS)
            tail_hi = Fraction(1, (si - 1) * p_terms ** (si - 1))
            tail_lo = Fraction(1, (si - 1) * (p_terms + 1) ** (si - 1))
            out = Interval(lo + tail_lo, hi + tail_hi)
            if out.width <= prec:
                return out
            p_terms *= 4
    p_terms = 64
    while True:
        total = Interval(Fraction(0))
        for n in range(1, p_terms + 1):
            total = total + pow_interval(Fraction(n), -s)
        # tail lies between the integrals of x^(-s) from P+1 and from P
        tail_hi = pow_interval(Fraction(p_terms), 1 - s) / (s - 1)
        tail_lo = pow_interval(Fraction(p_terms + 1), 1 - s) / (s - 1)
        out = Interval(total.lo + tail_lo.lo, total.hi + tail_hi.hi)
        if out.width <= prec:
            return out
        p_terms *= 4


@lru_cache(maxsize=None)
def _l_value_interval_cached(s: Fraction, disc: int, prec: Fraction) -> Interval:
    chi = QuadChar(disc)
    core, t = chi.primitive_core()
    # imprimitive Euler corrections
    factor = Interval(Fraction(1))
    for p in prime_divisors(t):
        c = kronecker(core, p)
        if c:
            factor = factor * (1 - c * pow_interval(Fraction(p), -s))
    if core == 1:
        return _zeta_interval(s, prec / 2) * factor
    core_chi = QuadChar(core)
    f0 = abs(core)
    use_int = s.denominator == 1
    p_terms = 4 * f0
    while True:
        if use_int:
            lo, hi = _dirichlet_partial_scaled(core_chi, p_terms, int(s), Interval.BITS)
            total = Interval(lo, hi)
        else:
            total = Interval(Fraction(0))
            for n in range(1, p_terms + 1):
                c = core_chi(n)
                if c:
                    term = pow_interval(Fraction(n), -s)
                    total = total + (term if c > 0 else -term)
        # Abel summation tail bound with character sums bounded by f0
        bound = (2 * f0) * pow_interval(Fraction(p_terms + 1), -s)
        out = Interval(total.lo - bound.hi, total.hi + bound.hi)
        if out.width <= prec:
            return out * factor
        p_terms *= 4


def l_value_interval(s, chi: QuadChar, prec=Fraction(1, 10**8)) -> Interval:
    """Certified enclosure of L(s, chi) for rational s > 1."""
    s = Fraction(s)
    prec = Fraction(prec)
    if s <= 1:
        raise ValueError("need s > 1")
    return _l_value_interval_cached(s, chi.disc, prec)


def exact_l_to_interval(val: ExactLValue, bits: int = Interval.BITS) -> Interval:
    out = Interval(val.rational)
    if val.pi_exp:
        out = out * pi_interval(bits) ** val.pi_exp
    if val.root != 1:
        out = out * sqrt_interval(val.root, bits)
    return out


# ---------------------------------------------------------------------------
# Euler-product constants


@lru_cache(maxsize=None)
def _euler_product(sign: int, prec_num: int, prec_den: int) -> Interval:
    prec = Fraction(prec_num, prec_den)
    # tail of log-linearized factors bounded by sum_{n>P} 1/(n(n-1)) = 1/P
    p_max = int(6 / prec) if prec < Fraction(1, 2) else 16
    bits = 96
    scale = 1 << bits
    lo = hi = scale
    for p in primes_up_to(p_max):
        num = p * (p - 1) + sign
        den = p * (p - 1)
        lo = lo * num // den
        hi = -((-hi * num) // den)
    if sign > 0:
        # 1 <= tail <= exp(1/P) <= P/(P-1)
        hi = -((-hi * p_max) // (p_max - 1))
    else:
        # 1 - 1/P <= tail <= 1
        lo = lo * (p_max - 1) // p_max
    return Interval(Fraction(lo, scale), Fraction(hi, scale))


def euler_product_constant(kind: str, prec=Fraction(1, 10**6)) -> Interval:
    """Certified totient-type Euler products and the derived cone bound."""
    prec = Fraction(prec)
    if kind == "landau":
        return _euler_product(1, prec.numerator, prec.denominator)
    if kind == "artin":
        return _euler_product(-1, prec.numerator, prec.denominator)
    if kind == "cone_bound":
        landau = _euler_product(1, prec.numerator, 3 * prec.denominator)
        artin = _euler_product(-1, prec.numerator, 3 * prec.denominator)
        one = Interval(Fraction(1))
        return one - (landau - artin) * Fraction(1, 2)
    raise ValueError("unknown constant %r" % kind)
