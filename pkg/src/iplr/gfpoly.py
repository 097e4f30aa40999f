"""Polynomial arithmetic over the prime field F_b.

A polynomial is stored densely: ``coeffs[i]`` holds the coefficient of
``x**i`` and trailing zeros are stripped, so the zero polynomial has an
empty coefficient tuple.  A non-negative integer ``n`` is identified with
the polynomial whose coefficients are the base-``b`` digits of ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

MAX_BASE = 257


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_base(b: int) -> int:
    """Validate a field characteristic; raises ``ValueError`` if unsupported."""
    if not isinstance(b, int) or isinstance(b, bool):
        raise TypeError(f"base must be an int, got {type(b).__name__}")
    if not is_prime(b) or b > MAX_BASE:
        raise ValueError(f"base must be a prime <= {MAX_BASE}, got {b}")
    return b


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    base: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = _strip(int(a) for a in self.coeffs)
        for a in c:
            if not 0 <= a < self.base:
                raise ValueError(f"coefficient {a} outside F_{self.base}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], base: int) -> "Poly":
        return cls(base, tuple(int(a) % base for a in coeffs))

    @property
    def degree(self) -> float | int:
        """Degree, with ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __int__(self) -> int:
        return poly_to_int(self)

    def __add__(self, other: "Poly") -> "Poly":
        return poly_add(self, other)

    def __sub__(self, other: "Poly") -> "Poly":
        return poly_sub(self, other)

    def __mul__(self, other: "Poly") -> "Poly":
        return poly_mul(self, other)

    def __mod__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[1]

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"Poly(0, b={self.base})"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if a == 1 and i > 0 else (f"{a}" if i == 0 else f"{a}{mono}"))
        return f"Poly({' + '.join(terms)}, b={self.base})"


def poly_from_int(n: int, b: int) -> Poly:
    if n < 0:
        raise ValueError("polynomial encoding must be non-negative")
    digits = []
    while n:
        n, r = divmod(n, b)
        digits.append(r)
    return Poly(b, tuple(digits))


def poly_to_int(a: Poly) -> int:
    n = 0
    for c in reversed(a.coeffs):
        n = n * a.base + c
    return n


def _same_base(*polys: Poly) -> int:
    b = polys[0].base
    for p in polys[1:]:
        if p.base != b:
            raise ValueError(f"base mismatch: {b} vs {p.base}")
    return b


def poly_add(a: Poly, c: Poly) -> Poly:
    b = _same_base(a, c)
    n = max(len(a.coeffs), len(c.coeffs))
    x = a.coeffs + (0,) * (n - len(a.coeffs))
    y = c.coeffs + (0,) * (n - len(c.coeffs))
    return Poly(b, tuple((u + v) % b for u, v in zip(x, y)))


def poly_neg(a: Poly) -> Poly:
    return Poly(a.base, tuple((-u) % a.base for u in a.coeffs))


def poly_sub(a: Poly, c: Poly) -> Poly:
    return poly_add(a, poly_neg(c))


def poly_scale(a: Poly, k: int) -> Poly:
    return Poly(a.base, tuple((k * u) % a.base for u in a.coeffs))


def poly_mul(a: Poly, c: Poly) -> Poly:
    b = _same_base(a, c)
    if a.is_zero() or c.is_zero():
        return Poly(b)
    out = [0] * (len(a.coeffs) + len(c.coeffs) - 1)
    for i, u in enumerate(a.coeffs):
        if u:
            for j, v in enumerate(c.coeffs):
                out[i + j] = (out[i + j] + u * v) % b
    return Poly(b, tuple(out))


def poly_divmod(a: Poly, p: Poly) -> tuple[Poly, Poly]:
    b = _same_base(a, p)
    if p.is_zero():
        raise ZeroDivisionError("zero modulus")
    r = list(a.coeffs)
    dp = len(p.coeffs) - 1
    inv = pow(p.lead(), b - 2, b)
    if len(r) <= dp:
        return Poly(b), a
    quot = [0] * (len(r) - dp)
    for i in range(len(r) - 1, dp - 1, -1):
        t = (r[i] * inv) % b
        if t:
            quot[i - dp] = t
            for j, v in enumerate(p.coeffs):
                r[i - dp + j] = (r[i - dp + j] - t * v) % b
    return Poly(b, tuple(quot)), Poly(b, tuple(r[:dp]))


def poly_mod(a: Poly, p: Poly) -> Poly:
    return poly_divmod(a, p)[1]


def poly_mul_mod(a: Poly, c: Poly, p: Poly) -> Poly:
    """Return ``a * c mod p`` over F_b."""
    if p.is_zero():
        raise ZeroDivisionError("zero modulus")
    return poly_mod(poly_mul(a, c), p)


def poly_pow_mod(a: Poly, e: int, p: Poly) -> Poly:
    if e < 0:
        raise ValueError("negative exponent")
    result = poly_mod(Poly(a.base, (1,)), p)
    base = poly_mod(a, p)
    while e:
        if e & 1:
            result = poly_mul_mod(result, base, p)
        base = poly_mul_mod(base, base, p)
        e >>= 1
    return result


def poly_gcd(a: Poly, c: Poly) -> Poly:
    while not c.is_zero():
        a, c = c, poly_mod(a, c)
    if a.is_zero():
        return a
    return poly_scale(a, pow(a.lead(), a.base - 2, a.base))


def is_irreducible(p: Poly) -> bool:
    """Ben-Or test: ``p`` is irreducible iff gcd(x^(b^i) - x, p) = 1 for i <= deg/2."""
    deg = p.degree
    if p.is_zero() or deg < 1:
        raise ValueError("degree must be positive")
    if deg == 1:
        return True
    b = p.base
    x = Poly(b, (0, 1))
    h = x
    for _ in range(1, deg // 2 + 1):
        h = poly_pow_mod(h, b, p)
        if poly_gcd(poly_sub(h, x), p).degree != 0:
            return False
    return True


def find_irreducible(m: int, b: int) -> Poly:
    """Monic irreducible polynomial of degree ``m`` with the smallest integer encoding."""
    if m < 1:
        raise ValueError("degree must be positive")
    check_base(b)
    for n in range(b**m, 2 * b**m):
        p = poly_from_int(n, b)
        if is_irreducible(p):
            return p
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class DigitExpansion:
    """Digits ``t_1..t_m`` of a b-adic fraction, most significant first."""

    base: int
    digits: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.digits)

    @property
    def numerator(self) -> int:
        n = 0
        for t in self.digits:
            n = n * self.base + t
        return n

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.base**self.m)


def laurent_digits(n: Poly, q: Poly, p: Poly, m: int) -> DigitExpansion:
    """First ``m`` fractional digits of the Laurent series of ``n*q/p``.

    Exact long division over F_b; the polynomial part of ``n*q/p`` is
    discarded, matching the v_m truncation map.
    """
    b = _same_base(n, q, p)
    if p.is_zero():
        raise ZeroDivisionError("zero modulus")
    if m < 1:
        raise ValueError("m must be positive")
    dp = len(p.coeffs) - 1
    r = list(poly_mod(poly_mul(n, q), p).coeffs)
    r += [0] * (dp - len(r))
    inv = pow(p.lead(), b - 2, b)
    digits = []
    for _ in range(m):
        # r <- r*x, then peel off the x^dp coefficient
        top = r[-1] if dp > 0 else 0
        r = [0] + r[:-1] if dp > 0 else []
        t = (top * inv) % b
        digits.append(t)
        if t:
            for j in range(dp):
                r[j] = (r[j] - t * p.coeffs[j]) % b
    return DigitExpansion(b, tuple(digits))


def primitive_element(p: Poly) -> Poly:
    """Smallest-encoding generator of the multiplicative group of F_b[x]/(p).

    ``p`` must be irreducible.
    """
    if not is_irreducible(p):
        raise ValueError("modulus must be irreducible")
    b = p.base
    order = b ** int(p.degree) - 1
    factors = _prime_factors(order)
    one = Poly(b, (1,))
    for e in range(1, b ** int(p.degree)):
        g = poly_from_int(e, b)
        if all(poly_pow_mod(g, order // f, p) != one for f in factors):
            return g
    raise AssertionError("no primitive element")  # unreachable for irreducible p


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out
