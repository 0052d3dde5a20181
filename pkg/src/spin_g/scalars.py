"""Exact scalar tower for the Clifford kernel.

Elements are finite sums  sum_j  c_j * sqrt(d_j) * pi^(k_j)  with rational
coefficients c_j, squarefree positive integers d_j and nonnegative integer
powers of pi.  This is closed under +, -, * and under the partial operations
the rotor constructions need: monomial division, square roots of rational
monomials, inverses of pi-free elements, and exact cos/sin of rational
multiples of pi whose denominator divides 12 (values land in Q(sqrt2, sqrt3)).

Sign queries are certified with exact rational interval arithmetic; a
normalized nonzero element can never evaluate to zero (sqrt of distinct
squarefree integers are linearly independent over Q, and pi is transcendental
over the real quadratic tower), so precision escalation terminates.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Tuple, Union

RationalLike = Union[int, Fraction]

# 50 decimal digits of pi; enclosure used for certified sign evaluation.
_PI_DIGITS = 50
_PI_LO = Fraction(314159265358979323846264338327950288419716939937510, 10**_PI_DIGITS)
_PI_HI = _PI_LO + Fraction(1, 10**_PI_DIGITS)


class ExactnessError(ValueError):
    """Raised when an operation has no exact result in the scalar tower."""


def squarefree_decompose(n: int) -> Tuple[int, int]:
    """Return (m, d) with n = m*m*d and d squarefree, for n >= 1."""
    if n < 1:
        raise ValueError("positive integer expected")
    m, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            m *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return m, d * n


def _sqrt_interval(d: int, digits: int) -> Tuple[Fraction, Fraction]:
    scale = 10**digits
    lo = math.isqrt(d * scale * scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


# Key (d, k): sqrt(d) * pi^k.  Normalized: no zero coefficients.
_Terms = Dict[Tuple[int, int], Fraction]


class Scalar:
    __slots__ = ("_terms",)

    def __init__(self, terms: _Terms | None = None):
        clean: _Terms = {}
        if terms:
            for (d, k), c in terms.items():
                c = Fraction(c)
                if c:
                    clean[(d, k)] = c
        self._terms = clean

    # -- construction -------------------------------------------------

    @staticmethod
    def of(x: "ScalarLike") -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, float):
            raise TypeError("floating-point value where an exact scalar is required")
        return Scalar({(1, 0): Fraction(x)})

    @staticmethod
    def sqrt_rational(q: RationalLike) -> "Scalar":
        """sqrt(q) for rational q >= 0, as m/den * sqrt(d)."""
        q = Fraction(q)
        if q < 0:
            raise ExactnessError("square root of a negative rational")
        if q == 0:
            return Scalar()
        m, d = squarefree_decompose(q.numerator * q.denominator)
        return Scalar({(d, 0): Fraction(m, q.denominator)})

    # -- ring structure -----------------------------------------------

    def __add__(self, other: "ScalarLike") -> "Scalar":
        other = Scalar.of(other)
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return Scalar(terms)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "ScalarLike") -> "Scalar":
        return self + (-Scalar.of(other))

    def __rsub__(self, other: "ScalarLike") -> "Scalar":
        return Scalar.of(other) + (-self)

    def __mul__(self, other: "ScalarLike") -> "Scalar":
        other = Scalar.of(other)
        terms: _Terms = {}
        for (d1, k1), c1 in self._terms.items():
            for (d2, k2), c2 in other._terms.items():
                g = math.gcd(d1, d2)
                key = ((d1 // g) * (d2 // g), k1 + k2)
                c = c1 * c2 * g
                terms[key] = terms.get(key, Fraction(0)) + c
        return Scalar(terms)

    __rmul__ = __mul__

    def __truediv__(self, other: "ScalarLike") -> "Scalar":
        other = Scalar.of(other)
        if other.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        if len(other._terms) == 1:
            (d, k), c = next(iter(other._terms.items()))
            # 1/(c sqrt(d) pi^k) = sqrt(d)/(c d) * pi^(-k)
            out: _Terms = {}
            for (d1, k1), c1 in self._terms.items():
                if k1 < k:
                    raise ExactnessError("division would need a negative pi power")
                g = math.gcd(d1, d)
                out_key = ((d1 // g) * (d // g), k1 - k)
                out[out_key] = out.get(out_key, Fraction(0)) + c1 * g / (c * d)
            return Scalar(out)
        return self * other.inverse()

    def __rtruediv__(self, other: "ScalarLike") -> "Scalar":
        return Scalar.of(other) / self

    def inverse(self) -> "Scalar":
        """Exact inverse; requires a pi-free element (or a single monomial)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if len(self._terms) == 1:
            return Scalar.of(1) / self
        if any(k for (_, k) in self._terms):
            raise ExactnessError("no exact inverse for a multi-term pi element")
        primes = set()
        for (d, _k) in self._terms:
            dd = d
            p = 2
            while p * p <= dd:
                if dd % p == 0:
                    primes.add(p)
                    while dd % p == 0:
                        dd //= p
                p += 1
            if dd > 1:
                primes.add(dd)
        if not primes:
            return Scalar({(1, 0): 1 / self._terms[(1, 0)]})
        p = max(primes)
        a_terms: _Terms = {}
        b_terms: _Terms = {}
        for (d, k), c in self._terms.items():
            if d % p == 0:
                b_terms[(d // p, k)] = c
            else:
                a_terms[(d, k)] = c
        a, b = Scalar(a_terms), Scalar(b_terms)
        root_p = Scalar({(p, 0): Fraction(1)})
        conj = a - root_p * b
        norm = a * a - Scalar.of(p) * b * b
        return conj * norm.inverse()

    def sqrt(self) -> "Scalar":
        """Exact square root; defined for rational monomials times even pi powers."""
        if self.is_zero():
            return Scalar()
        if len(self._terms) != 1:
            raise ExactnessError("square root would need a nested radical")
        (d, k), c = next(iter(self._terms.items()))
        if d != 1 or k % 2 or c < 0:
            raise ExactnessError("no exact square root in the tower")
        root = Scalar.sqrt_rational(c)
        if k:
            root = root * Scalar({(1, k // 2): Fraction(1)})
        return root

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(key == (1, 0) for key in self._terms)

    def as_fraction(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_rational():
            raise ExactnessError("not a rational scalar")
        return self._terms[(1, 0)]

    def sign(self) -> int:
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            return 1 if next(iter(self._terms.values())) > 0 else -1
        for digits in (30, 60, 120, 240):
            lo_sum, hi_sum = Fraction(0), Fraction(0)
            for (d, k), c in self._terms.items():
                lo_r, hi_r = (Fraction(1), Fraction(1)) if d == 1 else _sqrt_interval(d, digits)
                lo, hi = lo_r, hi_r
                if k:
                    pl, ph = _PI_LO**k, _PI_HI**k
                    lo, hi = lo * pl, hi * ph
                if c >= 0:
                    lo_sum += c * lo
                    hi_sum += c * hi
                else:
                    lo_sum += c * hi
                    hi_sum += c * lo
            if lo_sum > 0:
                return 1
            if hi_sum < 0:
                return -1
        raise RuntimeError("sign certification exceeded precision budget")

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            return (self - Scalar.of(other)).is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.as_fraction())
        return hash(tuple(sorted(self._terms.items())))

    def __lt__(self, other: "ScalarLike") -> bool:
        return (self - Scalar.of(other)).sign() < 0

    def __le__(self, other: "ScalarLike") -> bool:
        return (self - Scalar.of(other)).sign() <= 0

    def __gt__(self, other: "ScalarLike") -> bool:
        return (self - Scalar.of(other)).sign() > 0

    def __ge__(self, other: "ScalarLike") -> bool:
        return (self - Scalar.of(other)).sign() >= 0

    def __float__(self) -> float:
        total = 0.0
        for (d, k), c in self._terms.items():
            total += float(c) * math.sqrt(d) * math.pi**k
        return total

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (d, k), c in sorted(self._terms.items()):
            bits = [str(c)]
            if d != 1:
                bits.append(f"sqrt({d})")
            if k == 1:
                bits.append("pi")
            elif k > 1:
                bits.append(f"pi^{k}")
            parts.append("*".join(bits))
        return " + ".join(parts).replace("+ -", "- ")


ScalarLike = Union[int, Fraction, Scalar]

PI = Scalar({(1, 1): Fraction(1)})
ZERO = Scalar()
ONE = Scalar.of(1)

# cos(p * pi/12) for p = 0..12; sin comes from the complementary angle.
_COS_TABLE_12 = {
    0: Scalar.of(1),
    1: (Scalar.sqrt_rational(6) + Scalar.sqrt_rational(2)) * Fraction(1, 4),
    2: Scalar.sqrt_rational(3) * Fraction(1, 2),
    3: Scalar.sqrt_rational(2) * Fraction(1, 2),
    4: Scalar.of(Fraction(1, 2)),
    5: (Scalar.sqrt_rational(6) - Scalar.sqrt_rational(2)) * Fraction(1, 4),
    6: ZERO,
}
for _p in range(7, 13):
    _COS_TABLE_12[_p] = -_COS_TABLE_12[12 - _p]


def _pi_multiple(s: Scalar) -> Fraction:
    """Write s = q * pi exactly, or raise."""
    if s.is_zero():
        return Fraction(0)
    terms = s._terms
    if len(terms) == 1 and (1, 1) in terms:
        return terms[(1, 1)]
    raise ExactnessError("argument is not a rational multiple of pi")


def cos_exact(s: Scalar) -> Scalar:
    """cos(s) for s = (p/q) pi with q | 12; other arguments raise."""
    q = _pi_multiple(s)
    q12 = q * 12
    if q12.denominator != 1:
        raise ExactnessError(
            "no exact cos: angle must be a multiple of pi/12, got %s*pi" % q
        )
    p = int(q12) % 24  # multiples of pi/12 modulo 2*pi
    if p <= 12:
        return _COS_TABLE_12[p]
    return _COS_TABLE_12[24 - p]


def sin_exact(s: Scalar) -> Scalar:
    q = _pi_multiple(s)
    return cos_exact((Fraction(1, 2) - q) * PI)
