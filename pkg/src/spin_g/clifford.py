"""Clifford algebra Cl(s,t) over the exact scalar tower.

Conventions frozen here and relied on everywhere else:
  * generators e_1..e_s square to +1, e_{s+1}..e_{s+t} to -1, and
    e_i e_j + e_j e_i = 2 eta_ij;
  * blades are strictly increasing index sets, stored as bitmasks, ordered
    blade-lexicographically (tuple order on the index sequences, scalar first);
  * the vector representation is untwisted conjugation v -> a v a^{-1}.

Spin elements are even multivectors with a * reverse(a) = 1 whose conjugation
preserves the grade-1 subspace.  Products of plane rotors built from rational
points on the unit circle/hyperbola stay exactly unit; exp of a bivector is
exact on null planes and on rotation planes whose half-angle is a multiple of
pi/12, and otherwise falls back to a truncated exact series of order 24 with a
certified remainder bound.
"""
from __future__ import annotations

import math
from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .scalars import (
    ExactnessError,
    PI,
    Scalar,
    ScalarLike,
    cos_exact,
    sin_exact,
)

SERIES_ORDER = 24


@dataclass(frozen=True)
class Signature:
    s: int
    t: int

    def __post_init__(self):
        if self.s < 0 or self.t < 0 or self.s + self.t == 0:
            raise ValueError("signature needs s,t >= 0 and s+t >= 1")

    @property
    def n(self) -> int:
        return self.s + self.t

    def eta(self, i: int) -> int:
        """Metric square of e_i, 1-based index."""
        if not 1 <= i <= self.n:
            raise IndexError(f"generator index {i} out of range")
        return 1 if i <= self.s else -1

    @property
    def eta_diag(self) -> Tuple[int, ...]:
        return tuple(self.eta(i) for i in range(1, self.n + 1))


def mask_indices(mask: int) -> Tuple[int, ...]:
    """Bitmask -> strictly increasing 1-based index tuple."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError("repeated generator index in blade")
        mask |= bit
    return mask


def blade_lex_key(mask: int) -> Tuple[int, ...]:
    return mask_indices(mask)


def blades_lex(n: int) -> List[int]:
    """All blade masks of an n-generator algebra in blade-lex order."""
    return sorted(range(1 << n), key=blade_lex_key)


_MUL_TABLES: Dict[Tuple[int, int], Dict[Tuple[int, int], Tuple[int, int]]] = {}


def _blade_mul(sig: Signature, ma: int, mb: int) -> Tuple[int, int]:
    """Product of basis blades: returns (sign_and_metric_factor, result_mask)."""
    table = _MUL_TABLES.setdefault((sig.s, sig.t), {})
    hit = table.get((ma, mb))
    if hit is not None:
        return hit
    res = list(mask_indices(ma))
    factor = 1
    for b in mask_indices(mb):
        pos = bisect_left(res, b)
        swaps = len(res) - pos
        if pos < len(res) and res[pos] == b:
            swaps -= 1  # passing the matching generator itself is not a swap
            if swaps % 2:
                factor = -factor
            factor *= sig.eta(b)
            res.pop(pos)
        else:
            if swaps % 2:
                factor = -factor
            insort(res, b)
    out = (factor, indices_mask(res))
    table[(ma, mb)] = out
    return out


class MultiVector:
    __slots__ = ("sig", "_coeffs")

    def __init__(self, sig: Signature, coeffs: Dict[int, ScalarLike] | None = None):
        self.sig = sig
        clean: Dict[int, Scalar] = {}
        if coeffs:
            for mask, c in coeffs.items():
                c = Scalar.of(c)
                if not c.is_zero():
                    clean[mask] = c
        self._coeffs = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def scalar(sig: Signature, x: ScalarLike) -> "MultiVector":
        return MultiVector(sig, {0: Scalar.of(x)})

    @staticmethod
    def basis_vector(sig: Signature, i: int) -> "MultiVector":
        sig.eta(i)  # bounds check
        return MultiVector(sig, {1 << (i - 1): Scalar.of(1)})

    @staticmethod
    def blade(sig: Signature, indices: Sequence[int], coeff: ScalarLike = 1) -> "MultiVector":
        for i in indices:
            sig.eta(i)
        return MultiVector(sig, {indices_mask(indices): Scalar.of(coeff)})

    # -- structure ----------------------------------------------------

    def coeff(self, indices: Sequence[int]) -> Scalar:
        return self._coeffs.get(indices_mask(indices), Scalar())

    def coeff_mask(self, mask: int) -> Scalar:
        return self._coeffs.get(mask, Scalar())

    def items(self) -> List[Tuple[int, Scalar]]:
        return sorted(self._coeffs.items(), key=lambda kv: blade_lex_key(kv[0]))

    def grades(self) -> set:
        return {bin(m).count("1") for m in self._coeffs}

    def grade_projection(self, k: int) -> "MultiVector":
        return MultiVector(
            self.sig, {m: c for m, c in self._coeffs.items() if bin(m).count("1") == k}
        )

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_scalar(self) -> bool:
        return self.grades() <= {0}

    def scalar_coeff(self) -> Scalar:
        return self._coeffs.get(0, Scalar())

    def is_even(self) -> bool:
        return all(bin(m).count("1") % 2 == 0 for m in self._coeffs)

    # -- arithmetic ---------------------------------------------------

    def _require_same(self, other: "MultiVector"):
        if self.sig != other.sig:
            raise ValueError("mixed signatures")

    def __add__(self, other):
        if isinstance(other, MultiVector):
            self._require_same(other)
            coeffs = dict(self._coeffs)
            for m, c in other._coeffs.items():
                coeffs[m] = coeffs.get(m, Scalar()) + c
            return MultiVector(self.sig, coeffs)
        return self + MultiVector.scalar(self.sig, other)

    __radd__ = __add__

    def __neg__(self):
        return MultiVector(self.sig, {m: -c for m, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, MultiVector):
            return self + (-other)
        return self + MultiVector.scalar(self.sig, -Scalar.of(other))

    def __rsub__(self, other):
        return MultiVector.scalar(self.sig, other) - self

    def __mul__(self, other):
        if isinstance(other, MultiVector):
            self._require_same(other)
            out: Dict[int, Scalar] = {}
            for ma, ca in self._coeffs.items():
                for mb, cb in other._coeffs.items():
                    f, mo = _blade_mul(self.sig, ma, mb)
                    if f == 0:
                        continue
                    term = ca * cb if f == 1 else ca * cb * f
                    prev = out.get(mo)
                    out[mo] = term if prev is None else prev + term
            return MultiVector(self.sig, out)
        c = Scalar.of(other)
        return MultiVector(self.sig, {m: v * c for m, v in self._coeffs.items()})

    def __rmul__(self, other):
        # scalars commute with everything
        return self * other

    def __truediv__(self, other: ScalarLike):
        c = Scalar.of(other)
        return MultiVector(self.sig, {m: v / c for m, v in self._coeffs.items()})

    def reverse(self) -> "MultiVector":
        out = {}
        for m, c in self._coeffs.items():
            k = bin(m).count("1")
            out[m] = -c if (k * (k - 1) // 2) % 2 else c
        return MultiVector(self.sig, out)

    def __eq__(self, other):
        if isinstance(other, MultiVector):
            return self.sig == other.sig and self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction, Scalar)):
            return self == MultiVector.scalar(self.sig, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.sig, tuple(sorted(self._coeffs.items()))))

    def norm_mv(self) -> "MultiVector":
        return self * self.reverse()

    def first_nonzero(self) -> Tuple[int, Scalar] | None:
        """First blade (in blade-lex order) with nonzero coefficient."""
        items = self.items()
        return items[0] if items else None

    def to_float(self) -> Dict[int, float]:
        return {m: float(c) for m, c in self._coeffs.items()}

    def __repr__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for m, c in self.items():
            name = "e" + "".join(str(i) for i in mask_indices(m)) if m else "1"
            parts.append(f"({c!r})*{name}" if m else f"({c!r})")
        return " + ".join(parts)


def clifford_product(a: MultiVector, b: MultiVector) -> MultiVector:
    return a * b


def reverse(a: MultiVector) -> MultiVector:
    return a.reverse()


def grade_projection(a: MultiVector, k: int) -> MultiVector:
    return a.grade_projection(k)


class SpinElement:
    """Even multivector of unit Clifford norm acting by untwisted conjugation.

    norm_defect_bound is 0 for exactly-unit elements; the series path of
    exp_bivector attaches its certified truncation bound instead, and the
    unit-norm / grade-preservation checks are then made within that bound.
    """

    __slots__ = ("mv", "norm_defect_bound")

    def __init__(self, mv: MultiVector, norm_defect_bound: float = 0.0):
        ok, problems = _spin_checks(mv, norm_defect_bound)
        if not ok:
            raise ValueError("not a spin element: " + "; ".join(problems))
        self.mv = mv
        self.norm_defect_bound = norm_defect_bound

    @property
    def sig(self) -> Signature:
        return self.mv.sig

    def inverse(self) -> "SpinElement":
        return SpinElement(self.mv.reverse(), self.norm_defect_bound)

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        return SpinElement(
            self.mv * other.mv, self.norm_defect_bound + other.norm_defect_bound
        )

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.mv, self.norm_defect_bound)

    def __eq__(self, other):
        if isinstance(other, SpinElement):
            return self.mv == other.mv
        return NotImplemented

    def __hash__(self):
        return hash(("spin", self.mv))

    def __repr__(self):
        return f"SpinElement({self.mv!r})"


def _spin_checks(mv: MultiVector, bound: float = 0.0) -> Tuple[bool, List[str]]:
    problems = []
    if mv.is_zero():
        return False, ["zero multivector"]
    if not mv.is_even():
        problems.append(f"odd grades present: {sorted(g for g in mv.grades() if g % 2)}")
    norm = mv.norm_mv()
    if bound == 0.0:
        if not (norm.is_scalar() and norm.scalar_coeff() == 1):
            problems.append(f"Clifford norm is {norm!r}, not 1")
    else:
        defect = _float_linf(norm - MultiVector.scalar(mv.sig, 1))
        if defect > bound + 1e-9:
            problems.append(f"norm defect {defect:g} exceeds certified bound {bound:g}")
    if not problems:
        rev = mv.reverse()
        for i in range(1, mv.sig.n + 1):
            conj = mv * MultiVector.basis_vector(mv.sig, i) * rev
            junk = conj - conj.grade_projection(1)
            if bound == 0.0:
                if not junk.is_zero():
                    problems.append(f"conjugation of e{i} leaves grade-1: {sorted(junk.grades())}")
                    break
            else:
                if _float_linf(junk) > 3 * bound + 1e-9:
                    problems.append(f"conjugation of e{i} leaves grade-1 beyond bound")
                    break
    return not problems, problems


def _float_linf(mv: MultiVector) -> float:
    vals = [abs(v) for v in mv.to_float().values()]
    return max(vals) if vals else 0.0


def is_spin_element(mv: MultiVector) -> Tuple[bool, List[str]]:
    """Exact membership test with diagnostics (even, unit norm, grade-1 stable)."""
    return _spin_checks(mv, 0.0)


def rotation_point(t: Fraction | int) -> Tuple[Fraction, Fraction]:
    """Rational point on c^2 + s^2 = 1 from the tangent-half parameterization."""
    t = Fraction(t)
    den = 1 + t * t
    return (1 - t * t) / den, 2 * t / den


def boost_point(t: Fraction | int) -> Tuple[Fraction, Fraction]:
    """Rational point on c^2 - s^2 = 1; needs |t| != 1."""
    t = Fraction(t)
    den = 1 - t * t
    if den == 0:
        raise ValueError("parameter on the light cone")
    return (1 + t * t) / den, 2 * t / den


def plane_rotor(sig: Signature, i: int, j: int, c: ScalarLike, s: ScalarLike) -> SpinElement:
    """c + s*e_i e_j, checked to have unit norm for the plane's type."""
    if i == j:
        raise ValueError("rotor plane needs distinct generators")
    c, s = Scalar.of(c), Scalar.of(s)
    plane_sq = -sig.eta(i) * sig.eta(j)  # (e_i e_j)^2
    norm = c * c - s * s * plane_sq
    if norm != 1:
        kind = "c^2 + s^2" if plane_sq == -1 else "c^2 - s^2"
        raise ValueError(f"rotor coefficients must satisfy {kind} = 1")
    mv = MultiVector(sig, {0: c, indices_mask((i, j)): s})
    return SpinElement(mv)


def exp_bivector(B: MultiVector) -> SpinElement:
    """Exponential of a bivector.

    Null planes and rotation planes with half-angle a multiple of pi/12 get
    the exact closed form; anything else (including boost planes, whose
    cosh/sinh values are never algebraic for nonzero arguments) gets the
    order-24 exact series with a certified remainder bound attached.
    """
    if B.is_zero():
        return SpinElement(MultiVector.scalar(B.sig, 1))
    if B.grades() != {2}:
        raise ValueError("exp_bivector needs a pure grade-2 argument")
    B2 = B * B
    if B2.is_scalar():
        lam = B2.scalar_coeff()
        if lam.is_zero():
            return SpinElement(MultiVector.scalar(B.sig, 1) + B)
        if lam.sign() < 0:
            try:
                m = (-lam).sqrt()
                c, s = cos_exact(m), sin_exact(m)
                unit = B / m
                return SpinElement(MultiVector.scalar(B.sig, c) + unit * s)
            except ExactnessError:
                pass
    return _exp_series(B)


def _exp_series(B: MultiVector, order: int = SERIES_ORDER) -> SpinElement:
    term = MultiVector.scalar(B.sig, 1)
    total = term
    for k in range(1, order + 1):
        term = term * B / k
        total = total + term
    nb = sum(abs(v) for v in B.to_float().values()) * (1 + 1e-12)
    if nb >= order + 2:
        raise ValueError("bivector too large for a certified series bound; rescale")
    head = nb ** (order + 1) / math.factorial(order + 1)
    tail = head / (1 - nb / (order + 2))
    # tail bounds |exp(B) - total| in coefficient 1-norm; products against the
    # full exponential inflate it before it can bound the norm defect
    bound = tail * (2 * math.exp(nb) + tail)
    return SpinElement(total, norm_defect_bound=max(bound, 1e-300))


def float_mul(sig: Signature, a: Dict[int, float], b: Dict[int, float]) -> Dict[int, float]:
    """Clifford product on float coefficient dicts (interop path)."""
    out: Dict[int, float] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            f, mo = _blade_mul(sig, ma, mb)
            out[mo] = out.get(mo, 0.0) + f * ca * cb
    return out


def float_reverse(a: Dict[int, float]) -> Dict[int, float]:
    out = {}
    for m, c in a.items():
        k = bin(m).count("1")
        out[m] = -c if (k * (k - 1) // 2) % 2 else c
    return out


def exp_bivector_numeric(B: MultiVector, terms: int = 40) -> Dict[int, float]:
    """Float-path exponential (scaling and squaring on float coefficients).

    Independent of the exact path; used for cross-checks and float interop.
    """
    if not B.grades() <= {2}:
        raise ValueError("bivector expected")
    coeffs = B.to_float()
    k = 0
    scale = max([abs(v) for v in coeffs.values()], default=0.0)
    while scale > 0.5:
        scale /= 2.0
        k += 1
    coeffs = {m: v / (1 << k) for m, v in coeffs.items()}
    total = {0: 1.0}
    term = {0: 1.0}
    for j in range(1, terms):
        term = {m: v / j for m, v in float_mul(B.sig, term, coeffs).items()}
        for m, v in term.items():
            total[m] = total.get(m, 0.0) + v
    for _ in range(k):
        total = float_mul(B.sig, total, total)
    return {m: v for m, v in total.items() if abs(v) > 1e-300}


def vector_rep(a: SpinElement) -> List[List[Scalar]]:
    """Matrix of v -> a v a^{-1} on the generator basis (columns are images)."""
    n = a.sig.n
    rev = a.mv.reverse()
    cols = []
    for j in range(1, n + 1):
        image = a.mv * MultiVector.basis_vector(a.sig, j) * rev
        junk = image - image.grade_projection(1)
        if a.norm_defect_bound == 0.0:
            if not junk.is_zero():
                raise ValueError("conjugation does not preserve grade 1")
        cols.append([image.coeff((i,)) for i in range(1, n + 1)])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def eta_matrix(sig: Signature) -> List[List[Scalar]]:
    return [
        [Scalar.of(sig.eta(i + 1)) if i == j else Scalar() for j in range(sig.n)]
        for i in range(sig.n)
    ]


def half_angle_bivector(sig: Signature, i: int, j: int, theta_over_pi: Fraction | int) -> MultiVector:
    """(theta/2) e_i e_j with theta = theta_over_pi * pi, kept exact."""
    half = PI * (Fraction(theta_over_pi) / 2)
    return MultiVector.blade(sig, (i, j), half)
