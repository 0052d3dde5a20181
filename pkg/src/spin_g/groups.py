"""Spin^G(V) = (Spin(V) x G) / {(1,1), (-1,-1)} for compiled auxiliary groups.

Auxiliary families are the compact groups with a distinguished central -1:
U(1) as exact unit complex numbers, SU(2) as exact unit quaternions, and
Spin(k) for k <= 4 on the Euclidean Clifford algebra Cl(k,0).  Group elements
carry exact scalar-tower coordinates; floating-point parts are rejected.

A class [(a,g)] is stored canonically: the first nonzero coefficient of the
spin part in blade-lexicographic order is positive (flipping both signs moves
within the class).  The two covering maps are v -> a v a^{-1} on the vector
side and g -> +/-g (canonical pair) on the auxiliary side; their joint kernel
is {[1,1], [-1,1]}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import exactlinalg as xl
from .clifford import (
    MultiVector,
    Signature,
    SpinElement,
    boost_point,
    float_mul,
    float_reverse,
    plane_rotor,
    rotation_point,
    vector_rep,
)
from .scalars import Scalar, ScalarLike

Coords = Tuple[Scalar, ...]


def _coords(xs: Sequence[ScalarLike]) -> Coords:
    return tuple(Scalar.of(x) for x in xs)


# ---------------------------------------------------------------------------
# so(s,t) basis tied to the spin convention: Sigma_ab = (1/2) d(pi)(e_a e_b),
# i.e. column a holds -eta_a in row b and column b holds +eta_b in row a.
# ---------------------------------------------------------------------------

def so_basis_pairs(sig: Signature) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(1, sig.n + 1) for b in range(a + 1, sig.n + 1)]


def so_generator(sig: Signature, a: int, b: int) -> List[List[Fraction]]:
    n = sig.n
    M = xl.zeros(n, n)
    M[b - 1][a - 1] = Fraction(-sig.eta(a))
    M[a - 1][b - 1] = Fraction(sig.eta(b))
    return M


def so_coords(sig: Signature, M: xl.Matrix) -> List:
    """Coordinates of an eta-antisymmetric matrix over the Sigma_ab basis."""
    return [M[a - 1][b - 1] * sig.eta(b) for a, b in so_basis_pairs(sig)]


def so_from_coords(sig: Signature, coords: Sequence) -> xl.Matrix:
    n = sig.n
    M = xl.zeros(n, n)
    for (a, b), c in zip(so_basis_pairs(sig), coords):
        M[b - 1][a - 1] = M[b - 1][a - 1] + c * Fraction(-sig.eta(a))
        M[a - 1][b - 1] = M[a - 1][b - 1] + c * Fraction(sig.eta(b))
    return M


def is_eta_antisymmetric(sig: Signature, M: xl.Matrix) -> bool:
    n = sig.n
    for i in range(n):
        for j in range(n):
            if M[i][j] * sig.eta(i + 1) != -(M[j][i] * sig.eta(j + 1)):
                return False
    return True


# ---------------------------------------------------------------------------
# auxiliary families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class U1Element:
    c: Scalar
    s: Scalar


@dataclass(frozen=True)
class QuatElement:
    w: Scalar
    x: Scalar
    y: Scalar
    z: Scalar

    def components(self) -> Coords:
        return (self.w, self.x, self.y, self.z)


def _quat_mul_components(a: Sequence, b: Sequence) -> Tuple:
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return (
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 + y1 * w2 + z1 * x2 - x1 * z2,
        w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
    )


class AuxFamily:
    """Interface of a compiled auxiliary group with central -1."""

    name: str
    abelian: bool
    center_is_z2: bool
    h_dim: int

    # group level
    def identity(self): ...
    def minus_one(self): ...
    def validate(self, g): ...
    def mul(self, a, b): ...
    def inv(self, g): ...
    def negate(self, g): ...
    def canonical_key(self, g) -> Coords: ...
    def sample(self, rng: random.Random): ...
    def generating_sample(self) -> List: ...
    def gbar_matrix(self, g) -> xl.Matrix: ...

    # algebra level: elements are coordinate tuples over a fixed h-basis
    def h_basis_names(self) -> List[str]: ...
    def bracket(self, x: Coords, y: Coords) -> Coords: ...
    def ad(self, g, x: Coords) -> Coords: ...
    def algebra_matrix(self, x: Coords) -> xl.Matrix: ...

    # float parameterization for the conjugacy search
    def conj_param_dim(self) -> int: ...
    def conj_ad_float(self, params, x_float): ...
    def conj_constraints(self, params) -> List[float]: ...
    def conj_witness(self, params): ...
    def float_coords(self, g) -> List[float]: ...
    def conj_group_float(self, params, g_float) -> List[float]: ...

    def zero_h(self) -> Coords:
        return tuple(Scalar() for _ in range(self.h_dim))

    def __eq__(self, other):
        return isinstance(other, AuxFamily) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def canonical_gbar(self, g):
        key = self.canonical_key(g)
        for c in key:
            sgn = c.sign()
            if sgn > 0:
                return g
            if sgn < 0:
                return self.negate(g)
        raise ValueError("zero canonical key")

    def __repr__(self):
        return self.name


class U1Family(AuxFamily):
    name = "U1"
    abelian = True
    center_is_z2 = False  # the center is all of U(1)
    h_dim = 1

    def identity(self):
        return U1Element(Scalar.of(1), Scalar.of(0))

    def minus_one(self):
        return U1Element(Scalar.of(-1), Scalar.of(0))

    def validate(self, g):
        if not isinstance(g, U1Element):
            raise TypeError("U1 element expected")
        if g.c * g.c + g.s * g.s != 1:
            raise ValueError("U1 element must satisfy c^2 + s^2 = 1")

    def mul(self, a, b):
        return U1Element(a.c * b.c - a.s * b.s, a.c * b.s + a.s * b.c)

    def inv(self, g):
        return U1Element(g.c, -g.s)

    def negate(self, g):
        return U1Element(-g.c, -g.s)

    def canonical_key(self, g):
        return (g.c, g.s)

    def sample(self, rng):
        c, s = rotation_point(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        return U1Element(Scalar.of(c), Scalar.of(s))

    def generating_sample(self):
        c, s = rotation_point(Fraction(1, 2))
        return [U1Element(Scalar.of(c), Scalar.of(s)), self.minus_one()]

    def gbar_matrix(self, g):
        # the squaring map identifies U(1)/Z2 with U(1) again
        c2, s2 = g.c * g.c - g.s * g.s, 2 * g.c * g.s
        return [[c2, -s2], [s2, c2]]

    def h_basis_names(self):
        return ["tau"]

    def bracket(self, x, y):
        return (Scalar(),)

    def ad(self, g, x):
        return _coords(x)

    def algebra_matrix(self, x):
        t = Scalar.of(x[0])
        return [[Scalar(), -t], [t, Scalar()]]

    def conj_param_dim(self):
        return 0

    def conj_ad_float(self, params, x_float):
        return list(x_float)

    def conj_constraints(self, params):
        return []

    def conj_witness(self, params):
        return ("U1", 1.0, 0.0)

    def float_coords(self, g):
        return [float(g.c), float(g.s)]

    def conj_group_float(self, params, g_float):
        return list(g_float)


class SU2Family(AuxFamily):
    name = "SU2"
    abelian = False
    center_is_z2 = True
    h_dim = 3

    def identity(self):
        return QuatElement(*_coords((1, 0, 0, 0)))

    def minus_one(self):
        return QuatElement(*_coords((-1, 0, 0, 0)))

    def validate(self, g):
        if not isinstance(g, QuatElement):
            raise TypeError("SU2 element expected")
        n = sum((c * c for c in g.components()), Scalar())
        if n != 1:
            raise ValueError("SU2 element must be a unit quaternion")

    def mul(self, a, b):
        return QuatElement(*_quat_mul_components(a.components(), b.components()))

    def inv(self, g):
        return QuatElement(g.w, -g.x, -g.y, -g.z)

    def negate(self, g):
        return QuatElement(*(-c for c in g.components()))

    def canonical_key(self, g):
        return g.components()

    def sample(self, rng):
        t = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
        T = sum(u * u for u in t)
        den = 1 + T
        return QuatElement(*_coords(((1 - T) / den, 2 * t[0] / den, 2 * t[1] / den, 2 * t[2] / den)))

    def generating_sample(self):
        return [
            QuatElement(*_coords((0, 1, 0, 0))),
            QuatElement(*_coords((0, 0, 1, 0))),
        ]

    def gbar_matrix(self, g):
        """SO(3) matrix of conjugation on pure quaternions (columns = images)."""
        cols = []
        for basis in ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
            img = _quat_mul_components(
                _quat_mul_components(g.components(), _coords(basis)),
                self.inv(g).components(),
            )
            cols.append(img[1:])
        return [[cols[j][i] for j in range(3)] for i in range(3)]

    def h_basis_names(self):
        return ["i", "j", "k"]

    def bracket(self, x, y):
        x, y = _coords(x), _coords(y)
        # [u, v] = uv - vu = 2 u x v on pure quaternions
        return (
            2 * (x[1] * y[2] - x[2] * y[1]),
            2 * (x[2] * y[0] - x[0] * y[2]),
            2 * (x[0] * y[1] - x[1] * y[0]),
        )

    def ad(self, g, x):
        pure = (Scalar(),) + _coords(x)
        img = _quat_mul_components(
            _quat_mul_components(g.components(), pure), self.inv(g).components()
        )
        return img[1:]

    def algebra_matrix(self, x):
        # left-multiplication matrix of x1 i + x2 j + x3 k on (1, i, j, k)
        x1, x2, x3 = _coords(x)
        z = Scalar()
        return [
            [z, -x1, -x2, -x3],
            [x1, z, -x3, x2],
            [x2, x3, z, -x1],
            [x3, -x2, x1, z],
        ]

    def conj_param_dim(self):
        return 4

    def conj_ad_float(self, params, x_float):
        import math

        n = math.sqrt(sum(p * p for p in params))
        if n < 1e-12:
            return list(x_float)
        q = [p / n for p in params]
        pure = [0.0] + list(x_float)
        qinv = [q[0], -q[1], -q[2], -q[3]]
        img = _quat_mul_components(_quat_mul_components(q, pure), qinv)
        return list(img[1:])

    def conj_constraints(self, params):
        return []  # handled by normalization

    def conj_witness(self, params):
        import math

        n = math.sqrt(sum(p * p for p in params))
        return ("SU2",) + tuple(p / n for p in params)

    def float_coords(self, g):
        return [float(c) for c in g.components()]

    def conj_group_float(self, params, g_float):
        import math

        n = math.sqrt(sum(p * p for p in params))
        if n < 1e-12:
            return list(g_float)
        q = [p / n for p in params]
        qinv = [q[0], -q[1], -q[2], -q[3]]
        return list(_quat_mul_components(_quat_mul_components(q, list(g_float)), qinv))


class SpinKFamily(AuxFamily):
    def __init__(self, k: int):
        if not 1 <= k <= 4:
            raise ValueError("Spin(k) families are compiled for k <= 4")
        self.k = k
        self.sig = Signature(k, 0)
        self.name = f"Spin{k}"
        self.abelian = k <= 2
        self.center_is_z2 = k in (1, 3)
        self._pairs = so_basis_pairs(self.sig)
        self.h_dim = len(self._pairs)
        self._even_masks = [
            m for m in range(1 << k) if bin(m).count("1") % 2 == 0
        ]

    def identity(self):
        return SpinElement(MultiVector.scalar(self.sig, 1))

    def minus_one(self):
        return SpinElement(MultiVector.scalar(self.sig, -1))

    def validate(self, g):
        if not isinstance(g, SpinElement) or g.sig != self.sig:
            raise TypeError(f"Spin({self.k}) element expected")
        if g.norm_defect_bound != 0.0:
            raise ValueError("exactly-unit spin element required")

    def mul(self, a, b):
        return a * b

    def inv(self, g):
        return g.inverse()

    def negate(self, g):
        return -g

    def canonical_key(self, g):
        # full even-basis coordinates; dropping zero blades would conflate
        # distinct single-blade elements
        return tuple(g.mv.coeff_mask(m) for m in self._even_masks)

    def sample(self, rng):
        out = self.identity()
        for (i, j) in self._pairs:
            if rng.random() < 0.6:
                c, s = rotation_point(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
                out = out * plane_rotor(self.sig, i, j, c, s)
        return out

    def generating_sample(self):
        if self.k == 1:
            return [self.minus_one()]
        out = []
        for (i, j) in self._pairs:
            c, s = rotation_point(Fraction(1, 2))
            out.append(plane_rotor(self.sig, i, j, c, s))
        return out

    def gbar_matrix(self, g):
        return vector_rep(g)

    def h_basis_names(self):
        return [f"e{i}{j}" for i, j in self._pairs]

    def _to_bivector(self, x: Coords) -> MultiVector:
        mv = MultiVector(self.sig, {})
        for (i, j), c in zip(self._pairs, x):
            mv = mv + MultiVector.blade(self.sig, (i, j), c)
        return mv

    def _from_bivector(self, mv: MultiVector) -> Coords:
        if not mv.grades() <= {2}:
            raise ValueError("not a bivector")
        return tuple(mv.coeff(p) for p in self._pairs)

    def bracket(self, x, y):
        bx, by = self._to_bivector(_coords(x)), self._to_bivector(_coords(y))
        return self._from_bivector(bx * by - by * bx)

    def ad(self, g, x):
        img = g.mv * self._to_bivector(_coords(x)) * g.mv.reverse()
        return self._from_bivector(img)

    def algebra_matrix(self, x):
        # matrix of left Clifford multiplication on the even subalgebra
        bx = self._to_bivector(_coords(x))
        cols = []
        for m in self._even_masks:
            img = bx * MultiVector(self.sig, {m: Scalar.of(1)})
            col = [img.coeff_mask(mm) for mm in self._even_masks]
            cols.append(col)
        return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]

    def conj_param_dim(self):
        return len(self._even_masks)

    def conj_ad_float(self, params, x_float):
        a = {m: p for m, p in zip(self._even_masks, params)}
        x = {}
        for (i, j), v in zip(self._pairs, x_float):
            if v:
                x[(1 << (i - 1)) | (1 << (j - 1))] = v
        arev = float_reverse(a)
        img = float_mul(self.sig, float_mul(self.sig, a, x), arev)
        return [img.get((1 << (i - 1)) | (1 << (j - 1)), 0.0) for i, j in self._pairs]

    def conj_constraints(self, params):
        a = {m: p for m, p in zip(self._even_masks, params)}
        norm = float_mul(self.sig, a, float_reverse(a))
        out = []
        for m in self._even_masks:
            target = 1.0 if m == 0 else 0.0
            out.append(norm.get(m, 0.0) - target)
        return out

    def conj_witness(self, params):
        return (self.name,) + tuple(params)

    def float_coords(self, g):
        return [float(g.mv.coeff_mask(m)) for m in self._even_masks]

    def conj_group_float(self, params, g_float):
        a = {m: p for m, p in zip(self._even_masks, params)}
        g = {m: v for m, v in zip(self._even_masks, g_float) if v}
        img = float_mul(self.sig, float_mul(self.sig, a, g), float_reverse(a))
        return [img.get(m, 0.0) for m in self._even_masks]


_FAMILIES: Dict[str, AuxFamily] = {}


def family(name: str) -> AuxFamily:
    """Compiled family registry: 'U1', 'SU2', 'Spin1'..'Spin4'."""
    if not _FAMILIES:
        _FAMILIES["U1"] = U1Family()
        _FAMILIES["SU2"] = SU2Family()
        for k in range(1, 5):
            _FAMILIES[f"Spin{k}"] = SpinKFamily(k)
    try:
        return _FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown auxiliary family {name!r}") from None


# ---------------------------------------------------------------------------
# the group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpinGGroup:
    sig: Signature
    aux: AuxFamily

    def __repr__(self):
        return f"Spin^{self.aux.name}({self.sig.s},{self.sig.t})"


class SpinGElement:
    """Class [(a, g)] stored with the canonical sign choice."""

    __slots__ = ("group", "spin", "aux")

    def __init__(self, group: SpinGGroup, spin: SpinElement, aux):
        if spin.sig != group.sig:
            raise ValueError("spin part signature mismatch")
        if spin.norm_defect_bound != 0.0:
            raise ValueError("spin part must be exactly unit (no series remainders)")
        group.aux.validate(aux)
        first = spin.mv.first_nonzero()
        assert first is not None
        if first[1].sign() < 0:
            spin = -spin
            aux = group.aux.negate(aux)
        self.group = group
        self.spin = spin
        self.aux = aux

    @staticmethod
    def identity(group: SpinGGroup) -> "SpinGElement":
        one = SpinElement(MultiVector.scalar(group.sig, 1))
        return SpinGElement(group, one, group.aux.identity())

    @staticmethod
    def central(group: SpinGGroup) -> "SpinGElement":
        """The nontrivial kernel class [-1, 1] = [1, -1]."""
        one = SpinElement(MultiVector.scalar(group.sig, 1))
        return SpinGElement(group, one, group.aux.minus_one())

    def __mul__(self, other: "SpinGElement") -> "SpinGElement":
        if self.group != other.group:
            raise ValueError("mixed groups")
        return SpinGElement(
            self.group, self.spin * other.spin, self.group.aux.mul(self.aux, other.aux)
        )

    def inverse(self) -> "SpinGElement":
        return SpinGElement(self.group, self.spin.inverse(), self.group.aux.inv(self.aux))

    def __eq__(self, other):
        if isinstance(other, SpinGElement):
            return (
                self.group == other.group
                and self.spin.mv == other.spin.mv
                and self.aux == other.aux
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.group, self.spin.mv, self.group.aux.canonical_key(self.aux)))

    def __repr__(self):
        return f"[{self.spin.mv!r}, {self.aux!r}]"


class GbarElement:
    """Element of G/Z2 as a canonical +/- pair."""

    __slots__ = ("family", "rep")

    def __init__(self, fam: AuxFamily, g):
        fam.validate(g)
        self.family = fam
        self.rep = fam.canonical_gbar(g)

    def __eq__(self, other):
        if isinstance(other, GbarElement):
            return self.family == other.family and self.family.canonical_key(
                self.rep
            ) == other.family.canonical_key(other.rep)
        return NotImplemented

    def __hash__(self):
        return hash((self.family.name, self.family.canonical_key(self.rep)))

    def matrix(self) -> xl.Matrix:
        return self.family.gbar_matrix(self.rep)

    def __repr__(self):
        return f"[{self.rep!r}]~"


def covering_to_so(g: SpinGElement) -> xl.Matrix:
    """d-level covering map: the SO(s,t) matrix of v -> a v a^{-1}."""
    return vector_rep(g.spin)


def project_gbar(g: SpinGElement) -> GbarElement:
    return GbarElement(g.group.aux, g.aux)


def aux_family_of(aux) -> AuxFamily:
    """Registry family owning an auxiliary element, keyed on its concrete type."""
    if isinstance(aux, U1Element):
        return family("U1")
    if isinstance(aux, QuatElement):
        return family("SU2")
    if isinstance(aux, SpinElement):
        if aux.sig.t != 0 or not 1 <= aux.sig.n <= 4:
            raise ValueError(f"no compiled Spin(k) family for signature {aux.sig}")
        return family(f"Spin{aux.sig.n}")
    raise TypeError(f"not an auxiliary group element: {aux!r}")


def canonicalize(spin: SpinElement, aux) -> SpinGElement:
    """Quotient map (a, g) -> [a, g]; canonicalize(a, g) == canonicalize(-a, -g)."""
    fam = aux_family_of(aux)
    return SpinGElement(SpinGGroup(spin.sig, fam), spin, aux)


def project_so(g: SpinGElement) -> xl.Matrix:
    return covering_to_so(g)


# ---------------------------------------------------------------------------
# the Lie algebra so(s,t) + h
# ---------------------------------------------------------------------------

class LieElement:
    """Element (X, x) of so(s,t) (+) h; the so part is an eta-antisymmetric
    matrix, the aux part lives in coordinates over the family's h-basis."""

    __slots__ = ("group", "so", "aux")

    def __init__(self, group: SpinGGroup, so: xl.Matrix, aux: Sequence[ScalarLike]):
        n = group.sig.n
        if len(so) != n or any(len(r) != n for r in so):
            raise ValueError("so part has wrong shape")
        aux = _coords(aux)
        if len(aux) != group.aux.h_dim:
            raise ValueError("aux part has wrong h dimension")
        if not is_eta_antisymmetric(group.sig, so):
            raise ValueError("so part is not eta-antisymmetric")
        self.group = group
        self.so = [list(r) for r in so]
        self.aux = aux

    @staticmethod
    def zero(group: SpinGGroup) -> "LieElement":
        return LieElement(group, xl.zeros(group.sig.n, group.sig.n), group.aux.zero_h())

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(
            self.group,
            xl.mat_add(self.so, other.so),
            tuple(a + b for a, b in zip(self.aux, other.aux)),
        )

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(
            self.group,
            xl.mat_sub(self.so, other.so),
            tuple(a - b for a, b in zip(self.aux, other.aux)),
        )

    def __neg__(self) -> "LieElement":
        return self.scale(-1)

    def scale(self, c: ScalarLike) -> "LieElement":
        c = Scalar.of(c)
        return LieElement(
            self.group, xl.mat_scale(self.so, c), tuple(a * c for a in self.aux)
        )

    def __eq__(self, other):
        if isinstance(other, LieElement):
            return (
                self.group == other.group
                and xl.mat_eq(self.so, other.so)
                and all(a == b for a, b in zip(self.aux, other.aux))
            )
        return NotImplemented

    def is_zero(self) -> bool:
        return xl.is_zero_matrix(self.so) and all(not a for a in self.aux)

    def __repr__(self):
        return f"LieElement(so={self.so!r}, aux={self.aux!r})"


def lie_bracket(X: LieElement, Y: LieElement) -> LieElement:
    if X.group != Y.group:
        raise ValueError("mixed groups")
    return LieElement(
        X.group, xl.commutator(X.so, Y.so), X.group.aux.bracket(X.aux, Y.aux)
    )


def adjoint(g: SpinGElement, X: LieElement) -> LieElement:
    """Ad_[a,g](X, x) = (pi(a) X pi(a)^-1, Ad_g x); sign choice drops out."""
    if g.group != X.group:
        raise ValueError("mixed groups")
    P = vector_rep(g.spin)
    Pinv = vector_rep(g.spin.inverse())
    so = xl.mat_mul(xl.mat_mul(P, X.so), Pinv)
    return LieElement(g.group, so, g.group.aux.ad(g.aux, X.aux))


def lie_basis(group: SpinGGroup) -> List[LieElement]:
    """Sigma_ab basis of so followed by the family's h-basis."""
    out = []
    for a, b in so_basis_pairs(group.sig):
        out.append(LieElement(group, so_generator(group.sig, a, b), group.aux.zero_h()))
    zero = xl.zeros(group.sig.n, group.sig.n)
    for i in range(group.aux.h_dim):
        coords = [Scalar.of(1) if j == i else Scalar() for j in range(group.aux.h_dim)]
        out.append(LieElement(group, zero, coords))
    return out


# ---------------------------------------------------------------------------
# deterministic sampling
# ---------------------------------------------------------------------------

def sample_spin_g(group: SpinGGroup, count: int, seed: int) -> List[SpinGElement]:
    """Reproducible exact sample: products of rational-point plane rotors
    (rotations on definite planes, boosts on mixed planes) times a family
    sample, with occasional central flips."""
    rng = random.Random(seed)
    sig = group.sig
    pairs = so_basis_pairs(sig)
    out = []
    for _ in range(count):
        spin_mv = MultiVector.scalar(sig, 1)
        for _r in range(rng.randint(1, 3)):
            i, j = pairs[rng.randrange(len(pairs))]
            t = Fraction(rng.randint(-5, 5), rng.randint(2, 5))
            if sig.eta(i) * sig.eta(j) == 1:
                c, s = rotation_point(t)
            else:
                if abs(t) == 1:
                    t = Fraction(1, 2)
                c, s = boost_point(t)
            spin_mv = spin_mv * plane_rotor(sig, i, j, c, s).mv
        if rng.random() < 0.25:
            spin_mv = -spin_mv
        out.append(SpinGElement(group, SpinElement(spin_mv), group.aux.sample(rng)))
    return out
