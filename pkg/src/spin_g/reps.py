"""Finite-dimensional representations of Spin^G by generator images.

A representation stores float matrices for a canonical generating set (one
plane rotor per coordinate plane plus -1 on the spin side, the family's
generating sample plus -1 on the auxiliary side) together with the derivative
rho_star over the Sigma_ab + h basis.  Bracket compatibility of rho_star,
including vanishing mixed so/h brackets, is validated at construction.

Parity is the image of the central class: Even / Odd when it is +Id / -Id,
Mixed otherwise; a representation only descends to Spin^G when the spin and
auxiliary images of -1 coincide, and check_compatibility reports the parity
obstruction when they do not.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import exactlinalg as xl
from .clifford import (
    MultiVector,
    Signature,
    SpinElement,
    boost_point,
    plane_rotor,
    rotation_point,
    vector_rep,
)
from .groups import (
    LieElement,
    SpinGGroup,
    adjoint,
    lie_basis,
    lie_bracket,
    so_basis_pairs,
    so_coords,
    so_generator,
)
from .scalars import Scalar

BRACKET_TOL = 1e-10


class Parity(enum.Enum):
    EVEN = "Even"
    ODD = "Odd"
    MIXED = "Mixed"


def canonical_spin_generators(sig: Signature) -> List[SpinElement]:
    """One rational-point rotor per coordinate plane (boost on mixed planes)."""
    gens = []
    for a, b in so_basis_pairs(sig):
        if sig.eta(a) * sig.eta(b) == 1:
            c, s = rotation_point(Fraction(1, 2))  # (3/5, 4/5)
        else:
            c, s = boost_point(Fraction(1, 3))  # (5/4, 3/4)
        gens.append(plane_rotor(sig, a, b, c, s))
    return gens


def _to_float_matrix(M) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in M], dtype=float)


@dataclass(eq=False)
class Representation:
    group: SpinGGroup
    dim_W: int
    spin_images: List[np.ndarray]       # aligned with canonical_spin_generators
    aux_images: List[np.ndarray]        # aligned with aux.generating_sample()
    minus_spin_image: np.ndarray
    minus_aux_image: np.ndarray
    rho_so: np.ndarray                  # (n_so, W, W) over the Sigma_ab basis
    rho_aux: np.ndarray                 # (n_h, W, W) over the family h-basis
    name: str = "rep"

    def __post_init__(self):
        W = self.dim_W
        for M in (
            *self.spin_images,
            *self.aux_images,
            self.minus_spin_image,
            self.minus_aux_image,
        ):
            if M.shape != (W, W):
                raise ValueError("generator image has wrong shape")
        self._validate_rho_star()

    # -- validation ---------------------------------------------------

    def _validate_rho_star(self, tol: float = BRACKET_TOL):
        basis = lie_basis(self.group)
        n_so = len(so_basis_pairs(self.group.sig))
        mats = [self.rho_so[i] for i in range(n_so)] + [
            self.rho_aux[i] for i in range(self.group.aux.h_dim)
        ]
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                br = lie_bracket(basis[i], basis[j])
                expect = self.rho_star(br)
                got = mats[i] @ mats[j] - mats[j] @ mats[i]
                if np.max(np.abs(got - expect)) > tol:
                    raise ValueError(
                        f"rho_star violates bracket compatibility at basis pair ({i},{j})"
                    )

    # -- actions ------------------------------------------------------

    def rho_star(self, v: LieElement) -> np.ndarray:
        """Matrix of the derivative action of (X, x) in so(s,t) (+) h."""
        if v.group != self.group:
            raise ValueError("element of a different group")
        out = np.zeros((self.dim_W, self.dim_W))
        for c, M in zip(so_coords(self.group.sig, v.so), self.rho_so):
            fc = float(c)
            if fc:
                out += fc * M
        for c, M in zip(v.aux, self.rho_aux):
            fc = float(c)
            if fc:
                out += fc * M
        return out

    def all_images(self) -> List[np.ndarray]:
        return (
            list(self.spin_images)
            + list(self.aux_images)
            + [self.minus_spin_image, self.minus_aux_image]
        )


def act_fiber(rep: Representation, v: LieElement, w: np.ndarray) -> np.ndarray:
    """Derivative action of a Lie algebra element on a fiber vector."""
    return rep.rho_star(v) @ np.asarray(w, dtype=float)


def check_compatibility(rep: Representation, tol: float = 1e-12) -> Tuple[bool, str]:
    """A representation descends to Spin^G iff the two images of -1 agree."""
    gap = float(np.max(np.abs(rep.minus_spin_image - rep.minus_aux_image)))
    if gap <= tol:
        return True, "compatible: spin and auxiliary images of -1 agree"
    W = rep.dim_W
    spin_par = _involution_parity(rep.minus_spin_image, W)
    aux_par = _involution_parity(rep.minus_aux_image, W)
    return False, (
        "parity obstruction: the spin image of -1 is "
        f"{spin_par} but the auxiliary image of -1 is {aux_par} "
        f"(gap {gap:.3g}); the representation does not descend to Spin^G"
    )


def _involution_parity(J: np.ndarray, W: int) -> str:
    if np.allclose(J, np.eye(W), atol=1e-12):
        return "+Id (even)"
    if np.allclose(J, -np.eye(W), atol=1e-12):
        return "-Id (odd)"
    return "mixed"


def _central_image(rep: Representation) -> np.ndarray:
    """Image of the central class, resolved for pure building blocks too."""
    W = rep.dim_W
    if np.allclose(rep.minus_spin_image, rep.minus_aux_image, atol=1e-12):
        return rep.minus_spin_image
    if np.allclose(rep.minus_spin_image, np.eye(W), atol=1e-12):
        return rep.minus_aux_image
    if np.allclose(rep.minus_aux_image, np.eye(W), atol=1e-12):
        return rep.minus_spin_image
    ok, msg = check_compatibility(rep)
    raise ValueError(msg)


def classify_parity(rep: Representation) -> Parity:
    J = _central_image(rep)
    W = rep.dim_W
    if np.allclose(J, np.eye(W), atol=1e-12):
        return Parity.EVEN
    if np.allclose(J, -np.eye(W), atol=1e-12):
        return Parity.ODD
    return Parity.MIXED


def parity_decompose(
    rep: Representation, tol: float = 1e-12
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Orthonormal bases of the even/odd subspaces plus the worst invariance
    residual of the generator images on them."""
    J = _central_image(rep)
    W = rep.dim_W
    if np.max(np.abs(J @ J - np.eye(W))) > 1e-9:
        raise ValueError("central image is not an involution")
    bases = []
    for sign in (+1, -1):
        P = (np.eye(W) + sign * J) / 2
        u, s, _vt = np.linalg.svd(P)
        r = int(np.sum(s > 0.5))
        bases.append(u[:, :r])
    even, odd = bases
    if even.shape[1] + odd.shape[1] != W:
        raise ValueError("parity eigenspaces do not span the fiber")
    resid = 0.0
    for U in bases:
        if U.shape[1] == 0:
            continue
        proj = U @ U.T
        comp = np.eye(W) - proj
        for M in rep.all_images():
            resid = max(resid, float(np.max(np.abs(comp @ M @ proj))))
    if resid > tol:
        raise ValueError(f"parity subspaces are not invariant (residual {resid:g})")
    return even, odd, resid


# ---------------------------------------------------------------------------
# built-in constructors
# ---------------------------------------------------------------------------

def trivial(group: SpinGGroup) -> Representation:
    n_spin = len(so_basis_pairs(group.sig))
    n_aux = len(group.aux.generating_sample())
    one = np.eye(1)
    return Representation(
        group, 1,
        [one.copy() for _ in range(n_spin)],
        [one.copy() for _ in range(n_aux)],
        one.copy(), one.copy(),
        np.zeros((n_spin, 1, 1)),
        np.zeros((group.aux.h_dim, 1, 1)),
        name="trivial",
    )


def vector(group: SpinGGroup) -> Representation:
    sig = group.sig
    n = sig.n
    pairs = so_basis_pairs(sig)
    spin_images = [
        _to_float_matrix(vector_rep(g)) for g in canonical_spin_generators(sig)
    ]
    aux_images = [np.eye(n) for _ in group.aux.generating_sample()]
    rho_so = np.array([_to_float_matrix(so_generator(sig, a, b)) for a, b in pairs])
    rho_aux = np.zeros((group.aux.h_dim, n, n))
    return Representation(
        group, n, spin_images, aux_images, np.eye(n), np.eye(n), rho_so, rho_aux,
        name="vector",
    )


def adjoint_rep(group: SpinGGroup) -> Representation:
    basis = lie_basis(group)
    W = len(basis)
    sig = group.sig

    def coords_of(v: LieElement) -> np.ndarray:
        cs = [float(c) for c in so_coords(sig, v.so)] + [float(c) for c in v.aux]
        return np.array(cs)

    def ad_matrix(u: LieElement) -> np.ndarray:
        return np.column_stack([coords_of(lie_bracket(u, b)) for b in basis])

    def conj_matrix(g) -> np.ndarray:
        return np.column_stack([coords_of(adjoint(g, b)) for b in basis])

    from .groups import SpinGElement

    spin_els = [
        SpinGElement(group, a, group.aux.identity())
        for a in canonical_spin_generators(sig)
    ]
    aux_els = [
        SpinGElement(group, SpinElement(MultiVector.scalar(sig, 1)), g)
        for g in group.aux.generating_sample()
    ]
    rho = np.array([ad_matrix(b) for b in basis])
    n_so = len(so_basis_pairs(sig))
    return Representation(
        group, W,
        [conj_matrix(g) for g in spin_els],
        [conj_matrix(g) for g in aux_els],
        np.eye(W), np.eye(W),
        rho[:n_so], rho[n_so:],
        name="adjoint",
    )


def _even_left_regular(k: int):
    """Left multiplication on the even subalgebra of Cl(k,0)."""
    sig = Signature(k, 0)
    masks = sorted(
        (m for m in range(1 << k) if bin(m).count("1") % 2 == 0),
    )

    def matrix_of(mv: MultiVector) -> np.ndarray:
        cols = []
        for m in masks:
            img = mv * MultiVector(sig, {m: Scalar.of(1)})
            cols.append([float(img.coeff_mask(mm)) for mm in masks])
        return np.array(cols).T

    return sig, matrix_of


def spinor(group: SpinGGroup) -> Representation:
    """Real spinor module: 2-dim for Spin(2), 4-dim for Spin(3).

    The auxiliary factor acts trivially, so on its own this is a building
    block; tensor with an odd auxiliary representation to descend to Spin^G.
    """
    sig = group.sig
    if (sig.s, sig.t) not in ((2, 0), (3, 0)):
        raise ValueError("real spinor constructor is compiled for Spin(2) and Spin(3)")
    _sig, matrix_of = _even_left_regular(sig.s)
    W = 2 ** (sig.s - 1)
    pairs = so_basis_pairs(sig)
    spin_images = [matrix_of(g.mv) for g in canonical_spin_generators(sig)]
    rho_so = np.array(
        [matrix_of(MultiVector.blade(sig, (a, b), Fraction(1, 2))) for a, b in pairs]
    )
    aux_images = [np.eye(W) for _ in group.aux.generating_sample()]
    return Representation(
        group, W, spin_images, aux_images,
        -np.eye(W), np.eye(W),
        rho_so, np.zeros((group.aux.h_dim, W, W)),
        name=f"spinor{W}",
    )


def charge(group: SpinGGroup, n: int) -> Representation:
    """U(1) charge-n on the real plane; even iff n is even."""
    if group.aux.name != "U1":
        raise ValueError("charge representations need the U1 family")
    J = np.array([[0.0, -1.0], [1.0, 0.0]])

    def power(el) -> np.ndarray:
        M = np.array([[float(el.c), -float(el.s)], [float(el.s), float(el.c)]])
        out = np.linalg.matrix_power(M, abs(n))
        return out if n >= 0 else out.T  # inverse of a rotation is its transpose

    n_spin = len(so_basis_pairs(group.sig))
    spin_images = [np.eye(2) for _ in range(n_spin)]
    aux_images = [power(g) for g in group.aux.generating_sample()]
    return Representation(
        group, 2, spin_images, aux_images,
        np.eye(2), (-1.0) ** n * np.eye(2),
        np.zeros((n_spin, 2, 2)), np.array([n * J]),
        name=f"charge{n}",
    )


def su2_defining(group: SpinGGroup) -> Representation:
    """SU(2) acting on the quaternions as a 4-dim real module (left mult)."""
    if group.aux.name != "SU2":
        raise ValueError("defining representation needs the SU2 family")

    def left_mult(components) -> np.ndarray:
        w, x, y, z = (float(c) for c in components)
        return np.array(
            [
                [w, -x, -y, -z],
                [x, w, -z, y],
                [y, z, w, -x],
                [z, -y, x, w],
            ]
        )

    n_spin = len(so_basis_pairs(group.sig))
    spin_images = [np.eye(4) for _ in range(n_spin)]
    aux_images = [left_mult(g.components()) for g in group.aux.generating_sample()]
    rho_aux = np.array(
        [
            left_mult((0, 1, 0, 0)),
            left_mult((0, 0, 1, 0)),
            left_mult((0, 0, 0, 1)),
        ]
    )
    return Representation(
        group, 4, spin_images, aux_images,
        np.eye(4), -np.eye(4),
        np.zeros((n_spin, 4, 4)), rho_aux,
        name="su2-defining",
    )


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------

def tensor_product(r1: Representation, r2: Representation) -> Representation:
    if r1.group != r2.group:
        raise ValueError("representations of different groups")
    W = r1.dim_W * r2.dim_W
    kron = np.kron

    def tensor_rho(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.array(
            [
                kron(a[i], np.eye(r2.dim_W)) + kron(np.eye(r1.dim_W), b[i])
                for i in range(a.shape[0])
            ]
        ) if a.shape[0] else np.zeros((0, W, W))

    return Representation(
        r1.group, W,
        [kron(a, b) for a, b in zip(r1.spin_images, r2.spin_images)],
        [kron(a, b) for a, b in zip(r1.aux_images, r2.aux_images)],
        kron(r1.minus_spin_image, r2.minus_spin_image),
        kron(r1.minus_aux_image, r2.minus_aux_image),
        tensor_rho(r1.rho_so, r2.rho_so),
        tensor_rho(r1.rho_aux, r2.rho_aux),
        name=f"{r1.name}(x){r2.name}",
    )


def direct_sum(r1: Representation, r2: Representation) -> Representation:
    if r1.group != r2.group:
        raise ValueError("representations of different groups")

    def blk(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]))
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0]:, a.shape[1]:] = b
        return out

    def blk_rho(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.array([blk(a[i], b[i]) for i in range(a.shape[0])]) if a.shape[
            0
        ] else np.zeros((0, r1.dim_W + r2.dim_W, r1.dim_W + r2.dim_W))

    return Representation(
        r1.group, r1.dim_W + r2.dim_W,
        [blk(a, b) for a, b in zip(r1.spin_images, r2.spin_images)],
        [blk(a, b) for a, b in zip(r1.aux_images, r2.aux_images)],
        blk(r1.minus_spin_image, r2.minus_spin_image),
        blk(r1.minus_aux_image, r2.minus_aux_image),
        blk_rho(r1.rho_so, r2.rho_so),
        blk_rho(r1.rho_aux, r2.rho_aux),
        name=f"{r1.name}(+){r2.name}",
    )


def conjugate(rep: Representation, S: np.ndarray) -> Representation:
    Sinv = np.linalg.inv(S)

    def c(M: np.ndarray) -> np.ndarray:
        return S @ M @ Sinv

    return Representation(
        rep.group, rep.dim_W,
        [c(M) for M in rep.spin_images],
        [c(M) for M in rep.aux_images],
        c(rep.minus_spin_image), c(rep.minus_aux_image),
        np.array([c(M) for M in rep.rho_so]) if rep.rho_so.shape[0] else rep.rho_so,
        np.array([c(M) for M in rep.rho_aux]) if rep.rho_aux.shape[0] else rep.rho_aux,
        name=rep.name + "-conj",
    )
