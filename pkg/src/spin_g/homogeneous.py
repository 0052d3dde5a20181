"""Homogeneous structures: Klein pairs, isotropy lifts, invariant connections.

Everything at this level is exact.  A Klein pair is a finite-dimensional real
Lie algebra g with rational structure constants, a subalgebra k spanned by the
trailing basis vectors, an invariant scalar product on the complement m, and an
optional list of discrete isotropy components given as matrices on m.  A lift
assigns to each k-basis vector an element of so (+) h and to each discrete
component a group element upstairs; the verification, the invariant-connection
solve, and the curvature evaluation all run over the rationals.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import exactlinalg as xl
from .scalars import ExactnessError, Scalar
from .groups import (
    LieElement,
    SpinGElement,
    SpinGGroup,
    adjoint,
    covering_to_so,
    lie_basis,
    lie_bracket,
    so_basis_pairs,
    so_coords,
    so_from_coords,
)
from .clifford import Signature

FracMatrix = List[List[Fraction]]


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point value where a rational is required")
    return Fraction(x)


# ---------------------------------------------------------------------------
# Klein pairs
# ---------------------------------------------------------------------------

class KleinPair:
    """Lie algebra data (g, k) with an adapted basis: m-vectors first, then k.

    structure[i][j][l] is the coefficient of basis vector l in [X_i, X_j].
    eta is the invariant scalar product on m and must be diagonal +/-1 with
    the positive entries first (an eta-orthonormal adapted basis); use
    gram_schmidt_eta to build one when the raw product is not of that shape.
    """

    def __init__(
        self,
        dim_g: int,
        structure: Sequence[Sequence[Sequence]],
        k_indices: Sequence[int],
        eta: Sequence[Sequence],
        discrete_generators: Sequence[Sequence[Sequence]] = (),
        name: str = "",
    ):
        self.dim_g = dim_g
        self.k_indices = tuple(k_indices)
        self.dim_k = len(self.k_indices)
        self.dim_m = dim_g - self.dim_k
        if self.k_indices != tuple(range(self.dim_m, dim_g)):
            raise ValueError("k must be spanned by the trailing basis vectors")
        self.structure = [
            [[_frac(structure[i][j][l]) for l in range(dim_g)] for j in range(dim_g)]
            for i in range(dim_g)
        ]
        self.eta = [[_frac(e) for e in row] for row in eta]
        self.discrete_generators = [
            [[_frac(g[i][j]) for j in range(self.dim_m)] for i in range(self.dim_m)]
            for g in discrete_generators
        ]
        self.name = name
        issues = validate_pair(self)
        hard = [msg for level, msg in issues if level == "error"]
        if hard:
            raise ValueError("invalid Klein pair: " + "; ".join(hard))
        self.reductive = not any("reductive" in msg for _lv, msg in issues)

    @classmethod
    def from_sparse(
        cls,
        dim_g: int,
        brackets: Dict[Tuple[int, int], Dict[int, object]],
        k_indices: Sequence[int],
        eta: Sequence[Sequence],
        discrete_generators: Sequence = (),
        name: str = "",
    ) -> "KleinPair":
        """Brackets given as {(i, j): {l: coeff}}, one entry per unordered pair."""
        c = [[[Fraction(0)] * dim_g for _ in range(dim_g)] for _ in range(dim_g)]
        seen = set()
        for (i, j), row in brackets.items():
            if i == j:
                raise ValueError("[X, X] is zero; drop diagonal entries")
            if frozenset((i, j)) in seen:
                raise ValueError(f"bracket ({i},{j}) given twice")
            seen.add(frozenset((i, j)))
            for l, v in row.items():
                c[i][j][l] = _frac(v)
                c[j][i][l] = -_frac(v)
        return cls(dim_g, c, k_indices, eta, discrete_generators, name)

    # -- basic operations ---------------------------------------------------

    def bracket_coords(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> List[Fraction]:
        out = [Fraction(0)] * self.dim_g
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                row = self.structure[i][j]
                for l in range(self.dim_g):
                    if row[l]:
                        out[l] += ui * vj * row[l]
        return out

    def signature(self) -> Signature:
        s = sum(1 for i in range(self.dim_m) if self.eta[i][i] > 0)
        return Signature(s, self.dim_m - s)

    def __repr__(self):
        label = self.name or "pair"
        return f"KleinPair({label}, dim_g={self.dim_g}, dim_m={self.dim_m})"


def validate_pair(pair: KleinPair) -> List[Tuple[str, str]]:
    """Structural checks; returns (level, message) pairs, level 'error'/'warn'."""
    out: List[Tuple[str, str]] = []
    n, c = pair.dim_g, pair.structure
    for i in range(n):
        for j in range(n):
            for l in range(n):
                if c[i][j][l] != -c[j][i][l]:
                    out.append(("error", f"bracket not antisymmetric at ({i},{j},{l})"))
                    return out
    # Jacobi over basis triples
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc = [Fraction(0)] * n
                for (a, b, d) in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = c[a][b]
                    for l in range(n):
                        if inner[l]:
                            row = c[l][d]
                            for t in range(n):
                                acc[t] += inner[l] * row[t]
                if any(acc):
                    out.append(("error", f"Jacobi fails on basis triple ({i},{j},{k})"))
                    return out
    m = pair.dim_m
    for i in pair.k_indices:
        for j in pair.k_indices:
            if any(c[i][j][l] for l in range(m)):
                out.append(("error", "k is not a subalgebra"))
                return out
    if len(pair.eta) != m or any(len(r) != m for r in pair.eta):
        out.append(("error", "eta has wrong shape"))
        return out
    for i in range(m):
        for j in range(m):
            if i == j:
                if pair.eta[i][j] not in (1, -1):
                    out.append(("error", "eta must have diagonal entries +/-1"))
                    return out
            elif pair.eta[i][j]:
                out.append(("error", "eta must be diagonal in the adapted basis"))
                return out
    signs = [pair.eta[i][i] for i in range(m)]
    if signs != sorted(signs, reverse=True):
        out.append(("error", "eta must list its +1 entries first"))
        return out
    # isotropy must act on m by eta-antisymmetric maps
    rep = isotropy_rep(pair)
    for z, M in enumerate(rep):
        for i in range(m):
            for j in range(m):
                if M[i][j] * pair.eta[i][i] != -(M[j][i] * pair.eta[j][j]):
                    out.append(
                        ("error", f"isotropy of k-vector {z} does not preserve eta")
                    )
                    return out
    for idx, g in enumerate(pair.discrete_generators):
        gtg = xl.mat_mul(xl.transpose(g), xl.mat_mul(pair.eta, g))
        if not xl.mat_eq(gtg, pair.eta):
            out.append(("error", f"discrete generator {idx} is not an eta-isometry"))
            return out
    for i in pair.k_indices:
        for j in range(m):
            if any(c[i][j][l] for l in pair.k_indices):
                out.append(("warn", "complement is not reductive: [k, m] leaves m"))
                return out
    return out


def isotropy_rep(pair: KleinPair) -> List[FracMatrix]:
    """Matrices of pr_m ad(Z)|_m on the adapted m-basis, one per k-vector."""
    m = pair.dim_m
    out = []
    for z in pair.k_indices:
        M = xl.zeros(m, m)
        for j in range(m):
            col = pair.structure[z][j]
            for i in range(m):
                M[i][j] = col[i]
        out.append(M)
    return out


def gram_schmidt_eta(gram: Sequence[Sequence]) -> Tuple[List[List[Scalar]], List[int]]:
    """Exact orthonormalization of a symmetric bilinear form given by its Gram
    matrix.  Returns (T, signs) with T^t G T = diag(signs); raises
    ExactnessError when a normalization would leave the scalar tower."""
    n = len(gram)
    G = [[Scalar.of(_frac(x)) for x in row] for row in gram]
    basis = [[Scalar.of(1) if j == i else Scalar() for j in range(n)] for i in range(n)]

    def form(u, v):
        tot = Scalar()
        for i in range(n):
            for j in range(n):
                tot = tot + u[i] * G[i][j] * v[j]
        return tot

    done: List[List[Scalar]] = []
    norms: List[Scalar] = []
    for v in basis:
        u = list(v)
        for w, nw in zip(done, norms):
            coef = form(u, w) / nw
            u = [a - coef * b for a, b in zip(u, w)]
        nu = form(u, u)
        if nu.sign() == 0:
            raise ExactnessError("degenerate form (isotropic basis vector met)")
        done.append(u)
        norms.append(nu)
    signs = [nrm.sign() for nrm in norms]
    cols = []
    for u, nrm, sgn in zip(done, norms, signs):
        scale = (nrm if sgn > 0 else -nrm).sqrt().inverse()
        cols.append([x * scale for x in u])
    T = [[cols[j][i] for j in range(n)] for i in range(n)]
    return T, signs


# ---------------------------------------------------------------------------
# lifts of the isotropy representation
# ---------------------------------------------------------------------------

@dataclass
class IsotropyLift:
    pair: KleinPair
    group: SpinGGroup
    dlift: List[LieElement]
    discrete_lifts: List[SpinGElement] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        sig = self.group.sig
        if self.pair.signature() != sig:
            raise ValueError(
                f"eta signature {self.pair.signature()} does not match group {sig}"
            )
        if len(self.dlift) != self.pair.dim_k:
            raise ValueError("one lift value per k-basis vector required")
        for val in self.dlift:
            if val.group != self.group:
                raise ValueError("lift values must live in the group's algebra")
        if len(self.discrete_lifts) != len(self.pair.discrete_generators):
            raise ValueError("one group lift per discrete generator required")
        for g in self.discrete_lifts:
            if g.group != self.group:
                raise ValueError("discrete lifts must live in the group")

    def dlift_of(self, k_coords: Sequence[Fraction]) -> LieElement:
        out = LieElement.zero(self.group)
        for c, val in zip(k_coords, self.dlift):
            if c:
                out = out + val.scale(c)
        return out


@dataclass
class LiftReport:
    conditions: List[Tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(okc for _n, okc, _d in self.conditions)

    def lines(self) -> List[str]:
        return [
            f"[{'PASS' if okc else 'FAIL'}] {name}" + (f": {det}" if det else "")
            for name, okc, det in self.conditions
        ]


def verify_lift(lift: IsotropyLift) -> LiftReport:
    """Exact checks that the lift data actually lifts the isotropy action."""
    pair, group = lift.pair, lift.group
    conds: List[Tuple[str, bool, str]] = []

    rep = isotropy_rep(pair)
    bad = []
    for z in range(pair.dim_k):
        got = lift.dlift[z].so
        want = [[Scalar.of(x) for x in row] for row in rep[z]]
        if not xl.mat_eq(got, want):
            bad.append(str(z))
    conds.append(
        (
            "projection: so-part of each lifted k-vector equals its isotropy matrix",
            not bad,
            f"mismatch at k-index {', '.join(bad)}" if bad else "",
        )
    )

    bad = []
    for z1 in range(pair.dim_k):
        for z2 in range(z1 + 1, pair.dim_k):
            i, j = pair.k_indices[z1], pair.k_indices[z2]
            coords = pair.structure[i][j]
            if any(coords[l] for l in range(pair.dim_m)):
                bad.append(f"({z1},{z2}) leaves k")
                continue
            lhs = lift.dlift_of([coords[l] for l in pair.k_indices])
            rhs = lie_bracket(lift.dlift[z1], lift.dlift[z2])
            if lhs != rhs:
                bad.append(f"({z1},{z2})")
    conds.append(
        (
            "homomorphism: lifted brackets match on all k-basis pairs",
            not bad,
            f"mismatch at {', '.join(bad)}" if bad else "",
        )
    )

    bad = []
    for idx, (gen, g) in enumerate(zip(pair.discrete_generators, lift.discrete_lifts)):
        want = [[Scalar.of(x) for x in row] for row in gen]
        if not xl.mat_eq(covering_to_so(g), want):
            bad.append(str(idx))
    conds.append(
        (
            "discrete components: each lift covers its isotropy isometry",
            not bad,
            f"mismatch at component {', '.join(bad)}" if bad else "",
        )
    )
    return LiftReport(conds)


# ---------------------------------------------------------------------------
# conjugacy of lifts
# ---------------------------------------------------------------------------

@dataclass
class ConjugacyResult:
    verdict: str  # "Conjugate" | "NotConjugate" | "Inconclusive"
    detail: str
    witness: Optional[tuple] = None
    residual: Optional[float] = None


def _aux_gram(fam, parts: List[Sequence[Scalar]]) -> List[List[Scalar]]:
    """Pairwise trace form tr(L_x L_y) of aux parts; Ad-invariant, exact."""
    mats = [fam.algebra_matrix(x) for x in parts]
    out = []
    for A in mats:
        row = []
        for B in mats:
            tr = Scalar()
            k = len(A)
            for i in range(k):
                for j in range(k):
                    tr = tr + A[i][j] * B[j][i]
            row.append(tr)
        out.append(row)
    return out


def conjugacy_check(
    l1: IsotropyLift, l2: IsotropyLift, tol: float = 1e-9, starts: int = 32
) -> ConjugacyResult:
    """Decide whether some [1, h] carries one lift to the other.

    Conjugation by the gauge subgroup fixes the so-parts, acts on aux parts by
    Ad_h and on discrete aux components by group conjugation.  Abelian families
    are settled exactly; otherwise exact invariants give NotConjugate
    certificates and a multistart damped least-squares search supplies
    Conjugate witnesses.  Never returns NotConjugate from a failed search.
    """
    if l1.group != l2.group:
        return ConjugacyResult("NotConjugate", "different groups")
    pair, fam = l1.pair, l1.group.aux
    if l2.pair.dim_k != pair.dim_k or len(l2.discrete_lifts) != len(l1.discrete_lifts):
        return ConjugacyResult("NotConjugate", "different shapes")

    for z in range(pair.dim_k):
        if not xl.mat_eq(l1.dlift[z].so, l2.dlift[z].so):
            return ConjugacyResult(
                "NotConjugate",
                f"so-parts differ at k-index {z}; gauge conjugation fixes them",
            )
    for idx, (g1, g2) in enumerate(zip(l1.discrete_lifts, l2.discrete_lifts)):
        if g1.spin != g2.spin:
            return ConjugacyResult(
                "NotConjugate",
                f"spin parts of discrete lift {idx} differ; conjugation fixes them",
            )

    aux1 = [l1.dlift[z].aux for z in range(pair.dim_k)]
    aux2 = [l2.dlift[z].aux for z in range(pair.dim_k)]
    G1, G2 = _aux_gram(fam, aux1), _aux_gram(fam, aux2)
    for i in range(pair.dim_k):
        for j in range(pair.dim_k):
            if G1[i][j] != G2[i][j]:
                return ConjugacyResult(
                    "NotConjugate",
                    f"invariant trace form differs at ({i},{j}): "
                    f"{float(G1[i][j]):.6g} vs {float(G2[i][j]):.6g}",
                )

    if fam.abelian:
        for z in range(pair.dim_k):
            if any(a != b for a, b in zip(l1.dlift[z].aux, l2.dlift[z].aux)):
                return ConjugacyResult(
                    "NotConjugate",
                    f"aux parts differ at k-index {z}; the family is abelian so "
                    "conjugation cannot move them",
                )
        for idx, (g1, g2) in enumerate(zip(l1.discrete_lifts, l2.discrete_lifts)):
            if fam.canonical_key(g1.aux) != fam.canonical_key(g2.aux):
                return ConjugacyResult(
                    "NotConjugate", f"abelian aux components differ at lift {idx}"
                )
        return ConjugacyResult(
            "Conjugate", "abelian family, data equal", fam.conj_witness([]), 0.0
        )
    # conjugation-invariant spectral data of the discrete aux components
    for idx, (g1, g2) in enumerate(zip(l1.discrete_lifts, l2.discrete_lifts)):
        t1 = sum((row[i] for i, row in enumerate(fam.gbar_matrix(g1.aux))), Scalar())
        t2 = sum((row[i] for i, row in enumerate(fam.gbar_matrix(g2.aux))), Scalar())
        if t1 != t2:
            return ConjugacyResult(
                "NotConjugate", f"conjugation-invariant trace differs at lift {idx}"
            )

    # numerical search for a witness
    try:
        from scipy.optimize import least_squares
    except ImportError:  # pragma: no cover
        return ConjugacyResult("Inconclusive", "scipy unavailable for the search")

    x1f = [[float(c) for c in x] for x in aux1]
    x2f = [[float(c) for c in x] for x in aux2]
    g1f = [fam.float_coords(g.aux) for g in l1.discrete_lifts]
    g2f = [fam.float_coords(g.aux) for g in l2.discrete_lifts]
    npar = fam.conj_param_dim()

    def resid(p):
        out: List[float] = []
        for a, b in zip(x1f, x2f):
            out.extend(u - v for u, v in zip(fam.conj_ad_float(p, a), b))
        for a, b in zip(g1f, g2f):
            out.extend(u - v for u, v in zip(fam.conj_group_float(p, a), b))
        out.extend(fam.conj_constraints(p))
        # pin the scale so the damped solver sees a square-or-tall problem
        out.append(0.1 * (sum(v * v for v in p) - 1.0))
        return out

    rng = random.Random(20240901)
    best, best_err = None, math.inf
    for s in range(starts):
        if s == 0:
            p0 = [1.0] + [0.0] * (npar - 1)
        else:
            p0 = [rng.gauss(0.0, 1.0) for _ in range(npar)]
        try:
            sol = least_squares(resid, p0, method="lm", xtol=1e-15, ftol=1e-15)
        except Exception:
            continue
        err = max(abs(v) for v in resid(sol.x)[:-1]) if len(resid(sol.x)) > 1 else 0.0
        if err < best_err:
            best, best_err = list(sol.x), err
        if best_err <= tol:
            break
    if best is not None and best_err <= tol:
        return ConjugacyResult(
            "Conjugate",
            f"witness found, residual {best_err:.3e}",
            fam.conj_witness(best),
            best_err,
        )
    return ConjugacyResult(
        "Inconclusive",
        f"invariants agree but no witness below {tol:g} "
        f"(best residual {best_err:.3e} over {starts} starts)",
        None,
        best_err if best is not None else None,
    )


# ---------------------------------------------------------------------------
# invariant connections
# ---------------------------------------------------------------------------

@dataclass
class NomizuMap:
    """Linear map g -> so (+) h: lift values on k, solved values on m."""

    lift: IsotropyLift
    values_m: List[LieElement]

    def value(self, coords: Sequence) -> LieElement:
        coords = [_frac(c) for c in coords]
        pair = self.lift.pair
        out = LieElement.zero(self.lift.group)
        for j in range(pair.dim_m):
            if coords[j]:
                out = out + self.values_m[j].scale(coords[j])
        for z, idx in enumerate(pair.k_indices):
            if coords[idx]:
                out = out + self.lift.dlift[z].scale(coords[idx])
        return out


@dataclass
class NomizuSolutionSet:
    lift: IsotropyLift
    torsion_free: bool
    exists: bool
    particular: Optional[NomizuMap]
    basis: List[NomizuMap]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Sequence[Fraction]) -> NomizuMap:
        if not self.exists:
            raise ValueError("empty solution set")
        if len(coeffs) != self.dimension:
            raise ValueError("one coefficient per basis element required")
        vals = [v for v in self.particular.values_m]
        for c, b in zip(coeffs, self.basis):
            c = _frac(c)
            if c:
                vals = [v + w.scale(c) for v, w in zip(vals, b.values_m)]
        return NomizuMap(self.lift, vals)


def _lie_to_frac(v: LieElement) -> List[Fraction]:
    sig = v.group.sig
    out = [Fraction(c) if isinstance(c, (int, Fraction)) else c.as_fraction()
           for c in so_coords(sig, v.so)]
    out.extend(Scalar.of(a).as_fraction() for a in v.aux)
    return out


def _frac_to_lie(group: SpinGGroup, coords: Sequence[Fraction]) -> LieElement:
    n_so = len(so_basis_pairs(group.sig))
    so = so_from_coords(group.sig, coords[:n_so])
    return LieElement(group, so, tuple(Scalar.of(c) for c in coords[n_so:]))


def solve_nomizu(lift: IsotropyLift, torsion_free: bool = False) -> NomizuSolutionSet:
    """All invariant-connection maps for the lift, as an exact affine set.

    Unknowns are the so (+) h coordinates of the map on each m-basis vector.
    Equivariance under every lifted k-vector is imposed exactly; with
    torsion_free the so-parts must also reproduce the m-component of the
    bracket on m.  Discrete invariance under the lifted components is imposed
    as well.  Solved by rational elimination; no floating point enters.
    """
    pair, group = lift.pair, lift.group
    basis = lie_basis(group)
    D = len(basis)
    mdim = pair.dim_m
    N = mdim * D

    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []

    # ad-matrices of the lifted k-vectors on so (+) h
    ad_mats = []
    for z in range(pair.dim_k):
        cols = [_lie_to_frac(lie_bracket(lift.dlift[z], b)) for b in basis]
        ad_mats.append([[cols[j][i] for j in range(D)] for i in range(D)])

    for z in range(pair.dim_k):
        kz = pair.k_indices[z]
        for j in range(mdim):
            br = pair.structure[kz][j]
            const = LieElement.zero(group)
            for l in pair.k_indices:
                if br[l]:
                    const = const + lift.dlift[l - mdim].scale(br[l])
            cvec = _lie_to_frac(const)
            for r in range(D):
                row = [Fraction(0)] * N
                for i in range(mdim):
                    if br[i]:
                        row[i * D + r] += br[i]
                for d in range(D):
                    row[j * D + d] -= ad_mats[z][r][d]
                rows.append(row)
                rhs.append(-cvec[r])

    if torsion_free:
        pairs_so = [(a, b) for a in range(mdim) for b in range(mdim) if a < b]
        sig = group.sig
        n_so = D - group.aux.h_dim
        # so-coordinate d contributes so_from_coords(e_d) to the so-part
        gen_cols = []
        for d in range(n_so):
            coords = [Fraction(1) if t == d else Fraction(0) for t in range(n_so)]
            gen_cols.append(so_from_coords(sig, coords))
        for (a, b) in pairs_so:
            br = pair.structure[a][b]
            for i in range(mdim):
                row = [Fraction(0)] * N
                for d in range(n_so):
                    row[a * D + d] += gen_cols[d][i][b]
                    row[b * D + d] -= gen_cols[d][i][a]
                rows.append(row)
                rhs.append(br[i])

    for gen, g in zip(pair.discrete_generators, lift.discrete_lifts):
        # invariance under the component: Ad_g(Phi(X)) = Phi(gen X)
        ad_cols = [_lie_to_frac(adjoint(g, bvec)) for bvec in basis]
        for j in range(mdim):
            for r in range(D):
                row = [Fraction(0)] * N
                for i in range(mdim):
                    if gen[i][j]:
                        row[i * D + r] += gen[i][j]
                for d in range(D):
                    row[j * D + d] -= ad_cols[d][r]
                rows.append(row)
                rhs.append(Fraction(0))

    if rows:
        sol = xl.solve_affine(rows, rhs)
        if sol is None:
            return NomizuSolutionSet(lift, torsion_free, False, None, [])
        part, null = sol
    else:
        part = [Fraction(0)] * N
        null = [
            [Fraction(1) if i == j else Fraction(0) for i in range(N)]
            for j in range(N)
        ]

    def unpack(vec: Sequence[Fraction]) -> NomizuMap:
        vals = [
            _frac_to_lie(group, vec[j * D : (j + 1) * D]) for j in range(mdim)
        ]
        return NomizuMap(lift, vals)

    return NomizuSolutionSet(lift, torsion_free, True, unpack(part), [unpack(v) for v in null])


def verify_connection(nm: NomizuMap, torsion_free: bool = False) -> LiftReport:
    """Re-check a connection map by direct substitution, independently of the
    elimination that produced it.  All comparisons are exact."""
    lift = nm.lift
    pair, group = lift.pair, lift.group
    conds: List[Tuple[str, bool, str]] = []

    bad = []
    for z in range(pair.dim_k):
        kz = pair.k_indices[z]
        for j in range(pair.dim_m):
            ez = [Fraction(1) if t == kz else Fraction(0) for t in range(pair.dim_g)]
            ej = [Fraction(1) if t == j else Fraction(0) for t in range(pair.dim_g)]
            lhs = nm.value(pair.bracket_coords(ez, ej))
            rhs = lie_bracket(lift.dlift[z], nm.values_m[j])
            if lhs != rhs:
                bad.append(f"(k={z}, m={j})")
    conds.append(
        (
            "equivariance: the map intertwines every lifted isotropy generator",
            not bad,
            f"fails at {', '.join(bad)}" if bad else "",
        )
    )

    if torsion_free:
        bad = []
        for a in range(pair.dim_m):
            for b in range(a + 1, pair.dim_m):
                for i in range(pair.dim_m):
                    lhs = (
                        Scalar.of(nm.values_m[a].so[i][b])
                        - Scalar.of(nm.values_m[b].so[i][a])
                    )
                    if lhs != Scalar.of(pair.structure[a][b][i]):
                        bad.append(f"({a},{b})->{i}")
        conds.append(
            (
                "torsion: so-parts reproduce the m-component of every bracket",
                not bad,
                f"fails at {', '.join(bad)}" if bad else "",
            )
        )

    bad = []
    for idx, (gen, g) in enumerate(zip(pair.discrete_generators, lift.discrete_lifts)):
        for j in range(pair.dim_m):
            lhs = LieElement.zero(group)
            for i in range(pair.dim_m):
                if gen[i][j]:
                    lhs = lhs + nm.values_m[i].scale(gen[i][j])
            if lhs != adjoint(g, nm.values_m[j]):
                bad.append(f"(component {idx}, m={j})")
    if pair.discrete_generators:
        conds.append(
            (
                "discrete invariance: the map commutes with every lifted component",
                not bad,
                f"fails at {', '.join(bad)}" if bad else "",
            )
        )
    return LiftReport(conds)


# ---------------------------------------------------------------------------
# curvature of an invariant connection
# ---------------------------------------------------------------------------

def curvature_at_base(
    nm: NomizuMap, x_coords: Sequence, y_coords: Sequence
) -> LieElement:
    """kappa(X, Y) = [Phi(X), Phi(Y)] - Phi([X, Y]) in so (+) h, exact."""
    pair = nm.lift.pair
    xc = [_frac(c) for c in x_coords]
    yc = [_frac(c) for c in y_coords]
    if len(xc) != pair.dim_g or len(yc) != pair.dim_g:
        raise ValueError("full-algebra coordinates expected")
    term = lie_bracket(nm.value(xc), nm.value(yc))
    return term - nm.value(pair.bracket_coords(xc, yc))


def split_curvature(v: LieElement):
    """(metric part, gauge part): the so matrix and the h coordinate vector."""
    return [list(r) for r in v.so], tuple(v.aux)


# ---------------------------------------------------------------------------
# structure-level predicates
# ---------------------------------------------------------------------------

@dataclass
class OrientabilityReport:
    time_orientable: bool
    detail: str


def check_time_orientable(pair: KleinPair) -> OrientabilityReport:
    """A structure is time-orientable when every discrete isotropy component
    preserves the time side: positive determinant on the negative-eta block."""
    neg = [i for i in range(pair.dim_m) if pair.eta[i][i] < 0]
    if not neg:
        return OrientabilityReport(True, "definite scalar product, nothing to orient")
    if not pair.discrete_generators:
        return OrientabilityReport(True, "connected isotropy, orientation persists")
    for idx, g in enumerate(pair.discrete_generators):
        block = [[g[i][j] for j in neg] for i in neg]
        if xl.det(block) <= 0:
            return OrientabilityReport(
                False, f"discrete component {idx} reverses the negative-eta block"
            )
    return OrientabilityReport(True, "all discrete components are orthochronous")


@dataclass
class ReducibilityReport:
    conjugation_invariant: bool
    center_is_z2: bool
    reducible_to_spin: bool
    detail: str


def check_reducibility(lift: IsotropyLift) -> ReducibilityReport:
    """Whether the structure comes from a plain metric spin structure plus a
    decoupled gauge sector: the lift's aux data must be fixed by the family's
    generating conjugations, and the family's center must be exactly {1, -1}
    for the identification to close up."""
    fam = lift.group.aux
    invariant = True
    for gen in fam.generating_sample():
        for z in range(lift.pair.dim_k):
            x = lift.dlift[z].aux
            if tuple(fam.ad(gen, x)) != tuple(x):
                invariant = False
        for g in lift.discrete_lifts:
            moved = fam.mul(fam.mul(gen, g.aux), fam.inv(gen))
            if fam.canonical_key(moved) != fam.canonical_key(g.aux):
                invariant = False
    if not invariant:
        detail = "aux data is moved by gauge conjugation; no decoupled reduction"
    elif not fam.center_is_z2:
        detail = (
            "aux data is central-invariant but the family's center exceeds {1,-1}; "
            "reduction criterion does not apply"
        )
    else:
        detail = "aux data is conjugation-invariant and the center is {1,-1}: reducible"
    return ReducibilityReport(
        invariant, fam.center_is_z2, invariant and fam.center_is_z2, detail
    )
