"""Chart-level calculus: connection coefficients, twisted covariant
derivatives, covariant Lie derivatives, gauge field strength, covariant
exterior calculus, and the residual suites that verify the operator
identities on explicit coordinate scenes.

All fields are symbolic expression trees over the chart coordinates
x1..xn; every operator is a tree transformation, so the identity checks
differentiate symbolically (up to third derivatives of the metric) and only
evaluate at the end.  Finite differences appear once, as a cross-check on
the symbolic derivative itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .clifford import Signature
from .expr import (
    Expr,
    Const,
    Var,
    add_,
    as_expr,
    derivative,
    mul_,
    neg_,
    parse_expr,
    recip_,
)
from .groups import so_basis_pairs
from .reps import Representation
from .scalars import Scalar

VecField = List[Expr]


def _c(v) -> Expr:
    """Exact constant from a float with dyadic value (rep matrix entries)."""
    if isinstance(v, Expr):
        return v
    return Const(Fraction(v))


def _dcoord(e: Expr, i: int) -> Expr:
    return derivative(e, f"x{i + 1}")


def _det_exprs(M: List[List[Expr]]) -> Expr:
    n = len(M)
    terms = []
    for perm in permutations(range(n)):
        sign = 1
        p = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        terms.append(mul_(Const(sign), *(M[i][p[i]] for i in range(n))))
    return add_(*terms)


def _inv_exprs(M: List[List[Expr]]) -> List[List[Expr]]:
    """Symbolic inverse by adjugate; sized for small chart dimensions."""
    n = len(M)
    det = _det_exprs(M)
    rdet = recip_(det)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [M[r][c] for c in range(n) if c != i] for r in range(n) if r != j
            ]
            cof = _det_exprs(minor) if minor else Const(1)
            out[i][j] = mul_(Const((-1) ** (i + j)), cof, rdet)
    return out


def _ev_mat(M, env) -> np.ndarray:
    return np.array([[e.ev(env) for e in row] for row in M], dtype=float)


def _ev_vec(v, env) -> np.ndarray:
    return np.array([e.ev(env) for e in v], dtype=float)


# ---------------------------------------------------------------------------
# scenes
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"[{tag}] {self.name}: residual {self.residual:.3e} tol {self.tol:g}{extra}"


@dataclass
class ResidualReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.results), default=0.0)

    def add(self, name, residual, tol, note=""):
        self.results.append(CheckResult(name, residual, tol, residual <= tol, note))

    def extend(self, other: "ResidualReport"):
        self.results.extend(other.results)

    def lines(self) -> List[str]:
        return [r.line() for r in self.results]


class ChartScene:
    """Immutable chart data: metric, coframe, gauge field, named Killing and
    auxiliary fields, named sections of the representation bundle, and the
    test points the verification suites run over."""

    def __init__(
        self,
        sig: Signature,
        rep: Representation,
        metric: Sequence[Sequence],
        coframe: Sequence[Sequence],
        gauge: Sequence[Sequence],
        killing_fields: Dict[str, Sequence],
        sections: Dict[str, Sequence],
        test_points: Sequence[Sequence[float]],
        aux_fields: Optional[Dict[str, Sequence]] = None,
        tol: float = 1e-8,
        name: str = "",
    ):
        self.sig = sig
        self.n = sig.n
        if rep.group.sig != sig:
            raise ValueError("representation signature does not match the chart")
        self.rep = rep
        self.family = rep.group.aux
        self.h_dim = self.family.h_dim
        n = self.n
        self.coords = [f"x{i + 1}" for i in range(n)]
        fe = self._field
        self.metric = [[fe(metric[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                if self.metric[i][j] != self.metric[j][i]:
                    raise ValueError("metric must be symmetric as given")
        self.coframe = [[fe(coframe[a][i]) for i in range(n)] for a in range(n)]
        if len(gauge) != n or any(len(g) != self.h_dim for g in gauge):
            raise ValueError("gauge field needs one h-coordinate list per coordinate")
        self.gauge = [[fe(c) for c in gi] for gi in gauge]
        self.killing_fields = {
            k: [fe(c) for c in v] for k, v in killing_fields.items()
        }
        for k, v in self.killing_fields.items():
            if len(v) != n:
                raise ValueError(f"vector field {k} has wrong length")
        self.sections = {k: [fe(c) for c in v] for k, v in sections.items()}
        for k, v in self.sections.items():
            if len(v) != rep.dim_W:
                raise ValueError(f"section {k} has wrong fiber dimension")
        self.aux_fields = {
            k: [fe(c) for c in v] for k, v in (aux_fields or {}).items()
        }
        for k, v in self.aux_fields.items():
            if len(v) != self.h_dim:
                raise ValueError(f"auxiliary field {k} has wrong h dimension")
        self.test_points = [tuple(float(c) for c in p) for p in test_points]
        if any(len(p) != n for p in self.test_points):
            raise ValueError("test point of wrong dimension")
        self.tol = float(tol)
        self.name = name
        self._cache: Dict[str, object] = {}
        # family structure constants as exact rationals, for gauge brackets
        unit = [
            tuple(Scalar.of(1 if j == i else 0) for j in range(self.h_dim))
            for i in range(self.h_dim)
        ]
        self._hstruct = [
            [
                [Scalar.of(c).as_fraction() for c in self.family.bracket(unit[p], unit[q])]
                for q in range(self.h_dim)
            ]
            for p in range(self.h_dim)
        ]

    # -- coordinate helpers -------------------------------------------------

    def _field(self, x) -> Expr:
        if isinstance(x, str):
            return parse_expr(x, self.coords)
        return as_expr(x)

    def env(self, point) -> Dict[str, float]:
        return dict(zip(self.coords, point))

    def vector_of(self, X: Union[str, Sequence]) -> VecField:
        if isinstance(X, str):
            try:
                return self.killing_fields[X]
            except KeyError:
                raise ValueError(f"unknown vector field {X!r}") from None
        return [self._field(c) for c in X]

    def section_of(self, phi: Union[str, Sequence]) -> List[Expr]:
        if isinstance(phi, str):
            try:
                return self.sections[phi]
            except KeyError:
                raise ValueError(f"unknown section {phi!r}") from None
        return [self._field(c) for c in phi]

    def aux_of(self, gamma: Union[str, Sequence]) -> List[Expr]:
        if isinstance(gamma, str):
            try:
                return self.aux_fields[gamma]
            except KeyError:
                raise ValueError(f"unknown auxiliary field {gamma!r}") from None
        return [self._field(c) for c in gamma]

    def hbracket(self, u: List[Expr], v: List[Expr]) -> List[Expr]:
        out = []
        for m in range(self.h_dim):
            terms = []
            for p in range(self.h_dim):
                for q in range(self.h_dim):
                    coef = self._hstruct[p][q][m]
                    if coef:
                        terms.append(mul_(Const(coef), u[p], v[q]))
            out.append(add_(*terms))
        return out

    # -- cached symbolic geometry -------------------------------------------

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def ginv(self):
        return self._get("ginv", lambda: _inv_exprs(self.metric))

    @property
    def gamma(self):
        def build():
            n, g, gi = self.n, self.metric, self.ginv
            out = [[[None] * n for _ in range(n)] for _ in range(n)]
            for k in range(n):
                for i in range(n):
                    for j in range(n):
                        terms = []
                        for l in range(n):
                            inner = add_(
                                _dcoord(g[j][l], i),
                                _dcoord(g[i][l], j),
                                neg_(_dcoord(g[i][j], l)),
                            )
                            terms.append(mul_(gi[k][l], inner))
                        out[k][i][j] = mul_(Const(Fraction(1, 2)), add_(*terms))
            return out

        return self._get("gamma", build)

    @property
    def einv(self):
        return self._get("einv", lambda: _inv_exprs(self.coframe))

    @property
    def omega(self):
        """Mixed connection coefficients omega_i^a_b from the first structure
        equation: d e^a + omega^a_b wedge e^b = 0 with the Levi-Civita Gamma."""

        def build():
            n, E, Ei, Ga = self.n, self.coframe, self.einv, self.gamma
            out = [[[None] * n for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for a in range(n):
                    for b in range(n):
                        terms = []
                        for j in range(n):
                            cov = add_(
                                _dcoord(E[a][j], i),
                                neg_(add_(*(mul_(Ga[k][i][j], E[a][k]) for k in range(n)))),
                            )
                            terms.append(mul_(cov, Ei[j][b]))
                        out[i][a][b] = neg_(add_(*terms))
            return out

        return self._get("omega", build)

    @property
    def endo(self):
        """W-endomorphism expressions of the full connection in direction i:
        half omega_i^{ab} acting through the so images plus the gauge field
        through the h images."""

        def build():
            W = self.rep.dim_W
            pairs = so_basis_pairs(self.sig)
            out = []
            for i in range(self.n):
                M = [[[] for _ in range(W)] for _ in range(W)]
                for idx, (a, b) in enumerate(pairs):
                    coef = mul_(self.omega[i][a - 1][b - 1], Const(self.sig.eta(b)))
                    im = self.rep.rho_so[idx]
                    for u in range(W):
                        for v in range(W):
                            if im[u][v]:
                                M[u][v].append(mul_(coef, _c(im[u][v])))
                for m in range(self.h_dim):
                    im = self.rep.rho_aux[m]
                    for u in range(W):
                        for v in range(W):
                            if im[u][v]:
                                M[u][v].append(mul_(self.gauge[i][m], _c(im[u][v])))
                out.append([[add_(*M[u][v]) for v in range(W)] for u in range(W)])
            return out

        return self._get("endo", build)

    @property
    def riemann(self):
        """R^l_{kij} from the Levi-Civita coefficients."""

        def build():
            n, Ga = self.n, self.gamma
            out = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
            for l in range(n):
                for k in range(n):
                    for i in range(n):
                        for j in range(n):
                            terms = [
                                _dcoord(Ga[l][j][k], i),
                                neg_(_dcoord(Ga[l][i][k], j)),
                            ]
                            for m in range(n):
                                terms.append(mul_(Ga[l][i][m], Ga[m][j][k]))
                                terms.append(neg_(mul_(Ga[l][j][m], Ga[m][i][k])))
                            out[l][k][i][j] = add_(*terms)
            return out

        return self._get("riemann", build)

    @property
    def rframe(self):
        """Curvature of the spin connection: mixed so-matrices R_{ij}^a_b."""

        def build():
            n, om = self.n, self.omega
            out = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    M = [[None] * n for _ in range(n)]
                    for a in range(n):
                        for b in range(n):
                            terms = [
                                _dcoord(om[j][a][b], i),
                                neg_(_dcoord(om[i][a][b], j)),
                            ]
                            for c in range(n):
                                terms.append(mul_(om[i][a][c], om[j][c][b]))
                                terms.append(neg_(mul_(om[j][a][c], om[i][c][b])))
                            M[a][b] = add_(*terms)
                    out[i][j] = M
            return out

        return self._get("rframe", build)

    @property
    def fstrength(self):
        """Gauge field strength F_ij = d alpha + [alpha, alpha] as h-coords."""

        def build():
            n = self.n
            out = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    comm = self.hbracket(self.gauge[i], self.gauge[j])
                    out[i][j] = [
                        add_(
                            _dcoord(self.gauge[j][m], i),
                            neg_(_dcoord(self.gauge[i][m], j)),
                            comm[m],
                        )
                        for m in range(self.h_dim)
                    ]
            return out

        return self._get("fstrength", build)

    # -- derived per-Killing-field data -------------------------------------

    def killing_tensor(self, X: Union[str, Sequence]) -> List[List[Expr]]:
        """nabla_i X_j with the index lowered: the Killing residual is the
        symmetric part, the A-endomorphism is built from the whole thing."""
        Xv = self.vector_of(X)
        n, g, Ga = self.n, self.metric, self.gamma
        Xlow = [add_(*(mul_(g[j][k], Xv[k]) for k in range(n))) for j in range(n)]
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out[i][j] = add_(
                    _dcoord(Xlow[j], i),
                    neg_(add_(*(mul_(Ga[k][i][j], Xlow[k]) for k in range(n)))),
                )
        return out

    def a_endo_exprs(self, X: Union[str, Sequence]) -> List[List[Expr]]:
        """Mixed frame endomorphism of -nabla X, the map Y -> -nabla_Y X:
        (A_X)^a_b = -eta^{aa} e_a^j e_b^i nabla_i X_j."""
        nab = self.killing_tensor(X)
        n, Ei = self.n, self.einv
        out = [[None] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                terms = []
                for i in range(n):
                    for j in range(n):
                        # frame index a pairs with the value index of nabla X
                        terms.append(mul_(Ei[j][a], Ei[i][b], nab[i][j]))
                out[a][b] = mul_(Const(-self.sig.eta(a + 1)), add_(*terms))
        return out

    def kostant_endo(self, X: Union[str, Sequence]) -> List[List[Expr]]:
        """rho_* of the frame endomorphism A_X, as W x W expressions."""
        A = self.a_endo_exprs(X)
        W = self.rep.dim_W
        pairs = so_basis_pairs(self.sig)
        M = [[[] for _ in range(W)] for _ in range(W)]
        for idx, (a, b) in enumerate(pairs):
            coef = mul_(A[a - 1][b - 1], Const(self.sig.eta(b)))
            im = self.rep.rho_so[idx]
            for u in range(W):
                for v in range(W):
                    if im[u][v]:
                        M[u][v].append(mul_(coef, _c(im[u][v])))
        return [[add_(*M[u][v]) for v in range(W)] for u in range(W)]

    def rho_h_endo(self, hcoords: List[Expr]) -> List[List[Expr]]:
        W = self.rep.dim_W
        M = [[[] for _ in range(W)] for _ in range(W)]
        for m in range(self.h_dim):
            im = self.rep.rho_aux[m]
            for u in range(W):
                for v in range(W):
                    if im[u][v]:
                        M[u][v].append(mul_(hcoords[m], _c(im[u][v])))
        return [[add_(*M[u][v]) for v in range(W)] for u in range(W)]


# ---------------------------------------------------------------------------
# scene validation
# ---------------------------------------------------------------------------

@dataclass
class SceneValidation:
    report: ResidualReport
    good_points: List[Tuple[float, ...]]
    killing_ok: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.report.ok


def validate_scene(scene: ChartScene) -> SceneValidation:
    """Point-level checks: metric and coframe nondegenerate (singular points
    are dropped with a note, not fatal), coframe reproduces the metric, and
    every named Killing field actually satisfies the Killing equation."""
    rep = ResidualReport()
    good = []
    eta = np.diag([float(scene.sig.eta(a + 1)) for a in range(scene.n)])
    worst_frame = 0.0
    dropped = []
    for p in scene.test_points:
        env = scene.env(p)
        g = _ev_mat(scene.metric, env)
        E = _ev_mat(scene.coframe, env)
        if abs(np.linalg.det(g)) < 1e-12 or abs(np.linalg.det(E)) < 1e-12:
            dropped.append(p)
            continue
        worst_frame = max(worst_frame, float(np.max(np.abs(E.T @ eta @ E - g))))
        good.append(p)
    rep.add(
        "coframe reproduces the metric at every usable test point",
        worst_frame,
        scene.tol,
        note=f"{len(dropped)} singular point(s) dropped" if dropped else "",
    )
    if not good:
        rep.add("at least one nondegenerate test point", 1.0, 0.0, note="none usable")
    killing_ok = {}
    for name in scene.killing_fields:
        nab = scene.killing_tensor(name)
        worst = 0.0
        for p in good:
            env = scene.env(p)
            M = _ev_mat(nab, env)
            worst = max(worst, float(np.max(np.abs(M + M.T))))
        killing_ok[name] = worst <= scene.tol
        rep.add(f"Killing equation for field {name!r}", worst, scene.tol)
    return SceneValidation(rep, good, killing_ok)


# ---------------------------------------------------------------------------
# pointwise operators
# ---------------------------------------------------------------------------

def christoffels(scene: ChartScene, point) -> np.ndarray:
    env = scene.env(point)
    g = _ev_mat(scene.metric, env)
    if abs(np.linalg.det(g)) < 1e-12:
        raise ValueError(f"metric is singular at {tuple(point)}")
    n = scene.n
    out = np.empty((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                out[k, i, j] = scene.gamma[k][i][j].ev(env)
    return out


def spin_connection(scene: ChartScene, point) -> np.ndarray:
    env = scene.env(point)
    E = _ev_mat(scene.coframe, env)
    if abs(np.linalg.det(E)) < 1e-12:
        raise ValueError(f"coframe is singular at {tuple(point)}")
    n = scene.n
    out = np.empty((n, n, n))
    for i in range(n):
        for a in range(n):
            for b in range(n):
                out[i, a, b] = scene.omega[i][a][b].ev(env)
    return out


def riemann(scene: ChartScene, point) -> np.ndarray:
    env = scene.env(point)
    n = scene.n
    out = np.empty((n, n, n, n))
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    out[l, k, i, j] = scene.riemann[l][k][i][j].ev(env)
    return out


def field_strength(scene: ChartScene, point) -> np.ndarray:
    env = scene.env(point)
    n, h = scene.n, scene.h_dim
    out = np.empty((n, n, h))
    for i in range(n):
        for j in range(n):
            out[i, j] = _ev_vec(scene.fstrength[i][j], env)
    return out


def _covd_exprs(scene: ChartScene, phi: List[Expr], i: int) -> List[Expr]:
    """Twisted covariant derivative D_i phi on the W index."""
    endo = scene.endo[i]
    W = scene.rep.dim_W
    return [
        add_(
            _dcoord(phi[u], i),
            *(mul_(endo[u][v], phi[v]) for v in range(W) if endo[u][v] != Const(0)),
        )
        for u in range(W)
    ]


def _apply_endo(M: List[List[Expr]], phi: List[Expr]) -> List[Expr]:
    W = len(phi)
    return [
        add_(*(mul_(M[u][v], phi[v]) for v in range(W) if M[u][v] != Const(0)))
        for u in range(W)
    ]


def nabla_hat(scene: ChartScene, phi, X, point) -> np.ndarray:
    """X^i (d_i + half omega_i^{ab} rho(Sigma_ab) + rho(alpha_i)) phi."""
    phi_e = scene.section_of(phi)
    X_e = scene.vector_of(X)
    env = scene.env(point)
    out = np.zeros(scene.rep.dim_W)
    for i in range(scene.n):
        xi = X_e[i].ev(env)
        if xi == 0.0:
            continue
        out += xi * _ev_vec(_covd_exprs(scene, phi_e, i), env)
    return out


def a_endo(scene: ChartScene, X, point) -> np.ndarray:
    """Frame endomorphism of a Killing field; rejects non-Killing input."""
    nab = scene.killing_tensor(X)
    env = scene.env(point)
    M = _ev_mat(nab, env)
    if float(np.max(np.abs(M + M.T))) > scene.tol:
        label = X if isinstance(X, str) else "<anonymous>"
        raise ValueError(f"field {label} fails the Killing equation at {tuple(point)}")
    return _ev_mat(scene.a_endo_exprs(X), env)


def cov_lie_exprs(scene: ChartScene, phi: List[Expr], X) -> List[Expr]:
    X_e = scene.vector_of(X)
    W = scene.rep.dim_W
    terms = [[] for _ in range(W)]
    for i in range(scene.n):
        Di = _covd_exprs(scene, phi, i)
        for u in range(W):
            terms[u].append(mul_(X_e[i], Di[u]))
    K = scene.kostant_endo(X)
    act = _apply_endo(K, phi)
    return [add_(*terms[u], act[u]) for u in range(W)]


def cov_lie(scene: ChartScene, phi, X, point) -> np.ndarray:
    """Covariant Lie derivative on sections: nabla_hat plus the A_X action."""
    return _ev_vec(cov_lie_exprs(scene, scene.section_of(phi), X), scene.env(point))


# ---------------------------------------------------------------------------
# bundle-valued forms
# ---------------------------------------------------------------------------

class BundleForm:
    """W-valued p-form; only strictly increasing index tuples stored."""

    def __init__(self, degree: int, dim_W: int, comps: Dict[Tuple[int, ...], List[Expr]]):
        self.degree = degree
        self.dim_W = dim_W
        self.comps: Dict[Tuple[int, ...], List[Expr]] = {}
        for key, val in comps.items():
            key = tuple(key)
            if len(key) != degree or list(key) != sorted(key) or len(set(key)) != degree:
                raise ValueError("component keys must be strictly increasing tuples")
            if len(val) != dim_W:
                raise ValueError("component has wrong fiber dimension")
            self.comps[key] = [as_expr(c) for c in val]

    @staticmethod
    def zero(degree: int, dim_W: int) -> "BundleForm":
        return BundleForm(degree, dim_W, {})

    @staticmethod
    def from_section(phi: List[Expr]) -> "BundleForm":
        return BundleForm(0, len(phi), {(): list(phi)})

    def component(self, key: Tuple[int, ...]) -> List[Expr]:
        """Component for an arbitrary index tuple, with permutation sign."""
        if len(set(key)) != len(key):
            return [Const(0)] * self.dim_W
        order = tuple(sorted(key))
        sign = 1
        k = list(key)
        for i in range(len(k)):
            for j in range(i + 1, len(k)):
                if k[i] > k[j]:
                    sign = -sign
        base = self.comps.get(order)
        if base is None:
            return [Const(0)] * self.dim_W
        if sign == 1:
            return base
        return [neg_(c) for c in base]

    def map_components(self, f) -> "BundleForm":
        return BundleForm(
            self.degree, self.dim_W, {k: f(v) for k, v in self.comps.items()}
        )

    def __add__(self, other: "BundleForm") -> "BundleForm":
        if self.degree != other.degree or self.dim_W != other.dim_W:
            raise ValueError("form shape mismatch")
        keys = set(self.comps) | set(other.comps)
        return BundleForm(
            self.degree,
            self.dim_W,
            {
                k: [add_(a, b) for a, b in zip(self.component(k), other.component(k))]
                for k in keys
            },
        )

    def __sub__(self, other: "BundleForm") -> "BundleForm":
        return self + other.map_components(lambda v: [neg_(c) for c in v])

    def ev_max(self, env) -> float:
        worst = 0.0
        for v in self.comps.values():
            for e in v:
                worst = max(worst, abs(e.ev(env)))
        return worst


def cov_ext_derivative(scene: ChartScene, form: BundleForm) -> BundleForm:
    """Covariant exterior derivative: antisymmetrized twisted D on the
    W index; the Levi-Civita terms on form indices cancel by symmetry."""
    p, n = form.degree, scene.n
    if p >= n:
        raise ValueError("degree overflow: form degree equals chart dimension")
    comps: Dict[Tuple[int, ...], List[Expr]] = {}
    for key in combinations(range(n), p + 1):
        acc = [[] for _ in range(form.dim_W)]
        for pos, i in enumerate(key):
            rest = key[:pos] + key[pos + 1 :]
            sub = form.component(rest)
            Dsub = _covd_exprs(scene, sub, i)
            sign = Const((-1) ** pos)
            for u in range(form.dim_W):
                acc[u].append(mul_(sign, Dsub[u]))
        comps[key] = [add_(*a) for a in acc]
    return BundleForm(p + 1, form.dim_W, comps)


def interior(scene: ChartScene, X, form: BundleForm) -> BundleForm:
    """Contraction in the first slot."""
    if form.degree < 1:
        raise ValueError("degree underflow: cannot contract a 0-form")
    X_e = scene.vector_of(X)
    comps: Dict[Tuple[int, ...], List[Expr]] = {}
    for key in combinations(range(scene.n), form.degree - 1):
        acc = [[] for _ in range(form.dim_W)]
        for i in range(scene.n):
            sub = form.component((i,) + key)
            for u in range(form.dim_W):
                acc[u].append(mul_(X_e[i], sub[u]))
        comps[key] = [add_(*a) for a in acc]
    return BundleForm(form.degree - 1, form.dim_W, comps)


def lie_form(scene: ChartScene, X, form: BundleForm) -> BundleForm:
    """Covariant Lie derivative on W-valued forms, tensor (Kostant) version:
    twisted derivative plus A_X acting on the W index and the ordinary
    Lie-derivative action on the form indices (connection terms cancel)."""
    X_e = scene.vector_of(X)
    K = scene.kostant_endo(X)
    n, W = scene.n, form.dim_W
    comps: Dict[Tuple[int, ...], List[Expr]] = {}
    for key in combinations(range(n), form.degree):
        base = form.component(key)
        acc = [[] for _ in range(W)]
        for i in range(n):
            Di = _covd_exprs(scene, base, i)
            for u in range(W):
                acc[u].append(mul_(X_e[i], Di[u]))
        act = _apply_endo(K, base)
        for u in range(W):
            acc[u].append(act[u])
        for pos in range(form.degree):
            for k in range(n):
                dX = _dcoord(X_e[k], key[pos])
                if dX == Const(0):
                    continue
                sub = form.component(key[:pos] + (k,) + key[pos + 1 :])
                for u in range(W):
                    acc[u].append(mul_(dX, sub[u]))
        comps[key] = [add_(*a) for a in acc]
    return BundleForm(form.degree, W, comps)


def wedge_endo_form(
    scene: ChartScene, one_form_endo: List[List[List[Expr]]], form: BundleForm
) -> BundleForm:
    """(beta wedge form) for an endomorphism-valued 1-form beta_i, acting on
    the W index; used for the curvature terms of the calculus identities."""
    p, n, W = form.degree, scene.n, form.dim_W
    comps: Dict[Tuple[int, ...], List[Expr]] = {}
    for key in combinations(range(n), p + 1):
        acc = [[] for _ in range(W)]
        for pos, i in enumerate(key):
            rest = key[:pos] + key[pos + 1 :]
            sub = form.component(rest)
            act = _apply_endo(one_form_endo[i], sub)
            sign = Const((-1) ** pos)
            for u in range(W):
                acc[u].append(mul_(sign, act[u]))
        comps[key] = [add_(*a) for a in acc]
    return BundleForm(p + 1, W, comps)


def curvature_endo_form(scene: ChartScene) -> List[List[List[List[Expr]]]]:
    """rho_* of the full curvature two-form R + F, as W x W expressions
    indexed [i][j]."""
    n, W = scene.n, scene.rep.dim_W
    pairs = so_basis_pairs(scene.sig)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            M = [[[] for _ in range(W)] for _ in range(W)]
            Rm = scene.rframe[i][j]
            for idx, (a, b) in enumerate(pairs):
                coef = mul_(Rm[a - 1][b - 1], Const(scene.sig.eta(b)))
                im = scene.rep.rho_so[idx]
                for u in range(W):
                    for v in range(W):
                        if im[u][v]:
                            M[u][v].append(mul_(coef, _c(im[u][v])))
            for m in range(scene.h_dim):
                im = scene.rep.rho_aux[m]
                coef = scene.fstrength[i][j][m]
                for u in range(W):
                    for v in range(W):
                        if im[u][v]:
                            M[u][v].append(mul_(coef, _c(im[u][v])))
            out[i][j] = [[add_(*M[u][v]) for v in range(W)] for u in range(W)]
    return out


def gauge_endo_form(scene: ChartScene) -> List[List[List[List[Expr]]]]:
    """rho_* of F alone (no spin curvature), indexed [i][j]."""
    n = scene.n
    return [
        [scene.rho_h_endo(scene.fstrength[i][j]) for j in range(n)] for i in range(n)
    ]


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _max_over_points(scene, points, form: BundleForm) -> float:
    worst = 0.0
    for p in points:
        worst = max(worst, form.ev_max(scene.env(p)))
    return worst


def _vec_bracket(scene, X_e, Y_e) -> VecField:
    n = scene.n
    return [
        add_(
            *(mul_(X_e[i], _dcoord(Y_e[k], i)) for i in range(n)),
            *(neg_(mul_(Y_e[i], _dcoord(X_e[k], i))) for i in range(n)),
        )
        for k in range(n)
    ]


def _killing_names(scene, val: SceneValidation) -> List[str]:
    return [k for k in scene.killing_fields if val.killing_ok.get(k, False)]


def _test_forms(scene: ChartScene) -> List[Tuple[str, BundleForm]]:
    """Deterministic form inventory spanning degrees 0..2 from the sections."""
    out = []
    for name, phi in sorted(scene.sections.items()):
        f0 = BundleForm.from_section(phi)
        out.append((f"{name}", f0))
        f1 = cov_ext_derivative(scene, f0)
        out.append((f"D{name}", f1))
        if scene.n >= 2:
            x1 = Var("x1")
            f2 = BundleForm(
                2, scene.rep.dim_W, {(0, 1): [mul_(x1, c) for c in phi]}
            )
            out.append((f"x1*{name} dx12", f2))
    return out


def verify_derivatives(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """Symbolic derivative vs central finite difference on every scene field."""
    rep = ResidualReport()
    inventory: List[Tuple[str, Expr]] = []
    for i in range(scene.n):
        for j in range(scene.n):
            inventory.append((f"g[{i}][{j}]", scene.metric[i][j]))
            inventory.append((f"e[{i}][{j}]", scene.coframe[i][j]))
    for i in range(scene.n):
        for m in range(scene.h_dim):
            inventory.append((f"alpha[{i}][{m}]", scene.gauge[i][m]))
    for k, v in sorted(scene.killing_fields.items()):
        for i, e in enumerate(v):
            inventory.append((f"{k}[{i}]", e))
    for k, v in sorted(scene.sections.items()):
        for i, e in enumerate(v):
            inventory.append((f"{k}[{i}]", e))
    for k, v in sorted(scene.aux_fields.items()):
        for i, e in enumerate(v):
            inventory.append((f"{k}[{i}]", e))
    h = 1e-5
    worst = 0.0
    for _name, e in inventory:
        for i in range(scene.n):
            de = derivative(e, scene.coords[i])
            for p in val.good_points:
                env = scene.env(p)
                sym = de.ev(env)
                up = dict(env)
                dn = dict(env)
                up[scene.coords[i]] += h
                dn[scene.coords[i]] -= h
                fd = (e.ev(up) - e.ev(dn)) / (2 * h)
                worst = max(worst, abs(sym - fd) / max(1.0, abs(sym)))
    rep.add(
        "symbolic derivatives match central differences on all scene fields",
        worst,
        1e-6,
    )
    return rep


def verify_geometry(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """Christoffel symmetry, connection antisymmetry, Riemann symmetries and
    first Bianchi, and agreement of the two curvature computations."""
    rep = ResidualReport()
    n = scene.n
    eta = np.diag([float(scene.sig.eta(a + 1)) for a in range(n)])
    w_sym = w_anti = w_bianchi = w_pair = w_frame = 0.0
    for p in val.good_points:
        env = scene.env(p)
        Ga = christoffels(scene, p)
        w_sym = max(w_sym, float(np.max(np.abs(Ga - Ga.transpose(0, 2, 1)))))
        om = spin_connection(scene, p)
        for i in range(n):
            low = eta @ om[i]
            w_anti = max(w_anti, float(np.max(np.abs(low + low.T))))
        R = riemann(scene, p)
        g = _ev_mat(scene.metric, env)
        Rlow = np.einsum("lm,mkij->lkij", g, R)
        w_pair = max(
            w_pair,
            float(np.max(np.abs(Rlow + Rlow.transpose(1, 0, 2, 3)))),
            float(np.max(np.abs(Rlow + Rlow.transpose(0, 1, 3, 2)))),
        )
        bianchi = R + R.transpose(0, 3, 1, 2) + R.transpose(0, 2, 3, 1)
        w_bianchi = max(w_bianchi, float(np.max(np.abs(bianchi))))
        # spin-connection curvature must be the frame-converted Riemann tensor
        E = _ev_mat(scene.coframe, env)
        Ei = np.linalg.inv(E)
        for i in range(n):
            for j in range(n):
                Rf = np.array(
                    [
                        [scene.rframe[i][j][a][b].ev(env) for b in range(n)]
                        for a in range(n)
                    ]
                )
                conv = E @ R[:, :, i, j] @ Ei
                w_frame = max(w_frame, float(np.max(np.abs(Rf - conv))))
    rep.add("Levi-Civita coefficients symmetric in the lower pair", w_sym, scene.tol)
    rep.add("spin connection eta-antisymmetric", w_anti, scene.tol)
    rep.add("Riemann antisymmetries in both index pairs", w_pair, scene.tol)
    rep.add("first Bianchi identity", w_bianchi, scene.tol)
    rep.add("spin-connection curvature matches frame-converted Riemann", w_frame, scene.tol)
    return rep


def verify_kostant(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """Coordinate Lie derivative vs covariant-plus-A_X on vector-type data:
    applies when the scene representation is the vector representation."""
    rep = ResidualReport()
    if scene.rep.dim_W != scene.n or not scene.rep.name.startswith("vector"):
        rep.add(
            "Lie derivative decomposition (vector sections)",
            0.0,
            scene.tol,
            note="no vector-type sections in this scene; vacuous",
        )
        return rep
    worst = 0.0
    flagged = []
    for kname in scene.killing_fields:
        if not val.killing_ok.get(kname, False):
            flagged.append(kname)
            continue
        X_e = scene.killing_fields[kname]
        for sname, phi in sorted(scene.sections.items()):
            # frame components -> coordinate components
            v = [
                add_(*(mul_(scene.einv[j][a], phi[a]) for a in range(scene.n)))
                for j in range(scene.n)
            ]
            lie_v = _vec_bracket(scene, X_e, v)
            back = [
                add_(*(mul_(scene.coframe[a][j], lie_v[j]) for j in range(scene.n)))
                for a in range(scene.n)
            ]
            cov = cov_lie_exprs(scene, phi, kname)
            for p in val.good_points:
                env = scene.env(p)
                worst = max(
                    worst,
                    float(np.max(np.abs(_ev_vec(cov, env) - _ev_vec(back, env)))),
                )
    note = f"non-Killing field(s) excluded: {', '.join(flagged)}" if flagged else ""
    rep.add(
        "covariant Lie derivative matches the coordinate one on vector sections",
        worst,
        scene.tol,
        note=note,
    )
    return rep


def verify_cartan(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """The four calculus identities for the tensor-form Lie derivative:
    homotopy formula with its vertical A_X term, the derivative commutator
    with the full curvature, contraction commutators, and the Lie-Lie
    commutator with the gauge curvature term."""
    rep = ResidualReport()
    points = val.good_points
    names = _killing_names(scene, val)
    forms = _test_forms(scene)
    Fendo = gauge_endo_form(scene)
    n, W = scene.n, scene.rep.dim_W

    w1 = w2 = w3 = w4 = 0.0
    for X in names:
        K = scene.kostant_endo(X)
        X_e = scene.killing_fields[X]
        for _fname, om in forms:
            # 1: homotopy formula with the vertical term
            lhs = lie_form(scene, X, om)
            rhs = om.map_components(lambda v: _apply_endo(K, v))
            if om.degree >= 1:
                rhs = rhs + cov_ext_derivative(scene, interior(scene, X, om))
            if om.degree <= scene.n - 1:
                rhs = rhs + interior(scene, X, cov_ext_derivative(scene, om))
            w1 = max(w1, _max_over_points(scene, points, lhs - rhs))

            # 2: [L_X, d] = (iota_X F) wedge; the spin-curvature contribution
            # cancels against the covariant derivative of A_X along X Killing
            if om.degree <= scene.n - 1:
                lhs2 = lie_form(scene, X, cov_ext_derivative(scene, om)) - (
                    cov_ext_derivative(scene, lie_form(scene, X, om))
                )
                curv = [
                    [
                        [
                            add_(*(mul_(X_e[i], Fendo[i][j][u][v]) for i in range(n)))
                            for v in range(W)
                        ]
                        for u in range(W)
                    ]
                    for j in range(n)
                ]
                rhs2 = wedge_endo_form(scene, curv, om)
                w2 = max(w2, _max_over_points(scene, points, lhs2 - rhs2))

            # 3: [L_X, iota_Y] = iota_[X,Y]
            if om.degree >= 1:
                for Y in names:
                    Y_e = scene.killing_fields[Y]
                    lhs3 = lie_form(scene, X, interior(scene, Y, om)) - interior(
                        scene, Y, lie_form(scene, X, om)
                    )
                    rhs3 = interior(scene, _vec_bracket(scene, X_e, Y_e), om)
                    w3 = max(w3, _max_over_points(scene, points, lhs3 - rhs3))

        # 4: [L_X, L_Y] = L_[X,Y] + F(X,Y) on forms
        for Y in names:
            Y_e = scene.killing_fields[Y]
            XY = _vec_bracket(scene, X_e, Y_e)
            FXY = [
                add_(
                    *(
                        mul_(X_e[i], Y_e[j], scene.fstrength[i][j][m])
                        for i in range(scene.n)
                        for j in range(scene.n)
                    )
                )
                for m in range(scene.h_dim)
            ]
            Fact = scene.rho_h_endo(FXY)
            for _fname, om in forms:
                lhs4 = lie_form(scene, X, lie_form(scene, Y, om)) - lie_form(
                    scene, Y, lie_form(scene, X, om)
                )
                rhs4 = lie_form(scene, XY, om) + om.map_components(
                    lambda v: _apply_endo(Fact, v)
                )
                w4 = max(w4, _max_over_points(scene, points, lhs4 - rhs4))

    rep.add("Cartan homotopy formula (with vertical A_X term)", w1, scene.tol)
    rep.add("Lie-exterior commutator equals contracted gauge curvature", w2, scene.tol)
    rep.add("Lie-contraction commutator equals bracket contraction", w3, scene.tol)
    rep.add("Lie-Lie commutator on forms carries the F(X,Y) term", w4, scene.tol)
    return rep


def verify_dhat(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """d-hat squared equals the full curvature wedge; both Bianchi shapes."""
    rep = ResidualReport()
    points = val.good_points
    Rho = curvature_endo_form(scene)
    w_sq = 0.0
    for _name, om in _test_forms(scene):
        if om.degree > scene.n - 2:
            continue
        dd = cov_ext_derivative(scene, cov_ext_derivative(scene, om))
        rw = wedge2_endo_form(scene, Rho, om)
        w_sq = max(w_sq, _max_over_points(scene, points, dd - rw))
    rep.add("square of the covariant exterior derivative is curvature wedge", w_sq, scene.tol)

    # gauge Bianchi: cyclic covariant derivative of F vanishes
    n, h = scene.n, scene.h_dim
    w_f = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                cyc = []
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    dF = [_dcoord(scene.fstrength[b][c][m], a) for m in range(h)]
                    br = scene.hbracket(scene.gauge[a], scene.fstrength[b][c])
                    cyc.append([add_(dF[m], br[m]) for m in range(h)])
                tot = [add_(*(t[m] for t in cyc)) for m in range(h)]
                for p in points:
                    env = scene.env(p)
                    w_f = max(w_f, float(np.max(np.abs(_ev_vec(tot, env)))) if h else 0.0)
    rep.add("gauge Bianchi identity (cyclic derivative of F)", w_f, scene.tol)

    # spin-curvature Bianchi in the same shape
    w_r = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for a in range(n):
                    for b in range(n):
                        cyc = []
                        for (u, v, w) in ((i, j, k), (j, k, i), (k, i, j)):
                            terms = [_dcoord(scene.rframe[v][w][a][b], u)]
                            for cmid in range(n):
                                terms.append(
                                    mul_(scene.omega[u][a][cmid], scene.rframe[v][w][cmid][b])
                                )
                                terms.append(
                                    neg_(
                                        mul_(
                                            scene.rframe[v][w][a][cmid],
                                            scene.omega[u][cmid][b],
                                        )
                                    )
                                )
                            cyc.append(add_(*terms))
                        tot = add_(*cyc)
                        for p in points:
                            w_r = max(w_r, abs(tot.ev(scene.env(p))))
    rep.add("curvature Bianchi identity (cyclic derivative of R)", w_r, scene.tol)
    return rep


def wedge2_endo_form(scene: ChartScene, endo2, form: BundleForm) -> BundleForm:
    """(Theta wedge form) for an endomorphism-valued 2-form Theta_{ij}."""
    p, n, W = form.degree, scene.n, form.dim_W
    comps: Dict[Tuple[int, ...], List[Expr]] = {}
    for key in combinations(range(n), p + 2):
        acc = [[] for _ in range(W)]
        for pos1 in range(len(key)):
            for pos2 in range(pos1 + 1, len(key)):
                i, j = key[pos1], key[pos2]
                rest = tuple(
                    key[t] for t in range(len(key)) if t != pos1 and t != pos2
                )
                sub = form.component(rest)
                act = _apply_endo(endo2[i][j], sub)
                sign = Const((-1) ** (pos1 + pos2 - 1))
                for u in range(W):
                    acc[u].append(mul_(sign, act[u]))
        comps[key] = [add_(*a) for a in acc]
    return BundleForm(p + 2, W, comps)


def verify_lie_comm(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """Section-level commutator identities: [L_X, nabla_Y] and [L_X, L_Y]."""
    rep = ResidualReport()
    points = val.good_points
    names = _killing_names(scene, val)
    w_nab = w_lie = 0.0
    f_seen = 0.0
    for X in names:
        X_e = scene.killing_fields[X]
        for Y in names:
            Y_e = scene.killing_fields[Y]
            XY = _vec_bracket(scene, X_e, Y_e)
            FXY = [
                add_(
                    *(
                        mul_(X_e[i], Y_e[j], scene.fstrength[i][j][m])
                        for i in range(scene.n)
                        for j in range(scene.n)
                    )
                )
                for m in range(scene.h_dim)
            ]
            Fact = scene.rho_h_endo(FXY)
            for p in points:
                f_seen = max(f_seen, float(np.max(np.abs(_ev_mat(Fact, scene.env(p))))) if scene.rep.dim_W else 0.0)
            for sname, phi in sorted(scene.sections.items()):

                def nabla_dir(vec, ph):
                    W = scene.rep.dim_W
                    terms = [[] for _ in range(W)]
                    for i in range(scene.n):
                        Di = _covd_exprs(scene, ph, i)
                        for u in range(W):
                            terms[u].append(mul_(vec[i], Di[u]))
                    return [add_(*t) for t in terms]

                lie_X = lambda ph: cov_lie_exprs(scene, ph, X)
                lie_Y = lambda ph: cov_lie_exprs(scene, ph, Y)

                lhs_a = [
                    add_(u, neg_(v))
                    for u, v in zip(
                        lie_X(nabla_dir(Y_e, phi)), nabla_dir(Y_e, lie_X(phi))
                    )
                ]
                rhs_a = [
                    add_(u, v)
                    for u, v in zip(nabla_dir(XY, phi), _apply_endo(Fact, phi))
                ]
                for p in points:
                    env = scene.env(p)
                    w_nab = max(
                        w_nab,
                        float(
                            np.max(np.abs(_ev_vec(lhs_a, env) - _ev_vec(rhs_a, env)))
                        ),
                    )

                lhs_b = [
                    add_(u, neg_(v))
                    for u, v in zip(lie_X(lie_Y(phi)), lie_Y(lie_X(phi)))
                ]
                rhs_b = [
                    add_(u, v)
                    for u, v in zip(cov_lie_exprs(scene, phi, XY), _apply_endo(Fact, phi))
                ]
                for p in points:
                    env = scene.env(p)
                    w_lie = max(
                        w_lie,
                        float(
                            np.max(np.abs(_ev_vec(lhs_b, env) - _ev_vec(rhs_b, env)))
                        ),
                    )
    rep.add("Lie/derivative commutator carries the F(X,Y) term", w_nab, scene.tol)
    rep.add("Lie/Lie commutator carries the F(X,Y) term", w_lie, scene.tol)
    if f_seen > 1e-12:
        wit, note = 0.0, f"max |rho(F(X,Y))| = {f_seen:.3e}"
    elif _gauge_is_flat(scene, points):
        wit, note = 0.0, "gauge field is flat; the term vanishes identically"
    elif all(np.max(np.abs(M)) < 1e-12 for M in scene.rep.rho_aux):
        wit, note = 0.0, "representation does not see the gauge field; term vacuous"
    else:
        wit, note = 1.0, "curved gauge field never witnessed by any Killing pair"
    rep.add("gauge curvature term attains a nonzero value somewhere", wit, 0.5, note=note)
    return rep


def _gauge_is_flat(scene, points) -> bool:
    for i in range(scene.n):
        for j in range(scene.n):
            for m in range(scene.h_dim):
                for p in points:
                    if abs(scene.fstrength[i][j][m].ev(scene.env(p))) > 1e-12:
                        return False
    return True


def verify_curvature_commutator(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """[nabla_X, nabla_Y] - nabla_[X,Y] equals the assembled R + F action."""
    rep = ResidualReport()
    points = val.good_points
    Rho = curvature_endo_form(scene)
    worst = 0.0
    names = list(scene.killing_fields)
    for xi in range(len(names)):
        for yi in range(xi + 1, len(names)):
            X_e = scene.killing_fields[names[xi]]
            Y_e = scene.killing_fields[names[yi]]
            XY = _vec_bracket(scene, X_e, Y_e)
            for sname, phi in sorted(scene.sections.items()):

                def nabla_dir(vec, ph):
                    W = scene.rep.dim_W
                    terms = [[] for _ in range(W)]
                    for i in range(scene.n):
                        Di = _covd_exprs(scene, ph, i)
                        for u in range(W):
                            terms[u].append(mul_(vec[i], Di[u]))
                    return [add_(*t) for t in terms]

                lhs = [
                    add_(a, neg_(b), neg_(c))
                    for a, b, c in zip(
                        nabla_dir(X_e, nabla_dir(Y_e, phi)),
                        nabla_dir(Y_e, nabla_dir(X_e, phi)),
                        nabla_dir(XY, phi),
                    )
                ]
                RXY = [
                    [
                        add_(
                            *(
                                mul_(X_e[i], Y_e[j], Rho[i][j][u][v])
                                for i in range(scene.n)
                                for j in range(scene.n)
                            )
                        )
                        for v in range(scene.rep.dim_W)
                    ]
                    for u in range(scene.rep.dim_W)
                ]
                rhs = _apply_endo(RXY, phi)
                for p in points:
                    env = scene.env(p)
                    worst = max(
                        worst,
                        float(np.max(np.abs(_ev_vec(lhs, env) - _ev_vec(rhs, env)))),
                    )
    rep.add(
        "derivative commutator reproduces the assembled curvature R + F",
        worst,
        scene.tol,
    )
    return rep


# ---------------------------------------------------------------------------
# symmetry algebra
# ---------------------------------------------------------------------------

SymElement = Tuple[VecField, List[Expr]]  # (vector part, h-valued part)


def sym_element(scene: ChartScene, name: str) -> SymElement:
    if name in scene.killing_fields:
        return (
            scene.killing_fields[name],
            [Const(0)] * scene.h_dim,
        )
    if name in scene.aux_fields:
        return ([Const(0)] * scene.n, scene.aux_fields[name])
    raise ValueError(f"unknown symmetry element {name!r}")


def _aux_cov_dir(scene: ChartScene, vec: VecField, h: List[Expr]) -> List[Expr]:
    """Directional covariant derivative of an h-valued field: the spin part
    acts trivially, the gauge part by the adjoint bracket."""
    out = []
    for m in range(scene.h_dim):
        terms = []
        for i in range(scene.n):
            br = scene.hbracket(scene.gauge[i], h)
            terms.append(mul_(vec[i], add_(_dcoord(h[m], i), br[m])))
        out.append(add_(*terms))
    return out


def symmetry_bracket(scene: ChartScene, a: SymElement, b: SymElement) -> SymElement:
    """Bracket on Killing-plus-gauge pairs: coordinate bracket of the vector
    parts; the h-part combines F(X,Y), the two directional derivatives, and
    the pointwise bracket."""
    (Xa, Ha), (Xb, Hb) = a, b
    vec = _vec_bracket(scene, Xa, Xb)
    F_part = [
        add_(
            *(
                mul_(Xa[i], Xb[j], scene.fstrength[i][j][m])
                for i in range(scene.n)
                for j in range(scene.n)
            )
        )
        for m in range(scene.h_dim)
    ]
    dA = _aux_cov_dir(scene, Xa, Hb)
    dB = _aux_cov_dir(scene, Xb, Ha)
    point = scene.hbracket(Ha, Hb)
    h = [add_(F_part[m], dA[m], neg_(dB[m]), point[m]) for m in range(scene.h_dim)]
    return (vec, h)


def sym_action(scene: ChartScene, a: SymElement, phi: List[Expr]) -> List[Expr]:
    """Action on sections: vector part by the covariant Lie derivative,
    h-part through the representation."""
    X, H = a
    out = cov_lie_exprs(scene, phi, X)
    act = _apply_endo(scene.rho_h_endo(H), phi)
    return [add_(u, v) for u, v in zip(out, act)]


def verify_jacobi(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """Jacobi identity for the extended bracket over all registered triples,
    plus the direct cyclic-derivative reduction on Killing triples."""
    rep = ResidualReport()
    points = val.good_points
    names = _killing_names(scene, val) + sorted(scene.aux_fields)
    elems = {k: sym_element(scene, k) for k in names}
    worst = 0.0
    for i in range(len(names)):
        for j in range(len(names)):
            for k in range(len(names)):
                a, b, c = elems[names[i]], elems[names[j]], elems[names[k]]
                t1 = symmetry_bracket(scene, symmetry_bracket(scene, a, b), c)
                t2 = symmetry_bracket(scene, symmetry_bracket(scene, b, c), a)
                t3 = symmetry_bracket(scene, symmetry_bracket(scene, c, a), b)
                vec = [add_(u, v, w) for u, v, w in zip(t1[0], t2[0], t3[0])]
                h = [add_(u, v, w) for u, v, w in zip(t1[1], t2[1], t3[1])]
                for p in points:
                    env = scene.env(p)
                    for e in vec:
                        worst = max(worst, abs(e.ev(env)))
                    for e in h:
                        worst = max(worst, abs(e.ev(env)))
    rep.add("Jacobi identity for the extended bracket (all triples)", worst, scene.tol)

    kn = _killing_names(scene, val)
    w_b = 0.0
    for X in kn:
        for Y in kn:
            for Z in kn:
                Xe, Ye, Ze = (scene.killing_fields[t] for t in (X, Y, Z))

                def FYZ(u, v):
                    return [
                        add_(
                            *(
                                mul_(u[i], v[j], scene.fstrength[i][j][m])
                                for i in range(scene.n)
                                for j in range(scene.n)
                            )
                        )
                        for m in range(scene.h_dim)
                    ]

                cyc = []
                for (A, B, C) in ((Xe, Ye, Ze), (Ye, Ze, Xe), (Ze, Xe, Ye)):
                    fbc = FYZ(B, C)
                    # directional covariant derivative of the function F(B,C)
                    dterm = _aux_cov_dir(scene, A, fbc)
                    fbr = FYZ(_vec_bracket(scene, A, B), C)
                    cyc.append([add_(d, neg_(f)) for d, f in zip(dterm, fbr)])
                tot = [add_(*(t[m] for t in cyc)) for m in range(scene.h_dim)]
                for p in points:
                    env = scene.env(p)
                    for e in tot:
                        w_b = max(w_b, abs(e.ev(env)))
    rep.add("cyclic covariant derivative of F on Killing triples", w_b, scene.tol)
    return rep


def verify_module(scene: ChartScene, val: SceneValidation) -> ResidualReport:
    """Bracket action minus commutator of actions on every registered
    section, over all pairs of registered symmetry elements."""
    rep = ResidualReport()
    points = val.good_points
    names = _killing_names(scene, val) + sorted(scene.aux_fields)
    elems = {k: sym_element(scene, k) for k in names}
    worst = 0.0
    for i in range(len(names)):
        for j in range(len(names)):
            a, b = elems[names[i]], elems[names[j]]
            br = symmetry_bracket(scene, a, b)
            for sname, phi in sorted(scene.sections.items()):
                lhs = sym_action(scene, br, phi)
                rhs = [
                    add_(u, neg_(v))
                    for u, v in zip(
                        sym_action(scene, a, sym_action(scene, b, phi)),
                        sym_action(scene, b, sym_action(scene, a, phi)),
                    )
                ]
                for p in points:
                    env = scene.env(p)
                    worst = max(
                        worst,
                        float(np.max(np.abs(_ev_vec(lhs, env) - _ev_vec(rhs, env)))),
                    )
    rep.add("sections form a module over the extended bracket", worst, scene.tol)
    return rep


def full_suite(scene: ChartScene) -> ResidualReport:
    """Scene validation plus every identity family, merged in a fixed order."""
    val = validate_scene(scene)
    report = ResidualReport()
    report.extend(val.report)
    if not val.good_points:
        return report
    report.extend(verify_derivatives(scene, val))
    report.extend(verify_geometry(scene, val))
    report.extend(verify_kostant(scene, val))
    report.extend(verify_curvature_commutator(scene, val))
    report.extend(verify_lie_comm(scene, val))
    report.extend(verify_cartan(scene, val))
    report.extend(verify_dhat(scene, val))
    report.extend(verify_jacobi(scene, val))
    report.extend(verify_module(scene, val))
    return report
