"""JSON scene files: the one on-disk format the command line tool reads.

A scene file carries a signature, an auxiliary group, a representation, and
exactly one of two geometries: a coordinate chart (metric, coframe, gauge
field, Killing fields, sections, test points) or a Klein pair with isotropy
lifts.  Exact quantities are rational strings like "3/2"; chart fields are
infix expressions over x1..xn.  Loading validates everything and raises
SceneFileError with the offending JSON path; load -> serialize -> load is the
identity on models.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .chartcalc import ChartScene
from .clifford import MultiVector, Signature, SpinElement, mask_indices
from .expr import Expr, ParseError, parse_expr, to_source
from .groups import (
    AuxFamily,
    LieElement,
    QuatElement,
    SpinGElement,
    SpinGGroup,
    U1Element,
    family,
)
from .homogeneous import IsotropyLift, KleinPair
from .reps import (
    Representation,
    adjoint_rep,
    charge,
    direct_sum,
    spinor,
    su2_defining,
    tensor_product,
    trivial,
    vector,
)
from .scalars import Scalar

SCHEMA_VERSION = 1


class SceneFileError(ValueError):
    """Malformed or inconsistent scene file; message carries the JSON path."""


def _fail(path: str, msg: str) -> "SceneFileError":
    where = path if path else "top level"
    return SceneFileError(f"at {where}: {msg}")


# ---------------------------------------------------------------------------
# low-level readers
# ---------------------------------------------------------------------------

def _need_obj(x, path: str) -> dict:
    if not isinstance(x, dict):
        raise _fail(path, f"object expected, found {type(x).__name__}")
    return x


def _need_list(x, path: str) -> list:
    if not isinstance(x, list):
        raise _fail(path, f"array expected, found {type(x).__name__}")
    return x


def _get(d: dict, key: str, path: str, required: bool = True, default=None):
    if key in d:
        return d[key]
    if required:
        raise _fail(path, f"missing required key {key!r}")
    return default


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise _fail(path, f"integer expected, found {x!r}")
    return x


def _str(x, path: str) -> str:
    if not isinstance(x, str):
        raise _fail(path, f"string expected, found {x!r}")
    return x


def _frac(x, path: str) -> Fraction:
    """Exact rational: a JSON integer or a string like '-3/2'."""
    if isinstance(x, bool):
        raise _fail(path, f"rational expected, found {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise _fail(
            path, f"bare float {x!r} not accepted here; write an exact string like \"3/2\""
        )
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as e:
            raise _fail(path, f"bad rational {x!r}: {e}") from None
    raise _fail(path, f"rational expected, found {type(x).__name__}")


def _expr(x, coords: Sequence[str], path: str) -> Expr:
    if isinstance(x, bool) or isinstance(x, float):
        raise _fail(path, f"expression string expected, found {x!r}")
    if isinstance(x, int):
        x = str(x)
    if not isinstance(x, str):
        raise _fail(path, f"expression string expected, found {type(x).__name__}")
    try:
        return parse_expr(x, coords)
    except ParseError as e:
        raise _fail(path, f"bad expression {x!r}: {e}") from None


def _frac_matrix(x, rows: int, cols: int, path: str) -> List[List[Fraction]]:
    m = _need_list(x, path)
    if len(m) != rows:
        raise _fail(path, f"{rows} rows expected, found {len(m)}")
    out = []
    for i, row in enumerate(m):
        r = _need_list(row, f"{path}[{i}]")
        if len(r) != cols:
            raise _fail(f"{path}[{i}]", f"{cols} entries expected, found {len(r)}")
        out.append([_frac(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)])
    return out


def _fstr(q: Fraction) -> str:
    return str(q)


# ---------------------------------------------------------------------------
# representation nodes
# ---------------------------------------------------------------------------

_LEAF_KINDS = ("trivial", "vector", "adjoint", "spinor", "charge", "su2_defining")


def _canon_rep_node(node, path: str) -> dict:
    d = _need_obj(node, path)
    kind = _str(_get(d, "kind", path), f"{path}.kind")
    if kind in ("trivial", "vector", "adjoint", "spinor", "su2_defining"):
        return {"kind": kind}
    if kind == "charge":
        return {"kind": "charge", "n": _int(_get(d, "n", path), f"{path}.n")}
    if kind == "tensor_product":
        factors = _need_list(_get(d, "factors", path), f"{path}.factors")
        if len(factors) < 2:
            raise _fail(f"{path}.factors", "at least two factors required")
        return {
            "kind": "tensor_product",
            "factors": [
                _canon_rep_node(f, f"{path}.factors[{i}]") for i, f in enumerate(factors)
            ],
        }
    if kind == "direct_sum":
        summands = _need_list(_get(d, "summands", path), f"{path}.summands")
        if len(summands) < 2:
            raise _fail(f"{path}.summands", "at least two summands required")
        return {
            "kind": "direct_sum",
            "summands": [
                _canon_rep_node(s, f"{path}.summands[{i}]") for i, s in enumerate(summands)
            ],
        }
    raise _fail(f"{path}.kind", f"unknown representation kind {kind!r}")


def build_representation(node: dict, group: SpinGGroup, path: str = "representation") -> Representation:
    kind = node["kind"]
    try:
        if kind == "trivial":
            return trivial(group)
        if kind == "vector":
            return vector(group)
        if kind == "adjoint":
            return adjoint_rep(group)
        if kind == "spinor":
            return spinor(group)
        if kind == "charge":
            return charge(group, node["n"])
        if kind == "su2_defining":
            return su2_defining(group)
        if kind == "tensor_product":
            parts = [
                build_representation(f, group, f"{path}.factors[{i}]")
                for i, f in enumerate(node["factors"])
            ]
            out = parts[0]
            for p in parts[1:]:
                out = tensor_product(out, p)
            return out
        if kind == "direct_sum":
            parts = [
                build_representation(s, group, f"{path}.summands[{i}]")
                for i, s in enumerate(node["summands"])
            ]
            out = parts[0]
            for p in parts[1:]:
                out = direct_sum(out, p)
            return out
    except SceneFileError:
        raise
    except (ValueError, TypeError) as e:
        raise _fail(path, str(e)) from None
    raise _fail(path, f"unknown representation kind {kind!r}")


# ---------------------------------------------------------------------------
# group elements for discrete lifts
# ---------------------------------------------------------------------------

def _parse_blade_key(key: str, n: int, path: str) -> Tuple[int, ...]:
    if key == "":
        return ()
    idx = []
    for ch in key:
        if not ch.isdigit() or ch == "0":
            raise _fail(path, f"blade key {key!r} must be digits 1..{n}")
        idx.append(int(ch))
    if any(i > n for i in idx):
        raise _fail(path, f"blade key {key!r} has an index beyond {n}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise _fail(path, f"blade key {key!r} must be strictly increasing")
    return tuple(idx)


def _spin_from_blades(sig: Signature, blades: dict, path: str) -> SpinElement:
    mv = MultiVector(sig, {})
    for key, val in _need_obj(blades, path).items():
        idx = _parse_blade_key(key, sig.n, f"{path}.{key or 'scalar'}")
        mv = mv + MultiVector.blade(sig, idx, _frac(val, f"{path}.{key or 'scalar'}"))
    try:
        return SpinElement(mv)
    except ValueError as e:
        raise _fail(path, str(e)) from None


def _canon_blades(g: SpinElement) -> Dict[str, str]:
    out = {}
    for mask, c in g.mv.items():
        idx = mask_indices(mask)
        out["".join(str(i) for i in idx)] = _fstr(c.as_fraction())
    return out


def _aux_element(fam: AuxFamily, node, path: str):
    d = _need_obj(node, path)
    try:
        if fam.name == "U1":
            g = U1Element(
                Scalar.of(_frac(_get(d, "c", path), f"{path}.c")),
                Scalar.of(_frac(_get(d, "s", path), f"{path}.s")),
            )
        elif fam.name == "SU2":
            g = QuatElement(
                Scalar.of(_frac(_get(d, "w", path), f"{path}.w")),
                Scalar.of(_frac(_get(d, "x", path), f"{path}.x")),
                Scalar.of(_frac(_get(d, "y", path), f"{path}.y")),
                Scalar.of(_frac(_get(d, "z", path), f"{path}.z")),
            )
        else:
            g = _spin_from_blades(fam.sig, _get(d, "blades", path), f"{path}.blades")
        fam.validate(g)
    except SceneFileError:
        raise
    except (ValueError, TypeError) as e:
        raise _fail(path, str(e)) from None
    return g


def _canon_aux_element(fam: AuxFamily, g) -> dict:
    if fam.name == "U1":
        return {"c": _fstr(g.c.as_fraction()), "s": _fstr(g.s.as_fraction())}
    if fam.name == "SU2":
        return {
            "w": _fstr(g.w.as_fraction()),
            "x": _fstr(g.x.as_fraction()),
            "y": _fstr(g.y.as_fraction()),
            "z": _fstr(g.z.as_fraction()),
        }
    return {"blades": _canon_blades(g)}


# ---------------------------------------------------------------------------
# scene model
# ---------------------------------------------------------------------------

class SceneModel:
    """A loaded, validated scene: constructed objects plus the canonical dict
    the serializer writes back out."""

    def __init__(
        self,
        kind: str,
        name: str,
        sig: Signature,
        aux: AuxFamily,
        rep_node: dict,
        canonical: dict,
        chart: Optional[ChartScene] = None,
        pair: Optional[KleinPair] = None,
        lifts: Optional[List[IsotropyLift]] = None,
        tol: Optional[float] = None,
    ):
        self.kind = kind
        self.name = name
        self.sig = sig
        self.aux = aux
        self.group = SpinGGroup(sig, aux)
        self.rep_node = rep_node
        self.canonical = canonical
        self.chart = chart
        self.pair = pair
        self.lifts = lifts or []
        self.tol = tol
        self._rep: Optional[Representation] = None

    @property
    def representation(self) -> Representation:
        if self._rep is None:
            self._rep = build_representation(self.rep_node, self.group)
        return self._rep

    def to_dict(self) -> dict:
        return self.canonical

    def __eq__(self, other):
        return isinstance(other, SceneModel) and self.canonical == other.canonical

    def __repr__(self):
        return f"SceneModel({self.kind}, {self.name!r})"


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def _reject_duplicate_keys(pairs):
    d = {}
    for k, v in pairs:
        if k in d:
            raise SceneFileError(f"duplicate key {k!r} within one object")
        d[k] = v
    return d


def load_scene_text(text: str) -> SceneModel:
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except SceneFileError:
        raise
    except json.JSONDecodeError as e:
        raise SceneFileError(
            f"not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})"
        ) from None
    top = _need_obj(raw, "")

    version = _int(_get(top, "schema_version", ""), "schema_version")
    if version != SCHEMA_VERSION:
        raise _fail("schema_version", f"unsupported version {version}, expected {SCHEMA_VERSION}")
    name = _str(_get(top, "name", "", required=False, default=""), "name")

    sd = _need_obj(_get(top, "signature", ""), "signature")
    try:
        sig = Signature(_int(_get(sd, "s", "signature"), "signature.s"),
                        _int(_get(sd, "t", "signature"), "signature.t"))
    except ValueError as e:
        raise _fail("signature", str(e)) from None

    ad = _need_obj(_get(top, "aux_group", ""), "aux_group")
    fam_name = _str(_get(ad, "family", "aux_group"), "aux_group.family")
    try:
        aux = family(fam_name)
    except (KeyError, ValueError) as e:
        raise _fail("aux_group.family", str(e)) from None

    rep_node = _canon_rep_node(_get(top, "representation", ""), "representation")
    group = SpinGGroup(sig, aux)
    # representation errors (wrong family, unsupported dimension) surface now
    build_representation(rep_node, group)

    has_chart = "chart_scene" in top
    has_klein = "klein_pair" in top
    if has_chart == has_klein:
        raise _fail("", "exactly one of 'chart_scene' or 'klein_pair' required")

    canonical: dict = {
        "schema_version": SCHEMA_VERSION,
        "signature": {"s": sig.s, "t": sig.t},
        "aux_group": {"family": aux.name},
        "representation": rep_node,
    }
    if name:
        canonical["name"] = name

    if has_chart:
        chart, tol, cdict = _load_chart(
            _need_obj(top["chart_scene"], "chart_scene"), sig, group, rep_node, name
        )
        canonical["chart_scene"] = cdict
        return SceneModel("chart", name, sig, aux, rep_node, canonical, chart=chart, tol=tol)

    pair, lifts, kdict = _load_klein(
        _need_obj(top["klein_pair"], "klein_pair"), sig, group, name
    )
    canonical["klein_pair"] = kdict
    return SceneModel(
        "klein", name, sig, aux, rep_node, canonical, pair=pair, lifts=lifts
    )


def load_scene(path: str) -> SceneModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SceneFileError(f"cannot read {path}: {e.strerror or e}") from None
    return load_scene_text(text)


# -- chart ------------------------------------------------------------------

def _expr_matrix(x, rows: int, cols: int, coords, path: str) -> List[List[Expr]]:
    m = _need_list(x, path)
    if len(m) != rows:
        raise _fail(path, f"{rows} rows expected, found {len(m)}")
    out = []
    for i, row in enumerate(m):
        r = _need_list(row, f"{path}[{i}]")
        if len(r) != cols:
            raise _fail(f"{path}[{i}]", f"{cols} entries expected, found {len(r)}")
        out.append([_expr(v, coords, f"{path}[{i}][{j}]") for j, v in enumerate(r)])
    return out


def _expr_fields(x, length: int, coords, path: str) -> Dict[str, List[Expr]]:
    d = _need_obj(x, path)
    out = {}
    for k, v in d.items():
        row = _need_list(v, f"{path}.{k}")
        if len(row) != length:
            raise _fail(f"{path}.{k}", f"{length} components expected, found {len(row)}")
        out[k] = [_expr(c, coords, f"{path}.{k}[{j}]") for j, c in enumerate(row)]
    return out


def _load_chart(d: dict, sig: Signature, group: SpinGGroup, rep_node: dict, name: str):
    n = sig.n
    coords = [f"x{i + 1}" for i in range(n)]
    h_dim = group.aux.h_dim
    rep = build_representation(rep_node, group)

    metric = _expr_matrix(_get(d, "metric", "chart_scene"), n, n, coords, "chart_scene.metric")
    coframe = _expr_matrix(_get(d, "coframe", "chart_scene"), n, n, coords, "chart_scene.coframe")
    gauge = _expr_matrix(_get(d, "gauge", "chart_scene"), n, h_dim, coords, "chart_scene.gauge")
    killing = _expr_fields(
        _get(d, "killing_fields", "chart_scene"), n, coords, "chart_scene.killing_fields"
    )
    sections = _expr_fields(
        _get(d, "sections", "chart_scene", required=False, default={}),
        rep.dim_W, coords, "chart_scene.sections",
    )
    aux_fields = _expr_fields(
        _get(d, "aux_fields", "chart_scene", required=False, default={}),
        h_dim, coords, "chart_scene.aux_fields",
    )

    pts_raw = _need_list(_get(d, "test_points", "chart_scene"), "chart_scene.test_points")
    if not pts_raw:
        raise _fail("chart_scene.test_points", "at least one test point required")
    points = []
    for i, p in enumerate(pts_raw):
        row = _need_list(p, f"chart_scene.test_points[{i}]")
        if len(row) != n:
            raise _fail(
                f"chart_scene.test_points[{i}]", f"{n} coordinates expected, found {len(row)}"
            )
        for j, c in enumerate(row):
            if isinstance(c, bool) or not isinstance(c, (int, float)):
                raise _fail(
                    f"chart_scene.test_points[{i}][{j}]", f"number expected, found {c!r}"
                )
        points.append([float(c) for c in row])

    tol = _get(d, "tol", "chart_scene", required=False)
    if tol is not None:
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
            raise _fail("chart_scene.tol", f"positive number expected, found {tol!r}")
        tol = float(tol)

    try:
        chart = ChartScene(
            sig,
            rep,
            metric,
            coframe,
            gauge,
            killing,
            sections,
            points,
            aux_fields=aux_fields,
            tol=tol if tol is not None else 1e-8,
            name=name,
        )
    except ValueError as e:
        raise _fail("chart_scene", str(e)) from None

    cdict = {
        "metric": [[to_source(e) for e in row] for row in metric],
        "coframe": [[to_source(e) for e in row] for row in coframe],
        "gauge": [[to_source(e) for e in row] for row in gauge],
        "killing_fields": {k: [to_source(e) for e in v] for k, v in killing.items()},
        "sections": {k: [to_source(e) for e in v] for k, v in sections.items()},
        "test_points": points,
    }
    if aux_fields:
        cdict["aux_fields"] = {k: [to_source(e) for e in v] for k, v in aux_fields.items()}
    if tol is not None:
        cdict["tol"] = tol
    return chart, tol, cdict


# -- klein ------------------------------------------------------------------

def _load_klein(d: dict, sig: Signature, group: SpinGGroup, name: str):
    dim = _int(_get(d, "dim", "klein_pair"), "klein_pair.dim")
    if dim < 1:
        raise _fail("klein_pair.dim", "positive dimension required")

    kraw = _need_list(_get(d, "k_indices", "klein_pair"), "klein_pair.k_indices")
    k_indices = [_int(v, f"klein_pair.k_indices[{i}]") for i, v in enumerate(kraw)]
    dim_m = dim - len(k_indices)

    braw = _need_obj(_get(d, "brackets", "klein_pair"), "klein_pair.brackets")
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for key, row in braw.items():
        kp = f"klein_pair.brackets.{key}"
        parts = key.split(",")
        if len(parts) != 2:
            raise _fail(kp, "key must be 'i,j' with basis indices i and j")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise _fail(kp, "key must be 'i,j' with basis indices i and j") from None
        if not (0 <= i < dim and 0 <= j < dim):
            raise _fail(kp, f"indices must lie in 0..{dim - 1}")
        coeffs = {}
        for lkey, v in _need_obj(row, kp).items():
            try:
                l = int(lkey)
            except ValueError:
                raise _fail(f"{kp}.{lkey}", "component key must be a basis index") from None
            if not 0 <= l < dim:
                raise _fail(f"{kp}.{lkey}", f"index must lie in 0..{dim - 1}")
            coeffs[l] = _frac(v, f"{kp}.{lkey}")
        if (i, j) in brackets or (j, i) in brackets:
            raise _fail(kp, f"bracket ({i},{j}) given twice")
        brackets[(i, j)] = coeffs

    eta = _frac_matrix(_get(d, "eta", "klein_pair"), dim_m, dim_m, "klein_pair.eta")

    gens_raw = _need_list(
        _get(d, "discrete_generators", "klein_pair", required=False, default=[]),
        "klein_pair.discrete_generators",
    )
    gens = [
        _frac_matrix(g, dim_m, dim_m, f"klein_pair.discrete_generators[{i}]")
        for i, g in enumerate(gens_raw)
    ]

    try:
        pair = KleinPair.from_sparse(dim, brackets, k_indices, eta, gens, name=name)
    except ValueError as e:
        raise _fail("klein_pair", str(e)) from None

    lifts_raw = _need_list(
        _get(d, "lifts", "klein_pair", required=False, default=[]), "klein_pair.lifts"
    )
    lifts = []
    lifts_dict = []
    for i, lr in enumerate(lifts_raw):
        lp = f"klein_pair.lifts[{i}]"
        ld = _need_obj(lr, lp)
        lname = _str(_get(ld, "name", lp, required=False, default=f"lift{i}"), f"{lp}.name")
        draw = _need_list(_get(ld, "dlift", lp), f"{lp}.dlift")
        if len(draw) != pair.dim_k:
            raise _fail(f"{lp}.dlift", f"{pair.dim_k} values expected, found {len(draw)}")
        dlift = []
        for z, vr in enumerate(draw):
            vp = f"{lp}.dlift[{z}]"
            vd = _need_obj(vr, vp)
            so = _frac_matrix(_get(vd, "so", vp), dim_m, dim_m, f"{vp}.so")
            araw = _need_list(_get(vd, "aux", vp), f"{vp}.aux")
            if len(araw) != group.aux.h_dim:
                raise _fail(
                    f"{vp}.aux", f"{group.aux.h_dim} coordinates expected, found {len(araw)}"
                )
            aux_coords = tuple(_frac(a, f"{vp}.aux[{j}]") for j, a in enumerate(araw))
            try:
                dlift.append(LieElement(group, so, aux_coords))
            except ValueError as e:
                raise _fail(vp, str(e)) from None
        disc_raw = _need_list(
            _get(ld, "discrete_lifts", lp, required=False, default=[]),
            f"{lp}.discrete_lifts",
        )
        disc = []
        for z, gr in enumerate(disc_raw):
            gp = f"{lp}.discrete_lifts[{z}]"
            gd = _need_obj(gr, gp)
            spin = _spin_from_blades(sig, _get(gd, "spin", gp), f"{gp}.spin")
            auxel = _aux_element(group.aux, _get(gd, "aux", gp), f"{gp}.aux")
            try:
                disc.append(SpinGElement(group, spin, auxel))
            except ValueError as e:
                raise _fail(gp, str(e)) from None
        try:
            lift = IsotropyLift(pair, group, dlift, disc, name=lname)
        except ValueError as e:
            raise _fail(lp, str(e)) from None
        lifts.append(lift)
        lifts_dict.append(_canon_lift(lift))

    kdict = {
        "dim": dim,
        "k_indices": list(k_indices),
        "brackets": _canon_brackets(pair),
        "eta": [[_fstr(v) for v in row] for row in eta],
    }
    if gens:
        kdict["discrete_generators"] = [[[_fstr(v) for v in row] for row in g] for g in gens]
    if lifts_dict:
        kdict["lifts"] = lifts_dict
    return pair, lifts, kdict


def _canon_brackets(pair: KleinPair) -> Dict[str, Dict[str, str]]:
    out: Dict[str, Dict[str, str]] = {}
    for i in range(pair.dim_g):
        for j in range(i + 1, pair.dim_g):
            row = {
                str(l): _fstr(pair.structure[i][j][l])
                for l in range(pair.dim_g)
                if pair.structure[i][j][l]
            }
            if row:
                out[f"{i},{j}"] = row
    return out


def _canon_lift(lift: IsotropyLift) -> dict:
    def fr(x) -> str:
        return _fstr(Scalar.of(x).as_fraction())

    out = {
        "name": lift.name,
        "dlift": [
            {
                "so": [[fr(v) for v in row] for row in el.so],
                "aux": [fr(a) for a in el.aux],
            }
            for el in lift.dlift
        ],
    }
    if lift.discrete_lifts:
        out["discrete_lifts"] = [
            {
                "spin": _canon_blades(g.spin),
                "aux": _canon_aux_element(lift.group.aux, g.aux),
            }
            for g in lift.discrete_lifts
        ]
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def scene_to_text(model: SceneModel) -> str:
    return json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n"


def save_scene(model: SceneModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scene_to_text(model))
