"""Deterministic check reports for the command line tool.

A report is a flat list of named checks plus a command-specific payload.
Rendering is byte-stable: no timestamps, no environment echoes, fixed float
formatting, sorted JSON keys.  Exact quantities are carried as rational
strings, measured ones as JSON numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .chartcalc import ResidualReport
from .homogeneous import LiftReport

REPORT_VERSION = 1


@dataclass
class CheckRecord:
    name: str
    identity: str
    passed: bool
    exact: bool
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if self.exact:
            body = "exact"
        else:
            body = f"residual {self.residual:.3e} tol {self.tolerance:g}"
        extra = f"  ({self.note})" if self.note else ""
        return f"[{tag}] {self.name}: {body} [{self.identity}]{extra}"

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "identity": self.identity,
            "passed": self.passed,
            "exact": self.exact,
        }
        if not self.exact:
            out["residual"] = self.residual
            out["tolerance"] = self.tolerance
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    command: str
    scene: str
    checks: List[CheckRecord] = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add_exact(self, name: str, passed: bool, note: str = "") -> None:
        self.checks.append(
            CheckRecord(name, _identity_tag(name), passed, True, note=note)
        )

    def add_residual(
        self, name: str, residual: float, tol: float, note: str = ""
    ) -> None:
        self.checks.append(
            CheckRecord(
                name,
                _identity_tag(name),
                residual <= tol,
                False,
                residual=float(residual),
                tolerance=float(tol),
                note=note,
            )
        )

    def extend_residuals(self, rr: ResidualReport) -> None:
        for r in rr.results:
            self.checks.append(
                CheckRecord(
                    r.name,
                    _identity_tag(r.name),
                    r.passed,
                    False,
                    residual=float(r.residual),
                    tolerance=float(r.tol),
                    note=r.note,
                )
            )

    def extend_exact(self, lr: LiftReport, prefix: str = "") -> None:
        for name, okc, detail in lr.conditions:
            label = f"{prefix}{name}" if prefix else name
            self.checks.append(
                CheckRecord(label, _identity_tag(name), okc, True, note=detail)
            )

    def to_text(self) -> str:
        head = [f"spin-g report: {self.command}"]
        if self.scene:
            head.append(f"scene: {self.scene}")
        lines = head + [c.line() for c in self.checks]
        lines.extend(_payload_lines(self.payload))
        lines.append(f"result: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "report_version": REPORT_VERSION,
            "command": self.command,
            "scene": self.scene,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "payload": self.payload,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def frac_str(x) -> str:
    """Exact payload value: Fraction (or exact Scalar) to its plain string."""
    if isinstance(x, Fraction):
        return str(x)
    return str(x.as_fraction())


def _payload_lines(payload: dict, indent: str = "") -> List[str]:
    out = []
    for key in sorted(payload):
        val = payload[key]
        if isinstance(val, dict):
            out.append(f"{indent}{key}:")
            out.extend(_payload_lines(val, indent + "  "))
        elif isinstance(val, list):
            out.append(f"{indent}{key}: {json.dumps(val)}")
        else:
            out.append(f"{indent}{key}: {val}")
    return out


# name -> stable identity slug; prefix rules cover the parameterized names
_EXACT_TAGS = {
    "coframe reproduces the metric at every usable test point": "frame-metric",
    "at least one nondegenerate test point": "frame-metric",
    "symbolic derivatives match central differences on all scene fields": "derivative-crosscheck",
    "Levi-Civita coefficients symmetric in the lower pair": "christoffel-symmetry",
    "spin connection eta-antisymmetric": "connection-antisymmetry",
    "Riemann antisymmetries in both index pairs": "riemann-symmetries",
    "first Bianchi identity": "first-bianchi",
    "spin-connection curvature matches frame-converted Riemann": "curvature-frame-match",
    "covariant Lie derivative matches the coordinate one on vector sections": "kostant-decomposition",
    "Lie derivative decomposition (vector sections)": "kostant-decomposition",
    "derivative commutator reproduces the assembled curvature R + F": "curvature-commutator",
    "Lie/derivative commutator carries the F(X,Y) term": "lie-derivative-commutator",
    "Lie/Lie commutator carries the F(X,Y) term": "lie-lie-commutator",
    "gauge curvature term attains a nonzero value somewhere": "nonzero-witness",
    "Cartan homotopy formula (with vertical A_X term)": "cartan-homotopy",
    "Lie-exterior commutator equals contracted gauge curvature": "lie-exterior-commutator",
    "Lie-contraction commutator equals bracket contraction": "lie-interior-commutator",
    "Lie-Lie commutator on forms carries the F(X,Y) term": "lie-lie-on-forms",
    "square of the covariant exterior derivative is curvature wedge": "exterior-square",
    "gauge Bianchi identity (cyclic derivative of F)": "gauge-bianchi",
    "curvature Bianchi identity (cyclic derivative of R)": "curvature-bianchi",
    "Jacobi identity for the extended bracket (all triples)": "jacobi-extended",
    "cyclic covariant derivative of F on Killing triples": "killing-gauge-bianchi",
    "sections form a module over the extended bracket": "module-property",
    "projection: so-part of each lifted k-vector equals its isotropy matrix": "lift-projection",
    "homomorphism: lifted brackets match on all k-basis pairs": "lift-homomorphism",
    "discrete components: each lift covers its isotropy isometry": "lift-discrete-cover",
    "equivariance: the map intertwines every lifted isotropy generator": "connection-equivariance",
    "torsion: so-parts reproduce the m-component of every bracket": "connection-torsion",
    "discrete invariance: the map commutes with every lifted component": "connection-discrete",
    "solution set computed": "connection-existence",
    "reducibility classified": "lift-reducibility",
    "parity subspaces invariant under all generators": "parity-invariance",
    "even and odd dimensions fill the fiber": "parity-dimensions",
    "every discrete isotropy component preserves the time side": "time-orientability",
}

_PREFIX_TAGS = [
    ("Killing equation for field", "killing-equation"),
    ("conjugacy decision for lifts", "lift-conjugacy"),
]


def _identity_tag(name: str) -> str:
    if name.startswith("[") and "] " in name:
        name = name.split("] ", 1)[1]
    tag = _EXACT_TAGS.get(name)
    if tag:
        return tag
    for prefix, slug in _PREFIX_TAGS:
        if name.startswith(prefix):
            return slug
    return "check"
