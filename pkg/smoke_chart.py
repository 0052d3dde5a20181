"""Scratch driver for chartcalc: golden flat scene, polar chart, and two
curved sphere scenes (the latter pin the curvature cancellation in the
Lie/exterior commutator, which flat scenes cannot see)."""

import time

import numpy as np

from spin_g.clifford import Signature
from spin_g.groups import SpinGGroup, U1Family
from spin_g.reps import charge, spinor, tensor_product, vector
from spin_g.chartcalc import (
    ChartScene,
    a_endo,
    christoffels,
    field_strength,
    full_suite,
    spin_connection,
    validate_scene,
)

sig = Signature(2, 0)
grp = SpinGGroup(sig, U1Family())
rep_v = vector(grp)
rep_s = tensor_product(spinor(grp), charge(grp, 1))

# ---------------------------------------------------------------- golden flat
pts9 = [(x, y) for x in (-1.0, 0.5, 1.0) for y in (-0.75, 0.25, 1.0)]
chart = dict(
    metric=[["1", "0"], ["0", "1"]],
    coframe=[["1", "0"], ["0", "1"]],
    gauge=[["-x2/2"], ["x1/2"]],
    killing_fields={
        "T1": ["1", "0"],
        "T2": ["0", "1"],
        "rot": ["-x2", "x1"],
    },
    test_points=pts9,
)

golden_s = ChartScene(
    sig,
    rep_s,
    sections={"psi": ["sin(x1) + x2", "x1*x2", "cos(x2)", "x1^2 - x2"]},
    name="golden-spinor",
    **chart,
)
golden_v = ChartScene(
    sig,
    rep_v,
    sections={"v": ["x2^2", "sin(x1)"]},
    name="golden-vector",
    **chart,
)

p0 = (0.5, 0.25)
F = field_strength(golden_s, p0)
assert abs(F[0, 1, 0] - 1.0) < 1e-15, F
assert np.max(np.abs(christoffels(golden_s, p0))) == 0.0
assert np.max(np.abs(spin_connection(golden_s, p0))) == 0.0
A = a_endo(golden_s, "rot", p0)
assert np.max(np.abs(A - np.array([[0.0, 1.0], [-1.0, 0.0]]))) < 1e-15, A
assert np.max(np.abs(a_endo(golden_s, "T1", p0))) == 0.0

for scene in (golden_s, golden_v):
    t0 = time.time()
    rep = full_suite(scene)
    dt = time.time() - t0
    print(f"--- {scene.name} ({dt:.1f}s)")
    for line in rep.lines():
        print(" ", line)
    assert rep.ok, f"{scene.name} failed"

# ---------------------------------------------------------------- polar chart
polar = ChartScene(
    sig,
    rep_s,
    metric=[["1", "0"], ["0", "x1^2"]],
    coframe=[["1", "0"], ["0", "x1"]],
    gauge=[["0"], ["0"]],
    killing_fields={
        "Tx": ["cos(x2)", "-sin(x2)/x1"],
        "Ty": ["sin(x2)", "cos(x2)/x1"],
        "rot": ["0", "1"],
    },
    sections={"psi": ["x1*cos(x2)", "x1*sin(x2)", "x1^2", "2 + x1"]},
    test_points=[(r, ph) for r in (0.5, 1.0, 2.0) for ph in (0.3, 1.1, 2.0)],
    name="polar",
)

for (r, ph) in polar.test_points:
    Ga = christoffels(polar, (r, ph))
    assert Ga[1, 0, 1] == 1.0 / r, (r, Ga[1, 0, 1])
    assert Ga[1, 1, 0] == 1.0 / r
    assert Ga[0, 1, 1] == -r
    om = spin_connection(polar, (r, ph))
    assert om[1, 0, 1] == -1.0 and om[1, 1, 0] == 1.0, om
    assert np.max(np.abs(om[0])) == 0.0

t0 = time.time()
rep = full_suite(polar)
print(f"--- polar ({time.time() - t0:.1f}s)")
for line in rep.lines():
    print(" ", line)
assert rep.ok, "polar failed"

# ------------------------------------------------------------- curved sphere
sphere_chart = dict(
    metric=[["1", "0"], ["0", "sin(x1)^2"]],
    coframe=[["1", "0"], ["0", "sin(x1)"]],
    killing_fields={
        "Lx": ["-sin(x2)", "-(cos(x1)/sin(x1))*cos(x2)"],
        "Ly": ["cos(x2)", "-(cos(x1)/sin(x1))*sin(x2)"],
        "Lz": ["0", "1"],
    },
    test_points=[(0.7, 0.4), (1.2, 1.7), (2.1, 3.9), (1.7, 5.0)],
)

sphere_v = ChartScene(
    sig,
    rep_v,
    gauge=[["0"], ["0"]],
    sections={"v": ["sin(x1)*cos(x2)", "cos(x1)"]},
    name="sphere-vector",
    **sphere_chart,
)
sphere_s = ChartScene(
    sig,
    rep_s,
    gauge=[["0"], ["1 - cos(x1)"]],
    sections={"psi": ["sin(x1)", "cos(x1)*sin(x2)", "x1", "2"]},
    name="sphere-spinor-monopole",
    **sphere_chart,
)

# sanity: genuinely curved
Rs = np.abs(
    np.array(
        [
            [sphere_v.riemann[l][k][0][1].ev(sphere_v.env((1.2, 1.7))) for k in (0, 1)]
            for l in (0, 1)
        ]
    )
).max()
assert Rs > 0.1, Rs

for scene in (sphere_v, sphere_s):
    t0 = time.time()
    rep = full_suite(scene)
    dt = time.time() - t0
    print(f"--- {scene.name} ({dt:.1f}s)")
    for line in rep.lines():
        print(" ", line)
    assert rep.ok, f"{scene.name} failed"

print("OK chartcalc")
