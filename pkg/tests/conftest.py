"""Shared fixtures: repo paths, an in-process CLI runner, exact samplers."""
import contextlib
import io
import random
from fractions import Fraction
from pathlib import Path

import pytest

from spin_g.clifford import MultiVector, SpinElement, boost_point, plane_rotor, rotation_point

ROOT = Path(__file__).resolve().parent.parent
SCENES = ROOT / "scenes"
CONTROLS = SCENES / "controls"
GOLDEN_REPORTS = SCENES / "reports"


@pytest.fixture(scope="session")
def scenes_dir():
    return SCENES


def run_cli(args):
    """Drive the CLI entry point in-process; returns (exit code, stdout, stderr)."""
    from spin_g.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main([str(a) for a in args])
        except SystemExit as e:  # argparse usage failures
            code = e.code if isinstance(e.code, int) else 2
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cli():
    return run_cli


def random_unit_rotor(sig, rng, factors=2):
    """Product of exact plane rotors; rational coefficients, unit norm."""
    mv = MultiVector.scalar(sig, 1)
    el = SpinElement(mv)
    if sig.n == 1:
        return el if rng.random() < 0.5 else -el
    for _ in range(factors):
        i = rng.randrange(1, sig.n + 1)
        j = rng.randrange(1, sig.n + 1)
        while j == i:
            j = rng.randrange(1, sig.n + 1)
        i, j = min(i, j), max(i, j)
        t = Fraction(rng.randrange(-7, 8), rng.randrange(1, 6))
        if sig.eta(i) == sig.eta(j):
            c, s = rotation_point(t)
        else:
            if abs(t) == 1:
                t = Fraction(1, 2)
            c, s = boost_point(t)
        el = el * plane_rotor(sig, i, j, c, s)
    return el


def random_unit_quaternion(rng):
    """Exact unit quaternion as a product of three coordinate-plane rotations."""
    from spin_g.groups import QuatElement, _quat_mul_components
    from spin_g.scalars import Scalar

    comps = (Scalar.of(1), Scalar.of(0), Scalar.of(0), Scalar.of(0))
    for axis in (1, 2, 3):
        t = Fraction(rng.randrange(-7, 8), rng.randrange(1, 6))
        c, s = rotation_point(t)
        factor = [Scalar.of(0)] * 4
        factor[0] = Scalar.of(c)
        factor[axis] = Scalar.of(s)
        comps = _quat_mul_components(comps, tuple(factor))
    return QuatElement(*comps)
