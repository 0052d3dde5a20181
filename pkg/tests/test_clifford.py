"""Clifford algebra kernel and the double cover of the special orthogonal group."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spin_g.exactlinalg as xl
from spin_g.clifford import (
    MultiVector,
    Signature,
    SpinElement,
    blades_lex,
    boost_point,
    eta_matrix,
    exp_bivector,
    indices_mask,
    is_spin_element,
    mask_indices,
    plane_rotor,
    rotation_point,
    vector_rep,
)
from spin_g.scalars import PI, Scalar

from conftest import random_unit_rotor

SIGS = [Signature(2, 0), Signature(3, 0), Signature(1, 1), Signature(2, 1), Signature(1, 3)]


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature(0, 0)
    with pytest.raises(ValueError):
        Signature(-1, 2)
    assert Signature(1, 3).eta_diag == (1, -1, -1, -1)


def test_mask_round_trip():
    for mask in range(32):
        assert indices_mask(mask_indices(mask)) == mask


def test_blade_order_is_lexicographic_by_index_tuple():
    n = 3
    tuples = [mask_indices(m) for m in blades_lex(n)]
    assert tuples == sorted(tuples)
    assert tuples[0] == ()


@pytest.mark.parametrize("sig", SIGS, ids=str)
def test_generator_relations(sig):
    one = MultiVector.scalar(sig, 1)
    for i in range(1, sig.n + 1):
        for j in range(1, sig.n + 1):
            ei = MultiVector.basis_vector(sig, i)
            ej = MultiVector.basis_vector(sig, j)
            anti = ei * ej + ej * ei
            expected = one * (2 * sig.eta(i)) if i == j else MultiVector(sig)
            assert anti == expected


class TestMultiVectorRing:
    sig = Signature(2, 1)

    def rand_mv(self, rng, max_coeffs=4):
        coeffs = {}
        for _ in range(rng.randrange(1, max_coeffs + 1)):
            mask = rng.randrange(2 ** self.sig.n)
            coeffs[mask] = Fraction(rng.randrange(-5, 6), rng.randrange(1, 4))
        return MultiVector(self.sig, coeffs)

    def test_associativity_and_distributivity(self):
        rng = random.Random(7)
        for _ in range(60):
            a, b, c = (self.rand_mv(rng) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    def test_reverse_antiautomorphism(self):
        rng = random.Random(8)
        for _ in range(60):
            a, b = self.rand_mv(rng), self.rand_mv(rng)
            assert (a * b).reverse() == b.reverse() * a.reverse()

    def test_grade_projections_sum_to_identity(self):
        rng = random.Random(9)
        for _ in range(20):
            a = self.rand_mv(rng)
            total = MultiVector(self.sig)
            for k in range(self.sig.n + 1):
                total = total + a.grade_projection(k)
            assert total == a

    def test_scalar_extraction(self):
        a = MultiVector(self.sig, {0: Fraction(5, 2), 3: 1})
        assert a.scalar_coeff() == Fraction(5, 2)
        assert a.coeff((1, 2)) == 1


class TestSpinElement:
    def test_rejects_nonunit(self):
        sig = Signature(2, 0)
        with pytest.raises(ValueError, match="norm"):
            SpinElement(MultiVector.scalar(sig, 2))

    def test_rejects_odd_grades(self):
        sig = Signature(2, 0)
        with pytest.raises(ValueError, match="odd"):
            SpinElement(MultiVector.basis_vector(sig, 1))

    def test_membership_diagnostics(self):
        sig = Signature(2, 0)
        ok, problems = is_spin_element(MultiVector.scalar(sig, 1))
        assert ok and not problems
        ok, problems = is_spin_element(MultiVector.scalar(sig, 3))
        assert not ok and problems

    def test_rotor_inverse_is_reverse(self):
        sig = Signature(3, 0)
        c, s = rotation_point(Fraction(2, 5))
        r = plane_rotor(sig, 1, 3, c, s)
        prod = r * r.inverse()
        assert prod.mv == MultiVector.scalar(sig, 1)

    def test_plane_rotor_validates_norm(self):
        sig = Signature(1, 1)
        with pytest.raises(ValueError, match="c\\^2 - s\\^2"):
            plane_rotor(sig, 1, 2, Fraction(1), Fraction(1))
        c, s = boost_point(Fraction(1, 3))
        plane_rotor(sig, 1, 2, c, s)  # boost plane accepts the hyperbola point


class TestVectorRep:
    def test_rotation_oracle(self):
        # conjugation by c + s e1e2 rotates the 12-plane by the double angle
        sig = Signature(2, 0)
        c, s = rotation_point(Fraction(1, 2))
        R = vector_rep(plane_rotor(sig, 1, 2, c, s))
        cc, ss = c * c - s * s, 2 * c * s  # double-angle point
        assert R[0][0] == cc and R[1][0] == -ss
        assert R[0][1] == ss and R[1][1] == cc

    def test_boost_oracle(self):
        sig = Signature(1, 1)
        c, s = boost_point(Fraction(1, 3))
        R = vector_rep(plane_rotor(sig, 1, 2, c, s))
        cc, ss = c * c + s * s, 2 * c * s
        assert R[0][0] == cc and R[1][0] == -ss
        assert R[0][1] == -ss and R[1][1] == cc

    def test_morphism_orthogonality_det(self):
        rng = random.Random(31)
        for sig in SIGS:
            eta = eta_matrix(sig)
            for _ in range(25):
                a = random_unit_rotor(sig, rng)
                b = random_unit_rotor(sig, rng)
                Ra, Rb, Rab = vector_rep(a), vector_rep(b), vector_rep(a * b)
                assert xl.mat_eq(Rab, xl.mat_mul(Ra, Rb))
                assert xl.mat_eq(xl.mat_mul(xl.transpose(Ra), xl.mat_mul(eta, Ra)), eta)
                assert xl.det(Ra) == 1

    def test_center_maps_to_identity(self):
        for sig in SIGS:
            minus = SpinElement(MultiVector.scalar(sig, -1))
            assert xl.mat_eq(vector_rep(minus), xl.identity(sig.n, Scalar.of(1), Scalar()))

    def test_two_to_one(self):
        rng = random.Random(32)
        sig = Signature(3, 0)
        for _ in range(20):
            a = random_unit_rotor(sig, rng)
            assert a != -a
            assert xl.mat_eq(vector_rep(a), vector_rep(-a))


class TestExpBivector:
    def test_zero(self):
        sig = Signature(2, 0)
        assert exp_bivector(MultiVector(sig)).mv == MultiVector.scalar(sig, 1)

    def test_rejects_mixed_grades(self):
        sig = Signature(2, 0)
        with pytest.raises(ValueError, match="grade-2"):
            exp_bivector(MultiVector.scalar(sig, 1))

    def test_null_plane_closed_form(self):
        # e1 wedge (e2 + e3) with e3 timelike: the second factor is null
        sig = Signature(2, 1)
        B = MultiVector(sig, {indices_mask((1, 2)): 1, indices_mask((1, 3)): 1})
        assert (B * B).is_zero()
        r = exp_bivector(B)
        assert r.norm_defect_bound == 0.0
        assert r.mv == MultiVector.scalar(sig, 1) + B

    def test_rotation_plane_exact_at_pi_over_6(self):
        sig = Signature(2, 0)
        B = MultiVector(sig, {indices_mask((1, 2)): 1}) * (PI / 6)
        r = exp_bivector(B)
        assert r.norm_defect_bound == 0.0
        R = vector_rep(r)
        # rotation by the double angle, orientation fixed by the conjugation
        assert R[0][0] == Fraction(1, 2)
        assert R[1][0] == -(Scalar.sqrt_rational(3) / 2)

    def test_boost_falls_to_certified_series(self):
        sig = Signature(1, 1)
        B = MultiVector(sig, {indices_mask((1, 2)): Fraction(1, 2)})
        r = exp_bivector(B)
        assert 0 < r.norm_defect_bound < 1e-20
        R = vector_rep(r)
        import math

        assert float(R[0][0]) == pytest.approx(math.cosh(1.0), abs=1e-12)

    def test_series_group_law_within_bound(self):
        sig = Signature(1, 1)
        B = MultiVector(sig, {indices_mask((1, 2)): Fraction(1, 4)})
        r1 = exp_bivector(B)
        r2 = exp_bivector(B + B)
        prod = r1 * r1
        diff = prod.mv - r2.mv
        assert max((abs(v) for v in diff.to_float().values()), default=0.0) < 1e-15
