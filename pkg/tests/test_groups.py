"""The Spin^G quotient: canonical representatives, covering maps, Lie algebra."""
import random
from fractions import Fraction

import numpy as np
import pytest

import spin_g.exactlinalg as xl
from spin_g.clifford import MultiVector, Signature, SpinElement, plane_rotor, rotation_point, vector_rep
from spin_g.groups import (
    GbarElement,
    LieElement,
    QuatElement,
    SpinGElement,
    SpinGGroup,
    U1Element,
    adjoint,
    aux_family_of,
    canonicalize,
    covering_to_so,
    family,
    lie_basis,
    lie_bracket,
    project_gbar,
    project_so,
    sample_spin_g,
    so_basis_pairs,
    so_coords,
    so_from_coords,
    so_generator,
)
from spin_g.scalars import Scalar

from conftest import random_unit_quaternion

U1_GROUP = SpinGGroup(Signature(2, 0), family("U1"))
SU2_GROUP = SpinGGroup(Signature(3, 0), family("SU2"))
ALL_GROUPS = [
    U1_GROUP,
    SU2_GROUP,
    SpinGGroup(Signature(1, 1), family("Spin2")),
    SpinGGroup(Signature(2, 1), family("Spin3")),
    SpinGGroup(Signature(2, 0), family("Spin4")),
]


def quat_rotation_matrix(q):
    """Ad of a unit quaternion on the pure quaternions, as floats."""
    w, x, y, z = (float(c) for c in q.components())
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


class TestFamilyRegistry:
    def test_names(self):
        for name in ("U1", "SU2", "Spin1", "Spin2", "Spin3", "Spin4"):
            assert family(name).name == name

    def test_unknown_family(self):
        with pytest.raises(KeyError, match="unknown auxiliary family"):
            family("SO3")

    def test_registry_is_singleton(self):
        assert family("SU2") is family("SU2")

    def test_aux_family_of_dispatch(self):
        assert aux_family_of(family("U1").identity()) is family("U1")
        assert aux_family_of(family("SU2").identity()) is family("SU2")
        assert aux_family_of(family("Spin3").identity()) is family("Spin3")
        with pytest.raises(TypeError):
            aux_family_of(object())


class TestCanonicalize:
    def test_identity_pair(self):
        one = SpinElement(MultiVector.scalar(Signature(2, 0), 1))
        assert canonicalize(one, family("U1").identity()) == SpinGElement.identity(U1_GROUP)

    def test_double_flip_collapses(self):
        minus = SpinElement(MultiVector.scalar(Signature(2, 0), -1))
        flipped = canonicalize(minus, family("U1").minus_one())
        assert flipped == SpinGElement.identity(U1_GROUP)

    def test_single_flip_is_central_not_identity(self):
        minus = SpinElement(MultiVector.scalar(Signature(2, 0), -1))
        z = canonicalize(minus, family("U1").identity())
        assert z == SpinGElement.central(U1_GROUP)
        assert z != SpinGElement.identity(U1_GROUP)

    def test_sign_flip_identified_on_samples(self):
        for group in ALL_GROUPS:
            for g in sample_spin_g(group, 12, seed=5):
                flipped = canonicalize(-g.spin, group.aux.negate(g.aux))
                assert flipped == canonicalize(g.spin, g.aux)
                assert flipped == g

    def test_rejects_series_approximants(self):
        from spin_g.clifford import exp_bivector, indices_mask

        sig = Signature(1, 1)
        approx = exp_bivector(MultiVector(sig, {indices_mask((1, 2)): Fraction(1, 3)}))
        assert approx.norm_defect_bound > 0
        with pytest.raises(ValueError, match="exactly unit"):
            SpinGElement(SpinGGroup(sig, family("U1")), approx, family("U1").identity())


class TestGroupLaw:
    def test_product_inverse_identity(self):
        for group in ALL_GROUPS:
            for g in sample_spin_g(group, 8, seed=11):
                assert g * g.inverse() == SpinGElement.identity(group)

    def test_central_squares_to_identity(self):
        for group in ALL_GROUPS:
            z = SpinGElement.central(group)
            assert z * z == SpinGElement.identity(group)

    def test_associativity_on_samples(self):
        for group in ALL_GROUPS[:3]:
            a, b, c = sample_spin_g(group, 3, seed=13)
            assert (a * b) * c == a * (b * c)

    def test_mixed_groups_rejected(self):
        a = SpinGElement.identity(U1_GROUP)
        b = SpinGElement.identity(SU2_GROUP)
        with pytest.raises(ValueError, match="mixed"):
            a * b

    def test_two_injections_commute(self):
        # [a,1]*[1,g] = [1,g]*[a,1] = [a,g]
        rng = random.Random(17)
        c, s = rotation_point(Fraction(1, 3))
        a = plane_rotor(Signature(3, 0), 1, 2, c, s)
        g = family("SU2").sample(rng)
        left = canonicalize(a, family("SU2").identity()) * canonicalize(
            SpinElement(MultiVector.scalar(Signature(3, 0), 1)), g
        )
        right = canonicalize(
            SpinElement(MultiVector.scalar(Signature(3, 0), 1)), g
        ) * canonicalize(a, family("SU2").identity())
        assert left == right == canonicalize(a, g)


class TestProjections:
    def test_project_so_is_covering_map_alias(self):
        for g in sample_spin_g(SU2_GROUP, 4, seed=19):
            assert xl.mat_eq(project_so(g), covering_to_so(g))
            assert xl.mat_eq(project_so(g), vector_rep(g.spin))

    def test_project_so_morphism(self):
        for group in ALL_GROUPS:
            sample = sample_spin_g(group, 10, seed=23)
            for a, b in zip(sample[::2], sample[1::2]):
                assert xl.mat_eq(
                    project_so(a * b), xl.mat_mul(project_so(a), project_so(b))
                )

    def test_project_gbar_morphism(self):
        for group in (U1_GROUP, SU2_GROUP):
            sample = sample_spin_g(group, 10, seed=29)
            fam = group.aux
            for a, b in zip(sample[::2], sample[1::2]):
                prod_class = project_gbar(a * b)
                assert prod_class == GbarElement(fam, fam.mul(a.aux, b.aux))

    def test_joint_kernel_is_the_central_pair(self):
        for group in ALL_GROUPS:
            e = SpinGElement.identity(group)
            z = SpinGElement.central(group)
            gbar_one = GbarElement(group.aux, group.aux.identity())
            eye = xl.identity(group.sig.n, Scalar.of(1), Scalar())
            for k in (e, z):
                assert xl.mat_eq(project_so(k), eye)
                assert project_gbar(k) == gbar_one
            assert e != z
            for g in sample_spin_g(group, 20, seed=31):
                if g in (e, z):
                    continue
                in_kernel = xl.mat_eq(project_so(g), eye) and project_gbar(g) == gbar_one
                assert not in_kernel

    def test_su2_gbar_realizes_rotations(self):
        rng = random.Random(37)
        for _ in range(15):
            q = random_unit_quaternion(rng)
            M = family("SU2").gbar_matrix(q)
            Mf = np.array([[float(c) for c in row] for row in M])
            assert np.max(np.abs(Mf - quat_rotation_matrix(q))) <= 1e-12
            # the matrix view is insensitive to the sign of the representative
            Mneg = family("SU2").gbar_matrix(family("SU2").negate(q))
            assert xl.mat_eq(M, Mneg)


class TestLieAlgebra:
    def test_lie_element_validation(self):
        with pytest.raises(ValueError, match="antisymmetric"):
            LieElement(U1_GROUP, [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]], (Scalar(),))
        with pytest.raises(ValueError, match="shape"):
            LieElement(U1_GROUP, [[Fraction(0)]], (Scalar(),))
        with pytest.raises(ValueError, match="h dimension"):
            LieElement(U1_GROUP, xl.zeros(2, 2), (Scalar(), Scalar()))

    def test_basis_size(self):
        for group in ALL_GROUPS:
            n = group.sig.n
            assert len(lie_basis(group)) == n * (n - 1) // 2 + group.aux.h_dim

    def test_so_coords_round_trip(self):
        sig = Signature(2, 1)
        rng = random.Random(41)
        coords = [Fraction(rng.randrange(-5, 6), rng.randrange(1, 4)) for _ in so_basis_pairs(sig)]
        M = so_from_coords(sig, coords)
        assert [Fraction(c) for c in so_coords(sig, M)] == coords

    def test_bracket_antisymmetry_and_jacobi(self):
        for group in (SU2_GROUP, SpinGGroup(Signature(2, 1), family("Spin3"))):
            basis = lie_basis(group)
            rng = random.Random(43)

            def rand_el():
                out = LieElement.zero(group)
                for b in basis:
                    out = out + b.scale(Fraction(rng.randrange(-3, 4), rng.randrange(1, 3)))
                return out

            for _ in range(10):
                X, Y, Z = rand_el(), rand_el(), rand_el()
                assert lie_bracket(X, Y) == -lie_bracket(Y, X)
                jac = (
                    lie_bracket(X, lie_bracket(Y, Z))
                    + lie_bracket(Y, lie_bracket(Z, X))
                    + lie_bracket(Z, lie_bracket(X, Y))
                )
                assert jac.is_zero()

    def test_so_and_h_parts_commute(self):
        X = LieElement(SU2_GROUP, so_generator(Signature(3, 0), 1, 2), family("SU2").zero_h())
        x = LieElement(SU2_GROUP, xl.zeros(3, 3), (Scalar.of(1), Scalar.of(2), Scalar()))
        assert lie_bracket(X, x).is_zero()

    def test_so3_bracket_oracle(self):
        # the three rotation generators close cyclically
        sig = Signature(3, 0)
        group = SpinGGroup(sig, family("U1"))

        def gen(a, b):
            return LieElement(group, so_generator(sig, a, b), (Scalar(),))

        L12, L13, L23 = gen(1, 2), gen(1, 3), gen(2, 3)
        assert lie_bracket(L12, L13) == -L23
        assert lie_bracket(L12, L23) == L13
        assert lie_bracket(L13, L23) == -L12


class TestAdjoint:
    def test_identity_acts_trivially(self):
        for group in ALL_GROUPS:
            e = SpinGElement.identity(group)
            for v in lie_basis(group):
                assert adjoint(e, v) == v

    def test_representative_sign_drops_out(self):
        for group in (U1_GROUP, SU2_GROUP):
            g = sample_spin_g(group, 1, seed=47)[0]
            z = SpinGElement.central(group)
            for v in lie_basis(group):
                assert adjoint(g, v) == adjoint(g * z, v)

    def test_spin_factor_fixes_aux_directions(self):
        c, s = rotation_point(Fraction(2, 3))
        a = plane_rotor(Signature(3, 0), 1, 2, c, s)
        g = canonicalize(a, family("SU2").identity())
        x = LieElement(SU2_GROUP, xl.zeros(3, 3), (Scalar.of(1), Scalar(), Scalar()))
        assert adjoint(g, x) == x

    def test_su2_aux_adjoint_matches_quaternion_rotation(self):
        rng = random.Random(53)
        one = SpinElement(MultiVector.scalar(Signature(3, 0), 1))
        basis = lie_basis(SU2_GROUP)[-3:]
        for _ in range(20):
            q = random_unit_quaternion(rng)
            g = canonicalize(one, q)
            R = quat_rotation_matrix(q)
            for k, v in enumerate(basis):
                img = adjoint(g, v)
                got = np.array([float(c) for c in img.aux])
                assert np.max(np.abs(got - R[:, k])) <= 1e-12

    def test_spink_aux_adjoint_matches_clifford_conjugation(self):
        fam = family("Spin3")
        group = SpinGGroup(Signature(2, 1), fam)
        rng = random.Random(59)
        one = SpinElement(MultiVector.scalar(Signature(2, 1), 1))
        for _ in range(10):
            aux = fam.sample(rng)
            g = canonicalize(one, aux)
            x = tuple(Fraction(rng.randrange(-3, 4)) for _ in range(fam.h_dim))
            v = LieElement(group, xl.zeros(3, 3), x)
            img = adjoint(g, v)
            conj = aux.mv * fam._to_bivector(v.aux) * aux.mv.reverse()
            assert img.aux == fam._from_bivector(conj)

    def test_adjoint_is_bracket_automorphism(self):
        for group in (SU2_GROUP,):
            g = sample_spin_g(group, 1, seed=61)[0]
            basis = lie_basis(group)
            for v in basis[:3]:
                for w in basis[-3:]:
                    lhs = adjoint(g, lie_bracket(v, w))
                    rhs = lie_bracket(adjoint(g, v), adjoint(g, w))
                    assert lhs == rhs
