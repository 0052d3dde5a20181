from fractions import Fraction as F

from spin_g.clifford import Signature
from spin_g.groups import LieElement, SpinGGroup, family, lie_basis
from spin_g.homogeneous import (
    ConjugacyResult,
    IsotropyLift,
    KleinPair,
    check_reducibility,
    check_time_orientable,
    conjugacy_check,
    curvature_at_base,
    isotropy_rep,
    solve_nomizu,
    split_curvature,
    verify_lift,
)
from spin_g.scalars import Scalar

# --- S^2 = SU(2)/U(1), charge n lifts --------------------------------------
su2_pair = KleinPair.from_sparse(
    3,
    {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}},
    k_indices=(2,),
    eta=[[1, 0], [0, 1]],
    name="round sphere",
)
assert su2_pair.reductive
rep = isotropy_rep(su2_pair)
assert rep[0] == [[F(0), F(-1)], [F(1), F(0)]], rep

G = SpinGGroup(Signature(2, 0), family("U1"))

def sphere_lift(n):
    so = [[Scalar.of(0), Scalar.of(-1)], [Scalar.of(1), Scalar.of(0)]]
    return IsotropyLift(su2_pair, G, [LieElement(G, so, (F(n, 2),))], name=f"charge {n}")

l1 = sphere_lift(1)
rep1 = verify_lift(l1)
assert rep1.ok, rep1.lines()

sol = solve_nomizu(l1)
assert sol.exists and sol.dimension == 0, (sol.exists, sol.dimension)
nm = sol.particular
assert all(v.is_zero() for v in nm.values_m)

kappa = curvature_at_base(nm, [1, 0, 0], [0, 1, 0])
so_part, aux_part = split_curvature(kappa)
assert so_part[0][1] == 1 and so_part[1][0] == -1, so_part
assert aux_part[0] == F(-1, 2), aux_part
# curvature equals minus the lifted generator
assert (kappa + l1.dlift[0]).is_zero()

sol_tf = solve_nomizu(l1, torsion_free=True)
assert sol_tf.exists and sol_tf.dimension == 0

l2 = sphere_lift(2)
kappa2 = curvature_at_base(solve_nomizu(l2).particular, [1, 0, 0], [0, 1, 0])
assert split_curvature(kappa2)[1][0] == F(-1), "charge scales the gauge curvature"

cc = conjugacy_check(l1, l2)
assert cc.verdict == "NotConjugate", cc
cc_same = conjugacy_check(l1, sphere_lift(1))
assert cc_same.verdict == "Conjugate", cc_same

red = check_reducibility(l1)
assert not red.reducible_to_spin and red.center_is_z2 is False
print("sphere ok; charge-2 curvature aux:", split_curvature(kappa2)[1])

# --- central extension with SU(2) aux: conjugacy witness search ------------
ext_pair = KleinPair.from_sparse(
    3, {}, k_indices=(2,), eta=[[1, 0], [0, 1]], name="abelian ext"
)
H = SpinGGroup(Signature(2, 0), family("SU2"))
zero_so = [[Scalar.of(0), Scalar.of(0)], [Scalar.of(0), Scalar.of(0)]]

def ext_lift(x):
    return IsotropyLift(ext_pair, H, [LieElement(H, zero_so, x)])

li = ext_lift((F(1), F(0), F(0)))
lj = ext_lift((F(0), F(1), F(0)))
l2i = ext_lift((F(2), F(0), F(0)))
assert verify_lift(li).ok
r = conjugacy_check(li, lj)
assert r.verdict == "Conjugate", r
print("witness:", r.witness, "resid", r.residual)
r2 = conjugacy_check(li, l2i)
assert r2.verdict == "NotConjugate", r2
print("invariant gap detail:", r2.detail)

sol_ext = solve_nomizu(li)
# Phi(X) must commute with dlift(Z)=i: so(2) (1) + centralizer of i in su2 (1) per column
assert sol_ext.dimension == 4, sol_ext.dimension

red2 = check_reducibility(li)
assert not red2.conjugation_invariant and not red2.reducible_to_spin
red3 = check_reducibility(ext_lift((F(0), F(0), F(0))))
assert red3.reducible_to_spin, red3.detail

# --- time orientation on a Lorentz pair ------------------------------------
lor_pair = KleinPair.from_sparse(
    2, {}, k_indices=(), eta=[[1, 0], [0, -1]],
    discrete_generators=[[[1, 0], [0, -1]]],
    name="flat line pair, T generator",
)
ot = check_time_orientable(lor_pair)
assert not ot.time_orientable, ot
lor_pair2 = KleinPair.from_sparse(
    2, {}, k_indices=(), eta=[[1, 0], [0, -1]],
    discrete_generators=[[[-1, 0], [0, 1]]],
)
assert check_time_orientable(lor_pair2).time_orientable
print("OK homogeneous")
