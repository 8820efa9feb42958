from random import Random

import pytest

from conftest import random_hpmap
from qpb.bundle import (
    BundleSpec,
    HPMap,
    canonical_map,
    check_comodule_algebra,
    check_freeness,
    coaction,
    conv_inverse,
    conv_unit,
    inject_base,
    invariants_basis,
    make_product,
    phi_hom,
    psi_apply,
    psi_inverse,
    section_table,
    star,
    synthesize_trivialization,
    validate_trivialization,
)
from qpb.fixtures import fix_nonfree, fix_prod, fix_s3, fix_z2
from qpb.funcs import Func, tensor_identify
from qpb.groups import RightAction, cyclic
from qpb.scalars import ONE, ZERO, Scalar


def test_base_space_orbits():
    b = fix_z2()
    assert b.base.orbits == [[0, 2], [1, 3]]
    assert b.base.reps == [0, 1]
    assert b.base.projection == [0, 1, 0, 1]
    assert fix_s3().base.size == 1
    assert fix_prod().base.size == 2


def test_coaction_support_z2():
    b = fix_z2()
    ind0 = Func.indicator((4,), (0,))
    ca = coaction(b, ind0)
    assert ca.support() == [(0, 0), (2, 1)]


def test_coaction_support_s3():
    b = fix_s3()
    g = b.group
    ind_e = Func.indicator((6,), (g.identity,))
    ca = coaction(b, ind_e)
    assert ca.support() == sorted((p, g.inv(p)) for p in range(6))


def test_coaction_is_multiplicative_pointwise():
    b = fix_prod()
    rng = Random(7)
    f1 = Func((6,), [Scalar(rng.randrange(-3, 4)) for _ in range(6)])
    f2 = Func((6,), [Scalar(rng.randrange(-3, 4)) for _ in range(6)])
    assert coaction(b, f1 * f2) == coaction(b, f1) * coaction(b, f2)


@pytest.mark.parametrize("b", [fix_z2(), fix_s3(), fix_prod(), fix_nonfree()])
def test_comodule_algebra_positive(b):
    assert check_comodule_algebra(b).passed


def test_comodule_algebra_corrupted_action_fails():
    g = cyclic(2)
    act = RightAction(g, [[0, 1], [1, 3], [2, 0], [3, 1]])
    b = BundleSpec(g, act)
    rep = check_comodule_algebra(b)
    assert not rep.passed
    bad = rep.first_failure()
    assert bad.name == "comodule.coassociativity"
    assert bad.witness is not None


def test_canonical_map_values():
    b = fix_z2()
    big = tensor_identify(Func.indicator((4,), (0,)), Func.indicator((4,), (2,)))
    cm = canonical_map(b, big)
    # F(p, q) = ind(p=0)ind(q=2); the image reads F(p, p acted by a)
    assert cm.shape == (4, 2)
    assert cm.support() == [(0, 1)]


def test_freeness_ranks():
    for b, expected, n in ((fix_z2(), 8, 4), (fix_s3(), 36, 6), (fix_prod(), 18, 6)):
        rep = check_freeness(b)
        assert rep.passed
        data = rep["freeness.rank"].data
        assert data["rank"] == expected
        assert data["expected_rank"] == expected
        assert data["source_dim"] == n * n


def test_freeness_failure():
    rep = check_freeness(fix_nonfree())
    assert not rep.passed
    assert rep["freeness.direct"].witness == (0, 1)
    assert rep["freeness.rank"].data["rank"] == 2
    assert rep["freeness.rank"].data["expected_rank"] == 4


def test_invariants_are_orbit_indicators():
    b = fix_z2()
    inv = invariants_basis(b)
    assert inv.dim == 2
    assert inv.contains([ONE, ZERO, ONE, ZERO])
    assert inv.contains([ONE, ONE, ONE, ONE])
    assert not inv.contains([ONE, ZERO, ZERO, ZERO])


def test_invariants_match_coaction_fixed_points():
    # f is invariant exactly when coaction(f) = f tensor 1
    for b in (fix_z2(), fix_prod(), fix_nonfree()):
        n, m = b.total_size, b.group.order
        inv = invariants_basis(b)
        for orbit in b.base.orbits:
            f = Func((n,), [ONE if p in orbit else ZERO for p in range(n)])
            assert coaction(b, f) == tensor_identify(f, Func.ones((m,)))
            assert inv.contains(f.values)
        for p in range(n):
            f = Func.indicator((n,), (p,))
            fixed = coaction(b, f) == tensor_identify(f, Func.ones((m,)))
            assert fixed == inv.contains(f.values)


def test_inject_base():
    b = fix_z2()
    h = Func((2,), [Scalar(3), Scalar(-1)])
    lifted = inject_base(b, h)
    assert lifted.values == [Scalar(3), Scalar(-1), Scalar(3), Scalar(-1)]
    # lifted functions are coaction invariant
    assert invariants_basis(b).contains(lifted.values)


def test_validate_trivialization_positive():
    for b in (fix_z2(), fix_s3(), fix_prod()):
        rep = validate_trivialization(b)
        assert rep.passed


def test_validate_trivialization_section_values():
    rep = validate_trivialization(fix_z2())
    assert rep["trivialization.section"].data == {"section": [0, 1]}


def test_validate_trivialization_absent():
    rep = validate_trivialization(fix_nonfree())
    assert not rep.passed
    assert not rep["trivialization.present"].passed


def test_validate_trivialization_not_equivariant():
    b = fix_z2().with_phi([0, 0, 0, 1])
    rep = validate_trivialization(b)
    assert not rep["trivialization.equivariance"].passed
    p, a = rep["trivialization.equivariance"].witness
    g = b.group
    assert b.phi[b.act(p, a)] != g.table[b.phi[p]][a]


def test_section_table():
    assert section_table(fix_z2()) == [0, 1]
    assert section_table(fix_s3()) == [0]


def test_synthesize_trivialization():
    b = fix_z2()
    bare = BundleSpec(b.group, b.action)
    phi = synthesize_trivialization(bare)
    assert phi == [0, 0, 1, 1]
    assert validate_trivialization(bare.with_phi(phi)).passed


def test_synthesize_requires_free_action():
    with pytest.raises(ValueError, match="not free"):
        synthesize_trivialization(fix_nonfree())


def test_psi_round_trip():
    for b in (fix_z2(), fix_s3(), fix_prod()):
        nb, m, n = b.base.size, b.group.order, b.total_size
        for x in range(nb):
            for a in range(m):
                h = Func.indicator((nb, m), (x, a))
                assert psi_inverse(b, psi_apply(b, h)) == h
        for p in range(n):
            f = Func.indicator((n,), (p,))
            assert psi_apply(b, psi_inverse(b, f)) == f


def test_psi_on_z2_hand_values():
    b = fix_z2()
    # indicator of (x1, g) pulls back to points over x1 with phi(p) = g
    h = Func.indicator((2, 2), (1, 1))
    f = psi_apply(b, h)
    assert f.support() == [(3,)]


def test_star_hand_example():
    g = cyclic(2)
    u = HPMap(g, 1, [Scalar(1), Scalar(2)])
    v = HPMap(g, 1, [Scalar(3), Scalar(5)])
    assert star(u, v).density == [Scalar(13), Scalar(11)]


def test_star_unit_and_associativity_random():
    rng = Random(12)
    b = fix_prod()
    unit = conv_unit(b.group, b.total_size)
    for _ in range(10):
        u = random_hpmap(b.group, b.total_size, rng)
        v = random_hpmap(b.group, b.total_size, rng)
        w = random_hpmap(b.group, b.total_size, rng)
        assert star(unit, u) == u
        assert star(u, unit) == u
        assert star(star(u, v), w) == star(u, star(v, w))


def test_phi_hom_and_inverse():
    for b in (fix_z2(), fix_s3(), fix_prod()):
        ph = phi_hom(b)
        ph_inv = conv_inverse(ph)
        unit = conv_unit(b.group, b.total_size)
        assert star(ph, ph_inv) == unit
        assert star(ph_inv, ph) == unit


def test_conv_inverse_rejects_non_delta():
    g = cyclic(2)
    h = HPMap(g, 1, [Scalar(1), Scalar(1)])
    with pytest.raises(ValueError, match="not a delta table"):
        conv_inverse(h)


def test_phi_coaction_identities_on_basis():
    # applying the coaction to a trivialization image relabels the argument
    for b in (fix_z2(), fix_s3(), fix_prod()):
        g = b.group
        n, m = b.total_size, g.order
        ph = phi_hom(b)
        ph_inv = conv_inverse(ph)
        for c in range(m):
            alpha = Func.indicator((m,), (c,))
            lhs = coaction(b, ph.apply(alpha))
            rhs = Func(
                (n, m),
                [
                    alpha.values[g.table[b.phi[p]][a]]
                    for p in range(n)
                    for a in range(m)
                ],
            )
            assert lhs == rhs
            lhs_inv = coaction(b, ph_inv.apply(alpha))
            rhs_inv = Func(
                (n, m),
                [
                    alpha.values[g.table[g.inv(a)][g.inv(b.phi[p])]]
                    for p in range(n)
                    for a in range(m)
                ],
            )
            assert lhs_inv == rhs_inv


def test_make_product_structure():
    b = make_product(2, cyclic(3))
    assert b.total_size == 6
    assert b.base.size == 2
    assert b.phi == [0, 1, 2, 0, 1, 2]
    assert validate_trivialization(b).passed
    assert check_freeness(b).passed


def test_bundle_spec_rejects_bad_phi():
    b = fix_z2()
    with pytest.raises(ValueError, match="phi has 2 entries"):
        BundleSpec(b.group, b.action, phi=[0, 1])
    with pytest.raises(ValueError, match="out of range"):
        BundleSpec(b.group, b.action, phi=[0, 0, 0, 9])
