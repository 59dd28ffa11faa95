import itertools
from fractions import Fraction

import pytest

from cellspaces import (
    ConstructionError,
    FAMeasure,
    FreeAbelianGroup,
    GroupAsSpace,
    PermutationGroup,
    Window,
    affine_dilations,
    affine_space,
    affine_translations,
    build_semidirect_cellspace,
    check_semi_invariance,
    check_transfer_conditions,
    hyperoct_space,
    inverse_pair_witness,
    space_by_name,
    subgroup_sample,
    transfer_invariance_check,
    verify_axioms,
)
from cellspaces.transfer import _FiniteField


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms_exhaustively(q):
    fld = _FiniteField(q)
    els = range(q)
    for a, b in itertools.product(els, repeat=2):
        assert fld.add(a, b) == fld.add(b, a)
        assert fld.mul(a, b) == fld.mul(b, a)
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 1000):
        assert fld.mul(a, fld.add(b, c)) == fld.add(fld.mul(a, b), fld.mul(a, c))
        assert fld.mul(fld.mul(a, b), c) == fld.mul(a, fld.mul(b, c))
    # every nonzero element is invertible
    for a in range(1, q):
        assert any(fld.mul(a, b) == 1 for b in range(1, q))


def test_unsupported_field_order_rejected():
    with pytest.raises(ConstructionError):
        affine_space(6)


@pytest.mark.parametrize("q,expected_order", [(2, 2), (3, 6), (4, 12), (5, 20)])
def test_affine_group_orders(q, expected_order):
    sp = affine_space(q)
    assert len(sp.group.elements()) == expected_order
    assert len(sp.stabilizer) == q - 1
    assert len(sp.cosets()) == q


def test_affine_axioms_pass():
    for q in (3, 5):
        sp = affine_space(q)
        rep = verify_axioms(sp, sp.full_window(), [sp.coset(g) for g in sp.group.ball(2)])
        assert rep.passed, rep.failures()


def test_translations_satisfy_transfer_conditions():
    sp = affine_space(5)
    report = check_transfer_conditions(sp, affine_translations(sp))
    assert report.passed, report.failures()
    assert len(report.witnesses) >= 5
    assert all(h is not None for h in report.witnesses.values())


def test_dilations_fail_transitivity_and_freeness():
    sp = affine_space(5)
    report = check_transfer_conditions(sp, affine_dilations(sp))
    failed = {c.name for c in report.failures()}
    assert "h-action-transitive" in failed
    assert "h-action-free" in failed


def test_inverse_pair_witness_on_affine3():
    sp = affine_space(3)
    H = affine_translations(sp)
    t1 = sp.coset(sp.coord(1))
    h = inverse_pair_witness(sp, t1, H, sp.points())
    # the semi-action adds 1, so the inverse translation subtracts 1
    assert h is not None
    assert sp.left_action(h, 0) == 2


def test_identity_coset_has_identity_witness():
    sp = affine_space(5)
    H = affine_translations(sp)
    h = inverse_pair_witness(sp, sp.coset(sp.group.identity()), H, sp.points())
    assert h == sp.group.identity()


def test_transfer_invariance_exhaustive_on_affine5():
    sp = affine_space(5)
    H = affine_translations(sp)
    mu = FAMeasure.uniform(sp.full_window())
    for c in sp.cosets():
        h = inverse_pair_witness(sp, c, H, sp.points())
        assert h is not None
        assert transfer_invariance_check(sp, mu, c, h).passed


def test_transfer_invariance_detects_wrong_witness():
    sp = affine_space(5)
    mu = FAMeasure.point_mass(sp.full_window(), 0)
    c = sp.coset(sp.coord(1))
    wrong = sp.coord(3)
    verdict = transfer_invariance_check(sp, mu, c, wrong)
    assert not verdict.passed
    assert verdict.witness is not None


def test_lattice_trivial_transfer():
    sp = space_by_name("zd:2")
    g = sp.group
    H = subgroup_sample("all", g, g.positive_generators(), lambda x: True, radius=4, abelian=True)
    w = sp.ball_window(2, 3)
    report = check_transfer_conditions(sp, H, sample=w)
    assert report.passed, report.failures()


def test_hyperoct_space_stabilizer_and_axioms():
    sp = hyperoct_space(2)
    assert len(sp.stabilizer) == 8
    w = sp.ball_window(2, 3)
    rep = verify_axioms(sp, w, [sp.coset(g) for g in sp.group.ball(1)])
    assert rep.passed, rep.failures()


def test_semidirect_builder_requires_total_tau():
    g0 = PermutationGroup(2, [(1, 0)])
    lattice = GroupAsSpace(FreeAbelianGroup(2))
    # table only covers the first lattice generator
    tau = {((0, 1), 0): (1, 0), ((1, 0), 0): (-1, 0)}
    with pytest.raises(ConstructionError):
        build_semidirect_cellspace(lattice, g0, tau)


def test_space_by_name_rejects_unknown():
    with pytest.raises(ConstructionError):
        space_by_name("nope:3")
    with pytest.raises(ConstructionError):
        space_by_name("affine")


def test_uniform_measures_semi_invariant_on_finite_examples():
    for q in (2, 3, 4, 5, 7, 8, 9):
        sp = affine_space(q)
        mu = FAMeasure.uniform(sp.full_window())
        assert check_semi_invariance(sp, mu).passed
