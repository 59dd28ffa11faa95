from fractions import Fraction

import pytest

from cellspaces import (
    ConstructionError,
    FiniteSpace,
    FreeGroup,
    GroupAsSpace,
    IntegrityError,
    PermutationGroup,
    ScopeMismatchError,
    Window,
    affine_space,
    space_by_name,
    verify_axioms,
)


def test_coset_equality_ignores_representative():
    sp = affine_space(3)
    g = sp.group
    t1 = next(e for e in g.elements() if e.payload == (1, 2, 0))
    for g0 in sp.stabilizer:
        assert sp.coset(t1 * g0) == sp.coset(t1)
    assert len(sp.cosets()) == 3


def test_semi_action_is_translation_on_affine():
    sp = affine_space(5)
    # m |> t_b G0 = m + b, independent of the dilation part
    t2 = sp.coord(2)
    for g0 in sp.stabilizer:
        c = sp.coset(t2 * g0)
        for m in range(5):
            assert sp.semi_action(m, c) == (m + 2) % 5


def test_semi_action_is_right_multiplication_on_group_space():
    sp = space_by_name("free:2")
    g = sp.group
    m = g.word([1, 2])
    c = sp.coset(g.word([-1]))
    assert sp.semi_action(m, c) == g.word([1, 2, -1])


def test_window_validation():
    with pytest.raises(ConstructionError):
        Window((1, 2), (1,))
    with pytest.raises(ConstructionError):
        Window((1, 1), (1, 1, 2))


def test_preimage_certification_depends_on_halo():
    sp = space_by_name("free:2")
    g = sp.group
    a = sp.coset(g.word([1]))
    tight = sp.ball_window(2, 2)
    padded = sp.ball_window(2, 3)
    target = [g.word([1, 2])]
    assert sp.preimage(a, target, padded).certified
    # the unique preimage ab a' has length 3 and escapes the tight halo
    res = sp.preimage(a, target, tight)
    assert not res.certified
    assert res.points == ()


def test_preimage_size_respects_stabilizer_bound():
    sp = affine_space(5)
    w = sp.full_window()
    for c in sp.cosets():
        for m in range(5):
            pre = sp.preimage(c, [m], w)
            assert pre.certified
            assert len(pre.points) <= len(sp.stabilizer)


def test_preimage_rejects_points_outside_halo():
    sp = space_by_name("free:2")
    w = sp.ball_window(1, 2)
    far = sp.group.word([1, 2, 1, 2])
    with pytest.raises(ScopeMismatchError):
        sp.preimage(sp.coset(sp.group.identity()), [far], w)


def test_undo_witness_composes_on_free_group():
    sp = space_by_name("free:2")
    g = sp.group
    m = g.word([2, 1])
    c = sp.coset(g.word([1]))
    sample = [sp.coset(x) for x in g.ball(2)]
    w = sp.undo_witness(m, c, sample)
    assert w.payload == (1,)


def test_compose_expansion_bound_and_extension():
    sp = space_by_name("free:2")
    g = sp.group
    E = [sp.coset(x) for x in g.ball(1)]
    Ep = [sp.coset(x) for x in g.ball(1)]
    m = g.word([1, -2])
    composed = sp.compose_expansion(m, E, Ep)
    assert len(composed) <= len(E) * len(Ep)
    assert any(c.is_identity for c in composed)


def test_axiom_suite_passes_on_affine():
    sp = affine_space(3)
    rep = verify_axioms(sp, sp.full_window(), [sp.coset(g) for g in sp.group.ball(2)])
    assert rep.passed, rep.failures()


def test_corrupted_coordinates_fail_with_witness():
    base = affine_space(3)

    class Corrupted(FiniteSpace):
        pass

    coords = {m: base.coord(m) for m in range(3)}
    coords[1], coords[2] = coords[2], coords[1]
    with pytest.raises(ConstructionError):
        # the constructor itself rejects coordinates that miss their point
        Corrupted(
            base.group,
            points=[0, 1, 2],
            action=lambda g, m: g.payload[m],
            m0=0,
            coords=coords,
        )

    # a mutant that lies after construction is caught by the axiom checks
    sp = affine_space(3)
    good = dict(sp._coords)
    sp._coords[1], sp._coords[2] = good[2], good[1]
    rep = verify_axioms(sp, sp.full_window(), [sp.coset(g) for g in sp.group.ball(2)])
    assert not rep.passed
    assert all(c.witness for c in rep.failures())


def test_finite_space_requires_valid_coordinates():
    g = PermutationGroup(3, [(1, 2, 0)])
    with pytest.raises(ConstructionError):
        FiniteSpace(
            g,
            points=[0, 1, 2],
            action=lambda e, m: e.payload[m],
            m0=0,
            coords={0: g.identity(), 1: g.identity(), 2: g.identity()},
        )


def test_semidirect_space_matches_sign_flip_example():
    # G0 = {+-1}, H = Z, tau(-1) = negation: (-1, 3) applied to 4 gives -1
    from cellspaces import (
        FreeAbelianGroup,
        SemidirectProduct,
        build_semidirect_cellspace,
    )

    g0 = PermutationGroup(2, [(1, 0)])
    lattice = GroupAsSpace(FreeAbelianGroup(1))
    tau = {((0, 1), 0): (1,), ((1, 0), 0): (-1,)}
    sp = build_semidirect_cellspace(lattice, g0, tau, name="sign-flip")
    sd = sp.sd
    g = sd.pair(sd.G0.element((1, 0)), sd.H.element((3,)))
    m = lattice.group.element((4,))
    assert sp.left_action(g, m).payload == (-1,)
    assert len(sp.stabilizer) == 2
