from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cellspaces import (
    BackendMismatchError,
    ConstructionError,
    FreeAbelianGroup,
    FreeGroup,
    PermutationGroup,
    SemidirectProduct,
    SignedPermutationGroup,
    hyperoctahedral_tau,
    reduce_word,
)

letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=20)


@given(letters)
def test_reduce_word_is_idempotent(ws):
    once = reduce_word(ws)
    assert reduce_word(once) == once


@given(letters)
def test_reduce_word_has_no_adjacent_inverses(ws):
    w = reduce_word(ws)
    assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))


@given(letters, letters)
def test_free_group_inverse_cancels(ws, vs):
    g = FreeGroup(3)
    a, b = g.word(ws), g.word(vs)
    assert (a * b) * (a * b).inverse() == g.identity()
    assert ((a * b).inverse() == b.inverse() * a.inverse())


def test_free_group_ball_sizes():
    g = FreeGroup(2)
    for r in range(5):
        assert len(g.ball(r)) == 2 * 3**r - 1


def test_free_group_rejects_bad_letters():
    with pytest.raises(ConstructionError):
        FreeGroup(2).word([3])


def test_ball_enumeration_is_deterministic():
    g = FreeGroup(2)
    first = [e.payload for e in g.ball(3)]
    second = [e.payload for e in g.ball(3)]
    assert first == second


def test_permutation_group_s3():
    g = PermutationGroup(3, [(1, 0, 2), (0, 2, 1)])
    els = g.elements()
    assert len(els) == 6
    t = g.element((1, 0, 2))
    assert t * t == g.identity()
    # (p*q)(i) = p[q[i]]: q applied first
    p, q = g.element((1, 0, 2)), g.element((0, 2, 1))
    assert (p * q).payload == tuple(p.payload[q.payload[i]] for i in range(3))


def test_permutation_group_rejects_non_bijection():
    with pytest.raises(ConstructionError):
        PermutationGroup(3, [(0, 0, 1)])


def test_backend_mismatch_raises():
    with pytest.raises(BackendMismatchError):
        FreeGroup(2).word([1]) * FreeAbelianGroup(2).element((1, 0))


def test_signed_permutation_group_order():
    g = SignedPermutationGroup(2)
    assert len(g.elements()) == 8
    for a in g.elements():
        assert a * a.inverse() == g.identity()


def test_signed_permutation_vector_action_is_compatible():
    g = SignedPermutationGroup(3)
    els = g.elements()
    v = (1, 2, 3)
    for a in els[:10]:
        for b in els[:10]:
            assert g.apply_to_vector(a * b, v) == g.apply_to_vector(
                a, g.apply_to_vector(b, v)
            )


def test_free_abelian_group_is_abelian():
    g = FreeAbelianGroup(3)
    a, b = g.element((1, -2, 5)), g.element((0, 7, -1))
    assert a * b == b * a
    assert (a * b).payload == (1, 5, 4)


def _sign_flip_semidirect():
    g0 = PermutationGroup(2, [(1, 0)])  # order-2 group acting by negation
    h = FreeAbelianGroup(1)
    tau = {
        ((0, 1), 0): (1,),
        ((1, 0), 0): (-1,),
    }
    return SemidirectProduct(g0, h, tau)


def test_semidirect_product_and_inverse():
    sd = _sign_flip_semidirect()
    flip = sd.G0.element((1, 0))
    g = sd.pair(flip, sd.H.element((3,)))
    assert (g * g.inverse()) == sd.identity()
    # (flip, 3) * (flip, 5) = (e, 3 + tau(flip)(5)) = (e, -2)
    g2 = sd.pair(flip, sd.H.element((5,)))
    prod = g * g2
    assert prod.payload == ((0, 1), (-2,))


def test_semidirect_rejects_non_homomorphism():
    g0 = PermutationGroup(2, [(1, 0)])
    h = FreeAbelianGroup(1)
    bad = {((0, 1), 0): (1,), ((1, 0), 0): (2,)}
    with pytest.raises(ConstructionError):
        SemidirectProduct(g0, h, bad)


def test_hyperoctahedral_tau_is_total_and_valid():
    g0 = SignedPermutationGroup(2)
    h = FreeAbelianGroup(2)
    tau = hyperoctahedral_tau(g0, h)
    sd = SemidirectProduct(g0, h, tau)
    assert len(tau) == 8 * 2
    # the twist of a translation matches the vector action
    for g in g0.elements():
        got = sd.tau_apply(g.payload, h.element((2, -3)))
        assert got.payload == g0.apply_to_vector(g, (2, -3))
