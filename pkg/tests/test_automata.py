import random

import pytest

from corpus import random_automaton, random_lasso
from distill.api.automata import (
    Lasso,
    MullerAutomaton,
    MullerFamily,
    always,
    block_letter_map,
    eventually,
    eventually_always,
    flatten,
    infinitely_often,
    infinity_set,
    lasso_accept,
    power_construct,
    rename,
    reroot,
    run,
)


def swap(family=((0, 1),)) -> MullerAutomaton:
    """Two states over one target, every letter switches state"""
    return MullerAutomaton(2, 1, 0, ((1, 1), (0, 0)), MullerFamily.of(family))


def single(family=((0,),)) -> MullerAutomaton:
    return MullerAutomaton(1, 1, 0, ((0, 0),), MullerFamily.of(family))


def test_validation():
    with pytest.raises(ValueError):
        MullerAutomaton(2, 1, 0, ((1,), (0, 0)), MullerFamily.of([[0]]))
    with pytest.raises(ValueError):
        MullerAutomaton(2, 1, 2, ((1, 1), (0, 0)), MullerFamily.of([[0]]))
    with pytest.raises(ValueError):
        MullerAutomaton(2, 1, 0, ((1, 1), (0, 0)), MullerFamily.of([[3]]))
    with pytest.raises(ValueError):
        swap().step(0, 2)


def test_lasso_needs_a_cycle():
    with pytest.raises(ValueError):
        Lasso((1,), ())
    assert Lasso((1, 2), (3,)).unroll(5) == [1, 2, 3, 3, 3]


def test_run():
    assert run(swap(), []) == (0, [0])
    assert run(single(), [1, 0, 1]) == (0, [0, 0, 0, 0])
    assert run(swap(), [0, 1]) == (0, [0, 1, 0])


def test_run_is_deterministic():
    rng = random.Random(1)
    a = random_automaton(rng, 2)
    w = [rng.randrange(4) for _ in range(30)]
    assert run(a, w) == run(a, w)


def test_reroot():
    a = swap()
    assert reroot(a, []) == a
    assert reroot(a, [1]).initial == 1

    rng = random.Random(2)
    for _ in range(50):
        b = random_automaton(rng, 2)
        p = [rng.randrange(4) for _ in range(rng.randint(0, 5))]
        q = [rng.randrange(4) for _ in range(rng.randint(0, 5))]
        assert reroot(reroot(b, p), q) == reroot(b, p + q)


def test_reroot_shifts_acceptance():
    rng = random.Random(3)
    for _ in range(100):
        a = random_automaton(rng, 1)
        p = tuple(rng.randrange(2) for _ in range(rng.randint(0, 6)))
        w = random_lasso(rng, 2, 10)
        assert lasso_accept(reroot(a, p), w) == lasso_accept(a, Lasso(p + w.prefix, w.cycle))


def test_power_construct_swap():
    product = power_construct(swap(), 2, [(0, 0), (1, 0)])
    # (q0, {}) --any letter--> (q0, {q0, q1})
    assert product.n_states == 2
    assert product.delta == ((1, 1), (1, 1))
    assert product.acceptance.traversed == (frozenset(), frozenset({0, 1}))


def test_power_construct_single_state():
    product = power_construct(single(), 3, block_letter_map(1, 3))
    assert product.n_states == 2
    assert all(row == (1,) * 8 for row in product.delta)


def test_power_construct_degenerate_block():
    rng = random.Random(4)
    identity = [(sigma,) for sigma in range(4)]
    for _ in range(50):
        a = random_automaton(rng, 2)
        product = power_construct(a, 1, identity)
        for _ in range(10):
            w = random_lasso(rng, 4, 12)
            assert lasso_accept(product, w) == lasso_accept(a, w)


def test_power_construct_rejects_bad_maps():
    with pytest.raises(ValueError):
        power_construct(swap(), 2, [(0,), (1,)])
    with pytest.raises(ValueError):
        power_construct(swap(), 1, [(0,), (1,), (0,)])


def test_block_letter_map():
    blocks = block_letter_map(2, 2)
    assert len(blocks) == 16
    # bit r*h + i is target i at offset r
    assert blocks[0b0110] == (0b10, 0b01)
    assert block_letter_map(1, 1) == [(0,), (1,)]


def test_rename():
    a = swap()
    assert rename(a, [0, 1]) == a

    rng = random.Random(5)
    for _ in range(30):
        b = random_automaton(rng, 2)
        perm = list(range(4))
        rng.shuffle(perm)
        inverse = [perm.index(i) for i in range(4)]
        assert rename(rename(b, perm), inverse) == b

    two = MullerAutomaton(2, 1, 0, ((0, 1), (1, 1)), MullerFamily.of([[1]]))
    assert rename(two, [1, 0]).delta == ((1, 0), (1, 1))
    with pytest.raises(ValueError):
        rename(two, [0, 0])


def test_lasso_accept():
    loop = single()
    empty = single(family=())
    rng = random.Random(6)
    for _ in range(20):
        w = random_lasso(rng, 2, 8)
        assert lasso_accept(loop, w)
        assert not lasso_accept(empty, w)

    assert infinity_set(swap(), Lasso((), (0,))) == frozenset({0, 1})
    assert lasso_accept(swap(), Lasso((), (0,)))
    assert not lasso_accept(swap(family=[[0]]), Lasso((), (0,)))


@pytest.mark.parametrize(
    "schema, word, expected",
    [
        (eventually, Lasso((0, 0, 1), (0,)), True),
        (eventually, Lasso((), (0,)), False),
        (infinitely_often, Lasso((1,), (0,)), False),
        (infinitely_often, Lasso((), (0, 1)), True),
        (eventually_always, Lasso((0,), (1,)), True),
        (eventually_always, Lasso((), (1, 0)), False),
        (always, Lasso((), (1,)), True),
        (always, Lasso((1, 0), (1,)), False),
    ],
)
def test_schemas(schema, word, expected):
    assert lasso_accept(schema(1, 0), word) == expected


def test_schemas_read_one_bit():
    # target 1 of two: letter 0b10 holds it, 0b01 does not
    a = infinitely_often(2, 1)
    assert lasso_accept(a, Lasso((), (0b10,)))
    assert not lasso_accept(a, Lasso((), (0b01,)))
    with pytest.raises(ValueError):
        eventually(2, 2)


def test_flatten():
    w = Lasso((1,), (2, 3))
    blocks = [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert flatten(w, blocks) == Lasso((0, 1), (1, 0, 1, 1))
