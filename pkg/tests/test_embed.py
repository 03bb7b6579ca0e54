import random
from dataclasses import replace
from fractions import Fraction

import pytest

from corpus import planted_lds, random_lds, threshold, trivial_spec
from distill.api.automata import infinitely_often
from distill.api.embed import (
    LdsInstance,
    check_embedding,
    embed_instance,
    embed_lds,
    embed_with_embedding,
    homogeneity_offenders,
    uniform,
)
from distill.api.model import HomogeneityError, InvariantError
from distill.api.ratlin import RatMatrix, charpoly, mat_pow
from distill.api.reduce import reduce_full
from distill.api.semialg import And, Atom, MultiPoly

F = Fraction
HALF = (F(1, 2), F(1, 2))


def positive_lds(targets=None, A=None, v=(1,)) -> LdsInstance:
    targets = (threshold(1, 0, 0, ">"),) if targets is None else targets
    A = RatMatrix([["1/2"]]) if A is None else A
    return LdsInstance(A, tuple(F(x) for x in v), targets, infinitely_often(len(targets), 0))


def test_embed_lds_example(M_c):
    emb = embed_lds(HALF, RatMatrix([["1/2"]]), (1,))
    assert emb.Qp == RatMatrix([["1/2", "-1/2"]])
    assert (emb.eta, emb.rho) == (F(1, 4), 1)
    assert emb.M == M_c
    assert emb.mu == (F(3, 4), F(1, 4))


def test_embed_lds_scales_large_updates(M_c):
    A = RatMatrix([[2]])
    emb = embed_lds(HALF, A, (1,))
    assert emb.rho == F(1, 4)
    assert emb.M == M_c
    with pytest.raises(InvariantError):
        embed_lds(HALF, A, (1,), scale=False)
    assert embed_lds(HALF, RatMatrix([["1/2"]]), (1,), scale=False).rho == 1


def test_trajectory_identity():
    A = RatMatrix([["1/3", "-1/2"], ["1/4", "1/5"]])
    v = (F(2), F(-1))
    emb = embed_lds((F(1, 2), F(1, 3), F(1, 6)), A, v)
    x = emb.mu
    for n in range(10):
        assert x == emb.expected(n, mat_pow(A, n) @ v)
        x = emb.M @ x


def test_zero_initial_vector_stays_stationary():
    emb = embed_lds(HALF, RatMatrix([["1/2"]]), (0,))
    assert emb.eta == 1
    assert emb.mu == HALF
    assert emb.M @ emb.mu == HALF


@pytest.mark.parametrize(
    "s, v",
    [
        ((F(1, 2), F(1, 2), F(0)), (1,)),
        ((F(1, 3), F(1, 3)), (1,)),
        (HALF, (1, 2)),
        ((F(3, 2), F(-1, 2)), (1,)),
    ],
)
def test_embed_lds_rejects(s, v):
    with pytest.raises(InvariantError):
        embed_lds(s, RatMatrix([["1/2"]]), v)


def test_check_embedding_catches_a_wrong_start():
    A = RatMatrix([["1/2"]])
    emb = embed_lds(HALF, A, (1,))
    with pytest.raises(InvariantError):
        check_embedding(replace(emb, mu=HALF), A, (1,))
    with pytest.raises(InvariantError):
        check_embedding(replace(emb, M=RatMatrix([[1, 0], [0, 1]])), A, (1,), steps=3)


def test_embedded_target():
    inst, emb = embed_with_embedding(positive_lds(), HALF)
    y1, y2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    assert inst.targets[0].tree == And(
        (Atom(y1 + y2 - 1, "="), Atom(F(1, 2) * y1 - F(1, 2) * y2, ">"))
    )
    assert inst.targets[0].declared_hull is None
    assert inst.spec == positive_lds().spec
    assert inst.M == emb.M


def test_default_stationary_is_uniform():
    inst = embed_instance(positive_lds())
    assert inst.M.rows == 2
    assert uniform(3) == (F(1, 3),) * 3
    inst.validate()


def test_non_homogeneous_targets_are_refused():
    lds = positive_lds(targets=(threshold(1, 0, 1, ">"),))
    assert homogeneity_offenders(lds.targets) == ["target 0: x1 - 1 > 0"]
    with pytest.raises(HomogeneityError) as info:
        embed_instance(lds)
    assert info.value.exit_code == 4


def test_lds_validation():
    with pytest.raises(InvariantError):
        positive_lds(v=(1, 1)).validate()
    with pytest.raises(InvariantError):
        replace(positive_lds(), A=RatMatrix([[1, 2]])).validate()
    with pytest.raises(InvariantError):
        replace(positive_lds(), spec=trivial_spec(0)).validate()


def test_lds_letters():
    lds = positive_lds(A=RatMatrix([["-1/2"]]))
    assert lds.letters(4) == [1, 0, 1, 0]


#################################
#       RANDOMISED LAWS         #
#################################


def test_embedded_words_match():
    rng = random.Random(41)
    for _ in range(25):
        lds = random_lds(rng)
        inst, emb = embed_with_embedding(lds)
        assert all(x > 0 for row in emb.M.entries for x in row)
        assert all(sum(col) == 1 for col in emb.M.columns())
        assert inst.letters(20) == lds.letters(20)


def test_embed_then_reduce_recovers_the_update():
    rng = random.Random(43)
    for _ in range(10):
        k = rng.randint(1, 3)
        A, _ = planted_lds(rng, k)
        v = tuple(F(rng.randint(-3, 3)) for _ in range(k))
        lds = LdsInstance(A, v, (), trivial_spec(0))
        inst, emb = embed_with_embedding(lds)
        red = reduce_full(inst)
        assert (red.certificate.ell, red.certificate.c) == (0, 1)
        assert charpoly(red.A) == charpoly(A.scale(emb.rho))
