import random
from dataclasses import replace
from fractions import Fraction

import pytest

from corpus import chain, planted_chain, random_instance, threshold
from distill.api.automata import infinitely_often
from distill.api.model import InvariantError
from distill.api.ratlin import RatMatrix, RatPoly, charpoly
from distill.api.reduce import (
    eliminate_stationary,
    eliminate_unit_roots,
    eliminate_zero,
    reconstruct_point,
    reduce_full,
    reduced_letter_table,
    stage_trajectory,
)
from distill.api.semialg import MultiPoly, atom_set, member

F = Fraction
x = RatPoly.x()


def above(value, k=2):
    return threshold(k, 0, value, ">")


#################################
#          VALIDATION           #
#################################


def test_rejects_non_stochastic():
    with pytest.raises(InvariantError):
        chain([[2, 0], [0, 1]], (1, 0)).validate()


def test_rejects_bad_initial_vector(M_c):
    with pytest.raises(InvariantError):
        chain(M_c.entries, ("1/2", "1/4")).validate()
    with pytest.raises(InvariantError):
        chain(M_c.entries, (1, 0, 0)).validate()


def test_rejects_target_and_automaton_shapes(M_c):
    with pytest.raises(InvariantError):
        chain(M_c.entries, (1, 0), [threshold(3, 0, 0, ">")]).validate()
    with pytest.raises(InvariantError):
        chain(M_c.entries, (1, 0), [above(0)], infinitely_often(2, 0)).validate()
    with pytest.raises(InvariantError):
        replace(chain(M_c.entries, (1, 0), [above(0)]), intrinsic_dims=(1, 1)).validate()


def test_trajectory_and_letters(M_c):
    inst = chain(M_c.entries, (1, 0), [above(F(2, 3))])
    assert inst.trajectory(3) == [(1, 0), (F(3, 4), F(1, 4)), (F(5, 8), F(3, 8))]
    assert inst.letters(3) == [1, 1, 0]
    assert inst.distribution(2) == (F(5, 8), F(3, 8))


#################################
#        ZERO EIGENVALUES       #
#################################


def test_stage1_without_zero(M_c):
    s1 = eliminate_zero(chain(M_c.entries, (1, 0)))
    assert s1.ell == 0
    assert s1.B == M_c and s1.Q == RatMatrix.identity(2)
    assert s1.prefix_letters == ()


def test_stage1_rank_one(M_a):
    inst = chain(M_a.entries, (1, 0), [above(F(1, 3))])
    s1 = eliminate_zero(inst)
    assert s1.ell == 1
    assert s1.B == RatMatrix([[1]])
    assert s1.prefix_letters == (1,)
    assert s1.Q @ s1.start == inst.distribution(1)


def test_stage1_M_d(M_d):
    s1 = eliminate_zero(chain(M_d.entries, (1, 0, 0)))
    assert s1.ell == 1
    assert charpoly(s1.B) == x**2 - F(1, 2) * x - F(1, 2)


def test_stage1_absorbing_transient():
    inst = chain([[0, 0], [1, 1]], (1, 0))
    s1 = eliminate_zero(inst)
    assert (s1.ell, s1.B) == (1, RatMatrix([[1]]))
    assert s1.Q @ s1.start == (0, 1)


def test_stage1_respects_the_restriction():
    rng = random.Random(31)
    for _ in range(20):
        planted = planted_chain(rng)
        inst = random_instance(rng, planted.M)
        s1 = eliminate_zero(inst)
        assert s1.ell == planted.ell
        assert inst.M @ s1.Q == s1.Q @ s1.B
        assert charpoly(inst.M) == x**s1.ell * charpoly(s1.B)


#################################
#        ROOTS OF UNITY         #
#################################


def test_stage2_period_one(M_c):
    s2 = eliminate_unit_roots(eliminate_zero(chain(M_c.entries, (1, 0))))
    assert s2.c == 1 and s2.M2 == M_c


def test_stage2_swap(M_b):
    inst = chain(M_b.entries, (1, 0), [above(0)], infinitely_often(1, 0))
    s2 = eliminate_unit_roots(eliminate_zero(inst))
    assert s2.c == 2
    assert s2.M2 == RatMatrix.identity(2)
    assert len(s2.targets2) == 2
    # offset 1 reads the first coordinate after one swap
    assert member(s2.targets2[1], (F(0), F(1)))
    assert not member(s2.targets2[1], (F(1), F(0)))


def test_stage2_letters(M_b):
    s2 = eliminate_unit_roots(eliminate_zero(chain(M_b.entries, (1, 0), [above(0)])))
    assert s2.pack((1, 0)) == 1
    assert s2.pack((0, 1)) == 2
    assert s2.unpack(2) == (0, 1)
    assert all(s2.unpack(s2.pack(block)) == block for block in s2.letter_map)


def test_stage2_singular_stage_matrix(M_c):
    s1 = eliminate_zero(chain(M_c.entries, (1, 0)))
    with pytest.raises(InvariantError):
        eliminate_unit_roots(replace(s1, B=RatMatrix([[1, 0], [0, 0]])))


#################################
#        STATIONARY PART        #
#################################


@pytest.fixture
def reduced_c(M_c):
    return reduce_full(chain(M_c.entries, (1, 0), [above(F(1, 3))]))


def test_stage3_M_c(reduced_c):
    red = reduced_c
    assert red.s == (F(1, 2), F(1, 2))
    assert red.Q3 == RatMatrix([["-1/4"], ["1/4"]])
    assert red.v == (F(-2),)
    assert red.A == RatMatrix([["1/2"]])
    assert (red.eps_sq, red.n0, red.dyn_dim) == (1, 2, 1)
    assert red.start == (F(-1, 2),)
    assert red.certificate.prefix_letters == (1, 1)
    assert red.emptiness[0].is_nonempty


def test_stage3_charpoly_chain(reduced_c):
    assert all(r.is_ok() for r in reduced_c.certificate.checks)
    assert [r.name for r in reduced_c.certificate.checks] == [
        "zero eigenvalue split",
        "power of the stage matrix",
        "stationary split",
    ]


def test_stage3_hull_miss(M_c):
    # x1 = 0 carves out a line the stationary point (1/2, 1/2) misses
    red = reduce_full(chain(M_c.entries, (1, 0), [threshold(2, 0, 0, "=")]))
    assert red.eps_sq == F(1, 8)
    assert red.n0 == 3
    assert red.s_in_hull == (False,)
    assert red.emptiness[0].is_empty and red.emptiness[0].reason == "hull-miss"

    report = red.certificate.dimension_reports[0]
    assert (report.hull_rank_before, report.hull_dim_before) == (1, 1)
    assert (report.hull_rank_after, report.hull_dim_after) == (1, 0)
    assert report.certified


def test_stage3_hull_hit(M_c):
    diagonal = atom_set(MultiPoly.variable(2, 0) - MultiPoly.variable(2, 1), "=")
    red = reduce_full(chain(M_c.entries, (1, 0), [diagonal]))
    assert red.s_in_hull == (True,)
    assert red.eps_sq == 1
    assert not red.emptiness[0].is_empty


def test_stage3_restarts_from_a_given_vector(M_c):
    s2 = eliminate_unit_roots(eliminate_zero(chain(M_c.entries, (1, 0))))
    red = eliminate_stationary(s2, (F(1, 2), F(1, 2)))
    assert red.v == (0,)
    assert red.s == (F(1, 2), F(1, 2))


def test_stage3_swap_is_static(M_b):
    red = reduce_full(chain(M_b.entries, (1, 0), [above(0)]))
    assert (red.certificate.ell, red.certificate.c, red.dyn_dim, red.n0) == (0, 2, 0, 0)
    assert red.s == (1, 0)
    assert reduced_letter_table(red) == {0: (0, 0), 1: (0, 1)}


#################################
#          CERTIFICATE          #
#################################


def test_address(reduced_c, M_a, M_b):
    assert reduced_c.certificate.address(5) == (5, 0)

    red = reduce_full(chain(M_a.entries, (1, 0)))
    with pytest.raises(ValueError):
        red.certificate.address(0)
    assert red.certificate.address(3) == (2, 0)

    swap = reduce_full(chain(M_b.entries, (1, 0)))
    assert swap.certificate.address(5) == (2, 1)


def test_certificate_data(reduced_c):
    data = reduced_c.certificate.to_data()
    assert data["clocks"] == {"stage2_shift": 2, "original_shift": 2}
    assert data["stationary"] == ["1/2", "1/2"]
    assert data["decay"]["n0"] == 2
    assert all(c["ok"] for c in data["checks"])


def test_stage_trajectory(reduced_c):
    assert stage_trajectory(reduced_c, 3) == [(F(-1, 2),), (F(-1, 4),), (F(-1, 8),)]


def test_reconstruct_point(reduced_c):
    inst = reduced_c.source
    for n in range(6):
        assert reconstruct_point(reduced_c, n, 0) == inst.distribution(n)


#################################
#        PLANTED CORPUS         #
#################################


@pytest.fixture(scope="module")
def planted():
    rng = random.Random(37)
    out = []
    for _ in range(20):
        p = planted_chain(rng)
        inst = random_instance(rng, p.M)
        out.append((p, inst, reduce_full(inst)))

    return out


def test_planted_parameters(planted):
    for p, _, red in planted:
        cert = red.certificate
        assert (cert.ell, cert.c, red.dyn_dim) == (p.ell, p.c, p.dyn_dim)
        assert red.Q3.cols == red.dyn_dim
        assert red.P.cols + red.Q3.cols == red.stage2.M2.rows


def test_planted_reconstruction(planted):
    for _, inst, red in planted:
        cert = red.certificate
        for q in range(4):
            for r in range(cert.c):
                n = cert.ell + q * cert.c + r
                assert reconstruct_point(red, q, r) == inst.distribution(n)


def test_planted_orbits_stay_in_the_ball(planted):
    for _, _, red in planted:
        for y in stage_trajectory(red, 20):
            assert sum(t * t for t in y) < red.eps_sq


def test_planted_prefix_matches_simulation(planted):
    for _, inst, red in planted:
        cert = red.certificate
        assert list(cert.prefix_letters) == inst.letters(cert.original_shift)
