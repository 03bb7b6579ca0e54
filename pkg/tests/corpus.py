"""
Seeded generators shared by the property suites
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import List, Optional, Sequence, Tuple

from distill.api.automata import Lasso, MullerAutomaton, MullerFamily
from distill.api.embed import LdsInstance
from distill.api.ratlin import RatMatrix, det, inverse
from distill.api.reduce import StochasticInstance
from distill.api.semialg import (
    RELATIONS,
    And,
    Atom,
    MultiPoly,
    Or,
    SemialgebraicSet,
    atom_set,
)

Rng = random.Random


def threshold(k: int, i: int, value, rel: str) -> SemialgebraicSet:
    """{x : x_i rel value} in k variables"""
    return atom_set(MultiPoly.variable(k, i) - Fraction(value), rel)


def trivial_spec(h: int = 0) -> MullerAutomaton:
    return MullerAutomaton(1, h, 0, ((0,) * (1 << h),), MullerFamily.of([[0]]))


def chain(rows, mu, targets=(), spec: Optional[MullerAutomaton] = None) -> StochasticInstance:
    targets = tuple(targets)
    spec = spec if spec is not None else trivial_spec(len(targets))
    return StochasticInstance(RatMatrix(rows), tuple(Fraction(x) for x in mu), targets, spec)


#################################
#         DISTRIBUTIONS         #
#################################


def unit(n: int, i: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(int(j == i)) for j in range(n))


def distribution(rng: Rng, n: int, support: Optional[Sequence[int]] = None) -> Tuple[Fraction, ...]:
    support = list(range(n)) if support is None else list(support)
    weights = [rng.randint(1, 4) for _ in support]
    total = sum(weights)
    out = [Fraction(0)] * n
    for i, w in zip(support, weights):
        out[i] = Fraction(w, total)

    return tuple(out)


def relabel(columns: Sequence[Sequence[Fraction]], perm: Sequence[int]) -> RatMatrix:
    """The chain with state i renamed to perm[i]"""
    n = len(columns)
    out = [[Fraction(0)] * n for _ in range(n)]
    for j, col in enumerate(columns):
        for i, x in enumerate(col):
            out[perm[i]][perm[j]] = x

    return RatMatrix(out, n)


def _positive_block(rng: Rng, n: int, block: Sequence[int]) -> List[Tuple[Fraction, ...]]:
    while True:
        columns = [distribution(rng, n, block) for _ in block]
        if det([[col[i] for col in columns] for i in block]) != 0:
            return columns


#################################
#            CHAINS             #
#################################


@dataclass(frozen=True)
class Planted:
    M: RatMatrix
    ell: int
    c: int
    dyn_dim: int


def planted_chain(rng: Rng) -> Planted:
    """
    Order 3-6: a cycle of length c, a strictly positive block and ell
    transient states whose columns duplicate a recurrent column (or, for the
    second one, feed the first)
    """

    while True:
        k = rng.randint(3, 6)
        c = rng.choice([1, 2, 3])
        ell = rng.choice([0, 1, 2])
        g = k - c - ell
        if g >= 1:
            break

    cycle = list(range(c))
    block = list(range(c, c + g))
    transient = list(range(c + g, k))

    columns: List[Tuple[Fraction, ...]] = [unit(k, (j + 1) % c) for j in cycle]
    columns += _positive_block(rng, k, block)
    for idx, _ in enumerate(transient):
        if idx == 1 and rng.random() < 0.5:
            columns.append(unit(k, transient[0]))
        else:
            columns.append(columns[rng.randrange(c + g)])

    perm = list(range(k))
    rng.shuffle(perm)
    return Planted(relabel(columns, perm), ell, c, g - 1)


def periodic_chain(rng: Rng) -> Tuple[RatMatrix, int, int]:
    """
    Cycles plus transients feeding them: no eigenvalue strictly inside the
    unit disk other than 0. Returns (M, period, ell)
    """

    while True:
        lengths = [rng.choice([1, 2, 3]) for _ in range(rng.randint(1, 2))]
        if sum(lengths) <= 5:
            break

    r = sum(lengths)
    t = rng.randint(0 if r >= 2 else 1, min(2, 6 - r))
    k = r + t

    columns: List[Tuple[Fraction, ...]] = []
    start = 0
    for length in lengths:
        for j in range(length):
            columns.append(unit(k, start + (j + 1) % length))
        start += length

    for _ in range(t):
        support = rng.sample(range(r), rng.randint(1, r))
        columns.append(distribution(rng, k, sorted(support)))

    perm = list(range(k))
    rng.shuffle(perm)
    return relabel(columns, perm), lcm(*lengths), t


def positive_chain(rng: Rng, k: int) -> RatMatrix:
    return RatMatrix.from_columns([distribution(rng, k) for _ in range(k)], k)


#################################
#           TARGETS             #
#################################


def monomials(k: int, degree: int, exact: bool = False) -> List[Tuple[int, ...]]:
    return [
        e
        for e in product(range(degree + 1), repeat=k)
        if (sum(e) == degree if exact else sum(e) <= degree)
    ]


def random_poly(rng: Rng, k: int, degree: int = 2, homogeneous: bool = False) -> MultiPoly:
    support = monomials(k, degree, exact=homogeneous)
    while True:
        terms = [
            (e, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
            for e in support
            if rng.random() < 0.5
        ]
        p = MultiPoly(k, terms)
        if not p.is_constant():
            return p


def random_target(rng: Rng, k: int, homogeneous: bool = False) -> SemialgebraicSet:
    def atom() -> Atom:
        degree = rng.choice([1, 2])
        return Atom(random_poly(rng, k, degree, homogeneous), rng.choice(RELATIONS))

    shape = rng.random()
    if shape < 0.5:
        tree = atom()
    elif shape < 0.75:
        tree = And((atom(), atom()))
    else:
        tree = Or((atom(), atom()))

    return SemialgebraicSet(k, tree)


def random_automaton(rng: Rng, h: int, max_states: int = 4) -> MullerAutomaton:
    n = rng.randint(1, max_states)
    delta = [[rng.randrange(n) for _ in range(1 << h)] for _ in range(n)]
    family = [[q for q in range(n) if rng.random() < 0.5] for _ in range(rng.randint(1, 3))]
    family = [f for f in family if f] or [[rng.randrange(n)]]
    return MullerAutomaton(n, h, rng.randrange(n), delta, MullerFamily.of(family))


def random_lasso(rng: Rng, alphabet: int, max_length: int) -> Lasso:
    prefix = rng.randint(0, max_length // 2)
    cycle = rng.randint(1, max_length - prefix)
    return Lasso(
        tuple(rng.randrange(alphabet) for _ in range(prefix)),
        tuple(rng.randrange(alphabet) for _ in range(cycle)),
    )


def random_instance(rng: Rng, M: RatMatrix, n_targets: int = 2) -> StochasticInstance:
    k = M.rows
    targets = tuple(random_target(rng, k) for _ in range(n_targets))
    return StochasticInstance(M, distribution(rng, k), targets, random_automaton(rng, n_targets))


#################################
#     LINEAR DYNAMICAL SYSTEMS  #
#################################

SPECTRUM = [Fraction(j, 10) for j in range(-9, 10) if j]


def planted_lds(rng: Rng, k: int, zeros: int = 0) -> Tuple[RatMatrix, List[Fraction]]:
    """A = S D S^-1 with distinct eigenvalues from SPECTRUM and `zeros` zeros"""
    values = rng.sample(SPECTRUM, k - zeros) + [Fraction(0)] * zeros
    rng.shuffle(values)

    S = RatMatrix(
        [[1 if i == j else (rng.choice([-1, 0, 1]) if j > i else 0) for j in range(k)] for i in range(k)],
        k,
    )
    D = RatMatrix([[values[i] if i == j else 0 for j in range(k)] for i in range(k)], k)
    return S @ D @ inverse(S), values


def random_matrix(rng: Rng, rows: int, cols: int) -> RatMatrix:
    return RatMatrix(
        [[Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(cols)] for _ in range(rows)],
        cols,
    )


def random_lds(rng: Rng) -> LdsInstance:
    k = rng.randint(1, 4)
    A = random_matrix(rng, k, k)
    v = tuple(Fraction(rng.randint(-3, 3)) for _ in range(k))
    h = rng.randint(1, 2)
    targets = tuple(random_target(rng, k, homogeneous=True) for _ in range(h))
    return LdsInstance(A, v, targets, random_automaton(rng, h))
