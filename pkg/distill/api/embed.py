"""
Embedding of rational linear dynamical systems into ergodic Markov chains.

With Q = [I; -1^T] and [s Q]^-1 = [1^T; Q'], the chain
M = s 1^T + rho Q A Q' started at mu = s + eta Q v satisfies
M^n mu = s + eta rho^n Q A^n v.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
from distill.utils.conf_reader import config_man
from .automata import Letter, MullerAutomaton, rename
from .model import HomogeneityError, InvariantError
from .ratlin import (
    RatMatrix,
    Vector,
    hstack,
    inf_norm,
    inverse,
    is_zero_vector,
    outer,
    rational,
    vec_add,
    vec_scale,
    vstack,
    zero_vector,
)
from .reduce import StochasticInstance, letter_of
from .semialg import (
    And,
    Atom,
    MultiPoly,
    SemialgebraicSet,
    affine_preimage,
    is_s_homogeneous,
    non_homogeneous_atoms,
)
from .spectra import stochastic_violations

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LdsInstance:
    A: RatMatrix
    v: Vector
    targets: Tuple[SemialgebraicSet, ...]
    spec: MullerAutomaton

    @property
    def k(self) -> int:
        return self.A.rows

    def validate(self) -> None:
        if not self.A.is_square:
            raise InvariantError(f"update matrix is {self.A.rows}x{self.A.cols}, not square")
        if len(self.v) != self.k:
            raise InvariantError(f"initial vector has length {len(self.v)}, expected {self.k}")

        for i, t in enumerate(self.targets):
            if t.nvars != self.k:
                raise InvariantError(f"target {i} has {t.nvars} variables, expected {self.k}")

        if self.spec.n_targets != len(self.targets):
            raise InvariantError(
                f"automaton reads {self.spec.n_targets} targets, instance has {len(self.targets)}"
            )

    def trajectory(self, steps: int) -> List[Vector]:
        out = []
        x = tuple(self.v)
        for _ in range(steps):
            out.append(x)
            x = self.A @ x

        return out

    def letters(self, steps: int) -> List[Letter]:
        return [letter_of(self.targets, x) for x in self.trajectory(steps)]


@dataclass(frozen=True)
class Embedding:
    s: Vector
    M: RatMatrix
    mu: Vector
    eta: Fraction
    rho: Fraction
    Q: RatMatrix
    Qp: RatMatrix

    def expected(self, n: int, power: Vector) -> Vector:
        """s + eta rho^n Q A^n v, given power = A^n v"""
        return vec_add(self.s, vec_scale(self.eta * self.rho**n, self.Q @ power))

    def to_data(self) -> dict:
        return {
            "stationary": [str(x) for x in self.s],
            "eta": str(self.eta),
            "rho": str(self.rho),
            "Qp": self.Qp.to_strings(),
        }


def uniform(n: int) -> Vector:
    return tuple(Fraction(1, n) for _ in range(n))


def _max_entry(m: RatMatrix) -> Fraction:
    return max((abs(x) for row in m.entries for x in row), default=Fraction(0))


def embed_lds(
    s: Sequence[object], A: RatMatrix, v: Sequence[object], scale: bool = True
) -> Embedding:
    """
    Build an ergodic chain whose trajectory carries a scaled copy of the
    orbit of v under A.

    With scale=False rho stays 1, which needs every entry of Q A Q' to be
    smaller in magnitude than every entry of s.
    """

    s = tuple(rational(x) for x in s)
    v = tuple(rational(x) for x in v)
    k = A.rows
    if not A.is_square:
        raise InvariantError(f"update matrix is {A.rows}x{A.cols}, not square")
    if len(s) != k + 1:
        raise InvariantError(f"stationary vector has length {len(s)}, expected {k + 1}")
    if len(v) != k:
        raise InvariantError(f"initial vector has length {len(v)}, expected {k}")
    if any(x <= 0 for x in s) or sum(s, Fraction(0)) != 1:
        raise InvariantError("stationary vector must be a strictly positive distribution")

    Q = vstack(RatMatrix.identity(k), RatMatrix([[-1] * k], k))
    R_inv = inverse(hstack(RatMatrix.column_vector(s), Q))
    if R_inv is None:
        raise InvariantError("[s Q] is singular")
    Qp = R_inv.take_rows(range(1, k + 1))

    smallest = min(s)
    Qv = Q @ v
    eta = smallest / (2 * inf_norm(Qv)) if not is_zero_vector(Qv) else Fraction(1)

    QAQp = Q @ A @ Qp
    largest = _max_entry(QAQp)
    if not scale:
        if largest >= smallest:
            raise InvariantError(
                f"entries of Q A Q' reach {largest}, not below the smallest stationary entry {smallest}"
            )
        rho = Fraction(1)
    elif largest:
        rho = min(Fraction(1), smallest / (2 * largest))
    else:
        rho = Fraction(1)

    M = outer(s, (Fraction(1),) * (k + 1)) + QAQp.scale(rho)
    mu = vec_add(s, vec_scale(eta, Qv))
    emb = Embedding(s, M, mu, eta, rho, Q, Qp)
    check_embedding(emb, A, v)

    log.info("embedded %d-dimensional system: eta=%s, rho=%s", k, eta, rho)
    return emb


def check_embedding(emb: Embedding, A: RatMatrix, v: Sequence[Fraction], steps: Optional[int] = None) -> None:
    problems = stochastic_violations(emb.M)
    if problems:
        raise InvariantError("embedded chain is not column-stochastic: " + "; ".join(problems))
    if any(x <= 0 for row in emb.M.entries for x in row):
        raise InvariantError("embedded chain has a non-positive entry")
    if any(x < 0 for x in emb.mu) or sum(emb.mu, Fraction(0)) != 1:
        raise InvariantError("embedded initial vector is not a distribution")

    steps = steps if steps is not None else config_man.get("EMBED_CHECK_STEPS")
    x = emb.mu
    power = tuple(v)
    for n in range(steps + 1):
        if x != emb.expected(n, power):
            raise InvariantError(f"trajectory identity fails at step {n}")
        x = emb.M @ x
        power = A @ power


def homogeneity_offenders(targets: Sequence[SemialgebraicSet]) -> List[str]:
    offenders = []
    for i, t in enumerate(targets):
        for atom in non_homogeneous_atoms(t, zero_vector(t.nvars)):
            offenders.append(f"target {i}: {atom}")

    return offenders


def embed_instance(
    lds: LdsInstance, s: Optional[Sequence[object]] = None, scale: bool = True
) -> StochasticInstance:
    return embed_with_embedding(lds, s, scale)[0]


def embed_with_embedding(
    lds: LdsInstance, s: Optional[Sequence[object]] = None, scale: bool = True
) -> Tuple[StochasticInstance, Embedding]:
    """
    Markov chain instance whose characteristic word equals that of lds,
    together with the embedding it was built from.

    Target i becomes {y : 1^T (y - s) = 0 and Q'(y - s) in T_i}.
    """

    lds.validate()
    offenders = homogeneity_offenders(lds.targets)
    if offenders:
        raise HomogeneityError(offenders)

    k = lds.k
    s = uniform(k + 1) if s is None else tuple(rational(x) for x in s)
    emb = embed_lds(s, lds.A, lds.v, scale)

    shift = tuple(-x for x in emb.Qp @ s)
    on_simplex = Atom(MultiPoly.linear([1] * (k + 1), -1), "=")
    targets = []
    for i, t in enumerate(lds.targets):
        pre = affine_preimage(t, emb.Qp, shift)
        image = SemialgebraicSet(k + 1, And((on_simplex, pre.tree)))
        if not is_s_homogeneous(image, s):
            raise InvariantError(f"embedded target {i} is not s-homogeneous")
        targets.append(image)

    spec = rename(lds.spec, range(lds.spec.alphabet_size))
    inst = StochasticInstance(emb.M, emb.mu, tuple(targets), spec)
    inst.validate()
    return inst, emb
