"""
Reduction of a Markov chain instance to an invertible, contracting linear
dynamical system in three stages:

1. zero eigenvalues: restrict to the image of M^ell after ell steps
2. roots of unity: pass to B^c and read the word in blocks of c letters
3. stationary part: split off the eigenvalue-1 eigenspace and keep the
   decaying remainder, whose orbit stays inside an eps-ball after n0 steps
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
from .automata import Letter, MullerAutomaton, block_letter_map, power_construct, reroot
from .model import Err, InvariantError, Ok, Result, all_ok
from .ratlin import (
    RatMatrix,
    RatPoly,
    Vector,
    charpoly,
    column_space_basis,
    det,
    dot,
    hstack,
    inverse,
    is_zero_vector,
    kernel_basis,
    mat_pow,
    rank,
    solve,
    vec_add,
)
from .semialg import (
    Emptiness,
    SemialgebraicSet,
    affine_preimage,
    ball_intersect,
    emptiness,
    member,
    pull_back_hull,
    syntactic_hull,
)
from .spectra import (
    DecayCertificate,
    analyze,
    decay_bound,
    power_charpoly,
    stochastic_violations,
    validate_stochastic_spectrum,
)

log = logging.getLogger(__name__)


def letter_of(targets: Sequence[SemialgebraicSet], x: Sequence[Fraction]) -> Letter:
    return sum(1 << i for i, t in enumerate(targets) if member(t, x))


def with_hull(t: SemialgebraicSet, hull: Optional[RatMatrix]) -> SemialgebraicSet:
    return SemialgebraicSet(t.nvars, t.tree, hull)


@dataclass(frozen=True)
class StochasticInstance:
    M: RatMatrix
    mu: Vector
    targets: Tuple[SemialgebraicSet, ...]
    spec: MullerAutomaton
    intrinsic_dims: Tuple[Optional[int], ...] = ()

    @property
    def k(self) -> int:
        return self.M.rows

    @property
    def h(self) -> int:
        return len(self.targets)

    def validate(self) -> None:
        problems = stochastic_violations(self.M)
        if problems:
            raise InvariantError("matrix is not column-stochastic: " + "; ".join(problems))

        if len(self.mu) != self.k:
            raise InvariantError(f"initial vector has length {len(self.mu)}, expected {self.k}")
        if any(x < 0 for x in self.mu) or sum(self.mu, Fraction(0)) != 1:
            raise InvariantError("initial vector is not a distribution")

        for i, t in enumerate(self.targets):
            if t.nvars != self.k:
                raise InvariantError(f"target {i} has {t.nvars} variables, expected {self.k}")

        if self.spec.n_targets != self.h:
            raise InvariantError(
                f"automaton reads {self.spec.n_targets} targets, instance has {self.h}"
            )

        if self.intrinsic_dims and len(self.intrinsic_dims) != self.h:
            raise InvariantError("intrinsic_dim needs one entry per target")

    def distribution(self, n: int) -> Vector:
        return mat_pow(self.M, n) @ self.mu

    def trajectory(self, steps: int) -> List[Vector]:
        out = []
        x = self.mu
        for _ in range(steps):
            out.append(x)
            x = self.M @ x

        return out

    def letters(self, steps: int) -> List[Letter]:
        return [letter_of(self.targets, x) for x in self.trajectory(steps)]


#################################
#        ZERO EIGENVALUES       #
#################################


@dataclass(frozen=True)
class Stage1Result:
    source: StochasticInstance
    ell: int
    Q: RatMatrix
    Qp: RatMatrix
    B: RatMatrix
    v1: Vector
    prefix_letters: Tuple[Letter, ...]
    spec1: MullerAutomaton
    targets1: Tuple[SemialgebraicSet, ...]

    @property
    def start(self) -> Vector:
        """B^ell v1, the stage vector at the first retained time step"""
        return mat_pow(self.B, self.ell) @ self.v1


def eliminate_zero(inst: StochasticInstance) -> Stage1Result:
    inst.validate()

    ell = analyze(inst.M).zero_mult
    k = inst.k
    if ell == 0:
        ident = RatMatrix.identity(k)
        log.info("stage 1: no zero eigenvalue")
        return Stage1Result(
            inst, 0, ident, ident, inst.M, tuple(inst.mu), (), inst.spec, tuple(inst.targets)
        )

    power = mat_pow(inst.M, ell)
    P = kernel_basis(power)
    Q, _ = column_space_basis(power)
    if P.cols + Q.cols != k:
        raise InvariantError(
            f"kernel of M^{ell} has dimension {P.cols}, image has {Q.cols}; expected {ell} and {k - ell}"
        )

    R_inv = inverse(hstack(P, Q))
    if R_inv is None:
        raise InvariantError("kernel and image of M^ell do not span the space")

    Qp = R_inv.take_rows(range(P.cols, k))
    B = Qp @ inst.M @ Q
    v1 = Qp @ inst.mu

    prefix = tuple(inst.letters(ell))
    targets1 = tuple(
        with_hull(affine_preimage(t, Q), pull_back_hull(syntactic_hull(t), Q))
        for t in inst.targets
    )

    log.info("stage 1: ell=%d, B is %dx%d", ell, B.rows, B.cols)
    return Stage1Result(inst, ell, Q, Qp, B, v1, prefix, reroot(inst.spec, prefix), targets1)


#################################
#        ROOTS OF UNITY         #
#################################


@dataclass(frozen=True)
class Stage2Result:
    stage1: Stage1Result
    c: int
    M2: RatMatrix
    targets2: Tuple[SemialgebraicSet, ...]
    spec2: MullerAutomaton
    letter_map: Tuple[Tuple[Letter, ...], ...]

    @property
    def h(self) -> int:
        return len(self.stage1.targets1)

    def pack(self, block: Sequence[Letter]) -> Letter:
        """Stage-2 letter of a block of c original letters"""
        return sum(letter << (r * self.h) for r, letter in enumerate(block))

    def unpack(self, letter: Letter) -> Tuple[Letter, ...]:
        return self.letter_map[letter]


def eliminate_unit_roots(s1: Stage1Result) -> Stage2Result:
    if det(s1.B.entries) == 0:
        raise InvariantError("stage matrix B is singular")

    c = analyze(s1.B).period_c
    h = len(s1.targets1)
    if c == 1:
        log.info("stage 2: period 1")
        identity_map = tuple((sigma,) for sigma in range(1 << h))
        return Stage2Result(s1, 1, s1.B, s1.targets1, s1.spec1, identity_map)

    powers = [mat_pow(s1.B, r) for r in range(c)]
    targets2 = []
    for r in range(c):
        for t in s1.targets1:
            hull = pull_back_hull(syntactic_hull(t), powers[r])
            targets2.append(with_hull(affine_preimage(t, powers[r]), hull))

    letter_map = tuple(block_letter_map(h, c))
    spec2 = power_construct(s1.spec1, c, letter_map)
    M2 = s1.B @ powers[c - 1]

    log.info("stage 2: c=%d, %d targets, %d automaton states", c, len(targets2), spec2.n_states)
    return Stage2Result(s1, c, M2, tuple(targets2), spec2, letter_map)


#################################
#        STATIONARY PART        #
#################################


@dataclass(frozen=True)
class DimensionReport:
    target: int
    hull_rank_before: int
    hull_dim_before: int
    hull_rank_after: int
    hull_dim_after: int
    certified: bool
    emptiness: str

    def to_data(self) -> dict:
        return {
            "target": self.target,
            "hull_rank_before": self.hull_rank_before,
            "hull_dim_before": self.hull_dim_before,
            "hull_rank_after": self.hull_rank_after,
            "hull_dim_after": self.hull_dim_after,
            "certified_drop": self.certified,
            "emptiness": self.emptiness,
        }


@dataclass(frozen=True)
class ReductionCertificate:
    ell: int
    c: int
    n0: int
    eps_sq: Fraction
    s: Vector
    prefix_letters: Tuple[Letter, ...]
    dimension_reports: Tuple[DimensionReport, ...]
    dyn_dim: int
    decay: DecayCertificate
    checks: Tuple[Result, ...] = ()

    @property
    def original_shift(self) -> int:
        """Original time of the first letter read by the reduced instance"""
        return self.ell + self.c * self.n0

    def address(self, n: int) -> Tuple[int, int]:
        """(q, r) with n = ell + q*c + r and 0 <= r < c"""
        if n < self.ell:
            raise ValueError(f"time {n} lies before the zero-eigenvalue prefix ends")

        return divmod(n - self.ell, self.c)

    def to_data(self) -> dict:
        return {
            "ell": self.ell,
            "c": self.c,
            "n0": self.n0,
            "eps_sq": str(self.eps_sq),
            "stationary": [str(x) for x in self.s],
            "prefix_letters": list(self.prefix_letters),
            "dimension_reports": [d.to_data() for d in self.dimension_reports],
            "dyn_dim": self.dyn_dim,
            "decay": self.decay.to_data(),
            "clocks": {"stage2_shift": self.n0, "original_shift": self.original_shift},
            "checks": [r.to_data() for r in self.checks],
        }


@dataclass(frozen=True)
class ReducedInstance:
    stage2: Stage2Result
    s: Vector
    P: RatMatrix
    Q3: RatMatrix
    A: RatMatrix
    v: Vector
    eps_sq: Fraction
    n0: int
    targets3: Tuple[SemialgebraicSet, ...]
    spec3: MullerAutomaton
    emptiness: Tuple[Emptiness, ...]
    certificate: ReductionCertificate
    s_in_hull: Tuple[Optional[bool], ...] = field(default=())

    @property
    def stage1(self) -> Stage1Result:
        return self.stage2.stage1

    @property
    def source(self) -> StochasticInstance:
        return self.stage2.stage1.source

    @property
    def dyn_dim(self) -> int:
        return self.A.rows

    @property
    def start(self) -> Vector:
        """A^n0 v, the initial vector of the reduced linear dynamical system"""
        return mat_pow(self.A, self.n0) @ self.v


def _hull_distance_sq(H: RatMatrix, s: Vector) -> Optional[Fraction]:
    """
    Squared distance from s to ker H for H with independent rows, None when
    s lies in the kernel
    """

    Hs = H @ s
    if is_zero_vector(Hs):
        return None

    y = solve(H @ H.T, Hs)
    return dot(Hs, y)


def _frobenius_sq(m: RatMatrix) -> Fraction:
    return sum((x * x for row in m.entries for x in row), Fraction(0))


def charpoly_chain(
    M: RatMatrix, ell: int, B: RatMatrix, c: int, M2: RatMatrix, p_dim: int, A: RatMatrix
) -> List[Result]:
    chi_b = charpoly(B)
    chi_m2 = charpoly(M2)
    x = RatPoly.x()
    checks = []

    name = "zero eigenvalue split"
    if charpoly(M) == x**ell * chi_b:
        checks.append(Ok(name, f"charpoly(M) = x^{ell} charpoly(B)"))
    else:
        checks.append(Err(name, "charpoly(M) differs from x^ell charpoly(B)"))

    name = "power of the stage matrix"
    if c == 1 or chi_m2 == power_charpoly(chi_b, c):
        checks.append(Ok(name, f"charpoly(B^{c}) matches the resultant"))
    else:
        checks.append(Err(name, "charpoly(B^c) differs from Res_x(charpoly(B), x^c - y)"))

    name = "stationary split"
    if (x - 1) ** p_dim * charpoly(A) == chi_m2:
        checks.append(Ok(name, f"charpoly(B^c) = (x - 1)^{p_dim} charpoly(A)"))
    else:
        checks.append(Err(name, "charpoly(B^c) differs from (x - 1)^dim P charpoly(A)"))

    return checks


def eliminate_stationary(s2: Stage2Result, mu1: Optional[Sequence[Fraction]] = None) -> ReducedInstance:
    s1 = s2.stage1
    mu1 = tuple(mu1) if mu1 is not None else s1.start
    M2 = s2.M2
    n = M2.rows

    D = M2 - RatMatrix.identity(n)
    P = kernel_basis(D)
    Q3, _ = column_space_basis(D)
    R_inv = inverse(hstack(P, Q3))
    if R_inv is None:
        raise InvariantError("eigenvalue 1 of the stage matrix is not semisimple")

    p = P.cols
    coords = R_inv @ mu1
    s = P @ coords[:p]
    v = coords[p:]
    Q3p = R_inv.take_rows(range(p, n))
    A = Q3p @ M2 @ Q3

    hulls = [syntactic_hull(t) for t in s2.targets2]
    distances: List[Optional[Fraction]] = []
    for H in hulls:
        distances.append(_hull_distance_sq(H, s) if H.rows else None)

    constraints = [d for d in distances if d is not None]
    if constraints:
        eps_sq = min(constraints) / (2 * max(Fraction(1), _frobenius_sq(Q3)))
    else:
        eps_sq = Fraction(1)

    decay = decay_bound(A, v, eps_sq)
    n0 = decay.n0
    d = A.rows

    targets3 = []
    marks = []
    in_hull: List[Optional[bool]] = []
    reports = []
    for j, (t, H, dist) in enumerate(zip(s2.targets2, hulls, distances)):
        hit = None if not H.rows else dist is None
        hull3 = pull_back_hull(H, Q3) if hit else None
        t3 = with_hull(ball_intersect(affine_preimage(t, Q3, s), eps_sq), hull3)
        mark = emptiness(t3, hit)

        rank_before = H.rows
        rank_after = rank(syntactic_hull(t3)) if not mark.is_empty else d
        reports.append(
            DimensionReport(
                target=j,
                hull_rank_before=rank_before,
                hull_dim_before=n - rank_before,
                hull_rank_after=rank_after,
                hull_dim_after=d - rank_after,
                certified=bool(H.rows) and (d - rank_after) < (n - rank_before),
                emptiness=mark.status,
            )
        )
        targets3.append(t3)
        marks.append(mark)
        in_hull.append(hit)

    source = s1.source
    shift = s1.ell + s2.c * n0
    prefix = tuple(source.letters(shift))
    stage2_letters = [
        s2.pack(prefix[s1.ell + q * s2.c : s1.ell + (q + 1) * s2.c]) for q in range(n0)
    ]
    spec3 = reroot(s2.spec2, stage2_letters)

    certificate = ReductionCertificate(
        ell=s1.ell,
        c=s2.c,
        n0=n0,
        eps_sq=eps_sq,
        s=s,
        prefix_letters=prefix,
        dimension_reports=tuple(reports),
        dyn_dim=d,
        decay=decay,
        checks=tuple(charpoly_chain(source.M, s1.ell, s1.B, s2.c, M2, p, A)),
    )

    log.info("stage 3: dyn_dim=%d, n0=%d, eps^2=%s", d, n0, eps_sq)
    log.debug("stationary point %s", [str(x) for x in s])
    return ReducedInstance(
        stage2=s2,
        s=s,
        P=P,
        Q3=Q3,
        A=A,
        v=v,
        eps_sq=eps_sq,
        n0=n0,
        targets3=tuple(targets3),
        spec3=spec3,
        emptiness=tuple(marks),
        certificate=certificate,
        s_in_hull=tuple(in_hull),
    )


def reduce_full(inst: StochasticInstance) -> ReducedInstance:
    s1 = eliminate_zero(inst)

    spectrum = validate_stochastic_spectrum(inst.M)
    if not all_ok(spectrum):
        failed = "; ".join(f"{r.name}: {r.message}" for r in spectrum if r.is_err())
        raise InvariantError(f"spectral validation failed: {failed}")

    red = eliminate_stationary(eliminate_unit_roots(s1))
    if not all_ok(list(red.certificate.checks)):
        failed = "; ".join(r.name for r in red.certificate.checks if r.is_err())
        raise InvariantError(f"characteristic polynomial chain broken: {failed}")

    return red


def reduced_letter_table(red: ReducedInstance) -> Dict[int, Tuple[int, int]]:
    """Reduced target index -> (original target, block offset)"""
    h = red.stage2.h
    return {r * h + i: (i, r) for r in range(red.stage2.c) for i in range(h)}


def stage_trajectory(red: ReducedInstance, steps: int) -> List[Vector]:
    """A^q (A^n0 v) for q < steps"""
    out = []
    y = red.start
    for _ in range(steps):
        out.append(y)
        y = red.A @ y

    return out


def reconstruct_point(red: ReducedInstance, q: int, r: int) -> Vector:
    """Q B^r (s + Q3 A^q v), the original distribution at time ell + q*c + r"""
    s1 = red.stage1
    x = vec_add(red.s, red.Q3 @ (mat_pow(red.A, q) @ red.v))
    return s1.Q @ (mat_pow(s1.B, r) @ x)
