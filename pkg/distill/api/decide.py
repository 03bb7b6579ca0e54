import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Literal, Optional, Tuple
from .automata import Lasso, Letter, MullerAutomaton, lasso_accept, run
from .model import Err, InvariantError, Ok, Result, Warn
from .ratlin import Vector, mat_pow, rank, vec_add
from .reduce import (
    ReducedInstance,
    StochasticInstance,
    reconstruct_point,
    reduced_letter_table,
)
from .semialg import affine_preimage, constant_truth, hull_dimension, member, syntactic_hull

log = logging.getLogger(__name__)

TAME_NOTE = "decidable in principle: hand the reduced instance to an external procedure"
OPEN_NOTE = "outside the decidable fragment: reduced instance only"
MLD_LIMIT = 4
TAME_DYN_LIMIT = 3


#################################
#            ORACLE             #
#################################


def bounded_check(inst: StochasticInstance, horizon: int) -> Tuple[List[Letter], List[int]]:
    """
    Exact letters for n < horizon and the automaton states they drive
    """

    if horizon < 0:
        raise ValueError("horizon must be non-negative")

    letters = inst.letters(horizon)
    _, trace = run(inst.spec, letters)
    return letters, trace


def reconstruct_distribution(red: ReducedInstance, n: int) -> Vector:
    cert = red.certificate
    if n < cert.ell:
        return red.source.distribution(n)

    q, r = cert.address(n)
    return reconstruct_point(red, q, r)


def reconstruct_letter(red: ReducedInstance, n: int) -> Letter:
    """
    Original letter at time n read off the certificate and the reduced orbit
    """

    cert = red.certificate
    if n < cert.original_shift:
        return cert.prefix_letters[n]

    q, r = cert.address(n)
    y = mat_pow(red.A, q - red.n0) @ red.start
    h = red.stage2.h
    return sum(1 << i for i in range(h) if member(red.targets3[r * h + i], y))


def reconstruction(
    red: ReducedInstance, window: int, offset: int = 0
) -> Iterator[Tuple[int, Letter, Vector]]:
    """
    (n, letter, distribution) for offset <= n < offset + window, stepping the
    reduced orbit once per block instead of powering A for every n
    """

    cert = red.certificate
    s1 = red.stage1
    h = red.stage2.h
    shifts = [mat_pow(s1.B, r) for r in range(cert.c)]

    early = red.source.distribution(offset) if offset < cert.ell else None
    current, y = None, None
    for n in range(offset, offset + window):
        if n < cert.ell:
            yield n, cert.prefix_letters[n], early
            early = red.source.M @ early
            continue

        q, r = cert.address(n)
        if current is None:
            y = mat_pow(red.A, q) @ red.v
        elif q != current:
            y = red.A @ y
        current = q

        point = s1.Q @ (shifts[r] @ vec_add(red.s, red.Q3 @ y))
        if n < cert.original_shift:
            letter = cert.prefix_letters[n]
        else:
            letter = sum(1 << i for i in range(h) if member(red.targets3[r * h + i], y))

        yield n, letter, point


@dataclass
class CrossValidation:
    window: int
    offset: int = 0
    divergence: Optional[int] = None
    results: List[Result] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.divergence is None

    def to_data(self) -> dict:
        return {
            "window": self.window,
            "offset": self.offset,
            "ok": self.ok,
            "first_divergence": self.divergence,
            "checks": [r.to_data() for r in self.results],
        }


def cross_validate(
    inst: StochasticInstance, red: ReducedInstance, window: int, offset: int = 0
) -> CrossValidation:
    """
    Compare direct simulation of inst against the certificate reconstruction
    on times offset .. offset + window - 1
    """

    report = CrossValidation(window, offset)
    x = inst.distribution(offset)
    for n, rebuilt, point in reconstruction(red, window, offset):
        direct = sum(1 << i for i, t in enumerate(inst.targets) if member(t, x))
        if direct != rebuilt:
            report.divergence = n
            report.results.append(
                Err("letters", f"time {n}: simulation gives {direct}, certificate gives {rebuilt}")
            )
            break

        if point != x:
            report.divergence = n
            report.results.append(Err("distributions", f"time {n}: reconstruction differs"))
            break

        x = inst.M @ x

    if report.ok:
        report.results.append(Ok("letters", f"{window} steps agree"))
        report.results.append(Ok("distributions", f"{window} steps agree"))
        if offset + window <= red.certificate.original_shift:
            report.results.append(
                Warn("reduced targets", "window ends inside the prefix, reduced letters unchecked")
            )
    else:
        log.warning("cross validation diverges at time %d", report.divergence)

    return report


#################################
#          DECISIONS            #
#################################


@dataclass(frozen=True)
class TargetClass:
    target: int
    source: Tuple[int, int]
    hull_rank: int
    linear_dim: int
    markov_linear_dim: int
    intrinsic_dim: Optional[int]
    markov_low_dimensional: bool
    empty: str

    def to_data(self) -> dict:
        return {
            "target": self.target,
            "source": {"target": self.source[0], "offset": self.source[1]},
            "hull_rank": self.hull_rank,
            "linear_dim": self.linear_dim,
            "markov_linear_dim": self.markov_linear_dim,
            "intrinsic_dim": self.intrinsic_dim,
            "markov_low_dimensional": self.markov_low_dimensional,
            "empty": self.empty,
        }


@dataclass(frozen=True)
class Classification:
    dyn_dim: int
    targets: Tuple[TargetClass, ...]
    tame_applies: bool
    note: str

    def to_data(self) -> dict:
        return {
            "dyn_dim": self.dyn_dim,
            "targets": [t.to_data() for t in self.targets],
            "tame_applies": self.tame_applies,
            "note": self.note,
        }


@dataclass(frozen=True)
class Verdict:
    kind: Literal["accept", "reject", "reduced_only"]
    lasso: Optional[Lasso] = None
    reduced_lasso: Optional[Lasso] = None
    classification: Optional[Classification] = None

    @property
    def decided(self) -> bool:
        return self.kind != "reduced_only"

    def to_data(self) -> dict:
        data: dict = {"verdict": self.kind}
        if self.lasso is not None:
            data["evidence"] = self.lasso.to_data()
        if self.reduced_lasso is not None:
            data["reduced_evidence"] = self.reduced_lasso.to_data()
        if self.classification is not None:
            data["classification"] = self.classification.to_data()

        return data


def constant_letter(red: ReducedInstance) -> Optional[Letter]:
    """
    The letter every reduced step carries when all reduced targets have
    constant membership on the eps-ball, None otherwise
    """

    letter = 0
    for j, (t3, mark) in enumerate(zip(red.targets3, red.emptiness)):
        if red.dyn_dim == 0:
            value = member(t3, ())
        elif mark.is_empty:
            value = False
        else:
            core = affine_preimage(red.stage2.targets2[j], red.Q3, red.s)
            value = constant_truth(core)
            if value is None:
                return None

        if value:
            letter |= 1 << j

    return letter


def classify(red: ReducedInstance) -> Classification:
    """
    Low-dimensionality is read on the original targets in the chain's state
    space; the reduced targets only contribute their own linear dimension
    """

    source = red.source
    intrinsic = source.intrinsic_dims
    table = reduced_letter_table(red)
    targets = []
    for j, (t3, mark) in enumerate(zip(red.targets3, red.emptiness)):
        i, r = table[j]
        original = source.targets[i]
        declared = intrinsic[i] if intrinsic else None
        markov_dim = hull_dimension(original)
        low = markov_dim <= MLD_LIMIT or (declared is not None and declared <= 1)
        targets.append(
            TargetClass(
                target=j,
                source=(i, r),
                hull_rank=rank(syntactic_hull(t3)),
                linear_dim=hull_dimension(t3),
                markov_linear_dim=markov_dim,
                intrinsic_dim=declared,
                markov_low_dimensional=low,
                empty=mark.status,
            )
        )

    tame = red.dyn_dim <= TAME_DYN_LIMIT or all(
        t.markov_low_dimensional or t.linear_dim <= TAME_DYN_LIMIT for t in targets
    )
    return Classification(red.dyn_dim, tuple(targets), tame, TAME_NOTE if tame else OPEN_NOTE)


def decide_fragment(red: ReducedInstance, spec: Optional[MullerAutomaton] = None) -> Verdict:
    """
    Accept or reject when the reduced word is constant, otherwise classify
    """

    spec = spec or red.source.spec
    sigma = constant_letter(red)
    if sigma is None:
        classification = classify(red)
        log.info("reduced instance left undecided (tame criterion: %s)", classification.tame_applies)
        return Verdict("reduced_only", classification=classification)

    reduced_lasso = Lasso((), (sigma,))
    accepted = lasso_accept(red.spec3, reduced_lasso)

    original = Lasso(red.certificate.prefix_letters, red.stage2.unpack(sigma))
    if lasso_accept(spec, original) != accepted:
        raise InvariantError("reduced and original lassos disagree on acceptance")

    kind = "accept" if accepted else "reject"
    log.info("decided: %s with constant reduced letter %d", kind, sigma)
    return Verdict(kind, original, reduced_lasso, classify(red))
