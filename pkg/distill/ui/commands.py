"""
One function per command; each returns the Report it assembled and writes
its output document only after every step succeeded.
"""

import logging
from pathlib import Path
from typing import Optional, Union
from distill.api.decide import bounded_check, cross_validate, decide_fragment
from distill.api.embed import LdsInstance, embed_with_embedding
from distill.api.model import DocumentError
from distill.api.reduce import ReducedInstance, StochasticInstance, letter_of, reduce_full
from distill.api.spectra import analyze, validate_stochastic_spectrum
from distill.utils.conf_reader import config_man
from distill.utils.parser import (
    Parser,
    instance_from_document,
    markov_to_data,
    read_stationary,
    reduced_to_data,
    vector_to_data,
)
from .report import Report

log = logging.getLogger(__name__)
parser = Parser()

PathLike = Union[str, Path]


def load_instance(path: PathLike) -> Union[StochasticInstance, LdsInstance]:
    return instance_from_document(parser.load(path))


def load_markov(path: PathLike) -> StochasticInstance:
    inst = load_instance(path)
    if not isinstance(inst, StochasticInstance):
        raise DocumentError("expected a markov document", field="kind")

    inst.validate()
    return inst


def load_lds(path: PathLike) -> LdsInstance:
    inst = load_instance(path)
    if not isinstance(inst, LdsInstance):
        raise DocumentError("expected an lds document", field="kind")

    inst.validate()
    return inst


def _letter_targets(letter: int, h: int) -> list:
    return [i for i in range(h) if letter >> i & 1]


def _instance_summary(inst: StochasticInstance) -> dict:
    return {
        "order": inst.k,
        "targets": inst.h,
        "automaton_states": inst.spec.n_states,
    }


def _reduction_summary(red: ReducedInstance) -> dict:
    cert = red.certificate
    stationary = red.stage1.Q @ red.s
    return {
        "ell": cert.ell,
        "c": cert.c,
        "n0": cert.n0,
        "dyn_dim": red.dyn_dim,
        "eps_sq": str(red.eps_sq),
        "stationary_distribution": vector_to_data(stationary),
        "reduced_matrix": red.A.to_strings(),
        "reduced_initial": vector_to_data(red.start),
        "emptiness": [e.to_data() for e in red.emptiness],
    }


def cmd_analyze(path: PathLike) -> Report:
    report = Report("analyze", str(path))
    inst = load_markov(path)

    with report.timed("analyze"):
        profile = analyze(inst.M)
        checks = validate_stochastic_spectrum(inst.M, profile)

    report.add("instance", _instance_summary(inst))
    report.add("spectrum", profile.to_data())
    report.add("validation", [r.to_data() for r in checks])
    return report


def cmd_reduce(path: PathLike, out_path: Optional[PathLike] = None) -> Report:
    report = Report("reduce", str(path))
    inst = load_markov(path)

    with report.timed("reduce"):
        red = reduce_full(inst)

    report.add("instance", _instance_summary(inst))
    report.add("reduction", _reduction_summary(red))
    report.add("certificate", red.certificate.to_data())

    if out_path is not None:
        parser.save(out_path, reduced_to_data(red))
        report.add("output", str(out_path))
        log.info("wrote reduced instance to %s", out_path)

    return report


def cmd_decide(path: PathLike, horizon: Optional[int] = None) -> Report:
    horizon = config_man.get("DEFAULT_HORIZON") if horizon is None else horizon
    if horizon < 0:
        raise DocumentError("horizon must be non-negative", field="--horizon")

    report = Report("decide", str(path))
    inst = load_markov(path)

    with report.timed("reduce"):
        red = reduce_full(inst)
    with report.timed("decide"):
        verdict = decide_fragment(red)
    with report.timed("cross_validate"):
        window = red.certificate.original_shift + config_man.get("CROSS_VALIDATE_WINDOW")
        cross = cross_validate(inst, red, window)

    report.add("instance", _instance_summary(inst))
    report.add("reduction", _reduction_summary(red))
    report.add("verdict", verdict.to_data())
    report.add("cross_validation", cross.to_data())

    if horizon:
        with report.timed("simulate"):
            letters, trace = bounded_check(inst, horizon)
        report.add("simulation", {"horizon": horizon, "letters": letters, "states": trace})

    return report


def cmd_embed(
    path: PathLike,
    out_path: Optional[PathLike] = None,
    stationary_path: Optional[PathLike] = None,
    scale: bool = True,
) -> Report:
    report = Report("embed", str(path))
    lds = load_lds(path)
    s = read_stationary(parser.load(stationary_path)) if stationary_path else None

    with report.timed("embed"):
        inst, emb = embed_with_embedding(lds, s, scale)

    document = markov_to_data(inst)
    report.add("embedding", emb.to_data())
    report.add("instance", document)

    if out_path is not None:
        parser.save(out_path, document)
        report.add("output", str(out_path))

    return report


def cmd_simulate(path: PathLike, steps: Optional[int] = None) -> Report:
    steps = config_man.get("DEFAULT_STEPS") if steps is None else steps
    if steps < 0:
        raise DocumentError("steps must be non-negative", field="--steps")

    report = Report("simulate", str(path))
    inst = load_instance(path)
    inst.validate()

    with report.timed("simulate"):
        points = inst.trajectory(steps)

    rows = []
    for n, x in enumerate(points):
        letter = letter_of(inst.targets, x)
        rows.append(
            {
                "n": n,
                "distribution": vector_to_data(x),
                "letter": letter,
                "targets": _letter_targets(letter, len(inst.targets)),
            }
        )

    report.add("trajectory", rows)
    return report
