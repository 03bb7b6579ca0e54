from .model import DistillError, Result
from .reduce import ReducedInstance, StochasticInstance, reduce_full
from .decide import Verdict, decide_fragment
from .embed import LdsInstance, embed_instance, embed_lds

__all__ = [
    "DistillError",
    "Result",
    "ReducedInstance",
    "StochasticInstance",
    "reduce_full",
    "Verdict",
    "decide_fragment",
    "LdsInstance",
    "embed_instance",
    "embed_lds",
]
