"""
Deterministic Muller automata over the alphabet of target subsets.

A letter is a bitmask over target indices: bit i set means target i holds.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

log = logging.getLogger(__name__)

Letter = int
BlockMap = Sequence[Sequence[Letter]]


class Acceptance:
    """
    Decides whether a set of infinitely visited states is accepting
    """

    def accepts(self, inf: FrozenSet[int]) -> bool:
        raise NotImplementedError

    def states(self) -> FrozenSet[int]:
        raise NotImplementedError

    def to_data(self):
        raise NotImplementedError


@dataclass(frozen=True)
class MullerFamily(Acceptance):
    sets: FrozenSet[FrozenSet[int]] = frozenset()

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]]) -> "MullerFamily":
        return cls(frozenset(frozenset(s) for s in sets))

    def accepts(self, inf: FrozenSet[int]) -> bool:
        return frozenset(inf) in self.sets

    def states(self) -> FrozenSet[int]:
        return frozenset().union(*self.sets)

    def to_data(self) -> List[List[int]]:
        return sorted(sorted(s) for s in self.sets)


@dataclass(frozen=True)
class UnionProjection(Acceptance):
    """
    Accepts Inf when the union of `traversed[q]` over q in Inf is accepted
    by `base`; keeps the product acceptance family implicit
    """

    traversed: Tuple[FrozenSet[int], ...]
    base: Acceptance

    def accepts(self, inf: FrozenSet[int]) -> bool:
        return self.base.accepts(frozenset().union(*(self.traversed[q] for q in inf)))

    def states(self) -> FrozenSet[int]:
        return frozenset(range(len(self.traversed)))

    def to_data(self) -> dict:
        return {
            "union_of": [sorted(s) for s in self.traversed],
            "family": self.base.to_data(),
        }


@dataclass(frozen=True)
class Lasso:
    """
    The ultimately periodic word prefix . cycle^omega
    """

    prefix: Tuple[Letter, ...]
    cycle: Tuple[Letter, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("A lasso needs a nonempty cycle")

    def letter(self, n: int) -> Letter:
        if n < len(self.prefix):
            return self.prefix[n]

        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    def unroll(self, length: int) -> List[Letter]:
        return [self.letter(n) for n in range(length)]

    def to_data(self) -> dict:
        return {"prefix": list(self.prefix), "cycle": list(self.cycle)}


@dataclass(frozen=True)
class MullerAutomaton:
    n_states: int
    n_targets: int
    initial: int
    delta: Tuple[Tuple[int, ...], ...]
    acceptance: Acceptance

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))

        if self.n_states < 1:
            raise ValueError("An automaton needs at least one state")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"Initial state {self.initial} out of range")
        if len(self.delta) != self.n_states:
            raise ValueError(f"Transition table has {len(self.delta)} rows, expected {self.n_states}")

        for q, row in enumerate(self.delta):
            if len(row) != self.alphabet_size:
                raise ValueError(
                    f"State {q} has {len(row)} transitions, expected {self.alphabet_size}"
                )
            if any(not 0 <= p < self.n_states for p in row):
                raise ValueError(f"State {q} has a transition out of range")

        if any(not 0 <= q < self.n_states for q in self.acceptance.states()):
            raise ValueError("Acceptance mentions a state out of range")

    @property
    def alphabet_size(self) -> int:
        return 1 << self.n_targets

    def step(self, q: int, letter: Letter) -> int:
        if not 0 <= letter < self.alphabet_size:
            raise ValueError(f"Letter {letter} is not a subset of {self.n_targets} targets")

        return self.delta[q][letter]


def trace(a: MullerAutomaton, q: int, w: Sequence[Letter]) -> List[int]:
    visited = [q]
    for letter in w:
        q = a.step(q, letter)
        visited.append(q)

    return visited


def run(a: MullerAutomaton, w: Sequence[Letter]) -> Tuple[int, List[int]]:
    visited = trace(a, a.initial, w)
    return visited[-1], visited


def reroot(a: MullerAutomaton, prefix: Sequence[Letter]) -> MullerAutomaton:
    return replace(a, initial=run(a, prefix)[0])


def block_letter_map(h: int, c: int) -> List[Tuple[Letter, ...]]:
    """
    Letters over h*c targets, where bit r*h + i stands for target i at
    offset r of the block, mapped to their blocks of c letters over h targets
    """

    mask = (1 << h) - 1
    return [
        tuple((sigma >> (r * h)) & mask for r in range(c)) for sigma in range(1 << (h * c))
    ]


def power_construct(a: MullerAutomaton, c: int, letter_map: BlockMap) -> MullerAutomaton:
    """
    Automaton reading one letter per block of c original letters.

    States are the reachable pairs (q, S) with S the set of states entered
    while reading the last block, starting from (initial, {}).
    """

    if c < 1:
        raise ValueError("c must be positive")

    size = len(letter_map)
    n_targets = size.bit_length() - 1
    if size != 1 << n_targets:
        raise ValueError(f"letter_map has {size} entries, not a power of two")

    for sigma, block in enumerate(letter_map):
        if len(block) != c:
            raise ValueError(f"Letter {sigma} maps to a block of length {len(block)}, expected {c}")

    start = (a.initial, frozenset())
    index: Dict[Tuple[int, FrozenSet[int]], int] = {start: 0}
    pairs = [start]
    delta: List[List[int]] = []

    i = 0
    while i < len(pairs):
        q, _ = pairs[i]
        row = []
        for block in letter_map:
            visited = trace(a, q, block)
            target = (visited[-1], frozenset(visited[1:]))
            if target not in index:
                index[target] = len(pairs)
                pairs.append(target)
            row.append(index[target])
        delta.append(row)
        i += 1

    log.debug("power construction with c=%d: %d reachable product states", c, len(pairs))
    return MullerAutomaton(
        n_states=len(pairs),
        n_targets=n_targets,
        initial=0,
        delta=tuple(tuple(row) for row in delta),
        acceptance=UnionProjection(tuple(s for _, s in pairs), a.acceptance),
    )


def rename(a: MullerAutomaton, bijection: Sequence[Letter]) -> MullerAutomaton:
    """
    The automaton reading bijection[sigma] wherever `a` reads sigma
    """

    if sorted(bijection) != list(range(a.alphabet_size)):
        raise ValueError("Letter renaming must be a bijection on the alphabet")

    inverse = [0] * a.alphabet_size
    for sigma, image in enumerate(bijection):
        inverse[image] = sigma

    delta = tuple(tuple(row[inverse[b]] for b in range(a.alphabet_size)) for row in a.delta)
    return replace(a, delta=delta)


def infinity_set(a: MullerAutomaton, w: Lasso) -> FrozenSet[int]:
    """States visited infinitely often on the lasso word"""
    q, _ = run(a, w.prefix)

    seen: Dict[int, int] = {}
    entered: List[FrozenSet[int]] = []
    while q not in seen:
        seen[q] = len(entered)
        visited = trace(a, q, w.cycle)
        q = visited[-1]
        entered.append(frozenset(visited[1:]))

    return frozenset().union(*entered[seen[q]:])


def lasso_accept(a: MullerAutomaton, w: Lasso) -> bool:
    return a.acceptance.accepts(infinity_set(a, w))


def flatten(w: Lasso, letter_map: BlockMap) -> Lasso:
    """Expand each letter of w into its block"""
    return Lasso(
        tuple(x for sigma in w.prefix for x in letter_map[sigma]),
        tuple(x for sigma in w.cycle for x in letter_map[sigma]),
    )


#################################
#            SCHEMAS            #
#################################


def _holds_automaton(h: int, i: int, latch: bool, family: Iterable[Iterable[int]]) -> MullerAutomaton:
    # state 1 means target i held on the last letter (or ever, when latched)
    if not 0 <= i < h:
        raise ValueError(f"Target {i} out of range for {h} targets")

    bit = 1 << i
    row = tuple(int(bool(sigma & bit)) for sigma in range(1 << h))
    top = tuple(1 for _ in range(1 << h)) if latch else row
    return MullerAutomaton(2, h, 0, (row, top), MullerFamily.of(family))


def eventually(h: int, i: int) -> MullerAutomaton:
    return _holds_automaton(h, i, True, [[1]])


def infinitely_often(h: int, i: int) -> MullerAutomaton:
    return _holds_automaton(h, i, False, [[1], [0, 1]])


def eventually_always(h: int, i: int) -> MullerAutomaton:
    return _holds_automaton(h, i, False, [[1]])


def always(h: int, i: int) -> MullerAutomaton:
    if not 0 <= i < h:
        raise ValueError(f"Target {i} out of range for {h} targets")

    bit = 1 << i
    # state 1 is the rejecting sink
    row = tuple(0 if sigma & bit else 1 for sigma in range(1 << h))
    return MullerAutomaton(2, h, 0, (row, (1,) * (1 << h)), MullerFamily.of([[0]]))


SCHEMAS = {
    "eventually": eventually,
    "infinitely_often": infinitely_often,
    "always": always,
    "eventually_always": eventually_always,
}
