"""
Semialgebraic target sets.

A set is a Boolean tree over polynomial sign conditions `p(x) rel 0` with
rational coefficients, plus an optional declared hull: a matrix H whose
kernel is known to contain the set.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Literal,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)
from sympy import QQ, Poly, Symbol
from distill.utils.conf_reader import config_man
from .ratlin import (
    RatMatrix,
    Vector,
    kernel_basis,
    hstack,
    primitive,
    rank,
    rational,
    row_space_basis,
    solve,
    sq_norm,
    to_qq,
    vec_add,
    vec_scale,
    vstack,
    zero_vector,
)

log = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Relation = Literal["<", "<=", "=", "!=", ">=", ">"]
RELATIONS = ("<", "<=", "=", "!=", ">=", ">")
NEGATED: Dict[str, str] = {
    "<": ">=",
    "<=": ">",
    "=": "!=",
    "!=": "=",
    ">=": "<",
    ">": "<=",
}


def sign_holds(sign: int, rel: str) -> bool:
    if rel == "<":
        return sign < 0
    if rel == "<=":
        return sign <= 0
    if rel == "=":
        return sign == 0
    if rel == "!=":
        return sign != 0
    if rel == ">=":
        return sign >= 0
    if rel == ">":
        return sign > 0

    raise ValueError(f"Unknown relation {rel!r}")


@lru_cache(maxsize=None)
def generators(nvars: int) -> Tuple[Symbol, ...]:
    """x1..xn; polynomials in zero variables sit over a single unused symbol"""
    if nvars == 0:
        return (Symbol("x0"),)

    return tuple(Symbol(f"x{i + 1}") for i in range(nvars))


class MultiPoly:
    """
    Multivariate polynomial over the rationals, a sympy Poly over QQ in the
    generators x1..xn together with its terms as Fractions
    """

    __slots__ = ("nvars", "poly", "terms")

    def __init__(self, nvars: int, terms: Iterable[Tuple[Monomial, object]] = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()

        acc: Dict[Monomial, Fraction] = {}
        for exps, coeff in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"Exponent tuple {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"Negative exponent in {exps}")
            acc[exps] = acc.get(exps, Fraction(0)) + rational(coeff)

        rep = {(e if nvars else (0,)): to_qq(c) for e, c in acc.items() if c != 0}
        zero = (0,) * max(nvars, 1)
        self._bind(nvars, Poly.from_dict(rep or {zero: QQ(0)}, *generators(nvars), domain=QQ))

    def _bind(self, nvars: int, poly: Poly) -> None:
        terms = (
            (tuple(m) if nvars else (), rational(c)) for m, c in poly.terms() if c != 0
        )
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "terms", tuple(sorted(terms)))

    @classmethod
    def from_sympy(cls, nvars: int, poly: Poly) -> "MultiPoly":
        p = cls.__new__(cls)
        p._bind(nvars, poly)
        return p

    def _wrap(self, poly: Poly) -> "MultiPoly":
        return MultiPoly.from_sympy(self.nvars, poly)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def constant(cls, nvars: int, c: object) -> "MultiPoly":
        return cls(nvars, [((0,) * nvars, c)])

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        return cls(nvars, [(tuple(int(j == i) for j in range(nvars)), 1)])

    @classmethod
    def linear(cls, coeffs: Sequence[object], const: object = 0) -> "MultiPoly":
        n = len(coeffs)
        terms = [(tuple(int(j == i) for j in range(n)), c) for i, c in enumerate(coeffs)]
        terms.append(((0,) * n, const))
        return cls(n, terms)

    def as_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def constant_term(self) -> Fraction:
        return self.as_dict().get((0,) * self.nvars, Fraction(0))

    def variables(self) -> Set[int]:
        return {i for e, _ in self.terms for i, k in enumerate(e) if k}

    def _coerce(self, other: object) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"Variable count mismatch: {self.nvars} vs {other.nvars}")
            return other

        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other: object) -> "MultiPoly":
        return self._wrap(self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self._wrap(-self.poly)

    def __sub__(self, other: object) -> "MultiPoly":
        return self._wrap(self.poly - self._coerce(other).poly)

    def __rsub__(self, other: object) -> "MultiPoly":
        return self._wrap(self._coerce(other).poly - self.poly)

    def __mul__(self, other: object) -> "MultiPoly":
        return self._wrap(self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        return self._wrap(self.poly**n)

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        if len(x) != self.nvars:
            raise ValueError(f"Point has {len(x)} coordinates, polynomial has {self.nvars} variables")

        total = Fraction(0)
        for exps, coeff in self.terms:
            term = coeff
            for xi, e in zip(x, exps):
                if e:
                    term *= xi**e
            total += term

        return total

    def substitute(self, images: Sequence["MultiPoly"], nvars: Optional[int] = None) -> "MultiPoly":
        """
        Replace variable i by images[i]; all images share one variable count
        """

        if len(images) != self.nvars:
            raise ValueError(f"Need {self.nvars} images, got {len(images)}")

        target = images[0].nvars if images else (nvars or 0)
        if self.nvars == 0:
            return MultiPoly.constant(target, self.constant_term)

        # simultaneous, source and target generators share names
        expr = self.poly.as_expr().xreplace(
            {g: image.poly.as_expr() for g, image in zip(generators(self.nvars), images)}
        )
        return MultiPoly.from_sympy(target, Poly(expr, *generators(target), domain=QQ))

    def shift(self, s: Sequence[Fraction]) -> "MultiPoly":
        """The polynomial x -> p(x + s)"""
        images = [MultiPoly.variable(self.nvars, i) + s[i] for i in range(self.nvars)]
        return self.substitute(images)

    def is_homogeneous(self) -> bool:
        return self.is_zero() or bool(self.poly.is_homogeneous)

    def linear_form(self) -> Optional[Vector]:
        """Coefficient row when the polynomial is a nonzero linear form"""
        if self.degree != 1 or self.constant_term != 0:
            return None

        coeffs = [Fraction(0)] * self.nvars
        for exps, c in self.terms:
            coeffs[exps.index(1)] = c

        return tuple(coeffs)

    def affine_parts(self) -> Optional[Tuple[Vector, Fraction]]:
        """(a, c) with p(x) = a.x + c when the degree is at most one"""
        if self.degree > 1:
            return None

        coeffs = [Fraction(0)] * self.nvars
        for exps, c in self.terms:
            if sum(exps):
                coeffs[exps.index(1)] = c

        return tuple(coeffs), self.constant_term

    def integer_scaled(self) -> "MultiPoly":
        """Positive multiple with coprime integer coefficients"""
        if self.is_zero():
            return self

        _, cleared = self.poly.clear_denoms(convert=True)
        _, prim = cleared.primitive()
        if (prim.LC() > 0) != (self.poly.LC() > 0):
            prim = -prim

        return self._wrap(prim.set_domain(QQ))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented

        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, self.terms))

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"

        parts: List[str] = []
        for exps, c in sorted(self.terms, key=lambda t: (-sum(t[0]), t[0])):
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)

            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)

        return "".join(parts)


#################################
#          SET  TREES           #
#################################


class Node:
    """
    A node of a set's Boolean tree
    """

    def holds(self, x: Sequence[Fraction]) -> bool:
        raise NotImplementedError

    def atoms(self) -> Iterator["Atom"]:
        raise NotImplementedError

    def map_atoms(self, f: Callable[["Atom"], "Node"]) -> "Node":
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Node):
    poly: MultiPoly
    rel: str

    def __post_init__(self) -> None:
        if self.rel not in RELATIONS:
            raise ValueError(f"Unknown relation {self.rel!r}")

    def holds(self, x: Sequence[Fraction]) -> bool:
        return sign_holds(eval_sign(self.poly, x), self.rel)

    def atoms(self) -> Iterator["Atom"]:
        yield self

    def map_atoms(self, f: Callable[["Atom"], Node]) -> Node:
        return f(self)

    def negated(self) -> "Atom":
        return Atom(self.poly, NEGATED[self.rel])

    def __str__(self) -> str:
        return f"{self.poly} {self.rel} 0"


@dataclass(frozen=True)
class And(Node):
    children: Tuple[Node, ...] = ()

    def holds(self, x: Sequence[Fraction]) -> bool:
        return all(c.holds(x) for c in self.children)

    def atoms(self) -> Iterator[Atom]:
        for c in self.children:
            yield from c.atoms()

    def map_atoms(self, f: Callable[[Atom], Node]) -> Node:
        return And(tuple(c.map_atoms(f) for c in self.children))


@dataclass(frozen=True)
class Or(Node):
    children: Tuple[Node, ...] = ()

    def holds(self, x: Sequence[Fraction]) -> bool:
        return any(c.holds(x) for c in self.children)

    def atoms(self) -> Iterator[Atom]:
        for c in self.children:
            yield from c.atoms()

    def map_atoms(self, f: Callable[[Atom], Node]) -> Node:
        return Or(tuple(c.map_atoms(f) for c in self.children))


@dataclass(frozen=True)
class Not(Node):
    child: Node

    def holds(self, x: Sequence[Fraction]) -> bool:
        return not self.child.holds(x)

    def atoms(self) -> Iterator[Atom]:
        yield from self.child.atoms()

    def map_atoms(self, f: Callable[[Atom], Node]) -> Node:
        return Not(self.child.map_atoms(f))


TRUE = And()
FALSE = Or()


def nnf(node: Node, negated: bool = False) -> Node:
    """
    Push negations into the atoms
    """

    if isinstance(node, Atom):
        return node.negated() if negated else node
    if isinstance(node, Not):
        return nnf(node.child, not negated)
    if isinstance(node, And):
        kids = tuple(nnf(c, negated) for c in node.children)
        return Or(kids) if negated else And(kids)
    if isinstance(node, Or):
        kids = tuple(nnf(c, negated) for c in node.children)
        return And(kids) if negated else Or(kids)

    raise TypeError(f"Unknown node {node!r}")


def dnf(node: Node, limit: Optional[int] = None) -> Optional[List[List[Atom]]]:
    """
    Branches of the disjunctive normal form, None past `limit` branches
    """

    if limit is None:
        limit = config_man.get("DNF_LIMIT")

    def walk(n: Node) -> Optional[List[List[Atom]]]:
        if isinstance(n, Atom):
            return [[n]]
        if isinstance(n, Or):
            out: List[List[Atom]] = []
            for c in n.children:
                sub = walk(c)
                if sub is None:
                    return None
                out.extend(sub)
                if len(out) > limit:
                    return None
            return out
        if isinstance(n, And):
            out = [[]]
            for c in n.children:
                sub = walk(c)
                if sub is None:
                    return None
                out = [a + b for a in out for b in sub]
                if len(out) > limit:
                    return None
            return out

        raise TypeError(f"dnf expects a negation normal form, got {n!r}")

    return walk(nnf(node))


@dataclass(frozen=True)
class SemialgebraicSet:
    nvars: int
    tree: Node
    declared_hull: Optional[RatMatrix] = None

    def __post_init__(self) -> None:
        for atom in self.tree.atoms():
            if atom.poly.nvars != self.nvars:
                raise ValueError(
                    f"Atom {atom} has {atom.poly.nvars} variables, set has {self.nvars}"
                )

        if self.declared_hull is not None and self.declared_hull.cols != self.nvars:
            raise ValueError(
                f"Declared hull has {self.declared_hull.cols} columns, set has {self.nvars} variables"
            )

    def atoms(self) -> List[Atom]:
        return list(self.tree.atoms())

    def __contains__(self, x: Sequence[Fraction]) -> bool:
        return member(self, x)


def atom_set(poly: MultiPoly, rel: str) -> SemialgebraicSet:
    return SemialgebraicSet(poly.nvars, Atom(poly, rel))


#################################
#          OPERATIONS           #
#################################


def eval_sign(p: MultiPoly, x: Sequence[Fraction]) -> int:
    value = p.evaluate(x)
    return (value > 0) - (value < 0)


def member(t: SemialgebraicSet, x: Sequence[Fraction]) -> bool:
    if len(x) != t.nvars:
        raise ValueError(f"Point has {len(x)} coordinates, set lives in {t.nvars} variables")

    return t.tree.holds(x)


def affine_preimage(
    t: SemialgebraicSet, L: RatMatrix, b: Optional[Sequence[Fraction]] = None
) -> SemialgebraicSet:
    """
    The set {y : Ly + b in t}
    """

    if L.rows != t.nvars:
        raise ValueError(f"Map lands in {L.rows} dimensions, set lives in {t.nvars}")

    b = tuple(b) if b is not None else zero_vector(t.nvars)
    images = [MultiPoly.linear(L.row(i), b[i]) for i in range(t.nvars)]

    def substitute(atom: Atom) -> Node:
        return Atom(atom.poly.substitute(images, L.cols), atom.rel)

    return SemialgebraicSet(L.cols, t.tree.map_atoms(substitute))


def canonical_rows(h: RatMatrix) -> RatMatrix:
    """Independent primitive rows spanning the row space of h"""
    basis = row_space_basis(h)
    return RatMatrix((primitive(r) for r in basis.entries), h.cols)


def pull_back_hull(h: Optional[RatMatrix], L: RatMatrix) -> Optional[RatMatrix]:
    """
    Rows of a hull for {y : Ly in t} given a hull h of t
    """

    if h is None or h.rows == 0:
        return None

    return canonical_rows(h @ L)


def syntactic_hull(t: SemialgebraicSet) -> RatMatrix:
    """
    Linear forms vanishing on the whole set: the intersection over DNF branches
    of the span of the branch's linear '=' atoms, plus the declared hull
    """

    n = t.nvars
    blocks: List[RatMatrix] = []
    if t.declared_hull is not None and t.declared_hull.rows:
        blocks.append(t.declared_hull)

    branches = dnf(t.tree)
    if branches is not None:
        if not branches:
            blocks.append(RatMatrix.identity(n))
        else:
            spans = []
            for branch in branches:
                rows = [a.poly.linear_form() for a in branch if a.rel == "="]
                rows = [r for r in rows if r is not None]
                spans.append(kernel_basis(RatMatrix(rows, n)))

            summed = hstack(*spans)
            common = kernel_basis(summed.T)
            if common.cols:
                blocks.append(common.T)

    if not blocks:
        return RatMatrix.zeros(0, n)

    return canonical_rows(vstack(*blocks))


def hull_dimension(t: SemialgebraicSet) -> int:
    return t.nvars - rank(syntactic_hull(t))


def ball_poly(nvars: int, eps_sq: Fraction) -> MultiPoly:
    terms = [(tuple(2 * int(j == i) for j in range(nvars)), 1) for i in range(nvars)]
    terms.append(((0,) * nvars, -eps_sq))
    return MultiPoly(nvars, terms)


def ball_intersect(t: SemialgebraicSet, eps_sq: Fraction) -> SemialgebraicSet:
    if eps_sq <= 0:
        raise ValueError("eps_sq must be positive")

    ball = Atom(ball_poly(t.nvars, rational(eps_sq)), "<")
    if isinstance(t.tree, And):
        tree = And(t.tree.children + (ball,))
    else:
        tree = And((t.tree, ball))

    return SemialgebraicSet(t.nvars, tree, t.declared_hull)


def non_homogeneous_atoms(t: SemialgebraicSet, s: Sequence[Fraction]) -> List[Atom]:
    return [a for a in t.atoms() if not a.poly.shift(s).is_homogeneous()]


def is_s_homogeneous(t: SemialgebraicSet, s: Sequence[Fraction]) -> bool:
    if len(s) != t.nvars:
        raise ValueError(f"Shift has {len(s)} coordinates, set lives in {t.nvars}")

    return not non_homogeneous_atoms(t, s)


def constant_truth(t: SemialgebraicSet) -> Optional[bool]:
    """
    Membership value when every atom is a constant polynomial
    """

    if all(a.poly.is_constant() for a in t.atoms()):
        return member(t, zero_vector(t.nvars))

    return None


#################################
#           EMPTINESS           #
#################################

EmptinessStatus = Literal["empty", "nonempty", "unknown"]


@dataclass(frozen=True)
class Emptiness:
    status: EmptinessStatus
    witness: Optional[Vector] = None
    reason: str = ""

    @classmethod
    def Empty(cls, reason: str) -> "Emptiness":
        return cls("empty", None, reason)

    @classmethod
    def NonEmpty(cls, witness: Vector) -> "Emptiness":
        return cls("nonempty", tuple(witness), "witness")

    @classmethod
    def Unknown(cls, reason: str = "") -> "Emptiness":
        return cls("unknown", None, reason)

    @property
    def is_empty(self) -> bool:
        return self.status == "empty"

    @property
    def is_nonempty(self) -> bool:
        return self.status == "nonempty"

    def to_data(self) -> dict:
        data: dict = {"status": self.status, "reason": self.reason}
        if self.witness is not None:
            data["witness"] = [str(x) for x in self.witness]

        return data


Interval = Tuple[Optional[Fraction], Optional[Fraction]]


def sqrt_bounds(q: Fraction) -> Tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(q) <= hi"""
    num, den = q.numerator * q.denominator, q.denominator
    r = isqrt(num)
    if r * r == num:
        return Fraction(r, den), Fraction(r, den)

    return Fraction(r, den), Fraction(r + 1, den)


# None stands for an infinite end of an interval


def _ipow(iv: Optional[Interval], e: int) -> Interval:
    if iv is None:
        return (Fraction(0), None) if e % 2 == 0 else (None, None)

    lo, hi = iv
    a, b = lo**e, hi**e
    if e % 2 == 0 and lo <= 0 <= hi:
        return Fraction(0), max(a, b)

    return min(a, b), max(a, b)


def _imul(x: Interval, y: Interval) -> Interval:
    if None not in x and None not in y:
        products = [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]
        return min(products), max(products)

    if x[0] is not None and y[0] is not None and x[0] >= 0 and y[0] >= 0:
        return x[0] * y[0], None

    return None, None


def _iscale(c: Fraction, iv: Interval) -> Interval:
    lo, hi = iv
    lo = None if lo is None else c * lo
    hi = None if hi is None else c * hi
    return (lo, hi) if c >= 0 else (hi, lo)


def _interval_of(p: MultiPoly, box: Mapping[int, Interval]) -> Interval:
    lo: Optional[Fraction] = Fraction(0)
    hi: Optional[Fraction] = Fraction(0)
    for exps, coeff in p.terms:
        iv: Interval = (Fraction(1), Fraction(1))
        for i, e in enumerate(exps):
            if e:
                iv = _imul(iv, _ipow(box.get(i), e))
        iv = _iscale(coeff, iv)
        lo = None if lo is None or iv[0] is None else lo + iv[0]
        hi = None if hi is None or iv[1] is None else hi + iv[1]

    return lo, hi


def _contradicts(iv: Interval, rel: str) -> bool:
    lo, hi = iv
    above = lo is not None and lo > 0
    below = hi is not None and hi < 0
    if rel == "<":
        return lo is not None and lo >= 0
    if rel == "<=":
        return above
    if rel == "=":
        return above or below
    if rel == "!=":
        return lo == 0 and hi == 0
    if rel == ">=":
        return below
    if rel == ">":
        return hi is not None and hi <= 0

    return False


def _box_of(branch: Sequence[Atom], nvars: int) -> Dict[int, Interval]:
    """
    Coordinate bounds implied by diagonal quadratic upper bounds and by
    single-variable linear equalities in a conjunction
    """

    box: Dict[int, Interval] = {}
    for atom in branch:
        p = atom.poly
        if atom.rel in ("<", "<=") and p.degree == 2:
            terms = p.as_dict()
            const = -terms.pop((0,) * nvars, Fraction(0))
            diagonal = {}
            for exps, c in terms.items():
                if sum(exps) != 2 or max(exps) != 2 or c <= 0:
                    diagonal = None
                    break
                diagonal[exps.index(2)] = c
            if diagonal and const >= 0:
                for i, c in diagonal.items():
                    _, r = sqrt_bounds(const / c)
                    lo, hi = box.get(i, (-r, r))
                    box[i] = (max(lo, -r), min(hi, r))
        elif atom.rel == "=" and p.degree == 1 and len(p.variables()) == 1:
            a, c = p.affine_parts()
            i = next(iter(p.variables()))
            value = -c / a[i]
            box[i] = (value, value)

    return box


def _branch_contradictory(branch: Sequence[Atom], nvars: int) -> bool:
    box = _box_of(branch, nvars)
    return any(_contradicts(_interval_of(a.poly, box), a.rel) for a in branch)


def _ball_radius(branches: Optional[List[List[Atom]]], nvars: int) -> Fraction:
    if branches:
        box = _box_of(branches[0], nvars)
        radii = [max(abs(lo), abs(hi)) for lo, hi in box.values() if lo != hi]
        if radii:
            return min(radii)

    return Fraction(1)


def _candidates(
    t: SemialgebraicSet, branches: Optional[List[List[Atom]]]
) -> Iterator[Vector]:
    n = t.nvars
    yield zero_vector(n)

    scales = [Fraction(1, 2**j) for j in range(1, 8)]
    radius = _ball_radius(branches, n)

    for branch in branches or []:
        equalities = []
        for atom in branch:
            parts = atom.poly.affine_parts()
            if parts is not None and atom.rel == "=":
                equalities.append(parts)

        if equalities:
            system = RatMatrix([a for a, _ in equalities], n)
            x0 = solve(system, [-c for _, c in equalities])
            if x0 is None:
                continue
            yield x0
            for direction in kernel_basis(system).columns():
                for t_ in scales:
                    yield vec_add(x0, vec_scale(radius * t_, direction))
                    yield vec_add(x0, vec_scale(-radius * t_, direction))

    for atom in t.atoms():
        parts = atom.poly.affine_parts()
        if parts is None or sq_norm(parts[0]) == 0:
            continue
        a, c = parts
        foot = vec_scale(-c / sq_norm(a), a)
        yield foot
        for t_ in scales:
            yield vec_add(foot, vec_scale(radius * t_, a))
            yield vec_add(foot, vec_scale(-radius * t_, a))

    level = 0
    while (2 ** (level + 1) + 1) ** n <= config_man.get("EMPTINESS_SAMPLES"):
        step = radius / 2**level
        ticks = [j * step for j in range(-(2**level), 2**level + 1)]
        for point in product(ticks, repeat=n):
            yield tuple(point)
        level += 1
        if n == 0:
            break


def emptiness(t: SemialgebraicSet, s_in_hull: Optional[bool] = None) -> Emptiness:
    """
    Sound three-valued emptiness test.

    Empty needs a certificate (the caller's hull miss, or a contradiction on
    every branch under interval evaluation); NonEmpty needs an exactly checked
    rational witness; anything else is Unknown.
    """

    if s_in_hull is False:
        return Emptiness.Empty("hull-miss")

    branches = dnf(t.tree)
    if branches is not None:
        if not branches:
            return Emptiness.Empty("no branches")
        if all(_branch_contradictory(b, t.nvars) for b in branches):
            return Emptiness.Empty("interval contradiction")

    budget = config_man.get("EMPTINESS_SAMPLES")
    seen: Set[Vector] = set()
    for point in _candidates(t, branches):
        if point in seen:
            continue
        seen.add(point)
        if member(t, point):
            return Emptiness.NonEmpty(point)
        if len(seen) >= budget:
            break

    log.debug("emptiness undecided after %d samples", len(seen))
    return Emptiness.Unknown(f"no witness among {len(seen)} samples")
