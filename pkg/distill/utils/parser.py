import json
import os
import tempfile
import yaml
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from distill.api.automata import (
    SCHEMAS,
    Acceptance,
    MullerAutomaton,
    MullerFamily,
    UnionProjection,
)
from distill.api.embed import LdsInstance
from distill.api.model import DocumentError
from distill.api.ratlin import RatMatrix, Vector, rational
from distill.api.reduce import ReducedInstance, StochasticInstance
from distill.api.semialg import (
    RELATIONS,
    And,
    Atom,
    MultiPoly,
    Node,
    Not,
    Or,
    SemialgebraicSet,
)

FieldPath = Tuple[Union[str, int], ...]
KINDS = ("markov", "lds")


def field_name(path: FieldPath) -> str:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else part)

    return out or "<document>"


@dataclass
class Document:
    """
    A loaded document together with its YAML node tree, which carries the
    line numbers used in diagnostics
    """

    data: Any
    node: Optional[yaml.Node] = None
    source: str = "<memory>"

    def line_of(self, path: FieldPath) -> Optional[int]:
        node = self.node
        for part in path:
            if isinstance(node, yaml.MappingNode):
                node = next((v for k, v in node.value if k.value == part), None)
            elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
                node = node.value[part] if part < len(node.value) else None
            else:
                node = None
            if node is None:
                return None

        return node.start_mark.line + 1 if node is not None else None

    def fail(self, path: FieldPath, message: str) -> DocumentError:
        line = self.line_of(path)
        where = f" (line {line})" if line else ""
        return DocumentError(f"{message}{where}", field=field_name(path))


class Parser:
    """
    Reads instance documents and writes result documents
    """

    def load(self, path: Union[str, Path]) -> Document:
        """
        Load a JSON or YAML document
        """

        try:
            with open(path, "r", encoding="utf-8") as stream:
                text = stream.read()
        except OSError as e:
            raise DocumentError(f"cannot read {path}: {e.strerror}")

        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
            raise DocumentError(f"malformed document{where}: {getattr(e, 'problem', e)}")

        return Document(data, node, str(path))

    def save(self, path: Union[str, Path], data: Any) -> None:
        """
        Write JSON atomically: the target is replaced only by a complete file
        """

        path = Path(path)
        directory = path.parent if str(path.parent) else Path(".")
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as stream:
                json.dump(data, stream, indent=2, ensure_ascii=False)
                stream.write("\n")
                stream.flush()
                os.fsync(stream.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


#################################
#            READING            #
#################################


def _mapping(doc: Document, value: Any, path: FieldPath) -> Dict:
    if not isinstance(value, dict):
        raise doc.fail(path, "expected an object")
    return value


def _list(doc: Document, value: Any, path: FieldPath) -> List:
    if not isinstance(value, list):
        raise doc.fail(path, "expected a list")
    return value


def _require(doc: Document, data: Dict, key: str, path: FieldPath) -> Any:
    if key not in data:
        raise doc.fail(path, f"missing field {key!r}")
    return data[key]


def _int(doc: Document, value: Any, path: FieldPath) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise doc.fail(path, "expected an integer")
    return value


def read_rational(doc: Document, value: Any, path: FieldPath):
    try:
        return rational(value)
    except ZeroDivisionError:
        raise doc.fail(path, f"zero denominator in {value!r}")
    except (TypeError, ValueError):
        raise doc.fail(path, f"not an exact rational: {value!r}")


def read_vector(doc: Document, value: Any, path: FieldPath) -> Vector:
    items = _list(doc, value, path)
    return tuple(read_rational(doc, x, path + (i,)) for i, x in enumerate(items))


def read_matrix(doc: Document, value: Any, path: FieldPath, cols: Optional[int] = None) -> RatMatrix:
    rows = [read_vector(doc, row, path + (i,)) for i, row in enumerate(_list(doc, value, path))]
    width = cols if cols is not None else (len(rows[0]) if rows else 0)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise doc.fail(path + (i,), f"row has {len(row)} entries, expected {width}")

    return RatMatrix(rows, width)


def read_poly(doc: Document, value: Any, path: FieldPath, nvars: int) -> MultiPoly:
    terms = []
    for i, term in enumerate(_list(doc, value, path)):
        here = path + (i,)
        term = _mapping(doc, term, here)
        coeff = read_rational(doc, _require(doc, term, "coeff", here), here + ("coeff",))
        exps = _list(doc, _require(doc, term, "exps", here), here + ("exps",))
        exps = [_int(doc, e, here + ("exps", j)) for j, e in enumerate(exps)]
        if len(exps) != nvars or any(e < 0 for e in exps):
            raise doc.fail(here + ("exps",), f"expected {nvars} non-negative exponents")
        terms.append((tuple(exps), coeff))

    return MultiPoly(nvars, terms)


def read_tree(doc: Document, value: Any, path: FieldPath, nvars: int) -> Node:
    data = _mapping(doc, value, path)
    if "poly" in data:
        rel = _require(doc, data, "rel", path)
        if rel not in RELATIONS:
            raise doc.fail(path + ("rel",), f"unknown relation {rel!r}")
        return Atom(read_poly(doc, data["poly"], path + ("poly",), nvars), rel)

    for key, cls in (("and", And), ("or", Or)):
        if key in data:
            kids = _list(doc, data[key], path + (key,))
            return cls(tuple(read_tree(doc, c, path + (key, i), nvars) for i, c in enumerate(kids)))

    if "not" in data:
        kids = _list(doc, data["not"], path + ("not",))
        if len(kids) != 1:
            raise doc.fail(path + ("not",), "'not' takes exactly one operand")
        return Not(read_tree(doc, kids[0], path + ("not", 0), nvars))

    raise doc.fail(path, "expected an atom ('poly', 'rel') or one of 'and', 'or', 'not'")


def read_target(doc: Document, value: Any, path: FieldPath, nvars: int) -> SemialgebraicSet:
    tree = read_tree(doc, value, path, nvars)
    hull = None
    if "hull" in value:
        hull = read_matrix(doc, value["hull"], path + ("hull",), nvars)

    return SemialgebraicSet(nvars, tree, hull)


def read_acceptance(doc: Document, value: Any, path: FieldPath) -> Acceptance:
    if isinstance(value, dict):
        union = _list(doc, _require(doc, value, "union_of", path), path + ("union_of",))
        traversed = tuple(
            frozenset(_int(doc, q, path + ("union_of", i, j)) for j, q in enumerate(_list(doc, s, path + ("union_of", i))))
            for i, s in enumerate(union)
        )
        base = read_acceptance(doc, _require(doc, value, "family", path), path + ("family",))
        return UnionProjection(traversed, base)

    sets = []
    for i, s in enumerate(_list(doc, value, path)):
        states = _list(doc, s, path + (i,))
        sets.append([_int(doc, q, path + (i, j)) for j, q in enumerate(states)])

    return MullerFamily.of(sets)


def read_automaton(doc: Document, value: Any, path: FieldPath, h: int) -> MullerAutomaton:
    data = _mapping(doc, value, path)
    if "schema" in data:
        name = data["schema"]
        if name not in SCHEMAS:
            raise doc.fail(path + ("schema",), f"unknown schema {name!r}, expected one of {sorted(SCHEMAS)}")
        target = _int(doc, _require(doc, data, "target", path), path + ("target",))
        if not 0 <= target < h:
            raise doc.fail(path + ("target",), f"target {target} out of range for {h} targets")
        return SCHEMAS[name](h, target)

    states = _int(doc, _require(doc, data, "states", path), path + ("states",))
    initial = _int(doc, _require(doc, data, "initial", path), path + ("initial",))
    delta = []
    for q, row in enumerate(_list(doc, _require(doc, data, "delta", path), path + ("delta",))):
        row = _list(doc, row, path + ("delta", q))
        if len(row) != 1 << h:
            raise doc.fail(path + ("delta", q), f"expected {1 << h} transitions, one per letter")
        delta.append(tuple(_int(doc, p, path + ("delta", q, j)) for j, p in enumerate(row)))

    acceptance = read_acceptance(doc, _require(doc, data, "acceptance", path), path + ("acceptance",))
    try:
        return MullerAutomaton(states, h, initial, tuple(delta), acceptance)
    except ValueError as e:
        raise doc.fail(path, str(e))


def _intrinsic(doc: Document, data: Dict, h: int) -> Tuple[Optional[int], ...]:
    if "intrinsic_dim" not in data:
        return ()

    values = _list(doc, data["intrinsic_dim"], ("intrinsic_dim",))
    if len(values) != h:
        raise doc.fail(("intrinsic_dim",), f"expected {h} entries, one per target")

    return tuple(None if x is None else _int(doc, x, ("intrinsic_dim", i)) for i, x in enumerate(values))


def instance_from_document(doc: Document) -> Union[StochasticInstance, LdsInstance]:
    data = _mapping(doc, doc.data, ())
    kind = _require(doc, data, "kind", ())
    if kind not in KINDS:
        raise doc.fail(("kind",), f"expected one of {KINDS}, got {kind!r}")

    matrix = read_matrix(doc, _require(doc, data, "matrix", ()), ("matrix",))
    if not matrix.is_square:
        raise doc.fail(("matrix",), f"matrix is {matrix.rows}x{matrix.cols}, not square")

    k = matrix.rows
    initial = read_vector(doc, _require(doc, data, "initial", ()), ("initial",))
    if len(initial) != k:
        raise doc.fail(("initial",), f"expected {k} entries, got {len(initial)}")

    raw_targets = _list(doc, data.get("targets", []), ("targets",))
    targets = tuple(read_target(doc, t, ("targets", i), k) for i, t in enumerate(raw_targets))
    spec = read_automaton(doc, _require(doc, data, "spec", ()), ("spec",), len(targets))

    if kind == "lds":
        return LdsInstance(matrix, initial, targets, spec)

    return StochasticInstance(matrix, initial, targets, spec, _intrinsic(doc, data, len(targets)))


def read_stationary(doc: Document) -> Vector:
    value = doc.data
    if isinstance(value, dict):
        return read_vector(doc, _require(doc, value, "stationary", ()), ("stationary",))

    return read_vector(doc, value, ())


#################################
#            WRITING            #
#################################


def vector_to_data(v: Sequence) -> List[str]:
    return [str(x) for x in v]


def poly_to_data(p: MultiPoly) -> List[dict]:
    return [{"coeff": str(c), "exps": list(e)} for e, c in p.integer_scaled().terms]


def tree_to_data(node: Node) -> dict:
    if isinstance(node, Atom):
        return {"poly": poly_to_data(node.poly), "rel": node.rel}
    if isinstance(node, And):
        return {"and": [tree_to_data(c) for c in node.children]}
    if isinstance(node, Or):
        return {"or": [tree_to_data(c) for c in node.children]}
    if isinstance(node, Not):
        return {"not": [tree_to_data(node.child)]}

    raise TypeError(f"Unknown node {node!r}")


def target_to_data(t: SemialgebraicSet) -> dict:
    data = tree_to_data(t.tree)
    if t.declared_hull is not None and t.declared_hull.rows:
        data["hull"] = t.declared_hull.to_strings()

    return data


def automaton_to_data(a: MullerAutomaton) -> dict:
    return {
        "states": a.n_states,
        "initial": a.initial,
        "delta": [list(row) for row in a.delta],
        "acceptance": a.acceptance.to_data(),
    }


def markov_to_data(inst: StochasticInstance) -> dict:
    data = {
        "kind": "markov",
        "matrix": inst.M.to_strings(),
        "initial": vector_to_data(inst.mu),
        "targets": [target_to_data(t) for t in inst.targets],
        "spec": automaton_to_data(inst.spec),
    }
    if inst.intrinsic_dims:
        data["intrinsic_dim"] = list(inst.intrinsic_dims)

    return data


def lds_to_data(lds: LdsInstance) -> dict:
    return {
        "kind": "lds",
        "matrix": lds.A.to_strings(),
        "initial": vector_to_data(lds.v),
        "targets": [target_to_data(t) for t in lds.targets],
        "spec": automaton_to_data(lds.spec),
    }


def reduced_to_lds(red: ReducedInstance) -> LdsInstance:
    """The reduced instance as a self-contained system started at A^n0 v"""
    return LdsInstance(red.A, red.start, red.targets3, red.spec3)


def reduced_to_data(red: ReducedInstance) -> dict:
    data = lds_to_data(reduced_to_lds(red))
    data["certificate"] = red.certificate.to_data()
    return data
