"""Common-sense fact store.

Five fact kinds cover what the explanation generators need: part-whole
structure (with a required flag), support between concepts, pairwise
incompatibility, attribute defaults, and synonymy. The store is a value;
asserting or retracting returns a new store. Matching always works on
lemmas and looks through synonym equivalence, so "human" facts apply to
"person" questions.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from pgx.pg import ConceptLabel, lemma


class FactKind(str, Enum):
    PART_OF = "part_of"
    SUPPORTS = "supports"
    INCOMPATIBLE = "incompatible"
    DEFAULT_OF = "default_of"
    SYNONYM = "synonym"


@dataclass(frozen=True)
class Fact:
    """One fact; args are lemma-normalized, symmetric kinds store args sorted."""

    kind: FactKind
    args: tuple[str, ...]
    required: bool = False  # part_of only
    note: str = ""  # supports only


def part_of(part: ConceptLabel, whole: ConceptLabel, required: bool = False) -> Fact:
    return Fact(FactKind.PART_OF, (lemma(part), lemma(whole)), required=required)


def supports(premise: ConceptLabel, conclusion: ConceptLabel, note: str = "") -> Fact:
    return Fact(FactKind.SUPPORTS, (lemma(premise), lemma(conclusion)), note=note)


def incompatible(a: ConceptLabel, b: ConceptLabel) -> Fact:
    return Fact(FactKind.INCOMPATIBLE, tuple(sorted((lemma(a), lemma(b)))))


def default_of(attribute: str, concept: ConceptLabel, value: str) -> Fact:
    return Fact(FactKind.DEFAULT_OF, (lemma(attribute), lemma(concept), value))


def synonym(a: ConceptLabel, b: ConceptLabel) -> Fact:
    return Fact(FactKind.SYNONYM, tuple(sorted((lemma(a), lemma(b)))))


class CyclicPartOfError(ValueError):
    def __init__(self, cycle: list[str]):
        super().__init__("cyclic-part-of: " + " -> ".join(cycle))
        self.cycle = cycle


@dataclass(frozen=True)
class Ontology:
    facts: frozenset[Fact] = field(default_factory=frozenset)

    def __iter__(self):
        return iter(sorted(self.facts, key=_fact_key))

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts


def _fact_key(f: Fact) -> tuple:
    return (f.kind.value, f.args, f.required, f.note)


def _part_of_cycle(facts: Iterable[Fact]) -> Optional[list[str]]:
    """Find a cycle in part -> whole edges, if any."""
    edges: dict[str, set[str]] = {}
    for f in facts:
        if f.kind is FactKind.PART_OF:
            edges.setdefault(f.args[0], set()).add(f.args[1])
    color: dict[str, int] = {}
    parent: dict[str, str] = {}

    def dfs(start: str) -> Optional[list[str]]:
        stack = [(start, iter(sorted(edges.get(start, ()))))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color.get(nxt, 0) == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(sorted(edges.get(nxt, ())))))
                    advanced = True
                    break
                if color.get(nxt) == 1:
                    cycle = [nxt]
                    cur = node
                    while cur != nxt:
                        cycle.append(cur)
                        cur = parent[cur]
                    cycle.append(nxt)
                    cycle.reverse()
                    return cycle
            if not advanced:
                color[node] = 2
                stack.pop()
        return None

    for start in sorted(edges):
        if color.get(start, 0) == 0:
            found = dfs(start)
            if found:
                return found
    return None


def assert_fact(onto: Ontology, fact: Fact) -> Ontology:
    """Add a fact; idempotent. Rejects part-of cycles."""
    if fact in onto.facts:
        return onto
    new = onto.facts | {fact}
    if fact.kind is FactKind.PART_OF:
        cycle = _part_of_cycle(new)
        if cycle:
            raise CyclicPartOfError(cycle)
    return Ontology(new)


def retract_fact(onto: Ontology, fact: Fact) -> Ontology:
    if fact not in onto.facts:
        return onto
    return Ontology(onto.facts - {fact})


# ---------------------------------------------------------------------------
# synonym closure + pattern queries
# ---------------------------------------------------------------------------


def _canon_map(onto: Ontology) -> dict[str, str]:
    """Union-find over synonym facts; maps each label to its class representative."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in sorted(onto.facts, key=_fact_key):
        if f.kind is FactKind.SYNONYM:
            a, b = find(f.args[0]), find(f.args[1])
            if a != b:
                lo, hi = sorted((a, b))
                parent[hi] = lo
    return {label: find(label) for label in parent}


def canonical_label(onto: Ontology, label: ConceptLabel) -> str:
    """Representative of the label's synonym class (lemma if no synonyms)."""
    word = lemma(label)
    return _canon_map(onto).get(word, word)


def same_concept(onto: Ontology, a: ConceptLabel, b: ConceptLabel) -> bool:
    return canonical_label(onto, a) == canonical_label(onto, b)


def query_facts(
    onto: Ontology, kind: FactKind, *pattern: Optional[str]
) -> list[Fact]:
    """All facts of the kind whose args unify with the pattern.

    None is a wildcard; concrete args match up to synonym closure.
    Symmetric kinds match in either arg order.
    """
    canon = _canon_map(onto)

    def c(label: str) -> str:
        word = lemma(label)
        return canon.get(word, word)

    want = [None if p is None else c(p) for p in pattern]
    out = []
    for f in sorted(onto.facts, key=_fact_key):
        if f.kind is not kind:
            continue
        args = [c(a) for a in f.args]
        if len(want) > len(args):
            continue
        orders = [args]
        if kind in (FactKind.INCOMPATIBLE, FactKind.SYNONYM):
            orders.append(list(reversed(args)))
        for candidate in orders:
            if all(w is None or w == a for w, a in zip(want, candidate)):
                out.append(f)
                break
    return out


def required_parts(onto: Ontology, concept: ConceptLabel) -> list[str]:
    """Parts that a concept cannot exist without, sorted."""
    facts = query_facts(onto, FactKind.PART_OF, None, concept)
    return sorted({f.args[0] for f in facts if f.required})


def parts_of(onto: Ontology, concept: ConceptLabel) -> list[str]:
    return sorted({f.args[0] for f in query_facts(onto, FactKind.PART_OF, None, concept)})


def incompatibles_of(onto: Ontology, label: ConceptLabel) -> list[str]:
    """Labels incompatible with the given one (either storage order)."""
    canon = _canon_map(onto)
    me = canon.get(lemma(label), lemma(label))
    out = set()
    for f in query_facts(onto, FactKind.INCOMPATIBLE, label):
        for arg in f.args:
            if canon.get(arg, arg) != me:
                out.add(arg)
    return sorted(out)


# ---------------------------------------------------------------------------
# file format: one fact per line
# ---------------------------------------------------------------------------


class OntologyParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def load_ontology(text: str) -> Ontology:
    onto = Ontology()
    for i, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as e:
            raise OntologyParseError(str(e), i) from None
        head, args = tokens[0], tokens[1:]
        try:
            if head == "part_of":
                if len(args) == 3 and args[2] == "required":
                    fact = part_of(args[0], args[1], required=True)
                elif len(args) == 2:
                    fact = part_of(args[0], args[1])
                else:
                    raise OntologyParseError(
                        "expected: part_of <part> <whole> [required]", i
                    )
            elif head == "supports":
                if len(args) == 3:
                    fact = supports(args[0], args[1], note=args[2])
                elif len(args) == 2:
                    fact = supports(args[0], args[1])
                else:
                    raise OntologyParseError(
                        'expected: supports <premise> <conclusion> ["note"]', i
                    )
            elif head == "incompatible":
                if len(args) != 2:
                    raise OntologyParseError("expected: incompatible <a> <b>", i)
                fact = incompatible(args[0], args[1])
            elif head == "default_of":
                if len(args) != 3:
                    raise OntologyParseError(
                        "expected: default_of <attribute> <concept> <value>", i
                    )
                fact = default_of(args[0], args[1], args[2])
            elif head == "synonym":
                if len(args) != 2:
                    raise OntologyParseError("expected: synonym <a> <b>", i)
                fact = synonym(args[0], args[1])
            else:
                raise OntologyParseError(f"unknown fact kind {head!r}", i)
            onto = assert_fact(onto, fact)
        except CyclicPartOfError as e:
            raise OntologyParseError(str(e), i) from None
    return onto


def save_ontology(onto: Ontology) -> str:
    lines = []
    for f in onto:
        if f.kind is FactKind.PART_OF:
            lines.append(
                f"part_of {f.args[0]} {f.args[1]}" + (" required" if f.required else "")
            )
        elif f.kind is FactKind.SUPPORTS:
            line = f"supports {f.args[0]} {f.args[1]}"
            if f.note:
                line += f' "{f.note}"'
            lines.append(line)
        elif f.kind is FactKind.INCOMPATIBLE:
            lines.append(f"incompatible {f.args[0]} {f.args[1]}")
        elif f.kind is FactKind.DEFAULT_OF:
            lines.append(f"default_of {f.args[0]} {f.args[1]} {f.args[2]}")
        elif f.kind is FactKind.SYNONYM:
            lines.append(f"synonym {f.args[0]} {f.args[1]}")
    return "\n".join(lines) + ("\n" if lines else "")
