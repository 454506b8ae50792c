"""Hypothetical modifications and their consequences.

A modification edits a copy of the parse graph: removing a subtree,
relabeling a node, forcing a concept count in a scene, or setting an
attribute. The consequence report then says what the edited graph breaks:

  (a) ontology violations — required parts now missing, incompatible
      concepts co-asserted within one scene;
  (b) discourse inconsistencies — contrast/sequence/cause links touching
      a modified scene leave the paired scene's root claim unsupported;
  (c) feasibility flips — nodes whose part-based or parent-based
      explanation support appeared or vanished.

Modified graphs may be invalid (that is the point of a counterfactual);
they are never re-validated here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Union

from pgx.ontology import FactKind, Ontology, canonical_label, query_facts
from pgx.pg import (
    ConceptLabel,
    NodeId,
    NodeKind,
    ParseGraph,
    PgNode,
    SceneId,
    UnknownIdError,
    asserted_nodes,
    lemma,
)


@dataclass(frozen=True)
class RemoveNode:
    node: NodeId


@dataclass(frozen=True)
class RelabelNode:
    node: NodeId
    label: ConceptLabel


@dataclass(frozen=True)
class SetCount:
    concept: ConceptLabel
    scene: SceneId
    count: int


@dataclass(frozen=True)
class SetAttribute:
    node: NodeId
    name: str
    value: str


Modification = Union[RemoveNode, RelabelNode, SetCount, SetAttribute]


def modification_to_dict(mod: Modification) -> dict:
    if isinstance(mod, RemoveNode):
        return {"kind": "remove_node", "node": mod.node}
    if isinstance(mod, RelabelNode):
        return {"kind": "relabel_node", "node": mod.node, "label": mod.label}
    if isinstance(mod, SetCount):
        return {
            "kind": "set_count",
            "concept": mod.concept,
            "scene": mod.scene,
            "count": mod.count,
        }
    if isinstance(mod, SetAttribute):
        return {
            "kind": "set_attribute",
            "node": mod.node,
            "name": mod.name,
            "value": mod.value,
        }
    raise TypeError(f"unknown modification {mod!r}")


def modification_from_dict(d: dict) -> Modification:
    kind = d.get("kind")
    try:
        if kind == "remove_node":
            return RemoveNode(d["node"])
        if kind == "relabel_node":
            return RelabelNode(d["node"], d["label"])
        if kind == "set_count":
            return SetCount(d["concept"], d["scene"], int(d["count"]))
        if kind == "set_attribute":
            return SetAttribute(d["node"], d["name"], d["value"])
    except KeyError as e:
        raise ValueError(f"modification missing field {e.args[0]!r}") from None
    raise ValueError(f"unknown modification kind {kind!r}")


@dataclass(frozen=True)
class OntologyViolation:
    rule: str  # "required-part-missing" | "incompatible-co-assertion"
    concepts: tuple[str, ...]  # (whole, part) or sorted (a, b)
    scene: SceneId


@dataclass(frozen=True)
class DiscourseInconsistency:
    relation: str
    scene: SceneId  # paired scene whose claim no longer holds
    node: NodeId  # that scene's root
    label: str


@dataclass(frozen=True)
class FeasibilityFlip:
    node: NodeId
    kind: str  # "parts" (bottom-up support) | "parent" (top-down support)
    before: bool
    after: bool


@dataclass(frozen=True)
class ConsequenceReport:
    ontology: tuple[OntologyViolation, ...] = ()
    discourse: tuple[DiscourseInconsistency, ...] = ()
    feasibility: tuple[FeasibilityFlip, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.ontology or self.discourse or self.feasibility)


# ---------------------------------------------------------------------------
# applying modifications
# ---------------------------------------------------------------------------


def _subtree_ids(pg: ParseGraph, root: NodeId) -> set[NodeId]:
    index = {n.id: n for n in pg.nodes}
    out: set[NodeId] = set()
    stack = [root]
    while stack:
        nid = stack.pop()
        if nid in out or nid not in index:
            continue
        out.add(nid)
        stack.extend(index[nid].children)
    return out


def _drop(pg: ParseGraph, ids: set[NodeId]) -> ParseGraph:
    nodes = []
    for n in pg.nodes:
        if n.id in ids:
            continue
        if any(c in ids for c in n.children) or n.selected_child in ids:
            children = tuple(c for c in n.children if c not in ids)
            selected = n.selected_child
            if selected in ids:
                selected = children[0] if children else None
            n = replace(n, children=children, selected_child=selected)
        nodes.append(n)
    return ParseGraph(
        scenes=pg.scenes,
        nodes=tuple(nodes),
        roots={s: r for s, r in pg.roots.items() if r not in ids},
        relations=tuple(
            r for r in pg.relations if r.src not in ids and r.dst not in ids
        ),
        discourse=pg.discourse,
    )


def apply_modification(pg: ParseGraph, mod: Modification) -> ParseGraph:
    """Apply one modification to a copy; unknown ids raise UnknownIdError."""
    if isinstance(mod, RemoveNode):
        pg.node(mod.node)
        return _drop(pg, _subtree_ids(pg, mod.node))

    if isinstance(mod, RelabelNode):
        target = pg.node(mod.node)
        nodes = tuple(
            replace(n, label=mod.label) if n.id == target.id else n for n in pg.nodes
        )
        return replace(pg, nodes=nodes)

    if isinstance(mod, SetAttribute):
        target = pg.node(mod.node)
        updated = replace(
            target, attributes={**dict(target.attributes), mod.name: mod.value}
        )
        nodes = tuple(updated if n.id == target.id else n for n in pg.nodes)
        return replace(pg, nodes=nodes)

    if isinstance(mod, SetCount):
        pg.scene(mod.scene)
        if mod.count < 0:
            raise ValueError(f"count must be >= 0, got {mod.count}")
        want_label = lemma(mod.concept)

        def present(g: ParseGraph) -> list[NodeId]:
            return sorted(
                n.id
                for n in g.nodes
                if n.scene == mod.scene and lemma(n.label) == want_label
            )

        matching = present(pg)
        while len(present(pg)) > mod.count:
            pg = _drop(pg, _subtree_ids(pg, max(present(pg))))
        if mod.count > len(matching) and matching:
            donor = matching[-1]
            parent = next((n for n in pg.nodes if donor in n.children), None)
            new_nodes = list(pg.nodes)
            extra_children: list[NodeId] = []
            for k in range(1, mod.count - len(matching) + 1):
                mapping = {
                    old: f"{old}~{k}" for old in sorted(_subtree_ids(pg, donor))
                }
                for old in sorted(mapping):
                    src = pg.node(old)
                    new_nodes.append(
                        replace(
                            src,
                            id=mapping[old],
                            children=tuple(mapping[c] for c in src.children),
                            selected_child=(
                                mapping.get(src.selected_child)
                                if src.selected_child is not None
                                else None
                            ),
                        )
                    )
                extra_children.append(mapping[donor])
            if parent is not None and extra_children:
                new_nodes = [
                    replace(n, children=n.children + tuple(extra_children))
                    if n.id == parent.id
                    else n
                    for n in new_nodes
                ]
            return replace(pg, nodes=tuple(new_nodes))
        return pg

    raise TypeError(f"unknown modification {mod!r}")


def apply_modifications(pg: ParseGraph, mods: Iterable[Modification]) -> ParseGraph:
    for mod in mods:
        pg = apply_modification(pg, mod)
    return pg


# ---------------------------------------------------------------------------
# consequences
# ---------------------------------------------------------------------------


def modified_scenes(pg: ParseGraph, mods: Iterable[Modification]) -> set[SceneId]:
    """Scenes a modification list touches, resolved against the base graph."""
    out: set[SceneId] = set()
    for mod in mods:
        if isinstance(mod, (RemoveNode, RelabelNode, SetAttribute)):
            if pg.has_node(mod.node):
                out.add(pg.node(mod.node).scene)
        elif isinstance(mod, SetCount):
            out.add(mod.scene)
    return out


def _asserted_labels_by_scene(pg: ParseGraph, onto: Ontology) -> dict[SceneId, set[str]]:
    out: dict[SceneId, set[str]] = {}
    for node in asserted_nodes(pg):
        out.setdefault(node.scene, set()).add(canonical_label(onto, node.label))
    return out


def ontology_violations(pg: ParseGraph, onto: Ontology) -> tuple[OntologyViolation, ...]:
    """Check every part-of and incompatibility fact against asserted labels,
    scene by scene."""
    by_scene = _asserted_labels_by_scene(pg, onto)
    out: list[OntologyViolation] = []
    for fact in onto:
        if fact.kind is FactKind.PART_OF and fact.required:
            part, whole = fact.args
            part_c = canonical_label(onto, part)
            whole_c = canonical_label(onto, whole)
            for scene_id in sorted(by_scene):
                labels = by_scene[scene_id]
                if whole_c in labels and part_c not in labels:
                    out.append(
                        OntologyViolation(
                            "required-part-missing", (whole, part), scene_id
                        )
                    )
        elif fact.kind is FactKind.INCOMPATIBLE:
            a, b = fact.args
            a_c = canonical_label(onto, a)
            b_c = canonical_label(onto, b)
            for scene_id in sorted(by_scene):
                labels = by_scene[scene_id]
                if a_c in labels and b_c in labels:
                    out.append(
                        OntologyViolation(
                            "incompatible-co-assertion",
                            tuple(sorted((a, b))),
                            scene_id,
                        )
                    )
    out.sort(key=lambda v: (v.rule, v.concepts, v.scene))
    return tuple(out)


def discourse_inconsistencies(
    pg: ParseGraph, touched: set[SceneId]
) -> tuple[DiscourseInconsistency, ...]:
    """Links whose paired scene's root claim loses support when the other
    side changes. Elaboration/background links carry no such entailment."""
    out: list[DiscourseInconsistency] = []
    for link in pg.discourse:
        if link.relation.value not in ("contrast", "sequence", "cause"):
            continue
        ends = {link.a, link.b}
        if not ends & touched:
            continue
        for other in sorted(ends - touched):
            root = pg.roots.get(other)
            if root is None or not pg.has_node(root):
                continue
            out.append(
                DiscourseInconsistency(
                    relation=link.relation.value,
                    scene=other,
                    node=root,
                    label=pg.node(root).label,
                )
            )
    out.sort(key=lambda d: (d.relation, d.scene, d.node))
    return tuple(out)


def _support_flags(pg: ParseGraph, theta: float) -> dict[NodeId, tuple[bool, bool]]:
    """(parts-support, parent-support) per node: a scored child / parent
    at or above the threshold."""
    parents: dict[NodeId, NodeId] = {}
    for n in pg.nodes:
        for c in n.children:
            parents.setdefault(c, n.id)
    flags = {}
    index = {n.id: n for n in pg.nodes}
    for n in pg.nodes:
        parts = any(
            index[c].score is not None and index[c].score >= theta
            for c in n.children
            if c in index
        )
        p = parents.get(n.id)
        parent = (
            p is not None
            and index[p].score is not None
            and index[p].score >= theta
        )
        flags[n.id] = (parts, parent)
    return flags


def feasibility_flips(
    base: ParseGraph, modified: ParseGraph, theta: float = 0.5
) -> tuple[FeasibilityFlip, ...]:
    before = _support_flags(base, theta)
    after = _support_flags(modified, theta)
    out = []
    for nid in sorted(before):
        b_parts, b_parent = before[nid]
        a_parts, a_parent = after.get(nid, (False, False))
        if b_parts != a_parts:
            out.append(FeasibilityFlip(nid, "parts", b_parts, a_parts))
        if b_parent != a_parent:
            out.append(FeasibilityFlip(nid, "parent", b_parent, a_parent))
    return tuple(out)


def what_if(
    pg: ParseGraph,
    onto: Ontology,
    mods: Iterable[Modification],
    extra_scenes: Iterable[SceneId] = (),
    theta: float = 0.5,
) -> tuple[ParseGraph, ConsequenceReport]:
    """Apply the modifications and report everything the result breaks.

    extra_scenes marks scenes the hypothetical disputes without a
    structural edit (a denied claim that never grounded to a node), so
    discourse links touching them still count.
    """
    mods = list(mods)
    touched = modified_scenes(pg, mods) | set(extra_scenes)
    changed = apply_modifications(pg, mods)
    return changed, ConsequenceReport(
        ontology=ontology_violations(changed, onto),
        discourse=discourse_inconsistencies(changed, touched),
        feasibility=feasibility_flips(pg, changed, theta),
    )
