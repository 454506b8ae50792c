"""Parse-graph data model: nodes, scenes, relations, discourse links.

A parse graph (pg) is one concrete reading of a scene produced by an
And-Or grammar: And nodes decompose a concept into parts, Or nodes pick
one alternative among several (the non-selected alternatives stay in the
graph and keep their own detection scores), terminals ground out in
detections. Graphs are immutable values; every mutation-shaped operation
elsewhere in the package builds a modified copy.

Validation never raises: `validate` returns the full list of rule
violations so callers can decide what to do with a broken graph.
`load`/`save` implement a strict canonical JSON form (unknown fields are
errors, ordering is fixed) so serialization is a fixed point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

NodeId = str
SceneId = str
ConceptLabel = str

_IRREGULAR_PLURALS = {
    "people": "person",
    "men": "man",
    "women": "woman",
    "children": "child",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
}


def lemma(label: str) -> str:
    """Normalize a concept label: lower-case, plural 's' stripped.

    Irregular plurals come from a small fixed table; anything richer than
    this belongs in the ontology's synonym facts.
    """
    word = label.strip().lower()
    if word in _IRREGULAR_PLURALS:
        return _IRREGULAR_PLURALS[word]
    if len(word) > 3 and word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    return word


class NodeKind(str, Enum):
    AND = "and"
    OR = "or"
    TERMINAL = "terminal"


class DiscourseRelation(str, Enum):
    CONTRAST = "contrast"
    SEQUENCE = "sequence"
    CAUSE = "cause"
    ELABORATION = "elaboration"
    BACKGROUND = "background"


class Nuclearity(str, Enum):
    A = "a"
    B = "b"
    BOTH = "both"


RELATION_KINDS = ("spatial", "temporal", "causal")


@dataclass(frozen=True)
class Scene:
    id: SceneId
    frame_range: tuple[int, int]
    caption: Optional[str] = None


@dataclass(frozen=True)
class PgNode:
    id: NodeId
    label: ConceptLabel
    kind: NodeKind
    scene: SceneId
    children: tuple[NodeId, ...] = ()
    score: Optional[float] = None
    selected_child: Optional[NodeId] = None
    attributes: Mapping[ConceptLabel, str] = field(default_factory=dict)
    region: Optional[tuple[float, float, float, float]] = None


@dataclass(frozen=True)
class Relation:
    src: NodeId
    dst: NodeId
    rtype: str  # "spatial:<tag>" | "temporal:<tag>" | "causal:<tag>"


@dataclass(frozen=True)
class DiscourseLink:
    a: SceneId
    b: SceneId
    relation: DiscourseRelation
    nucleus: Nuclearity


@dataclass(frozen=True)
class ParseGraph:
    scenes: tuple[Scene, ...]
    nodes: tuple[PgNode, ...]
    roots: Mapping[SceneId, NodeId]  # one root per scene
    relations: tuple[Relation, ...] = ()
    discourse: tuple[DiscourseLink, ...] = ()

    def node(self, node_id: NodeId) -> PgNode:
        try:
            return self._node_index[node_id]
        except KeyError:
            raise UnknownIdError(f"no such node: {node_id}") from None

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self._node_index

    def scene(self, scene_id: SceneId) -> Scene:
        for s in self.scenes:
            if s.id == scene_id:
                return s
        raise UnknownIdError(f"no such scene: {scene_id}")

    def has_scene(self, scene_id: SceneId) -> bool:
        return any(s.id == scene_id for s in self.scenes)

    @property
    def _node_index(self) -> dict[NodeId, PgNode]:
        # cached on first use; the instance is frozen so this stays valid
        cache = object.__getattribute__(self, "__dict__").get("_idx")
        if cache is None:
            cache = {n.id: n for n in self.nodes}
            object.__getattribute__(self, "__dict__")["_idx"] = cache
        return cache

    @property
    def _parent_index(self) -> dict[NodeId, NodeId]:
        cache = object.__getattribute__(self, "__dict__").get("_pidx")
        if cache is None:
            cache = {}
            for n in self.nodes:
                for c in n.children:
                    cache.setdefault(c, n.id)
            object.__getattribute__(self, "__dict__")["_pidx"] = cache
        return cache


class UnknownIdError(KeyError):
    """A query referenced a node or scene id that is not in the graph."""

    def __str__(self) -> str:  # KeyError quotes its message by default
        return self.args[0] if self.args else ""


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str  # node/scene/relation identifier the rule fired on
    message: str


ValidationReport = list  # list[Violation]


def validate(pg: ParseGraph) -> list[Violation]:
    """Check every type-level and graph-level invariant.

    Violations are data, not failures; the list is sorted by
    (subject id, rule, message) so reports are reproducible.
    """
    out: list[Violation] = []
    scene_ids: set[SceneId] = set()
    for s in pg.scenes:
        if not s.id:
            out.append(Violation("empty-id", s.id, "scene id must be non-empty"))
        if s.id in scene_ids:
            out.append(Violation("duplicate-scene-id", s.id, "scene id repeats"))
        scene_ids.add(s.id)
        start, end = s.frame_range
        if start < 0 or end < 0 or start > end:
            out.append(
                Violation("frame-range", s.id, f"bad frame range ({start}, {end})")
            )
    seen: list[Scene] = []
    for s in pg.scenes:
        for t in seen:
            lo = max(s.frame_range[0], t.frame_range[0])
            hi = min(s.frame_range[1], t.frame_range[1])
            if lo <= hi:
                out.append(
                    Violation(
                        "frame-overlap",
                        s.id,
                        f"frames overlap with scene {t.id}",
                    )
                )
        seen.append(s)

    node_ids: set[NodeId] = set()
    for n in pg.nodes:
        if not n.id:
            out.append(Violation("empty-id", n.id, "node id must be non-empty"))
        if n.id in node_ids:
            out.append(Violation("duplicate-node-id", n.id, "node id repeats"))
        node_ids.add(n.id)
        if not n.label:
            out.append(Violation("empty-label", n.id, "node label must be non-empty"))
        if n.score is not None and not (0.0 <= n.score <= 1.0):
            out.append(
                Violation("score-range", n.id, f"score {n.score} outside [0, 1]")
            )
        if n.scene not in scene_ids:
            out.append(Violation("unknown-scene", n.id, f"scene {n.scene} not declared"))
        if n.kind is NodeKind.TERMINAL and n.children:
            out.append(
                Violation("terminal-children", n.id, "terminal node has children")
            )
        if n.kind is NodeKind.OR:
            if len(n.children) < 2:
                out.append(
                    Violation("or-node-arity", n.id, "or node needs >= 2 children")
                )
            if n.selected_child is None:
                out.append(
                    Violation("or-selected-child", n.id, "or node needs a selected child")
                )
            elif n.selected_child not in n.children:
                out.append(
                    Violation(
                        "or-selected-child",
                        n.id,
                        f"selected child {n.selected_child} is not a child",
                    )
                )
        if n.kind is NodeKind.AND and not n.children:
            out.append(Violation("and-node-arity", n.id, "and node needs >= 1 child"))
        if n.kind is not NodeKind.OR and n.selected_child is not None:
            out.append(
                Violation(
                    "selected-child-kind", n.id, "only or nodes select a child"
                )
            )
        for c in n.children:
            if c not in {m.id for m in pg.nodes}:
                out.append(Violation("unknown-child", n.id, f"child {c} does not exist"))

    # each node has at most one parent
    parent_count: dict[NodeId, list[NodeId]] = {}
    for n in pg.nodes:
        for c in n.children:
            parent_count.setdefault(c, []).append(n.id)
    for child, parents in sorted(parent_count.items()):
        if len(parents) > 1:
            out.append(
                Violation(
                    "multiple-parents",
                    child,
                    "node is a child of " + ", ".join(sorted(parents)),
                )
            )

    # roots: exactly one per scene, pointing at real nodes
    for scene_id in sorted(scene_ids):
        if scene_id not in pg.roots:
            out.append(Violation("missing-root", scene_id, "scene has no root"))
    for scene_id, root_id in sorted(pg.roots.items()):
        if scene_id not in scene_ids:
            out.append(
                Violation("root-unknown-scene", scene_id, "root names unknown scene")
            )
        if root_id not in node_ids:
            out.append(
                Violation("root-unknown-node", scene_id, f"root node {root_id} missing")
            )

    # cycles over child edges (DFS with an explicit stack)
    index = {n.id: n for n in pg.nodes}
    color: dict[NodeId, int] = {}  # 0 unseen / 1 on stack / 2 done
    cycle_reported: set[NodeId] = set()

    def walk(start: NodeId) -> None:
        stack: list[tuple[NodeId, int]] = [(start, 0)]
        path: list[NodeId] = []
        while stack:
            nid, i = stack.pop()
            if i == 0:
                if color.get(nid) == 2:
                    continue
                if color.get(nid) == 1:
                    continue
                color[nid] = 1
                path.append(nid)
            node = index.get(nid)
            kids = node.children if node else ()
            if i < len(kids):
                stack.append((nid, i + 1))
                child = kids[i]
                if child not in index:
                    continue
                if color.get(child) == 1:
                    cyc = path[path.index(child):] if child in path else [child]
                    anchor = min(cyc)
                    if anchor not in cycle_reported:
                        cycle_reported.add(anchor)
                        out.append(
                            Violation(
                                "cycle",
                                anchor,
                                "child edges form a cycle: "
                                + " -> ".join(cyc + [child]),
                            )
                        )
                elif color.get(child) != 2:
                    stack.append((child, 0))
            else:
                color[nid] = 2
                if path and path[-1] == nid:
                    path.pop()

    for nid in sorted(index):
        if color.get(nid) is None:
            walk(nid)

    # reachability from the per-scene roots + scene agreement
    reached: dict[NodeId, SceneId] = {}
    for scene_id, root_id in sorted(pg.roots.items()):
        if root_id not in index:
            continue
        frontier = [root_id]
        seen_r: set[NodeId] = set()
        while frontier:
            nid = frontier.pop()
            if nid in seen_r or nid not in index:
                continue
            seen_r.add(nid)
            reached.setdefault(nid, scene_id)
            frontier.extend(index[nid].children)
    for n in pg.nodes:
        home = reached.get(n.id)
        if home is None:
            out.append(
                Violation("unreachable-node", n.id, "not reachable from any scene root")
            )
        elif n.scene != home:
            out.append(
                Violation(
                    "scene-mismatch",
                    n.id,
                    f"node scene {n.scene} but reached from root of {home}",
                )
            )

    for r in pg.relations:
        subj = f"{r.src}->{r.dst}"
        if r.src == r.dst:
            out.append(Violation("relation-self", subj, "relation endpoints equal"))
        for end in (r.src, r.dst):
            if end not in node_ids:
                out.append(
                    Violation("relation-unknown-node", subj, f"endpoint {end} missing")
                )
        kind, _, tag = r.rtype.partition(":")
        if kind not in RELATION_KINDS or not tag:
            out.append(
                Violation("relation-type", subj, f"bad relation type {r.rtype!r}")
            )

    for d in pg.discourse:
        subj = f"{d.a}~{d.b}"
        if d.a == d.b:
            out.append(Violation("discourse-self", subj, "link endpoints equal"))
        for end in (d.a, d.b):
            if end not in scene_ids:
                out.append(
                    Violation("discourse-unknown-scene", subj, f"scene {end} missing")
                )

    out.sort(key=lambda v: (v.subject, v.rule, v.message))
    return out


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------


def by_label(pg: ParseGraph, label: ConceptLabel) -> list[PgNode]:
    """Nodes whose label matches after lemma normalization, by id."""
    want = lemma(label)
    return sorted(
        (n for n in pg.nodes if lemma(n.label) == want), key=lambda n: n.id
    )


def parent_of(pg: ParseGraph, node_id: NodeId) -> Optional[PgNode]:
    pg.node(node_id)  # raises UnknownIdError
    parent = pg._parent_index.get(node_id)
    return pg.node(parent) if parent is not None else None


def children_of(pg: ParseGraph, node_id: NodeId) -> list[PgNode]:
    return [pg.node(c) for c in pg.node(node_id).children]


def in_scene(pg: ParseGraph, scene_id: SceneId) -> list[PgNode]:
    pg.scene(scene_id)  # raises UnknownIdError
    return sorted((n for n in pg.nodes if n.scene == scene_id), key=lambda n: n.id)


def count_instances(pg: ParseGraph, label: ConceptLabel, scene_id: SceneId) -> int:
    want = lemma(label)
    return sum(1 for n in in_scene(pg, scene_id) if lemma(n.label) == want)


def asserted_nodes(pg: ParseGraph) -> list[PgNode]:
    """Nodes the graph actually asserts: walk from each root, following all
    children of And nodes but only the selected child of Or nodes.
    Non-selected Or alternatives stay out (they are competitors, not claims).
    """
    index = pg._node_index
    out: list[PgNode] = []
    seen: set[NodeId] = set()
    for scene_id in sorted(pg.roots):
        frontier = [pg.roots[scene_id]]
        while frontier:
            nid = frontier.pop()
            if nid in seen or nid not in index:
                continue
            seen.add(nid)
            node = index[nid]
            out.append(node)
            if node.kind is NodeKind.OR:
                if node.selected_child is not None:
                    frontier.append(node.selected_child)
            else:
                frontier.extend(node.children)
    return sorted(out, key=lambda n: n.id)


# ---------------------------------------------------------------------------
# serialization: strict schema, canonical form
# ---------------------------------------------------------------------------


class PgFormatError(ValueError):
    """The text is not a well-formed pg file."""


class PgSyntaxError(PgFormatError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class PgSchemaError(PgFormatError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class PgValidationError(ValueError):
    """The file parsed but the graph breaks invariants."""

    def __init__(self, report: list[Violation]):
        lines = "; ".join(f"{v.rule}[{v.subject}]" for v in report)
        super().__init__(f"invalid parse graph: {lines}")
        self.report = report


_TOP_KEYS = {"scenes", "nodes", "roots", "relations", "discourse"}
_SCENE_KEYS = {"id", "frame_range", "caption"}
_NODE_KEYS = {
    "id",
    "label",
    "kind",
    "scene",
    "children",
    "score",
    "selected_child",
    "attributes",
    "region",
}
_REL_KEYS = {"from", "to", "rtype"}
_DISC_KEYS = {"a", "b", "relation", "nucleus"}


def _check_keys(obj: dict, allowed: set, required: set, path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise PgSchemaError(f"unknown field {key!r}", path)
    for key in required:
        if key not in obj:
            raise PgSchemaError(f"missing field {key!r}", path)


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise PgSchemaError(message, path)


def load(text: str) -> ParseGraph:
    """Parse and validate a pg file; reject anything invalid.

    Raises PgSyntaxError / PgSchemaError for malformed text and
    PgValidationError (carrying the full report) for well-formed files
    whose graph breaks invariants.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PgSyntaxError(e.msg, e.pos) from None
    _expect(isinstance(raw, dict), "top level must be an object", "$")
    _check_keys(raw, _TOP_KEYS, _TOP_KEYS, "$")

    scenes = []
    _expect(isinstance(raw["scenes"], list), "must be a list", "$.scenes")
    for i, item in enumerate(raw["scenes"]):
        path = f"$.scenes[{i}]"
        _expect(isinstance(item, dict), "must be an object", path)
        _check_keys(item, _SCENE_KEYS, {"id", "frame_range"}, path)
        fr = item["frame_range"]
        _expect(
            isinstance(fr, list)
            and len(fr) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in fr),
            "frame_range must be a pair of integers",
            path,
        )
        _expect(isinstance(item["id"], str), "id must be a string", path)
        caption = item.get("caption")
        _expect(
            caption is None or isinstance(caption, str), "caption must be a string", path
        )
        scenes.append(Scene(item["id"], (fr[0], fr[1]), caption))

    nodes = []
    _expect(isinstance(raw["nodes"], list), "must be a list", "$.nodes")
    for i, item in enumerate(raw["nodes"]):
        path = f"$.nodes[{i}]"
        _expect(isinstance(item, dict), "must be an object", path)
        _check_keys(item, _NODE_KEYS, {"id", "label", "kind", "scene", "children"}, path)
        _expect(isinstance(item["id"], str), "id must be a string", path)
        _expect(isinstance(item["label"], str), "label must be a string", path)
        _expect(isinstance(item["scene"], str), "scene must be a scene id", path)
        try:
            kind = NodeKind(item["kind"])
        except ValueError:
            raise PgSchemaError(f"bad kind {item['kind']!r}", path) from None
        _expect(
            isinstance(item["children"], list)
            and all(isinstance(c, str) for c in item["children"]),
            "children must be a list of node ids",
            path,
        )
        score = item.get("score")
        _expect(
            score is None or isinstance(score, (int, float)) and not isinstance(score, bool),
            "score must be a number",
            path,
        )
        sel = item.get("selected_child")
        _expect(sel is None or isinstance(sel, str), "selected_child must be an id", path)
        attrs = item.get("attributes", {})
        _expect(
            isinstance(attrs, dict)
            and all(isinstance(k, str) and isinstance(v, str) for k, v in attrs.items()),
            "attributes must map strings to strings",
            path,
        )
        region = item.get("region")
        _expect(
            region is None
            or (
                isinstance(region, list)
                and len(region) == 4
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in region)
            ),
            "region must be [x, y, w, h]",
            path,
        )
        nodes.append(
            PgNode(
                id=item["id"],
                label=item["label"],
                kind=kind,
                scene=item["scene"],
                children=tuple(item["children"]),
                score=float(score) if score is not None else None,
                selected_child=sel,
                attributes=dict(attrs),
                region=tuple(float(v) for v in region) if region is not None else None,
            )
        )

    _expect(isinstance(raw["roots"], dict), "roots must map scene id to node id", "$.roots")
    for k, v in raw["roots"].items():
        _expect(isinstance(v, str), f"root for {k!r} must be a node id", "$.roots")
    roots = dict(raw["roots"])

    relations = []
    _expect(isinstance(raw["relations"], list), "must be a list", "$.relations")
    for i, item in enumerate(raw["relations"]):
        path = f"$.relations[{i}]"
        _expect(isinstance(item, dict), "must be an object", path)
        _check_keys(item, _REL_KEYS, _REL_KEYS, path)
        _expect(
            all(isinstance(item[k], str) for k in ("from", "to", "rtype")),
            "relation fields must be strings",
            path,
        )
        relations.append(Relation(item["from"], item["to"], item["rtype"]))

    discourse = []
    _expect(isinstance(raw["discourse"], list), "must be a list", "$.discourse")
    for i, item in enumerate(raw["discourse"]):
        path = f"$.discourse[{i}]"
        _expect(isinstance(item, dict), "must be an object", path)
        _check_keys(item, _DISC_KEYS, _DISC_KEYS, path)
        try:
            rel = DiscourseRelation(item["relation"])
        except ValueError:
            raise PgSchemaError(f"bad relation {item['relation']!r}", path) from None
        try:
            nuc = Nuclearity(item["nucleus"])
        except ValueError:
            raise PgSchemaError(f"bad nucleus {item['nucleus']!r}", path) from None
        discourse.append(DiscourseLink(item["a"], item["b"], rel, nuc))

    pg = ParseGraph(
        scenes=tuple(scenes),
        nodes=tuple(nodes),
        roots=roots,
        relations=tuple(relations),
        discourse=tuple(discourse),
    )
    report = validate(pg)
    if report:
        raise PgValidationError(report)
    return pg


def save(pg: ParseGraph) -> str:
    """Serialize to the canonical form: scenes by frame start, nodes by id,
    optional fields omitted when absent. save(load(save(pg))) == save(pg).
    """
    scenes = sorted(pg.scenes, key=lambda s: (s.frame_range[0], s.id))
    nodes = sorted(pg.nodes, key=lambda n: n.id)

    def scene_obj(s: Scene) -> dict:
        obj: dict = {"id": s.id, "frame_range": [s.frame_range[0], s.frame_range[1]]}
        if s.caption is not None:
            obj["caption"] = s.caption
        return obj

    def node_obj(n: PgNode) -> dict:
        obj: dict = {
            "id": n.id,
            "label": n.label,
            "kind": n.kind.value,
            "scene": n.scene,
            "children": list(n.children),
        }
        if n.score is not None:
            obj["score"] = n.score
        if n.selected_child is not None:
            obj["selected_child"] = n.selected_child
        if n.attributes:
            obj["attributes"] = {k: n.attributes[k] for k in sorted(n.attributes)}
        if n.region is not None:
            obj["region"] = list(n.region)
        return obj

    doc = {
        "scenes": [scene_obj(s) for s in scenes],
        "nodes": [node_obj(n) for n in nodes],
        "roots": {k: pg.roots[k] for k in sorted(pg.roots)},
        "relations": [
            {"from": r.src, "to": r.dst, "rtype": r.rtype}
            for r in sorted(pg.relations, key=lambda r: (r.src, r.dst, r.rtype))
        ],
        "discourse": [
            {"a": d.a, "b": d.b, "relation": d.relation.value, "nucleus": d.nucleus.value}
            for d in sorted(pg.discourse, key=lambda d: (d.a, d.b, d.relation.value))
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
