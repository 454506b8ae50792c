"""Six explanation generators plus template rendering.

Each generator turns (grounded question, parse graph, ontology) into an
Explanation: typed evidence references into the graph/ontology plus text
rendered from fixed templates. Infeasibility is a result, not an error;
the reason string says what was missing so the selection layer can report
honest fallbacks.

The six kinds, in preference-table column order:

  alpha           the node's own detection score versus its alternatives
  beta            bottom-up: detected child parts bind the concept
  gamma           top-down: a parent or context node vouches for it
  counterfactual  what the user's hypothetical change would break
  common_sense    an ontology fact bridging observed and asked concepts
  discourse       rhetorical links between scenes carry the answer
"""

from __future__ import annotations

import importlib.resources
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

from pgx.ontology import Fact, FactKind, Ontology, canonical_label, query_facts
from pgx.pg import (
    DiscourseLink,
    NodeId,
    NodeKind,
    ParseGraph,
    PgNode,
    SceneId,
    lemma,
    parent_of,
)
from pgx.question import GroundedQuestion, QuestionType, SlotMention
from pgx.whatif import (
    ConsequenceReport,
    Modification,
    RelabelNode,
    RemoveNode,
    SetCount,
    what_if,
)


class ExplanationType(str, Enum):
    # definition order is the preference-table column order (used for ties)
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    COUNTERFACTUAL = "counterfactual"
    COMMON_SENSE = "common_sense"
    DISCOURSE = "discourse"


COLUMN_ORDER: tuple[ExplanationType, ...] = tuple(ExplanationType)


@dataclass(frozen=True)
class EvidenceItem:
    """One typed evidence reference; kind decides which fields are set."""

    kind: str  # "node" | "fact" | "discourse" | "comparison"
    node: Optional[NodeId] = None
    score: Optional[float] = None
    fact: Optional[Fact] = None
    link: Optional[DiscourseLink] = None
    label: Optional[str] = None
    vs_label: Optional[str] = None
    vs_score: Optional[float] = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.node is not None:
            out["node"] = self.node
        if self.score is not None:
            out["score"] = self.score
        if self.label is not None:
            out["label"] = self.label
        if self.fact is not None:
            out["fact"] = {
                "kind": self.fact.kind.value,
                "args": list(self.fact.args),
                "required": self.fact.required,
                "note": self.fact.note,
            }
        if self.link is not None:
            out["link"] = {
                "a": self.link.a,
                "b": self.link.b,
                "relation": self.link.relation.value,
                "nucleus": self.link.nucleus.value,
            }
        if self.vs_label is not None:
            out["vs_label"] = self.vs_label
        if self.vs_score is not None:
            out["vs_score"] = self.vs_score
        return out


def node_item(n: PgNode) -> EvidenceItem:
    return EvidenceItem(kind="node", node=n.id, score=n.score, label=n.label)


def fact_item(f: Fact) -> EvidenceItem:
    return EvidenceItem(kind="fact", fact=f)


def link_item(link: DiscourseLink) -> EvidenceItem:
    return EvidenceItem(kind="discourse", link=link)


def comparison_item(n: PgNode, rival: PgNode) -> EvidenceItem:
    return EvidenceItem(
        kind="comparison",
        node=n.id,
        score=n.score,
        label=n.label,
        vs_label=rival.label,
        vs_score=rival.score,
    )


@dataclass(frozen=True)
class Fragment:
    """One template invocation: key into the template set plus slot values."""

    template_key: str
    slots: tuple[tuple[str, object], ...]


@dataclass(frozen=True)
class Explanation:
    etype: ExplanationType
    evidence: tuple[EvidenceItem, ...] = ()
    text: str = ""
    feasible: bool = False
    reason: str = ""  # set when infeasible
    fragments: tuple[Fragment, ...] = ()


# ---------------------------------------------------------------------------
# templates
# ---------------------------------------------------------------------------


class RenderInfeasibleError(ValueError):
    pass


def parse_templates(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, template = line.partition(": ")
        if not sep:
            raise ValueError(f"bad template line: {raw!r}")
        out[key.strip()] = template
    return out


def default_templates() -> dict[str, str]:
    text = (
        importlib.resources.files("pgx").joinpath("data/templates.txt").read_text()
    )
    return parse_templates(text)


_DEFAULT_TEMPLATES = None


def _templates(templates: Optional[Mapping[str, str]]) -> Mapping[str, str]:
    global _DEFAULT_TEMPLATES
    if templates is not None:
        return templates
    if _DEFAULT_TEMPLATES is None:
        _DEFAULT_TEMPLATES = default_templates()
    return _DEFAULT_TEMPLATES


def join_list(items: Sequence[str]) -> str:
    """Comma-join with a final "and": [a] -> "a", [a, b] -> "a and b"."""
    items = list(items)
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


def render_fragment(frag: Fragment, templates: Optional[Mapping[str, str]] = None) -> str:
    table = _templates(templates)
    template = table[frag.template_key]
    filled = {}
    for name, value in frag.slots:
        if isinstance(value, (list, tuple)):
            filled[name] = join_list([str(v) for v in value])
        else:
            filled[name] = str(value)
    return template.format(**filled)


def render(e: Explanation, templates: Optional[Mapping[str, str]] = None) -> str:
    """Deterministic text for a feasible explanation; fragments joined with
    a single space."""
    if not e.feasible:
        raise RenderInfeasibleError(
            f"render-infeasible: {e.etype.value} explanation has no evidence"
            + (f" ({e.reason})" if e.reason else "")
        )
    return " ".join(render_fragment(f, templates) for f in e.fragments)


def _display(label: str) -> str:
    return label.replace("_", " ")


_INFINITIVES = {
    "sitting": "sit",
    "running": "run",
    "coming": "come",
    "making": "make",
    "taking": "take",
    "having": "have",
    "leaving": "leave",
    "moving": "move",
    "getting": "get",
    "putting": "put",
    "swimming": "swim",
}


def _infinitive(word: str) -> str:
    if word in _INFINITIVES:
        return _INFINITIVES[word]
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        if len(stem) >= 2 and stem[-1] == stem[-2]:
            return stem[:-1]
        return stem
    return word


def _is_action(label: str) -> bool:
    return label.endswith("ing")


def _finish(
    etype: ExplanationType,
    evidence: Sequence[EvidenceItem],
    fragments: Sequence[Fragment],
    templates: Optional[Mapping[str, str]],
) -> Explanation:
    e = Explanation(
        etype=etype,
        evidence=tuple(evidence),
        feasible=True,
        fragments=tuple(fragments),
    )
    return Explanation(
        etype=e.etype,
        evidence=e.evidence,
        text=render(e, templates),
        feasible=True,
        fragments=e.fragments,
    )


def _infeasible(etype: ExplanationType, reason: str) -> Explanation:
    return Explanation(etype=etype, feasible=False, reason=reason)


# ---------------------------------------------------------------------------
# slot helpers
# ---------------------------------------------------------------------------


def _target_nodes(gq: GroundedQuestion, pg: ParseGraph) -> list[PgNode]:
    """The nodes the question is about: x slot, or y when x is absent
    (the why-not form stores its concept in y)."""
    ids = gq.x_nodes or gq.y_nodes
    return [pg.node(i) for i in ids]


def _target_mention(gq: GroundedQuestion) -> Optional[SlotMention]:
    return gq.q.x if gq.q.x is not None else gq.q.y


def _target_hypothetical(gq: GroundedQuestion) -> bool:
    if gq.q.x is not None:
        return gq.x_hypothetical
    return gq.y_hypothetical


# ---------------------------------------------------------------------------
# alpha: direct detection score vs alternatives
# ---------------------------------------------------------------------------


def explain_alpha(
    gq: GroundedQuestion,
    pg: ParseGraph,
    templates: Optional[Mapping[str, str]] = None,
) -> Explanation:
    nodes = [n for n in _target_nodes(gq, pg) if n.score is not None]
    if not nodes:
        return _infeasible(ExplanationType.ALPHA, "no detection score for the concept")
    primary = nodes[0]

    rivals: list[PgNode] = []
    parent = parent_of(pg, primary.id)
    if parent is not None and parent.kind is NodeKind.OR:
        rivals = [
            pg.node(c)
            for c in parent.children
            if c != primary.id and pg.node(c).score is not None
        ]

    evidence = [node_item(primary)] + [comparison_item(primary, r) for r in rivals]
    higher = [r for r in rivals if r.score > primary.score]
    tied = [r for r in rivals if r.score == primary.score]
    if higher:
        variant, rival_labels = "lower", [_display(r.label) for r in higher]
    elif tied:
        variant, rival_labels = "tied", [_display(r.label) for r in tied]
    else:
        variant, rival_labels = "highest", []

    agent = next(
        (pg.node(c) for c in primary.children if not _is_action(pg.node(c).label)),
        None,
    )
    if _is_action(primary.label) and agent is not None:
        slots: list[tuple[str, object]] = [
            ("agent", _display(agent.label)),
            ("verb", _infinitive(primary.label)),
        ]
        key = f"alpha.action.{variant}"
    else:
        slots = [("concept", _display(primary.label))]
        key = f"alpha.entity.{variant}"
    if rival_labels:
        slots.append(("rivals", rival_labels))
    return _finish(
        ExplanationType.ALPHA, evidence, [Fragment(key, tuple(slots))], templates
    )


# ---------------------------------------------------------------------------
# beta: bottom-up child-part binding
# ---------------------------------------------------------------------------


def explain_beta(
    gq: GroundedQuestion,
    pg: ParseGraph,
    theta_child: float = 0.5,
    templates: Optional[Mapping[str, str]] = None,
) -> Explanation:
    targets = _target_nodes(gq, pg)
    if not targets:
        return _infeasible(ExplanationType.BETA, "concept not present in the graph")
    evidence: list[EvidenceItem] = []
    owner: Optional[str] = None
    for target in targets:
        bound = [
            pg.node(c)
            for c in target.children
            if pg.node(c).score is not None and pg.node(c).score >= theta_child
        ]
        if bound and owner is None:
            owner = target.label
        evidence.extend(node_item(b) for b in bound)
    if not evidence:
        return _infeasible(
            ExplanationType.BETA,
            f"no child part detected at or above {theta_child}",
        )
    parts = [_display(item.label) for item in evidence]
    frag = Fragment(
        "beta.parts", (("owner", _display(owner)), ("parts", tuple(parts)))
    )
    return _finish(ExplanationType.BETA, evidence, [frag], templates)


# ---------------------------------------------------------------------------
# gamma: top-down support from a parent or ontology-linked context
# ---------------------------------------------------------------------------


def explain_gamma(
    gq: GroundedQuestion,
    pg: ParseGraph,
    onto: Optional[Ontology] = None,
    theta_parent: float = 0.5,
    templates: Optional[Mapping[str, str]] = None,
) -> Explanation:
    onto = onto if onto is not None else Ontology()
    mention = _target_mention(gq)
    if mention is None:
        return _infeasible(ExplanationType.GAMMA, "question carries no concept")

    targets = _target_nodes(gq, pg)
    if targets:
        for target in targets:
            parent = parent_of(pg, target.id)
            if parent is None:
                continue
            if parent.score is None or parent.score < theta_parent:
                continue
            key = "gamma.pose" if _is_action(parent.label) else "gamma.whole"
            frag = Fragment(
                key,
                (
                    ("subject", _display(target.label)),
                    ("context", _display(parent.label)),
                ),
            )
            return _finish(ExplanationType.GAMMA, [node_item(parent)], [frag], templates)
        return _infeasible(
            ExplanationType.GAMMA,
            f"no parent node scored at or above {theta_parent}",
        )

    # hypothetical concept: look for an ontology bridge from any scored node
    concept = mention.concept
    for node in sorted(pg.nodes, key=lambda n: n.id):
        if node.score is None or node.score < theta_parent:
            continue
        bridges = query_facts(onto, FactKind.SUPPORTS, node.label, concept)
        bridges += query_facts(onto, FactKind.PART_OF, concept, node.label)
        bridges += query_facts(onto, FactKind.PART_OF, node.label, concept)
        if bridges:
            frag = Fragment(
                "gamma.bridge",
                (
                    ("concept", _display(concept)),
                    ("evidence", _display(node.label)),
                ),
            )
            evidence = [node_item(node)] + [fact_item(f) for f in bridges]
            return _finish(ExplanationType.GAMMA, evidence, [frag], templates)
    return _infeasible(
        ExplanationType.GAMMA, "no scored node is linked to the concept"
    )


# ---------------------------------------------------------------------------
# common sense: ontology facts bridging observation and question
# ---------------------------------------------------------------------------


def explain_commonsense(
    gq: GroundedQuestion,
    pg: ParseGraph,
    onto: Ontology,
    templates: Optional[Mapping[str, str]] = None,
) -> Explanation:
    from pgx.pg import asserted_nodes

    mention = _target_mention(gq)
    if mention is None:
        return _infeasible(ExplanationType.COMMON_SENSE, "question carries no concept")
    target = mention.concept

    observed: dict[str, list[PgNode]] = {}
    for node in asserted_nodes(pg):
        observed.setdefault(canonical_label(onto, node.label), []).append(node)

    def nodes_for(label: str) -> list[PgNode]:
        return observed.get(canonical_label(onto, label), [])

    # 1. a grounded premise supporting the asked concept
    for f in query_facts(onto, FactKind.SUPPORTS, None, target):
        premise_nodes = nodes_for(f.args[0])
        if premise_nodes:
            frag = Fragment(
                "common_sense.supports",
                (
                    ("premise", _display(f.args[0])),
                    ("conclusion", _display(f.args[1])),
                ),
            )
            evidence = [fact_item(f)] + [node_item(n) for n in premise_nodes]
            return _finish(ExplanationType.COMMON_SENSE, evidence, [frag], templates)

    # 2. something observed is incompatible with the asked concept
    for f in query_facts(onto, FactKind.INCOMPATIBLE, target):
        target_c = canonical_label(onto, target)
        others = [a for a in f.args if canonical_label(onto, a) != target_c]
        for other in others:
            other_nodes = nodes_for(other)
            if other_nodes:
                frag = Fragment(
                    "common_sense.incompatible",
                    (("a", _display(other)), ("b", _display(target))),
                )
                evidence = [fact_item(f)] + [node_item(n) for n in other_nodes]
                return _finish(
                    ExplanationType.COMMON_SENSE, evidence, [frag], templates
                )

    # 3. the asked concept is some observed concept's default attribute value
    for f in sorted(onto.facts, key=lambda f: (f.kind.value, f.args)):
        if f.kind is not FactKind.DEFAULT_OF:
            continue
        attribute, concept, value = f.args
        if lemma(value) != lemma(target):
            continue
        concept_nodes = nodes_for(concept)
        if concept_nodes:
            frag = Fragment(
                "common_sense.default",
                (
                    ("attribute", _display(attribute)),
                    ("concept", _display(concept)),
                    ("value", _display(value)),
                ),
            )
            evidence = [fact_item(f)] + [node_item(n) for n in concept_nodes]
            return _finish(ExplanationType.COMMON_SENSE, evidence, [frag], templates)

    return _infeasible(
        ExplanationType.COMMON_SENSE,
        "no ontology fact connects the question to what the graph observed",
    )


# ---------------------------------------------------------------------------
# counterfactual: consequences of the hypothetical the question implies
# ---------------------------------------------------------------------------


def _prune_nested(pg: ParseGraph, ids: Sequence[NodeId]) -> list[NodeId]:
    """Drop ids that sit inside another listed id's subtree."""
    keep = []
    id_set = set(ids)
    for nid in sorted(id_set):
        cur = nid
        nested = False
        while True:
            parent = parent_of(pg, cur)
            if parent is None:
                break
            if parent.id in id_set:
                nested = True
                break
            cur = parent.id
        if not nested:
            keep.append(nid)
    return keep


def derive_modifications(
    gq: GroundedQuestion, pg: ParseGraph, onto: Ontology
) -> tuple[list[Modification], set[SceneId]]:
    """Translate a question's contrast into graph edits.

    Denials remove the denied nodes; X-versus-Y contrasts relabel the
    incumbent to the asserted concept; count contrasts force the foil's
    count. Returns (modifications, disputed scenes that got no edit).
    """
    q = gq.q
    qt = q.qtype
    mods: list[Modification] = []
    extra: set[SceneId] = set()

    def mention_scenes(mention: Optional[SlotMention]) -> set[SceneId]:
        if mention is not None and mention.scene and pg.has_scene(mention.scene):
            return {mention.scene}
        return set()

    if qt in (QuestionType.WH_X, QuestionType.NOT_X, QuestionType.DO_NOT_X):
        # deny X outright
        if gq.x_nodes:
            for nid in _prune_nested(pg, gq.x_nodes):
                mods.append(RemoveNode(nid))
        else:
            extra |= mention_scenes(q.x)

    elif qt is QuestionType.WH_X_NOT_Y:
        # suppose it had been Y instead of X
        if gq.x_nodes and q.y is not None:
            for nid in _prune_nested(pg, gq.x_nodes):
                mods.append(RelabelNode(nid, q.y.concept))
        else:
            extra |= mention_scenes(q.x)

    elif qt in (QuestionType.NOT_X_BUT_Y, QuestionType.DO_X_NOT_Y):
        # user asserts X, denies the incumbent Y
        if gq.y_nodes and q.x is not None:
            for nid in _prune_nested(pg, gq.y_nodes):
                mods.append(RelabelNode(nid, q.x.concept))
        elif gq.x_nodes:
            for nid in _prune_nested(pg, gq.x_nodes):
                mods.append(RelabelNode(nid, q.x.concept))
        else:
            extra |= mention_scenes(q.y) | mention_scenes(q.x)

    elif qt is QuestionType.WH_NOT_Y:
        # suppose it had been Y after all
        assert q.y is not None
        relabeled = False
        for nid in gq.y_nodes:
            parent = parent_of(pg, nid)
            if parent is not None and parent.kind is NodeKind.OR:
                if parent.selected_child and parent.selected_child != nid:
                    mods.append(RelabelNode(parent.selected_child, q.y.concept))
                    relabeled = True
        if not relabeled:
            from pgx.ontology import incompatibles_of

            rival_labels = set(incompatibles_of(onto, q.y.concept))
            for node in sorted(pg.nodes, key=lambda n: n.id):
                if canonical_label(onto, node.label) in rival_labels:
                    mods.append(RelabelNode(node.id, q.y.concept))
                    relabeled = True
            if not relabeled:
                extra |= mention_scenes(q.y)

    elif qt in (
        QuestionType.WH_X1_NOT_X2,
        QuestionType.NOT_X1_BUT_X2,
        QuestionType.DO_X1_NOT_X2,
    ):
        assert q.x2 is not None
        count = q.x2.count if q.x2.count is not None else q.x.count
        if count is not None:
            scene: Optional[SceneId] = None
            if q.x2.scene and pg.has_scene(q.x2.scene):
                scene = q.x2.scene
            elif q.x.scene and pg.has_scene(q.x.scene):
                scene = q.x.scene
            elif gq.x_nodes:
                scene = pg.node(gq.x_nodes[0]).scene
            if scene is not None:
                mods.append(SetCount(q.x.concept, scene, count))
            else:
                extra |= mention_scenes(q.x) | mention_scenes(q.x2)

    return mods, extra


def explain_counterfactual(
    gq: GroundedQuestion,
    pg: ParseGraph,
    onto: Ontology,
    theta: float = 0.5,
    templates: Optional[Mapping[str, str]] = None,
) -> Explanation:
    mods, extra = derive_modifications(gq, pg, onto)
    if not mods and not extra:
        return _infeasible(
            ExplanationType.COUNTERFACTUAL,
            "the question implies no change to the graph",
        )
    _, report = what_if(pg, onto, mods, extra_scenes=extra, theta=theta)
    if not report.ontology and not report.discourse:
        return _infeasible(
            ExplanationType.COUNTERFACTUAL, "the implied change breaks nothing"
        )

    fragments: list[Fragment] = []
    evidence: list[EvidenceItem] = []
    for v in report.ontology:
        if v.rule == "required-part-missing":
            whole, part = v.concepts
            fragments.append(
                Fragment(
                    "counterfactual.required_part",
                    (("whole", _display(whole)), ("part", _display(part))),
                )
            )
            source = query_facts(onto, FactKind.PART_OF, part, whole)
        else:
            a, b = v.concepts
            fragments.append(
                Fragment(
                    "counterfactual.incompatible",
                    (("a", _display(a)), ("b", _display(b))),
                )
            )
            source = query_facts(onto, FactKind.INCOMPATIBLE, a, b)
        evidence.extend(fact_item(f) for f in source[:1])
    for d in report.discourse:
        fragments.append(
            Fragment(
                "counterfactual.discourse",
                (("label", _display(d.label)), ("scene", d.scene)),
            )
        )
        evidence.append(EvidenceItem(kind="node", node=d.node, label=d.label))
    return _finish(ExplanationType.COUNTERFACTUAL, evidence, fragments, templates)


# ---------------------------------------------------------------------------
# discourse: rhetorical links between scenes
# ---------------------------------------------------------------------------


def explain_discourse(
    gq: GroundedQuestion,
    pg: ParseGraph,
    templates: Optional[Mapping[str, str]] = None,
) -> Explanation:
    scenes: set[SceneId] = set()
    for nid in gq.x_nodes or gq.y_nodes:
        scenes.add(pg.node(nid).scene)
    mention = _target_mention(gq)
    if not scenes and mention is not None and mention.scene:
        if pg.has_scene(mention.scene):
            scenes.add(mention.scene)
    if not scenes:
        return _infeasible(
            ExplanationType.DISCOURSE, "the question names no scene in the graph"
        )

    frame_start = {s.id: s.frame_range[0] for s in pg.scenes}
    fragments: list[Fragment] = []
    evidence: list[EvidenceItem] = []
    for link in pg.discourse:
        ends = {link.a, link.b}
        mine = ends & scenes
        if not mine:
            continue
        others = sorted(ends - scenes) or sorted(mine)
        for other in others:
            root = pg.roots.get(other)
            if root is None or not pg.has_node(root):
                continue
            rel = link.relation.value
            if rel == "sequence":
                key = (
                    "discourse.sequence.earlier"
                    if frame_start.get(other, 0) < min(frame_start[s] for s in mine)
                    else "discourse.sequence.later"
                )
            elif rel == "cause":
                key = (
                    "discourse.cause.antecedent"
                    if other == link.a
                    else "discourse.cause.consequent"
                )
            else:
                key = f"discourse.{rel}"
            root_node = pg.node(root)
            fragments.append(
                Fragment(
                    key,
                    (("scene", other), ("label", _display(root_node.label))),
                )
            )
            evidence.append(link_item(link))
            evidence.append(node_item(root_node))
    if not fragments:
        return _infeasible(
            ExplanationType.DISCOURSE, "no discourse link touches the question's scene"
        )
    return _finish(ExplanationType.DISCOURSE, evidence, fragments, templates)


# ---------------------------------------------------------------------------
# all six at once
# ---------------------------------------------------------------------------


def generate_all(
    gq: GroundedQuestion,
    pg: ParseGraph,
    onto: Ontology,
    theta_child: float = 0.5,
    theta_parent: float = 0.5,
    templates: Optional[Mapping[str, str]] = None,
) -> dict[ExplanationType, Explanation]:
    return {
        ExplanationType.ALPHA: explain_alpha(gq, pg, templates),
        ExplanationType.BETA: explain_beta(gq, pg, theta_child, templates),
        ExplanationType.GAMMA: explain_gamma(gq, pg, onto, theta_parent, templates),
        ExplanationType.COUNTERFACTUAL: explain_counterfactual(
            gq, pg, onto, theta_parent, templates
        ),
        ExplanationType.COMMON_SENSE: explain_commonsense(gq, pg, onto, templates),
        ExplanationType.DISCOURSE: explain_discourse(gq, pg, templates),
    }
