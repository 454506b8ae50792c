"""Contrastive-question classification and slot grounding.

Ten question types, three families:

  WH   "why ..."            the user asks for the model's reasons
  NOT  "i think ..."        the user disputes the model's reading
  DO   "what if ..."        the user explores a hypothetical change

Within a family the contrast shape decides the subtype: an explicit
contrast term ("instead of", "rather than", "and not", "but") makes an
X-vs-Y or X1-vs-X2 question depending on whether the foil is the same
concept (count variant) or a different one; bare negation makes the
not-X/not-Y subtypes. Classification is a fixed rule cascade, no learning.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from pgx.ontology import Ontology, canonical_label
from pgx.pg import ConceptLabel, NodeId, ParseGraph, SceneId, lemma
from enum import Enum


class QuestionType(str, Enum):
    WH_X = "WH_X"
    WH_X_NOT_Y = "WH_X_NOT_Y"
    WH_X1_NOT_X2 = "WH_X1_NOT_X2"
    WH_NOT_Y = "WH_NOT_Y"
    NOT_X = "NOT_X"
    NOT_X1_BUT_X2 = "NOT_X1_BUT_X2"
    NOT_X_BUT_Y = "NOT_X_BUT_Y"
    DO_X_NOT_Y = "DO_X_NOT_Y"
    DO_NOT_X = "DO_NOT_X"
    DO_X1_NOT_X2 = "DO_X1_NOT_X2"


# canonical example per type, used in help payloads and error messages
QUESTION_FORMS: list[tuple[QuestionType, str]] = [
    (QuestionType.WH_X, "Why does the model think the person is sitting?"),
    (QuestionType.WH_X_NOT_Y, "Why does the model think the person is sitting and not standing?"),
    (QuestionType.WH_X1_NOT_X2, "Why does the model think two persons are sitting instead of three?"),
    (QuestionType.WH_NOT_Y, "Why does the model think the person is not standing?"),
    (QuestionType.NOT_X, "I think the person is not sitting?"),
    (QuestionType.NOT_X1_BUT_X2, "I think there are two persons in the video and not just one"),
    (QuestionType.NOT_X_BUT_Y, "I think the person is sitting and not standing"),
    (QuestionType.DO_X_NOT_Y, "What if the person is standing and not sitting?"),
    (QuestionType.DO_NOT_X, "What if the person is not sitting?"),
    (QuestionType.DO_X1_NOT_X2, "What if there are two persons in the video and not one?"),
]


@dataclass(frozen=True)
class SlotMention:
    concept: ConceptLabel
    count: Optional[int] = None
    attribute: Optional[tuple[str, str]] = None
    scene: Optional[SceneId] = None


@dataclass(frozen=True)
class ClassifiedQuestion:
    qtype: QuestionType
    x: Optional[SlotMention]
    y: Optional[SlotMention]
    x2: Optional[SlotMention]
    raw_text: str


class UnrecognizedQuestionError(ValueError):
    """No rule produced a question type; carries what the cascade did see."""

    def __init__(self, text: str, partial: dict):
        cues = ", ".join(f"{k}={v}" for k, v in sorted(partial.items())) or "none"
        super().__init__(f"unrecognized question (cues: {cues}): {text!r}")
        self.partial = partial
        self.text = text


_NUMBER_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
    "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18,
    "nineteen": 19, "twenty": 20,
}

_STOPWORDS = {
    "the", "a", "an", "is", "are", "was", "were", "be", "being", "been",
    "that", "there", "just", "only", "really", "actually", "it", "its",
    "this", "these", "those", "of", "to", "at", "on", "in", "video",
    "image", "frame", "here", "model",
}

# splitters ordered most-specific first; each splits "X <splitter> foil"
_SPLITTERS = [
    " instead of ",
    " rather than ",
    " and not ",
    " but not ",
    " but ",
]


def _normalize(text: str) -> str:
    t = text.lower()
    t = t.replace("n't", " not")
    t = re.sub(r"[?!.,;]+", " ", t)
    t = re.sub(r"\s+", " ", t)
    return t.strip()


def _word_count(token: str) -> Optional[int]:
    if token in _NUMBER_WORDS:
        return _NUMBER_WORDS[token]
    if token.isdigit():
        value = int(token)
        return value if value >= 1 else None
    return None


def _parse_mention(
    text: str, final_predicate: bool = False
) -> tuple[Optional[SlotMention], bool]:
    """Extract (mention, negated) from one clause side.

    Handles "the person", "two persons", "there are two persons in scene1",
    numeral-only foils ("three"), and a trailing predicate after a copula
    ("the person is sitting" -> concept "sitting"). final_predicate treats
    the last token as the predicate when inversion swallowed the copula
    ("why is the person sitting").
    """
    t = text.strip()
    negated = False

    scene: Optional[str] = None
    m = re.search(r"\bin (scene ?\w+)\b", t)
    if m:
        scene = m.group(1).replace(" ", "")
        t = (t[: m.start()] + " " + t[m.end():]).strip()

    tokens = t.split()
    if "not" in tokens:
        negated = True
        tokens = [w for w in tokens if w != "not"]
    if "no" in tokens:
        negated = True
        tokens = [w for w in tokens if w != "no"]

    copula_at = next(
        (i for i, w in enumerate(tokens) if w in ("is", "are", "was", "were")), None
    )
    if copula_at is None and final_predicate and len(tokens) >= 2:
        subject = tokens[:-1]
        predicate = tokens[-1:]
    else:
        subject = tokens[:copula_at] if copula_at is not None else tokens
        predicate = tokens[copula_at + 1:] if copula_at is not None else []

    def content(words: list[str]) -> list[str]:
        return [w for w in words if w not in _STOPWORDS and _word_count(w) is None]

    def first_count(words: list[str]) -> Optional[int]:
        for w in words:
            n = _word_count(w)
            if n is not None:
                return n
        return None

    subj_count = first_count(subject)
    subj_concepts = content(subject)
    pred_concepts = content(predicate)
    pred_count = first_count(predicate)

    # "there are two persons ..." puts everything after the copula
    if not subj_concepts and not subj_count and predicate:
        subj_count = pred_count
        subj_concepts = pred_concepts
        pred_concepts = []
        pred_count = None

    if subj_count is not None and subj_concepts:
        return SlotMention(lemma(subj_concepts[0]), count=subj_count, scene=scene), negated
    if subj_count is not None and not subj_concepts:
        # numeral-only side: concept inherited by the caller
        return SlotMention("", count=subj_count, scene=scene), negated
    if pred_concepts:
        return SlotMention(lemma(pred_concepts[0]), scene=scene), negated
    if subj_concepts:
        return SlotMention(lemma(subj_concepts[0]), scene=scene), negated
    return None, negated


_WH_PREFIX = re.compile(
    r"^why\b( does| do| did| is| are| was| were)?( the model| you| it| the system)?"
    r"( think| thinks| believe| believes)?( that)?\s*"
)
_NOT_PREFIX = re.compile(
    r"^i( do not)?( think| believe| say|'d say)( that)?\s*"
)
_DO_PREFIX = re.compile(r"^what( happens| would happen)? if\s*|^suppose( that)?\s*")


def classify(text: str) -> ClassifiedQuestion:
    """Classify an utterance into one of the ten contrastive types.

    Raises UnrecognizedQuestionError (with the cues that did match) when
    the cascade cannot commit to a type.
    """
    if not text or not text.strip():
        raise UnrecognizedQuestionError(text, {})
    norm = _normalize(text)
    partial: dict = {}

    family: Optional[str] = None
    clause = norm
    outer_negated = False
    inverted = False
    m = _WH_PREFIX.match(norm)
    if m and m.end() > 3:
        family = "WH"
        clause = norm[m.end():]
        # "why is the person sitting": prefix swallowed the copula
        inverted = m.group(1) in (" is", " are", " was", " were") and not m.group(3)
    elif norm.startswith("why"):
        family = "WH"
        clause = norm[3:].strip()
    else:
        m = _NOT_PREFIX.match(norm)
        if m:
            family = "NOT"
            clause = norm[m.end():]
            if m.group(1):  # "i do not think X is P" disputes P
                outer_negated = True
        else:
            m = _DO_PREFIX.match(norm)
            if m:
                family = "DO"
                clause = norm[m.end():]
    if family is None:
        raise UnrecognizedQuestionError(text, partial)
    partial["family"] = family
    clause = clause.strip()
    if not clause:
        raise UnrecognizedQuestionError(text, partial)

    left = clause
    right: Optional[str] = None
    for splitter in _SPLITTERS:
        if splitter == " not ":
            continue  # bare "not" is negation, not a contrast splitter
        idx = clause.find(splitter)
        if idx >= 0:
            partial["splitter"] = splitter.strip().strip(",")
            left, right = clause[:idx], clause[idx + len(splitter):]
            break

    x_mention, x_negated = _parse_mention(left, final_predicate=inverted)
    if x_mention is None:
        raise UnrecognizedQuestionError(text, partial)
    negated = x_negated or outer_negated
    if negated:
        partial["negation"] = True

    if right is not None:
        foil, foil_negated = _parse_mention(right)
        if foil is None:
            raise UnrecognizedQuestionError(text, partial)
        same_concept = foil.concept == "" or (
            x_mention.concept != "" and foil.concept == x_mention.concept
        )
        if same_concept and (foil.count is not None or x_mention.count is not None):
            x2 = SlotMention(
                x_mention.concept, count=foil.count, attribute=foil.attribute,
                scene=foil.scene or x_mention.scene,
            )
            qtype = {
                "WH": QuestionType.WH_X1_NOT_X2,
                "NOT": QuestionType.NOT_X1_BUT_X2,
                "DO": QuestionType.DO_X1_NOT_X2,
            }[family]
            return ClassifiedQuestion(qtype, x_mention, None, x2, text)
        if foil.concept == "":
            raise UnrecognizedQuestionError(text, partial)
        if negated and not foil_negated and family == "NOT":
            # "i think it is not X but Y": dispute X, assert Y
            qtype = QuestionType.NOT_X_BUT_Y
            return ClassifiedQuestion(qtype, foil, x_mention, None, text)
        qtype = {
            "WH": QuestionType.WH_X_NOT_Y,
            "NOT": QuestionType.NOT_X_BUT_Y,
            "DO": QuestionType.DO_X_NOT_Y,
        }[family]
        return ClassifiedQuestion(qtype, x_mention, foil, None, text)

    if negated:
        if x_mention.concept == "":
            raise UnrecognizedQuestionError(text, partial)
        if family == "WH":
            return ClassifiedQuestion(QuestionType.WH_NOT_Y, None, x_mention, None, text)
        qtype = QuestionType.NOT_X if family == "NOT" else QuestionType.DO_NOT_X
        return ClassifiedQuestion(qtype, x_mention, None, None, text)

    if family == "WH":
        if x_mention.concept == "":
            raise UnrecognizedQuestionError(text, partial)
        return ClassifiedQuestion(QuestionType.WH_X, x_mention, None, None, text)
    # assertions/hypotheticals with nothing contrasted or denied carry no
    # contrast for the engine to explain
    raise UnrecognizedQuestionError(text, partial)


# ---------------------------------------------------------------------------
# grounding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroundedQuestion:
    q: ClassifiedQuestion
    x_nodes: tuple[NodeId, ...] = ()
    y_nodes: tuple[NodeId, ...] = ()
    x2_nodes: tuple[NodeId, ...] = ()
    x_hypothetical: bool = False
    y_hypothetical: bool = False
    x2_hypothetical: bool = False


def _nodes_for(
    pg: ParseGraph, onto: Ontology, mention: Optional[SlotMention]
) -> tuple[tuple[NodeId, ...], bool]:
    if mention is None or not mention.concept:
        return (), False
    want = canonical_label(onto, mention.concept)
    hits = []
    for node in pg.nodes:
        if canonical_label(onto, node.label) == want:
            hits.append(node.id)
            continue
        # action concepts may live in attributes, e.g. pose="sitting"
        if any(canonical_label(onto, v) == want for v in node.attributes.values()):
            hits.append(node.id)
    if mention.scene is not None:
        hits = [h for h in hits if pg.node(h).scene == mention.scene]
    hits.sort()
    return tuple(hits), not hits


def ground(q: ClassifiedQuestion, pg: ParseGraph, onto: Ontology) -> GroundedQuestion:
    """Resolve each slot to pg nodes; empty resolution marks it hypothetical."""
    x_nodes, x_hyp = _nodes_for(pg, onto, q.x)
    y_nodes, y_hyp = _nodes_for(pg, onto, q.y)
    x2_nodes, x2_hyp = _nodes_for(pg, onto, q.x2)
    return GroundedQuestion(
        q=q,
        x_nodes=x_nodes,
        y_nodes=y_nodes,
        x2_nodes=x2_nodes,
        x_hypothetical=x_hyp,
        y_hypothetical=y_hyp,
        x2_hypothetical=x2_hyp,
    )
