"""Dialogue sessions.

A session pins a base parse graph, an ontology, and a policy table, and
accumulates two pieces of state: the overlay (hypothetical modifications
that what-if questions committed) and the turn history. Ask runs the full
pipeline: classify, ground against the overlayed graph, generate all six
explanation candidates, select by preference, and, for disputing or
hypothetical questions, attach the consequence report. What-if questions
persist their modifications (the user is exploring that branch);
disputing questions do not (the model defends its reading).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional

from pgx.explain import Explanation, ExplanationType, generate_all
from pgx.ontology import Ontology
from pgx.pg import ParseGraph
from pgx.policy import PolicyTable, Selection, default_table, select
from pgx.question import ClassifiedQuestion, GroundedQuestion, QuestionType, classify, ground
from pgx.whatif import (
    ConsequenceReport,
    Modification,
    apply_modifications,
    what_if,
)
from pgx.explain import derive_modifications

_HYPOTHETICAL = {
    QuestionType.DO_X_NOT_Y,
    QuestionType.DO_NOT_X,
    QuestionType.DO_X1_NOT_X2,
}
_DISPUTING = {
    QuestionType.NOT_X,
    QuestionType.NOT_X1_BUT_X2,
    QuestionType.NOT_X_BUT_Y,
}


@dataclass(frozen=True)
class HistoryEntry:
    text: str
    question: ClassifiedQuestion
    selected_type: Optional[ExplanationType]
    answer: str


@dataclass(frozen=True)
class TurnResult:
    question: ClassifiedQuestion
    grounded: GroundedQuestion
    selection: Selection
    candidates: dict[ExplanationType, Explanation]
    consequences: Optional[ConsequenceReport]


class Session:
    """One dialogue; operations serialize on an internal lock."""

    def __init__(
        self,
        session_id: str,
        pg: ParseGraph,
        ontology: Optional[Ontology] = None,
        policy: Optional[PolicyTable] = None,
        theta_child: float = 0.5,
        theta_parent: float = 0.5,
    ):
        self.id = session_id
        self.base_pg = pg
        self.ontology = ontology if ontology is not None else Ontology()
        self.policy = policy if policy is not None else default_table()
        self.theta_child = theta_child
        self.theta_parent = theta_parent
        self.overlay: list[Modification] = []
        self.history: list[HistoryEntry] = []
        self._lock = threading.Lock()

    def current_pg(self) -> ParseGraph:
        """Base graph with the overlay replayed in order."""
        return apply_modifications(self.base_pg, self.overlay)

    def ask(self, text: str) -> TurnResult:
        with self._lock:
            question = classify(text)  # raises UnrecognizedQuestionError
            pg = self.current_pg()
            gq = ground(question, pg, self.ontology)
            candidates = generate_all(
                gq,
                pg,
                self.ontology,
                theta_child=self.theta_child,
                theta_parent=self.theta_parent,
            )
            selection = select(self.policy, question.qtype, candidates)

            consequences: Optional[ConsequenceReport] = None
            qtype = question.qtype
            if qtype in _HYPOTHETICAL or qtype in _DISPUTING:
                mods, extra = derive_modifications(gq, pg, self.ontology)
                _, consequences = what_if(
                    pg,
                    self.ontology,
                    mods,
                    extra_scenes=extra,
                    theta=self.theta_parent,
                )
                if qtype in _HYPOTHETICAL:
                    self.overlay.extend(mods)

            self.history.append(
                HistoryEntry(
                    text=text,
                    question=question,
                    selected_type=selection.etype,
                    answer=selection.text,
                )
            )
            return TurnResult(
                question=question,
                grounded=gq,
                selection=selection,
                candidates=candidates,
                consequences=consequences,
            )

    def what_if(self, mod: Modification) -> ConsequenceReport:
        """Consequences of one modification on the current overlayed graph;
        does not commit it."""
        with self._lock:
            _, report = what_if(
                self.current_pg(), self.ontology, [mod], theta=self.theta_parent
            )
            return report

    def drop_overlay(self, index: int) -> None:
        with self._lock:
            if not (0 <= index < len(self.overlay)):
                raise IndexError(f"no overlay entry {index}")
            del self.overlay[index]

    def reset(self) -> None:
        with self._lock:
            self.overlay.clear()
            self.history.clear()
