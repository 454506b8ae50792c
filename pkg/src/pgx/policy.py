"""Preference-driven explanation selection.

The policy table maps each question type to unnormalized preference
weights over the six explanation types (the built-in default is the
bundled annotation-study percentages). Selection ranks types by weight,
breaks ties in fixed column order, and walks down the ranking to the
first feasible candidate. Rows need not sum to 100; rank and argmax do
not depend on row mass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from pgx.explain import COLUMN_ORDER, Explanation, ExplanationType
from pgx.question import QuestionType

_DEFAULT_ROWS: dict[QuestionType, tuple[float, ...]] = {
    # columns: alpha, beta, gamma, counterfactual, common_sense, discourse
    QuestionType.WH_X: (23, 3.9, 46.2, 19.2, 3.8, 3.8),
    QuestionType.WH_X1_NOT_X2: (11.5, 30.4, 4.2, 3.8, 3.8, 46.6),
    QuestionType.WH_X_NOT_Y: (36.5, 2, 34.6, 3.8, 15.4, 7.6),
    QuestionType.WH_NOT_Y: (34.6, 4.5, 3.8, 50.1, 3.8, 2.2),
    QuestionType.NOT_X: (26.9, 0, 7.7, 42.3, 19.2, 0),
    QuestionType.NOT_X1_BUT_X2: (26.9, 0, 0, 53.8, 15.4, 0),
    QuestionType.NOT_X_BUT_Y: (3.8, 26.9, 3.8, 65.4, 0, 0),
    QuestionType.DO_X_NOT_Y: (0, 3.8, 7.2, 3.8, 3.8, 81.4),
    QuestionType.DO_NOT_X: (3.8, 3.8, 15.4, 69.3, 0, 3.8),
    QuestionType.DO_X1_NOT_X2: (3.8, 3.8, 8, 65.2, 7.2, 8),
}


@dataclass(frozen=True)
class PolicyTable:
    matrix: Mapping[QuestionType, Mapping[ExplanationType, float]]
    provenance: str = ""

    def row(self, q: QuestionType) -> Mapping[ExplanationType, float]:
        return self.matrix[q]


def default_table() -> PolicyTable:
    matrix = {
        q: {e: value for e, value in zip(COLUMN_ORDER, row)}
        for q, row in _DEFAULT_ROWS.items()
    }
    return PolicyTable(matrix=matrix, provenance="annotation study")


def load_policy(text: str) -> PolicyTable:
    """Parse a JSON matrix {question type: {explanation type: weight}}.

    Every question type and every explanation type must be present;
    weights must be >= 0.
    """
    raw = json.loads(text)
    if not isinstance(raw, dict):
        raise ValueError("policy file must be a JSON object")
    matrix: dict[QuestionType, dict[ExplanationType, float]] = {}
    for q in QuestionType:
        if q.value not in raw:
            raise ValueError(f"policy file missing question type {q.value}")
        row = raw[q.value]
        if not isinstance(row, dict):
            raise ValueError(f"row {q.value} must be an object")
        matrix[q] = {}
        for e in ExplanationType:
            if e.value not in row:
                raise ValueError(f"row {q.value} missing explanation type {e.value}")
            value = row[e.value]
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
                raise ValueError(f"{q.value}.{e.value} must be a number >= 0")
            matrix[q][e] = float(value)
        unknown = set(row) - {e.value for e in ExplanationType}
        if unknown:
            raise ValueError(
                f"row {q.value} has unknown explanation types: {sorted(unknown)}"
            )
    unknown_rows = set(raw) - {q.value for q in QuestionType}
    if unknown_rows:
        raise ValueError(f"unknown question types: {sorted(unknown_rows)}")
    return PolicyTable(matrix=matrix, provenance="file")


def save_policy(table: PolicyTable) -> str:
    doc = {
        q.value: {e.value: table.matrix[q][e] for e in COLUMN_ORDER}
        for q in QuestionType
    }
    return json.dumps(doc, indent=2) + "\n"


def rank_types(table: PolicyTable, q: QuestionType) -> list[ExplanationType]:
    """All six types, descending by preference, column order on ties."""
    row = table.row(q)
    order = {e: i for i, e in enumerate(COLUMN_ORDER)}
    return sorted(COLUMN_ORDER, key=lambda e: (-row[e], order[e]))


@dataclass(frozen=True)
class Selection:
    """Outcome of walking the ranking: either a feasible explanation or a
    no-evidence result listing every attempt."""

    etype: Optional[ExplanationType]
    explanation: Optional[Explanation]
    ranked: tuple[ExplanationType, ...]
    attempts: tuple[tuple[ExplanationType, str], ...]  # infeasible (type, reason)
    text: str

    @property
    def no_evidence(self) -> bool:
        return self.etype is None


def select(
    table: PolicyTable,
    qtype: QuestionType,
    candidates: Mapping[ExplanationType, Explanation],
) -> Selection:
    """First feasible candidate in rank order; a no-evidence result with
    per-type reasons when all six fail."""
    ranked = tuple(rank_types(table, qtype))
    attempts: list[tuple[ExplanationType, str]] = []
    for etype in ranked:
        candidate = candidates.get(etype)
        if candidate is None:
            attempts.append((etype, "not generated"))
            continue
        if candidate.feasible:
            return Selection(
                etype=etype,
                explanation=candidate,
                ranked=ranked,
                attempts=tuple(attempts),
                text=candidate.text,
            )
        attempts.append((etype, candidate.reason or "infeasible"))
    summary = "; ".join(f"{e.value}: {reason}" for e, reason in attempts)
    return Selection(
        etype=None,
        explanation=None,
        ranked=ranked,
        attempts=tuple(attempts),
        text=f"I could not find evidence to answer that ({summary})",
    )


def aggregate(
    table: PolicyTable, weights: Mapping[QuestionType, float]
) -> dict[ExplanationType, float]:
    """Weighted combination of the rows; weights must be a distribution."""
    total = 0.0
    for q, w in weights.items():
        if w < 0:
            raise ValueError(f"negative weight for {q.value}")
        total += w
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights sum to {total}, expected 1")
    out = {e: 0.0 for e in COLUMN_ORDER}
    for q, w in weights.items():
        row = table.row(q)
        for e in COLUMN_ORDER:
            out[e] += w * row[e]
    return out


def uniform_weights() -> dict[QuestionType, float]:
    n = len(QuestionType)
    return {q: 1.0 / n for q in QuestionType}
