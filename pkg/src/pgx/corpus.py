"""Annotation-corpus evaluation.

A corpus is one JSON object per line: {"question", "question_type",
"chosen_explanation_type", "annotator_id"}. The evaluation computes, for
each question type, the percentage of annotators who chose each
explanation type, with the distinct-annotator
count as the denominator. Nothing is renormalized; a question some
annotators skipped yields a row summing below 100.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from pgx.explain import COLUMN_ORDER, ExplanationType
from pgx.question import QuestionType

ROW_ORDER: tuple[QuestionType, ...] = (
    QuestionType.WH_X,
    QuestionType.WH_X1_NOT_X2,
    QuestionType.WH_X_NOT_Y,
    QuestionType.WH_NOT_Y,
    QuestionType.NOT_X,
    QuestionType.NOT_X1_BUT_X2,
    QuestionType.NOT_X_BUT_Y,
    QuestionType.DO_X_NOT_Y,
    QuestionType.DO_NOT_X,
    QuestionType.DO_X1_NOT_X2,
)

_COLUMN_TITLES = {
    ExplanationType.ALPHA: "Alpha",
    ExplanationType.BETA: "Beta",
    ExplanationType.GAMMA: "Gamma",
    ExplanationType.COUNTERFACTUAL: "Counterfactual",
    ExplanationType.COMMON_SENSE: "Common sense",
    ExplanationType.DISCOURSE: "Discourse",
}


@dataclass(frozen=True)
class Record:
    question: str
    question_type: QuestionType
    chosen_explanation_type: ExplanationType
    annotator_id: str


class CorpusError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_FIELDS = {"question", "question_type", "chosen_explanation_type", "annotator_id"}


def parse_corpus(text: str) -> list[Record]:
    records = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusError(f"bad JSON: {e.msg}", i) from None
        if not isinstance(obj, dict):
            raise CorpusError("record must be an object", i)
        missing = _FIELDS - set(obj)
        if missing:
            raise CorpusError(f"missing fields: {sorted(missing)}", i)
        unknown = set(obj) - _FIELDS
        if unknown:
            raise CorpusError(f"unknown fields: {sorted(unknown)}", i)
        try:
            qtype = QuestionType(obj["question_type"])
        except ValueError:
            raise CorpusError(
                f"unknown question type {obj['question_type']!r}", i
            ) from None
        try:
            etype = ExplanationType(obj["chosen_explanation_type"])
        except ValueError:
            raise CorpusError(
                f"unknown explanation type {obj['chosen_explanation_type']!r}", i
            ) from None
        if not isinstance(obj["question"], str) or not isinstance(
            obj["annotator_id"], str
        ):
            raise CorpusError("question and annotator_id must be strings", i)
        records.append(Record(obj["question"], qtype, etype, obj["annotator_id"]))
    return records


def save_corpus(records: Iterable[Record]) -> str:
    lines = []
    for r in records:
        lines.append(
            json.dumps(
                {
                    "question": r.question,
                    "question_type": r.question_type.value,
                    "chosen_explanation_type": r.chosen_explanation_type.value,
                    "annotator_id": r.annotator_id,
                }
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def eval_matrix(
    records: Iterable[Record],
) -> dict[QuestionType, dict[ExplanationType, float]]:
    """Choice percentages per question type.

    Denominator is the number of distinct annotators in the corpus, so a
    question some annotators left unanswered shows the missing mass
    instead of silently renormalizing.
    """
    records = list(records)
    annotators = {r.annotator_id for r in records}
    denom = len(annotators)
    counts: dict[QuestionType, dict[ExplanationType, int]] = {
        q: {e: 0 for e in COLUMN_ORDER} for q in QuestionType
    }
    for r in records:
        counts[r.question_type][r.chosen_explanation_type] += 1
    out: dict[QuestionType, dict[ExplanationType, float]] = {}
    for q in QuestionType:
        out[q] = {
            e: (100.0 * counts[q][e] / denom if denom else 0.0) for e in COLUMN_ORDER
        }
    return out


def format_matrix(
    matrix: Mapping[QuestionType, Mapping[ExplanationType, float]],
    aggregate_row: Optional[Mapping[ExplanationType, float]] = None,
) -> str:
    """Fixed-width table, one decimal place per cell."""
    label_width = max(len(_row_label(q)) for q in ROW_ORDER)
    if aggregate_row is not None:
        label_width = max(label_width, len("ALL (uniform)"))
    widths = [max(len(_COLUMN_TITLES[e]), 6) for e in COLUMN_ORDER]
    header = " ".join(
        [_pad("Question type", label_width)]
        + [_COLUMN_TITLES[e].rjust(w) for e, w in zip(COLUMN_ORDER, widths)]
    )
    lines = [header]
    for q in ROW_ORDER:
        cells = [
            f"{matrix[q][e]:.1f}".rjust(w) for e, w in zip(COLUMN_ORDER, widths)
        ]
        lines.append(" ".join([_pad(_row_label(q), label_width)] + cells))
    if aggregate_row is not None:
        cells = [
            f"{aggregate_row[e]:.1f}".rjust(w) for e, w in zip(COLUMN_ORDER, widths)
        ]
        lines.append(" ".join([_pad("ALL (uniform)", label_width)] + cells))
    return "\n".join(lines) + "\n"


def _row_label(q: QuestionType) -> str:
    return q.value.replace("_", "-")


def _pad(text: str, width: int) -> str:
    return text.ljust(width)
