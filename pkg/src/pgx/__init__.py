"""Explanation engine for And-Or-graph parse graphs.

Answers contrastive questions ("why X?", "why X and not Y?") about what a
vision model parsed out of a video: classifies the question into one of
ten contrastive forms, generates candidate explanations from the parse
graph and a common-sense ontology, and selects among them with an
empirical preference policy.
"""

from pgx.pg import (
    DiscourseLink,
    DiscourseRelation,
    NodeKind,
    Nuclearity,
    ParseGraph,
    PgFormatError,
    PgNode,
    PgSchemaError,
    PgSyntaxError,
    PgValidationError,
    Relation,
    Scene,
    UnknownIdError,
    Violation,
    lemma,
    load,
    save,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "DiscourseLink",
    "DiscourseRelation",
    "NodeKind",
    "Nuclearity",
    "ParseGraph",
    "PgFormatError",
    "PgNode",
    "PgSchemaError",
    "PgSyntaxError",
    "PgValidationError",
    "Relation",
    "Scene",
    "UnknownIdError",
    "Violation",
    "lemma",
    "load",
    "save",
    "validate",
    "__version__",
]
