"""Two-level topic hierarchy: sub-topic assignment, labels, topic weights.

Every sub-topic goes to the main topic whose document vector (theta column)
is closest in cosine distance; labels are the highest-phi terms of a topic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lda import TopicModel

__all__ = [
    "TopicHierarchy",
    "HierarchyError",
    "cosine_distance",
    "assign_subtopics",
    "label_topic",
    "display_label",
    "topic_weight",
    "build_hierarchy",
]


class HierarchyError(Exception):
    pass


@dataclass(frozen=True)
class TopicHierarchy:
    main: TopicModel
    sub: TopicModel
    assignment: tuple[int, ...]              # sub-topic index -> main-topic index
    labels: dict[str, tuple[tuple[str, ...], ...]]  # level -> per-topic top terms

    def group(self, main_idx: int) -> tuple[int, ...]:
        """Sub-topic indices assigned to one main topic, ascending."""
        return tuple(s for s, m in enumerate(self.assignment) if m == main_idx)


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cos(a, b); defined as 1 against a zero vector (0 for two zeros)."""
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 and norm_b == 0.0:
        return 0.0
    if norm_a == 0.0 or norm_b == 0.0:
        return 1.0
    return 1.0 - float(np.dot(a, b)) / (norm_a * norm_b)


def assign_subtopics(main: TopicModel, sub: TopicModel) -> tuple[int, ...]:
    """Map each sub-topic to the main topic with least cosine distance
    between their document vectors; ties break to the smallest main index."""
    if main.d != sub.d:
        raise HierarchyError(
            f"document count mismatch: main has {main.d}, sub has {sub.d}"
        )
    assignment = []
    main_cols = [main.theta[:, m] for m in range(main.k)]
    for s in range(sub.k):
        sub_col = sub.theta[:, s]
        distances = np.array([cosine_distance(sub_col, col) for col in main_cols])
        assignment.append(int(np.argmin(distances)))
    return tuple(assignment)


def label_topic(model: TopicModel, k: int, n: int) -> tuple[str, ...]:
    """The n highest-phi terms of topic k, ties broken by vocabulary index."""
    if not 0 <= k < model.k:
        raise IndexError(f"topic index {k} out of range [0, {model.k})")
    if not 1 <= n <= model.v:
        raise IndexError(f"label size {n} out of range [1, {model.v}]")
    order = np.argsort(-model.phi[k], kind="stable")
    return tuple(model.vocab.terms[i] for i in order[:n])


def display_label(terms) -> str:
    """Capitalised terms joined by hyphens, e.g. Social-Measure-Intervention."""
    return "-".join(term.capitalize() for term in terms)


def topic_weight(model: TopicModel, k: int) -> float:
    """Sum of the topic's theta weights across all documents."""
    if not 0 <= k < model.k:
        raise IndexError(f"topic index {k} out of range [0, {model.k})")
    return float(model.theta[:, k].sum())


def build_hierarchy(main: TopicModel, sub: TopicModel, label_words: int = 3) -> TopicHierarchy:
    assignment = assign_subtopics(main, sub)
    labels = {
        "main": tuple(label_topic(main, k, min(label_words, main.v)) for k in range(main.k)),
        "sub": tuple(label_topic(sub, k, min(label_words, sub.v)) for k in range(sub.k)),
    }
    return TopicHierarchy(main=main, sub=sub, assignment=assignment, labels=labels)
