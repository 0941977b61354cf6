"""Evaluation quantities: accuracy, sensitivity/specificity, ROC AUC, and
ensemble accuracy/diversity (Kohavi-Wolpert variance).

Rates with an undefined denominator return None rather than a silent 0,
so a degenerate always-negative classifier can report specificity 1.0
and sensitivity 0.0, and a single-class test set reports AUC as None.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfusionCounts",
    "ScoredPredictions",
    "confusion",
    "accuracy",
    "sensitivity",
    "specificity",
    "roc_auc",
    "kw_variance",
    "member_mean_accuracy",
]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fn: int
    tn: int
    fp: int

    def __post_init__(self):
        if min(self.tp, self.fn, self.tn, self.fp) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def p(self) -> int:
        return self.tp + self.fn

    @property
    def n(self) -> int:
        return self.tn + self.fp

    @property
    def total(self) -> int:
        return self.p + self.n


@dataclass(frozen=True)
class ScoredPredictions:
    """Per-instance scoring output of one model on one test set.

    ``p_pos`` is the positive-class probability used for ROC AUC.  The
    hard label defaults to ``p_pos > 0.5`` (ties predict negative) but
    an explicit ``labels`` array may override it, e.g. majority-vote
    labels of an ensemble whose AUC score is the averaged probability.
    ``member_labels`` is the (instances x members) label matrix of an
    ensemble's individual members.
    """

    y_true: np.ndarray
    p_pos: np.ndarray
    labels: np.ndarray | None = None
    member_labels: np.ndarray | None = None

    def __post_init__(self):
        y = np.asarray(self.y_true, dtype=np.int8)
        p = np.asarray(self.p_pos, dtype=np.float64)
        if y.ndim != 1 or p.shape != y.shape:
            raise ValueError("y_true and p_pos must be equal-length vectors")
        if ((p < 0) | (p > 1)).any():
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "y_true", y)
        object.__setattr__(self, "p_pos", p)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=np.int8)
            if lab.shape != y.shape:
                raise ValueError("labels must match y_true")
            object.__setattr__(self, "labels", lab)
        if self.member_labels is not None:
            m = np.asarray(self.member_labels, dtype=np.int8)
            if m.ndim != 2 or m.shape[0] != y.shape[0]:
                raise ValueError("member_labels must be (instances, members)")
            object.__setattr__(self, "member_labels", m)

    @property
    def predicted_labels(self) -> np.ndarray:
        if self.labels is not None:
            return self.labels
        return (self.p_pos > 0.5).astype(np.int8)


def confusion(y_true, y_pred) -> ConfusionCounts:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("label vectors must have equal length")
    pos = y_true == 1
    return ConfusionCounts(
        tp=int((y_pred[pos] == 1).sum()),
        fn=int((y_pred[pos] == 0).sum()),
        tn=int((y_pred[~pos] == 0).sum()),
        fp=int((y_pred[~pos] == 1).sum()),
    )


def accuracy(y_true, y_pred) -> float:
    """Percentage of correct predictions."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.size == 0:
        raise ValueError("accuracy undefined on zero instances")
    return 100.0 * float((y_true == y_pred).sum()) / y_true.size


def sensitivity(counts: ConfusionCounts) -> float | None:
    """True positive rate TP/P, or None when there are no positives."""
    if counts.p == 0:
        return None
    return counts.tp / counts.p


def specificity(counts: ConfusionCounts) -> float | None:
    """True negative rate TN/N, or None when there are no negatives."""
    if counts.n == 0:
        return None
    return counts.tn / counts.n


def roc_auc(y_true, scores) -> float | None:
    """Area under the ROC curve by the rank statistic: the probability
    that a random positive outscores a random negative, ties counting
    one half.  Returns None if either class is absent."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape:
        raise ValueError("scores must match labels")
    n_pos = int((y_true == 1).sum())
    n_neg = y_true.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = _midranks(scores)
    rank_sum_pos = float(ranks[y_true == 1].sum())
    u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def _midranks(scores: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _correctness(member_labels, y_true) -> np.ndarray:
    member_labels = np.asarray(member_labels)
    y_true = np.asarray(y_true)
    if member_labels.ndim != 2 or member_labels.shape[0] != y_true.size:
        raise ValueError("member_labels must be (instances, members)")
    return member_labels == y_true[:, None]


def kw_variance(member_labels, y_true) -> float:
    """Kohavi-Wolpert diversity of an ensemble's members.

    With L members and N instances, KW = (1/(N*L^2)) * sum_j l_j*(L - l_j)
    where l_j is the number of members misclassifying instance j.  Zero
    when the members always agree; at most 1/4 (even split everywhere).
    Higher means more diverse.
    """
    correct = _correctness(member_labels, y_true)
    n, L = correct.shape
    if L < 2:
        raise ValueError("diversity needs at least two members")
    if n == 0:
        raise ValueError("diversity needs at least one instance")
    wrong = L - correct.sum(axis=1)
    return float((wrong * (L - wrong)).sum()) / (n * L * L)


def member_mean_accuracy(member_labels, y_true) -> float:
    """Arithmetic mean of the members' individual accuracies (percent)."""
    correct = _correctness(member_labels, y_true)
    n, L = correct.shape
    if L == 0:
        raise ValueError("no members")
    if n == 0:
        raise ValueError("no instances")
    per_member = correct.mean(axis=0) * 100.0
    return float(per_member.mean())
