"""Per-question token-complexity estimation via optimal threshold classifiers.

A threshold classifier predicts a run correct iff its token length reaches
the threshold. The complexity estimate for a question is the threshold, drawn
from the observed lengths plus infinity, that classifies its runs best; the
infinite threshold (predict everything incorrect) models unsolvable
questions. All per-question quantities are exact rationals.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CoverageError
from .records import RunMatrix

INFINITE = math.inf


def is_finite(tau: float) -> bool:
    return not math.isinf(tau)


@dataclass(frozen=True)
class QuestionComplexity:
    """Estimated threshold and classifier quality for one question."""

    question_id: str
    tau_hat: float  # integer-valued, or INFINITE
    c_star: Fraction
    k_used: int

    @property
    def finite(self) -> bool:
        return is_finite(self.tau_hat)


@dataclass(frozen=True)
class ComplexityProfile:
    """Per-question complexities and their aggregates for one (model, dataset)."""

    model: str
    dataset: str
    entries: tuple[QuestionComplexity, ...]
    c_bar: Fraction
    a_star: Fraction
    tau_bar_over_n: Fraction
    tau_bar_finite_mean: Fraction

    @property
    def n_questions(self) -> int:
        return len(self.entries)

    def finite_taus(self) -> list[int]:
        """Finite complexity estimates, ascending."""
        return sorted(int(e.tau_hat) for e in self.entries if e.finite)

    def tau_by_question(self) -> dict[str, float]:
        return {e.question_id: e.tau_hat for e in self.entries}

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "dataset": self.dataset,
            "entries": [
                {
                    "question_id": e.question_id,
                    "tau": int(e.tau_hat) if e.finite else None,
                    "c_star": round(float(e.c_star), 6),
                    "k_used": e.k_used,
                }
                for e in self.entries
            ],
            "c_bar": round(float(self.c_bar), 6),
            "a_star": round(float(self.a_star), 6),
            "tau_bar_over_n": round(float(self.tau_bar_over_n), 6),
            "tau_bar_finite_mean": round(float(self.tau_bar_finite_mean), 6),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> ComplexityProfile:
        """Rebuild a profile from its file form.

        Aggregates are recomputed from the entries where exact (a_star and the
        two tau means depend only on the integer taus); c_bar keeps the
        rounded stored values.
        """
        entries = tuple(
            QuestionComplexity(
                question_id=e["question_id"],
                tau_hat=INFINITE if e["tau"] is None else int(e["tau"]),
                c_star=Fraction(str(e["c_star"])),
                k_used=int(e["k_used"]),
            )
            for e in obj["entries"]
        )
        c_bar = (
            sum((e.c_star for e in entries), Fraction(0)) / len(entries)
            if entries
            else Fraction(0)
        )
        return cls(
            model=obj["model"],
            dataset=obj["dataset"],
            entries=entries,
            c_bar=c_bar,
            a_star=_a_star(entries),
            tau_bar_over_n=_tau_bar_over_n(entries),
            tau_bar_finite_mean=_tau_bar_finite_mean(entries),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> ComplexityProfile:
        return cls.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def classify_accuracy(
    lengths: Sequence[int], corrects: Sequence[bool], t: float
) -> Fraction:
    """Fraction of runs whose correctness matches the prediction length >= t.

    t = INFINITE predicts every run incorrect.
    """
    lengths = np.asarray(lengths)
    corrects = np.asarray(corrects, dtype=bool)
    if lengths.size == 0 or lengths.shape != corrects.shape:
        raise ValueError("lengths and corrects must be equal-size, non-empty sequences")
    predictions = np.zeros(lengths.shape, dtype=bool) if math.isinf(t) else lengths >= t
    return Fraction(int(np.count_nonzero(predictions == corrects)), int(lengths.size))


def estimate_tau(
    lengths: Sequence[int], corrects: Sequence[bool], question_id: str = ""
) -> QuestionComplexity:
    """Best threshold over the observed lengths (plus INFINITE) for one question.

    Ties break toward the smallest finite threshold; INFINITE wins only when
    it strictly beats every finite candidate.
    """
    lengths = np.asarray(lengths)
    corrects = np.asarray(corrects, dtype=bool)
    if lengths.size == 0 or lengths.shape != corrects.shape:
        raise ValueError("lengths and corrects must be equal-size, non-empty sequences")
    k = int(lengths.size)
    best_tau: float = INFINITE
    best_acc = Fraction(int(np.count_nonzero(~corrects)), k)
    for t in sorted(set(int(v) for v in lengths)):
        acc = Fraction(int(np.count_nonzero((lengths >= t) == corrects)), k)
        if acc > best_acc or (acc == best_acc and t < best_tau):
            best_tau, best_acc = t, acc
    return QuestionComplexity(
        question_id=question_id, tau_hat=best_tau, c_star=best_acc, k_used=k
    )


def profile(matrix: RunMatrix) -> ComplexityProfile:
    """Estimate every question's complexity and fill the profile aggregates."""
    entries: list[QuestionComplexity] = []
    for i, qid in enumerate(matrix.question_ids):
        lengths, corrects = matrix.question_runs(i)
        if lengths.size == 0:
            raise CoverageError(f"question {qid!r} has no present runs")
        entries.append(estimate_tau(lengths, corrects, question_id=qid))
    entries_t = tuple(entries)
    n = len(entries_t)
    return ComplexityProfile(
        model=matrix.model,
        dataset=matrix.dataset,
        entries=entries_t,
        c_bar=sum((e.c_star for e in entries_t), Fraction(0)) / n,
        a_star=_a_star(entries_t),
        tau_bar_over_n=_tau_bar_over_n(entries_t),
        tau_bar_finite_mean=_tau_bar_finite_mean(entries_t),
    )


def _a_star(entries: tuple[QuestionComplexity, ...]) -> Fraction:
    if not entries:
        return Fraction(0)
    return Fraction(sum(1 for e in entries if e.finite), len(entries))


def _tau_bar_over_n(entries: tuple[QuestionComplexity, ...]) -> Fraction:
    if not entries:
        return Fraction(0)
    return Fraction(sum(int(e.tau_hat) for e in entries if e.finite), len(entries))


def _tau_bar_finite_mean(entries: tuple[QuestionComplexity, ...]) -> Fraction:
    finite = [int(e.tau_hat) for e in entries if e.finite]
    if not finite:
        return Fraction(0)
    return Fraction(sum(finite), len(finite))
