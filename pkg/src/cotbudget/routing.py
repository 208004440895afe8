"""Replay of adaptive prompting policies over recorded runs.

Policies never call a model: they re-read recorded cells, so any budget
predictor or verifier construction can be scored offline against the same
data that produced the frontier.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .bounds import FrontierCurve
from .errors import CoverageError
from .records import RunMatrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuestionRoute:
    """What one policy did on one question."""

    question_id: str
    tokens_spent: int
    correct: bool
    path: tuple[str, ...]


@dataclass(frozen=True)
class RoutingOutcome:
    """Aggregate accuracy and spend of a policy, with its per-question trace."""

    policy_id: str
    accuracy: Fraction
    avg_tokens: Fraction
    per_question: tuple[QuestionRoute, ...]

    @classmethod
    def from_routes(cls, policy_id: str, routes: Sequence[QuestionRoute]) -> RoutingOutcome:
        n = len(routes)
        return cls(
            policy_id=policy_id,
            accuracy=Fraction(sum(1 for r in routes if r.correct), n),
            avg_tokens=Fraction(sum(r.tokens_spent for r in routes), n),
            per_question=tuple(routes),
        )


def _cell(matrix: RunMatrix, i: int, j: int, qid: str, pid: str) -> tuple[int, bool]:
    if not matrix.present[i, j]:
        raise CoverageError(f"no recorded run for question {qid!r} under prompt {pid!r}")
    return int(matrix.tokens[i, j]), bool(matrix.correct[i, j])


def verifier_cascade(matrix: RunMatrix, prompts: Sequence[str]) -> RoutingOutcome:
    """Run prompts in order per question, stopping at the first verified-correct answer.

    The verifier is assumed perfect: an incorrect answer is always flagged
    and the next prompt in the chain is charged. Tokens accumulate across
    every prompt actually run.
    """
    if not prompts:
        raise ValueError("prompts must be non-empty")
    cols = [matrix.prompt_index(p) for p in prompts]
    routes: list[QuestionRoute] = []
    for i, qid in enumerate(matrix.question_ids):
        spent = 0
        correct = False
        path: list[str] = []
        for pid, j in zip(prompts, cols):
            tokens, ok = _cell(matrix, i, j, qid, pid)
            spent += tokens
            path.append(pid)
            if ok:
                correct = True
                break
        routes.append(QuestionRoute(qid, spent, correct, tuple(path)))
    return RoutingOutcome.from_routes("verifier(" + "->".join(prompts) + ")", routes)


def verifier_route(
    matrix: RunMatrix, base_prompt: str, fallback_prompt: str
) -> RoutingOutcome:
    """Two-stage verifier policy: cheap base prompt, fallback only on failure."""
    return verifier_cascade(matrix, [base_prompt, fallback_prompt])


def budget_route(
    matrix: RunMatrix, budgets: Mapping[str, int], family: Sequence[str]
) -> RoutingOutcome:
    """Pick, per question, the family prompt with the longest recorded run within budget.

    Falls back to the family's shortest recorded run when nothing fits (and
    when a question has no budget entry). Budget keys naming unknown
    questions are ignored with a logged warning count.
    """
    if not family:
        raise ValueError("family must be non-empty")
    cols = [matrix.prompt_index(p) for p in family]
    unknown = sum(1 for q in budgets if q not in matrix.question_ids)
    if unknown:
        log.warning("budget_route: ignored %d budget(s) for unknown questions", unknown)
    routes: list[QuestionRoute] = []
    for i, qid in enumerate(matrix.question_ids):
        cells = [(pid, *_cell(matrix, i, j, qid, pid)) for pid, j in zip(family, cols)]
        budget = budgets.get(qid, 0)
        fitting = [c for c in cells if c[1] <= budget]
        if fitting:
            choice = max(fitting, key=lambda c: c[1])
        else:
            choice = min(cells, key=lambda c: c[1])
        routes.append(QuestionRoute(qid, choice[1], choice[2], (choice[0],)))
    return RoutingOutcome.from_routes("budget(" + "->".join(family) + ")", routes)


def compare_to_frontier(
    outcomes: Sequence[RoutingOutcome], curve: FrontierCurve
) -> list[tuple[str, Fraction]]:
    """Vertical distance of each policy below the oracle curve at its average spend.

    The curve must come from the same (model, dataset) run set the outcomes
    were replayed on; curves carry no identity, so this is on the caller.
    A negative gap means the recorded data beat the threshold-model oracle,
    i.e. the hypothesis is violated somewhere.
    """
    return [(o.policy_id, curve.alpha_at(o.avg_tokens) - o.accuracy) for o in outcomes]
