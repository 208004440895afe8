from __future__ import annotations

import numpy as np
import pytest

from cotbudget.complexity import INFINITE
from cotbudget.oracle import OracleSpec, generate, straddle_lengths
from cotbudget.records import EvalRecord, RunMatrix


def make_record(qid="q1", pid="p1", tokens=10, correct=True, model="m", dataset="d", **kw):
    return EvalRecord(
        model=model,
        dataset=dataset,
        question_id=qid,
        prompt_id=pid,
        tokens=tokens,
        correct=correct,
        **kw,
    )


def make_matrix(tokens, correct, present=None, model="m", dataset="d"):
    """RunMatrix from plain nested lists, auto-naming questions and prompts."""
    tokens = np.asarray(tokens)
    n, k = tokens.shape
    if present is None:
        present = np.ones((n, k), dtype=bool)
    return RunMatrix(
        model=model,
        dataset=dataset,
        question_ids=tuple(f"q{i:02d}" for i in range(n)),
        prompt_ids=tuple(f"p{j:02d}" for j in range(k)),
        tokens=tokens,
        correct=np.asarray(correct, dtype=bool),
        present=np.asarray(present, dtype=bool),
    )


@pytest.fixture
def oracle_matrix():
    """Violation-free 3-question fixture with taus (10, 20, inf)."""
    spec = OracleSpec(
        n=3,
        prompt_lengths=straddle_lengths([10, 20, INFINITE], 6),
        taus=(10, 20, INFINITE),
    )
    matrix, taus = generate(spec)
    return matrix, taus
