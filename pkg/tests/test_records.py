from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cotbudget.errors import (
    DuplicateRecordError,
    EmptySelectionError,
    RecordParseError,
    RecordSchemaError,
)
from cotbudget.records import (
    EvalRecord,
    load_records,
    pivot,
    save_records,
    unpivot,
)

from conftest import make_record


def write_jsonl(path, objs):
    path.write_text("\n".join(json.dumps(o) for o in objs) + "\n", encoding="utf-8")


def base_obj(**kw):
    obj = {
        "model": "m",
        "dataset": "d",
        "question_id": "q1",
        "prompt_id": "p1",
        "tokens": 10,
        "correct": True,
    }
    obj.update(kw)
    return obj


class TestLoadRecords:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, [base_obj(), base_obj(prompt_id="p2", tokens=20, correct=False)])
        records = load_records(path)
        assert len(records) == 2
        assert records[0].tokens == 10
        assert records[1].correct is False

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, [base_obj(), base_obj(tokens=99)])
        with pytest.raises(DuplicateRecordError) as exc:
            load_records(path)
        assert "q1" in str(exc.value)

    def test_negative_tokens_rejected(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, [base_obj(tokens=-3)])
        with pytest.raises(RecordSchemaError) as exc:
            load_records(path)
        assert ":1:" in str(exc.value)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(json.dumps(base_obj()) + "\n{not json\n", encoding="utf-8")
        with pytest.raises(RecordParseError) as exc:
            load_records(path)
        assert exc.value.line_no == 2

    def test_missing_field_reports_name(self, tmp_path):
        path = tmp_path / "r.jsonl"
        obj = base_obj()
        del obj["tokens"]
        write_jsonl(path, [obj])
        with pytest.raises(RecordSchemaError) as exc:
            load_records(path)
        assert "tokens" in str(exc.value)

    def test_unknown_fields_preserved(self, tmp_path):
        path = tmp_path / "r.jsonl"
        write_jsonl(path, [base_obj(run_id="abc", latency_ms=12)])
        records = load_records(path)
        assert records[0].extra == {"run_id": "abc", "latency_ms": 12}
        out = tmp_path / "w.jsonl"
        save_records(records, out)
        assert json.loads(out.read_text())["run_id"] == "abc"

    def test_bool_tokens_rejected(self):
        with pytest.raises(RecordSchemaError):
            EvalRecord.from_json_dict(base_obj(tokens=True))

    def test_non_bool_correct_rejected(self):
        with pytest.raises(RecordSchemaError):
            EvalRecord.from_json_dict(base_obj(correct=1))


class TestPivot:
    def test_full_grid(self):
        records = [
            make_record(qid=q, pid=p, tokens=10, correct=True)
            for q in ("q1", "q2")
            for p in ("p1", "p2")
        ]
        m = pivot(records, "m", "d")
        assert m.question_ids == ("q1", "q2")
        assert m.prompt_ids == ("p1", "p2")
        assert m.present.all()

    def test_absent_cell_masked(self):
        records = [
            make_record(qid="q1", pid="p1"),
            make_record(qid="q1", pid="p2"),
            make_record(qid="q2", pid="p1"),
        ]
        m = pivot(records, "m", "d")
        assert m.present.sum() == 3
        assert not m.present[1, 1]

    def test_empty_selection(self):
        with pytest.raises(EmptySelectionError):
            pivot([make_record()], "other-model", "d")

    def test_filters_other_pairs(self):
        records = [make_record(), make_record(model="m2", tokens=77)]
        m = pivot(records, "m", "d")
        assert m.n_questions == 1 and int(m.tokens[0, 0]) == 10

    def test_lexicographic_order(self):
        records = [make_record(qid=q, pid="p1") for q in ("q10", "q2", "q1")]
        m = pivot(records, "m", "d")
        assert m.question_ids == ("q1", "q10", "q2")

    def test_round_trip_unpivot(self):
        records = [
            make_record(qid="q1", pid="p1", tokens=5, correct=False),
            make_record(qid="q1", pid="p2", tokens=9, correct=True),
            make_record(qid="q2", pid="p1", tokens=3, correct=True),
        ]
        m = pivot(records, "m", "d")
        assert pivot(unpivot(m), "m", "d") == m

    def test_immutable(self):
        m = pivot([make_record()], "m", "d")
        with pytest.raises(ValueError):
            m.tokens[0, 0] = 99

    def test_programmatic_duplicates_rejected(self):
        with pytest.raises(DuplicateRecordError):
            pivot([make_record(), make_record(tokens=99)], "m", "d")


@settings(max_examples=50)
@given(
    cells=st.dictionaries(
        st.tuples(
            st.sampled_from(["q1", "q2", "q3", "q4"]),
            st.sampled_from(["p1", "p2", "p3"]),
        ),
        st.tuples(st.integers(min_value=0, max_value=500), st.booleans()),
        min_size=1,
    ),
    seed=st.randoms(),
)
def test_pivot_order_insensitive(cells, seed):
    records = [
        make_record(qid=q, pid=p, tokens=t, correct=c) for (q, p), (t, c) in cells.items()
    ]
    shuffled = list(records)
    seed.shuffle(shuffled)
    assert pivot(records, "m", "d") == pivot(shuffled, "m", "d")
