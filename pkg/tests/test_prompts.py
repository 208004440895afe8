from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotbudget.prompts import (
    DEFAULT_LIMIT_GRID,
    FIXED_INSTRUCTIONS,
    PARAMETERIZED_FAMILIES,
    PromptCatalog,
    PromptSpec,
    REQUEST_PREAMBLE,
    default_catalog,
    limited_spec,
    render,
)

EXPECTED_FIXED = {
    "NoCoT": "Only give the final answer.",
    "DefaultCoT": "Think step-by-step.",
    "BeConcise": "Be concise.",
    "BulletPoints": "Only use bullet points.",
    "OnlyNumbers": "Only use numbers or equations.",
    "NoSpaces": "Do not use any spaces or line breaks.",
    "NoProperGrammar": "Do not use proper grammar.",
    "AbbreviateWords": "Abbreviate words as much as possible.",
    "ChineseCoT": "Respond in Chinese",
}


class TestDefaultCatalog:
    def test_has_31_unique_prompts(self):
        cat = default_catalog()
        assert len(cat) == 31
        assert len(set(cat.prompt_ids)) == 31

    def test_fixed_instructions_exact(self):
        cat = default_catalog()
        for pid, text in EXPECTED_FIXED.items():
            assert cat.get(pid).instruction == text

    def test_step_limit_instruction(self):
        assert default_catalog().get("StepLimit(3)").instruction == "Use at most 3 steps."

    def test_grid_covers_cited_limits(self):
        ids = set(default_catalog().prompt_ids)
        for cited in ("WordLimit(5)", "WordLimit(10)", "WordLimit(15)",
                      "CharLimit(50)", "CharLimit(100)", "TokenLimit(10)"):
            assert cited in ids

    def test_limits_within_family_ranges(self):
        for spec in default_catalog():
            if spec.limit is None:
                continue
            _, unit, (lo, hi) = PARAMETERIZED_FAMILIES[spec.family]
            assert spec.limit_unit == unit
            assert spec.limit >= lo
            assert hi is None or spec.limit <= hi


class TestPromptSpecInvariants:
    def test_fixed_rejects_limit(self):
        with pytest.raises(ValueError):
            PromptSpec(prompt_id="NoCoT", family="NoCoT",
                       instruction="Only give the final answer.", limit=5, limit_unit="words")

    def test_parameterized_requires_limit(self):
        with pytest.raises(ValueError):
            PromptSpec(prompt_id="WordLimit(5)", family="WordLimit",
                       instruction="Use at most 5 words.")

    @pytest.mark.parametrize("family,k", [("WordLimit", 101), ("StepLimit", 6), ("TokenLimit", 0)])
    def test_limit_ranges_enforced(self, family, k):
        with pytest.raises(ValueError):
            limited_spec(family, k)

    def test_chinese_limit_unbounded_above(self):
        spec = limited_spec("ChineseCoT(k)", 5000)
        assert spec.prompt_id == "ChineseCoT(5000)"
        assert spec.limit_unit == "chinese-characters"


class TestRender:
    def test_template_shape(self):
        cat = default_catalog()
        text = render(cat.get("BeConcise"), "What is 2+2?")
        assert text.startswith("Answer the following question. Be concise.")
        assert "Question: What is 2+2?" in text
        assert "'Answer: ANSWER' (without quotes)" in text
        assert text.startswith(REQUEST_PREAMBLE)

    def test_empty_question_rejected(self):
        with pytest.raises(ValueError):
            render(default_catalog().get("NoCoT"), "")

    def test_instruction_is_only_difference(self):
        cat = default_catalog()
        a = render(cat.get("NoCoT"), "Q?")
        b = render(cat.get("DefaultCoT"), "Q?")
        assert a.replace(FIXED_INSTRUCTIONS["NoCoT"], "") == b.replace(
            FIXED_INSTRUCTIONS["DefaultCoT"], ""
        )

    @given(
        q1=st.text(min_size=1, max_size=200),
        q2=st.text(min_size=1, max_size=200),
    )
    def test_injective_in_question(self, q1, q2):
        spec = default_catalog().get("BeConcise")
        if q1 != q2:
            assert render(spec, q1) != render(spec, q2)

    def test_limit_appears_exactly_once_in_instruction(self):
        for family, grid in DEFAULT_LIMIT_GRID.items():
            for k in grid:
                spec = limited_spec(family, k)
                assert spec.instruction.count(str(k)) == 1


class TestCatalogSerialization:
    def test_round_trip(self, tmp_path):
        cat = default_catalog()
        path = tmp_path / "catalog.json"
        cat.save(path)
        assert PromptCatalog.load(path) == cat

    def test_duplicate_ids_rejected(self):
        spec = default_catalog().get("NoCoT")
        with pytest.raises(ValueError):
            PromptCatalog(specs=(spec, spec))
