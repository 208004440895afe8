"""Prompt catalog and question-template rendering.

The catalog covers nine fixed compression instructions plus five
length-limited families; the default grid instantiates the limited families
at 22 points for a 31-prompt catalog. Every request rendered for a model
wraps the instruction and question in a single fixed template ending with a
final-line answer-format contract that the grader relies on.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

FIXED_INSTRUCTIONS: dict[str, str] = {
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

# family -> (instruction template, limit unit, inclusive limit range)
PARAMETERIZED_FAMILIES: dict[str, tuple[str, str, tuple[int, int | None]]] = {
    "WordLimit": ("Use at most {k} words.", "words", (1, 100)),
    "CharLimit": ("Use at most {k} letters.", "letters", (1, 500)),
    "TokenLimit": ("Use at most {k} tokens.", "tokens", (1, 500)),
    "StepLimit": ("Use at most {k} steps.", "steps", (1, 5)),
    "ChineseCoT(k)": ("Use at most {k} Chinese characters.", "chinese-characters", (1, None)),
}

DEFAULT_LIMIT_GRID: dict[str, tuple[int, ...]] = {
    "WordLimit": (1, 5, 10, 15, 25, 50, 100),
    "CharLimit": (50, 100, 500),
    "TokenLimit": (10, 25, 50, 100, 500),
    "StepLimit": (1, 2, 3, 5),
    "ChineseCoT(k)": (10, 50, 100),
}

QUESTION_TEMPLATE = (
    "Answer the following question. {prompt}\n"
    "Question: {question}\n"
    "The last line of your response should be of the following format: "
    "'Answer: ANSWER' (without quotes) where ANSWER is your final answer."
)

REQUEST_PREAMBLE = "Answer the following question."


@dataclass(frozen=True)
class PromptSpec:
    """One catalog entry: a chain-of-thought instruction, optionally limited to k units."""

    prompt_id: str
    family: str
    instruction: str
    limit: int | None = None
    limit_unit: str | None = None

    def __post_init__(self) -> None:
        parameterized = self.family in PARAMETERIZED_FAMILIES
        if not parameterized and self.family not in FIXED_INSTRUCTIONS:
            raise ValueError(f"unknown prompt family {self.family!r}")
        if parameterized:
            if self.limit is None:
                raise ValueError(f"family {self.family!r} requires a limit")
            _, unit, (lo, hi) = PARAMETERIZED_FAMILIES[self.family]
            if self.limit < lo or (hi is not None and self.limit > hi):
                upper = hi if hi is not None else "inf"
                raise ValueError(
                    f"limit {self.limit} out of range [{lo}, {upper}] for family {self.family!r}"
                )
            if self.limit_unit != unit:
                raise ValueError(f"family {self.family!r} uses limit_unit {unit!r}")
        elif self.limit is not None or self.limit_unit is not None:
            raise ValueError(f"family {self.family!r} does not take a limit")

    def to_json_dict(self) -> dict:
        return {
            "prompt_id": self.prompt_id,
            "family": self.family,
            "instruction": self.instruction,
            "limit": self.limit,
            "limit_unit": self.limit_unit,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> PromptSpec:
        return cls(
            prompt_id=obj["prompt_id"],
            family=obj["family"],
            instruction=obj["instruction"],
            limit=obj.get("limit"),
            limit_unit=obj.get("limit_unit"),
        )


def fixed_spec(family: str) -> PromptSpec:
    """Catalog entry for one of the nine fixed instructions."""
    return PromptSpec(prompt_id=family, family=family, instruction=FIXED_INSTRUCTIONS[family])


def limited_spec(family: str, k: int) -> PromptSpec:
    """Catalog entry for a length-limited family instantiated at limit k."""
    template, unit, _ = PARAMETERIZED_FAMILIES[family]
    base = family[: -len("(k)")] if family.endswith("(k)") else family
    return PromptSpec(
        prompt_id=f"{base}({k})",
        family=family,
        instruction=template.format(k=k),
        limit=k,
        limit_unit=unit,
    )


@dataclass(frozen=True)
class PromptCatalog:
    """Ordered, id-unique collection of prompt specs."""

    specs: tuple[PromptSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "specs", tuple(self.specs))
        ids = [s.prompt_id for s in self.specs]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError("duplicate prompt_id(s): " + ", ".join(dupes))

    def __len__(self) -> int:
        return len(self.specs)

    def __iter__(self) -> Iterator[PromptSpec]:
        return iter(self.specs)

    @property
    def prompt_ids(self) -> tuple[str, ...]:
        return tuple(s.prompt_id for s in self.specs)

    def get(self, prompt_id: str) -> PromptSpec:
        for spec in self.specs:
            if spec.prompt_id == prompt_id:
                return spec
        raise KeyError(prompt_id)

    def save(self, path: str | Path) -> None:
        payload = [s.to_json_dict() for s in self.specs]
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> PromptCatalog:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(specs=tuple(PromptSpec.from_json_dict(obj) for obj in payload))


def default_catalog() -> PromptCatalog:
    """The 31-prompt default catalog: 9 fixed entries plus the default limit grid."""
    specs = [fixed_spec(name) for name in FIXED_INSTRUCTIONS]
    for family, grid in DEFAULT_LIMIT_GRID.items():
        specs.extend(limited_spec(family, k) for k in grid)
    return PromptCatalog(specs=tuple(specs))


def render(spec: PromptSpec, question: str) -> str:
    """Render the full request text for one (instruction, question) pair."""
    if not question:
        raise ValueError("question must be non-empty")
    return QUESTION_TEMPLATE.format(prompt=spec.instruction, question=question)
