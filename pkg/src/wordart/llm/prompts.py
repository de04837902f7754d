"""Prompt construction from the versioned template files."""
from __future__ import annotations

from enum import Enum
from importlib import resources

from ..errors import EmptyConcept

TEMPLATE_VERSION = "v1"


class PromptKind(Enum):
    INPUT_PARSING = "input_parsing"
    STYLIZATION = "stylization"
    TEXTURE = "texture"


def _template(name: str) -> str:
    ref = resources.files("wordart.llm") / "templates" / f"{name}_{TEMPLATE_VERSION}.txt"
    return ref.read_text(encoding="utf-8").strip()


def concretization_system_prompt() -> str:
    return _template("concretize_system")


def input_parse_system_prompt() -> str:
    return _template("input_parse_system")


def build_prompt(kind: PromptKind, concept: str) -> str:
    """System prompt + instantiated question for the given stage.

    For INPUT_PARSING, `concept` is the raw user text to parse. Placeholder
    substitution is literal, so braces in user text are inert.
    """
    if not concept or not concept.strip():
        raise EmptyConcept("concept must be non-empty")
    concept = concept.strip()
    if kind is PromptKind.INPUT_PARSING:
        question = _template("input_parse_question").replace("{TEXT}", concept)
        return input_parse_system_prompt() + "\n\n" + question
    question = _template("concretize_question").replace("{CONCEPT}", concept)
    return concretization_system_prompt() + "\n\n" + question


def question_only(kind: PromptKind, concept: str) -> str:
    """The user-turn question without the system preamble."""
    if not concept or not concept.strip():
        raise EmptyConcept("concept must be non-empty")
    concept = concept.strip()
    if kind is PromptKind.INPUT_PARSING:
        return _template("input_parse_question").replace("{TEXT}", concept)
    return _template("concretize_question").replace("{CONCEPT}", concept)
