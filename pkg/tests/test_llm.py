"""Prompt templates, strict JSON parsing, backends, retry accounting."""
from pathlib import Path

import pytest

from wordart.errors import (
    BackendUnavailable,
    EmptyConcept,
    ExhaustedRetries,
    NoJsonFound,
    ParseFailure,
    SchemaError,
)
from wordart.llm import (
    ConcretizationResult,
    MockBackend,
    PromptKind,
    ReplayBackend,
    build_prompt,
    parse_concretization,
    parse_user_input,
    provider_prompt,
    query_concretization,
    question_only,
    serialize_concretization,
)
from wordart.llm.prompts import concretization_system_prompt

FIXTURES = Path(__file__).parent / "fixtures"


def test_build_prompt_stylization_contains_concept_slot():
    p = build_prompt(PromptKind.STYLIZATION, "spring")
    assert "in/of spring, including in real-life, artist, and film works." in p
    assert p.startswith(concretization_system_prompt())


def test_build_prompt_texture():
    p = build_prompt(PromptKind.TEXTURE, "food")
    assert "in/of food" in p


def test_build_prompt_rejects_empty_concept():
    with pytest.raises(EmptyConcept):
        build_prompt(PromptKind.STYLIZATION, "")
    with pytest.raises(EmptyConcept):
        build_prompt(PromptKind.TEXTURE, "   ")


def test_concept_fills_the_slot_exactly_once():
    marker = "XSLOTX"
    prefix, _, suffix = question_only(PromptKind.STYLIZATION, marker).partition(marker)
    for concept in ("cat", "jade", "urban planning"):
        q = question_only(PromptKind.STYLIZATION, concept)
        assert q.startswith(prefix) and q.endswith(suffix)
        assert q[len(prefix) : len(q) - len(suffix)] == concept


def test_parse_concretization_fixture_responses():
    import json

    entries = json.loads((FIXTURES / "concretization_replay.json").read_text())
    spring = parse_concretization(entries[0]["response"])
    assert spring.object_name == "Rainbow"
    assert spring.description == "colorful, natural"
    food = parse_concretization(entries[1]["response"])
    assert food.object_name == "Pizza"


def test_parse_concretization_tolerates_prose_and_fences():
    wrapped = 'Sure! Here you go:\n```json\n{"Object/Category Name": "Koi", "description": "calm, vivid", "reason": "a classic water-garden symbol"}\n```\nHope this helps.'
    r = parse_concretization(wrapped)
    assert r.object_name == "Koi"


def test_parse_concretization_missing_key_is_schema_error():
    with pytest.raises(SchemaError):
        parse_concretization('{"Object/Category Name": "X", "description": "y"}')
    with pytest.raises(SchemaError):
        parse_concretization('{"Object/Category Name": "", "description": "y", "reason": "z"}')


def test_parse_concretization_no_json():
    with pytest.raises(NoJsonFound):
        parse_concretization("no structured data here")
    with pytest.raises(NoJsonFound):
        parse_concretization("dangling { open")


def test_round_trip_serialize_parse():
    r = ConcretizationResult("Lantern", "warm, glowing", 'braces {inside} and "quotes" survive')
    assert parse_concretization(serialize_concretization(r)) == r


def test_provider_prompt_join():
    r = ConcretizationResult("Pizza", "delicious, versatile", "...")
    assert provider_prompt(r) == "Pizza, delicious, versatile"


def test_mock_backend_fixed_table_and_determinism():
    result = query_concretization(MockBackend(), PromptKind.STYLIZATION, "cat")
    assert result.object_name == "Hellokitty"
    again = query_concretization(MockBackend(), PromptKind.STYLIZATION, "cat")
    assert again == result
    fallback = query_concretization(MockBackend(), PromptKind.TEXTURE, "volcano")
    assert fallback.object_name == "Volcano"


def test_query_accepts_backend_config():
    from wordart.llm import BackendConfig

    result = query_concretization(
        BackendConfig(kind="mock"), PromptKind.STYLIZATION, "cat"
    )
    assert result.object_name == "Hellokitty"


def test_replay_backend_round_trip():
    backend = ReplayBackend(str(FIXTURES / "concretization_replay.json"))
    spring = query_concretization(backend, PromptKind.STYLIZATION, "spring")
    assert spring.object_name == "Rainbow"
    food = query_concretization(backend, PromptKind.TEXTURE, "food")
    assert food.object_name == "Pizza"
    with pytest.raises(BackendUnavailable):
        query_concretization(backend, PromptKind.STYLIZATION, "unfixtured")


def test_exhausted_retries_counts_backend_calls():
    class Garbage:
        def __init__(self):
            self.calls = 0

        def complete(self, system, user):
            self.calls += 1
            return "not json at all"

    for max_retries in (0, 1, 3):
        backend = Garbage()
        with pytest.raises(ExhaustedRetries) as exc_info:
            query_concretization(backend, PromptKind.STYLIZATION, "cat", max_retries=max_retries)
        assert backend.calls == max_retries + 1
        assert len(exc_info.value.attempts) == max_retries + 1


def test_retry_prompt_carries_validation_error():
    seen = []

    class FlakyThenGood:
        def complete(self, system, user):
            seen.append(user)
            if len(seen) == 1:
                return '{"Object/Category Name": "X", "description": "y"}'
            return '{"Object/Category Name": "X", "description": "y", "reason": "z"}'

    result = query_concretization(FlakyThenGood(), PromptKind.STYLIZATION, "cat")
    assert result.object_name == "X"
    assert len(seen) == 2
    assert "failed validation" in seen[1]


def test_http_backend_unreachable():
    from wordart.llm import BackendConfig, HttpBackend

    backend = HttpBackend(
        BackendConfig(kind="http", endpoint="http://127.0.0.1:1/v1/chat", timeout=0.2)
    )
    with pytest.raises(BackendUnavailable):
        backend.complete("sys", "user")


def test_parse_user_input_mock_rule():
    req = parse_user_input(MockBackend(), "A cat in jewelry design", fallback_characters="cat")
    assert req.concept == "cat"
    assert req.domain == "jewelry"
    assert req.characters == "cat"


def test_parse_user_input_cjk_characters_win():
    req = parse_user_input(MockBackend(), "字 a flower in poster design")
    assert req.characters == "字"
    assert req.concept == "flower"
    assert req.domain == "poster"


def test_parse_user_input_defaults_to_concept_characters():
    req = parse_user_input(MockBackend(), "a dragon")
    assert req.characters == "dragon"
    assert req.domain == "general"


def test_parse_user_input_empty_raises():
    with pytest.raises(ParseFailure):
        parse_user_input(MockBackend(), "")


def test_parse_user_input_mock_deterministic():
    a = parse_user_input(MockBackend(), "A cat in jewelry design")
    b = parse_user_input(MockBackend(), "A cat in jewelry design")
    assert a == b
