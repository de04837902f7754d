"""Strict JSON extraction for concretization responses.

Model output routinely wraps the JSON in prose or code fences, so we scan
for the first balanced object (string-aware) and validate the three
required keys.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import JsonSyntaxError, NoJsonFound, SchemaError

OBJECT_NAME_KEY = "Object/Category Name"


@dataclass(frozen=True)
class ConcretizationResult:
    object_name: str
    description: str
    reason: str


def first_balanced_object(raw: str) -> str:
    """The first {...} region with balanced braces outside string literals."""
    start = raw.find("{")
    if start < 0:
        raise NoJsonFound("no '{' in response")
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(raw)):
        ch = raw[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return raw[start : i + 1]
    raise NoJsonFound("unbalanced braces in response")


def parse_concretization(raw: str) -> ConcretizationResult:
    block = first_balanced_object(raw)
    try:
        obj = json.loads(block)
    except json.JSONDecodeError as exc:
        raise JsonSyntaxError(f"concretization JSON does not parse: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("concretization must be a JSON object")
    fields = {}
    for key, attr in ((OBJECT_NAME_KEY, "object_name"), ("description", "description"), ("reason", "reason")):
        value = obj.get(key)
        if not isinstance(value, str) or not value.strip():
            raise SchemaError(f"missing or empty field {key!r}")
        fields[attr] = value.strip()
    return ConcretizationResult(**fields)


def serialize_concretization(result: ConcretizationResult) -> str:
    return json.dumps(
        {
            OBJECT_NAME_KEY: result.object_name,
            "description": result.description,
            "reason": result.reason,
        },
        ensure_ascii=False,
    )


def provider_prompt(result: ConcretizationResult) -> str:
    """The string handed to the stylize/texture providers."""
    return f"{result.object_name}, {result.description}"
