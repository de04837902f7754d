"""Chat backends (mock, replay, http) and the validated query loops."""
from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass

import requests

from ..errors import BackendUnavailable, ExhaustedRetries, ParseFailure
from .parsing import ConcretizationResult, parse_concretization, serialize_concretization
from .prompts import PromptKind, build_prompt


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "mock"               # "http" | "mock" | "replay"
    endpoint: str = ""
    fixture_path: str = ""
    timeout: float = 30.0
    max_retries: int = 2
    temperature: float = 0.7
    model: str = "gpt-3.5-turbo"
    api_key_env: str = "WORDART_API_KEY"
    max_in_flight: int = 4

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.kind not in ("http", "mock", "replay"):
            raise ValueError(f"unknown backend kind {self.kind!r}")


@dataclass(frozen=True)
class DesignRequest:
    raw_text: str
    characters: str
    concept: str
    domain: str


# --- mock --------------------------------------------------------------------

# Fixed concretization entries so offline runs are stable and recognizable.
MOCK_CONCRETIZATIONS = {
    "cat": ("Hellokitty", "cute, happiness", "famous for the cartoon"),
    "spring": ("Rainbow", "colorful, natural", "appears after spring rain and stands for hope"),
    "food": ("Pizza", "delicious, versatile", "loved worldwide and endlessly customizable"),
    "jewelry": ("Diamond", "brilliant, precious", "the signature jewelry stone"),
    "winter": ("Snowflake", "crystalline, white", "the emblem of winter weather"),
}

_CJK = r"㐀-鿿豈-﫿"


class MockBackend:
    """Pure function of the prompt: table lookups plus a rule-based parser."""

    def complete(self, system: str, user: str) -> str:
        if "INPUT: <<<" in user:
            return self._parse_input(user)
        m = re.search(r"in/of (.+?), including in real-life", user)
        concept = m.group(1).strip() if m else "thing"
        name, desc, reason = MOCK_CONCRETIZATIONS.get(
            concept.lower(),
            (concept.title(), "iconic, recognizable", f"a widely known embodiment of {concept}"),
        )
        return serialize_concretization(ConcretizationResult(name, desc, reason))

    @staticmethod
    def _parse_input(user: str) -> str:
        m = re.search(r"INPUT: <<<(.*)>>>", user, re.S)
        text = (m.group(1) if m else "").strip()
        characters = ""
        cjk = re.search(f"[{_CJK}]+", text)
        if cjk:
            characters = cjk.group(0)
            text = text.replace(characters, " ")
        domain = "general"
        dm = re.search(r"\bin\s+([\w ]+?)\s+design\b\.?\s*$", text, re.I)
        if dm:
            domain = dm.group(1).strip().lower()
            text = text[: dm.start()]
        words = [w for w in re.findall(r"[A-Za-z]+", text) if w.lower() not in ("a", "an", "the")]
        concept = " ".join(words).strip().lower()
        return json.dumps(
            {"characters": characters, "concept": concept, "domain": domain}
        )


# --- replay --------------------------------------------------------------------

class ReplayBackend:
    """Serves fixture responses keyed by the exact user prompt."""

    def __init__(self, fixture_path: str):
        try:
            with open(fixture_path, encoding="utf-8") as f:
                entries = json.load(f)
        except OSError as exc:
            raise BackendUnavailable(f"cannot read fixture {fixture_path}: {exc}") from exc
        self.responses = {e["prompt"]: e["response"] for e in entries}

    def complete(self, system: str, user: str) -> str:
        if user not in self.responses:
            raise BackendUnavailable(f"no replay fixture for prompt: {user[:80]}...")
        return self.responses[user]


# --- http ----------------------------------------------------------------------

class HttpBackend:
    """Chat-completion wire shape: system+user messages, bearer token."""

    def __init__(self, cfg: BackendConfig):
        self.cfg = cfg
        self._gate = threading.Semaphore(cfg.max_in_flight)

    def complete(self, system: str, user: str) -> str:
        key = os.environ.get(self.cfg.api_key_env, "")
        headers = {"Content-Type": "application/json"}
        if key:
            headers["Authorization"] = f"Bearer {key}"
        body = {
            "model": self.cfg.model,
            "temperature": self.cfg.temperature,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }
        with self._gate:
            try:
                resp = requests.post(
                    self.cfg.endpoint, json=body, headers=headers, timeout=self.cfg.timeout
                )
            except requests.RequestException as exc:
                raise BackendUnavailable(f"backend unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise BackendUnavailable(
                f"backend returned {resp.status_code}: {resp.text[:200]}"
            )
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendUnavailable(f"malformed backend response: {exc}") from exc


def make_backend(cfg: BackendConfig):
    if cfg.kind == "mock":
        return MockBackend()
    if cfg.kind == "replay":
        return ReplayBackend(cfg.fixture_path)
    return HttpBackend(cfg)


# --- validated query loops -------------------------------------------------------

def query_concretization(backend, kind: PromptKind, concept: str, max_retries: int = 2) -> ConcretizationResult:
    """build_prompt -> backend -> parse, retrying with the validation error
    appended; raises ExhaustedRetries after max_retries + 1 attempts.

    `backend` may be a BackendConfig (a backend is built from it, and its
    max_retries wins) or any object with complete(system, user).
    """
    if isinstance(backend, BackendConfig):
        max_retries = backend.max_retries
        backend = make_backend(backend)
    base = build_prompt(kind, concept)
    system, _, user = base.partition("\n\n")
    attempts = []
    prompt = user
    for _ in range(max_retries + 1):
        raw = backend.complete(system, prompt)
        try:
            return parse_concretization(raw)
        except Exception as exc:  # parse/schema errors feed the retry prompt
            attempts.append(exc)
            prompt = user + f"\n\nThe previous response failed validation: {exc}. Answer with the strict JSON object only."
    raise ExhaustedRetries(
        f"no valid concretization for {concept!r} after {max_retries + 1} attempts",
        attempts=attempts,
    )


def parse_user_input(backend, raw_text: str, max_retries: int = 2, fallback_characters: str = "") -> DesignRequest:
    """Turn free-form input into a DesignRequest via the parsing prompt.

    Explicit characters from the caller's job configuration win over the
    model's extraction; the concept word itself is the last resort, so the
    result always carries non-empty characters.
    """
    if not raw_text or not raw_text.strip():
        raise ParseFailure("empty design request")
    base = build_prompt(PromptKind.INPUT_PARSING, raw_text)
    system, _, user = base.partition("\n\n")
    attempts = []
    prompt = user
    for _ in range(max_retries + 1):
        raw = backend.complete(system, prompt)
        try:
            obj = json.loads(raw)
            concept = str(obj.get("concept", "")).strip()
            if not concept:
                raise ParseFailure("parser returned an empty concept")
            characters = fallback_characters or str(obj.get("characters", "")).strip() or concept
            domain = str(obj.get("domain", "")).strip() or "general"
            return DesignRequest(
                raw_text=raw_text, characters=characters, concept=concept, domain=domain
            )
        except (json.JSONDecodeError, ParseFailure) as exc:
            attempts.append(exc)
            prompt = user + f"\n\nThe previous response failed validation: {exc}. Answer with the strict JSON object only."
    raise ParseFailure(
        f"could not parse design request after {max_retries + 1} attempts: {attempts[-1]}"
    )
