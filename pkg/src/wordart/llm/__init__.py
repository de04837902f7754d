from .backends import (
    BackendConfig,
    DesignRequest,
    HttpBackend,
    MockBackend,
    ReplayBackend,
    make_backend,
    parse_user_input,
    query_concretization,
)
from .parsing import (
    ConcretizationResult,
    parse_concretization,
    provider_prompt,
    serialize_concretization,
)
from .prompts import PromptKind, build_prompt, question_only

__all__ = [
    "BackendConfig",
    "ConcretizationResult",
    "DesignRequest",
    "HttpBackend",
    "MockBackend",
    "PromptKind",
    "ReplayBackend",
    "build_prompt",
    "make_backend",
    "parse_concretization",
    "parse_user_input",
    "provider_prompt",
    "query_concretization",
    "question_only",
    "serialize_concretization",
]
