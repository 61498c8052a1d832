"""Language-model access: templates, extraction, client, cassettes, accounting."""

from .client import (
    Cassette,
    CassetteExhausted,
    CassetteMismatch,
    CassetteRecorder,
    ChatClient,
    CompletionExchange,
    CompletionRequest,
    HttpTransport,
    ServiceError,
    TransportResult,
    request_hash,
)
from .extract import extract_code_blocks
from .templates import MissingPlaceholder, PromptTemplate, few_shot_pddl_examples, load_template
from .usage import TokenUsage, UsageSummary, usage_total

__all__ = [
    "Cassette",
    "CassetteExhausted",
    "CassetteMismatch",
    "CassetteRecorder",
    "ChatClient",
    "CompletionExchange",
    "CompletionRequest",
    "HttpTransport",
    "MissingPlaceholder",
    "PromptTemplate",
    "ServiceError",
    "TokenUsage",
    "TransportResult",
    "UsageSummary",
    "extract_code_blocks",
    "few_shot_pddl_examples",
    "load_template",
    "request_hash",
    "usage_total",
]
