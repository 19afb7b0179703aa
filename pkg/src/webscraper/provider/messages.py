"""Conversation messages, content blocks and tool schemas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

ROLES = ("user", "assistant", "tool")
BLOCK_KINDS = ("text", "image", "tool_use", "tool_result")
PARAM_TYPES = ("string", "integer", "boolean", "object")


class ProviderError(Exception):
    """Model call failed."""


class ProviderTransportError(ProviderError):
    """Network-level failure; retried with backoff."""


class ProviderTimeout(ProviderError):
    pass


class SchemaError(ProviderError):
    """Response or tool arguments did not conform. ``raw`` keeps the payload."""

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class DecodeError(SchemaError):
    pass


@dataclass(frozen=True)
class ContentBlock:
    kind: str
    text: str = ""
    data: bytes = b""
    media_type: str = ""
    name: str = ""
    call_id: str = ""
    arguments: dict[str, Any] = field(default_factory=dict)
    is_error: bool = False

    def __post_init__(self) -> None:
        if self.kind not in BLOCK_KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}")


def text_block(text: str) -> ContentBlock:
    return ContentBlock("text", text=text)


def image_block(data: bytes, media_type: str = "image/png") -> ContentBlock:
    return ContentBlock("image", data=data, media_type=media_type)


def tool_use_block(name: str, call_id: str, arguments: Mapping[str, Any] | None = None) -> ContentBlock:
    return ContentBlock("tool_use", name=name, call_id=call_id, arguments=dict(arguments or {}))


def tool_result_block(
    call_id: str, output: str, is_error: bool = False, image: bytes = b"", media_type: str = ""
) -> ContentBlock:
    """Tool result; an optional screenshot rides along in ``data``."""
    return ContentBlock(
        "tool_result", text=output, call_id=call_id, is_error=is_error, data=image, media_type=media_type if image else ""
    )


@dataclass(frozen=True)
class Message:
    role: str
    blocks: tuple[ContentBlock, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if not self.blocks:
            raise ValueError("a message needs at least one block")
        results = [b.kind == "tool_result" for b in self.blocks]
        if self.role == "tool" and not all(results):
            raise ValueError("tool messages may only contain tool_result blocks")
        if self.role != "tool" and any(results):
            raise ValueError(f"{self.role} messages may not contain tool_result blocks")
        if self.role != "assistant" and any(b.kind == "tool_use" for b in self.blocks):
            raise ValueError("only assistant messages may contain tool_use blocks")

    @classmethod
    def user(cls, text: str) -> "Message":
        return cls("user", (text_block(text),))

    def text(self) -> str:
        return "\n".join(b.text for b in self.blocks if b.kind == "text")

    def tool_uses(self) -> list[ContentBlock]:
        return [b for b in self.blocks if b.kind == "tool_use"]


@dataclass(frozen=True)
class Param:
    type: str
    description: str = ""
    required: bool = False

    def __post_init__(self) -> None:
        if self.type not in PARAM_TYPES:
            raise ValueError(f"unknown parameter type {self.type!r}")


@dataclass(frozen=True)
class ToolSchema:
    name: str
    description: str
    params: dict[str, Param] = field(default_factory=dict)

    def validate(self, arguments: Mapping[str, Any]) -> None:
        if not isinstance(arguments, Mapping):
            raise SchemaError(f"{self.name}: arguments must be an object", raw=repr(arguments))
        unknown = set(arguments) - set(self.params)
        if unknown:
            raise SchemaError(f"{self.name}: undeclared arguments {sorted(unknown)}", raw=repr(dict(arguments)))
        for pname, spec in self.params.items():
            if pname not in arguments:
                if spec.required:
                    raise SchemaError(f"{self.name}: missing required argument {pname!r}", raw=repr(dict(arguments)))
                continue
            if not _type_ok(arguments[pname], spec.type):
                raise SchemaError(
                    f"{self.name}: argument {pname!r} should be {spec.type}", raw=repr(dict(arguments))
                )


def _type_ok(value: Any, type_tag: str) -> bool:
    if type_tag == "string":
        return isinstance(value, str)
    if type_tag == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if type_tag == "boolean":
        return isinstance(value, bool)
    return isinstance(value, dict)


def validate_tool_uses(message: Message, tools: Iterable[ToolSchema]) -> None:
    """Check every tool_use against its declared schema.

    Calls naming an undeclared tool are left alone; the dispatcher answers
    them with an "unknown tool" error result.
    """
    by_name = {t.name: t for t in tools}
    for block in message.tool_uses():
        schema = by_name.get(block.name)
        if schema is not None:
            schema.validate(block.arguments)


def check_conversation(conversation: Sequence[Message]) -> None:
    """Role order must be legal and every tool_use answered before the next turn."""
    if not conversation:
        raise ProviderError("conversation is empty")
    if conversation[0].role != "user":
        raise ProviderError("conversation must start with a user message")
    pending: set[str] = set()
    seen_calls: set[str] = set()
    prev = None
    for i, msg in enumerate(conversation):
        if msg.role == "assistant":
            if prev == "assistant":
                raise ProviderError(f"message {i}: two assistant turns in a row")
            if pending:
                raise ProviderError(f"message {i}: unanswered tool calls {sorted(pending)}")
            ids = [b.call_id for b in msg.tool_uses()]
            if len(set(ids)) != len(ids) or seen_calls & set(ids):
                raise ProviderError(f"message {i}: duplicate tool call ids")
            pending = set(ids)
            seen_calls |= pending
        elif msg.role == "tool":
            if prev != "assistant":
                raise ProviderError(f"message {i}: tool results must follow an assistant turn")
            answered = [b.call_id for b in msg.blocks]
            if set(answered) != pending or len(answered) != len(pending):
                raise ProviderError(f"message {i}: tool results do not match the pending calls")
            pending = set()
        else:
            if pending:
                raise ProviderError(f"message {i}: unanswered tool calls {sorted(pending)}")
            if prev == "user":
                raise ProviderError(f"message {i}: two user turns in a row")
        prev = msg.role
    if pending:
        raise ProviderError("last assistant turn has unanswered tool calls")


@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str = ""
    model: str = "claude-3-7-sonnet-20250219"
    temperature: float = 0.0
    max_tokens: int = 4096
    timeout_ms: int = 120_000

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
