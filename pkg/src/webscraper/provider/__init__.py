"""Model providers behind one ``complete(system, conversation, tools, config)`` call."""

from typing import Protocol, Sequence

from .codec import decode_response, encode_request, message_from_wire, message_to_wire
from .messages import (
    ContentBlock,
    DecodeError,
    Message,
    Param,
    ProviderConfig,
    ProviderError,
    ProviderTimeout,
    ProviderTransportError,
    SchemaError,
    ToolSchema,
    image_block,
    text_block,
    tool_result_block,
    tool_use_block,
)
from .remote import HttpProvider
from .scripted import ScriptedProvider, ScriptedTrace, load_trace, save_trace, trace_from_dict


class Provider(Protocol):
    def complete(
        self,
        system_prompt: str,
        conversation: Sequence[Message],
        tools: Sequence[ToolSchema],
        config: ProviderConfig,
    ) -> Message: ...


__all__ = [
    "ContentBlock",
    "DecodeError",
    "HttpProvider",
    "Message",
    "Param",
    "Provider",
    "ProviderConfig",
    "ProviderError",
    "ProviderTimeout",
    "ProviderTransportError",
    "SchemaError",
    "ScriptedProvider",
    "ScriptedTrace",
    "ToolSchema",
    "decode_response",
    "encode_request",
    "image_block",
    "load_trace",
    "message_from_wire",
    "message_to_wire",
    "save_trace",
    "text_block",
    "tool_result_block",
    "tool_use_block",
    "trace_from_dict",
]
