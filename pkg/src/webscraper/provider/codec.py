"""JSON wire format for model requests and responses.

Request body: ``{model, system, messages, tools, temperature, max_tokens}``.
Messages are ``{role, content: [block, ...]}`` with blocks

* ``{"type": "text", "text": ...}``
* ``{"type": "image", "source": {"type": "base64", "media_type": ..., "data": ...}}``
* ``{"type": "tool_use", "id": ..., "name": ..., "input": {...}}``
* ``{"type": "tool_result", "tool_use_id": ..., "content": ..., "is_error": bool}``

A tool_result carrying a screenshot encodes ``content`` as a list of a text
block and an image block; otherwise ``content`` is a plain string.
"""

from __future__ import annotations

import base64
import json
from typing import Any, Iterable, Mapping, Sequence

from .messages import (
    ContentBlock,
    DecodeError,
    Message,
    Param,
    ProviderConfig,
    SchemaError,
    ToolSchema,
    image_block,
    text_block,
    tool_result_block,
    tool_use_block,
)


def block_to_wire(block: ContentBlock) -> dict[str, Any]:
    if block.kind == "text":
        return {"type": "text", "text": block.text}
    if block.kind == "image":
        return {"type": "image", "source": _image_source(block.data, block.media_type)}
    if block.kind == "tool_use":
        return {"type": "tool_use", "id": block.call_id, "name": block.name, "input": dict(block.arguments)}
    content: Any = block.text
    if block.data:
        content = [{"type": "text", "text": block.text}, {"type": "image", "source": _image_source(block.data, block.media_type)}]
    return {"type": "tool_result", "tool_use_id": block.call_id, "content": content, "is_error": block.is_error}


def _image_source(data: bytes, media_type: str) -> dict[str, str]:
    return {"type": "base64", "media_type": media_type, "data": base64.b64encode(data).decode("ascii")}


def _image_from_source(src: Any) -> tuple[bytes, str]:
    if not isinstance(src, Mapping) or src.get("type") != "base64":
        raise DecodeError("image source must be base64", raw=json.dumps(src, default=str))
    try:
        return base64.b64decode(src["data"], validate=True), src["media_type"]
    except (KeyError, ValueError) as exc:
        raise DecodeError(f"bad image source: {exc}", raw=json.dumps(src, default=str)) from exc


def block_from_wire(obj: Any) -> ContentBlock:
    raw = json.dumps(obj, ensure_ascii=False, default=str)
    if not isinstance(obj, Mapping):
        raise DecodeError("content block must be an object", raw=raw)
    kind = obj.get("type")
    try:
        if kind == "text":
            return text_block(_str(obj["text"]))
        if kind == "image":
            data, media = _image_from_source(obj["source"])
            return image_block(data, media)
        if kind == "tool_use":
            args = obj.get("input", {})
            if not isinstance(args, Mapping):
                raise DecodeError("tool_use input must be an object", raw=raw)
            return tool_use_block(_str(obj["name"]), _str(obj["id"]), args)
        if kind == "tool_result":
            content = obj.get("content", "")
            image, media = b"", ""
            if isinstance(content, list):
                texts = []
                for part in content:
                    if isinstance(part, Mapping) and part.get("type") == "image":
                        image, media = _image_from_source(part.get("source"))
                    elif isinstance(part, Mapping) and part.get("type") == "text":
                        texts.append(_str(part.get("text", "")))
                    else:
                        raise DecodeError("unknown tool_result content part", raw=raw)
                content = "\n".join(texts)
            return tool_result_block(_str(obj["tool_use_id"]), _str(content), bool(obj.get("is_error", False)), image, media)
    except KeyError as exc:
        raise DecodeError(f"{kind} block lacks {exc}", raw=raw) from exc
    raise DecodeError(f"unknown content block type {kind!r}", raw=raw)


def _str(value: Any) -> str:
    if not isinstance(value, str):
        raise DecodeError(f"expected string, got {type(value).__name__}", raw=repr(value))
    return value


def message_to_wire(msg: Message) -> dict[str, Any]:
    return {"role": msg.role, "content": [block_to_wire(b) for b in msg.blocks]}


def message_from_wire(obj: Any) -> Message:
    raw = json.dumps(obj, ensure_ascii=False, default=str)
    if not isinstance(obj, Mapping) or "role" not in obj:
        raise DecodeError("message must be an object with a role", raw=raw)
    content = obj.get("content")
    if isinstance(content, str):
        content = [{"type": "text", "text": content}]
    if not isinstance(content, list):
        raise DecodeError("message content must be a list", raw=raw)
    try:
        return Message(obj["role"], tuple(block_from_wire(b) for b in content))
    except ValueError as exc:
        raise DecodeError(str(exc), raw=raw) from exc


def tool_to_wire(tool: ToolSchema) -> dict[str, Any]:
    return {
        "name": tool.name,
        "description": tool.description,
        "input_schema": {
            "type": "object",
            "properties": {k: {"type": p.type, "description": p.description} for k, p in tool.params.items()},
            "required": [k for k, p in tool.params.items() if p.required],
        },
    }


def tool_from_wire(obj: Mapping[str, Any]) -> ToolSchema:
    schema = obj.get("input_schema", {})
    required = set(schema.get("required", []))
    params = {
        k: Param(v["type"], v.get("description", ""), k in required) for k, v in schema.get("properties", {}).items()
    }
    return ToolSchema(obj["name"], obj.get("description", ""), params)


def encode_request(
    system_prompt: str,
    conversation: Sequence[Message],
    tools: Iterable[ToolSchema],
    config: ProviderConfig,
) -> dict[str, Any]:
    return {
        "model": config.model,
        "system": system_prompt,
        "messages": [message_to_wire(m) for m in conversation],
        "tools": [tool_to_wire(t) for t in tools],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }


def decode_response(body: str | bytes | Mapping[str, Any]) -> Message:
    """Decode a response body into one assistant message.

    Accepts a bare message object or one wrapped as ``{"message": ...}``.
    Any non-conforming body raises :class:`SchemaError` carrying the raw text.
    """
    if isinstance(body, (bytes, bytearray)):
        body = body.decode("utf-8", errors="replace")
    raw = body if isinstance(body, str) else json.dumps(body, ensure_ascii=False, default=str)
    if isinstance(body, str):
        try:
            body = json.loads(body)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"response is not JSON: {exc}", raw=raw) from exc
    if isinstance(body, Mapping) and "message" in body and "content" not in body:
        body = body["message"]
    if not isinstance(body, Mapping):
        raise SchemaError("response must be a JSON object", raw=raw)
    body = {"role": body.get("role", "assistant"), "content": body.get("content")}
    try:
        msg = message_from_wire(body)
    except SchemaError as exc:
        exc.raw = raw
        raise
    if msg.role != "assistant":
        raise SchemaError(f"response role is {msg.role!r}, expected assistant", raw=raw)
    return msg
