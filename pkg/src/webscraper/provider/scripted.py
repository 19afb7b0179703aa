"""Deterministic scripted provider for offline runs and tests."""

from __future__ import annotations

import json
import string
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .codec import block_from_wire, block_to_wire
from .messages import (
    ContentBlock,
    Message,
    ProviderConfig,
    ProviderError,
    ToolSchema,
    check_conversation,
    validate_tool_uses,
)


@dataclass(frozen=True)
class ScriptedTrace:
    """Canned assistant turns; turn ``i`` answers the ``i``-th provider call."""

    turns: tuple[tuple[ContentBlock, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", tuple(tuple(t) for t in self.turns))
        if not self.turns:
            raise ValueError("scripted trace is empty")
        if any(not t for t in self.turns):
            raise ValueError("every scripted turn needs at least one block")
        if any(b.kind == "tool_use" for b in self.turns[-1]):
            raise ValueError("the final scripted turn must not call tools")

    def to_dict(self) -> dict[str, Any]:
        return {"turns": [[block_to_wire(b) for b in turn] for turn in self.turns]}


def _substitute(obj: Any, variables: Mapping[str, str]) -> Any:
    if isinstance(obj, str):
        return string.Template(obj).safe_substitute(variables)
    if isinstance(obj, list):
        return [_substitute(x, variables) for x in obj]
    if isinstance(obj, dict):
        return {k: _substitute(v, variables) for k, v in obj.items()}
    return obj


def trace_from_dict(data: Mapping[str, Any] | list, variables: Mapping[str, str] | None = None) -> ScriptedTrace:
    """Build a trace from ``{"turns": [[block, ...], ...]}``.

    String values may reference ``${name}`` placeholders (e.g. ``${target_url}``)
    filled from ``variables``.
    """
    turns = data["turns"] if isinstance(data, Mapping) else data
    turns = _substitute(turns, dict(variables or {}))
    return ScriptedTrace(tuple(tuple(block_from_wire(b) for b in turn) for turn in turns))


def load_trace(path: str | Path, variables: Mapping[str, str] | None = None) -> ScriptedTrace:
    return trace_from_dict(json.loads(Path(path).read_text(encoding="utf-8")), variables)


def save_trace(trace: ScriptedTrace, path: str | Path) -> None:
    Path(path).write_text(json.dumps(trace.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


class ScriptedProvider:
    """Replays a :class:`ScriptedTrace`.

    The turn index is the number of assistant messages already in the
    conversation, so the reply depends only on the trace and the inputs.
    """

    def __init__(self, trace: ScriptedTrace):
        self.trace = trace
        self._lock = threading.Lock()
        self.calls = 0

    def complete(
        self,
        system_prompt: str,
        conversation: Sequence[Message],
        tools: Sequence[ToolSchema],
        config: ProviderConfig,
    ) -> Message:
        check_conversation(conversation)
        turn = sum(1 for m in conversation if m.role == "assistant")
        with self._lock:
            self.calls += 1
        if turn >= len(self.trace.turns):
            raise ProviderError(f"trace exhausted after {len(self.trace.turns)} turns")
        message = Message("assistant", self.trace.turns[turn])
        validate_tool_uses(message, tools)
        return message
