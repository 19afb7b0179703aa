"""Observe-Reason-Act loop."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..clock import SystemClock
from ..models import MODES, Dataset, ItemRecord, ScrapeTask, assemble_user_prompt
from ..provider.codec import message_to_wire
from ..provider.messages import Message, ProviderConfig, ProviderError, tool_result_block
from ..tools.browser import FetchEvent
from ..tools.errors import ToolError, ToolFatalError
from ..tools.merge import merge_tool
from .prompts import assemble_system_prompt
from .toolbox import Toolbox

logger = logging.getLogger(__name__)

TERMINATIONS = ("completed", "max_iterations", "provider_error", "tool_fatal")


@dataclass(frozen=True)
class AgentConfig:
    mode: str = "prompt_tool"
    max_iterations: int = 50
    transcript_path: str | Path | None = None
    guidance_path: str | Path | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class TranscriptEntry:
    index: int
    t: float
    message: Message
    results: Message | None = None
    results_t: float | None = None
    fetches: list[FetchEvent] = field(default_factory=list)


@dataclass
class Transcript:
    mode: str
    task_id: str
    system_prompt: str
    user_prompt: str
    tool_names: tuple[str, ...]
    entries: list[TranscriptEntry] = field(default_factory=list)
    termination: str | None = None
    error: str = ""
    n_items: int = 0
    final_stage: int = 1

    def __len__(self) -> int:
        return len(self.entries)

    def events(self) -> list[dict[str, Any]]:
        out: list[dict[str, Any]] = [
            {
                "event": "start",
                "mode": self.mode,
                "task_id": self.task_id,
                "system_prompt": self.system_prompt,
                "user_prompt": self.user_prompt,
                "tools": list(self.tool_names),
            }
        ]
        for e in self.entries:
            out.append({"event": "turn", "index": e.index, "t": e.t, "message": message_to_wire(e.message)})
            for f in e.fetches:
                out.append({"event": "fetch", "index": e.index, "t": f.t, "host": f.host, "url": f.url, "kind": f.kind})
            if e.results is not None:
                out.append(
                    {"event": "tool_results", "index": e.index, "t": e.results_t, "message": message_to_wire(e.results)}
                )
        out.append(
            {
                "event": "end",
                "termination": self.termination,
                "error": self.error,
                "n_items": self.n_items,
                "final_stage": self.final_stage,
            }
        )
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(ev, ensure_ascii=False, sort_keys=True) + "\n" for ev in self.events())

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    def tool_calls(self) -> list[str]:
        return [b.call_id for e in self.entries for b in e.message.tool_uses()]

    def tool_results(self) -> list[str]:
        return [b.call_id for e in self.entries if e.results is not None for b in e.results.blocks]


def read_transcript_events(path: str | Path) -> list[dict[str, Any]]:
    return [json.loads(line) for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]


@dataclass
class AgentState:
    task: ScrapeTask
    system_prompt: str
    conversation: list[Message]
    transcript: Transcript
    t0: float
    completed: bool = False
    turns: int = 0


def _rel(clock, t0: float) -> float:
    return round(clock.now() - t0, 6)


def step(state: AgentState, provider, toolbox: Toolbox, provider_config: ProviderConfig, clock) -> AgentState:
    """Consume one provider turn and dispatch its tool calls in order.

    Tool results for the turn go back as a single tool message. Provider
    errors propagate; a fatal tool error is re-raised after every call of the
    turn has been answered so the transcript stays balanced.
    """
    reply = provider.complete(state.system_prompt, list(state.conversation), toolbox.schemas(), provider_config)
    entry = TranscriptEntry(state.turns, _rel(clock, state.t0), reply)
    state.transcript.entries.append(entry)
    state.conversation.append(reply)
    state.turns += 1
    calls = reply.tool_uses()
    if not calls:
        state.completed = True
        return state
    results = []
    fatal: ToolFatalError | None = None
    for call in calls:
        if fatal is not None:
            results.append(tool_result_block(call.call_id, f"not run: {fatal}", is_error=True))
            continue
        try:
            results.append(toolbox.dispatch(call))
        except ToolFatalError as exc:
            fatal = exc
            results.append(tool_result_block(call.call_id, f"fatal: {exc}", is_error=True))
    entry.fetches = [FetchEvent(f.host, f.url, round(f.t - state.t0, 6), f.kind) for f in toolbox.drain_fetches()]
    entry.results = Message("tool", tuple(results))
    entry.results_t = _rel(clock, state.t0)
    state.conversation.append(entry.results)
    if fatal is not None:
        raise fatal
    return state


_FENCED_JSON = re.compile(r"```(?:json)?\s*(\[.*?\])\s*```", re.S)


def _records_from_text(text: str) -> list[dict[str, Any]]:
    candidates = _FENCED_JSON.findall(text)
    if not candidates and "[" in text and "]" in text:
        candidates = [text[text.index("[") : text.rindex("]") + 1]]
    for blob in candidates:
        try:
            data = json.loads(blob)
        except json.JSONDecodeError:
            continue
        if isinstance(data, list) and all(isinstance(x, dict) for x in data):
            return data
    return []


def _to_record(obj: dict[str, Any], fields: tuple[str, ...]) -> ItemRecord | None:
    url = obj.get("url") or obj.get("link")
    if not isinstance(url, str) or not url:
        return None
    values = {f: obj[f] if isinstance(obj.get(f), str) else None for f in fields if f in obj}
    return ItemRecord(url, values)


def collect_dataset(task: ScrapeTask, toolbox: Toolbox, final: Message | None) -> Dataset:
    """Stage 5: gather the run's result into a validated Dataset.

    Sources in order of preference: records merged through the scraping
    tools, a JSON array in the agent's final reply, ``output.json`` in the
    sandbox.
    """
    records: list[ItemRecord] = list(toolbox.state.merged)
    if not records and toolbox.state.batches:
        records = merge_tool(toolbox.state.batches.values())
    if not records and final is not None:
        records = [r for r in (_to_record(o, task.fields) for o in _records_from_text(final.text())) if r]
    if not records:
        try:
            data = json.loads(toolbox.sandbox.file_read("output.json"))
        except (ToolError, ValueError):
            data = []
        if isinstance(data, list):
            records = [r for r in (_to_record(o, task.fields) for o in data if isinstance(o, dict)) if r]
    allowed = set(task.fields)
    cleaned = [ItemRecord(r.url, {k: v for k, v in r.values.items() if k in allowed}, r.source_page) for r in records]
    return Dataset(task.task_id, tuple(merge_tool([cleaned])), task.fields)


def run_task(
    task: ScrapeTask,
    provider,
    toolbox: Toolbox,
    config: AgentConfig | None = None,
    provider_config: ProviderConfig | None = None,
    clock=None,
) -> tuple[Dataset, Transcript]:
    """Run the agent on ``task`` until it stops calling tools or a bound is hit."""
    config = config or AgentConfig(mode=task.mode)
    provider_config = provider_config or ProviderConfig()
    clock = clock or SystemClock()
    if toolbox.mode != config.mode:
        raise ValueError(f"toolbox was built for {toolbox.mode!r}, config asks for {config.mode!r}")
    system_prompt = assemble_system_prompt(config.mode, config.guidance_path)
    user_prompt = assemble_user_prompt(task)
    transcript = Transcript(config.mode, task.task_id, system_prompt, user_prompt, tuple(toolbox.names))
    state = AgentState(task, system_prompt, [Message.user(user_prompt)], transcript, clock.now())
    termination = "max_iterations"
    try:
        while state.turns < config.max_iterations:
            step(state, provider, toolbox, provider_config, clock)
            if state.completed:
                termination = "completed"
                break
    except ProviderError as exc:
        logger.error("provider error after %d turns: %s", state.turns, exc)
        termination, transcript.error = "provider_error", str(exc)
    except ToolFatalError as exc:
        logger.error("fatal tool error after %d turns: %s", state.turns, exc)
        termination, transcript.error = "tool_fatal", str(exc)
    if termination == "completed":
        toolbox.state.advance(5)
    final = state.conversation[-1] if state.conversation[-1].role == "assistant" else None
    dataset = collect_dataset(task, toolbox, final)
    transcript.termination = termination
    transcript.n_items = len(dataset)
    transcript.final_stage = toolbox.state.current_stage
    if config.transcript_path is not None:
        transcript.write(config.transcript_path)
    return dataset, transcript
