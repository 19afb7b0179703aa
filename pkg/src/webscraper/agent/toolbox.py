"""Tool registry and dispatch for one agent run."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable

from ..models import ItemRecord, ScrapeTask
from ..provider.messages import ContentBlock, Param, ToolSchema, tool_result_block
from ..tools.browser import Browser, FetchEvent
from ..tools.errors import ParseSchemaError, ToolError, ToolFatalError
from ..tools.merge import merge_tool
from ..tools.parse import ParseBackend, ParseRequest, parse_tool
from ..tools.ruleset import RuleSet, apply_ruleset, ruleset_to_dict
from ..tools.sandbox import OUTPUT_CAP, Sandbox, ShellTimeout

logger = logging.getLogger(__name__)

NATIVE_TOOLS = ("computer", "bash", "str_editor")
CUSTOM_TOOLS = ("parse_tool", "merge_tool", "apply_ruleset")

SCHEMAS: dict[str, ToolSchema] = {
    "computer": ToolSchema(
        "computer",
        "Drive the web browser: navigate to a URL, click an element (CSS selector), scroll, "
        "take a screenshot, or read the page's current HTML.",
        {
            "action": Param("string", "navigate | click | scroll | screenshot | get_html", required=True),
            "url": Param("string", "absolute URL for navigate"),
            "selector": Param("string", "CSS selector of the element to click"),
            "amount": Param("integer", "pixels to scroll (negative scrolls up)"),
        },
    ),
    "bash": ToolSchema(
        "bash",
        "Run a shell command in the working directory.",
        {
            "command": Param("string", "command line", required=True),
            "timeout_ms": Param("integer", "time limit in milliseconds"),
        },
    ),
    "str_editor": ToolSchema(
        "str_editor",
        "Write, read, or edit (replace one exact occurrence) a file in the working directory.",
        {
            "command": Param("string", "write | read | str_replace", required=True),
            "path": Param("string", "file path relative to the working directory", required=True),
            "content": Param("string", "file content for write"),
            "old": Param("string", "text to replace (must occur exactly once)"),
            "new": Param("string", "replacement text"),
        },
    ),
    "parse_tool": ToolSchema(
        "parse_tool",
        "Convert the current page's HTML into structured data. page_kind=index returns one record "
        "per listed item and stores them as a batch; page_kind=content returns a reusable rule set "
        "for all sibling content pages.",
        {
            "page_kind": Param("string", "index | content", required=True),
            "fields": Param("string", "comma-separated field names (defaults to the task's fields)"),
            "hints": Param("string", "free-text disambiguation, e.g. 'price: market price'"),
        },
    ),
    "merge_tool": ToolSchema(
        "merge_tool",
        "Merge stored index batches into the result list, removing duplicate URLs and "
        "consolidating their fields.",
        {"batches": Param("string", "comma-separated batch ids; empty merges every batch")},
    ),
    "apply_ruleset": ToolSchema(
        "apply_ruleset",
        "Apply a stored content rule set to every merged item's page and fill in its fields.",
        {"ruleset": Param("string", "rule set id; defaults to the latest")},
    ),
}


def tools_for_mode(mode: str) -> tuple[str, ...]:
    return NATIVE_TOOLS + CUSTOM_TOOLS if mode == "prompt_tool" else NATIVE_TOOLS


@dataclass
class StageState:
    """Progress through the five extraction stages, updated by tool calls."""

    page_scope: int
    current_stage: int = 1
    pages_done: int = 0
    index_records: list[ItemRecord] = field(default_factory=list)
    batches: dict[str, list[ItemRecord]] = field(default_factory=dict)
    rulesets: dict[str, RuleSet] = field(default_factory=dict)
    ruleset: RuleSet | None = None
    merged: list[ItemRecord] = field(default_factory=list)

    def advance(self, stage: int) -> None:
        self.current_stage = max(self.current_stage, min(stage, 5))


def _records_json(records: list[ItemRecord], fields: tuple[str, ...]) -> list[dict[str, Any]]:
    return [r.to_dict(fields) for r in records]


def _cap_text(text: str, cap: int = OUTPUT_CAP) -> str:
    data = text.encode("utf-8")
    if len(data) <= cap:
        return text
    return data[:cap].decode("utf-8", errors="ignore") + f"\n[... truncated {len(data) - cap} bytes]"


class Toolbox:
    """Tools available to one run, keyed by name.

    Only the tools implied by ``mode`` are registered; any other name is
    answered with an "unknown tool" error result.
    """

    def __init__(
        self,
        task: ScrapeTask,
        mode: str,
        browser: Browser,
        sandbox: Sandbox,
        backend: ParseBackend | None = None,
    ):
        self.task = task
        self.mode = mode
        self.browser = browser
        self.sandbox = sandbox
        self.backend = backend
        self.state = StageState(task.page_scope)
        self.fetches: list[FetchEvent] = []
        if hasattr(browser, "on_fetch"):
            browser.on_fetch = self.record_fetch
        self._handlers: dict[str, Callable[[dict[str, Any]], ContentBlock | str]] = {
            "computer": self._computer,
            "bash": self._bash,
            "str_editor": self._editor,
            "parse_tool": self._parse,
            "merge_tool": self._merge,
            "apply_ruleset": self._apply,
        }
        self.names = tools_for_mode(mode)
        if "parse_tool" in self.names and backend is None:
            raise ValueError("prompt_tool mode needs a parse backend")

    def record_fetch(self, event: FetchEvent) -> None:
        self.fetches.append(event)

    def drain_fetches(self) -> list[FetchEvent]:
        out, self.fetches = self.fetches, []
        return out

    def schemas(self) -> list[ToolSchema]:
        return [SCHEMAS[n] for n in self.names]

    def dispatch(self, call: ContentBlock) -> ContentBlock:
        """Run one tool call. Only :class:`ToolFatalError` escapes."""
        if call.name not in self.names:
            return tool_result_block(call.call_id, f"unknown tool: {call.name}", is_error=True)
        try:
            result = self._handlers[call.name](dict(call.arguments))
        except ToolFatalError:
            raise
        except ParseSchemaError as exc:
            return tool_result_block(call.call_id, f"{exc}\nraw backend output:\n{_cap_text(exc.raw)}", is_error=True)
        except ToolError as exc:
            return tool_result_block(call.call_id, str(exc), is_error=True)
        except Exception as exc:  # tool bugs are reported to the model, not fatal
            logger.exception("tool %s failed", call.name)
            return tool_result_block(call.call_id, f"{type(exc).__name__}: {exc}", is_error=True)
        if isinstance(result, ContentBlock):
            return result
        return tool_result_block(call.call_id, result)

    # -- native tools --------------------------------------------------------

    def _computer(self, args: dict[str, Any]) -> str | ContentBlock:
        action = args.get("action")
        st = self.state
        if action == "navigate":
            url = self.browser.navigate(args.get("url", ""))
            st.advance(3 if st.pages_done else 1)
            return f"navigated to {url}"
        if action == "click":
            if not args.get("selector"):
                raise ToolError("click needs a selector")
            out = self.browser.click(args["selector"])
            st.advance(3 if st.pages_done else 1)
            return out
        if action == "scroll":
            return f"scroll position {self.browser.scroll(int(args.get('amount', 600)))}"
        if action == "screenshot":
            png = self.browser.screenshot()
            return ContentBlock(
                "tool_result", text=f"screenshot of {self.browser.current_url}", data=png, media_type="image/png"
            )
        if action == "get_html":
            return _cap_text(self.browser.get_html())
        raise ToolError(f"unknown computer action {action!r}")

    def _bash(self, args: dict[str, Any]) -> str:
        try:
            res = self.sandbox.shell_exec(args["command"], int(args.get("timeout_ms", 30_000)))
        except ShellTimeout as exc:
            raise ToolError(f"{exc}\nstdout:\n{exc.partial_stdout}\nstderr:\n{exc.partial_stderr}") from exc
        return f"exit code: {res.exit_code}\nstdout:\n{res.stdout}\nstderr:\n{res.stderr}"

    def _editor(self, args: dict[str, Any]) -> str:
        cmd, path = args.get("command"), args["path"]
        if cmd == "write":
            self.sandbox.file_write(path, args.get("content", ""))
            return f"wrote {path}"
        if cmd == "read":
            return _cap_text(self.sandbox.file_read(path))
        if cmd == "str_replace":
            if "old" not in args:
                raise ToolError("str_replace needs 'old'")
            self.sandbox.file_str_replace(path, args["old"], args.get("new", ""))
            return f"edited {path}"
        raise ToolError(f"unknown editor command {cmd!r}")

    # -- custom scraping tools -----------------------------------------------

    def _requested(self, args: dict[str, Any], page_kind: str) -> tuple[str, ...]:
        raw = args.get("fields") or ""
        if raw.strip():
            fields = tuple(f.strip() for f in raw.split(",") if f.strip())
            unknown = [f for f in fields if f not in self.task.fields]
            if unknown:
                raise ToolError(f"fields {unknown} are not part of the task ({', '.join(self.task.fields)})")
            return fields
        if page_kind == "index":
            return tuple(f for f in self.task.fields if f != "content") or self.task.fields
        return self.task.fields

    def _parse(self, args: dict[str, Any]) -> str:
        st = self.state
        kind = args.get("page_kind")
        fields = self._requested(args, kind or "")
        url = self.browser.current_url
        if not url:
            raise ToolError("no page loaded; navigate first")
        if kind == "index" and st.pages_done >= st.page_scope:
            raise ToolError(f"page scope of {st.page_scope} index page(s) already covered")
        request = ParseRequest(self.browser.get_html(), fields, kind, url, args.get("hints", ""))
        out = parse_tool(request, self.backend, source_page=st.pages_done + 1)
        if kind == "index":
            st.pages_done += 1
            batch_id = f"batch_{len(st.batches) + 1}"
            st.batches[batch_id] = list(out.records or [])
            st.index_records.extend(out.records or [])
            st.advance(2 if st.pages_done == 1 else 3)
            payload = {
                "batch": batch_id,
                "page": st.pages_done,
                "count": len(out.records or []),
                "records": _records_json(out.records or [], fields),
            }
        else:
            rs_id = f"ruleset_{len(st.rulesets) + 1}"
            st.rulesets[rs_id] = out.ruleset
            st.ruleset = out.ruleset
            st.advance(4)
            preview = apply_ruleset(request.html, out.ruleset, url)
            payload = {
                "ruleset_id": rs_id,
                "ruleset": ruleset_to_dict(out.ruleset),
                "preview": preview.to_dict(fields),
            }
        return json.dumps(payload, ensure_ascii=False)

    def _merge(self, args: dict[str, Any]) -> str:
        st = self.state
        ids = [b.strip() for b in (args.get("batches") or "").split(",") if b.strip()] or list(st.batches)
        missing = [b for b in ids if b not in st.batches]
        if missing:
            raise ToolError(f"unknown batch ids {missing}; known: {list(st.batches)}")
        before = len(st.merged)
        st.merged = merge_tool([st.merged] + [st.batches[b] for b in ids])
        st.advance(3)
        payload = {
            "total": len(st.merged),
            "added": len(st.merged) - before,
            "records": _records_json(st.merged, self.task.fields),
        }
        return json.dumps(payload, ensure_ascii=False)

    def _apply(self, args: dict[str, Any]) -> str:
        st = self.state
        rs_id = args.get("ruleset") or (list(st.rulesets)[-1] if st.rulesets else "")
        if rs_id not in st.rulesets:
            raise ToolError(f"unknown rule set {rs_id!r}; call parse_tool with page_kind=content first")
        rs = st.rulesets[rs_id]
        if not st.merged:
            st.merged = merge_tool(st.batches.values())
        applied, failed = [], []
        for rec in st.merged:
            try:
                self.browser.navigate(rec.url)
                extracted = apply_ruleset(self.browser.get_html(), rs, rec.url)
            except ToolError as exc:
                failed.append({"url": rec.url, "error": str(exc)})
                continue
            applied.append(ItemRecord(extracted.url, extracted.values, rec.source_page))
        st.merged = merge_tool([st.merged, applied])
        st.advance(4)
        payload = {
            "ruleset": rs_id,
            "applied": len(applied),
            "failed": failed,
            "sample": applied[0].to_dict(self.task.fields) if applied else None,
        }
        return json.dumps(payload, ensure_ascii=False)
