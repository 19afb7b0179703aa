"""Task, item, dataset and golden-set types plus their JSON files."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Mapping

from .urls import is_absolute_http, normalize_url

MODES = ("baseline", "prompt_only", "prompt_tool")
LANGUAGES = ("english", "chinese")
DEFAULT_POLITENESS_MS = 2000
DEFAULT_MAX_ITERATIONS = 50

_FIELD_NAME = re.compile(r"^[a-z][a-z0-9_]*$")
_NUMBER_WORDS = ("zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten")


class ValidationError(ValueError):
    """An invariant of a task, record, dataset or golden set does not hold."""


class TaskParseError(ValueError):
    """A task/golden file is not well-formed; ``key`` names the offending entry."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


def _check_fields(fields: Iterable[str]) -> tuple[str, ...]:
    fields = tuple(fields)
    if not fields:
        raise ValidationError("fields must be non-empty")
    for name in fields:
        if not isinstance(name, str) or not _FIELD_NAME.match(name):
            raise ValidationError(f"field name {name!r} is not a lowercase ASCII identifier")
    if len(set(fields)) != len(fields):
        raise ValidationError(f"duplicate field names in {list(fields)}")
    return fields


@dataclass(frozen=True)
class ScrapeTask:
    target_url: str
    page_scope: int
    fields: tuple[str, ...]
    section_hint: str = ""
    mode: str = "prompt_tool"
    politeness_delay_ms: int = DEFAULT_POLITENESS_MS
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self) -> None:
        if not isinstance(self.target_url, str) or not is_absolute_http(self.target_url):
            raise ValidationError(f"target_url {self.target_url!r} is not an absolute http(s) URL")
        object.__setattr__(self, "fields", _check_fields(self.fields))
        if not isinstance(self.page_scope, int) or isinstance(self.page_scope, bool) or self.page_scope < 1:
            raise ValidationError(f"page_scope must be an integer >= 1, got {self.page_scope!r}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.politeness_delay_ms, int) or self.politeness_delay_ms < 0:
            raise ValidationError("politeness_delay_ms must be a non-negative integer")
        if not isinstance(self.max_iterations, int) or self.max_iterations < 1:
            raise ValidationError("max_iterations must be a positive integer")

    @property
    def task_id(self) -> str:
        blob = json.dumps(task_to_dict(self), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:12]


@dataclass(frozen=True)
class ItemRecord:
    """One extracted item.

    ``values`` holds field name -> text. ``None`` values are dropped on
    construction (absent and null are the same thing), and a ``link`` value
    equal to the URL is dropped because ``link`` aliases ``url``.
    """

    url: str
    values: dict[str, str] = field(default_factory=dict)
    source_page: int = field(default=1, compare=False)

    def __post_init__(self) -> None:
        if not self.url:
            raise ValidationError("item url must be non-empty")
        cleaned = {k: v for k, v in dict(self.values).items() if v is not None}
        if cleaned.get("link") == self.url:
            del cleaned["link"]
        object.__setattr__(self, "values", cleaned)

    def get(self, name: str) -> str | None:
        if name in ("url", "link") and name not in self.values:
            return self.url
        return self.values.get(name)

    def to_dict(self, fields: Iterable[str]) -> dict[str, Any]:
        out: dict[str, Any] = {"url": self.url}
        for name in fields:
            out[name] = self.get(name)
        return out


@dataclass(frozen=True)
class Dataset:
    task_id: str
    items: tuple[ItemRecord, ...]
    fields: tuple[str, ...] = ()
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "fields", tuple(self.fields))
        seen: set[str] = set()
        for item in self.items:
            key = normalize_url(item.url)
            if key in seen:
                raise ValidationError(f"duplicate item URL {item.url!r} in dataset")
            seen.add(key)
            if self.fields:
                extra = set(item.values) - set(self.fields)
                if extra:
                    raise ValidationError(f"item {item.url!r} has values for unrequested fields {sorted(extra)}")

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class GoldenItem:
    url: str
    title: str
    content: str
    # additional judged fields, e.g. a designated price
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class GoldenSet:
    site_id: str
    language: str
    items: tuple[GoldenItem, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        if self.language not in LANGUAGES:
            raise ValidationError(f"language must be one of {LANGUAGES}, got {self.language!r}")
        seen: set[str] = set()
        for item in self.items:
            key = normalize_url(item.url)
            if key in seen:
                raise ValidationError(f"duplicate golden URL {item.url!r}")
            seen.add(key)
            if not item.title or not item.content:
                raise ValidationError(f"golden item {item.url!r} has an empty title or content")


# -- prompt ------------------------------------------------------------------


def _ordinal_scope(n: int) -> str:
    if n == 1:
        return "the first page"
    word = _NUMBER_WORDS[n] if n < len(_NUMBER_WORDS) else str(n)
    return f"the first {word} pages"


def assemble_user_prompt(task: ScrapeTask) -> str:
    """Render ``task`` as a one-sentence natural-language scraping request."""
    scope = _ordinal_scope(task.page_scope)
    section = task.section_hint.strip()
    where = f"of {section} from {task.target_url}" if section else f"of {task.target_url}"
    return f"Scrape {scope} {where}, extracting the {', '.join(task.fields)} for each item."


# -- files -------------------------------------------------------------------

_TASK_KEYS = ("target_url", "section_hint", "page_scope", "fields", "mode", "politeness_delay_ms", "max_iterations")


def task_to_dict(task: ScrapeTask) -> dict[str, Any]:
    return {
        "target_url": task.target_url,
        "section_hint": task.section_hint,
        "page_scope": task.page_scope,
        "fields": list(task.fields),
        "mode": task.mode,
        "politeness_delay_ms": task.politeness_delay_ms,
        "max_iterations": task.max_iterations,
    }


def task_from_dict(data: Mapping[str, Any]) -> ScrapeTask:
    if not isinstance(data, Mapping):
        raise TaskParseError("task file must contain a JSON object")
    unknown = set(data) - set(_TASK_KEYS)
    if unknown:
        key = sorted(unknown)[0]
        raise TaskParseError(f"unknown task key {key!r}", key=key)
    for key in ("target_url", "page_scope", "fields"):
        if key not in data:
            raise ValidationError(f"task is missing required key {key!r}")
    if not isinstance(data["fields"], list):
        raise TaskParseError("'fields' must be a list of field names", key="fields")
    kwargs = {k: data[k] for k in _TASK_KEYS if k in data}
    kwargs["fields"] = tuple(kwargs["fields"])
    return ScrapeTask(**kwargs)


def _read_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaskParseError(f"{path}: invalid JSON ({exc})") from exc


def load_task(path: str | Path) -> ScrapeTask:
    return task_from_dict(_read_json(path))


def save_task(task: ScrapeTask, path: str | Path) -> None:
    Path(path).write_text(json.dumps(task_to_dict(task), indent=2) + "\n", encoding="utf-8")


def dataset_to_list(dataset: Dataset) -> list[dict[str, Any]]:
    fields = dataset.fields or _value_keys(dataset.items)
    return [item.to_dict(fields) for item in dataset.items]


def _value_keys(items: Iterable[ItemRecord]) -> tuple[str, ...]:
    keys: dict[str, None] = {}
    for item in items:
        keys.update(dict.fromkeys(item.values))
    return tuple(keys)


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    # Dataset.__post_init__ already enforces invariants; re-check in case items were mutated in place
    Dataset(dataset.task_id, dataset.items, dataset.fields)
    payload = json.dumps(dataset_to_list(dataset), ensure_ascii=False, indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def read_dataset(path: str | Path, task_id: str = "", fields: Iterable[str] | None = None) -> Dataset:
    data = _read_json(path)
    if not isinstance(data, list):
        raise TaskParseError(f"{path}: dataset file must contain a JSON array")
    records = []
    for i, obj in enumerate(data):
        if not isinstance(obj, dict) or not isinstance(obj.get("url"), str):
            raise TaskParseError(f"{path}: item {i} lacks a string 'url'", key="url")
        records.append(ItemRecord(obj["url"], {k: v for k, v in obj.items() if k != "url"}))
    if fields is None:
        fields = [k for k in (data[0] if data else {}) if k != "url"]
    return Dataset(task_id, tuple(records), tuple(fields))


def golden_to_dict(golden: GoldenSet) -> dict[str, Any]:
    items = []
    for it in golden.items:
        obj: dict[str, Any] = {"url": it.url, "title": it.title, "content": it.content}
        obj.update(it.extra)
        items.append(obj)
    return {"site_id": golden.site_id, "language": golden.language, "items": items}


def golden_from_dict(data: Mapping[str, Any]) -> GoldenSet:
    for key in ("site_id", "language", "items"):
        if key not in data:
            raise TaskParseError(f"golden set is missing {key!r}", key=key)
    items = []
    for obj in data["items"]:
        try:
            url, title, content = obj["url"], obj["title"], obj["content"]
        except (KeyError, TypeError) as exc:
            raise TaskParseError(f"golden item lacks {exc}", key=str(exc).strip("'")) from exc
        extra = {k: v for k, v in obj.items() if k not in ("url", "title", "content")}
        items.append(GoldenItem(url, title, content, extra))
    return GoldenSet(data["site_id"], data["language"], tuple(items))


def load_golden(path: str | Path) -> GoldenSet:
    return golden_from_dict(_read_json(path))


def write_golden(golden: GoldenSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(golden_to_dict(golden), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
