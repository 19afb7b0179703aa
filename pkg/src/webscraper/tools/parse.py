"""Parse Tool: HTML plus field requirements in, records or a reusable rule set out.

The work is delegated to a backend. ``HeuristicBackend`` is deterministic
and offline; ``ModelParseBackend`` asks a reasoning model (through any
provider) for a JSON rule set, which the built-in engine then executes.
"""

from __future__ import annotations

import json
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Protocol

import soupsieve
from bs4 import BeautifulSoup, Tag

from ..models import ItemRecord
from .errors import ParseSchemaError, ToolError
from .ruleset import (
    FieldRule,
    RuleSet,
    apply_index_ruleset,
    apply_ruleset,
    css_path,
    node_text,
    parse_html,
    ruleset_from_dict,
    ruleset_to_dict,
)

logger = logging.getLogger(__name__)

PAGE_KINDS = ("index", "content")
_SPLIT = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class ParseRequest:
    html: str
    fields: tuple[str, ...]
    page_kind: str
    page_url: str
    hints: str = ""

    def __post_init__(self) -> None:
        if not self.html:
            raise ToolError("parse request has empty html")
        if not self.fields:
            raise ToolError("parse request has no requested fields")
        if self.page_kind not in PAGE_KINDS:
            raise ToolError(f"page_kind must be one of {PAGE_KINDS}, got {self.page_kind!r}")


@dataclass(frozen=True)
class ParseOutput:
    records: list[ItemRecord] | None = None
    ruleset: RuleSet | None = None
    raw: str = ""


class ParseBackend(Protocol):
    name: str

    def index_ruleset(self, request: ParseRequest) -> RuleSet | None: ...

    def content_ruleset(self, request: ParseRequest) -> RuleSet: ...


def parse_tool(request: ParseRequest, backend: ParseBackend, source_page: int = 1) -> ParseOutput:
    """Run ``backend`` on ``request`` and validate its output against the requirements."""
    allowed = set(request.fields) | {"url"}
    try:
        if request.page_kind == "index":
            rs = backend.index_ruleset(request)
            if rs is None:
                return ParseOutput(records=[])
            rs.check_fields(allowed)
            records = apply_index_ruleset(request.html, rs, request.page_url, source_page)
            for rec in records:
                if set(rec.values) - allowed:
                    raise ParseSchemaError("backend produced unrequested fields", raw=json.dumps(ruleset_to_dict(rs)))
            return ParseOutput(records=records, ruleset=rs)
        rs = backend.content_ruleset(request)
        rs.check_fields(allowed)
        return ParseOutput(ruleset=rs)
    except ParseSchemaError:
        raise
    except ToolError:
        raise
    except Exception as exc:
        raise ToolError(f"parse backend {backend.name!r} failed: {exc}") from exc


# -- heuristic backend -------------------------------------------------------


def _class_tokens(node: Tag) -> set[str]:
    tokens: set[str] = set()
    for cls in node.get("class", []):
        tokens.update(t for t in _SPLIT.split(cls.lower()) if t)
    for attr in ("id", "itemprop"):
        if node.get(attr):
            tokens.update(t for t in _SPLIT.split(str(node[attr]).lower()) if t)
    return tokens


def _label_tokens(node: Tag) -> set[str]:
    tokens = set(_class_tokens(node))
    for attr in ("aria-label", "data-label", "title"):
        if node.get(attr):
            tokens.update(t for t in _SPLIT.split(str(node[attr]).lower()) if t)
    prev = node.find_previous_sibling()
    if prev is not None:
        tokens.update(t for t in _SPLIT.split(node_text(prev).lower()) if t)
    return tokens


def _parse_hints(hints: str, fields: tuple[str, ...]) -> dict[str, set[str]]:
    """``"price: market price; title: headline"`` -> per-field hint tokens.

    Segments without a ``field:`` prefix apply to every field.
    """
    per_field: dict[str, set[str]] = defaultdict(set)
    common: set[str] = set()
    for segment in re.split(r"[;\n]+", hints or ""):
        segment = segment.strip()
        if not segment:
            continue
        name, sep, rest = segment.partition(":")
        if sep and name.strip().lower() in fields:
            per_field[name.strip().lower()].update(t for t in _SPLIT.split(rest.lower()) if t)
        else:
            common.update(t for t in _SPLIT.split(segment.lower()) if t)
    return {f: per_field[f] | common for f in fields}


def _field_candidates(scope: Tag, name: str) -> list[Tag]:
    found = [n for n in scope.find_all(True) if name in _class_tokens(n)]
    ids = {id(n) for n in found}
    # leaves only: a wrapper like div.price-box must not shadow the values inside it
    return [n for n in found if not any(id(d) in ids for d in n.find_all(True))]


def _pick(candidates: list[Tag], hint: set[str]) -> Tag | None:
    best, best_score = None, -1
    for node in candidates:
        score = len(hint & _label_tokens(node)) if hint else 0
        if score > best_score:
            best, best_score = node, score
    return best


def _relative_path(container: Tag, node: Tag) -> str:
    steps = []
    cur = node
    while cur is not None and cur is not container:
        step = cur.name
        for cls in cur.get("class", []):
            step += "." + soupsieve.escape(cls)
        steps.insert(0, step)
        cur = cur.parent
    return ":scope > " + " > ".join(steps) if steps else ":scope"


def _signature(node: Tag) -> tuple[str, ...]:
    sig = []
    cur = node
    while cur is not None and cur.name not in (None, "[document]"):
        sig.append(cur.name + "".join("." + soupsieve.escape(c) for c in sorted(cur.get("class", []))))
        cur = cur.parent
    return tuple(reversed(sig))


class HeuristicBackend:
    """Deterministic structural parser.

    Index pages: the densest cluster of anchors sharing a DOM-path signature
    is the item list. Content pages: the first ``h1`` is the title and the
    element with the most direct paragraph text is the body. Other fields
    come from leaf elements whose class names contain the field name,
    ranked by overlap with any hint text.
    """

    name = "heuristic"

    def index_ruleset(self, request: ParseRequest) -> RuleSet | None:
        soup = parse_html(request.html)
        clusters: dict[tuple[str, ...], list[Tag]] = defaultdict(list)
        for a in soup.find_all("a", href=True):
            href = a["href"].strip()
            if not href or href.startswith(("#", "javascript:", "mailto:")):
                continue
            clusters[_signature(a)].append(a)
        if not clusters:
            return None
        sig, anchors = max(
            clusters.items(),
            key=lambda kv: (len(kv[1]), sum(len(node_text(a)) for a in kv[1])),
        )
        anchor = anchors[0]
        # climb to the largest ancestor still holding a single anchor of the cluster
        members = {id(a) for a in anchors}
        container = anchor
        while container.parent is not None and container.parent.name != "[document]":
            inside = [a for a in container.parent.find_all("a", href=True) if id(a) in members]
            if len(inside) > 1:
                break
            container = container.parent
        item_selector = " > ".join(_signature(container))
        hints = _parse_hints(request.hints, request.fields)
        rules: dict[str, FieldRule] = {}
        anchor_rel = _relative_path(container, anchor)
        for name in request.fields:
            if name in ("link", "url"):
                rules[name] = FieldRule(anchor_rel, "href")
            elif name == "title":
                rules[name] = FieldRule(anchor_rel, "text")
            else:
                node = _pick(_field_candidates(container, name), hints[name])
                if node is not None:
                    rules[name] = FieldRule(_relative_path(container, node), "text")
        if "link" not in rules:
            rules.setdefault("url", FieldRule(anchor_rel, "href"))
        return RuleSet(rules, request.page_url, item_selector, notes=f"{self.name}: cluster of {len(anchors)}")

    def content_ruleset(self, request: ParseRequest) -> RuleSet:
        soup = parse_html(request.html)
        hints = _parse_hints(request.hints, request.fields)
        rules: dict[str, FieldRule] = {}
        for name in request.fields:
            if name in ("link", "url"):
                continue
            if name == "title":
                h1 = soup.find("h1")
                if h1 is not None:
                    rules[name] = FieldRule(css_path(h1))
            elif name == "content":
                body = self._densest_block(soup)
                if body is not None:
                    rules[name] = FieldRule(css_path(body) + " > p")
            else:
                node = _pick(_field_candidates(soup, name), hints[name])
                if node is not None:
                    rules[name] = FieldRule(css_path(node))
        return RuleSet(rules, request.page_url, notes=self.name)

    @staticmethod
    def _densest_block(soup: BeautifulSoup) -> Tag | None:
        best, best_len = None, 0
        for node in soup.find_all(True):
            total = sum(len(node_text(p)) for p in node.find_all("p", recursive=False))
            if total > best_len:
                best, best_len = node, total
        return best


# -- model-delegating backend ------------------------------------------------

_PARSE_SYSTEM = """You write extraction rules for HTML pages.
Reply with a single JSON object and nothing else:
{"item_selector": <CSS selector of repeated item containers, index pages only>,
 "fields": {<field name>: {"selector": <CSS selector>, "kind": "text" | "href" | "attribute:<name>"}}}
On index pages field selectors are evaluated inside each item container (use ":scope > ..." for children).
Only use the requested field names. Omit a field if the page does not contain it."""

_JSON_OBJECT = re.compile(r"\{.*\}", re.S)


class ModelParseBackend:
    """Delegates rule writing to a model reachable through a provider."""

    name = "model"

    def __init__(self, provider, config, max_html_chars: int = 120_000):
        self.provider = provider
        self.config = config
        self.max_html_chars = max_html_chars

    def _ask(self, request: ParseRequest) -> RuleSet:
        from ..provider.messages import Message, ProviderError

        html = request.html[: self.max_html_chars]
        prompt = (
            f"Page kind: {request.page_kind}\nPage URL: {request.page_url}\n"
            f"Requested fields: {', '.join(request.fields)}\n"
            f"Hints: {request.hints or '(none)'}\n\nHTML:\n{html}"
        )
        try:
            reply = self.provider.complete(_PARSE_SYSTEM, [Message.user(prompt)], [], self.config)
        except ProviderError as exc:
            raise ToolError(f"parse backend unavailable: {exc}") from exc
        raw = reply.text()
        match = _JSON_OBJECT.search(raw)
        if match is None:
            raise ParseSchemaError("parse backend reply contains no JSON object", raw=raw)
        try:
            data = json.loads(match.group(0))
        except json.JSONDecodeError as exc:
            raise ParseSchemaError(f"parse backend reply is not valid JSON: {exc}", raw=raw) from exc
        try:
            rs = ruleset_from_dict(data, base_url=request.page_url)
        except ParseSchemaError as exc:
            raise ParseSchemaError(str(exc), raw=raw) from exc
        if request.page_kind == "index" and rs.item_selector is None:
            raise ParseSchemaError("index rule set lacks item_selector", raw=raw)
        return rs

    def index_ruleset(self, request: ParseRequest) -> RuleSet | None:
        return self._ask(request)

    def content_ruleset(self, request: ParseRequest) -> RuleSet:
        return self._ask(request)


__all__ = [
    "HeuristicBackend",
    "ModelParseBackend",
    "ParseBackend",
    "ParseOutput",
    "ParseRequest",
    "apply_ruleset",
    "parse_tool",
]
