"""Declarative extraction rules and the engine that applies them.

A rule set maps field names to a CSS selector plus an extraction kind
(``text``, ``href`` or ``attribute:<name>``). Index-page rule sets also carry
an ``item_selector`` choosing the repeated item containers; field selectors
are then evaluated inside each container.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import soupsieve
from bs4 import BeautifulSoup, Tag

from ..models import ItemRecord
from ..urls import normalize_url
from .errors import ParseSchemaError, ToolError

_FIELD_NAME = re.compile(r"^[a-z][a-z0-9_]*$")
_NOISE_TAGS = ("script", "style", "noscript")


@dataclass(frozen=True)
class FieldRule:
    selector: str
    kind: str = "text"

    @property
    def attribute(self) -> str | None:
        return self.kind.split(":", 1)[1] if self.kind.startswith("attribute:") else None


@dataclass(frozen=True)
class RuleSet:
    field_rules: dict[str, FieldRule]
    base_url: str
    item_selector: str | None = None
    # free-form provenance (backend name, hints used); not part of equality
    notes: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.base_url.startswith(("http://", "https://")):
            raise ParseSchemaError(f"rule set base_url {self.base_url!r} is not absolute")
        selectors = [r.selector for r in self.field_rules.values()]
        if self.item_selector is not None:
            selectors.append(self.item_selector)
        for name, rule in self.field_rules.items():
            if not _FIELD_NAME.match(name):
                raise ParseSchemaError(f"rule field {name!r} is not a valid field name")
            if rule.kind not in ("text", "href") and not (rule.attribute and rule.attribute.strip()):
                raise ParseSchemaError(f"rule for {name!r} has unknown extraction kind {rule.kind!r}")
        for sel in selectors:
            try:
                soupsieve.compile(sel)
            except Exception as exc:  # soupsieve raises SelectorSyntaxError and friends
                raise ParseSchemaError(f"invalid selector {sel!r}: {exc}") from exc

    def check_fields(self, allowed: Iterable[str]) -> None:
        extra = set(self.field_rules) - set(allowed)
        if extra:
            raise ParseSchemaError(f"rule set names fields outside the request: {sorted(extra)}")


def ruleset_to_dict(rs: RuleSet) -> dict[str, Any]:
    out: dict[str, Any] = {"base_url": rs.base_url}
    if rs.item_selector is not None:
        out["item_selector"] = rs.item_selector
    out["fields"] = {k: {"selector": r.selector, "kind": r.kind} for k, r in rs.field_rules.items()}
    return out


def ruleset_from_dict(data: Mapping[str, Any], base_url: str | None = None) -> RuleSet:
    try:
        fields = {
            name: FieldRule(spec["selector"], spec.get("kind", "text")) if isinstance(spec, Mapping) else FieldRule(spec)
            for name, spec in dict(data["fields"]).items()
        }
        return RuleSet(fields, data.get("base_url") or base_url or "", data.get("item_selector"))
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseSchemaError(f"malformed rule set: {exc!r}") from exc


# -- engine ------------------------------------------------------------------


def parse_html(html: str) -> BeautifulSoup:
    if not isinstance(html, str) or "<" not in html:
        raise ToolError("unparseable HTML: no markup found")
    soup = BeautifulSoup(html, "html.parser")
    if soup.find(True) is None:
        raise ToolError("unparseable HTML: no elements found")
    for tag in soup.find_all(_NOISE_TAGS):
        tag.decompose()
    return soup


def node_text(node: Tag) -> str:
    return " ".join(node.get_text(" ").split())


def _extract(scope: Tag, rule: FieldRule, base_url: str) -> str | None:
    nodes = scope.select(rule.selector)
    if not nodes:
        return None
    if rule.kind == "text":
        text = " ".join(t for t in (node_text(n) for n in nodes) if t)
        return text
    node = nodes[0]
    if rule.kind == "href":
        anchor = node if node.has_attr("href") else node.find(href=True)
        if anchor is None:
            return None
        return normalize_url(anchor["href"], base_url)
    value = node.get(rule.attribute)
    if isinstance(value, list):
        value = " ".join(value)
    return value


def apply_ruleset(html: str, ruleset: RuleSet, url: str | None = None) -> ItemRecord:
    """Extract one record from a content page. Missing nodes give null fields."""
    soup = parse_html(html)
    page_url = url or ruleset.base_url
    values = {name: _extract(soup, rule, page_url) for name, rule in ruleset.field_rules.items()}
    return ItemRecord(normalize_url(page_url), values)


def apply_index_ruleset(html: str, ruleset: RuleSet, page_url: str | None = None, source_page: int = 1) -> list[ItemRecord]:
    """Extract one record per ``item_selector`` container of an index page."""
    if ruleset.item_selector is None:
        raise ToolError("index extraction needs a rule set with an item_selector")
    soup = parse_html(html)
    base = page_url or ruleset.base_url
    records = []
    for container in soup.select(ruleset.item_selector):
        values = {name: _extract(container, rule, base) for name, rule in ruleset.field_rules.items()}
        link = values.get("link") or values.get("url")
        if not link:
            anchor = container if container.has_attr("href") else container.find("a", href=True)
            if anchor is None:
                continue
            link = normalize_url(anchor["href"], base)
        values.pop("url", None)
        records.append(ItemRecord(link, values, source_page))
    return records


# -- selector synthesis ------------------------------------------------------


def _step(node: Tag) -> str:
    sel = node.name
    for cls in node.get("class", []):
        sel += "." + soupsieve.escape(cls)
    return sel


def css_path(node: Tag) -> str:
    """Shortest selector built bottom-up that matches ``node`` alone.

    Positional ``:nth-of-type`` steps are only added where siblings are
    otherwise indistinguishable, so class-distinguished nodes keep
    position-independent selectors that transfer to sibling pages.
    """
    root = node
    while root.parent is not None:
        root = root.parent
    parts: list[str] = []
    cur: Tag | None = node
    while cur is not None and cur.name not in (None, "[document]"):
        if cur.get("id"):
            parts.insert(0, f"{cur.name}#{soupsieve.escape(cur['id'])}")
        else:
            step = _step(cur)
            parent = cur.parent
            if parent is not None:
                twins = [s for s in parent.find_all(cur.name, recursive=False) if _step(s) == step]
                if len(twins) > 1:
                    step += f":nth-of-type({parent.find_all(cur.name, recursive=False).index(cur) + 1})"
            parts.insert(0, step)
        sel = " > ".join(parts)
        found = root.select(sel)
        if len(found) == 1 and found[0] is node:
            return sel
        if cur.get("id"):
            break
        cur = cur.parent
    return " > ".join(parts)
