"""Consolidation of record batches collected across scraping iterations."""

from __future__ import annotations

from typing import Iterable

from ..models import ItemRecord
from ..urls import normalize_url


def _prefer(current: str | None, new: str | None) -> str | None:
    if not new:
        return current
    if not current or len(new) > len(current):
        return new
    return current


def merge_tool(batches: Iterable[Iterable[ItemRecord]], base_url: str | None = None) -> list[ItemRecord]:
    """Deduplicate records by canonical URL, keeping first-seen order.

    Per field, the first non-empty value wins unless a later duplicate carries
    a longer non-empty text. The result depends only on the concatenated
    record sequence, never on batch boundaries, and merging is idempotent.
    """
    order: list[str] = []
    values: dict[str, dict[str, str]] = {}
    pages: dict[str, int] = {}
    for batch in batches:
        for rec in batch:
            key = normalize_url(rec.url, base_url)
            if key not in values:
                order.append(key)
                values[key] = {}
                pages[key] = rec.source_page
            slot = values[key]
            for name, value in rec.values.items():
                chosen = _prefer(slot.get(name), value)
                if chosen is not None:
                    slot[name] = chosen
    return [ItemRecord(key, values[key], pages[key]) for key in order]
