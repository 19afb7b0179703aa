"""Ideal scripted agent traces for fixture sites."""

from __future__ import annotations

from typing import Any

from ..provider.scripted import ScriptedTrace, trace_from_dict
from .site import SiteSpec

_NEXT_SELECTOR = {
    "link_pagination": "a.next",
    "noisy_ads": "a.next",
    "multi_price": "a.next",
    "button_pagination": "button.next",
    "load_more": "button.load-more",
}


def trace_dict_for(spec: SiteSpec, price_hint: bool = True) -> dict[str, Any]:
    """Turns that walk ``spec``'s site the way the staged guidance prescribes.

    The target URL is left as a ``${target_url}`` placeholder. With
    ``price_hint`` the content-page parse asks for the market price.
    """
    calls: list[tuple[str, dict[str, Any], str]] = []
    calls.append(("computer", {"action": "navigate", "url": "${target_url}"}, "Opening the first index page."))
    nxt = _NEXT_SELECTOR[spec.variant]
    if spec.variant == "load_more":
        for _ in range(spec.n_pages - 1):
            calls.append(("computer", {"action": "click", "selector": nxt}, "Loading more items."))
        calls.append(("parse_tool", {"page_kind": "index"}, "Extracting the item list."))
    else:
        calls.append(("parse_tool", {"page_kind": "index"}, "Extracting items from page 1."))
        for page in range(2, spec.n_pages + 1):
            calls.append(("computer", {"action": "click", "selector": nxt}, f"Moving to page {page}."))
            calls.append(("parse_tool", {"page_kind": "index"}, f"Extracting items from page {page}."))
    calls.append(("merge_tool", {}, "Merging the index batches."))
    calls.append(("computer", {"action": "click", "selector": "ul.items li.item a"}, "Opening one content page."))
    parse_args: dict[str, Any] = {"page_kind": "content"}
    if spec.variant == "multi_price" and price_hint:
        parse_args["hints"] = "price: market price"
    calls.append(("parse_tool", parse_args, "Deriving a rule set for content pages."))
    calls.append(("apply_ruleset", {}, "Applying the rule set to every item."))
    turns = []
    for i, (name, args, thought) in enumerate(calls):
        turns.append(
            [
                {"type": "text", "text": thought},
                {"type": "tool_use", "id": f"toolu_{i:03d}", "name": name, "input": args},
            ]
        )
    turns.append([{"type": "text", "text": "Finished: the merged dataset is complete."}])
    return {"turns": turns}


def scripted_trace_for(spec: SiteSpec, target_url: str, price_hint: bool = True) -> ScriptedTrace:
    return trace_from_dict(trace_dict_for(spec, price_hint), {"target_url": target_url})
