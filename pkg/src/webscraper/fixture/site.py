"""Seeded generation of index-and-content fixture sites with golden sets."""

from __future__ import annotations

import html
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from ..models import LANGUAGES, GoldenItem, GoldenSet, ScrapeTask, ValidationError
from . import corpus

VARIANTS = ("link_pagination", "button_pagination", "load_more", "noisy_ads", "multi_price")
GOLDEN_PATH = "/__golden.json"
PRICE_KINDS = ("promo", "discount", "market")
PRICE_LABELS = {"promo": "Promotional price", "discount": "Discounted price", "market": "Market price"}


@dataclass(frozen=True)
class SiteSpec:
    seed: int
    n_pages: int = 2
    items_per_page: int = 5
    variant: str = "link_pagination"
    language: str = "english"

    def __post_init__(self) -> None:
        if self.n_pages < 1:
            raise ValidationError("n_pages must be >= 1")
        if self.items_per_page < 1:
            raise ValidationError("items_per_page must be >= 1")
        if self.variant not in VARIANTS:
            raise ValidationError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.language not in LANGUAGES:
            raise ValidationError(f"language must be one of {LANGUAGES}, got {self.language!r}")

    @property
    def site_id(self) -> str:
        return f"{self.variant}-{self.language}-{self.seed}"

    @property
    def fields(self) -> tuple[str, ...]:
        return ("title", "content", "price") if self.variant == "multi_price" else ("title", "content")


def spec_to_dict(spec: SiteSpec) -> dict[str, Any]:
    return {
        "seed": spec.seed,
        "n_pages": spec.n_pages,
        "items_per_page": spec.items_per_page,
        "variant": spec.variant,
        "language": spec.language,
    }


def spec_from_dict(data: Mapping[str, Any]) -> SiteSpec:
    unknown = set(data) - {"seed", "n_pages", "items_per_page", "variant", "language"}
    if unknown:
        raise ValidationError(f"unknown site spec keys {sorted(unknown)}")
    if "seed" not in data:
        raise ValidationError("site spec needs a seed")
    return SiteSpec(**data)


def load_spec(path: str | Path) -> SiteSpec:
    return spec_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class Page:
    body: str
    headers: tuple[tuple[str, str], ...] = ()
    content_type: str = "text/html; charset=utf-8"


@dataclass(frozen=True)
class GeneratedSite:
    """Served pages keyed by URL path, plus the golden set with root-relative URLs."""

    spec: SiteSpec
    pages: dict[str, Page]
    golden: GoldenSet
    index_path: str = "/list/1.html"
    # per-item price labels in rendered order (multi_price only)
    price_orders: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def golden_at(self, origin: str) -> GoldenSet:
        origin = origin.rstrip("/")
        items = tuple(GoldenItem(origin + g.url, g.title, g.content, dict(g.extra)) for g in self.golden.items)
        return GoldenSet(self.golden.site_id, self.golden.language, items)

    def task_at(self, origin: str, mode: str = "prompt_tool", politeness_delay_ms: int = 2000) -> ScrapeTask:
        """The scraping task whose ideal answer is :meth:`golden_at`."""
        return ScrapeTask(
            target_url=origin.rstrip("/") + self.index_path,
            page_scope=self.spec.n_pages,
            fields=self.spec.fields,
            section_hint="the product catalogue" if self.spec.variant == "multi_price" else "the latest news list",
            mode=mode,
            politeness_delay_ms=politeness_delay_ms,
        )


# -- rendering ---------------------------------------------------------------

_e = html.escape

_MENU = (
    '<header><nav class="menu"><a href="/list/1.html">{home}</a>'
    '<a href="/about.html">{about}</a><a href="/contact.html">{contact}</a></nav></header>'
)
_BUTTON_SCRIPT = (
    "<script>document.querySelectorAll('button[data-href]').forEach(function (b) {"
    " b.addEventListener('click', function () { window.location.href = b.dataset.href; }); });</script>"
)
_LOAD_MORE_SCRIPT = (
    "<script>document.querySelectorAll('button[data-load-url]').forEach(function (b) {"
    " b.addEventListener('click', function () {"
    " fetch(b.dataset.loadUrl).then(function (r) {"
    " var next = r.headers.get('X-Next-Fragment');"
    " return r.text().then(function (t) {"
    " document.querySelector(b.dataset.target).insertAdjacentHTML('beforeend', t);"
    " if (next) { b.dataset.loadUrl = next; } else { b.remove(); } }); }); }); });</script>"
)


def _labels(language: str) -> dict[str, str]:
    if language == "chinese":
        return {"home": "首页", "about": "关于我们", "contact": "联系", "next": "下一页", "more": "加载更多",
                "section": "最新消息", "footer": "版权所有"}
    return {"home": "Home", "about": "About", "contact": "Contact", "next": "Next page", "more": "Load more",
            "section": "Latest stories", "footer": "All rights reserved"}


def _document(title: str, body: str, language: str) -> str:
    lang = "zh" if language == "chinese" else "en"
    return (
        f'<!DOCTYPE html>\n<html lang="{lang}"><head><meta charset="utf-8"><title>{_e(title)}</title></head>'
        f"<body>{body}</body></html>\n"
    )


def _item_li(path: str, title: str, summary: str) -> str:
    return f'<li class="item"><a href="{path}">{_e(title)}</a><span class="summary">{_e(summary)}</span></li>'


@dataclass
class _Item:
    path: str
    title: str
    paragraphs: list[str]
    summary: str
    prices: dict[str, str] = field(default_factory=dict)
    price_order: tuple[str, ...] = ()
    ads: list[int] = field(default_factory=list)


def _make_items(spec: SiteSpec, rng: random.Random) -> list[_Item]:
    chinese = spec.language == "chinese"
    items: list[_Item] = []
    titles: set[str] = set()
    kind = "products" if spec.variant == "multi_price" else "articles"
    for i in range(spec.n_pages * spec.items_per_page):
        for _ in range(50):
            title = corpus.chinese_title(rng) if chinese else corpus.english_title(rng)
            if title not in titles:
                break
        else:
            title = f"{title} {i + 1}"
        titles.add(title)
        make_par = corpus.chinese_paragraph if chinese else corpus.english_paragraph
        paragraphs = [make_par(rng) for _ in range(rng.randint(3, 5))]
        summary = corpus.chinese_paragraph(rng) if chinese else corpus.english_sentence(rng)
        item = _Item(f"/{kind}/{i + 1:03d}-{rng.randrange(16**6):06x}.html", title, paragraphs, summary)
        if spec.variant == "multi_price":
            market = rng.randint(40, 400)
            # competing prices differ from the market price in both units and cents
            item.prices = {
                "market": f"${market}.{rng.randint(0, 49):02d}",
                "discount": f"${market - rng.randint(5, 20)}.{rng.randint(50, 99):02d}",
                "promo": f"${market - rng.randint(21, 39)}.{rng.randint(50, 99):02d}",
            }
            order = list(PRICE_KINDS)
            rng.shuffle(order)
            item.price_order = tuple(order)
        if spec.variant == "noisy_ads":
            item.ads = sorted(rng.sample(range(1, len(paragraphs)), k=min(2, len(paragraphs) - 1)))
        items.append(item)
    return items


def _content_page(spec: SiteSpec, item: _Item, lb: dict[str, str], rng: random.Random) -> str:
    menu = _MENU.format(**lb)
    if spec.variant == "multi_price":
        rows = "".join(
            f'<li><span class="label">{PRICE_LABELS[k]}</span> '
            f'<span class="price price--{k}">{item.prices[k]}</span></li>'
            for k in item.price_order
        )
        main = (
            f'<main><div class="product"><h1 class="product-name">{_e(item.title)}</h1>'
            f'<ul class="prices">{rows}</ul>'
            f'<div class="description">{"".join(f"<p>{_e(p)}</p>" for p in item.paragraphs)}</div>'
            f'<div class="meta"><span class="sku">SKU {rng.randrange(10**6):06d}</span></div></div></main>'
        )
    else:
        body = []
        for i, par in enumerate(item.paragraphs):
            if i in item.ads:
                body.append(
                    f'<div class="ad-slot"><p>{_e(corpus.english_sentence(rng))}</p>'
                    f'<a href="https://ads.example.net/c/{rng.randrange(10**6)}">Sponsored</a></div>'
                )
            body.append(f"<p>{_e(par)}</p>")
        byline = "记者" if spec.language == "chinese" else "By staff reporter"
        main = (
            f'<main><article class="story"><h1 class="headline">{_e(item.title)}</h1>'
            f'<div class="meta"><span class="byline">{byline}</span></div>'
            f'<div class="story-body">{"".join(body)}</div></article></main>'
        )
    footer = f'<footer><p class="copyright">{lb["footer"]}</p></footer>'
    return _document(item.title, menu + main + footer, spec.language)


def _index_page(spec: SiteSpec, page: int, items: list[_Item], lb: dict[str, str], rng: random.Random) -> str:
    menu = _MENU.format(**lb)
    lis = "".join(_item_li(it.path, it.title, it.summary) for it in items)
    extra, script = "", ""
    last = page == spec.n_pages
    if spec.variant in ("link_pagination", "noisy_ads", "multi_price"):
        links = []
        if page > 1:
            links.append(f'<a class="prev" href="/list/{page - 1}.html">&laquo;</a>')
        if not last:
            links.append(f'<a class="next" href="/list/{page + 1}.html">{lb["next"]}</a>')
        extra = f'<nav class="pager">{"".join(links)}</nav>'
    elif spec.variant == "button_pagination" and not last:
        extra = f'<div class="pager"><button class="next" type="button" data-href="/list/{page + 1}.html">{lb["next"]}</button></div>'
        script = _BUTTON_SCRIPT
    elif spec.variant == "load_more" and not last:
        extra = (
            f'<div class="pager"><button class="load-more" type="button" data-load-url="/list/{page + 1}.frag.html" '
            f'data-target="ul.items">{lb["more"]}</button></div>'
        )
        script = _LOAD_MORE_SCRIPT
    ads = ""
    if spec.variant == "noisy_ads":
        ads = "".join(
            f'<aside class="ad-slot"><a href="https://ads.example.net/i/{rng.randrange(10**6)}">Sponsored offer</a></aside>'
            for _ in range(2)
        )
    main = f'<main><h2 class="section">{lb["section"]}</h2>{ads}<ul class="items">{lis}</ul>{extra}</main>'
    footer = f'<footer><p class="copyright">{lb["footer"]}</p></footer>'
    title = f'{lb["section"]} - {page}'
    return _document(title, menu + main + footer + script, spec.language)


def _static_page(title: str, text: str, lb: dict[str, str], language: str) -> str:
    return _document(title, _MENU.format(**lb) + f"<main><h1>{_e(title)}</h1><p>{_e(text)}</p></main>", language)


def generate_site(spec: SiteSpec) -> GeneratedSite:
    """Build every page and the golden set; a pure function of ``spec``."""
    rng = random.Random(f"fixture:{spec.seed}:{spec.variant}:{spec.language}")
    lb = _labels(spec.language)
    items = _make_items(spec, rng)
    pages: dict[str, Page] = {}
    per = spec.items_per_page
    for p in range(1, spec.n_pages + 1):
        chunk = items[(p - 1) * per : p * per]
        if spec.variant == "load_more" and p > 1:
            headers = (("X-Next-Fragment", f"/list/{p + 1}.frag.html"),) if p < spec.n_pages else ()
            pages[f"/list/{p}.frag.html"] = Page("".join(_item_li(i.path, i.title, i.summary) for i in chunk), headers)
        else:
            pages[f"/list/{p}.html"] = Page(_index_page(spec, p, chunk, lb, rng))
    for it in items:
        pages[it.path] = Page(_content_page(spec, it, lb, rng))
    pages["/about.html"] = Page(_static_page(lb["about"], "A generated test site.", lb, spec.language))
    pages["/contact.html"] = Page(_static_page(lb["contact"], "No contact details.", lb, spec.language))
    golden = GoldenSet(
        spec.site_id,
        spec.language,
        tuple(
            GoldenItem(it.path, it.title, " ".join(it.paragraphs), {"price": it.prices["market"]} if it.prices else {})
            for it in items
        ),
    )
    orders = {it.path: it.price_order for it in items if it.price_order}
    return GeneratedSite(spec, pages, golden, price_orders=orders)
