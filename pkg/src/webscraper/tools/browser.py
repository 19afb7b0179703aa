"""Browser sessions behind the agent's ``computer`` tool.

``HttpBrowser`` fetches pages over HTTP and keeps a parsed DOM. It runs the
two script conventions used by index pages in place of a JS engine:
``data-href`` (a button that navigates) and ``data-load-url`` +
``data-target`` (a "load more" button that appends a fragment; the response
header ``X-Next-Fragment`` names the next fragment, and its absence retires
the button). ``WebDriverBrowser`` drives a real browser over the W3C
WebDriver protocol.

Both route every request through a shared :class:`HostThrottle` and report
each fetch through ``on_fetch`` so transcripts can prove politeness.
"""

from __future__ import annotations

import base64
import io
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Protocol
from urllib.parse import urljoin

import httpx
from bs4 import BeautifulSoup

from ..urls import host_of, is_absolute_http
from .errors import ElementNotFound, ToolError, ToolFatalError
from .politeness import HostThrottle

logger = logging.getLogger(__name__)

USER_AGENT = "webscraper/0.1 (+research crawler; polite)"
_session_ids = itertools.count(1)


@dataclass(frozen=True)
class FetchEvent:
    host: str
    url: str
    t: float
    kind: str = "get"


class Browser(Protocol):
    current_url: str | None

    def navigate(self, url: str) -> str: ...

    def click(self, selector: str) -> str: ...

    def scroll(self, amount: int) -> int: ...

    def screenshot(self) -> bytes: ...

    def get_html(self) -> str: ...

    def close(self) -> None: ...


def render_placeholder_png(title: str, url: str, size: tuple[int, int]) -> bytes:
    """Viewport-sized PNG showing the page title and URL."""
    from PIL import Image, ImageDraw

    img = Image.new("RGB", size, "white")
    draw = ImageDraw.Draw(img)
    draw.text((12, 12), url, fill="gray")
    draw.text((12, 36), title.encode("ascii", "replace").decode(), fill="black")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


class HttpBrowser:
    def __init__(
        self,
        throttle: HostThrottle | None = None,
        on_fetch: Callable[[FetchEvent], None] | None = None,
        timeout: float = 15.0,
        viewport: tuple[int, int] = (1280, 800),
    ):
        self.session_id = f"http-{next(_session_ids)}"
        self.throttle = throttle or HostThrottle()
        self.on_fetch = on_fetch
        self.viewport = viewport
        self.current_url: str | None = None
        self.scroll_y = 0
        self._soup: BeautifulSoup | None = None
        self._closed = False
        self._client = httpx.Client(follow_redirects=True, timeout=timeout, headers={"User-Agent": USER_AGENT})

    def _alive(self) -> None:
        if self._closed:
            raise ToolFatalError(f"browser session {self.session_id} is closed")

    def _get(self, url: str) -> httpx.Response:
        host = host_of(url)
        t = self.throttle.wait(host)
        if self.on_fetch is not None:
            self.on_fetch(FetchEvent(host, url, t))
        try:
            resp = self._client.get(url)
        except httpx.HTTPError as exc:
            raise ToolError(f"fetch failed for {url}: {exc}") from exc
        if resp.status_code >= 400:
            raise ToolError(f"HTTP {resp.status_code} for {url}")
        return resp

    def navigate(self, url: str) -> str:
        self._alive()
        if not isinstance(url, str) or not is_absolute_http(url):
            raise ToolError(f"invalid URL: {url!r}")
        resp = self._get(url)
        self._soup = BeautifulSoup(resp.text, "html.parser")
        self.current_url = str(resp.url)
        self.scroll_y = 0
        return self.current_url

    def _dom(self) -> BeautifulSoup:
        self._alive()
        if self._soup is None:
            raise ToolError("no page loaded; navigate first")
        return self._soup

    def click(self, selector: str) -> str:
        soup = self._dom()
        try:
            node = soup.select_one(selector)
        except Exception as exc:
            raise ToolError(f"invalid selector {selector!r}: {exc}") from exc
        if node is None:
            raise ElementNotFound(f"no element matches {selector!r}")
        if node.name == "a" and node.get("href"):
            return "navigated to " + self.navigate(urljoin(self.current_url, node["href"]))
        if node.get("data-href"):
            return "navigated to " + self.navigate(urljoin(self.current_url, node["data-href"]))
        if node.get("data-load-url"):
            target = soup.select_one(node.get("data-target", "body")) or soup.body or soup
            resp = self._get(urljoin(self.current_url, node["data-load-url"]))
            fragment = BeautifulSoup(resp.text, "html.parser")
            added = 0
            for child in list(fragment.contents):
                target.append(child.extract())
                added += 1
            nxt = resp.headers.get("X-Next-Fragment")
            if nxt:
                node["data-load-url"] = nxt
            else:
                node.decompose()
            return f"loaded more content ({added} nodes)"
        return f"clicked {selector}"

    def scroll(self, amount: int) -> int:
        self._dom()
        self.scroll_y = max(0, self.scroll_y + int(amount))
        return self.scroll_y

    def screenshot(self) -> bytes:
        soup = self._dom()
        title = soup.title.get_text(strip=True) if soup.title else ""
        return render_placeholder_png(title, self.current_url or "", self.viewport)

    def get_html(self) -> str:
        return str(self._dom())

    def close(self) -> None:
        if not self._closed:
            self._client.close()
            self._closed = True


_ELEMENT_KEY = "element-6066-11e4-a52e-4f735466cecf"


class WebDriverBrowser:
    """Minimal W3C WebDriver client (navigate, click, scroll, screenshot, source)."""

    def __init__(
        self,
        endpoint: str,
        throttle: HostThrottle | None = None,
        on_fetch: Callable[[FetchEvent], None] | None = None,
        capabilities: dict | None = None,
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.throttle = throttle or HostThrottle()
        self.on_fetch = on_fetch
        self.current_url: str | None = None
        self._http = httpx.Client(timeout=timeout)
        caps = capabilities or {"browserName": "firefox", "moz:firefoxOptions": {"args": ["-headless"]}}
        value = self._call("POST", "/session", {"capabilities": {"alwaysMatch": caps}})
        self.session_id = value["sessionId"]
        self._closed = False

    def _call(self, method: str, path: str, body: dict | None = None):
        try:
            resp = self._http.request(method, self.endpoint + path, json=body)
        except httpx.HTTPError as exc:
            raise ToolFatalError(f"WebDriver endpoint unreachable: {exc}") from exc
        try:
            payload = resp.json()
        except ValueError as exc:
            raise ToolError(f"WebDriver returned non-JSON ({resp.status_code})") from exc
        value = payload.get("value") if isinstance(payload, dict) else None
        if resp.status_code >= 400 or (isinstance(value, dict) and "error" in value):
            error = value.get("error", "unknown error") if isinstance(value, dict) else "unknown error"
            message = value.get("message", "") if isinstance(value, dict) else ""
            if error in ("invalid session id", "session not created"):
                raise ToolFatalError(f"WebDriver: {error}: {message}")
            if error in ("no such element", "stale element reference"):
                raise ElementNotFound(f"WebDriver: {error}: {message}")
            raise ToolError(f"WebDriver: {error}: {message}")
        return value

    def _s(self, suffix: str) -> str:
        if self._closed:
            raise ToolFatalError(f"browser session {self.session_id} is closed")
        return f"/session/{self.session_id}{suffix}"

    def _note_fetch(self, url: str, kind: str) -> None:
        host = host_of(url)
        t = self.throttle.wait(host)
        if self.on_fetch is not None:
            self.on_fetch(FetchEvent(host, url, t, kind))

    def navigate(self, url: str) -> str:
        if not isinstance(url, str) or not is_absolute_http(url):
            raise ToolError(f"invalid URL: {url!r}")
        path = self._s("/url")
        self._note_fetch(url, "get")
        self._call("POST", path, {"url": url})
        self.current_url = self._call("GET", self._s("/url"))
        return self.current_url

    def click(self, selector: str) -> str:
        found = self._call("POST", self._s("/element"), {"using": "css selector", "value": selector})
        element_id = found[_ELEMENT_KEY]
        # a click may trigger a request; space it like one
        if self.current_url:
            self._note_fetch(self.current_url, "click")
        self._call("POST", self._s(f"/element/{element_id}/click"), {})
        self.current_url = self._call("GET", self._s("/url"))
        return f"clicked {selector}"

    def scroll(self, amount: int) -> int:
        value = self._call(
            "POST",
            self._s("/execute/sync"),
            {"script": "window.scrollBy(0, arguments[0]); return window.scrollY;", "args": [int(amount)]},
        )
        return int(value or 0)

    def screenshot(self) -> bytes:
        return base64.b64decode(self._call("GET", self._s("/screenshot")))

    def get_html(self) -> str:
        return self._call("GET", self._s("/source"))

    def close(self) -> None:
        if not self._closed:
            try:
                self._call("DELETE", self._s(""))
            except (ToolError, ToolFatalError):
                logger.warning("WebDriver session %s did not close cleanly", self.session_id)
            self._closed = True
            self._http.close()
