"""Threaded local HTTP server for a generated fixture site."""

from __future__ import annotations

import itertools
import json
import logging
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

from ..models import golden_to_dict
from .site import GOLDEN_PATH, GeneratedSite

logger = logging.getLogger(__name__)


class ServerStartError(RuntimeError):
    pass


@dataclass(frozen=True)
class RequestRecord:
    t: float
    path: str
    status: int
    cookie: str | None


class FixtureServer:
    """Serve ``site`` on ``host:port`` (port 0 picks a free port).

    Index pages set a ``visit`` cookie so tests can check that separate
    browser sessions do not share cookie state.
    """

    def __init__(self, site: GeneratedSite, host: str = "127.0.0.1", port: int = 0):
        self.site = site
        self.requests: list[RequestRecord] = []
        self._lock = threading.Lock()
        self._visits = itertools.count(1)
        handler = self._make_handler()
        try:
            self._httpd = ThreadingHTTPServer((host, port), handler)
        except OSError as exc:
            raise ServerStartError(f"cannot bind {host}:{port}: {exc}") from exc
        self._httpd.daemon_threads = True
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        host = self._httpd.server_address[0]
        return f"http://{host}:{self.port}"

    def start(self) -> FixtureServer:
        if self._thread is None:
            self._thread = threading.Thread(target=self._httpd.serve_forever, name="fixture-server", daemon=True)
            self._thread.start()
        return self

    def serve_forever(self) -> None:
        """Serve in the calling thread until interrupted."""
        try:
            self._httpd.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            self._httpd.server_close()

    def stop(self) -> None:
        if self._thread is not None:
            self._httpd.shutdown()
            self._thread.join()
            self._thread = None
        self._httpd.server_close()

    def __enter__(self) -> FixtureServer:
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def _log(self, path: str, status: int, cookie: str | None) -> None:
        with self._lock:
            self.requests.append(RequestRecord(time.monotonic(), path, status, cookie))

    def _make_handler(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def do_GET(self) -> None:  # noqa: N802
                path = urlsplit(self.path).path or "/"
                cookie = self.headers.get("Cookie")
                extra: list[tuple[str, str]] = []
                if path == GOLDEN_PATH:
                    golden = server.site.golden_at(server.url)
                    body = json.dumps(golden_to_dict(golden), ensure_ascii=False).encode("utf-8")
                    status, ctype = 200, "application/json"
                elif path in server.site.pages or path == "/":
                    page = server.site.pages[server.site.index_path if path == "/" else path]
                    body, status, ctype = page.body.encode("utf-8"), 200, page.content_type
                    extra.extend(page.headers)
                    if path.startswith("/list/") and not path.endswith(".frag.html"):
                        extra.append(("Set-Cookie", f"visit={next(server._visits)}; Path=/"))
                else:
                    body, status, ctype = b"<!DOCTYPE html><html><body><h1>Not found</h1></body></html>", 404, "text/html"
                server._log(path, status, cookie)
                self.send_response(status)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                for k, v in extra:
                    self.send_header(k, v)
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, format: str, *args) -> None:
                logger.debug("fixture %s", format % args)

        return Handler


def serve(site: GeneratedSite, port: int = 0, host: str = "127.0.0.1") -> FixtureServer:
    """Start serving ``site`` in a background thread and return the handle."""
    return FixtureServer(site, host, port).start()
