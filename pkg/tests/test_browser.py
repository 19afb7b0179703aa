from __future__ import annotations

import pytest
from bs4 import BeautifulSoup

from fake_webdriver import FakeWebDriver
from webscraper.clock import VirtualClock
from webscraper.fixture import SiteSpec
from webscraper.tools import ElementNotFound, HostThrottle, HttpBrowser, ToolError, ToolFatalError, WebDriverBrowser

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _item_links(html: str) -> list[str]:
    return [a["href"] for a in BeautifulSoup(html, "html.parser").select("ul.items li.item > a")]


@pytest.fixture
def browser():
    b = HttpBrowser(HostThrottle(0, VirtualClock()))
    yield b
    b.close()


def test_navigate_and_read(browser, link_site):
    url = browser.navigate(link_site.url + "/list/1.html")
    assert url == link_site.url + "/list/1.html"
    assert len(_item_links(browser.get_html())) == 5


def test_next_link(browser, link_site):
    browser.navigate(link_site.url + "/list/1.html")
    assert browser.click("nav.pager a.next").endswith("/list/2.html")
    assert browser.current_url == link_site.url + "/list/2.html"


def test_next_button_navigates(browser, serve_site):
    srv = serve_site(SiteSpec(3, 3, 4, "button_pagination"))
    browser.navigate(srv.url + "/list/1.html")
    seen = _item_links(browser.get_html())
    browser.click("button.next")
    browser.click("button.next")
    seen += _item_links(browser.get_html())
    assert browser.current_url.endswith("/list/3.html")
    assert len(seen) == 8


def test_load_more_appends_until_exhausted(browser, serve_site):
    srv = serve_site(SiteSpec(3, 3, 4, "load_more"))
    browser.navigate(srv.url + "/list/1.html")
    browser.click("button.load-more")
    browser.click("button.load-more")
    links = _item_links(browser.get_html())
    assert links == [g.url for g in srv.site.golden.items]
    with pytest.raises(ElementNotFound):
        browser.click("button.load-more")


def test_invalid_url_is_recoverable(browser):
    with pytest.raises(ToolError, match="invalid URL"):
        browser.navigate("not a url")
    with pytest.raises(ToolError, match="invalid URL"):
        browser.navigate("ftp://x.example/")


def test_http_error_is_recoverable(browser, link_site):
    with pytest.raises(ToolError, match="404"):
        browser.navigate(link_site.url + "/missing.html")


def test_missing_element(browser, link_site):
    browser.navigate(link_site.url + "/list/1.html")
    with pytest.raises(ElementNotFound):
        browser.click("button.does-not-exist")


def test_click_before_navigate(browser):
    with pytest.raises(ToolError, match="navigate first"):
        browser.click("a")


def test_closed_session_is_fatal(link_site):
    b = HttpBrowser()
    b.close()
    with pytest.raises(ToolFatalError):
        b.navigate(link_site.url + "/list/1.html")


def test_screenshot_and_scroll(browser, link_site):
    browser.navigate(link_site.url + "/list/1.html")
    assert browser.screenshot().startswith(PNG_MAGIC)
    assert browser.scroll(300) == 300
    assert browser.scroll(-1000) == 0


def test_fresh_sessions_do_not_share_cookies(link_site):
    start = len(link_site.requests)
    for _ in range(2):
        b = HttpBrowser(HostThrottle(0))
        b.navigate(link_site.url + "/list/1.html")
        b.navigate(link_site.url + "/list/2.html")
        b.close()
    log = link_site.requests[start:]
    assert log[0].cookie is None and log[2].cookie is None
    assert log[1].cookie and log[3].cookie


def test_fetches_are_reported_and_spaced(link_site):
    clock = VirtualClock()
    events = []
    b = HttpBrowser(HostThrottle(500, clock), on_fetch=events.append)
    b.navigate(link_site.url + "/list/1.html")
    b.click("nav.pager a.next")
    b.close()
    assert [e.url.rsplit("/", 1)[1] for e in events] == ["1.html", "2.html"]
    assert events[1].t - events[0].t >= 0.5


# -- WebDriver client against a fake W3C server ------------------------------


def test_webdriver_round_trip(link_site):
    with FakeWebDriver() as wd:
        events = []
        b = WebDriverBrowser(wd.url, HostThrottle(0, VirtualClock()), on_fetch=events.append)
        assert b.navigate(link_site.url + "/list/1.html") == link_site.url + "/list/1.html"
        b.click("nav.pager a.next")
        assert b.current_url == link_site.url + "/list/2.html"
        assert len(_item_links(b.get_html())) == 5
        assert b.screenshot().startswith(PNG_MAGIC)
        assert b.scroll(120) == 120
        with pytest.raises(ElementNotFound):
            b.click("button.nothing")
        b.close()
        assert ("DELETE", f"/session/{b.session_id}") in wd.calls
        assert [e.kind for e in events] == ["get", "click"]
        with pytest.raises(ToolFatalError):
            b.get_html()


def test_webdriver_lost_session_is_fatal(link_site):
    with FakeWebDriver() as wd:
        b = WebDriverBrowser(wd.url, HostThrottle(0))
        wd.sessions.pop(b.session_id).close()
        with pytest.raises(ToolFatalError, match="invalid session id"):
            b.navigate(link_site.url + "/list/1.html")


def test_webdriver_unreachable_is_fatal():
    with pytest.raises(ToolFatalError, match="unreachable"):
        WebDriverBrowser("http://127.0.0.1:9", timeout=2)
