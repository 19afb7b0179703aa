from __future__ import annotations

import json

import pytest

from webscraper.models import (
    Dataset,
    GoldenItem,
    GoldenSet,
    ItemRecord,
    ScrapeTask,
    TaskParseError,
    ValidationError,
    assemble_user_prompt,
    golden_from_dict,
    golden_to_dict,
    load_golden,
    load_task,
    read_dataset,
    save_task,
    write_dataset,
    write_golden,
)

BBC = "https://www.bbc.com/news/us-canada"


def _write(tmp_path, obj, name="task.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return p


def test_load_task_round_trip(tmp_path):
    p = _write(tmp_path, {"target_url": BBC, "page_scope": 2, "fields": ["title", "link", "content"]})
    task = load_task(p)
    assert task.page_scope == 2 and task.fields == ("title", "link", "content")
    assert task.mode == "prompt_tool" and task.politeness_delay_ms == 2000 and task.max_iterations == 50
    save_task(task, tmp_path / "again.json")
    assert load_task(tmp_path / "again.json") == task


def test_load_task_missing_url(tmp_path):
    with pytest.raises(ValidationError, match="target_url"):
        load_task(_write(tmp_path, {"page_scope": 2, "fields": ["title"]}))


def test_load_task_zero_scope(tmp_path):
    with pytest.raises(ValidationError, match="page_scope"):
        load_task(_write(tmp_path, {"target_url": BBC, "page_scope": 0, "fields": ["title"]}))


def test_load_task_names_bad_key(tmp_path):
    with pytest.raises(TaskParseError) as err:
        load_task(_write(tmp_path, {"target_url": BBC, "page_scope": 1, "fields": ["title"], "colour": 1}))
    assert err.value.key == "colour"
    p = tmp_path / "broken.json"
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(TaskParseError):
        load_task(p)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"target_url": "ftp://x.example/"},
        {"target_url": "/relative"},
        {"fields": ()},
        {"fields": ("title", "title")},
        {"fields": ("Title",)},
        {"mode": "turbo"},
        {"politeness_delay_ms": -1},
        {"max_iterations": 0},
    ],
)
def test_task_invariants(kwargs):
    base = {"target_url": BBC, "page_scope": 1, "fields": ("title",)}
    with pytest.raises(ValidationError):
        ScrapeTask(**{**base, **kwargs})


def test_user_prompt_follows_template():
    task = ScrapeTask(BBC, 2, ("title", "link", "content"), section_hint="US-Canada section")
    prompt = assemble_user_prompt(task)
    assert prompt.startswith("Scrape the first two pages of US-Canada section")
    assert BBC in prompt
    for f in ("title", "link", "content"):
        assert f in prompt
    assert assemble_user_prompt(task) == prompt


def test_user_prompt_singular_and_single_field():
    one = assemble_user_prompt(ScrapeTask(BBC, 1, ("price",)))
    assert "the first page " in one and "pages" not in one
    assert "extracting the price for each item" in one


def test_dataset_rejects_duplicate_urls():
    a = ItemRecord("https://x.example/a", {"title": "A"})
    b = ItemRecord("HTTPS://X.EXAMPLE/a#frag", {"title": "B"})
    with pytest.raises(ValidationError, match="duplicate"):
        Dataset("t", (a, b))


def test_dataset_rejects_unrequested_fields():
    with pytest.raises(ValidationError):
        Dataset("t", (ItemRecord("https://x.example/a", {"price": "1"}),), ("title",))


def test_write_empty_dataset(tmp_path):
    p = tmp_path / "d.json"
    write_dataset(Dataset("t", (), ("title",)), p)
    assert json.loads(p.read_text()) == []


def test_write_read_round_trip_keeps_order(tmp_path):
    items = (
        ItemRecord("https://x.example/b", {"title": "B", "content": "bb"}),
        ItemRecord("https://x.example/a", {"title": "A"}),
    )
    ds = Dataset("t", items, ("title", "content"))
    p = tmp_path / "d.json"
    write_dataset(ds, p)
    data = json.loads(p.read_text())
    assert [d["url"] for d in data] == ["https://x.example/b", "https://x.example/a"]
    assert set(data[0]) == {"url", "title", "content"}
    assert read_dataset(p, "t") == ds


def test_link_aliases_url():
    rec = ItemRecord("https://x.example/a", {"link": "https://x.example/a", "title": "A"})
    assert "link" not in rec.values
    assert rec.get("link") == "https://x.example/a"
    assert rec.to_dict(("title", "link")) == {"url": "https://x.example/a", "title": "A", "link": "https://x.example/a"}


def test_golden_round_trip(tmp_path):
    g = GoldenSet(
        "shop",
        "english",
        (GoldenItem("https://x.example/p", "Kettle", "Boils water.", {"price": "$10.00"}),),
    )
    assert golden_from_dict(golden_to_dict(g)) == g
    write_golden(g, tmp_path / "g.json")
    assert load_golden(tmp_path / "g.json") == g


def test_golden_invariants():
    with pytest.raises(ValidationError):
        GoldenSet("s", "english", (GoldenItem("https://x.example/a", "", "c"),))
    with pytest.raises(ValidationError):
        GoldenSet("s", "english", (GoldenItem("https://x.example/a", "t", "c"), GoldenItem("https://x.example/a#x", "t", "c")))
    with pytest.raises(ValidationError):
        GoldenSet("s", "french", ())
