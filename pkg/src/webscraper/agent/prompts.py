"""System prompt assembly for the three agent configurations."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..models import MODES

GUIDANCE_MARKER = "<crawler_guidance"
TOOL_OPERATIONS_MARKER = "<tool_operations>"


def _asset(name: str) -> str:
    return resources.files("webscraper.assets.prompts").joinpath(name).read_text(encoding="utf-8")


def load_guidance(path: str | Path | None = None) -> str:
    if path is None:
        return _asset("guidance.md")
    return Path(path).read_text(encoding="utf-8")


def assemble_system_prompt(mode: str, guidance_path: str | Path | None = None) -> str:
    """Default agent prompt, with crawler guidance appended unless ``mode`` is baseline.

    ``prompt_only`` additionally describes the parse and merge operations in
    prose, since those tools are not registered in that mode.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    parts = [_asset("default_system.md").strip()]
    if mode != "baseline":
        parts.append(load_guidance(guidance_path).strip())
    if mode == "prompt_only":
        parts.append(_asset("tool_operations.md").strip())
    return "\n\n".join(parts) + "\n"
