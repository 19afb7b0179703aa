"""Tokenization and ROUGE-L scoring."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._lcs import lcs_length

LANGUAGES = ("english", "chinese")

_WORD_RUN = re.compile(r"[^\W_]+")


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0xF900 <= cp <= 0xFAFF
        or 0x3040 <= cp <= 0x30FF  # kana
        or 0x20000 <= cp <= 0x2FA1F
    )


def tokenize(text: str | None, language: str = "english") -> list[str]:
    """Split ``text`` into lowercase tokens.

    English text splits on runs of non-alphanumeric characters. Chinese text
    additionally emits one token per CJK character, while embedded Latin or
    digit runs stay whole (``"BBC報導2024"`` -> ``bbc 報 導 2024``).
    """
    if language not in LANGUAGES:
        raise ValueError(f"unknown language {language!r}; expected one of {LANGUAGES}")
    if not text:
        return []
    runs = _WORD_RUN.findall(text.lower())
    if language == "english":
        return runs
    tokens: list[str] = []
    for run in runs:
        start = 0
        for i, ch in enumerate(run):
            if _is_cjk(ch):
                if i > start:
                    tokens.append(run[start:i])
                tokens.append(ch)
                start = i + 1
        if start < len(run):
            tokens.append(run[start:])
    return tokens


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float
    lcs_len: int


def _encode(x: Sequence[str], y: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    vocab: dict[str, int] = {}
    ax = np.fromiter((vocab.setdefault(t, len(vocab)) for t in x), dtype=np.int64, count=len(x))
    ay = np.fromiter((vocab.setdefault(t, len(vocab)) for t in y), dtype=np.int64, count=len(y))
    return ax, ay


def rouge_l(reference: Sequence[str], candidate: Sequence[str], beta: float = 1.0) -> RougeScore:
    """ROUGE-L of ``candidate`` against ``reference`` (both token sequences).

    Recall divides the LCS by the reference length, precision by the candidate
    length. An empty side makes its ratio 0, and F is 0 whenever R + P = 0.
    """
    ax, ay = _encode(reference, candidate)
    lcs = lcs_length(ax, ay)
    nx, ny = len(reference), len(candidate)
    recall = lcs / nx if nx else 0.0
    precision = lcs / ny if ny else 0.0
    if lcs == 0:
        return RougeScore(recall, precision, 0.0, 0)
    # (1+b^2)RP / (R + b^2 P) reduces to (1+b^2)L / (|Y| + b^2 |X|); exact for integer L
    b2 = beta * beta
    f1 = (1.0 + b2) * lcs / (ny + b2 * nx)
    return RougeScore(recall, precision, f1, lcs)


def rouge_l_text(reference: str | None, candidate: str | None, language: str = "english") -> RougeScore:
    return rouge_l(tokenize(reference, language), tokenize(candidate, language))
