from ._lcs import BACKEND, lcs_length, lcs_length_jit, lcs_length_numpy
from .judge import DEFAULT_TAU, ItemJudgment, RunReport, RunScore, judge_item, score_run
from .rouge import RougeScore, rouge_l, rouge_l_text, tokenize

__all__ = [
    "BACKEND",
    "DEFAULT_TAU",
    "ItemJudgment",
    "RougeScore",
    "RunReport",
    "RunScore",
    "judge_item",
    "lcs_length",
    "lcs_length_jit",
    "lcs_length_numpy",
    "rouge_l",
    "rouge_l_text",
    "score_run",
    "tokenize",
]
