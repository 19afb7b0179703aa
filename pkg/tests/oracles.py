"""Independent reference implementations used as test oracles.

Kept deliberately naive: plain Python lists and Fractions, no numpy and no
code shared with the package.
"""

from __future__ import annotations

from fractions import Fraction


def lcs_table(x: list, y: list) -> int:
    """Full (|x|+1) x (|y|+1) LCS dynamic program."""
    table = [[0] * (len(y) + 1) for _ in range(len(x) + 1)]
    for i in range(1, len(x) + 1):
        for j in range(1, len(y) + 1):
            if x[i - 1] == y[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(x)][len(y)]


def rouge_exact(x: list, y: list) -> tuple[Fraction, Fraction, Fraction]:
    """(R, P, F) as exact fractions with beta = 1; F = 0 when R + P = 0."""
    lcs = lcs_table(x, y)
    r = Fraction(lcs, len(x)) if x else Fraction(0)
    p = Fraction(lcs, len(y)) if y else Fraction(0)
    f = 2 * r * p / (r + p) if r + p else Fraction(0)
    return r, p, f


def sample_std(values: list[float]) -> float:
    n = len(values)
    mean = sum(values) / n
    return (sum((v - mean) ** 2 for v in values) / (n - 1)) ** 0.5
