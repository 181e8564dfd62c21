"""Small dense Gaussian elimination over exact scalars."""

from __future__ import annotations

from fractions import Fraction

from .fieldtower import Scalar, is_zero


def _div(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def rank(matrix: list[list[Scalar]]) -> int:
    m = [list(row) for row in matrix]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if not is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            if not is_zero(m[i][c]):
                f = _div(m[i][c], m[r][c])
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def inverse(matrix: list[list[Scalar]]) -> list[list[Scalar]]:
    n = len(matrix)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if not is_zero(aug[i][c])), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        p = aug[c][c]
        aug[c] = [_div(x, p) for x in aug[c]]
        for i in range(n):
            if i != c and not is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def matmul(a: list[list[Scalar]], b: list[list[Scalar]]) -> list[list[Scalar]]:
    return [[sum((x * b[k][j] for k, x in enumerate(row)), 0) for j in range(len(b[0]))] for row in a]


def transpose(a: list[list[Scalar]]) -> list[list[Scalar]]:
    return [list(col) for col in zip(*a)]
