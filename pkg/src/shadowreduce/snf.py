"""Exact Smith normal form over the integers.

Two entry points:

* :func:`smith_normal_form` is the dense algorithm with unimodular
  transforms, ``u @ m @ v == d``.  Matrices are lists of rows of Python
  ints, so there is no overflow.
* :func:`elementary_divisors` works on a sparse column representation and
  only returns the rank and the divisors.  It eliminates unit pivots first
  (the overwhelmingly common case for cellular boundary maps) and hands the
  residual block to the dense algorithm.
"""

from __future__ import annotations

import heapq
from typing import Mapping, Sequence

from . import checks
from .errors import InvariantViolation

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    bt = [[b[k][j] for k in range(inner)] for j in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return determinant(m) in (1, -1)


def check_smith_form(m, u, d, v) -> None:
    """Raise :class:`InvariantViolation` unless ``(u, d, v)`` is a Smith form of ``m``."""
    rows = len(m)
    cols = len(m[0]) if rows else len(v)
    if rows and cols and matmul(matmul(u, m), v) != [list(r) for r in d]:
        raise InvariantViolation("u*m*v != d")
    if not (is_unimodular(u) and is_unimodular(v)):
        raise InvariantViolation("transform is not unimodular")
    diag = []
    for i in range(rows):
        for j in range(cols):
            if i != j and d[i][j] != 0:
                raise InvariantViolation(f"off-diagonal entry at ({i},{j})")
        if i < cols:
            diag.append(d[i][i])
    nonzero = [x for x in diag if x]
    if any(x < 0 for x in diag) or diag[: len(nonzero)] != nonzero:
        raise InvariantViolation("diagonal not nonnegative with zeros last")
    for x, y in zip(nonzero, nonzero[1:]):
        if y % x:
            raise InvariantViolation(f"divisibility chain broken: {x} does not divide {y}")


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(u, d, v)`` with ``u @ m @ v == d``.

    ``d`` is diagonal with nonnegative entries ``d1 | d2 | ...`` followed by
    zeros; ``u`` and ``v`` are unimodular.

    >>> smith_normal_form([[1, 1], [0, -2]])[1]
    [[1, 0], [0, 2]]
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row[dst] += k * row[src]
        ra, rs = a[dst], a[src]
        for j in range(cols):
            if rs[j]:
                ra[j] += k * rs[j]
        ua, us = u[dst], u[src]
        for j in range(rows):
            if us[j]:
                ua[j] += k * us[j]

    def add_col(dst, src, k):  # col[dst] += k * col[src]
        for row in a:
            if row[src]:
                row[dst] += k * row[src]
        for row in v:
            if row[src]:
                row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            dirty = False
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t into the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                else:
                    swap_cols(j, t)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    if checks.enabled():
        check_smith_form(m, u, a, v)
    return u, a, v


def diagonal(d: Sequence[Sequence[int]]) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def elementary_divisors(columns: Sequence[Mapping[int, int]]) -> tuple[int, list[int]]:
    """Rank and elementary divisors > 1 of a sparse integer matrix.

    ``columns[c]`` maps row index to a nonzero entry.
    """
    cols: dict[int, dict[int, int]] = {}
    rows: dict[int, set[int]] = {}
    for c, col in enumerate(columns):
        entries = {r: x for r, x in col.items() if x}
        if entries:
            cols[c] = entries
            for r in entries:
                rows.setdefault(r, set()).add(c)

    rank = 0
    version = dict.fromkeys(cols, 0)
    heap = [(len(col), c, 0) for c, col in cols.items()]
    heapq.heapify(heap)
    stuck: set[int] = set()  # columns known to have no unit entry
    while heap:
        length, c, ver = heapq.heappop(heap)
        if c not in cols or version[c] != ver or c in stuck:
            continue
        col = cols[c]
        pivot_row = None
        for r, x in col.items():
            if x in (1, -1) and (pivot_row is None or len(rows[r]) < len(rows[pivot_row])):
                pivot_row = r
        if pivot_row is None:
            stuck.add(c)
            continue
        r = pivot_row
        p = col[r]
        for c2 in list(rows[r]):
            if c2 == c:
                continue
            col2 = cols[c2]
            factor = col2[r] * p  # p is its own inverse
            for rr, x in col.items():
                y = col2.get(rr, 0) - factor * x
                if y:
                    if rr not in col2:
                        rows[rr].add(c2)
                    col2[rr] = y
                else:
                    del col2[rr]
                    rows[rr].discard(c2)
            if col2:
                version[c2] += 1
                stuck.discard(c2)
                heapq.heappush(heap, (len(col2), c2, version[c2]))
            else:
                del cols[c2]
        for rr in col:
            rows[rr].discard(c)
        del rows[r]
        del cols[c]
        rank += 1

    if not cols:
        return rank, []
    row_ids = sorted({r for col in cols.values() for r in col})
    col_ids = sorted(cols)
    pos = {r: i for i, r in enumerate(row_ids)}
    dense = [[0] * len(col_ids) for _ in row_ids]
    for j, c in enumerate(col_ids):
        for r, x in cols[c].items():
            dense[pos[r]][j] = x
    _, d, _ = smith_normal_form(dense)
    diag = diagonal(d)
    return rank + len(diag), [x for x in diag if x > 1]
