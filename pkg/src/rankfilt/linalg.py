"""Exact sparse rank computation over the rationals.

Matrices are lists of sparse integer rows (dict column -> coefficient).
Elimination is fraction free: a two-term integer cross-multiplication
followed by a content strip, with a cheap Markowitz-style pivot choice
(sparsest row, then sparsest column within it).  No floating point is
used anywhere.
"""

from __future__ import annotations

from math import gcd


def _strip_content(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for c in row:
            row[c] //= g
    return row


def sparse_rank(rows):
    """Rank over Q of the matrix whose rows are dicts {column: int}."""
    active = {}
    col_rows = {}
    for rid, row in enumerate(rows):
        row = {c: v for c, v in row.items() if v}
        if not row:
            continue
        active[rid] = _strip_content(dict(row))
        for c in row:
            col_rows.setdefault(c, set()).add(rid)

    rank = 0
    while active:
        # pivot: sparsest row, then its column hit by fewest other rows
        prid = min(active, key=lambda r: len(active[r]))
        prow = active[prid]
        pcol = min(prow, key=lambda c: len(col_rows[c]))
        pval = prow[pcol]
        rank += 1

        del active[prid]
        for c in prow:
            col_rows[c].discard(prid)

        victims = list(col_rows.get(pcol, ()))
        for rid in victims:
            row = active[rid]
            rval = row.pop(pcol)
            col_rows[pcol].discard(rid)
            # row <- pval*row - rval*prow; the pivot column cancels exactly
            for c in row:
                row[c] *= pval
            for c, v in prow.items():
                if c == pcol:
                    continue
                nv = row.get(c, 0) - rval * v
                if nv:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(rid)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    col_rows[c].discard(rid)
            if row:
                _strip_content(row)
            else:
                del active[rid]
    return rank


def dense_rank_fractions(rows, ncols):
    """Reference rank via dense Fraction elimination (for cross-checking)."""
    from fractions import Fraction

    mat = [[Fraction(row.get(c, 0)) for c in range(ncols)] for row in rows]
    rank = 0
    prow = 0
    for col in range(ncols):
        piv = None
        for r in range(prow, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[prow], mat[piv] = mat[piv], mat[prow]
        pv = mat[prow][col]
        for r in range(prow + 1, len(mat)):
            f = mat[r][col] / pv
            if f:
                for c in range(col, ncols):
                    mat[r][c] -= f * mat[prow][c]
        prow += 1
        rank += 1
        if prow == len(mat):
            break
    return rank
