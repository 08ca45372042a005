"""Column elimination over truncated k[[t]], a discrete valuation ring.

Pivots are entries of minimal t-valuation in the current row (smallest
column index on ties), so every quotient formed is an exact ratio in the
ring and the only precision ever lost is the pivot valuation.  Column
operations are unimodular, hence the pivot columns span the same module
as the input columns at the surviving precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .series import TruncSeries

__all__ = ["PrecisionExhausted", "Pivot", "echelonize", "reduce_against"]


class PrecisionExhausted(ArithmeticError):
    """A required pivot is zero modulo the working precision."""


def divider(pivot: TruncSeries) -> Callable[[TruncSeries], TruncSeries]:
    """Exact division by a fixed pivot, with the unit inverted once."""
    v = pivot.valuation()
    if v is None:
        raise PrecisionExhausted("cannot divide by a series that is zero mod t^N")
    unit_inv = TruncSeries(pivot.coeffs[v:], pivot.precision - v).reciprocal()
    if v == 0:
        return lambda entry: entry * unit_inv
    return lambda entry: entry.shift_down(v) * unit_inv


@dataclass
class Pivot:
    row: int
    col: int
    divide: Callable[[TruncSeries], TruncSeries]


def echelonize(
    columns: list[list[TruncSeries]],
    nrows: int,
    transform: list[dict[int, TruncSeries]] | None = None,
    require_full_row_rank: bool = False,
) -> list[Pivot]:
    """Eliminate in place, row by row; returns the pivots in row order.

    When `transform` is given (initially the identity, one sparse dict per
    column) it receives the same column operations, so afterwards column c
    equals  sum_k transform[c][k] * original_column_k.
    """
    active = list(range(len(columns)))
    pivots: list[Pivot] = []
    for row in range(nrows):
        best = None
        for c in active:
            val = columns[c][row].valuation()
            if val is not None and (best is None or val < best[0]):
                best = (val, c)
                if val == 0:
                    break
        if best is None:
            if require_full_row_rank:
                raise PrecisionExhausted(
                    f"all candidate pivots in row {row} are zero at the "
                    "working precision; raise the precision N"
                )
            continue
        _, p = best
        div = divider(columns[p][row])
        for c in active:
            if c == p:
                continue
            entry = columns[c][row]
            if entry.is_zero:
                continue
            q = div(entry)
            col_p = columns[p]
            col_c = columns[c]
            for r in range(nrows):
                if not col_p[r].is_zero:
                    col_c[r] = col_c[r] - q * col_p[r]
            if transform is not None:
                tp = transform[p]
                tc = transform[c]
                for k, s in tp.items():
                    prod = q * s
                    cur = tc.get(k)
                    tc[k] = prod.scale(-1) if cur is None else cur - prod
        active.remove(p)
        pivots.append(Pivot(row, p, div))
    return pivots


def reduce_against(
    vector: list[TruncSeries],
    columns: list[list[TruncSeries]],
    pivots: list[Pivot],
) -> tuple[bool, dict[int, TruncSeries]]:
    """Reduce a vector against echelonized pivot columns.

    Returns (True, quotients) when the vector lies in the span modulo the
    working precision, where quotients maps pivot column index -> series
    with  vector = sum quotients[c] * columns[c].  Returns (False, {})
    when a pivot does not divide the corresponding entry or a nonzero
    residue survives.
    """
    v = list(vector)
    quotients: dict[int, TruncSeries] = {}
    for piv in pivots:
        entry = v[piv.row]
        if entry.is_zero:
            continue
        if entry.valuation() < columns[piv.col][piv.row].valuation():
            return False, {}
        q = piv.divide(entry)
        col = columns[piv.col]
        for r in range(len(v)):
            if not col[r].is_zero:
                v[r] = v[r] - q * col[r]
        quotients[piv.col] = q
    if all(s.is_zero for s in v):
        return True, quotients
    return False, {}
