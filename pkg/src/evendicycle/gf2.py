"""GF(2) linear systems over int bitsets.

Rows are Python ints with bit ``i`` standing for variable ``i``; the
right-hand side is a single bit.
"""
from __future__ import annotations

from dataclasses import dataclass


class Basis:
    """Row echelon basis keyed by leading bit.

    Each stored row remembers which input rows (as a bitset) combine to it,
    so an inconsistency can be traced back to its sources.
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, tuple[int, int, int]] = {}

    def reduce(self, row: int, rhs: int, combo: int) -> tuple[int, int, int]:
        rows = self.rows
        while row:
            hit = rows.get(row.bit_length() - 1)
            if hit is None:
                break
            row ^= hit[0]
            rhs ^= hit[1]
            combo ^= hit[2]
        return row, rhs, combo

    def insert(self, row: int, rhs: int, combo: int) -> None:
        self.rows[row.bit_length() - 1] = (row, rhs, combo)


@dataclass(frozen=True)
class Solution:
    """Either ``values`` (one bit per variable) or ``conflict``.

    ``conflict`` is the set of input row indices whose rows sum to zero
    while their right-hand sides sum to one.
    """

    values: tuple[int, ...] | None
    conflict: tuple[int, ...] | None

    @property
    def feasible(self) -> bool:
        return self.values is not None


def solve_lexmin(rows: list[int], rhs: list[int], nvars: int) -> Solution:
    """Lexicographically smallest solution, variable 0 most significant."""
    basis = Basis()
    for i, (r0, b0) in enumerate(zip(rows, rhs)):
        r, b, combo = basis.reduce(r0, b0 & 1, 1 << i)
        if r == 0:
            if b:
                return Solution(None, tuple(j for j in range(len(rows)) if combo >> j & 1))
            continue
        basis.insert(r, b, combo)
    vals = []
    for i in range(nvars):
        r, b, _ = basis.reduce(1 << i, 0, 0)
        if r == 0:
            vals.append(b)
        else:
            basis.insert(r, b, 0)
            vals.append(0)
    return Solution(tuple(vals), None)


def satisfies(rows: list[int], rhs: list[int], values: tuple[int, ...]) -> bool:
    x = 0
    for i, b in enumerate(values):
        if b:
            x |= 1 << i
    return all((r & x).bit_count() % 2 == (b & 1) for r, b in zip(rows, rhs))
