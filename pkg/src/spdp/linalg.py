"""Exact rank of sparse row sets over QQ and GF(p).

Rows are dicts ``{column: value}`` with no stored zeros.  Both routines insert
rows one at a time into an echelon basis keyed by pivot column.  A new pivot
is the row's column with the fewest nonzeros in the input (static Markowitz
choice).  Basis rows are never back-reduced, so a basis row only contains
pivot columns created after its own; eliminating pivots in creation order
therefore terminates.

Over QQ every row is scaled to a primitive integer vector and combined
fraction-free (``a*v - b*u`` followed by content removal), so no rational
denominators appear during elimination.
"""

from __future__ import annotations

import heapq
from collections import Counter
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping

from .algebra import QQ, PrimeField, Rationals


def _column_counts(rows) -> Counter:
    counts = Counter()
    for r in rows:
        counts.update(r.keys())
    return counts


def _primitive_int_row(row: Mapping) -> dict:
    """Scale a rational row to coprime integers (sign of entries preserved)."""
    vals = list(row.values())
    den = reduce(lcm, (Fraction(v).denominator for v in vals), 1)
    out = {c: int(Fraction(v) * den) for c, v in row.items()}
    out = {c: v for c, v in out.items() if v}
    g = reduce(gcd, out.values(), 0)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _remove_content(v: dict) -> dict:
    g = reduce(gcd, v.values(), 0)
    if g > 1:
        return {c: x // g for c, x in v.items()}
    return v


class EchelonBasis:
    """Incremental row-echelon basis over QQ (integer rows) or GF(p).

    ``insert`` returns True when the row enlarges the span.  ``col_weight``
    optionally ranks candidate pivot columns (lower is preferred).
    """

    def __init__(self, field=QQ, col_weight: Mapping = None):
        self.field = field
        self.modular = isinstance(field, PrimeField)
        self.p = field.p if self.modular else None
        self.col_weight = col_weight or {}
        self.rows = {}    # pivot column -> row dict
        self.order = {}   # pivot column -> creation index

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _prepare(self, row: Mapping) -> dict:
        if self.modular:
            conv = self.field.convert
            out = {}
            for c, v in row.items():
                v = conv(v)
                if v:
                    out[c] = v
            return out
        return _primitive_int_row(row)

    def reduce(self, row: Mapping) -> dict:
        """Residual of ``row`` after elimination against the basis."""
        v = self._prepare(row)
        if not v or not self.rows:
            return v
        order = self.order
        heap = [(order[c], c) for c in v if c in order]
        heapq.heapify(heap)
        seen = set()
        modular = self.modular
        p = self.p
        while heap:
            _, c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            a = v.get(c)
            if not a:
                continue
            b = self.rows[c]
            if modular:
                # basis rows are monic at their pivot
                for j, bj in b.items():
                    x = (v.get(j, 0) - a * bj) % p
                    if x:
                        v[j] = x
                    else:
                        v.pop(j, None)
                    if j != c and j in order and j not in seen:
                        heapq.heappush(heap, (order[j], j))
            else:
                bc = b[c]
                g = gcd(a, bc)
                s, t = bc // g, a // g
                if s != 1:
                    v = {j: s * x for j, x in v.items()}
                for j, bj in b.items():
                    x = v.get(j, 0) - t * bj
                    if x:
                        v[j] = x
                    else:
                        v.pop(j, None)
                    if j != c and j in order and j not in seen:
                        heapq.heappush(heap, (order[j], j))
                if v:
                    v = _remove_content(v)
            if not v:
                break
        return v

    def insert(self, row: Mapping) -> bool:
        v = self.reduce(row)
        if not v:
            return False
        w = self.col_weight
        pivot = min(v, key=lambda c: (w.get(c, 0), c))
        if self.modular:
            inv = pow(v[pivot], -1, self.p)
            p = self.p
            v = {j: x * inv % p for j, x in v.items()}
        self.order[pivot] = len(self.order)
        self.rows[pivot] = v
        return True


def sparse_rank(rows: Iterable[Mapping], field=QQ) -> int:
    """Exact rank of a list of sparse rows over ``field``."""
    rows = [r for r in rows if r]
    if not rows:
        return 0
    if not isinstance(field, (Rationals, PrimeField)):
        raise TypeError(f"unsupported field {field!r}")
    counts = _column_counts(rows)
    basis = EchelonBasis(field, counts)
    # sparsest rows first keeps fill low
    for r in sorted(rows, key=len):
        basis.insert(r)
    return basis.rank


def rank_rational(rows: Iterable[Mapping]) -> int:
    return sparse_rank(rows, QQ)


def rank_mod_p(rows: Iterable[Mapping], p: int) -> int:
    return sparse_rank(rows, PrimeField(p))
