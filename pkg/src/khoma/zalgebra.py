"""Exact sparse linear algebra over the integers and rationals.

Everything here is exact: matrices carry arbitrary-precision integer entries,
Smith normal form is computed by unimodular row and column operations, and
rational ranks, kernels and images use fraction-free or Fraction arithmetic.
No floating point is ever involved.

The Smith reduction runs in two phases.  Entries of absolute value one are
eliminated first, picked by a lazily-updated fill estimate; this clears the
bulk of the chain-complex boundary matrices this library exists for while
keeping entries small.  Whatever survives is reduced by the classic textbook
procedure (smallest pivot, remainder swaps, divisibility sweep), which
guarantees the divisibility chain of the invariant factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence


@dataclass(frozen=True)
class SparseIntMat:
    """Immutable sparse integer matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        clean = {}
        for (r, c), v in self.entries.items():
            if not 0 <= r < self.rows or not 0 <= c < self.cols:
                raise ValueError(f"entry ({r}, {c}) out of range")
            if v:
                clean[(r, c)] = int(v)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = len(dense)
        if cols is None:
            cols = len(dense[0]) if rows else 0
        entries = {
            (r, c): v for r, row in enumerate(dense) for c, v in enumerate(row) if v
        }
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(k, k): 1 for k in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int):
        return cls(rows, cols, {})

    def get(self, r: int, c: int) -> int:
        return self.entries.get((r, c), 0)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            dense[r][c] = v
        return dense

    def transpose(self) -> "SparseIntMat":
        return SparseIntMat(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def __matmul__(self, other: "SparseIntMat") -> "SparseIntMat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, int]] = {}
        for (r, k), v in self.entries.items():
            by_row.setdefault(r, {})[k] = v
        other_rows: dict[int, dict[int, int]] = {}
        for (k, c), v in other.entries.items():
            other_rows.setdefault(k, {})[c] = v
        out: dict[tuple[int, int], int] = {}
        for r, row in by_row.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                for c, w in other_rows.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + v * w
            for c, v in acc.items():
                if v:
                    out[(r, c)] = v
        return SparseIntMat(self.rows, other.cols, out)

    def __neg__(self) -> "SparseIntMat":
        return SparseIntMat(
            self.rows, self.cols, {rc: -v for rc, v in self.entries.items()}
        )

    def __sub__(self, other: "SparseIntMat") -> "SparseIntMat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for rc, v in other.entries.items():
            w = out.get(rc, 0) - v
            if w:
                out[rc] = w
            else:
                out.pop(rc, None)
        return SparseIntMat(self.rows, self.cols, out)


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors d_1 | d_2 | ... | d_r plus optional transforms.

    When requested, ``u`` and ``v`` are unimodular with
    ``u @ a @ v == diag(invariant_factors)`` (zero-padded to the shape of a).
    """

    invariant_factors: tuple[int, ...]
    rank: int
    u: Optional[SparseIntMat] = None
    v: Optional[SparseIntMat] = None

    def diagonal(self, rows: int, cols: int) -> SparseIntMat:
        return SparseIntMat(
            rows,
            cols,
            {(k, k): d for k, d in enumerate(self.invariant_factors)},
        )


class _Reduction:
    """Mutable row/column elimination state with optional transform tracking."""

    def __init__(self, a: SparseIntMat, track: bool):
        self.row: dict[int, dict[int, int]] = {}
        self.col: dict[int, set[int]] = {}
        for (r, c), v in a.entries.items():
            self.row.setdefault(r, {})[c] = v
            self.col.setdefault(c, set()).add(r)
        self.track = track
        if track:
            self.urow = {r: {r: 1} for r in range(a.rows)}
            self.vcol = {c: {c: 1} for c in range(a.cols)}

    def entry(self, r: int, c: int) -> int:
        return self.row.get(r, {}).get(c, 0)

    def add_row(self, dst: int, src: int, factor: int):
        """row_dst += factor * row_src."""
        if not factor:
            return
        drow = self.row.setdefault(dst, {})
        col = self.col
        get = drow.get
        for c, v in self.row.get(src, {}).items():
            w = get(c)
            if w is None:
                drow[c] = factor * v
                col[c].add(dst)  # col[c] exists: it holds src already
            else:
                w += factor * v
                if w:
                    drow[c] = w
                else:
                    del drow[c]
                    col[c].discard(dst)
        if not drow:
            del self.row[dst]
        if self.track:
            udst = self.urow[dst]
            for c, v in self.urow[src].items():
                w = udst.get(c, 0) + factor * v
                if w:
                    udst[c] = w
                else:
                    del udst[c]

    def add_col(self, dst: int, src: int, factor: int):
        """col_dst += factor * col_src."""
        if not factor:
            return
        for r in list(self.col.get(src, ())):
            rrow = self.row[r]
            w = rrow.get(dst, 0) + factor * rrow[src]
            if w:
                rrow[dst] = w
                self.col.setdefault(dst, set()).add(r)
            elif dst in rrow:
                del rrow[dst]
                self.col[dst].discard(r)
        if self.track:
            vdst = self.vcol[dst]
            for r, v in self.vcol[src].items():
                w = vdst.get(r, 0) + factor * v
                if w:
                    vdst[r] = w
                else:
                    del vdst[r]

    def negate_row(self, r: int):
        for c in self.row.get(r, {}):
            self.row[r][c] = -self.row[r][c]
        if self.track:
            self.urow[r] = {c: -v for c, v in self.urow[r].items()}

    def drop_pivot(self, r: int, c: int):
        """Remove a fully isolated pivot from the active matrix."""
        del self.row[r]
        self.col[c].discard(r)
        if not self.col[c]:
            del self.col[c]


def _unit_phase(work: _Reduction, pivots: list[tuple[int, int, int]]):
    """Eliminate +-1 entries column by column, shortest columns first.

    A worklist revisits only columns whose entries changed; a final rescan
    catches units created late, so the core phase only ever sees a matrix
    without unit entries.
    """
    from collections import deque

    while True:
        queue = deque(sorted(work.col, key=lambda c: (len(work.col[c]), c)))
        queued = set(queue)
        progressed = False
        while queue:
            c = queue.popleft()
            queued.discard(c)
            col_rows = work.col.get(c)
            if not col_rows:
                continue
            best = None
            for r2 in col_rows:
                v = work.row[r2][c]
                if v == 1 or v == -1:
                    cand = (len(work.row[r2]), r2)
                    if best is None or cand < best:
                        best = cand
            if best is None:
                continue
            r = best[1]
            if work.row[r][c] < 0:
                work.negate_row(r)
            fill_cols = [c2 for c2 in work.row[r] if c2 != c]
            for r2 in [r2 for r2 in col_rows if r2 != r]:
                work.add_row(r2, r, -work.row[r2][c])
            for c2 in fill_cols:
                work.add_col(c2, c, -work.row[r][c2])
            pivots.append((r, c, 1))
            work.drop_pivot(r, c)
            progressed = True
            for c2 in fill_cols:
                if c2 not in queued and c2 in work.col:
                    queue.append(c2)
                    queued.add(c2)
        if not progressed:
            break
        # rescan: any unit left anywhere means another round is worthwhile
        if not any(
            v == 1 or v == -1 for row in work.row.values() for v in row.values()
        ):
            break


def _core_phase(work: _Reduction, pivots: list[tuple[int, int, int]]):
    """Textbook reduction of whatever the unit phase left behind.

    The pivot is re-selected as the globally smallest entry after every
    modification; pivoting anywhere else lets entries explode.
    """
    while work.row:
        r, c = min(
            ((r, c) for r, row in work.row.items() for c in row),
            key=lambda rc: (abs(work.row[rc[0]][rc[1]]), rc),
        )
        v = work.row[r][c]
        if v < 0:
            work.negate_row(r)
            v = -v
        changed = False
        for r2 in sorted(work.col[c]):
            if r2 != r:
                work.add_row(r2, r, -(work.row[r2][c] // v))
                if work.entry(r2, c):
                    changed = True  # a remainder below v appeared; rescan
        if changed:
            continue
        for c2 in sorted(work.row[r]):
            if c2 != c:
                work.add_col(c2, c, -(work.row[r][c2] // v))
                if work.entry(r, c2):
                    changed = True
        if changed:
            continue
        bad = None
        for r2, row in work.row.items():
            if r2 == r:
                continue
            for w in row.values():
                if w % v:
                    bad = r2
                    break
            if bad is not None:
                break
        if bad is None:
            pivots.append((r, c, v))
            work.drop_pivot(r, c)
        else:
            # fold the offending row in; the next pass shrinks the pivot
            work.add_row(r, bad, 1)


def snf(a: SparseIntMat, want_transforms: bool = False) -> SnfResult:
    """Smith normal form of ``a``.

    Returns the invariant factors with their divisibility chain, the rank, and
    (when asked) unimodular transforms with ``u @ a @ v`` diagonal.
    """
    work = _Reduction(a, want_transforms)
    pivots: list[tuple[int, int, int]] = []
    _unit_phase(work, pivots)
    _core_phase(work, pivots)

    factors = tuple(v for _, _, v in pivots)
    for d, e in zip(factors, factors[1:]):
        if e % d:
            raise AssertionError("invariant factor chain violated")

    u = v = None
    if want_transforms:
        pivot_rows = [r for r, _, _ in pivots]
        pivot_cols = [c for _, c, _ in pivots]
        row_order = pivot_rows + sorted(set(range(a.rows)) - set(pivot_rows))
        col_order = pivot_cols + sorted(set(range(a.cols)) - set(pivot_cols))
        u_entries = {}
        for new_r, old_r in enumerate(row_order):
            for c, val in work.urow[old_r].items():
                u_entries[(new_r, c)] = val
        v_entries = {}
        for new_c, old_c in enumerate(col_order):
            for r, val in work.vcol[old_c].items():
                v_entries[(r, new_c)] = val
        u = SparseIntMat(a.rows, a.rows, u_entries)
        v = SparseIntMat(a.cols, a.cols, v_entries)

    return SnfResult(invariant_factors=factors, rank=len(factors), u=u, v=v)


def rank_q(a: SparseIntMat) -> int:
    """Rank over the rationals via fraction-free row elimination.

    The shortest remaining row supplies the pivot (its smallest entry), which
    keeps fill-in low on boundary-style matrices; rows are renormalized by
    their gcd to control entry growth.  Deliberately independent of ``snf``
    so the two can cross-check each other.
    """
    rows: dict[int, dict[int, int]] = {}
    for (r, c), v in a.entries.items():
        rows.setdefault(r, {})[c] = v
    active = list(rows.values())
    rank = 0
    while active:
        pivot_idx = min(range(len(active)), key=lambda k: len(active[k]))
        pivot = active.pop(pivot_idx)
        c = min(pivot, key=lambda col: (abs(pivot[col]), col))
        pv = pivot[c]
        rank += 1
        nxt = []
        for row in active:
            if c not in row:
                nxt.append(row)
                continue
            av = row[c]
            g = gcd(pv, av)
            fr, fa = pv // g, av // g
            merged = {k: fr * v for k, v in row.items()}
            for k, v in pivot.items():
                w = merged.get(k, 0) - fa * v
                if w:
                    merged[k] = w
                else:
                    merged.pop(k, None)
            if merged:
                shrink = 0
                for v in merged.values():
                    shrink = gcd(shrink, v)
                    if shrink == 1:
                        break
                if shrink > 1:
                    merged = {k: v // shrink for k, v in merged.items()}
                nxt.append(merged)
        active = nxt
    return rank


def _rref_fraction(a: SparseIntMat) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns rows and pivot columns."""
    rows = {}
    for (r, c), v in a.entries.items():
        rows.setdefault(r, {})[c] = Fraction(v)
    active = [row for row in rows.values() if row]
    reduced: list[dict[int, Fraction]] = []
    pivot_cols: list[int] = []
    while active:
        c = min(min(row) for row in active)
        idx = next(k for k, row in enumerate(active) if c in row)
        pivot = active.pop(idx)
        inv = 1 / pivot[c]
        pivot = {k: v * inv for k, v in pivot.items()}
        for row in reduced:
            f = row.get(c)
            if f:
                for k, v in pivot.items():
                    w = row.get(k, Fraction(0)) - f * v
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
        nxt = []
        for row in active:
            f = row.get(c)
            if f:
                for k, v in pivot.items():
                    w = row.get(k, Fraction(0)) - f * v
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
            if row:
                nxt.append(row)
        active = nxt
        reduced.append(pivot)
        pivot_cols.append(c)
    return reduced, pivot_cols


def kernel_basis_q(a: SparseIntMat) -> list[list[Fraction]]:
    """A basis of the rational null space, one vector per free column."""
    reduced, pivot_cols = _rref_fraction(a)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * a.cols
        vec[free] = Fraction(1)
        for row, pc in zip(reduced, pivot_cols):
            coeff = row.get(free)
            if coeff:
                vec[pc] = -coeff
        basis.append(vec)
    return basis


def image_basis_q(a: SparseIntMat) -> list[list[Fraction]]:
    """A basis of the rational column space: the original pivot columns."""
    _, pivot_cols = _rref_fraction(a)
    basis = []
    for c in pivot_cols:
        vec = [Fraction(0)] * a.rows
        for r in range(a.rows):
            v = a.get(r, c)
            if v:
                vec[r] = Fraction(v)
        basis.append(vec)
    return basis
