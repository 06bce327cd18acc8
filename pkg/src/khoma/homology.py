"""Bigraded integral homology tables of word closures.

Homology is assembled slice by slice: for each homological degree i and
quantum degree j the free rank is

    dim C^{i,j} - rank d^{i,j} - rank d^{i-1,j}

and the torsion is the list of invariant factors > 1 of d^{i-1,j}, both read
off Smith normal forms of the boundary blocks.  Slicing by quantum degree
keeps every matrix at the size of one bigraded block, and the blocks of one
degree are independent, so they can be farmed out to worker processes.

Tables come in two flavours: the raw (unnormalized) homology of the cube, and
the normalized table obtained by shifting with the writhe data, which is the
link invariant.  Normalization refuses words that still contain smoothing
letters, since their crossing signs are not defined.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .cube import DEFAULT_MAX_CROSSINGS, CubeComplex, build_cube
from .diagram import Word
from .zalgebra import SparseIntMat, snf


@dataclass(frozen=True)
class AbGroup:
    """A finitely generated abelian group: free rank plus invariant factors."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        object.__setattr__(self, "torsion", tuple(self.torsion))
        for d in self.torsion:
            if d <= 1:
                raise ValueError("torsion factors must exceed 1")
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError("torsion factors must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        if self.is_trivial:
            return "0"
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " + ".join(parts)


TRIVIAL_GROUP = AbGroup()


@dataclass(frozen=True)
class BigradedTable:
    """Map (i, j) -> nontrivial abelian group, plus diagram bookkeeping."""

    groups: dict[tuple[int, int], AbGroup]
    normalized: bool
    n_plus: int
    n_minus: int
    smooth_letters: int = 0
    max_i: Optional[int] = None  # highest homological slice computed, None = all

    def __post_init__(self):
        clean = {}
        for key, group in sorted(self.groups.items()):
            if not group.is_trivial:
                clean[key] = group
        object.__setattr__(self, "groups", clean)
        parities = {j & 1 for _, j in clean}
        if len(parities) > 1:
            raise AssertionError("quantum degrees of a table must share parity")

    @property
    def parity(self) -> Optional[int]:
        for _, j in self.groups:
            return j & 1
        return None

    def group(self, i: int, j: int) -> AbGroup:
        return self.groups.get((i, j), TRIVIAL_GROUP)

    def items(self):
        return list(self.groups.items())

    def total_rank(self) -> int:
        return sum(g.rank for g in self.groups.values())

    def restricted(self, i_below: int) -> dict[tuple[int, int], AbGroup]:
        """Entries with homological degree strictly below the bound."""
        return {key: g for key, g in self.groups.items() if key[0] < i_below}

    def shifted(self, di: int, dj: int) -> dict[tuple[int, int], AbGroup]:
        return {(i + di, j + dj): g for (i, j), g in self.groups.items()}


def _snf_summary(mat: SparseIntMat) -> tuple[int, tuple[int, ...]]:
    res = snf(mat)
    return res.rank, tuple(d for d in res.invariant_factors if d > 1)


def _degree_summaries(cube: CubeComplex, i: int, pool):
    """(rank, torsion factors) of every quantum block of d^i."""
    blocks = cube.differential_blocks(i)
    items = sorted(blocks.items())
    if pool is not None and len(items) > 1:
        results = list(pool.map(_snf_summary, [mat for _, mat in items]))
    else:
        results = [_snf_summary(mat) for _, mat in items]
    return {j: res for (j, _), res in zip(items, results)}


def homology_unnormalized(
    word: Word,
    *,
    max_i: Optional[int] = None,
    jobs: int = 1,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> BigradedTable:
    """Integral homology of the resolution cube, before any degree shifts.

    ``max_i`` truncates the computation to homological degrees <= max_i; the
    groups reported there are still exact (the next boundary block is always
    included).  ``jobs`` > 1 distributes Smith reductions over processes.
    """
    cube = build_cube(word, max_crossings=max_crossings)
    top = cube.m if max_i is None else min(max_i, cube.m)

    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        groups: dict[tuple[int, int], AbGroup] = {}
        previous: dict[int, tuple[int, tuple[int, ...]]] = {}
        for i in range(0, top + 1):
            dims = {j: len(elems) for j, elems in cube.chain_basis(i).items()}
            current = _degree_summaries(cube, i, pool)
            for j, dim in dims.items():
                rank_out = current.get(j, (0, ()))[0]
                rank_in, torsion = previous.get(j, (0, ()))
                free = dim - rank_out - rank_in
                if free < 0:
                    raise AssertionError("negative free rank; boundary ranks corrupt")
                if free or torsion:
                    groups[(i, j)] = AbGroup(free, torsion)
            previous = current
            if i >= 2:
                cube.release_degree(i - 2)
    finally:
        if pool is not None:
            pool.shutdown()

    return BigradedTable(
        groups=groups,
        normalized=False,
        n_plus=cube.n_plus,
        n_minus=cube.n_minus,
        smooth_letters=word.smooth_count,
        max_i=None if top == cube.m else top,
    )


def homology_group_at(
    word: Word,
    i: int,
    j: int,
    *,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> AbGroup:
    """One raw bigraded homology group, touching only the two needed blocks.

    Diagrams near the crossing budget are out of reach of a full table but a
    single group only needs the boundary blocks into and out of its slice.
    """
    cube = build_cube(word, max_crossings=max_crossings)
    dim = cube.chain_rank(i, j)
    if dim == 0:
        return AbGroup()
    rank_in, torsion = _snf_summary(cube.differential_matrix(i - 1, j))
    rank_out, _ = _snf_summary(cube.differential_matrix(i, j))
    return AbGroup(dim - rank_in - rank_out, torsion)


def normalize(table: BigradedTable) -> BigradedTable:
    """Shift a raw table by the writhe data to the link-invariant grading.

    Entry (i, j) moves to (i - n_minus, j + n_plus - 2 n_minus).  Words that
    still contain smoothing letters are refused: their normalization would
    need crossing signs that no longer exist.
    """
    if table.normalized:
        raise ValueError("table is already normalized")
    if table.smooth_letters:
        raise ValueError("cannot normalize a table of a word with smoothing letters")
    di = -table.n_minus
    dj = table.n_plus - 2 * table.n_minus
    return BigradedTable(
        groups={(i + di, j + dj): g for (i, j), g in table.groups.items()},
        normalized=True,
        n_plus=table.n_plus,
        n_minus=table.n_minus,
        smooth_letters=0,
        max_i=None if table.max_i is None else table.max_i + di,
    )


def homology(
    word: Word,
    *,
    max_i: Optional[int] = None,
    jobs: int = 1,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> BigradedTable:
    """The link-invariant homology table of a genuine braid word.

    ``max_i`` bounds the *normalized* homological degree.
    """
    if word.smooth_count:
        raise ValueError("homology needs a crossings-only word; see homology_unnormalized")
    raw_max_i = None if max_i is None else max_i + word.n_minus
    raw = homology_unnormalized(
        word, max_i=raw_max_i, jobs=jobs, max_crossings=max_crossings
    )
    return normalize(raw)
