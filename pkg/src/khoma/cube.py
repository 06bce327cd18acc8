"""The cube of resolutions of a word and its bigraded chain complex.

Every total resolution of the crossings is a vertex of an m-dimensional cube,
carrying the free module on {1, X}-labellings of its circles; an edge flips
one resolution bit from 0 to 1 and either merges two circles (multiplication)
or splits one (comultiplication), with a sign that makes every square of the
cube anticommute.  Summing the signed edge maps gives a differential whose
homology is computed elsewhere; this module only builds bases, edges and
matrices.

Gradings: a labelling of a vertex with weight w (number of 1-bits) has
quantum degree (#1-labels - #X-labels) + w, which already includes the
per-column degree shift of the chain complex, so every edge map preserves the
quantum degree on the nose.

Vertices are enumerated lazily per homological degree so that words near the
crossing limit never materialize the whole cube at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .diagram import (
    CrossingLimitError,
    ResolvedState,
    Word,
    circles,
    label_crossings,
    resolve_crossing,
)
from .zalgebra import SparseIntMat

DEFAULT_MAX_CROSSINGS = 16

MERGE = "merge"
SPLIT = "split"

LABEL_ONE = "1"
LABEL_X = "X"


class VertexData:
    """One resolution: its circles plus the labelling basis of its module."""

    __slots__ = ("eps", "weight", "state", "_key_index")

    def __init__(self, eps: int, weight: int, state: ResolvedState):
        self.eps = eps
        self.weight = weight
        self.state = state
        self._key_index = None

    @property
    def count(self) -> int:
        return self.state.count

    @property
    def key_index(self) -> dict:
        if self._key_index is None:
            self._key_index = {key: k for k, key in enumerate(self.state.keys)}
        return self._key_index

    def q_degree(self, label_mask: int) -> int:
        """Quantum degree of a labelling; bit k set means circle k carries X."""
        x = label_mask.bit_count()
        return self.state.count - 2 * x + self.weight

    def labels(self, label_mask: int) -> tuple[str, ...]:
        return tuple(
            LABEL_X if (label_mask >> k) & 1 else LABEL_ONE
            for k in range(self.state.count)
        )

    def label_mask(self, labels: Sequence[str]) -> int:
        if len(labels) != self.state.count:
            raise ValueError("labelling length does not match circle count")
        mask = 0
        for k, a in enumerate(labels):
            if a == LABEL_X:
                mask |= 1 << k
            elif a != LABEL_ONE:
                raise ValueError(f"unknown circle label {a!r}")
        return mask


@dataclass(frozen=True)
class EdgeData:
    """A cube edge: one bit flipped 0 -> 1, with the induced circle surgery.

    ``carry`` maps each unaffected source circle index to its target index;
    affected indices appear in ``src_affected`` / ``tgt_affected`` (two merge
    into one, or one splits into two).  ``sign`` is -1 to the number of 1-bits
    strictly before the flipped position.
    """

    source: int
    target: int
    bit: int
    sign: int
    kind: str
    src_affected: tuple[int, ...]
    tgt_affected: tuple[int, ...]
    carry: tuple[Optional[int], ...]


class CubeComplex:
    """All resolutions of a word, with per-degree lazy materialization."""

    def __init__(self, word: Word, max_crossings: int = DEFAULT_MAX_CROSSINGS):
        m = word.crossing_count
        if m > max_crossings:
            raise CrossingLimitError(
                f"word has {m} crossings, limit is {max_crossings}"
            )
        self.word = word
        self.labels = label_crossings(word)
        self.m = m
        self.n_plus = word.n_plus
        self.n_minus = word.n_minus
        self.strands = word.strands
        self.rows = max(len(word.letters), 1)
        self._vertices: dict[int, dict[int, VertexData]] = {}
        self._basis: dict[int, dict[int, list[tuple[int, int]]]] = {}
        self._basis_index: dict[int, dict[int, dict[tuple[int, int], int]]] = {}
        self._blocks: dict[int, dict[int, SparseIntMat]] = {}

    # -- vertices ---------------------------------------------------------

    def _build_vertex(self, eps: int) -> VertexData:
        bits = tuple((eps >> b) & 1 for b in range(self.m))
        return VertexData(eps, sum(bits), circles(self.word, bits))

    def vertex(self, eps: int) -> VertexData:
        weight = eps.bit_count()
        degree = self.vertices_by_eps(weight)
        return degree[eps]

    def vertices_by_eps(self, i: int) -> dict[int, VertexData]:
        if i < 0 or i > self.m:
            return {}
        if i not in self._vertices:
            degree = {}
            for positions in itertools.combinations(range(self.m), i):
                eps = 0
                for b in positions:
                    eps |= 1 << b
                degree[eps] = self._build_vertex(eps)
            self._vertices[i] = dict(sorted(degree.items()))
        return self._vertices[i]

    def vertices(self, i: int) -> list[VertexData]:
        """Vertices of homological degree i, ascending by resolution mask."""
        return list(self.vertices_by_eps(i).values())

    def release_degree(self, i: int):
        """Drop cached data for one homological degree."""
        self._vertices.pop(i, None)
        self._basis.pop(i, None)
        self._basis_index.pop(i, None)
        self._blocks.pop(i, None)

    # -- edges ------------------------------------------------------------

    def edge(self, eps: int, bit: int) -> EdgeData:
        if (eps >> bit) & 1:
            raise ValueError("edge bit is already set in the source")
        src = self.vertex(eps)
        tgt = self.vertex(eps | (1 << bit))
        label = self.labels[bit]
        k = label.type
        s = self.strands
        top = label.letter_index * s
        bot = ((label.letter_index + 1) % self.rows) * s
        points = (top + k - 1, top + k, bot + k - 1, bot + k)
        src_touched = sorted({src.state.membership[p] for p in points})
        tgt_touched = sorted({tgt.state.membership[p] for p in points})
        if len(src_touched) == 2 and len(tgt_touched) == 1:
            kind = MERGE
        elif len(src_touched) == 1 and len(tgt_touched) == 2:
            kind = SPLIT
        else:
            raise AssertionError("edge surgery did not change the circle count by one")
        touched = set(src_touched)
        tgt_keys = tgt.key_index
        carry = tuple(
            None if c in touched else tgt_keys[src.state.keys[c]]
            for c in range(src.state.count)
        )
        sign = -1 if (eps & ((1 << bit) - 1)).bit_count() & 1 else 1
        return EdgeData(
            source=eps,
            target=eps | (1 << bit),
            bit=bit,
            sign=sign,
            kind=kind,
            src_affected=tuple(src_touched),
            tgt_affected=tuple(tgt_touched),
            carry=carry,
        )

    def edges_from(self, eps: int) -> list[EdgeData]:
        return [self.edge(eps, b) for b in range(self.m) if not (eps >> b) & 1]

    # -- bases and matrices -------------------------------------------------

    def chain_basis(self, i: int) -> dict[int, list[tuple[int, int]]]:
        """Basis elements (eps, label_mask) of C^i, grouped by quantum degree."""
        if i < 0 or i > self.m:
            return {}
        if i not in self._basis:
            graded: dict[int, list[tuple[int, int]]] = {}
            for eps, vx in self.vertices_by_eps(i).items():
                c = vx.state.count
                base_q = c + i
                for mask in range(1 << c):
                    j = base_q - 2 * mask.bit_count()
                    graded.setdefault(j, []).append((eps, mask))
            self._basis[i] = graded
        return self._basis[i]

    def basis_index(self, i: int) -> dict[int, dict[tuple[int, int], int]]:
        if i not in self._basis_index:
            self._basis_index[i] = {
                j: {elem: n for n, elem in enumerate(elems)}
                for j, elems in self.chain_basis(i).items()
            }
        return self._basis_index[i]

    def chain_rank(self, i: int, j: int) -> int:
        return len(self.chain_basis(i).get(j, ()))

    def total_dimension(self) -> int:
        return sum(
            len(elems)
            for i in range(self.m + 1)
            for elems in self.chain_basis(i).values()
        )

    def differential_blocks(self, i: int) -> dict[int, SparseIntMat]:
        """All quantum-degree blocks of d: C^i -> C^{i+1} in one sweep."""
        if i in self._blocks:
            return self._blocks[i]
        src_basis = self.chain_basis(i)
        src_index = self.basis_index(i)
        tgt_index = self.basis_index(i + 1)
        entries: dict[int, dict[tuple[int, int], int]] = {
            j: {} for j in src_basis
        }
        for eps, vx in self.vertices_by_eps(i).items():
            c = vx.state.count
            base_q = c + i
            for b in range(self.m):
                if (eps >> b) & 1:
                    continue
                edge = self.edge(eps, b)
                scatter = [
                    (k, t) for k, t in enumerate(edge.carry) if t is not None
                ]
                for mask in range(1 << c):
                    j = base_q - 2 * mask.bit_count()
                    col = src_index[j][(eps, mask)]
                    base = 0
                    for k, t in scatter:
                        if (mask >> k) & 1:
                            base |= 1 << t
                    images = _image_masks(edge, mask, base)
                    if not images:
                        continue
                    block = entries[j]
                    rows_j = tgt_index.get(j)
                    for out_mask in images:
                        row = rows_j[(edge.target, out_mask)]
                        key = (row, col)
                        block[key] = block.get(key, 0) + edge.sign
        blocks = {}
        for j, block_entries in entries.items():
            blocks[j] = SparseIntMat(
                rows=len(self.chain_basis(i + 1).get(j, ())),
                cols=len(src_basis[j]),
                entries=block_entries,
            )
        self._blocks[i] = blocks
        return blocks

    def differential_matrix(self, i: int, j: int) -> SparseIntMat:
        """Matrix of d restricted to quantum degree j, rows = (i+1, j) basis."""
        if i < 0 or i > self.m:
            return SparseIntMat.zero(self.chain_rank(i + 1, j), self.chain_rank(i, j))
        blocks = self.differential_blocks(i)
        if j in blocks:
            return blocks[j]
        return SparseIntMat.zero(self.chain_rank(i + 1, j), self.chain_rank(i, j))


def _image_masks(edge: EdgeData, mask: int, base: int) -> tuple[int, ...]:
    """Target label masks of one basis element across one edge."""
    if edge.kind == MERGE:
        a, b = edge.src_affected
        xa = (mask >> a) & 1
        xb = (mask >> b) & 1
        if xa and xb:
            return ()
        (t,) = edge.tgt_affected
        return (base | ((xa | xb) << t),)
    (a,) = edge.src_affected
    t1, t2 = edge.tgt_affected
    if (mask >> a) & 1:
        return (base | (1 << t1) | (1 << t2),)
    return (base | (1 << t1), base | (1 << t2))


def build_cube(word: Word, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> CubeComplex:
    """Build the cube of resolutions of a word, guarding the crossing budget."""
    return CubeComplex(word, max_crossings=max_crossings)


def apply_edge(
    cube: CubeComplex, edge: EdgeData, labels: Sequence[str]
) -> list[tuple[tuple[str, ...], int]]:
    """Image of one basis element under one signed edge map.

    Unchanged circles keep their labels; the affected ones are combined by the
    multiplication (1,1)->1, (1,X)->X, (X,1)->X, (X,X)->0 or expanded by the
    comultiplication 1 -> 1|X + X|1, X -> X|X.  The result is the list of
    (labelling, coefficient) terms, each coefficient being the edge sign.
    """
    src = cube.vertex(edge.source)
    tgt = cube.vertex(edge.target)
    mask = src.label_mask(labels)
    base = 0
    for k, t in enumerate(edge.carry):
        if t is not None and (mask >> k) & 1:
            base |= 1 << t
    return [
        (tgt.labels(out), edge.sign) for out in _image_masks(edge, mask, base)
    ]


# -- mapping cone decomposition ---------------------------------------------


def _row_map(length: int, deleted: int) -> list[int]:
    """Row renumbering after deleting one letter from a closed word.

    Rows are counted modulo the word length; deleting letter t merges the rows
    on its two sides.  Deleting the last letter merges back into the closure
    row 0.
    """
    rows = max(length, 1)
    new_rows = max(length - 1, 1)
    out = []
    for r in range(rows):
        if length == 1:
            out.append(0)
        elif deleted == length - 1:
            out.append(0 if r == length - 1 else r)
        else:
            out.append(r if r <= deleted else r - 1)
    assert all(0 <= r < new_rows for r in out)
    return out


@dataclass
class ConeSplit:
    """The cube split along one crossing into a subcomplex and a quotient.

    Vertices with the chosen bit set form a subcomplex isomorphic to the cube
    of the 1-resolution shifted by one homological and one quantum degree; the
    bit-0 vertices form the quotient, the cube of the 0-resolution.
    ``inclusion_matrix`` and ``projection_matrix`` are honest chain maps: the
    inclusion carries the sign needed to absorb the flipped bit's contribution
    to edge signs at positions above the chosen crossing.
    """

    total: CubeComplex
    sub: CubeComplex
    quotient: CubeComplex
    flat_index: int

    def __post_init__(self):
        self._sub_perm: dict[int, tuple[int, ...]] = {}
        self._quot_perm: dict[int, tuple[int, ...]] = {}

    # bit bookkeeping: positions in the total word vs. the resolved words
    def _embed(self, eps_small: int, bit: int) -> int:
        pi = self.flat_index
        low = eps_small & ((1 << pi) - 1)
        high = eps_small >> pi
        return (high << (pi + 1)) | (bit << pi) | low

    def _restrict(self, eps_big: int) -> int:
        pi = self.flat_index
        low = eps_big & ((1 << pi) - 1)
        high = eps_big >> (pi + 1)
        return (high << pi) | low

    def _correspondence(self, small: CubeComplex, eps_small: int, bit: int, cache):
        """Per-circle index map, total vertex -> resolved-word vertex."""
        if eps_small in cache:
            return cache[eps_small]
        big = self.total.vertex(self._embed(eps_small, bit))
        small_vx = small.vertex(eps_small)
        if big.state.rows == small_vx.state.rows:
            point_map = range(len(big.state.membership))
        else:
            letter = self.total.labels[self.flat_index].letter_index
            rows = _row_map(len(self.total.word.letters), letter)
            s = self.total.strands
            point_map = [
                rows[p // s] * s + p % s for p in range(len(big.state.membership))
            ]
        perm = [None] * big.state.count
        for p, small_p in enumerate(point_map):
            b = big.state.membership[p]
            t = small_vx.state.membership[small_p]
            if perm[b] is None:
                perm[b] = t
            elif perm[b] != t:
                raise AssertionError("circle correspondence is not well defined")
        perm_t = tuple(perm)
        if sorted(perm_t) != list(range(small_vx.state.count)):
            raise AssertionError("circle correspondence is not a bijection")
        cache[eps_small] = perm_t
        return perm_t

    def _sign(self, eps_small: int) -> int:
        # 1-bits of the subcomplex vertex above the resolved position flip the
        # sign so the inclusion commutes with the differentials
        return -1 if (eps_small >> self.flat_index).bit_count() & 1 else 1

    def inclusion_matrix(self, i: int, j: int) -> SparseIntMat:
        """Chain map C^{i-1, j-1}(1-resolution) -> C^{i, j}(total)."""
        cols = self.sub.chain_basis(i - 1).get(j - 1, [])
        rows_index = self.total.basis_index(i).get(j, {})
        entries = {}
        for col, (eps_small, mask_small) in enumerate(cols):
            perm = self._correspondence(self.sub, eps_small, 1, self._sub_perm)
            eps_big = self._embed(eps_small, 1)
            mask_big = 0
            for b, t in enumerate(perm):
                if (mask_small >> t) & 1:
                    mask_big |= 1 << b
            row = rows_index[(eps_big, mask_big)]
            entries[(row, col)] = self._sign(eps_small)
        return SparseIntMat(
            rows=self.total.chain_rank(i, j), cols=len(cols), entries=entries
        )

    def projection_matrix(self, i: int, j: int) -> SparseIntMat:
        """Chain map C^{i, j}(total) -> C^{i, j}(0-resolution)."""
        cols = self.total.chain_basis(i).get(j, [])
        rows_index = self.quotient.basis_index(i).get(j, {})
        entries = {}
        pi = self.flat_index
        for col, (eps_big, mask_big) in enumerate(cols):
            if (eps_big >> pi) & 1:
                continue
            eps_small = self._restrict(eps_big)
            perm = self._correspondence(self.quotient, eps_small, 0, self._quot_perm)
            mask_small = 0
            for b, t in enumerate(perm):
                if (mask_big >> b) & 1:
                    mask_small |= 1 << t
            row = rows_index[(eps_small, mask_small)]
            entries[(row, col)] = 1
        return SparseIntMat(
            rows=self.quotient.chain_rank(i, j), cols=len(cols), entries=entries
        )

    def lift_matrix(self, i: int, j: int) -> SparseIntMat:
        """The obvious degreewise section of the projection."""
        cols = self.quotient.chain_basis(i).get(j, [])
        rows_index = self.total.basis_index(i).get(j, {})
        entries = {}
        for col, (eps_small, mask_small) in enumerate(cols):
            perm = self._correspondence(self.quotient, eps_small, 0, self._quot_perm)
            eps_big = self._embed(eps_small, 0)
            mask_big = 0
            for b, t in enumerate(perm):
                if (mask_small >> t) & 1:
                    mask_big |= 1 << b
            row = rows_index[(eps_big, mask_big)]
            entries[(row, col)] = 1
        return SparseIntMat(
            rows=self.total.chain_rank(i, j), cols=len(cols), entries=entries
        )


def mapping_cone_split(cube: CubeComplex, flat_index: int) -> ConeSplit:
    """Split the cube along one crossing into subcomplex and quotient.

    The 1-resolution cube enters shifted by one homological and one quantum
    degree; both structure maps commute with the differentials exactly.
    """
    if not 0 <= flat_index < cube.m:
        raise IndexError(f"crossing index {flat_index} out of range")
    word = cube.word
    sub_word = resolve_crossing(word, flat_index, 1)
    quot_word = resolve_crossing(word, flat_index, 0)
    # the split words have one crossing less; they always fit the same budget
    sub = CubeComplex(sub_word, max_crossings=cube.m)
    quotient = CubeComplex(quot_word, max_crossings=cube.m)
    return ConeSplit(total=cube, sub=sub, quotient=quotient, flat_index=flat_index)
