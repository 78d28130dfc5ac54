"""Finite balls of the universal k-regular d-dimensional arboreal complex.

Two constructions of the radius-n ball around the root cell: the inductive
attachment procedure, and the coset picture where top cells are reduced
words of length <= n.  Both come with the word <-> cell dictionary and the
invariant ordering (cofaces cycled by ascending generator exponent).
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import MComplex, MId, Multicell, from_simplicial
from .words import (
    EMPTY_WORD,
    Params,
    Word,
    enumerate_reduced_words,
    generator,
    multiply,
    reduce_word,
    strip_left,
    word_length,
)


@dataclass
class Ball:
    complex: MComplex
    radius: int
    cell_words: dict[MId, Word]  # top multicell -> reduced word

    def word_cell(self, w: Word) -> MId:
        key = reduce_word(w, self.complex.params).letters
        return self._by_letters[key]

    def __post_init__(self):
        self._by_letters = {w.letters: mid for mid, w in self.cell_words.items()}

    def has_word(self, w: Word) -> bool:
        return reduce_word(w, self.complex.params).letters in self._by_letters


class PathExitsBall(ValueError):
    """The unique good path between the two cells leaves the ball."""


def build_ball(p: Params, n: int) -> Ball:
    """Inductive construction: start from one top cell and attach, at each
    step, k-1 new top cells along every degree-one codimension-one cell of
    the previous step, each with a fresh vertex of the missing color."""
    if n < 0:
        raise ValueError("radius must be >= 0")
    d, k = p.d, p.k
    vertex_colors = list(range(d + 1))
    tops: list[tuple[int, ...]] = [tuple(range(d + 1))]  # vertex sets
    words: list[Word] = [EMPTY_WORD]
    # ordering cycles per (d-1) vertex set: list of top-cell indices
    cycles: dict[tuple[int, ...], list[int]] = {}
    frontier: list[tuple[tuple[int, ...], int]] = []  # ((d-1) vertex set, creator top)
    for drop in range(d + 1):
        facet = tuple(v for t, v in enumerate(tops[0]) if t != drop)
        frontier.append((facet, 0))
        cycles[facet] = [0]
    for _ in range(n):
        new_frontier = []
        for facet, creator in frontier:
            missing = ({*range(d + 1)} - {vertex_colors[v] for v in facet}).pop()
            for l in range(1, k):
                u = len(vertex_colors)
                vertex_colors.append(missing)
                top = tuple(sorted(facet + (u,)))
                t_idx = len(tops)
                tops.append(top)
                words.append(multiply(generator(missing, l), words[creator], p))
                cycles[facet].append(t_idx)
                for gone in facet:
                    new_facet = tuple(sorted((set(top) - {gone})))
                    new_frontier.append((new_facet, t_idx))
                    cycles[new_facet] = [t_idx]
        frontier = new_frontier

    x = from_simplicial(p, vertex_colors, tops, root_top=0)
    top_id: dict[frozenset[int], MId] = {}
    for cell in x.multicells(d):
        top_id[frozenset(cell.vertices)] = cell.mid
    tid = [top_id[frozenset(t)] for t in tops]
    facet_id: dict[frozenset[int], MId] = {}
    for cell in x.multicells(d - 1):
        facet_id[frozenset(cell.vertices)] = cell.mid
    ordering = {
        facet_id[frozenset(f)]: tuple(tid[t] for t in cyc) for f, cyc in cycles.items()
    }
    x.ordering = ordering
    x.boundary = frozenset(
        facet_id[frozenset(f)] for f, cyc in cycles.items() if len(cyc) < k
    )
    cell_words = {tid[t]: words[t] for t in range(len(tops))}
    return Ball(x, n, cell_words)


def ball_from_cosets(p: Params, n: int) -> Ball:
    """Coset construction: top cells are the reduced words of length <= n; a
    cell of color set J is the class of words agreeing after the letters
    outside J are stripped from the left."""
    if n < 0:
        raise ValueError("radius must be >= 0")
    d, k = p.d, p.k
    top_words = [w for w in enumerate_reduced_words(p, n)]
    all_colors = frozenset(range(d + 1))

    def coset_key(w: Word, colors: frozenset[int]) -> tuple:
        return strip_left(w, all_colors - colors, p).letters

    # enumerate cells per color set, indexed by canonical stripped word
    index: dict[tuple[tuple[int, ...], tuple], int] = {}
    registry: dict[tuple[int, ...], list[tuple]] = {}
    for w in top_words:
        for mask in range(1, 1 << (d + 1)):
            colors = tuple(c for c in range(d + 1) if mask >> c & 1)
            key = coset_key(w, frozenset(colors))
            if (colors, key) not in index:
                index[(colors, key)] = len(registry.setdefault(colors, []))
                registry[colors].append(key)

    # vertices grouped by color, in registry order
    vid: dict[tuple[int, tuple], int] = {}
    vertex_colors: list[int] = []
    for c in range(d + 1):
        for key in registry[(c,)]:
            vid[(c, key)] = len(vertex_colors)
            vertex_colors.append(c)

    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for colors in sorted(registry, key=lambda cs: (len(cs), cs)):
        if len(colors) < 2:
            continue
        cells[colors] = []
        for idx, key in enumerate(registry[colors]):
            w = Word(key)
            verts = tuple(vid[(c, coset_key(w, frozenset({c})))] for c in colors)
            faces: dict[int, MId] = {}
            for l in colors:
                sub = tuple(c for c in colors if c != l)
                sub_key = coset_key(w, frozenset(sub))
                faces[l] = (sub, index[(sub, sub_key)])
            cells[colors].append(Multicell(colors, idx, verts, faces))

    x = MComplex(p, vertex_colors, cells)
    ordering: dict[MId, tuple[MId, ...]] = {}
    boundary = set()
    top_colors = tuple(range(d + 1))
    for cell in x.multicells(d - 1):
        colors = cell.colors
        missing = ({*range(d + 1)} - set(colors)).pop()
        w0 = Word(registry[colors][cell.index])
        cyc = []
        for l in range(k):
            cof = multiply(generator(missing, l), w0, p)
            key = cof.letters
            if (top_colors, key) in index:
                cyc.append((top_colors, index[(top_colors, key)]))
        ordering[cell.mid] = tuple(cyc)
        if len(cyc) < k:
            boundary.add(cell.mid)
    x.ordering = ordering
    x.boundary = frozenset(boundary)
    x.root = (top_colors, index[(top_colors, ())])
    cell_words = {
        (top_colors, index[(top_colors, w.letters)]): w for w in top_words
    }
    return Ball(x, n, cell_words)


def unique_non_backtracking(b: Ball, t1: MId, t2: MId) -> list[MId]:
    """The unique good path of top cells from t1 to t2, as long as it stays
    inside the ball; raises PathExitsBall otherwise.  Consecutive cells share
    a codimension-one cell, and the generator steps spell the reduced word
    taking t1 to t2."""
    p = b.complex.params
    w1, w2 = b.cell_words[t1], b.cell_words[t2]
    u = multiply(w2, w1.inverse(), p)
    path = [t1]
    acc = w1
    for i, l in reversed(u.letters):
        acc = multiply(generator(i, l), acc, p)
        if not b.has_word(acc):
            raise PathExitsBall(
                f"good path needs the cell of word {acc.letters}, outside radius {b.radius}"
            )
        path.append(b.word_cell(acc))
    return path


def tree_ball_vertex_count(p: Params, n: int) -> int:
    """Closed-form vertex count of the radius-n ball for d=1 (the k-regular
    tree around an edge): 2 * sum_{m=0..n} (k-1)^m."""
    if p.d != 1:
        raise ValueError("closed form is for d=1")
    return 2 * sum((p.k - 1) ** m for m in range(n + 1))
