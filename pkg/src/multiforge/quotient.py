"""Quotient multicomplexes of the universal arboreal complex.

From a transitive permutation action (a finite-index subgroup H), build the
colored ordered rooted multicomplex whose j-multicells are the orbits of the
generators outside each (j+1)-color set, plus the structural criteria:
multiplicity, regularity, intersection property, complete skeleton, the
line-graph / Schreier identification, and the classification round trip.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    MComplex,
    MId,
    Multicell,
    base_complex,
    is_surjective,
    nerve,
)
from .graphs import Multigraph, _cycle_edges
from .permrep import OrbitPartition, PermRep, orbits, validate
from .permrep import evaluate as rep_evaluate
from .universal import Ball


@dataclass
class QuotientObject:
    complex: MComplex
    rep: PermRep
    partitions: dict[tuple[int, ...], OrbitPartition]  # color set -> orbits
    point_cell: list[MId]  # point -> top multicell id
    cell_point: dict[MId, int]


def build_quotient(rep: PermRep) -> QuotientObject:
    """The quotient object of the subgroup presented by `rep`.

    Vertices are the orbits for singleton color sets (colored by that color),
    j-multicells the orbits for (j+1)-color sets, gluing drops one color,
    the coface cycle of a codimension-one multicell follows ascending powers
    of the missing generator from the orbit minimum, and the root is the
    class of the root point.
    """
    diag = validate(rep)
    if not diag.ok:
        raise ValueError("invalid rep: " + "; ".join(diag.messages))
    d, k, n = rep.params.d, rep.params.k, rep.n

    partitions: dict[tuple[int, ...], OrbitPartition] = {}
    for mask in range(1, 1 << (d + 1)):
        colors = tuple(c for c in range(d + 1) if mask >> c & 1)
        partitions[colors] = orbits(rep, frozenset(colors))

    vertex_colors: list[int] = []
    vert_id: dict[tuple[int, int], int] = {}  # (color, orbit id) -> vertex
    for c in range(d + 1):
        for orbit_id in range(partitions[(c,)].count):
            vert_id[(c, orbit_id)] = len(vertex_colors)
            vertex_colors.append(c)

    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for colors, part in sorted(partitions.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if len(colors) < 2:
            continue
        cells[colors] = []
        for orbit_id, rep_point in enumerate(part.reps):
            verts = tuple(
                vert_id[(c, partitions[(c,)].class_ids[rep_point])] for c in colors
            )
            faces: dict[int, MId] = {}
            for l in colors:
                sub = tuple(c for c in colors if c != l)
                faces[l] = (sub, partitions[sub].class_ids[rep_point])
            cells[colors].append(Multicell(colors, orbit_id, verts, faces))

    top_colors = tuple(range(d + 1))
    x = MComplex(rep.params, vertex_colors, cells)
    ordering: dict[MId, tuple[MId, ...]] = {}
    for i in range(d + 1):
        colors = tuple(c for c in range(d + 1) if c != i)
        beta = rep.betas[i]
        for orbit_id, m in enumerate(partitions[colors].reps):
            cyc = [m]
            q = beta[m]
            while q != m:
                cyc.append(q)
                q = beta[q]
            ordering[(colors, orbit_id)] = tuple((top_colors, pt) for pt in cyc)
    x.ordering = ordering
    x.root = (top_colors, rep.root)

    point_cell = [(top_colors, pt) for pt in range(n)]
    cell_point = {mid: pt for pt, mid in enumerate(point_cell)}
    return QuotientObject(x, rep, partitions, point_cell, cell_point)


def complex_line_graph(x: MComplex) -> Multigraph:
    """Dual graph on the top multicells (in id order), one edge class per
    generator power pair: each codimension-one coface cycle contributes the
    Schreier multigraph edge rules for its color."""
    if x.ordering is None:
        raise ValueError("need an ordered complex")
    d, k = x.params.d, x.params.k
    tops = sorted(c.mid for c in x.multicells(d))
    pos = {m: t for t, m in enumerate(tops)}
    g = Multigraph(len(tops))
    for i in range(d + 1):
        colors = tuple(c for c in range(d + 1) if c != i)
        for cell in x.cells.get(colors, []):
            cyc = [pos[m] for m in x.ordering[cell.mid]]
            _cycle_edges(g, cyc, i, k)
    g.sort_edges()
    return g


def line_graph(q: QuotientObject) -> Multigraph:
    """Line graph of the quotient, vertex-labeled by points; equals the
    Schreier multigraph of the source rep."""
    return complex_line_graph(q.complex)


def complex_is_simplicial(x: MComplex) -> bool:
    """True iff every multiplicity is one, i.e. multicells of equal color
    set never share their vertex set."""
    for colors, lst in x.cells.items():
        if len(colors) < 2:
            continue
        seen = {cell.vertices for cell in lst}
        if len(seen) != len(lst):
            return False
    return True


def is_simplicial(q: QuotientObject) -> bool:
    return complex_is_simplicial(q.complex)


def intersection_property(rep: PermRep) -> bool:
    """For every color set J and point p, the intersection over i in J of
    the orbits of p under the generators other than i must equal the orbit
    of p under the generators outside J."""
    diag = validate(rep)
    if not diag.ok:
        raise ValueError("invalid rep: " + "; ".join(diag.messages))
    d, n = rep.params.d, rep.n
    parts: dict[tuple[int, ...], OrbitPartition] = {}
    for mask in range(1, 1 << (d + 1)):
        colors = tuple(c for c in range(d + 1) if mask >> c & 1)
        parts[colors] = orbits(rep, frozenset(colors))
    members = {colors: part.members() for colors, part in parts.items()}
    for colors, part in parts.items():
        if len(colors) < 2:
            continue
        for p in range(n):
            meet = set(members[(colors[0],)][parts[(colors[0],)].class_ids[p]])
            for i in colors[1:]:
                meet &= set(members[(i,)][parts[(i,)].class_ids[p]])
            own = set(members[colors][part.class_ids[p]])
            if meet != own:
                return False
    return True


def is_upper_regular(rep: PermRep) -> bool:
    """Degree-k regularity: every cycle of every generator image has length
    exactly k (no generator power stabilizes a point conjugate-wise)."""
    from .permrep import perm_cycles

    k = rep.params.k
    return all(
        all(len(c) == k for c in perm_cycles(beta)) for beta in rep.betas
    )


def complex_is_upper_regular(x: MComplex) -> bool:
    """Degree-k regularity read off the complex: every codimension-one
    multicell has exactly k cofaces."""
    return all(x.degree(c.mid) == x.params.k for c in x.multicells(x.d - 1))


def complex_has_complete_skeleton(x: MComplex) -> bool:
    """Every choice of one vertex per color in a proper color set spans at
    least one cell of the base complex (singletons always span)."""
    d = x.params.d
    counts: dict[int, int] = {}
    for c in x.vertex_colors:
        counts[c] = counts.get(c, 0) + 1
    for colors, lst in x.cells.items():
        if len(colors) < 2 or len(colors) == d + 1:
            continue
        want = 1
        for c in colors:
            want *= counts[c]
        if len({cell.vertices for cell in lst}) != want:
            return False
    return True


def has_complete_skeleton(q: QuotientObject) -> bool:
    return complex_has_complete_skeleton(q.complex)


def quotient_map(ball: Ball, q: QuotientObject) -> dict[MId, MId]:
    """The unique morphism from the ball into the quotient: the cell of the
    coset of g maps to the orbit class of the point reached by g."""
    if ball.complex.params != q.rep.params:
        raise ValueError("ball and quotient must share (d, k)")
    f: dict[MId, MId] = {}
    for top, w in ball.cell_words.items():
        pt = rep_evaluate(w, q.rep.root, q.rep)
        f[top] = q.point_cell[pt]
        dm_ball = ball.complex.down_map(top)
        dm_quot = q.complex.down_map(q.point_cell[pt])
        for colors, sub in dm_ball.items():
            img = dm_quot[colors]
            prev = f.get(sub)
            if prev is not None and prev != img:
                raise ValueError(f"quotient map ill-defined at {sub}")
            f[sub] = img
    return f


def quotient_map_surjective(f: dict[MId, MId], q: QuotientObject) -> bool:
    return is_surjective(f, q.complex)


def associated_subgroup_rep(x: MComplex, point_order: list[MId] | None = None) -> PermRep:
    """The left action of the generators on the top multicells, rooted at
    the complex root: generator i advances one step along the coface cycle
    of a top cell's facet missing color i.  For quotient objects this
    recovers the source rep up to a root-fixing relabeling."""
    if x.ordering is None or x.root is None:
        raise ValueError("need an ordered rooted complex")
    tops = point_order if point_order is not None else [c.mid for c in x.multicells(x.d)]
    pos = {m: t for t, m in enumerate(tops)}
    betas = []
    for i in range(x.d + 1):
        images = []
        for m in tops:
            b = x.cell(m).faces[i]
            cyc = x.ordering[b]
            images.append(pos[cyc[(cyc.index(m) + 1) % len(cyc)]])
        betas.append(tuple(images))
    return PermRep(x.params, len(tops), tuple(betas), pos[x.root])


def associated_subgroup_round_trip(q: QuotientObject) -> PermRep:
    return associated_subgroup_rep(q.complex, q.point_cell)


def coset_family(q: QuotientObject) -> dict[MId, frozenset[int]]:
    """The point set of each vertex's orbit class, indexed by vertex cell;
    its nerve is the base complex."""
    fam: dict[MId, frozenset[int]] = {}
    for c in range(q.rep.params.d + 1):
        part = q.partitions[(c,)]
        for orbit_id, pts in enumerate(part.members()):
            vid = q.complex.cells[(c,)][orbit_id].vertices[0]
            fam[q.complex.vertex_cell(vid)] = frozenset(pts)
    return fam


def nerve_matches_base(q: QuotientObject) -> bool:
    fam = {vid: pts for vid, pts in coset_family(q).items()}
    fam_by_vertex = {q.complex._cell_vertex[cid]: pts for cid, pts in fam.items()}
    return nerve(fam_by_vertex) == base_complex(q.complex)


def analyze(q: QuotientObject) -> dict:
    """Structural report used by the CLI and the acceptance suite."""
    from .complexes import is_link_connected, is_lower_path_connected

    x = q.complex
    counts = {}
    for colors, lst in sorted(x.cells.items(), key=lambda kv: (len(kv[0]), kv[0])):
        counts.setdefault(len(colors) - 1, 0)
        counts[len(colors) - 1] += len(lst)
    degrees: dict[int, int] = {}
    for cell in x.multicells(x.d - 1):
        deg = x.degree(cell.mid)
        degrees[deg] = degrees.get(deg, 0) + 1
    return {
        "d": x.params.d,
        "k": x.params.k,
        "points": q.rep.n,
        "cells_per_dim": counts,
        "simplicial": is_simplicial(q),
        "upper_regular": is_upper_regular(q.rep),
        "link_connected": is_link_connected(x),
        "lower_path_connected": is_lower_path_connected(x, x.d),
        "skeleton_complete": has_complete_skeleton(q),
        "intersection_property": intersection_property(q.rep),
        "degree_histogram": degrees,
    }
