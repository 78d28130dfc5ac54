"""Colored, ordered, rooted multicomplexes and their structural predicates.

A multicomplex is a simplicial complex plus a multiplicity per cell and a
gluing map choosing which copy of each facet bounds each copy of a cell.
Multicells are keyed by (color set, dense index).  Vertices always have
multiplicity one, so gluing to dimension zero is forced and derivable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .permrep import UnionFind
from .words import Params

MId = tuple[tuple[int, ...], int]  # (sorted color tuple, index dense per color set)


@dataclass
class Multicell:
    colors: tuple[int, ...]  # strictly increasing
    index: int
    vertices: tuple[int, ...]  # vertex ids, aligned with colors
    faces: dict[int, MId]  # dropped color -> glued facet copy; {} in dim 0

    @property
    def mid(self) -> MId:
        return (self.colors, self.index)

    @property
    def dim(self) -> int:
        return len(self.colors) - 1

    def vertex_of_color(self, c: int) -> int:
        return self.vertices[self.colors.index(c)]


@dataclass
class Diagnostics:
    ok: bool
    messages: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class MComplex:
    """A d-multicomplex with vertex coloring, optional k-ordering and root.

    `cells` holds the multicells of dimension >= 1; dimension-0 multicells
    are synthesized from `vertex_colors` (index = rank among same-color
    vertices).  `ordering` maps each (d-1)-multicell to the cycle its
    top-dimensional cofaces form under the chosen generator; `boundary`
    flags (d-1)-multicells with incomplete cycles (radius cutoffs).
    """

    def __init__(
        self,
        params: Params,
        vertex_colors: list[int],
        cells: dict[tuple[int, ...], list[Multicell]],
        ordering: dict[MId, tuple[MId, ...]] | None = None,
        root: MId | None = None,
        boundary: frozenset[MId] = frozenset(),
    ):
        self.params = params
        self.vertex_colors = list(vertex_colors)
        self.cells = {tuple(k): list(v) for k, v in cells.items() if len(k) >= 2}
        self._install_zero_cells()
        self.ordering = dict(ordering) if ordering is not None else None
        self.root = root
        self.boundary = frozenset(boundary)
        self._delta: dict[MId, list[tuple[MId, int]]] | None = None
        self._down: dict[MId, dict[tuple[int, ...], MId]] = {}

    def _install_zero_cells(self) -> None:
        per_color: dict[int, int] = {}
        self._vertex_cell: list[MId] = []
        zero: dict[tuple[int, ...], list[Multicell]] = {}
        for v, c in enumerate(self.vertex_colors):
            idx = per_color.get(c, 0)
            per_color[c] = idx + 1
            cell = Multicell((c,), idx, (v,), {})
            zero.setdefault((c,), []).append(cell)
            self._vertex_cell.append(cell.mid)
        self.cells.update(zero)
        self._cell_vertex = {mid: v for v, mid in enumerate(self._vertex_cell)}

    # -- basic access --------------------------------------------------------

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_colors)

    def cell(self, mid: MId) -> Multicell:
        colors, index = mid
        try:
            return self.cells[tuple(colors)][index]
        except (KeyError, IndexError):
            raise KeyError(f"no multicell {mid}") from None

    def has_cell(self, mid: MId) -> bool:
        colors, index = mid
        lst = self.cells.get(tuple(colors))
        return lst is not None and 0 <= index < len(lst)

    def multicells(self, dim: int | None = None) -> Iterator[Multicell]:
        for colors in sorted(self.cells, key=lambda c: (len(c), c)):
            if dim is not None and len(colors) != dim + 1:
                continue
            yield from self.cells[colors]

    def vertex_cell(self, v: int) -> MId:
        return self._vertex_cell[v]

    def top_cells(self) -> list[Multicell]:
        return list(self.multicells(self.d))

    def all_colors(self) -> tuple[int, ...]:
        return tuple(range(self.d + 1))

    # -- incidence structure ---------------------------------------------------

    def delta(self, mid: MId) -> list[tuple[MId, int]]:
        """Cofaces one dimension up: pairs (coface id, dropped color)."""
        if self._delta is None:
            idx: dict[MId, list[tuple[MId, int]]] = {}
            for cell in self.multicells():
                for l, fid in cell.faces.items():
                    idx.setdefault(fid, []).append((cell.mid, l))
            for cell in self.multicells(0):
                idx.setdefault(cell.mid, idx.get(cell.mid, []))
            self._delta = idx
        return self._delta.get(mid, [])

    def degree(self, mid: MId) -> int:
        return len(self.delta(mid))

    def down_map(self, mid: MId) -> dict[tuple[int, ...], MId]:
        """The containment bijection under `mid`: color subset -> multicell.

        Raises ValueError when the gluing is inconsistent (two chains reach
        different copies of the same face).
        """
        cached = self._down.get(mid)
        if cached is not None:
            return cached
        out: dict[tuple[int, ...], MId] = {self.cell(mid).colors: mid}
        frontier = [mid]
        while frontier:
            nxt = []
            for cur in frontier:
                cur_cell = self.cell(cur)
                if cur_cell.dim == 0:
                    continue
                for l in cur_cell.colors:
                    fid = cur_cell.faces[l]
                    sub = tuple(c for c in cur_cell.colors if c != l)
                    if not self.has_cell(fid):
                        raise ValueError(f"dangling gluing reference {fid} from {cur}")
                    prev = out.get(sub)
                    if prev is None:
                        out[sub] = fid
                        nxt.append(fid)
                    elif prev != fid:
                        raise ValueError(
                            f"inconsistent gluing under {mid}: face of colors {sub} "
                            f"reached as both {prev} and {fid}"
                        )
            frontier = nxt
        self._down[mid] = out
        return out

    def sub_multicell(self, mid: MId, colors: Iterable[int]) -> MId:
        """The unique multicell of the given color set contained in `mid`."""
        key = tuple(sorted(colors))
        try:
            return self.down_map(mid)[key]
        except KeyError:
            raise KeyError(f"{mid} has no face with colors {key}") from None

    def contains(self, big: MId, small: MId) -> bool:
        """small <= big in the containment order."""
        if small == big:
            return True
        key = tuple(small[0])
        if not set(key) <= set(big[0]):
            return False
        return self.down_map(big).get(key) == small

    def up_set(self, mid: MId) -> list[MId]:
        """All multicells strictly containing `mid`, by BFS through cofaces."""
        seen: set[MId] = set()
        frontier = [mid]
        while frontier:
            nxt = []
            for cur in frontier:
                for cof, _ in self.delta(cur):
                    if cof not in seen and self.contains(cof, mid):
                        seen.add(cof)
                        nxt.append(cof)
            frontier = nxt
        return sorted(seen, key=lambda m: (len(m[0]), m[0], m[1]))

    def invalidate_caches(self) -> None:
        self._delta = None
        self._down = {}


# -- structural audits --------------------------------------------------------

def check_consistency(x: MComplex) -> Diagnostics:
    """Every multicell must induce a well-defined bijection between the color
    subsets of its cell and the multicells it contains; equivalently, common
    faces of same-dimension faces glue identically."""
    messages = []
    for cell in x.multicells():
        try:
            x.down_map(cell.mid)
        except ValueError as exc:
            messages.append(str(exc))
    return Diagnostics(not messages, messages)


def validate_structure(x: MComplex) -> Diagnostics:
    """Well-formedness: colors sorted, vertex alignment, facet color/vertex
    coherence, dense indices, purity, ordering validity, degree bound."""
    msgs = []
    d, k = x.params.d, x.params.k
    for v, c in enumerate(x.vertex_colors):
        if not 0 <= c <= d:
            msgs.append(f"vertex {v} has color {c} out of range")
    for colors, lst in x.cells.items():
        for pos, cell in enumerate(lst):
            if cell.index != pos:
                msgs.append(f"{cell.mid}: index not dense/positional")
            if tuple(sorted(set(cell.colors))) != cell.colors:
                msgs.append(f"{cell.mid}: colors not sorted/distinct")
            if len(cell.vertices) != len(cell.colors):
                msgs.append(f"{cell.mid}: vertex/color arity mismatch")
                continue
            for c, v in zip(cell.colors, cell.vertices):
                if not (0 <= v < x.n_vertices and x.vertex_colors[v] == c):
                    msgs.append(f"{cell.mid}: vertex {v} does not carry color {c}")
            if cell.dim >= 1:
                if set(cell.faces) != set(cell.colors):
                    msgs.append(f"{cell.mid}: facet keys != colors")
                    continue
                for l, fid in cell.faces.items():
                    if not x.has_cell(fid):
                        msgs.append(f"{cell.mid}: dangling facet {fid}")
                        continue
                    fcell = x.cell(fid)
                    want_colors = tuple(c for c in cell.colors if c != l)
                    want_vertices = tuple(
                        v for c, v in zip(cell.colors, cell.vertices) if c != l
                    )
                    if fcell.colors != want_colors or fcell.vertices != want_vertices:
                        msgs.append(f"{cell.mid}: facet {fid} has wrong colors/vertices")
    cons = check_consistency(x)
    msgs.extend(cons.messages)
    if not msgs:
        for cell in x.multicells():
            if cell.dim < d and not any(
                len(top[0]) == d + 1 for top in x.up_set(cell.mid)
            ):
                msgs.append(f"{cell.mid}: not contained in any top multicell (impure)")
    for cell in x.multicells(d - 1):
        if x.degree(cell.mid) > k:
            msgs.append(f"{cell.mid}: degree {x.degree(cell.mid)} exceeds k={k}")
    if x.ordering is not None:
        for cell in x.multicells(d - 1):
            cyc = x.ordering.get(cell.mid)
            if cyc is None:
                msgs.append(f"{cell.mid}: no ordering cycle")
                continue
            cofaces = {m for m, _ in x.delta(cell.mid)}
            if sorted(cyc) != sorted(cofaces) or len(cyc) != len(cofaces):
                msgs.append(f"{cell.mid}: cycle does not visit each coface once")
            if cell.mid not in x.boundary and (len(cyc) == 0 or k % len(cyc) != 0):
                msgs.append(f"{cell.mid}: cycle length {len(cyc)} does not divide k")
    if x.root is not None and not x.has_cell(x.root):
        msgs.append(f"root {x.root} missing")
    return Diagnostics(not msgs, msgs)


def is_lower_path_connected(x: MComplex, j: int) -> bool:
    """True iff any two j-multicells are joined by a chain of j-multicells
    with consecutive ones sharing a (j-1)-multicell via their gluing."""
    if not 1 <= j <= x.d:
        raise ValueError(f"j must be in 1..{x.d}")
    cells = [c.mid for c in x.multicells(j)]
    if len(cells) <= 1:
        return True
    pos = {m: t for t, m in enumerate(cells)}
    uf = UnionFind(len(cells))
    for face in x.multicells(j - 1):
        incident = [m for m, _ in x.delta(face.mid)]
        for other in incident[1:]:
            uf.union(pos[incident[0]], pos[other])
    return len({uf.find(t) for t in range(len(cells))}) == 1


def link_components(x: MComplex, mid: MId) -> list[list[MId]]:
    """Connected components of the link's 1-skeleton, each given as the list
    of cofaces of `mid` one dimension up (the link's vertices)."""
    verts = sorted(m for m, _ in x.delta(mid))
    if not verts:
        return []
    pos = {m: t for t, m in enumerate(verts)}
    uf = UnionFind(len(verts))
    own_colors = set(mid[0])
    for two_up in x.up_set(mid):
        if len(two_up[0]) != len(mid[0]) + 2:
            continue
        dm = x.down_map(two_up)
        ends = []
        for l in two_up[0]:
            if l in own_colors:
                continue
            sub = tuple(sorted(own_colors | {l}))
            ends.append(dm[sub])
        uf.union(pos[ends[0]], pos[ends[1]])
    groups: dict[int, list[MId]] = {}
    for m, t in pos.items():
        groups.setdefault(uf.find(t), []).append(m)
    return [sorted(g) for _, g in sorted(groups.items())]


def is_link_connected(x: MComplex) -> bool:
    """True iff every multicell of dimension 0..d-2 has a connected link.

    The empty multicell is excluded, so a disjoint union of link-connected
    pieces passes; global connectivity is `is_lower_path_connected(x, d)`.
    """
    for cell in x.multicells():
        if 0 <= cell.dim <= x.d - 2:
            if len(link_components(x, cell.mid)) > 1:
                return False
    return True


# -- links ---------------------------------------------------------------------

EMPTY_CELL: MId = ((), 0)  # sentinel for the unique (-1)-multicell


def link_with_map(x: MComplex, mid: MId) -> tuple[MComplex, dict[MId, MId]]:
    """The link of a multicell, plus the map link-multicell -> original.

    Link vertices are the cofaces of `mid` one dimension up (multiplicity of
    the link's 0-cells is removed by that re-indexing); colors are re-mapped
    onto 0..d-|colors(mid)| in the order of the surviving original colors.
    The link of the empty multicell is the complex itself.
    """
    if mid == EMPTY_CELL:
        clone = from_json_dict(to_json_dict(x))
        return clone, {c.mid: c.mid for c in clone.multicells()}
    base = x.cell(mid)
    own = set(base.colors)
    rest = [c for c in range(x.d + 1) if c not in own]
    color_map = {c: t for t, c in enumerate(rest)}
    d_link = x.d - len(base.colors)
    if d_link < 1:
        raise ValueError(
            "links are built for multicells of dimension <= d-2; "
            "the cofaces of a (d-1)-multicell are available via delta()"
        )

    members = x.up_set(mid)
    by_extra: dict[tuple[int, ...], list[MId]] = {}
    for m in members:
        extra = tuple(sorted(set(m[0]) - own))
        by_extra.setdefault(extra, []).append(m)
    for lst in by_extra.values():
        lst.sort()

    # link vertices = cofaces one dimension up, grouped by remapped color
    vert_orig: list[MId] = []
    for c in rest:
        vert_orig.extend(by_extra.get((c,), []))
    vertex_colors = [color_map[next(iter(set(m[0]) - own))] for m in vert_orig]
    orig_to_vid = {m: v for v, m in enumerate(vert_orig)}

    link_id: dict[MId, MId] = {}
    back: dict[MId, MId] = {}
    for v, m in enumerate(vert_orig):
        lid = (
            (vertex_colors[v],),
            sum(1 for u in range(v) if vertex_colors[u] == vertex_colors[v]),
        )
        link_id[m] = lid
        back[lid] = m

    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for extra, lst in sorted(by_extra.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if len(extra) < 2:
            continue
        new_colors = tuple(color_map[c] for c in extra)
        cells[new_colors] = []
        for m in lst:
            dm = x.down_map(m)
            vids = tuple(orig_to_vid[dm[tuple(sorted(own | {c}))]] for c in extra)
            faces: dict[int, MId] = {}
            for c in extra:
                sub = tuple(sorted((set(extra) - {c}) | own))
                faces[color_map[c]] = link_id[dm[sub]]
            cell = Multicell(new_colors, len(cells[new_colors]), vids, faces)
            cells[new_colors].append(cell)
            link_id[m] = cell.mid
            back[cell.mid] = m

    ordering = None
    if x.ordering is not None:
        ordering = {}
        for m in members:
            if len(m[0]) == x.d and m in x.ordering:
                ordering[link_id[m]] = tuple(link_id[t] for t in x.ordering[m])
    boundary = frozenset(
        link_id[m] for m in members if m in x.boundary and len(m[0]) == x.d
    )
    root = None
    if x.root is not None and x.contains(x.root, mid):
        root = link_id.get(x.root)
    lk = MComplex(Params(d_link, x.params.k), vertex_colors, cells, ordering, root, boundary)
    return lk, back


def link(x: MComplex, mid: MId) -> MComplex:
    return link_with_map(x, mid)[0]


# -- nerve ----------------------------------------------------------------------

def nerve(family: dict[object, frozenset] | list[Iterable]) -> frozenset:
    """Nerve complex of a family of nonempty sets: a subset of the index set
    is a face iff the member sets intersect.  Returned as a frozenset of
    nonempty frozensets (vertices included)."""
    if isinstance(family, dict):
        items = list(family.items())
    else:
        items = list(enumerate(family))
    sets = {key: frozenset(val) for key, val in items}
    for key, s in sets.items():
        if not s:
            raise ValueError(f"member {key!r} is empty")
    carriers: dict[object, set] = {}
    for key, s in sets.items():
        for pt in s:
            carriers.setdefault(pt, set()).add(key)
    faces: set[frozenset] = set()
    for keys in carriers.values():
        keys = sorted(keys, key=repr)
        m = len(keys)
        for mask in range(1, 1 << m):
            faces.add(frozenset(keys[t] for t in range(m) if mask >> t & 1))
    return frozenset(faces)


def base_complex(x: MComplex) -> frozenset:
    """Underlying simplicial complex: the set of vertex sets of multicells."""
    return frozenset(frozenset(c.vertices) for c in x.multicells())


def multiplicity(x: MComplex, vertex_set: Iterable[int]) -> int:
    vs = tuple(sorted(vertex_set))
    colors = tuple(sorted(x.vertex_colors[v] for v in vs))
    count = 0
    for cell in x.cells.get(colors, []):
        if tuple(sorted(cell.vertices)) == vs:
            count += 1
    return count


# -- morphisms -------------------------------------------------------------------

def check_morphism(
    f: dict[MId, MId],
    x: MComplex,
    y: MComplex,
    require_root: bool = True,
) -> Diagnostics:
    """Verify f is a simplicial multimap preserving coloring, gluing, the
    root and the ordering.  Ordering equivariance is skipped at multicells
    flagged as boundary in the domain (radius-truncated complexes)."""
    msgs = []
    for cell in x.multicells():
        if cell.mid not in f:
            msgs.append(f"map not defined on {cell.mid}")
    if msgs:
        return Diagnostics(False, msgs)
    vmap: dict[int, int] = {}
    for v in range(x.n_vertices):
        img = f[x.vertex_cell(v)]
        if not y.has_cell(img) or len(img[0]) != 1:
            msgs.append(f"vertex {v} maps to non-vertex {img}")
            continue
        w = y._cell_vertex[img]
        vmap[v] = w
        if y.vertex_colors[w] != x.vertex_colors[v]:
            msgs.append(f"vertex {v}: color {x.vertex_colors[v]} not preserved")
    if msgs:
        return Diagnostics(False, msgs)
    for cell in x.multicells():
        img = f[cell.mid]
        if not y.has_cell(img):
            msgs.append(f"{cell.mid}: image {img} missing in codomain")
            continue
        icell = y.cell(img)
        if icell.colors != cell.colors:
            msgs.append(f"{cell.mid}: image colors {icell.colors} != {cell.colors}")
            continue
        if icell.vertices != tuple(vmap[v] for v in cell.vertices):
            msgs.append(f"{cell.mid}: image is not induced by the vertex map")
        for l, fid in cell.faces.items():
            if f[fid] != icell.faces[l]:
                msgs.append(f"{cell.mid}: gluing not preserved at dropped color {l}")
    if require_root:
        if x.root is None or y.root is None:
            msgs.append("root missing on one side")
        elif f[x.root] != y.root:
            msgs.append(f"root {x.root} maps to {f[x.root]} != {y.root}")
    if x.ordering is not None and y.ordering is not None:
        for cell in x.multicells(x.d - 1):
            if cell.mid in x.boundary:
                continue
            cyc = x.ordering.get(cell.mid)
            if cyc is None:
                msgs.append(f"{cell.mid}: domain has no ordering cycle")
                continue
            img_cyc = y.ordering.get(f[cell.mid])
            if img_cyc is None:
                msgs.append(f"{cell.mid}: image has no ordering cycle")
                continue
            step = {img_cyc[t]: img_cyc[(t + 1) % len(img_cyc)] for t in range(len(img_cyc))}
            for t in range(len(cyc)):
                a, nxt = cyc[t], cyc[(t + 1) % len(cyc)]
                if step.get(f[a]) != f[nxt]:
                    msgs.append(f"{cell.mid}: ordering not equivariant at {a}")
                    break
    return Diagnostics(not msgs, msgs)


def is_surjective(f: dict[MId, MId], y: MComplex) -> bool:
    image = set(f.values())
    return all(cell.mid in image for cell in y.multicells())


def find_isomorphism(x: MComplex, y: MComplex) -> dict[MId, MId] | None:
    """Root-to-root BFS label propagation.

    Objects of the category are rigid: a morphism is forced by the root
    image and ordering equivariance, so propagating labels and checking the
    result is a complete isomorphism test for rooted ordered complexes.
    """
    if x.params != y.params or x.root is None or y.root is None:
        return None
    if x.ordering is None or y.ordering is None:
        return None
    f: dict[MId, MId] = {x.root: y.root}
    queue = [x.root]
    while queue:
        a = queue.pop(0)
        a_img = f[a]
        acell, icell = x.cell(a), y.cell(a_img)
        for l in acell.colors:
            b, b_img = acell.faces[l], icell.faces[l]
            prev = f.get(b)
            if prev is None:
                f[b] = b_img
            elif prev != b_img:
                return None
            cyc, img_cyc = x.ordering[b], y.ordering[b_img]
            if len(cyc) != len(img_cyc):
                return None
            ta, ti = cyc.index(a), img_cyc.index(a_img)
            for off in range(1, len(cyc)):
                nxt, nxt_img = cyc[(ta + off) % len(cyc)], img_cyc[(ti + off) % len(img_cyc)]
                prev = f.get(nxt)
                if prev is None:
                    f[nxt] = nxt_img
                    queue.append(nxt)
                elif prev != nxt_img:
                    return None
    tops_x = [c.mid for c in x.multicells(x.d)]
    if len(f) < len(tops_x) or any(m not in f for m in tops_x):
        return None  # domain not reachable from the root
    # lower multicells are forced color-wise under any containing top cell
    for cell in x.multicells():
        if cell.dim == x.d:
            continue
        images = set()
        for top in tops_x:
            if x.contains(top, cell.mid):
                images.add(y.sub_multicell(f[top], cell.colors))
        if len(images) != 1:
            return None
        f[cell.mid] = images.pop()
    counts_x = {k: len(v) for k, v in x.cells.items()}
    counts_y = {k: len(v) for k, v in y.cells.items()}
    if counts_x != counts_y or len(set(f.values())) != len(f):
        return None
    ok = check_morphism(f, x, y)
    return f if ok else None


def is_isomorphic(x: MComplex, y: MComplex) -> bool:
    return find_isomorphism(x, y) is not None


# -- constructions -----------------------------------------------------------------

def from_simplicial(
    params: Params,
    vertex_colors: list[int],
    top_vertex_sets: list[Iterable[int]],
    root_top: int = 0,
) -> MComplex:
    """Pure multicomplex with multiplicity one from the vertex sets of its
    top cells.  The ordering is derived arbitrarily (cofaces in id order)
    and only valid when each (d-1)-cell degree divides k."""
    d = params.d

    def key_of(vs: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        pairs = sorted((vertex_colors[v], v) for v in vs)
        colors = tuple(c for c, _ in pairs)
        verts = tuple(v for _, v in pairs)
        if len(set(colors)) != len(colors):
            raise ValueError(f"cell {vs} repeats a color")
        return colors, verts

    registry: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    index_of: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}

    def register(vs: tuple[int, ...]) -> MId:
        colors, verts = key_of(vs)
        key = (colors, verts)
        if key not in index_of:
            index_of[key] = len(registry.setdefault(colors, []))
            registry[colors].append(verts)
        return (colors, index_of[key])

    tops = [tuple(sorted(set(t))) for t in top_vertex_sets]
    for t in tops:
        if len(t) != d + 1:
            raise ValueError(f"top cell {t} must have {d + 1} vertices")
        for mask in range(1, 1 << (d + 1)):
            vs = tuple(t[j] for j in range(d + 1) if mask >> j & 1)
            register(vs)

    # 0-cell indices follow the vertex-id rank within each color
    zero_id: dict[int, MId] = {}
    per_color_rank: dict[int, int] = {}
    for v, c in enumerate(vertex_colors):
        zero_id[v] = ((c,), per_color_rank.get(c, 0))
        per_color_rank[c] = per_color_rank.get(c, 0) + 1

    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for colors in registry:
        if len(colors) < 2:
            continue
        cells[colors] = []
        for idx, verts in enumerate(registry[colors]):
            faces: dict[int, MId] = {}
            for pos, l in enumerate(colors):
                sub = tuple(v for t, v in enumerate(verts) if t != pos)
                sub_colors = tuple(c for c in colors if c != l)
                if len(sub_colors) == 1:
                    faces[l] = zero_id[sub[0]]
                else:
                    faces[l] = (sub_colors, index_of[(sub_colors, sub)])
            cells[colors].append(Multicell(colors, idx, verts, faces))

    x = MComplex(params, vertex_colors, cells)
    ordering: dict[MId, tuple[MId, ...]] = {}
    for cell in x.multicells(d - 1):
        ordering[cell.mid] = tuple(sorted(m for m, _ in x.delta(cell.mid)))
    x.ordering = ordering
    colors_top, verts_top = key_of(tops[root_top])
    x.root = (colors_top, index_of[(colors_top, verts_top)])
    return x


def single_simplex(params: Params) -> MComplex:
    d = params.d
    return from_simplicial(params, list(range(d + 1)), [tuple(range(d + 1))])


def merge_vertices(x: MComplex, v_keep: int, v_gone: int) -> MComplex:
    """Identify two same-color vertices (the classical way to leave the
    link-connected world without changing the line graph).  d >= 2 only,
    since in dimension one the ordering lives on vertices."""
    if x.d < 2:
        raise ValueError("vertex identification requires d >= 2")
    if x.vertex_colors[v_keep] != x.vertex_colors[v_gone] or v_keep == v_gone:
        raise ValueError("need two distinct vertices of the same color")
    relabel = {}
    new_colors = []
    for v, c in enumerate(x.vertex_colors):
        if v == v_gone:
            continue
        relabel[v] = len(new_colors)
        new_colors.append(c)
    relabel[v_gone] = relabel[v_keep]

    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for colors in x.cells:
        if len(colors) < 2:
            continue
        cells[colors] = []
        for cell in x.cells[colors]:
            verts = tuple(relabel[v] for v in cell.vertices)
            faces = {}
            for l, fid in cell.faces.items():
                if len(fid[0]) == 1:
                    kept = next(v for c, v in zip(cell.colors, cell.vertices) if c != l)
                    faces[l] = None  # fixed after vertex table exists
                else:
                    faces[l] = fid
            cells[colors].append(Multicell(cell.colors, cell.index, verts, faces))
    out = MComplex(x.params, new_colors, cells, dict(x.ordering or {}), x.root, x.boundary)
    for colors, lst in out.cells.items():
        if len(colors) != 2:
            continue
        for cell in lst:
            for pos, l in enumerate(cell.colors):
                keep_pos = 1 - pos
                cell.faces[l] = out.vertex_cell(cell.vertices[keep_pos])
    out.invalidate_caches()
    return out


# -- serialization --------------------------------------------------------------

def _mid_json(mid: MId) -> list:
    return [list(mid[0]), mid[1]]


def _mid_from_json(obj) -> MId:
    return (tuple(obj[0]), obj[1])


def to_json_dict(x: MComplex) -> dict:
    cells = []
    for cell in x.multicells():
        if cell.dim == 0:
            continue
        cells.append(
            {
                "colors": list(cell.colors),
                "index": cell.index,
                "vertices": list(cell.vertices),
                "faces": {str(l): _mid_json(fid) for l, fid in sorted(cell.faces.items())},
            }
        )
    doc = {
        "format": "mcomplex/1",
        "params": {"d": x.params.d, "k": x.params.k},
        "vertex_colors": list(x.vertex_colors),
        "cells": cells,
        "ordering": None
        if x.ordering is None
        else [
            {"cell": _mid_json(mid), "cycle": [_mid_json(m) for m in cyc]}
            for mid, cyc in sorted(x.ordering.items())
        ],
        "root": None if x.root is None else _mid_json(x.root),
        "boundary": [_mid_json(m) for m in sorted(x.boundary)],
    }
    return doc


def to_json(x: MComplex) -> str:
    return json.dumps(to_json_dict(x), indent=1) + "\n"


def from_json_dict(doc: dict) -> MComplex:
    if doc.get("format") != "mcomplex/1":
        raise ValueError("not an mcomplex/1 document")
    params = Params(doc["params"]["d"], doc["params"]["k"])
    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for rec in doc["cells"]:
        colors = tuple(rec["colors"])
        cell = Multicell(
            colors,
            rec["index"],
            tuple(rec["vertices"]),
            {int(l): _mid_from_json(fid) for l, fid in rec["faces"].items()},
        )
        cells.setdefault(colors, []).append(cell)
    for lst in cells.values():
        lst.sort(key=lambda c: c.index)
    ordering = None
    if doc.get("ordering") is not None:
        ordering = {
            _mid_from_json(rec["cell"]): tuple(_mid_from_json(m) for m in rec["cycle"])
            for rec in doc["ordering"]
        }
    root = None if doc.get("root") is None else _mid_from_json(doc["root"])
    boundary = frozenset(_mid_from_json(m) for m in doc.get("boundary", []))
    return MComplex(params, list(doc["vertex_colors"]), cells, ordering, root, boundary)


def from_json(text: str) -> MComplex:
    return from_json_dict(json.loads(text))
