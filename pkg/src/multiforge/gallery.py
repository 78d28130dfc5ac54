"""Constructors for the example families: the exponent-sum kernel quotients,
Coxeter chamber complexes, and flag complexes of finite vector spaces."""

from __future__ import annotations

from itertools import combinations, product

from .complexes import MComplex, MId, Multicell, find_isomorphism, from_simplicial
from .permrep import PermRep
from .quotient import build_quotient, is_simplicial
from .words import Params

Permutation = tuple[int, ...]


def m_subgroup_rep(p: Params) -> PermRep:
    """The index-k^(d+1) normal subgroup of words with all exponent sums
    zero: points are (Z/k)^(d+1), generator i adds one to coordinate i,
    rooted at the zero vector.  Its quotient is the complete (d+1)-partite
    complex with parts of size k."""
    d, k = p.d, p.k
    n = k ** (d + 1)

    def encode(coords: tuple[int, ...]) -> int:
        val = 0
        for c in coords:
            val = val * k + c
        return val

    points = list(product(range(k), repeat=d + 1))
    betas = []
    for i in range(d + 1):
        images = []
        for coords in points:
            bumped = list(coords)
            bumped[i] = (bumped[i] + 1) % k
            images.append(encode(tuple(bumped)))
        betas.append(tuple(images))
    assert len(points) == n
    return PermRep(p, n, tuple(betas), 0)


# -- Coxeter complexes -------------------------------------------------------------


class GroupSizeCapExceeded(ValueError):
    pass


def _compose(a: Permutation, b: Permutation) -> Permutation:
    return tuple(a[b[t]] for t in range(len(a)))


def _closure(gens: list[Permutation], cap: int) -> list[Permutation]:
    identity = tuple(range(len(gens[0])))
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                sw = _compose(s, w)
                if sw not in seen:
                    seen.add(sw)
                    order.append(sw)
                    nxt.append(sw)
                    if len(seen) > cap:
                        raise GroupSizeCapExceeded(f"group exceeds cap {cap}")
        frontier = nxt
    return sorted(order)


def coxeter_kernel_rep(gens: list[Permutation], cap: int = 20000) -> tuple[PermRep, list[Permutation]]:
    """Regular action of the group generated by the involutions on itself by
    left multiplication; the root stabilizer is the kernel of the map from
    the rank-|S| free product of order-2 factors."""
    if not gens:
        raise ValueError("need at least one generator")
    m = len(gens[0])
    identity = tuple(range(m))
    for t, s in enumerate(gens):
        if len(s) != m or sorted(s) != list(range(m)):
            raise ValueError(f"generator {t} is not a permutation")
        if s == identity or _compose(s, s) != identity:
            raise ValueError(f"generator {t} is not an involution")
    elems = _closure(gens, cap)
    index = {w: t for t, w in enumerate(elems)}
    betas = tuple(
        tuple(index[_compose(s, w)] for w in elems) for s in gens
    )
    p = Params(len(gens) - 1, 2)
    return PermRep(p, len(elems), betas, index[identity]), elems


def coxeter_direct_complex(gens: list[Permutation], cap: int = 20000) -> MComplex:
    """Chamber complex built straight from coset enumeration: vertices are
    cosets of the maximal standard subgroups, a chamber per group element,
    and cells collect one coset per color."""
    _, elems = coxeter_kernel_rep(gens, cap)
    n_colors = len(gens)
    p = Params(n_colors - 1, 2)
    subgroup_cache: dict[tuple[int, ...], list[Permutation]] = {}

    def subgroup(hat: tuple[int, ...]) -> list[Permutation]:
        if hat not in subgroup_cache:
            if hat:
                subgroup_cache[hat] = _closure([gens[i] for i in hat], cap)
            else:
                subgroup_cache[hat] = [tuple(range(len(gens[0])))]
        return subgroup_cache[hat]

    def coset_key(w: Permutation, colors: tuple[int, ...]) -> Permutation:
        hat = tuple(i for i in range(n_colors) if i not in colors)
        return min(_compose(u, w) for u in subgroup(hat))

    registry: dict[tuple[int, ...], list[Permutation]] = {}
    index: dict[tuple[tuple[int, ...], Permutation], int] = {}
    for w in elems:
        for size in range(1, n_colors + 1):
            for colors in combinations(range(n_colors), size):
                key = coset_key(w, colors)
                if (colors, key) not in index:
                    index[(colors, key)] = len(registry.setdefault(colors, []))
                    registry[colors].append(key)

    vid: dict[tuple[int, Permutation], int] = {}
    vertex_colors: list[int] = []
    for c in range(n_colors):
        for key in registry[(c,)]:
            vid[(c, key)] = len(vertex_colors)
            vertex_colors.append(c)

    cells: dict[tuple[int, ...], list[Multicell]] = {}
    for colors in sorted(registry, key=lambda cs: (len(cs), cs)):
        if len(colors) < 2:
            continue
        cells[colors] = []
        for idx, key in enumerate(registry[colors]):
            verts = tuple(vid[(c, coset_key(key, (c,)))] for c in colors)
            faces: dict[int, MId] = {}
            for l in colors:
                sub = tuple(c for c in colors if c != l)
                faces[l] = (sub, index[(sub, coset_key(key, sub))])
            cells[colors].append(Multicell(colors, idx, verts, faces))

    x = MComplex(p, vertex_colors, cells)
    top = tuple(range(n_colors))
    ordering: dict[MId, tuple[MId, ...]] = {}
    for cell in x.multicells(p.d - 1):
        missing = next(c for c in range(n_colors) if c not in cell.colors)
        w0 = registry[cell.colors][cell.index]
        w1 = _compose(gens[missing], w0)
        cyc = [(top, index[(top, w0)]), (top, index[(top, w1)])]
        ordering[cell.mid] = tuple(cyc)
    x.ordering = ordering
    x.root = (top, index[(top, coset_key(tuple(range(len(gens[0]))), top))])
    return x


def coxeter_complex(gens: list[Permutation], cap: int = 20000) -> tuple[MComplex, PermRep]:
    """Both routes to the chamber complex: the kernel-subgroup quotient and
    the direct coset recipe.  They must agree and be simplicial."""
    rep, _ = coxeter_kernel_rep(gens, cap)
    q = build_quotient(rep)
    direct = coxeter_direct_complex(gens, cap)
    if not is_simplicial(q):
        raise ValueError("kernel quotient is not simplicial")
    if find_isomorphism(q.complex, direct) is None:
        raise ValueError("kernel quotient and direct chamber complex disagree")
    return direct, rep


# -- flag complexes ---------------------------------------------------------------


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def enumerate_subspaces(dim: int, q: int, r: int) -> list[tuple[tuple[int, ...], ...]]:
    """All r-dimensional subspaces of F_q^dim as reduced-row-echelon bases."""
    out = []
    for pivots in combinations(range(dim), r):
        free_positions = [
            (row, col)
            for row in range(r)
            for col in range(dim)
            if col > pivots[row] and col not in pivots
        ]
        for values in product(range(q), repeat=len(free_positions)):
            mat = [[0] * dim for _ in range(r)]
            for row, piv in enumerate(pivots):
                mat[row][piv] = 1
            for (row, col), val in zip(free_positions, values):
                mat[row][col] = val
            out.append(tuple(tuple(row) for row in mat))
    return out


def _reduce_vector(v: tuple[int, ...], basis: tuple[tuple[int, ...], ...], q: int) -> tuple[int, ...]:
    v = list(v)
    for row in basis:
        piv = next(t for t, x in enumerate(row) if x != 0)
        coef = v[piv]  # leading entries are 1 in RREF
        if coef:
            for t in range(len(v)):
                v[t] = (v[t] - coef * row[t]) % q
    return tuple(v)


def subspace_contains(big: tuple, small: tuple, q: int) -> bool:
    return all(not any(_reduce_vector(row, big, q)) for row in small)


def flag_complex(dim: int, q: int, ordered: bool = False) -> MComplex:
    """Flags of proper nontrivial subspaces of F_q^dim (q prime): a
    (dim-2)-dimensional simplicial complex colored by subspace dimension,
    upper regular of degree q+1.

    No natural ordering exists; `ordered=True` attaches an arbitrary one
    (each codimension-one flag has exactly q+1 completions, so any cyclic
    order is legal)."""
    if dim < 3:
        raise ValueError("dim must be >= 3")
    if not _is_prime(q):
        raise ValueError(f"q must be prime (extension fields not supported), got {q}")
    by_rank = {r: enumerate_subspaces(dim, q, r) for r in range(1, dim)}
    vertex_colors = []
    vid = {}
    for r in range(1, dim):
        for sub in by_rank[r]:
            vid[sub] = len(vertex_colors)
            vertex_colors.append(r - 1)
    # full flags by walking containments upward
    flags: list[tuple] = [(s,) for s in by_rank[1]]
    for r in range(2, dim):
        flags = [
            chain + (big,)
            for chain in flags
            for big in by_rank[r]
            if subspace_contains(big, chain[-1], q)
        ]
    tops = [tuple(vid[s] for s in chain) for chain in flags]
    params = Params(dim - 2, q + 1)
    x = from_simplicial(params, vertex_colors, tops)
    if not ordered:
        x.ordering = None
        x.root = None
    return x


def flag_count(dim: int, q: int) -> int:
    total = 1
    for i in range(2, dim + 1):
        total *= (q**i - 1) // (q - 1)
    return total
