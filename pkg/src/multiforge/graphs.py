"""Multigraphs with loops: Schreier graphs of permutation actions and exact
decomposition into perfect matchings and 2-factors.

Convention throughout: in a perfect matching every vertex lies in a unique
loop or a unique edge; in a 2-factor, in a unique loop or exactly two edge
ends.  A vertex covered by a loop meets no other edge of that factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .permrep import PermRep, UnionFind, perm_cycles, validate

Edge = tuple[int, int, object]  # (u, v, label) with u <= v; u == v is a loop


@dataclass
class Multigraph:
    n: int
    edges: list[Edge] = field(default_factory=list)

    def add_edge(self, u: int, v: int, label: object = None) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u},{v}) out of range")
        if u > v:
            u, v = v, u
        self.edges.append((u, v, label))

    def sort_edges(self) -> None:
        self.edges.sort(key=lambda e: (e[0], e[1], repr(e[2])))

    def degree(self, v: int, loop_weight: int = 1) -> int:
        """Incident edge count; loops contribute `loop_weight` (the appendix
        matching convention counts them once)."""
        total = 0
        for u, w, _ in self.edges:
            if u == v and w == v:
                total += loop_weight
            elif u == v or w == v:
                total += 1
        return total

    def loops_at(self, v: int) -> int:
        return sum(1 for u, w, _ in self.edges if u == v == w)

    def edge_multiset(self, with_labels: bool = True) -> list:
        if with_labels:
            return sorted((u, v, repr(l)) for u, v, l in self.edges)
        return sorted((u, v) for u, v, _ in self.edges)

    def same_as(self, other: "Multigraph", with_labels: bool = True) -> bool:
        return self.n == other.n and self.edge_multiset(with_labels) == other.edge_multiset(
            with_labels
        )

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        uf = UnionFind(self.n)
        for u, v, _ in self.edges:
            uf.union(u, v)
        return len({uf.find(v) for v in range(self.n)}) == 1

    def is_bipartite(self) -> bool:
        color = [-1] * self.n
        for start in range(self.n):
            if color[start] != -1:
                continue
            color[start] = 0
            queue = [start]
            while queue:
                v = queue.pop()
                for a, b, _ in self.edges:
                    if v not in (a, b):
                        continue
                    w = b if a == v else a
                    if w == v:
                        return False  # loop
                    if color[w] == -1:
                        color[w] = 1 - color[v]
                        queue.append(w)
                    elif color[w] == color[v]:
                        return False
        return True


def generator_classes(k: int) -> list[tuple[int, bool]]:
    """Inverse-closed generator power classes {l, k-l} for l = 1..floor(k/2),
    flagged involutive when 2l == k."""
    return [(l, 2 * l == k) for l in range(1, k // 2 + 1)]


def schreier_multigraph(rep: PermRep) -> Multigraph:
    """Quotient of the Cayley graph by the subgroup: one vertex per point,
    and per generator-power class the matching/2-factor edge rules applied
    along each cycle of the generator image."""
    diag = validate(rep)
    if not diag.ok:
        raise ValueError("invalid rep: " + "; ".join(diag.messages))
    k = rep.params.k
    g = Multigraph(rep.n)
    for i, beta in enumerate(rep.betas):
        for cyc in perm_cycles(beta):
            _cycle_edges(g, cyc, i, k)
    g.sort_edges()
    return g


def _cycle_edges(g: Multigraph, cyc: list[int], color: int, k: int) -> None:
    L = len(cyc)
    for l, involutive in generator_classes(k):
        step = l % L
        label = (color, l)
        if step == 0:
            # the power fixes every point of the cycle: one (single) loop each
            for p in cyc:
                g.add_edge(p, p, label)
        elif involutive:
            # pair points once; 2*step == 0 mod L so this is a fixed-point-free pairing
            for t in range(L):
                u, v = cyc[t], cyc[(t + step) % L]
                if u < v:
                    g.add_edge(u, v, label)
        else:
            # one edge per point; doubles into a 2-cycle when 2l == 0 mod L
            for t in range(L):
                g.add_edge(cyc[t], cyc[(t + step) % L], label)


# -- matchings and 2-factors ------------------------------------------------------

def is_perfect_matching(g: Multigraph, chosen: set[int]) -> bool:
    cover = [0] * g.n
    for e in chosen:
        u, v, _ = g.edges[e]
        if u == v:
            cover[u] += 1
        else:
            cover[u] += 1
            cover[v] += 1
    return all(c == 1 for c in cover)


def is_two_factor(g: Multigraph, chosen: set[int]) -> bool:
    loops = [0] * g.n
    ends = [0] * g.n
    for e in chosen:
        u, v, _ = g.edges[e]
        if u == v:
            loops[u] += 1
        else:
            ends[u] += 1
            ends[v] += 1
    return all(
        (loops[v] == 1 and ends[v] == 0) or (loops[v] == 0 and ends[v] == 2)
        for v in range(g.n)
    )


def _incident(g: Multigraph, avail: set[int]) -> list[list[int]]:
    inc: list[list[int]] = [[] for _ in range(g.n)]
    for e in avail:
        u, v, _ = g.edges[e]
        inc[u].append(e)
        if v != u:
            inc[v].append(e)
    return inc


def perfect_matchings(g: Multigraph, avail: set[int] | None = None) -> Iterator[set[int]]:
    """All perfect matchings within the available edge set, by backtracking
    on the lowest uncovered vertex.  Exact; intended for desk-scale graphs."""
    avail = set(range(len(g.edges))) if avail is None else set(avail)
    inc = _incident(g, avail)
    covered = [False] * g.n

    def rec(v0: int) -> Iterator[set[int]]:
        while v0 < g.n and covered[v0]:
            v0 += 1
        if v0 == g.n:
            yield set()
            return
        for e in inc[v0]:
            if e not in avail:
                continue
            u, v, _ = g.edges[e]
            other = v if u == v0 else u
            if other != v0 and covered[other]:
                continue
            covered[v0] = True
            covered[other] = True
            avail.discard(e)
            for rest in rec(v0 + 1):
                rest.add(e)
                yield rest
            avail.add(e)
            covered[v0] = False
            covered[other] = False

    yield from rec(0)


def two_factors(g: Multigraph, avail: set[int] | None = None) -> Iterator[set[int]]:
    """All 2-factors within the available edge set, by binary include/exclude
    recursion over edges with remaining-capacity pruning.  `slots[v]` counts
    covered ends (a loop fills both at once and excludes anything else)."""
    order = sorted(set(range(len(g.edges))) if avail is None else set(avail))
    slots = [0] * g.n
    by_loop = [False] * g.n
    # potential[v]: upper bound on ends still obtainable from undecided edges
    potential = [0] * g.n
    for e in order:
        u, v, _ = g.edges[e]
        potential[u] += 2 if u == v else 1
        potential[v] += 0 if u == v else 1
    chosen: set[int] = set()

    def rec(idx: int) -> Iterator[set[int]]:
        if idx == len(order):
            if all(s == 2 for s in slots):
                yield set(chosen)
            return
        e = order[idx]
        u, v, _ = g.edges[e]
        weight_u = 2 if u == v else 1
        weight_v = 0 if u == v else 1
        # branch 1: include e
        ok = (
            (u == v and slots[u] == 0)
            if u == v
            else (slots[u] < 2 and slots[v] < 2 and not by_loop[u] and not by_loop[v])
        )
        if ok:
            if u == v:
                slots[u] = 2
                by_loop[u] = True
            else:
                slots[u] += 1
                slots[v] += 1
            potential[u] -= weight_u
            potential[v] -= weight_v
            chosen.add(e)
            yield from rec(idx + 1)
            chosen.discard(e)
            potential[u] += weight_u
            potential[v] += weight_v
            if u == v:
                slots[u] = 0
                by_loop[u] = False
            else:
                slots[u] -= 1
                slots[v] -= 1
        # branch 2: exclude e
        potential[u] -= weight_u
        potential[v] -= weight_v
        if slots[u] + potential[u] >= 2 and slots[v] + potential[v] >= 2:
            yield from rec(idx + 1)
        potential[u] += weight_u
        potential[v] += weight_v

    yield from rec(0)


def euler_two_factorization(g: Multigraph, avail: set[int]) -> list[set[int]] | None:
    """Split an even-regular edge set (loops weighing two) into 2-factors via
    an Euler orientation and bipartite edge coloring."""
    deg = [0] * g.n
    for e in avail:
        u, v, _ = g.edges[e]
        deg[u] += 2 if u == v else 1
        deg[v] += 0 if u == v else 1
    if any(d % 2 for d in deg):
        return None
    half = None
    for v in range(g.n):
        if deg[v]:
            half = deg[v] // 2
            break
    if half is None:
        return []
    if any(d not in (0, 2 * half) for d in deg):
        return None

    # orient each component along an Euler circuit (Hierholzer): every
    # vertex then has out-degree = in-degree = half
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e in avail:
        u, v, _ = g.edges[e]
        adj[u].append((v, e))
        if v != u:
            adj[v].append((u, e))
    ptr = [0] * g.n
    used: set[int] = set()
    arcs: list[tuple[int, int, int]] = []  # (from, to, edge)
    for start in range(g.n):
        if ptr[start] >= len(adj[start]):
            continue
        stack: list[tuple[int, tuple[int, int, int] | None]] = [(start, None)]
        while stack:
            v, arrival = stack[-1]
            advanced = False
            while ptr[v] < len(adj[v]):
                w, e = adj[v][ptr[v]]
                ptr[v] += 1
                if e in used:
                    continue
                used.add(e)
                stack.append((w, (v, w, e)))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if arrival is not None:
                    arcs.append(arrival)

    # bipartite graph on out/in copies is half-regular; its edge coloring
    # by perfect matchings yields the 2-factors
    factors: list[set[int]] = []
    remaining = list(range(len(arcs)))
    for _ in range(half):
        match = _bipartite_perfect_matching(
            g.n, [(arcs[t][0], arcs[t][1]) for t in remaining]
        )
        if match is None:
            return None
        factors.append({arcs[remaining[t]][2] for t in match})
        chosen_set = set(match)
        remaining = [r for t, r in enumerate(remaining) if t not in chosen_set]
    return factors


def _bipartite_perfect_matching(n: int, arcs: list[tuple[int, int]]) -> list[int] | None:
    """Perfect matching in the bipartite graph on out/in copies induced by
    arcs; returns chosen arc positions (one out per vertex, one in per
    vertex), or None.  Hungarian augmenting paths."""
    outs: dict[int, list[int]] = {}
    active = sorted({a for a, _ in arcs})
    for t, (a, _) in enumerate(arcs):
        outs.setdefault(a, []).append(t)
    match_in: dict[int, int] = {}  # in-vertex -> arc position
    match_out: dict[int, int] = {}

    def augment(v: int, seen: set[int]) -> bool:
        for t in outs.get(v, []):
            b = arcs[t][1]
            if b in seen:
                continue
            seen.add(b)
            if b not in match_in or augment(arcs[match_in[b]][0], seen):
                match_in[b] = t
                match_out[v] = t
                return True
        return False

    for v in active:
        if v not in match_out and not augment(v, set()):
            return None
    return sorted(match_out.values())


# -- decomposition driver -----------------------------------------------------------

Factor = tuple[str, set[int]]  # ("matching" | "two_factor", edge indices)


def check_decomposition(g: Multigraph, factors: list[Factor], k: int) -> bool:
    used: list[int] = []
    m = f = 0
    for kind, chosen in factors:
        used.extend(chosen)
        if kind == "matching":
            if not is_perfect_matching(g, chosen):
                return False
            m += 1
        elif kind == "two_factor":
            if not is_two_factor(g, chosen):
                return False
            f += 1
        else:
            return False
    return sorted(used) == list(range(len(g.edges))) and m + 2 * f == k


def decompose_regular(
    g: Multigraph, k: int, use_labels: bool = True
) -> list[Factor] | None:
    """Partition the edges into m perfect matchings and f 2-factors with
    m + 2f = k, or report that none exists.

    Strategy: edge labels (generator classes) when present, k perfect
    matchings for loopless bipartite graphs, Euler 2-factorization for even
    uniform degree, and exact backtracking otherwise.
    """
    if use_labels and g.edges and all(e[2] is not None for e in g.edges):
        by_label: dict[object, set[int]] = {}
        for t, (_, _, label) in enumerate(g.edges):
            by_label.setdefault(repr(label), set()).add(t)
        factors: list[Factor] = []
        for _, chosen in sorted(by_label.items()):
            if is_perfect_matching(g, chosen):
                factors.append(("matching", chosen))
            elif is_two_factor(g, chosen):
                factors.append(("two_factor", chosen))
            else:
                factors = []
                break
        if factors and check_decomposition(g, factors, k):
            return factors

    all_edges = set(range(len(g.edges)))
    memo: set[tuple[frozenset[int], int]] = set()

    def solve(avail: set[int], k_left: int) -> list[Factor] | None:
        if k_left == 0:
            return [] if not avail else None
        key = (frozenset(avail), k_left)
        if key in memo:
            return None
        loopless = all(g.edges[e][0] != g.edges[e][1] for e in avail)
        degs = [0] * g.n
        for e in avail:
            u, v, _ = g.edges[e]
            degs[u] += 2 if u == v else 1
            degs[v] += 0 if u == v else 1
        if loopless and g.is_bipartite() and all(d == k_left for d in degs):
            out: list[Factor] = []
            rest = set(avail)
            for _ in range(k_left):
                match = next(perfect_matchings(g, rest), None)
                if match is None:
                    break
                out.append(("matching", match))
                rest -= match
            if len(out) == k_left and not rest:
                return out
        if k_left % 2 == 0 and all(d == k_left for d in degs):
            two = euler_two_factorization(g, avail)
            if two is not None and len(two) == k_left // 2:
                return [("two_factor", f) for f in two]
        if k_left >= 1:
            for match in perfect_matchings(g, set(avail)):
                rest = solve(avail - match, k_left - 1)
                if rest is not None:
                    return [("matching", match)] + rest
        if k_left >= 2:
            for tf in two_factors(g, set(avail)):
                rest = solve(avail - tf, k_left - 2)
                if rest is not None:
                    return [("two_factor", tf)] + rest
        memo.add(key)
        return None

    result = solve(all_edges, k)
    if result is not None and not check_decomposition(g, result, k):
        raise AssertionError("internal error: invalid decomposition produced")
    return result


def is_schreier(g: Multigraph, k: int, exact_bound: int = 30) -> bool | None:
    """Exact Schreier-graph test for connected k-regular multigraphs: True or
    False within the search bound, None (unknown) beyond it."""
    if not g.is_connected():
        raise ValueError("graph must be connected")
    if g.n > exact_bound:
        return None
    return decompose_regular(g, k) is not None


def counterexample_graph(k: int) -> Multigraph:
    """A connected k-regular graph (odd k >= 3) with neither a perfect
    matching nor a 2-factor: the balanced k-regular depth-3 tree with a
    (k-1)-regular circulant added on each leaf group.  Each subtree below a
    root child has odd cardinality 1 + (k-1) + (k-1)^2."""
    if k < 3 or k % 2 == 0:
        raise ValueError("construction needs odd k >= 3")
    g = Multigraph(1 + k + k * (k - 1) + k * (k - 1) ** 2)
    root = 0
    nxt = 1
    for _ in range(k):
        x = nxt
        nxt += 1
        g.add_edge(root, x)
        mids = []
        for _ in range(k - 1):
            m = nxt
            nxt += 1
            g.add_edge(x, m)
            mids.append(m)
        leaves = []
        for m in mids:
            for _ in range(k - 1):
                leaf = nxt
                nxt += 1
                g.add_edge(m, leaf)
                leaves.append(leaf)
        # (k-1)-regular circulant on the (k-1)^2 leaves: offsets 1..(k-1)/2,
        # each edge {t, t+off} arises from exactly one t since off < size/2
        sz = len(leaves)
        for t in range(sz):
            for off in range(1, (k - 1) // 2 + 1):
                g.add_edge(leaves[t], leaves[(t + off) % sz])
    g.sort_edges()
    return g


# -- text and DOT -----------------------------------------------------------------

def format_multigraph(g: Multigraph) -> str:
    counts: dict[tuple[int, int], int] = {}
    for u, v, _ in g.edges:
        counts[(u, v)] = counts.get((u, v), 0) + 1
    lines = [str(g.n)]
    for (u, v), c in sorted(counts.items()):
        lines.append(f"{u + 1} {v + 1}" + (f" {c}" if c > 1 else ""))
    return "\n".join(lines) + "\n"


def parse_multigraph(text: str) -> Multigraph:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    g = Multigraph(int(lines[0].strip()))
    for ln in lines[1:]:
        parts = ln.split()
        u, v = int(parts[0]) - 1, int(parts[1]) - 1
        mult = int(parts[2]) if len(parts) > 2 else 1
        for _ in range(mult):
            g.add_edge(u, v)
    g.sort_edges()
    return g


def to_dot(g: Multigraph, name: str = "G") -> str:
    palette = ["black", "red", "blue", "green", "orange", "purple", "brown", "cyan"]
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        lines.append(f'  {v} [label="{v + 1}"];')
    for u, v, label in g.edges:
        attrs = ""
        if isinstance(label, tuple) and label and isinstance(label[0], int):
            attrs = f' [color={palette[label[0] % len(palette)]}, label="{label[0]},{label[1]}"]'
        lines.append(f"  {u} -- {v}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
