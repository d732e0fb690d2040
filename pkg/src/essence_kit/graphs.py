"""Tait and state graphs: labeled multigraphs with blocks, girth, adequacy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diagram import BLACK, WHITE, LinkDiagram
from .errors import HypothesesError
from .states import State, state_graph_data

INFINITY = math.inf


@dataclass(frozen=True)
class LabeledMultigraph:
    """Vertices 0..n-1; edges (u, v, key, label) with loops and multi-edges."""

    vertex_count: int
    edges: tuple[tuple[int, int, int, str], ...]  # (u, v, edge key, label)

    def incident(self, v: int):
        for u, w, k, lab in self.edges:
            if u == v or w == v:
                yield (u, w, k, lab)

    def degree(self, v: int) -> int:
        d = 0
        for u, w, _k, _lab in self.edges:
            if u == v:
                d += 1
            if w == v:
                d += 1
        return d

    def has_loop(self) -> bool:
        return any(u == v for u, v, _k, _lab in self.edges)

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u, w, _k, _lab in self.edges:
                if u == v and w not in seen:
                    seen.add(w)
                    stack.append(w)
                elif w == v and u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.vertex_count


@dataclass(frozen=True)
class CutDecomposition:
    blocks: tuple[tuple[int, ...], ...]  # edge keys per block
    cut_vertices: tuple[int, ...]
    block_vertices: tuple[tuple[int, ...], ...]


def tait_graph(diagram: LinkDiagram, color: str) -> LabeledMultigraph:
    """Vertices = faces of the color; one edge per crossing joining its two
    color corners (a loop at a nugatory crossing)."""
    if not diagram.connected:
        raise HypothesesError("Tait graph needs a connected diagram")
    colors = diagram.face_colors
    faces = [f for f in range(len(diagram.faces)) if colors[f] == color]
    index = {f: i for i, f in enumerate(faces)}
    edges = []
    for c in range(diagram.n):
        inc = [
            diagram.face_of_corner[(c, q)]
            for q in range(4)
            if colors[diagram.face_of_corner[(c, q)]] == color
        ]
        if len(inc) != 2:
            raise HypothesesError("crossing without two color corners")
        u, v = sorted((index[inc[0]], index[inc[1]]))
        edges.append((u, v, c, "A" if diagram.alternating else "-"))
    return LabeledMultigraph(len(faces), tuple(edges))


def tait_vertex_faces(diagram: LinkDiagram, color: str) -> tuple[int, ...]:
    colors = diagram.face_colors
    return tuple(f for f in range(len(diagram.faces)) if colors[f] == color)


def state_graph(diagram: LinkDiagram, state: State) -> LabeledMultigraph:
    n, edges = state_graph_data(diagram, state)
    out = tuple((min(u, v), max(u, v), c, lab) for u, v, c, lab in edges)
    return LabeledMultigraph(n, tuple(sorted(out, key=lambda e: e[2])))


def is_adequate(g: LabeledMultigraph) -> bool:
    return not g.has_loop()


def cut_components(g: LabeledMultigraph) -> CutDecomposition:
    """Standard block decomposition; loops are their own blocks."""
    if not g.is_connected():
        raise HypothesesError("cut decomposition needs a connected graph")
    loops = [(u, k) for u, v, k, _lab in g.edges if u == v]
    plain = [(u, v, k) for u, v, k, _lab in g.edges if u != v]

    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.vertex_count)}
    for u, v, k in plain:
        adj[u].append((v, k))
        adj[v].append((u, k))

    # Iterative Hopcroft-Tarjan on the loopless part.
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    stack_edges: list[tuple[int, int, int]] = []
    blocks: list[tuple[int, ...]] = []
    cutset: set[int] = set()
    timer = 0
    for root in range(g.vertex_count):
        if root in disc:
            continue
        stack: list[tuple[int, int, iter]] = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        parent_edge: dict[int, int] = {root: -1}
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w, k in it:
                if k == parent_edge.get(v, -2) and w == parent:
                    # skip only the tree edge we came along (by key)
                    pass
                if k == parent_edge.get(v):
                    continue
                if w not in disc:
                    parent_edge[w] = k
                    stack_edges.append((v, w, k))
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                elif disc[w] < disc[v]:
                    stack_edges.append((v, w, k))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    if u != root or root_children > 1 or low[v] > disc[u] or True:
                        pass
                    block = []
                    while stack_edges:
                        e = stack_edges.pop()
                        block.append(e[2])
                        if (e[0], e[1]) == (u, v):
                            break
                    blocks.append(tuple(sorted(block)))
                    if u == root:
                        if root_children > 1:
                            cutset.add(u)
                    else:
                        cutset.add(u)
    for u, k in loops:
        blocks.append((k,))

    key_ends = {k: (u, v) for u, v, k, _lab in g.edges}
    bverts = []
    for b in blocks:
        vs: set[int] = set()
        for k in b:
            vs.update(key_ends[k])
        bverts.append(tuple(sorted(vs)))
    # a loop vertex that also carries other edges is a cut vertex
    for u, _k in loops:
        if any(u in bv for bv, bl in zip(bverts, blocks) if bl != (_k,) and len(bl) >= 1) and g.degree(u) > 2:
            cutset.add(u)
    order = sorted(range(len(blocks)), key=lambda i: blocks[i])
    return CutDecomposition(
        blocks=tuple(blocks[i] for i in order),
        cut_vertices=tuple(sorted(cutset)),
        block_vertices=tuple(bverts[i] for i in order),
    )


def is_homogeneous(g: LabeledMultigraph) -> bool:
    """All edges in each block carry one label."""
    if not g.edges:
        return True
    dec = cut_components(g)
    label_of = {k: lab for _u, _v, k, lab in g.edges}
    for block in dec.blocks:
        labs = {label_of[k] for k in block}
        if len(labs) > 1:
            return False
    return True


def girth(g: LabeledMultigraph):
    """Shortest cycle length; loops count 1, parallel pairs 2; forests get inf."""
    if g.has_loop():
        return 1
    seen_pairs = set()
    for u, v, _k, _lab in g.edges:
        if (u, v) in seen_pairs:
            return 2
        seen_pairs.add((u, v))
    best = INFINITY
    # BFS from each vertex over the simple graph (multi-edges handled above).
    adj: dict[int, set[int]] = {v: set() for v in range(g.vertex_count)}
    for u, v, _k, _lab in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    for s in range(g.vertex_count):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        while queue:
            v = queue.pop(0)
            for w in sorted(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w and parent[w] != v:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def shortest_cycle(g: LabeledMultigraph):
    """A witness cycle (edge keys) of length girth(g), or None for forests."""
    for u, v, k, _lab in g.edges:
        if u == v:
            return (k,)
    pairs: dict[tuple[int, int], int] = {}
    for u, v, k, _lab in g.edges:
        if (u, v) in pairs:
            return (pairs[(u, v)], k)
        pairs[(u, v)] = k
    target = girth(g)
    if target is INFINITY:
        return None
    # BFS shortest cycle through each start vertex until one of length target.
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.vertex_count)}
    for u, v, k, _lab in g.edges:
        adj[u].append((v, k))
        adj[v].append((u, k))
    best = None
    for s in range(g.vertex_count):
        dist = {s: 0}
        par: dict[int, tuple[int, int]] = {}
        queue = [s]
        while queue:
            v = queue.pop(0)
            for w, k in sorted(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    par[w] = (v, k)
                    queue.append(w)
                elif par.get(v, (None, None))[1] != k and par.get(w, (None, None))[1] != k:
                    length = dist[v] + dist[w] + 1
                    if best is None or length < len(best):
                        path_v = []
                        x = v
                        while x != s:
                            path_v.append(par[x][1])
                            x = par[x][0]
                        path_w = []
                        x = w
                        while x != s:
                            path_w.append(par[x][1])
                            x = par[x][0]
                        cyc = tuple(path_v[::-1] + [k] + path_w)
                        if len(set(cyc)) == len(cyc) and len(cyc) == length:
                            best = cyc
        if best is not None and len(best) == target:
            return best
    return best
