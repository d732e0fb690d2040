"""States of a diagram: smoothings, state circles, and the rewriting move
that turns any state surface into a checkerboard surface.

A smoothing at a crossing joins two opposite corner quadrants.  We store it
as a pairing class: EVEN joins slots (0,1) and (2,3) (corner arcs at
quadrants Q0 and Q2), ODD joins (1,2) and (3,0) (arcs at Q1 and Q3).
Which class the letter ``A`` names is pinned by the Kauffman convention via
the trefoil (all-A state of the standard trefoil has two circles).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .diagram import BLACK, WHITE, Dart, LinkDiagram
from .errors import DiagramError, HypothesesError, IntegrityError

EVEN = 0  # corner arcs at quadrants Q0, Q2; slot pairing {0-1, 2-3}
ODD = 1  # corner arcs at quadrants Q1, Q3; slot pairing {1-2, 3-0}

# Kauffman A-smoothing, pinned by the all-A trefoil circle count (see tests):
A_CLASS = ODD
B_CLASS = EVEN


def _pair_slot(cls: int, slot: int) -> int:
    if cls == EVEN:
        return slot ^ 1  # 0-1, 2-3
    return (slot + 1) % 4 if slot % 2 == 1 else (slot - 1) % 4  # 1-2, 3-0


def _corners(cls: int) -> tuple[int, int]:
    return (0, 2) if cls == EVEN else (1, 3)


@dataclass(frozen=True)
class State:
    """One smoothing class per crossing."""

    classes: tuple[int, ...]

    @staticmethod
    def from_letters(letters: str, n: int) -> "State":
        word = letters.strip()
        if word.lower() == "alla":
            word = "A" * n
        elif word.lower() == "allb":
            word = "B" * n
        if len(word) != n or any(ch not in "ABab" for ch in word):
            raise DiagramError(f"state string must be {n} letters from {{A,B}}")
        return State(tuple(A_CLASS if ch in "Aa" else B_CLASS for ch in word))

    def letters(self) -> str:
        return "".join("A" if c == A_CLASS else "B" for c in self.classes)

    @staticmethod
    def checkerboard(diagram: LinkDiagram, color: str) -> "State":
        """The state whose circles bound the faces of the given color."""
        classes = []
        for c in range(diagram.n):
            if diagram.corner_color(c, 0) == color:
                classes.append(EVEN)
            else:
                classes.append(ODD)
        return State(tuple(classes))


@dataclass(frozen=True)
class Passage:
    """One trip of a state circle through a crossing corner."""

    crossing: int
    arrival_slot: int
    exit_slot: int

    @property
    def corner(self) -> int:
        a, b = self.arrival_slot, self.exit_slot
        return a if (a + 1) % 4 == b else b

    @property
    def left_handed(self) -> bool:
        """Arrival at the corner's lower slot (exit = arrival + 1 ccw)."""
        return (self.arrival_slot + 1) % 4 == self.exit_slot


@dataclass(frozen=True)
class Circle:
    """A state circle: alternating edge traversals and corner passages.

    ``steps[i]`` is the edge (as its arrival dart) whose traversal leads into
    ``passages[i]``.
    """

    arrival_darts: tuple[Dart, ...]
    passages: tuple[Passage, ...]

    def edge_indices(self, diagram: LinkDiagram) -> tuple[int, ...]:
        return tuple(diagram.edge_index[d] for d in self.arrival_darts)


@dataclass(frozen=True)
class ResolvedState:
    """State circles plus the region structure of the smoothed diagram."""

    diagram: LinkDiagram
    state: State
    circles: tuple[Circle, ...]
    region_of_face: tuple[int, ...]  # face index -> region id
    channel_region: tuple[int, ...]  # crossing -> region id of its channel

    @property
    def circle_count(self) -> int:
        return len(self.circles)

    def euler_characteristic(self) -> int:
        return self.circle_count - self.diagram.n

    def circle_of_passage(self) -> dict[tuple[int, int], int]:
        """(crossing, corner quadrant) -> circle index."""
        out = {}
        for k, circ in enumerate(self.circles):
            for p in circ.passages:
                out[(p.crossing, p.corner)] = k
        return out

    def state_graph_edges(self) -> tuple[tuple[int, int, int], ...]:
        """Per crossing: (circle at lower corner, circle at opposite corner, crossing)."""
        byp = self.circle_of_passage()
        out = []
        for c in range(self.diagram.n):
            q0, q1 = _corners(self.state.classes[c])
            out.append((byp[(c, q0)], byp[(c, q1)], c))
        return tuple(out)


def resolve_state(diagram: LinkDiagram, state: State) -> ResolvedState:
    """Trace state circles and the complementary regions."""
    if len(state.classes) != diagram.n:
        raise DiagramError("state length does not match crossing count")
    if diagram.n == 0:
        raise HypothesesError("resolve_state needs at least one crossing")

    consumed: set[Dart] = set()
    circles: list[Circle] = []
    for start in diagram.darts:
        if start in consumed:
            continue
        darts: list[Dart] = []
        passages: list[Passage] = []
        cur = start  # arrival dart
        while cur not in consumed:
            consumed.add(cur)
            darts.append(cur)
            c, j = cur
            out = _pair_slot(state.classes[c], j)
            consumed.add((c, out))
            passages.append(Passage(c, j, out))
            cur = diagram.edge_pairing[(c, out)]
        circles.append(Circle(tuple(darts), tuple(passages)))

    # Regions: faces merged through the channel at each crossing.
    nf = len(diagram.faces)
    parent = list(range(nf))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for c in range(diagram.n):
        q0, q1 = _corners(state.classes[c])
        # faces at the two non-corner quadrants merge through the channel
        r0 = (q0 + 1) % 4
        r1 = (q1 + 1) % 4
        union(diagram.face_of_corner[(c, r0)], diagram.face_of_corner[(c, r1)])

    region_of_face = tuple(find(f) for f in range(nf))
    channel = tuple(
        region_of_face[diagram.face_of_corner[(c, (_corners(state.classes[c])[0] + 1) % 4)]]
        for c in range(diagram.n)
    )
    return ResolvedState(diagram, state, tuple(circles), region_of_face, channel)


def state_graph_data(diagram: LinkDiagram, state: State):
    """Vertices (circle count) and labeled edges of the state graph."""
    rs = resolve_state(diagram, state)
    edges = []
    for u, v, c in rs.state_graph_edges():
        label = "A" if state.classes[c] == A_CLASS else "B"
        edges.append((u, v, c, label))
    return rs.circle_count, tuple(edges)


# ---------------------------------------------------------------------------
# sides of a circle, innermost detection


def circle_sides(rs: ResolvedState, k: int) -> tuple[dict[int, int], tuple[int, int]]:
    """Assign each region a side (0/1) relative to circle k.

    Returns (side of region, (content of side 0, content of side 1)) where
    content counts crossings whose channel lies on that side plus whole
    circles on that side.
    """
    diagram = rs.diagram
    circ = rs.circles[k]
    on_circle_edges = {diagram.edge_index[d] for d in circ.arrival_darts}
    corner_faces = {}
    for p in circ.passages:
        corner_faces[(p.crossing, p.corner)] = True

    # Region adjacency; edges of circle k and its corner arcs are walls.
    side: dict[int, Optional[int]] = {r: None for r in set(rs.region_of_face)}
    constraints = []  # (region a, region b, equal?)
    for eidx, (d1, d2) in enumerate(diagram.edges):
        c, i = d1
        f1 = diagram.face_of_corner[(c, i)]
        f2 = diagram.face_of_corner[(c, (i - 1) % 4)]
        r1, r2 = rs.region_of_face[f1], rs.region_of_face[f2]
        constraints.append((r1, r2, eidx not in on_circle_edges))
    for c in range(diagram.n):
        q0, q1 = _corners(rs.state.classes[c])
        for q in (q0, q1):
            face = diagram.face_of_corner[(c, q)]
            rq = rs.region_of_face[face]
            rch = rs.channel_region[c]
            constraints.append((rq, rch, (c, q) not in corner_faces))

    # Propagate: BFS 2-coloring with equal/unequal constraints.
    adj: dict[int, list[tuple[int, bool]]] = {}
    for a, b, eq in constraints:
        adj.setdefault(a, []).append((b, eq))
        adj.setdefault(b, []).append((a, eq))
    start = min(side)
    side[start] = 0
    stack = [start]
    while stack:
        r = stack.pop()
        for r2, eq in sorted(adj.get(r, []), key=lambda t: t[0]):
            want = side[r] if eq else 1 - side[r]
            if side[r2] is None:
                side[r2] = want
                stack.append(r2)
            elif side[r2] != want:
                raise IntegrityError("inconsistent sides around a state circle")
    if any(v is None for v in side.values()):
        raise HypothesesError("split diagram: circle sides are ambiguous")

    content = [0, 0]
    for c in range(diagram.n):
        content[side[rs.channel_region[c]]] += 1  # type: ignore[index]
    for j, circ2 in enumerate(rs.circles):
        if j == k:
            continue
        d = circ2.arrival_darts[0]
        c, i = d
        f = diagram.face_of_corner[(c, i)]
        content[side[rs.region_of_face[f]]] += 1  # type: ignore[index]
    return side, (content[0], content[1])  # type: ignore[return-value]


def innermost_flags(rs: ResolvedState) -> tuple[bool, ...]:
    flags = []
    for k in range(rs.circle_count):
        _, (c0, c1) = circle_sides(rs, k)
        flags.append(c0 == 0 or c1 == 0)
    return tuple(flags)


# ---------------------------------------------------------------------------
# state_to_checkerboard


def _rewrite_once(diagram: LinkDiagram, state: State, k: int, rs: ResolvedState):
    """Push the first link arc of circle k across its disk; returns (diagram, state).

    Implements one step of the non-innermost elimination loop: the complement
    of a link arc alpha on the circle is shadowed by a parallel arc on the
    chosen side, crossing the two strand stubs at each passage whose channel
    lies on that side.  New crossings carry the pushed strand as overstrand,
    and are smoothed so that the flattened strip becomes state disks joined
    by the new half-twisted bands.
    """
    circ = rs.circles[k]
    side, (c0, c1) = circle_sides(rs, k)
    t = 0 if c0 <= c1 else 1

    # Rotate the circle so the traversal starts with its minimal edge.
    m = len(circ.arrival_darts)
    start = min(range(m), key=lambda i: (diagram.edge_index[circ.arrival_darts[i]], i))
    darts = [circ.arrival_darts[(start + i) % m] for i in range(m)]
    passages = [circ.passages[(start + i) % m] for i in range(m)]
    # alpha sits mid-edge on darts[0]'s edge; beta runs p_0, e_1, p_1, ..., e_0'.
    head_dart = darts[0]  # arrival dart of p_0's crossing on e_1
    tail_dart = (passages[-1].crossing, passages[-1].exit_slot)  # e_1's other end

    PortT = tuple  # ("old", crossing, slot) | ("new", ev, role) | ("virt", tag)

    events = []  # (passage index, which in ("arr", "exit"), host end dart)
    for i, p in enumerate(passages):
        if side[rs.channel_region[p.crossing]] != t:
            continue
        events.append((i, "arr", (p.crossing, p.arrival_slot)))
        events.append((i, "exit", (p.crossing, p.exit_slot)))

    # Host edge of a cut: the edge containing the given end dart, with e_1
    # split into head (owning head_dart) and tail (owning tail_dart).
    e1_idx = diagram.edge_index[head_dart]

    def host_of(end_dart):
        eidx = diagram.edge_index[end_dart]
        if eidx == e1_idx:
            return ("head",) if end_dart == head_dart else ("tail",)
        return ("edge", eidx)

    cuts_by_host: dict[tuple, dict[Dart, int]] = {}
    for evno, (_i, _kind, end_dart) in enumerate(events):
        h = host_of(end_dart)
        cuts_by_host.setdefault(h, {})
        if end_dart in cuts_by_host[h]:
            raise IntegrityError("two cuts on one edge stub")
        cuts_by_host[h][end_dart] = evno

    # Build the segment chains (pairs of ports).  A cut's stub slot faces the
    # crossing it sits next to, so a cut near the start port is entered at its
    # stub and left at its rest, and vice versa for a cut near the far port.
    segments: list[tuple[PortT, PortT]] = []

    def chain(port_a: PortT, cut_near_a: Optional[int], cut_near_b: Optional[int], port_b: PortT):
        prev = port_a
        if cut_near_a is not None:
            segments.append((prev, ("new", cut_near_a, 2)))
            prev = ("new", cut_near_a, 0)
        if cut_near_b is not None:
            segments.append((prev, ("new", cut_near_b, 0)))
            prev = ("new", cut_near_b, 2)
        segments.append((prev, port_b))

    for eidx, (d1, d2) in enumerate(diagram.edges):
        if eidx == e1_idx:
            continue
        cuts = cuts_by_host.get(("edge", eidx), {})
        p1 = ("old", d1[0], d1[1])
        p2 = ("old", d2[0], d2[1])
        chain(p1, cuts.get(d1), cuts.get(d2), p2)

    # e_1 pieces: head runs from (c_0, a_0) to the alpha-end junction, the
    # tail from the last passage's exit to the alpha-start junction.
    head_cuts = cuts_by_host.get(("head",), {})
    tail_cuts = cuts_by_host.get(("tail",), {})
    chain(("old",) + head_dart, head_cuts.get(head_dart), None, ("virt", "jend"))
    chain(("old",) + tail_dart, tail_cuts.get(tail_dart), None, ("virt", "jstart"))

    # beta' chain through the events in order.
    prev: PortT = ("virt", "jend")
    for evno, (_i, _kind, _end) in enumerate(events):
        # entering role: beta'-in; leaving role: beta'-out
        p = passages[events[evno][0]]
        in_role, out_role = (3, 1) if p.left_handed else (1, 3)
        segments.append((prev, ("new", evno, in_role)))
        prev = ("new", evno, out_role)
    segments.append((prev, ("virt", "jstart")))

    # Fuse the two virtual junction points: each has exactly two incident
    # segment ends; merge them pairwise into single segments.
    def fuse(tag: str):
        inc = [s for s in segments if ("virt", tag) in s]
        if len(inc) != 2:
            raise IntegrityError("junction valence != 2")
        ends = []
        for s in inc:
            segments.remove(s)
            a, b = s
            ends.append(b if a == ("virt", tag) else a)
        segments.append((ends[0], ends[1]))

    fuse("jend")
    fuse("jstart")

    # Assign labels and rebuild the PD rows.
    label_at: dict[PortT, int] = {}
    for lab, (a, b) in enumerate(segments, start=1):
        if a in label_at or b in label_at:
            raise IntegrityError("port used twice")
        label_at[a] = lab
        label_at[b] = lab

    new_rows: list[tuple[int, int, int, int]] = []
    new_classes: list[int] = []
    for c in range(diagram.n):
        row = tuple(label_at[("old", c, s)] for s in range(4))
        new_rows.append(row)
        new_classes.append(state.classes[c])
    for evno, (i, kind, _end) in enumerate(events):
        p = passages[i]
        row = tuple(label_at[("new", evno, r)] for r in range(4))
        new_rows.append(row)
        if p.left_handed:
            new_classes.append(ODD if kind == "arr" else EVEN)
        else:
            new_classes.append(EVEN if kind == "arr" else ODD)

    d2 = LinkDiagram(
        crossings=tuple(new_rows),
        declared_genus=diagram.declared_genus,
        planar_flag=diagram.planar_flag,
        unknot_components=diagram.unknot_components,
    )
    return d2, State(tuple(new_classes))


def state_to_checkerboard(diagram: LinkDiagram, state: State, max_steps: int = 10_000):
    """Rewrite (diagram, state) until the state surface is a checkerboard surface.

    Returns (new diagram, new state, distinguished color).  Preserves the
    Euler characteristic, boundary component count, and orientability of the
    state surface; the number of non-innermost circles drops each step.
    """
    if not diagram.connected:
        raise HypothesesError("state_to_checkerboard needs a connected diagram")
    diagram.require_genus_zero()
    d, st = diagram, state
    prev_bad = None
    for _ in range(max_steps):
        rs = resolve_state(d, st)
        flags = innermost_flags(rs)
        bad = [i for i, fl in enumerate(flags) if not fl]
        if prev_bad is not None and len(bad) >= prev_bad:
            raise IntegrityError("non-innermost circle count failed to decrease")
        if not bad:
            break
        prev_bad = len(bad)
        k = min(
            bad,
            key=lambda i: min(d.edge_index[x] for x in rs.circles[i].arrival_darts),
        )
        d, st = _rewrite_once(d, st, k, rs)
    else:
        raise IntegrityError("rewriting loop failed to terminate")

    # The disk faces (empty side of each circle) form one checkerboard class.
    rs = resolve_state(d, st)
    colors = d.face_colors
    disk_faces = set()
    for k in range(rs.circle_count):
        side, (c0, c1) = circle_sides(rs, k)
        empty = 0 if c0 == 0 else 1
        faces = [
            f
            for f in range(len(d.faces))
            if side[rs.region_of_face[f]] == empty
        ]
        # the empty side of an innermost circle is one region made of one face
        if len(faces) != 1:
            raise IntegrityError("innermost circle with a non-face empty side")
        disk_faces.add(faces[0])
    disk_colors = {colors[f] for f in disk_faces}
    if len(disk_colors) != 1:
        raise IntegrityError("state disks do not form one checkerboard class")
    color = disk_colors.pop()
    expected = set(d.faces_of_color(color))
    if disk_faces != expected:
        raise IntegrityError("state disks do not exhaust their color class")
    if State.checkerboard(d, color) != st:
        raise IntegrityError("final state is not the checkerboard state")
    return d, st, color


# ---------------------------------------------------------------------------
# surface invariants of a state surface (disk-band bookkeeping)


def state_surface_invariants(diagram: LinkDiagram, state: State) -> dict:
    """chi, boundary component count, and orientability of the state surface."""
    rs = resolve_state(diagram, state)
    chi = rs.circle_count - diagram.n
    # orientable iff the state graph is bipartite (all bands are half-twisted)
    n, edges = rs.circle_count, rs.state_graph_edges()
    color: list[Optional[int]] = [None] * n
    orientable = True
    for s in range(n):
        if color[s] is not None:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for a, b, _c in edges:
                if a == u or b == u:
                    v = b if a == u else a
                    if color[v] is None:
                        color[v] = 1 - color[u]  # type: ignore[operator]
                        stack.append(v)
                    elif color[v] == color[u]:
                        orientable = False
    return {
        "chi": chi,
        "boundary_components": diagram.component_count,
        "orientable": orientable,
        "circles": rs.circle_count,
    }
