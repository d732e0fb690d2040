"""Link diagrams as rotation systems.

A diagram is a list of crossings, each carrying four half-edge slots in
counterclockwise order.  Slot 0 is the incoming understrand, so the
understrand always occupies slots {0, 2} and the overstrand slots {1, 3}.
Edges pair up slots that share a PD label.  Faces, genus, checkerboard
colorings and the usual diagram classifiers are all derived from this data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .errors import DiagramError, HypothesesError

# A dart is (crossing index, slot index); slots run 0..3 counterclockwise.
Dart = tuple[int, int]

UNDER_SLOTS = (0, 2)
OVER_SLOTS = (1, 3)

BLACK = "black"
WHITE = "white"


def _other_slot(slot: int) -> int:
    return (slot + 2) % 4


@dataclass(frozen=True)
class LinkDiagram:
    """A validated connected-or-not link diagram on a closed orientable surface.

    ``crossings[c][i]`` is the PD label at slot ``i`` of crossing ``c``.
    ``unknot_components`` counts crossingless round components (the ``U``
    document contributes one).
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    declared_genus: int = 0
    planar_flag: bool = True
    unknot_components: int = 0

    # ----- wiring -------------------------------------------------------

    @cached_property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def darts(self) -> tuple[Dart, ...]:
        return tuple((c, i) for c in range(self.n) for i in range(4))

    @cached_property
    def edge_pairing(self) -> dict[Dart, Dart]:
        """Involution pairing darts that share a PD label."""
        by_label: dict[int, list[Dart]] = {}
        for c, cr in enumerate(self.crossings):
            for i, lab in enumerate(cr):
                by_label.setdefault(lab, []).append((c, i))
        pairing: dict[Dart, Dart] = {}
        for lab, ds in sorted(by_label.items()):
            if len(ds) != 2:
                raise DiagramError(f"label {lab} used {len(ds)} times (expected 2)")
            a, b = ds
            pairing[a] = b
            pairing[b] = a
        return pairing

    @cached_property
    def edges(self) -> tuple[tuple[Dart, Dart], ...]:
        """Edges as ordered dart pairs, canonically sorted."""
        seen = set()
        out = []
        for d in self.darts:
            e = tuple(sorted((d, self.edge_pairing[d])))
            if e not in seen:
                seen.add(e)
                out.append(e)
        return tuple(sorted(out))

    @cached_property
    def edge_index(self) -> dict[Dart, int]:
        idx = {}
        for k, (a, b) in enumerate(self.edges):
            idx[a] = k
            idx[b] = k
        return idx

    # ----- faces --------------------------------------------------------

    @cached_property
    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        """Face walks as dart orbits of the permutation sigma∘alpha.

        The face containing corner ``(c, q)`` (the quadrant between slots
        ``q`` and ``q+1``) is the orbit containing dart ``(c, (q+1) % 4)``.
        """
        nxt = {}
        for d in self.darts:
            c, i = self.edge_pairing[d]
            nxt[d] = (c, (i + 1) % 4)
        faces = []
        seen: set[Dart] = set()
        for d in self.darts:
            if d in seen:
                continue
            walk = []
            cur = d
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = nxt[cur]
            faces.append(tuple(walk))
        return tuple(faces)

    @cached_property
    def face_of_corner(self) -> dict[tuple[int, int], int]:
        """Corner (crossing, quadrant q in 0..3) -> face index."""
        where = {}
        for f, walk in enumerate(self.faces):
            for c, i in walk:
                where[(c, (i - 1) % 4)] = f
        return where

    def face_corners(self, f: int) -> tuple[tuple[int, int], ...]:
        return tuple((c, (i - 1) % 4) for c, i in self.faces[f])

    @cached_property
    def genus(self) -> int:
        if self.n == 0:
            return 0
        v = self.n
        e = len(self.edges)
        f = len(self.faces)
        chi = v - e + f
        if chi % 2 != 0 or chi > 2:
            raise DiagramError(f"Euler characteristic {chi} admits no closed orientable surface")
        return (2 - chi) // 2

    def require_genus_zero(self):
        if self.genus != 0:
            raise HypothesesError("operation requires a planar (genus 0) diagram")

    # ----- connectivity & components ------------------------------------

    @cached_property
    def connected(self) -> bool:
        if self.n == 0:
            return self.unknot_components <= 1
        if self.unknot_components > 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            c = stack.pop()
            for i in range(4):
                c2, _ = self.edge_pairing[(c, i)]
                if c2 not in seen:
                    seen.add(c2)
                    stack.append(c2)
        return len(seen) == self.n

    @cached_property
    def components(self) -> tuple[tuple[Dart, ...], ...]:
        """Link components as dart walks (one traversal direction each)."""
        comps = []
        seen: set[Dart] = set()
        for d in self.darts:
            if d in seen:
                continue
            walk = []
            cur = d
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                c, i = cur
                seen.add((c, _other_slot(i)))  # same strand, other direction marker
                cur = self.edge_pairing[(c, _other_slot(i))]
            comps.append(tuple(walk))
        return tuple(comps)

    @cached_property
    def component_count(self) -> int:
        return len(self.components) + self.unknot_components

    def component_of_crossing(self, c: int) -> tuple[int, int]:
        """Indices of the components carrying the under- and overstrand at c."""
        under = over = -1
        for k, walk in enumerate(self.components):
            for d in walk:
                if d[0] == c:
                    if d[1] in UNDER_SLOTS:
                        under = k
                    else:
                        over = k
        return under, over

    # ----- checkerboard coloring -----------------------------------------

    @cached_property
    def face_colors(self) -> tuple[str, ...]:
        """Proper 2-coloring of faces with face 0 white, or raise."""
        if self.n == 0:
            return (WHITE, BLACK)
        nf = len(self.faces)
        colors: list[Optional[str]] = [None] * nf
        colors[0] = WHITE
        stack = [0]
        adj: dict[int, set[int]] = {f: set() for f in range(nf)}
        for a, b in self.edges:
            fa = self._edge_sides(a)
            for f1, f2 in (fa,):
                adj[f1].add(f2)
                adj[f2].add(f1)
        while stack:
            f = stack.pop()
            for g in sorted(adj[f]):
                want = BLACK if colors[f] == WHITE else WHITE
                if colors[g] is None:
                    colors[g] = want
                    stack.append(g)
                elif colors[g] != want:
                    raise HypothesesError("faces are not 2-colorable; no checkerboard surface pair exists")
        if any(c is None for c in colors):
            raise HypothesesError("disconnected diagram: checkerboard coloring is ambiguous")
        return tuple(colors)  # type: ignore[arg-type]

    def _edge_sides(self, d: Dart) -> tuple[int, int]:
        """The two faces flanking the edge through dart d."""
        c, i = d
        return (self.face_of_corner[(c, i)], self.face_of_corner[(c, (i - 1) % 4)])

    def faces_of_color(self, color: str) -> tuple[int, ...]:
        return tuple(f for f in range(len(self.faces)) if self.face_colors[f] == color)

    def corner_color(self, c: int, q: int) -> str:
        return self.face_colors[self.face_of_corner[(c, q)]]

    # ----- classifiers ---------------------------------------------------

    @cached_property
    def alternating(self) -> bool:
        return all(
            (a[1] in UNDER_SLOTS) != (b[1] in UNDER_SLOTS) for a, b in self.edges
        )

    @cached_property
    def nugatory_crossings(self) -> tuple[int, ...]:
        """Crossings incident twice to one face."""
        out = []
        for c in range(self.n):
            fs = [self.face_of_corner[(c, q)] for q in range(4)]
            if len(set(fs)) < 4:
                out.append(c)
        return tuple(out)

    @cached_property
    def reduced(self) -> bool:
        return not self.nugatory_crossings

    @cached_property
    def cellular(self) -> bool:
        """Faces are disks on the declared surface (always true on the derived one)."""
        return self.declared_genus == self.genus

    def removably_nugatory_crossings(self) -> tuple[int, ...]:
        """Nugatory crossings whose doubled face is a disk face."""
        if self.cellular:
            return self.nugatory_crossings
        return ()

    @cached_property
    def diagram_prime(self) -> bool:
        """No 2-edge-cut of the 4-valent graph separates two nonempty crossing sets."""
        if not (self.reduced and self.connected):
            return False
        if self.n <= 1:
            return True
        m = len(self.edges)
        for i in range(m):
            for j in range(i + 1, m):
                if self._separates(frozenset((i, j))):
                    return False
        return True

    def _separates(self, cut: frozenset[int]) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            c = stack.pop()
            for s in range(4):
                if self.edge_index[(c, s)] in cut:
                    continue
                c2, _ = self.edge_pairing[(c, s)]
                if c2 not in seen:
                    seen.add(c2)
                    stack.append(c2)
        return len(seen) < self.n

    @cached_property
    def split(self) -> bool:
        return not self.connected

    # ----- serialization --------------------------------------------------

    def to_pd_text(self) -> str:
        lines = []
        if self.declared_genus:
            lines.append(f"genus {self.declared_genus}")
        for cr in self.crossings:
            lines.append("X " + " ".join(str(x) for x in cr))
        for _ in range(self.unknot_components):
            lines.append("U")
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "crossings": [list(cr) for cr in self.crossings],
            "genus": self.declared_genus,
            "unknots": self.unknot_components,
        }

    def canonical_form(self) -> tuple:
        """Relabeling-invariant encoding (minimal BFS normal form over all roots)."""
        if self.n == 0:
            return ("U", self.unknot_components)
        best = None
        for root_c in range(self.n):
            for root_s in range(4):
                enc = self._bfs_encoding(root_c, root_s)
                if best is None or enc < best:
                    best = enc
        return ("D", self.unknot_components, best)

    def _bfs_encoding(self, root_c: int, root_s: int) -> tuple:
        # Relabel crossings in discovery order; slots rotated so the entry
        # slot maps to its role-preserving position (rotation by 2 allowed:
        # understrand slots are {0,2}).
        order: dict[int, tuple[int, int]] = {}  # crossing -> (new index, rotation)
        rot0 = 0 if root_s in (0, 1) else 2
        order[root_c] = (0, rot0)
        queue = [root_c]
        while queue:
            c = queue.pop(0)
            _, rot = order[c]
            for k in range(4):
                slot = (k + rot) % 4
                c2, s2 = self.edge_pairing[(c, slot)]
                if c2 not in order:
                    r2 = 0 if s2 in (0, 1) else 2
                    order[c2] = (len(order), r2)
                    queue.append(c2)
        if len(order) != self.n:
            return ("disconnected",)
        rows = []
        new_of_old = {c: t[0] for c, t in order.items()}
        for c in sorted(order, key=lambda c: order[c][0]):
            _, rot = order[c]
            row = []
            for k in range(4):
                c2, s2 = self.edge_pairing[(c, (k + rot) % 4)]
                n2, r2 = order[c2]
                row.append((n2, (s2 - r2) % 4))
            rows.append(tuple(row))
        return tuple(rows)

    def is_isomorphic_to(self, other: "LinkDiagram") -> bool:
        return self.canonical_form() == other.canonical_form()


@dataclass(frozen=True)
class DiagramFlags:
    alternating: bool
    connected: bool
    reduced: bool
    cellular: bool
    diagram_prime: bool
    split: bool
    genus: int
    crossings: int
    edges: int
    faces: int
    components: int
    nugatory: tuple[int, ...]

    def to_json_obj(self) -> dict:
        return {
            "alternating": self.alternating,
            "connected": self.connected,
            "reduced": self.reduced,
            "cellular": self.cellular,
            "prime": self.diagram_prime,
            "split": self.split,
            "genus": self.genus,
            "crossings": self.crossings,
            "edges": self.edges,
            "faces": self.faces,
            "components": self.components,
            "nugatory": list(self.nugatory),
        }


# ---------------------------------------------------------------------------
# parsing


def parse_diagram(text: str) -> LinkDiagram:
    """Parse a PD-code document (or its JSON mirror) into a LinkDiagram.

    Grammar: one crossing per line, ``X a b c d`` with labels listed
    counterclockwise starting at the incoming understrand; ``#`` comments;
    blank lines ignored; optional ``genus g`` header; ``U`` for a crossingless
    unknot component.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    crossings: list[tuple[int, int, int, int]] = []
    genus = None
    unknots = 0
    saw_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        saw_any = True
        parts = line.split()
        if parts[0] in ("genus", "GENUS"):
            if genus is not None:
                raise DiagramError("duplicate genus header", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise DiagramError("genus header needs one nonnegative integer", lineno)
            genus = int(parts[1])
        elif parts[0] in ("U", "u"):
            if len(parts) != 1:
                raise DiagramError("unknot token takes no arguments", lineno)
            unknots += 1
        elif parts[0] in ("X", "x"):
            if len(parts) != 5:
                raise DiagramError("crossing line needs 4 labels: X a b c d", lineno)
            try:
                labs = tuple(int(p) for p in parts[1:])
            except ValueError:
                raise DiagramError("labels must be integers", lineno) from None
            if any(l <= 0 for l in labs):
                raise DiagramError("labels must be positive", lineno)
            crossings.append(labs)  # type: ignore[arg-type]
        else:
            raise DiagramError(f"unknown token {parts[0]!r}", lineno)
    if not saw_any:
        raise DiagramError("empty document")
    return _finish(crossings, genus, unknots)


def _parse_json(text: str) -> LinkDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "crossings" not in obj:
        raise DiagramError("JSON document needs a 'crossings' field")
    crossings = []
    for row in obj["crossings"]:
        if not (isinstance(row, list) and len(row) == 4 and all(isinstance(x, int) and x > 0 for x in row)):
            raise DiagramError(f"bad crossing row {row!r}")
        crossings.append(tuple(row))
    genus = obj.get("genus", None)
    unknots = obj.get("unknots", 0)
    return _finish(crossings, genus, unknots)


def _finish(crossings, genus, unknots) -> LinkDiagram:
    declared = 0 if genus is None else genus
    d = LinkDiagram(
        crossings=tuple(crossings),
        declared_genus=declared,
        planar_flag=(genus is None or genus == 0),
        unknot_components=unknots,
    )
    if not d.crossings and not d.unknot_components:
        raise DiagramError("empty document")
    d.edge_pairing  # force label validation
    derived = d.genus
    if derived > declared:
        raise DiagramError(
            f"rotation system has genus {derived} but header declares {declared}"
        )
    if d.planar_flag and derived != 0:
        raise DiagramError(f"diagram flagged planar but has genus {derived}")
    return d


def trace_faces(diagram: LinkDiagram) -> tuple[tuple[Dart, ...], ...]:
    if diagram.n == 0:
        return ((), ())
    return diagram.faces


def checkerboard_coloring(diagram: LinkDiagram) -> tuple[str, ...]:
    if not diagram.connected:
        raise HypothesesError("checkerboard coloring needs a connected diagram")
    return diagram.face_colors


def classify_diagram(diagram: LinkDiagram) -> DiagramFlags:
    return DiagramFlags(
        alternating=diagram.alternating if diagram.n else True,
        connected=diagram.connected,
        reduced=diagram.reduced,
        cellular=diagram.cellular,
        diagram_prime=diagram.diagram_prime,
        split=diagram.split,
        genus=diagram.genus,
        crossings=diagram.n,
        edges=len(diagram.edges) if diagram.n else 0,
        faces=len(diagram.faces) if diagram.n else 2,
        components=diagram.component_count,
        nugatory=diagram.nugatory_crossings,
    )


def detect_nugatory(diagram: LinkDiagram) -> tuple[int, ...]:
    return diagram.nugatory_crossings
