"""Ideal triangulations of oriented marked surfaces with boundary.

A triangulation is stored as pure gluing data: a list of triangles, each
a cyclically ordered triple of side slots, the cyclic order running
counterclockwise with respect to the surface orientation.  A slot either
references an arc together with a traversal direction, or a boundary
segment.  Everything else (marked points, boundary components, genus,
homotopy classes of arcs) is derived from the gluing; no embedding is
ever stored.

Conventions used throughout:

* ``corner (t, k)`` denotes the corner of triangle ``t`` between side
  ``k`` and side ``k + 1 (mod 3)``; it is the point where side ``k``
  ends and side ``k + 1`` starts in the counterclockwise traversal.
* an arc occurs in exactly two slots, traversed in opposite directions
  (this is precisely orientation-compatible gluing).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import (
    BoundarySegmentNotFlippable,
    Disconnected,
    DuplicateArcUse,
    InvariantViolation,
    MonogonOrDigon,
    NonOrientableGluing,
    ParseError,
    PuncturedSurface,
    UnglueableSide,
    UnknownArc,
)


@dataclass(frozen=True)
class ArcSide:
    """A triangle side glued along an arc, with traversal direction."""

    label: str
    orient: int  # +1 or -1


@dataclass(frozen=True)
class BndSide:
    """A triangle side lying on the boundary of the surface."""

    label: str


class TriangleClass(Enum):
    HOMOTOPIC_TO_BOUNDARY = "homotopic-to-boundary"
    BASED_ON_BOUNDARY = "based-on-boundary"
    UNCONTRACTIBLE = "uncontractible"


@dataclass(frozen=True)
class MarkedPoint:
    """A marked point, realised as a fan of corners from boundary to boundary."""

    index: int
    corners: tuple  # ((t, k), ...) in fan order
    component: int
    incident_arcs: frozenset
    in_segment: str
    out_segment: str

    @property
    def is_isolated(self):
        return not self.incident_arcs


@dataclass(frozen=True)
class BoundaryComponent:
    index: int
    segments: tuple  # cyclic order along the boundary
    points: tuple  # point indices, walk order (point i is where segments[i] ends)


@dataclass(frozen=True)
class SurfaceData:
    genus: int
    euler_characteristic: int
    marked_per_component: tuple

    @property
    def num_boundary_components(self):
        return len(self.marked_per_component)

    @property
    def num_marked_points(self):
        return sum(self.marked_per_component)

    @property
    def is_disc(self):
        return self.genus == 0 and self.num_boundary_components == 1

    def same_up_to_permutation(self, other):
        return (
            self.genus == other.genus
            and sorted(self.marked_per_component) == sorted(other.marked_per_component)
        )


@dataclass(frozen=True)
class BoundaryStatistics:
    """Per boundary component counts used by the gentle-algebra invariants."""

    p: tuple
    q: tuple  # isolated marked points
    n_incident: tuple  # marked points meeting at least one arc
    m_segments: tuple  # segments with both endpoints meeting an arc
    chi: tuple  # internal triangles with a side cutting a disc off this component


class IdealTriangulation:
    """Oriented gluing data of triangles along arcs and boundary segments.

    Instances are immutable after construction; all operations return new
    objects.  Construction fully validates the gluing and derives marked
    points, boundary components and the surface invariants.
    """

    def __init__(self, triangles):
        tris = []
        for tri in triangles:
            tri = tuple(tri)
            if len(tri) != 3:
                raise ParseError("each triangle needs exactly three sides")
            for side in tri:
                if isinstance(side, ArcSide):
                    if side.orient not in (1, -1):
                        raise ParseError(
                            "arc direction must be +1 or -1", label=side.label
                        )
                elif not isinstance(side, BndSide):
                    raise ParseError("side must be an ArcSide or a BndSide")
            tris.append(tri)
        if not tris:
            raise ParseError("empty triangulation")
        self.triangles = tuple(tris)
        self._bh_memo = {}
        self._canonical = None
        self._validate_gluing()
        self._build_points()
        self._build_boundary()
        self._surface_data()

    # ------------------------------------------------------------------
    # construction helpers

    def _validate_gluing(self):
        arc_slots = {}
        bnd_slots = {}
        for t, tri in enumerate(self.triangles):
            for k, side in enumerate(tri):
                if isinstance(side, ArcSide):
                    arc_slots.setdefault(side.label, []).append((t, k))
                else:
                    bnd_slots.setdefault(side.label, []).append((t, k))
        clash = set(arc_slots) & set(bnd_slots)
        if clash:
            label = sorted(clash)[0]
            raise DuplicateArcUse(
                f"label {label!r} used both as arc and boundary segment", label=label
            )
        for label, slots in sorted(bnd_slots.items()):
            if len(slots) != 1:
                raise DuplicateArcUse(
                    f"boundary segment {label!r} occurs {len(slots)} times", label=label
                )
        for label, slots in sorted(arc_slots.items()):
            if len(slots) == 1:
                raise UnglueableSide(
                    f"arc {label!r} occurs in only one slot", label=label
                )
            if len(slots) > 2:
                raise DuplicateArcUse(
                    f"arc {label!r} occurs {len(slots)} times", label=label
                )
            (t1, k1), (t2, k2) = slots
            if self.triangles[t1][k1].orient == self.triangles[t2][k2].orient:
                raise NonOrientableGluing(
                    f"arc {label!r} is traversed twice in the same direction",
                    label=label,
                )
            if t1 == t2:
                raise MonogonOrDigon(
                    f"arc {label!r} occurs twice in one triangle", label=label
                )
        self._arc_slots = {label: tuple(slots) for label, slots in arc_slots.items()}
        self._bnd_slot = {label: slots[0] for label, slots in bnd_slots.items()}
        self.arcs = tuple(sorted(self._arc_slots))
        self.segments = tuple(sorted(self._bnd_slot))
        if not self.segments:
            raise PuncturedSurface("the glued surface has no boundary")

        # connectivity of the triangle adjacency graph
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for side in self.triangles[t]:
                if isinstance(side, ArcSide):
                    for (t2, _k) in self._arc_slots[side.label]:
                        if t2 not in seen:
                            seen.add(t2)
                            stack.append(t2)
        if len(seen) != len(self.triangles):
            missing = min(set(range(len(self.triangles))) - seen)
            raise Disconnected(f"triangle {missing} is not connected to triangle 0")

    def partner(self, t, k):
        """The other slot glued along the same arc as slot ``(t, k)``."""
        side = self.triangles[t][k]
        a, b = self._arc_slots[side.label]
        return b if a == (t, k) else a

    def _corner_next(self, t, k):
        """Rotate around the marked point at corner (t, k), crossing the outgoing side."""
        out = (k + 1) % 3
        if isinstance(self.triangles[t][out], BndSide):
            return None
        t2, k2 = self.partner(t, out)
        return (t2, k2)

    def _build_points(self):
        starts = []
        for t, tri in enumerate(self.triangles):
            for k in range(3):
                if isinstance(tri[k], BndSide):
                    starts.append((t, k))  # corner (t, k) has incoming side k on the boundary
        points = []
        corner_point = {}
        for start in starts:
            fan = [start]
            corner = start
            while True:
                nxt = self._corner_next(*corner)
                if nxt is None:
                    break
                fan.append(nxt)
                corner = nxt
            t_last, k_last = fan[-1]
            incident = set()
            for (ft, fk) in fan:
                for side in (self.triangles[ft][fk], self.triangles[ft][(fk + 1) % 3]):
                    if isinstance(side, ArcSide):
                        incident.add(side.label)
            incident = frozenset(incident)
            idx = len(points)
            points.append(
                dict(
                    index=idx,
                    corners=tuple(fan),
                    incident_arcs=incident,
                    in_segment=self.triangles[start[0]][start[1]].label,
                    out_segment=self.triangles[t_last][(k_last + 1) % 3].label,
                )
            )
            for c in fan:
                if c in corner_point:
                    raise PuncturedSurface(
                        "corner fans overlap; the gluing is not a surface"
                    )
                corner_point[c] = idx
        all_corners = {(t, k) for t in range(len(self.triangles)) for k in range(3)}
        leftover = all_corners - set(corner_point)
        if leftover:
            t, k = min(leftover)
            side = self.triangles[t][k]
            raise PuncturedSurface(
                f"marked point of corner {(t, k)} does not reach the boundary",
                label=getattr(side, "label", None),
            )
        self._raw_points = points
        self._corner_point = corner_point

    def _build_boundary(self):
        end_point = {p["in_segment"]: p["index"] for p in self._raw_points}
        components = []
        unused = set(self.segments)
        while unused:
            seg = min(unused)
            walk_segs = []
            walk_pts = []
            s = seg
            while True:
                unused.discard(s)
                walk_segs.append(s)
                pt = end_point[s]
                walk_pts.append(pt)
                s = self._raw_points[pt]["out_segment"]
                if s == seg:
                    break
            components.append((tuple(walk_segs), tuple(walk_pts)))
        components.sort(key=lambda c: c[0][0])
        self.boundary_components = tuple(
            BoundaryComponent(index=i, segments=segs, points=pts)
            for i, (segs, pts) in enumerate(components)
        )
        self._segment_component = {}
        point_component = {}
        for comp in self.boundary_components:
            for s in comp.segments:
                self._segment_component[s] = comp.index
            for p in comp.points:
                point_component[p] = comp.index
        self.points = tuple(
            MarkedPoint(
                index=p["index"],
                corners=p["corners"],
                component=point_component[p["index"]],
                incident_arcs=p["incident_arcs"],
                in_segment=p["in_segment"],
                out_segment=p["out_segment"],
            )
            for p in self._raw_points
        )
        del self._raw_points

    def _surface_data(self):
        v = len(self.points)
        e = len(self.arcs) + len(self.segments)
        f = len(self.triangles)
        chi = v - e + f
        b = len(self.boundary_components)
        if (2 - chi - b) % 2 != 0:
            raise InvariantViolation("Euler characteristic does not fit an oriented surface")
        genus = (2 - chi - b) // 2
        if genus < 0:
            raise InvariantViolation("negative genus")
        self.surface = SurfaceData(
            genus=genus,
            euler_characteristic=chi,
            marked_per_component=tuple(
                len(c.segments) for c in self.boundary_components
            ),
        )

    # ------------------------------------------------------------------
    # basic queries

    def side(self, t, k):
        return self.triangles[t][(k % 3)]

    def corner_point(self, t, k):
        """The marked point sitting at corner ``(t, k)``."""
        return self.points[self._corner_point[(t, k)]]

    def segment_component(self, label):
        return self._segment_component[label]

    def arc_triangles(self, label):
        if label not in self._arc_slots:
            raise UnknownArc(f"unknown arc {label!r}")
        return self._arc_slots[label]

    @property
    def is_disc(self):
        return self.surface.is_disc

    # ------------------------------------------------------------------
    # cutting and homotopy

    def cut_along_arc(self, label):
        """Cut the surface along an arc.

        The arc is duplicated into two boundary segments and the connected
        components of the result are returned as triangulations of their
        own right.
        """
        if label not in self._arc_slots:
            raise UnknownArc(f"unknown arc {label!r}")
        fresh = []
        for i in (0, 1):
            name = f"cut{i}:{label}"
            while name in self._bnd_slot or name in self._arc_slots:
                name += "+"
            fresh.append(name)
        slots = self._arc_slots[label]
        new_triangles = []
        for t, tri in enumerate(self.triangles):
            row = []
            for k, side in enumerate(tri):
                if (t, k) == slots[0]:
                    row.append(BndSide(fresh[0]))
                elif (t, k) == slots[1]:
                    row.append(BndSide(fresh[1]))
                else:
                    row.append(side)
            new_triangles.append(tuple(row))

        # connected components of the cut complex
        adj = {}
        for arc, ss in self._arc_slots.items():
            if arc == label:
                continue
            (t1, _), (t2, _) = ss
            adj.setdefault(t1, []).append(t2)
            adj.setdefault(t2, []).append(t1)
        comp_of = {}
        for t0 in range(len(new_triangles)):
            if t0 in comp_of:
                continue
            comp_id = len({c for c in comp_of.values()})
            stack = [t0]
            comp_of[t0] = comp_id
            while stack:
                t = stack.pop()
                for t2 in adj.get(t, ()):
                    if t2 not in comp_of:
                        comp_of[t2] = comp_id
                        stack.append(t2)
        ncomp = max(comp_of.values()) + 1
        pieces = []
        for c in range(ncomp):
            tris = [new_triangles[t] for t in sorted(comp_of) if comp_of[t] == c]
            pieces.append(IdealTriangulation(tris))
        return pieces

    def bh_component(self, label):
        """Boundary component an arc or segment is homotopic to, or ``None``.

        A boundary segment reports its own component.  An arc reports the
        component ``i`` when cutting along it splits off a disc bounded by
        the arc and segments of component ``i`` alone.
        """
        if label in self._bnd_slot:
            return self._segment_component[label]
        if label not in self._arc_slots:
            raise UnknownArc(f"unknown arc {label!r}")
        if label in self._bh_memo:
            return self._bh_memo[label]
        result = None
        pieces = self.cut_along_arc(label)
        if len(pieces) == 2:
            for piece in pieces:
                if not piece.surface.is_disc:
                    continue
                originals = [s for s in piece.segments if s in self._segment_component]
                cut_copies = [s for s in piece.segments if s not in self._segment_component]
                if len(cut_copies) != 1 or not originals:
                    continue
                comps = {self._segment_component[s] for s in originals}
                if len(comps) == 1:
                    result = comps.pop()
                    break
        self._bh_memo[label] = result
        return result

    def is_boundary_homotopic(self, label):
        """Whether a side is homotopic to the boundary (segments are, by convention)."""
        if label in self._bnd_slot:
            return True
        return self.bh_component(label) is not None

    def classify_triangle(self, t):
        count = 0
        for side in self.triangles[t]:
            if isinstance(side, BndSide) or self.is_boundary_homotopic(side.label):
                count += 1
        if count == 3:
            return TriangleClass.HOMOTOPIC_TO_BOUNDARY
        if count == 1:
            return TriangleClass.BASED_ON_BOUNDARY
        if count == 0:
            return TriangleClass.UNCONTRACTIBLE
        raise InvariantViolation(
            f"triangle {t} has exactly two boundary-homotopic sides"
        )

    def is_internal(self, t):
        return all(isinstance(side, ArcSide) for side in self.triangles[t])

    def internal_triangles(self):
        return [t for t in range(len(self.triangles)) if self.is_internal(t)]

    def uncontractible_count(self):
        return sum(
            1
            for t in range(len(self.triangles))
            if self.classify_triangle(t) is TriangleClass.UNCONTRACTIBLE
        )

    def boundary_statistics(self):
        b = len(self.boundary_components)
        p = list(self.surface.marked_per_component)
        q = [0] * b
        n = [0] * b
        m = [0] * b
        chi = [0] * b
        isolated = set()
        for pt in self.points:
            if pt.is_isolated:
                q[pt.component] += 1
                isolated.add(pt.index)
            else:
                n[pt.component] += 1
        end_point = {pt.in_segment: pt.index for pt in self.points}
        start_point = {pt.out_segment: pt.index for pt in self.points}
        for comp in self.boundary_components:
            for s in comp.segments:
                if end_point[s] not in isolated and start_point[s] not in isolated:
                    m[comp.index] += 1
        for t in self.internal_triangles():
            comps = set()
            for side in self.triangles[t]:
                c = self.bh_component(side.label)
                if c is not None:
                    comps.add(c)
            for c in comps:
                chi[c] += 1
        return BoundaryStatistics(
            p=tuple(p), q=tuple(q), n_incident=tuple(n), m_segments=tuple(m), chi=tuple(chi)
        )

    # ------------------------------------------------------------------
    # flips

    def flip(self, label):
        """Re-diagonalise the quadrilateral around an internal arc.

        The new diagonal reuses the flipped arc's label, so mutation
        sequences stay addressable by the original names.
        """
        if label in self._bnd_slot:
            raise BoundarySegmentNotFlippable(
                f"{label!r} is a boundary segment, not an arc"
            )
        if label not in self._arc_slots:
            raise UnknownArc(f"unknown arc {label!r}")
        slots = self._arc_slots[label]
        (t1, k1), (t2, k2) = slots
        if self.triangles[t1][k1].orient != 1:
            (t1, k1), (t2, k2) = (t2, k2), (t1, k1)
        tri1, tri2 = self.triangles[t1], self.triangles[t2]
        a = tri1[(k1 + 1) % 3]
        b = tri1[(k1 + 2) % 3]
        c = tri2[(k2 + 1) % 3]
        d = tri2[(k2 + 2) % 3]
        new1 = (b, c, ArcSide(label, -1))
        new2 = (d, a, ArcSide(label, +1))
        tris = list(self.triangles)
        tris[t1] = new1
        tris[t2] = new2
        return IdealTriangulation(tris)

    def flip_layout(self, label):
        """Slot bookkeeping shared by flip-aware callers (graded mutation).

        Returns ``(t1, k1, t2, k2)`` with ``(t1, k1)`` the slot traversing
        the arc positively.  After ``flip``, triangle ``t1`` holds sides
        ``(b, c, arc-)`` and ``t2`` holds ``(d, a, arc+)``.
        """
        if label not in self._arc_slots:
            raise UnknownArc(f"unknown arc {label!r}")
        (t1, k1), (t2, k2) = self._arc_slots[label]
        if self.triangles[t1][k1].orient != 1:
            (t1, k1), (t2, k2) = (t2, k2), (t1, k1)
        return t1, k1, t2, k2

    # ------------------------------------------------------------------
    # canonical form

    def canonical_key(self):
        """A relabeling-invariant encoding of the gluing data.

        Two triangulations have equal keys exactly when some relabeling of
        triangles, arcs and segments (preserving orientation) identifies
        them.
        """
        if self._canonical is None:
            self._canonical = min(
                self._canonical_encoding(t0, r0)[0]
                for t0 in range(len(self.triangles))
                for r0 in range(3)
            )
        return self._canonical

    def _canonical_encoding(self, t0, r0):
        tri_order = {t0: (0, r0)}
        queue = [(t0, r0)]
        arc_names = {}
        seg_names = {}
        code = []
        qi = 0
        while qi < len(queue):
            t, rot = queue[qi]
            qi += 1
            for j in range(3):
                side = self.triangles[t][(rot + j) % 3]
                if isinstance(side, BndSide):
                    if side.label not in seg_names:
                        seg_names[side.label] = len(seg_names)
                    code.append((1, seg_names[side.label], 0))
                else:
                    if side.label not in arc_names:
                        arc_names[side.label] = len(arc_names)
                        t2, k2 = self.partner(t, (rot + j) % 3)
                        if t2 not in tri_order:
                            tri_order[t2] = (len(queue), k2)
                            queue.append((t2, k2))
                    code.append((0, arc_names[side.label], side.orient))
        mapping = {
            "triangles": tri_order,
            "arcs": arc_names,
            "segments": seg_names,
        }
        return tuple(code), mapping

    def canonical_labeling(self):
        """The mapping realising :meth:`canonical_key` (minimal traversal)."""
        best = None
        for t0 in range(len(self.triangles)):
            for r0 in range(3):
                code, mapping = self._canonical_encoding(t0, r0)
                if best is None or code < best[0]:
                    best = (code, mapping)
        return best

    def is_isomorphic_to(self, other):
        return self.canonical_key() == other.canonical_key()

    # ------------------------------------------------------------------
    # serialisation

    def to_document(self):
        tris = []
        for tri in self.triangles:
            row = []
            for side in tri:
                if isinstance(side, ArcSide):
                    row.append({"arc": side.label, "dir": side.orient})
                else:
                    row.append({"bnd": side.label})
            tris.append(row)
        return {"format": 1, "triangles": tris}

    def to_json(self):
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"

    def __repr__(self):
        s = self.surface
        return (
            f"IdealTriangulation(genus={s.genus}, "
            f"p={list(s.marked_per_component)}, arcs={len(self.arcs)})"
        )


# ----------------------------------------------------------------------
# module-level operation surface, matching the documented API


def parse_triangulation(document):
    """Parse the triangulation file format into a validated triangulation.

    ``document`` may be a JSON string or an already-decoded dict.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "triangles" not in document:
        raise ParseError("document must be an object with a 'triangles' list")
    if document.get("format", 1) != 1:
        raise ParseError(f"unsupported format {document.get('format')!r}")
    triangles = []
    for i, tri in enumerate(document["triangles"]):
        if not isinstance(tri, (list, tuple)) or len(tri) != 3:
            raise ParseError(f"triangle {i} must be a list of three side records")
        row = []
        for rec in tri:
            if not isinstance(rec, dict):
                raise ParseError(f"triangle {i}: side record must be an object")
            if "arc" in rec:
                if rec.get("dir") not in (1, -1):
                    raise ParseError(
                        f"triangle {i}: arc side needs 'dir' of +1 or -1",
                        label=str(rec["arc"]),
                    )
                row.append(ArcSide(str(rec["arc"]), rec["dir"]))
            elif "bnd" in rec:
                row.append(BndSide(str(rec["bnd"])))
            else:
                raise ParseError(f"triangle {i}: side record needs 'arc' or 'bnd'")
        triangles.append(row)
    return IdealTriangulation(triangles)


def surface_invariants(triangulation):
    return triangulation.surface


def is_boundary_homotopic(triangulation, label):
    return triangulation.is_boundary_homotopic(label)


def cut_along_arc(triangulation, label):
    return triangulation.cut_along_arc(label)


def classify_triangle(triangulation, t):
    return triangulation.classify_triangle(t)


def flip(triangulation, label):
    return triangulation.flip(label)


def boundary_statistics(triangulation):
    return triangulation.boundary_statistics()
