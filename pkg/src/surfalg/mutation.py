"""Quiver mutation, graded mutation of cut triangulations, flip-path search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import (
    InvariantViolation,
    NotOneDegree,
    SurfaceMismatch,
    UnknownVertex,
)
from .quiver import Arrow, DegreeMap, QuiverWithFaces, quiver_of

LEFT = "left"
RIGHT = "right"


def mutate_qp(quiver, vertex):
    """Mutation of a quiver with faces at a vertex.

    Arrows incident to the vertex are reversed; for every length-2 path
    ``a, b`` through the vertex, either the closing face arrow is removed
    together with its face, or a composite arrow is added together with a
    new face.
    """
    if vertex not in quiver.vertices:
        raise UnknownVertex(f"unknown vertex {vertex!r}")
    arrows = quiver.arrows
    into = [i for i, a in enumerate(arrows) if a.target == vertex]
    outof = [i for i, a in enumerate(arrows) if a.source == vertex]
    if set(into) & set(outof):
        raise InvariantViolation(f"loop at vertex {vertex!r}")

    removed_arrows = set()
    removed_faces = set()
    composites = []  # (a_idx, b_idx) for paths a then b through the vertex
    for ai in into:
        for bi in outof:
            face_idx = quiver.face_of_arrow.get(ai)
            closing = None
            if face_idx is not None:
                face = quiver.faces[face_idx]
                pos = face.index(ai)
                if face[(pos + 1) % 3] == bi:
                    closing = face[(pos + 2) % 3]
            if closing is not None:
                removed_arrows.add(closing)
                removed_faces.add(face_idx)
            else:
                composites.append((ai, bi))

    new_arrows = []
    new_index = {}
    for i, a in enumerate(arrows):
        if i in removed_arrows:
            continue
        if i in into or i in outof:
            new_index[i] = len(new_arrows)
            new_arrows.append(Arrow(a.target, a.source))  # reversed
        else:
            new_index[i] = len(new_arrows)
            new_arrows.append(Arrow(a.source, a.target))
    composite_index = {}
    for (ai, bi) in composites:
        composite_index[(ai, bi)] = len(new_arrows)
        new_arrows.append(Arrow(arrows[ai].source, arrows[bi].target))

    new_faces = []
    for fi, face in enumerate(quiver.faces):
        if fi in removed_faces:
            continue
        new_faces.append(tuple(new_index[ai] for ai in face))
    for (ai, bi) in composites:
        # cycle: composite (s(a) -> t(b)), then b* (t(b) -> v), then a* (v -> s(a))
        new_faces.append(
            (composite_index[(ai, bi)], new_index[bi], new_index[ai])
        )
    return QuiverWithFaces(quiver.vertices, new_arrows, new_faces)


@dataclass(frozen=True)
class GradedTriangulation:
    """A triangulation with a 1-degree map on its quiver."""

    triangulation: object
    quiver: QuiverWithFaces
    degree: DegreeMap

    @classmethod
    def make(cls, triangulation, degree):
        degree.require_one_degree()
        return cls(triangulation, degree.quiver, degree)


def graded_mutate(graded, arc, side=LEFT):
    """Flip and transport the grading along the mutation rules.

    Left mutation: reversed arrows out of the flipped vertex pick up the
    negated degree, reversed arrows into it pick up one minus the degree,
    composites add.  Right mutation uses the dual signs.  The result is
    again a 1-degree map.
    """
    if side not in (LEFT, RIGHT):
        raise InvariantViolation(f"side must be 'left' or 'right', got {side!r}")
    T = graded.triangulation
    t1, k1, t2, k2 = T.flip_layout(arc)
    flipped = T.flip(arc)
    new_quiver = quiver_of(flipped)

    old_at = {
        (a.triangle, a.corner): i for i, a in enumerate(graded.quiver.arrows)
    }

    def old_value(t, k):
        return graded.degree.values[old_at[(t, k % 3)]]

    values = []
    for a in new_quiver.arrows:
        t, k = a.triangle, a.corner
        if t not in (t1, t2):
            values.append(old_value(t, k))
            continue
        # flipped triangles: t1 = (b, c, arc-), t2 = (d, a, arc+)
        if t == t1 and k == 0:  # b -> c, composite of (b -> i)(i -> c)
            values.append(old_value(t1, k1 + 2) + old_value(t2, k2))
        elif t == t1 and k == 1:  # c -> i, reverse of i -> c (source side)
            v = old_value(t2, k2)
            values.append(-v if side == LEFT else 1 - v)
        elif t == t1 and k == 2:  # i -> b, reverse of b -> i (target side)
            v = old_value(t1, k1 + 2)
            values.append(1 - v if side == LEFT else -v)
        elif t == t2 and k == 0:  # d -> a, composite of (d -> i)(i -> a)
            values.append(old_value(t2, k2 + 2) + old_value(t1, k1))
        elif t == t2 and k == 1:  # a -> i, reverse of i -> a (source side)
            v = old_value(t1, k1)
            values.append(-v if side == LEFT else 1 - v)
        elif t == t2 and k == 2:  # i -> d, reverse of d -> i (target side)
            v = old_value(t2, k2 + 2)
            values.append(1 - v if side == LEFT else -v)
        else:
            raise InvariantViolation("unexpected arrow in flipped triangle")
    new_degree = DegreeMap(new_quiver, values)
    if not new_degree.is_one_degree():
        raise NotOneDegree("graded mutation broke the 1-degree property")
    return GradedTriangulation(flipped, new_quiver, new_degree)


def graded_mutate_sequence(graded, arcs, side=LEFT):
    for arc in arcs:
        graded = graded_mutate(graded, arc, side)
    return graded


@dataclass(frozen=True)
class FlipSequence:
    """A flip path plus the relabeling identifying its end with the target."""

    arcs: tuple
    # triangulation-level identification: final -> target
    arc_map: dict
    triangle_map: dict  # final triangle -> (target triangle, rotation offset)

    def __len__(self):
        return len(self.arcs)


def _compose_labelings(final, target):
    """Identification final -> target through their canonical labelings."""
    _, map_f = final.canonical_labeling()
    _, map_t = target.canonical_labeling()
    inv_arcs = {v: k for k, v in map_t["arcs"].items()}
    arc_map = {a: inv_arcs[n] for a, n in map_f["arcs"].items()}
    inv_tris = {pos: (t, rot) for t, (pos, rot) in map_t["triangles"].items()}
    triangle_map = {}
    for t, (pos, rot_f) in map_f["triangles"].items():
        t2, rot_t = inv_tris[pos]
        # slot (rot_f + j) in final corresponds to slot (rot_t + j) in target
        triangle_map[t] = (t2, (rot_t - rot_f) % 3)
    return arc_map, triangle_map


def flip_path(source, target, max_depth=10):
    """Breadth-first search for a flip sequence from ``source`` to ``target``.

    Returns a :class:`FlipSequence` or ``None`` when no path exists within
    the depth budget (absence within budget means "unknown", never
    "nonexistent").
    """
    if not source.surface.same_up_to_permutation(target.surface):
        raise SurfaceMismatch("the triangulations do not share a surface")
    goal = target.canonical_key()
    seen = {source.canonical_key()}
    frontier = deque([(source, ())])
    while frontier:
        current, path = frontier.popleft()
        if current.canonical_key() == goal:
            arc_map, triangle_map = _compose_labelings(current, target)
            return FlipSequence(arcs=path, arc_map=arc_map, triangle_map=triangle_map)
        if len(path) >= max_depth:
            continue
        for arc in current.arcs:
            nxt = current.flip(arc)
            key = nxt.canonical_key()
            if key in seen:
                continue
            seen.add(key)
            frontier.append((nxt, path + (arc,)))
    return None


def transport_degree(flip_sequence, graded, target_quiver):
    """Push a degree map on the final triangulation through the identification."""
    tri_map = flip_sequence.triangle_map
    target_at = {
        (a.triangle, a.corner): i for i, a in enumerate(target_quiver.arrows)
    }
    values = [None] * len(target_quiver.arrows)
    for i, a in enumerate(graded.quiver.arrows):
        t2, off = tri_map[a.triangle]
        j = target_at[(t2, (a.corner + off) % 3)]
        values[j] = graded.degree.values[i]
    if any(v is None for v in values):
        raise InvariantViolation("transport did not cover the target quiver")
    return DegreeMap(target_quiver, values)
