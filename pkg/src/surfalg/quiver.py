"""Quivers with faces, boundary complexes, degree maps and gentle presentations.

The quiver of a triangulation has the arcs as vertices and the oriented
angles as arrows.  Path composition is written left to right throughout:
the length-2 path ``ab`` traverses ``a`` first, then ``b``, and a face is
stored as a directed 3-cycle ``(a, b, c)`` in composition order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from . import snf
from .errors import (
    ArrowInTwoFaces,
    InvariantViolation,
    NotAdmissible,
    NotOneDegree,
    UnknownVertex,
)
from .surface import ArcSide


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    triangle: Optional[int] = None  # provenance when built from a triangulation
    corner: Optional[int] = None


def _make_labels(arrows):
    counts = {}
    labels = []
    for a in arrows:
        k = counts.get((a.source, a.target), 0)
        counts[(a.source, a.target)] = k + 1
        labels.append(f"{a.source}>{a.target}#{k}")
    return tuple(labels)


class QuiverWithFaces:
    """A quiver together with a set of oriented 3-cycle faces.

    ``faces`` are triples of arrow indices in composition order.  Each
    arrow may lie in at most one face.
    """

    def __init__(self, vertices, arrows, faces):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.faces = tuple(tuple(face) for face in faces)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise InvariantViolation("duplicate vertex labels")
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise UnknownVertex(f"arrow {a} uses an unknown vertex")
        self.labels = _make_labels(self.arrows)
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.face_of_arrow = {}
        for fi, face in enumerate(self.faces):
            if len(face) != 3:
                raise InvariantViolation("faces must be 3-cycles")
            for pos in range(3):
                a = self.arrows[face[pos]]
                b = self.arrows[face[(pos + 1) % 3]]
                if a.target != b.source:
                    raise InvariantViolation(f"face {fi} is not a directed cycle")
                if face[pos] in self.face_of_arrow:
                    raise ArrowInTwoFaces(
                        f"arrow {self.labels[face[pos]]} lies in two faces"
                    )
                self.face_of_arrow[face[pos]] = fi
        self.outgoing = {v: [] for v in self.vertices}
        self.incoming = {v: [] for v in self.vertices}
        for i, a in enumerate(self.arrows):
            self.outgoing[a.source].append(i)
            self.incoming[a.target].append(i)

    def arrow_label(self, i):
        return self.labels[i]

    def index_of_pair(self, source, target):
        """Index of the unique arrow source -> target (fixture convenience)."""
        hits = [
            i
            for i, a in enumerate(self.arrows)
            if a.source == source and a.target == target
        ]
        if len(hits) != 1:
            raise InvariantViolation(
                f"{len(hits)} arrows {source}->{target}; need exactly one"
            )
        return hits[0]

    def same_shape(self, other):
        return (
            self.vertices == other.vertices
            and [(a.source, a.target) for a in self.arrows]
            == [(a.source, a.target) for a in other.arrows]
            and self.faces == other.faces
        )

    def __repr__(self):
        return (
            f"QuiverWithFaces({len(self.vertices)} vertices, "
            f"{len(self.arrows)} arrows, {len(self.faces)} faces)"
        )


def quiver_of(triangulation):
    """The quiver with faces of a triangulation.

    One arrow per oriented angle (corner whose both sides are arcs), one
    face per internal triangle, the face cycle following the triangle's
    orientation.
    """
    arrows = []
    arrow_at = {}
    for t, tri in enumerate(triangulation.triangles):
        for k in range(3):
            s = tri[k]
            u = tri[(k + 1) % 3]
            if isinstance(s, ArcSide) and isinstance(u, ArcSide):
                arrow_at[(t, k)] = len(arrows)
                arrows.append(Arrow(s.label, u.label, triangle=t, corner=k))
    faces = []
    for t in triangulation.internal_triangles():
        faces.append((arrow_at[(t, 0)], arrow_at[(t, 1)], arrow_at[(t, 2)]))
    return QuiverWithFaces(sorted(triangulation.arcs), arrows, faces)


@dataclass(frozen=True)
class BoundaryComplex:
    """Integer boundary maps of the face/arrow/vertex complex."""

    quiver: QuiverWithFaces
    d1_matrix: tuple  # rows: arrows, cols: faces
    d0_matrix: tuple  # rows: vertices, cols: arrows


def boundary_complex(quiver):
    nv = len(quiver.vertices)
    na = len(quiver.arrows)
    nf = len(quiver.faces)
    vindex = {v: i for i, v in enumerate(quiver.vertices)}
    d0 = [[0] * na for _ in range(nv)]
    for j, a in enumerate(quiver.arrows):
        d0[vindex[a.target]][j] += 1
        d0[vindex[a.source]][j] -= 1
    d1 = [[0] * nf for _ in range(na)]
    for fi, face in enumerate(quiver.faces):
        for ai in face:
            d1[ai][fi] += 1
    for fi in range(nf):
        for vi in range(nv):
            if sum(d0[vi][ai] * d1[ai][fi] for ai in range(na)) != 0:
                raise InvariantViolation("d0 . d1 != 0")
    return BoundaryComplex(
        quiver=quiver,
        d1_matrix=tuple(tuple(r) for r in d1),
        d0_matrix=tuple(tuple(r) for r in d0),
    )


def h1_rank(complex_):
    """Rank of ker d0 / im d1, by integer (Smith normal form) elimination."""
    d0 = [list(r) for r in complex_.d0_matrix]
    d1 = [list(r) for r in complex_.d1_matrix]
    na = len(complex_.quiver.arrows)
    rank_d0 = snf.rank(d0) if d0 and d0[0] else 0
    rank_d1 = snf.rank(d1) if d1 and d1[0] else 0
    return (na - rank_d0) - rank_d1


class DegreeMap:
    """An integer value per arrow of a quiver."""

    def __init__(self, quiver, values):
        values = tuple(int(v) for v in values)
        if len(values) != len(quiver.arrows):
            raise InvariantViolation("one value per arrow required")
        self.quiver = quiver
        self.values = values

    @classmethod
    def zero(cls, quiver):
        return cls(quiver, [0] * len(quiver.arrows))

    @classmethod
    def from_labels(cls, quiver, mapping, default=0):
        unknown = set(mapping) - set(quiver.labels)
        if unknown:
            raise InvariantViolation(f"unknown arrow labels {sorted(unknown)}")
        return cls(
            quiver,
            [mapping.get(lab, default) for lab in quiver.labels],
        )

    @classmethod
    def from_pairs(cls, quiver, pairs, default=0):
        """Build from ``{(source, target): value}`` when arrows are simple."""
        values = [default] * len(quiver.arrows)
        for (s, t), v in pairs.items():
            values[quiver.index_of_pair(s, t)] = v
        return cls(quiver, values)

    def by_label(self):
        return {lab: v for lab, v in zip(self.quiver.labels, self.values)}

    def __getitem__(self, i):
        return self.values[i]

    def is_one_degree(self):
        return all(
            sum(self.values[ai] for ai in face) == 1 for face in self.quiver.faces
        )

    def is_admissible(self):
        if not self.is_one_degree():
            return False
        if any(v not in (0, 1) for v in self.values):
            return False
        for i, v in enumerate(self.values):
            if v == 1 and i not in self.quiver.face_of_arrow:
                return False
        return True

    def cut_arrows(self):
        return [i for i, v in enumerate(self.values) if v == 1]

    def require_one_degree(self):
        if not self.is_one_degree():
            raise NotOneDegree("degree map does not sum to 1 on every face")

    def require_admissible(self):
        if not self.is_admissible():
            raise NotAdmissible("degree map is not an admissible cut")

    def __eq__(self, other):
        return (
            isinstance(other, DegreeMap)
            and self.quiver.same_shape(other.quiver)
            and self.values == other.values
        )

    def __repr__(self):
        ones = [self.quiver.labels[i] for i, v in enumerate(self.values) if v]
        return f"DegreeMap({ones or 'zero'})"


def enumerate_admissible_cuts(quiver):
    """All admissible cuts: one arrow of value 1 per face, zero elsewhere."""
    for fi, face in enumerate(quiver.faces):
        for ai in face:
            if quiver.face_of_arrow.get(ai) != fi:
                raise ArrowInTwoFaces(
                    f"arrow {quiver.labels[ai]} lies in two faces"
                )
    cuts = []
    for choice in product(*[face for face in quiver.faces]) if quiver.faces else [()]:
        values = [0] * len(quiver.arrows)
        for ai in choice:
            values[ai] = 1
        cuts.append(DegreeMap(quiver, values))
    return cuts


@dataclass(frozen=True)
class GentlePresentation:
    """A quiver with a set of length-2 monomial relations.

    ``relations`` holds ordered pairs of arrow indices ``(i, j)`` meaning
    the composition "arrow i then arrow j" is declared zero.
    """

    vertices: tuple
    arrows: tuple
    relations: frozenset

    def __post_init__(self):
        for (i, j) in self.relations:
            if self.arrows[i].target != self.arrows[j].source:
                raise InvariantViolation("relation pair is not composable")

    @property
    def labels(self):
        return _make_labels(self.arrows)

    def relation_labels(self):
        labs = self.labels
        return sorted((labs[i], labs[j]) for (i, j) in self.relations)


def jacobian_presentation(quiver):
    """Relations are all length-2 subpaths of each face cycle."""
    relations = set()
    for face in quiver.faces:
        for pos in range(3):
            relations.add((face[pos], face[(pos + 1) % 3]))
    return GentlePresentation(
        vertices=quiver.vertices,
        arrows=quiver.arrows,
        relations=frozenset(relations),
    )


def surface_algebra_presentation(quiver, degree):
    """Degree-zero part of the graded algebra defined by an admissible cut.

    Arrows are the degree-0 arrows; each face contributes the one
    surviving length-2 subpath of its cycle as a relation.
    """
    degree.require_admissible()
    keep = [i for i, v in enumerate(degree.values) if v == 0]
    new_index = {old: new for new, old in enumerate(keep)}
    arrows = tuple(quiver.arrows[i] for i in keep)
    relations = set()
    for face in quiver.faces:
        cut_pos = [pos for pos in range(3) if degree.values[face[pos]] == 1]
        (pos,) = cut_pos
        a = face[(pos + 1) % 3]
        b = face[(pos + 2) % 3]
        relations.add((new_index[a], new_index[b]))
    return GentlePresentation(
        vertices=quiver.vertices, arrows=arrows, relations=frozenset(relations)
    )


def check_gentle(presentation):
    """Check all gentleness conditions; return ``(ok, diagnostics)``."""
    diags = []
    p = presentation
    outgoing = {}
    incoming = {}
    for i, a in enumerate(p.arrows):
        outgoing.setdefault(a.source, []).append(i)
        incoming.setdefault(a.target, []).append(i)
    for v in p.vertices:
        if len(outgoing.get(v, ())) > 2:
            diags.append(f"vertex {v} has more than two outgoing arrows")
        if len(incoming.get(v, ())) > 2:
            diags.append(f"vertex {v} has more than two incoming arrows")
    labs = p.labels
    for i, a in enumerate(p.arrows):
        conts = [j for j in outgoing.get(a.target, ()) ]
        rel = [j for j in conts if (i, j) in p.relations]
        nonrel = [j for j in conts if (i, j) not in p.relations]
        if len(rel) > 1:
            diags.append(f"arrow {labs[i]} has two relation continuations")
        if len(nonrel) > 1:
            diags.append(f"arrow {labs[i]} has two relation-free continuations")
        pres = [j for j in incoming.get(a.source, ())]
        rel = [j for j in pres if (j, i) in p.relations]
        nonrel = [j for j in pres if (j, i) not in p.relations]
        if len(rel) > 1:
            diags.append(f"arrow {labs[i]} has two relation predecessors")
        if len(nonrel) > 1:
            diags.append(f"arrow {labs[i]} has two relation-free predecessors")
    if not diags:
        # finite dimensionality: no relation-free directed cycle
        succ = {}
        for i, a in enumerate(p.arrows):
            nexts = [
                j
                for j in outgoing.get(a.target, ())
                if (i, j) not in p.relations
            ]
            if nexts:
                succ[i] = nexts[0]
        color = {}
        for start in succ:
            if start in color:
                continue
            path = []
            i = start
            while i in succ and color.get(i) is None:
                color[i] = "active"
                path.append(i)
                i = succ[i]
                if color.get(i) == "active":
                    diags.append(f"relation-free cycle through arrow {labs[i]}")
                    break
            for j in path:
                color[j] = "done"
    return (not diags, diags)


# ----------------------------------------------------------------------
# DOT export


def quiver_to_dot(quiver):
    lines = ["digraph quiver {"]
    for v in sorted(quiver.vertices):
        lines.append(f'  "{v}";')
    order = sorted(range(len(quiver.arrows)), key=lambda i: quiver.labels[i])
    for i in order:
        a = quiver.arrows[i]
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{quiver.labels[i]}"];')
    for fi, face in enumerate(quiver.faces):
        cyc = ",".join(quiver.labels[ai] for ai in face)
        lines.append(f"  // face {fi}: {cyc}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def presentation_to_dot(presentation):
    """Solid edges for arrows, dashed edges for length-2 relations."""
    labs = presentation.labels
    lines = ["digraph presentation {"]
    for v in sorted(presentation.vertices):
        lines.append(f'  "{v}";')
    order = sorted(range(len(presentation.arrows)), key=lambda i: labs[i])
    for i in order:
        a = presentation.arrows[i]
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{labs[i]}"];')
    for (li, lj) in presentation.relation_labels():
        i, j = labs.index(li), labs.index(lj)
        src = presentation.arrows[i].source
        tgt = presentation.arrows[j].target
        lines.append(
            f'  "{src}" -> "{tgt}" [style=dashed, label="{li}.{lj}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
