"""Curve classes, weights, and the coboundary equivalence test.

A closed curve transversal to the triangulation determines an integer
vector over the arrows: each corner traversal counts +1 or -1 against
the angle's arrow depending on direction.  Boundary curves have a
closed-form class that needs no explicit curve word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DiscSurface,
    GeneratorCountMismatch,
    InvalidWord,
    InvariantViolation,
    QuiverMismatch,
)
from .quiver import DegreeMap, QuiverWithFaces
from .surface import ArcSide


@dataclass(frozen=True)
class CurveClass:
    """Integer coefficients per arrow of a quiver."""

    quiver: QuiverWithFaces
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != len(self.quiver.arrows):
            raise InvariantViolation("one coefficient per arrow required")

    def __neg__(self):
        return CurveClass(self.quiver, tuple(-c for c in self.coefficients))

    def in_kernel_d0(self):
        balance = {v: 0 for v in self.quiver.vertices}
        for c, a in zip(self.coefficients, self.quiver.arrows):
            balance[a.target] += c
            balance[a.source] -= c
        return all(x == 0 for x in balance.values())

    def by_label(self):
        return {
            lab: c
            for lab, c in zip(self.quiver.labels, self.coefficients)
            if c != 0
        }


def evaluate(degree, curve_class):
    """Pairing <degree, curve class>."""
    return sum(v * c for v, c in zip(degree.values, curve_class.coefficients))


def boundary_curve_class(triangulation, quiver, index):
    """Class of the simple closed curve around boundary component ``index``.

    Uses the embedding-free sign rule: an angle whose two sides are not
    boundary-homotopic contributes +1 to the component of its vertex; if
    additionally the opposite side is boundary-homotopic, it contributes
    -1 to the component that side cuts a disc from.
    """
    if triangulation.is_disc:
        raise DiscSurface("boundary curve classes need a non-disc surface")
    if not 0 <= index < len(triangulation.boundary_components):
        raise InvariantViolation(f"no boundary component {index}")
    coeffs = [0] * len(quiver.arrows)
    for i, arrow in enumerate(quiver.arrows):
        t, k = arrow.triangle, arrow.corner
        if t is None:
            raise QuiverMismatch("quiver arrows lack triangulation provenance")
        g1 = triangulation.side(t, k)
        g2 = triangulation.side(t, k + 1)
        g3 = triangulation.side(t, k + 2)
        if triangulation.is_boundary_homotopic(g1.label) or triangulation.is_boundary_homotopic(g2.label):
            continue
        if triangulation.corner_point(t, k).component == index:
            coeffs[i] += 1
        g3label = g3.label
        comp = (
            triangulation.segment_component(g3label)
            if not isinstance(g3, ArcSide)
            else triangulation.bh_component(g3label)
        )
        if comp == index:
            coeffs[i] -= 1
    cls = CurveClass(quiver, tuple(coeffs))
    if not cls.in_kernel_d0():
        raise InvariantViolation("boundary curve class is not a cycle")
    return cls


def all_boundary_curve_classes(triangulation, quiver):
    return [
        boundary_curve_class(triangulation, quiver, i)
        for i in range(len(triangulation.boundary_components))
    ]


def curve_class_of_word(triangulation, quiver, word):
    """Class of a user-supplied closed transversal curve word.

    ``word`` is a cyclic list of ``(triangle, in_slot, out_slot)``
    traversals; consecutive traversals must cross the same arc (the exit
    slot of one step glues to the entry slot of the next).
    """
    word = [tuple(step) for step in word]
    coeffs = [0] * len(quiver.arrows)
    if not word:
        return CurveClass(quiver, tuple(coeffs))
    arrow_at = {
        (a.triangle, a.corner): i for i, a in enumerate(quiver.arrows)
    }
    n = len(word)
    for step in word:
        t, x, y = step
        if not (0 <= t < len(triangulation.triangles)):
            raise InvalidWord(f"no triangle {t}")
        if x == y or x not in (0, 1, 2) or y not in (0, 1, 2):
            raise InvalidWord(f"step {step} does not cross two distinct sides")
        for slot in (x, y):
            if not isinstance(triangulation.side(t, slot), ArcSide):
                raise InvalidWord(f"step {step} crosses a boundary segment")
    for idx in range(n):
        t, x, y = word[idx]
        t2, x2, y2 = word[(idx + 1) % n]
        if triangulation.partner(t, y) != (t2, x2):
            raise InvalidWord(
                f"steps {idx} and {(idx + 1) % n} do not share a crossed arc"
            )
    for (t, x, y) in word:
        if y == (x + 1) % 3:
            coeffs[arrow_at[(t, x)]] += 1
        else:
            coeffs[arrow_at[(t, y)]] -= 1
    cls = CurveClass(quiver, tuple(coeffs))
    if not cls.in_kernel_d0():
        raise InvariantViolation("curve word class is not a cycle")
    return cls


def weight(triangulation, degree, generators=None):
    """Weight tuple of a 1-degree map against a generator system.

    With ``generators=None`` (genus 0 only) the boundary curve system is
    used, yielding one entry per boundary component.  For positive genus
    the caller must supply all ``2g + b`` curve classes.
    """
    if triangulation.is_disc:
        raise DiscSurface("weights need a non-disc surface")
    degree.require_one_degree()
    g = triangulation.surface.genus
    b = len(triangulation.boundary_components)
    if generators is None:
        if g != 0:
            raise GeneratorCountMismatch(
                "a generator system is required when the genus is positive"
            )
        generators = all_boundary_curve_classes(triangulation, degree.quiver)
    else:
        generators = list(generators)
        if len(generators) != 2 * g + b:
            raise GeneratorCountMismatch(
                f"need {2 * g + b} generators, got {len(generators)}"
            )
    return tuple(evaluate(degree, cls) for cls in generators)


def coboundary_witness(quiver, degree, degree2):
    """A vertex potential ``r`` with ``degree - degree2 = d0*(r)``, if any.

    Returns a dict over vertices or ``None``.  Existence is equivalent to
    equal weights (for any generating system), i.e. graded equivalence via
    the identity.
    """
    if not quiver.same_shape(degree.quiver) or not quiver.same_shape(degree2.quiver):
        raise QuiverMismatch("degree maps live on different quivers")
    degree.require_one_degree()
    degree2.require_one_degree()
    delta = [a - b for a, b in zip(degree.values, degree2.values)]
    r = {}
    adjacency = {v: [] for v in quiver.vertices}
    for i, a in enumerate(quiver.arrows):
        adjacency[a.source].append((a.target, delta[i]))
        adjacency[a.target].append((a.source, -delta[i]))
    for anchor in quiver.vertices:
        if anchor in r:
            continue
        r[anchor] = 0
        stack = [anchor]
        while stack:
            v = stack.pop()
            for (w, d) in adjacency[v]:
                if w not in r:
                    r[w] = r[v] + d
                    stack.append(w)
                elif r[w] != r[v] + d:
                    return None
    for i, a in enumerate(quiver.arrows):
        if r[a.target] - r[a.source] != delta[i]:
            return None
    return r


def apply_coboundary(degree, r):
    """The 1-degree map ``degree + d0*(r)``."""
    values = [
        v + r.get(a.target, 0) - r.get(a.source, 0)
        for v, a in zip(degree.values, degree.quiver.arrows)
    ]
    return DegreeMap(degree.quiver, values)
