"""The gentle-algebra derived invariant, computed by three independent routes.

* :func:`ag_direct` runs the combinatorial thread walk on any gentle
  presentation: alternately follow a maximal relation-free path and walk
  backwards along a maximal all-relation path until the start repeats,
  emitting one ``(steps, relation_arrows)`` pair per cycle, plus one
  ``(0, k)`` pair per length-``k`` all-relation cycle.
* :func:`ag_formula` evaluates the closed-form boundary-component
  description for surface algebras (incidence counts plus local cuts).
* :func:`ag_weights` substitutes the boundary weights directly.

The three must agree on every admissible cut of every triangulation;
that agreement anchors the walk's trivial-thread conventions, which are
chosen here so that every vertex carries two "fan end" slots.
"""

from __future__ import annotations

from collections import Counter

from .curves import weight
from .errors import DiscSurface, InvariantViolation, NotAdmissible, NotGentle
from .quiver import check_gentle


def local_cuts(triangulation, degree):
    """Number of cut angles whose vertex lies on each boundary component."""
    degree.require_admissible()
    quiver = degree.quiver
    counts = [0] * len(triangulation.boundary_components)
    for i in degree.cut_arrows():
        arrow = quiver.arrows[i]
        if arrow.triangle is None:
            raise NotAdmissible("cut arrows lack triangulation provenance")
        point = triangulation.corner_point(arrow.triangle, arrow.corner)
        counts[point.component] += 1
    return tuple(counts)


def ag_formula(triangulation, degree):
    """One pair per boundary component from incidence counts and local cuts."""
    if triangulation.is_disc:
        raise DiscSurface("the boundary-component formula needs a non-disc surface")
    degree.require_admissible()
    stats = triangulation.boundary_statistics()
    cuts = local_cuts(triangulation, degree)
    pairs = Counter()
    for n_i, m_i, l_i in zip(stats.n_incident, stats.m_segments, cuts):
        pairs[(n_i + l_i, m_i + 2 * l_i)] += 1
    return pairs


def ag_weights(triangulation, degree, weights=None):
    """Pairs ``(p_i + w_i, p_i + 2 w_i)`` from the boundary weights."""
    if triangulation.is_disc:
        raise DiscSurface("boundary weights need a non-disc surface")
    if weights is None:
        weights = weight(triangulation, degree)
    p = triangulation.surface.marked_per_component
    if len(weights) != len(p):
        raise InvariantViolation("one weight per boundary component required")
    pairs = Counter()
    for p_i, w_i in zip(p, weights):
        pairs[(p_i + w_i, p_i + 2 * w_i)] += 1
    return pairs


# ----------------------------------------------------------------------
# the thread walk


class _Thread:
    __slots__ = ("kind", "arrows", "svert", "evert", "ssign", "esign")

    def __init__(self, kind, arrows, svert, evert, ssign=None, esign=None):
        self.kind = kind  # "permitted" | "forbidden"
        self.arrows = arrows  # tuple of arrow indices, empty for trivial
        self.svert = svert
        self.evert = evert
        self.ssign = ssign
        self.esign = esign

    @property
    def trivial(self):
        return not self.arrows

    def __repr__(self):
        return f"<{self.kind} {self.arrows or self.svert}>"


def _sign_functions(presentation, outgoing, incoming, composable):
    """Solve for sigma/epsilon in {+1, -1} per arrow.

    Constraints: arrows sharing a source disagree in sigma, arrows sharing
    a target disagree in epsilon, relation-composable pairs have
    ``sigma(next) = epsilon(prev)`` and relation-free pairs the opposite.
    """
    n = len(presentation.arrows)
    # nodes: 2*i = sigma(i), 2*i + 1 = epsilon(i); edges carry parity
    # (0 = equal, 1 = opposite)
    edges = {k: [] for k in range(2 * n)}

    def add(u, v, parity):
        edges[u].append((v, parity))
        edges[v].append((u, parity))

    for v in presentation.vertices:
        outs = outgoing.get(v, ())
        ins = incoming.get(v, ())
        if len(outs) == 2:
            add(2 * outs[0], 2 * outs[1], 1)
        if len(ins) == 2:
            add(2 * ins[0] + 1, 2 * ins[1] + 1, 1)
    for (i, j) in composable:
        parity = 0 if (i, j) in presentation.relations else 1
        add(2 * i + 1, 2 * j, parity)

    value = [None] * (2 * n)
    for start in range(2 * n):
        if value[start] is not None:
            continue
        value[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for (w, parity) in edges[u]:
                want = value[u] if parity == 0 else -value[u]
                if value[w] is None:
                    value[w] = want
                    stack.append(w)
                elif value[w] != want:
                    raise NotGentle("no consistent sign functions exist")
    sigma = [value[2 * i] for i in range(n)]
    epsilon = [value[2 * i + 1] for i in range(n)]
    return sigma, epsilon


def _pair_slots(perм=None):  # pragma: no cover - placeholder, replaced below
    raise NotImplementedError


def ag_direct(presentation):
    """Run the thread walk on a gentle presentation.

    Returns a multiset (Counter) of ordered pairs of naturals.
    """
    ok, diags = check_gentle(presentation)
    if not ok:
        raise NotGentle("; ".join(diags))
    arrows = presentation.arrows
    n = len(arrows)
    outgoing = {}
    incoming = {}
    for i, a in enumerate(arrows):
        outgoing.setdefault(a.source, []).append(i)
        incoming.setdefault(a.target, []).append(i)
    composable = [
        (i, j)
        for i, a in enumerate(arrows)
        for j in outgoing.get(a.target, ())
    ]
    rel_next = {}
    rel_prev = {}
    free_next = {}
    free_prev = {}
    for (i, j) in composable:
        if (i, j) in presentation.relations:
            rel_next[i] = j
            rel_prev[j] = i
        else:
            free_next[i] = j
            free_prev[j] = i

    # all-relation cycles are reported as (0, length) and excluded from threads
    on_cycle = set()
    cycles = []
    state = {}
    for start in range(n):
        if start in state:
            continue
        path = []
        i = start
        while i is not None and i not in state:
            state[i] = start
            path.append(i)
            i = rel_next.get(i)
        if i is not None and state[i] == start and i in path:
            cyc = path[path.index(i):]
            cycles.append(cyc)
            on_cycle.update(cyc)

    def grow(first, step):
        chain = [first]
        while chain[-1] in step:
            chain.append(step[chain[-1]])
        return tuple(chain)

    permitted = []
    for i in range(n):
        if i not in free_prev:
            chain = grow(i, free_next)
            permitted.append(
                _Thread(
                    "permitted",
                    chain,
                    arrows[chain[0]].source,
                    arrows[chain[-1]].target,
                )
            )
    forbidden = []
    for i in range(n):
        if i in on_cycle:
            continue
        if i not in rel_prev:
            chain = grow(i, rel_next)
            forbidden.append(
                _Thread(
                    "forbidden",
                    chain,
                    arrows[chain[0]].source,
                    arrows[chain[-1]].target,
                )
            )

    # trivial threads: each vertex carries two fan-end slots; arrows and
    # relation-free turns occupy them, the remainder are trivial threads.
    for v in presentation.vertices:
        ins = incoming.get(v, ())
        outs = outgoing.get(v, ())
        free_pairs = sum(
            1 for i in ins for j in outs if (i, j) not in presentation.relations
        )
        rel_pairs = sum(
            1 for i in ins for j in outs if (i, j) in presentation.relations
        )
        t_perm = 2 - len(ins) - len(outs) + free_pairs
        t_forb = 2 - len(ins) - len(outs) + rel_pairs
        if t_perm < 0 or t_forb < 0:
            raise NotGentle(f"vertex {v} is overloaded")
        for _ in range(t_perm):
            permitted.append(_Thread("permitted", (), v, v))
        for _ in range(t_forb):
            forbidden.append(_Thread("forbidden", (), v, v))

    if presentation.arrows or presentation.vertices:
        sigma, epsilon = _sign_functions(
            presentation, outgoing, incoming, composable
        )
    else:
        sigma = epsilon = []
    for th in permitted + forbidden:
        if th.arrows:
            th.ssign = sigma[th.arrows[0]]
            th.esign = epsilon[th.arrows[-1]]

    end_pair = _match(
        permitted,
        forbidden,
        key=lambda th: th.evert,
        sign=lambda th: th.esign,
        crossed=False,
    )
    start_pair = _match(
        forbidden,
        permitted,
        key=lambda th: th.svert,
        sign=lambda th: th.ssign,
        crossed=True,
    )

    result = Counter()
    unused = list(range(len(permitted)))
    position = {id(th): k for k, th in enumerate(permitted)}
    used = set()
    for k in range(len(permitted)):
        if k in used:
            continue
        steps = 0
        rel_arrows = 0
        h = permitted[k]
        while True:
            used.add(position[id(h)])
            f = end_pair[id(h)]
            rel_arrows += len(f.arrows)
            h = start_pair[id(f)]
            steps += 1
            if h is permitted[k]:
                break
            if position[id(h)] in used:
                raise InvariantViolation("thread walk revisited a permitted thread")
        result[(steps, rel_arrows)] += 1
    for cyc in cycles:
        result[(0, len(cyc))] += 1
    return result


def _match(side_a, side_b, key, sign, crossed):
    """Pair each thread of ``side_a`` with one of ``side_b`` at the same
    vertex and opposite sign; trivial threads absorb whatever remains.

    ``crossed`` offsets trivial-trivial pairing by one position, which is
    what closes the walk across the two fan ends of an isolated vertex.
    """
    by_vertex_a = {}
    by_vertex_b = {}
    for th in side_a:
        by_vertex_a.setdefault(key(th), []).append(th)
    for th in side_b:
        by_vertex_b.setdefault(key(th), []).append(th)
    if set(by_vertex_a) != set(by_vertex_b):
        raise InvariantViolation("thread ends do not balance across vertices")
    pairing = {}
    for v, items_a in sorted(by_vertex_a.items()):
        items_b = by_vertex_b[v]
        if len(items_a) != len(items_b):
            raise InvariantViolation(f"thread ends do not balance at vertex {v}")
        known_a = [t for t in items_a if sign(t) is not None]
        known_b = [t for t in items_b if sign(t) is not None]
        trivial_a = [t for t in items_a if sign(t) is None]
        trivial_b = [t for t in items_b if sign(t) is None]
        remaining_b = list(known_b)
        matched = {}
        for ta in known_a:
            partner = [tb for tb in remaining_b if sign(tb) == -sign(ta)]
            if partner:
                matched[id(ta)] = partner[0]
                remaining_b.remove(partner[0])
            else:
                if not trivial_b:
                    raise InvariantViolation(
                        f"no partner with opposite sign at vertex {v}"
                    )
                matched[id(ta)] = trivial_b.pop(0)
        leftovers_b = remaining_b + trivial_b
        if len(trivial_a) != len(leftovers_b):
            raise InvariantViolation(f"unbalanced trivial threads at vertex {v}")
        if crossed and len(trivial_a) > 1 and all(
            tb.arrows == () for tb in leftovers_b
        ):
            for idx, ta in enumerate(trivial_a):
                matched[id(ta)] = leftovers_b[(idx + 1) % len(leftovers_b)]
        else:
            for ta, tb in zip(trivial_a, leftovers_b):
                matched[id(ta)] = tb
        for ta in items_a:
            pairing[id(ta)] = matched[id(ta)]
    return pairing


def serialize_invariant(pairs):
    """Sorted ``[n, m, count]`` triples."""
    return [[n, m, pairs[(n, m)]] for (n, m) in sorted(pairs)]
