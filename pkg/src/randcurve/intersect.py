"""Geometric intersection numbers of closed edge-paths on ribbon graphs.

Two strands passing through a vertex of the thickened graph cross exactly
when their four ends interleave in the circular order that the fattening
induces on the ends of the universal cover (a tree).  Ends are compared by
walking dart itineraries until they diverge and reading the vertex cyclic
order at the divergence point, so every crossing decision is a finite
computation.  The linked-pair count of a primitive cyclically reduced path
is its geometric self-intersection number; a proper power w^k is handled by
the k-parallel-strand cable model, contributing k^2 crossings per base
crossing plus k-1 for closing the cable.

``brute_min_crossings`` is an independent oracle: it minimizes chord
crossings over every band-consistent strand ordering of the same diagram.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .ribbon import RibbonGraph
from .words import CyclicWord, Word, WordError, cyclic_reduce


class IntersectionError(ValueError):
    pass


class BudgetExceeded(IntersectionError):
    pass


@dataclass(frozen=True)
class EdgePath:
    """Closed, freely reduced dart path on a ribbon graph."""

    graph: RibbonGraph
    darts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "darts", tuple(self.darts))
        g = self.graph
        n = len(self.darts)
        for i, d in enumerate(self.darts):
            if not 0 <= d < g.dart_count:
                raise IntersectionError(f"dart {d} not in graph")
            nd = self.darts[(i + 1) % n]
            if g.vertex_of[g.pair[d]] != g.vertex_of[nd]:
                raise IntersectionError("path darts are not head-to-tail")
            if nd == g.pair[d]:
                raise IntersectionError("path backtracks")

    @classmethod
    def from_word(cls, w: Word | CyclicWord, g: RibbonGraph) -> "EdgePath":
        c = w if isinstance(w, CyclicWord) else cyclic_reduce(w)
        if len(c) == 0:
            raise IntersectionError("trivial word carries no closed path")
        return cls(g, tuple(g.dart_for_letter(x) for x in c.letters))

    def __len__(self) -> int:
        return len(self.darts)

    def primitive_root(self) -> tuple["EdgePath", int]:
        d = self.darts
        n = len(d)
        for p in range(1, n + 1):
            if n % p == 0 and d == d[:p] * (n // p):
                return EdgePath(self.graph, d[:p]), n // p
        raise AssertionError("unreachable")

    def inverse(self) -> "EdgePath":
        g = self.graph
        return EdgePath(g, tuple(g.pair[d] for d in reversed(self.darts)))

    def class_key(self):
        """Canonical key of the unoriented free homotopy class."""
        best = None
        for darts in (self.darts, self.inverse().darts):
            for i in range(len(darts)):
                rot = darts[i:] + darts[:i]
                if best is None or rot < best:
                    best = rot
        return best


def edge_path(w: Word | CyclicWord, g: RibbonGraph) -> EdgePath:
    return EdgePath.from_word(w, g)


# --- ray machinery ---------------------------------------------------------
#
# A ray is a callable j -> dart: the j-th outgoing dart along an infinite
# reduced path in the universal cover, based at a common lift of a vertex.

def _forward_ray(darts, s):
    n = len(darts)

    def at(j):
        return darts[(s + j) % n]

    return at


def _backward_ray(darts, pair, s):
    n = len(darts)

    def at(j):
        return pair[darts[(s - 1 - j) % n]]

    return at


def _divergence(r1, r2, cap):
    """First index where the rays differ, or None if equal up to cap."""
    for j in range(cap):
        if r1(j) != r2(j):
            return j
    return None


def _orient(g: RibbonGraph, u, v, w, cap) -> int:
    """Circular orientation of three distinct ends seen from the basepoint.

    The three rays span a tripod; at its center the rays (or the back-dart
    toward the branch that split off earlier) leave along three distinct
    darts of one vertex, whose cyclic order decides the orientation.
    """
    duv = _divergence(u, v, cap)
    duw = _divergence(u, w, cap)
    dvw = _divergence(v, w, cap)
    if duv is None or duw is None or dvw is None:
        raise AssertionError("rays required to be distinct did not diverge")
    m = min(duv, duw, dvw)
    if duv > m:
        return g.cyc_orient(u(duv), v(duv), g.pair[u(duv - 1)])
    if duw > m:
        return g.cyc_orient(u(duw), g.pair[u(duw - 1)], w(duw))
    if dvw > m:
        return g.cyc_orient(g.pair[v(dvw - 1)], v(dvw), w(dvw))
    return g.cyc_orient(u(m), v(m), w(m))


def _linked(g, chord1, chord2, cap, equal_threshold=None) -> bool:
    """Whether two chords (pairs of ends) strictly interleave.

    ``equal_threshold``: when set, ray pairs agreeing to that depth count as
    equal ends, and chords sharing an end never cross.
    """
    p, q = chord1
    s, t = chord2
    if equal_threshold is not None:
        for a in (p, q):
            for b in (s, t):
                if _divergence(a, b, equal_threshold) is None:
                    return False
    return _orient(g, p, s, q, cap) != _orient(g, p, t, q, cap)


def _linked_positions(path: EdgePath, i: int, j: int, cap) -> bool:
    g = path.graph
    d = path.darts
    chord1 = (_backward_ray(d, g.pair, i), _forward_ray(d, i))
    chord2 = (_backward_ray(d, g.pair, j), _forward_ray(d, j))
    return _linked(g, chord1, chord2, cap)


def _overlap_size(g, rays1, rays2, cap) -> int:
    """Number of vertices the two based lines share.

    Two crossing lines in the universal cover meet in a segment; a crossing
    pair is seen once per shared vertex when enumerated through vertex
    passages, so counts are weighted by the segment size.  The segment
    extends backward while the backward ray of line 1 agrees with either ray
    of line 2, and forward likewise.
    """
    b1, f1 = rays1
    b2, f2 = rays2

    def extent(r, a, b):
        da = _divergence(r, a, cap)
        db = _divergence(r, b, cap)
        if da is None or db is None:
            raise AssertionError("distinct lines overlap beyond cap")
        return max(da, db)

    return 1 + extent(b1, b2, f2) + extent(f1, b2, f2)


def primitive_self_count(path: EdgePath) -> int:
    """Reference self-intersection of a primitive path (scalar loops).

    Sums 1/overlap over linked vertex-passage pairs; the total is the number
    of crossing line-pair orbits, i.e. the geometric count.
    """
    from fractions import Fraction

    g = path.graph
    d = path.darts
    n = len(d)
    cap = 2 * n + 4
    total = Fraction(0)
    vertex_of = g.vertex_of
    for i in range(n):
        vi = vertex_of[d[i]]
        rays_i = (_backward_ray(d, g.pair, i), _forward_ray(d, i))
        for j in range(i + 1, n):
            if vertex_of[d[j]] != vi:
                continue
            rays_j = (_backward_ray(d, g.pair, j), _forward_ray(d, j))
            if _linked(g, rays_i, rays_j, cap):
                total += Fraction(1, _overlap_size(g, rays_i, rays_j, cap))
    if total.denominator != 1:
        raise AssertionError("non-integral crossing count: invariant violated")
    return int(total)


def linked_pair_matrix(path: EdgePath) -> list[list[bool]]:
    """Symmetric matrix of linked position pairs of a primitive path."""
    g = path.graph
    d = path.darts
    n = len(d)
    cap = 2 * n + 4
    out = [[False] * n for _ in range(n)]
    for i in range(n):
        vi = g.vertex_of[d[i]]
        for j in range(i + 1, n):
            if g.vertex_of[d[j]] == vi and _linked_positions(path, i, j, cap):
                out[i][j] = out[j][i] = True
    return out


def _primitive_count(path: EdgePath) -> int:
    n = len(path)
    if n == 1:
        return 0
    if path.graph.vertex_count == 1 and n >= 8:
        from ._fastint import rose_self_count

        return rose_self_count(path)
    return primitive_self_count(path)


def self_intersection(p: EdgePath) -> int:
    """Geometric self-intersection number of the class carried by ``p``."""
    if len(p) == 0:
        raise IntersectionError("trivial path has no self-intersection number")
    root, k = p.primitive_root()
    base = _primitive_count(root)
    if k == 1:
        return base
    return k * k * base + (k - 1)


def intersection(p: EdgePath, q: EdgePath) -> int:
    """Geometric intersection number of two distinct unoriented classes."""
    if len(p) == 0 or len(q) == 0:
        raise IntersectionError("trivial path")
    if p.graph is not q.graph and p.graph.label != q.graph.label:
        raise IntersectionError("paths live on different graphs")
    if p.class_key() == q.class_key():
        raise IntersectionError(
            "classes agree up to conjugacy and inversion; use self_intersection")
    from fractions import Fraction

    g = p.graph
    ru, k = p.primitive_root()
    rv, m = q.primitive_root()
    du, dv = ru.darts, rv.darts
    nu, nv = len(du), len(dv)
    cap = 2 * (nu + nv) + 4
    threshold = nu + nv
    total = Fraction(0)
    for i in range(nu):
        vi = g.vertex_of[du[i]]
        chord1 = (_backward_ray(du, g.pair, i), _forward_ray(du, i))
        for j in range(nv):
            if g.vertex_of[dv[j]] != vi:
                continue
            chord2 = (_backward_ray(dv, g.pair, j), _forward_ray(dv, j))
            if _linked(g, chord1, chord2, cap, equal_threshold=threshold):
                total += Fraction(1, _overlap_size(g, chord1, chord2, cap))
    if total.denominator != 1:
        raise AssertionError("non-integral crossing count: invariant violated")
    return k * m * int(total)


# --- band-diagram oracle ---------------------------------------------------

def _chord_positions(paths, g, heights):
    """Circle positions of all chord endpoints, one circle per vertex.

    ``heights[(edge, traversal)]`` totally orders the traversals of each
    edge; on the zone of the smaller dart the endpoints appear in ascending
    height, on the paired zone in descending height (the flip that makes the
    band gluing orientable).
    """
    zone_entries = {d: [] for d in range(g.dart_count)}
    for pi, path in enumerate(paths):
        d = path.darts
        n = len(d)
        for t in range(n):
            out_dart = d[t]
            prev = d[(t - 1) % n]
            in_dart = g.pair[prev]
            e_out = min(out_dart, g.pair[out_dart])
            e_in = min(prev, g.pair[prev])
            zone_entries[out_dart].append((heights[(e_out, (pi, t))], (pi, t, 0)))
            zone_entries[in_dart].append((heights[(e_in, (pi, (t - 1) % n))], (pi, t, 1)))
    endpoint_pos = {}
    for vi, cyc in enumerate(g.vertices):
        pos = 0
        for dart in cyc:
            entries = zone_entries[dart]
            ascending = dart == min(dart, g.pair[dart])
            entries.sort(key=lambda e: e[0], reverse=not ascending)
            for _, key in entries:
                endpoint_pos[key] = (vi, pos)
                pos += 1
    chords_by_vertex = {}
    for pi, path in enumerate(paths):
        for t in range(len(path.darts)):
            vi, a = endpoint_pos[(pi, t, 0)]
            vj, b = endpoint_pos[(pi, t, 1)]
            assert vi == vj
            chords_by_vertex.setdefault(vi, []).append((min(a, b), max(a, b)))
    return chords_by_vertex


def _count_crossings(chords_by_vertex) -> int:
    total = 0
    for chords in chords_by_vertex.values():
        m = len(chords)
        for i in range(m):
            a1, b1 = chords[i]
            for j in range(i + 1, m):
                a2, b2 = chords[j]
                if a1 < a2 < b1 < b2 or a2 < a1 < b2 < b1:
                    total += 1
    return total


def brute_min_crossings(paths, g: RibbonGraph | None = None, budget: int = 8) -> int:
    """Minimum total crossings over all band-consistent strand orderings.

    Accepts one EdgePath or a sequence; the total includes crossings between
    different paths.  Exhausts every per-edge total order of traversals
    (factorial in the multiplicity), so each edge may carry at most
    ``budget`` traversals.
    """
    if isinstance(paths, EdgePath):
        paths = [paths]
    paths = list(paths)
    if not paths:
        raise IntersectionError("no paths given")
    if g is None:
        g = paths[0].graph
    traversals = {}
    for pi, path in enumerate(paths):
        if len(path) == 0:
            raise IntersectionError("trivial path")
        for t, d in enumerate(path.darts):
            e = min(d, g.pair[d])
            traversals.setdefault(e, []).append((pi, t))
    for e, ts in traversals.items():
        if len(ts) > budget:
            raise BudgetExceeded(
                f"edge {e} has {len(ts)} traversals, budget {budget}")
    edges = sorted(traversals)
    best = None

    def rec(idx, heights):
        nonlocal best
        if idx == len(edges):
            cost = _count_crossings(_chord_positions(paths, g, heights))
            if best is None or cost < best:
                best = cost
            return
        e = edges[idx]
        ts = traversals[e]
        for order in permutations(range(len(ts))):
            for h, tk in zip(order, ts):
                heights[(e, tk)] = h
            rec(idx + 1, heights)

    rec(0, {})
    return best


# --- spiraling -------------------------------------------------------------

def _axis_side(g, ray, axf, axb, cap):
    """Side of the core axis a ray escapes toward (+1/-1), None if the ray
    is an end of the axis itself.

    The side is the orientation of (axis-forward, ray, axis-backward) at the
    divergence vertex; it is constant on each complementary component.
    """
    df = _divergence(ray, axf, cap)
    db = _divergence(ray, axb, cap)
    if df is None or db is None:
        return None
    if df >= db:
        fwd = axf(df)
        back = g.pair[axf(df - 1)] if df > 0 else axb(0)
        return g.cyc_orient(fwd, ray(df), back)
    fwd = g.pair[axb(db - 1)]
    return g.cyc_orient(fwd, ray(db), axb(db))


def _translate_ray(g, core, j, ray):
    """Reduced left product core^j * ray as a new ray (core given as darts)."""
    mcore = len(core)
    m = mcore * j
    kappa = 0
    while kappa < m and ray(kappa) == g.pair[core[(m - 1 - kappa) % mcore]]:
        kappa += 1
    shift = m - 2 * kappa

    def at(idx):
        if idx < m - kappa:
            return core[idx % mcore]
        return ray(idx - shift)

    return at


def _lift_crossings(g, core, eta_minus, eta_plus, j_max, cap):
    count = 0
    for j in range(1, j_max + 1):
        t_minus = _translate_ray(g, core, j, eta_minus)
        t_plus = _translate_ray(g, core, j, eta_plus)
        if _linked(g, (eta_minus, eta_plus), (t_minus, t_plus), cap,
                   equal_threshold=cap):
            count += 1
    return count


def spiraling(gamma: CyclicWord, alpha: CyclicWord, g: RibbonGraph) -> int:
    """Maximal self-crossing count of a lift of ``gamma`` to the annular
    cover around ``alpha`` whose two ends escape through a common end.

    Lifts touching the core axis are enumerated through the rotations of
    ``gamma``; lifts that never meet the axis are embedded next to one end
    and contribute 0.  The crossings of a lift are the core-translates of it
    that link it, counted once per translate pair.
    """
    if len(alpha) == 0 or len(gamma) == 0:
        raise WordError("spiraling needs nontrivial curves")
    alpha_path = EdgePath.from_word(alpha, g)
    if self_intersection(alpha_path) != 0:
        raise IntersectionError("spiraling core must be simple")
    root_a, _ = alpha.primitive_root()
    root_g, _ = gamma.primitive_root()
    if root_g.letters in (root_a.letters, root_a.inverse().letters):
        raise IntersectionError("curve is a power of a conjugate of the core")

    darts = tuple(g.dart_for_letter(x) for x in gamma.letters)
    core = tuple(g.dart_for_letter(x) for x in root_a.letters)
    if len(core) == 1:
        return _spiraling_generator(g, darts, core[0])

    L = len(darts)
    j_max = L + 2
    cap = 2 * (j_max * len(core) + L) + 8
    core_rev = tuple(g.pair[d] for d in reversed(core))
    axf = _forward_ray(core, 0)
    axb = _forward_ray(core_rev, 0)
    best = 0
    for i in range(L):
        eta_plus = _forward_ray(darts, i)
        eta_minus = _backward_ray(darts, g.pair, i)
        side_p = _axis_side(g, eta_plus, axf, axb, cap)
        side_m = _axis_side(g, eta_minus, axf, axb, cap)
        if side_p is None or side_m is None or side_p != side_m:
            continue
        best = max(best, _lift_crossings(g, core, eta_minus, eta_plus, j_max, cap))
    return best


def _spiraling_generator(g, darts, core_dart) -> int:
    """Fast path for a one-edge core: only maximal core-runs can spiral.

    A lift through a run of length m winds m times around the core; its two
    ends escape through a common end exactly when the darts flanking the run
    fall on the same side of the axis, and such a lift crosses its
    translates either m-1 or m times.  Only maximal-length candidates need
    the exact translate count.
    """
    L = len(darts)
    pair = g.pair
    axis = (core_dart, pair[core_dart])
    if all(d in axis for d in darts):
        raise IntersectionError("curve is a power of a conjugate of the core")

    def side(d):
        return g.cyc_orient(core_dart, d, pair[core_dart])

    start0 = next(i for i in range(L) if darts[i] not in axis)
    runs = []
    run_start, run_len = 0, 0
    for off in range(1, L + 1):
        i = (start0 + off) % L
        if darts[i] in axis:
            if run_len == 0:
                run_start = i
            run_len += 1
        else:
            if run_len:
                runs.append((run_start, run_len))
            run_len = 0

    candidates = []
    for start, m in runs:
        before = darts[(start - 1) % L]
        after = darts[(start + m) % L]
        if side(pair[before]) == side(after):
            candidates.append((start, m))
    if not candidates:
        return 0
    m_max = max(m for _, m in candidates)
    cap = 2 * L + 2 * m_max + 8
    core = (core_dart,)
    for start, m in candidates:
        if m != m_max:
            continue
        eta_plus = _forward_ray(darts, start)
        eta_minus = _backward_ray(darts, pair, start)
        if _lift_crossings(g, core, eta_minus, eta_plus, m_max, cap) == m_max:
            return m_max
    return m_max - 1
