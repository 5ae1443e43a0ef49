"""Simple lifting degree by exhaustive search, and subgroup-counting
formulas with enumeration cross-checks.

``hall_count`` evaluates Hall's recursion for the number of index-d
subgroups of a free group; ``mednykh_count`` evaluates the character-sum
recursion for closed surface groups, with irreducible degrees from the hook
length formula.  Both are exact integer computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial

from .intersect import EdgePath, linked_pair_matrix, self_intersection
from .ribbon import PermRep, RibbonGraph
from .words import CyclicWord, WordError


class CoverSearchError(ValueError):
    pass


# --- partitions and character degrees --------------------------------------

@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if any(p <= 0 for p in self.parts):
            raise ValueError("partition parts must be positive")
        if any(self.parts[i] < self.parts[i + 1] for i in range(len(self.parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.parts)


def partitions(d: int) -> list[Partition]:
    """All partitions of d, parts weakly decreasing."""
    out = []

    def rec(remaining, maxpart, acc):
        if remaining == 0:
            out.append(Partition(tuple(acc)))
            return
        for p in range(min(maxpart, remaining), 0, -1):
            acc.append(p)
            rec(remaining - p, p, acc)
            acc.pop()

    rec(d, d, [])
    return out


def hook_degree(lam: Partition) -> int:
    """Degree of the irreducible character of S_d indexed by ``lam``
    (hook length formula, exact)."""
    parts = lam.parts
    d = lam.size
    conj = [0] * (parts[0] if parts else 0)
    for p in parts:
        for j in range(p):
            conj[j] += 1
    hooks = 1
    for i, p in enumerate(parts):
        for j in range(p):
            hooks *= (p - j) + (conj[j] - i) - 1
    deg, rem = divmod(factorial(d), hooks)
    if rem:
        raise AssertionError("hook product does not divide d!")
    return deg


# --- counting formulas ------------------------------------------------------

@lru_cache(maxsize=None)
def hall_count(r: int, d: int) -> int:
    """Number of index-d subgroups of the free group of rank r.

    N_d = d*(d!)^(r-1) - sum_{k<d} ((d-k)!)^(r-1) * N_k.
    """
    if r < 2 or d < 1:
        raise ValueError("hall_count needs r >= 2, d >= 1")
    total = d * factorial(d) ** (r - 1)
    for k in range(1, d):
        total -= factorial(d - k) ** (r - 1) * hall_count(r, k)
    return total


@lru_cache(maxsize=None)
def _mednykh_h(g: int, d: int) -> Fraction:
    return Fraction(factorial(d)) ** (2 * g - 1) * sum(
        Fraction(1, hook_degree(lam) ** (2 * g - 2)) for lam in partitions(d))


@lru_cache(maxsize=None)
def mednykh_count(g: int, d: int) -> int:
    """Number of index-d subgroups of the genus-g closed surface group.

    N_d = h_d/(d-1)! - sum_{k<d} h_{d-k} N_k / (d-k)!  with
    h_d = (d!)^(2g-1) * sum over irreducible degrees f of f^(2-2g).
    """
    if g < 2 or d < 1:
        raise ValueError("mednykh_count needs g >= 2, d >= 1")
    total = _mednykh_h(g, d) / factorial(d - 1)
    for k in range(1, d):
        total -= _mednykh_h(g, d - k) * mednykh_count(g, k) / factorial(d - k)
    if total.denominator != 1:
        raise AssertionError("non-integral subgroup count: implementation bug")
    return int(total)


# --- enumeration ------------------------------------------------------------

def _tuple_transitive(perms, d: int) -> bool:
    parent = list(range(d))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = d
    for p in perms:
        for i, v in enumerate(p):
            ra, rb = find(i), find(v)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
    return comps == 1


def transitive_reps(rank, d: int, closed_genus: int | None = None):
    """Yield every transitive PermRep of the given degree.

    Free mode enumerates all rank-tuples of permutations with transitive
    joint action; closed mode (rank = 2*genus) additionally requires the
    product of commutators to act trivially.  A SurfaceSignature may be
    passed instead of a rank: with boundary it selects free mode on the
    rank 2g+b-1 free group, without boundary closed mode in genus g.
    """
    from .ribbon import SurfaceSignature

    if isinstance(rank, SurfaceSignature):
        sig = rank
        if sig.boundary_count > 0:
            rank = 2 * sig.genus + sig.boundary_count - 1
        else:
            rank = 2 * sig.genus
            closed_genus = sig.genus
    if d < 1:
        raise ValueError("degree must be positive")
    perms = list(permutations(range(d)))
    for tup in product(perms, repeat=rank):
        if not _tuple_transitive(tup, d):
            continue
        rep = PermRep(d, tup)
        if closed_genus is not None and not rep.satisfies_closed_relation(closed_genus):
            continue
        yield rep


def count_transitive_reps(rank: int, d: int, closed_genus: int | None = None) -> int:
    return sum(1 for _ in transitive_reps(rank, d, closed_genus))


def subgroup_count_by_enumeration(rank: int, d: int, closed_genus: int | None = None) -> int:
    """Index-d subgroup count: transitive tuples / (d-1)! (stabilizer of a
    marked sheet)."""
    n = count_transitive_reps(rank, d, closed_genus)
    cnt, rem = divmod(n, factorial(d - 1))
    if rem:
        raise AssertionError("transitive count not divisible by (d-1)!")
    return cnt


def subgroup_class_count(rank: int, d: int, closed_genus: int | None = None) -> int:
    """Conjugacy classes of index-d subgroups: orbits of transitive tuples
    under simultaneous conjugation."""
    seen = set()
    classes = 0
    perms = list(permutations(range(d)))
    inv = {p: tuple(sorted(range(d), key=lambda i: p[i])) for p in perms}
    for rep in transitive_reps(rank, d, closed_genus):
        key = rep.images
        if key in seen:
            continue
        classes += 1
        for s in perms:
            si = inv[s]
            conj = tuple(tuple(s[p[si[i]]] for i in range(d)) for p in rep.images)
            seen.add(conj)
    return classes


# --- simple lifting degree ---------------------------------------------------

@dataclass(frozen=True)
class DegreeSearchResult:
    degree: int | None
    d_max: int
    witness: PermRep | None = None
    elevation_index: int | None = None

    @property
    def found(self) -> bool:
        return self.degree is not None


def _cycle_type_reps(d: int):
    """One permutation per conjugacy class of S_d (cycle type)."""
    for lam in partitions(d):
        p = []
        start = 0
        for part in lam.parts:
            p.extend(list(range(start + 1, start + part)) + [start])
            start += part
        yield tuple(p)


def _inverse_perm(p):
    q = [0] * len(p)
    for i, v in enumerate(p):
        q[v] = i
    return tuple(q)


def _simple_elevation_sheet(tup, letters, power, linked_rows, d: int) -> int | None:
    """Sheet starting an embedded elevation of root^power, else None.

    An elevation of the power is an honest embedded circle exactly when the
    root-permutation cycle length is divisible by the power and the lifted
    root-curve is embedded.  Root-elevation positions landing on a common
    sheet cross exactly when their base residues are a linked pair, so no
    cover is ever built.
    """
    L = len(letters)
    step = {}
    for x in set(letters):
        step[x] = tup[x - 1] if x > 0 else _inverse_perm(tup[-x - 1])
    root_perm = list(range(d))
    for x in letters:
        p = step[x]
        root_perm = [p[s] for s in root_perm]
    seen = [False] * d
    for s0 in range(d):
        if seen[s0]:
            continue
        cycle_len = 1
        seen[s0] = True
        s = root_perm[s0]
        while s != s0:
            seen[s] = True
            cycle_len += 1
            s = root_perm[s]
        if cycle_len % power != 0:
            continue
        by_sheet = {}
        simple = True
        s = s0
        for _ in range(cycle_len):
            for i in range(L):
                rows = by_sheet.setdefault(s, [])
                row = linked_rows[i]
                if any(row[j] for j in rows):
                    simple = False
                    break
                rows.append(i)
                s = step[letters[i]][s]
            if not simple:
                break
        if simple:
            return s0
    return None


def simple_lifting_degree(gamma: CyclicWord, g: RibbonGraph, d_max: int = 6,
                          exhaustive: bool = False) -> DegreeSearchResult:
    """Least degree of a connected cover in which ``gamma`` has an embedded
    elevation, searching d = 1..d_max over transitive permutation tuples.

    Every cycle of the word permutation is tested.  The default search fixes
    the first generator to one representative per cycle type (valid for the
    existence question, since simultaneous conjugation acts on covers by
    isomorphism); ``exhaustive=True`` disables that reduction.
    """
    if len(gamma) == 0:
        raise WordError("trivial curve")
    if g.vertex_count != 1:
        raise CoverSearchError("degree search expects a one-vertex spine")
    path = EdgePath.from_word(gamma, g)
    if self_intersection(path) == 0:
        return DegreeSearchResult(1, d_max, PermRep(1, ((0,),) * g.rank), 0)
    root, power = gamma.primitive_root()
    root_path = EdgePath.from_word(root, g)
    letters = root.letters
    linked = linked_pair_matrix(root_path)
    rank = g.rank
    for d in range(2, d_max + 1):
        perms = list(permutations(range(d)))
        first = perms if exhaustive else list(_cycle_type_reps(d))
        for p0 in first:
            for rest in product(perms, repeat=rank - 1):
                tup = (p0,) + rest
                if not _tuple_transitive(tup, d):
                    continue
                sheet = _simple_elevation_sheet(tup, letters, power, linked, d)
                if sheet is not None:
                    rep = PermRep(d, tup)
                    gamma_perm = rep.perm_of(gamma.letters)
                    from .ribbon import perm_cycles

                    idx = next(i for i, cyc in enumerate(perm_cycles(gamma_perm))
                               if sheet in cyc)
                    return DegreeSearchResult(d, d_max, rep, idx)
    return DegreeSearchResult(None, d_max)
