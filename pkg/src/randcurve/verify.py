"""Invariant suites behind the ``verify`` subcommand.

Each suite re-derives its expectations independently (enumeration, brute
force, closed forms) and returns (name, passed, detail).
"""

from __future__ import annotations

import itertools
import math
import random

from .covers import (hall_count, hook_degree, mednykh_count, partitions,
                     simple_lifting_degree, subgroup_count_by_enumeration)
from .fricke import (FrickePoint, collar_width, distance_proxy, geodesic_length,
                     holonomy, minimize_length, rose_minimizer)
from .intersect import (EdgePath, brute_min_crossings, intersection,
                        self_intersection, spiraling)
from .ribbon import (PermRep, RibbonGraph, cover, elevations, faces,
                     pair_of_pants, punctured_torus, signature)
from .words import (BallSpec, CyclicWord, Word, alphabet_letters, ball_size,
                    conjugates_in_ball, cyclic_reduce, least_rotation, reduce,
                    satisfies_no_cancellation, sphere_size)


def _random_reduced(rng, length, rank=2):
    letters = alphabet_letters(rank)
    if length == 0:
        return ()
    word = [rng.choice(letters)]
    for _ in range(length - 1):
        word.append(rng.choice([x for x in letters if x != -word[-1]]))
    return tuple(word)


def _cyclic_classes(max_len, rank=2):
    letters = alphabet_letters(rank)
    seen = set()
    for L in range(1, max_len + 1):
        for tup in itertools.product(letters, repeat=L):
            if any(tup[i] == -tup[(i + 1) % L] for i in range(L)):
                continue
            k = least_rotation(tup)
            canon = tup[k:] + tup[:k]
            if canon not in seen:
                seen.add(canon)
                yield CyclicWord(canon, rank)


def verify_words(fast=True):
    rng = random.Random(1)
    # reduction idempotence and conjugacy invariance
    for _ in range(200):
        w = Word(tuple(rng.choice(alphabet_letters(2))
                       for _ in range(rng.randrange(12))), 2)
        r = reduce(w)
        if reduce(r).letters != r.letters:
            return False, "reduce not idempotent"
        c = cyclic_reduce(w)
        u = Word(_random_reduced(rng, rng.randrange(6)), 2)
        conj = u.concat(w).concat(u.inverse())
        if cyclic_reduce(conj).letters != c.letters:
            return False, "cyclic_reduce not conjugation invariant"
    # rotation invariance of the canonical form
    for c in itertools.islice(_cyclic_classes(5), 200):
        w = c.letters
        for i in range(len(w)):
            rot = Word(w[i:] + w[:i], 2)
            if cyclic_reduce(rot).letters != w:
                return False, "canonical form not rotation invariant"
    # sphere/ball closed forms
    if sphere_size(BallSpec(2, 2)) != 12 or ball_size(BallSpec(2, 2)) != 17:
        return False, "rank-2 ball sizes wrong"
    if ball_size(BallSpec(1, 3)) != 7:
        return False, "rank-1 ball size wrong"
    # no-cancellation <=> exact conjugate length
    max_w = 4 if fast else 5
    for c in _cyclic_classes(3 if fast else 4):
        for lw in range(0, max_w + 1):
            for _ in range(4):
                w = Word(_random_reduced(rng, lw), 2)
                full = w.concat(Word(c.letters, 2)).concat(w.inverse())
                if satisfies_no_cancellation(w, c):
                    if len(reduce(full)) != 2 * len(w) + len(c):
                        return False, "no-cancellation length formula violated"
    # conjugacy-ball lemma, small grid
    n_max = 6 if fast else 8
    for c in _cyclic_classes(4):
        for n in range(len(c), n_max + 1):
            cnt = conjugates_in_ball(c, n)
            bound = n * ball_size(BallSpec(2, (n - len(c)) // 2))
            if cnt > bound:
                return False, f"conjugacy bound violated for {c} n={n}"
    return True, "reduction, ball sizes, no-cancellation, conjugacy bound"


def verify_ribbon(fast=True):
    pt = punctured_torus()
    pp = pair_of_pants()
    sig = signature(pt)
    if (sig.genus, sig.boundary_count) != (1, 1):
        return False, "punctured torus signature wrong"
    sig = signature(pp)
    if (sig.genus, sig.boundary_count) != (0, 3):
        return False, "pair of pants signature wrong"
    ann = RibbonGraph.rose((1, -1), 1)
    sig = signature(ann)
    if (sig.genus, sig.boundary_count) != (0, 2):
        return False, "annulus signature wrong"
    rng = random.Random(2)
    perms = {d: list(itertools.permutations(range(d))) for d in (2, 3)}
    d_top = 3 if fast else 5
    for d in range(2, d_top + 1):
        all_perms = list(itertools.permutations(range(d)))
        for _ in range(10):
            phi = PermRep(d, (rng.choice(all_perms), rng.choice(all_perms)))
            cov = cover(pt, phi)
            chi_base = pt.vertex_count - pt.edge_count
            chi_cov = cov.vertex_count - cov.edge_count
            if chi_cov != d * chi_base:
                return False, "cover Euler characteristic not multiplicative"
            # boundary of cover = elevations of boundary of base
            base_words = [tuple(pt.label[x] for x in f) for f in faces(pt)]
            for f in faces(cov):
                proj = tuple(cov.label[x] for x in f)
                root = base_words[0]
                k = len(proj) // len(root)
                rots = [root[i:] + root[:i] for i in range(len(root))]
                if not any(proj == r * k for r in rots):
                    return False, "cover boundary is not an elevation of base boundary"
    # elevation winding sums and projections
    for _ in range(20):
        d = rng.choice((2, 3))
        phi = PermRep(d, (rng.choice(perms[d]), rng.choice(perms[d])))
        c = cyclic_reduce(Word(_random_reduced(rng, rng.randrange(1, 6)), 2))
        if len(c) == 0:
            continue
        els = elevations(c, phi, pt)
        if sum(e.winding for e in els) != d:
            return False, "elevation windings do not sum to degree"
        for e in els:
            if tuple(e.cover.label[x] for x in e.darts) != c.letters * e.winding:
                return False, "elevation projection mismatch"
    return True, "signatures, covers, boundary elevations, windings"


def verify_intersect(fast=True):
    pt = punctured_torus()
    pp = pair_of_pants()
    max_len = 5 if fast else 7
    rng = random.Random(3)
    for g in (pt, pp):
        for c in _cyclic_classes(max_len):
            p = EdgePath.from_word(c, g)
            si = self_intersection(p)
            bm = brute_min_crossings(p)
            if si != bm:
                return False, f"oracle disagreement at {c}"
            if si > len(c) * (len(c) - 1) // 2:
                return False, f"quadratic bound violated at {c}"
    # invariance under rotation, inversion, relabeling
    for _ in range(60):
        c = cyclic_reduce(Word(_random_reduced(rng, rng.randrange(2, 9)), 2))
        if len(c) == 0:
            continue
        p = EdgePath.from_word(c, pt)
        si = self_intersection(p)
        if self_intersection(p.inverse()) != si:
            return False, "not inversion invariant"
        w = c.letters
        i = rng.randrange(len(w))
        rot = EdgePath(pt, p.darts[i:] + p.darts[:i])
        if self_intersection(rot) != si:
            return False, "not rotation invariant"
        relabeled = CyclicWord.from_string(str(c).translate(
            str.maketrans("abAB", "bABa")), 2)
        if self_intersection(EdgePath.from_word(relabeled, pt)) != si:
            return False, "not relabeling invariant"
    # symmetry of intersection
    for _ in range(30):
        u = cyclic_reduce(Word(_random_reduced(rng, rng.randrange(1, 7)), 2))
        v = cyclic_reduce(Word(_random_reduced(rng, rng.randrange(1, 7)), 2))
        if len(u) == 0 or len(v) == 0:
            continue
        pu, pv = EdgePath.from_word(u, pt), EdgePath.from_word(v, pt)
        if pu.class_key() == pv.class_key():
            continue
        if intersection(pu, pv) != intersection(pv, pu):
            return False, "intersection not symmetric"
    # simple elevations stay simple
    perms = {d: list(itertools.permutations(range(d))) for d in (2, 3)}
    for w in ("a", "ab", "aB", "aab"):
        c = CyclicWord.from_string(w, 2)
        for d in (2, 3):
            for tup in itertools.product(perms[d], repeat=2):
                phi = PermRep(d, tup)
                for e in elevations(c, phi, pt):
                    ep = EdgePath(e.cover, e.darts)
                    if self_intersection(ep) != 0:
                        return False, f"elevation of simple {w} not simple"
            if fast:
                break
    return True, "oracle agreement, invariances, simple elevations"


def verify_covers(fast=True):
    d_top = 4 if fast else 5
    for d in range(1, d_top + 1):
        if subgroup_count_by_enumeration(2, d) != hall_count(2, d):
            return False, f"hall mismatch at d={d}"
    if subgroup_count_by_enumeration(4, 2, closed_genus=2) != mednykh_count(2, 2):
        return False, "mednykh mismatch at d=2"
    for d in range(1, 9):
        if sum(hook_degree(lam) ** 2 for lam in partitions(d)) != math.factorial(d):
            return False, "character degree identity failed"
    pt = punctured_torus()
    rng = random.Random(4)
    for _ in range(10 if fast else 25):
        c = cyclic_reduce(Word(_random_reduced(rng, rng.randrange(1, 7)), 2))
        if len(c) == 0:
            continue
        res = simple_lifting_degree(c, pt, d_max=4)
        simple = self_intersection(EdgePath.from_word(c, pt)) == 0
        if simple != (res.degree == 1):
            return False, "degree-1 iff simple failed"
        inv = simple_lifting_degree(c.inverse(), pt, d_max=4)
        if res.degree != inv.degree:
            return False, "degree not inversion invariant"
        if res.found:
            sp = max(spiraling(c, CyclicWord((j,), 2), pt)
                     for j in (1, 2) if c.primitive_root()[0].letters not in ((j,), (-j,)))
            if res.degree < sp:
                return False, "spiraling lower bound violated"
    return True, "hall/mednykh vs enumeration, hooks, degree invariants"


def verify_fricke(fast=True):
    import numpy as np

    rng = random.Random(5)
    pts = [FrickePoint(3, 3, 3), FrickePoint(3, 3, 6)]
    for p in pts:
        A, B = holonomy(p)
        Am, Bm = np.array(A), np.array(B)
        if abs(np.trace(Am) - p.x) > 1e-9 or abs(np.trace(Bm) - p.y) > 1e-9:
            return False, "holonomy traces wrong"
        if abs(np.trace(Am @ Bm) - p.z) > 1e-9:
            return False, "holonomy product trace wrong"
        comm = Am @ Bm @ np.linalg.inv(Am) @ np.linalg.inv(Bm)
        if abs(np.trace(comm) + 2) > 1e-9:
            return False, "commutator trace not -2"
        ab = geodesic_length(CyclicWord((1, 2), 2), p).trace
        aB = geodesic_length(CyclicWord((-2, 1), 2), p).trace
        if abs(ab + aB - p.x * p.y) > 1e-9:
            return False, "trace identity violated"
    # conjugation/inversion invariance of length and relabeling equivariance
    for _ in range(40):
        w = Word(_random_reduced(rng, rng.randrange(1, 9)), 2)
        c = cyclic_reduce(w)
        if len(c) == 0:
            continue
        p = pts[0]
        try:
            l0 = geodesic_length(c, p).length
            u = Word(_random_reduced(rng, 3), 2)
            l1 = geodesic_length(u.concat(w).concat(u.inverse()), p).length
            l2 = geodesic_length(c.inverse(), p).length
        except Exception:
            continue
        if abs(l0 - l1) > 1e-9 or abs(l0 - l2) > 1e-9:
            return False, "length not conjugation/inversion invariant"
        swapped = CyclicWord.from_string(str(c).translate(
            str.maketrans("abAB", "baBA")), 2)
        l3 = geodesic_length(swapped, FrickePoint(p.y, p.x, p.z)).length
        if abs(l0 - l3) > 1e-9:
            return False, "relabeling equivariance violated"
    if abs(collar_width(2 * math.asinh(1.0)) - math.asinh(1.0)) > 1e-12:
        return False, "collar formula wrong"
    if not collar_width(0.01) > collar_width(0.1) or not collar_width(10) < 0.02:
        return False, "collar monotonicity wrong"
    rm = rose_minimizer()
    if abs(rm.x - rm.y) > 1e-6 or abs(rm.x - 2 * math.sqrt(2)) > 1e-3:
        return False, "rose minimizer off the symmetric point"
    res = minimize_length(CyclicWord((1,), 2))
    if res.status != "diverged":
        return False, "simple curve minimization should diverge"
    if distance_proxy(pts[0], pts[0]) != 0:
        return False, "proxy not zero on equal points"
    d1 = distance_proxy(pts[0], pts[1])
    if d1 <= 0 or abs(d1 - distance_proxy(pts[1], pts[0])) > 1e-12:
        return False, "proxy asymmetric or degenerate"
    return True, "holonomy, trace identities, collar, rose minimizer, proxy"


def verify_stats(fast=True):
    from .stats import (ExperimentConfig, WalkDistribution, drift_estimate,
                        random_walk, run_experiment, sample_ball_uniform)

    mu = WalkDistribution.uniform(2)
    if random_walk(mu, 50, 9).letters != random_walk(mu, 50, 9).letters:
        return False, "walk not deterministic"
    if len(random_walk(mu, 0, 1)) != 0:
        return False, "zero-length walk not empty"
    est = drift_estimate(mu, 400 if fast else 2000, 200, 11)
    if abs(est.mean - 0.5) > 0.05:
        return False, f"rank-2 drift {est.mean:.3f} far from 1/2"
    if drift_estimate(mu, 1, 50, 3).mean != 1.0:
        return False, "one-step drift must be 1"
    # ball length distribution matches |S_k|/|B_n| exactly in expectation
    n = 6
    counts = {}
    trials = 2000 if fast else 20000
    for i in range(trials):
        w = sample_ball_uniform(2, n, seed=1000 + i)
        counts[len(w)] = counts.get(len(w), 0) + 1
    bn = ball_size(BallSpec(2, n))
    chi2 = 0.0
    for k in range(n + 1):
        exp = trials * sphere_size(BallSpec(2, k)) / bn
        obs = counts.get(k, 0)
        if exp > 0:
            chi2 += (obs - exp) ** 2 / exp
    if chi2 > 30:  # 7 cells, well beyond the 99% quantile
        return False, f"ball length distribution chi2={chi2:.1f}"
    cfg = ExperimentConfig(experiment="self-int", n_grid=(8, 16), samples=20, seed=2)
    t1 = run_experiment(cfg)
    t2 = run_experiment(ExperimentConfig(experiment="self-int", n_grid=(8, 16),
                                         samples=20, seed=2, jobs=2))
    if t1.to_csv() != t2.to_csv():
        return False, "experiment not reproducible across jobs"
    return True, "determinism, drift, exact ball sampling, reproducibility"


SUITES = (
    ("words", verify_words),
    ("ribbon", verify_ribbon),
    ("intersect", verify_intersect),
    ("covers", verify_covers),
    ("fricke", verify_fricke),
    ("stats", verify_stats),
)


def run_all(fast=True):
    results = []
    for name, fn in SUITES:
        try:
            ok, detail = fn(fast=fast)
        except Exception as exc:  # a crashed suite is a failure, not an abort
            ok, detail = False, f"exception: {exc!r}"
        results.append((name, ok, detail))
    return results
