"""Vectorized linked-pair counting for closed paths on one-vertex graphs.

Mirrors the scalar ray comparison in ``intersect``: for every strand pair
the divergence depths of the four ends are read off precomputed
next-mismatch tables, the tripod case selects the three darts at the
divergence vertex, and the vertex cyclic order decides interleaving.
"""

from __future__ import annotations

import numpy as np


def _next_dist(mask: np.ndarray) -> np.ndarray:
    """Per row r: nd[r, s] = min { j >= 0 : mask[r, (s+j) % L] }.

    Rows without any True entry get values >= 2L; callers must not consult
    those rows.
    """
    rows, L = mask.shape
    w = np.concatenate([mask, mask], axis=1)
    col = np.arange(2 * L, dtype=np.int64)
    c = np.where(w, col[None, :], 4 * L)
    suf = np.minimum.accumulate(c[:, ::-1], axis=1)[:, ::-1]
    return suf[:, :L] - col[None, :L]


def _prev_dist(mask: np.ndarray) -> np.ndarray:
    """Per row r: pd[r, s] = min { j >= 0 : mask[r, (s-j) % L] }."""
    return _next_dist(mask[:, ::-1])[:, ::-1]


def rose_self_count(path) -> int:
    """Self-intersection of a primitive closed path on a one-vertex graph.

    Linked vertex-passage pairs are weighted by 1/overlap where overlap is
    the number of vertices the two lifted lines share, so each crossing
    orbit contributes exactly 1.
    """
    g = path.graph
    D = np.asarray(path.darts, dtype=np.int64)
    L = int(D.shape[0])
    PAIR = np.asarray(g.pair, dtype=np.int64)
    POS = np.asarray(g._pos_in_vertex, dtype=np.int64)
    K = g.dart_count

    idx = np.arange(L, dtype=np.int64)
    # MF[d, p] : D[p] != D[(p+d) % L]  (forward/forward and back/back rays)
    SH = D[(idx[None, :] + idx[:, None]) % L]
    MF = D[None, :] != SH
    # MA[c, k] : D[k] != pair(D[(c-1-k) % L])  (forward vs backward rays)
    MA = D[None, :] != PAIR[D[(idx[:, None] - 1 - idx[None, :]) % L]]

    T_ff = _next_dist(MF)
    PD_ff = _prev_dist(MF)
    T_fb = _next_dist(MA)

    S, T = np.triu_indices(L, 1)
    S = S.astype(np.int64)
    T = T.astype(np.int64)
    delta = (T - S) % L
    c_st = (S + T) % L
    c_ss = (2 * S) % L

    d_bs_bt = PD_ff[delta, (S - 1) % L]
    d_bs_fs = T_fb[c_ss, S]
    d_bt_fs = T_fb[c_st, S]
    d_bs_ft = T_fb[c_st, T]
    d_fs_ft = T_ff[delta, S]

    def b_s(j):
        return PAIR[D[(S - 1 - j) % L]]

    def b_t(j):
        return PAIR[D[(T - 1 - j) % L]]

    def f_s(j):
        return D[(S + j) % L]

    def f_t(j):
        return D[(T + j) % L]

    def orient(duv, duw, dvw, u_at, v_at, w_at):
        m = np.minimum(np.minimum(duv, duw), dvw)
        case_a = duv > m
        case_b = duw > m
        case_c = dvw > m
        p = np.where(case_a, u_at(duv),
                     np.where(case_b, u_at(duw),
                              np.where(case_c, PAIR[v_at(dvw - 1)], u_at(m))))
        q = np.where(case_a, v_at(duv),
                     np.where(case_b, PAIR[u_at(duw - 1)],
                              np.where(case_c, v_at(dvw), v_at(m))))
        r3 = np.where(case_a, PAIR[u_at(duv - 1)],
                      np.where(case_b, w_at(duw),
                               np.where(case_c, w_at(dvw), w_at(m))))
        return ((POS[q] - POS[p]) % K) < ((POS[r3] - POS[p]) % K)

    o1 = orient(d_bs_bt, d_bs_fs, d_bt_fs, b_s, b_t, f_s)
    o2 = orient(d_bs_ft, d_bs_fs, d_fs_ft, b_s, f_t, f_s)
    linked = o1 != o2
    if not np.any(linked):
        return 0
    # overlap of the two lines: backward extent is max(d(B_s,B_t), d(B_s,F_t)),
    # forward extent is max(d(F_s,F_t), d(F_s,B_t)); one term of each max is 0
    overlap = (1 + np.maximum(d_bs_bt, d_bs_ft) + np.maximum(d_fs_ft, d_bt_fs))
    dens = overlap[linked]
    from fractions import Fraction

    total = Fraction(0)
    for den, cnt in zip(*np.unique(dens, return_counts=True)):
        total += Fraction(int(cnt), int(den))
    if total.denominator != 1:
        raise AssertionError("non-integral crossing count: invariant violated")
    return int(total)
