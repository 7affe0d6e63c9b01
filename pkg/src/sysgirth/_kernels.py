"""Compiled inner loops for the random-graph samplers."""

from __future__ import annotations

import numba as nb
import numpy as np


@nb.njit(cache=True)
def simple_pairings(n, uniforms, max_graphs):
    """Uniform simple 4-regular graphs from the pairing model by rejection.

    Points are paired one at a time (the first unpaired point with a uniform
    choice among the rest), and an attempt is abandoned at the first loop or
    repeated edge.  Uniform variates are read from ``uniforms`` in order and
    an attempt is only started when enough of them remain, so the output
    depends on the buffer alone.  Returns the edge arrays of the accepted
    graphs and the number of attempts.
    """
    m = 2 * n
    out = np.empty((max_graphs, m, 2), np.int32)
    pts = np.empty(4 * n, np.int32)
    nbr = np.empty((n, 4), np.int32)
    deg = np.empty(n, np.int32)
    pos = 0
    count = 0
    attempts = 0
    while count < max_graphs and pos + m <= uniforms.shape[0]:
        attempts += 1
        for i in range(4 * n):
            pts[i] = i
        deg[:] = 0
        ok = True
        for k in range(m):
            i = 2 * k
            r = i + 1 + int(uniforms[pos] * (4 * n - i - 1))
            pos += 1
            tmp = pts[i + 1]
            pts[i + 1] = pts[r]
            pts[r] = tmp
            a = pts[i] // 4
            b = pts[i + 1] // 4
            if a == b:
                ok = False
                break
            for t in range(deg[a]):
                if nbr[a, t] == b:
                    ok = False
            if not ok:
                break
            nbr[a, deg[a]] = b
            deg[a] += 1
            nbr[b, deg[b]] = a
            deg[b] += 1
            out[count, k, 0] = a
            out[count, k, 1] = b
        if ok:
            count += 1
    return out[:count], attempts


@nb.njit(cache=True)
def triangle_square_counts(edges, n):
    """Numbers of 3-cycles and 4-cycles of each simple 4-regular graph in a
    batch of edge arrays."""
    B = edges.shape[0]
    x3 = np.zeros(B, np.int64)
    x4 = np.zeros(B, np.int64)
    nbr = np.empty((n, 4), np.int32)
    deg = np.empty(n, np.int32)
    paths = np.zeros(n, np.int64)
    touched = np.empty(16, np.int32)
    for g in range(B):
        deg[:] = 0
        for k in range(edges.shape[1]):
            a = edges[g, k, 0]
            b = edges[g, k, 1]
            nbr[a, deg[a]] = b
            deg[a] += 1
            nbr[b, deg[b]] = a
            deg[b] += 1
        t3 = 0
        t4 = 0
        for v in range(n):
            for i in range(4):
                a = nbr[v, i]
                for j in range(i + 1, 4):
                    b = nbr[v, j]
                    for t in range(4):
                        if nbr[a, t] == b:
                            t3 += 1
            # 2-paths v-a-w with w > v; a pair (v, w) joined by p such
            # paths lies on p(p-1)/2 four-cycles as a diagonal
            cnt = 0
            for i in range(4):
                a = nbr[v, i]
                for j in range(4):
                    w = nbr[a, j]
                    if w > v:
                        if paths[w] == 0:
                            touched[cnt] = w
                            cnt += 1
                        paths[w] += 1
            for q in range(cnt):
                p = paths[touched[q]]
                t4 += p * (p - 1) // 2
                paths[touched[q]] = 0
        x3[g] = t3 // 3
        x4[g] = t4 // 2
    return x3, x4
