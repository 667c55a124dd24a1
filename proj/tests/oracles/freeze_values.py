"""Independent reference values for the exact-oracle tests.

Rebuilds the harmonic, pair-chain and stationary systems from scratch with
numpy/scipy direct solves (no shared code with the C++ library) and prints the
numbers frozen into tests/test_oracle.cpp and tests/acceptance.cpp.
"""
import itertools

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

OFFS = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]


def boundary_vote(L, i, j):
    last = L - 1
    if i == 0 and j <= last - 1:
        return 0
    if j == last and i <= last - 1:
        return 0
    if i == last and j >= 1:
        return 1
    if j == 0 and i >= 1:
        return 1
    return None


def interior(L):
    return [(i, j) for i in range(1, L - 1) for j in range(1, L - 1)]


def harmonic(L):
    sites = interior(L)
    idx = {s: k for k, s in enumerate(sites)}
    n = len(sites)
    A = sp.lil_matrix((n, n))
    b = np.zeros(n)
    for k, (i, j) in enumerate(sites):
        A[k, k] = 6.0
        for di, dj in OFFS:
            t = (i + di, j + dj)
            if t in idx:
                A[k, idx[t]] -= 1.0
            else:
                b[k] += boundary_vote(L, *t)
    h = spla.spsolve(A.tocsc(), b)
    return {s: h[idx[s]] for s in sites}


def pair_systems(L):
    """Coalescence probability, joint P(1,1) and independent cross term for all ordered pairs."""
    h = harmonic(L)
    sites = interior(L)
    pairs = [(a, b) for a in sites for b in sites if a != b]
    pidx = {p: k for k, p in enumerate(pairs)}
    n = len(pairs)
    rows, cols, vals = [], [], []
    meet = np.zeros(n)
    joint = np.zeros(n)
    cross = np.zeros(n)
    for k, (a, b) in enumerate(pairs):
        rows.append(k); cols.append(k); vals.append(12.0)
        for mover in range(2):
            frm, other = (a, b) if mover == 0 else (b, a)
            for di, dj in OFFS:
                to = (frm[0] + di, frm[1] + dj)
                if to == other:
                    meet[k] += 1
                    joint[k] += h[other]
                    cross[k] += h[other] * (1 - h[other])
                elif to not in h:
                    joint[k] += boundary_vote(L, *to) * h[other]
                else:
                    nxt = (to, b) if mover == 0 else (a, to)
                    rows.append(k); cols.append(pidx[nxt]); vals.append(-1.0)
    A = sp.csc_matrix((vals, (rows, cols)), shape=(n, n))
    lu = spla.splu(A)
    f, g, c = lu.solve(meet), lu.solve(joint), lu.solve(cross)
    return h, {p: (f[k], g[k], c[k]) for p, k in pidx.items()}


def stationary(L):
    sites = interior(L)
    idx = {s: k for k, s in enumerate(sites)}
    n = len(sites)
    N = 2 ** n
    Q = np.zeros((N, N))
    for c in range(N):
        for k, (i, j) in enumerate(sites):
            mine = (c >> k) & 1
            dis = 0
            for di, dj in OFFS:
                t = (i + di, j + dj)
                v = (c >> idx[t]) & 1 if t in idx else boundary_vote(L, *t)
                dis += v != mine
            Q[c, c ^ (1 << k)] += dis / 6
            Q[c, c] -= dis / 6
    # null vector of Q^T via least squares with normalisation
    M = np.vstack([Q.T, np.ones(N)])
    rhs = np.zeros(N + 1); rhs[-1] = 1
    pi, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return pi


def center(L):
    return (L // 2, L // 2)


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    h8 = harmonic(8)
    print("harmonic L=8")
    for s in [(1, 1), (1, 6), (2, 3), (3, 5), (4, 4), (6, 1), (6, 6)]:
        print("  ", s, repr(h8[s]))
    print("  sum", repr(sum(h8.values())))

    h5, p5 = pair_systems(5)
    f, g, c = p5[((2, 2), (2, 3))]
    print("L=5 pair (2,2)-(2,3): coalesce", repr(f), "joint", repr(g), "cross", repr(c),
          "cov", repr(g - h5[(2, 2)] * h5[(2, 3)]))
    print("L=5 min cov over pairs", min(v[1] - h5[a] * h5[b] for (a, b), v in p5.items()))

    for L in (8, 12, 16):
        h, pr = pair_systems(L)
        o = center(L)
        ecs = 1 + sum(v[0] for (a, b), v in pr.items() if a == o)
        print(f"E|C(o)| L={L} o={o}:", repr(ecs))

    for L in (5, 8, 12, 16):
        h, pr = pair_systems(L)
        o = center(L)
        y = (o[0] + 1, o[1])
        f, g, c = pr[(o, y)]
        print(f"cov L={L} {o}-{y}:", repr(c), "via joint", repr(g - h[o] * h[y]))

    pi4 = stationary(4)
    print("stationary L=4:", [repr(x) for x in pi4])
    h4 = harmonic(4)
    print("harmonic L=4:", {s: repr(v) for s, v in h4.items()})
