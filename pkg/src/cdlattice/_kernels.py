"""Compiled subspace scans for the class-2 engine.

Both kernels walk every RREF matrix of F_p^r (pivot pattern, then free-entry
fill) and score each subspace w by ``dim w + dim perp(w)``, where perp is taken
with respect to an alternating form with values in F_p^s.  They keep the
running maximum and every subspace attaining it.

The form is passed as ``beta[t, c, j]`` = coordinate c of the form on
(e_t, e_j).  Results come back as a dims array and a stack of row matrices;
the caller rebuilds canonical Subspace objects.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _next_pivots(piv, n):
    k = piv.shape[0]
    for i in range(k - 1, -1, -1):
        if piv[i] != i + n - k:
            piv[i] += 1
            for j in range(i + 1, k):
                piv[j] = piv[j - 1] + 1
            return True
    return False


@njit(cache=True)
def _free_slots(piv, n):
    k = piv.shape[0]
    is_piv = np.zeros(n, np.bool_)
    for i in range(k):
        is_piv[piv[i]] = True
    cnt = 0
    for i in range(k):
        for j in range(piv[i] + 1, n):
            if not is_piv[j]:
                cnt += 1
    fi = np.empty(cnt, np.int64)
    fj = np.empty(cnt, np.int64)
    c = 0
    for i in range(k):
        for j in range(piv[i] + 1, n):
            if not is_piv[j]:
                fi[c] = i
                fj[c] = j
                c += 1
    return fi, fj


@njit(cache=True)
def _rank_mod_p(mat, nrows, ncols, p, inv):
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        sel = -1
        for i in range(rank, nrows):
            if mat[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != rank:
            for j in range(ncols):
                tmp = mat[rank, j]
                mat[rank, j] = mat[sel, j]
                mat[sel, j] = tmp
        f = inv[mat[rank, col]]
        for j in range(col, ncols):
            mat[rank, j] = mat[rank, j] * f % p
        for i in range(rank + 1, nrows):
            g = mat[i, col]
            if g != 0:
                for j in range(col, ncols):
                    mat[i, j] = (mat[i, j] - g * mat[rank, j]) % p
        rank += 1
    return rank


@njit(cache=True)
def scan_generic(p, r, s, beta, cap):
    inv = np.zeros(p, np.int64)
    for a in range(1, p):
        for b in range(1, p):
            if a * b % p == 1:
                inv[a] = b
    best = -1
    count = 0
    out_dims = np.zeros(cap, np.int64)
    out_rows = np.zeros((cap, r, r), np.int64)
    rows = np.zeros((r, r), np.int64)
    cons = np.zeros((r * s, r), np.int64)
    for k in range(r + 1):
        piv = np.arange(k)
        while True:
            fi, fj = _free_slots(piv, r)
            f = fi.shape[0]
            digits = np.zeros(f, np.int64)
            while True:
                for i in range(k):
                    for j in range(r):
                        rows[i, j] = 0
                    rows[i, piv[i]] = 1
                for t in range(f):
                    rows[fi[t], fj[t]] = digits[t]
                for i in range(k):
                    for c in range(s):
                        for j in range(r):
                            acc = 0
                            for t in range(r):
                                if rows[i, t] != 0:
                                    acc += rows[i, t] * beta[t, c, j]
                            cons[i * s + c, j] = acc % p
                rank = _rank_mod_p(cons, k * s, r, p, inv)
                score = k + r - rank
                if score > best:
                    best = score
                    count = 0
                if score == best:
                    if count < cap:
                        out_dims[count] = k
                        for i in range(k):
                            for j in range(r):
                                out_rows[count, i, j] = rows[i, j]
                    count += 1
                # odometer over the free entries
                t = 0
                while t < f:
                    digits[t] += 1
                    if digits[t] < p:
                        break
                    digits[t] = 0
                    t += 1
                if t == f:
                    break
            if k == 0 or not _next_pivots(piv, r):
                break
    return best, count, out_dims, out_rows


@njit(cache=True)
def scan_gf2(r, s, masks, cap):
    """p = 2 specialisation: rows and constraints are bit masks reduced by XOR.

    ``masks[t, c]`` has bit j set iff coordinate c of the form on (e_t, e_j)
    is 1.
    """
    best = -1
    count = 0
    out_dims = np.zeros(cap, np.int64)
    out_rows = np.zeros((cap, r), np.int64)
    rows = np.zeros(r, np.int64)
    basis = np.zeros(r, np.int64)
    for k in range(r + 1):
        piv = np.arange(k)
        while True:
            fi, fj = _free_slots(piv, r)
            f = fi.shape[0]
            for fill in range(1 << f):
                for i in range(k):
                    rows[i] = 1 << piv[i]
                for t in range(f):
                    if (fill >> t) & 1:
                        rows[fi[t]] |= 1 << fj[t]
                for b in range(r):
                    basis[b] = 0
                rank = 0
                for i in range(k):
                    for c in range(s):
                        v = 0
                        row = rows[i]
                        t = 0
                        while row:
                            if row & 1:
                                v ^= masks[t, c]
                            row >>= 1
                            t += 1
                        # insert v into an XOR basis keyed by its top bit
                        for b in range(r - 1, -1, -1):
                            if not (v >> b) & 1:
                                continue
                            if basis[b] == 0:
                                basis[b] = v
                                rank += 1
                                break
                            v ^= basis[b]
                score = k + r - rank
                if score > best:
                    best = score
                    count = 0
                if score == best:
                    if count < cap:
                        out_dims[count] = k
                        for i in range(k):
                            out_rows[count, i] = rows[i]
                    count += 1
            if k == 0 or not _next_pivots(piv, r):
                break
    return best, count, out_dims, out_rows
