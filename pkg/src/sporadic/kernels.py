"""Hot loops shared by the chain, search and cohomology code.

Every function here is written in the numba-compatible subset of Python and
decorated with :func:`sporadic._accel.njit`; with ``SPORADIC_NO_NUMBA=1`` the
same functions run interpreted.  Arrays are int32 point arrays; a chain is
passed in packed form (see ``StabilizerChain.packed``):

* ``base``  (k,)     base points
* ``pos``   (k, n)   index of a point in level i's orbit, or -1
* ``offs``  (k+1,)   row offsets of each level inside ``uinv``/``orb``
* ``uinv``  (T, n)   inverse coset representatives, row ``offs[i] + j``
* ``orb``   (T,)     orbit points, same row layout
"""
from __future__ import annotations

import numpy as np

from ._accel import njit


@njit
def sift_packed(g, base, pos, offs, uinv, start):
    """Strip ``g`` through levels ``start..k-1``.

    Returns ``(residue, level)``; ``level == k`` means ``g`` sifted through
    every level (it is a member iff the residue is the identity).
    """
    k = base.shape[0]
    n = g.shape[0]
    h = g.copy()
    tmp = np.empty(n, dtype=np.int32)
    for i in range(start, k):
        b = h[base[i]]
        j = pos[i, b]
        if j < 0:
            return h, i
        if j > 0:
            row = uinv[offs[i] + j]
            for x in range(n):
                tmp[x] = row[h[x]]
            h, tmp = tmp, h
    return h, k


@njit
def is_identity(g):
    for x in range(g.shape[0]):
        if g[x] != x:
            return False
    return True


@njit
def contains_packed(g, base, pos, offs, uinv):
    h, lev = sift_packed(g, base, pos, offs, uinv, 0)
    return lev == base.shape[0] and is_identity(h)


@njit
def orbit_bfs(gens, root, mask):
    """Orbit of ``root`` under the rows of ``gens`` selected by ``mask``.

    Returns ``(orbit, parent_point, parent_gen)`` with ``orbit`` in BFS order;
    the parent arrays are length ``n`` (-1 outside the orbit, -2 at the root).
    """
    n = gens.shape[1]
    parent = np.full(n, -1, dtype=np.int32)
    label = np.full(n, -1, dtype=np.int32)
    orbit = np.empty(n, dtype=np.int32)
    orbit[0] = root
    parent[root] = -2
    label[root] = -2
    size = 1
    head = 0
    while head < size:
        x = orbit[head]
        head += 1
        for s in range(gens.shape[0]):
            if not mask[s]:
                continue
            y = gens[s, x]
            if parent[y] == -1:
                parent[y] = x
                label[y] = s
                orbit[size] = y
                size += 1
    return orbit[:size].copy(), parent, label


@njit
def orbit_labels(gens, n):
    """Least point of the orbit containing each point."""
    rep = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    for start in range(n):
        if rep[start] >= 0:
            continue
        rep[start] = start
        queue[0] = start
        size = 1
        head = 0
        while head < size:
            x = queue[head]
            head += 1
            for s in range(gens.shape[0]):
                y = gens[s, x]
                if rep[y] < 0:
                    rep[y] = start
                    queue[size] = y
                    size += 1
    return rep


@njit
def _find(parent, x):
    r = x
    while parent[r] != r:
        r = parent[r]
    while parent[x] != r:
        nxt = parent[x]
        parent[x] = r
        x = nxt
    return r


@njit
def minimal_block(gens, a, b):
    """Finest block system in which ``a`` and ``b`` share a block.

    Union-find closure over generator images.  Returns the block label
    (least point) of every point.
    """
    n = gens.shape[1]
    parent = np.arange(n).astype(np.int32)
    qa = np.empty(n, dtype=np.int32)
    qb = np.empty(n, dtype=np.int32)
    qa[0] = a
    qb[0] = b
    head = 0
    tail = 1
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        tail = 0
    elif ra < rb:
        parent[rb] = ra
    else:
        parent[ra] = rb
    while head < tail:
        x = qa[head]
        y = qb[head]
        head += 1
        for s in range(gens.shape[0]):
            u = _find(parent, gens[s, x])
            v = _find(parent, gens[s, y])
            if u != v:
                if u < v:
                    parent[v] = u
                else:
                    parent[u] = v
                # each union lowers the class count, so at most n-1 pushes
                qa[tail] = u
                qb[tail] = v
                tail += 1
    out = np.empty(n, dtype=np.int32)
    for x in range(n):
        out[x] = _find(parent, x)
    return out


@njit
def random_element_packed(choices, offs, uinv):
    """Product of the chosen transversal elements; returns the element."""
    k = offs.shape[0] - 1
    n = uinv.shape[1]
    ginv = np.arange(n).astype(np.int32)
    tmp = np.empty(n, dtype=np.int32)
    # g = u_{k-1} ... u_0, so g^-1 = u_0^-1 ... u_{k-1}^-1 (left to right)
    for i in range(k):
        row = uinv[offs[i] + choices[i]]
        for x in range(n):
            tmp[x] = row[ginv[x]]
        ginv, tmp = tmp, ginv
    g = np.empty(n, dtype=np.int32)
    for x in range(n):
        g[ginv[x]] = x
    return g


@njit
def rank_packed(g, base, pos, offs, uinv, strides):
    """Mixed-radix index of a member ``g`` (orbit positions times strides).

    Returns -1 if ``g`` is not a member.
    """
    k = base.shape[0]
    n = g.shape[0]
    h = g.copy()
    tmp = np.empty(n, dtype=np.int32)
    r = 0
    for i in range(k):
        j = pos[i, h[base[i]]]
        if j < 0:
            return -1
        r += j * strides[i]
        if j > 0:
            row = uinv[offs[i] + j]
            for x in range(n):
                tmp[x] = row[h[x]]
            h, tmp = tmp, h
    for x in range(n):
        if h[x] != x:
            return -1
    return r


@njit
def unrank_packed(r, offs, uinv, sizes, strides):
    k = sizes.shape[0]
    choices = np.empty(k, dtype=np.int64)
    for i in range(k):
        choices[i] = (r // strides[i]) % sizes[i]
    return random_element_packed(choices, offs, uinv)


# ---------------------------------------------------------------------------
# base-image backtrack


@njit
def _undo(f, finv, trail, tlen, mark):
    while tlen > mark:
        tlen -= 1
        a = trail[tlen]
        finv[f[a]] = -1
        f[a] = -1
    return tlen


@njit
def _assign(a, c, f, finv, trail, tlen, xs, ys, csrc, cdst, queue):
    """Set f(a) = c and close under the constraints ``x_j^g = y_j``.

    From f(a) = c follows f(a^x_j) = c^y_j.  Returns ``(ok, tlen)``; on a
    contradiction the partial assignments stay on the trail for the caller
    to undo.
    """
    if f[a] >= 0:
        return f[a] == c, tlen
    if finv[c] >= 0 or csrc[a] != cdst[c]:
        return False, tlen
    f[a] = c
    finv[c] = a
    trail[tlen] = a
    tlen += 1
    m = xs.shape[0]
    if m == 0:
        return True, tlen
    qh = 0
    qt = 0
    queue[qt] = a
    qt += 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        v = f[u]
        for j in range(m):
            a2 = xs[j, u]
            c2 = ys[j, v]
            if f[a2] < 0:
                if finv[c2] >= 0 or csrc[a2] != cdst[c2]:
                    return False, tlen
                f[a2] = c2
                finv[c2] = a2
                trail[tlen] = a2
                tlen += 1
                queue[qt] = a2
                qt += 1
            elif f[a2] != c2:
                return False, tlen
    return True, tlen


@njit
def _leaf_ok(g, xs, ys, csrc, cdst, use_h, hbase, hpos, hoffs, huinv):
    n = g.shape[0]
    for j in range(xs.shape[0]):
        for a in range(n):
            if g[xs[j, a]] != ys[j, g[a]]:
                return False
    for a in range(n):
        if cdst[g[a]] != csrc[a]:
            return False
    if use_h:
        if not contains_packed(g, hbase, hpos, hoffs, huinv):
            return False
    return True


@njit
def backtrack_search(base, pos, offs, uinv, orb, start_level, first_cands,
                     xs, ys, csrc, cdst,
                     use_h, hbase, hpos, hoffs, huinv,
                     init_a, init_c, budget):
    """Depth-first search for g in the level-``start_level`` stabilizer.

    Elements are built as ``g = u_{k-1} ... u_start`` from transversals, so
    at level i the admissible images of ``base[i]`` are ``Delta_i^h`` for
    the partial product h.  Constraints:

    * ``xs[j]^g == ys[j]`` (propagated as forced images),
    * ``cdst[a^g] == csrc[a]`` (colour classes),
    * ``g`` in the group of the packed chain ``h*`` (when ``use_h``), whose
      base must start with ``base``.

    ``first_cands`` (if non-empty) replaces the candidate list at
    ``start_level``.  ``init_a -> init_c`` are forced before starting.

    Returns ``(status, g, nodes)`` with status 1 = found, 0 = none exists,
    2 = node budget exhausted.
    """
    k = base.shape[0]
    n = pos.shape[1] if k > 0 else csrc.shape[0]
    ident = np.arange(n).astype(np.int32)
    f = np.full(n, -1, dtype=np.int32)
    finv = np.full(n, -1, dtype=np.int32)
    trail = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    tlen = 0
    for t in range(init_a.shape[0]):
        ok, tlen = _assign(init_a[t], init_c[t], f, finv, trail, tlen, xs, ys, csrc, cdst, queue)
        if not ok:
            return 0, ident, 0
    if start_level >= k:
        if _leaf_ok(ident, xs, ys, csrc, cdst, use_h, hbase, hpos, hoffs, huinv):
            return 1, ident, 1
        return 0, ident, 1

    hk = hbase.shape[0]
    hstack = np.empty((k + 1, n), dtype=np.int32)
    hinvstack = np.empty((k + 1, n), dtype=np.int32)
    wstack = np.empty((k + 1, n), dtype=np.int32)  # inverse of the H-side partial product
    hstack[start_level] = ident
    hinvstack[start_level] = ident
    wstack[start_level] = ident
    maxorb = 1
    for i in range(k):
        if offs[i + 1] - offs[i] > maxorb:
            maxorb = offs[i + 1] - offs[i]
    cands = np.empty((k, maxorb), dtype=np.int32)
    ncand = np.zeros(k, dtype=np.int64)
    ptr = np.zeros(k, dtype=np.int64)
    mark = np.zeros(k + 1, dtype=np.int64)
    nodes = 0

    level = start_level
    newlevel = True
    while True:
        if newlevel:
            newlevel = False
            mark[level] = tlen
            if level == k:
                g = hstack[k]
                if _leaf_ok(g, xs, ys, csrc, cdst, use_h, hbase, hpos, hoffs, huinv):
                    return 1, g.copy(), nodes
                level -= 1
                continue
            h = hstack[level]
            hinv = hinvstack[level]
            w = wstack[level]
            b = base[level]
            cnt = 0
            if level == start_level and first_cands.shape[0] > 0:
                for t in range(first_cands.shape[0]):
                    cands[level, cnt] = first_cands[t]
                    cnt += 1
            elif f[b] >= 0:
                gam = f[b]
                if pos[level, hinv[gam]] >= 0:
                    cands[level, 0] = gam
                    cnt = 1
            else:
                for t in range(offs[level], offs[level + 1]):
                    gam = h[orb[t]]
                    if finv[gam] >= 0 or cdst[gam] != csrc[b]:
                        continue
                    cands[level, cnt] = gam
                    cnt += 1
                cands[level, :cnt] = np.sort(cands[level, :cnt])
            if use_h and cnt > 0:
                keep = 0
                for t in range(cnt):
                    gam = cands[level, t]
                    ok = False
                    if level < hk:
                        ok = hpos[level, w[gam]] >= 0
                    else:
                        ok = w[gam] == b
                    if ok:
                        cands[level, keep] = gam
                        keep += 1
                cnt = keep
            ncand[level] = cnt
            ptr[level] = 0
        # try the next candidate at this level
        if ptr[level] >= ncand[level]:
            tlen = _undo(f, finv, trail, tlen, mark[level])
            if level == start_level:
                return 0, ident, nodes
            level -= 1
            continue
        gam = cands[level, ptr[level]]
        ptr[level] += 1
        tlen = _undo(f, finv, trail, tlen, mark[level])
        nodes += 1
        if nodes > budget:
            return 2, ident, nodes
        b = base[level]
        hinv = hinvstack[level]
        delta = hinv[gam]
        j = pos[level, delta]
        if j < 0:
            continue
        ok, tlen = _assign(b, gam, f, finv, trail, tlen, xs, ys, csrc, cdst, queue)
        if not ok:
            tlen = _undo(f, finv, trail, tlen, mark[level])
            continue
        # g_{next} = u(delta) * h, so g_next^-1 = h^-1 * u^-1
        row = uinv[offs[level] + j]
        nh = hstack[level + 1]
        nhinv = hinvstack[level + 1]
        for x in range(n):
            nhinv[x] = row[hinv[x]]
        for x in range(n):
            nh[nhinv[x]] = x
        if use_h:
            w = wstack[level]
            nw = wstack[level + 1]
            if level < hk:
                hj = hpos[level, w[gam]]
                hrow = huinv[hoffs[level] + hj]
                for x in range(n):
                    nw[x] = hrow[w[x]]
            else:
                for x in range(n):
                    nw[x] = w[x]
        level += 1
        newlevel = True


# ---------------------------------------------------------------------------
# 1-cocycles over F_2 by Cayley-graph propagation


@njit
def _insert_row(basis, c):
    """Reduce ``c`` against a pivot-indexed basis; add it if independent."""
    while c != 0:
        hb = 63
        while (c >> np.uint64(hb)) & np.uint64(1) == 0:
            hb -= 1
        if basis[hb] == 0:
            basis[hb] = c
            return 1
        c ^= basis[hb]
    return 0


@njit
def cocycles_f2(gens, rho_gens, d, base, pos, offs, uinv, sizes, strides):
    """Constraint rows on the generator values of a 1-cocycle.

    ``rho_gens[j, i]`` is row i of generator j's matrix as a column bitmask.
    A cocycle ``f`` is propagated along Cayley edges ``g -> g*s`` by
    ``f(gs) = f(g) rho(s) + f(s)``; each element stores, per coordinate, the
    mask of unknowns it depends on.  Unknown ``j*d + c`` is coordinate c of
    ``f(s_j)``.  Every edge closing a cycle yields constraints.

    Returns ``(status, basis, rank, visited)``; status 1 means the matrices
    disagree on some closed walk.
    """
    k = gens.shape[0]
    n = gens.shape[1]
    total = 1
    for i in range(sizes.shape[0]):
        total *= sizes[i]
    rho = np.zeros((total, d), dtype=np.uint32)
    lin = np.zeros((total, d), dtype=np.uint64)
    seen = np.zeros(total, dtype=np.uint8)
    basis = np.zeros(64, dtype=np.uint64)
    rank = 0
    queue = np.empty(total, dtype=np.int64)
    ident = np.arange(n).astype(np.int32)
    r0 = rank_packed(ident, base, pos, offs, uinv, strides)
    for i in range(d):
        rho[r0, i] = np.uint32(1) << np.uint32(i)
    seen[r0] = 1
    queue[0] = r0
    head = 0
    tail = 1
    nrho = np.empty(d, dtype=np.uint32)
    nlin = np.empty(d, dtype=np.uint64)
    choices = np.empty(sizes.shape[0], dtype=np.int64)
    h = np.empty(n, dtype=np.int32)
    while head < tail:
        r = queue[head]
        head += 1
        for i in range(sizes.shape[0]):
            choices[i] = (r // strides[i]) % sizes[i]
        g = random_element_packed(choices, offs, uinv)
        for j in range(k):
            for x in range(n):
                h[x] = gens[j, g[x]]
            r2 = rank_packed(h, base, pos, offs, uinv, strides)
            # rho(g s) = rho(g) rho(s)
            for i in range(d):
                acc = np.uint32(0)
                row = rho[r, i]
                for t in range(d):
                    if (row >> np.uint32(t)) & np.uint32(1):
                        acc ^= rho_gens[j, t]
                nrho[i] = acc
            # f(g) rho(s): column c collects rows t of f(g) with rho(s)[t, c] = 1
            for c in range(d):
                acc64 = np.uint64(1) << np.uint64(j * d + c)
                for t in range(d):
                    if (rho_gens[j, t] >> np.uint32(c)) & np.uint32(1):
                        acc64 ^= lin[r, t]
                nlin[c] = acc64
            if seen[r2] == 0:
                seen[r2] = 1
                for i in range(d):
                    rho[r2, i] = nrho[i]
                    lin[r2, i] = nlin[i]
                queue[tail] = r2
                tail += 1
            else:
                for i in range(d):
                    if rho[r2, i] != nrho[i]:
                        return 1, basis, rank, tail
                for c in range(d):
                    diff = lin[r2, c] ^ nlin[c]
                    if diff != 0:
                        rank += _insert_row(basis, diff)
    return 0, basis, rank, tail
