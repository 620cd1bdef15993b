"""Exact minimum-weight perfect matching on dense integer distance matrices.

Primal-dual blossom algorithm (Edmonds; array formulation in the style of
the classic O(n^3) implementations), specialized to complete graphs given by
an integer distance matrix.  All dual bookkeeping is integral, so results
are exact.  Compiled with numba when available; the pure-Python fallback is
identical but slow.

The public entry point is :func:`min_weight_perfect_matching`.  Minimum
weight is achieved by running maximum-weight matching on the transformed
weights  K - dist  shifted far enough that maximum weight implies maximum
cardinality (perfect, on a complete even graph).
"""

from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


_NONE = 0
_S = 1
_T = 2


@njit(cache=True)
def _leaves(b, n, childs, nch, out):
    """Write the vertices contained in blossom b into out; return count."""
    if b < n:
        out[0] = b
        return 1
    cnt = 0
    stack = np.empty(2 * n, np.int64)
    sp = 0
    stack[sp] = b
    sp += 1
    while sp > 0:
        sp -= 1
        c = stack[sp]
        if c < n:
            out[cnt] = c
            cnt += 1
        else:
            for i in range(nch[c]):
                stack[sp] = childs[c, i]
                sp += 1
    return cnt


@njit(cache=True)
def _assign_s(x, n, W, mate, label, tx, ty, top, queue, qtail, scratch,
              childs, nch):
    """Label the top blossom of x as S and queue its vertices."""
    bx = top[x]
    label[bx] = _S
    y = mate[x]
    if y == -1:
        tx[bx] = -1
        ty[bx] = -1
    else:
        tx[bx] = y
        ty[bx] = x
    cnt = _leaves(bx, n, childs, nch, scratch)
    for i in range(cnt):
        queue[qtail] = scratch[i]
        qtail += 1
    return qtail


@njit(cache=True)
def _find_path_through(b, sub, n, childs, nch, cyc_x, cyc_y,
                       path_nodes, path_ex, path_ey):
    """Path from child `sub` of blossom b to the base child.

    Fills path_nodes (children) and path edges; returns edge count.
    Mirrors the classic walk: even positions step down the child list,
    odd positions step up (wrapping), so the path alternates correctly.
    """
    k = nch[b]
    p = 0
    for i in range(k):
        if childs[b, i] == sub:
            p = i
            break
    nn = 0
    ne = 0
    path_nodes[nn] = sub
    nn += 1
    while p != 0:
        if p % 2 == 0:
            path_ex[ne] = cyc_y[b, p - 1]
            path_ey[ne] = cyc_x[b, p - 1]
            ne += 1
            path_nodes[nn] = childs[b, p - 1]
            nn += 1
            path_ex[ne] = cyc_y[b, p - 2]
            path_ey[ne] = cyc_x[b, p - 2]
            ne += 1
            path_nodes[nn] = childs[b, p - 2]
            nn += 1
            p -= 2
        else:
            path_ex[ne] = cyc_x[b, p]
            path_ey[ne] = cyc_y[b, p]
            ne += 1
            path_nodes[nn] = childs[b, p + 1]
            nn += 1
            path_ex[ne] = cyc_x[b, p + 1]
            path_ey[ne] = cyc_y[b, p + 1]
            ne += 1
            path_nodes[nn] = childs[b, (p + 2) % k]
            nn += 1
            p = (p + 2) % k
    return ne


@njit(cache=True)
def _augment_blossom(outer, sub0, n, mate, parent, base_v, childs, nch,
                     cyc_x, cyc_y):
    """Re-mate inside blossom `outer` so that `sub0`'s vertex becomes base."""
    stack_outer = np.empty(4 * n, np.int64)
    stack_sub = np.empty(4 * n, np.int64)
    sp = 0
    stack_outer[sp] = outer
    stack_sub[sp] = sub0
    sp += 1
    path_nodes = np.empty(2 * n + 2, np.int64)
    path_ex = np.empty(2 * n + 2, np.int64)
    path_ey = np.empty(2 * n + 2, np.int64)
    tmp_childs = np.empty(2 * n + 2, np.int64)
    tmp_cx = np.empty(2 * n + 2, np.int64)
    tmp_cy = np.empty(2 * n + 2, np.int64)
    while sp > 0:
        sp -= 1
        outer_b = stack_outer[sp]
        sub = stack_sub[sp]
        b = parent[sub]
        if b != outer_b:
            stack_outer[sp] = outer_b
            stack_sub[sp] = b
            sp += 1
        # augment blossom b from child `sub` to its base child
        ne = _find_path_through(b, sub, n, childs, nch, cyc_x, cyc_y,
                                path_nodes, path_ex, path_ey)
        for p in range(0, ne, 2):
            x = path_ex[p + 1]
            y = path_ey[p + 1]
            mate[x] = y
            mate[y] = x
            bx = path_nodes[p + 1]
            if bx >= n:
                # augment bx starting from the trivial blossom of x; the
                # outer loop walks up the nesting levels via parent[]
                stack_outer[sp] = bx
                stack_sub[sp] = x
                sp += 1
            by = path_nodes[p + 2]
            if by >= n:
                stack_outer[sp] = by
                stack_sub[sp] = y
                sp += 1
        # rotate children so `sub` is first, keep cyclic edge alignment
        k = nch[b]
        p0 = 0
        for i in range(k):
            if childs[b, i] == sub:
                p0 = i
                break
        for i in range(k):
            tmp_childs[i] = childs[b, (p0 + i) % k]
            tmp_cx[i] = cyc_x[b, (p0 + i) % k]
            tmp_cy[i] = cyc_y[b, (p0 + i) % k]
        for i in range(k):
            childs[b, i] = tmp_childs[i]
            cyc_x[b, i] = tmp_cx[i]
            cyc_y[b, i] = tmp_cy[i]
        base_v[b] = base_v[sub]
    return 0


@njit(cache=True)
def _mwm_kernel(W):  # noqa: C901 - the algorithm is one long procedure
    """Maximum-weight matching on the complete graph with weight matrix W.

    Returns the vertex-level mate array.  W must be int64, symmetric, with
    non-negative entries.
    """
    n = W.shape[0]
    mate = np.full(n, -1, np.int64)
    if n == 0:
        return mate
    nb = 2 * n  # blossom id space: 0..n-1 trivial, n..2n-1 allocated
    wmax = np.int64(0)
    for i in range(n):
        for j in range(n):
            if W[i, j] > wmax:
                wmax = W[i, j]
    du2 = np.full(n, wmax, np.int64)       # 2x vertex duals
    z2 = np.zeros(nb, np.int64)            # 2x blossom duals
    label = np.zeros(nb, np.int64)
    tx = np.full(nb, -1, np.int64)         # tree edge (tx, ty), ty inside
    ty = np.full(nb, -1, np.int64)
    parent = np.full(nb, -1, np.int64)
    base_v = np.empty(nb, np.int64)
    for v in range(n):
        base_v[v] = v
    top = np.empty(n, np.int64)
    childs = np.full((nb, n + 1), -1, np.int64)
    nch = np.zeros(nb, np.int64)
    cyc_x = np.full((nb, n + 1), -1, np.int64)
    cyc_y = np.full((nb, n + 1), -1, np.int64)
    freeb = np.empty(n, np.int64)          # free nontrivial blossom ids
    nfree = 0
    for i in range(n):
        freeb[i] = nb - 1 - i
        nfree += 1
    used = np.zeros(nb, np.uint8)          # nontrivial blossom in use

    qcap = 4 * n * n + 16
    queue = np.empty(qcap, np.int64)
    scratch = np.empty(n, np.int64)
    scratch2 = np.empty(n, np.int64)

    bestv = np.full(n, -1, np.int64)       # per non-S vertex: best S partner
    bestb_x = np.full(nb, -1, np.int64)    # per S-blossom: best S-S edge
    bestb_y = np.full(nb, -1, np.int64)

    # trace buffers
    xe_x = np.empty(n + 2, np.int64)
    xe_y = np.empty(n + 2, np.int64)
    ye_x = np.empty(n + 2, np.int64)
    ye_y = np.empty(n + 2, np.int64)
    mark = np.zeros(nb, np.uint8)
    path_x = np.empty(2 * n + 4, np.int64)
    path_y = np.empty(2 * n + 4, np.int64)
    path_nodes = np.empty(2 * n + 4, np.int64)
    pe_x = np.empty(2 * n + 4, np.int64)
    pe_y = np.empty(2 * n + 4, np.int64)

    for _stage in range(n + 1):
        # reset stage state
        for b in range(nb):
            label[b] = _NONE
            tx[b] = -1
            ty[b] = -1
            bestb_x[b] = -1
            bestb_y[b] = -1
        for v in range(n):
            bestv[v] = -1
            top[v] = v
        # rebuild top[] from live blossoms
        for b in range(n, nb):
            if used[b] and parent[b] == -1:
                cnt = _leaves(b, n, childs, nch, scratch)
                for i in range(cnt):
                    top[scratch[i]] = b
        qhead = 0
        qtail = 0
        have_free = False
        for v in range(n):
            if mate[v] == -1 and label[top[v]] == _NONE:
                have_free = True
                qtail = _assign_s(v, n, W, mate, label, tx, ty, top, queue,
                                  qtail, scratch, childs, nch)
        if not have_free:
            break  # matching is perfect

        aug_px = -1  # augmenting path found flag (length in aug_len)
        aug_len = 0

        while True:  # substages
            # ---- scan queued S-vertices
            found_aug = False
            while qhead < qtail and not found_aug:
                x = queue[qhead]
                qhead += 1
                if label[top[x]] != _S:
                    continue
                for y in range(n):
                    if y == x:
                        continue
                    bx = top[x]
                    by = top[y]
                    if bx == by:
                        continue
                    ylab = label[by]
                    slack2 = du2[x] + du2[y] - 2 * W[x, y]
                    if slack2 <= 0:
                        if ylab == _NONE:
                            # label T, then S on the mate of its base
                            label[by] = _T
                            tx[by] = x
                            ty[by] = y
                            zv = mate[base_v[by]]
                            qtail = _assign_s(
                                zv, n, W, mate, label, tx, ty, top, queue,
                                qtail, scratch, childs, nch)
                        elif ylab == _S:
                            # trace alternating paths from x and y
                            nxe = 0
                            nye = 0
                            xe_x[nxe] = x
                            xe_y[nxe] = y
                            nxe += 1
                            ye_x[nye] = y
                            ye_y[nye] = x
                            nye += 1
                            cx = x
                            cy = y
                            common = np.int64(-1)
                            nmark = 0
                            while cx != -1 or cy != -1:
                                bcx = top[cx]
                                if mark[bcx] == 1:
                                    common = bcx
                                    break
                                mark[bcx] = 1
                                scratch2[nmark] = bcx
                                nmark += 1
                                if tx[bcx] == -1:
                                    cx = -1
                                else:
                                    xe_x[nxe] = tx[bcx]
                                    xe_y[nxe] = ty[bcx]
                                    nxe += 1
                                    cx = tx[bcx]
                                if cy != -1:
                                    tmp = cx
                                    cx = cy
                                    cy = tmp
                                    tmpn = nxe
                                    nxe = nye
                                    nye = tmpn
                                    for i in range(max(nxe, nye)):
                                        tmpv = xe_x[i]
                                        xe_x[i] = ye_x[i]
                                        ye_x[i] = tmpv
                                        tmpv = xe_y[i]
                                        xe_y[i] = ye_y[i]
                                        ye_y[i] = tmpv
                            for i in range(nmark):
                                mark[scratch2[i]] = 0
                            if common != -1:
                                while top[ye_x[nye - 1]] != common:
                                    nye -= 1
                            # fuse: reverse(xedges) + flipped(yedges[1:])
                            plen = 0
                            for i in range(nxe - 1, -1, -1):
                                path_x[plen] = xe_x[i]
                                path_y[plen] = xe_y[i]
                                plen += 1
                            for i in range(1, nye):
                                path_x[plen] = ye_y[i]
                                path_y[plen] = ye_x[i]
                                plen += 1
                            if common == -1:
                                # augmenting path
                                aug_len = plen
                                for i in range(plen):
                                    pe_x[i] = path_x[i]
                                    pe_y[i] = path_y[i]
                                found_aug = True
                                break
                            # ---- make a new blossom
                            b = freeb[nfree - 1]
                            nfree -= 1
                            used[b] = 1
                            nch[b] = plen
                            for i in range(plen):
                                sub = top[path_x[i]]
                                childs[b, i] = sub
                                parent[sub] = b
                                cyc_x[b, i] = path_x[i]
                                cyc_y[b, i] = path_y[i]
                            base_sub = childs[b, 0]
                            base_v[b] = base_v[base_sub]
                            parent[b] = -1
                            z2[b] = 0
                            label[b] = _S
                            tx[b] = tx[base_sub]
                            ty[b] = ty[base_sub]
                            cnt = _leaves(b, n, childs, nch, scratch)
                            for i in range(cnt):
                                v = scratch[i]
                                if label[top[v]] == _T:
                                    queue[qtail] = v
                                    qtail += 1
                                top[v] = b
                            # recompute best S-S edge for the new blossom
                            bestb_x[b] = -1
                            bestb_y[b] = -1
                            bslack = np.int64(0)
                            for i in range(cnt):
                                v = scratch[i]
                                for w in range(n):
                                    if top[w] == b or label[top[w]] != _S:
                                        continue
                                    s2 = du2[v] + du2[w] - 2 * W[v, w]
                                    if bestb_x[b] == -1 or s2 < bslack:
                                        bslack = s2
                                        bestb_x[b] = v
                                        bestb_y[b] = w
                    else:
                        if ylab == _S:
                            cur = bestb_x[bx]
                            if cur == -1 or slack2 < (
                                du2[cur] + du2[bestb_y[bx]]
                                - 2 * W[cur, bestb_y[bx]]
                            ):
                                bestb_x[bx] = x
                                bestb_y[bx] = y
                        if ylab != _S:
                            cur = bestv[y]
                            if cur == -1 or slack2 < (
                                du2[y] + du2[cur] - 2 * W[y, cur]
                            ):
                                bestv[y] = x
            if found_aug:
                aug_px = 1
                break

            # ---- delta computation
            delta_type = -1
            delta = np.int64(0)
            # delta1: min dual of S-vertices (termination criterion)
            for v in range(n):
                if label[top[v]] == _S:
                    if delta_type == -1 or du2[v] < delta:
                        delta_type = 1
                        delta = du2[v]
            d_edge_x = np.int64(-1)
            d_edge_y = np.int64(-1)
            # delta2: min slack of S--free edges
            for v in range(n):
                if label[top[v]] == _NONE and bestv[v] != -1:
                    u = bestv[v]
                    s2 = du2[v] + du2[u] - 2 * W[v, u]
                    if s2 <= delta:
                        delta_type = 2
                        delta = s2
                        d_edge_x = u
                        d_edge_y = v
            # delta3: half min slack of S--S edges
            for b in range(nb):
                if (
                    (b < n or used[b] == 1)
                    and parent[b] == -1
                    and label[b] == _S
                    and bestb_x[b] != -1
                ):
                    u = bestb_x[b]
                    w = bestb_y[b]
                    if label[top[w]] != _S or top[w] == top[u]:
                        continue  # stale cache entry
                    s2 = du2[u] + du2[w] - 2 * W[u, w]
                    half = s2 // 2
                    if half <= delta:
                        delta_type = 3
                        delta = half
                        d_edge_x = u
                        d_edge_y = w
            # delta4: half dual of top-level T-blossoms
            d_blossom = np.int64(-1)
            for b in range(n, nb):
                if used[b] == 1 and parent[b] == -1 and label[b] == _T:
                    half = z2[b] // 2
                    if half <= delta:
                        delta_type = 4
                        delta = half
                        d_blossom = b
            # ---- apply delta
            for v in range(n):
                lab = label[top[v]]
                if lab == _S:
                    du2[v] -= delta
                elif lab == _T:
                    du2[v] += delta
            for b in range(n, nb):
                if used[b] == 1 and parent[b] == -1:
                    if label[b] == _S:
                        z2[b] += 2 * delta
                    elif label[b] == _T:
                        z2[b] -= 2 * delta

            if delta_type == 1:
                aug_px = -1
                break  # optimum reached
            if delta_type == 2:
                # the S-side endpoint rescans and will label d_edge_y
                queue[qtail] = d_edge_x
                qtail += 1
            elif delta_type == 3:
                queue[qtail] = d_edge_x
                qtail += 1
            elif delta_type == 4:
                # ---- expand the T-blossom with zero dual
                b = d_blossom
                k = nch[b]
                for i in range(k):
                    sub = childs[b, i]
                    parent[sub] = -1
                    cnt = _leaves(sub, n, childs, nch, scratch)
                    for t in range(cnt):
                        top[scratch[t]] = sub
                    label[sub] = _NONE
                    tx[sub] = -1
                    ty[sub] = -1
                # reconstruct tree attachment through the expanded blossom
                ex = tx[b]
                ey = ty[b]
                sub = top[ey]
                label[sub] = _T
                tx[sub] = ex
                ty[sub] = ey
                ne = _find_path_through(b, sub, n, childs, nch, cyc_x,
                                        cyc_y, path_nodes, pe_x, pe_y)
                for p in range(0, ne, 2):
                    # (p) T ==(y,x)== (p+1) S --- (p+2) T
                    sx = pe_y[p]
                    qtail = _assign_s(sx, n, W, mate, label, tx, ty, top,
                                      queue, qtail, scratch, childs, nch)
                    nxt = path_nodes[p + 2]
                    label[nxt] = _T
                    tx[nxt] = pe_x[p + 1]
                    ty[nxt] = pe_y[p + 1]
                # free the blossom id
                used[b] = 0
                nch[b] = 0
                label[b] = _NONE
                freeb[nfree] = b
                nfree += 1

        if aug_px == -1:
            break  # no augmenting path possible; matching is maximum

        # ---- augment along the found path
        for i in range(0, aug_len, 2):
            x = pe_x[i]
            y = pe_y[i]
            bx = top[x]
            if bx >= n:
                _augment_blossom(bx, x, n, mate, parent, base_v, childs,
                                 nch, cyc_x, cyc_y)
            by = top[y]
            if by >= n:
                _augment_blossom(by, y, n, mate, parent, base_v, childs,
                                 nch, cyc_x, cyc_y)
            mate[x] = y
            mate[y] = x
        # ---- expand blossoms with zero dual (recursively)
        sp = 0
        for b in range(n, nb):
            if used[b] == 1 and parent[b] == -1 and z2[b] == 0:
                scratch2[sp] = b
                sp += 1
        while sp > 0:
            sp -= 1
            b = scratch2[sp]
            for i in range(nch[b]):
                sub = childs[b, i]
                parent[sub] = -1
                if sub >= n and z2[sub] == 0:
                    scratch2[sp] = sub
                    sp += 1
                else:
                    cnt = _leaves(sub, n, childs, nch, scratch)
                    for t in range(cnt):
                        top[scratch[t]] = sub
            used[b] = 0
            nch[b] = 0
            freeb[nfree] = b
            nfree += 1

    return mate


def min_weight_perfect_matching(dist: np.ndarray) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching of a complete even graph.

    `dist` is a symmetric non-negative integer matrix.  Returns the pairs
    (i, j) with i < j, sorted.  Raises ValueError for odd sizes.
    """
    dist = np.asarray(dist)
    n = dist.shape[0]
    if dist.shape != (n, n):
        raise ValueError("distance matrix must be square")
    if n % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if n == 0:
        return []
    if not np.issubdtype(dist.dtype, np.integer):
        raise ValueError("distances must be integers for exact matching")
    dist = dist.astype(np.int64)
    dmax = int(dist.max())
    dmin = int(dist.min())
    if dmax == dmin:
        # all pairings have equal weight; lexicographic pairing is optimal
        return [(i, i + 1) for i in range(0, n, 2)]
    # maximum-weight transform; the offset forces maximum cardinality
    offset = n * (dmax - dmin) + 1
    W = (dmax - dist) + offset
    np.fill_diagonal(W, 0)
    mate = _mwm_kernel(np.ascontiguousarray(W))
    if np.any(mate < 0):
        raise AssertionError("matching is not perfect")
    pairs = sorted((int(min(i, m)), int(max(i, m)))
                   for i, m in enumerate(mate) if i < m)
    return pairs


def matching_weight(dist: np.ndarray, pairs: list[tuple[int, int]]) -> int:
    return int(sum(dist[i, j] for (i, j) in pairs))


def brute_force_min_matching(dist: np.ndarray) -> int:
    """Exhaustive minimum perfect-matching weight (for <= ~12 vertices)."""
    n = dist.shape[0]
    if n % 2:
        raise ValueError("even size required")

    def rec(rem: tuple) -> int:
        if not rem:
            return 0
        i = rem[0]
        best = None
        for t, j in enumerate(rem[1:], start=1):
            rest = rem[1:t] + rem[t + 1 :]
            w = dist[i, j] + rec(rest)
            if best is None or w < best:
                best = w
        return best

    return int(rec(tuple(range(n))))
