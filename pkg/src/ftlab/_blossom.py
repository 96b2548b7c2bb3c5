"""Maximum-weight general matching (blossom algorithm) on flat arrays.

Classic O(n^3) primal-dual algorithm (Galil's exposition) restructured onto
integer arrays so numba can JIT it; with integer edge weights every quantity
stays integral and the optimum is exact. `matching.min_weight_perfect_pairs`
builds min-weight perfect matching on top via the usual weight reflection.

Conventions: vertices 0..n-1, blossom ids n..2n-1. Edge k has endpoint ids
2k and 2k+1; `endpoint[p]` is the vertex at endpoint id p, and `mate` stores
endpoint ids (or -1). Negative list indexing from the classic formulation is
emulated with modular indexing into per-blossom child arrays.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _leaves(b, nvertex, childs, childlen, out):
    """Collect leaf vertices of blossom b into out; returns count."""
    if b < nvertex:
        out[0] = b
        return 1
    count = 0
    stack = np.empty(2 * nvertex, dtype=np.int32)
    top = 0
    stack[top] = b
    top += 1
    while top > 0:
        top -= 1
        t = stack[top]
        if t < nvertex:
            out[count] = t
            count += 1
        else:
            for i in range(childlen[t]):
                stack[top] = childs[t, i]
                top += 1
    return count


@njit(cache=True)
def _assign_label(w, t, p, nvertex, inblossom, label, labelend, bestedge,
                  blossombase, endpoint, mate, childs, childlen, queue, qlen, leaves):
    """Label vertex w's blossom with t; S labels enqueue leaves, T labels
    propagate an S label across the matched edge of the base."""
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        bestedge[w] = -1
        bestedge[b] = -1
        if t == 1:
            cnt = _leaves(b, nvertex, childs, childlen, leaves)
            for i in range(cnt):
                queue[qlen] = leaves[i]
                qlen += 1
            return qlen
        base = blossombase[b]
        w = endpoint[mate[base]]
        t = 1
        p = mate[base] ^ 1


@njit(cache=True)
def _augment_blossom(b, v, nvertex, blossomparent, childs, childlen, endps,
                     blossombase, endpoint, mate):
    """Swap matched/unmatched edges along the path from v to the base of b,
    so that v becomes the new base."""
    t = v
    while blossomparent[t] != b:
        t = blossomparent[t]
    if t >= nvertex:
        _augment_blossom(t, v, nvertex, blossomparent, childs, childlen,
                         endps, blossombase, endpoint, mate)
    clen = childlen[b]
    i = 0
    for ci in range(clen):
        if childs[b, ci] == t:
            i = ci
            break
    j = i
    if i & 1:
        j -= clen
        jstep = 1
        endptrick = 0
    else:
        jstep = -1
        endptrick = 1
    while j != 0:
        j += jstep
        t2 = childs[b, j % clen]
        p = endps[b, (j - endptrick) % clen] ^ endptrick
        if t2 >= nvertex:
            _augment_blossom(t2, endpoint[p], nvertex, blossomparent, childs,
                             childlen, endps, blossombase, endpoint, mate)
        j += jstep
        t2 = childs[b, j % clen]
        if t2 >= nvertex:
            _augment_blossom(t2, endpoint[p ^ 1], nvertex, blossomparent,
                             childs, childlen, endps, blossombase, endpoint, mate)
        mate[endpoint[p]] = p ^ 1
        mate[endpoint[p ^ 1]] = p
    # rotate child/endpoint lists so sub-blossom i comes first
    tmp_c = np.empty(clen, dtype=childs.dtype)
    tmp_e = np.empty(clen, dtype=endps.dtype)
    for ci in range(clen):
        tmp_c[ci] = childs[b, (ci + i) % clen]
        tmp_e[ci] = endps[b, (ci + i) % clen]
    for ci in range(clen):
        childs[b, ci] = tmp_c[ci]
        endps[b, ci] = tmp_e[ci]
    blossombase[b] = blossombase[childs[b, 0]]


@njit(cache=True)
def _expand_blossom(b0, endstage, nvertex, blossomparent, childs, childlen,
                    endps, blossombase, endpoint, mate, label, labelend,
                    inblossom, bestedge, bbelen, dualvar, allowedge, queue,
                    qlen, unused, nunused, leaves):
    """Dissolve blossom b0 (recursively at end of stage); returns
    (nunused, qlen)."""
    stack = np.empty(2 * nvertex, dtype=np.int32)
    top = 0
    stack[top] = b0
    top += 1
    first = True
    while top > 0:
        top -= 1
        b = stack[top]
        for ci in range(childlen[b]):
            s = childs[b, ci]
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                stack[top] = s
                top += 1
            else:
                cnt = _leaves(s, nvertex, childs, childlen, leaves)
                for li in range(cnt):
                    inblossom[leaves[li]] = s

        if (not endstage) and label[b] == 2 and first:
            # Relabel the sub-blossoms along the alternating path through
            # which b received its T label; the remaining sub-blossoms become
            # free unless reachable from outside.
            clen = childlen[b]
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = 0
            for ci in range(clen):
                if childs[b, ci] == entrychild:
                    j = ci
                    break
            if j & 1:
                j -= clen
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[b, (j - endptrick) % clen] ^ endptrick ^ 1]] = 0
                qlen = _assign_label(endpoint[p ^ 1], 2, p, nvertex, inblossom,
                                     label, labelend, bestedge, blossombase,
                                     endpoint, mate, childs, childlen, queue,
                                     qlen, leaves)
                allowedge[endps[b, (j - endptrick) % clen] // 2] = True
                j += jstep
                p = endps[b, (j - endptrick) % clen] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = childs[b, j % clen]
            label[endpoint[p ^ 1]] = 2
            label[bv] = 2
            labelend[endpoint[p ^ 1]] = p
            labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while childs[b, j % clen] != entrychild:
                bv = childs[b, j % clen]
                if label[bv] == 1:
                    j += jstep
                    continue
                cnt = _leaves(bv, nvertex, childs, childlen, leaves)
                vfound = -1
                for li in range(cnt):
                    if label[leaves[li]] != 0:
                        vfound = leaves[li]
                        break
                if vfound >= 0:
                    label[vfound] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    qlen = _assign_label(vfound, 2, labelend[vfound], nvertex,
                                         inblossom, label, labelend, bestedge,
                                         blossombase, endpoint, mate, childs,
                                         childlen, queue, qlen, leaves)
                j += jstep
        first = False
        # recycle the blossom id
        label[b] = 0
        labelend[b] = -1
        childlen[b] = 0
        blossombase[b] = -1
        bestedge[b] = -1
        bbelen[b] = -1
        unused[nunused] = b
        nunused += 1
    return nunused, qlen


@njit(cache=True)
def max_weight_matching(nvertex, eu, ev, ew):
    """mate[v] = matched endpoint id or -1; integer weights, exact optimum."""
    nedge = len(eu)
    mate = -np.ones(nvertex, dtype=np.int64)
    if nedge == 0 or nvertex == 0:
        return mate

    maxweight = np.int64(0)
    for k in range(nedge):
        if ew[k] > maxweight:
            maxweight = ew[k]

    endpoint = np.empty(2 * nedge, dtype=np.int32)
    for k in range(nedge):
        endpoint[2 * k] = eu[k]
        endpoint[2 * k + 1] = ev[k]

    deg = np.zeros(nvertex + 1, dtype=np.int32)
    for k in range(nedge):
        deg[eu[k] + 1] += 1
        deg[ev[k] + 1] += 1
    nb_start = np.cumsum(deg).astype(np.int32)
    nb = np.empty(2 * nedge, dtype=np.int32)
    fill = nb_start[:-1].copy()
    for k in range(nedge):
        nb[fill[eu[k]]] = 2 * k + 1
        fill[eu[k]] += 1
        nb[fill[ev[k]]] = 2 * k
        fill[ev[k]] += 1

    two_n = 2 * nvertex
    label = np.zeros(two_n, dtype=np.int8)
    labelend = -np.ones(two_n, dtype=np.int64)
    inblossom = np.arange(nvertex, dtype=np.int32)
    blossomparent = -np.ones(two_n, dtype=np.int32)
    childs = np.zeros((two_n, nvertex + 2), dtype=np.int32)
    childlen = np.zeros(two_n, dtype=np.int32)
    endps = np.zeros((two_n, nvertex + 2), dtype=np.int64)
    blossombase = -np.ones(two_n, dtype=np.int32)
    for v in range(nvertex):
        blossombase[v] = v
    bestedge = -np.ones(two_n, dtype=np.int64)
    bbe = np.zeros((two_n, two_n), dtype=np.int64)
    bbelen = -np.ones(two_n, dtype=np.int32)
    unused = np.empty(2 * nvertex, dtype=np.int32)
    for i in range(nvertex):
        unused[i] = nvertex + i
    nunused = nvertex
    dualvar = np.zeros(two_n, dtype=np.int64)
    dualvar[:nvertex] = maxweight
    allowedge = np.zeros(nedge, dtype=np.bool_)
    queue = np.empty(64 * (nvertex + 1), dtype=np.int32)
    qlen = 0
    leaves = np.empty(nvertex, dtype=np.int32)
    leaves2 = np.empty(nvertex, dtype=np.int32)
    scanpath = np.empty(two_n, dtype=np.int32)

    for _stage in range(nvertex):
        for i in range(two_n):
            label[i] = 0
            labelend[i] = -1
            bestedge[i] = -1
        for i in range(nvertex, two_n):
            bbelen[i] = -1
        for k in range(nedge):
            allowedge[k] = False
        qlen = 0

        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                qlen = _assign_label(v, 1, np.int64(-1), nvertex, inblossom,
                                     label, labelend, bestedge, blossombase,
                                     endpoint, mate, childs, childlen, queue,
                                     qlen, leaves)

        augmented = False
        while True:
            while qlen > 0 and not augmented:
                qlen -= 1
                v = queue[qlen]
                for ip in range(nb_start[v], nb_start[v + 1]):
                    p = nb[ip]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = dualvar[eu[k]] + dualvar[ev[k]] - 2 * ew[k]
                    if not allowedge[k] and kslack <= 0:
                        allowedge[k] = True
                    if allowedge[k]:
                        bw = inblossom[w]
                        if label[bw] == 0:
                            qlen = _assign_label(w, 2, np.int64(p ^ 1), nvertex,
                                                 inblossom, label, labelend,
                                                 bestedge, blossombase, endpoint,
                                                 mate, childs, childlen, queue,
                                                 qlen, leaves)
                        elif label[bw] == 1:
                            # scan for a common ancestor of the two S blossoms
                            base = -1
                            pathlen = 0
                            vv = v
                            ww = w
                            while vv != -1 or ww != -1:
                                bscan = inblossom[vv]
                                if label[bscan] & 4:
                                    base = blossombase[bscan]
                                    break
                                scanpath[pathlen] = bscan
                                pathlen += 1
                                label[bscan] = 5
                                if labelend[bscan] == -1:
                                    vv = -1
                                else:
                                    vv = endpoint[labelend[bscan]]
                                    bscan = inblossom[vv]
                                    vv = endpoint[labelend[bscan]]
                                if ww != -1:
                                    tmpv = vv
                                    vv = ww
                                    ww = tmpv
                            for pi in range(pathlen):
                                label[scanpath[pi]] = 1
                            if base >= 0:
                                # -------- addBlossom(base, k) --------
                                vb = eu[k]
                                wb = ev[k]
                                bb = inblossom[base]
                                bv = inblossom[vb]
                                bwx = inblossom[wb]
                                nunused -= 1
                                b = unused[nunused]
                                blossombase[b] = base
                                blossomparent[b] = -1
                                blossomparent[bb] = b
                                clen = 0
                                elen = 0
                                while bv != bb:
                                    blossomparent[bv] = b
                                    childs[b, clen] = bv
                                    clen += 1
                                    endps[b, elen] = labelend[bv]
                                    elen += 1
                                    vb = endpoint[labelend[bv]]
                                    bv = inblossom[vb]
                                childs[b, clen] = bb
                                clen += 1
                                for i2 in range(clen // 2):
                                    tmp = childs[b, i2]
                                    childs[b, i2] = childs[b, clen - 1 - i2]
                                    childs[b, clen - 1 - i2] = tmp
                                for i2 in range(elen // 2):
                                    tmpe = endps[b, i2]
                                    endps[b, i2] = endps[b, elen - 1 - i2]
                                    endps[b, elen - 1 - i2] = tmpe
                                endps[b, elen] = 2 * k
                                elen += 1
                                while bwx != bb:
                                    blossomparent[bwx] = b
                                    childs[b, clen] = bwx
                                    clen += 1
                                    endps[b, elen] = labelend[bwx] ^ 1
                                    elen += 1
                                    wb = endpoint[labelend[bwx]]
                                    bwx = inblossom[wb]
                                childlen[b] = clen
                                label[b] = 1
                                labelend[b] = labelend[bb]
                                dualvar[b] = 0
                                cnt = _leaves(b, nvertex, childs, childlen, leaves)
                                for li in range(cnt):
                                    if label[inblossom[leaves[li]]] == 2:
                                        queue[qlen] = leaves[li]
                                        qlen += 1
                                    inblossom[leaves[li]] = b
                                # recompute best edges to neighbouring S blossoms
                                bestedgeto = -np.ones(two_n, dtype=np.int64)
                                for ci in range(clen):
                                    bchild = childs[b, ci]
                                    if bbelen[bchild] == -1:
                                        cnt2 = _leaves(bchild, nvertex, childs, childlen, leaves2)
                                        for li in range(cnt2):
                                            lv = leaves2[li]
                                            for ip2 in range(nb_start[lv], nb_start[lv + 1]):
                                                k2 = nb[ip2] // 2
                                                j2 = endpoint[nb[ip2]]
                                                bj = inblossom[j2]
                                                if bj != b and label[bj] == 1:
                                                    ks2 = dualvar[eu[k2]] + dualvar[ev[k2]] - 2 * ew[k2]
                                                    cur = bestedgeto[bj]
                                                    if cur == -1 or ks2 < (dualvar[eu[cur]] + dualvar[ev[cur]] - 2 * ew[cur]):
                                                        bestedgeto[bj] = k2
                                    else:
                                        for li in range(bbelen[bchild]):
                                            k2 = bbe[bchild, li]
                                            j2 = ev[k2]
                                            if inblossom[j2] == b:
                                                j2 = eu[k2]
                                            bj = inblossom[j2]
                                            if bj != b and label[bj] == 1:
                                                ks2 = dualvar[eu[k2]] + dualvar[ev[k2]] - 2 * ew[k2]
                                                cur = bestedgeto[bj]
                                                if cur == -1 or ks2 < (dualvar[eu[cur]] + dualvar[ev[cur]] - 2 * ew[cur]):
                                                    bestedgeto[bj] = k2
                                    bbelen[bchild] = -1
                                    bestedge[bchild] = -1
                                blen = 0
                                for bi in range(two_n):
                                    if bestedgeto[bi] != -1:
                                        bbe[b, blen] = bestedgeto[bi]
                                        blen += 1
                                bbelen[b] = blen
                                bestedge[b] = -1
                                for li in range(blen):
                                    k2 = bbe[b, li]
                                    if bestedge[b] == -1:
                                        bestedge[b] = k2
                                    else:
                                        kb = bestedge[b]
                                        if (dualvar[eu[k2]] + dualvar[ev[k2]] - 2 * ew[k2]
                                                < dualvar[eu[kb]] + dualvar[ev[kb]] - 2 * ew[kb]):
                                            bestedge[b] = k2
                            else:
                                # -------- augmentMatching(k) --------
                                for side in range(2):
                                    if side == 0:
                                        s = eu[k]
                                        pp = np.int64(2 * k + 1)
                                    else:
                                        s = ev[k]
                                        pp = np.int64(2 * k)
                                    while True:
                                        bs = inblossom[s]
                                        if bs >= nvertex:
                                            _augment_blossom(bs, s, nvertex,
                                                             blossomparent, childs,
                                                             childlen, endps,
                                                             blossombase, endpoint,
                                                             mate)
                                        mate[s] = pp
                                        if labelend[bs] == -1:
                                            break
                                        t2 = endpoint[labelend[bs]]
                                        bt = inblossom[t2]
                                        s = endpoint[labelend[bt]]
                                        j2 = endpoint[labelend[bt] ^ 1]
                                        if bt >= nvertex:
                                            _augment_blossom(bt, j2, nvertex,
                                                             blossomparent, childs,
                                                             childlen, endps,
                                                             blossombase, endpoint,
                                                             mate)
                                        mate[j2] = labelend[bt]
                                        pp = labelend[bt] ^ 1
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        bv2 = inblossom[v]
                        kb = bestedge[bv2]
                        if kb == -1 or kslack < (dualvar[eu[kb]] + dualvar[ev[kb]] - 2 * ew[kb]):
                            bestedge[bv2] = k
                    elif label[w] == 0:
                        kb = bestedge[w]
                        if kb == -1 or kslack < (dualvar[eu[kb]] + dualvar[ev[kb]] - 2 * ew[kb]):
                            bestedge[w] = k

            if augmented:
                break

            # dual variable update
            deltatype = 1
            delta = np.int64(1) << 60
            deltaedge = np.int64(-1)
            deltablossom = -1
            for v in range(nvertex):
                if dualvar[v] < delta:
                    delta = dualvar[v]
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    kb = bestedge[v]
                    d = dualvar[eu[kb]] + dualvar[ev[kb]] - 2 * ew[kb]
                    if d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = kb
            for b in range(two_n):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    kb = bestedge[b]
                    kslack = dualvar[eu[kb]] + dualvar[ev[kb]] - 2 * ew[kb]
                    d = kslack // 2
                    if d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = kb
            for b in range(nvertex, two_n):
                if (blossombase[b] >= 0 and blossomparent[b] == -1
                        and label[b] == 2 and dualvar[b] < delta):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b

            for v in range(nvertex):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nvertex, two_n):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i2 = eu[deltaedge]
                if label[inblossom[i2]] == 0:
                    i2 = ev[deltaedge]
                queue[qlen] = i2
                qlen += 1
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue[qlen] = eu[deltaedge]
                qlen += 1
            else:
                nunused, qlen = _expand_blossom(
                    deltablossom, False, nvertex, blossomparent, childs,
                    childlen, endps, blossombase, endpoint, mate, label,
                    labelend, inblossom, bestedge, bbelen, dualvar, allowedge,
                    queue, qlen, unused, nunused, leaves)

        if not augmented:
            break

        for b in range(nvertex, two_n):
            if (blossombase[b] >= 0 and blossomparent[b] == -1
                    and label[b] == 1 and dualvar[b] == 0):
                nunused, qlen = _expand_blossom(
                    b, True, nvertex, blossomparent, childs, childlen, endps,
                    blossombase, endpoint, mate, label, labelend, inblossom,
                    bestedge, bbelen, dualvar, allowedge, queue, qlen, unused,
                    nunused, leaves)

    return mate


def matched_pairs(nvertex, eu, ev, ew):
    """Convenience wrapper: list of (u, v) pairs of the optimum matching."""
    eu = np.ascontiguousarray(eu, dtype=np.int32)
    ev = np.ascontiguousarray(ev, dtype=np.int32)
    ew = np.ascontiguousarray(ew, dtype=np.int64)
    mate = max_weight_matching(nvertex, eu, ev, ew)
    pairs = []
    for k in range(len(eu)):
        if mate[eu[k]] == 2 * k + 1:
            pairs.append((int(eu[k]), int(ev[k])))
    return pairs
