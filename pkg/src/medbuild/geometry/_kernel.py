"""Exact polygon overlay on the signed integer grid.

All arithmetic is integer-only.  Operands are grouped rings; a point is
inside a group when a ray from it crosses the group's edges an odd number
of times (even-odd rule), so a group may carry outer rings and holes
together.  The overlay pipeline:

  1. arrange()  - split every edge at every crossing / touch, snapping
                  non-integral crossing points to the nearest grid point
                  (half away from zero), iterated until no crossings remain;
  2. classify   - for each arrangement segment, cast one perpendicular ray
                  per side and accumulate per-group crossing parity, which
                  yields the inside-vector of the faces left and right;
  3. extract    - keep segments whose two sides disagree under the chosen
                  operation, directed so the result region lies on the left;
  4. link       - stitch directed segments into rings with the
                  clockwise-most-turn rule, which keeps outer rings CCW and
                  hole rings CW.

This module is deliberately free of other imports so the identical source
compiles under Cython (pure-Python mode) as the fast kernel; the package
falls back to interpreting this file when the extension is absent.
"""

OP_UNION = 0
OP_INTERSECTION = 1
OP_DIFFERENCE = 2

_MAX_ARRANGE_ITER = 24


class ArrangementError(Exception):
    """Snap-rounding failed to converge (pathological near-degenerate input)."""


def area2(ring):
    """Doubled signed shoelace area of a ring given as [(x, y), ...]."""
    total = 0
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _rdiv(num, den):
    # round half away from zero; den > 0
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


def _strictly_between(px, py, ax, ay, bx, by):
    # collinearity assumed; True when p is interior to segment a-b
    if ax != bx:
        return (ax < px < bx) or (bx < px < ax)
    return (ay < py < by) or (by < py < ay)


def ring_self_intersects(ring):
    """True when a ring's edges cross or touch except at shared consecutive
    endpoints (duplicate vertices also count as invalid)."""
    n = len(ring)
    if n < 3:
        return True
    if len(set(ring)) != n:
        return True
    edges = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        (ax, ay), (bx, by) = edges[i]
        if ax == bx and ay == by:
            return True
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            (cx, cy), (dx, dy) = edges[j]
            d1 = _cross(cx, cy, dx, dy, ax, ay)
            d2 = _cross(cx, cy, dx, dy, bx, by)
            d3 = _cross(ax, ay, bx, by, cx, cy)
            d4 = _cross(ax, ay, bx, by, dx, dy)
            if adjacent:
                # the shared vertex is fine; any other contact is not
                if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
                    # collinear neighbours: bad when they overlap beyond the joint
                    if _strictly_between(ax, ay, cx, cy, dx, dy) or _strictly_between(
                        bx, by, cx, cy, dx, dy
                    ) or _strictly_between(cx, cy, ax, ay, bx, by) or _strictly_between(
                        dx, dy, ax, ay, bx, by
                    ):
                        return True
                continue
            if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
                return True
            if d1 == 0 and (_strictly_between(ax, ay, cx, cy, dx, dy) or (ax, ay) == (cx, cy) or (ax, ay) == (dx, dy)):
                return True
            if d2 == 0 and (_strictly_between(bx, by, cx, cy, dx, dy) or (bx, by) == (cx, cy) or (bx, by) == (dx, dy)):
                return True
            if d3 == 0 and _strictly_between(cx, cy, ax, ay, bx, by):
                return True
            if d4 == 0 and _strictly_between(dx, dy, ax, ay, bx, by):
                return True
    return False


def _pair_splits(s, t):
    """Split points needed so segments s and t only meet at endpoints.

    Returns (points_for_s, points_for_t, properly_crossing).
    """
    ax, ay, bx, by = s[0], s[1], s[2], s[3]
    cx, cy, dx, dy = t[0], t[1], t[2], t[3]
    d1 = _cross(cx, cy, dx, dy, ax, ay)
    d2 = _cross(cx, cy, dx, dy, bx, by)
    d3 = _cross(ax, ay, bx, by, cx, cy)
    d4 = _cross(ax, ay, bx, by, dx, dy)
    ps = []
    pt = []
    if d1 == 0 and d2 == 0:
        # collinear: exchange interior endpoints
        if _strictly_between(ax, ay, cx, cy, dx, dy):
            pt.append((ax, ay))
        if _strictly_between(bx, by, cx, cy, dx, dy):
            pt.append((bx, by))
        if _strictly_between(cx, cy, ax, ay, bx, by):
            ps.append((cx, cy))
        if _strictly_between(dx, dy, ax, ay, bx, by):
            ps.append((dx, dy))
        return ps, pt, False
    if d1 == 0 and _strictly_between(ax, ay, cx, cy, dx, dy):
        pt.append((ax, ay))
    if d2 == 0 and _strictly_between(bx, by, cx, cy, dx, dy):
        pt.append((bx, by))
    if d3 == 0 and _strictly_between(cx, cy, ax, ay, bx, by):
        ps.append((cx, cy))
    if d4 == 0 and _strictly_between(dx, dy, ax, ay, bx, by):
        ps.append((dx, dy))
    if ps or pt:
        return ps, pt, False
    if d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0 and (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
        den = d1 - d2
        numx = d1 * bx - d2 * ax
        numy = d1 * by - d2 * ay
        if den < 0:
            den = -den
            numx = -numx
            numy = -numy
        px = _rdiv(numx, den)
        py = _rdiv(numy, den)
        added = False
        if (px, py) != (ax, ay) and (px, py) != (bx, by):
            ps.append((px, py))
            added = True
        if (px, py) != (cx, cy) and (px, py) != (dx, dy):
            pt.append((px, py))
            added = True
        return ps, pt, not added
    return ps, pt, False


def arrange(segments):
    """Subdivide labelled segments until they meet only at shared endpoints.

    segments: list of (ax, ay, bx, by, group_id).
    Returns list of (ax, ay, bx, by, parity_tuple) with duplicates merged and
    zero-parity segments dropped; ngroups inferred from the labels.
    """
    work = [s for s in segments if (s[0], s[1]) != (s[2], s[3])]
    for _ in range(_MAX_ARRANGE_ITER):
        n = len(work)
        splits = [[] for _ in range(n)]
        stuck = False
        changed = False
        for i in range(n):
            si = work[i]
            for j in range(i + 1, n):
                ps, pt, cross_stuck = _pair_splits(si, work[j])
                if cross_stuck:
                    stuck = True
                if ps:
                    splits[i].extend(ps)
                    changed = True
                if pt:
                    splits[j].extend(pt)
                    changed = True
        if not changed:
            if stuck:
                raise ArrangementError("snap rounding did not converge")
            break
        nxt = []
        for i in range(n):
            ax, ay, bx, by, gid = work[i]
            if not splits[i]:
                nxt.append(work[i])
                continue
            pts = set(splits[i])
            pts.add((ax, ay))
            pts.add((bx, by))
            dx = bx - ax
            dy = by - ay
            ordered = sorted(pts, key=lambda p: (p[0] - ax) * dx + (p[1] - ay) * dy)
            for k in range(len(ordered) - 1):
                p, q = ordered[k], ordered[k + 1]
                if p != q:
                    nxt.append((p[0], p[1], q[0], q[1], gid))
        work = nxt
    else:
        raise ArrangementError("snap rounding exceeded iteration cap")

    ngroups = 0
    for s in work:
        if s[4] + 1 > ngroups:
            ngroups = s[4] + 1
    merged = {}
    for ax, ay, bx, by, gid in work:
        if (ax, ay) <= (bx, by):
            key = (ax, ay, bx, by)
        else:
            key = (bx, by, ax, ay)
        par = merged.get(key)
        if par is None:
            par = [0] * ngroups
            merged[key] = par
        par[gid] ^= 1
    out = []
    for key in sorted(merged):
        par = merged[key]
        keep = False
        for g in range(ngroups):
            if par[g]:
                keep = True
                break
        if keep:
            out.append((key[0], key[1], key[2], key[3], tuple(par)))
    return out, ngroups


def _left_parities(seg, segs, ngroups, flip):
    """Per-group even-odd parity of the face adjacent to one side of seg.

    flip=False probes the left of the directed segment, flip=True the right.
    Works in doubled coordinates so the midpoint stays integral.
    """
    ax, ay, bx, by = seg[0], seg[1], seg[2], seg[3]
    mx = ax + bx
    my = ay + by
    rx = -(by - ay)
    ry = bx - ax
    if flip:
        rx = -rx
        ry = -ry
    left = [0] * ngroups
    for other in segs:
        px = 2 * other[0] - mx
        py = 2 * other[1] - my
        qx = 2 * other[2] - mx
        qy = 2 * other[3] - my
        a_p = rx * py - ry * px
        a_q = rx * qy - ry * qx
        if (a_p > 0) == (a_q > 0):
            continue
        b_p = rx * px + ry * py
        b_q = rx * qx + ry * qy
        num = a_p * b_q - a_q * b_p
        if a_p - a_q < 0:
            num = -num
        if num > 0:
            par = other[4]
            for g in range(ngroups):
                if par[g]:
                    left[g] ^= 1
    return left


def _selected(op, inside):
    if op == OP_UNION:
        for v in inside:
            if v:
                return True
        return False
    if op == OP_INTERSECTION:
        for v in inside:
            if not v:
                return False
        return True
    # difference: first group minus the rest
    if not inside[0]:
        return False
    for g in range(1, len(inside)):
        if inside[g]:
            return False
    return True


def _angle_class(rx, ry, wx, wy):
    c = rx * wy - ry * wx
    d = rx * wx + ry * wy
    if c == 0:
        return 0 if d > 0 else 2
    return 1 if c > 0 else 3


def _ccw_before(rx, ry, ux, uy, vx, vy):
    """True when direction u comes before v in CCW order measured from r."""
    hu = _angle_class(rx, ry, ux, uy)
    hv = _angle_class(rx, ry, vx, vy)
    if hu != hv:
        return hu < hv
    return ux * vy - uy * vx > 0


def _simplify_ring(ring):
    out = list(ring)
    changed = True
    while changed and len(out) > 3:
        changed = False
        n = len(out)
        for i in range(n):
            ax, ay = out[i - 1]
            bx, by = out[i]
            cx, cy = out[(i + 1) % n]
            if _cross(ax, ay, bx, by, cx, cy) == 0:
                out.pop(i)
                changed = True
                break
    return out


def link_rings(directed):
    """Stitch directed boundary edges (region on the left) into closed rings."""
    outgoing = {}
    for p, q in directed:
        outgoing.setdefault(p, []).append(q)
    for p in outgoing:
        outgoing[p].sort()
    unused = set(directed)
    rings = []
    for start in sorted(unused):
        if start not in unused:
            continue
        ring = []
        edge = start
        while True:
            unused.discard(edge)
            p, q = edge
            ring.append(p)
            # reversed incoming direction
            rx = p[0] - q[0]
            ry = p[1] - q[1]
            best = None
            for cand in outgoing[q]:
                if (q, cand) not in unused and (q, cand) != start:
                    continue
                wx = cand[0] - q[0]
                wy = cand[1] - q[1]
                # keep the candidate with the largest CCW angle from the
                # reversed incoming direction, i.e. the clockwise-most turn
                if best is None or _ccw_before(rx, ry, best[1], best[2], wx, wy):
                    best = (cand, wx, wy)
            if best is None:
                raise ArrangementError("open boundary while linking rings")
            edge = (q, best[0])
            if edge == start:
                break
        ring = _simplify_ring(ring)
        if len(ring) >= 3:
            rings.append(ring)
    return rings


def overlay(groups, op):
    """Boolean overlay of ring groups; returns rings as vertex lists.

    groups: list of groups, each a list of rings ([(x, y), ...]); a group's
    interior follows the even-odd rule over all of its rings.
    Outer rings of the result come out CCW, holes CW.
    """
    segments = []
    for gid, rings in enumerate(groups):
        for ring in rings:
            n = len(ring)
            for i in range(n):
                ax, ay = ring[i]
                bx, by = ring[(i + 1) % n]
                segments.append((ax, ay, bx, by, gid))
    segs, ngroups = arrange(segments)
    if ngroups < len(groups):
        ngroups = len(groups)
        segs = [(s[0], s[1], s[2], s[3], s[4] + (0,) * (ngroups - len(s[4]))) for s in segs]
    directed = []
    for seg in segs:
        left = _left_parities(seg, segs, ngroups, False)
        right = list(left)
        par = seg[4]
        for g in range(ngroups):
            if par[g]:
                right[g] ^= 1
        sel_l = _selected(op, left)
        sel_r = _selected(op, right)
        if sel_l == sel_r:
            continue
        if sel_l:
            directed.append(((seg[0], seg[1]), (seg[2], seg[3])))
        else:
            directed.append(((seg[2], seg[3]), (seg[0], seg[1])))
    return link_rings(directed)


def point_in_rings(x, y, rings):
    """Even-odd containment of a grid point against a set of rings.

    Points exactly on an edge are classified by the half-open ray rule.
    """
    parity = 0
    for ring in rings:
        n = len(ring)
        for i in range(n):
            px, py = ring[i]
            qx, qy = ring[(i + 1) % n]
            if (py > y) != (qy > y):
                # x coordinate of the crossing with the horizontal ray
                num = px * (qy - y) - qx * (py - y)
                den = qy - py
                if den < 0:
                    num = -num
                    den = -den
                if num > x * den:
                    parity ^= 1
    return parity == 1
