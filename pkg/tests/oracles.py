"""Independent oracles used by the test suite.

Everything here is written from the contracts alone (brute force, no shared
helpers with the package) so implementation and check stay on separate paths.
"""

from __future__ import annotations

import heapq
import math

SQRT2 = math.sqrt(2.0)


# -- rotated rectangle containment (scalar re-derivation) --------------------

def rect_contains(px, py, cx, cy, width, height, rotation_deg, pad=0.0, strict=False):
    theta = math.radians(rotation_deg)
    dx, dy = px - cx, py - cy
    lx = math.cos(theta) * dx + math.sin(theta) * dy
    ly = -math.sin(theta) * dx + math.cos(theta) * dy
    hx, hy = width / 2.0 + pad, height / 2.0 + pad
    if strict:
        return abs(lx) < hx and abs(ly) < hy
    return abs(lx) <= hx and abs(ly) <= hy


def rect_penetration(px, py, cx, cy, width, height, rotation_deg):
    """Depth of a point inside a rectangle; <= 0 means on or outside."""
    theta = math.radians(rotation_deg)
    dx, dy = px - cx, py - cy
    lx = math.cos(theta) * dx + math.sin(theta) * dy
    ly = -math.sin(theta) * dx + math.cos(theta) * dy
    return min(width / 2.0 - abs(lx), height / 2.0 - abs(ly))


def blocked_cells_brute_force(obstacles, cols, rows, cell_size, clearance):
    """Per-cell center containment scan over every obstacle."""
    blocked = set()
    for r in range(rows):
        for c in range(cols):
            x = (c + 0.5) * cell_size
            y = (r + 0.5) * cell_size
            for ob in obstacles:
                if rect_contains(x, y, ob.center.x, ob.center.y, ob.width, ob.height, ob.rotation, pad=clearance):
                    blocked.add((r, c))
                    break
    return blocked


# -- shortest grid paths ------------------------------------------------------

def dijkstra_cost(blocked, start, goal, cell_size=1.0):
    """Exact shortest 8-connected grid cost (no corner cutting), or None.

    Distances are tracked as (straight, diagonal) step counts and compared
    through the canonical float straight + diagonal*sqrt(2).
    """
    rows = len(blocked)
    cols = len(blocked[0])
    if blocked[start[0]][start[1]] or blocked[goal[0]][goal[1]]:
        return None
    counts = {start: (0, 0)}
    pq = [(0.0, start)]
    settled = set()
    while pq:
        d, cell = heapq.heappop(pq)
        if cell in settled:
            continue
        settled.add(cell)
        if cell == goal:
            return d * cell_size
        r, c = cell
        ns, nd = counts[cell]
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr == 0 and dc == 0:
                    continue
                nr, nc = r + dr, c + dc
                if not (0 <= nr < rows and 0 <= nc < cols):
                    continue
                if blocked[nr][nc]:
                    continue
                if dr != 0 and dc != 0 and (blocked[r][nc] or blocked[nr][c]):
                    continue
                cand = (ns, nd + 1) if (dr != 0 and dc != 0) else (ns + 1, nd)
                g = float(cand[0]) + float(cand[1]) * SQRT2
                key = (nr, nc)
                prev = counts.get(key)
                if prev is None or g < float(prev[0]) + float(prev[1]) * SQRT2:
                    counts[key] = cand
                    heapq.heappush(pq, (g, key))
    return None


# -- supercover by closed segment/closed square intersection ------------------

def _on_segment(px, py, qx, qy, rx, ry):
    # r known collinear with pq; is it within the bounding box?
    return min(px, qx) <= rx <= max(px, qx) and min(py, qy) <= ry <= max(py, qy)


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _segments_touch(p, q, a, b):
    o1 = _orient(*p, *q, *a)
    o2 = _orient(*p, *q, *b)
    o3 = _orient(*a, *b, *p)
    o4 = _orient(*a, *b, *q)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)) and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return True
    if o1 == 0 and _on_segment(*p, *q, *a):
        return True
    if o2 == 0 and _on_segment(*p, *q, *b):
        return True
    if o3 == 0 and _on_segment(*a, *b, *p):
        return True
    if o4 == 0 and _on_segment(*a, *b, *q):
        return True
    return False


def _segment_touches_box(x0, y0, x1, y1, bx0, by0, bx1, by1):
    if max(x0, x1) < bx0 or min(x0, x1) > bx1 or max(y0, y1) < by0 or min(y0, y1) > by1:
        return False
    for (px, py) in ((x0, y0), (x1, y1)):
        if bx0 <= px <= bx1 and by0 <= py <= by1:
            return True
    corners = ((bx0, by0), (bx1, by0), (bx1, by1), (bx0, by1))
    for i in range(4):
        if _segments_touch((x0, y0), (x1, y1), corners[i], corners[(i + 1) % 4]):
            return True
    return False


def supercover_oracle(c0, r0, c1, r1):
    """All cells whose closed unit square touches the closed center-to-center
    segment, found by scanning the bounding box with exact integer tests."""
    x0, y0 = 2 * c0 + 1, 2 * r0 + 1
    x1, y1 = 2 * c1 + 1, 2 * r1 + 1
    cells = set()
    for c in range(min(c0, c1), max(c0, c1) + 1):
        for r in range(min(r0, r1), max(r0, r1) + 1):
            if _segment_touches_box(x0, y0, x1, y1, 2 * c, 2 * r, 2 * c + 2, 2 * r + 2):
                cells.add((r, c))
    return cells


# -- convex hull membership ----------------------------------------------------

def _convex_hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orient(*out[-2], *out[-1], *p) <= 0:
                out.pop()
            out.append(p)
        return out
    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def _point_segment_distance(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def point_in_hull(point, points, tol=1e-9):
    """Is ``point`` inside (or within tol of) the convex hull of ``points``?"""
    if not points:
        return False
    hull = _convex_hull([tuple(p) for p in points])
    if len(hull) == 1:
        return math.hypot(point[0] - hull[0][0], point[1] - hull[0][1]) <= tol
    if len(hull) == 2:
        return _point_segment_distance(tuple(point), hull[0], hull[1]) <= tol
    for i in range(len(hull)):
        a = hull[i]
        b = hull[(i + 1) % len(hull)]
        cross = _orient(*a, *b, point[0], point[1])
        length = math.hypot(b[0] - a[0], b[1] - a[1])
        if cross < -tol * length:
            return False
    return True


# -- marker assignment ---------------------------------------------------------

def assign_markers_brute_force(agents, markers, radius):
    """Per-marker scan: nearest non-arrived agent wins, distance ties within
    1e-9 go to the lower id, markers farther than radius stay unassigned.

    ``agents`` is a sequence of (agent_id, (x, y), arrived). Returns a dict
    agent_id -> set of marker indices.
    """
    claimants = sorted((a for a in agents if not a[2]), key=lambda a: a[0])
    result = {a[0]: set() for a in agents}
    for mi, (mx, my) in enumerate(markers):
        dmin = None
        for aid, (ax, ay), _ in claimants:
            d = math.sqrt((mx - ax) ** 2 + (my - ay) ** 2)
            if dmin is None or d < dmin:
                dmin = d
        if dmin is None or dmin > radius:
            continue
        for aid, (ax, ay), _ in claimants:
            d = math.sqrt((mx - ax) ** 2 + (my - ay) ** 2)
            if d <= dmin + 1e-9:
                result[aid].add(mi)
                break
    return result


# -- motion formula -------------------------------------------------------------

def motion_oracle(position, goal_dir, markers, max_speed, dt):
    """Recompute one agent's displacement from the weighting formula alone.

    Returns (weights, movement, displacement) using plain Python arithmetic.
    """
    px, py = position
    gx, gy = goal_dir
    offsets = []
    for mx, my in markers:
        vx, vy = mx - px, my - py
        d = math.sqrt(vx * vx + vy * vy)
        if d >= 1e-9:
            offsets.append((vx, vy, d))
    if not offsets:
        return [], (0.0, 0.0), (0.0, 0.0)
    if gx == 0.0 and gy == 0.0:
        favors = [1.0 / (1.0 + d) for _, _, d in offsets]
    else:
        favors = [(1.0 + (vx * gx + vy * gy) / d) / (1.0 + d) for vx, vy, d in offsets]
    total = sum(favors)
    if total <= 0.0:
        favors = [1.0 / (1.0 + d) for _, _, d in offsets]
        total = sum(favors)
    weights = [f / total for f in favors]
    mx = sum(w * vx for w, (vx, _, _) in zip(weights, offsets))
    my = sum(w * vy for w, (_, vy, _) in zip(weights, offsets))
    norm = math.sqrt(mx * mx + my * my)
    if norm < 1e-12:
        return weights, (mx, my), (0.0, 0.0)
    scale = min(norm, max_speed * dt) / norm
    return weights, (mx, my), (mx * scale, my * scale)
