"""Load obstacle footprints from a minimal Wavefront OBJ subset.

Honors ``v``, ``o``, ``g`` and ``f`` directives; everything else is ignored.
Each object/group with at least one vertex becomes one locked axis-aligned
obstacle covering the bounding box of the group's vertices projected onto
the ground plane: X-Z for Y-up models, X-Y when all Z coordinates are equal
(flat exports).
"""

from __future__ import annotations

import re

from .geometry import Vec2
from .scene import ObstacleRect
from .scene_io import ParseError


class EmptyModelError(ValueError):
    """The OBJ document declares no vertices at all."""


# Degenerate groups (single vertex / collinear points) still map to one
# obstacle; extents are floored so the rectangle stays constructible.
MIN_EXTENT = 0.001

_ID_SANITIZE = re.compile(r"[^A-Za-z0-9_.-]+")


def _group_slug(name: str) -> str:
    slug = _ID_SANITIZE.sub("_", name.strip())
    return slug or "group"


def obj_to_obstacles(text: str) -> list[ObstacleRect]:
    """Parse OBJ text into locked obstacles, one per non-empty object/group."""
    vertices: list[tuple[float, float, float]] = []
    group_order: list[str] = []
    group_members: dict[str, set[int]] = {}
    current = "default"

    def ensure_group(name: str) -> None:
        nonlocal current
        current = name
        if name not in group_members:
            group_order.append(name)
            group_members[name] = set()

    ensure_group("default")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        directive = tokens[0]
        if directive in ("o", "g"):
            name = " ".join(tokens[1:]) if len(tokens) > 1 else "default"
            ensure_group(name)
        elif directive == "v":
            if len(tokens) < 3:
                raise ParseError(f"line {lineno}: vertex needs at least 2 coordinates")
            try:
                coords = [float(t) for t in tokens[1:4]]
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad vertex coordinate: {exc}") from exc
            while len(coords) < 3:
                coords.append(0.0)
            vertices.append((coords[0], coords[1], coords[2]))
            group_members[current].add(len(vertices) - 1)
        elif directive == "f":
            if len(tokens) < 2:
                raise ParseError(f"line {lineno}: face needs at least one vertex index")
            for token in tokens[1:]:
                head = token.split("/")[0]
                try:
                    idx = int(head)
                except ValueError as exc:
                    raise ParseError(f"line {lineno}: bad face index {token!r}") from exc
                if idx > 0:
                    vi = idx - 1
                elif idx < 0:
                    vi = len(vertices) + idx
                else:
                    raise ParseError(f"line {lineno}: face index 0 is not valid")
                if not (0 <= vi < len(vertices)):
                    raise ParseError(f"line {lineno}: face references undefined vertex {idx}")
                group_members[current].add(vi)
        # every other directive (vn, vt, mtllib, usemtl, s, ...) is ignored

    if not vertices:
        raise EmptyModelError("OBJ document contains no vertices")

    flat_z = all(v[2] == vertices[0][2] for v in vertices)

    obstacles: list[ObstacleRect] = []
    used_ids: set[str] = set()
    for order, name in enumerate(group_order):
        members = group_members[name]
        if not members:
            continue
        points = [
            (vertices[i][0], vertices[i][1]) if flat_z else (vertices[i][0], vertices[i][2])
            for i in sorted(members)
        ]
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        width = max(max(xs) - min(xs), MIN_EXTENT)
        height = max(max(ys) - min(ys), MIN_EXTENT)
        center = Vec2((max(xs) + min(xs)) / 2.0, (max(ys) + min(ys)) / 2.0)
        base = f"obj_{order}_{_group_slug(name)}"
        oid = base
        suffix = 1
        while oid in used_ids:
            oid = f"{base}_{suffix}"
            suffix += 1
        used_ids.add(oid)
        obstacles.append(
            ObstacleRect(id=oid, center=center, width=width, height=height, rotation=0.0, locked=True)
        )

    return obstacles
