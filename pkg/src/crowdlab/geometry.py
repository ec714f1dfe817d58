"""2D primitives shared by the scene model, the planner and the engine."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, slots=True)
class Vec2:
    """A point or offset in world meters. Coordinates must be finite."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 coordinates must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


def rect_local_coords(px: float, py: float, cx: float, cy: float, rotation_deg: float) -> tuple[float, float]:
    """Map a world point into a rectangle's axis frame (inverse rotation about its center)."""
    theta = math.radians(rotation_deg)
    c, s = math.cos(theta), math.sin(theta)
    dx, dy = px - cx, py - cy
    # R(-theta) @ (dx, dy)
    return (c * dx + s * dy, -s * dx + c * dy)


def point_in_rect(
    px: float,
    py: float,
    cx: float,
    cy: float,
    width: float,
    height: float,
    rotation_deg: float,
    pad: float = 0.0,
    strict: bool = False,
) -> bool:
    """Containment test for a rectangle rotated counterclockwise about its center.

    ``pad`` extends the half-extents (used for clearance inflation); ``strict``
    excludes the boundary.
    """
    lx, ly = rect_local_coords(px, py, cx, cy, rotation_deg)
    hx = width / 2.0 + pad
    hy = height / 2.0 + pad
    if strict:
        return abs(lx) < hx and abs(ly) < hy
    return abs(lx) <= hx and abs(ly) <= hy


def rect_corners(cx: float, cy: float, width: float, height: float, rotation_deg: float) -> list[tuple[float, float]]:
    theta = math.radians(rotation_deg)
    c, s = math.cos(theta), math.sin(theta)
    hx, hy = width / 2.0, height / 2.0
    corners = []
    for lx, ly in ((-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)):
        corners.append((cx + c * lx - s * ly, cy + s * lx + c * ly))
    return corners


def points_in_rect_mask(
    xs: np.ndarray,
    ys: np.ndarray,
    cx: float,
    cy: float,
    width: float,
    height: float,
    rotation_deg: float,
    pad: float = 0.0,
    strict: bool = False,
) -> np.ndarray:
    """Vectorized form of :func:`point_in_rect` over coordinate arrays."""
    theta = math.radians(rotation_deg)
    c, s = math.cos(theta), math.sin(theta)
    dx = xs - cx
    dy = ys - cy
    lx = c * dx + s * dy
    ly = -s * dx + c * dy
    hx = width / 2.0 + pad
    hy = height / 2.0 + pad
    if strict:
        return (np.abs(lx) < hx) & (np.abs(ly) < hy)
    return (np.abs(lx) <= hx) & (np.abs(ly) <= hy)
