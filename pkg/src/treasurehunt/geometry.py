"""2D workspace geometry: polygonal obstacles, sector fields of view,
line-of-sight tests, visibility regions, and free-space checks.

All queries are pure functions over an immutable workspace; boundary
conventions are conservative: FOV membership is boundary-inclusive and
line of sight is blocked by obstacle boundaries as well as interiors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

_EPS = 1e-12


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)
                and math.isfinite(self.theta)):
            raise ValueError("pose components must be finite")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class SectorFov:
    """Circular sector attached to the agent apex."""

    angle_of_view: float
    radius: float
    bisector_offset: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.angle_of_view <= 2.0 * math.pi:
            raise ValueError("angle of view must be in (0, 2*pi]")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def with_radius(self, radius: float) -> "SectorFov":
        return replace(self, radius=radius)


@dataclass
class Target:
    """A classifiable object; feature values index into the net's ranges."""

    id: int
    position: tuple[float, float]
    true_class: int
    features: tuple[int, ...]
    revealed: int = 0
    classified_as: int | None = None


Point = tuple[float, float]
Polygon = tuple[tuple[float, float], ...]


def _polygon_area(poly: Polygon) -> float:
    area = 0.0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        area += x1 * y2 - x2 * y1
    return 0.5 * area


def _segments_cross(p1, p2, q1, q2) -> bool:
    """True if the open segment p1-p2 meets segment q1-q2 anywhere other
    than at p1/p2 themselves (grazing an endpoint of the sight line does
    not block)."""
    d1x, d1y = p2[0] - p1[0], p2[1] - p1[1]
    d2x, d2y = q2[0] - q1[0], q2[1] - q1[1]
    denom = d1x * d2y - d1y * d2x
    rx, ry = q1[0] - p1[0], q1[1] - p1[1]
    if abs(denom) < _EPS:
        # Parallel: blocked only when collinear and overlapping beyond a point.
        if abs(rx * d1y - ry * d1x) > 1e-9:
            return False
        d1sq = d1x * d1x + d1y * d1y
        if d1sq < _EPS:
            return False
        t0 = (rx * d1x + ry * d1y) / d1sq
        t1 = t0 + (d2x * d1x + d2y * d1y) / d1sq
        lo, hi = min(t0, t1), max(t0, t1)
        return min(hi, 1.0) - max(lo, 0.0) > 1e-9
    t = (rx * d2y - ry * d2x) / denom
    u = (rx * d1y - ry * d1x) / denom
    return 1e-9 < t < 1.0 - 1e-9 and -1e-9 <= u <= 1.0 + 1e-9


def point_in_polygon(point: tuple[float, float], poly: Polygon) -> bool:
    """Even-odd rule; boundary points count as inside."""
    x, y = point
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if _point_segment_distance(point, (x1, y1), (x2, y2)) < 1e-12:
            return True
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside


def _point_segment_distance(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    seg_sq = dx * dx + dy * dy
    if seg_sq < _EPS:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / seg_sq))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def distance_to_polygon(point: tuple[float, float], poly: Polygon) -> float:
    """Distance to the polygon boundary; 0 if the point is inside."""
    if point_in_polygon(point, poly):
        return 0.0
    n = len(poly)
    return min(_point_segment_distance(point, poly[i], poly[(i + 1) % n])
               for i in range(n))


@dataclass(frozen=True)
class WorkspaceSpec:
    """Axis-aligned bounded workspace with polygonal obstacles and targets."""

    name: str
    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax
    obstacles: tuple[Polygon, ...]
    start: Pose
    targets: tuple[Target, ...] = ()

    def __post_init__(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        if xmax <= xmin or ymax <= ymin:
            raise ValueError("degenerate bounds")
        obstacles = tuple(tuple(tuple(map(float, v)) for v in poly)
                          for poly in self.obstacles)
        object.__setattr__(self, "obstacles", obstacles)
        for poly in obstacles:
            if len(poly) < 3:
                raise ValueError("obstacle polygons need >= 3 vertices")
            if _polygon_area(poly) <= 0:
                raise ValueError("obstacle polygons must be CCW and non-degenerate")
            if _polygon_self_intersects(poly):
                raise ValueError("obstacle polygon self-intersects")
            for x, y in poly:
                if not (xmin <= x <= xmax and ymin <= y <= ymax):
                    raise ValueError("obstacle vertex outside bounds")

    def in_bounds(self, point: tuple[float, float], margin: float = 0.0) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return (xmin + margin <= point[0] <= xmax - margin
                and ymin + margin <= point[1] <= ymax - margin)

    def with_targets(self, targets: tuple[Target, ...]) -> "WorkspaceSpec":
        return replace(self, targets=targets)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "bounds": list(self.bounds),
            "obstacles": [[list(v) for v in poly] for poly in self.obstacles],
            "start": {"x": self.start.x, "y": self.start.y,
                      "theta": self.start.theta},
            "targets": [
                {"id": t.id, "position": list(t.position),
                 "true_class": t.true_class, "features": list(t.features)}
                for t in self.targets
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @staticmethod
    def from_json_obj(doc: dict) -> "WorkspaceSpec":
        return WorkspaceSpec(
            name=doc["name"],
            bounds=tuple(doc["bounds"]),
            obstacles=tuple(tuple(tuple(v) for v in poly)
                            for poly in doc["obstacles"]),
            start=Pose(doc["start"]["x"], doc["start"]["y"],
                       doc["start"]["theta"]),
            targets=tuple(Target(t["id"], tuple(t["position"]),
                                 t["true_class"], tuple(t["features"]))
                          for t in doc.get("targets", ())),
        )

    @staticmethod
    def from_json(text: str) -> "WorkspaceSpec":
        return WorkspaceSpec.from_json_obj(json.loads(text))


def _polygon_self_intersects(poly: Polygon) -> bool:
    n = len(poly)
    edges = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return True
    return False


def line_of_sight(s: tuple[float, float], x: tuple[float, float],
                  obstacles: tuple[Polygon, ...]) -> bool:
    """True iff the open segment from s to x meets no obstacle boundary or
    interior."""
    for poly in obstacles:
        n = len(poly)
        for i in range(n):
            if _segments_cross(s, x, poly[i], poly[(i + 1) % n]):
                return False
        mid = ((s[0] + x[0]) / 2.0, (s[1] + x[1]) / 2.0)
        if point_in_polygon(mid, poly):
            return False
    return True


def in_fov(pose: Pose, fov: SectorFov, x: tuple[float, float]) -> bool:
    """Boundary-inclusive sector membership around the pose apex."""
    dx, dy = x[0] - pose.x, x[1] - pose.y
    dist = math.hypot(dx, dy)
    if dist > fov.radius + _EPS:
        return False
    if dist < _EPS:
        return True  # at the apex
    if fov.angle_of_view >= 2.0 * math.pi - _EPS:
        return True
    bearing = math.atan2(dy, dx)
    off = abs(wrap_angle(bearing - pose.theta - fov.bisector_offset))
    return off <= fov.angle_of_view / 2.0 + 1e-12


def visible_targets(pose: Pose, fov: SectorFov,
                    workspace: WorkspaceSpec) -> list[int]:
    """Ids (ascending) of targets inside the FOV with line of sight."""
    out = []
    for t in workspace.targets:
        if in_fov(pose, fov, t.position) and line_of_sight(
                pose.position, t.position, workspace.obstacles):
            out.append(t.id)
    return sorted(out)


def in_free_space(pose: Pose, footprint: float,
                  workspace: WorkspaceSpec) -> bool:
    """Disc of the given radius fits inside the bounds and off all obstacles."""
    point = pose.position if isinstance(pose, Pose) else tuple(pose)
    if not workspace.in_bounds(point, margin=footprint):
        return False
    for poly in workspace.obstacles:
        if distance_to_polygon(point, poly) < footprint:
            return False
    return True


def ray_cast(origin: tuple[float, float], heading: float, max_range: float,
             workspace: WorkspaceSpec) -> float:
    """Distance to the first obstacle or bounds hit, capped at max_range."""
    ox, oy = origin
    dx, dy = math.cos(heading), math.sin(heading)
    best = max_range
    xmin, ymin, xmax, ymax = workspace.bounds
    walls = [((xmin, ymin), (xmax, ymin)), ((xmax, ymin), (xmax, ymax)),
             ((xmax, ymax), (xmin, ymax)), ((xmin, ymax), (xmin, ymin))]
    edges = list(walls)
    for poly in workspace.obstacles:
        n = len(poly)
        edges.extend((poly[i], poly[(i + 1) % n]) for i in range(n))
    for a, b in edges:
        ex, ey = b[0] - a[0], b[1] - a[1]
        denom = dx * ey - dy * ex
        if abs(denom) < _EPS:
            continue
        rx, ry = a[0] - ox, a[1] - oy
        t = (rx * ey - ry * ex) / denom
        u = (rx * dy - ry * dx) / denom
        if t > 1e-9 and -1e-9 <= u <= 1.0 + 1e-9:
            best = min(best, t)
    return best


def _heading_interval_contains(h: float, center: float, half_width: float) -> bool:
    return abs(wrap_angle(h - center)) <= half_width + 1e-12


def set_visibility_nonempty(
    target_ids: set[int],
    fov: SectorFov,
    workspace: WorkspaceSpec,
    grid_resolution: float,
    footprint: float = 0.2,
) -> tuple[bool, Pose | None]:
    """Grid-sampled emptiness test of the joint visibility region.

    Positions are sampled on a regular grid; headings are resolved exactly by
    intersecting the per-target bearing intervals.  A True result carries a
    witness pose and is sound; False is resolution-limited (a finer grid may
    still find a witness).
    """
    if grid_resolution <= 0:
        raise ValueError("grid resolution must be positive")
    targets = {t.id: t for t in workspace.targets}
    pts = [targets[i].position for i in target_ids]
    if not pts:
        return True, workspace.start
    xmin, ymin, xmax, ymax = workspace.bounds
    half = fov.angle_of_view / 2.0
    full_circle = fov.angle_of_view >= 2.0 * math.pi - _EPS
    nx = int((xmax - xmin) / grid_resolution) + 1
    ny = int((ymax - ymin) / grid_resolution) + 1
    for ix in range(nx):
        x = min(xmin + ix * grid_resolution, xmax)
        for iy in range(ny):
            y = min(ymin + iy * grid_resolution, ymax)
            pose_pt = (x, y)
            if not in_free_space(Pose(x, y), footprint, workspace):
                continue
            bearings = []
            visible_here = True
            for p in pts:
                if math.hypot(p[0] - x, p[1] - y) > fov.radius + _EPS:
                    visible_here = False
                    break
                if not line_of_sight(pose_pt, p, workspace.obstacles):
                    visible_here = False
                    break
                bearings.append(math.atan2(p[1] - y, p[0] - x))
            if not visible_here:
                continue
            if full_circle:
                return True, Pose(x, y, 0.0)
            # A nonempty intersection of arcs contains some arc's left edge.
            for b in bearings:
                for h in (b - fov.bisector_offset,
                          b - fov.bisector_offset - half + 1e-9):
                    if all(_heading_interval_contains(
                            h + fov.bisector_offset, bb, half)
                           for bb in bearings):
                        return True, Pose(x, y, h)
    return False, None
