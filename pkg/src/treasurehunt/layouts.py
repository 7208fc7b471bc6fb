"""Named workspace layouts used by the benchmarks and demos.

Obstacle shapes are original designs; targets are added per scenario by the
benchmark sampler unless a layout ships fixed positions.
"""

from __future__ import annotations

from .geometry import Polygon, Pose, WorkspaceSpec


def rect(x0: float, y0: float, x1: float, y1: float) -> Polygon:
    """Axis-aligned rectangle as a CCW polygon."""
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def _human10x10() -> WorkspaceSpec:
    return WorkspaceSpec(
        name="human10x10",
        bounds=(0.0, 0.0, 10.0, 10.0),
        obstacles=(
            rect(2.0, 2.0, 2.4, 6.0),
            rect(5.0, 4.0, 8.0, 4.4),
            rect(6.5, 6.5, 7.5, 7.5),
            rect(4.0, 8.0, 4.4, 10.0),
        ),
        start=Pose(0.8, 0.8, 0.0),
    )


def _fog20x20() -> WorkspaceSpec:
    return WorkspaceSpec(
        name="fog20x20",
        bounds=(0.0, 0.0, 20.0, 20.0),
        obstacles=(
            rect(4.0, 4.0, 4.5, 12.0),
            rect(4.0, 15.0, 12.0, 15.5),
            rect(10.0, 4.0, 16.0, 4.5),
            rect(15.5, 8.0, 16.0, 16.0),
            rect(8.0, 8.0, 9.0, 9.0),
        ),
        start=Pose(1.0, 1.0, 0.0),
    )


def _maze(name: str, walls: tuple[Polygon, ...]) -> WorkspaceSpec:
    return WorkspaceSpec(name=name, bounds=(0.0, 0.0, 12.0, 12.0),
                         obstacles=walls, start=Pose(0.8, 0.8, 0.0))


def _maze1() -> WorkspaceSpec:
    return _maze("maze1", (
        rect(3.0, 0.0, 3.4, 8.0),
        rect(6.5, 4.0, 6.9, 12.0),
        rect(9.5, 0.0, 9.9, 7.0),
    ))


def _maze2() -> WorkspaceSpec:
    return _maze("maze2", (
        rect(0.0, 4.0, 8.0, 4.4),
        rect(4.0, 7.5, 12.0, 7.9),
        rect(8.0, 0.0, 8.4, 2.5),
    ))


def _maze3() -> WorkspaceSpec:
    return _maze("maze3", (
        rect(2.5, 2.5, 5.5, 2.9),
        rect(2.5, 2.5, 2.9, 9.5),
        rect(2.5, 9.1, 9.5, 9.5),
        rect(9.1, 5.0, 9.5, 9.5),
        rect(6.0, 5.5, 7.0, 6.5),
    ))


def _maze4() -> WorkspaceSpec:
    return _maze("maze4", (
        rect(0.0, 3.0, 2.5, 3.4),
        rect(4.5, 3.0, 12.0, 3.4),
        rect(5.8, 6.0, 6.2, 12.0),
        rect(0.0, 8.6, 3.5, 9.0),
    ))


def _workspace_a() -> WorkspaceSpec:
    # Room style: two interior walls with door gaps.
    return WorkspaceSpec(
        name="workspaceA",
        bounds=(0.0, 0.0, 12.0, 12.0),
        obstacles=(
            rect(0.0, 5.8, 4.5, 6.2),   # west wall, gap 4.5..7.0
            rect(7.0, 5.8, 12.0, 6.2),  # east wall
            rect(5.8, 0.0, 6.2, 3.0),   # south divider, gap above
            rect(5.8, 8.5, 6.2, 12.0),  # north divider
        ),
        start=Pose(1.0, 1.0, 0.0),
    )


def _workspace_b() -> WorkspaceSpec:
    return WorkspaceSpec(
        name="workspaceB",
        bounds=(0.0, 0.0, 12.0, 12.0),
        obstacles=(
            rect(3.0, 3.0, 9.0, 3.4),   # central bar
            rect(3.0, 3.0, 3.4, 7.5),
            rect(8.6, 5.0, 9.0, 9.0),
            rect(0.0, 9.0, 6.0, 9.4),
        ),
        start=Pose(1.0, 1.0, 0.0),
    )


_LAYOUTS = {
    "human10x10": _human10x10,
    "fog20x20": _fog20x20,
    "maze1": _maze1,
    "maze2": _maze2,
    "maze3": _maze3,
    "maze4": _maze4,
    "workspaceA": _workspace_a,
    "workspaceB": _workspace_b,
}

# Target counts matching the benchmark suites.
DEFAULT_TARGET_COUNTS = {
    "human10x10": 30,
    "fog20x20": 10,
    "maze1": 7, "maze2": 7, "maze3": 7, "maze4": 7,
    "workspaceA": 7, "workspaceB": 7,
}


def layout_names() -> list[str]:
    return sorted(_LAYOUTS)


def load_layout(name: str) -> WorkspaceSpec:
    try:
        return _LAYOUTS[name]()
    except KeyError:
        raise KeyError(f"unknown layout {name!r}; "
                       f"available: {', '.join(layout_names())}") from None
