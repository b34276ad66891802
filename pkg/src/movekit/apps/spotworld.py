"""Spot demos: a small disc that slides inside a labyrinth or along a way.

Both the labyrinth and the path are ordinary elements, so they can be
reshaped mid-game and the spot obeys the new geometry on its next move.
"""

from __future__ import annotations

from ..geometry import Point
from ..elements import LabyrinthEl, PathEl, SpotEl, Wall, constrained_spot_move  # noqa: F401
from ..scene import Scene


def build_labyrinth_demo() -> Scene:
    scene = Scene()
    w = Wall
    p = Point
    walls = (
        # outer box
        w(p(20, 20), p(380, 20)),
        w(p(380, 20), p(380, 300)),
        w(p(380, 300), p(20, 300)),
        w(p(20, 300), p(20, 20)),
        # inner baffles
        w(p(100, 20), p(100, 220)),
        w(p(180, 300), p(180, 100)),
        w(p(260, 20), p(260, 220)),
        w(p(320, 300), p(320, 100)),
    )
    lab = scene.add(LabyrinthEl(id=1, walls=walls, thickness=4.0))
    scene.add(SpotEl(id=2, center=Point(60.0, 260.0), r=8.0, mode="maze",
                     target_id=lab.id))
    return scene


def build_path_demo() -> Scene:
    scene = Scene()
    way = scene.add(PathEl(id=1, pts=(
        Point(40.0, 240.0), Point(120.0, 80.0), Point(240.0, 200.0),
        Point(330.0, 60.0), Point(420.0, 160.0),
    )))
    scene.add(SpotEl(id=2, center=Point(40.0, 240.0), r=7.0, mode="path",
                     target_id=way.id))
    return scene
