"""Function analyser: plotting areas with world mapping, function sampling,
movable scales, and attached comments.

Functions live in the scene document under their area's plot binding, so a
saved scene replays and re-renders identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from ..geometry import Point, Rect
from ..elements import CommentEl, PlotAreaEl, ScaleEl, WorldRect
from ..scene import PlotBinding, Scene
from .expressions import eval_ast, parse_expression

DEFAULT_SAMPLES = 500


@dataclass(frozen=True)
class Explicit:
    """y = f(x) over the area's world x range."""

    expr: str

    @cached_property
    def ast(self):
        return parse_expression(self.expr, variable="x", functions=True)

    def to_doc(self) -> dict:
        return {"type": "explicit", "expr": self.expr}


@dataclass(frozen=True)
class Parametric:
    """(x, y) = (X(p), Y(p)) for p in [p0, p1]."""

    x_expr: str
    y_expr: str
    p0: float
    p1: float

    def __post_init__(self):
        if not self.p0 < self.p1:
            raise ValueError("parametric range needs p0 < p1")

    @cached_property
    def x_ast(self):
        return parse_expression(self.x_expr, variable="p", functions=True)

    @cached_property
    def y_ast(self):
        return parse_expression(self.y_expr, variable="p", functions=True)

    def to_doc(self) -> dict:
        return {"type": "parametric", "x": self.x_expr, "y": self.y_expr,
                "p0": self.p0, "p1": self.p1}


FunctionDef = Union[Explicit, Parametric]


def function_from_doc(doc: dict) -> FunctionDef:
    if doc["type"] == "explicit":
        return Explicit(doc["expr"])
    if doc["type"] == "parametric":
        return Parametric(doc["x"], doc["y"], float(doc["p0"]), float(doc["p1"]))
    raise ValueError(f"unknown function type {doc['type']!r}")


def sample_function(fdef: FunctionDef, world: WorldRect,
                    n: int = DEFAULT_SAMPLES) -> list[list[tuple[float, float]]]:
    """Sample into polylines of world coordinates.

    n points span the range inclusively.  Non-finite samples split the
    output; fragments shorter than 2 points are dropped as undrawable.
    """
    if n < 2:
        raise ValueError("need at least 2 samples")
    points: list[tuple[float, float]] = []
    if isinstance(fdef, Explicit):
        step = (world.xmax - world.xmin) / (n - 1)
        for i in range(n):
            x = world.xmin + i * step
            points.append((x, eval_ast(fdef.ast, x)))
    else:
        step = (fdef.p1 - fdef.p0) / (n - 1)
        for i in range(n):
            p = fdef.p0 + i * step
            points.append((eval_ast(fdef.x_ast, p), eval_ast(fdef.y_ast, p)))

    polylines: list[list[tuple[float, float]]] = []
    run: list[tuple[float, float]] = []
    for (x, y) in points:
        if math.isfinite(x) and math.isfinite(y):
            run.append((x, y))
        else:
            if len(run) >= 2:
                polylines.append(run)
            run = []
    if len(run) >= 2:
        polylines.append(run)
    return polylines


def world_to_screen(area: PlotAreaEl, wx: float, wy: float) -> Point:
    """Affine world->screen map; world y grows up, screen y grows down."""
    w, r = area.world, area.rect
    sx = r.min.x + (wx - w.xmin) / (w.xmax - w.xmin) * r.width
    sy = r.max.y - (wy - w.ymin) / (w.ymax - w.ymin) * r.height
    return Point(sx, sy)


def screen_to_world(area: PlotAreaEl, p: Point) -> tuple[float, float]:
    w, r = area.world, area.rect
    wx = w.xmin + (p.x - r.min.x) / r.width * (w.xmax - w.xmin)
    wy = w.ymin + (r.max.y - p.y) / r.height * (w.ymax - w.ymin)
    return wx, wy


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Tick positions on the 1-2-5 decade ladder covering [lo, hi]."""
    if not lo < hi:
        raise ValueError("empty tick range")
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    norm = raw / mag
    if norm <= 1.0:
        step = mag
    elif norm <= 2.0:
        step = 2.0 * mag
    elif norm <= 5.0:
        step = 5.0 * mag
    else:
        step = 10.0 * mag
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(round(t / step) * step)
        t += step
    return ticks


# -- scene construction helpers --------------------------------------------

def add_plot_area(scene: Scene, rect: Rect, world: WorldRect) -> tuple[PlotAreaEl, PlotBinding]:
    area = scene.add(PlotAreaEl(id=scene.next_id(), rect=rect, world=world))
    binding = PlotBinding(area=area.id)
    scene.bindings.plots.append(binding)
    return area, binding


def add_function(scene: Scene, binding: PlotBinding, fdef: FunctionDef) -> None:
    binding.functions.append(fdef.to_doc())


def add_scale(scene: Scene, binding: PlotBinding, edge: str,
              offset: float = 8.0) -> ScaleEl:
    scale = scene.add(ScaleEl(id=scene.next_id(), attached_to=binding.area,
                              edge=edge, offset=offset))
    binding.scales.append(scale.id)
    return scale


def add_comment(scene: Scene, binding: PlotBinding, anchor: Point, text: str,
                angle: float = 0.0) -> CommentEl:
    comment = scene.add(CommentEl(id=scene.next_id(), anchor=anchor, text=text,
                                  angle=angle, attached_to=binding.area))
    binding.comments.append(comment.id)
    return comment


def bound_functions(binding: PlotBinding) -> list[FunctionDef]:
    return [function_from_doc(doc) for doc in binding.functions]


def attach_follow(scene: Scene, moved_id: int, dx: float, dy: float) -> None:
    """Translate an element and everything attached to it (scales ride free)."""
    scene.translate_with_followers(moved_id, dx, dy)


def build_analyser_demo() -> Scene:
    """Two plot areas with scales and rotatable comments, ready to drag."""
    scene = Scene()
    area1, b1 = add_plot_area(
        scene, Rect(Point(60.0, 40.0), Point(360.0, 240.0)),
        WorldRect(xmin=-3.0, xmax=3.0, ymin=-1.5, ymax=9.5),
    )
    add_function(scene, b1, Explicit("x*x"))
    add_function(scene, b1, Explicit("1/x"))
    add_scale(scene, b1, "left")
    add_scale(scene, b1, "bottom")
    add_comment(scene, b1, Point(210.0, 24.0), "parabola against hyperbola")

    area2, b2 = add_plot_area(
        scene, Rect(Point(420.0, 60.0), Point(640.0, 280.0)),
        WorldRect(xmin=-1.2, xmax=1.2, ymin=-1.2, ymax=1.2),
    )
    add_function(scene, b2, Parametric("cos(p)", "sin(p)", 0.0, 2.0 * math.pi))
    add_scale(scene, b2, "bottom")
    add_comment(scene, b2, Point(530.0, 44.0), "unit circle", angle=-0.2)
    return scene
