"""The pointer-event state machine: the only mutation path into a scene.

Press resolves a grab through the covers (topmost element first), move
applies the grabbed action, release ends the grab.  Left button drives
move/resize/vertex/divider/path actions; right button rotates rotatable
elements about their bounding-box center.  Everything is deterministic:
replaying the same event log over the same scene yields byte-identical
documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .geometry import Point, Rect, project_to_polyline
from .cover import (
    Cover,
    CoverNode,
    Divider,
    Move as MoveAction,
    PathConstrained,
    ResizeBorder,
    Transparent,
    Vertex,
    build_cover,
    resolve_hit,
)
from .elements import (
    ControlEl,
    Element,
    LabyrinthEl,
    PathEl,
    SpotEl,
    bbox_of,
    constrained_spot_move,
    drag_divider,
    reconfigure_vertex,
    resize_border,
    rotate_to,
)
from .scene import EngineConfig, Group, Scene, copy_scene  # noqa: F401 (re-export)

TWO_PI = 2.0 * math.pi


# --- pointer events and the .evt wire format -------------------------------

@dataclass(frozen=True)
class Press:
    button: str  # "L" | "R"
    p: Point

    def __post_init__(self):
        if self.button not in ("L", "R"):
            raise ValueError(f"button must be 'L' or 'R', got {self.button!r}")


@dataclass(frozen=True)
class Move:
    p: Point


@dataclass(frozen=True)
class Release:
    pass


PointerEvent = Union[Press, Move, Release]


class EventFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def format_event(event: PointerEvent) -> str:
    if isinstance(event, Press):
        return f"P {event.button} {event.p.x!r} {event.p.y!r}"
    if isinstance(event, Move):
        return f"M {event.p.x!r} {event.p.y!r}"
    return "R"


def format_events(events: Iterable[PointerEvent]) -> str:
    return "".join(format_event(e) + "\n" for e in events)


def parse_event_line(line: str, lineno: int = 0) -> PointerEvent:
    parts = line.split()
    try:
        if parts[0] == "P" and len(parts) == 4:
            return Press(parts[1], Point(float(parts[2]), float(parts[3])))
        if parts[0] == "M" and len(parts) == 3:
            return Move(Point(float(parts[1]), float(parts[2])))
        if parts[0] == "R" and len(parts) == 1:
            return Release()
    except ValueError as exc:
        raise EventFormatError(str(exc), lineno) from exc
    raise EventFormatError(f"unrecognized event {line!r}", lineno)


def parse_events(text: str) -> list[PointerEvent]:
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        events.append(parse_event_line(line, lineno))
    return events


# --- hit resolution ---------------------------------------------------------

@dataclass(frozen=True)
class ElementHit:
    element: Element
    node_index: int
    node: CoverNode


@dataclass(frozen=True)
class ControlHit:
    element: ControlEl


@dataclass(frozen=True)
class GroupHit:
    group: Group


Hit = Union[ElementHit, ControlHit, GroupHit]


class _HitIndex:
    """Per-element cover cache plus a vectorized bbox prefilter.

    Covers are rebuilt only for elements whose object identity changed;
    the candidate scan is a numpy box test over all elements at once,
    which keeps hit resolution fast on thousand-element scenes.
    """

    def __init__(self):
        self._cache: dict[int, tuple[Element, Cover, tuple]] = {}
        self._order: list[tuple[Element, Cover]] = []
        self._boxes: np.ndarray | None = None
        self._rev = -1

    def refresh(self, scene: Scene) -> None:
        if self._rev == scene.rev:
            return
        order = []
        rows = []
        cache = self._cache
        for el in reversed(scene.elements):  # topmost first
            ent = cache.get(el.id)
            if ent is None or ent[0] is not el:
                cover = build_cover(el, scene.config.cover_params, scene.element)
                b = cover.bounds
                row = (b.min.x, b.min.y, b.max.x, b.max.y) if b else (1.0, 1.0, 0.0, 0.0)
                ent = (el, cover, row)
                cache[el.id] = ent
            order.append((el, ent[1]))
            rows.append(ent[2])
        self._order = order
        self._boxes = np.array(rows, dtype=np.float64) if rows else None
        self._rev = scene.rev

    def candidates(self, p: Point) -> list[tuple[Element, Cover]]:
        if self._boxes is None:
            return []
        b = self._boxes
        mask = (b[:, 0] <= p.x) & (p.x <= b[:, 2]) & (b[:, 1] <= p.y) & (p.y <= b[:, 3])
        idx = np.nonzero(mask)[0]
        order = self._order
        return [order[i] for i in idx]


@dataclass(frozen=True)
class Rotate:
    """Drag-state action marker for right-button rotation."""


@dataclass
class DragState:
    element_id: Optional[int]
    node_index: Optional[int]
    action: object
    button: str
    grab_dx: float = 0.0
    grab_dy: float = 0.0
    pivot: Optional[Point] = None
    start_angle: float = 0.0
    last_angle: float = 0.0
    last_valid: Optional[Element] = None
    group_id: Optional[int] = None


def _wrap_angle(delta: float) -> float:
    return (delta + math.pi) % TWO_PI - math.pi


class Engine:
    """Owns one scene; processes pointer events strictly sequentially."""

    def __init__(self, scene: Scene):
        self.scene = scene
        self.drag: Optional[DragState] = None
        self.pressed_control: Optional[int] = None
        self.clicks: list[tuple[int, str]] = []
        self.click_listeners: list[Callable[[int, str], None]] = []
        self.press_listeners: list[Callable[[int, str], None]] = []
        self._cursor = Point(0.0, 0.0)
        self._index = _HitIndex()

    # -- queries -----------------------------------------------------------

    def hit_test(self, p: Point) -> Optional[Hit]:
        """Resolve a point against the scene: topmost element wins.

        A Transparent node hit passes through to the element beneath; a
        point inside a control's interior (which has no cover node)
        belongs to the control itself.
        """
        self._index.refresh(self.scene)
        for el, cover in self._index.candidates(p):
            idx = resolve_hit(cover, p)
            if idx is None:
                if isinstance(el, ControlEl) and el.rect.contains_point(p):
                    return ControlHit(el)
                continue
            node = cover.nodes[idx]
            if isinstance(node.action, Transparent):
                continue
            return ElementHit(el, idx, node)
        for group in reversed(self.scene.groups):
            if group.frame.contains_point(p):
                return GroupHit(group)
        return None

    # -- event handlers ------------------------------------------------------

    def on_press(self, button: str, p: Point) -> None:
        if self.drag is not None or self.pressed_control is not None:
            raise RuntimeError("press while a press is already active")
        self._cursor = p
        hit = self.hit_test(p)
        if hit is None:
            return
        if isinstance(hit, ControlHit):
            # controls swallow the press either way; only L activates
            if button == "L":
                self.pressed_control = hit.element.id
                for listener in self.press_listeners:
                    listener(hit.element.id, hit.element.tag)
            return
        if isinstance(hit, GroupHit):
            if button != "L":
                return  # groups do not rotate
            if self.scene.config.raise_on_grab:
                self.scene.raise_group(hit.group.id)
            f = hit.group.frame
            self.drag = DragState(
                element_id=None, node_index=None, action=MoveAction(), button="L",
                grab_dx=f.min.x - p.x, grab_dy=f.min.y - p.y,
                group_id=hit.group.id,
            )
            return

        el = hit.element
        if button == "R":
            if not el.rotatable:
                return  # signal: nothing grabs
            if self.scene.config.raise_on_grab:
                self.scene.raise_element(el.id)
            pivot = bbox_of(el, self.scene.element).center
            ang = math.atan2(p.y - pivot.y, p.x - pivot.x)
            self.drag = DragState(
                element_id=el.id, node_index=hit.node_index, action=Rotate(),
                button="R", pivot=pivot, start_angle=ang, last_angle=ang,
                last_valid=el,
            )
            return

        if self.scene.config.raise_on_grab:
            self.scene.raise_element(el.id)
        action = hit.node.action
        drag = DragState(element_id=el.id, node_index=hit.node_index,
                         action=action, button="L", last_valid=el)
        if isinstance(action, MoveAction):
            anchor = bbox_of(el, self.scene.element).min
            drag.grab_dx = anchor.x - p.x
            drag.grab_dy = anchor.y - p.y
        self.drag = drag

    def on_move(self, p: Point) -> None:
        self._cursor = p
        drag = self.drag
        if drag is None:
            return  # hover: never mutates the scene

        if drag.group_id is not None:
            group = next(g for g in self.scene.groups if g.id == drag.group_id)
            dx = (p.x + drag.grab_dx) - group.frame.min.x
            dy = (p.y + drag.grab_dy) - group.frame.min.y
            if dx != 0.0 or dy != 0.0:
                self.scene.group_move(group.id, dx, dy)
            return

        el = self.scene.element(drag.element_id)
        if isinstance(drag.action, Rotate):
            assert drag.pivot is not None
            ang = math.atan2(p.y - drag.pivot.y, p.x - drag.pivot.x)
            delta = _wrap_angle(ang - drag.last_angle)
            if delta != 0.0:
                rotated = rotate_to(el, drag.pivot, delta)
                if rotated is not el:
                    self.scene.replace_element(rotated)
                    drag.last_valid = rotated
            drag.last_angle = ang
            return

        if isinstance(drag.action, MoveAction):
            if isinstance(el, SpotEl) and el.mode == "maze":
                lab = self.scene.element(el.target_id)
                assert isinstance(lab, LabyrinthEl)
                anchor = bbox_of(el).min
                target = Point(el.center.x + (p.x + drag.grab_dx) - anchor.x,
                               el.center.y + (p.y + drag.grab_dy) - anchor.y)
                stopped = constrained_spot_move(lab, el, target)
                moved = replace(el, center=stopped)
                self.scene.replace_element(moved)
                drag.last_valid = moved
                return
            anchor = bbox_of(el, self.scene.element).min
            dx = (p.x + drag.grab_dx) - anchor.x
            dy = (p.y + drag.grab_dy) - anchor.y
            if dx != 0.0 or dy != 0.0:
                self.scene.translate_with_followers(el.id, dx, dy)
                drag.last_valid = self.scene.element(el.id)
            return

        if isinstance(drag.action, PathConstrained):
            assert isinstance(el, SpotEl)
            path = self.scene.element(el.target_id)
            assert isinstance(path, PathEl)
            foot, _, _ = project_to_polyline(p, path.pts)
            moved = replace(el, center=foot)
            self.scene.replace_element(moved)
            drag.last_valid = moved
            return

        if isinstance(drag.action, ResizeBorder):
            mutated = resize_border(el, drag.action.border_id, p)
        elif isinstance(drag.action, Vertex):
            mutated = reconfigure_vertex(el, drag.action.index, p)
        elif isinstance(drag.action, Divider):
            mutated = drag_divider(el, drag.action.index, p)
        else:
            raise AssertionError(f"unhandled drag action {drag.action!r}")
        if mutated is not el:  # rejected steps keep the last valid geometry
            self.scene.replace_element(mutated)
            drag.last_valid = mutated

    def on_release(self) -> None:
        if self.pressed_control is not None:
            control_id = self.pressed_control
            self.pressed_control = None
            if self.scene.has_element(control_id):
                el = self.scene.element(control_id)
                if isinstance(el, ControlEl) and el.rect.contains_point(self._cursor):
                    self.clicks.append((el.id, el.tag))
                    for listener in self.click_listeners:
                        listener(el.id, el.tag)
        self.drag = None

    def apply(self, event: PointerEvent) -> None:
        if isinstance(event, Press):
            self.on_press(event.button, event.p)
        elif isinstance(event, Move):
            self.on_move(event.p)
        else:
            self.on_release()


class ReplayError(ValueError):
    def __init__(self, message: str, index: int):
        super().__init__(f"event {index}: {message}")
        self.index = index


def replay(scene: Scene, events: Iterable[PointerEvent]) -> Scene:
    """Fold the events over a copy of the scene; the input is untouched.

    Pure engine semantics: control clicks are recorded on the returned
    scene's engine but not routed to any application model (see
    movekit.runtime.Session for app-aware replay).
    """
    work = copy_scene(scene)
    engine = Engine(work)
    for index, event in enumerate(events):
        try:
            engine.apply(event)
        except RuntimeError as exc:
            raise ReplayError(str(exc), index) from exc
    return work
