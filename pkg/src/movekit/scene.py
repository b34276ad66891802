"""Scene container: z-ordered elements, groups with self-adjusting frames,
named views, and canonical persistence.

The document format is a single UTF-8 JSON text with LF endings and a
fixed key order; floats serialize as Python's shortest round-trip repr,
which makes save -> load -> save byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional

from .cover import CoverParams
from .geometry import Arc, Contour, Line, Point, Rect, SegmentPiece, ShapeGeom
from .elements import (
    CircleEl,
    CommentEl,
    ControlEl,
    Element,
    InvariantError,
    LabyrinthEl,
    PathEl,
    PieEl,
    PlotAreaEl,
    PolygonEl,
    ScaleEl,
    SpotEl,
    Wall,
    WorldRect,
    bbox_of,
    move_by,
    scale_rect,
)

SCENE_VERSION = 1


class SceneLoadError(Exception):
    pass


class SceneVersionError(SceneLoadError):
    pass


class SceneFormatError(SceneLoadError):
    pass


class SceneInvariantError(SceneLoadError):
    pass


class UnknownViewError(KeyError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    cover_params: CoverParams = CoverParams()
    raise_on_grab: bool = True


@dataclass
class Group:
    id: int
    members: list[int]
    margin: float = 6.0
    frame: Rect = field(default_factory=lambda: Rect(Point(0, 0), Point(0, 0)))


@dataclass(frozen=True)
class View:
    name: str
    snapshots: dict[int, dict]


@dataclass
class PlotBinding:
    area: int
    functions: list[dict] = field(default_factory=list)
    scales: list[int] = field(default_factory=list)
    comments: list[int] = field(default_factory=list)


@dataclass
class CalculatorBinding:
    display: int
    buttons: list[int] = field(default_factory=list)
    entry: list[str] = field(default_factory=list)


@dataclass
class Bindings:
    plots: list[PlotBinding] = field(default_factory=list)
    calculators: list[CalculatorBinding] = field(default_factory=list)


class Scene:
    """Mutable container of immutable elements; the unit of persistence.

    The element list is kept in ascending z order and every element's z
    field always equals its list index.
    """

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self.elements: list[Element] = []
        self.groups: list[Group] = []
        self.views: dict[str, View] = {}
        self.bindings = Bindings()
        self.rev = 0  # bumped on every element mutation; caches key off it

    # -- element bookkeeping ---------------------------------------------

    def element(self, element_id: int) -> Element:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise KeyError(f"no element with id {element_id}")

    def has_element(self, element_id: int) -> bool:
        return any(el.id == element_id for el in self.elements)

    def next_id(self) -> int:
        return max((el.id for el in self.elements), default=0) + 1

    def add(self, el: Element) -> Element:
        if self.has_element(el.id):
            raise ValueError(f"duplicate element id {el.id}")
        placed = replace(el, z=len(self.elements))
        self.elements.append(placed)
        self.rev += 1
        self.recompute_all_frames()
        return placed

    def replace_element(self, el: Element) -> Element:
        for i, old in enumerate(self.elements):
            if old.id == el.id:
                placed = replace(el, z=i) if el.z != i else el
                self.elements[i] = placed
                self.rev += 1
                self.recompute_all_frames()
                return placed
        raise KeyError(f"no element with id {el.id}")

    def remove_element(self, element_id: int) -> None:
        self.element(element_id)  # raises when missing
        # cascade: scales cannot outlive their plot area
        doomed = {element_id}
        doomed |= {
            el.id for el in self.elements
            if isinstance(el, ScaleEl) and el.attached_to in doomed
        }
        kept = []
        for el in self.elements:
            if el.id in doomed:
                continue
            if isinstance(el, CommentEl) and el.attached_to in doomed:
                el = replace(el, attached_to=None)
            if isinstance(el, SpotEl) and el.target_id in doomed:
                el = replace(el, mode="free", target_id=None)
            kept.append(el)
        self.elements = kept
        for g in self.groups:
            g.members = [m for m in g.members if m not in doomed]
        self.groups = [g for g in self.groups if g.members]
        self.bindings.plots = [b for b in self.bindings.plots if b.area not in doomed]
        for b in self.bindings.plots:
            b.scales = [i for i in b.scales if i not in doomed]
            b.comments = [i for i in b.comments if i not in doomed]
        for b in self.bindings.calculators:
            b.buttons = [i for i in b.buttons if i not in doomed]
        self.bindings.calculators = [
            b for b in self.bindings.calculators if b.display not in doomed
        ]
        self._reindex()
        self.recompute_all_frames()

    def _reindex(self) -> None:
        self.elements = [
            el if el.z == i else replace(el, z=i) for i, el in enumerate(self.elements)
        ]
        self.rev += 1

    def group_of(self, element_id: int) -> Optional[Group]:
        for g in self.groups:
            if element_id in g.members:
                return g
        return None

    def raise_element(self, element_id: int) -> None:
        """Grabbed element to the top; its group rides along beneath it."""
        group = self.group_of(element_id)
        block = set(group.members) if group else {element_id}
        rest = [el for el in self.elements if el.id not in block]
        mates = [el for el in self.elements if el.id in block and el.id != element_id]
        self.elements = rest + mates + [self.element(element_id)]
        self._reindex()

    def raise_group(self, group_id: int) -> None:
        group = next((g for g in self.groups if g.id == group_id), None)
        if group is None:
            raise KeyError(f"no group with id {group_id}")
        block = set(group.members)
        rest = [el for el in self.elements if el.id not in block]
        self.elements = rest + [el for el in self.elements if el.id in block]
        self._reindex()

    # -- groups ------------------------------------------------------------

    def add_group(self, members: Iterable[int], margin: float | None = None) -> Group:
        members = list(members)
        if not members:
            raise ValueError("group needs at least one member")
        for m in members:
            self.element(m)
            if self.group_of(m) is not None:
                raise ValueError(f"element {m} already belongs to a group")
        gid = max((g.id for g in self.groups), default=0) + 1
        group = Group(id=gid, members=members,
                      margin=self.config.cover_params.frame_margin if margin is None else margin)
        self.groups.append(group)
        group.frame = self.recompute_frame(group)
        return group

    def recompute_frame(self, group: Group) -> Rect:
        """Exact union of member bboxes plus the margin on all four sides.

        This is the only way a frame is ever produced; frames are never
        translated or adjusted incrementally, so a stored frame is always
        bit-identical to a fresh recomputation.
        """
        box: Rect | None = None
        for member_id in group.members:
            b = bbox_of(self.element(member_id), self.element)
            box = b if box is None else box.union(b)
        assert box is not None
        return box.expanded(group.margin)

    def recompute_all_frames(self) -> None:
        for g in self.groups:
            g.frame = self.recompute_frame(g)

    def group_move(self, group_id: int, dx: float, dy: float) -> None:
        group = next((g for g in self.groups if g.id == group_id), None)
        if group is None:
            raise KeyError(f"no group with id {group_id}")
        moved: set[int] = set()
        for member_id in list(group.members):
            self.translate_with_followers(member_id, dx, dy, _moved=moved)

    def translate_with_followers(self, element_id: int, dx: float, dy: float,
                                 _moved: set[int] | None = None) -> None:
        """Translate an element plus everything attached to it.

        Comments and scales attached (directly or through a chain) to the
        moved element follow; scales follow implicitly because their
        geometry derives from their plot area.
        """
        moved = set() if _moved is None else _moved
        queue = [element_id]
        while queue:
            cur = queue.pop(0)
            if cur in moved:
                continue
            moved.add(cur)
            self._set_element(move_by(self.element(cur), dx, dy))
            for other in self.elements:
                if isinstance(other, CommentEl) and other.attached_to == cur:
                    queue.append(other.id)
                elif isinstance(other, ScaleEl) and other.attached_to == cur:
                    moved.add(other.id)  # derived geometry already follows its area
        self.recompute_all_frames()

    def _set_element(self, el: Element) -> None:
        for i, old in enumerate(self.elements):
            if old.id == el.id:
                self.elements[i] = replace(el, z=i) if el.z != i else el
                self.rev += 1
                return
        raise KeyError(f"no element with id {el.id}")

    # -- views --------------------------------------------------------------

    def capture_view(self, name: str) -> View:
        view = View(name, {el.id: _geom_to_doc(el) for el in self.elements})
        self.views[name] = view
        return view

    def apply_view(self, name: str) -> None:
        if name not in self.views:
            raise UnknownViewError(name)
        view = self.views[name]
        for i, el in enumerate(self.elements):
            snap = view.snapshots.get(el.id)
            if snap is None:
                continue  # element born after capture: leave it alone
            self.elements[i] = _el_with_geom(el, snap)
        self.rev += 1
        self.recompute_all_frames()

    # -- validation ----------------------------------------------------------

    def validate(self) -> list[str]:
        """All invariant violations, as human-readable strings."""
        problems: list[str] = []
        ids = [el.id for el in self.elements]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            problems.append(f"duplicate element ids: {dupes}")
        for i, el in enumerate(self.elements):
            if el.z != i:
                problems.append(f"element {el.id}: z={el.z} but list position {i}")
        id_set = set(ids)
        by_id = {el.id: el for el in self.elements}
        seen_members: set[int] = set()
        for g in self.groups:
            if not g.members:
                problems.append(f"group {g.id}: empty member list")
            for m in g.members:
                if m not in id_set:
                    problems.append(f"group {g.id}: member {m} does not exist")
                elif m in seen_members:
                    problems.append(f"group {g.id}: member {m} in two groups")
                seen_members.add(m)
            if g.margin < 0:
                problems.append(f"group {g.id}: negative margin")
            if all(m in id_set for m in g.members) and g.members:
                if self.recompute_frame(g) != g.frame:
                    problems.append(f"group {g.id}: stored frame is stale")
        for el in self.elements:
            if isinstance(el, ScaleEl):
                area = by_id.get(el.attached_to)
                if not isinstance(area, PlotAreaEl):
                    problems.append(f"element {el.id}: scale attached to {el.attached_to}, "
                                    "which is not a plot area")
            if isinstance(el, CommentEl) and el.attached_to is not None:
                if el.attached_to not in id_set:
                    problems.append(f"element {el.id}: attached to missing element "
                                    f"{el.attached_to}")
            if isinstance(el, SpotEl) and el.mode == "path":
                if not isinstance(by_id.get(el.target_id), PathEl):
                    problems.append(f"element {el.id}: path-mode spot needs a path element")
            if isinstance(el, SpotEl) and el.mode == "maze":
                if not isinstance(by_id.get(el.target_id), LabyrinthEl):
                    problems.append(f"element {el.id}: maze-mode spot needs a labyrinth")
        for b in self.bindings.plots:
            if not isinstance(by_id.get(b.area), PlotAreaEl):
                problems.append(f"binding: plot area {b.area} missing or wrong kind")
            for sid in b.scales:
                if not isinstance(by_id.get(sid), ScaleEl):
                    problems.append(f"binding: scale {sid} missing or wrong kind")
            for cid in b.comments:
                if not isinstance(by_id.get(cid), CommentEl):
                    problems.append(f"binding: comment {cid} missing or wrong kind")
            for fn in b.functions:
                problems.extend(_check_function_doc(fn, b.area))
        for b in self.bindings.calculators:
            if not isinstance(by_id.get(b.display), CommentEl):
                problems.append(f"binding: calculator display {b.display} missing or "
                                "wrong kind")
            for bid in b.buttons:
                if not isinstance(by_id.get(bid), ControlEl):
                    problems.append(f"binding: calculator button {bid} missing or "
                                    "wrong kind")
        return problems

    # -- persistence -----------------------------------------------------------

    def to_document(self) -> dict:
        return {
            "version": SCENE_VERSION,
            "config": {
                "strip_halfwidth": self.config.cover_params.strip_halfwidth,
                "vertex_radius": self.config.cover_params.vertex_radius,
                "frame_margin": self.config.cover_params.frame_margin,
                "raise_on_grab": self.config.raise_on_grab,
            },
            "elements": [_el_to_doc(el) for el in self.elements],
            "groups": [
                {"id": g.id, "members": list(g.members), "margin": g.margin}
                for g in self.groups
            ],
            "views": {
                name: {str(eid): dict(snap) for eid, snap in
                       sorted(self.views[name].snapshots.items())}
                for name in sorted(self.views)
            },
            "bindings": {
                "plots": [
                    {"area": b.area, "functions": [dict(f) for f in b.functions],
                     "scales": list(b.scales), "comments": list(b.comments)}
                    for b in self.bindings.plots
                ],
                "calculators": [
                    {"display": b.display, "buttons": list(b.buttons),
                     "entry": list(b.entry)}
                    for b in self.bindings.calculators
                ],
            },
        }


def _check_function_doc(fn: Any, area: int) -> list[str]:
    from .apps.expressions import ExpressionError, parse_expression
    if not isinstance(fn, dict) or "type" not in fn:
        return [f"binding: malformed function entry on area {area}"]
    try:
        if fn["type"] == "explicit":
            parse_expression(fn["expr"], variable="x", functions=True)
        elif fn["type"] == "parametric":
            parse_expression(fn["x"], variable="p", functions=True)
            parse_expression(fn["y"], variable="p", functions=True)
            if not float(fn["p0"]) < float(fn["p1"]):
                return [f"binding: parametric range empty on area {area}"]
        else:
            return [f"binding: unknown function type {fn['type']!r} on area {area}"]
    except (ExpressionError, KeyError, TypeError, ValueError) as exc:
        return [f"binding: bad function on area {area}: {exc}"]
    return []


# --- geometry <-> document ------------------------------------------------

def _pt(p: Point) -> list[float]:
    return [p.x, p.y]


def _piece_to_doc(piece: SegmentPiece) -> dict:
    if isinstance(piece, Line):
        return {"type": "line", "a": _pt(piece.a), "b": _pt(piece.b)}
    return {"type": "arc", "center": _pt(piece.center), "r": piece.radius,
            "start": piece.start_angle, "sweep": piece.sweep}


def _piece_from_doc(doc: dict) -> SegmentPiece:
    if doc["type"] == "line":
        return Line(Point(*doc["a"]), Point(*doc["b"]))
    if doc["type"] == "arc":
        return Arc(Point(*doc["center"]), doc["r"], doc["start"], doc["sweep"])
    raise SceneFormatError(f"unknown piece type {doc.get('type')!r}")


def _contour_to_doc(contour: Contour) -> list[dict]:
    return [_piece_to_doc(p) for p in contour.pieces]


def _contour_from_doc(doc: list) -> Contour:
    return Contour(tuple(_piece_from_doc(p) for p in doc))


def _rect_to_doc(rect: Rect) -> list[float]:
    return [rect.min.x, rect.min.y, rect.max.x, rect.max.y]


def _rect_from_doc(doc: list) -> Rect:
    return Rect(Point(doc[0], doc[1]), Point(doc[2], doc[3]))


def _geom_to_doc(el: Element) -> dict:
    """Geometric fields only: what a view snapshot captures and restores."""
    if isinstance(el, PolygonEl):
        return {"outer": _contour_to_doc(el.geom.outer),
                "holes": [_contour_to_doc(h) for h in el.geom.holes]}
    if isinstance(el, CircleEl):
        return {"center": _pt(el.center), "r": el.r}
    if isinstance(el, PieEl):
        return {"center": _pt(el.center), "outer_r": el.outer_r,
                "inner_r": el.inner_r, "start_deg": el.start_deg,
                "shares": list(el.shares)}
    if isinstance(el, ControlEl):
        return {"rect": _rect_to_doc(el.rect)}
    if isinstance(el, CommentEl):
        return {"anchor": _pt(el.anchor), "angle": el.angle}
    if isinstance(el, PlotAreaEl):
        return {"rect": _rect_to_doc(el.rect),
                "world": [el.world.xmin, el.world.xmax, el.world.ymin, el.world.ymax]}
    if isinstance(el, ScaleEl):
        return {"edge": el.edge, "offset": el.offset}
    if isinstance(el, SpotEl):
        return {"center": _pt(el.center), "r": el.r}
    if isinstance(el, LabyrinthEl):
        return {"walls": [[w.a.x, w.a.y, w.b.x, w.b.y] for w in el.walls],
                "thickness": el.thickness}
    if isinstance(el, PathEl):
        return {"pts": [_pt(p) for p in el.pts]}
    raise TypeError(f"no geometry encoding for {type(el).__name__}")


def _el_with_geom(el: Element, doc: dict) -> Element:
    if isinstance(el, PolygonEl):
        return replace(el, geom=ShapeGeom(
            _contour_from_doc(doc["outer"]),
            tuple(_contour_from_doc(h) for h in doc["holes"]),
        ))
    if isinstance(el, CircleEl):
        return replace(el, center=Point(*doc["center"]), r=doc["r"])
    if isinstance(el, PieEl):
        return replace(el, center=Point(*doc["center"]), outer_r=doc["outer_r"],
                       inner_r=doc["inner_r"], start_deg=doc["start_deg"],
                       shares=tuple(doc["shares"]))
    if isinstance(el, ControlEl):
        return replace(el, rect=_rect_from_doc(doc["rect"]))
    if isinstance(el, CommentEl):
        return replace(el, anchor=Point(*doc["anchor"]), angle=doc["angle"])
    if isinstance(el, PlotAreaEl):
        w = doc["world"]
        return replace(el, rect=_rect_from_doc(doc["rect"]),
                       world=WorldRect(xmin=w[0], xmax=w[1], ymin=w[2], ymax=w[3]))
    if isinstance(el, ScaleEl):
        return replace(el, edge=doc["edge"], offset=doc["offset"])
    if isinstance(el, SpotEl):
        return replace(el, center=Point(*doc["center"]), r=doc["r"])
    if isinstance(el, LabyrinthEl):
        return replace(el, walls=tuple(
            Wall(Point(w[0], w[1]), Point(w[2], w[3])) for w in doc["walls"]
        ), thickness=doc["thickness"])
    if isinstance(el, PathEl):
        return replace(el, pts=tuple(Point(*p) for p in doc["pts"]))
    raise TypeError(f"no geometry decoding for {type(el).__name__}")


_KIND_NAMES = {
    PolygonEl: "polygon",
    CircleEl: "circle",
    PieEl: "pie",
    ControlEl: "control",
    CommentEl: "comment",
    PlotAreaEl: "plot_area",
    ScaleEl: "scale",
    SpotEl: "spot",
    LabyrinthEl: "labyrinth",
    PathEl: "path",
}


def _el_to_doc(el: Element) -> dict:
    doc: dict[str, Any] = {
        "id": el.id,
        "kind": _KIND_NAMES[type(el)],
        "z": el.z,
        "rotatable": el.rotatable,
    }
    doc.update(_geom_to_doc(el))
    if isinstance(el, ControlEl):
        doc["tag"] = el.tag
    elif isinstance(el, CommentEl):
        doc["text"] = el.text
        doc["attached_to"] = el.attached_to
    elif isinstance(el, ScaleEl):
        doc["attached_to"] = el.attached_to
    elif isinstance(el, SpotEl):
        doc["mode"] = el.mode
        doc["target_id"] = el.target_id
    doc["style"] = dict(el.style)
    return doc


def _el_from_doc(doc: dict) -> Element:
    try:
        kind = doc["kind"]
        common = dict(
            id=int(doc["id"]),
            z=int(doc["z"]),
            rotatable=bool(doc["rotatable"]),
            style=tuple((str(k), str(v)) for k, v in doc.get("style", {}).items()),
        )
        if kind == "polygon":
            return PolygonEl(geom=ShapeGeom(
                _contour_from_doc(doc["outer"]),
                tuple(_contour_from_doc(h) for h in doc["holes"]),
            ), **common)
        if kind == "circle":
            return CircleEl(center=Point(*doc["center"]), r=doc["r"], **common)
        if kind == "pie":
            return PieEl(center=Point(*doc["center"]), outer_r=doc["outer_r"],
                         inner_r=doc["inner_r"], start_deg=doc["start_deg"],
                         shares=tuple(doc["shares"]), **common)
        if kind == "control":
            return ControlEl(rect=_rect_from_doc(doc["rect"]), tag=str(doc["tag"]),
                             **common)
        if kind == "comment":
            attached = doc["attached_to"]
            return CommentEl(anchor=Point(*doc["anchor"]), angle=doc["angle"],
                             text=str(doc["text"]),
                             attached_to=None if attached is None else int(attached),
                             **common)
        if kind == "plot_area":
            w = doc["world"]
            return PlotAreaEl(rect=_rect_from_doc(doc["rect"]),
                              world=WorldRect(xmin=w[0], xmax=w[1], ymin=w[2], ymax=w[3]),
                              **common)
        if kind == "scale":
            return ScaleEl(attached_to=int(doc["attached_to"]), edge=doc["edge"],
                           offset=doc["offset"], **common)
        if kind == "spot":
            target = doc["target_id"]
            return SpotEl(center=Point(*doc["center"]), r=doc["r"], mode=doc["mode"],
                          target_id=None if target is None else int(target), **common)
        if kind == "labyrinth":
            return LabyrinthEl(walls=tuple(
                Wall(Point(w[0], w[1]), Point(w[2], w[3])) for w in doc["walls"]
            ), thickness=doc["thickness"], **common)
        if kind == "path":
            return PathEl(pts=tuple(Point(*p) for p in doc["pts"]), **common)
        raise SceneFormatError(f"unknown element kind {kind!r}")
    except InvariantError:
        raise
    except SceneFormatError:
        raise
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise SceneFormatError(
            f"malformed element record ({exc.__class__.__name__}: {exc})"
        ) from exc


_TOP_KEYS = ["version", "config", "elements", "groups", "views", "bindings"]


def scene_from_document(doc: Any) -> Scene:
    if not isinstance(doc, dict):
        raise SceneFormatError("scene document must be a JSON object")
    if "version" not in doc:
        raise SceneFormatError("scene document missing 'version'")
    if doc["version"] != SCENE_VERSION:
        raise SceneVersionError(
            f"unsupported scene version {doc['version']!r}, expected {SCENE_VERSION}"
        )
    unknown = set(doc) - set(_TOP_KEYS)
    if unknown:
        raise SceneFormatError(f"unknown top-level keys: {sorted(unknown)}")
    for key in _TOP_KEYS:
        if key not in doc:
            raise SceneFormatError(f"scene document missing {key!r}")
    try:
        cfg = doc["config"]
        config = EngineConfig(
            cover_params=CoverParams(
                strip_halfwidth=float(cfg["strip_halfwidth"]),
                vertex_radius=float(cfg["vertex_radius"]),
                frame_margin=float(cfg["frame_margin"]),
            ),
            raise_on_grab=bool(cfg["raise_on_grab"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed config ({exc})") from exc

    scene = Scene(config)
    try:
        for el_doc in doc["elements"]:
            scene.elements.append(_el_from_doc(el_doc))
    except InvariantError as exc:
        raise SceneInvariantError(str(exc)) from exc

    try:
        for g_doc in doc["groups"]:
            scene.groups.append(Group(
                id=int(g_doc["id"]),
                members=[int(m) for m in g_doc["members"]],
                margin=float(g_doc["margin"]),
            ))
        for name, snaps in doc["views"].items():
            scene.views[str(name)] = View(str(name), {
                int(eid): dict(snap) for eid, snap in snaps.items()
            })
        b = doc["bindings"]
        scene.bindings = Bindings(
            plots=[PlotBinding(area=int(p["area"]),
                               functions=[dict(f) for f in p["functions"]],
                               scales=[int(s) for s in p["scales"]],
                               comments=[int(c) for c in p["comments"]])
                   for p in b["plots"]],
            calculators=[CalculatorBinding(display=int(c["display"]),
                                           buttons=[int(x) for x in c["buttons"]],
                                           entry=[str(t) for t in c["entry"]])
                         for c in b["calculators"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"malformed scene document ({exc})") from exc

    for g in scene.groups:
        try:
            g.frame = scene.recompute_frame(g)
        except (KeyError, InvariantError, ValueError):
            pass  # cross-reference problems surface via validate below
    problems = scene.validate()
    if problems:
        raise SceneInvariantError("; ".join(problems))
    return scene


def save_scene(scene: Scene) -> bytes:
    """Canonical document bytes: fixed key order, LF endings, repr floats."""
    text = json.dumps(scene.to_document(), ensure_ascii=False, allow_nan=False,
                      indent=1)
    return (text + "\n").encode("utf-8")


def load_scene(data: bytes | str) -> Scene:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SceneFormatError(f"document is not UTF-8 ({exc})") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"document is not valid JSON ({exc})") from exc
    return scene_from_document(doc)


def copy_scene(scene: Scene) -> Scene:
    return scene_from_document(scene.to_document())


# --- SVG snapshot ----------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _xml_escape(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _style_attrs(el: Element) -> str:
    return "".join(f' {k}="{_xml_escape(v)}"' for k, v in el.style)


def _contour_path(contour: Contour) -> str:
    start = contour.pieces[0]
    p0 = start.a if isinstance(start, Line) else start.start
    parts = [f"M {_fmt(p0.x)} {_fmt(p0.y)}"]
    for piece in contour.pieces:
        if isinstance(piece, Line):
            parts.append(f"L {_fmt(piece.b.x)} {_fmt(piece.b.y)}")
        else:
            sweep = piece.sweep
            # SVG arcs cannot span a full turn in one command: split halves
            halves = 2 if abs(sweep) > math.pi else 1
            for k in range(1, halves + 1):
                end = piece.point_at(piece.start_angle + sweep * k / halves)
                large = 1 if abs(sweep / halves) > math.pi else 0
                flag = 1 if sweep > 0 else 0
                parts.append(
                    f"A {_fmt(piece.radius)} {_fmt(piece.radius)} 0 {large} {flag} "
                    f"{_fmt(end.x)} {_fmt(end.y)}"
                )
    parts.append("Z")
    return " ".join(parts)


def _el_to_svg(el: Element, scene: Scene) -> str:
    style = _style_attrs(el)
    if isinstance(el, PolygonEl):
        d = " ".join(_contour_path(c) for c in [el.geom.outer, *el.geom.holes])
        return f'<path id="el{el.id}" d="{d}" fill-rule="evenodd"{style}/>'
    if isinstance(el, CircleEl):
        return (f'<circle id="el{el.id}" cx="{_fmt(el.center.x)}" '
                f'cy="{_fmt(el.center.y)}" r="{_fmt(el.r)}"{style}/>')
    if isinstance(el, PieEl):
        from .elements import divider_points, pie_shape
        shape = pie_shape(el)
        d = " ".join(_contour_path(c) for c in [shape.outer, *shape.holes])
        for ang, tip in zip(_pie_divider_angles(el), divider_points(el)):
            ix = el.center.x + el.inner_r * math.cos(math.radians(ang))
            iy = el.center.y + el.inner_r * math.sin(math.radians(ang))
            d += f" M {_fmt(ix)} {_fmt(iy)} L {_fmt(tip.x)} {_fmt(tip.y)}"
        return f'<path id="el{el.id}" d="{d}" fill-rule="evenodd"{style}/>'
    if isinstance(el, (ControlEl, PlotAreaEl)):
        r = el.rect
        tag = f' data-tag="{_xml_escape(el.tag)}"' if isinstance(el, ControlEl) else ""
        return (f'<rect id="el{el.id}" x="{_fmt(r.min.x)}" y="{_fmt(r.min.y)}" '
                f'width="{_fmt(r.width)}" height="{_fmt(r.height)}"{tag}{style}/>')
    if isinstance(el, CommentEl):
        deg = math.degrees(el.angle)
        transform = (f' transform="rotate({_fmt(deg)} {_fmt(el.anchor.x)} '
                     f'{_fmt(el.anchor.y)})"') if el.angle != 0.0 else ""
        return (f'<text id="el{el.id}" x="{_fmt(el.anchor.x)}" y="{_fmt(el.anchor.y)}" '
                f'text-anchor="middle"{transform}{style}>{_xml_escape(el.text)}</text>')
    if isinstance(el, ScaleEl):
        r = scale_rect(el, scene.element(el.attached_to).rect)
        return (f'<rect id="el{el.id}" x="{_fmt(r.min.x)}" y="{_fmt(r.min.y)}" '
                f'width="{_fmt(r.width)}" height="{_fmt(r.height)}"{style}/>')
    if isinstance(el, SpotEl):
        return (f'<circle id="el{el.id}" cx="{_fmt(el.center.x)}" '
                f'cy="{_fmt(el.center.y)}" r="{_fmt(el.r)}"{style}/>')
    if isinstance(el, LabyrinthEl):
        d = " ".join(
            f"M {_fmt(w.a.x)} {_fmt(w.a.y)} L {_fmt(w.b.x)} {_fmt(w.b.y)}"
            for w in el.walls
        )
        return (f'<path id="el{el.id}" d="{d}" '
                f'stroke-width="{_fmt(el.thickness)}"{style}/>')
    if isinstance(el, PathEl):
        parts = [f"M {_fmt(el.pts[0].x)} {_fmt(el.pts[0].y)}"]
        parts += [f"L {_fmt(p.x)} {_fmt(p.y)}" for p in el.pts[1:]]
        return f'<path id="el{el.id}" d="{" ".join(parts)}" fill="none"{style}/>'
    raise TypeError(f"no svg encoding for {type(el).__name__}")


def _pie_divider_angles(el: PieEl) -> list[float]:
    from .elements import divider_angles_deg
    return divider_angles_deg(el)


def scene_to_svg(scene: Scene) -> str:
    """One SVG shape per element, document order = z order."""
    box: Rect | None = None
    for el in scene.elements:
        b = bbox_of(el, scene.element)
        box = b if box is None else box.union(b)
    for g in scene.groups:
        box = g.frame if box is None else box.union(g.frame)
    if box is None:
        box = Rect(Point(0, 0), Point(100, 100))
    box = box.expanded(10.0)
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(box.min.x)} {_fmt(box.min.y)} '
        f'{_fmt(box.width)} {_fmt(box.height)}">',
        '<g fill="none" stroke="black">',
    ]
    for el in scene.elements:
        lines.append(_el_to_svg(el, scene))
    for g in scene.groups:
        f = g.frame
        lines.append(
            f'<rect class="frame" x="{_fmt(f.min.x)}" y="{_fmt(f.min.y)}" '
            f'width="{_fmt(f.width)}" height="{_fmt(f.height)}" '
            'stroke-dasharray="4 3"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
