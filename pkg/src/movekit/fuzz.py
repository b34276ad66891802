"""Randomized stress machinery: scene and event generators, an independent
hit oracle, invariant checks, and event-log minimization.

The oracle here re-tests every cover node with its own containment math
and no caching or prefiltering, so agreement with the engine's fast path
is meaningful.  All randomness flows from explicit seeds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .geometry import Line, Point, Rect, ShapeGeom, polygon_contour
from .cover import Transparent, node_boundary_distance
from .elements import (
    CircleEl,
    CommentEl,
    ControlEl,
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
    divider_points,
)
from .engine import Engine, Move, PointerEvent, Press, Release
from .runtime import Session
from .scene import Scene, copy_scene, save_scene

HIT_BAND = 0.25  # px of float fuzz allowed around node boundaries


# --- independent containment math ------------------------------------------

def _flatten_fine(piece, sagitta=0.02):
    if isinstance(piece, Line):
        return [(piece.a.x, piece.a.y), (piece.b.x, piece.b.y)]
    r = piece.radius
    frac = max(-1.0, 1.0 - sagitta / r)
    step = 2.0 * math.acos(frac) if frac < 1.0 else math.pi
    n = max(4, int(math.ceil(abs(piece.sweep) / step)))
    cx, cy = piece.center.x, piece.center.y
    return [
        (cx + r * math.cos(piece.start_angle + piece.sweep * k / n),
         cy + r * math.sin(piece.start_angle + piece.sweep * k / n))
        for k in range(n + 1)
    ]


def _crossings_contains(loops, px, py):
    inside = False
    for loop in loops:
        m = len(loop)
        for i in range(m):
            x1, y1 = loop[i]
            x2, y2 = loop[(i + 1) % m]
            if (y1 > py) != (y2 > py):
                if px < x1 + (py - y1) * (x2 - x1) / (y2 - y1):
                    inside = not inside
    return inside


def _shape_loops(shape: ShapeGeom):
    loops = []
    for contour in [shape.outer, *shape.holes]:
        pts = []
        for piece in contour.pieces:
            pts.extend(_flatten_fine(piece)[:-1])
        loops.append(pts)
    return loops


def _seg_dist(px, py, ax, ay, bx, by):
    ux, uy = bx - ax, by - ay
    den = ux * ux + uy * uy
    t = 0.0 if den == 0.0 else max(0.0, min(1.0, ((px - ax) * ux + (py - ay) * uy) / den))
    return math.hypot(px - (ax + ux * t), py - (ay + uy * t))


def _node_contains_slow(node, p: Point) -> bool:
    shape = node.shape
    name = type(shape).__name__
    if name == "CircleNode":
        return math.hypot(p.x - shape.center.x, p.y - shape.center.y) <= shape.r
    if name == "StripNode":
        return _seg_dist(p.x, p.y, shape.a.x, shape.a.y,
                         shape.b.x, shape.b.y) <= shape.halfwidth
    return _crossings_contains(_shape_loops(shape.shape), p.x, p.y)


def oracle_hit(scene: Scene, p: Point):
    """Exhaustive scene-level resolution: (kind, ...) tuple or None.

    Scans topmost-first, testing every node of every cover independently;
    transparent first-hits pass to the element beneath, control interiors
    belong to the control, group frames come last.
    """
    from .cover import build_cover
    for el in sorted(scene.elements, key=lambda e: e.z, reverse=True):
        cover = build_cover(el, scene.config.cover_params, scene.element)
        hit_idx = None
        for idx, node in enumerate(cover.nodes):
            if _node_contains_slow(node, p):
                hit_idx = idx
                break
        if hit_idx is None:
            if isinstance(el, ControlEl) and el.rect.contains_point(p):
                return ("control", el.id)
            continue
        if isinstance(cover.nodes[hit_idx].action, Transparent):
            continue
        return ("element", el.id, hit_idx)
    for group in reversed(scene.groups):
        if group.frame.contains_point(p):
            return ("group", group.id)
    return None


def near_any_boundary(scene: Scene, p: Point, band: float = HIT_BAND) -> bool:
    """Within `band` px of any decision boundary the hit scan consults."""
    from .cover import build_cover
    for el in scene.elements:
        cover = build_cover(el, scene.config.cover_params, scene.element)
        for node in cover.nodes:
            if node_boundary_distance(node, p) <= band:
                return True
        if isinstance(el, ControlEl):
            if _rect_border_dist(el.rect, p) <= band:
                return True
    for group in scene.groups:
        if _rect_border_dist(group.frame, p) <= band:
            return True
    return False


def _rect_border_dist(rect: Rect, p: Point) -> float:
    return min(
        _seg_dist(p.x, p.y, rect.min.x, rect.min.y, rect.max.x, rect.min.y),
        _seg_dist(p.x, p.y, rect.max.x, rect.min.y, rect.max.x, rect.max.y),
        _seg_dist(p.x, p.y, rect.max.x, rect.max.y, rect.min.x, rect.max.y),
        _seg_dist(p.x, p.y, rect.min.x, rect.max.y, rect.min.x, rect.min.y),
    )


def engine_hit_tuple(engine: Engine, p: Point):
    from .engine import ControlHit, ElementHit, GroupHit
    hit = engine.hit_test(p)
    if hit is None:
        return None
    if isinstance(hit, ElementHit):
        return ("element", hit.element.id, hit.node_index)
    if isinstance(hit, ControlHit):
        return ("control", hit.element.id)
    assert isinstance(hit, GroupHit)
    return ("group", hit.group.id)


# --- generators --------------------------------------------------------------

def _random_simple_polygon(rng: random.Random, cx, cy, r_lo=15.0, r_hi=55.0):
    n = rng.randint(3, 8)
    angles = []
    a = rng.uniform(0, 2 * math.pi)
    for _ in range(n):
        a += rng.uniform(0.35, 2 * math.pi / n + 0.6)
        angles.append(a)
    span = angles[-1] - angles[0]
    angles = [angles[0] + (x - angles[0]) * min(1.0, (2 * math.pi - 0.3) / span)
              for x in angles]
    pts = [Point(cx + rng.uniform(r_lo, r_hi) * math.cos(t),
                 cy + rng.uniform(r_lo, r_hi) * math.sin(t)) for t in angles]
    return ShapeGeom(polygon_contour(pts))


def _random_shares(rng: random.Random, n: int) -> tuple[float, ...]:
    weights = [rng.uniform(0.2, 1.0) for _ in range(n)]
    total = sum(weights)
    budget = 360.0 - n  # every share gets its guaranteed 1 degree first
    shares = [1.0 + w / total * budget for w in weights]
    shares[-1] = 360.0 - sum(shares[:-1])
    return tuple(shares)


def random_scene(rng: random.Random, n_elements: int = 12,
                 canvas: tuple[float, float] = (1200.0, 900.0),
                 with_groups: bool = True) -> Scene:
    scene = Scene()
    w, h = canvas
    next_id = 1
    labyrinth_ids: list[int] = []
    path_ids: list[int] = []
    for _ in range(n_elements):
        cx = rng.uniform(80, w - 80)
        cy = rng.uniform(80, h - 80)
        kind = rng.choices(
            ["polygon", "circle", "pie", "control", "comment", "plot", "path",
             "labyrinth", "spot"],
            weights=[20, 15, 15, 15, 10, 10, 5, 5, 5],
        )[0]
        eid = next_id
        next_id += 1
        if kind == "polygon":
            scene.add(PolygonEl(id=eid, geom=_random_simple_polygon(rng, cx, cy)))
        elif kind == "circle":
            scene.add(CircleEl(id=eid, center=Point(cx, cy), r=rng.uniform(8, 50)))
        elif kind == "pie":
            inner = rng.choice([0.0, rng.uniform(5, 20)])
            outer = rng.uniform(max(25.0, inner + 5), 55)
            scene.add(PieEl(id=eid, center=Point(cx, cy), outer_r=outer,
                            inner_r=inner, start_deg=rng.uniform(0, 360),
                            shares=_random_shares(rng, rng.randint(1, 6))))
        elif kind == "control":
            bw, bh = rng.uniform(30, 140), rng.uniform(16, 60)
            scene.add(ControlEl(id=eid, rect=Rect(Point(cx, cy), Point(cx + bw, cy + bh)),
                                tag=f"b{eid}"))
        elif kind == "comment":
            scene.add(CommentEl(id=eid, anchor=Point(cx, cy),
                                angle=rng.uniform(0, 2 * math.pi),
                                text=f"note {eid}"))
        elif kind == "plot":
            pw, ph = rng.uniform(80, 220), rng.uniform(60, 160)
            area = PlotAreaEl(id=eid, rect=Rect(Point(cx, cy), Point(cx + pw, cy + ph)),
                              world=WorldRect(xmin=-1, xmax=1, ymin=-1, ymax=1))
            scene.add(area)
            if rng.random() < 0.6:
                scale = ScaleEl(id=next_id, attached_to=eid,
                                edge=rng.choice(["left", "bottom"]),
                                offset=rng.uniform(4, 14))
                next_id += 1
                scene.add(scale)
        elif kind == "path":
            pts = [Point(cx, cy)]
            for _ in range(rng.randint(1, 5)):
                pts.append(Point(pts[-1].x + rng.uniform(-120, 120),
                                 pts[-1].y + rng.uniform(-120, 120)))
            pts = [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]
            if len(pts) < 2:
                pts.append(Point(cx + 40, cy))
            el = PathEl(id=eid, pts=tuple(pts))
            scene.add(el)
            path_ids.append(eid)
        elif kind == "labyrinth":
            walls = []
            for _ in range(rng.randint(2, 6)):
                ax, ay = cx + rng.uniform(-90, 90), cy + rng.uniform(-90, 90)
                bx, by = ax + rng.uniform(-80, 80), ay + rng.uniform(-80, 80)
                if (ax, ay) != (bx, by):
                    walls.append(Wall(Point(ax, ay), Point(bx, by)))
            if not walls:
                walls = [Wall(Point(cx, cy), Point(cx + 60, cy))]
            el = LabyrinthEl(id=eid, walls=tuple(walls), thickness=rng.uniform(2, 5))
            scene.add(el)
            labyrinth_ids.append(eid)
        else:  # spot
            r = rng.uniform(4, 10)
            mode, target = "free", None
            if path_ids and rng.random() < 0.4:
                mode, target = "path", rng.choice(path_ids)
                target_el = scene.element(target)
                cx, cy = target_el.pts[0].x, target_el.pts[0].y
            elif labyrinth_ids and rng.random() < 0.4:
                lab = scene.element(rng.choice(labyrinth_ids))
                clear = r + lab.thickness / 2.0
                spot_p = _free_point_near(rng, lab, clear, canvas)
                if spot_p is not None:
                    mode, target = "maze", lab.id
                    cx, cy = spot_p
            scene.add(SpotEl(id=eid, center=Point(cx, cy), r=r, mode=mode,
                             target_id=target))

    if with_groups and len(scene.elements) >= 4 and rng.random() < 0.7:
        free = [el.id for el in scene.elements
                if not isinstance(el, ScaleEl) and scene.group_of(el.id) is None]
        rng.shuffle(free)
        size = min(len(free), rng.randint(2, 3))
        if size >= 2:
            scene.add_group(free[:size])
    return scene


def _free_point_near(rng, lab: LabyrinthEl, clear: float, canvas):
    for _ in range(60):
        x = rng.uniform(20, canvas[0] - 20)
        y = rng.uniform(20, canvas[1] - 20)
        if all(_seg_dist(x, y, w.a.x, w.a.y, w.b.x, w.b.y) >= clear + 0.5
               for w in lab.walls):
            return (x, y)
    return None


@dataclass
class Gesture:
    events: list[PointerEvent] = field(default_factory=list)


def random_gestures(rng: random.Random, scene: Scene, n: int = 8,
                    canvas: tuple[float, float] = (1200.0, 900.0)) -> list[Gesture]:
    gestures = []
    w, h = canvas
    element_ids = [el.id for el in scene.elements]
    for _ in range(n):
        g = Gesture()
        style = rng.random()
        if style < 0.08 or not element_ids:
            # stray hover or empty-space press
            p = Point(rng.uniform(-50, w + 50), rng.uniform(-50, h + 50))
            if rng.random() < 0.5:
                g.events = [Move(p)]
            else:
                g.events = [Press(rng.choice("LR"), p), Release()]
            gestures.append(g)
            continue
        el = scene.element(rng.choice(element_ids))
        grab = _grab_point(rng, scene, el)
        button = "R" if rng.random() < 0.15 else "L"
        g.events.append(Press(button, grab))
        for _ in range(rng.randint(1, 6)):
            g.events.append(Move(Point(grab.x + rng.uniform(-200, 200),
                                       grab.y + rng.uniform(-200, 200))))
        g.events.append(Release())
        gestures.append(g)
    return gestures


def _grab_point(rng: random.Random, scene: Scene, el) -> Point:
    b = bbox_of(el, scene.element)
    style = rng.random()
    if isinstance(el, PieEl) and style < 0.35:
        return rng.choice(divider_points(el))  # divider handle
    if isinstance(el, PolygonEl) and style < 0.35:
        return rng.choice(el.geom.outer.vertices)  # vertex handle
    if isinstance(el, PathEl) and style < 0.5:
        return rng.choice(el.pts)
    if style < 0.6:  # somewhere near the border
        t = rng.random()
        if rng.random() < 0.5:
            x = b.min.x + t * b.width
            y = rng.choice([b.min.y, b.max.y])
        else:
            x = rng.choice([b.min.x, b.max.x])
            y = b.min.y + t * b.height
        return Point(x + rng.uniform(-2, 2), y + rng.uniform(-2, 2))
    return Point(rng.uniform(b.min.x, b.max.x), rng.uniform(b.min.y, b.max.y))


def flatten_gestures(gestures: list[Gesture]) -> list[PointerEvent]:
    return [ev for g in gestures for ev in g.events]


# --- checks -------------------------------------------------------------------

def check_scene(scene: Scene, spot_ids: Optional[set[int]] = None) -> Optional[str]:
    """First broken invariant, or None.  Frames, z, pies, spots.

    Spot checks apply to `spot_ids` only (or every spot when None): a wall
    dragged onto a resting spot legitimately pinches it until the spot's
    next move, so spot safety is only asserted while the spot itself moves.
    """
    for i, el in enumerate(scene.elements):
        if el.z != i:
            return f"element {el.id}: z={el.z} at position {i}"
    for g in scene.groups:
        fresh = scene.recompute_frame(g)
        if fresh != g.frame:
            return (f"group {g.id}: stored frame {g.frame} != recomputed {fresh}")
    for el in scene.elements:
        if isinstance(el, PieEl):
            if abs(sum(el.shares) - 360.0) > 1e-9:
                return f"element {el.id}: shares sum {sum(el.shares)!r}"
            if any(s < 1.0 - 1e-9 for s in el.shares):
                return f"element {el.id}: share below 1 degree"
        if not isinstance(el, SpotEl) or el.target_id is None:
            continue
        if spot_ids is not None and el.id not in spot_ids:
            continue
        if el.mode == "maze":
            lab = scene.element(el.target_id)
            clear = el.r + lab.thickness / 2.0 - 0.1
            for wall in lab.walls:
                d = _seg_dist(el.center.x, el.center.y,
                              wall.a.x, wall.a.y, wall.b.x, wall.b.y)
                if d < clear - 1e-9:
                    return (f"element {el.id}: maze spot clearance {d} < {clear}")
        elif el.mode == "path":
            path = scene.element(el.target_id)
            d = min(_seg_dist(el.center.x, el.center.y, a.x, a.y, b.x, b.y)
                    for a, b in zip(path.pts, path.pts[1:]))
            if d > 1e-9:
                return f"element {el.id}: path spot {d} px off its path"
    return None


def run_case(scene: Scene, gestures: list[Gesture],
             compare_hits: bool = True) -> Optional[str]:
    """Replay gestures over a copy of the scene, checking every oracle.

    Returns the first failure description, or None when the case is clean.
    """
    work = copy_scene(scene)
    session = Session(work)
    for g_idx, gesture in enumerate(gestures):
        for event in gesture.events:
            if isinstance(event, Press) and compare_hits:
                if not near_any_boundary(work, event.p):
                    got = engine_hit_tuple(session.engine, event.p)
                    want = oracle_hit(work, event.p)
                    if got != want:
                        return (f"gesture {g_idx}: hit mismatch at "
                                f"({event.p.x}, {event.p.y}): engine {got}, "
                                f"oracle {want}")
            try:
                session.apply(event)
            except RuntimeError as exc:
                return f"gesture {g_idx}: engine error {exc}"
            dragged_spots: set[int] = set()
            drag = session.engine.drag
            if drag and drag.element_id is not None:
                if isinstance(work.element(drag.element_id), SpotEl):
                    dragged_spots.add(drag.element_id)
            problem = check_scene(work, dragged_spots)
            if problem:
                return f"gesture {g_idx}: {problem}"
    return None


# --- minimization ---------------------------------------------------------------

def minimize_gestures(scene: Scene, gestures: list[Gesture],
                      failer: Callable[[list[Gesture]], Optional[str]]) -> list[Gesture]:
    """Shrink a failing gesture list while it keeps failing.

    Bisect to the shortest failing prefix, then greedily drop whole
    gestures, then thin move events inside the survivors.
    """
    # shortest failing prefix
    lo, hi = 1, len(gestures)
    while lo < hi:
        mid = (lo + hi) // 2
        if failer(gestures[:mid]):
            hi = mid
        else:
            lo = mid + 1
    best = gestures[:lo]

    changed = True
    while changed:
        changed = False
        for i in range(len(best) - 1, -1, -1):
            trial = best[:i] + best[i + 1:]
            if trial and failer(trial):
                best = trial
                changed = True

    for i, g in enumerate(best):
        moves = [e for e in g.events if isinstance(e, Move)]
        if len(moves) <= 1:
            continue
        press = [e for e in g.events if isinstance(e, Press)]
        release = [e for e in g.events if isinstance(e, Release)]
        for keep in (1, 2):
            trial_g = Gesture(press + moves[-keep:] + release)
            trial = best[:i] + [trial_g] + best[i + 1:]
            if failer(trial):
                best = trial
                break
    return best


@dataclass
class FuzzFailure:
    iteration: int
    message: str
    scene_doc: bytes
    events_text: str


def run_fuzz(seed: int, iterations: int,
             n_elements: int = 14, gestures_per_case: int = 8,
             progress: Callable[[int], None] | None = None) -> Optional[FuzzFailure]:
    """Random scenes vs random logs until a failure or the budget runs out."""
    from .engine import format_events
    for i in range(iterations):
        rng = random.Random(seed * 1_000_003 + i)
        scene = random_scene(rng, n_elements=n_elements)
        gestures = random_gestures(rng, scene, n=gestures_per_case)
        message = run_case(scene, gestures)
        if message is not None:
            def failer(trial: list[Gesture]) -> Optional[str]:
                return run_case(scene, trial)
            minimal = minimize_gestures(scene, gestures, failer)
            final_message = run_case(scene, minimal) or message
            return FuzzFailure(
                iteration=i,
                message=final_message,
                scene_doc=save_scene(scene),
                events_text=format_events(flatten_gestures(minimal)),
            )
        if progress:
            progress(i)
    return None
