import math

import pytest

from movekit.geometry import Point, Rect, ShapeGeom, polygon_contour
from movekit.elements import (
    CircleEl,
    ControlEl,
    LabyrinthEl,
    PathEl,
    PolygonEl,
    SpotEl,
    Wall,
)
from movekit.scene import EngineConfig, Scene, save_scene
from movekit.engine import (
    Engine,
    EventFormatError,
    Move,
    Press,
    Release,
    ReplayError,
    format_events,
    parse_events,
    replay,
)


def poly_el(pts, id):
    return PolygonEl(id=id, geom=ShapeGeom(polygon_contour([Point(*p) for p in pts])))


def square_el(id, x0, y0, size=10.0):
    return poly_el([(x0, y0), (x0 + size, y0), (x0 + size, y0 + size), (x0, y0 + size)], id)


def drag(engine, points, button="L"):
    engine.on_press(button, Point(*points[0]))
    for p in points[1:]:
        engine.on_move(Point(*p))
    engine.on_release()


class TestEventFormat:
    def test_round_trip(self):
        events = [Press("L", Point(1.5, -2.25)), Move(Point(0.1, 1e-9)),
                  Release(), Press("R", Point(3, 4)), Release()]
        text = format_events(events)
        assert parse_events(text) == events
        # canonical text survives a second round trip byte-for-byte
        assert format_events(parse_events(text)) == text

    def test_comments_and_blank_lines_skipped(self):
        events = parse_events("# a comment\n\nP L 1.0 2.0\nR\n")
        assert events == [Press("L", Point(1, 2)), Release()]

    def test_malformed_line_reports_lineno(self):
        with pytest.raises(EventFormatError) as err:
            parse_events("P L 1.0 2.0\nM xyz 3\n")
        assert "line 2" in str(err.value)

    def test_wire_format_exact(self):
        assert format_events([Press("L", Point(10, 20))]) == "P L 10.0 20.0\n"
        assert format_events([Move(Point(0.5, -1))]) == "M 0.5 -1.0\n"
        assert format_events([Release()]) == "R\n"


class TestPressResolution:
    def test_topmost_wins_in_overlap(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0, 20))
        scene.add(square_el(2, 10, 10, 20))  # overlaps; higher z
        engine = Engine(scene)
        drag(engine, [(15, 15), (55, 15)])
        # element 2 moved, element 1 untouched
        assert scene.element(2).geom.outer.vertices[0] == Point(50, 10)
        assert scene.element(1).geom.outer.vertices[0] == Point(0, 0)

    def test_press_on_empty_space_is_noop(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0))
        before = save_scene(scene)
        engine = Engine(scene)
        drag(engine, [(500, 500), (600, 600)])
        assert save_scene(scene) == before

    def test_grab_offset_preserved(self):
        # grab 20px inside the corner (clear of the vertex/border handles)
        scene = Scene()
        scene.add(square_el(1, 0, 0, 100))
        engine = Engine(scene)
        engine.on_press("L", Point(20, 20))
        engine.on_move(Point(120, 70))
        assert scene.element(1).geom.outer.vertices[0] == Point(100, 50)
        engine.on_release()

    def test_grab_stability_during_drag(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0))
        engine = Engine(scene)
        engine.on_press("L", Point(3.3, 4.7))
        offset0 = (0 - 3.3, 0 - 4.7)
        x, y = 3.3, 4.7
        for k in range(50):
            x += 1.618 * (k % 7 - 3)
            y += 2.718 * (k % 5 - 2)
            engine.on_move(Point(x, y))
            v0 = scene.element(1).geom.outer.vertices[0]
            assert abs((v0.x - x) - offset0[0]) <= 1e-12
            assert abs((v0.y - y) - offset0[1]) <= 1e-12
        engine.on_release()

    def test_transparent_hole_border_passes_beneath(self):
        below = square_el(1, 0, 0, 100)
        holed = PolygonEl(id=2, geom=ShapeGeom(
            polygon_contour([Point(0, 0), Point(100, 0), Point(100, 100), Point(0, 100)]),
            (polygon_contour([Point(40, 40), Point(60, 40), Point(60, 60), Point(40, 60)]),),
        ))
        scene = Scene()
        scene.add(below)
        scene.add(holed)
        engine = Engine(scene)
        # dead center of the hole: inside element 1 only
        hit = engine.hit_test(Point(50, 50))
        assert hit.element.id == 1
        # exactly on the hole border: transparent, passes beneath too
        hit = engine.hit_test(Point(40, 50))
        assert hit.element.id == 1


class TestRotationDrag:
    def test_quarter_turn_by_cursor_angles(self):
        scene = Scene()
        scene.add(poly_el([(0, 0), (40, 0), (40, 20), (0, 20)], 1))
        engine = Engine(scene)
        pivot = Point(20, 10)  # bbox center, fixed at press time
        engine.on_press("R", Point(pivot.x + 10, pivot.y))  # angle 0, inside
        engine.on_move(Point(pivot.x, pivot.y + 10))        # angle pi/2
        engine.on_release()
        v = scene.element(1).geom.outer.vertices
        # (0,0) about (20,10) by +pi/2 -> (30, -10)
        assert v[0].x == pytest.approx(30.0, abs=1e-9)
        assert v[0].y == pytest.approx(-10.0, abs=1e-9)

    def test_incremental_angles_accumulate(self):
        scene = Scene()
        scene.add(poly_el([(0, 0), (40, 0), (0, 40)], 1))
        engine = Engine(scene)
        pivot = Point(20, 20)  # bbox center
        start = Point(10, 10)  # strictly inside the triangle
        engine.on_press("R", start)
        ang0 = math.atan2(start.y - pivot.y, start.x - pivot.x)
        steps = 48
        for k in range(1, steps + 1):
            ang = ang0 + 2 * math.pi * k / steps
            engine.on_move(Point(pivot.x + 50 * math.cos(ang),
                                 pivot.y + 50 * math.sin(ang)))
            if k == steps // 2:  # half turn: (0,0) about (20,20) -> (40,40)
                v0 = scene.element(1).geom.outer.vertices[0]
                assert v0.x == pytest.approx(40.0, abs=1e-6)
                assert v0.y == pytest.approx(40.0, abs=1e-6)
        engine.on_release()
        v = scene.element(1).geom.outer.vertices
        assert v[0].x == pytest.approx(0.0, abs=1e-6)
        assert v[0].y == pytest.approx(0.0, abs=1e-6)

    def test_right_press_on_control_does_nothing(self):
        scene = Scene()
        scene.add(ControlEl(id=1, rect=Rect(Point(0, 0), Point(100, 40)), tag="b"))
        engine = Engine(scene)
        before = save_scene(scene)
        engine.on_press("R", Point(50, 20))
        engine.on_release()
        assert engine.clicks == []
        assert save_scene(scene) == before


class TestControlClicks:
    def make(self):
        scene = Scene()
        scene.add(ControlEl(id=1, rect=Rect(Point(0, 0), Point(60, 30)), tag="7"))
        return scene, Engine(scene)

    def test_click_inside(self):
        scene, engine = self.make()
        engine.on_press("L", Point(30, 15))
        engine.on_release()
        assert engine.clicks == [(1, "7")]

    def test_press_move_out_release_is_no_click(self):
        scene, engine = self.make()
        engine.on_press("L", Point(30, 15))
        engine.on_move(Point(300, 15))
        engine.on_release()
        assert engine.clicks == []

    def test_release_without_drag_is_noop(self):
        scene, engine = self.make()
        before = save_scene(scene)
        engine.on_release()
        assert save_scene(scene) == before

    def test_border_press_does_not_click(self):
        scene, engine = self.make()
        engine.on_press("L", Point(60, 15))  # on the right border strip
        engine.on_release()
        assert engine.clicks == []


class TestZOrder:
    def test_raise_on_grab(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0, 30))
        scene.add(square_el(2, 100, 0, 30))
        scene.add(square_el(3, 200, 0, 30))
        engine = Engine(scene)
        engine.on_press("L", Point(115, 15))
        engine.on_release()
        assert [el.id for el in scene.elements] == [1, 3, 2]
        assert [el.z for el in scene.elements] == [0, 1, 2]
        engine.on_press("L", Point(15, 15))
        engine.on_release()
        # grabbed element topmost; the others keep their relative order
        assert [el.id for el in scene.elements] == [3, 2, 1]

    def test_raise_disabled(self):
        scene = Scene(EngineConfig(raise_on_grab=False))
        scene.add(square_el(1, 0, 0, 30))
        scene.add(square_el(2, 200, 0, 30))
        engine = Engine(scene)
        engine.on_press("L", Point(5, 5))
        engine.on_release()
        assert [el.id for el in scene.elements] == [1, 2]


class TestSpotDrags:
    def test_path_spot_projects_to_path(self):
        scene = Scene()
        scene.add(PathEl(id=1, pts=(Point(0, 0), Point(100, 0))))
        scene.add(SpotEl(id=2, center=Point(50, 0), r=6, mode="path", target_id=1))
        engine = Engine(scene)
        engine.on_press("L", Point(50, 0))
        engine.on_move(Point(80, 999))  # far off the way
        engine.on_release()
        spot = scene.element(2)
        assert spot.center == Point(80, 0)

    def test_maze_spot_stops_at_wall(self):
        scene = Scene()
        scene.add(LabyrinthEl(id=1, walls=(Wall(Point(-100, 50), Point(100, 50)),),
                              thickness=2.0))
        scene.add(SpotEl(id=2, center=Point(0, 0), r=5, mode="maze", target_id=1))
        engine = Engine(scene)
        engine.on_press("L", Point(0, 0))
        engine.on_move(Point(0, 200))
        engine.on_release()
        spot = scene.element(2)
        assert spot.center.y <= 44.0 + 1e-9  # 50 - (5 + 1)
        assert spot.center.y >= 43.9 - 1e-9


class TestReplay:
    def test_empty_log_is_identity(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0))
        out = replay(scene, [])
        assert save_scene(out) == save_scene(scene)

    def test_replay_twice_is_byte_identical(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0, 20))
        scene.add(CircleEl(id=2, center=Point(100, 100), r=15))
        events = parse_events(
            "P L 5.0 5.0\nM 25.0 5.0\nM 40.0 9.0\nR\n"
            "P R 100.0 90.0\nM 110.0 100.0\nR\n"
        )
        a = save_scene(replay(scene, events))
        b = save_scene(replay(scene, events))
        assert a == b

    def test_drag_square_by_twenty(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0))
        events = parse_events("P L 5.0 5.0\nM 25.0 5.0\nR\n")
        out = replay(scene, events)
        assert out.element(1).geom.outer.vertices[0] == Point(20, 0)
        # input scene untouched
        assert scene.element(1).geom.outer.vertices[0] == Point(0, 0)

    def test_double_press_is_an_error(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0))
        events = [Press("L", Point(5, 5)), Press("L", Point(6, 6))]
        with pytest.raises(ReplayError) as err:
            replay(scene, events)
        assert err.value.index == 1


class TestGroups:
    def make(self):
        scene = Scene()
        scene.add(square_el(1, 0, 0))
        scene.add(square_el(2, 20, 0))
        scene.add_group([1, 2], margin=6.0)
        return scene

    def test_frame_wraps_members(self):
        scene = self.make()
        f = scene.groups[0].frame
        assert (f.min, f.max) == (Point(-6, -6), Point(36, 16))

    def test_member_drag_moves_only_member_then_frame_rewraps(self):
        scene = self.make()
        engine = Engine(scene)
        drag(engine, [(5, 5), (5, 105)])
        assert scene.element(1).geom.outer.vertices[0] == Point(0, 100)
        assert scene.element(2).geom.outer.vertices[0] == Point(20, 0)
        f = scene.groups[0].frame
        assert f == scene.recompute_frame(scene.groups[0])
        assert f.max.y == 116.0

    def test_frame_band_drag_moves_whole_group(self):
        scene = self.make()
        engine = Engine(scene)
        drag(engine, [(15, 5), (25, 15)])  # between the squares, inside frame
        assert scene.element(1).geom.outer.vertices[0] == Point(10, 10)
        assert scene.element(2).geom.outer.vertices[0] == Point(30, 10)

    def test_group_rides_to_top_with_grabbed_member(self):
        scene = self.make()
        scene.add(square_el(3, 100, 100))
        engine = Engine(scene)
        engine.on_press("L", Point(5, 5))  # member 1
        engine.on_release()
        assert [el.id for el in scene.elements] == [3, 2, 1]
