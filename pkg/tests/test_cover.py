import math
import random

import pytest

from movekit.geometry import Point, Rect, ShapeGeom, polygon_contour
from movekit.elements import (
    CircleEl,
    CommentEl,
    ControlEl,
    PathEl,
    PieEl,
    PlotAreaEl,
    PolygonEl,
    SpotEl,
    WorldRect,
    LabyrinthEl,
    Wall,
)
from movekit.cover import (
    CircleNode,
    Cover,
    CoverParams,
    Divider,
    Move,
    PathConstrained,
    PolygonNode,
    ResizeBorder,
    StripNode,
    Transparent,
    Vertex,
    build_cover,
    node_boundary_distance,
    resolve_hit,
)

import oracles

PARAMS = CoverParams()


def pentagon(id=1, cx=0.0, cy=0.0, r=40.0):
    pts = [
        Point(cx + r * math.cos(2 * math.pi * k / 5),
              cy + r * math.sin(2 * math.pi * k / 5))
        for k in range(5)
    ]
    return PolygonEl(id=id, geom=ShapeGeom(polygon_contour(pts)))


class TestBuildCover:
    def test_control_cover_layout(self):
        el = ControlEl(id=1, rect=Rect(Point(0, 0), Point(100, 40)), tag="b")
        cover = build_cover(el, PARAMS)
        circles = [n for n in cover.nodes if isinstance(n.shape, CircleNode)]
        strips = [n for n in cover.nodes if isinstance(n.shape, StripNode)]
        polys = [n for n in cover.nodes if isinstance(n.shape, PolygonNode)]
        assert len(circles) == 4 and all(isinstance(n.action, Move) for n in circles)
        assert len(strips) == 4
        assert sorted(n.action.border_id for n in strips) == [0, 1, 2, 3]
        assert polys == []  # interior clicks must reach the control

    def test_pentagon_cover_layout(self):
        cover = build_cover(pentagon(), PARAMS)
        vertices = [n for n in cover.nodes if isinstance(n.action, Vertex)]
        strips = [n for n in cover.nodes if isinstance(n.action, ResizeBorder)]
        interiors = [n for n in cover.nodes if isinstance(n.action, Move)]
        assert [n.action.index for n in vertices] == [0, 1, 2, 3, 4]
        assert sorted({n.action.border_id for n in strips}) == [0, 1, 2, 3, 4]
        assert len(strips) == 5  # straight edges: one strip each
        assert len(interiors) == 1 and isinstance(interiors[0].shape, PolygonNode)
        # priority: vertices before strips before interior
        kinds = [type(n.action).__name__ for n in cover.nodes]
        assert kinds == ["Vertex"] * 5 + ["ResizeBorder"] * 5 + ["Move"]

    def test_pie_cover_layout(self):
        el = PieEl(id=1, center=Point(0, 0), outer_r=50.0,
                   shares=(120.0, 120.0, 120.0))
        cover = build_cover(el, PARAMS)
        dividers = [n for n in cover.nodes if isinstance(n.action, Divider)]
        strips = [n for n in cover.nodes if isinstance(n.action, ResizeBorder)]
        assert [n.action.index for n in dividers] == [0, 1, 2]
        # divider handles sit on the outer circle
        for n in dividers:
            d = math.hypot(n.shape.center.x, n.shape.center.y)
            assert d == pytest.approx(50.0)
        assert {n.action.border_id for n in strips} == {0}
        assert isinstance(cover.nodes[-1].action, Move)

    def test_ring_inner_border_is_resizable(self):
        el = PieEl(id=1, center=Point(0, 0), outer_r=50.0, inner_r=20.0,
                   shares=(180.0, 180.0))
        cover = build_cover(el, PARAMS)
        ids = {n.action.border_id for n in cover.nodes
               if isinstance(n.action, ResizeBorder)}
        assert ids == {0, 1}

    def test_polygon_hole_border_is_transparent(self):
        geom = ShapeGeom(
            polygon_contour([Point(0, 0), Point(100, 0), Point(100, 100), Point(0, 100)]),
            (polygon_contour([Point(40, 40), Point(60, 40), Point(60, 60), Point(40, 60)]),),
        )
        cover = build_cover(PolygonEl(id=1, geom=geom), PARAMS)
        assert any(isinstance(n.action, Transparent) for n in cover.nodes)

    def test_spot_modes(self):
        free = SpotEl(id=1, center=Point(0, 0), r=6.0)
        cover = build_cover(free, PARAMS)
        assert len(cover.nodes) == 1 and isinstance(cover.nodes[0].action, Move)
        path = SpotEl(id=1, center=Point(0, 0), r=6.0, mode="path", target_id=9)
        cover = build_cover(path, PARAMS)
        assert isinstance(cover.nodes[0].action, PathConstrained)

    def test_labyrinth_and_path_covers(self):
        lab = LabyrinthEl(id=1, walls=(Wall(Point(0, 0), Point(50, 0)),), thickness=4.0)
        cover = build_cover(lab, PARAMS)
        assert [type(n.action).__name__ for n in cover.nodes] == ["Vertex", "Vertex", "Move"]
        assert cover.nodes[2].shape.halfwidth == 3.0  # max(3, 4/2)
        path = PathEl(id=2, pts=(Point(0, 0), Point(50, 0), Point(50, 50)))
        cover = build_cover(path, PARAMS)
        assert [type(n.action).__name__ for n in cover.nodes] == \
            ["Vertex", "Vertex", "Vertex", "Move", "Move"]


class TestResolveHit:
    def test_vertex_beats_interior(self):
        el = pentagon()
        cover = build_cover(el, PARAMS)
        v0 = el.geom.outer.vertices[0]
        idx = resolve_hit(cover, v0)
        assert isinstance(cover.nodes[idx].action, Vertex)
        assert cover.nodes[idx].action.index == 0

    def test_centroid_is_move(self):
        cover = build_cover(pentagon(), PARAMS)
        idx = resolve_hit(cover, Point(0, 0))
        assert isinstance(cover.nodes[idx].action, Move)

    def test_outside_is_none(self):
        cover = build_cover(pentagon(), PARAMS)
        assert resolve_hit(cover, Point(500, 500)) is None

    def test_priority_no_earlier_node_contains(self):
        rng = random.Random(21)
        covers = [
            build_cover(pentagon(), PARAMS),
            build_cover(CircleEl(id=2, center=Point(10, -5), r=30), PARAMS),
            build_cover(PieEl(id=3, center=Point(0, 0), outer_r=45, inner_r=12,
                              shares=(90.0, 30.0, 240.0)), PARAMS),
        ]
        for cover in covers:
            for _ in range(2000):
                p = Point(rng.uniform(-60, 60), rng.uniform(-60, 60))
                k = resolve_hit(cover, p)
                if k is None:
                    continue
                for j in range(k):
                    assert not oracles.node_contains_oracle(cover.nodes[j], p.x, p.y) \
                        or oracles.node_boundary_dist_oracle(cover.nodes[j], p.x, p.y) <= 0.25

    def test_agrees_with_exhaustive_oracle(self):
        rng = random.Random(31)
        elements = [
            pentagon(),
            CircleEl(id=2, center=Point(5, 5), r=25),
            PieEl(id=3, center=Point(-10, 0), outer_r=40, inner_r=15,
                  shares=(60.0, 120.0, 180.0)),
            ControlEl(id=4, rect=Rect(Point(-30, -30), Point(50, 10)), tag="x"),
            CommentEl(id=5, anchor=Point(0, 20), angle=0.7, text="note"),
        ]
        for el in elements:
            cover = build_cover(el, PARAMS)
            for _ in range(3000):
                p = Point(rng.uniform(-70, 70), rng.uniform(-70, 70))
                near = any(
                    oracles.node_boundary_dist_oracle(n, p.x, p.y) <= 0.25
                    for n in cover.nodes
                )
                if near:
                    continue
                assert resolve_hit(cover, p) == oracles.resolve_hit_oracle(cover, p.x, p.y)

    def test_completeness_inside_graphical_elements(self):
        rng = random.Random(41)
        el = pentagon()
        cover = build_cover(el, PARAMS)
        loops = oracles.shape_loops_fine(el.geom)
        hits = 0
        for _ in range(5000):
            p = Point(rng.uniform(-45, 45), rng.uniform(-45, 45))
            if not oracles.ray_cast_contains(loops, p.x, p.y):
                continue
            hits += 1
            assert resolve_hit(cover, p) is not None
        assert hits > 500

    def test_border_midpoints_never_resolve_to_move(self):
        elements = [
            pentagon(),
            CircleEl(id=2, center=Point(0, 0), r=30),
            PieEl(id=3, center=Point(0, 0), outer_r=40, inner_r=15,
                  shares=(90.0, 90.0, 180.0)),
            ControlEl(id=4, rect=Rect(Point(0, 0), Point(100, 40)), tag="x"),
            PlotAreaEl(id=5, rect=Rect(Point(0, 0), Point(200, 120)),
                       world=WorldRect(xmin=0, xmax=1, ymin=0, ymax=1)),
        ]
        from movekit.elements import outer_border_pieces
        from movekit.geometry import Line
        for el in elements:
            cover = build_cover(el, PARAMS)
            for piece in outer_border_pieces(el):
                if isinstance(piece, Line):
                    mid = Point((piece.a.x + piece.b.x) / 2, (piece.a.y + piece.b.y) / 2)
                else:
                    mid = piece.point_at(piece.start_angle + piece.sweep / 2)
                idx = resolve_hit(cover, mid)
                assert idx is not None
                assert not isinstance(cover.nodes[idx].action, Move) or \
                    isinstance(cover.nodes[idx].shape, CircleNode), \
                    f"{type(el).__name__} border midpoint fell through to interior Move"


class TestParams:
    def test_invalid_params_rejected(self):
        with pytest.raises(ValueError):
            CoverParams(strip_halfwidth=0.0)

    def test_boundary_distance_kinds(self):
        cover = build_cover(CircleEl(id=1, center=Point(0, 0), r=10), PARAMS)
        interior = cover.nodes[-1]
        assert node_boundary_distance(interior, Point(0, 0)) == pytest.approx(10.0)
