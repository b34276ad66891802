"""Headless entry point: replay logs, validate scenes, fuzz, bench, serve.

Exit codes: 0 success, 1 invariant/oracle failure (a repro pair is written
for fuzz), 2 usage or IO errors.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from .engine import EventFormatError, ReplayError, parse_events
from .fuzz import random_scene, run_fuzz
from .geometry import Point
from .runtime import Session
from .scene import SceneLoadError, copy_scene, load_scene, save_scene, scene_to_svg


def _load_scene_file(path: str):
    try:
        return load_scene(Path(path).read_bytes())
    except OSError as exc:
        _die(f"cannot read scene {path!r}: {exc}", 2)
    except SceneLoadError as exc:
        _die(f"{type(exc).__name__}: {exc}", 1)


def _die(message: str, code: int):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(code)


def cmd_replay(args) -> int:
    scene = _load_scene_file(args.scene)
    try:
        events = parse_events(Path(args.events).read_text(encoding="utf-8"))
    except OSError as exc:
        _die(f"cannot read events {args.events!r}: {exc}", 2)
    except EventFormatError as exc:
        _die(str(exc), 2)
    work = copy_scene(scene)
    session = Session(work)
    try:
        session.apply_all(events)
    except ReplayError as exc:
        _die(str(exc), 1)
    Path(args.out).write_bytes(save_scene(work))
    if args.svg:
        Path(args.svg).write_text(scene_to_svg(work), encoding="utf-8")
    print(f"replayed {len(events)} events -> {args.out}")
    return 0


def cmd_validate(args) -> int:
    try:
        scene = load_scene(Path(args.scene).read_bytes())
    except OSError as exc:
        _die(f"cannot read scene {args.scene!r}: {exc}", 2)
    except SceneLoadError as exc:
        print(f"{type(exc).__name__}: {exc}")
        return 1
    problems = scene.validate()
    if problems:
        for p in problems:
            print(p)
        return 1
    print(f"{args.scene}: OK ({len(scene.elements)} elements, "
          f"{len(scene.groups)} groups, {len(scene.views)} views)")
    return 0


def cmd_fuzz(args) -> int:
    print(f"fuzz seed={args.seed} iterations={args.iterations}")
    failure = run_fuzz(args.seed, args.iterations)
    if failure is None:
        print(f"ok: {args.iterations} iterations clean")
        return 0
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scene_path = out_dir / "fuzz_fail.scene.json"
    events_path = out_dir / "fuzz_fail.evt"
    scene_path.write_bytes(failure.scene_doc)
    events_path.write_text(failure.events_text, encoding="utf-8")
    print(f"FAIL at iteration {failure.iteration}: {failure.message}")
    print(f"repro: movekit replay --scene {scene_path} --events {events_path} "
          "--out /tmp/out.scene.json")
    return 1


def cmd_bench(args) -> int:
    sizes = sorted({s for s in (10, 100, 1000) if s < args.elements} | {args.elements})
    if not args.report:
        sizes = [args.elements]
    rows = []
    for n in sizes:
        events_per_sec, seconds = _bench_one(n, args.events, seed=args.seed)
        rows.append((n, args.events, seconds, events_per_sec))
        print(f"elements={n} events={args.events} "
              f"elapsed={seconds:.3f}s hit_resolution={events_per_sec:,.0f}/s")
    if args.report:
        _write_bench_report(Path(args.report), rows)
    return 0


def _bench_one(n_elements: int, n_events: int, seed: int = 1):
    from .engine import Engine
    rng = random.Random(seed)
    scene = random_scene(rng, n_elements=n_elements,
                         canvas=(4000.0, 3000.0), with_groups=False)
    engine = Engine(scene)
    points = [Point(rng.uniform(0, 4000), rng.uniform(0, 3000))
              for _ in range(n_events)]
    engine.hit_test(points[0])  # build the index outside the timed region
    start = time.perf_counter()
    for p in points:
        engine.hit_test(p)
    elapsed = time.perf_counter() - start
    return (n_events / elapsed if elapsed > 0 else float("inf")), elapsed


def _write_bench_report(report_dir: Path, rows) -> None:
    report_dir.mkdir(parents=True, exist_ok=True)
    csv_path = report_dir / "bench.csv"
    lines = ["elements,events,seconds,events_per_sec"]
    for n, m, secs, rate in rows:
        lines.append(f"{n},{m},{secs!r},{rate!r}")
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [r[0] for r in rows]
    rates = [r[3] for r in rows]
    ax.plot(ns, rates, marker="o")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("elements in scene")
    ax.set_ylabel("hit resolutions / s")
    ax.set_title("hit-resolution throughput")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    png_path = report_dir / "bench.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    print(f"report: {csv_path} {png_path}")


def cmd_demo(args) -> int:
    from .apps import (build_analyser_demo, build_calculator_scene,
                       build_labyrinth_demo, build_path_demo)
    if args.name == "calculator":
        scene, _ = build_calculator_scene()
    elif args.name == "analyser":
        scene = build_analyser_demo()
    elif args.name == "labyrinth":
        scene = build_labyrinth_demo()
    else:
        scene = build_path_demo()
    Path(args.out).write_bytes(save_scene(scene))
    print(f"wrote {args.name} demo -> {args.out}")
    return 0


def cmd_bridge(args) -> int:
    from .bridge import serve_stdio
    scene = _load_scene_file(args.scene) if args.scene else None
    serve_stdio(scene)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="movekit",
        description="Deterministic direct-manipulation scene engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="replay an event log against a scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--events", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", help="also write an SVG snapshot of the result")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("validate", help="check every scene invariant")
    p.add_argument("scene")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fuzz", help="random scenes and logs vs the oracles")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("bench", help="hit-resolution throughput")
    p.add_argument("--elements", type=int, default=1000)
    p.add_argument("--events", type=int, default=20000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--report", help="directory for bench.csv and bench.png")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("demo", help="write a demo scene document")
    p.add_argument("name", choices=["calculator", "analyser", "labyrinth", "path"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bridge", help="serve the UI bridge on stdin/stdout")
    p.add_argument("--scene", help="initial scene document")
    p.set_defaults(func=cmd_bridge)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
