"""Byte-stream bridge: the protocol a UI speaks to drive the engine.

Frames are UTF-8 JSON texts, length-prefixed with the decimal byte count
and a newline:

    <payload byte length>\n<payload>

Requests:  {"type": "event", "line": "P L 1.0 2.0"}
           {"type": "scene_request"}
           {"type": "load_scene", "doc": {...}}
           {"type": "save_view" | "apply_view", "name": "..."}
           {"type": "export_log"}
           {"type": "shutdown"}
Replies:   {"type": "scene", "doc": {...}, "clicks": [[id, tag], ...]}
           {"type": "log", "lines": [...]}
           {"type": "error", "message": "..."}
           {"type": "bye"}
"""

from __future__ import annotations

import json
import sys
from typing import BinaryIO, Optional

from .engine import format_event
from .runtime import Session
from .scene import Scene, SceneLoadError, UnknownViewError, scene_from_document


def write_frame(stream: BinaryIO, message: dict) -> None:
    payload = json.dumps(message, ensure_ascii=False, allow_nan=False).encode("utf-8")
    stream.write(str(len(payload)).encode("ascii") + b"\n" + payload)
    stream.flush()


def read_frame(stream: BinaryIO) -> Optional[dict]:
    header = b""
    while True:
        ch = stream.read(1)
        if not ch:
            return None  # EOF
        if ch == b"\n":
            break
        header += ch
    length = int(header)
    payload = b""
    while len(payload) < length:
        chunk = stream.read(length - len(payload))
        if not chunk:
            return None
        payload += chunk
    return json.loads(payload.decode("utf-8"))


class BridgeServer:
    def __init__(self, scene: Scene | None = None):
        self.session = Session(scene if scene is not None else Scene())

    def _scene_reply(self) -> dict:
        clicks = [[cid, tag] for cid, tag in self.session.engine.clicks]
        self.session.engine.clicks.clear()
        return {"type": "scene", "doc": self.session.scene.to_document(),
                "clicks": clicks}

    def handle(self, message: dict) -> dict:
        kind = message.get("type")
        try:
            if kind == "event":
                self.session.apply_line(message["line"])
                return self._scene_reply()
            if kind == "scene_request":
                return self._scene_reply()
            if kind == "load_scene":
                scene = scene_from_document(message["doc"])
                self.session = Session(scene)
                return self._scene_reply()
            if kind == "save_view":
                self.session.scene.capture_view(message["name"])
                return self._scene_reply()
            if kind == "apply_view":
                self.session.scene.apply_view(message["name"])
                return self._scene_reply()
            if kind == "export_log":
                return {"type": "log",
                        "lines": [format_event(e) for e in self.session.log]}
            if kind == "shutdown":
                return {"type": "bye"}
            return {"type": "error", "message": f"unknown message type {kind!r}"}
        except (SceneLoadError, UnknownViewError, RuntimeError, ValueError,
                KeyError) as exc:
            return {"type": "error", "message": f"{type(exc).__name__}: {exc}"}


def serve_stdio(scene: Scene | None = None) -> None:
    server = BridgeServer(scene)
    stdin = sys.stdin.buffer
    stdout = sys.stdout.buffer
    while True:
        message = read_frame(stdin)
        if message is None:
            return
        reply = server.handle(message)
        write_frame(stdout, reply)
        if reply.get("type") == "bye":
            return
