"""Session: an engine plus the application wiring a scene document declares.

A scene that carries calculator bindings gets live calculators whose
display comments update on button clicks, and whose entry state persists
in the document.  Replaying a log through a Session therefore reproduces
everything an interactive session did, byte for byte.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from .elements import CommentEl
from .engine import Engine, PointerEvent, ReplayError, parse_events
from .scene import CalculatorBinding, Scene, copy_scene, save_scene
from .apps.calculator import CalculatorModel


class Session:
    def __init__(self, scene: Scene):
        self.scene = scene
        self.engine = Engine(scene)
        self.log: list[PointerEvent] = []
        self._calculators: list[tuple[CalculatorBinding, CalculatorModel]] = []
        for binding in scene.bindings.calculators:
            model = CalculatorModel(entry=list(binding.entry))
            model.display = self._display_text(binding) or model.display
            self._calculators.append((binding, model))
        self.engine.click_listeners.append(self._on_click)

    def _display_text(self, binding: CalculatorBinding) -> str | None:
        if self.scene.has_element(binding.display):
            el = self.scene.element(binding.display)
            if isinstance(el, CommentEl):
                return el.text
        return None

    def _on_click(self, element_id: int, tag: str) -> None:
        for binding, model in self._calculators:
            if element_id in binding.buttons:
                text = model.press(tag)
                binding.entry = list(model.entry)
                if self.scene.has_element(binding.display):
                    display = self.scene.element(binding.display)
                    if isinstance(display, CommentEl) and display.text != text:
                        self.scene.replace_element(replace(display, text=text))
                return

    def apply(self, event: PointerEvent) -> None:
        self.engine.apply(event)
        self.log.append(event)

    def apply_all(self, events: Iterable[PointerEvent]) -> None:
        for index, event in enumerate(events):
            try:
                self.apply(event)
            except RuntimeError as exc:
                raise ReplayError(str(exc), index) from exc

    def apply_line(self, line: str) -> None:
        for event in parse_events(line):
            self.apply(event)

    def document_bytes(self) -> bytes:
        return save_scene(self.scene)


def replay_session(scene: Scene, events: Iterable[PointerEvent]) -> Scene:
    """App-aware replay: folds events over a copy with bindings active."""
    work = copy_scene(scene)
    session = Session(work)
    session.apply_all(events)
    return work
