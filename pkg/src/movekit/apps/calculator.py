"""Calculator demo: the result never depends on where the buttons are.

The model consumes button tags only; geometry stays entirely on the scene
side, so any layout of the same controls computes the same results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..geometry import Point, Rect
from ..elements import CommentEl, ControlEl
from ..scene import CalculatorBinding, Scene
from .expressions import ExpressionError, eval_expression, format_number

BUTTON_ROWS = [
    ["7", "8", "9", "/"],
    ["4", "5", "6", "*"],
    ["1", "2", "3", "-"],
    ["0", ".", "(", ")"],
    ["+", "=", "C"],
]


@dataclass
class CalculatorModel:
    """Token-list calculator; evaluation sees tokens, never geometry."""

    entry: list[str] = field(default_factory=list)
    display: str = "0"

    def press(self, tag: str) -> str:
        if tag == "C":
            self.entry = []
            self.display = "0"
        elif tag == "=":
            if self.entry:
                try:
                    value = eval_expression(self.entry)
                except ExpressionError:
                    self.entry = []
                    self.display = "Error"
                    return self.display
                self.display = format_number(value)
                self.entry = [self.display] if self.display not in (
                    "NaN", "∞", "-∞") else []
        else:
            self.entry.append(tag)
            self.display = "".join(self.entry)
        return self.display


def build_calculator_scene(origin: Point = Point(20.0, 20.0),
                           button_w: float = 48.0, button_h: float = 32.0,
                           gap: float = 8.0) -> tuple[Scene, CalculatorBinding]:
    """Default layout; users will immediately rearrange it, which is the point."""
    scene = Scene()
    display = scene.add(CommentEl(
        id=1,
        anchor=Point(origin.x + 2 * button_w + 1.5 * gap, origin.y),
        text="0",
    ))
    binding = CalculatorBinding(display=display.id)
    next_id = 2
    y = origin.y + button_h
    for row in BUTTON_ROWS:
        x = origin.x
        for tag in row:
            btn = scene.add(ControlEl(
                id=next_id,
                rect=Rect(Point(x, y), Point(x + button_w, y + button_h)),
                tag=tag,
            ))
            binding.buttons.append(btn.id)
            next_id += 1
            x += button_w + gap
        y += button_h + gap
    scene.bindings.calculators.append(binding)
    return scene, binding
