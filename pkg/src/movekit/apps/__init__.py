"""The three demonstration models built on the engine."""

from ..elements import constrained_spot_move  # noqa: F401
from .analyser import (  # noqa: F401
    Explicit,
    FunctionDef,
    Parametric,
    add_comment,
    add_function,
    add_plot_area,
    add_scale,
    attach_follow,
    bound_functions,
    build_analyser_demo,
    function_from_doc,
    nice_ticks,
    sample_function,
    screen_to_world,
    world_to_screen,
)
from .calculator import BUTTON_ROWS, CalculatorModel, build_calculator_scene  # noqa: F401
from .expressions import (  # noqa: F401
    ExpressionError,
    eval_expression,
    format_number,
    parse_expression,
)
from .spotworld import build_labyrinth_demo, build_path_demo  # noqa: F401
