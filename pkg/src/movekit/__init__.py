"""movekit: a deterministic direct-manipulation 2D scene engine.

Every screen element is movable by any inner point, resizable by its
borders, and (where it makes sense) rotatable.  All behavior is driven by
pointer-event streams, so scenes can be exercised and replayed headlessly.
"""

from .geometry import Point, Rect  # noqa: F401

__version__ = "0.1.0"
