"""Integer-grid geometry: world/grid mapping, axis offsets and Boolean ops.

The overlay core lives in ``_kernel``; when the package was built with
Cython the compiled extension shadows the plain-Python file and is picked
up automatically at import.  ``kernel_backend()`` reports which one is
active and ``load_pure_kernel()`` force-loads the interpreted version
(used by the benchmark to compare both).
"""

import importlib.util
import os

from . import _kernel
from .api import (
    DegenerateAxis,
    GridPolygon,
    InvalidPolygon,
    PolygonTree,
    Region,
    ScaleMap,
    area,
    axis_rectangle,
    corridor_rectangle,
    difference,
    floor_contour,
    intersection,
    point_in_tree,
    to_grid,
    to_world,
    tree_to_jsonable,
    union,
)

__all__ = [
    "DegenerateAxis",
    "GridPolygon",
    "InvalidPolygon",
    "PolygonTree",
    "Region",
    "ScaleMap",
    "area",
    "axis_rectangle",
    "corridor_rectangle",
    "difference",
    "floor_contour",
    "intersection",
    "kernel_backend",
    "load_pure_kernel",
    "point_in_tree",
    "to_grid",
    "to_world",
    "tree_to_jsonable",
    "union",
]


def kernel_backend():
    """'compiled' when the Cython extension is active, else 'python'."""
    fn = getattr(_kernel, "__file__", "") or ""
    return "python" if fn.endswith(".py") else "compiled"


def load_pure_kernel():
    """Load the interpreted kernel from source regardless of the extension."""
    path = os.path.join(os.path.dirname(__file__), "_kernel.py")
    spec = importlib.util.spec_from_file_location("medbuild.geometry._kernel_pure", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod
