"""Python access to the shiftgeom library.

Frames and symbols are passed as dicts in the same layout as the JSON input
files; reports come back as dicts.
"""

import json

from . import _core
from ._core import (
    Error,
    green_function,
    hardy_kernel,
    kernel_identities,
    spike_weight,
)


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def grid(radial_count=32, angular_count=128, margin=1e-3):
    """(points, area_weights) of the polar grid."""
    return _core.grid_points(radial_count, angular_count, margin)


def curvature_defect(frame, lam):
    return _core.curvature_defect(_text(frame), complex(lam))


def curvature(frame, lam, truncation=512):
    return json.loads(_core.curvature_json(_text(frame), complex(lam), truncation))


def criteria(frame, radial_count=32, angular_count=128, margin=1e-3):
    return json.loads(_core.criteria_json(_text(frame), radial_count, angular_count, margin))


def multiplicativity_check(f, g, order):
    return _core.multiplicativity_check(_text(f), _text(g), order)


def intertwining_check(f, order):
    return _core.intertwining_check(_text(f), order)


def left_invertibility_margin(theta, radial_count=32, angular_count=128, margin=1e-3):
    return _core.left_invertibility_margin(_text(theta), radial_count, angular_count, margin)


def counterexample(epsilon=0.1, spike_count=2, length=0, radii=(0.0, 0.5, 0.9, 0.99, 0.999)):
    return json.loads(_core.counterexample_json(epsilon, spike_count, length, list(radii)))


def cli(*args):
    """Runs the command line tool in-process; returns its exit code."""
    return _core.cli([str(a) for a in args])
