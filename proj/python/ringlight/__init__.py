"""Collective dipole-dipole physics of quantum emitter ring lattices."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import _recipe, _run_scenario

__version__ = "0.1.0"


def run_scenario(config, output_dir="", overrides=(), jobs=0, write_files=True):
    """Run a scenario given as a dict or JSON string; returns (directory, summary dict, files)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    directory, summary, files = _run_scenario(text, output_dir, list(overrides), jobs, write_files)
    return directory, _json.loads(summary), files


def recipe(figure):
    """The bundled recipe for a figure id, as a dict."""
    return _json.loads(_recipe(figure))
