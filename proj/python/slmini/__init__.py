"""SL-mini: compile and run programs on a simulated SVP many-core machine."""

from ._slmini import (
    PlacementError,
    Program,
    compile,
    decode_placement,
    distribute,
    encode_placement,
    run,
)

__all__ = [
    "PlacementError",
    "Program",
    "compile",
    "decode_placement",
    "distribute",
    "encode_placement",
    "run",
    "run_source",
]


def run_source(source, **machine):
    """Compile and run in one go; raises ValueError on compile errors."""
    return run(compile(source), **machine)
