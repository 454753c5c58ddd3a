"""Explicit-state verifier for server/agent message-passing systems.

The heavy lifting lives in the compiled extension module; this package
re-exports its functions under stable names.
"""

from imdsverify._core import (
    ImdsError,
    canonicalize,
    check,
    compile_routes,
    generate_all,
    generate_fleet,
    generate_similar,
    lts_stats,
    quadrant_topology,
    render,
)

__all__ = [
    "ImdsError",
    "canonicalize",
    "check",
    "compile_routes",
    "generate_all",
    "generate_fleet",
    "generate_similar",
    "lts_stats",
    "quadrant_topology",
    "render",
]

__version__ = "0.1.0"
