"""Compile metric logic programs to ASP and check the result against the trace semantics."""

from ._metac import (
    CapExceeded,
    Error,
    GroundProgram,
    InputError,
    Program,
    compile,
    load,
    metric_models,
    parse,
    random_programs,
    read_json,
    solve,
    verify,
)

__all__ = [
    "CapExceeded",
    "Error",
    "GroundProgram",
    "InputError",
    "Program",
    "compile",
    "load",
    "metric_models",
    "parse",
    "random_programs",
    "read_json",
    "solve",
    "verify",
]
