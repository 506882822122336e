"""Termination of rational SLC loops via eventual linear ranking functions."""

from elrf._core import (
    Loop,
    LoopParseError,
    PreconditionError,
    ResourceLimitError,
    detect_elrf,
    detect_lrf,
    inc_space,
    lrf_space,
    parse_loop,
    print_loop,
    simulate,
    verify,
    verify_certificate_dict,
)

__all__ = [
    "Loop",
    "LoopParseError",
    "PreconditionError",
    "ResourceLimitError",
    "detect_elrf",
    "detect_lrf",
    "inc_space",
    "lrf_space",
    "parse_loop",
    "print_loop",
    "simulate",
    "verify",
    "verify_certificate_dict",
]
