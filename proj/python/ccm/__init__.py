"""Coherent causal memory: litmus programs, proof outlines and TSO traces."""

from ._ccm import (
    CapExceeded,
    CcmError,
    Document,
    LookupError,
    ParseError,
    PreconditionError,
    ValidationError,
    acceptance,
    bridge,
    check_annotation,
    check_ghost,
    check_soundness,
    enumerate,
    load,
    parse,
    serialize,
    soundness_harness,
)

__all__ = [
    "CapExceeded",
    "CcmError",
    "Document",
    "LookupError",
    "ParseError",
    "PreconditionError",
    "ValidationError",
    "acceptance",
    "bridge",
    "check_annotation",
    "check_ghost",
    "check_soundness",
    "enumerate",
    "load",
    "parse",
    "serialize",
    "soundness_harness",
]
