"""Deliberate defects used to check that the verification suites catch bugs.

A mutation is active when its name appears in the comma-separated environment
variable ``MIXEDGRADED_MUTATION`` or inside an :func:`inject` block.  Nothing
is active by default.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

KNOWN = {
    "tensor-eps-sign": "drop the Koszul sign on the second-factor ε of a mixed tensor",
    "drop-connecting": "build the associated mixed complex of a tower with ε = 0",
    "truncation-bound": "shift the weight-wise bound of the Postnikov truncation by one",
}

_forced: set = set()


def active(name: str) -> bool:
    if name in _forced:
        return True
    env = os.environ.get("MIXEDGRADED_MUTATION", "")
    return name in {s.strip() for s in env.split(",") if s.strip()}


@contextmanager
def inject(name: str):
    if name not in KNOWN:
        raise ValueError(f"unknown mutation {name!r}; known: {sorted(KNOWN)}")
    _forced.add(name)
    try:
        yield
    finally:
        _forced.discard(name)
