"""Dependently typed language with custom runtime representations for
inductive families: checker, representation-erasing translation, and an
untyped extraction backend."""

import sys as _sys

# Deep terms (unary numerals, nested eliminations) recurse structurally.
if _sys.getrecursionlimit() < 200_000:
    _sys.setrecursionlimit(200_000)

__version__ = "0.1.0"
