"""Kernel backend selection.

The compiled extension `_ckern` is used when it imports cleanly; the pure
Python `_pykernels` module is the fallback.  Set RANDOMGROUPS_BACKEND=py
or =c before import to force one (forcing c raises if the extension is
missing).  `get_kernels(name)` fetches a specific backend for benchmarks
and cross-checks.
"""

from __future__ import annotations

import os

from . import _pykernels

_forced = os.environ.get("RANDOMGROUPS_BACKEND", "auto").strip().lower()
if _forced not in ("auto", "c", "py"):
    raise ValueError(f"RANDOMGROUPS_BACKEND must be auto, c or py, not {_forced!r}")

if _forced == "py":
    _active = _pykernels
else:
    try:
        from . import _ckern as _active  # type: ignore[no-redef]
    except ImportError:
        if _forced == "c":
            raise
        _active = _pykernels


def active() -> object:
    return _active


def backend_name() -> str:
    return _active.NAME


def get_kernels(name: str | None = None):
    """Backend module by name ("c" or "py"); the active one when None."""
    if name is None:
        return _active
    if name == "py":
        return _pykernels
    if name == "c":
        from . import _ckern

        return _ckern
    raise ValueError(f"unknown backend {name!r}")


def sym_eigvals(a):
    return _active.sym_eigvals(a)


def exact_match(xs, ys, zs, P, budget):
    return _active.exact_match(xs, ys, zs, P, budget)


def heuristic_match(xs, ys, zs, P, restarts, seed, budget=2_000_000):
    return _active.heuristic_match(xs, ys, zs, P, restarts, seed, budget)
