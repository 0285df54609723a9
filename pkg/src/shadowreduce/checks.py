"""Process-wide switch for expensive self-verification.

Checked mode re-verifies postconditions that are otherwise trusted: the
Smith normal form identity ``u @ m @ v == d`` on every call, homology
preservation of every applied move, and ledger conservation after every
transfer.  It is off by default and enabled with ``SHADOW_REDUCE_CHECKED=1``
or the :func:`checked_mode` context manager.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

_enabled = os.environ.get("SHADOW_REDUCE_CHECKED", "") not in ("", "0")


def enabled() -> bool:
    return _enabled


def set_enabled(flag: bool) -> None:
    global _enabled
    _enabled = bool(flag)


@contextmanager
def checked_mode(flag: bool = True):
    previous = _enabled
    set_enabled(flag)
    try:
        yield
    finally:
        set_enabled(previous)
