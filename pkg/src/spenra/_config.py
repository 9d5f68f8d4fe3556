"""Process-wide worker-count knob.

Results are required to be independent of the worker count: parallel maps
are over independent per-index tasks with output order fixed by index.
"""

from __future__ import annotations

import os

_n_jobs: int | None = None


def set_n_jobs(n: int | None):
    """Cap parallel workers; None restores the default."""
    global _n_jobs
    _n_jobs = n


def n_jobs() -> int:
    if _n_jobs is not None:
        return max(1, int(_n_jobs))
    env = os.environ.get("SPENRA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1
