"""Global size caps for enumerations and grids.

Lattice balls and tensor grids grow exponentially; every operation that
materializes one checks against a cap.  The default is 10^7 entries and can
be overridden with the ``WIDTHLAB_CAP`` environment variable or per call.
"""

import os

DEFAULT_CAP = 10_000_000


def active_cap(override=None) -> int:
    """Return the cap to enforce: explicit override > env var > default."""
    if override is not None:
        return int(override)
    env = os.environ.get("WIDTHLAB_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_CAP
