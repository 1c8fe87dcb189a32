"""Counter-based splittable random streams.

Every stochastic routine in this package draws from a stream keyed by
``(seed, tag, index)``.  Streams with distinct keys are statistically
independent Philox streams, so estimators can split work across workers
by ``index`` block and merge results in index order: the aggregate is a
pure function of the seed, independent of worker count or scheduling.
"""

from __future__ import annotations

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def _fnv1a(text: str) -> int:
    """Stable 64-bit FNV-1a hash of a tag (Python's hash() is salted per run)."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def stream(seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Return the Generator for the (seed, tag, index) key.

    Parameters
    ----------
    seed : int
        User-facing seed; any Python int.
    tag : str
        Names the consumer (e.g. "path", "stick-lengths"), so two routines
        with the same seed never share a stream.
    index : int
        Block index for splittable parallel draws.
    """
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    key = np.array(
        [(seed ^ _fnv1a(tag)) & _MASK64, index & _MASK64], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))
