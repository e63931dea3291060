"""Deterministic seed derivation.

Every random stream in the package is keyed by a master seed plus a
path of labels, hashed into a 64-bit integer. Results therefore do not
depend on scheduling or on the number of workers.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    text = "\x1f".join(_norm(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(*parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*parts))


def _norm(part) -> str:
    # Type tags keep int 1 and str "1" on separate streams.
    if isinstance(part, bool):
        raise TypeError("bool seed parts are ambiguous")
    if isinstance(part, int):
        return f"i{part}"
    if isinstance(part, str):
        return f"s{part}"
    if isinstance(part, float):
        return f"f{part!r}"
    raise TypeError(f"unsupported seed part {part!r}")
