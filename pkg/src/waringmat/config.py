"""Global configuration: census budget and the shared PRNG seed.

Every randomized step in the package (equal-degree splitting, rejection
sampling for invertible cyclic pairs, random search for cyclic vectors)
draws from a ``random.Random`` seeded here, so a fixed seed makes every
run reproducible.  The census budget caps any full enumeration of
``q**(n*n)`` matrices; the ``WARINGMAT_BUDGET`` environment variable
overrides the default.
"""

from __future__ import annotations

import os
import random

DEFAULT_BUDGET = 2**24
DEFAULT_SEED = 0

_seed = DEFAULT_SEED


def get_budget() -> int:
    raw = os.environ.get("WARINGMAT_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_BUDGET


def check_budget(count: int, what: str = "enumeration") -> None:
    from .errors import BudgetExceeded

    budget = get_budget()
    if count > budget:
        raise BudgetExceeded(f"{what} of size {count} exceeds budget {budget}")


def set_seed(seed: int) -> None:
    global _seed
    _seed = int(seed)


def get_seed() -> int:
    return _seed


def rng(salt: int = 0) -> random.Random:
    """A fresh PRNG derived from the global seed; salt separates call sites."""
    return random.Random((_seed << 16) ^ salt)
