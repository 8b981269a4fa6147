"""Bitmask helpers used across the engine.

Subsets of a finite carrier are ints with bit i set iff element i belongs.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def render_subset(mask: int, names: tuple[str, ...]) -> str:
    return "{" + ",".join(names[i] for i in bits(mask)) + "}"
