"""Deterministic pseudo-random primitives for reproducible pipelines.

Every stochastic step in this package (train/test splitting, synthetic
table generation) draws from the SplitMix64 generator below, so a run is
fully determined by its integer seed, on any platform. The constants are
the published SplitMix64 constants:

    increment    0x9E3779B97F4A7C15
    multiplier 1 0xBF58476D1CE4E5B9   (after xor-shift by 30)
    multiplier 2 0x94D049BB133111EB   (after xor-shift by 27)
    final xor-shift 31

Bounded draws use rejection sampling, so they are unbiased for any bound,
and :func:`fisher_yates` is the classic top-down shuffle. Derived seeds
(:func:`derive_seed`) mix a base seed with the FNV-1a 64-bit hash of a
string identity and push the result through one generator step; adding or
removing one identity therefore never perturbs the streams of the others.
"""

from __future__ import annotations

from typing import Iterable, Sequence, TypeVar

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

T = TypeVar("T")


def _mix(z: int) -> int:
    """SplitMix64 output function on a 64-bit state."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 generator over a 64-bit state."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return _mix(self.state)

    def next_below(self, bound: int) -> int:
        """Unbiased draw from [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound

    def next_unit(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53


def fisher_yates(items: Iterable[T], rng: SplitMix64) -> list[T]:
    """Return a shuffled copy of ``items``, walking from the top index down."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.next_below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def fnv1a64(text: str) -> int:
    """FNV-1a 64-bit hash of the UTF-8 encoding of ``text``."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def derive_seed(base_seed: int, *parts: str) -> int:
    """Derive an independent stream seed from a base seed and a string identity.

    The identity parts are joined with ``|``, hashed with FNV-1a, xor-ed
    into the base seed and scrambled by one SplitMix64 step.
    """
    h = fnv1a64("|".join(parts))
    return SplitMix64(base_seed ^ h).next_u64()
