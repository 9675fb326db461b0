"""Portable seeded generator used for instance generation and local search.

The generator is xorshift64* (Marsaglia's xorshift with Vigna's
multiplicative output scrambler)::

    s ^= s >> 12
    s ^= s << 25        (mod 2**64)
    s ^= s >> 27
    out = s * 0x2545F4914F6CDD1D  (mod 2**64)

The 64-bit state is initialised from the seed with one SplitMix64 step, so
every seed (including 0) yields a nonzero state.  Bounded integers use
rejection sampling, so ``below(b)`` is exactly uniform on ``[0, b)``.
"""

from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

T = TypeVar("T")

MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D


def splitmix64(value: int) -> int:
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    def __init__(self, seed: int = 0):
        state = splitmix64(seed & MASK64)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & MASK64
        s ^= s >> 27
        self.state = s
        return (s * _MULT) & MASK64

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self.below(len(seq))]

    def shuffle(self, seq: MutableSequence) -> None:
        """In-place Fisher-Yates, walking i from len-1 down to 1."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
