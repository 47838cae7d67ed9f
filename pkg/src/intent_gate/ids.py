"""Sortable identifier generation.

Identifiers are 26-character Crockford base32 strings encoding a 48-bit
millisecond timestamp followed by 80 bits of generator state, so ids sort
lexicographically in creation order. Within one millisecond the state is
incremented rather than redrawn, which keeps ordering strict. Seeding the
generator (plus a logical clock) makes the whole id stream reproducible.
"""

from __future__ import annotations

import random
from typing import Protocol

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"
_RANDOM_BITS = 80
_RANDOM_MASK = (1 << _RANDOM_BITS) - 1


class Clock(Protocol):
    def now(self): ...


class IdGenerator:
    """Produces sortable ids from a clock and an optionally seeded RNG."""

    def __init__(self, clock: Clock, seed: int | None = None) -> None:
        self._clock = clock
        self._rng = random.Random(seed)
        self._last_ms = -1
        self._last_rand = 0

    def new_id(self) -> str:
        ms = int(self._clock.now().timestamp() * 1000)
        if ms == self._last_ms:
            self._last_rand = (self._last_rand + 1) & _RANDOM_MASK
        else:
            self._last_ms = ms
            self._last_rand = self._rng.getrandbits(_RANDOM_BITS)
        value = (ms << _RANDOM_BITS) | self._last_rand
        chars = []
        for _ in range(26):
            chars.append(_CROCKFORD[value & 0x1F])
            value >>= 5
        return "".join(reversed(chars))
