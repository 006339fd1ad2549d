"""Prime generation and Chinese Remainder reconstruction.

Everything is exact arbitrary-precision integer arithmetic; the sieve is
deterministic (no probabilistic primality).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class NotCoprime(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__(f"moduli {i} and {j} share a common factor")
        self.i = i
        self.j = j


class ResidueOutOfRange(ValueError):
    def __init__(self, i: int):
        super().__init__(f"residue {i} outside [0, modulus)")
        self.i = i


@dataclass(frozen=True)
class CrtSystem:
    """Simultaneous congruences x = residues[i] (mod moduli[i])."""

    moduli: tuple[int, ...]
    residues: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(self.moduli))
        object.__setattr__(self, "residues", tuple(self.residues))


def _sieve(limit: int) -> list[int]:
    is_prime = bytearray([1]) * (limit + 1)
    is_prime[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = b"\x00" * len(is_prime[p * p :: p])
    return [p for p in range(limit + 1) if is_prime[p]]


def nth_primes(k: int) -> tuple[int, ...]:
    """The first k primes, ascending.

    The sieve limit comes from the asymptotic density of primes, padded for
    safety, and doubles until enough primes appear.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return ()
    if k < 6:
        limit = 16
    else:
        limit = int(k * (math.log(k) + math.log(math.log(k))) * 1.2) + 16
    primes = _sieve(limit)
    while len(primes) < k:
        limit *= 2
        primes = _sieve(limit)
    return tuple(primes[:k])


def validate_system(sys: CrtSystem) -> None:
    if len(sys.moduli) != len(sys.residues):
        raise ValueError(f"{len(sys.moduli)} moduli but {len(sys.residues)} residues")
    for i, p in enumerate(sys.moduli):
        if p <= 1:
            raise ValueError(f"modulus {i} is {p}, must exceed 1")
        if not 0 <= sys.residues[i] < p:
            raise ResidueOutOfRange(i)
    for i in range(len(sys.moduli)):
        for j in range(i + 1, len(sys.moduli)):
            if math.gcd(sys.moduli[i], sys.moduli[j]) != 1:
                raise NotCoprime(i, j)


def crt(sys: CrtSystem) -> int:
    """The unique x in [0, prod moduli) meeting every congruence.

    Pairwise combination: fold each congruence in with an extended-gcd
    modular inverse.
    """
    validate_system(sys)
    x = 0
    mod = 1
    for p, a in zip(sys.moduli, sys.residues):
        inv = pow(mod, -1, p)
        t = ((a - x) * inv) % p
        x += mod * t
        mod *= p
    return x
