"""Synchronous k-reversible dynamics on +/-1 vertex states.

At every step each vertex counts its discordant neighbors (op); a vertex
flips its state iff op >= k, all vertices simultaneously. The process always
ends in a fixed point or a 2-cycle; run_trajectory finds the exact transient
length tau and period by hashing each configuration the first time it is
seen.

Configurations are bit-packed: bit i set means vertex i holds state +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import InternalInvariantError, ParseError
from .graphs import Graph

_STATE_CHARS = {"+": 1, "1": 1, "-": 0, "0": 0}


@dataclass(frozen=True)
class Configuration:
    """A +/-1 state per vertex, packed into an int (bit set = +1)."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("configuration needs at least one vertex")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits 0x{self.bits:x} out of range for n={self.n}")

    @classmethod
    def from_states(cls, states) -> Configuration:
        bits = 0
        for i, s in enumerate(states):
            if s == 1:
                bits |= 1 << i
            elif s != -1:
                raise ValueError(f"state must be +1 or -1, got {s!r}")
        return cls(n=len(states), bits=bits)

    @property
    def states(self) -> tuple[int, ...]:
        return tuple(1 if (self.bits >> i) & 1 else -1 for i in range(self.n))

    def state(self, v: int) -> int:
        return 1 if (self.bits >> v) & 1 else -1

    def negate(self) -> Configuration:
        return Configuration(self.n, self.bits ^ ((1 << self.n) - 1))

    def to_string(self) -> str:
        return "".join("+" if (self.bits >> i) & 1 else "-" for i in range(self.n))

    def __str__(self) -> str:
        return self.to_string()


def parse_config(text: str, n: int) -> Configuration:
    """Parse a configuration string: one character per vertex, '+'/'1' for
    state +1 and '-'/'0' for -1."""
    s = text.strip()
    if len(s) != n:
        raise ParseError(f"configuration has {len(s)} characters, expected {n}")
    bits = 0
    for i, c in enumerate(s):
        if c not in _STATE_CHARS:
            raise ParseError(f"illegal configuration character {c!r} at position {i + 1}")
        bits |= _STATE_CHARS[c] << i
    return Configuration(n, bits)


def negate(x: Configuration) -> Configuration:
    """Flip every vertex state. Dynamics commute with global negation."""
    return x.negate()


def _check_compatible(g: Graph, x: Configuration) -> None:
    if g.n != x.n:
        raise ValueError(f"graph has {g.n} vertices, configuration {x.n}")


def _discord_mask(g: Graph, bits: int, v: int) -> int:
    # neighbors of v whose state differs from v's
    if (bits >> v) & 1:
        return g.neighbor_masks[v] & ~bits
    return g.neighbor_masks[v] & bits


def op_counts(g: Graph, x: Configuration) -> tuple[int, ...]:
    """Number of discordant neighbors of each vertex."""
    _check_compatible(g, x)
    bits = x.bits
    return tuple(_discord_mask(g, bits, v).bit_count() for v in range(g.n))


def step(g: Graph, x: Configuration, k: int) -> Configuration:
    """One synchronous update: flip exactly the vertices with op >= k."""
    _check_compatible(g, x)
    if k < 1:
        raise ValueError(f"threshold k must be >= 1, got {k}")
    bits = x.bits
    flip = 0
    for v in range(g.n):
        if _discord_mask(g, bits, v).bit_count() >= k:
            flip |= 1 << v
    return Configuration(x.n, bits ^ flip)


def config_energy(g: Graph, x: Configuration, k: int) -> int:
    """Energy of a configuration: sum over vertices of |op - k|."""
    _check_compatible(g, x)
    if k < 1:
        raise ValueError(f"threshold k must be >= 1, got {k}")
    bits = x.bits
    return sum(abs(_discord_mask(g, bits, v).bit_count() - k) for v in range(g.n))


class TraceStep(NamedTuple):
    t: int
    config: Configuration
    energy: int


@dataclass(frozen=True)
class TrajectoryResult:
    """Exact transient/period data for one trajectory.

    tau is the least t with x(t) on the cycle; period is the cycle length
    (always 1 or 2); plateau_energy is the energy at and after tau. The trace
    covers t = 0 .. tau + period, so its last entry repeats the entry at tau.
    """

    tau: int
    period: int
    plateau_energy: int
    trace: tuple[TraceStep, ...]


def default_max_steps(g: Graph, k: int) -> int:
    """Step budget that provably suffices: n*(max_degree+1) + 3."""
    return g.n * (g.max_degree() + 1) + 3


def run_trajectory(
    g: Graph, x0: Configuration, k: int, max_steps: int | None = None
) -> TrajectoryResult:
    """Iterate until the first repeated configuration and report tau/period.

    max_steps must be at least n*(max_degree+1) + 1, enough for the proven
    transient bound plus one full revisit; the default adds a little slack.
    A trajectory that fails to close within the budget, or closes with period
    above 2, is mathematically impossible and raises InternalInvariantError.
    """
    _check_compatible(g, x0)
    if k < 1:
        raise ValueError(f"threshold k must be >= 1, got {k}")
    required = g.n * (g.max_degree() + 1) + 1
    if max_steps is None:
        max_steps = default_max_steps(g, k)
    elif max_steps < required:
        raise ValueError(f"max_steps={max_steps} below the guaranteed bound {required}")
    seen: dict[int, int] = {}
    trace: list[TraceStep] = []
    x = x0
    for t in range(max_steps + 1):
        trace.append(TraceStep(t, x, config_energy(g, x, k)))
        if x.bits in seen:
            tau = seen[x.bits]
            period = t - tau
            if period not in (1, 2):
                raise InternalInvariantError(f"detected period {period}, expected 1 or 2")
            return TrajectoryResult(
                tau=tau,
                period=period,
                plateau_energy=trace[tau].energy,
                trace=tuple(trace),
            )
        seen[x.bits] = t
        x = step(g, x, k)
    raise InternalInvariantError(f"no repeat within {max_steps} steps; transient bound violated")
