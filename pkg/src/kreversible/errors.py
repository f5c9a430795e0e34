"""Exception types shared across the package.

ParseError covers anything wrong with user-supplied text (edge lists,
configuration strings); the CLI maps it to exit code 2.
InternalInvariantError marks conditions that are mathematically impossible
for a correct implementation (e.g. a detected period above 2, or an energy
decrease); the CLI maps it to exit code 1.
"""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed user input (file contents or configuration strings)."""


class InternalInvariantError(RuntimeError):
    """A provably-impossible condition was observed; indicates a bug."""
