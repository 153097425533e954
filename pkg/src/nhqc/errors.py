"""Exception types shared across the package.

The CLI maps these onto process exit codes: usage errors exit 2 (argparse),
:class:`DomainError` exits 3, :class:`InvariantError` exits 4.
"""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class SingularSchemeError(DomainError):
    """A pulse scheme is singular at the requested geometric phase."""


class SolverError(RuntimeError):
    """A numerical solve (peak search, bracketing) failed to converge."""


class InvariantError(RuntimeError):
    """A numerical invariant (trace, Hermiticity, positivity) drifted past
    its threshold during integration; usually means the step is too large."""
