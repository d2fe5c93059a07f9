"""Exception hierarchy shared by every module.

The CLI maps :class:`DomainError` to exit status 1 and
:class:`InvariantError` (including :class:`CatalogError`) to exit status 2.
"""


class DomainError(ValueError):
    """Input outside an operation's domain (bad endpoint, wrong residue, ...)."""


class PreconditionError(DomainError):
    """Input is well formed but the operation is undefined for it."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class CatalogError(InvariantError):
    """Form catalog derivation produced something other than the expected shape."""
