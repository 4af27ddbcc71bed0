"""Exception taxonomy shared across the package.

Three failure modes are kept apart so callers (and the CLI exit codes) can
distinguish them: malformed input data, data that is well-formed but violates
a verified identity, and numerics that refuse to give a clean answer.
"""


class BcftError(Exception):
    """Base class for all package errors."""


class StructuralError(BcftError):
    """Malformed input: wrong shapes, unknown keys, missing admissible entries."""


class DataInconsistencyError(BcftError):
    """Well-formed data that fails a required identity (e.g. dims disagree)."""


class NumericDegeneracyError(BcftError):
    """Numerics too ambiguous to round to a discrete answer (no clear SVD gap)."""
