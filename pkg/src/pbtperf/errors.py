"""Exception types shared across the package."""


class ConsistencyError(RuntimeError):
    """An internal cross-check that should hold mathematically has failed.

    Raised when exact identities or validated structural claims break:
    eigenvalue candidates that are not rational, negative retained
    eigenvalues, trace-moment mismatches, probabilities outside [0, 1].
    Kept distinct from ValueError so callers can tell broken invariants
    apart from bad input (the CLI maps them to different exit codes).
    """
