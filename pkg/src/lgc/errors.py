"""Exception taxonomy shared across the package.

Input validation problems raise ValueError (or a subclass); situations where
a computation cannot proceed on otherwise well-formed inputs raise
DomainError. The CLI maps these onto distinct exit codes.
"""


class DomainError(Exception):
    """A valid request that has no answer on this input (e.g. empty cut)."""


class NoCandidateCutError(DomainError):
    """No sweep prefix falls inside the requested threshold window."""


class NoValidVol0Error(DomainError):
    """The doubling search exhausted its budget without an accepted cut."""

    def __init__(self, message, best_phi=None, tried=None):
        super().__init__(message)
        self.best_phi = best_phi
        self.tried = tuple(tried) if tried is not None else ()


class FileFormatError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no
