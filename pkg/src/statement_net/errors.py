"""Exception hierarchy shared by all pipeline stages.

Each class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class StatementNetError(Exception):
    exit_code = 2


class ValidationError(StatementNetError):
    """Bad configuration, missing input path or missing intermediate."""

    exit_code = 1


class DataError(StatementNetError):
    """Input data could not be parsed or violates a record contract."""

    exit_code = 2


class CorpusError(DataError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


class TagFileError(DataError):
    pass


class InvariantError(StatementNetError):
    """An internal consistency check failed; indicates a bug, not bad data."""

    exit_code = 3
