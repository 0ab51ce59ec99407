"""Exception and warning types shared across the package."""


class FeatselError(Exception):
    """Base class for errors raised by featsel."""


class DatasetError(FeatselError, ValueError):
    """A dataset violates a structural invariant (shape, names, labels)."""


class CsvParseError(DatasetError):
    """A feature cell could not be parsed as a finite number.

    Carries the 1-based data row number and the column name so callers can
    point the user at the offending cell.
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class MissingValueError(DatasetError):
    """A cell is empty or marked missing; missing values are not imputed."""


class ConfigError(FeatselError, ValueError):
    """An experiment or CLI configuration is invalid."""


class FeatselWarning(UserWarning):
    """Recoverable degenerate condition (e.g. a class too small to stratify)."""
