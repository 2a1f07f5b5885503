from pathlib import Path
from typing import Optional, Union


class ArticulationError(Exception):
    """Base class for every error raised by the analysis library."""


class DegenerateGeometry(ArticulationError):
    """Point sets too degenerate to define a rigid transform."""


class EmptyCloud(ArticulationError):
    pass


class ZeroMotion(ArticulationError):
    """A part shows neither rotation nor translation between the chosen frames."""

    def __init__(self, message: str, label: Optional[int] = None):
        super().__init__(message)
        self.label = label


class FormatError(ArticulationError):
    """Malformed file content, reported with file and line context."""

    def __init__(self, message: str, path: Union[str, Path, None] = None, line: Optional[int] = None):
        self.path = Path(path) if path is not None else None
        self.line = line
        self.reason = message
        if self.path is not None and line is not None:
            message = f"{self.path}:{line}: {message}"
        elif self.path is not None:
            message = f"{self.path}: {message}"
        super().__init__(message)


class ConsistencyError(ArticulationError):
    """Files parse individually but disagree with each other."""


class ConfigError(ArticulationError):
    pass


class SpecError(ArticulationError):
    """Invalid synthetic scene or part definition."""


class MatchError(ArticulationError):
    """Prediction and ground truth share no part labels."""


class IoError(ArticulationError):
    def __init__(self, message: str, path: Union[str, Path, None] = None):
        self.path = Path(path) if path is not None else None
        super().__init__(f"{message} ({self.path})" if self.path is not None else message)
