"""Custom exceptions for the augmentation selection toolkit."""

from typing import Any, Dict, Optional


class AugSelError(Exception):
    """Base exception for augmentation selection operations."""
    exit_code = 1


class ConfigurationError(AugSelError):
    """Configuration or command-line usage is invalid."""
    exit_code = 1


class DataError(AugSelError):
    """Input data (manifest, audio, report) is unusable."""
    exit_code = 2


class ManifestError(DataError):
    """A manifest could not be parsed."""
    def __init__(self, message: str, path: str = None, line_number: int = None):
        if line_number is not None:
            message = f"{path or 'manifest'}:{line_number}: {message}"
        super().__init__(message)
        self.path = path
        self.line_number = line_number


class DuplicateIdError(ManifestError):
    """The same entry id appears twice in one dataset."""
    def __init__(self, entry_id: str, path: str = None, line_number: int = None):
        super().__init__(f"duplicate id '{entry_id}'", path, line_number)
        self.entry_id = entry_id


class AudioFormatError(DataError):
    """Audio file is unreadable or not 16-bit mono PCM."""
    def __init__(self, message: str, path: str = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ReportError(DataError):
    """A report file could not be written or read back."""
    def __init__(self, message: str, path: str = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class NumericalError(AugSelError):
    """A numerical step failed (singular solve, non-finite loss)."""
    exit_code = 3

    def __init__(self, message: str, diagnostic: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class CandidateScoringError(AugSelError):
    """Scoring one search candidate failed; the search is aborted."""
    def __init__(self, candidate_index: int, cause: Exception):
        super().__init__(f"candidate {candidate_index} failed: {cause}")
        self.candidate_index = candidate_index
        self.cause = cause
        self.exit_code = getattr(cause, 'exit_code', 3)
