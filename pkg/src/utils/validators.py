"""Input validation utilities."""

import math
import os
from pathlib import Path
from typing import Any, Tuple, Union

import numpy as np

from .exceptions import ConfigurationError


def validate_probability(value: Any) -> bool:
    """Validate a probability in [0, 1]."""
    try:
        p = float(value)
    except (ValueError, TypeError):
        return False
    return math.isfinite(p) and 0.0 <= p <= 1.0


def validate_range(value: Any, bounds: Tuple[float, float]) -> bool:
    """Validate a finite value inside closed bounds."""
    try:
        v = float(value)
    except (ValueError, TypeError):
        return False
    low, high = bounds
    return math.isfinite(v) and low <= v <= high


def validate_positive_count(value: Any) -> bool:
    """Validate a strictly positive integer count."""
    if isinstance(value, bool):
        return False
    try:
        count = int(value)
    except (ValueError, TypeError):
        return False
    return count == value and count >= 1


def validate_positive_float(value: Any) -> bool:
    """Validate a finite strictly positive number."""
    try:
        v = float(value)
    except (ValueError, TypeError):
        return False
    return math.isfinite(v) and v > 0.0


def validate_finite_array(values: Union[np.ndarray, list]) -> bool:
    """Validate that every entry of an array is finite."""
    arr = np.asarray(values, dtype=float)
    return bool(np.all(np.isfinite(arr)))


def validate_writable_path(path: Union[str, Path]) -> bool:
    """Validate that a file path can be created or overwritten."""
    target = Path(path)
    parent = target.parent if str(target.parent) else Path('.')
    if target.exists():
        return target.is_file() and os.access(target, os.W_OK)
    return parent.is_dir() and os.access(parent, os.W_OK)


def require(condition: bool, message: str, error_cls=ConfigurationError):
    """Raise ``error_cls`` with ``message`` when ``condition`` is false."""
    if not condition:
        raise error_cls(message)


def validate_report_format(format_type: str) -> bool:
    """Validate report format type."""
    valid_formats = ['table', 'csv', 'jsonl']
    return format_type.lower() in valid_formats
