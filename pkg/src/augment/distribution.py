"""Augmentation distributions: apply-probabilities and effect-parameter bounds."""

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from ..utils.exceptions import ConfigurationError, DataError, ReportError
from ..utils.validators import validate_probability, validate_range

PROBABILITY = (0.0, 1.0)

# Ranges of the random search space, one entry per distribution field.
PARAMETER_RANGES: Dict[str, Tuple[float, float]] = {
    'p_timedrop': PROBABILITY,
    'p_pitch': PROBABILITY,
    'p_reverb': PROBABILITY,
    'p_clip': PROBABILITY,
    'p_bandreject': PROBABILITY,
    'room_scale_min': (0.0, 30.0),
    'room_scale_max': (30.0, 100.0),
    'band_scaler': (0.0, 1.0),
    'pitch_shift_max': (150.0, 450.0),
    'p_pitch_quick': PROBABILITY,
    'clip_min': (0.3, 0.6),
    'clip_max': (0.6, 1.0),
    'timedrop_max': (30.0, 150.0),
}

PARAMETER_NAMES: Tuple[str, ...] = tuple(PARAMETER_RANGES)


@dataclass(frozen=True)
class AugDistribution:
    """One point of the search space: 5 apply-probabilities and 8 effect bounds.

    Units: room scales are dimensionless, pitch_shift_max is in cents,
    timedrop_max in milliseconds, clip bounds are fractions of the peak.
    """

    p_timedrop: float
    p_pitch: float
    p_reverb: float
    p_clip: float
    p_bandreject: float
    room_scale_min: float
    room_scale_max: float
    band_scaler: float
    pitch_shift_max: float
    p_pitch_quick: float
    clip_min: float
    clip_max: float
    timedrop_max: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name.startswith('p_') and not validate_probability(value):
                raise ConfigurationError(f"{f.name}={value!r} is not a probability")
            if not validate_range(value, PARAMETER_RANGES[f.name]):
                low, high = PARAMETER_RANGES[f.name]
                raise ConfigurationError(f"{f.name}={value!r} outside [{low}, {high}]")
            object.__setattr__(self, f.name, float(value))

    def value(self, name: str) -> float:
        if name not in PARAMETER_RANGES:
            raise KeyError(f"unknown parameter '{name}'")
        return getattr(self, name)


def sample_distribution(rng: np.random.Generator) -> AugDistribution:
    """Draw every field independently and uniformly from its range."""
    values = {name: float(rng.uniform(low, high)) for name, (low, high) in PARAMETER_RANGES.items()}
    return AugDistribution(**values)


def no_augmentation() -> AugDistribution:
    """Baseline without any augmentation: every apply-probability is zero."""
    return AugDistribution(
        p_timedrop=0.0, p_pitch=0.0, p_reverb=0.0, p_clip=0.0, p_bandreject=0.0,
        room_scale_min=0.0, room_scale_max=30.0, band_scaler=0.0, pitch_shift_max=150.0,
        p_pitch_quick=0.0, clip_min=0.6, clip_max=1.0, timedrop_max=30.0,
    )


def basic_recipe() -> AugDistribution:
    """Fixed hand-set recipe applying every effect half of the time with mid-range bounds."""
    return AugDistribution(
        p_timedrop=0.5, p_pitch=0.5, p_reverb=0.5, p_clip=0.5, p_bandreject=0.5,
        room_scale_min=0.0, room_scale_max=100.0, band_scaler=0.5, pitch_shift_max=300.0,
        p_pitch_quick=0.0, clip_min=0.45, clip_max=0.8, timedrop_max=50.0,
    )


PRESETS = {
    'none': no_augmentation,
    'basic': basic_recipe,
}


def distribution_to_dict(d: AugDistribution) -> Dict[str, float]:
    return {name: value for name, value in asdict(d).items()}


def distribution_from_dict(record: Dict[str, Any]) -> AugDistribution:
    """Build a distribution from exactly the 13 named fields."""
    if not isinstance(record, dict):
        raise DataError("distribution record must be an object")
    unknown = sorted(set(record) - set(PARAMETER_NAMES))
    if unknown:
        raise DataError(f"unknown distribution field(s): {', '.join(unknown)}")
    missing = [name for name in PARAMETER_NAMES if name not in record]
    if missing:
        raise DataError(f"missing distribution field(s): {', '.join(missing)}")
    try:
        return AugDistribution(**{name: record[name] for name in PARAMETER_NAMES})
    except ConfigurationError as e:
        raise DataError(str(e))


def save_distribution(d: AugDistribution, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(distribution_to_dict(d), f, indent=2)
            f.write('\n')
    except OSError as e:
        raise ReportError(f"cannot write distribution ({e})", str(path))
    return path


def load_distribution(path: Union[str, Path]) -> AugDistribution:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            record = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"{path}: cannot read distribution ({e})")
    return distribution_from_dict(record)
