"""Augmentation distributions, chains and waveform effects."""

from .distribution import (
    AugDistribution,
    PARAMETER_NAMES,
    PARAMETER_RANGES,
    PRESETS,
    sample_distribution,
    no_augmentation,
    basic_recipe,
    distribution_to_dict,
    distribution_from_dict,
    save_distribution,
    load_distribution,
)
from .effects import (
    apply_time_drop,
    apply_pitch_shift,
    apply_reverb,
    apply_clip,
    apply_band_reject,
)
from .chain import AugChain, TimeDrop, PitchShift, Reverb, BandReject, Clip, sample_chain, apply_chain

__all__ = [
    'AugDistribution',
    'PARAMETER_NAMES',
    'PARAMETER_RANGES',
    'PRESETS',
    'sample_distribution',
    'no_augmentation',
    'basic_recipe',
    'distribution_to_dict',
    'distribution_from_dict',
    'save_distribution',
    'load_distribution',
    'apply_time_drop',
    'apply_pitch_shift',
    'apply_reverb',
    'apply_clip',
    'apply_band_reject',
    'AugChain',
    'TimeDrop',
    'PitchShift',
    'Reverb',
    'BandReject',
    'Clip',
    'sample_chain',
    'apply_chain',
]
