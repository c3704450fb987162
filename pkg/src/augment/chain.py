"""Concrete augmentation chains sampled from a distribution."""

from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from .distribution import AugDistribution
from .effects import (
    BAND_CENTER_RANGE_HZ,
    apply_band_reject,
    apply_clip,
    apply_pitch_shift,
    apply_reverb,
    apply_time_drop,
)
from ..corpus.audio import Waveform

EFFECT_ORDER = ('time_drop', 'pitch_shift', 'reverb', 'band_reject', 'clip')


@dataclass(frozen=True)
class TimeDrop:
    drop_length_ms: float
    name = 'time_drop'


@dataclass(frozen=True)
class PitchShift:
    shift_cents: float
    quick: bool
    name = 'pitch_shift'


@dataclass(frozen=True)
class Reverb:
    room_scale: float
    rir_seed: int
    name = 'reverb'


@dataclass(frozen=True)
class BandReject:
    band_scaler: float
    reject_center_hz: float
    name = 'band_reject'

    @property
    def reject_width_hz(self) -> float:
        return self.band_scaler * self.reject_center_hz


@dataclass(frozen=True)
class Clip:
    clip_factor: float
    name = 'clip'


Effect = Union[TimeDrop, PitchShift, Reverb, BandReject, Clip]


@dataclass(frozen=True)
class AugChain:
    """Ordered effect applications plus the seed that places the time drop."""

    effects: Tuple[Effect, ...] = ()
    seed: int = 0

    def __post_init__(self):
        names = [e.name for e in self.effects]
        if len(set(names)) != len(names):
            raise ValueError(f"effect repeated in chain: {names}")
        object.__setattr__(self, 'effects', tuple(self.effects))

    def __len__(self) -> int:
        return len(self.effects)

    @property
    def names(self) -> List[str]:
        return [e.name for e in self.effects]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'effects': [dict(effect=e.name, **asdict(e)) for e in self.effects],
        }


def sample_chain(d: AugDistribution, rng: np.random.Generator) -> AugChain:
    """Include each effect with its apply-probability and draw its parameters.

    Draws happen for every effect in a fixed order whether or not it is
    included, so two chains from equal seeds stay aligned.
    """
    effects: List[Effect] = []

    use = rng.random() < d.p_timedrop
    drop_ms = rng.uniform(0.0, d.timedrop_max)
    if use:
        effects.append(TimeDrop(drop_length_ms=float(drop_ms)))

    use = rng.random() < d.p_pitch
    cents = rng.uniform(-d.pitch_shift_max, d.pitch_shift_max)
    quick = rng.random() < d.p_pitch_quick
    if use:
        effects.append(PitchShift(shift_cents=float(cents), quick=bool(quick)))

    use = rng.random() < d.p_reverb
    room = rng.uniform(d.room_scale_min, d.room_scale_max)
    rir_seed = int(rng.integers(0, 2**31 - 1))
    if use:
        effects.append(Reverb(room_scale=float(room), rir_seed=rir_seed))

    use = rng.random() < d.p_bandreject
    center = rng.uniform(*BAND_CENTER_RANGE_HZ)
    if use:
        effects.append(BandReject(band_scaler=d.band_scaler, reject_center_hz=float(center)))

    use = rng.random() < d.p_clip
    factor = rng.uniform(d.clip_min, d.clip_max)
    if use:
        effects.append(Clip(clip_factor=float(factor)))

    return AugChain(tuple(effects), seed=int(rng.integers(0, 2**31 - 1)))


def apply_effect(effect: Effect, w: Waveform, rng: np.random.Generator) -> Waveform:
    if isinstance(effect, TimeDrop):
        return apply_time_drop(w, effect.drop_length_ms, rng)
    if isinstance(effect, PitchShift):
        return apply_pitch_shift(w, effect.shift_cents, effect.quick)
    if isinstance(effect, Reverb):
        return apply_reverb(w, effect.room_scale, effect.rir_seed)
    if isinstance(effect, BandReject):
        return apply_band_reject(w, effect.band_scaler, center_hz=effect.reject_center_hz)
    if isinstance(effect, Clip):
        return apply_clip(w, effect.clip_factor)
    raise TypeError(f"unknown effect {effect!r}")


def apply_chain(c: AugChain, w: Waveform) -> Waveform:
    """Apply the chain's effects in order."""
    rng = np.random.default_rng(c.seed)
    for effect in c.effects:
        w = apply_effect(effect, w, rng)
    return w
