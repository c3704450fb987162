"""Waveform container and 16-bit PCM audio I/O."""

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import soundfile as sf

from ..utils.exceptions import AudioFormatError, ReportError
from ..utils.logger import get_logger

logger = get_logger(__name__)

PCM_SCALE = 32768.0


@dataclass(frozen=True)
class Waveform:
    """Mono audio samples in [-1, 1] with their sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64, copy=True).reshape(-1)
        if int(self.sample_rate) <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("waveform contains non-finite samples")
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sample_rate', int(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def with_samples(self, samples: np.ndarray) -> 'Waveform':
        """Return a waveform with new samples and the same rate."""
        return Waveform(samples, self.sample_rate)

    def peak(self) -> float:
        return float(np.max(np.abs(self.samples))) if len(self) else 0.0


def load_waveform(path: Union[str, Path]) -> Waveform:
    """Load a mono 16-bit PCM RIFF file, scaling samples by 1/32768."""
    path = str(path)
    try:
        info = sf.info(path)
    except Exception as e:
        raise AudioFormatError(f"unreadable audio file ({e})", path)

    if info.channels != 1:
        raise AudioFormatError(f"multi-channel audio ({info.channels} channels) is not supported", path)
    if info.format != 'WAV' or info.subtype != 'PCM_16':
        raise AudioFormatError(f"unsupported encoding {info.format}/{info.subtype}, expected WAV/PCM_16", path)

    try:
        data, rate = sf.read(path, dtype='int16', always_2d=False)
    except Exception as e:
        raise AudioFormatError(f"unreadable audio file ({e})", path)

    logger.debug(f"Loaded {path}: {data.shape[0]} samples at {rate} Hz")
    return Waveform(data.astype(np.float64) / PCM_SCALE, rate)


def write_waveform(w: Waveform, path: Union[str, Path]) -> Path:
    """Write a waveform as mono 16-bit PCM.

    Samples are quantized as round(x * 32768) and clamped to the int16 range,
    so anything produced by load_waveform is written back bit-exactly.
    """
    path = Path(path)
    pcm = np.clip(np.round(w.samples * PCM_SCALE), -32768, 32767).astype(np.int16)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        sf.write(str(path), pcm, w.sample_rate, subtype='PCM_16', format='WAV')
    except Exception as e:
        raise ReportError(f"cannot write audio ({e})", str(path))
    return path


def segment_length(duration_s: float, sample_rate: int) -> int:
    return int(round(duration_s * sample_rate))


def cut_random_segment(w: Waveform, duration_s: float, rng: np.random.Generator) -> Waveform:
    """Cut a segment of exactly round(duration_s * rate) samples at a uniform offset.

    Waveforms shorter than the segment are left-padded with zeros.
    """
    if duration_s <= 0:
        raise ValueError(f"duration_s must be positive, got {duration_s}")

    target = segment_length(duration_s, w.sample_rate)
    n = len(w)
    if n <= target:
        padded = np.zeros(target, dtype=np.float64)
        padded[target - n:] = w.samples
        return w.with_samples(padded)

    offset = int(rng.integers(0, n - target + 1))
    return w.with_samples(w.samples[offset:offset + target])
