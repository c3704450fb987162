"""Log-Mel spectrograms and time-pooled Mel vectors."""

from dataclasses import dataclass
from functools import lru_cache

import librosa
import numpy as np
from scipy import signal

from ..corpus.audio import Waveform

SAMPLE_RATE = 16000
N_MELS = 64
N_FFT = 512
FRAME_SIZE_MS = 25
HOP_MS = 10
WINDOW_SAMPLES = SAMPLE_RATE * FRAME_SIZE_MS // 1000
HOP_SAMPLES = SAMPLE_RATE * HOP_MS // 1000
LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class MelSpectrogram:
    """frames x 64 matrix of natural-log Mel energies."""

    values: np.ndarray
    frame_size_ms: int = FRAME_SIZE_MS
    hop_ms: int = HOP_MS

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]


@lru_cache(maxsize=1)
def mel_filterbank() -> np.ndarray:
    """64 triangular HTK-scale filters over 0-8000 Hz for a 512-point FFT."""
    return librosa.filters.mel(sr=SAMPLE_RATE, n_fft=N_FFT, n_mels=N_MELS, fmin=0.0,
                               fmax=SAMPLE_RATE / 2, htk=True, norm=None).astype(np.float64)


def mel_band_centers() -> np.ndarray:
    """Center frequencies of the 64 Mel filters in Hz."""
    edges = librosa.mel_frequencies(n_mels=N_MELS + 2, fmin=0.0, fmax=SAMPLE_RATE / 2, htk=True)
    return edges[1:-1]


def frame_count(num_samples: int) -> int:
    return (num_samples - WINDOW_SAMPLES) // HOP_SAMPLES + 1


def mel_spectrogram(w: Waveform) -> MelSpectrogram:
    if w.sample_rate != SAMPLE_RATE:
        raise ValueError(f"expected {SAMPLE_RATE} Hz audio, got {w.sample_rate} Hz")
    if len(w) < WINDOW_SAMPLES:
        raise ValueError(f"waveform too short: {len(w)} samples, need at least {WINDOW_SAMPLES}")

    n_frames = frame_count(len(w))
    starts = np.arange(n_frames) * HOP_SAMPLES
    frames = w.samples[starts[:, None] + np.arange(WINDOW_SAMPLES)[None, :]]
    window = signal.get_window('hann', WINDOW_SAMPLES)

    spectrum = np.fft.rfft(frames * window, n=N_FFT, axis=1)
    power = spectrum.real ** 2 + spectrum.imag ** 2
    mel_power = power @ mel_filterbank().T
    return MelSpectrogram(np.log(mel_power + LOG_FLOOR))


def pool_mean(m: MelSpectrogram) -> np.ndarray:
    """Per-band mean over frames."""
    if m.values.shape[0] == 0:
        raise ValueError("cannot pool an empty spectrogram")
    return m.values.mean(axis=0)


def pooled_features(w: Waveform) -> np.ndarray:
    return pool_mean(mel_spectrogram(w))
