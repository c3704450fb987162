"""Bundled synthetic corpus: classes of band-limited noise and tones.

Classes differ only in spectral band. Each file gets its own gain and a weak
tone inside its class band, so the origin of a segment is recoverable from
its spectrum while the label is not recoverable from loudness.
"""

from pathlib import Path
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy import signal

from .audio import Waveform, write_waveform
from .manifest import DatasetEntry, write_manifest
from ..utils.logger import get_logger

logger = get_logger(__name__)

# label -> (band low Hz, band high Hz, kind)
SYNTHETIC_CLASSES: Dict[str, Tuple[float, float, str]] = {
    'low': (300.0, 1200.0, 'noise'),
    'high': (2500.0, 5000.0, 'noise'),
    'tone': (500.0, 3000.0, 'tone'),
}


def synthesize_example(label: str, rng: np.random.Generator, duration_s: float = 2.0,
                       sample_rate: int = 16000) -> Waveform:
    """Synthesize one waveform for a synthetic class."""
    if label not in SYNTHETIC_CLASSES:
        raise ValueError(f"unknown synthetic class '{label}'")
    low, high, kind = SYNTHETIC_CLASSES[label]
    n = int(round(duration_s * sample_rate))
    t = np.arange(n) / sample_rate

    tone_hz = rng.uniform(low, high)
    tone = np.sin(2 * np.pi * tone_hz * t + rng.uniform(0, 2 * np.pi))
    if kind == 'noise':
        sos = signal.butter(4, [low, high], btype='bandpass', fs=sample_rate, output='sos')
        noise = signal.sosfilt(sos, rng.standard_normal(n))
        noise /= max(np.max(np.abs(noise)), 1e-12)
        x = noise + 0.3 * tone
    else:
        harmonic = np.sin(2 * np.pi * 2 * tone_hz * t) if 2 * tone_hz < sample_rate / 2 else 0.0
        x = tone + 0.25 * harmonic + 0.02 * rng.standard_normal(n)

    gain = rng.uniform(0.3, 0.8)
    x = gain * x / max(np.max(np.abs(x)), 1e-12)
    return Waveform(x, sample_rate)


def generate_synthetic_corpus(out_dir: Union[str, Path], n_per_class: int = 20,
                              classes: Sequence[str] = ('low', 'high'), seed: int = 0,
                              duration_range: Tuple[float, float] = (1.5, 2.5),
                              sample_rate: int = 16000) -> Path:
    """Write the synthetic corpus as 16-bit WAV files plus ``manifest.jsonl``."""
    out_dir = Path(out_dir)
    audio_dir = out_dir / 'audio'
    rng = np.random.default_rng(seed)

    entries = []
    for label in classes:
        for i in range(n_per_class):
            duration = rng.uniform(*duration_range)
            w = synthesize_example(label, rng, duration, sample_rate)
            file_name = f"{label}_{i:03d}.wav"
            write_waveform(w, audio_dir / file_name)
            entries.append(DatasetEntry(id=f"{label}_{i:03d}", path=f"audio/{file_name}", label=label))

    manifest = write_manifest(entries, out_dir / 'manifest.jsonl')
    logger.info(f"Wrote synthetic corpus: {len(entries)} files, classes {list(classes)} -> {manifest}")
    return manifest
