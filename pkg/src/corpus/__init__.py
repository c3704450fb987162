"""Labeled audio corpus ingestion and segment cutting."""

from .audio import Waveform, load_waveform, write_waveform, cut_random_segment
from .manifest import Dataset, DatasetEntry, load_manifest, write_manifest, load_dataset_audio
from .synthetic import generate_synthetic_corpus, synthesize_example

__all__ = [
    'Waveform',
    'load_waveform',
    'write_waveform',
    'cut_random_segment',
    'Dataset',
    'DatasetEntry',
    'load_manifest',
    'write_manifest',
    'load_dataset_audio',
    'generate_synthetic_corpus',
    'synthesize_example',
]
