"""Pytest fixtures for augmentation selection tests."""

import pytest
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List

import numpy as np


def pytest_configure(config):
    """Register custom pytest marks."""
    config.addinivalue_line(
        "markers", "unit: Unit tests"
    )
    config.addinivalue_line(
        "markers", "integration: Integration tests"
    )
    config.addinivalue_line(
        "markers", "slow: Slow running tests"
    )

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.augment.distribution import AugDistribution, no_augmentation, sample_distribution
from src.corpus.audio import Waveform
from src.corpus.manifest import load_dataset_audio, load_manifest
from src.corpus.synthetic import generate_synthetic_corpus
from src.kernelstats.dependence import DependenceScore
from src.selector.search import ScoredCandidate, SearchResult
from src.selector.views import ScoringConfig

SAMPLE_RATE = 16000


@pytest.fixture
def rng():
    """Deterministic random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def sine_factory() -> Callable[..., Waveform]:
    """Build a sine waveform: sine_factory(freq_hz, duration_s=1.0, amplitude=0.5)."""
    def make(freq_hz: float, duration_s: float = 1.0, amplitude: float = 0.5,
             sample_rate: int = SAMPLE_RATE) -> Waveform:
        t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
        return Waveform(amplitude * np.sin(2 * np.pi * freq_hz * t), sample_rate)
    return make


@pytest.fixture
def noise_factory() -> Callable[..., Waveform]:
    """Build zero-mean noise bounded by 0.9: noise_factory(seed, duration_s=1.0)."""
    def make(seed: int, duration_s: float = 1.0, sample_rate: int = SAMPLE_RATE) -> Waveform:
        x = np.random.default_rng(seed).standard_normal(int(round(duration_s * sample_rate)))
        x -= x.mean()
        return Waveform(0.9 * x / np.max(np.abs(x)), sample_rate)
    return make


@pytest.fixture
def small_corpus(tmp_path) -> Path:
    """Two-class synthetic corpus (6 files per class) written to tmp_path."""
    return generate_synthetic_corpus(tmp_path / 'corpus', n_per_class=6, seed=7,
                                     duration_range=(1.2, 1.6))


@pytest.fixture
def small_dataset(small_corpus):
    ds = load_manifest(small_corpus)
    return ds, load_dataset_audio(ds)


@pytest.fixture
def scoring_config() -> ScoringConfig:
    """Scoring settings small enough for unit tests."""
    return ScoringConfig(n_views=3, epsilon=1e-3, max_origins=100)


@pytest.fixture
def search_result_factory() -> Callable[..., SearchResult]:
    """Build a SearchResult from explicit scores; distributions drawn from the seed."""
    def make(scores: List[float], seed: int = 0, distributions: List[AugDistribution] = None) -> SearchResult:
        gen = np.random.default_rng(seed)
        if distributions is None:
            distributions = [sample_distribution(gen) for _ in scores]
        candidates = tuple(
            ScoredCandidate(index=i, distribution=d, score=DependenceScore(s, 60, 1e-3), seed=1000 + i)
            for i, (d, s) in enumerate(zip(distributions, scores))
        )
        return SearchResult(candidates, {'scoring': ScoringConfig().to_dict(), 'master_seed': seed})
    return make


@pytest.fixture
def identity_distribution() -> AugDistribution:
    return no_augmentation()
