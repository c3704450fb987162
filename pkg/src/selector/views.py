"""Augmented view sets X' = f(X, tau) with pretext and downstream labels."""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ..augment.chain import apply_chain, sample_chain
from ..augment.distribution import AugDistribution
from ..corpus.audio import Waveform, cut_random_segment
from ..corpus.manifest import Dataset, load_dataset_audio
from ..features.mel import N_MELS, pooled_features
from ..utils.exceptions import ConfigurationError
from ..utils.logger import get_logger
from ..utils.validators import validate_positive_count, validate_positive_float

logger = get_logger(__name__)


@dataclass(frozen=True)
class ScoringConfig:
    """Settings that make dependence scores comparable with each other."""

    n_views: int = 20
    epsilon: float = 1e-3
    max_origins: int = 100
    segment_seconds: float = 1.0
    subsample_seed: int = 0

    def __post_init__(self):
        if not validate_positive_count(self.n_views):
            raise ConfigurationError(f"n_views must be a positive integer, got {self.n_views}")
        if not validate_positive_count(self.max_origins):
            raise ConfigurationError(f"max_origins must be a positive integer, got {self.max_origins}")
        if not validate_positive_float(self.epsilon):
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")
        if not validate_positive_float(self.segment_seconds):
            raise ConfigurationError(f"segment_seconds must be positive, got {self.segment_seconds}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: Mapping[str, Any]) -> 'ScoringConfig':
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in record.items() if k in names})


@dataclass(frozen=True)
class ViewSet:
    """Pooled log-Mel features of augmented segments and their labels."""

    features: np.ndarray
    origin_ids: Tuple[str, ...]
    downstream_labels: Tuple[str, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != N_MELS:
            raise ValueError(f"features must be (n, {N_MELS}), got {features.shape}")
        if not (features.shape[0] == len(self.origin_ids) == len(self.downstream_labels)):
            raise ValueError("features, origin_ids and downstream_labels differ in length")
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'origin_ids', tuple(self.origin_ids))
        object.__setattr__(self, 'downstream_labels', tuple(self.downstream_labels))

    def __len__(self) -> int:
        return len(self.origin_ids)


def generate_views(ds: Dataset, d: AugDistribution, n_views: int, rng: np.random.Generator,
                   audio: Optional[Mapping[str, Waveform]] = None,
                   segment_seconds: float = 1.0) -> ViewSet:
    """Cut n_views random segments per sample and augment each with its own chain."""
    if not validate_positive_count(n_views):
        raise ConfigurationError(f"n_views must be a positive integer, got {n_views}")
    if len(ds) == 0:
        raise ConfigurationError("cannot generate views from an empty dataset")
    if audio is None:
        audio = load_dataset_audio(ds)

    features = []
    origin_ids = []
    labels = []
    for entry in ds.entries:
        waveform = audio[entry.id]
        for _ in range(n_views):
            segment = cut_random_segment(waveform, segment_seconds, rng)
            chain = sample_chain(d, rng)
            features.append(pooled_features(apply_chain(chain, segment)))
            origin_ids.append(entry.id)
            labels.append(entry.label)

    logger.debug(f"Generated {len(features)} views from {len(ds)} samples")
    return ViewSet(np.vstack(features), tuple(origin_ids), tuple(labels))
