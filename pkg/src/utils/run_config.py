"""Resolved run configuration shared by every command."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from config.settings import settings
from .exceptions import ConfigurationError
from .validators import validate_positive_count, validate_positive_float
from ..contrastive.training import TrainingConfig
from ..selector.views import ScoringConfig


@dataclass(frozen=True)
class RunConfig:
    """Settings file values overlaid with command-line flags.

    The dictionary form is embedded in every output a command writes so
    that a run can be reproduced from its outputs alone.
    """

    command: str = ''
    manifest: Optional[str] = None
    out_dir: Optional[str] = None
    seed: int = 0
    n_views: int = 20
    candidates: int = 100
    k: int = 10
    epsilon: float = 1e-3
    max_origins: int = 100
    segment_seconds: float = 1.0
    subsample_seed: int = 0
    workers: int = 1
    training: Dict[str, Any] = field(default_factory=lambda: TrainingConfig().to_dict())

    @classmethod
    def from_settings(cls, command: str = '', **overrides) -> 'RunConfig':
        """Defaults from the settings layer; ``None`` overrides are ignored."""
        scoring = settings.section('scoring')
        values: Dict[str, Any] = {
            'command': command,
            'n_views': scoring.get('n_views', 20),
            'epsilon': scoring.get('epsilon', 1e-3),
            'max_origins': scoring.get('max_origins', 100),
            'segment_seconds': scoring.get('segment_seconds', 1.0),
            'subsample_seed': scoring.get('subsample_seed', 0),
            'candidates': settings.get('search.candidates', 100),
            'workers': settings.get('search.workers', 1),
            'k': settings.get('analysis.k', 10),
        }
        training = TrainingConfig().to_dict()
        training.update({k: v for k, v in settings.section('training').items() if k in training})

        training_overrides = overrides.pop('training', None) or {}
        training.update({k: v for k, v in training_overrides.items() if v is not None})
        values['training'] = training
        values.update({k: v for k, v in overrides.items() if v is not None})

        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigurationError(f"invalid run configuration: {e}")

    def validate(self) -> 'RunConfig':
        for name in ('n_views', 'candidates', 'k', 'max_origins', 'workers'):
            if not validate_positive_count(getattr(self, name)):
                raise ConfigurationError(f"{name} must be a positive integer, got {getattr(self, name)}")
        if not validate_positive_float(self.epsilon):
            raise ConfigurationError(f"epsilon must be > 0, got {self.epsilon}")
        if not validate_positive_float(self.segment_seconds):
            raise ConfigurationError(f"segment_seconds must be > 0, got {self.segment_seconds}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or self.seed < 0:
            raise ConfigurationError(f"seed must be a non-negative integer, got {self.seed}")
        self.training_config()
        return self

    def scoring_config(self) -> ScoringConfig:
        return ScoringConfig(
            n_views=self.n_views,
            epsilon=self.epsilon,
            max_origins=self.max_origins,
            segment_seconds=self.segment_seconds,
            subsample_seed=self.subsample_seed,
        )

    def training_config(self) -> TrainingConfig:
        return TrainingConfig.from_dict(self.training)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
