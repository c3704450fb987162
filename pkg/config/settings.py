import os
import yaml
from typing import Dict, Any, Optional

from dotenv import load_dotenv


DEFAULTS: Dict[str, Dict[str, Any]] = {
    'logging': {
        'level': 'INFO',
        'file': 'logs/augsel.log',
        'max_bytes': 10485760,
        'backup_count': 5,
    },
    'scoring': {
        'n_views': 20,
        'epsilon': 1e-3,
        'max_origins': 100,
        'segment_seconds': 1.0,
        'subsample_seed': 0,
    },
    'search': {
        'candidates': 100,
        'workers': 1,
    },
    'analysis': {
        'k': 10,
    },
    'training': {
        'steps': 200,
        'batch_size': 8,
        'learning_rate': 1e-2,
        'hidden_dim': 64,
        'embedding_dim': 64,
        'projection_dim': 32,
        'init_scale': 0.5,
    },
}


class Settings:
    """Configuration management for the augmentation selection toolkit."""

    def __init__(self, config_file: Optional[str] = None):
        load_dotenv()
        self.config_file = config_file or os.getenv('AUGSEL_CONFIG_FILE', 'config/config.yaml')
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file and environment variables."""
        file_config = {}

        # Load from YAML file if exists
        if os.path.exists(self.config_file):
            with open(self.config_file, 'r') as f:
                file_config = yaml.safe_load(f) or {}

        config = {}
        for section, defaults in DEFAULTS.items():
            merged = dict(defaults)
            merged.update(file_config.get(section) or {})
            config[section] = merged

        # Override with environment variables
        config['logging'].update({
            'level': os.getenv('LOG_LEVEL', config['logging']['level']),
            'file': os.getenv('LOG_FILE', config['logging']['file']),
            'max_bytes': int(os.getenv('LOG_MAX_BYTES', config['logging']['max_bytes'])),
            'backup_count': int(os.getenv('LOG_BACKUP_COUNT', config['logging']['backup_count'])),
        })
        config['search']['workers'] = int(os.getenv('AUGSEL_WORKERS', config['search']['workers']))

        return config

    def reload(self, config_file: Optional[str] = None):
        """Re-read configuration, optionally from a different file."""
        if config_file:
            self.config_file = config_file
        self.config = self._load_config()

    def section(self, name: str) -> Dict[str, Any]:
        """Get a copy of one configuration section."""
        return dict(self.config.get(name, {}))

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation."""
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

# Global settings instance
settings = Settings()
