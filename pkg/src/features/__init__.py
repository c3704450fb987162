"""Mel spectrogram features."""

from .mel import MelSpectrogram, mel_spectrogram, pool_mean, pooled_features, mel_band_centers, N_MELS

__all__ = ['MelSpectrogram', 'mel_spectrogram', 'pool_mean', 'pooled_features', 'mel_band_centers', 'N_MELS']
