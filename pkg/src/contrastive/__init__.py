"""Desk-scale contrastive pretraining."""

from .encoder import (
    EncoderParams,
    TRAINABLE,
    init_params,
    fit_input_normalization,
    encode,
    project,
    bilinear_similarity,
)
from .objective import (
    SegmentPair,
    contrastive_batch_loss,
    loss_from_similarities,
    similarity_matrix,
    loss_and_gradients,
    grad_check,
)
from .training import (
    TrainingConfig,
    ToyTrainer,
    make_training_pair,
    train_step,
    embed_utterance,
    segment_offsets,
    save_checkpoint,
    load_checkpoint,
)

__all__ = [
    'EncoderParams',
    'TRAINABLE',
    'init_params',
    'fit_input_normalization',
    'encode',
    'project',
    'bilinear_similarity',
    'SegmentPair',
    'contrastive_batch_loss',
    'loss_from_similarities',
    'similarity_matrix',
    'loss_and_gradients',
    'grad_check',
    'TrainingConfig',
    'ToyTrainer',
    'make_training_pair',
    'train_step',
    'embed_utterance',
    'segment_offsets',
    'save_checkpoint',
    'load_checkpoint',
]
