"""Linear-chain CRF: inference, training and persistence."""
from ._backend import BACKEND, available_backends, get_kernels
from .io import load_model, read_model, save_model, write_model
from .model import (
    CrfModel,
    SequenceInstance,
    backward_log_partition,
    log_partition,
    posterior_marginals,
    score_sequence,
    viterbi_decode,
)
from .train import TrainConfig, TrainingData, objective_and_gradient, pack_weights, train, unpack_weights

__all__ = [
    "BACKEND",
    "CrfModel",
    "SequenceInstance",
    "TrainConfig",
    "TrainingData",
    "available_backends",
    "backward_log_partition",
    "get_kernels",
    "load_model",
    "log_partition",
    "objective_and_gradient",
    "pack_weights",
    "posterior_marginals",
    "read_model",
    "save_model",
    "score_sequence",
    "train",
    "unpack_weights",
    "viterbi_decode",
    "write_model",
]
