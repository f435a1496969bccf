"""Regularised maximum-likelihood training.

Objective (summed over sequences, not averaged)::

    sum_i [log Z(x_i) - score(x_i, y_i)] + c2/2 * ||w||^2 + c1 * ||w||_1

Every parameter block (state, transition, bos, eos) is regularised.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..corpus import Corpus
from ..errors import TrainingError
from ..features import FeatureConfig, build_feature_index, sequence_features
from ._backend import get_kernels
from .model import CrfModel, SequenceInstance
from .optimize import minimize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    c1: float = 0.05
    c2: float = 0.1
    max_iterations: int = 200
    tolerance: float = 1e-5
    features: FeatureConfig = field(default_factory=FeatureConfig)

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("regularisation coefficients must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


class TrainingData:
    """Gold-labelled instances packed into flat arrays for the kernels."""

    def __init__(self, instances: Sequence[SequenceInstance], num_features: int, num_labels: int):
        if not instances:
            raise ValueError("no training instances")
        for inst in instances:
            if inst.gold is None:
                raise ValueError("training instance without gold labels")
            if len(inst) == 0:
                raise ValueError("empty training instance")
        self.num_features = num_features
        self.num_labels = num_labels
        self.feat_ids = np.ascontiguousarray(np.concatenate([i.feat_ids for i in instances]), dtype=np.int32)
        self.labels = np.ascontiguousarray(np.concatenate([i.gold for i in instances]), dtype=np.int32)
        if self.feat_ids.size and (self.feat_ids.min() < 0 or self.feat_ids.max() >= num_features):
            raise ValueError("feature id out of range")
        if self.labels.min() < 0 or self.labels.max() >= num_labels:
            raise ValueError("label id out of range")
        counts = np.concatenate([np.diff(i.offsets) for i in instances])
        self.tok_off = np.zeros(len(counts) + 1, dtype=np.int64)
        np.cumsum(counts, out=self.tok_off[1:])
        lengths = [len(i) for i in instances]
        self.seq_off = np.zeros(len(lengths) + 1, dtype=np.int64)
        np.cumsum(lengths, out=self.seq_off[1:])

    @property
    def num_weights(self) -> int:
        F, L = self.num_features, self.num_labels
        return F * L + L * L + 2 * L


def unpack_weights(w: np.ndarray, num_features: int, num_labels: int):
    """Views ``(state, trans, bos, eos)`` into a flat weight vector."""
    F, L = num_features, num_labels
    a, b, c = F * L, F * L + L * L, F * L + L * L + L
    if w.shape != (c + L,):
        raise ValueError(f"weight vector has shape {w.shape}, expected {(c + L,)}")
    return w[:a].reshape(F, L), w[a:b].reshape(L, L), w[b:c], w[c:]


def pack_weights(state, trans, bos, eos) -> np.ndarray:
    return np.concatenate([np.ravel(state), np.ravel(trans), bos, eos]).astype(np.float64)


def objective_and_gradient(weights: np.ndarray, data: TrainingData, c2: float = 0.0, backend: str | None = None):
    """Smooth part of the training objective and its gradient.

    The gradient is expected minus empirical feature counts plus ``c2 * w``;
    the L1 term is left to the optimiser.
    """
    w = np.ascontiguousarray(weights, dtype=np.float64)
    state, trans, bos, eos = unpack_weights(w, data.num_features, data.num_labels)
    grad = np.zeros_like(w)
    g_state, g_trans, g_bos, g_eos = unpack_weights(grad, data.num_features, data.num_labels)
    value = get_kernels(backend).nll_grad(
        state, trans, bos, eos,
        data.feat_ids, data.tok_off, data.seq_off, data.labels,
        g_state, g_trans, g_bos, g_eos,
    )
    if c2:
        value += 0.5 * c2 * w.dot(w)
        grad += c2 * w
    return float(value), grad


def train(corpus: Corpus, config: TrainConfig = TrainConfig(), backend: str | None = None) -> CrfModel:
    """Fit a CRF to a POS-labelled corpus.

    Labels are ordered lexicographically; feature ids follow first
    occurrence in the corpus.
    """
    if len(corpus) == 0:
        raise TrainingError("empty training corpus")
    for u_idx, utt in enumerate(corpus.utterances):
        for t_idx, tok in enumerate(utt.tokens):
            if tok.pos is None:
                raise TrainingError(f"utterance {u_idx + 1}, token {t_idx + 1} ({tok.form!r}) has no POS label")

    fc = config.features
    feats = [sequence_features(u, fc) for u in corpus.utterances]
    try:
        index = build_feature_index((f for seq in feats for f in seq), fc.min_count)
    except ValueError as e:
        raise TrainingError(str(e)) from None
    labels = sorted(corpus.labels())
    label_ids = {lab: i for i, lab in enumerate(labels)}
    instances = [
        SequenceInstance.from_id_lists(
            [index.lookup(f) for f in seq], [label_ids[t.pos] for t in utt.tokens]
        )
        for seq, utt in zip(feats, corpus.utterances)
    ]
    data = TrainingData(instances, len(index), len(labels))
    logger.info(
        "training: %d sequences, %d tokens, %d labels, %d features",
        len(instances), len(data.labels), len(labels), len(index),
    )

    def fun_grad(w):
        return objective_and_gradient(w, data, config.c2, backend)

    result = minimize(
        fun_grad,
        np.zeros(data.num_weights),
        c1=config.c1,
        max_iter=config.max_iterations,
        tol=config.tolerance,
    )
    logger.info("optimiser: %s after %d iterations, objective %.6f", result.message, result.n_iter, result.fun)
    state, trans, bos, eos = unpack_weights(result.x, len(index), len(labels))
    return CrfModel(tuple(labels), index, state, trans, bos, eos, fc)
