"""CRF model container and exact inference.

Score of a labeling ``y`` of a ``T``-token instance::

    bos[y0] + sum_t state_score(t, y_t) + sum_{t>=1} trans[y_{t-1}, y_t] + eos[y_{T-1}]

where ``state_score(t, y)`` sums ``state[f, y]`` over the active feature ids
``f`` at position ``t``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..corpus import Corpus, Utterance
from ..features import FeatureConfig, FeatureIndex, sequence_features
from ._backend import get_kernels


@dataclass(frozen=True)
class SequenceInstance:
    """Feature ids per position, flattened: position ``t`` owns
    ``feat_ids[offsets[t]:offsets[t + 1]]``."""

    feat_ids: np.ndarray
    offsets: np.ndarray
    gold: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "feat_ids", np.ascontiguousarray(self.feat_ids, dtype=np.int32))
        object.__setattr__(self, "offsets", np.ascontiguousarray(self.offsets, dtype=np.int64))
        if self.gold is not None:
            gold = np.ascontiguousarray(self.gold, dtype=np.int32)
            if len(gold) != len(self):
                raise ValueError("gold labels and positions differ in length")
            object.__setattr__(self, "gold", gold)

    def __len__(self) -> int:
        return len(self.offsets) - 1

    @classmethod
    def from_id_lists(cls, ids_per_position: Sequence[Sequence[int]], gold=None) -> "SequenceInstance":
        lengths = [len(ids) for ids in ids_per_position]
        offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        flat = [i for ids in ids_per_position for i in ids]
        return cls(np.asarray(flat, dtype=np.int32), offsets, gold)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64, order="C", copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CrfModel:
    labels: tuple[str, ...]
    feature_index: FeatureIndex
    state_weights: np.ndarray  # (F, L)
    trans_weights: np.ndarray  # (L, L), from-label x to-label
    bos_weights: np.ndarray
    eos_weights: np.ndarray
    config: FeatureConfig = field(default_factory=FeatureConfig)

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels or len(set(labels)) != len(labels):
            raise ValueError("labels must be non-empty and duplicate-free")
        L, F = len(labels), len(self.feature_index)
        object.__setattr__(self, "labels", labels)
        for name, shape in (
            ("state_weights", (F, L)),
            ("trans_weights", (L, L)),
            ("bos_weights", (L,)),
            ("eos_weights", (L,)),
        ):
            arr = _frozen(getattr(self, name))
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)

    @property
    def num_labels(self) -> int:
        return len(self.labels)

    @property
    def num_features(self) -> int:
        return len(self.feature_index)

    def label_id(self, label: str) -> int:
        return self.labels.index(label)

    def instance(self, utterance: Utterance, with_gold: bool = False) -> SequenceInstance:
        """Map an utterance to feature ids, dropping features unseen in training."""
        feats = sequence_features(utterance, self.config)
        ids = [self.feature_index.lookup(f) for f in feats]
        gold = None
        if with_gold:
            index = {lab: i for i, lab in enumerate(self.labels)}
            gold = [index[t.pos] for t in utterance.tokens]
        return SequenceInstance.from_id_lists(ids, gold)

    def emissions(self, instance: SequenceInstance, backend: str | None = None) -> np.ndarray:
        ids = instance.feat_ids
        if ids.size and (ids.min() < 0 or ids.max() >= self.num_features):
            raise ValueError("instance refers to feature ids outside the model")
        return get_kernels(backend).emissions(self.state_weights, instance.feat_ids, instance.offsets)

    def tag(self, utterance: Utterance) -> list[str]:
        path, _ = viterbi_decode(self, self.instance(utterance))
        return [self.labels[i] for i in path]

    def tag_corpus(self, corpus: Corpus) -> Corpus:
        return Corpus([u.with_pos(self.tag(u)) for u in corpus], corpus.meta)


def _path_score(emit, trans, bos, eos, labels) -> float:
    y = [int(v) for v in labels]
    s = float(bos[y[0]]) + float(emit[0, y[0]])
    for t in range(1, len(y)):
        s += float(trans[y[t - 1], y[t]])
        s += float(emit[t, y[t]])
    return s + float(eos[y[-1]])


def score_sequence(
    model: CrfModel, instance: SequenceInstance, labels: Sequence[int], backend: str | None = None
) -> float:
    if len(labels) != len(instance) or len(instance) == 0:
        raise ValueError(f"{len(labels)} labels for an instance of length {len(instance)}")
    emit = model.emissions(instance, backend)
    return _path_score(emit, model.trans_weights, model.bos_weights, model.eos_weights, labels)


def log_partition(model: CrfModel, instance: SequenceInstance, backend: str | None = None) -> float:
    k = get_kernels(backend)
    emit = model.emissions(instance, backend)
    _, logz = k.forward(emit, model.trans_weights, model.bos_weights, model.eos_weights)
    return logz


def backward_log_partition(model: CrfModel, instance: SequenceInstance, backend: str | None = None) -> float:
    """log Z recomputed from the backward recursion (consistency check)."""
    k = get_kernels(backend)
    emit = model.emissions(instance, backend)
    _, logz = k.backward(emit, model.trans_weights, model.bos_weights, model.eos_weights)
    return logz


def posterior_marginals(model: CrfModel, instance: SequenceInstance, backend: str | None = None):
    """Per-position label marginals ``(T, L)`` and edge marginals ``(T-1, L, L)``."""
    k = get_kernels(backend)
    trans = model.trans_weights
    emit = model.emissions(instance, backend)
    alpha, logz = k.forward(emit, trans, model.bos_weights, model.eos_weights)
    beta, _ = k.backward(emit, trans, model.bos_weights, model.eos_weights)
    node = np.exp(alpha + beta - logz)
    edge = np.exp(alpha[:-1, :, None] + trans[None] + (emit[1:] + beta[1:])[:, None, :] - logz)
    return node, edge


def viterbi_decode(model: CrfModel, instance: SequenceInstance, backend: str | None = None):
    """Best labeling and its score.

    Among equal-scoring labelings the lexicographically smallest label-id
    sequence wins.
    """
    if len(instance) == 0:
        raise ValueError("cannot decode an empty instance")
    k = get_kernels(backend)
    emit = model.emissions(instance, backend)
    path = k.viterbi(emit, model.trans_weights, model.bos_weights, model.eos_weights)
    path = [int(v) for v in path]
    return path, _path_score(emit, model.trans_weights, model.bos_weights, model.eos_weights, path)
