"""Binary model container.

Layout (all integers unsigned little-endian, reals IEEE-754 float64 LE)::

    magic        6 bytes  b"CMXCRF"
    version      u16      1
    window       u32
    max_ngram    u32
    min_count    u32
    use_lang     u8
    L            u32      then L x (u32 byte length, UTF-8 label)
    F            u32      then F x (u32 byte length, UTF-8 name, u64 count)
    nnz          u64      then nnz x (u32 feature id, u32 label id, f64 value)
    trans        L*L f64  row-major, from-label x to-label
    bos          L f64
    eos          L f64

Only non-zero state weights are stored; triples are ordered by feature id,
then label id.
"""
from __future__ import annotations

import struct

import numpy as np

from ..errors import ModelFormatError
from ..features import FeatureConfig, FeatureIndex
from .model import CrfModel

MAGIC = b"CMXCRF"
VERSION = 1

_TRIPLE = np.dtype([("fid", "<u4"), ("lid", "<u4"), ("value", "<f8")])


def save_model(model: CrfModel) -> bytes:
    out = bytearray()
    cfg = model.config
    out += MAGIC
    out += struct.pack("<HIIIB", VERSION, cfg.window, cfg.max_ngram, cfg.min_count, int(cfg.use_lang))
    out += struct.pack("<I", model.num_labels)
    for label in model.labels:
        b = label.encode("utf-8")
        out += struct.pack("<I", len(b)) + b
    index = model.feature_index
    out += struct.pack("<I", len(index))
    for name, count in zip(index.names, index.counts):
        b = name.encode("utf-8")
        out += struct.pack("<I", len(b)) + b + struct.pack("<Q", count)
    fids, lids = np.nonzero(model.state_weights)
    triples = np.empty(len(fids), dtype=_TRIPLE)
    triples["fid"] = fids
    triples["lid"] = lids
    triples["value"] = model.state_weights[fids, lids]
    out += struct.pack("<Q", len(triples))
    out += triples.tobytes()
    for block in (model.trans_weights, model.bos_weights, model.eos_weights):
        out += np.ascontiguousarray(block, dtype="<f8").tobytes()
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(data)
        self.pos = 0

    def take(self, n: int, what: str) -> memoryview:
        if self.pos + n > len(self.data):
            raise ModelFormatError(f"truncated model: unexpected end of data while reading {what}")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def string(self, what: str) -> str:
        (n,) = self.unpack("<I", what)
        try:
            return bytes(self.take(n, what)).decode("utf-8")
        except UnicodeDecodeError:
            raise ModelFormatError(f"invalid UTF-8 in {what}") from None

    def floats(self, n: int, what: str) -> np.ndarray:
        return np.frombuffer(self.take(8 * n, what), dtype="<f8").astype(np.float64)


def load_model(data: bytes) -> CrfModel:
    r = _Reader(bytes(data))
    if bytes(r.take(len(MAGIC), "magic")) != MAGIC:
        raise ModelFormatError("bad magic: not a CMXCRF model")
    version, window, max_ngram, min_count, use_lang = r.unpack("<HIIIB", "header")
    if version != VERSION:
        raise ModelFormatError(f"unsupported model format version {version}")
    try:
        config = FeatureConfig(window, max_ngram, min_count, bool(use_lang))
    except ValueError as e:
        raise ModelFormatError(f"invalid feature config: {e}") from None

    (L,) = r.unpack("<I", "label count")
    labels = [r.string("label") for _ in range(L)]
    (F,) = r.unpack("<I", "feature count")
    names, counts = [], []
    for _ in range(F):
        names.append(r.string("feature name"))
        counts.append(r.unpack("<Q", "feature count")[0])

    (nnz,) = r.unpack("<Q", "state weight count")
    if nnz > F * L:
        raise ModelFormatError("more state weights than feature/label pairs")
    triples = np.frombuffer(r.take(_TRIPLE.itemsize * nnz, "state weights"), dtype=_TRIPLE)
    if nnz and (triples["fid"].max() >= F or triples["lid"].max() >= L):
        raise ModelFormatError("state weight refers to an unknown feature or label")
    state = np.zeros((F, L))
    state[triples["fid"], triples["lid"]] = triples["value"]
    trans = r.floats(L * L, "transition weights").reshape(L, L)
    bos = r.floats(L, "bos weights")
    eos = r.floats(L, "eos weights")
    if r.pos != len(r.data):
        raise ModelFormatError(f"{len(r.data) - r.pos} trailing bytes after model")

    try:
        return CrfModel(tuple(labels), FeatureIndex(names, counts), state, trans, bos, eos, config)
    except ValueError as e:
        raise ModelFormatError(f"invalid model: {e}") from None


def write_model(model: CrfModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save_model(model))


def read_model(path) -> CrfModel:
    with open(path, "rb") as fh:
        return load_model(fh.read())
