"""CRF part-of-speech tagging and Code-Mixing Index statistics for code-mixed text."""
from .cmi import CmiReport, corpus_cmi_report, utterance_cmi
from .corpus import (
    Corpus,
    LanguageTag,
    TagsetMode,
    Token,
    Utterance,
    parse_corpus,
    read_corpus,
    save_corpus,
    split_corpus,
    write_corpus,
)
from .crf import CrfModel, TrainConfig, load_model, save_model, train
from .features import FeatureConfig

__version__ = "0.1.0"
