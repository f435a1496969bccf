"""Annotated code-mixed corpora: data model, TSV reader/writer, k-fold splits.

File format (UTF-8, LF line endings)::

    ## source = twitter-crawl     <- corpus-level metadata, before any utterance
    # id = 7                      <- utterance metadata, precedes its tokens
    Kolkata<TAB>ne<TAB>NOUN
    jaabo<TAB>bn<TAB>VERB
    <blank line>                  <- utterance boundary

Each token line has two or three TAB-separated fields: FORM, LANG and an
optional POS label.  Any other line starting with ``#`` and containing no TAB
is a comment; a token whose form starts with ``#`` is still data because its
line carries a TAB.
"""
from __future__ import annotations

import enum
import io
import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, TextIO

from .errors import CorpusFormatError

logger = logging.getLogger(__name__)


class LanguageTag(str, enum.Enum):
    EN = "en"
    HI = "hi"
    BN = "bn"
    TE = "te"
    UNIV = "univ"
    MIXED = "mixed"
    ACRO = "acro"
    NE = "ne"
    UNDEF = "undef"

    def __str__(self) -> str:
        return self.value

    @property
    def is_language(self) -> bool:
        return self in LANGUAGE_BEARING


LANGUAGE_BEARING = frozenset({LanguageTag.EN, LanguageTag.HI, LanguageTag.BN, LanguageTag.TE})
LANGUAGE_INDEPENDENT = frozenset(LanguageTag) - LANGUAGE_BEARING

_LANG_BY_NAME = {tag.value: tag for tag in LanguageTag}


class TagsetMode(str, enum.Enum):
    COARSE = "coarse"
    FINE = "fine"
    OPEN = "open"


UNIVERSAL_TAGS = frozenset(
    ["NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", "PUNCT", "X"]
)


def parse_language_tag(value: str) -> LanguageTag:
    try:
        return _LANG_BY_NAME[value]
    except KeyError:
        raise ValueError(f"unknown language tag {value!r}") from None


@dataclass(frozen=True)
class Token:
    form: str
    lang: LanguageTag
    pos: str | None = None

    def __post_init__(self):
        if not isinstance(self.lang, LanguageTag):
            object.__setattr__(self, "lang", parse_language_tag(self.lang))
        if not self.form:
            raise ValueError("token form must be non-empty")
        if self.pos is not None and (not self.pos or any(c.isspace() for c in self.pos)):
            raise ValueError(f"invalid POS label {self.pos!r}")


@dataclass(frozen=True)
class Utterance:
    tokens: tuple[Token, ...]
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "meta", dict(self.meta))
        if not self.tokens:
            raise ValueError("an utterance needs at least one token")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def langs(self) -> list[LanguageTag]:
        return [t.lang for t in self.tokens]

    @property
    def pos_tags(self) -> list[str | None]:
        return [t.pos for t in self.tokens]

    def with_pos(self, labels: Sequence[str]) -> "Utterance":
        if len(labels) != len(self.tokens):
            raise ValueError("label count does not match token count")
        toks = [Token(t.form, t.lang, p) for t, p in zip(self.tokens, labels)]
        return Utterance(toks, self.meta)


@dataclass(frozen=True)
class Corpus:
    utterances: tuple[Utterance, ...]
    meta: Mapping[str, str] = field(default_factory=dict)
    diagnostics: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "utterances", tuple(self.utterances))
        object.__setattr__(self, "meta", dict(self.meta))

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    def __getitem__(self, i):
        return self.utterances[i]

    @property
    def num_tokens(self) -> int:
        return sum(len(u) for u in self.utterances)

    def labels(self) -> list[str]:
        """Distinct POS labels in first-occurrence order."""
        seen = {}
        for utt in self.utterances:
            for tok in utt:
                if tok.pos is not None:
                    seen.setdefault(tok.pos, None)
        return list(seen)


# -- reading -----------------------------------------------------------------


def _parse_meta_line(body: str, lineno: int) -> tuple[str, str] | None:
    key, sep, value = body.partition("=")
    if not sep:
        return None
    key = key.strip()
    if not key:
        raise CorpusFormatError("metadata comment with empty key", lineno)
    return key, value.strip()


def parse_corpus(
    source: str | TextIO | Iterable[str],
    mode: TagsetMode | str = TagsetMode.OPEN,
    strict: bool = False,
) -> Corpus:
    """Parse the TSV corpus format.

    ``source`` may be a string holding the whole file, an open text stream, or
    any iterable of lines.  Unknown language tags raise in strict mode and are
    mapped to ``undef`` otherwise; each such substitution is recorded in
    ``Corpus.diagnostics``.
    """
    mode = TagsetMode(mode)
    if isinstance(source, str):
        source = io.StringIO(source)

    corpus_meta: dict[str, str] = {}
    utterances: list[Utterance] = []
    diagnostics: list[str] = []
    tokens: list[Token] = []
    meta: dict[str, str] = {}
    meta_line = None

    def flush():
        nonlocal tokens, meta, meta_line
        if tokens:
            utterances.append(Utterance(tokens, meta))
            tokens, meta, meta_line = [], {}, None

    for lineno, raw in enumerate(source, start=1):
        line = raw[:-1] if raw.endswith("\n") else raw
        if line.endswith("\r"):
            line = line[:-1]
        if not line.strip() and "\t" not in line:
            flush()
            continue
        if line.startswith("#") and "\t" not in line:
            if line.startswith("##"):
                kv = _parse_meta_line(line[2:], lineno)
                if kv is not None:
                    if utterances or tokens or meta:
                        raise CorpusFormatError("corpus metadata after the first utterance", lineno)
                    corpus_meta[kv[0]] = kv[1]
                continue
            kv = _parse_meta_line(line[1:], lineno)
            if kv is not None:
                if tokens:
                    raise CorpusFormatError("metadata comment inside an utterance", lineno)
                meta[kv[0]] = kv[1]
                meta_line = meta_line or lineno
            continue

        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise CorpusFormatError(f"expected 2 or 3 TAB-separated fields, got {len(fields)}", lineno)
        form, lang_name = fields[0], fields[1]
        pos = fields[2] if len(fields) == 3 else None
        if not form:
            raise CorpusFormatError("empty token form", lineno)
        try:
            lang = parse_language_tag(lang_name)
        except ValueError:
            if strict:
                raise CorpusFormatError(f"unknown language tag {lang_name!r}", lineno) from None
            msg = f"line {lineno}: unknown language tag {lang_name!r} mapped to undef"
            diagnostics.append(msg)
            logger.warning(msg)
            lang = LanguageTag.UNDEF
        if pos is not None:
            if not pos or any(c.isspace() for c in pos):
                raise CorpusFormatError(f"invalid POS label {pos!r}", lineno)
            if mode is TagsetMode.COARSE and pos not in UNIVERSAL_TAGS:
                raise CorpusFormatError(f"label {pos!r} is not in the coarse universal tagset", lineno)
        tokens.append(Token(form, lang, pos))

    flush()
    if meta:
        raise CorpusFormatError("metadata comment not followed by an utterance", meta_line)
    if not utterances:
        raise CorpusFormatError("no utterances")
    return Corpus(utterances, corpus_meta, tuple(diagnostics))


def read_corpus(path, mode: TagsetMode | str = TagsetMode.OPEN, strict: bool = False) -> Corpus:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_corpus(fh, mode=mode, strict=strict)


# -- writing -----------------------------------------------------------------


def _check_meta(key: str, value: str, prefix: str) -> str:
    bad = ("\n", "\r", "\t")
    if (
        not key
        or key != key.strip()
        or "=" in key
        or value != value.strip()
        or any(c in key or c in value for c in bad)
    ):
        raise CorpusFormatError(f"metadata {key!r}={value!r} cannot be written")
    return f"{prefix} {key} = {value}\n"


def write_corpus(corpus: Corpus, out: TextIO | None = None) -> str:
    """Serialize ``corpus``; returns the text and also writes it to ``out`` if given."""
    buf = io.StringIO()
    for k, v in corpus.meta.items():
        buf.write(_check_meta(k, v, "##"))
    for utt in corpus.utterances:
        for k, v in utt.meta.items():
            buf.write(_check_meta(k, v, "#"))
        for tok in utt.tokens:
            if any(c in tok.form for c in "\t\n\r"):
                raise CorpusFormatError(f"token form {tok.form!r} contains TAB or newline")
            if tok.pos is None:
                buf.write(f"{tok.form}\t{tok.lang.value}\n")
            else:
                buf.write(f"{tok.form}\t{tok.lang.value}\t{tok.pos}\n")
        buf.write("\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_corpus(corpus, fh)


# -- splitting ---------------------------------------------------------------


def split_corpus(corpus: Corpus, folds: int, seed: int) -> list[tuple[Corpus, Corpus]]:
    """Utterance-level k-fold partition.

    The permutation comes from ``random.Random(seed)``; held-out part ``k``
    takes a contiguous slice of it, the first ``n % folds`` parts one item
    larger.  Both halves of each pair keep the corpus order.
    """
    n = len(corpus)
    if folds < 2 or folds > n:
        raise ValueError(f"folds must be in [2, {n}], got {folds}")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    base, extra = divmod(n, folds)
    pairs = []
    start = 0
    for k in range(folds):
        size = base + (1 if k < extra else 0)
        held = set(order[start:start + size])
        start += size
        train = [u for i, u in enumerate(corpus.utterances) if i not in held]
        test = [u for i, u in enumerate(corpus.utterances) if i in held]
        pairs.append((Corpus(train, corpus.meta), Corpus(test, corpus.meta)))
    return pairs
