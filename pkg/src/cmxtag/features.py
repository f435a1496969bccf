"""Feature templates for code-mixed social-media tokens.

Feature names are flat strings, ``name[offset]=value`` for valued templates
and ``name[offset]`` for binary ones, e.g. ``w[-1]=bhai``, ``istitle[0]``,
``pat[+2]=url``.  Character n-grams (``ng=...``) are taken from the focus
token only, over ``^`` + lowercased form + ``$`` so that prefixes and
suffixes stay distinct from interior grams.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, fields
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .corpus import Utterance

EMOTICON_ENV = "CMXTAG_EMOTICONS"

_NUMBER_RE = re.compile(r"[+-]?[0-9]+(?:\.[0-9]+)?")
_MENTION_RE = re.compile(r"@\w")
_HASHTAG_RE = re.compile(r"#\w")

# pictographic blocks; modifiers below may accompany them but never stand alone
_EMOJI_RANGES = (
    (0x1F1E6, 0x1F1FF),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
    (0x2600, 0x26FF),
    (0x2700, 0x27BF),
)
_EMOJI_MODIFIERS = frozenset({0x200D, 0xFE0F})


@dataclass(frozen=True)
class FeatureConfig:
    window: int = 2
    max_ngram: int = 3
    min_count: int = 1
    use_lang: bool = True

    def __post_init__(self):
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if self.max_ngram < 1:
            raise ValueError("max_ngram must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")


@dataclass(frozen=True)
class PatternFlags:
    is_url: bool = False
    is_email: bool = False
    is_number: bool = False
    is_punct: bool = False
    is_emoticon: bool = False
    is_mention: bool = False
    is_hashtag: bool = False

    def names(self) -> list[str]:
        """Short names of the flags that are set, in declaration order."""
        return [f.name[3:] for f in fields(self) if getattr(self, f.name)]


def load_emoticons(path=None) -> frozenset[str]:
    """Read an emoticon lexicon (one entry per line, ``# `` comments).

    Without ``path`` the file named by ``$CMXTAG_EMOTICONS`` is used, falling
    back to the lexicon shipped with the package.
    """
    path = path or os.environ.get(EMOTICON_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = resources.files("cmxtag").joinpath("data/emoticons.txt").read_text(encoding="utf-8")
    entries = (line.strip() for line in text.splitlines())
    return frozenset(e for e in entries if e and not e.startswith("# "))


@lru_cache(maxsize=1)
def default_emoticons() -> frozenset[str]:
    return load_emoticons()


def _is_emoji(form: str) -> bool:
    found = False
    for ch in form:
        cp = ord(ch)
        if cp in _EMOJI_MODIFIERS:
            continue
        if not any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES):
            return False
        found = True
    return found


def _is_email(form: str) -> bool:
    if form.count("@") != 1:
        return False
    local, _, domain = form.partition("@")
    return bool(local) and "." in domain


def classify_pattern(form: str, emoticons: frozenset[str] | None = None) -> PatternFlags:
    if emoticons is None:
        emoticons = default_emoticons()
    url = form.startswith(("http://", "https://", "www."))
    email = _is_email(form)
    number = _NUMBER_RE.fullmatch(form.replace(",", "")) is not None
    emoticon = form in emoticons or _is_emoji(form)
    mention = _MENTION_RE.match(form) is not None
    hashtag = _HASHTAG_RE.match(form) is not None
    punct = (
        not (url or email or number or emoticon or mention or hashtag)
        and all(not c.isalnum() and not c.isspace() for c in form)
    )
    return PatternFlags(url, email, number, punct, emoticon, mention, hashtag)


def char_ngrams(form: str, max_n: int) -> list[str]:
    s = "^" + form.lower() + "$"
    grams = {}
    for n in range(1, max_n + 1):
        for i in range(len(s) - n + 1):
            grams.setdefault(s[i:i + n], None)
    return list(grams)


def _offset(delta: int) -> str:
    return "0" if delta == 0 else f"{delta:+d}"


def _local_templates(utterance: Utterance, use_lang: bool) -> list[list[tuple[str, str | None]]]:
    out = []
    emoticons = default_emoticons()
    for tok in utterance.tokens:
        form = tok.form
        t: list[tuple[str, str | None]] = [("w", form.lower())]
        if form.isupper():
            t.append(("isupper", None))
        if form.istitle():
            t.append(("istitle", None))
        if any(c.isdigit() for c in form):
            t.append(("hasdigit", None))
        for name in classify_pattern(form, emoticons).names():
            t.append(("pat", name))
        if use_lang:
            t.append(("lang", tok.lang.value))
        out.append(t)
    return out


def _assemble(local, position: int, n: int, forms: Sequence[str], config: FeatureConfig) -> list[str]:
    feats = ["bias"]
    if position == 0:
        feats.append("BOS")
    if position == n - 1:
        feats.append("EOS")
    for delta in range(-config.window, config.window + 1):
        j = position + delta
        if not 0 <= j < n:
            continue
        off = _offset(delta)
        for name, value in local[j]:
            feats.append(f"{name}[{off}]" if value is None else f"{name}[{off}]={value}")
    feats.extend("ng=" + g for g in char_ngrams(forms[position], config.max_ngram))
    return list(dict.fromkeys(feats))


def token_features(utterance: Utterance, position: int, config: FeatureConfig = FeatureConfig()) -> list[str]:
    """Feature names active at ``position``.

    Returned as a duplicate-free list in a fixed emission order (a set in
    content, ordered so that index construction is reproducible).
    """
    n = len(utterance)
    if not 0 <= position < n:
        raise IndexError(f"position {position} outside utterance of length {n}")
    lo, hi = max(0, position - config.window), min(n, position + config.window + 1)
    local = _local_templates(Utterance(utterance.tokens[lo:hi]), config.use_lang)
    padded = [None] * lo + local + [None] * (n - hi)
    return _assemble(padded, position, n, utterance.forms, config)


def sequence_features(utterance: Utterance, config: FeatureConfig = FeatureConfig()) -> list[list[str]]:
    local = _local_templates(utterance, config.use_lang)
    forms = utterance.forms
    n = len(utterance)
    return [_assemble(local, i, n, forms, config) for i in range(n)]


class FeatureIndex:
    """Dense bijection between feature names and ids ``0..F-1``."""

    def __init__(self, names: Sequence[str], counts: Sequence[int] | None = None):
        self.names = list(names)
        self.ids = {name: i for i, name in enumerate(self.names)}
        if len(self.ids) != len(self.names):
            raise ValueError("duplicate feature names")
        self.counts = list(counts) if counts is not None else [0] * len(self.names)
        if len(self.counts) != len(self.names):
            raise ValueError("counts and names differ in length")

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.ids

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureIndex) and self.names == other.names and self.counts == other.counts

    def get(self, name: str) -> int | None:
        return self.ids.get(name)

    def lookup(self, feats: Iterable[str]) -> list[int]:
        """Ids of the known features; unknown names are dropped."""
        ids = self.ids
        return [ids[f] for f in feats if f in ids]

    def dumps(self) -> bytes:
        return "".join(f"{n}\t{c}\n" for n, c in zip(self.names, self.counts)).encode("utf-8")


def build_feature_index(feature_sets: Iterable[Iterable[str]], min_count: int = 1) -> FeatureIndex:
    """Index every feature seen at least ``min_count`` times.

    ``feature_sets`` yields one collection of names per token.  Ids follow
    first-occurrence order among the retained features.
    """
    counts: dict[str, int] = {}
    seen_any = False
    for feats in feature_sets:
        for f in feats:
            seen_any = True
            counts[f] = counts.get(f, 0) + 1
    if not seen_any:
        raise ValueError("no features observed")
    kept = [(f, c) for f, c in counts.items() if c >= min_count]
    if not kept:
        raise ValueError(f"no feature occurs at least {min_count} times")
    return FeatureIndex([f for f, _ in kept], [c for _, c in kept])
