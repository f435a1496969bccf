"""Code-Mixing Index per utterance and the four corpus-level statistics.

For an utterance of ``n`` tokens, ``u`` of which carry no single language,
and per-language counts ``w_i``::

    CMI = 100 * (1 - max_i(w_i) / (n - u))     if n > u
        = 0                                     otherwise

Only en/hi/bn/te count as languages.  By default every other tag (univ,
mixed, acro, ne, undef) is language-independent; ``univ_only=True`` restricts
the independent set to ``univ``, so mixed/acro/ne/undef tokens stay in the
denominator.  An utterance with fewer than two languages scores 0 either way.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .corpus import LANGUAGE_BEARING, Corpus, LanguageTag, Utterance


def utterance_cmi(utterance: Utterance, univ_only: bool = False) -> float:
    counts = Counter(tok.lang for tok in utterance.tokens)
    lang_counts = [c for tag, c in counts.items() if tag in LANGUAGE_BEARING]
    n = len(utterance.tokens)
    u = counts.get(LanguageTag.UNIV, 0) if univ_only else n - sum(lang_counts)
    if n <= u or len(lang_counts) < 2:
        return 0.0
    return 100.0 * (1.0 - max(lang_counts) / (n - u))


@dataclass(frozen=True)
class CmiReport:
    cmi_all: float
    cmi_mixed: float
    mixed_pct: float
    num_utt: int
    per_utterance: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "cmi_all": round(self.cmi_all, 2),
            "cmi_mixed": round(self.cmi_mixed, 2),
            "mixed_pct": round(self.mixed_pct, 2),
            "num_utt": self.num_utt,
            "per_utterance": [round(v, 2) for v in self.per_utterance],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_tsv(self) -> str:
        rows = [
            ("metric", "value"),
            ("cmi_all", f"{self.cmi_all:.2f}"),
            ("cmi_mixed", f"{self.cmi_mixed:.2f}"),
            ("num_utt", str(self.num_utt)),
            ("mixed_pct", f"{self.mixed_pct:.2f}"),
        ]
        return "".join(f"{a}\t{b}\n" for a, b in rows)


def corpus_cmi_report(corpus: Corpus, univ_only: bool = False) -> CmiReport:
    if len(corpus) == 0:
        raise ValueError("cannot compute CMI statistics of an empty corpus")
    values = tuple(utterance_cmi(u, univ_only=univ_only) for u in corpus.utterances)
    mixed = [v for v in values if v > 0]
    n = len(values)
    # cmi_all and cmi_mixed * mixed_pct / 100 share the numerator sum(mixed)
    total = sum(mixed)
    return CmiReport(
        cmi_all=total / n,
        cmi_mixed=total / len(mixed) if mixed else 0.0,
        mixed_pct=100.0 * len(mixed) / n,
        num_utt=n,
        per_utterance=values,
    )
