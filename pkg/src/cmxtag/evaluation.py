"""Tagging evaluation: per-tag P/R/F1, support-weighted F1, accuracy, and
result matrices laid out by language pair against platform or granularity."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .corpus import Corpus
from .errors import AlignmentError


class TagScore(NamedTuple):
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    per_tag: dict[str, TagScore]
    weighted_f1: float
    accuracy: float
    token_count: int

    def to_dict(self) -> dict:
        return {
            "per_tag": {tag: s._asdict() for tag, s in self.per_tag.items()},
            "weighted_f1": self.weighted_f1,
            "accuracy": self.accuracy,
            "token_count": self.token_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_tsv(self) -> str:
        lines = ["tag\tprecision\trecall\tf1\tsupport"]
        for tag, s in self.per_tag.items():
            lines.append(f"{tag}\t{s.precision:.4f}\t{s.recall:.4f}\t{s.f1:.4f}\t{s.support}")
        lines.append(f"weighted_f1\t{self.weighted_f1:.4f}")
        lines.append(f"accuracy\t{self.accuracy:.4f}")
        return "\n".join(lines) + "\n"


def _ratio(a, b) -> Fraction:
    return Fraction(a, b) if b else Fraction(0)


def evaluate(gold: Corpus, pred: Corpus) -> EvalReport:
    """Compare predicted POS labels with gold ones, token by token."""
    if len(gold) != len(pred):
        raise AlignmentError(f"gold has {len(gold)} utterances, prediction has {len(pred)}")
    tp: Counter = Counter()
    n_gold: Counter = Counter()
    n_pred: Counter = Counter()
    correct = total = 0
    for u, (g_utt, p_utt) in enumerate(zip(gold, pred), start=1):
        if len(g_utt) != len(p_utt):
            raise AlignmentError(f"utterance {u}: gold has {len(g_utt)} tokens, prediction has {len(p_utt)}")
        for t, (g, p) in enumerate(zip(g_utt.tokens, p_utt.tokens), start=1):
            if g.form != p.form:
                raise AlignmentError(f"utterance {u}, token {t}: form {g.form!r} vs {p.form!r}")
            if g.pos is None or p.pos is None:
                raise AlignmentError(f"utterance {u}, token {t}: missing POS label")
            n_gold[g.pos] += 1
            n_pred[p.pos] += 1
            if g.pos == p.pos:
                tp[g.pos] += 1
                correct += 1
            total += 1

    # exact rationals so that hand-computable scores come out exact
    per_tag = {}
    weighted = Fraction(0)
    for tag in sorted(set(n_gold) | set(n_pred)):
        prec = _ratio(tp[tag], n_pred[tag])
        rec = _ratio(tp[tag], n_gold[tag])
        f1 = 2 * prec * rec / (prec + rec) if prec + rec > 0 else Fraction(0)
        weighted += n_gold[tag] * f1
        per_tag[tag] = TagScore(float(prec), float(rec), float(f1), n_gold[tag])
    return EvalReport(per_tag, float(_ratio(weighted, total)), float(_ratio(correct, total)), total)


@dataclass(frozen=True)
class ResultMatrix:
    """Weighted F1 x 100 per (row, column); ``overall`` is the mean of the
    unrounded populated cells."""

    axis: str
    rows: list[str]
    columns: list[str]
    cells: dict[tuple[str, str], float]
    overall: float

    def cell_text(self, row: str, col: str) -> str:
        v = self.cells.get((row, col))
        return "-" if v is None else f"{v:.2f}"

    def to_text(self) -> str:
        header = ["Language"] + self.columns
        body = [[r] + [self.cell_text(r, c) for c in self.columns] for r in self.rows]
        widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]

        def fmt(line):
            first = line[0].ljust(widths[0])
            return "  ".join([first] + [v.rjust(w) for v, w in zip(line[1:], widths[1:])])

        out = [fmt(header)] + [fmt(line) for line in body]
        out.append(f"overall ({self.axis}): {self.overall:.2f}")
        return "\n".join(out) + "\n"


def render_matrix(reports: Mapping[tuple[str, str], EvalReport], axis: str = "platform") -> ResultMatrix:
    if axis not in ("platform", "granularity"):
        raise ValueError(f"axis must be 'platform' or 'granularity', got {axis!r}")
    if not reports:
        raise ValueError("no reports to tabulate")
    rows: dict[str, None] = {}
    cols: dict[str, None] = {}
    raw = {}
    for (row, col), rep in reports.items():
        rows.setdefault(row, None)
        cols.setdefault(col, None)
        raw[row, col] = 100.0 * rep.weighted_f1
    overall = sum(raw.values()) / len(raw)
    cells = {k: round(v, 2) for k, v in raw.items()}
    return ResultMatrix(axis, list(rows), list(cols), cells, overall)
