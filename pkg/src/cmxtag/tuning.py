"""Cross-validated grid search over the L1/L2 regularisation coefficients."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

from .corpus import Corpus, split_corpus
from .crf import TrainConfig, train
from .errors import CmxError
from .evaluation import evaluate

logger = logging.getLogger(__name__)


class GridSearchError(CmxError):
    pass


def _check_values(name: str, values: Sequence[float]) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if not values:
        raise ValueError(f"{name} must not be empty")
    if any(v < 0 for v in values):
        raise ValueError(f"{name} values must be non-negative")
    if len(set(values)) != len(values):
        raise ValueError(f"{name} contains duplicates")
    return values


@dataclass(frozen=True)
class GridSpec:
    c1_values: tuple[float, ...] = (0.0, 0.05, 0.5, 1.0)
    c2_values: tuple[float, ...] = (0.01, 0.1, 1.0)
    folds: int = 5
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "c1_values", _check_values("c1_values", self.c1_values))
        object.__setattr__(self, "c2_values", _check_values("c2_values", self.c2_values))
        if self.folds < 2:
            raise ValueError("folds must be >= 2")


@dataclass(frozen=True)
class GridRow:
    c1: float
    c2: float
    mean_f1: float
    fold_scores: tuple[float, ...]


@dataclass(frozen=True)
class GridResult:
    rows: list[GridRow]
    best: tuple[float, float] = field(init=False)

    def __post_init__(self):
        top = min(self.rows, key=lambda r: (-r.mean_f1, r.c1, r.c2))
        object.__setattr__(self, "best", (top.c1, top.c2))

    def to_tsv(self) -> str:
        k = len(self.rows[0].fold_scores)
        lines = ["\t".join(["c1", "c2"] + [f"fold{i + 1}" for i in range(k)] + ["mean"])]
        for r in self.rows:
            lines.append("\t".join([f"{r.c1:g}", f"{r.c2:g}"] + [f"{s:.6f}" for s in r.fold_scores] + [f"{r.mean_f1:.6f}"]))
        lines.append(f"best c1={self.best[0]:g} c2={self.best[1]:g}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "rows": [
                {"c1": r.c1, "c2": r.c2, "fold_scores": list(r.fold_scores), "mean": r.mean_f1}
                for r in self.rows
            ],
            "best": {"c1": self.best[0], "c2": self.best[1]},
        }
        return json.dumps(doc, indent=2) + "\n"


def grid_search(corpus: Corpus, grid: GridSpec = GridSpec(), train_config: TrainConfig = TrainConfig()) -> GridResult:
    """Score every (c1, c2) pair by mean held-out weighted F1 over k folds."""
    try:
        splits = split_corpus(corpus, grid.folds, grid.seed)
    except ValueError as e:
        raise GridSearchError(f"cannot split corpus: {e}") from None
    rows = []
    for c1 in grid.c1_values:
        for c2 in grid.c2_values:
            config = replace(train_config, c1=c1, c2=c2)
            scores = []
            for k, (train_part, held_out) in enumerate(splits, start=1):
                try:
                    model = train(train_part, config)
                    pred = model.tag_corpus(held_out)
                    scores.append(evaluate(held_out, pred).weighted_f1)
                except (CmxError, ValueError) as e:
                    raise GridSearchError(f"c1={c1:g} c2={c2:g} fold={k}: {e}") from e
            mean = sum(scores) / len(scores)
            logger.info("c1=%g c2=%g mean weighted F1 %.4f", c1, c2, mean)
            rows.append(GridRow(c1, c2, mean, tuple(scores)))
    return GridResult(rows)
