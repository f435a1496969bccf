"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 on data or model errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .cmi import corpus_cmi_report
from .corpus import read_corpus, save_corpus, split_corpus, write_corpus
from .crf import TrainConfig, read_model, train, write_model
from .errors import CmxError
from .evaluation import evaluate, render_matrix
from .features import FeatureConfig
from .synthetic import LANGPAIRS, generate_synthetic_corpus
from .tuning import GridSpec, grid_search

logger = logging.getLogger("cmxtag")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _corpus_opts(p):
    p.add_argument("--mode", choices=["coarse", "fine", "open"], default="open")
    p.add_argument("--strict", action="store_true", help="reject unknown language tags")


def _format_opt(p):
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")


def _output_opt(p):
    p.add_argument("--output", help="write machine output here instead of stdout")


def _feature_opts(p):
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--max-ngram", type=int, default=3)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--no-lang-feature", action="store_true")


def _optim_opts(p, with_reg=True):
    if with_reg:
        p.add_argument("--c1", type=float, default=0.05)
        p.add_argument("--c2", type=float, default=0.1)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-5)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmxtag", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("cmi", help="Code-Mixing Index statistics of a corpus")
    p.add_argument("--input")
    p.add_argument("--univ-only", action="store_true", help="count only univ tokens as language-independent")
    _corpus_opts(p)
    _format_opt(p)
    _output_opt(p)

    p = sub.add_parser("train", help="train a CRF tagger")
    p.add_argument("--input")
    p.add_argument("--model")
    p.add_argument("--manifest", help="TSV of train, test, model, tag-column[, row, column] jobs")
    _corpus_opts(p)
    _feature_opts(p)
    _optim_opts(p)
    _output_opt(p)

    p = sub.add_parser("tag", help="tag a corpus with a trained model")
    p.add_argument("--input")
    p.add_argument("--model")
    _corpus_opts(p)
    _output_opt(p)

    p = sub.add_parser("eval", help="score predictions against gold labels")
    p.add_argument("--gold")
    p.add_argument("--pred")
    _corpus_opts(p)
    _format_opt(p)
    _output_opt(p)

    p = sub.add_parser("grid", help="cross-validated search over c1/c2")
    p.add_argument("--input")
    p.add_argument("--c1-grid", type=_float_list, default=list(GridSpec().c1_values))
    p.add_argument("--c2-grid", type=_float_list, default=list(GridSpec().c2_values))
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    _corpus_opts(p)
    _feature_opts(p)
    _optim_opts(p, with_reg=False)
    _format_opt(p)
    _output_opt(p)

    p = sub.add_parser("split", help="write k-fold train/held-out files")
    p.add_argument("--input")
    p.add_argument("--output", help="directory for fold<k>.train.tsv / fold<k>.test.tsv")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    _corpus_opts(p)

    p = sub.add_parser("synth", help="generate a synthetic code-mixed corpus")
    p.add_argument("--num-utterances", type=int, default=100)
    p.add_argument("--mixing", type=float, default=0.3)
    p.add_argument("--langpair", choices=list(LANGPAIRS), default="hi")
    p.add_argument("--seed", type=int, default=42)
    _output_opt(p)
    return parser


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command}: missing required option(s): {', '.join(missing)}")


def _emit(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _train_config(args) -> TrainConfig:
    try:
        features = FeatureConfig(args.window, args.max_ngram, args.min_count, not args.no_lang_feature)
        return TrainConfig(
            c1=getattr(args, "c1", 0.05),
            c2=getattr(args, "c2", 0.1),
            max_iterations=args.max_iter,
            tolerance=args.tol,
            features=features,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_cmi(args):
    _require(args, "input")
    corpus = read_corpus(args.input, args.mode, args.strict)
    report = corpus_cmi_report(corpus, univ_only=args.univ_only)
    _emit(args, report.to_json() if args.format == "json" else report.to_tsv())


def _run_manifest(args):
    config = _train_config(args)
    manifest = Path(args.manifest)
    base = manifest.parent
    results = []
    with open(manifest, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) not in (4, 6):
                raise CmxError(f"{manifest}:{lineno}: expected 4 or 6 TAB-separated columns")
            train_p, test_p, model_p = (base / c for c in cols[:3])
            mode = cols[3]
            if mode not in ("coarse", "fine", "open"):
                raise CmxError(f"{manifest}:{lineno}: tag column must be coarse, fine or open, got {mode!r}")
            model = train(read_corpus(train_p, mode, args.strict), config)
            write_model(model, model_p)
            gold = read_corpus(test_p, mode, args.strict)
            report = evaluate(gold, model.tag_corpus(gold))
            cell = (cols[4], cols[5]) if len(cols) == 6 else None
            results.append((cols, report, cell))
    if not results:
        raise CmxError(f"{manifest}: no jobs")
    lines = ["train\ttest\tmodel\ttag_column\tweighted_f1\taccuracy"]
    for cols, report, _ in results:
        lines.append("\t".join(cols[:4] + [f"{report.weighted_f1:.4f}", f"{report.accuracy:.4f}"]))
    text = "\n".join(lines) + "\n"
    cells = {cell: report for _, report, cell in results if cell is not None}
    if cells:
        granular = {c.lower() for _, c in cells} <= {"fine", "coarse", "fine-grained", "coarse-grained"}
        text += "\n" + render_matrix(cells, "granularity" if granular else "platform").to_text()
    _emit(args, text)


def cmd_train(args):
    if args.manifest:
        return _run_manifest(args)
    _require(args, "input", "model")
    config = _train_config(args)
    corpus = read_corpus(args.input, args.mode, args.strict)
    model = train(corpus, config)
    write_model(model, args.model)
    print(
        f"trained {model.num_labels} labels, {model.num_features} features -> {args.model}",
        file=sys.stderr,
    )


def cmd_tag(args):
    _require(args, "input", "model")
    model = read_model(args.model)
    corpus = read_corpus(args.input, args.mode, args.strict)
    _emit(args, write_corpus(model.tag_corpus(corpus)))


def cmd_eval(args):
    _require(args, "gold", "pred")
    gold = read_corpus(args.gold, args.mode, args.strict)
    pred = read_corpus(args.pred, args.mode, args.strict)
    report = evaluate(gold, pred)
    _emit(args, report.to_json() if args.format == "json" else report.to_tsv())


def cmd_grid(args):
    _require(args, "input")
    config = _train_config(args)
    try:
        spec = GridSpec(args.c1_grid, args.c2_grid, args.folds, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    corpus = read_corpus(args.input, args.mode, args.strict)
    result = grid_search(corpus, spec, config)
    if args.format == "json":
        _emit(args, result.to_json())
    else:
        _emit(args, result.to_tsv())


def cmd_split(args):
    _require(args, "input", "output")
    corpus = read_corpus(args.input, args.mode, args.strict)
    if args.folds < 2 or args.folds > len(corpus):
        raise UsageError(f"--folds must be between 2 and the utterance count ({len(corpus)})")
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for k, (train_part, held_out) in enumerate(split_corpus(corpus, args.folds, args.seed), start=1):
        for name, part in (("train", train_part), ("test", held_out)):
            path = out / f"fold{k}.{name}.tsv"
            save_corpus(part, path)
            print(path)


def cmd_synth(args):
    if args.num_utterances < 1 or not 0.0 <= args.mixing <= 1.0:
        raise UsageError("--num-utterances must be >= 1 and --mixing in [0, 1]")
    corpus = generate_synthetic_corpus(args.seed, args.num_utterances, args.langpair, args.mixing)
    _emit(args, write_corpus(corpus))


COMMANDS = {
    "cmi": cmd_cmi,
    "train": cmd_train,
    "tag": cmd_tag,
    "eval": cmd_eval,
    "grid": cmd_grid,
    "split": cmd_split,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("CMXTAG_LOGLEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"cmxtag: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CmxError, OSError, ValueError, KeyError) as e:
        print(f"cmxtag: error: {e}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
