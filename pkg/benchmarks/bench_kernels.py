"""Compare the compiled and pure-Python CRF kernels.

Times one objective/gradient evaluation over a synthetic training set,
Viterbi decoding of every utterance, and a full training run, for each
available backend. Run with ``python benchmarks/bench_kernels.py``.
"""
import argparse
import time

import numpy as np

from cmxtag.crf import TrainConfig, TrainingData, available_backends, objective_and_gradient, train, viterbi_decode
from cmxtag.synthetic import generate_synthetic_corpus


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--utterances", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-iter", type=int, default=50)
    args = ap.parse_args(argv)

    corpus = generate_synthetic_corpus(42, args.utterances, "hi", 0.3)
    # a reference model provides the feature index and instances for both backends
    ref = train(corpus, TrainConfig(max_iterations=5))
    instances = [ref.instance(u, with_gold=True) for u in corpus]
    data = TrainingData(instances, ref.num_features, ref.num_labels)
    w = np.random.default_rng(0).normal(scale=0.1, size=data.num_weights)
    cfg = TrainConfig(max_iterations=args.max_iter)

    print(f"{len(corpus)} utterances, {corpus.num_tokens} tokens, "
          f"{ref.num_features} features, {ref.num_labels} labels")
    rows = {}
    for name in available_backends():
        rows[name] = (
            best_of(lambda: objective_and_gradient(w, data, 0.1, name), args.repeat),
            best_of(lambda: [viterbi_decode(ref, i, name) for i in instances], args.repeat),
            best_of(lambda: train(corpus, cfg, backend=name), 1),
        )
    print(f"{'backend':<8} {'obj+grad (ms)':>14} {'viterbi (ms)':>13} {'train (s)':>10}")
    for name, (og, vit, tr) in rows.items():
        print(f"{name:<8} {og * 1e3:14.2f} {vit * 1e3:13.2f} {tr:10.2f}")
    if len(rows) == 2:
        cy, py = rows["cython"], rows["python"]
        print("speedup  " + "  ".join(f"{p / c:.1f}x" for p, c in zip(py, cy)))


if __name__ == "__main__":
    main()
