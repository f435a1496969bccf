"""Numbered acceptance criteria. Each test emits one PASS/FAIL line in the
terminal summary, with the measured quantities attached."""
import random
import time

import numpy as np
import pytest
from oracles import (
    brute_argmax,
    brute_log_partition,
    central_differences,
    random_instance,
    random_model,
)

from cmxtag.cmi import corpus_cmi_report, utterance_cmi
from cmxtag.corpus import Token, Utterance, parse_corpus, read_corpus, split_corpus, write_corpus
from cmxtag.crf import (
    TrainConfig,
    TrainingData,
    backward_log_partition,
    load_model,
    log_partition,
    objective_and_gradient,
    posterior_marginals,
    read_model,
    save_model,
    train,
    viterbi_decode,
)
from cmxtag.evaluation import EvalReport, evaluate, render_matrix
from cmxtag.synthetic import generate_synthetic_corpus

from test_evaluation import tagged


@pytest.fixture(scope="module")
def split500():
    corpus = generate_synthetic_corpus(42, 500, "hi", 0.3)
    return split_corpus(corpus, folds=5, seed=42)[0]


@pytest.mark.acceptance(1, "gradient matches central differences")
def test_gradient_correctness(record_property):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        F, L = int(rng.integers(1, 31)), int(rng.integers(1, 5))
        inst, _ = random_instance(rng, F, int(rng.integers(1, 7)), with_gold=True, L=L)
        data = TrainingData([inst], F, L)
        c2 = float(rng.uniform(0, 1))
        w = rng.normal(size=data.num_weights)
        _, g = objective_and_gradient(w, data, c2)
        num = central_differences(lambda x: objective_and_gradient(x, data, c2)[0], w, h=1e-5)
        rel = np.abs(g - num) / np.maximum(np.maximum(np.abs(g), np.abs(num)), 1e-8)
        worst = max(worst, float(rel.max()))
    elapsed = time.perf_counter() - start
    record_property("max_rel_err", f"{worst:.2e}")
    record_property("seconds", f"{elapsed:.2f}")
    assert worst < 1e-4
    assert elapsed < 30


@pytest.mark.acceptance(2, "log Z and Viterbi match enumeration")
def test_inference_exactness(record_property):
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    mismatches = 0
    for i in range(200):
        F, L, T = 8, int(rng.integers(1, 5)), int(rng.integers(1, 6))
        # integer weights on every other model so that ties actually occur
        m = random_model(rng, F, L, integer=i % 2 == 1)
        inst, ids = random_instance(rng, F, T)
        worst = max(worst, abs(log_partition(m, inst) - brute_log_partition(m, ids)))
        path, _ = viterbi_decode(m, inst)
        if path != brute_argmax(m, ids)[0]:
            mismatches += 1
    elapsed = time.perf_counter() - start
    record_property("max_logz_err", f"{worst:.2e}")
    record_property("viterbi_mismatches", mismatches)
    record_property("seconds", f"{elapsed:.2f}")
    assert worst <= 1e-8
    assert mismatches == 0
    assert elapsed < 30


@pytest.mark.acceptance(3, "forward/backward and marginal consistency")
def test_forward_backward_consistency(record_property):
    rng = np.random.default_rng(11)
    node_err = edge_err = z_err = 0.0
    for _ in range(100):
        F, L, T = 40, int(rng.integers(1, 13)), int(rng.integers(1, 21))
        m = random_model(rng, F, L, scale=2.0)
        inst, _ = random_instance(rng, F, T, max_active=8)
        node, edge = posterior_marginals(m, inst)
        node_err = max(node_err, float(np.abs(node.sum(axis=1) - 1).max()))
        if T > 1:
            edge_err = max(edge_err, float(np.abs(edge.sum(axis=(1, 2)) - 1).max()))
        z_err = max(z_err, abs(log_partition(m, inst) - backward_log_partition(m, inst)))
    record_property("max_node_dev", f"{node_err:.1e}")
    record_property("max_edge_dev", f"{edge_err:.1e}")
    record_property("max_logz_gap", f"{z_err:.1e}")
    assert node_err <= 1e-9 and edge_err <= 1e-9
    assert z_err <= 1e-8


PUBLISHED = [
    # (cmi_all, cmi_mixed, mixed_pct)
    (31.94, 39.10, 81.70),
    (34.94, 35.37, 98.79),
    (0.31, 30.05, 1.05),
]


@pytest.mark.acceptance(4, "CMI report identity")
def test_cmi_identity(record_property):
    worst = 0.0
    for seed in range(30):
        for lp in ("hi", "bn", "te"):
            mixing = (0.0, 0.05, 0.3, 0.7, 1.0)[seed % 5]
            rep = corpus_cmi_report(generate_synthetic_corpus(seed, 80, lp, mixing))
            rhs = rep.cmi_mixed * rep.mixed_pct / 100
            worst = max(worst, abs(rep.cmi_all - rhs) / max(abs(rep.cmi_all), 1e-300))
    published = [abs(mixed * pct / 100 - all_) for all_, mixed, pct in PUBLISHED]
    record_property("max_rel_dev", f"{worst:.1e}")
    record_property("published_devs", ",".join(f"{d:.4f}" for d in published))
    assert worst <= 1e-9
    assert all(d <= 0.01 for d in published)


def _utt(*langs):
    return Utterance([Token(f"t{i}", lang) for i, lang in enumerate(langs)])


@pytest.mark.acceptance(5, "CMI unit values")
def test_cmi_unit_values(record_property):
    got = [
        utterance_cmi(_utt(*["hi"] * 6)),
        utterance_cmi(_utt("hi", "hi", "hi", "en", "univ")),
        utterance_cmi(_utt("en", "en", "te", "te")),
        utterance_cmi(_utt("univ", "univ", "univ")),
    ]
    record_property("values", got)
    assert got == [0.0, 25.0, 50.0, 0.0]


@pytest.mark.acceptance(6, "overfit capacity")
def test_overfit_capacity(synth100, record_property):
    start = time.perf_counter()
    model = train(synth100, TrainConfig(c1=0.0, c2=0.01))
    elapsed = time.perf_counter() - start
    f1 = evaluate(synth100, model.tag_corpus(synth100)).weighted_f1
    record_property("train_f1", f"{f1:.4f}")
    record_property("seconds", f"{elapsed:.2f}")
    assert f1 >= 0.99
    assert elapsed < 60


@pytest.mark.acceptance(7, "held-out generalization")
def test_generalization(split500, record_property):
    train_part, test_part = split500
    model = train(train_part, TrainConfig())
    f1 = evaluate(test_part, model.tag_corpus(test_part)).weighted_f1
    record_property("sizes", f"{len(train_part)}/{len(test_part)}")
    record_property("heldout_f1", f"{f1:.4f}")
    assert (len(train_part), len(test_part)) == (400, 100)
    assert f1 >= 0.90


@pytest.mark.acceptance(8, "L1 sparsity")
def test_l1_sparsity(split500, record_property):
    train_part, _ = split500
    zeros = {}
    for c1 in (0.0, 8.0):
        m = train(train_part, TrainConfig(c1=c1))
        zeros[c1] = int(np.count_nonzero(m.state_weights == 0.0))
    record_property("zeros_c1_0", zeros[0.0])
    record_property("zeros_c1_8", zeros[8.0])
    assert zeros[8.0] > zeros[0.0]


@pytest.mark.acceptance(9, "determinism and persistence")
def test_determinism_and_persistence(synth100, data_dir, record_property):
    cfg = TrainConfig(c1=0.05, c2=0.1)
    a, b = save_model(train(synth100, cfg)), save_model(train(synth100, cfg))
    fixture = read_corpus(data_dir / "fixture_corpus.tsv")
    model = read_model(data_dir / "golden_model.cmxcrf")
    reloaded = load_model(save_model(model))
    same_preds = [model.tag(u) for u in fixture] == [reloaded.tag(u) for u in fixture]
    text = (data_dir / "fixture_corpus.tsv").read_text(encoding="utf-8")
    text_round_trip = write_corpus(parse_corpus(text)) == text
    synth_round_trip = parse_corpus(write_corpus(synth100)) == synth100
    record_property("model_bytes", len(a))
    assert a == b
    assert same_preds
    assert text_round_trip and synth_round_trip


@pytest.mark.acceptance(10, "evaluation oracle")
def test_evaluation_oracle(record_property):
    r = evaluate(tagged("N", "V", "N", "P"), tagged("N", "V", "V", "P"))
    rng = random.Random(10)
    reports = {}
    for lp in ("Telugu", "Hindi", "Bengali"):
        for plat in ("WhatsApp", "Twitter", "Facebook"):
            for gran in ("fine", "coarse"):
                reports[(lp, f"{plat}/{gran}")] = EvalReport({}, rng.random(), 0.0, 1)
    m = render_matrix(reports)
    mean = sum(100 * rep.weighted_f1 for rep in reports.values()) / 18
    record_property("weighted_f1", r.weighted_f1)
    record_property("overall_gap", f"{abs(m.overall - mean):.1e}")
    assert r.weighted_f1 == 0.75
    assert len(m.cells) == 18
    assert abs(m.overall - mean) <= 1e-9
