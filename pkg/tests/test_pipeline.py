import dataclasses
import io

import numpy as np
import pytest

from divshap import elm
from divshap.dataset import Dataset
from divshap.errors import LengthMismatchError, SingleClassTrainingError
from divshap.graph import build_graph, similar
from divshap.mining import MiningConfig, mine_shapelets
from divshap.pipeline import (
    EvalConfig,
    PipelineConfig,
    _sweep_elm_seed,
    fit,
    load_pipeline,
    predict_pipeline,
    save_pipeline,
    select_k,
)
from divshap.transform import apply_scaling, transform

from conftest import bump_dataset, xor_dataset

FAST = dict(mining=MiningConfig(min_len=4, max_len=6), evaluation=EvalConfig(repeats=2))


def small_cfg(**kw):
    args = dict(FAST)
    args.update(kw)
    return PipelineConfig(**args)


@pytest.fixture(scope="module")
def fitted(request):
    return fit(bump_dataset(seed=0), small_cfg())


def test_perfect_single_shapelet_prefers_k1(fitted):
    # one bump shapelet separates the toy classes; ties go to smaller k
    report = fitted.k_sweep_report
    top = max(r["mean_accuracy"] for r in report)
    first_best = next(r["k"] for r in report if r["mean_accuracy"] == top)
    assert fitted.selected_k == first_best


def test_kappa_one_selects_one(toy_train):
    model = fit(toy_train, small_cfg(kappa=1))
    assert model.selected_k == 1
    assert len(model.k_sweep_report) == 1


def test_two_shapelet_boundary_selects_k2():
    d = xor_dataset(seed=0)
    cfg = PipelineConfig(
        mining=MiningConfig(min_len=6, max_len=10), evaluation=EvalConfig(repeats=3)
    )
    model = fit(d, cfg)
    assert model.selected_k == 2
    by_k = {r["k"]: r["mean_accuracy"] for r in model.k_sweep_report}
    assert by_k[1] < by_k[2]
    # independent re-evaluation of the sweep rows through the public pieces
    mined = mine_shapelets(d, MiningConfig(min_len=6, max_len=10, normalize=cfg.distance))
    graph = build_graph(mined, cfg.distance, lazy=True)
    _, _, report = select_k(graph, d, cfg)
    assert [r["mean_accuracy"] for r in report] == [
        r["mean_accuracy"] for r in model.k_sweep_report
    ]


def test_fit_deterministic(toy_train):
    a = fit(toy_train, small_cfg())
    b = fit(toy_train, small_cfg())
    assert a.selected_k == b.selected_k
    assert np.array_equal(a.elm_model.beta, b.elm_model.beta)
    assert a.shapelets == b.shapelets
    assert a.k_sweep_report == b.k_sweep_report


def test_fit_two_series_per_class_completes():
    d = bump_dataset(seed=2, per_class=2, m=24)
    model = fit(d, small_cfg())
    assert 1 <= model.selected_k <= 9


def test_fit_single_class_rejected():
    d = Dataset(X=np.random.default_rng(0).normal(size=(4, 16)), y=np.zeros(4, dtype=int))
    with pytest.raises(SingleClassTrainingError):
        fit(d, small_cfg())


def test_fit_beats_majority_baseline(toy_train):
    model = fit(toy_train, small_cfg())
    _, acc = predict_pipeline(model, toy_train)
    majority = np.bincount(toy_train.y).max() / toy_train.n
    assert acc >= majority


def test_predict_on_train_matches_elm_training_accuracy(fitted):
    train = bump_dataset(seed=0)
    _, acc = predict_pipeline(fitted, train)
    feats = apply_scaling(
        transform(train, fitted.shapelets, fitted.config.distance), fitted.scaling
    )
    want = float((elm.predict(fitted.elm_model, feats.X) == train.y).mean())
    assert acc == want


def test_predict_empty_test(fitted):
    train = bump_dataset(seed=0)
    empty = Dataset(X=np.empty((0, train.m)), y=np.empty(0, dtype=int))
    labels, acc = predict_pipeline(fitted, empty)
    assert len(labels) == 0
    assert acc is None


def test_predict_length_mismatch(fitted):
    bad = Dataset(X=np.zeros((2, 99)), y=np.array([1, 2]))
    with pytest.raises(LengthMismatchError):
        predict_pipeline(fitted, bad)


def test_model_roundtrip_identical_predictions(fitted, toy_test):
    buf = io.StringIO()
    save_pipeline(fitted, buf)
    buf.seek(0)
    loaded = load_pipeline(buf)
    a, acc_a = predict_pipeline(fitted, toy_test)
    b, acc_b = predict_pipeline(loaded, toy_test)
    assert np.array_equal(a, b)
    assert acc_a == acc_b
    assert loaded.shapelets == fitted.shapelets
    assert loaded.config == fitted.config


def test_selected_set_is_pairwise_dissimilar(fitted):
    cfg = fitted.config
    for i in range(len(fitted.shapelets)):
        for j in range(i + 1, len(fitted.shapelets)):
            assert not similar(
                fitted.shapelets[i], fitted.shapelets[j], cfg.distance, cfg.same_class_only
            )


def test_sweep_report_invariants(fitted):
    report = fitted.k_sweep_report
    ks = [r["k"] for r in report]
    assert ks == list(range(1, len(report) + 1))
    best = max(r["mean_accuracy"] for r in report)
    selected_row = next(r for r in report if r["k"] == fitted.selected_k)
    assert selected_row["mean_accuracy"] == best
    for r in report:
        assert len(r["per_repeat"]) == fitted.config.evaluation.repeats
        assert sum(r["class_counts"].values()) == r["k"]


def test_sweep_seeds_fixed_per_cell():
    assert _sweep_elm_seed(0, 3, 1) == _sweep_elm_seed(0, 3, 1)
    assert _sweep_elm_seed(0, 3, 1) != _sweep_elm_seed(0, 3, 2)
    assert _sweep_elm_seed(0, 3, 1) != _sweep_elm_seed(0, 4, 1)


def test_training_accuracy_eval_mode(toy_train):
    cfg = small_cfg(evaluation=EvalConfig(mode="train", repeats=2))
    model = fit(toy_train, cfg)
    assert 1 <= model.selected_k <= 9


def test_short_greedy_pool_skips_larger_k():
    # every same-class candidate pair is similar: huge thresholds force a
    # clique per class, so the pool holds at most one shapelet per class and
    # the sweep stops there instead of running to kappa
    d = bump_dataset(seed=3, per_class=3, m=16)
    cfg = small_cfg(mining=MiningConfig(min_len=4, max_len=5))
    mined = mine_shapelets(d, cfg.mining)
    boosted = [dataclasses.replace(s, split_threshold=1e9) for s in mined]
    graph = build_graph(boosted, cfg.distance, lazy=True)
    k, shapelets, report = select_k(graph, d, cfg)
    assert len(report) <= 2
    assert [r["k"] for r in report] == list(range(1, len(report) + 1))
    assert 1 <= k <= len(report)
    assert len(shapelets) == k
