"""End-to-end pipeline: mine, prune via the diversity graph, sweep k,
train the final ELM, and predict.

The k sweep evaluates each diversified top-k shapelet set by transforming
the training data and scoring an ELM under the configured evaluation mode;
the k with the best mean accuracy wins, smaller k on ties. Everything is
fitted on training data only.
"""

from __future__ import annotations

import dataclasses
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import elm
from .dataset import Dataset, stratified_folds, znormalize
from .distance import DistanceConfig
from .errors import LengthMismatchError, SingleClassTrainingError
from .graph import DiversityGraph, build_graph, div_topk
from .mining import MiningConfig, SaxConfig, Shapelet, mine_shapelets
from .transform import Scaling, apply_scaling, fit_scaling, transform

MODEL_FORMAT = "divshap-pipeline"
MODEL_VERSION = 1


@dataclass(frozen=True)
class EvalConfig:
    """How candidate k values are scored during the sweep.

    mode "cv" runs stratified cross-validation on the training split
    (fold count clamps to the dataset size); mode "train" scores plain
    training accuracy. Each is averaged over `repeats` seeded ELM draws.
    """

    mode: str = "cv"
    folds: int = 5
    repeats: int = 5
    seed: int = 0


@dataclass(frozen=True)
class PipelineConfig:
    """kappa bounds the k sweep; znormalize_series applies whole-series
    z-normalization before mining and again at predict time (window-level
    normalization is governed by `distance` instead)."""

    kappa: int = 9
    mining: MiningConfig = field(default_factory=MiningConfig)
    distance: DistanceConfig = field(default_factory=DistanceConfig)
    elm: elm.ELMConfig = field(default_factory=elm.ELMConfig)
    evaluation: EvalConfig = field(default_factory=EvalConfig)
    same_class_only: bool = True
    znormalize_series: bool = False


@dataclass
class PipelineModel:
    selected_k: int
    shapelets: list[Shapelet]
    scaling: Scaling
    elm_model: elm.ELMModel
    k_sweep_report: list[dict]
    config: PipelineConfig
    trained_m: int
    label_names: dict[int, str] = field(default_factory=dict)


def _sweep_elm_seed(base_seed: int, k: int, repeat: int) -> int:
    """Deterministic ELM seed per (k, repeat) sweep cell."""
    return int(
        np.random.SeedSequence((base_seed & 0xFFFFFFFF, k, repeat)).generate_state(1)[0]
    )


def prepare_series(d: Dataset, cfg: PipelineConfig) -> Dataset:
    """Apply the configured whole-series normalization, if any."""
    if not cfg.znormalize_series:
        return d
    X = np.vstack([znormalize(row) for row in d.X]) if d.n else d.X
    return Dataset(X=X, y=d.y, label_names=d.label_names, name=d.name)


def _evaluate_features(
    X: np.ndarray, y: np.ndarray, folds: np.ndarray | None, cfg: PipelineConfig, elm_seed: int
) -> float:
    """One sweep-cell evaluation: CV mean accuracy or training accuracy."""
    elm_cfg = dataclasses.replace(cfg.elm, seed=elm_seed)
    if folds is None:
        scaling = Scaling(mins=X.min(axis=0), maxs=X.max(axis=0))
        Xs = _scale(X, scaling)
        model = elm.train(Xs, y, elm_cfg)
        return float((elm.predict(model, Xs) == y).mean())

    accs = []
    for f in np.unique(folds):
        val = folds == f
        tr = ~val
        if not val.any() or len(np.unique(y[tr])) < 2:
            continue
        scaling = Scaling(mins=X[tr].min(axis=0), maxs=X[tr].max(axis=0))
        model = elm.train(_scale(X[tr], scaling), y[tr], elm_cfg)
        pred = elm.predict(model, _scale(X[val], scaling))
        accs.append(float((pred == y[val]).mean()))
    if not accs:
        warnings.warn("no usable CV folds; falling back to training accuracy")
        return _evaluate_features(X, y, None, cfg, elm_seed)
    return float(np.mean(accs))


def _scale(X: np.ndarray, scaling: Scaling) -> np.ndarray:
    span = scaling.maxs - scaling.mins
    safe = np.where(span > 0, span, 1.0)
    out = np.clip((X - scaling.mins) / safe, 0.0, 1.0)
    return np.where(span > 0, out, 0.0)


def select_k(
    graph: DiversityGraph, train: Dataset, cfg: PipelineConfig
) -> tuple[int, list[Shapelet], list[dict]]:
    """Sweep k in [1, kappa] and pick the best-evaluating shapelet count.

    Larger k values are skipped once the greedy independent set is
    exhausted (their result would duplicate the last evaluated prefix).
    Ties in mean accuracy resolve to the smaller k.
    """
    if graph.n == 0:
        raise ValueError("diversity graph has no vertices")
    kappa = max(1, min(cfg.kappa, graph.n))
    pool = div_topk(graph, kappa)
    feats = transform(train, pool, cfg.distance)

    folds = None
    if cfg.evaluation.mode == "cv":
        f = max(2, min(cfg.evaluation.folds, train.n))
        folds = stratified_folds(train, f, cfg.evaluation.seed)

    report: list[dict] = []
    best_k, best_acc = None, -1.0
    for k in range(1, len(pool) + 1):
        Xk = feats.X[:, :k]
        per_repeat = [
            _evaluate_features(
                Xk, train.y, folds, cfg, _sweep_elm_seed(cfg.evaluation.seed, k, rep)
            )
            for rep in range(cfg.evaluation.repeats)
        ]
        mean_acc = float(np.mean(per_repeat))
        labels, counts = np.unique([s.class_label for s in pool[:k]], return_counts=True)
        report.append(
            {
                "k": k,
                "mean_accuracy": mean_acc,
                "per_repeat": per_repeat,
                "n_shapelets": k,
                "class_counts": {int(c): int(n) for c, n in zip(labels, counts)},
            }
        )
        if mean_acc > best_acc:
            best_k, best_acc = k, mean_acc
    return best_k, pool[:best_k], report


def fit(train: Dataset, cfg: PipelineConfig | None = None, *, workers: int = 1) -> PipelineModel:
    """Mine, build the diversity graph, select k, and train the final ELM.

    Test data never enters: shapelets, scaling, and the classifier all come
    from the training split alone.
    """
    cfg = cfg or PipelineConfig()
    if len(train.classes) < 2:
        raise SingleClassTrainingError("pipeline training needs at least two classes")
    train = prepare_series(train, cfg)
    mining_cfg = dataclasses.replace(cfg.mining, normalize=cfg.distance)
    all_shapelets = mine_shapelets(train, mining_cfg, workers=workers)
    graph = build_graph(
        all_shapelets, cfg.distance, same_class_only=cfg.same_class_only, lazy=True
    )
    return _fit_from_graph(graph, train, cfg)


def _fit_from_graph(graph: DiversityGraph, train: Dataset, cfg: PipelineConfig) -> PipelineModel:
    """Selection and final training given an already-built graph (lets
    benchmarks reuse one mining pass across seeds)."""
    k, shapelets, report = select_k(graph, train, cfg)
    feats = transform(train, shapelets, cfg.distance)
    scaling = fit_scaling(feats)
    scaled = apply_scaling(feats, scaling)
    elm_model = elm.train(scaled.X, train.y, cfg.elm)
    return PipelineModel(
        selected_k=k,
        shapelets=shapelets,
        scaling=scaling,
        elm_model=elm_model,
        k_sweep_report=report,
        config=cfg,
        trained_m=train.m,
        label_names=dict(train.label_names),
    )


def predict_pipeline(model: PipelineModel, test: Dataset) -> tuple[np.ndarray, float | None]:
    """Transform test data with the fitted shapelets and classify.

    Returns integer-coded predictions and the accuracy against the test
    labels, or None when the test set is empty.
    """
    if test.m != model.trained_m:
        raise LengthMismatchError(
            f"test series length {test.m} != training length {model.trained_m}"
        )
    if test.n == 0:
        return np.asarray([], dtype=np.int64), None
    test = prepare_series(test, model.config)
    feats = apply_scaling(transform(test, model.shapelets, model.config.distance), model.scaling)
    pred = elm.predict(model.elm_model, feats.X)
    return pred, float((pred == test.y).mean())


def _config_to_dict(cfg: PipelineConfig) -> dict:
    return dataclasses.asdict(cfg)


def _config_from_dict(d: dict) -> PipelineConfig:
    mining = dict(d["mining"])
    mining["sax"] = SaxConfig(**mining["sax"])
    mining["normalize"] = DistanceConfig(**mining["normalize"])
    return PipelineConfig(
        kappa=d["kappa"],
        mining=MiningConfig(**mining),
        distance=DistanceConfig(**d["distance"]),
        elm=elm.ELMConfig(**d["elm"]),
        evaluation=EvalConfig(**d["evaluation"]),
        same_class_only=d["same_class_only"],
        znormalize_series=d.get("znormalize_series", False),
    )


def save_pipeline(model: PipelineModel, stream) -> None:
    """Serialize a fitted pipeline to versioned JSON."""
    blob = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "selected_k": model.selected_k,
        "trained_m": model.trained_m,
        "config": _config_to_dict(model.config),
        "label_names": {str(k): v for k, v in model.label_names.items()},
        "shapelets": [
            {
                "values": s.values.tolist(),
                "source_series": s.source_series,
                "start": s.start,
                "length": s.length,
                "class_label": s.class_label,
                "split_threshold": s.split_threshold,
                "gain": s.gain,
                "gap": s.gap,
            }
            for s in model.shapelets
        ],
        "scaling": {"mins": model.scaling.mins.tolist(), "maxs": model.scaling.maxs.tolist()},
        "elm": elm.model_to_dict(model.elm_model),
        "sweep": model.k_sweep_report,
    }
    json.dump(blob, stream, indent=1)


def load_pipeline(stream) -> PipelineModel:
    blob = json.load(stream)
    if blob.get("format") != MODEL_FORMAT:
        raise ValueError("not a divshap pipeline model file")
    if blob.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {blob.get('version')}")
    shapelets = [
        Shapelet(
            values=np.asarray(s["values"], dtype=np.float64),
            source_series=int(s["source_series"]),
            start=int(s["start"]),
            length=int(s["length"]),
            class_label=int(s["class_label"]),
            split_threshold=float(s["split_threshold"]),
            gain=float(s["gain"]),
            gap=float(s["gap"]),
        )
        for s in blob["shapelets"]
    ]
    sweep = [
        {**row, "class_counts": {int(k): v for k, v in row["class_counts"].items()}}
        for row in blob["sweep"]
    ]
    return PipelineModel(
        selected_k=int(blob["selected_k"]),
        shapelets=shapelets,
        scaling=Scaling(
            mins=np.asarray(blob["scaling"]["mins"], dtype=np.float64),
            maxs=np.asarray(blob["scaling"]["maxs"], dtype=np.float64),
        ),
        elm_model=elm.model_from_dict(blob["elm"]),
        k_sweep_report=sweep,
        config=_config_from_dict(blob["config"]),
        trained_m=int(blob["trained_m"]),
        label_names={int(k): v for k, v in blob.get("label_names", {}).items()},
    )
