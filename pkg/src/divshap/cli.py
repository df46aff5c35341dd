"""Command-line front end.

Subcommands: fit, predict, sweep, compare, mine-dump, graph-dump. Options
may come from flags or from a key=value config file (flags win). The
DIVSHAP_WORKERS environment variable sets the default worker count.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from . import bench, elm
from .dataset import read_ucr
from .errors import DivshapError
from .graph import build_graph, graph_dump_rows
from .mining import MiningConfig, SaxConfig, mine_shapelets
from .pipeline import (
    EvalConfig,
    PipelineConfig,
    fit,
    load_pipeline,
    predict_pipeline,
    save_pipeline,
)
from .distance import DistanceConfig

_BOOL_KEYS = {
    "use_sax_filter",
    "normalize_windows",
    "length_normalize",
    "same_class_only",
    "znormalize_series",
}
_INT_KEYS = {
    "seed",
    "kappa",
    "workers",
    "eval_folds",
    "eval_repeats",
    "min_len",
    "max_len",
    "length_stride",
    "position_stride",
    "sax_word_length",
    "sax_alphabet_size",
    "sax_projection_iterations",
    "elm_hidden",
}
_FLOAT_KEYS = {"sax_keep_fraction", "elm_ridge"}
_STR_KEYS = {"eval_mode", "elm_activation"}


def parse_config_file(path: str | Path) -> dict:
    """Parse the simple key=value config format ('#' starts a comment)."""
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, val = (p.strip() for p in line.split("=", 1))
        if key in _BOOL_KEYS:
            if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"{path}:{lineno}: bad boolean {val!r}")
            out[key] = val.lower() in ("true", "1", "yes")
        elif key in _INT_KEYS:
            out[key] = int(val)
        elif key in _FLOAT_KEYS:
            out[key] = float(val)
        elif key in _STR_KEYS:
            out[key] = val
        else:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return out


def build_pipeline_config(opts: dict) -> PipelineConfig:
    sax = SaxConfig(
        word_length=opts.get("sax_word_length", 8),
        alphabet_size=opts.get("sax_alphabet_size", 4),
        projection_iterations=opts.get("sax_projection_iterations", 10),
        keep_fraction=opts.get("sax_keep_fraction", 0.25),
        seed=opts.get("seed", 0),
    )
    distance = DistanceConfig(
        normalize_windows=opts.get("normalize_windows", True),
        length_normalize=opts.get("length_normalize", True),
    )
    mining = MiningConfig(
        min_len=opts.get("min_len"),
        max_len=opts.get("max_len"),
        length_stride=opts.get("length_stride", 1),
        position_stride=opts.get("position_stride", 1),
        use_sax_filter=opts.get("use_sax_filter", False),
        sax=sax,
        normalize=distance,
    )
    elm_cfg = elm.ELMConfig(
        n_hidden=opts.get("elm_hidden"),
        activation=opts.get("elm_activation", "sigmoid"),
        seed=opts.get("seed", 0),
        ridge=opts.get("elm_ridge", 1e-6),
    )
    evaluation = EvalConfig(
        mode=opts.get("eval_mode", "cv"),
        folds=opts.get("eval_folds", 5),
        repeats=opts.get("eval_repeats", 5),
        seed=opts.get("seed", 0),
    )
    return PipelineConfig(
        kappa=opts.get("kappa", 9),
        mining=mining,
        distance=distance,
        elm=elm_cfg,
        evaluation=evaluation,
        same_class_only=opts.get("same_class_only", True),
        znormalize_series=opts.get("znormalize_series", False),
    )


def _collect_opts(args: argparse.Namespace) -> dict:
    opts: dict = {}
    if getattr(args, "config", None):
        opts.update(parse_config_file(args.config))
    for key in _BOOL_KEYS | _INT_KEYS | _FLOAT_KEYS | _STR_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--kappa", type=int)
    p.add_argument(
        "--workers",
        type=int,
        default=None,
        help="parallel scoring workers (default: DIVSHAP_WORKERS or 1)",
    )
    p.add_argument("--eval-mode", dest="eval_mode", choices=("cv", "train"))
    p.add_argument("--eval-folds", dest="eval_folds", type=int)
    p.add_argument("--eval-repeats", dest="eval_repeats", type=int)
    p.add_argument("--min-len", dest="min_len", type=int)
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--length-stride", dest="length_stride", type=int)
    p.add_argument("--position-stride", dest="position_stride", type=int)
    sax = p.add_mutually_exclusive_group()
    sax.add_argument(
        "--sax-filter", dest="use_sax_filter", action="store_const", const=True, default=None
    )
    sax.add_argument(
        "--no-sax-filter", dest="use_sax_filter", action="store_const", const=False
    )
    p.add_argument(
        "--znormalize-series",
        dest="znormalize_series",
        action="store_const",
        const=True,
        default=None,
        help="z-normalize whole series before mining",
    )
    p.add_argument("--elm-hidden", dest="elm_hidden", type=int)
    p.add_argument("--elm-ridge", dest="elm_ridge", type=float)
    p.add_argument(
        "--elm-activation", dest="elm_activation", choices=("sigmoid", "tanh", "hardlimit")
    )


def _workers(args: argparse.Namespace) -> int:
    if getattr(args, "workers", None):
        return args.workers
    return int(os.environ.get("DIVSHAP_WORKERS", "1"))


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="divshap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a pipeline model on a training file")
    p.add_argument("--train", required=True)
    p.add_argument("--model-out", required=True)
    _add_common(p)

    p = sub.add_parser("predict", help="classify a test file with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out", help="write predictions CSV here")

    p = sub.add_parser("sweep", help="emit the per-k accuracy curve as CSV")
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("compare", help="pipeline vs raw ELM and 1NN baselines")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out-prefix", help="write <prefix>.json and <prefix>.csv reports")
    _add_common(p)

    p = sub.add_parser("mine-dump", help="dump scored candidates as CSV")
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--top", type=int, help="keep only the best N candidates")
    _add_common(p)

    p = sub.add_parser("graph-dump", help="dump diversity-graph vertices and edges")
    p.add_argument("--train", required=True)
    p.add_argument("--vertices-out", required=True)
    p.add_argument("--edges-out", required=True)
    p.add_argument("--top", type=int, default=200, help="graph over the best N candidates")
    _add_common(p)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (DivshapError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "fit":
        cfg = build_pipeline_config(_collect_opts(args))
        model = fit(read_ucr(args.train), cfg, workers=_workers(args))
        with open(args.model_out, "w") as fh:
            save_pipeline(model, fh)
        print(f"selected_k: {model.selected_k}")
        print(f"model written to {args.model_out}")
        return 0

    if args.command == "predict":
        with open(args.model) as fh:
            model = load_pipeline(fh)
        test = read_ucr(args.test)
        pred, acc = predict_pipeline(model, test)
        lines = ["index,predicted,label"]
        for i, p in enumerate(pred):
            name = model.label_names.get(int(p), str(int(p)))
            lines.append(f"{i},{name},{test.label_names.get(int(test.y[i]), test.y[i])}")
        out = "\n".join(lines) + "\n"
        if args.out:
            Path(args.out).write_text(out)
        else:
            sys.stdout.write(out)
        if acc is not None:
            print(f"accuracy: {acc:.17g}")
        return 0

    if args.command == "sweep":
        cfg = build_pipeline_config(_collect_opts(args))
        train = read_ucr(args.train)
        report, model = bench.run_experiment(
            train, None, cfg, workers=_workers(args), mode="sweep"
        )
        Path(args.out).write_text(bench.sweep_csv(model))
        print(f"selected_k: {model.selected_k}")
        print(f"sweep written to {args.out}")
        return 0

    if args.command == "compare":
        cfg = build_pipeline_config(_collect_opts(args))
        train = read_ucr(args.train)
        test = read_ucr(args.test)
        report, model = bench.run_experiment(train, test, cfg, workers=_workers(args))
        print(report.table())
        if args.out_prefix:
            Path(args.out_prefix + ".json").write_text(report.to_json())
            Path(args.out_prefix + ".csv").write_text(report.accuracy_csv())
        return 0

    if args.command == "mine-dump":
        opts = _collect_opts(args)
        cfg = build_pipeline_config(opts)
        train = read_ucr(args.train)
        mining_cfg = dataclasses.replace(cfg.mining, normalize=cfg.distance)
        shapelets = mine_shapelets(train, mining_cfg, workers=_workers(args))
        if args.top:
            shapelets = shapelets[: args.top]
        with open(args.out, "w") as fh:
            fh.write("source_series,start,length,gain,threshold,values\n")
            for s in shapelets:
                vals = " ".join(format(v, ".17g") for v in s.values)
                fh.write(
                    f"{s.source_series},{s.start},{s.length},"
                    f"{format(s.gain, '.17g')},{format(s.split_threshold, '.17g')},{vals}\n"
                )
        print(f"{len(shapelets)} candidates written to {args.out}")
        return 0

    if args.command == "graph-dump":
        opts = _collect_opts(args)
        cfg = build_pipeline_config(opts)
        train = read_ucr(args.train)
        mining_cfg = dataclasses.replace(cfg.mining, normalize=cfg.distance)
        shapelets = mine_shapelets(train, mining_cfg, workers=_workers(args))[: args.top]
        g = build_graph(shapelets, cfg.distance, same_class_only=cfg.same_class_only)
        vertices, edges = graph_dump_rows(g)
        with open(args.vertices_out, "w") as fh:
            fh.write("index,gain,threshold,class,source_series,start,length\n")
            for v in vertices:
                fh.write(
                    f"{v['index']},{format(v['gain'], '.17g')},{format(v['threshold'], '.17g')},"
                    f"{v['class']},{v['source_series']},{v['start']},{v['length']}\n"
                )
        with open(args.edges_out, "w") as fh:
            fh.write("i,j\n")
            for i, j in edges:
                fh.write(f"{i},{j}\n")
        print(f"{len(vertices)} vertices, {len(edges)} edges written")
        return 0

    raise ValueError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
