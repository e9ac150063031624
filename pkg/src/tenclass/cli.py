"""Command-line front end: generate synthetic datasets, train batch/online
models with either inner solver, and evaluate saved models.

    tenclass gen   --dims 10,10,10 --rank-min 1 --rank-max 10 --count 2000 \
                   --seed 7 --out train.tds
    tenclass train --data train.tds --mode batch --solver adm --model m.tcm \
                   [--test test.tds --eta 1 --metrics run.csv ...]
    tenclass eval  --model m.tcm --data test.tds --eta 1

Training writes the model in TCM1 format and, when ``--metrics`` is given, a
CSV of time-stamped quality measurements (header
``elapsed_sec,samples_seen,outer_iter,objective,test_mse,test_acc``).
Batch mode logs every ``--log-every`` outer iterations (default 1); online
mode logs every ``--log-every`` steps (default 10).  Everything except the
elapsed-time column is deterministic given ``--seed``.
"""

import argparse
import sys
import time
from dataclasses import dataclass

import numpy as np

from .batch import ApgConfig, LabeledDataset, fit_batch, objective
from .dataio import read_dataset, read_model, write_dataset, write_model
from .datagen import DatasetSpec, gen_dataset
from .metrics import accuracy, mse
from .online import fit_online

__all__ = ["main", "MetricsRecord"]


@dataclass
class MetricsRecord:
    elapsed_sec: float
    samples_seen: int
    outer_iter: int
    objective: float
    test_mse: float
    test_acc: float


class _MetricsWriter:
    HEADER = "elapsed_sec,samples_seen,outer_iter,objective,test_mse,test_acc"

    def __init__(self, path):
        self.f = open(path, "w", encoding="ascii")
        self.f.write(self.HEADER + "\n")

    def write(self, rec):
        self.f.write(
            f"{rec.elapsed_sec:.6f},{rec.samples_seen},{rec.outer_iter},"
            f"{rec.objective:.17g},{rec.test_mse:.17g},{rec.test_acc:.17g}\n"
        )

    def close(self):
        self.f.close()


def _parse_dims(text):
    try:
        dims = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"bad dims {text!r}")
    return dims


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tenclass",
        description="trace-norm regularized tensor classification benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic rank-labeled dataset")
    g.add_argument("--dims", type=_parse_dims, required=True)
    g.add_argument("--rank-min", type=int, required=True)
    g.add_argument("--rank-max", type=int, required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)

    t = sub.add_parser("train", help="train a model on a TDS1 dataset")
    t.add_argument("--data", required=True)
    t.add_argument("--mode", choices=("batch", "online"), required=True)
    t.add_argument("--solver", choices=("dr", "adm"), required=True)
    t.add_argument("--mu", type=int, default=1)
    t.add_argument("--lambda", dest="lam", type=float, default=1.0)
    t.add_argument("--beta", type=float, default=1e7)
    t.add_argument("--gamma", type=float, default=1e-7)
    t.add_argument("--eps1", type=float, default=1e-10)
    t.add_argument("--eps2", type=float, default=1e-10)
    t.add_argument("--max-outer", type=int, default=1000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--test")
    t.add_argument("--eta", type=float, default=1.0)
    t.add_argument("--metrics")
    t.add_argument("--model", required=True)
    t.add_argument("--log-every", type=int, default=None)
    t.add_argument("--tight-lipschitz", action="store_true")

    e = sub.add_parser("eval", help="evaluate a TCM1 model on a TDS1 dataset")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--eta", type=float, default=1.0)
    return parser


def _cmd_gen(args):
    spec = DatasetSpec(dims=args.dims, rank_min=args.rank_min,
                       rank_max=args.rank_max, count=args.count, seed=args.seed)
    write_dataset(args.out, gen_dataset(spec))
    print(f"wrote {args.count} samples of dims {'x'.join(map(str, args.dims))} "
          f"to {args.out}")
    return 0


def _test_scores(test_data, w, b, eta):
    preds = test_data.design_matrix @ w.ravel() + b
    return mse(preds, test_data.y), accuracy(preds, test_data.y, eta)


def _cmd_train(args):
    data = read_dataset(args.data)
    test_data = read_dataset(args.test) if args.test else None
    cfg = ApgConfig(lam=args.lam, eps1=args.eps1, eps2=args.eps2,
                    max_outer=args.max_outer, solver=args.solver,
                    gamma=args.gamma, beta=args.beta,
                    tight_lipschitz=args.tight_lipschitz)
    log_every = args.log_every
    if log_every is None:
        log_every = 1 if args.mode == "batch" else 10
    if log_every < 1:
        raise ValueError(f"--log-every must be at least 1, got {log_every}")

    writer = _MetricsWriter(args.metrics) if args.metrics else None
    start = time.perf_counter()

    def record(samples_seen, outer_iter, obj, w, b):
        if writer is None:
            return
        t_mse, t_acc = (_test_scores(test_data, w, b, args.eta)
                        if test_data is not None else (float("nan"), float("nan")))
        writer.write(MetricsRecord(time.perf_counter() - start, samples_seen,
                                   outer_iter, obj, t_mse, t_acc))

    try:
        if args.mode == "batch":
            def on_iter(k, w, b):
                if k % log_every == 0:
                    record(len(data), k, objective(w, b, data, cfg.lam), w, b)

            model = fit_batch(data, cfg, callback=on_iter if writer else None)
            record(len(data), model.iterations,
                   objective(model.w, model.b, data, cfg.lam), model.w, model.b)
        else:
            rng = np.random.default_rng(args.seed)
            t_max = len(data) // args.mu
            drawn = []

            def stream():
                while True:
                    i = int(rng.integers(len(data)))
                    drawn.append(i)
                    yield data.x[i], data.y[i]

            def seen_objective(w, b):
                seen = data.subset(drawn)
                return objective(w, b, seen, cfg.lam)

            def on_step(step, samples_seen, iters, w, b):
                if step % log_every == 0:
                    record(samples_seen, step, seen_objective(w, b), w, b)

            model = fit_online(stream(), data.dims, cfg, mu=args.mu,
                               t_max=t_max, callback=on_step if writer else None)
            record(len(drawn), t_max, seen_objective(model.w, model.b),
                   model.w, model.b)
    finally:
        if writer is not None:
            writer.close()

    write_model(args.model, model)
    status = "converged" if model.converged else "not converged"
    print(f"trained {args.mode}/{args.solver}: {model.iterations} iterations, "
          f"{status}; model written to {args.model}")
    return 0


def _cmd_eval(args):
    model = read_model(args.model)
    data = read_dataset(args.data)
    if data.dims != model.w.shape:
        raise ValueError(
            f"data dims {data.dims} do not match model dims {model.w.shape}"
        )
    preds = data.design_matrix @ model.w.ravel() + model.b
    print(f"mse {mse(preds, data.y):.17g}")
    print(f"accuracy {accuracy(preds, data.y, args.eta):.17g}")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "train":
            return _cmd_train(args)
        return _cmd_eval(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
