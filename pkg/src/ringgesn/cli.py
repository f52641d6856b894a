"""Command-line interface: fetch datasets, run benchmarks, dump embeddings.

Exit codes follow a stable contract: 0 on success, 1 on runtime failures
(missing or malformed data, network trouble beyond the caller's control),
2 on usage and validation errors (bad flags, impossible settings, HTTP
client errors such as an unknown dataset name).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from .data import MalformedDatasetError, parse_tudataset
from .evaluation import MGN_COMPLETE, MGN_REDUCED, SearchSpace, run_evaluation
from .fetch import DEFAULT_BASE_URL, ExtractionError, FetchError, fetch_dataset, resolve_name
from .reservoir import FAMILIES, ReservoirConfig, StopRule, build_reservoir, encode_pooled

ENV_DATA_DIR = "RINGGESN_DATA_DIR"


def _data_root(flag_value: str | None) -> Path:
    if flag_value:
        return Path(flag_value)
    return Path(os.environ.get(ENV_DATA_DIR, "data"))


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from err
    if not sizes:
        raise argparse.ArgumentTypeError("size list is empty")
    return sizes


def _load_dataset(args):
    name = resolve_name(args.name)
    root = _data_root(args.data_dir) / name
    return parse_tudataset(root, name)


def cmd_fetch(args) -> int:
    path = fetch_dataset(
        args.name, base_url=args.base_url, cache_directory=_data_root(args.data_dir)
    )
    print(path)
    return 0


def cmd_bench(args) -> int:
    dataset = _load_dataset(args)
    smallest_class = int(dataset.class_counts.min())
    if args.folds > smallest_class:
        raise ValueError(
            f"--folds {args.folds} exceeds the smallest class size "
            f"{smallest_class}; stratified folds are impossible"
        )
    families = FAMILIES if args.model == "all" else (args.model,)
    space = SearchSpace(
        families=families,
        hidden_sizes=args.sizes,
        num_configs=args.configs,
        num_guesses=args.guesses,
        mgn_mode=args.mgn_mode,
        epsilon=args.epsilon,
        max_iterations=args.max_iters,
        num_folds=args.folds,
        seed=args.seed,
    )
    report = run_evaluation(dataset, space, jobs=args.jobs)
    out_dir = Path(args.out) if args.out else Path("runs") / dataset.name
    paths = report.write(out_dir)
    for summary in report.summaries:
        print(
            f"{summary.family.upper()} {dataset.name}: "
            f"mean={summary.mean_test_accuracy:.4f} "
            f"std={summary.std_test_accuracy:.4f}"
        )
    print(f"report written to {paths['report'].parent}")
    return 0


def cmd_encode(args) -> int:
    dataset = _load_dataset(args)
    config = ReservoirConfig(
        family=args.model,
        hidden_units=args.size,
        input_dim=dataset.input_dim,
        input_scaling=args.omega,
        effective_spectral_radius=args.rho,
        degree=max(1, dataset.degree),
        seed=args.seed,
    )
    weights = build_reservoir(config)
    stop = StopRule(args.epsilon, args.max_iters)
    pooled, iterations, converged = encode_pooled(weights, list(dataset.graphs), stop)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8", newline="") as sink:
        writer = csv.writer(sink)
        writer.writerow(
            ["graph", "iterations", "converged"]
            + [f"e{j}" for j in range(config.hidden_units)]
        )
        for index in range(dataset.num_graphs):
            writer.writerow(
                [
                    index,
                    int(iterations[index]),
                    "true" if converged[index] else "false",
                ]
                + [repr(float(v)) for v in pooled[index]]
            )
    print(out_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringgesn",
        description="Reservoir-computing benchmarks for graph classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fetch = sub.add_parser("fetch", help="download a dataset into the local cache")
    fetch.add_argument("name", help="dataset name or alias (e.g. MUTAG, IMDB-b)")
    fetch.add_argument("--data-dir", default=None, help=f"cache root (default: ${ENV_DATA_DIR} or ./data)")
    fetch.add_argument("--base-url", default=DEFAULT_BASE_URL, help="archive server base URL")
    fetch.set_defaults(handler=cmd_fetch)

    bench = sub.add_parser("bench", help="run the nested cross-validation benchmark")
    bench.add_argument("name", help="dataset name or alias")
    bench.add_argument("--model", choices=list(FAMILIES) + ["all"], default="all")
    bench.add_argument("--sizes", type=_parse_sizes, default=(5, 10, 30, 50), help="comma-separated hidden sizes")
    bench.add_argument("--configs", type=int, default=50, help="random (omega, rho) draws per cell")
    bench.add_argument("--guesses", type=int, default=50, help="reservoir guesses averaged per draw")
    bench.add_argument("--mgn-mode", choices=[MGN_COMPLETE, MGN_REDUCED], default=MGN_REDUCED)
    bench.add_argument("--epsilon", type=float, default=1e-3, help="convergence threshold")
    bench.add_argument("--max-iters", type=int, default=50, help="iteration cap per encoding")
    bench.add_argument("--folds", type=int, default=10)
    bench.add_argument("--seed", type=int, default=0, help="master seed for reservoir guesses")
    bench.add_argument("--out", default=None, help="output directory (default: runs/<name>)")
    bench.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    bench.add_argument("--data-dir", default=None)
    bench.set_defaults(handler=cmd_bench)

    encode = sub.add_parser("encode", help="write pooled embeddings for every graph")
    encode.add_argument("name", help="dataset name or alias")
    encode.add_argument("--model", choices=list(FAMILIES), default="mgn")
    encode.add_argument("--size", type=int, default=50, help="hidden units")
    encode.add_argument("--omega", type=float, default=0.5, help="input scaling in (0,1)")
    encode.add_argument("--rho", type=float, default=0.9, help="effective spectral radius in (0,1)")
    encode.add_argument("--seed", type=int, default=0)
    encode.add_argument("--epsilon", type=float, default=1e-3)
    encode.add_argument("--max-iters", type=int, default=50)
    encode.add_argument("--out", default="embeddings.csv", help="output CSV path")
    encode.add_argument("--data-dir", default=None)
    encode.set_defaults(handler=cmd_encode)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except FetchError as err:
        print(str(err), file=sys.stderr)
        if err.status is not None and 400 <= err.status < 500:
            return 2
        return 1
    except (MalformedDatasetError, ExtractionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
