"""Nested cross-validation benchmark over the reservoir families.

Protocol: stratified outer K-fold; on each outer fold an inner stratified
K-fold selects, independently per family, the best (hidden size, input
scaling, effective radius, regularizer) combination from a random search
with C configurations per (family, size) cell, each averaged over R
reservoir guesses.  The winner is refit on the full outer-training set
with the same guess seeds and scored on the held-out fold.

Determinism contract: fold assignment and the (omega, rho) search draws
derive from fixed module constants (plus the fold number), never from the
master seed.  The master seed feeds only the reservoir guess seeds.  Two
consequences worth relying on: runs with the same master seed reproduce
bit-identically (up to wall-clock fields), and families that ignore guess
seeds produce identical numbers under any master seed.  All randomness
uses numpy's PCG64 generator.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset, TargetEncoding, compute_degree, encode_targets
from .readout import predict_classes, train_readout_sweep
from .reservoir import (
    FAMILIES,
    MGN,
    EncodingError,
    ReservoirConfig,
    ReservoirWeights,
    StopRule,
    build_reservoir,
    encode_pooled,
)

MGN_COMPLETE = "complete"
MGN_REDUCED = "reduced"

DEFAULT_REG_GRID = tuple(10.0**e for e in range(-10, 6))

# Fixed seeds for everything that must not move with the master seed:
# fold membership and the hyper-parameter draws.  Offsets by fold number
# give each outer fold its own independent streams.
_OUTER_FOLD_SEED = 709_201
_INNER_FOLD_SEED = 424_117
_SAMPLER_SEED = 980_531


@dataclass(frozen=True)
class SearchSpace:
    """Budget and grids of the hyper-parameter search.

    `num_configs` (C) counts random (omega, rho) draws per (family,
    hidden size) cell and `num_guesses` (R) reservoir samples averaged
    per draw.  The deterministic family never uses guesses; its
    "complete" mode spends the same C*R budget on C*R distinct draws
    while "reduced" keeps just C draws (R times fewer builds).  `seed` is
    the master seed feeding guess-seed derivation.
    """

    families: tuple[str, ...] = FAMILIES
    hidden_sizes: tuple[int, ...] = (5, 10, 30, 50)
    num_configs: int = 50
    num_guesses: int = 50
    reg_grid: tuple[float, ...] = DEFAULT_REG_GRID
    mgn_mode: str = MGN_REDUCED
    epsilon: float = 1e-3
    max_iterations: int = 50
    num_folds: int = 10
    seed: int = 0

    def __post_init__(self):
        requested = tuple(f.lower() for f in self.families)
        unknown = [f for f in requested if f not in FAMILIES]
        if unknown:
            raise ValueError(f"unknown families {unknown}, expected subset of {FAMILIES}")
        families = tuple(f for f in FAMILIES if f in requested)
        if not families:
            raise ValueError("families must not be empty")
        sizes = tuple(sorted(set(int(n) for n in self.hidden_sizes)))
        if not sizes or sizes[0] < 1:
            raise ValueError("hidden_sizes must be positive integers")
        if self.num_configs < 1 or self.num_guesses < 1:
            raise ValueError("num_configs and num_guesses must be >= 1")
        grid = tuple(float(b) for b in self.reg_grid)
        if not grid:
            raise ValueError("reg_grid must not be empty")
        if any(b < 0 or not np.isfinite(b) for b in grid):
            raise ValueError("reg_grid values must be finite and >= 0")
        if self.mgn_mode not in (MGN_COMPLETE, MGN_REDUCED):
            raise ValueError(
                f"mgn_mode must be {MGN_COMPLETE!r} or {MGN_REDUCED!r}, "
                f"got {self.mgn_mode!r}"
            )
        if self.num_folds < 2:
            raise ValueError("num_folds must be >= 2")
        StopRule(self.epsilon, self.max_iterations)  # validates both
        object.__setattr__(self, "families", families)
        object.__setattr__(self, "hidden_sizes", sizes)
        object.__setattr__(self, "reg_grid", grid)

    @property
    def stop_rule(self) -> StopRule:
        return StopRule(self.epsilon, self.max_iterations)

    def cell_budget(self, family: str) -> tuple[int, int]:
        """(configs, guesses) for one (family, hidden size) cell."""
        if family == MGN:
            if self.mgn_mode == MGN_COMPLETE:
                return self.num_configs * self.num_guesses, 1
            return self.num_configs, 1
        return self.num_configs, self.num_guesses


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """Partition of [0, num_items) into test folds."""

    num_items: int
    test_folds: tuple[np.ndarray, ...]

    def __post_init__(self):
        merged = np.concatenate(self.test_folds) if self.test_folds else np.zeros(0, np.int64)
        if not np.array_equal(np.sort(merged), np.arange(self.num_items)):
            raise ValueError("test folds must partition the index range")

    @property
    def num_folds(self) -> int:
        return len(self.test_folds)

    def split(self, fold: int) -> tuple[np.ndarray, np.ndarray]:
        """(train_indices, test_indices) for one fold, both sorted."""
        test = self.test_folds[fold]
        mask = np.ones(self.num_items, dtype=bool)
        mask[test] = False
        return np.nonzero(mask)[0].astype(np.int64), test


def stratified_folds(targets, num_folds: int, seed: int) -> FoldPlan:
    """Deal each class's shuffled members round-robin into folds.

    The dealing cursor continues across classes, so total fold sizes also
    differ by at most one.  A class smaller than num_folds triggers a
    warning (its members cannot reach every fold).
    """
    targets = np.asarray(targets, dtype=np.int64)
    num_items = len(targets)
    if num_folds < 2:
        raise ValueError("num_folds must be >= 2")
    if num_folds > num_items:
        raise ValueError(
            f"num_folds={num_folds} exceeds the {num_items} available items"
        )
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(num_folds)]
    cursor = 0
    for cls in np.unique(targets):
        members = np.flatnonzero(targets == cls)
        if len(members) < num_folds:
            warnings.warn(
                f"class {cls} has only {len(members)} members for "
                f"{num_folds} folds; folds will hold unequal class counts",
                stacklevel=2,
            )
        rng.shuffle(members)
        for offset, index in enumerate(members):
            folds[(cursor + offset) % num_folds].append(int(index))
        cursor += len(members)
    return FoldPlan(
        num_items=num_items,
        test_folds=tuple(np.array(sorted(f), dtype=np.int64) for f in folds),
    )


@dataclass(frozen=True)
class CandidateConfig:
    """One sampled search point plus the guess seeds it is averaged over.

    `index` is the draw position within the (family, hidden_units) cell
    and breaks exact accuracy ties in favor of earlier draws.
    """

    family: str
    hidden_units: int
    input_dim: int
    input_scaling: float
    effective_spectral_radius: float
    degree: int
    guess_seeds: tuple[int, ...]
    index: int

    @property
    def num_guesses(self) -> int:
        return len(self.guess_seeds)

    def reservoir_config(self, guess_seed: int) -> ReservoirConfig:
        return ReservoirConfig(
            family=self.family,
            hidden_units=self.hidden_units,
            input_dim=self.input_dim,
            input_scaling=self.input_scaling,
            effective_spectral_radius=self.effective_spectral_radius,
            degree=self.degree,
            seed=guess_seed,
        )


def _open_unit(rng: np.random.Generator) -> float:
    # uniform() can return 0.0; the open interval (0, 1) is required.
    while True:
        value = float(rng.uniform())
        if 0.0 < value < 1.0:
            return value


def sample_configs(
    space: SearchSpace, input_dim: int, degree: int, seed: int
) -> list[CandidateConfig]:
    """Draw the full candidate list for one fold.

    (omega, rho) pairs come i.i.d. uniform from (0, 1) via `seed`; guess
    seeds come from the master seed stream, so re-sampling with a
    different master seed moves the guesses but not the search grid.
    """
    param_rng = np.random.default_rng(seed)
    guess_rng = np.random.default_rng(space.seed)
    degree = max(1, int(degree))
    out: list[CandidateConfig] = []
    for family in space.families:
        num_configs, num_guesses = space.cell_budget(family)
        for hidden in space.hidden_sizes:
            for position in range(num_configs):
                omega = _open_unit(param_rng)
                rho = _open_unit(param_rng)
                seeds = tuple(
                    int(s)
                    for s in guess_rng.integers(0, 2**63, size=num_guesses)
                )
                out.append(
                    CandidateConfig(
                        family=family,
                        hidden_units=hidden,
                        input_dim=input_dim,
                        input_scaling=omega,
                        effective_spectral_radius=rho,
                        degree=degree,
                        guess_seeds=seeds,
                        index=position,
                    )
                )
    return out


class EncodingCache:
    """Pooled-embedding cache keyed by reservoir build.

    Embeddings do not depend on the fold split or the regularizer, so one
    encoding per (guess, hidden size, omega, rho) serves every inner fold
    and every beta.  Also the bookkeeper for build/convergence counters
    that end up in reports.
    """

    def __init__(self, dataset: Dataset, stop: StopRule):
        self.dataset = dataset
        self.stop = stop
        self._entries: dict[ReservoirConfig, _CacheEntry] = {}
        self._target_encoding: TargetEncoding | None = None
        self.reservoir_builds = 0
        self.encoded_graphs = 0
        self.converged_graphs = 0
        self.failed_guesses = 0

    @property
    def target_encoding(self) -> TargetEncoding:
        if self._target_encoding is None:
            self._target_encoding = encode_targets(self.dataset)
        return self._target_encoding

    def pooled(self, config: ReservoirConfig, indices: np.ndarray) -> np.ndarray | None:
        """Embeddings for the requested graphs, or None for a failed guess.

        Rows other than `indices` may be unencoded (zeros); callers index
        only what they asked for.
        """
        key = dataclasses.replace(config, seed=0) if config.family == MGN else config
        entry = self._entries.get(key)
        if entry is None:
            weights = build_reservoir(config)
            self.reservoir_builds += 1
            entry = _CacheEntry(
                weights=weights,
                pooled=np.zeros((self.dataset.num_graphs, config.hidden_units)),
                encoded=np.zeros(self.dataset.num_graphs, dtype=bool),
            )
            self._entries[key] = entry
        if entry.failed:
            return None
        indices = np.asarray(indices, dtype=np.int64)
        missing = indices[~entry.encoded[indices]]
        if missing.size:
            missing = np.unique(missing)
            try:
                pooled, _, converged = encode_pooled(
                    entry.weights,
                    [self.dataset.graphs[i] for i in missing],
                    self.stop,
                )
            except EncodingError:
                entry.failed = True
                self.failed_guesses += 1
                return None
            entry.pooled[missing] = pooled
            entry.encoded[missing] = True
            self.encoded_graphs += int(missing.size)
            self.converged_graphs += int(converged.sum())
        return entry.pooled

    def stats(self) -> dict[str, int]:
        return {
            "reservoir_builds": self.reservoir_builds,
            "encoded_graphs": self.encoded_graphs,
            "converged_graphs": self.converged_graphs,
            "failed_guesses": self.failed_guesses,
        }


@dataclass(eq=False)
class _CacheEntry:
    weights: ReservoirWeights
    pooled: np.ndarray
    encoded: np.ndarray
    failed: bool = False


def _fit_and_score(
    pooled: np.ndarray,
    encoding: TargetEncoding,
    class_targets: np.ndarray,
    train_idx: np.ndarray,
    eval_idx: np.ndarray,
    betas,
) -> np.ndarray:
    """Train on pooled[train_idx] per beta, return accuracy on eval_idx.

    The single choke point through which every readout fit in the
    pipeline flows; leakage tests instrument it to prove that held-out
    indices never reach the training side.
    """
    readouts = train_readout_sweep(pooled[train_idx], encoding.subset(train_idx), betas)
    eval_embeddings = pooled[eval_idx]
    truth = class_targets[eval_idx]
    return np.array(
        [
            float(np.mean(predict_classes(readout, eval_embeddings) == truth))
            for readout in readouts
        ]
    )


def evaluate_config(
    config: CandidateConfig,
    beta_grid,
    train_idx: np.ndarray,
    val_idx: np.ndarray,
    dataset: Dataset,
    cache: EncodingCache,
) -> np.ndarray:
    """Mean validation accuracy per beta, averaged over the guesses.

    A guess whose encoding overflows scores chance level (1 / classes)
    across the grid and is flagged in the cache counters.
    """
    train_idx = np.asarray(train_idx, dtype=np.int64)
    val_idx = np.asarray(val_idx, dtype=np.int64)
    needed = np.concatenate([train_idx, val_idx])
    betas = [float(b) for b in beta_grid]
    accumulated = np.zeros(len(betas))
    for guess_seed in config.guess_seeds:
        pooled = cache.pooled(config.reservoir_config(guess_seed), needed)
        if pooled is None:
            accumulated += 1.0 / dataset.num_classes
            continue
        accumulated += _fit_and_score(
            pooled, cache.target_encoding, dataset.targets, train_idx, val_idx, betas
        )
    return accumulated / config.num_guesses


@dataclass(frozen=True)
class FoldOutcome:
    """Selected model and scores for one (outer fold, family)."""

    fold: int
    family: str
    hidden_units: int
    input_scaling: float
    effective_spectral_radius: float
    beta: float
    val_accuracy: float
    test_accuracy: float
    seconds: float
    degree: int
    reservoir_builds: int
    encoded_graphs: int
    converged_fraction: float
    failed_guesses: int


@dataclass(frozen=True)
class FamilySummary:
    family: str
    mean_test_accuracy: float
    std_test_accuracy: float
    num_folds: int


@dataclass(frozen=True)
class SizeSweepEntry:
    """Validation accuracy of the best candidate at one hidden size."""

    family: str
    hidden_units: int
    mean_val_accuracy: float
    std_val_accuracy: float


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    dataset_name: str
    num_graphs: int
    num_classes: int
    input_dim: int
    settings: dict
    folds: tuple[FoldOutcome, ...]
    summaries: tuple[FamilySummary, ...]
    size_sweep: tuple[SizeSweepEntry, ...]

    def to_dict(self) -> dict:
        return {
            "dataset": {
                "name": self.dataset_name,
                "num_graphs": self.num_graphs,
                "num_classes": self.num_classes,
                "input_dim": self.input_dim,
            },
            "settings": dict(self.settings),
            "folds": [
                {
                    "fold": f.fold,
                    "family": f.family,
                    "hidden_units": f.hidden_units,
                    "omega": f.input_scaling,
                    "rho": f.effective_spectral_radius,
                    "beta": f.beta,
                    "val_accuracy": f.val_accuracy,
                    "test_accuracy": f.test_accuracy,
                    "seconds": f.seconds,
                    "degree": f.degree,
                    "reservoir_builds": f.reservoir_builds,
                    "encoded_graphs": f.encoded_graphs,
                    "converged_fraction": f.converged_fraction,
                    "failed_guesses": f.failed_guesses,
                }
                for f in self.folds
            ],
            "aggregate": [
                {
                    "family": s.family,
                    "mean_test_accuracy": s.mean_test_accuracy,
                    "std_test_accuracy": s.std_test_accuracy,
                    "num_folds": s.num_folds,
                }
                for s in self.summaries
            ],
            "size_sweep": [
                {
                    "family": e.family,
                    "hidden_units": e.hidden_units,
                    "mean_val_accuracy": e.mean_val_accuracy,
                    "std_val_accuracy": e.std_val_accuracy,
                }
                for e in self.size_sweep
            ],
        }

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        """Write report.json, folds.csv and size_sweep.csv under out_dir."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "report": out / "report.json",
            "folds": out / "folds.csv",
            "size_sweep": out / "size_sweep.csv",
        }
        with open(paths["report"], "w", encoding="utf-8") as sink:
            json.dump(self.to_dict(), sink, indent=2)
            sink.write("\n")
        with open(paths["folds"], "w", encoding="utf-8", newline="") as sink:
            writer = csv.writer(sink)
            writer.writerow(
                [
                    "fold",
                    "family",
                    "hidden_units",
                    "omega",
                    "rho",
                    "beta",
                    "val_acc",
                    "test_acc",
                    "seconds",
                ]
            )
            for f in self.folds:
                writer.writerow(
                    [
                        f.fold,
                        f.family,
                        f.hidden_units,
                        repr(f.input_scaling),
                        repr(f.effective_spectral_radius),
                        repr(f.beta),
                        repr(f.val_accuracy),
                        repr(f.test_accuracy),
                        repr(f.seconds),
                    ]
                )
        with open(paths["size_sweep"], "w", encoding="utf-8", newline="") as sink:
            writer = csv.writer(sink)
            writer.writerow(["family", "hidden_units", "mean_val_acc", "std_val_acc"])
            for e in self.size_sweep:
                writer.writerow(
                    [
                        e.family,
                        e.hidden_units,
                        repr(e.mean_val_accuracy),
                        repr(e.std_val_accuracy),
                    ]
                )
        return paths


# Worker-side globals, set once per process by _init_worker.
_WORKER: dict = {}


def _init_worker(dataset: Dataset, space: SearchSpace) -> None:
    _WORKER["dataset"] = dataset
    _WORKER["space"] = space


def _search_task(payload) -> tuple[int, np.ndarray, dict, float]:
    """Inner-CV mean accuracy per beta for one candidate."""
    index, candidate, inner_splits = payload
    dataset: Dataset = _WORKER["dataset"]
    space: SearchSpace = _WORKER["space"]
    started = time.perf_counter()
    cache = EncodingCache(dataset, space.stop_rule)
    accumulated = np.zeros(len(space.reg_grid))
    for train_idx, val_idx in inner_splits:
        accumulated += evaluate_config(
            candidate, space.reg_grid, train_idx, val_idx, dataset, cache
        )
    accumulated /= len(inner_splits)
    return index, accumulated, cache.stats(), time.perf_counter() - started


def _refit_task(payload) -> tuple[int, float, dict, float]:
    """Refit the selected candidate on the outer-training set, score test."""
    index, candidate, beta, train_idx, test_idx = payload
    dataset: Dataset = _WORKER["dataset"]
    space: SearchSpace = _WORKER["space"]
    started = time.perf_counter()
    cache = EncodingCache(dataset, space.stop_rule)
    accuracy = evaluate_config(
        candidate, (beta,), train_idx, test_idx, dataset, cache
    )
    return index, float(accuracy[0]), cache.stats(), time.perf_counter() - started


def _run_tasks(task_fn, payloads, dataset, space, jobs):
    """Run payloads in submission order, serially or in a process pool.

    Results are position-aligned with payloads, so the report content is
    independent of worker count and scheduling.
    """
    if jobs <= 1 or len(payloads) <= 1:
        _init_worker(dataset, space)
        return [task_fn(p) for p in payloads]
    chunksize = max(1, len(payloads) // (jobs * 4))
    with ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker, initargs=(dataset, space)
    ) as pool:
        return list(pool.map(task_fn, payloads, chunksize=chunksize))


def _select_winner(space: SearchSpace, candidate_rows):
    """Pick the best (candidate, beta) row.

    Maximizes accuracy; exact ties fall to the smaller hidden size, then
    the smaller beta, then the earlier draw within the cell.
    """
    best = None
    best_key = None
    for candidate, accuracies in candidate_rows:
        for j, beta in enumerate(space.reg_grid):
            key = (
                -accuracies[j],
                candidate.hidden_units,
                beta,
                candidate.index,
            )
            if best_key is None or key < best_key:
                best_key = key
                best = (candidate, beta, float(accuracies[j]))
    return best


def run_evaluation(
    dataset: Dataset,
    space: SearchSpace,
    jobs: int = 1,
    outer_folds=None,
) -> EvaluationReport:
    """Full protocol: nested selection, refit, and the size-sweep table.

    `outer_folds` restricts the run to a subset of outer folds (useful
    for smoke tests on large datasets); the fold plan itself is always
    the full stratified partition.
    """
    if dataset.num_classes < 2:
        raise ValueError("evaluation needs at least 2 classes")
    plan = stratified_folds(dataset.targets, space.num_folds, seed=_OUTER_FOLD_SEED)
    if outer_folds is None:
        fold_ids = list(range(space.num_folds))
    else:
        fold_ids = sorted(set(int(f) for f in outer_folds))
        if any(f < 0 or f >= space.num_folds for f in fold_ids):
            raise ValueError(f"outer fold ids must lie in [0, {space.num_folds})")

    fold_train: dict[int, np.ndarray] = {}
    fold_test: dict[int, np.ndarray] = {}
    fold_degree: dict[int, int] = {}
    fold_candidates: dict[int, list[CandidateConfig]] = {}
    search_payloads = []
    task_keys = []
    for fold in fold_ids:
        train_idx, test_idx = plan.split(fold)
        degree = max(1, compute_degree(dataset, train_idx))
        inner = stratified_folds(
            dataset.targets[train_idx], space.num_folds, seed=_INNER_FOLD_SEED + fold
        )
        inner_splits = tuple(
            (train_idx[tr], train_idx[va])
            for tr, va in (inner.split(j) for j in range(inner.num_folds))
        )
        candidates = sample_configs(
            space, dataset.input_dim, degree, seed=_SAMPLER_SEED + fold
        )
        fold_train[fold] = train_idx
        fold_test[fold] = test_idx
        fold_degree[fold] = degree
        fold_candidates[fold] = candidates
        for candidate in candidates:
            search_payloads.append((len(search_payloads), candidate, inner_splits))
            task_keys.append((fold, candidate))

    search_results = _run_tasks(_search_task, search_payloads, dataset, space, jobs)

    # Regroup per (fold, family): candidate accuracy tables and counters.
    rows: dict[tuple[int, str], list] = {}
    search_stats: dict[tuple[int, str], dict] = {}
    search_seconds: dict[tuple[int, str], float] = {}
    for (fold, candidate), (_, accuracies, stats, seconds) in zip(
        task_keys, search_results
    ):
        key = (fold, candidate.family)
        rows.setdefault(key, []).append((candidate, accuracies))
        bucket = search_stats.setdefault(
            key, {k: 0 for k in ("reservoir_builds", "encoded_graphs", "converged_graphs", "failed_guesses")}
        )
        for name in bucket:
            bucket[name] += stats[name]
        search_seconds[key] = search_seconds.get(key, 0.0) + seconds

    refit_payloads = []
    refit_keys = []
    winners: dict[tuple[int, str], tuple[CandidateConfig, float, float]] = {}
    for fold in fold_ids:
        for family in space.families:
            key = (fold, family)
            winner = _select_winner(space, rows[key])
            winners[key] = winner
            candidate, beta, _ = winner
            refit_payloads.append(
                (len(refit_payloads), candidate, beta, fold_train[fold], fold_test[fold])
            )
            refit_keys.append(key)

    refit_results = _run_tasks(_refit_task, refit_payloads, dataset, space, jobs)

    outcomes = []
    for key, (_, test_accuracy, stats, seconds) in zip(refit_keys, refit_results):
        fold, family = key
        candidate, beta, val_accuracy = winners[key]
        merged = search_stats[key]
        encoded = merged["encoded_graphs"] + stats["encoded_graphs"]
        converged = merged["converged_graphs"] + stats["converged_graphs"]
        outcomes.append(
            FoldOutcome(
                fold=fold,
                family=family,
                hidden_units=candidate.hidden_units,
                input_scaling=candidate.input_scaling,
                effective_spectral_radius=candidate.effective_spectral_radius,
                beta=beta,
                val_accuracy=val_accuracy,
                test_accuracy=test_accuracy,
                seconds=search_seconds[key] + seconds,
                degree=fold_degree[fold],
                reservoir_builds=merged["reservoir_builds"],
                encoded_graphs=encoded,
                converged_fraction=(converged / encoded) if encoded else 1.0,
                failed_guesses=merged["failed_guesses"] + stats["failed_guesses"],
            )
        )
    outcomes.sort(key=lambda o: (o.fold, space.families.index(o.family)))

    summaries = []
    for family in space.families:
        scores = np.array([o.test_accuracy for o in outcomes if o.family == family])
        summaries.append(
            FamilySummary(
                family=family,
                mean_test_accuracy=float(scores.mean()),
                std_test_accuracy=float(scores.std()),
                num_folds=len(scores),
            )
        )

    sweep_entries = []
    for family in space.families:
        for hidden in space.hidden_sizes:
            per_fold = []
            for fold in fold_ids:
                cell = [
                    accuracies.max()
                    for candidate, accuracies in rows[(fold, family)]
                    if candidate.hidden_units == hidden
                ]
                per_fold.append(max(cell))
            values = np.array(per_fold)
            sweep_entries.append(
                SizeSweepEntry(
                    family=family,
                    hidden_units=hidden,
                    mean_val_accuracy=float(values.mean()),
                    std_val_accuracy=float(values.std()),
                )
            )

    settings = {
        "families": list(space.families),
        "hidden_sizes": list(space.hidden_sizes),
        "num_configs": space.num_configs,
        "num_guesses": space.num_guesses,
        "reg_grid": list(space.reg_grid),
        "mgn_mode": space.mgn_mode,
        "epsilon": space.epsilon,
        "max_iterations": space.max_iterations,
        "num_folds": space.num_folds,
        "seed": space.seed,
        "outer_folds": fold_ids,
    }
    return EvaluationReport(
        dataset_name=dataset.name,
        num_graphs=dataset.num_graphs,
        num_classes=dataset.num_classes,
        input_dim=dataset.input_dim,
        settings=settings,
        folds=tuple(outcomes),
        summaries=tuple(summaries),
        size_sweep=tuple(sweep_entries),
    )


def nested_cross_validate(dataset: Dataset, space: SearchSpace) -> EvaluationReport:
    """Run the full nested protocol on every outer fold, serially."""
    return run_evaluation(dataset, space, jobs=1)


def size_sweep(dataset: Dataset, space: SearchSpace) -> tuple[SizeSweepEntry, ...]:
    """Best validation accuracy per (family, hidden size), mean over folds."""
    return run_evaluation(dataset, space, jobs=1).size_sweep
