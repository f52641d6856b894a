"""Run the full nested cross-validation benchmark on a synthetic dataset.

The dataset is trivially separable (graph size decides the class), so the
point here is not accuracy but watching the whole protocol turn: an outer
stratified split, an inner split of each training set for model selection,
a random search over (input scaling, effective radius) per hidden size,
reservoir-guess averaging, the regularizer grid, and a final refit of each
fold's winner on the complete training set.

Run:  python3 demos/toy_benchmark.py
"""

import numpy as np

from ringgesn import Dataset, Graph, SearchSpace, run_evaluation


def chain(num_vertices):
    edges = np.column_stack([np.arange(num_vertices - 1),
                             np.arange(1, num_vertices)])
    labels = np.ones((num_vertices, 1))
    return Graph(num_vertices=num_vertices, edges=edges, vertex_labels=labels)


def make_dataset(num_graphs=30, seed=11):
    rng = np.random.default_rng(seed)
    graphs, targets = [], []
    for i in range(num_graphs):
        cls = i % 2
        size = int(rng.integers(3, 6)) if cls == 0 else int(rng.integers(9, 12))
        graphs.append(chain(size))
        targets.append(cls)
    return Dataset(
        name="chains", graphs=tuple(graphs), targets=np.array(targets),
        num_classes=2, input_dim=1, degree=2,
    )


def main():
    dataset = make_dataset()
    space = SearchSpace(
        hidden_sizes=(5, 10),
        num_configs=3,
        num_guesses=3,
        num_folds=5,
        seed=0,
    )
    counts = np.bincount(dataset.targets)
    print(f"dataset: {len(dataset.graphs)} chain graphs, "
          f"class sizes {counts.tolist()} (short vs long)")
    print(f"search: families {space.families}, hidden sizes "
          f"{space.hidden_sizes}, {space.num_configs} configs x "
          f"{space.num_guesses} guesses, {space.num_folds} folds")
    print()

    report = run_evaluation(dataset, space)

    print(f"{'fold':>4} {'family':>6} {'units':>5} {'omega':>7} {'rho':>7} "
          f"{'beta':>8} {'val':>6} {'test':>6}")
    for f in report.folds:
        print(f"{f.fold:>4} {f.family:>6} {f.hidden_units:>5} "
              f"{f.input_scaling:>7.4f} {f.effective_spectral_radius:>7.4f} "
              f"{f.beta:>8.0e} {f.val_accuracy:>6.3f} {f.test_accuracy:>6.3f}")
    print()

    print("per-family test accuracy over outer folds:")
    for s in report.summaries:
        print(f"  {s.family:>4}: mean={s.mean_test_accuracy:.4f} "
              f"std={s.std_test_accuracy:.4f} over {s.num_folds} folds")
    print()

    print("hidden-size sweep (inner validation accuracy of each winner):")
    for e in report.size_sweep:
        print(f"  {e.family:>4} N_H={e.hidden_units:>3}: "
              f"mean={e.mean_val_accuracy:.4f} std={e.std_val_accuracy:.4f}")


if __name__ == "__main__":
    main()
