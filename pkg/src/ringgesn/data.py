"""Graph dataset loading and target encoding.

Datasets come as directories of plain-text files in the layout used by the
public TUDataset benchmark collection: a block-diagonal edge list
`<name>_A.txt` with 1-based global vertex ids, a `<name>_graph_indicator.txt`
mapping each vertex to its graph, per-graph class labels, and optionally
per-vertex integer labels.  Vertices are re-indexed 0-based per graph,
discrete vertex labels become one-hot vectors over the ascending sorted
label alphabet, and class labels are remapped to contiguous indices by
ascending raw value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import pandas as pd

from .numerics import AdjacencyCSR


class MalformedDatasetError(ValueError):
    """Raised when dataset files exist but violate the expected layout."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected vertex-labelled graph.

    `edges` is an (m, 2) int64 array of unordered pairs stored with the
    smaller endpoint first, one row per edge, no self-loops or duplicates.
    `vertex_labels` is (num_vertices, input_dim) float64.
    """

    num_vertices: int
    edges: np.ndarray
    vertex_labels: np.ndarray

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        edges = np.sort(edges, axis=1)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.num_vertices:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loop not allowed")
            keys = edges[:, 0] * self.num_vertices + edges[:, 1]
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate edge")
        labels = np.asarray(self.vertex_labels, dtype=np.float64)
        if labels.ndim != 2 or labels.shape[0] != self.num_vertices:
            raise ValueError(
                f"vertex_labels must be ({self.num_vertices}, input_dim), "
                f"got {labels.shape}"
            )
        if labels.shape[1] < 1:
            raise ValueError("vertex labels must have at least one dimension")
        if not np.all(np.isfinite(labels)):
            raise ValueError("vertex labels must be finite")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "vertex_labels", labels)

    @property
    def input_dim(self) -> int:
        return self.vertex_labels.shape[1]

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @cached_property
    def adjacency(self) -> AdjacencyCSR:
        return AdjacencyCSR.from_edges(self.num_vertices, self.edges)

    @property
    def degrees(self) -> np.ndarray:
        """Per-vertex neighborhood sizes."""
        return np.bincount(
            self.edges.ravel(), minlength=self.num_vertices
        ).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Collection of graphs with per-graph integer class targets.

    `degree` is the maximum neighborhood size over every vertex of every
    graph; the reservoir stability bound is expressed relative to it.
    """

    name: str
    graphs: tuple[Graph, ...]
    targets: np.ndarray
    num_classes: int
    input_dim: int
    degree: int

    def __post_init__(self):
        graphs = tuple(self.graphs)
        targets = np.asarray(self.targets, dtype=np.int64)
        if len(graphs) == 0:
            raise ValueError("dataset has no graphs")
        if targets.shape != (len(graphs),):
            raise ValueError(
                f"targets shape {targets.shape} does not match "
                f"{len(graphs)} graphs"
            )
        if self.num_classes < 1:
            raise ValueError("num_classes must be >= 1")
        if targets.min() < 0 or targets.max() >= self.num_classes:
            raise ValueError("target class index out of range")
        counts = np.bincount(targets, minlength=self.num_classes)
        if np.any(counts == 0):
            raise ValueError("every class must occur at least once")
        for g in graphs:
            if g.input_dim != self.input_dim:
                raise ValueError("inconsistent vertex label dimension")
        recomputed = max((int(g.degrees.max(initial=0)) for g in graphs), default=0)
        if self.degree != recomputed:
            raise ValueError(
                f"degree field {self.degree} does not match recomputed "
                f"maximum {recomputed}"
            )
        object.__setattr__(self, "graphs", graphs)
        object.__setattr__(self, "targets", targets)

    @property
    def num_graphs(self) -> int:
        return len(self.graphs)

    @property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.targets, minlength=self.num_classes)


@dataclass(frozen=True, eq=False)
class TargetEncoding:
    """Real-vector regression targets for the classification readout.

    Binary tasks use a single −1/+1 value (class 0 → −1, class 1 → +1);
    tasks with more classes use a one-hot vector with +1 at the class
    position and −1 elsewhere.  `vectors` is (num_graphs, output_dim).
    """

    num_classes: int
    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        expected = 1 if self.num_classes == 2 else self.num_classes
        if vectors.ndim != 2 or vectors.shape[1] != expected:
            raise ValueError(
                f"expected encoded width {expected}, got shape {vectors.shape}"
            )
        object.__setattr__(self, "vectors", vectors)

    @property
    def output_dim(self) -> int:
        return self.vectors.shape[1]

    def subset(self, indices: np.ndarray) -> "TargetEncoding":
        return TargetEncoding(self.num_classes, self.vectors[indices])


def encode_targets(dataset: Dataset) -> TargetEncoding:
    """Encode integer class targets as −1/+1 regression vectors."""
    if dataset.num_classes < 2:
        raise ValueError("target encoding needs at least 2 classes")
    targets = dataset.targets
    if dataset.num_classes == 2:
        vectors = np.where(targets == 1, 1.0, -1.0).reshape(-1, 1)
    else:
        vectors = np.full((len(targets), dataset.num_classes), -1.0)
        vectors[np.arange(len(targets)), targets] = 1.0
    return TargetEncoding(dataset.num_classes, vectors)


def compute_degree(dataset: Dataset, indices: np.ndarray | None = None) -> int:
    """Maximum vertex degree over the dataset, or over a subset of graphs.

    The evaluation pipeline recomputes this on each training split so the
    stability bound never peeks at held-out graphs.
    """
    graphs = dataset.graphs
    if indices is not None:
        graphs = [dataset.graphs[i] for i in np.asarray(indices, dtype=np.int64)]
    return max((int(g.degrees.max(initial=0)) for g in graphs), default=0)


def _must_exist(path: Path) -> Path:
    if not path.is_file():
        raise FileNotFoundError(f"missing dataset file: {path}")
    return path


def _read_int_columns(
    path: Path, expected_cols: int, allow_empty: bool = False
) -> np.ndarray:
    """Read a comma-separated integer table, tolerating spaces after commas."""
    try:
        frame = pd.read_csv(
            path, header=None, sep=",", skipinitialspace=True, dtype=np.int64
        )
    except pd.errors.EmptyDataError as err:
        if allow_empty:
            return np.zeros((0, expected_cols), dtype=np.int64)
        raise MalformedDatasetError(f"{path.name}: file is empty") from err
    except (ValueError, pd.errors.ParserError) as err:
        raise MalformedDatasetError(f"{path.name}: not an integer table ({err})") from err
    values = frame.to_numpy()
    if values.shape[1] != expected_cols:
        raise MalformedDatasetError(
            f"{path.name}: expected {expected_cols} column(s) per line, "
            f"got {values.shape[1]}"
        )
    return values


def parse_tudataset(root_directory: str | Path, name: str) -> Dataset:
    """Parse a TUDataset-layout directory into a Dataset.

    Mandatory files: `<name>_A.txt` (directed edge lines "i, j" with
    1-based global vertex ids, both directions of every undirected edge),
    `<name>_graph_indicator.txt`, `<name>_graph_labels.txt`.  Optional:
    `<name>_node_labels.txt` (one integer per vertex).  Attribute and edge
    label files are ignored.
    """
    root = Path(root_directory)
    a_path = _must_exist(root / f"{name}_A.txt")
    ind_path = _must_exist(root / f"{name}_graph_indicator.txt")
    lab_path = _must_exist(root / f"{name}_graph_labels.txt")
    node_path = root / f"{name}_node_labels.txt"

    indicator = _read_int_columns(ind_path, 1)[:, 0]
    raw_labels = _read_int_columns(lab_path, 1)[:, 0]
    num_vertices = len(indicator)
    num_graphs = len(raw_labels)
    if num_graphs == 0:
        raise MalformedDatasetError(f"{lab_path.name}: no graphs")
    if indicator.min() < 1 or indicator.max() > num_graphs:
        raise MalformedDatasetError(
            f"{ind_path.name}: graph id outside 1..{num_graphs}"
        )

    vertex_graph = indicator - 1
    counts = np.bincount(vertex_graph, minlength=num_graphs)
    if np.any(counts == 0):
        empty = int(np.nonzero(counts == 0)[0][0]) + 1
        raise MalformedDatasetError(f"graph {empty} has no vertices")
    # Local vertex ids follow file order within each graph.
    order = np.argsort(vertex_graph, kind="stable")
    starts = np.concatenate([[0], np.cumsum(counts)])
    local = np.empty(num_vertices, dtype=np.int64)
    local[order] = np.arange(num_vertices) - np.repeat(starts[:-1], counts)

    pairs = _read_int_columns(a_path, 2, allow_empty=True)
    if pairs.size:
        if pairs.min() < 1 or pairs.max() > num_vertices:
            raise MalformedDatasetError(
                f"{a_path.name}: vertex id outside 1..{num_vertices}"
            )
        src = pairs[:, 0] - 1
        dst = pairs[:, 1] - 1
        if np.any(src == dst):
            raise MalformedDatasetError(f"{a_path.name}: self-loop edge")
        cross = vertex_graph[src] != vertex_graph[dst]
        if np.any(cross):
            k = int(np.nonzero(cross)[0][0])
            raise MalformedDatasetError(
                f"{a_path.name}: edge ({pairs[k, 0]}, {pairs[k, 1]}) joins "
                "vertices of different graphs"
            )
        # Every directed line must appear exactly once with its reverse
        # present, so that the undirected edge set reproduces the file.
        keys = src * num_vertices + dst
        sorted_keys = np.sort(keys)
        if np.any(np.diff(sorted_keys) == 0):
            raise MalformedDatasetError(f"{a_path.name}: repeated directed edge")
        if not np.array_equal(sorted_keys, np.sort(dst * num_vertices + src)):
            raise MalformedDatasetError(
                f"{a_path.name}: edge list is not symmetric"
            )
        keep = src < dst
        edge_graph = vertex_graph[src[keep]]
        edge_local = np.stack([local[src[keep]], local[dst[keep]]], axis=1)
    else:
        edge_graph = np.zeros(0, dtype=np.int64)
        edge_local = np.zeros((0, 2), dtype=np.int64)

    if node_path.is_file():
        raw_node = _read_int_columns(node_path, 1)[:, 0]
        if len(raw_node) != num_vertices:
            raise MalformedDatasetError(
                f"{node_path.name}: {len(raw_node)} labels for "
                f"{num_vertices} vertices"
            )
        alphabet = np.unique(raw_node)
        columns = np.searchsorted(alphabet, raw_node)
        features = np.zeros((num_vertices, len(alphabet)))
        features[np.arange(num_vertices), columns] = 1.0
    else:
        features = np.ones((num_vertices, 1))

    edge_order = np.argsort(edge_graph, kind="stable")
    edge_counts = np.bincount(edge_graph, minlength=num_graphs)
    edge_starts = np.concatenate([[0], np.cumsum(edge_counts)])
    edges_sorted = edge_local[edge_order]

    graphs = []
    for g in range(num_graphs):
        vertex_rows = order[starts[g] : starts[g + 1]]
        graphs.append(
            Graph(
                num_vertices=int(counts[g]),
                edges=edges_sorted[edge_starts[g] : edge_starts[g + 1]],
                vertex_labels=features[vertex_rows],
            )
        )

    classes = np.unique(raw_labels)
    targets = np.searchsorted(classes, raw_labels)
    dataset = Dataset(
        name=name,
        graphs=tuple(graphs),
        targets=targets,
        num_classes=len(classes),
        input_dim=features.shape[1],
        degree=max(int(g.degrees.max(initial=0)) for g in graphs),
    )
    return dataset
