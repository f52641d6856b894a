"""Reservoir construction and fixed-point graph encoding.

Three reservoir families share one state equation.  Vertex states over a
graph with adjacency A and vertex labels U evolve as

    X(t+1) = tanh(V U + W X(t) A),    X(0) = 0,

iterated until successive states are closer than epsilon in Frobenius
norm or a maximum number of iterations is reached.  The graph embedding
is the sum of the final vertex states.

Families differ only in how (V, W) are built:

* GESN: dense V uniform on [-w, w]; W sparse with one random nonzero per
  row, rescaled so that its spectral radius times the dataset degree
  equals the requested effective radius.
* GRN: same V; W is a ring (cyclic permutation) scaled to the same bound.
* MGN: ring W and V = w * Pi where Pi holds the signs of the fractional
  decimal digits of pi (digit < 5 gives -1), making the whole model
  deterministic -- the seed is ignored.

Stability: with effective radius below 1 the map is contractive in
practice and the fixed point is unique, so the zero start is arbitrary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .data import Graph
from .numerics import SparseOneHop, apply_one_hop, spectral_radius_one_hop
from .pidigits import pi_digits

GESN = "gesn"
GRN = "grn"
MGN = "mgn"
FAMILIES = (GESN, GRN, MGN)

# Memory cap for batched encoding: at most about this many state-matrix
# elements per chunk of the union graph.
_CHUNK_STATE_ELEMENTS = 4_000_000


class EncodingError(RuntimeError):
    """Non-finite states during encoding; `graph_index` names the culprit."""

    def __init__(self, message: str, graph_index: int):
        super().__init__(message)
        self.graph_index = graph_index


@dataclass(frozen=True)
class ReservoirConfig:
    """Hyper-parameters fully determining one reservoir build.

    `effective_spectral_radius` is the product rho(W) * degree that the
    built recurrent matrix must satisfy; keeping it below 1 preserves the
    stability of the fixed-point encoding.  `seed` drives the random
    draws of GESN/GRN and is ignored by MGN.
    """

    family: str
    hidden_units: int
    input_dim: int
    input_scaling: float
    effective_spectral_radius: float
    degree: int
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.hidden_units < 1:
            raise ValueError("hidden_units must be >= 1")
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if not 0.0 < self.input_scaling < 1.0:
            raise ValueError(
                f"input_scaling must lie in (0, 1), got {self.input_scaling}"
            )
        if not 0.0 < self.effective_spectral_radius < 1.0:
            raise ValueError(
                "effective_spectral_radius must lie in (0, 1), "
                f"got {self.effective_spectral_radius}"
            )


@dataclass(frozen=True, eq=False)
class ReservoirWeights:
    """Built reservoir: dense input matrix V and sparse recurrent matrix W."""

    input_matrix: np.ndarray
    recurrent: SparseOneHop

    def __post_init__(self):
        v = np.asarray(self.input_matrix, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("input matrix must be 2-D")
        if v.shape[0] != self.recurrent.num_rows:
            raise ValueError(
                f"input matrix has {v.shape[0]} rows, recurrent matrix "
                f"{self.recurrent.num_rows}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("input matrix must be finite")
        object.__setattr__(self, "input_matrix", v)

    @property
    def hidden_units(self) -> int:
        return self.recurrent.num_rows

    @property
    def input_dim(self) -> int:
        return self.input_matrix.shape[1]


@dataclass(frozen=True)
class StopRule:
    """Convergence threshold and iteration cap of the state iteration."""

    epsilon: float = 1e-3
    max_iterations: int = 50

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    """Final vertex states of one graph and their sum-pooled embedding."""

    states: np.ndarray
    pooled: np.ndarray
    iterations_used: int
    converged: bool


def pi_sign_matrix(rows: int, cols: int) -> np.ndarray:
    """Sign matrix from the fractional decimal digits of pi.

    Digits (1, 4, 1, 5, 9, 2, ...) are consumed row-wise, one per entry;
    a digit smaller than 5 gives -1, otherwise +1.  The first ten signs
    are therefore -1,-1,-1,+1,+1,-1,+1,+1,-1,+1.
    """
    if rows < 1 or cols < 1:
        raise ValueError("sign matrix needs rows >= 1 and cols >= 1")
    digits = np.array(pi_digits(rows * cols))
    return np.where(digits < 5, -1.0, 1.0).reshape(rows, cols)


def _random_input_matrix(rng: np.random.Generator, config: ReservoirConfig) -> np.ndarray:
    w = config.input_scaling
    return rng.uniform(-w, w, size=(config.hidden_units, config.input_dim))


def build_gesn(config: ReservoirConfig) -> ReservoirWeights:
    """Random sparse reservoir: one uniformly placed nonzero per row.

    Raw row weights are uniform on [-1, 1]; target columns are resampled
    (bounded retries) until the pattern has a cycle, because an acyclic
    pattern is nilpotent and cannot be rescaled to a positive radius.
    The whole matrix is then scaled so rho(W) * degree matches the
    configured effective radius.
    """
    if config.family != GESN:
        raise ValueError(f"build_gesn got family {config.family!r}")
    rng = np.random.default_rng(config.seed)
    v = _random_input_matrix(rng, config)
    n = config.hidden_units
    raw_weights = rng.uniform(-1.0, 1.0, size=n)
    radius = 0.0
    cols = np.zeros(n, dtype=np.int64)
    for _ in range(100):
        cols = rng.integers(0, n, size=n)
        radius = spectral_radius_one_hop(SparseOneHop(n, cols, raw_weights))
        if radius > 0.0:
            break
    if radius == 0.0:
        # Only reachable when sampled weights on every cycle are exactly
        # zero; wire a deterministic 2-cycle (self-loop for n == 1).
        if n == 1:
            cols = np.zeros(1, dtype=np.int64)
            raw_weights = np.ones(1)
        else:
            cols[0], cols[1] = 1, 0
            raw_weights[0] = raw_weights[0] or 1.0
            raw_weights[1] = raw_weights[1] or 1.0
        radius = spectral_radius_one_hop(SparseOneHop(n, cols, raw_weights))
    scale = config.effective_spectral_radius / config.degree / radius
    recurrent = SparseOneHop(n, cols, raw_weights * scale)
    return ReservoirWeights(input_matrix=v, recurrent=recurrent)


def build_grn(config: ReservoirConfig) -> ReservoirWeights:
    """Ring reservoir: W is a cyclic permutation scaled by rho/degree."""
    if config.family != GRN:
        raise ValueError(f"build_grn got family {config.family!r}")
    rng = np.random.default_rng(config.seed)
    v = _random_input_matrix(rng, config)
    ring = SparseOneHop.ring(
        config.hidden_units,
        config.effective_spectral_radius / config.degree,
    )
    return ReservoirWeights(input_matrix=v, recurrent=ring)


def build_mgn(config: ReservoirConfig) -> ReservoirWeights:
    """Fully deterministic ring reservoir; the config seed is ignored.

    V = input_scaling * Pi with the pi-digit sign matrix, so the weights
    are a pure function of (hidden_units, input_dim, input_scaling,
    effective_spectral_radius, degree).
    """
    if config.family != MGN:
        raise ValueError(f"build_mgn got family {config.family!r}")
    v = config.input_scaling * pi_sign_matrix(config.hidden_units, config.input_dim)
    ring = SparseOneHop.ring(
        config.hidden_units,
        config.effective_spectral_radius / config.degree,
    )
    return ReservoirWeights(input_matrix=v, recurrent=ring)


_BUILDERS = {GESN: build_gesn, GRN: build_grn, MGN: build_mgn}


def build_reservoir(config: ReservoirConfig) -> ReservoirWeights:
    return _BUILDERS[config.family](config)


def _union_adjacency(graphs: list[Graph]) -> scipy.sparse.csr_array:
    if len(graphs) == 1:
        return graphs[0].adjacency.matrix
    return scipy.sparse.block_diag(
        [g.adjacency.matrix for g in graphs], format="csr"
    )


def _encode_segments(
    weights: ReservoirWeights,
    graphs: list[Graph],
    stop: StopRule,
    first_index: int,
    keep_states: bool,
) -> list[EmbeddingResult]:
    """Encode a batch of graphs as one block-diagonal union.

    The union state matrix evolves exactly as the per-graph iterations
    would (the adjacency is block diagonal and tanh acts elementwise), so
    each graph's convergence is tracked on its own column block and its
    result snapshot is taken the moment its own criterion fires.
    """
    sizes = np.array([g.num_vertices for g in graphs], dtype=np.int64)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    total = int(starts[-1])
    adjacency = _union_adjacency(graphs)
    labels = np.concatenate([g.vertex_labels for g in graphs], axis=0)
    drive = weights.input_matrix @ labels.T  # V U, loop-invariant

    states = np.zeros((weights.hidden_units, total))
    results: list[EmbeddingResult | None] = [None] * len(graphs)
    pending = np.ones(len(graphs), dtype=bool)

    def finalize(graph_pos: int, matrix: np.ndarray, iteration: int, ok: bool):
        lo, hi = starts[graph_pos], starts[graph_pos + 1]
        block = matrix[:, lo:hi].copy()
        if not np.all(np.isfinite(block)):
            raise EncodingError(
                f"non-finite states while encoding graph "
                f"{first_index + graph_pos}",
                graph_index=first_index + graph_pos,
            )
        results[graph_pos] = EmbeddingResult(
            states=block if keep_states else np.zeros((weights.hidden_units, 0)),
            pooled=block.sum(axis=1),
            iterations_used=iteration,
            converged=ok,
        )

    iteration = 0
    for iteration in range(1, stop.max_iterations + 1):
        new_states = np.tanh(drive + apply_one_hop(weights.recurrent, states @ adjacency))
        diff = new_states - states
        gaps = np.sqrt(np.add.reduceat(np.einsum("ij,ij->j", diff, diff), starts[:-1]))
        just_converged = pending & (gaps < stop.epsilon)
        for pos in np.nonzero(just_converged)[0]:
            finalize(int(pos), new_states, iteration, True)
        pending &= ~just_converged
        states = new_states
        if not pending.any():
            break
    for pos in np.nonzero(pending)[0]:
        finalize(int(pos), states, iteration, False)
    return results  # type: ignore[return-value]


def encode_graph(weights: ReservoirWeights, graph: Graph, stop: StopRule) -> EmbeddingResult:
    """Run the fixed-point iteration on one graph from the zero state."""
    if graph.input_dim != weights.input_dim:
        raise ValueError(
            f"graph labels have dimension {graph.input_dim}, "
            f"reservoir expects {weights.input_dim}"
        )
    return _encode_segments(weights, [graph], stop, 0, keep_states=True)[0]


def _chunks(graphs: list[Graph], hidden_units: int):
    """Split graphs into contiguous chunks bounded by state-matrix size."""
    budget = max(1, _CHUNK_STATE_ELEMENTS // max(1, hidden_units))
    chunk: list[Graph] = []
    first = 0
    used = 0
    for pos, g in enumerate(graphs):
        if chunk and used + g.num_vertices > budget:
            yield first, chunk
            chunk, first, used = [], pos, 0
        chunk.append(g)
        used += g.num_vertices
    if chunk:
        yield first, chunk


def encode_dataset(
    weights: ReservoirWeights, graphs: list[Graph], stop: StopRule
) -> list[EmbeddingResult]:
    """Encode every graph, preserving order.

    Equivalent to calling encode_graph per graph; internally graphs are
    batched into block-diagonal unions so the iteration stays vectorized,
    with batch size capped to bound peak memory.
    """
    results: list[EmbeddingResult] = []
    for first, chunk in _chunks(list(graphs), weights.hidden_units):
        for g in chunk:
            if g.input_dim != weights.input_dim:
                raise ValueError(
                    f"graph labels have dimension {g.input_dim}, "
                    f"reservoir expects {weights.input_dim}"
                )
        results.extend(
            _encode_segments(weights, chunk, stop, first, keep_states=True)
        )
    return results


def encode_pooled(
    weights: ReservoirWeights, graphs: list[Graph], stop: StopRule
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Memory-lean batch encoding keeping only pooled embeddings.

    Returns (pooled (len(graphs), hidden_units), iterations, converged).
    Used by the evaluation pipeline, where per-vertex states of large
    datasets would dominate memory for no benefit.
    """
    pooled = np.zeros((len(graphs), weights.hidden_units))
    iterations = np.zeros(len(graphs), dtype=np.int64)
    converged = np.zeros(len(graphs), dtype=bool)
    for first, chunk in _chunks(list(graphs), weights.hidden_units):
        for offset, result in enumerate(
            _encode_segments(weights, chunk, stop, first, keep_states=False)
        ):
            pooled[first + offset] = result.pooled
            iterations[first + offset] = result.iterations_used
            converged[first + offset] = result.converged
    return pooled, iterations, converged
