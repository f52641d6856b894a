"""Sparse linear algebra kernels for graph reservoirs.

Two sparse structures cover everything the models need: a symmetric CSR
adjacency for neighborhood sums, and a "one nonzero per row" recurrent
matrix whose spectral radius can be computed exactly from its cycle
structure instead of with an iterative eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse


class RidgeSolverError(RuntimeError):
    """Raised when the regularized normal equations cannot be factorized."""


class AdjacencyCSR:
    """Adjacency matrix of an undirected graph without self-loops.

    Stored as a scipy CSR matrix of float64 ones so that neighborhood sums
    are a single sparse matmul.  Symmetry and the absence of diagonal
    entries are checked at construction.
    """

    def __init__(self, num_vertices: int, matrix: scipy.sparse.csr_array):
        if num_vertices < 0:
            raise ValueError(f"num_vertices must be >= 0, got {num_vertices}")
        if matrix.shape != (num_vertices, num_vertices):
            raise ValueError(
                f"adjacency shape {matrix.shape} does not match "
                f"num_vertices={num_vertices}"
            )
        if matrix.nnz:
            rows, cols = matrix.nonzero()
            if np.any(rows == cols):
                raise ValueError("adjacency must not contain self-loops")
            if (matrix != matrix.T).nnz:
                raise ValueError("adjacency must be symmetric")
        self.num_vertices = int(num_vertices)
        self.matrix = matrix

    @classmethod
    def from_edges(cls, num_vertices: int, edges: np.ndarray) -> "AdjacencyCSR":
        """Build from an (m, 2) array of undirected edges.

        Each row (i, j) stands for the unordered pair {i, j}; both (i, j)
        and (j, i) entries are created.  Duplicate pairs and self-loops are
        rejected.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= num_vertices:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loop in edge list")
            canon = np.sort(edges, axis=1)
            if len(np.unique(canon, axis=0)) != len(canon):
                raise ValueError("duplicate edge in edge list")
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(rows.shape[0], dtype=np.float64)
        matrix = scipy.sparse.csr_array(
            (data, (rows, cols)), shape=(num_vertices, num_vertices)
        )
        return cls(num_vertices, matrix)

    @property
    def num_edges(self) -> int:
        return self.matrix.nnz // 2

    @property
    def degrees(self) -> np.ndarray:
        """Vertex degrees as an int64 array of length num_vertices."""
        return np.diff(self.matrix.indptr).astype(np.int64)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class SparseOneHop:
    """Square matrix with at most one nonzero per row.

    Row i holds `weights[i]` at column `cols[i]`; `cols[i] == -1` marks an
    all-zero row.  This is the shape of every recurrent matrix used here
    (the ring reservoir is the special case of a cyclic permutation), and
    it admits an exact spectral radius via cycle products.
    """

    num_rows: int
    cols: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.cols, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if cols.shape != (self.num_rows,) or weights.shape != (self.num_rows,):
            raise ValueError(
                f"cols and weights must both have shape ({self.num_rows},)"
            )
        if cols.size and (cols.min() < -1 or cols.max() >= self.num_rows):
            raise ValueError("column index out of range")
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite")
        weights = np.where(cols < 0, 0.0, weights)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def ring(cls, num_rows: int, weight: float) -> "SparseOneHop":
        """Cyclic shift scaled by `weight`: row i reads from row (i-1) mod n.

        Applying it to a state matrix rotates the rows downward by one,
        so repeated application cycles states around a ring of units.
        """
        if num_rows < 1:
            raise ValueError(f"ring needs num_rows >= 1, got {num_rows}")
        cols = (np.arange(num_rows, dtype=np.int64) - 1) % num_rows
        weights = np.full(num_rows, float(weight))
        return cls(num_rows, cols, weights)

    def scaled(self, factor: float) -> "SparseOneHop":
        return SparseOneHop(self.num_rows, self.cols, self.weights * factor)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.num_rows, self.num_rows))
        filled = self.cols >= 0
        dense[np.nonzero(filled)[0], self.cols[filled]] = self.weights[filled]
        return dense


def propagate(states: np.ndarray, adjacency: AdjacencyCSR) -> np.ndarray:
    """Sum each vertex's neighbor columns of a (units, vertices) state matrix.

    Column v of the result is the sum of states over the neighbors of v,
    which for a symmetric adjacency is exactly `states @ A`.
    """
    states = np.asarray(states, dtype=np.float64)
    if states.ndim != 2 or states.shape[1] != adjacency.num_vertices:
        raise ValueError(
            f"states shape {states.shape} incompatible with adjacency over "
            f"{adjacency.num_vertices} vertices"
        )
    return states @ adjacency.matrix


def apply_one_hop(weights: SparseOneHop, states: np.ndarray) -> np.ndarray:
    """Multiply a SparseOneHop matrix against (units, ...) states.

    out[i] = weights[i] * states[cols[i]]; empty rows give zeros.  For the
    ring matrix this rotates unit states downward by one row.
    """
    states = np.asarray(states, dtype=np.float64)
    if states.shape[0] != weights.num_rows:
        raise ValueError(
            f"states have {states.shape[0]} rows, expected {weights.num_rows}"
        )
    out = np.zeros_like(states)
    filled = weights.cols >= 0
    if np.any(filled):
        scale = weights.weights[filled]
        out[filled] = scale.reshape((-1,) + (1,) * (states.ndim - 1)) * states[
            weights.cols[filled]
        ]
    return out


def spectral_radius_one_hop(weights: SparseOneHop) -> float:
    """Exact spectral radius of a one-nonzero-per-row matrix.

    Rows with at most one nonzero form a functional graph, so every
    eigenvalue is either zero or attached to a directed cycle, with modulus
    equal to the geometric mean of the absolute weights along that cycle.
    The maximum over cycles is found by walking each row's successor chain
    once; a matrix without cycles is nilpotent and the radius is 0.
    """
    succ = np.where(weights.weights != 0.0, weights.cols, -1)
    n = weights.num_rows
    color = np.zeros(n, dtype=np.int8)  # 0 unvisited, 1 on path, 2 done
    position = np.zeros(n, dtype=np.int64)
    best = 0.0
    for start in range(n):
        if color[start] != 0:
            continue
        path = []
        node = start
        while node != -1 and color[node] == 0:
            color[node] = 1
            position[node] = len(path)
            path.append(node)
            node = succ[node]
        if node != -1 and color[node] == 1:
            cycle = path[position[node] :]
            logs = np.log(np.abs(weights.weights[cycle]))
            best = max(best, float(np.exp(logs.mean())))
        for visited in path:
            color[visited] = 2
    return best


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of (a - b); shapes must match exactly."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def ridge_solve_sweep(
    design: np.ndarray, targets: np.ndarray, betas
) -> np.ndarray:
    """Solve the Tikhonov-regularized readout for a whole grid of betas.

    Given a design matrix Z with one column per sample and targets Y with
    matching columns, returns the stack of

        W(beta) = Y Z^T (Z Z^T + beta I)^(-1)

    as an array of shape (len(betas), targets_rows, design_rows).  The
    Gram matrix Z Z^T is factorized once by a symmetric eigendecomposition
    (stable for the positive semi-definite case), after which every beta
    costs only a diagonal rescaling.  Rank-deficient designs are fine for
    any beta > 0; beta = 0 on a singular system raises RidgeSolverError.
    """
    design = np.asarray(design, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if design.ndim != 2 or targets.ndim != 2:
        raise ValueError("design and targets must be 2-D")
    if design.shape[0] < 1 or design.shape[1] < 1:
        raise ValueError("design needs at least one row and one sample")
    if design.shape[1] != targets.shape[1]:
        raise ValueError(
            f"design has {design.shape[1]} samples, targets {targets.shape[1]}"
        )
    betas = [float(b) for b in betas]
    for beta in betas:
        if not np.isfinite(beta) or beta < 0:
            raise ValueError(f"beta must be finite and >= 0, got {beta}")
    gram = design @ design.T
    eigvals, eigvecs = scipy.linalg.eigh(gram)
    # PSD by construction; tiny negative values are rounding noise.
    eigvals = np.clip(eigvals, 0.0, None)
    cutoff = eigvals[-1] * gram.shape[0] * np.finfo(np.float64).eps
    rotated = eigvecs.T @ (design @ targets.T)
    out = np.empty((len(betas), targets.shape[0], design.shape[0]))
    for b, beta in enumerate(betas):
        if beta == 0.0 and eigvals[0] <= cutoff:
            raise RidgeSolverError(
                "Gram matrix is singular and beta = 0; use beta > 0"
            )
        out[b] = (eigvecs @ (rotated / (eigvals + beta)[:, None])).T
    return out


def ridge_solve(design: np.ndarray, targets: np.ndarray, beta: float) -> np.ndarray:
    """Single-beta form of ridge_solve_sweep; returns W of shape
    (targets_rows, design_rows)."""
    return np.ascontiguousarray(ridge_solve_sweep(design, targets, (beta,))[0])
