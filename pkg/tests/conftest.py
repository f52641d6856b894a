"""Shared fixtures: synthetic datasets, disk layouts, report comparison."""

from __future__ import annotations

import io
import json
import os
import threading
import zipfile
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np
import pytest

from ringgesn.data import Dataset, Graph, parse_tudataset
from ringgesn.fetch import FetchError, ExtractionError, fetch_dataset, resolve_name


def make_chain_graph(num_vertices: int, input_dim: int = 1) -> Graph:
    edges = np.array([[j, j + 1] for j in range(num_vertices - 1)], dtype=np.int64)
    edges = edges.reshape(-1, 2)
    return Graph(
        num_vertices=num_vertices,
        edges=edges,
        vertex_labels=np.ones((num_vertices, input_dim)),
    )


def make_random_graph(rng: np.random.Generator, num_vertices: int, input_dim: int = 1) -> Graph:
    """Connected-ish random graph: a chain plus random extra edges."""
    edges = {(j, j + 1) for j in range(num_vertices - 1)}
    extra = rng.integers(0, num_vertices, size=(2 * num_vertices, 2))
    for i, j in extra:
        if i != j:
            edges.add((min(int(i), int(j)), max(int(i), int(j))))
    labels = np.zeros((num_vertices, input_dim))
    labels[np.arange(num_vertices), rng.integers(0, input_dim, num_vertices)] = 1.0
    return Graph(
        num_vertices=num_vertices,
        edges=np.array(sorted(edges), dtype=np.int64),
        vertex_labels=labels,
    )


def make_size_dataset(
    num_graphs: int = 30,
    seed: int = 3,
    num_classes: int = 2,
    input_dim: int = 1,
) -> Dataset:
    """Dataset whose class is a threshold on vertex count (separable)."""
    rng = np.random.default_rng(seed)
    graphs, targets = [], []
    for i in range(num_graphs):
        cls = i % num_classes
        low = 3 + 6 * cls
        n = int(rng.integers(low, low + 3))
        graphs.append(make_chain_graph(n, input_dim))
        targets.append(cls)
    return Dataset(
        name="sizes",
        graphs=tuple(graphs),
        targets=np.array(targets, dtype=np.int64),
        num_classes=num_classes,
        input_dim=input_dim,
        degree=2,
    )


def write_tudataset(
    root: Path,
    name: str,
    graphs: list[tuple[int, list[tuple[int, int]]]],
    graph_labels: list[int],
    node_labels: list[int] | None = None,
) -> Path:
    """Write dataset files from per-graph (num_vertices, undirected edges).

    Vertex ids inside each graph are 0-based locally; the writer converts
    to the 1-based global layout and emits both edge directions.
    """
    directory = root / name
    directory.mkdir(parents=True, exist_ok=True)
    indicator, a_lines = [], []
    offset = 0
    for graph_id, (num_vertices, edges) in enumerate(graphs, start=1):
        indicator.extend([graph_id] * num_vertices)
        for i, j in edges:
            a_lines.append(f"{offset + i + 1}, {offset + j + 1}")
            a_lines.append(f"{offset + j + 1}, {offset + i + 1}")
        offset += num_vertices
    (directory / f"{name}_A.txt").write_text("\n".join(a_lines) + "\n" if a_lines else "")
    (directory / f"{name}_graph_indicator.txt").write_text(
        "\n".join(str(g) for g in indicator) + "\n"
    )
    (directory / f"{name}_graph_labels.txt").write_text(
        "\n".join(str(v) for v in graph_labels) + "\n"
    )
    if node_labels is not None:
        (directory / f"{name}_node_labels.txt").write_text(
            "\n".join(str(v) for v in node_labels) + "\n"
        )
    return directory


@pytest.fixture
def size_dataset() -> Dataset:
    return make_size_dataset()


@pytest.fixture
def tiny_tudataset_dir(tmp_path: Path) -> Path:
    """On-disk separable two-class dataset for CLI-level tests."""
    rng = np.random.default_rng(11)
    graphs, labels = [], []
    for i in range(24):
        big = i % 2
        n = int(rng.integers(9, 12)) if big else int(rng.integers(3, 6))
        graphs.append((n, [(j, j + 1) for j in range(n - 1)]))
        labels.append(big + 1)
    return write_tudataset(tmp_path, "TOY", graphs, labels)


def strip_timing(report: dict) -> dict:
    out = json.loads(json.dumps(report))
    for row in out.get("folds", []):
        row["seconds"] = 0.0
    return out


def folds_csv_without_seconds(path: Path) -> list[str]:
    lines = path.read_text(encoding="utf-8").strip().split("\n")
    return [",".join(line.split(",")[:-1]) for line in lines]


def make_zip_bytes(tmp_path: Path, name: str = "TOY", nested: bool = True) -> bytes:
    """Zip a tiny valid dataset, optionally under a top-level directory."""
    directory = write_tudataset(
        tmp_path / f"zipsrc-{name}",
        name,
        [(2, [(0, 1)]), (3, [(0, 1), (1, 2)])],
        graph_labels=[1, 2],
    )
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w") as bundle:
        for path in sorted(directory.iterdir()):
            arcname = f"{name}/{path.name}" if nested else path.name
            bundle.write(path, arcname)
    return buffer.getvalue()


class _ZipHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        self.server.request_log.append(self.path)
        body = self.server.routes.get(self.path)
        if body is None:
            self.send_response(404)
            self.end_headers()
            self.wfile.write(b"not found")
            return
        self.send_response(200)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def http_server():
    """Local archive server; tests register bodies in `routes`."""
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), _ZipHandler)
    httpd.routes = {}
    httpd.request_log = []
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    httpd.base_url = f"http://127.0.0.1:{httpd.server_address[1]}"
    yield httpd
    httpd.shutdown()
    thread.join()


# Real benchmark datasets: fetched on demand, skipped when unreachable.
_FETCH_FAILED: dict[str, str] = {}


def dataset_or_skip(name: str):
    canonical = resolve_name(name)
    if canonical in _FETCH_FAILED:
        pytest.skip(f"dataset {canonical} unavailable: {_FETCH_FAILED[canonical]}")
    cache = Path(os.environ.get("RINGGESN_DATA_DIR", Path(__file__).parent / ".data_cache"))
    try:
        directory = fetch_dataset(canonical, cache_directory=cache, timeout=15.0)
    except (FetchError, ExtractionError, OSError) as err:
        _FETCH_FAILED[canonical] = str(err)
        pytest.skip(f"dataset {canonical} unavailable: {err}")
    return parse_tudataset(directory, canonical)
