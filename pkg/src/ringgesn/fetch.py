"""Download and cache benchmark datasets.

Datasets are fetched as zip archives from the public TUDataset collection
and extracted under a local cache directory, one subdirectory per dataset.
A dataset already present in the cache is never re-downloaded, and failed
downloads or corrupt archives leave the cache untouched.
"""

from __future__ import annotations

import shutil
import tempfile
import zipfile
from pathlib import Path

import requests

DEFAULT_BASE_URL = "https://www.chrsmrrs.com/graphkerneldatasets"

# Short names accepted on the command line for the canonical archive names.
_ALIASES = {
    "mutag": "MUTAG",
    "imdb-b": "IMDB-BINARY",
    "imdb-binary": "IMDB-BINARY",
    "imdb-m": "IMDB-MULTI",
    "imdb-multi": "IMDB-MULTI",
    "reddit": "REDDIT-BINARY",
    "reddit-b": "REDDIT-BINARY",
    "reddit-binary": "REDDIT-BINARY",
    "nci1": "NCI1",
    "collab": "COLLAB",
}

_MANDATORY_SUFFIXES = ("_A.txt", "_graph_indicator.txt", "_graph_labels.txt")


class FetchError(RuntimeError):
    """Download failure; `status` holds the HTTP status code if one exists."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class ExtractionError(RuntimeError):
    """The downloaded archive could not be unpacked into a dataset."""


def resolve_name(name: str) -> str:
    """Map a short dataset alias to its archive name; pass unknowns through."""
    return _ALIASES.get(name.lower(), name)


def _is_complete(directory: Path, name: str) -> bool:
    return all((directory / f"{name}{s}").is_file() for s in _MANDATORY_SUFFIXES)


def fetch_dataset(
    name: str,
    base_url: str = DEFAULT_BASE_URL,
    cache_directory: str | Path = "data",
    timeout: float = 60.0,
) -> Path:
    """Return the directory holding `name`'s files, downloading if needed.

    The dataset lands in `<cache_directory>/<archive name>/`.  Repeat calls
    with a warm cache return immediately without touching the network.
    """
    canonical = resolve_name(name)
    cache_root = Path(cache_directory)
    target = cache_root / canonical
    if _is_complete(target, canonical):
        return target

    cache_root.mkdir(parents=True, exist_ok=True)
    url = f"{base_url.rstrip('/')}/{canonical}.zip"
    staging = Path(tempfile.mkdtemp(prefix=f".{canonical}-", dir=cache_root))
    try:
        archive = staging / f"{canonical}.zip"
        try:
            with requests.get(url, stream=True, timeout=timeout) as response:
                if response.status_code != 200:
                    raise FetchError(
                        f"fetch error: HTTP {response.status_code}",
                        status=response.status_code,
                    )
                with open(archive, "wb") as sink:
                    for chunk in response.iter_content(chunk_size=1 << 16):
                        sink.write(chunk)
        except requests.RequestException as err:
            raise FetchError(f"fetch error: {err}") from err

        extracted = staging / "unpacked"
        try:
            with zipfile.ZipFile(archive) as bundle:
                bundle.extractall(extracted)
        except zipfile.BadZipFile as err:
            raise ExtractionError(f"corrupt archive from {url}: {err}") from err

        inner = _locate_root(extracted, canonical)
        if inner is None:
            raise ExtractionError(
                f"archive from {url} does not contain {canonical}_A.txt"
            )
        if not _is_complete(target, canonical):
            if target.exists():
                shutil.rmtree(target)
            inner.rename(target)
        return target
    finally:
        shutil.rmtree(staging, ignore_errors=True)


def _locate_root(extracted: Path, name: str) -> Path | None:
    """Find the directory inside an unpacked archive holding the data files."""
    direct = extracted / name
    if _is_complete(direct, name):
        return direct
    if _is_complete(extracted, name):
        return extracted
    for hit in extracted.rglob(f"{name}_A.txt"):
        if _is_complete(hit.parent, name):
            return hit.parent
    return None
