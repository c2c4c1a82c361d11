"""Embedding vectors, cosine math, and the on-disk embedding store.

Vectors are plain numpy arrays.  The store keeps them as float32 (the
serialization width); every similarity computation upcasts to float64.
"""

from __future__ import annotations

import hashlib
import json
import struct
from collections.abc import Iterable, Iterator, Mapping
from pathlib import Path

import numpy as np

EMB_MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sIQ")  # magic, u32 dim, u64 count
_ID_LEN = struct.Struct("<H")


class EmbeddingError(ValueError):
    """Malformed vector, file, or store violation."""


def _check_vector(values, name: str = "vector") -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise EmbeddingError(f"{name} must be a nonempty 1-d vector")
    if not np.all(np.isfinite(v)):
        raise EmbeddingError(f"{name} contains non-finite values")
    return v


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1].

    Raises EmbeddingError on dimension mismatch or a zero-norm input.
    """
    va = _check_vector(a, "a")
    vb = _check_vector(b, "b")
    if va.shape != vb.shape:
        raise EmbeddingError(f"dimension mismatch: {va.size} vs {vb.size}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise EmbeddingError("cosine similarity is undefined for zero-norm vectors")
    return float(min(1.0, max(-1.0, float(va @ vb) / (na * nb))))


def mean_embedding(vectors: Iterable) -> np.ndarray:
    """Componentwise arithmetic mean of a nonempty sequence of equal-dim vectors."""
    vs = [_check_vector(v) for v in vectors]
    if not vs:
        raise EmbeddingError("mean of an empty sequence")
    dim = vs[0].size
    for v in vs:
        if v.size != dim:
            raise EmbeddingError(f"dimension mismatch: {v.size} vs {dim}")
    return np.mean(np.stack(vs), axis=0)


def mock_embed(text: str, dim: int, seed: int = 0) -> np.ndarray:
    """Deterministic stand-in for a sentence-embedding model.

    Seeds a PCG64 generator with a stable hash of (text, seed) and draws a
    unit-norm vector, so equal inputs always produce the identical vector
    across runs and platforms.
    """
    if dim <= 0:
        raise EmbeddingError("dim must be positive")
    digest = hashlib.sha256(f"{seed}\x1f{text}".encode("utf-8")).digest()
    rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest[:8], "little")))
    v = rng.standard_normal(dim)
    norm = float(np.linalg.norm(v))
    while norm == 0.0:  # astronomically unlikely; keeps the contract total
        v = rng.standard_normal(dim)
        norm = float(np.linalg.norm(v))
    return v / norm


class EmbeddingStore(Mapping):
    """Fixed-dimension vectors keyed by id.

    Write once (imports), then treat as immutable; reads are safe to share.
    Behaves as a Mapping[str, np.ndarray] with float32 values.
    """

    def __init__(self, dim: int | None = None):
        if dim is not None and dim <= 0:
            raise EmbeddingError("dim must be positive")
        self.dim = dim
        self._entries: dict[str, np.ndarray] = {}

    def __getitem__(self, key: str) -> np.ndarray:
        return self._entries[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, entry_id: str, values) -> None:
        v = _check_vector(values, f"embedding {entry_id!r}")
        if self.dim is None:
            self.dim = v.size
        elif v.size != self.dim:
            raise EmbeddingError(
                f"embedding {entry_id!r} has dim {v.size}, store dim is {self.dim}"
            )
        if entry_id in self._entries:
            raise EmbeddingError(f"duplicate embedding id {entry_id!r}")
        if float(np.linalg.norm(v)) == 0.0:
            raise EmbeddingError(f"embedding {entry_id!r} has zero norm")
        self._entries[entry_id] = v.astype(np.float32)

    def import_file(self, path) -> int:
        """Import embeddings from an EMB1 binary file (or JSON-lines fallback).

        Returns the number of vectors added.  Duplicate ids, dimension
        mismatches, and malformed rows raise EmbeddingError.
        """
        path = Path(path)
        with open(path, "rb") as fh:
            head = fh.read(4)
        if head == EMB_MAGIC:
            count = 0
            for entry_id, vec in read_embedding_file(path):
                self.add(entry_id, vec)
                count += 1
            return count
        return self._import_jsonl(path)

    def _import_jsonl(self, path: Path) -> int:
        count = 0
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                    entry_id, vec = row["id"], row["vector"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise EmbeddingError(f"{path}:{lineno}: malformed row ({exc})")
                self.add(entry_id, vec)
                count += 1
        return count

    def export_file(self, path) -> int:
        """Write every entry to an EMB1 binary file; returns bytes written."""
        if self.dim is None:
            raise EmbeddingError("cannot export an empty store with no dim")
        return write_embedding_file(path, self.dim, self._entries.items())


def write_embedding_file(path, dim: int, items: Iterable[tuple[str, np.ndarray]]) -> int:
    """Write (id, vector) pairs in the EMB1 little-endian binary format.

    Layout: magic "EMB1", u32 dim, u64 count, then per record
    [u16 id byte-length, id UTF-8 bytes, dim * f32 values].
    """
    rows = []
    for entry_id, vec in items:
        v = np.asarray(vec, dtype=np.float32)
        if v.ndim != 1 or v.size != dim:
            raise EmbeddingError(
                f"embedding {entry_id!r} has dim {v.size}, file dim is {dim}"
            )
        id_bytes = entry_id.encode("utf-8")
        if len(id_bytes) > 0xFFFF:
            raise EmbeddingError(f"id too long: {entry_id!r}")
        rows.append((id_bytes, v))
    written = 0
    with open(path, "wb") as fh:
        written += fh.write(_HEADER.pack(EMB_MAGIC, dim, len(rows)))
        for id_bytes, v in rows:
            written += fh.write(_ID_LEN.pack(len(id_bytes)))
            written += fh.write(id_bytes)
            written += fh.write(v.astype("<f4").tobytes())
    return written


def read_embedding_file(path) -> list[tuple[str, np.ndarray]]:
    """Read an EMB1 binary file, returning (id, float32 vector) pairs in file order."""
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise EmbeddingError(f"{path}: truncated header at byte {len(data)}")
    magic, dim, count = _HEADER.unpack_from(data, 0)
    if magic != EMB_MAGIC:
        raise EmbeddingError(f"{path}: bad magic {magic!r}")
    if dim == 0:
        raise EmbeddingError(f"{path}: header dim is zero")
    offset = _HEADER.size
    out = []
    for i in range(count):
        if offset + _ID_LEN.size > len(data):
            raise EmbeddingError(f"{path}: truncated record {i} at byte {offset}")
        (id_len,) = _ID_LEN.unpack_from(data, offset)
        offset += _ID_LEN.size
        end = offset + id_len + 4 * dim
        if end > len(data):
            raise EmbeddingError(f"{path}: truncated record {i} at byte {offset}")
        entry_id = data[offset : offset + id_len].decode("utf-8")
        offset += id_len
        vec = np.frombuffer(data[offset : offset + 4 * dim], dtype="<f4").copy()
        offset += 4 * dim
        out.append((entry_id, vec))
    if offset != len(data):
        raise EmbeddingError(f"{path}: {len(data) - offset} trailing bytes at byte {offset}")
    return out
