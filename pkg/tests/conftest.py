"""Shared fixtures: planted-direction vector constructions for clustering tests."""

from __future__ import annotations

import numpy as np
import pytest

from autownet.embeddings import mock_embed


def base_directions(k: int, dim: int, seed: int, mutual: float = -0.2) -> np.ndarray:
    """k unit vectors with pairwise cosine pushed to about `mutual`.

    Starting from an orthonormal frame, rows are shifted against their mean
    until the pairwise cosine reaches the target, which keeps planted blobs
    comfortably outside each other's noise cones.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
    q = q[:, :k].T
    if k == 1:
        return q
    lo, hi = 0.0, float(k)
    u = q
    for _ in range(80):
        g = 0.5 * (lo + hi)
        u = q - (g / k) * q.sum(axis=0, keepdims=True)
        u = u / np.linalg.norm(u, axis=1, keepdims=True)
        if float(u[0] @ u[1]) > mutual:
            lo = g
        else:
            hi = g
    return u


def planted_blobs(
    k: int,
    dim: int = 16,
    seed: int = 0,
    per_blob: int = 30,
    duplicates: int = 0,
    noise_lo: float = 0.06,
    noise_hi: float = 0.13,
):
    """Planted word-sense geometry: k directions, per_blob sentences each.

    The first `duplicates` sentences of each blob share one canonical text
    (hence one identical embedding); the rest spread outward with a graded
    noise radius.  Returns (vectors, labels) keyed by sentence id.
    """
    base = base_directions(k, dim, seed)
    vectors: dict[str, np.ndarray] = {}
    labels: dict[str, int] = {}
    for bi in range(k):
        canon = f"word{bi} canonical usage pattern"
        for j in range(per_blob):
            sid = f"w{bi}s{j:03d}"
            if j < duplicates:
                text, eps = canon, 0.0
            else:
                text = f"word{bi} variant {j}"
                span = max(1, per_blob - duplicates - 1)
                eps = noise_lo + (noise_hi - noise_lo) * (j - duplicates) / span
            v = base[bi] + eps * mock_embed(text, dim, seed + 7)
            vectors[sid] = v / np.linalg.norm(v)
            labels[sid] = bi
    return vectors, labels


def blob_geometry(vectors, labels):
    """(min within-blob cosine, max cross-blob cosine) over all pairs."""
    ids = sorted(vectors)
    within_min, cross_max = 1.0, -1.0
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            c = float(vectors[a] @ vectors[b])
            if labels[a] == labels[b]:
                within_min = min(within_min, c)
            else:
                cross_max = max(cross_max, c)
    return within_min, cross_max


@pytest.fixture
def two_blob_40():
    """40 unit vectors in two orthogonal blobs of 20 (the damping fixture)."""
    dim, seed = 16, 5
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, 2)))
    vectors = {}
    for bi in range(2):
        for j in range(20):
            eps = 0.02 + (0.13 - 0.02) * j / 19
            sid = f"w{bi}s{j:03d}"
            v = q[:, bi] + eps * mock_embed(sid, dim, seed + 7)
            vectors[sid] = v / np.linalg.norm(v)
    return vectors
