"""Clustering kernels: affinity propagation, purge/trim, agglomerative merging.

All kernels are pure and deterministic: equal inputs give identical outputs,
with ties broken by id order.  Items are addressed by string id; vectors live
in any Mapping[str, array] (an EmbeddingStore works).
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .embeddings import EmbeddingError, mean_embedding


class ClusteringError(ValueError):
    """Malformed clustering input."""


@dataclass
class APParams:
    """Affinity propagation controls.

    damping mixes old and new messages (new = damping*old + (1-damping)*computed).
    preference is the shared diagonal value; None means the median of the
    off-diagonal similarities.
    """

    damping: float = 0.5
    max_iterations: int = 500
    convergence_window: int = 30
    preference: float | None = None

    def __post_init__(self):
        if not (0.5 <= self.damping < 1.0):
            raise ClusteringError(f"damping must be in [0.5, 1), got {self.damping}")
        if not (self.max_iterations >= self.convergence_window >= 1):
            raise ClusteringError(
                "require max_iterations >= convergence_window >= 1, got "
                f"{self.max_iterations} / {self.convergence_window}"
            )


@dataclass
class SimilarityMatrix:
    """Dense similarity matrix over an ordered id list.

    s[i, k] is the similarity of item i to candidate exemplar k; the diagonal
    carries the shared preference.
    """

    ids: list[str]
    s: np.ndarray
    preference: float

    @property
    def n(self) -> int:
        return len(self.ids)


@dataclass
class Cluster:
    cluster_id: str
    member_ids: list[str]
    exemplar_id: str | None
    centroid: np.ndarray

    def __post_init__(self):
        if not self.member_ids:
            raise ClusteringError("cluster must have at least one member")
        if self.exemplar_id is not None and self.exemplar_id not in self.member_ids:
            raise ClusteringError("exemplar must be a member of its cluster")

    @property
    def size(self) -> int:
        return len(self.member_ids)


def _sorted_items(items: Mapping[str, np.ndarray]) -> tuple[list[str], np.ndarray]:
    if not items:
        raise ClusteringError("no items to cluster")
    ids = sorted(items)
    mat = np.stack([np.asarray(items[i], dtype=np.float64) for i in ids])
    norms = np.linalg.norm(mat, axis=1)
    if np.any(norms == 0.0):
        bad = ids[int(np.flatnonzero(norms == 0.0)[0])]
        raise EmbeddingError(f"zero-norm vector for item {bad!r}")
    return ids, mat


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    return mat / np.linalg.norm(mat, axis=1, keepdims=True)


def _pairwise_cosine(mat: np.ndarray) -> np.ndarray:
    u = _unit_rows(mat)
    return np.clip(u @ u.T, -1.0, 1.0)


def similarity_matrix(items: Mapping[str, np.ndarray], params: APParams) -> SimilarityMatrix:
    """Pairwise cosine similarities with the preference on the diagonal.

    The default preference is the median of all off-diagonal entries.
    """
    ids, mat = _sorted_items(items)
    s = _pairwise_cosine(mat)
    n = len(ids)
    if params.preference is not None:
        pref = float(params.preference)
    elif n == 1:
        pref = 0.0
    else:
        off = s[~np.eye(n, dtype=bool)]
        pref = float(np.median(off))
    np.fill_diagonal(s, pref)
    return SimilarityMatrix(ids=ids, s=s, preference=pref)


# Oscillation escape: when the exemplar set has not stabilized after this many
# iterations, raise the damping one step (never past the cap, never below the
# configured value).  Tight, symmetric similarity structures drive the plain
# updates into period-2 limit cycles; escalated damping settles them while
# leaving already-convergent runs untouched.
ADAPT_INTERVAL = 60
ADAPT_STEP = 0.1
ADAPT_CAP = 0.95


def ap_message_passing(
    s: np.ndarray,
    damping: float,
    max_iterations: int,
    convergence_window: int,
    trace: list | None = None,
) -> tuple[list[int], list[int]]:
    """Run the responsibility/availability updates on a prepared matrix.

    Returns (exemplar indices, per-item assignment to an exemplar index).
    Messages start at zero; iteration stops once a nonempty exemplar set has
    been identical for convergence_window consecutive iterations, or at
    max_iterations.  With no emerged exemplar the fallback is a single
    cluster whose exemplar has the maximal diagonal net message.

    Runs that have not settled after each ADAPT_INTERVAL iterations get the
    damping raised one ADAPT_STEP (capped at ADAPT_CAP, never lowered), which
    deterministically breaks the period-2 message oscillations that plain
    damping 0.5 falls into on tightly clustered data.

    n = 2 is handled as the exact two-point solution: message passing
    reaches the all-zero fixed point for every symmetric 2x2 input with a
    uniform diagonal, so the pair is merged exactly when its similarity
    strictly exceeds the preference (the configuration with the larger net
    similarity); otherwise both items stand alone.
    """
    n = s.shape[0]
    if n == 1:
        return [0], [0]
    if n == 2:
        if s[0, 1] > s[0, 0]:
            return [0], [0, 0]
        return [0, 1], [0, 1]

    idx = np.arange(n)
    r = np.zeros((n, n))
    a = np.zeros((n, n))
    prev: frozenset[int] | None = None
    streak = 0
    lam = damping
    for iteration in range(1, max_iterations + 1):
        if iteration > 1 and (iteration - 1) % ADAPT_INTERVAL == 0:
            lam = max(lam, min(lam + ADAPT_STEP, ADAPT_CAP), damping)
        # r(i,k) <- s(i,k) - max_{k' != k} (a(i,k') + s(i,k'))
        a_plus_s = a + s
        best = np.argmax(a_plus_s, axis=1)
        best_val = a_plus_s[idx, best]
        a_plus_s[idx, best] = -np.inf
        second_val = np.max(a_plus_s, axis=1)
        r_new = s - best_val[:, None]
        r_new[idx, best] = s[idx, best] - second_val
        r = lam * r + (1.0 - lam) * r_new

        # a(i,k) <- min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
        # a(k,k) <- sum_{i' != k} max(0, r(i',k))
        r_pos = np.maximum(r, 0.0)
        np.fill_diagonal(r_pos, np.diag(r))
        col_sum = r_pos.sum(axis=0)
        a_new = col_sum[None, :] - r_pos
        diag_a = np.diag(a_new).copy()  # col_sum[k] - r(k,k) = sum_{i' != k} max(0, r(i',k))
        a_new = np.minimum(a_new, 0.0)
        np.fill_diagonal(a_new, diag_a)
        a = lam * a + (1.0 - lam) * a_new

        current = frozenset(np.flatnonzero(np.diag(r) + np.diag(a) > 0.0).tolist())
        if trace is not None:
            trace.append({"iteration": iteration, "exemplars": len(current)})
        streak = streak + 1 if (current and current == prev) else (1 if current else 0)
        prev = current
        if streak >= convergence_window:
            break
    exemplars = sorted(prev) if prev else []

    if not exemplars:
        net = np.diag(r) + np.diag(a)
        return [int(np.argmax(net))], [int(np.argmax(net))] * n

    assignment = []
    ex = np.array(exemplars)
    for i in range(n):
        if i in prev:
            assignment.append(i)
        else:
            sims = s[i, ex]
            assignment.append(int(ex[int(np.argmax(sims))]))
    return exemplars, assignment


def affinity_propagation(
    matrix: SimilarityMatrix,
    params: APParams,
    vectors: Mapping[str, np.ndarray],
    trace: list | None = None,
) -> list[Cluster]:
    """Cluster the items of a similarity matrix by affinity propagation.

    Output clusters partition the input ids, ordered by exemplar index;
    every centroid is the mean of its current member vectors.
    """
    exemplars, assignment = ap_message_passing(
        matrix.s.copy(),
        params.damping,
        params.max_iterations,
        params.convergence_window,
        trace,
    )
    clusters = []
    for rank, ex in enumerate(exemplars):
        member_idx = [i for i, owner in enumerate(assignment) if owner == ex]
        member_ids = sorted(matrix.ids[i] for i in member_idx)
        clusters.append(
            Cluster(
                cluster_id=f"c{rank}",
                member_ids=member_ids,
                exemplar_id=matrix.ids[ex],
                centroid=mean_embedding([vectors[m] for m in member_ids]),
            )
        )
    return clusters


def purge(clusters: Sequence[Cluster], min_size: int = 5) -> list[Cluster]:
    """Drop weak clusters: those with fewer than min_size members."""
    return [c for c in clusters if c.size >= min_size]


def trim(cluster: Cluster, n: int, vectors: Mapping[str, np.ndarray]) -> Cluster:
    """Keep only the n members nearest (by cosine) to the cluster centroid.

    Ties break toward the smaller member id.  The centroid is recomputed
    over the survivors; the exemplar is cleared if it was trimmed away.
    """
    if n < 1:
        raise ClusteringError(f"trim size must be >= 1, got {n}")
    missing = [m for m in cluster.member_ids if m not in vectors]
    if missing:
        raise ClusteringError(f"missing vectors for members: {missing}")
    centroid = mean_embedding([vectors[m] for m in cluster.member_ids])
    cnorm = float(np.linalg.norm(centroid))
    ranked = []
    for m in cluster.member_ids:
        v = np.asarray(vectors[m], dtype=np.float64)
        if cnorm == 0.0:
            sim = 0.0  # degenerate centroid: every member ties, id order decides
        else:
            sim = float(np.clip((v @ centroid) / (np.linalg.norm(v) * cnorm), -1.0, 1.0))
        ranked.append((-sim, m))
    ranked.sort()
    keep = sorted(m for _, m in ranked[:n])
    exemplar = cluster.exemplar_id if cluster.exemplar_id in keep else None
    return Cluster(
        cluster_id=cluster.cluster_id,
        member_ids=keep,
        exemplar_id=exemplar,
        centroid=mean_embedding([vectors[m] for m in keep]),
    )


@dataclass
class MergeEvent:
    step: int
    left: str
    right: str
    distance: float

    def to_json(self) -> str:
        return json.dumps(
            {"step": self.step, "left": self.left, "right": self.right,
             "distance": self.distance},
            sort_keys=True,
        )


def agglomerative_cosine(
    items: Mapping[str, np.ndarray],
    distance_threshold: float,
    merge_log: list[MergeEvent] | None = None,
) -> list[Cluster]:
    """Average-linkage agglomerative clustering over cosine distance.

    Starts from singletons and repeatedly merges the pair of clusters with
    the smallest mean cross-pair cosine distance while that minimum is at
    most distance_threshold.  Ties break toward the lexicographically
    smallest (smallest-member-id, smallest-member-id) pair.  Singletons are
    legal final clusters.
    """
    if not (0.0 <= distance_threshold <= 2.0):
        raise ClusteringError(
            f"distance_threshold must be in [0, 2], got {distance_threshold}"
        )
    ids, mat = _sorted_items(items)
    n = len(ids)
    dist = 1.0 - _pairwise_cosine(mat)
    np.fill_diagonal(dist, np.inf)

    members: dict[int, list[str]] = {i: [ids[i]] for i in range(n)}
    sizes = {i: 1 for i in range(n)}
    active = sorted(members)
    step = 0
    while len(active) > 1:
        sub = dist[np.ix_(active, active)]
        dmin = float(sub.min())
        if dmin > distance_threshold:
            break
        pairs = []
        for ai, aj in zip(*np.nonzero(sub == dmin)):
            if ai < aj:
                ci, cj = active[ai], active[aj]
                key = tuple(sorted((members[ci][0], members[cj][0])))
                pairs.append((key, ci, cj))
        _, ci, cj = min(pairs)
        step += 1
        if merge_log is not None:
            merge_log.append(
                MergeEvent(step=step, left=members[ci][0], right=members[cj][0],
                           distance=dmin)
            )
        # Lance-Williams update for average linkage
        wi, wj = sizes[ci], sizes[cj]
        merged_row = (wi * dist[ci, :] + wj * dist[cj, :]) / (wi + wj)
        dist[ci, :] = merged_row
        dist[:, ci] = merged_row
        dist[ci, ci] = np.inf
        dist[cj, :] = np.inf
        dist[:, cj] = np.inf
        members[ci] = sorted(members[ci] + members[cj])
        sizes[ci] = wi + wj
        del members[cj], sizes[cj]
        active = sorted(members)

    clusters = []
    ordered = sorted(active, key=lambda c: members[c][0])
    vec_by_id = {i: mat[k] for k, i in enumerate(ids)}
    for rank, c in enumerate(ordered):
        ms = members[c]
        clusters.append(
            Cluster(
                cluster_id=f"g{rank}",
                member_ids=ms,
                exemplar_id=None,
                centroid=mean_embedding([vec_by_id[m] for m in ms]),
            )
        )
    return clusters
