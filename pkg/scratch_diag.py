"""Diagnose AP bistability on two-blob data."""
import numpy as np
from autownet.cluster import APParams, similarity_matrix, ap_message_passing
from autownet.embeddings import mock_embed


def two_blobs(per_blob, dim, noise, seed, cross=0.0):
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, 2)))
    b0, b1 = q[:, 0], q[:, 1]  # orthogonal
    vectors = {}
    for bi, b in enumerate((b0, b1)):
        for j in range(per_blob):
            t = f"w{bi}s{j:03d}"
            v = b + noise * mock_embed(t, dim, seed + 7)
            vectors[t] = v / np.linalg.norm(v)
    return vectors


for noise in (0.13, 0.2, 0.3):
    print(f"--- noise={noise} ---")
    for seed in range(6):
        vectors = two_blobs(20, 16, noise, seed)
        S = similarity_matrix(vectors, APParams())
        trace = []
        ex, assign = ap_message_passing(S.s.copy(), 0.5, 500, 30, trace)
        n_iter = trace[-1]["iteration"]
        counts = [t["exemplars"] for t in trace]
        sizes = sorted([assign.count(e) for e in ex], reverse=True)
        print(f" seed={seed} pref={S.preference:+.3f} iters={n_iter} "
              f"excount_last10={counts[-10:]} nclusters={len(ex)} sizes={sizes[:8]}")
