"""Core-shell blobs: does a density gradient break AP oscillation?"""
import numpy as np
from autownet.cluster import APParams, similarity_matrix, ap_message_passing
from autownet.embeddings import mock_embed


def blobs(k, per_blob, dim, seed, core_noise=0.02, shell_noise=0.13):
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
    vectors, labels = {}, {}
    for bi in range(k):
        b = q[:, bi]
        for j in range(per_blob):
            # radial profile: first points near the core, later ones outward
            eps = core_noise + (shell_noise - core_noise) * j / max(1, per_blob - 1)
            t = f"w{bi}s{j:03d}"
            v = b + eps * mock_embed(t, dim, seed + 7)
            vectors[t] = v / np.linalg.norm(v)
            labels[t] = bi
    return vectors, labels


def geometry(vectors, labels):
    ids = sorted(vectors)
    wmin, cmax = 1.0, -1.0
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            c = float(vectors[a] @ vectors[b])
            if labels[a] == labels[b]:
                wmin = min(wmin, c)
            else:
                cmax = max(cmax, c)
    return wmin, cmax


for k in (1, 2, 3):
    print(f"--- k={k} core-shell ---")
    for seed in range(8):
        vectors, labels = blobs(k, 20 if k == 2 else 30, 16, seed)
        wmin, cmax = geometry(vectors, labels)
        S = similarity_matrix(vectors, APParams())
        trace = []
        ex, assign = ap_message_passing(S.s.copy(), 0.5, 500, 30, trace)
        sizes = sorted((assign.count(e) for e in ex), reverse=True)
        # purity at kernel level
        pure = all(len({labels[sorted(vectors)[i]] for i, o in enumerate(assign) if o == e}) == 1 for e in ex)
        print(f" seed={seed} wmin={wmin:.3f} cmax={cmax:+.3f} pref={S.preference:+.3f} "
              f"iters={trace[-1]['iteration']} ncl={len(ex)} sizes={sizes[:8]} pure={pure}")
