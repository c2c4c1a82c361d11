"""Pipeline with sentence re-expansion at steps 2 and 3."""
import numpy as np
from autownet.cluster import APParams, similarity_matrix, affinity_propagation, purge, trim
from autownet.embeddings import mock_embed


def blobs(k, per_blob, dim, seed, profiles=((0.02, 0.13),)):
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
    vectors, labels = {}, {}
    for bi in range(k):
        b = q[:, bi]
        lo, hi = profiles[bi % len(profiles)]
        for j in range(per_blob):
            eps = lo + (hi - lo) * j / max(1, per_blob - 1)
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


def cluster_step(vectors, subset_ids, damping, purge_min, trim_n):
    items = {i: vectors[i] for i in subset_ids}
    p = APParams(damping=damping)
    S = similarity_matrix(items, p)
    clusters = affinity_propagation(S, p, items)
    if purge_min:
        clusters = purge(clusters, purge_min)
    return [trim(c, trim_n, items) for c in clusters]


def run_pipeline(vectors, verbose=False):
    ids = sorted(vectors)
    c1 = cluster_step(vectors, ids, 0.5, 5, 5)
    if verbose:
        print(f"  step1 -> {len(c1)} clusters {[c.size for c in c1]}")
    if not c1:
        return []
    pool2 = sorted(m for c in c1 for m in c.member_ids)
    c2 = cluster_step(vectors, pool2, 0.8, None, 20)
    if verbose:
        print(f"  step2 -> {len(c2)} clusters {[c.size for c in c2]}")
    pool3 = sorted(m for c in c2 for m in c.member_ids)
    c3 = cluster_step(vectors, pool3, 0.5, None, 10)
    if verbose:
        print(f"  step3 -> {len(c3)} clusters {[c.size for c in c3]}")
    return [(sorted(c.member_ids)) for c in c3]


def purity(senses, labels):
    return all(len({labels[x] for x in s}) == 1 for s in senses)


total = {"ok": 0, "fail": 0}
for k in (1, 2, 3):
    print(f"=== k={k} ===")
    for seed in range(10):
        vectors, labels = blobs(k, 30, 16, seed)
        wmin, cmax = geometry(vectors, labels)
        senses = run_pipeline(vectors, verbose=(seed < 2))
        ok = len(senses) == k and purity(senses, labels)
        total["ok" if ok else "fail"] += 1
        print(f" seed={seed} wmin={wmin:.3f} cmax={cmax:+.3f} senses={len(senses)} "
              f"pure={purity(senses, labels)} {'OK' if ok else 'FAIL'}")
print(total)
