"""Planted construction v2: duplicate cores + sub-orthogonal directions."""
import numpy as np
from autownet.cluster import APParams, similarity_matrix, affinity_propagation, purge, trim
from autownet.embeddings import mock_embed


def base_directions(k, dim, seed, mutual=-0.2):
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
    q = q[:, :k].T
    if k == 1:
        return q
    lo, hi = 0.0, float(k)
    for _ in range(80):
        g = 0.5 * (lo + hi)
        u = q - (g / k) * q.sum(axis=0, keepdims=True)
        u = u / np.linalg.norm(u, axis=1, keepdims=True)
        c = float(u[0] @ u[1])
        if c > mutual:
            lo = g
        else:
            hi = g
    return u


def planted(k, dim, seed, per_blob=30, dups=6, lo=0.06, hi=0.13):
    base = base_directions(k, dim, seed)
    vectors, labels, texts = {}, {}, {}
    for bi in range(k):
        canon = f"word{bi} canonical usage pattern"
        for j in range(per_blob):
            sid = f"w{bi}s{j:03d}"
            if j < dups:
                text = canon
                eps = 0.0
            else:
                text = f"word{bi} variant {j}"
                eps = lo + (hi - lo) * (j - dups) / max(1, per_blob - dups - 1)
            v = base[bi] + eps * mock_embed(text, dim, seed + 7)
            vectors[sid] = v / np.linalg.norm(v)
            labels[sid] = bi
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


def run_pipeline(vectors):
    ids = sorted(vectors)
    c1 = cluster_step(vectors, ids, 0.5, 5, 5)
    if not c1:
        return [], (0, 0, 0)
    pool2 = sorted(m for c in c1 for m in c.member_ids)
    c2 = cluster_step(vectors, pool2, 0.8, None, 20)
    pool3 = sorted(m for c in c2 for m in c.member_ids)
    c3 = cluster_step(vectors, pool3, 0.5, None, 10)
    return [sorted(c.member_ids) for c in c3], (len(c1), len(c2), len(c3))


total = {"ok": 0, "fail": 0}
for k in (1, 2, 3):
    print(f"=== k={k} ===")
    for seed in range(10):
        vectors, labels = planted(k, 16, seed)
        wmin, cmax = geometry(vectors, labels)
        geom_ok = wmin >= 0.95 and (k == 1 or cmax <= 0.1)
        senses, counts = run_pipeline(vectors)
        pure = all(len({labels[x] for x in s}) == 1 for s in senses)
        mono = counts[0] >= counts[1] >= counts[2]
        ok = geom_ok and len(senses) == k and pure and mono
        total["ok" if ok else "fail"] += 1
        print(f" seed={seed} wmin={wmin:.3f} cmax={cmax:+.3f} geom={geom_ok} counts={counts} "
              f"senses={len(senses)} pure={pure} {'OK' if ok else 'FAIL'}")
print(total)
