"""Scratch: explore 3-step pipeline behavior on planted blobs."""
import numpy as np
from autownet.cluster import APParams, similarity_matrix, affinity_propagation, purge, trim
from autownet.embeddings import mock_embed, mean_embedding


def base_directions(k, dim, seed):
    """k unit vectors with pairwise cosine about -1/3 (k<=4)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
    q = q.T  # k orthonormal rows
    if k == 1:
        return q
    # mix orthonormal frame into an equiangular set with negative mutual cosine
    target = -1.0 / 3.0
    # rows of M: m_i = a*e_i + b*sum(e_j): <m_i, m_j> = 2ab + (k-2)b^2 + ... solve numerically
    # simpler: use simplex coordinates in k-dim subspace
    simplex = np.eye(k) - np.full((k, k), 1.0 / k)
    simplex = simplex / np.linalg.norm(simplex, axis=1, keepdims=True)
    return simplex @ q


def planted_vectors(k, per_blob, dim, noise, seed):
    base = base_directions(k, dim, seed)
    vectors, labels = {}, {}
    for bi in range(k):
        for j in range(per_blob):
            t = f"w{bi}s{j:03d}"
            v = base[bi] + noise * mock_embed(t, dim, seed + 7)
            v /= np.linalg.norm(v)
            vectors[t] = v
            labels[t] = bi
    return vectors, labels


def check_geometry(vectors, labels):
    ids = sorted(vectors)
    within_min, cross_max = 1.0, -1.0
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            c = float(vectors[a] @ vectors[b])
            if labels[a] == labels[b]:
                within_min = min(within_min, c)
            else:
                cross_max = max(cross_max, c)
    return within_min, cross_max


def run_pipeline(vectors, verbose=True):
    p1 = APParams(damping=0.5)
    S = similarity_matrix(vectors, p1)
    c1 = affinity_propagation(S, p1, vectors)
    sizes1 = sorted((c.size for c in c1), reverse=True)
    c1p = purge(c1, 5)
    c1t = [trim(c, 5, vectors) for c in c1p]
    if verbose:
        print(f"  step1: pref={S.preference:.3f} {len(c1)} clusters {sizes1[:12]} -> {len(c1t)} kept")
    if not c1t:
        return []
    lvl1 = {f"L1.{i}": c.centroid for i, c in enumerate(c1t)}
    lvl1_members = {f"L1.{i}": c.member_ids for i, c in enumerate(c1t)}
    p2 = APParams(damping=0.8)
    S2 = similarity_matrix(lvl1, p2)
    c2 = affinity_propagation(S2, p2, lvl1)
    c2t = [trim(c, 20, lvl1) for c in c2]
    lvl2 = {f"L2.{i}": c.centroid for i, c in enumerate(c2t)}
    lvl2_members = {f"L2.{i}": c.member_ids for i, c in enumerate(c2t)}
    if verbose:
        print(f"  step2: pref={S2.preference:.3f} {len(c2)} clusters {[c.size for c in c2]}")
    p3 = APParams(damping=0.5)
    S3 = similarity_matrix(lvl2, p3)
    c3 = affinity_propagation(S3, p3, lvl2)
    c3t = [trim(c, 10, lvl2) for c in c3]
    if verbose:
        print(f"  step3: pref={S3.preference:.3f} {len(c3)} clusters {[c.size for c in c3]}")
    senses = []
    for c in c3t:
        sents = []
        for l2 in c.member_ids:
            for l1 in lvl2_members[l2]:
                sents.extend(lvl1_members[l1])
        senses.append(sorted(sents))
    return senses


def purity(senses, labels):
    return all(len({labels[x] for x in s}) == 1 for s in senses)


total = {"ok": 0, "fail": 0}
for k in (1, 2, 3):
    print(f"=== k={k} noise 0.13, dim 16 ===")
    for seed in range(6):
        vectors, labels = planted_vectors(k, 30, 16, 0.13, seed)
        wmin, cmax = check_geometry(vectors, labels)
        geom_ok = wmin >= 0.95 and (k == 1 or cmax <= 0.1)
        senses = run_pipeline(vectors, verbose=(seed < 3))
        ok = len(senses) == k and purity(senses, labels)
        total["ok" if ok else "fail"] += 1
        print(f" seed={seed} within_min={wmin:.3f} cross_max={cmax:.3f} geom_ok={geom_ok} "
              f"senses={len(senses)} pure={purity(senses, labels)} {'OK' if ok else 'FAIL'}")
print(total)
