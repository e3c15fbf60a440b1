"""Shared independent oracles for the test suite.

These deliberately avoid the library's own search strategies: isomorphism by
trying all vertex bijections, containment counting by brute force over copies,
and anti-Ramsey values by unpruned enumeration of all set partitions.
"""

from __future__ import annotations

import itertools
from math import comb

from rainbowlab.core import HyperGraph, disjoint_union
from rainbowlab.turan import subgraph_copies


def brute_isomorphic(a, b):
    """Isomorphism by exhaustive bijection check (test oracle)."""
    if a.r != b.r or a.n != b.n or len(a.edges) != len(b.edges):
        return False
    eb = set(b.edges)
    for p in itertools.permutations(range(a.n)):
        if all(tuple(sorted(p[v] for v in e)) in eb for e in a.edges):
            return True
    return False


def random_relabel(H, rng):
    p = list(range(H.n))
    rng.shuffle(p)
    return HyperGraph(H.r, H.n, [tuple(p[v] for v in e) for e in H.edges])


def random_hypergraph(rng, r, n, m):
    pool = list(itertools.combinations(range(n), r))
    rng.shuffle(pool)
    return HyperGraph(r, n, pool[:m])


def max_disjoint_copies(F, H):
    """Maximum number of pairwise vertex-disjoint copies of F in H (brute force)."""
    copies = []
    seen = set()
    from rainbowlab.core import iter_embeddings

    for emb in iter_embeddings(F, H):
        vs = frozenset(emb.mapping)
        key = (vs, frozenset(emb.image_edges(F)))
        if key not in seen:
            seen.add(key)
            copies.append(vs)

    best = 0

    def rec(i, used, k):
        nonlocal best
        best = max(best, k)
        for j in range(i, len(copies)):
            if not copies[j] & used:
                rec(j + 1, used | copies[j], k + 1)

    rec(0, frozenset(), 0)
    return best


def ar_brute(n, t, F):
    """ar(n, tF) by enumerating every set partition of the edges (no pruning)."""
    E = comb(n, F.r)
    copies = [tuple(sorted(cp)) for cp in subgraph_copies(disjoint_union(F, t), n)]
    best = 0
    a = [0] * E

    def rec(i, k):
        nonlocal best
        if i == E:
            for cp in copies:
                cols = [a[e] for e in cp]
                if len(set(cols)) == len(cols):
                    return
            best = max(best, k)
            return
        for c in range(k + 1):
            a[i] = c
            rec(i + 1, k + (1 if c == k else 0))

    rec(0, 0)
    return best + 1


def brute_r_partite(H):
    """r-partiteness by unpruned product enumeration (test oracle)."""
    if not H.edges:
        return True
    for coloring in itertools.product(range(H.r), repeat=H.n):
        if all(len({coloring[v] for v in e}) == H.r for e in H.edges):
            return True
    return False
