"""r-uniform hypergraphs on dense integer vertices.

Representation, canonical labeling, isomorphism, and embedding search.
All objects are immutable after construction; every operation here is pure,
so concurrent use from many threads is safe.

Conventions
-----------
- vertices are 0..n-1; edges are sorted tuples of r distinct vertices;
- the edge list is kept in colexicographic order (compare reversed tuples);
- text format: line 1 ``r n m``, then m lines of r ascending vertex indices,
  lines sorted colex, single spaces, trailing newline.  The parser rejects
  anything that does not round-trip bit-exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb

#: canonical labeling refuses larger inputs (capacity, not correctness)
MAX_CANON_VERTICES = 20


class CapacityError(Exception):
    """Input exceeds a documented size bound of the implementation."""


class FormatError(ValueError):
    """Text-format violation (parser is bit-exact)."""


def colex_key(edge):
    """Sort key realizing colexicographic order on sorted tuples."""
    return tuple(reversed(edge))


def colex_rank(edge):
    """Rank of a sorted r-subset in the colex enumeration of all r-subsets.

    Uses the combinatorial number system: rank = sum_i C(edge[i], i+1).
    """
    return sum(comb(v, i + 1) for i, v in enumerate(edge))


def all_edges_colex(n, r):
    """All r-subsets of {0..n-1} as sorted tuples, in colex order."""
    return sorted(itertools.combinations(range(n), r), key=colex_key)


class HyperGraph:
    """An r-uniform hypergraph on vertices 0..n-1 with a colex-sorted edge list.

    Invariants: every edge has exactly r distinct vertices < n, no duplicate
    edges, edge list strictly increasing in colex order.  Instances are
    immutable; do not mutate ``edges``.
    """

    __slots__ = ("r", "n", "edges", "_edgeset")

    def __init__(self, r, n, edges):
        if r < 1:
            raise ValueError(f"uniformity must be >= 1, got {r}")
        if n < 0:
            raise ValueError(f"vertex count must be >= 0, got {n}")
        norm = []
        for e in edges:
            t = tuple(sorted(e))
            if len(t) != r or len(set(t)) != r:
                raise ValueError(f"edge {e!r} is not an r-set for r={r}")
            if t[0] < 0 or t[-1] >= n:
                raise ValueError(f"edge {e!r} has a vertex outside 0..{n - 1}")
            norm.append(t)
        norm.sort(key=colex_key)
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a!r}")
        self.r = r
        self.n = n
        self.edges = tuple(norm)
        self._edgeset = frozenset(norm)

    # -- basic protocol ---------------------------------------------------

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, HyperGraph)
            and self.r == other.r
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.r, self.n, self.edges))

    def __repr__(self):
        return f"HyperGraph(r={self.r}, n={self.n}, m={len(self.edges)})"

    def has_edge(self, e):
        return tuple(sorted(e)) in self._edgeset

    # -- local structure --------------------------------------------------

    def link(self, v):
        """Link of v: the (r-1)-graph {e \\ {v} : v in e in H} on the same vertices."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range 0..{self.n - 1}")
        rem = [tuple(u for u in e if u != v) for e in self.edges if v in e]
        return HyperGraph(self.r - 1, self.n, rem)

    def degree(self, v):
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range 0..{self.n - 1}")
        return sum(1 for e in self.edges if v in e)

    def degrees(self):
        d = [0] * self.n
        for e in self.edges:
            for v in e:
                d[v] += 1
        return d

    def max_degree(self):
        return max(self.degrees(), default=0) if self.n else 0

    def isolated_vertices(self):
        d = self.degrees()
        return [v for v in range(self.n) if d[v] == 0]

    # -- subgraph surgery ---------------------------------------------------

    def induced(self, S):
        """Induced subgraph on S, relabeled to dense vertices 0..|S|-1
        (ascending original order)."""
        S = sorted(set(S))
        if S and (S[0] < 0 or S[-1] >= self.n):
            raise ValueError("S is not a subset of the vertex set")
        pos = {v: i for i, v in enumerate(S)}
        keep = set(S)
        edges = [tuple(pos[u] for u in e) for e in self.edges if keep.issuperset(e)]
        return HyperGraph(self.r, len(S), edges)

    def remove(self, S):
        """Induced subgraph on the complement of S."""
        drop = set(S)
        return self.induced([v for v in range(self.n) if v not in drop])


def complete(n, r):
    """The complete r-graph K_n^r."""
    return HyperGraph(r, n, itertools.combinations(range(n), r))


def disjoint_union(F, t):
    """The tiling tF: t vertex-disjoint copies of F (t >= 1)."""
    if t < 1:
        raise ValueError(f"tiling multiplicity must be >= 1, got {t}")
    edges = []
    for c in range(t):
        off = c * F.n
        edges.extend(tuple(v + off for v in e) for e in F.edges)
    return HyperGraph(F.r, t * F.n, edges)


# -- text format ------------------------------------------------------------


def to_text(H):
    lines = [f"{H.r} {H.n} {len(H.edges)}"]
    lines.extend(" ".join(str(v) for v in e) for e in H.edges)
    return "\n".join(lines) + "\n"


def from_text(text):
    """Parse the hypergraph text format; rejects any deviation bit-exactly."""
    lines = text.split("\n")
    if not lines or lines[-1] != "":
        raise FormatError("missing trailing newline")
    lines = lines[:-1]
    if not lines:
        raise FormatError("empty input")
    head = lines[0].split(" ")
    if len(head) != 3:
        raise FormatError(f"header must be 'r n m', got {lines[0]!r}")
    try:
        r, n, m = (int(x) for x in head)
    except ValueError as exc:
        raise FormatError(f"non-integer header field in {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split(" ")
        try:
            e = tuple(int(x) for x in parts)
        except ValueError as exc:
            raise FormatError(f"non-integer vertex in line {ln!r}") from exc
        if len(e) != r:
            raise FormatError(f"edge line {ln!r} does not have {r} vertices")
        if list(e) != sorted(set(e)):
            raise FormatError(f"edge line {ln!r} is not strictly ascending")
        edges.append(e)
    try:
        H = HyperGraph(r, n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if to_text(H) != text:
        raise FormatError("input is not in canonical serialization (colex order, exact spacing)")
    return H


def write_file(H, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_text(H))


def read_file(path):
    with open(path, "r", encoding="ascii") as fh:
        return from_text(fh.read())


# -- canonical labeling -------------------------------------------------------


def _incidence(H):
    inc = [[] for _ in range(H.n)]
    for i, e in enumerate(H.edges):
        for v in e:
            inc[v].append(i)
    return inc


def _refine(H, colors, inc):
    """Stable vertex coloring by iterated (color, incident edge signature) splitting.

    Renumbering follows sorted signature order, so the result is invariant
    under relabeling: isomorphic inputs get corresponding colorings.
    """
    ncells = len(set(colors))
    while True:
        esigs = [tuple(sorted(colors[v] for v in e)) for e in H.edges]
        vsigs = [
            (colors[v], tuple(sorted(esigs[i] for i in inc[v]))) for v in range(H.n)
        ]
        order = {sig: i for i, sig in enumerate(sorted(set(vsigs)))}
        new = [order[s] for s in vsigs]
        k = len(order)
        if k == ncells:
            return new
        colors, ncells = new, k


def _cert_bytes(H, pos):
    """Certificate of H relabeled by pos (vertex -> new label)."""
    redges = sorted(
        (tuple(sorted(pos[v] for v in e)) for e in H.edges), key=colex_key
    )
    head = bytes([H.r, H.n]) + len(redges).to_bytes(2, "big")
    return head + b"".join(bytes(e) for e in redges)


def _canonical_search(H):
    """Individualization-refinement search; returns (min certificate, labeling).

    Discovered automorphisms (pairs of leaves with equal certificates) prune
    sibling branches whose target vertices lie in an already-explored orbit of
    the subgroup fixing the individualized prefix.
    """
    n = H.n
    inc = _incidence(H)
    best = None  # (cert, pos)
    seen = {}  # cert -> pos of first leaf producing it
    auts = []  # known automorphisms as tuples (vertex -> vertex)

    def orbit_reached(explored, fixed):
        gens = [g for g in auts if all(g[x] == x for x in fixed)]
        if not gens:
            return set(explored)
        reach = set(explored)
        frontier = list(explored)
        while frontier:
            u = frontier.pop()
            for g in gens:
                w = g[u]
                if w not in reach:
                    reach.add(w)
                    frontier.append(w)
        return reach

    def search(colors, fixed):
        nonlocal best
        colors = _refine(H, colors, inc)
        cells = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            pos = colors  # discrete: color is the new label
            cert = _cert_bytes(H, pos)
            if cert in seen:
                p0 = seen[cert]
                inv0 = [0] * n
                for v in range(n):
                    inv0[p0[v]] = v
                g = tuple(inv0[pos[v]] for v in range(n))
                if g != tuple(range(n)) and g not in auts:
                    auts.append(g)
            elif len(seen) < 4096:
                seen[cert] = list(pos)
            if best is None or cert < best[0]:
                best = (cert, tuple(pos))
            return
        explored = []
        for v in sorted(target):
            if explored and v in orbit_reached(explored, fixed):
                continue
            child = [2 * c for c in colors]
            child[v] -= 1
            search(child, fixed + (v,))
            explored.append(v)

    search([0] * n, ())
    return best


def canonical_form(H):
    """Complete isomorphism invariant: equal bytes iff isomorphic.

    Supports v(H) <= MAX_CANON_VERTICES; larger inputs raise CapacityError.
    """
    if H.n > MAX_CANON_VERTICES:
        raise CapacityError(
            f"canonical labeling supports at most {MAX_CANON_VERTICES} vertices, got {H.n}"
        )
    return _canonical_search(H)[0]


def canonical_labeling(H):
    """A labeling (vertex -> new label) realizing canonical_form(H)."""
    if H.n > MAX_CANON_VERTICES:
        raise CapacityError(
            f"canonical labeling supports at most {MAX_CANON_VERTICES} vertices, got {H.n}"
        )
    return _canonical_search(H)[1]


def is_isomorphic(H1, H2):
    if H1.r != H2.r:
        raise ValueError(f"uniformity mismatch: {H1.r} vs {H2.r}")
    if H1.n != H2.n or len(H1.edges) != len(H2.edges):
        return False
    return canonical_form(H1) == canonical_form(H2)


# -- families -----------------------------------------------------------------


class HyperGraphFamily:
    """A finite set of r-graphs, pairwise non-isomorphic (deduped on construction)."""

    __slots__ = ("r", "members")

    def __init__(self, r, members):
        members = list(members)
        for m in members:
            if m.r != r:
                raise ValueError(f"family uniformity {r} but member has r={m.r}")
        # cheap invariant bucketing before canonical dedupe
        kept, forms = [], set()
        for m in members:
            f = canonical_form(m)
            if f not in forms:
                forms.add(f)
                kept.append(m)
        kept.sort(key=lambda m: (m.n, len(m.edges), canonical_form(m)))
        self.r = r
        self.members = tuple(kept)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return f"HyperGraphFamily(r={self.r}, members={len(self.members)})"

    def union(self, other):
        if self.r != other.r:
            raise ValueError("uniformity mismatch in family union")
        return HyperGraphFamily(self.r, list(self.members) + list(other.members))


def family_key(fam):
    """Canonical hash of a family: stable across member order and relabeling."""
    import hashlib

    h = hashlib.sha256()
    h.update(f"r={fam.r};".encode())
    for f in sorted(canonical_form(m) for m in fam.members):
        h.update(f)
        h.update(b"|")
    return h.hexdigest()[:16]


# -- embedding search -----------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """An injective vertex map realizing F as a subgraph of H.

    mapping[i] is the host image of pattern vertex i.
    """

    mapping: tuple

    def image_edges(self, F):
        return [tuple(sorted(self.mapping[v] for v in e)) for e in F.edges]

    def check(self, F, H, forbidden=()):
        m = self.mapping
        if len(m) != F.n or len(set(m)) != F.n:
            return False
        bad = set(forbidden)
        if any(w in bad or not 0 <= w < H.n for w in m):
            return False
        return all(H.has_edge(e) for e in self.image_edges(F))


def _pattern_order(F, rng=None):
    """Static vertex order for backtracking: connectivity-first, most-anchored,
    descending degree; isolated vertices last.  rng shuffles tie-breaking."""
    degs = F.degrees()
    verts = [v for v in range(F.n) if degs[v] > 0]
    isolated = [v for v in range(F.n) if degs[v] == 0]
    if rng is not None:
        rng.shuffle(verts)
        rng.shuffle(isolated)
    order = []
    placed = set()
    vset = set(verts)
    while vset - placed:
        # new component: start from max degree among unplaced
        rest = [v for v in verts if v not in placed]
        start = max(rest, key=lambda v: degs[v])
        order.append(start)
        placed.add(start)
        while True:
            # next: maximize number of edges fully anchored once placed
            cand_best, score_best = None, None
            for v in rest:
                if v in placed:
                    continue
                full = sum(
                    1
                    for e in F.edges
                    if v in e and all(u in placed or u == v for u in e)
                )
                touch = sum(
                    1 for e in F.edges if v in e and any(u in placed for u in e)
                )
                if touch == 0:
                    continue
                score = (full, touch, degs[v])
                if score_best is None or score > score_best:
                    score_best, cand_best = score, v
            if cand_best is None:
                break
            order.append(cand_best)
            placed.add(cand_best)
    order.extend(isolated)
    return order


def iter_embeddings(F, H, forbidden=(), rng=None):
    """Yield every embedding of F into H avoiding ``forbidden`` (exhaustive).

    Backtracking over a connectivity-aware static vertex order with degree and
    edge-completion pruning; for hosts with n <= 64 candidate sets are bitsets.
    """
    if F.r != H.r:
        raise ValueError(f"uniformity mismatch: {F.r} vs {H.r}")
    bad = set(forbidden)
    allowed = [w for w in range(H.n) if w not in bad]
    if F.n > len(allowed):
        return
    degs_F = F.degrees()
    degs_H = H.degrees()
    order = _pattern_order(F, rng)
    pos_in_order = {v: k for k, v in enumerate(order)}
    # edges checked at step k: all their pattern vertices are placed by step k
    checks = [[] for _ in range(F.n)]
    for e in F.edges:
        k = max(pos_in_order[v] for v in e)
        checks[k].append(e)
    allowed_mask = 0
    for w in allowed:
        allowed_mask |= 1 << w
    degok = [0] * F.n
    for v in range(F.n):
        mask = 0
        for w in allowed:
            if degs_H[w] >= degs_F[v]:
                mask |= 1 << w
        degok[v] = mask
    # completion index: (r-1)-subset -> bitmask of vertices closing a host edge
    completions = {}
    for e in H.edges:
        for v in e:
            key = tuple(u for u in e if u != v)
            completions[key] = completions.get(key, 0) | (1 << v)

    mapping = [-1] * F.n
    used = 0

    def candidates(k):
        u = order[k]
        mask = allowed_mask & ~used & degok[u]
        for e in checks[k]:
            key = tuple(sorted(mapping[x] for x in e if x != u))
            mask &= completions.get(key, 0)
            if not mask:
                return 0
        return mask

    def rec(k):
        nonlocal used
        if k == F.n:
            yield Embedding(tuple(mapping))
            return
        u = order[k]
        mask = candidates(k)
        while mask:
            low = mask & -mask
            w = low.bit_length() - 1
            mask ^= low
            mapping[u] = w
            used |= low
            yield from rec(k + 1)
            used &= ~low
            mapping[u] = -1

    yield from rec(0)


def find_embedding(F, H, forbidden=()):
    """First embedding of F into H avoiding ``forbidden``, or None (exhaustive)."""
    return next(iter_embeddings(F, H, forbidden), None)


def find_embedding_randomized(F, H, forbidden=(), seed=0):
    """Independent second embedding routine: same exhaustive semantics, but the
    backtracking vertex order is randomized.  Used to cross-check 'none' answers."""
    rng = random.Random(seed)
    return next(iter_embeddings(F, H, forbidden, rng=rng), None)


def contains_member(H, fam):
    """True iff some member of fam embeds in H (subgraph containment)."""
    if H.r != fam.r:
        raise ValueError(f"uniformity mismatch: {H.r} vs {fam.r}")
    return any(
        m.n <= H.n and find_embedding(m, H) is not None for m in fam.members
    )


# -- r-partiteness --------------------------------------------------------------


def is_r_partite(H):
    """True iff V(H) splits into r classes with every edge hitting each class once.

    Exhaustive search over colorings; symmetry pruned by never opening color
    c+1 before color c has been used.
    """
    r, n = H.r, H.n
    if n == 0 or not H.edges:
        return True
    inc = _incidence(H)
    color = [-1] * n

    def ok(v):
        for i in inc[v]:
            e = H.edges[i]
            seen = set()
            undecided = 0
            for u in e:
                c = color[u]
                if c == -1:
                    undecided += 1
                elif c in seen:
                    return False
                else:
                    seen.add(c)
            # a fully colored edge must use r distinct colors
            if undecided == 0 and len(seen) != r:
                return False
        return True

    def rec(v, maxc):
        if v == n:
            return True
        top = min(maxc + 1, r - 1)
        for c in range(top + 1):
            color[v] = c
            if ok(v) and rec(v + 1, max(maxc, c)):
                return True
        color[v] = -1
        return False

    return rec(0, -1)
