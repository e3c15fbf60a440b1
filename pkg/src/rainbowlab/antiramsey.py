"""Edge colorings of K_n^r, rainbow-copy search, lower-bound constructions,
and exact anti-Ramsey numbers for tilings.

ar(n, tF) is the least N such that every surjective N-coloring of K_n^r has a
rainbow tF.  The solver computes A = the maximum number of classes of an edge
partition with no rainbow tF (restricted-growth-string search over the colex
edge order) and returns A + 1; surjectivity is automatic since every class of
a partition is nonempty.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .core import (
    CapacityError,
    Embedding,
    FormatError,
    HyperGraph,
    all_edges_colex,
    canonical_form,
    colex_rank,
    disjoint_union,
    family_key,
)
from .turan import (
    MissingRecordError,
    SOLVER_VERSION,
    singleton,
    subgraph_copies,
)


class CertificationError(Exception):
    """A coloring failed the rainbow-freeness check it is supposed to satisfy."""


class EdgeColoring:
    """A surjective coloring of all edges of K_n^r.

    colors[i] is the color (1..ncolors) of the edge with colex rank i.
    """

    __slots__ = ("r", "n", "ncolors", "colors")

    def __init__(self, r, n, ncolors, colors):
        E = comb(n, r)
        colors = tuple(colors)
        if len(colors) != E:
            raise ValueError(f"expected {E} colors, got {len(colors)}")
        if ncolors < 1 or any(not 1 <= c <= ncolors for c in colors):
            raise ValueError("colors must lie in 1..ncolors")
        if len(set(colors)) != ncolors:
            raise ValueError("coloring must be surjective onto 1..ncolors")
        self.r = r
        self.n = n
        self.ncolors = ncolors
        self.colors = colors

    def color_of(self, edge):
        return self.colors[colex_rank(tuple(sorted(edge)))]

    def __eq__(self, other):
        return (
            isinstance(other, EdgeColoring)
            and (self.r, self.n, self.ncolors, self.colors)
            == (other.r, other.n, other.ncolors, other.colors)
        )

    def __repr__(self):
        return f"EdgeColoring(r={self.r}, n={self.n}, ncolors={self.ncolors})"


def coloring_to_text(chi):
    head = f"{chi.r} {chi.n} {chi.ncolors}"
    return head + "\n" + " ".join(str(c) for c in chi.colors) + "\n"


def coloring_from_text(text):
    lines = text.split("\n")
    if len(lines) != 3 or lines[-1] != "":
        raise FormatError("coloring file must be exactly two lines")
    head = lines[0].split(" ")
    if len(head) != 3:
        raise FormatError(f"header must be 'r n N', got {lines[0]!r}")
    try:
        r, n, N = (int(x) for x in head)
        colors = [int(x) for x in lines[1].split(" ")]
    except ValueError as exc:
        raise FormatError("non-integer field in coloring file") from exc
    try:
        chi = EdgeColoring(r, n, N, colors)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if coloring_to_text(chi) != text:
        raise FormatError("coloring file is not in canonical serialization")
    return chi


# -- rainbow copy search ----------------------------------------------------------


def find_rainbow_copy(chi, target):
    """An embedding of ``target`` into K_n^r whose edge images carry pairwise
    distinct colors under chi, or None.  Exhaustive; if the target has more
    vertices than the host no copy exists and None is returned.

    Isomorphic components are forced into ascending position (by minimum image
    vertex), which prunes the t! relabelings of a tiling.
    """
    n = chi.n
    if target.r != chi.r:
        raise ValueError(f"uniformity mismatch: {target.r} vs {chi.r}")
    if target.n > n or len(target.edges) > chi.ncolors:
        return None
    degs = target.degrees()
    isolated = [v for v in range(target.n) if degs[v] == 0]
    groups = _component_vertices(target)
    groups.sort(key=lambda vs: (canonical_form(target.induced(vs)), vs))

    # order: component by component; inside a component, most-anchored first
    order = []
    comp_of = {}
    comp_keys = []
    for ci, vs in enumerate(groups):
        comp_keys.append(canonical_form(target.induced(vs)))
        verts = sorted(vs, key=lambda v: -degs[v])
        placed = []
        while verts:
            if not placed:
                nxt = verts[0]
            else:
                nxt = max(
                    verts,
                    key=lambda v: (
                        sum(
                            1
                            for e in target.edges
                            if v in e and all(u == v or u in placed for u in e)
                        ),
                        degs[v],
                    ),
                )
            verts.remove(nxt)
            placed.append(nxt)
            comp_of[nxt] = ci
        order.extend(placed)
    order.extend(isolated)

    pos = {v: k for k, v in enumerate(order)}
    checks = [[] for _ in range(target.n)]
    for e in target.edges:
        checks[max(pos[v] for v in e)].append(e)
    comp_start = {}
    for k, v in enumerate(order):
        ci = comp_of.get(v)
        if ci is not None and ci not in comp_start:
            comp_start[ci] = k

    mapping = [-1] * target.n
    used = 0
    used_colors = set()
    comp_min = [n] * len(groups)
    full = (1 << n) - 1

    def rec(k):
        nonlocal used
        if k == target.n:
            return Embedding(tuple(mapping))
        u = order[k]
        ci = comp_of.get(u)
        mask = full & ~used
        if ci is not None and ci > 0 and comp_keys[ci] == comp_keys[ci - 1]:
            # identical components: every image vertex must exceed the
            # previous component's minimum
            mask &= full << (comp_min[ci - 1] + 1)
        m = mask
        while m:
            low = m & -m
            w = low.bit_length() - 1
            m ^= low
            new_cols = []
            ok = True
            mapping[u] = w
            for e in checks[k]:
                col = chi.colors[colex_rank(tuple(sorted(mapping[x] for x in e)))]
                if col in used_colors or col in new_cols:
                    ok = False
                    break
                new_cols.append(col)
            if not ok:
                mapping[u] = -1
                continue
            used |= low
            used_colors.update(new_cols)
            saved = None
            if ci is not None:
                saved = comp_min[ci]
                if w < comp_min[ci]:
                    comp_min[ci] = w
            got = rec(k + 1)
            if got is not None:
                return got
            if ci is not None:
                comp_min[ci] = saved
            used_colors.difference_update(new_cols)
            used &= ~low
            mapping[u] = -1
        return None

    return rec(0)


def _component_vertices(F):
    """Vertex groups of the connected components of F's edge support."""
    parent = list(range(F.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in F.edges:
        a = find(e[0])
        for v in e[1:]:
            parent[find(v)] = a
    groups = {}
    degs = F.degrees()
    for v in range(F.n):
        if degs[v] > 0:
            groups.setdefault(find(v), []).append(v)
    return [sorted(vs) for vs in groups.values()]


def max_rainbow_subgraph(chi):
    """A rainbow subgraph with the maximum number of edges: one edge per color
    class, deterministically the colex-least edge of each class."""
    edges = all_edges_colex(chi.n, chi.r)
    first = {}
    for i, c in enumerate(chi.colors):
        if c not in first:
            first[c] = edges[i]
    return HyperGraph(chi.r, chi.n, list(first.values()))


# -- lower-bound constructions -----------------------------------------------------


def build_coloring_fact21(n, t, F, record, certify=True):
    """Rainbow extremal tF-free graph plus one dump color.

    Uses ex(n, tF) + 1 colors total and contains no rainbow (t+1)F: at most
    one copy of F in a (t+1)F can touch the dump color, and the rainbow part
    lives inside the tF-free witness.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t * F.n > n:
        raise ValueError(f"target cannot embed: t*v(F) = {t * F.n} > n = {n}")
    fam = singleton(disjoint_union(F, t))
    if record.family_key != family_key(fam) or record.n != n:
        raise ValueError("record does not match ex(n, tF)")
    if not record.is_exact():
        raise MissingRecordError("the fact21 construction needs an exact record")
    H = record.witness
    E = comb(n, F.r)
    colors = [len(H.edges) + 1] * E
    for i, e in enumerate(H.edges):
        colors[colex_rank(e)] = i + 1
    chi = EdgeColoring(F.r, n, len(H.edges) + 1, colors)
    if certify:
        hit = find_rainbow_copy(chi, disjoint_union(F, t + 1))
        if hit is not None:
            raise CertificationError(
                f"fact21 coloring admits a rainbow {t + 1}x copy: {hit.mapping}"
            )
    return chi


def build_coloring_fact31(n, t, F, inner, certify=True):
    """Keep an inner coloring on the first n-t vertices, make every edge
    meeting the last t vertices a fresh color.

    The inner coloring must itself have no rainbow 2F; the result then has no
    rainbow (t+2)F.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if inner.r != F.r or inner.n != n - t:
        raise ValueError(f"inner coloring must live on K_{n - t}^{F.r}")
    if find_rainbow_copy(inner, disjoint_union(F, 2)) is not None:
        raise CertificationError("inner coloring fails its own certification (rainbow 2F)")
    if t == 0:
        return inner
    M = inner.ncolors
    edges = all_edges_colex(n, F.r)
    colors = []
    nxt = M
    for e in edges:
        if e[-1] < n - t:
            colors.append(inner.colors[colex_rank(e)])
        else:
            nxt += 1
            colors.append(nxt)
    chi = EdgeColoring(F.r, n, nxt, colors)
    assert nxt == M + comb(n, F.r) - comb(n - t, F.r)
    if certify:
        hit = find_rainbow_copy(chi, disjoint_union(F, t + 2))
        if hit is not None:
            raise CertificationError(
                f"fact31 coloring admits a rainbow {t + 2}x copy: {hit.mapping}"
            )
    return chi


# -- exact ar ----------------------------------------------------------------------


@dataclass(frozen=True)
class ArRecord:
    """ar(n, tF) with a witness coloring on value-1 colors (none when value=1)."""

    n: int
    t: int
    r: int
    F_key: str
    value: int
    witness: EdgeColoring | None
    status: str  # "exact" or "bounds"
    lo: int = 0
    hi: int = 0
    nodes: int = 0
    solver: str = SOLVER_VERSION

    def is_exact(self):
        return self.status == "exact"


class _ArShared:
    def __init__(self, budget):
        self.best = 0
        self.incumbent = None
        self.nodes = 0
        self.budget = budget
        self.truncated = False
        self.lock = threading.Lock()

    def offer(self, k, rgs):
        with self.lock:
            if k > self.best:
                self.best = k
                self.incumbent = tuple(rgs)

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            self.truncated = True
            raise _ArBudget


class _ArBudget(Exception):
    pass


def _allowed_colors(by_max_i, assign):
    """Colors safe at this edge: None means unconstrained; otherwise the
    intersection of the earlier-color sets of all rainbow-threatening copies
    (a fresh color would complete each of them)."""
    allowed = None
    for cp in by_max_i:
        earlier = [assign[e] for e in cp[:-1]]
        s = set(earlier)
        if len(s) == len(earlier):
            allowed = s if allowed is None else allowed & s
            if not allowed:
                return set()
    return allowed


def _ar_dfs(by_max, E, assign, i, k, shared):
    shared.tick()
    if i == E:
        shared.offer(k, assign)
        return
    if k + (E - i) <= shared.best:
        return
    allowed = _allowed_colors(by_max[i], assign)
    if allowed is None:
        cand = range(k, -1, -1)  # fresh class first
    else:
        cand = sorted((c for c in allowed if c < k), reverse=True)
    for c in cand:
        assign[i] = c
        _ar_dfs(by_max, E, assign, i + 1, k + (1 if c == k else 0), shared)
    assign[i] = -1


def _ar_witness(by_max, E, target):
    """Lexicographically least restricted growth string attaining ``target``
    classes with no rainbow copy."""
    assign = [-1] * E

    def rec(i, k):
        if i == E:
            return k == target
        if k + (E - i) < target:
            return False
        allowed = _allowed_colors(by_max[i], assign)
        top = min(k, target - 1)
        for c in range(top + 1):
            if allowed is not None and c not in allowed:
                continue
            assign[i] = c
            if rec(i + 1, k + (1 if c == k else 0)):
                return True
        assign[i] = -1
        return False

    if not rec(0, 0):
        raise RuntimeError("witness reconstruction failed (value inconsistent)")
    return assign


def ar_exact(n, t, F, budget=None, threads=1):
    """Exact ar(n, tF): max color classes of a no-rainbow-tF partition, plus one.

    Enumerates restricted growth strings over the colex edge order, pruning on
    class count and on completed rainbow copies (copies indexed by their colex
    maximum edge).  The witness is the lexicographically least maximizer.
    With an exhausted node budget the record degrades to bounds(lo, hi).
    """
    if t < 1:
        raise ValueError("t = 0 tilings are rejected (rainbow copy would be vacuous)")
    if t * F.n > n:
        raise ValueError(f"target cannot embed: t*v(F) = {t * F.n} > n = {n}")
    if not F.edges:
        raise ValueError("F must have at least one edge")
    r = F.r
    E = comb(n, r)
    if E > 32:
        raise CapacityError(f"partition search supports C(n,r) <= 32 edges, got {E}")
    target = disjoint_union(F, t)
    copies = [tuple(sorted(cp)) for cp in subgraph_copies(target, n)]
    by_max = [[] for _ in range(E)]
    for cp in copies:
        by_max[cp[-1]].append(cp)

    shared = _ArShared(budget)

    # split work over assignments of the first few edges (valid RGS prefixes)
    depth = 1
    if threads > 1:
        while depth < E and 2**depth < 8 * threads:
            depth += 1

    prefixes = []

    def expand(i, k, assign):
        if i == min(depth, E):
            prefixes.append((list(assign), i, k))
            return
        allowed = _allowed_colors(by_max[i], assign)
        cand = range(k + 1) if allowed is None else sorted(c for c in allowed if c <= k)
        for c in cand:
            assign[i] = c
            expand(i + 1, k + (1 if c == k else 0), assign)
        assign[i] = -1

    expand(0, 0, [-1] * E)

    def run(task):
        assign, i, k = task
        try:
            _ar_dfs(by_max, E, assign, i, k, shared)
        except _ArBudget:
            pass

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, prefixes))
    else:
        for task in prefixes:
            run(task)

    key = family_key(singleton(F))
    A = shared.best
    if shared.truncated:
        witness = _coloring_from_rgs(r, n, shared.incumbent) if shared.incumbent else None
        return ArRecord(
            n, t, r, key, A + 1, witness, "bounds", lo=A + 1, hi=E + 1, nodes=shared.nodes
        )
    witness = None
    if A > 0:
        witness = _coloring_from_rgs(r, n, _ar_witness(by_max, E, A))
    return ArRecord(n, t, r, key, A + 1, witness, "exact", nodes=shared.nodes)


def _coloring_from_rgs(r, n, rgs):
    return EdgeColoring(r, n, max(rgs) + 1, [c + 1 for c in rgs])


def verify_no_rainbow(chi, F, t):
    """True iff chi has no rainbow tF (exhaustive)."""
    return find_rainbow_copy(chi, disjoint_union(F, t)) is None


class ArTable:
    """In-memory map (F key, n, t) -> ArRecord."""

    def __init__(self):
        self._records = {}

    def put(self, record):
        self._records[record.F_key, record.n, record.t] = record

    def get(self, F, n, t):
        rec = self._records.get((family_key(singleton(F)), n, t))
        if rec is None or not rec.is_exact():
            raise MissingRecordError(f"no exact ar record for n={n}, t={t}")
        return rec

    def ar(self, F, n, t):
        return self.get(F, n, t).value


# -- verification of the finite statements ---------------------------------------


@dataclass(frozen=True)
class SandwichVerdict:
    n: int
    s: int
    ar_value: int
    lower: int
    upper: int
    holds: bool


def sandwich_check(n, s, F, turan_table, ar_table):
    """ex(n,(s-1)F)+2 <= ar(n,sF) <= ex(n,sF)+1 from exact records.

    For s = 1 the lower bound degenerates (a single color admits no rainbow F
    with two or more edges): 2 when |F| >= 2, else 1.
    """
    ar_rec = ar_table.get(F, n, s)
    upper = turan_table.ex(singleton(disjoint_union(F, s)), n) + 1
    if s >= 2:
        lower = turan_table.ex(singleton(disjoint_union(F, s - 1)), n) + 2
    else:
        lower = 2 if len(F.edges) >= 2 else 1
    holds = lower <= ar_rec.value <= upper
    return SandwichVerdict(n, s, ar_rec.value, lower, upper, holds)


@dataclass(frozen=True)
class ReductionVerdict:
    n: int
    t: int
    ar_big: int
    crossing: int
    ar_inner: int
    holds: bool


def reduction_check(n, t, F, ar_table):
    """ar(n,(t+2)F) >= C(n,r) - C(n-t,r) + ar(n-t, 2F) from exact records."""
    big = ar_table.get(F, n, t + 2)
    inner = ar_table.get(F, n - t, 2)
    crossing = comb(n, F.r) - comb(n - t, F.r)
    holds = big.value >= crossing + inner.value
    return ReductionVerdict(n, t, big.value, crossing, inner.value, holds)


@dataclass(frozen=True)
class IdentityVerdict:
    n: int
    t: int
    ar_value: int
    ex_value: int
    t_max: int
    in_range: bool
    identity_holds: bool
    lower_holds: bool
    status: str  # holds | out-of-range | violation


def verify_identity_thm15(n, t, F, turan_table, ar_table):
    """Check ar(n,(t+1)F) = ex(n,tF) + 2 and whether t lies in the certified
    range derived from the Turan gap.  Out-of-range failures are informative;
    an in-range failure (or any failure of the unconditional lower bound)
    is a violation."""
    from .turan import edge_sensitivity_gap

    ar_value = ar_table.ar(F, n, t + 1)
    ex_value = turan_table.ex(singleton(disjoint_union(F, t)), n)
    gap = edge_sensitivity_gap(F, n, turan_table)
    in_range = 1 <= t <= gap.t_max
    identity = ar_value == ex_value + 2
    lower = ar_value >= ex_value + 2
    if not lower:
        status = "violation"
    elif identity:
        status = "holds" if in_range else "out-of-range"
    else:
        status = "violation" if in_range else "out-of-range"
    return IdentityVerdict(n, t, ar_value, ex_value, gap.t_max, in_range, identity, lower, status)


# -- stability census ---------------------------------------------------------------


@dataclass(frozen=True)
class StabilityParams:
    alpha: Fraction
    t: int
    L: tuple


@dataclass(frozen=True)
class CensusResult:
    threshold: Fraction
    alpha: Fraction
    vertices: tuple


def stability_degree_census(H, F, pi, table):
    """Vertices of H with degree >= d(n,F) + (1-pi)/(7 v(F)) * C(n-1, r-1).

    Exact rational comparison; n is the vertex count of H and ex(n,F) must be
    an exact record.
    """
    n = H.n
    ex_n = table.ex(singleton(F), n)
    alpha = Fraction(1 - pi, 7 * F.n)
    threshold = Fraction(F.r * ex_n, n) + alpha * comb(n - 1, F.r - 1)
    degs = H.degrees()
    vertices = tuple(v for v in range(n) if Fraction(degs[v]) >= threshold)
    return CensusResult(threshold=threshold, alpha=alpha, vertices=vertices)


def stability_params(H, F, pi, table, t):
    """Census packaged against a target size t: the stability-style diagnostic
    asks whether H exposes at least t vertices above the degree threshold."""
    res = stability_degree_census(H, F, pi, table)
    return StabilityParams(alpha=res.alpha, t=t, L=res.vertices)
