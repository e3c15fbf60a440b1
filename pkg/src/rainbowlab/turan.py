"""Exact Turan numbers with witnesses, and the derived numeric checks.

Two independent routes to ex(n, family):

- ``ex_exact``: branch and bound over edges in colex order (include-first),
  pruned by an edge-disjoint copy packing bound, copy-completion tests, and
  root-level symmetry fixing (the host K_n^r is r-set transitive).
- ``ex_enumerate``: vectorized sweep over all 2^C(n,r) edge subsets,
  usable up to 20 edges.  This is the dual oracle; it shares only the copy
  enumeration with the branch and bound.

All threshold comparisons (smoothness, boundedness, gaps, Facts about
binomials and degree averages) use exact rationals; e^{1/5} is handled by a
certified interval.
"""

from __future__ import annotations

import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .core import (
    CapacityError,
    HyperGraph,
    HyperGraphFamily,
    all_edges_colex,
    canonical_form,
    colex_rank,
    contains_member,
    family_key,
    is_r_partite,
    iter_embeddings,
)
from .core import complete as complete_host

SOLVER_VERSION = "rainbowlab-0.1.0"

#: certified enclosure of e^{1/5}
E15_LO = Fraction(12214027, 10**7)
E15_HI = Fraction(12214028, 10**7)


class MissingRecordError(LookupError):
    """A required exact Turan/ar record is not available."""


# -- copies of a pattern inside the complete host -------------------------------


def _components(F):
    """Connected components of the edge support, as induced sub-hypergraphs
    relabeled to dense vertices."""
    parent = list(range(F.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in F.edges:
        a = find(e[0])
        for v in e[1:]:
            b = find(v)
            parent[b] = a
    groups = {}
    degs = F.degrees()
    for v in range(F.n):
        if degs[v] > 0:
            groups.setdefault(find(v), []).append(v)
    return [F.induced(vs) for vs in groups.values()]


def subgraph_copies(F, n):
    """Every copy of F in K_n^r as a frozenset of colex edge ranks.

    Assembled component by component; identical components are ordered by
    their minimum image vertex, so each copy appears exactly once.  Isolated
    vertices of F only require v(F) <= n.
    """
    if F.n > n or not F.edges:
        return []
    comps = _components(F)
    comps.sort(key=lambda c: (canonical_form(c), c.n))
    host = complete_host(n, F.r)
    placements = []  # per component: list of (vertex_mask, frozenset of ranks)
    cache = {}
    for c in comps:
        key = canonical_form(c)
        if key not in cache:
            seen = {}
            for emb in iter_embeddings(c, host):
                ranks = frozenset(
                    colex_rank(e) for e in emb.image_edges(c)
                )
                if ranks not in seen:
                    vm = 0
                    for w in emb.mapping:
                        vm |= 1 << w
                    seen[ranks] = vm
            cache[key] = sorted(
                ((vm, rk) for rk, vm in seen.items()),
                key=lambda p: (p[0], sorted(p[1])),
            )
        placements.append((key, cache[key]))

    out = []
    k = len(comps)

    def rec(i, used_mask, prev_key, prev_min, acc):
        if i == k:
            out.append(frozenset().union(*acc))
            return
        key, options = placements[i]
        for vm, ranks in options:
            if vm & used_mask:
                continue
            lo = (vm & -vm).bit_length() - 1
            if key == prev_key and lo <= prev_min:
                continue
            acc.append(ranks)
            rec(i + 1, used_mask | vm, key, lo, acc)
            acc.pop()

    rec(0, 0, None, -1, [])
    return out


def _copy_masks(fam, n):
    """Forbidden-copy bitmasks over the colex edge ranks of K_n^r.

    Returns (masks, edgeless) where edgeless flags a member with no edges
    fitting on n vertices (which forces ex = 0 by convention).
    """
    masks = set()
    edgeless = False
    for m in fam.members:
        if m.n <= n and not m.edges:
            edgeless = True
        for cp in subgraph_copies(m, n):
            masks.add(sum(1 << i for i in cp))
    # drop masks that contain another mask (dominated constraints)
    order = sorted(masks, key=lambda x: x.bit_count())
    kept = []
    for x in order:
        if not any(y & x == y for y in kept):
            kept.append(x)
    return kept, edgeless


# -- full enumeration oracle ------------------------------------------------------


def ex_enumerate(n, fam):
    """ex(n, fam) by sweeping all 2^C(n,r) edge subsets (requires <= 20 edges).

    Returns (value, witness).  Witness is the smallest colex bitmask optimum.
    """
    r = fam.r
    if n < r:
        raise ValueError(f"need n >= r, got n={n}, r={r}")
    E = comb(n, r)
    if E > 20:
        raise CapacityError(f"enumeration oracle supports C(n,r) <= 20, got {E}")
    masks, edgeless = _copy_masks(fam, n)
    if edgeless:
        return 0, HyperGraph(r, n, [])
    universe = np.arange(1 << E, dtype=np.uint32)
    good = np.ones(1 << E, dtype=bool)
    for c in masks:
        cc = np.uint32(c)
        good &= (universe & cc) != cc
    if hasattr(np, "bitwise_count"):
        counts = np.bitwise_count(universe).astype(np.int16)
    else:  # numpy < 2: popcount via 10-bit halves
        table = np.array([bin(i).count("1") for i in range(1 << 10)], dtype=np.int16)
        counts = table[universe & 0x3FF] + table[(universe >> 10) & 0x3FF]
    counts[~good] = -1
    best = int(counts.max())
    idx = int(np.argmax(counts))
    edges = all_edges_colex(n, r)
    witness = HyperGraph(r, n, [edges[i] for i in range(E) if idx >> i & 1])
    return best, witness


# -- branch and bound ----------------------------------------------------------


@dataclass(frozen=True)
class TuranRecord:
    """A certified ex(n, family) value with its extremal witness."""

    n: int
    r: int
    family_key: str
    value: int
    witness: HyperGraph
    status: str  # "exact" or "lower_bound_only"
    nodes: int = 0
    solver: str = SOLVER_VERSION

    def is_exact(self):
        return self.status == "exact"


class _BudgetExhausted(Exception):
    pass


class _Shared:
    def __init__(self, best, incumbent, budget):
        self.best = best
        self.incumbent = incumbent
        self.nodes = 0
        self.budget = budget
        self.truncated = False
        self.lock = threading.Lock()

    def offer(self, k, chosen):
        with self.lock:
            if k > self.best:
                self.best = k
                self.incumbent = chosen

    def tick(self):
        self.nodes += 1  # racy under threads; budget is approximate there
        if self.budget is not None and self.nodes > self.budget:
            self.truncated = True
            raise _BudgetExhausted


class _Ctx:
    """Immutable per-problem search data shared by all workers."""

    def __init__(self, E, masks, canonical_aug):
        self.E = E
        self.canonical_aug = canonical_aug
        self.cmax = [[] for _ in range(E)]
        for m in masks:
            top = m.bit_length() - 1
            self.cmax[top].append(m ^ (1 << top))
        # greedy edge-disjoint packing of copies for the counting bound
        self.pack_of = [-1] * E
        sizes = []
        used = 0
        for m in sorted(masks, key=lambda x: (x.bit_count(), x)):
            if m & used:
                continue
            pid = len(sizes)
            sizes.append(m.bit_count())
            used |= m
            mm = m
            while mm:
                low = mm & -mm
                self.pack_of[low.bit_length() - 1] = pid
                mm ^= low
        self.pack_size = sizes

    def counters(self, i, chosen):
        """Pack counters for the state where edges < i are decided."""
        inc = [0] * len(self.pack_size)
        und = list(self.pack_size)
        unpacked = 0
        for e in range(self.E):
            p = self.pack_of[e]
            if e < i:
                if p >= 0:
                    und[p] -= 1
                    if chosen >> e & 1:
                        inc[p] += 1
            elif p < 0:
                unpacked += 1
        return inc, und, unpacked


def _dfs(ctx, shared, i, chosen, k, inc, und, unpacked, second_pending):
    """Include-first DFS; updates shared.best at leaves."""
    shared.tick()
    E = ctx.E
    if i == E:
        shared.offer(k, chosen)
        return
    # counting bound: chosen + what packs can still contribute + loose edges
    bound = k + unpacked
    sizes = ctx.pack_size
    for p in range(len(sizes)):
        cap = sizes[p] - 1 - inc[p]
        u = und[p]
        bound += u if u < cap else cap
    if bound <= shared.best:
        return
    p = ctx.pack_of[i]
    # include branch
    ok = True
    for mw in ctx.cmax[i]:
        if mw & ~chosen == 0:
            ok = False
            break
    if ok and second_pending and ctx.canonical_aug and not ctx.ok_second[i]:
        ok = False
    if ok:
        if p >= 0:
            inc[p] += 1
            und[p] -= 1
        else:
            unpacked -= 1
        _dfs(
            ctx,
            shared,
            i + 1,
            chosen | (1 << i),
            k + 1,
            inc,
            und,
            unpacked,
            False,
        )
        if p >= 0:
            inc[p] -= 1
            und[p] += 1
        else:
            unpacked += 1
    # exclude branch
    if p >= 0:
        und[p] -= 1
        _dfs(ctx, shared, i + 1, chosen, k, inc, und, unpacked, second_pending)
        und[p] += 1
    else:
        _dfs(ctx, shared, i + 1, chosen, k, inc, und, unpacked - 1, second_pending)


def _greedy(ctx):
    chosen = 0
    for i in range(ctx.E):
        if all(mw & ~chosen != 0 for mw in ctx.cmax[i]):
            chosen |= 1 << i
    return chosen


def _expand_tasks(ctx, depth):
    """Decision prefixes of the root-fixed tree down to ``depth`` edges."""
    tasks = []

    def rec(i, chosen, second_pending):
        if i == min(depth, ctx.E):
            tasks.append((i, chosen, second_pending))
            return
        ok = all(mw & ~chosen != 0 for mw in ctx.cmax[i])
        if ok and second_pending and ctx.canonical_aug and not ctx.ok_second[i]:
            ok = False
        if ok:
            rec(i + 1, chosen | (1 << i), False)
        rec(i + 1, chosen, second_pending)

    rec(1, 1, True)
    return tasks


def ex_exact(n, fam, budget=None, threads=1, canonical_aug=False):
    """Exact ex(n, fam) with an extremal witness.

    Branch and bound; with a node budget the search may stop early, in which
    case status is ``lower_bound_only`` and the witness is the incumbent.
    The optimal value is computed first (parallelizable over prefix tasks with
    a shared best); the witness is then re-derived by a deterministic pass, so
    (value, witness) do not depend on thread count.
    """
    r = fam.r
    if n < r:
        raise ValueError(f"need n >= r, got n={n}, r={r}")
    E = comb(n, r)
    if E > 64:
        raise CapacityError(f"branch and bound supports C(n,r) <= 64, got {E}")
    key = family_key(fam)
    masks, edgeless = _copy_masks(fam, n)
    edges = all_edges_colex(n, r)
    if edgeless or 1 in [m.bit_count() for m in masks]:
        # some member is a single edge (or edgeless): every edge is forbidden
        value = 0
        witness = HyperGraph(r, n, [])
        return TuranRecord(n, r, key, value, witness, "exact", nodes=1)
    if not masks:
        return TuranRecord(n, r, key, E, complete_host(n, r), "exact", nodes=1)

    ctx = _Ctx(E, masks, canonical_aug)
    # orbit-minimal candidates for the second included edge (stabilizer of
    # edge 0 classifies edges by their intersection size with it)
    e0 = set(edges[0])
    classmin = {}
    for i in range(1, E):
        s = len(e0.intersection(edges[i]))
        if s not in classmin:
            classmin[s] = i
    ctx.ok_second = [False] * E
    for i in classmin.values():
        ctx.ok_second[i] = True

    greedy = _greedy(ctx)
    shared = _Shared(greedy.bit_count(), greedy, budget)

    depth = 1
    if threads > 1:
        while depth < E and 2**depth < 4 * threads:
            depth += 1
    tasks = _expand_tasks(ctx, max(depth, 1))

    def run(task):
        i, chosen, second_pending = task
        inc, und, unpacked = ctx.counters(i, chosen)
        try:
            _dfs(ctx, shared, i, chosen, chosen.bit_count(), inc, und, unpacked, second_pending)
        except _BudgetExhausted:
            pass

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, tasks))
    else:
        for t in tasks:
            run(t)

    value = shared.best
    status = "lower_bound_only" if shared.truncated else "exact"
    if status == "exact":
        witness_mask = _first_optimum(ctx, value)
    else:
        witness_mask = shared.incumbent
    witness = HyperGraph(r, n, [edges[i] for i in range(E) if witness_mask >> i & 1])
    return TuranRecord(n, r, key, value, witness, status, nodes=shared.nodes)


def _first_optimum(ctx, value):
    """Deterministic witness: first fam-free edge set of size ``value`` in
    include-first colex decision order (root edge fixed)."""
    if value == 0:
        return 0
    E = ctx.E

    def rec(i, chosen, k, inc, und, unpacked):
        if k == value:
            return chosen
        if i == E:
            return None
        bound = k + unpacked
        sizes = ctx.pack_size
        for p in range(len(sizes)):
            cap = sizes[p] - 1 - inc[p]
            u = und[p]
            bound += u if u < cap else cap
        if bound < value:
            return None
        p = ctx.pack_of[i]
        if all(mw & ~chosen != 0 for mw in ctx.cmax[i]):
            if p >= 0:
                inc[p] += 1
                und[p] -= 1
            else:
                unpacked -= 1
            got = rec(i + 1, chosen | (1 << i), k + 1, inc, und, unpacked)
            if p >= 0:
                inc[p] -= 1
                und[p] += 1
            else:
                unpacked += 1
            if got is not None:
                return got
        if p >= 0:
            und[p] -= 1
            got = rec(i + 1, chosen, k, inc, und, unpacked)
            und[p] += 1
        else:
            got = rec(i + 1, chosen, k, inc, und, unpacked - 1)
        return got

    inc, und, unpacked = ctx.counters(1, 1)
    got = rec(1, 1, 1, inc, und, unpacked)
    if got is None:
        raise RuntimeError("witness reconstruction failed (value inconsistent)")
    return got


def verify_witness(record, fam):
    """Re-check a record's witness: right host size, fam-free, edge count.

    Edgeless members are ignored (they force value 0 by convention).
    """
    w = record.witness
    if w is None or w.n != record.n or w.r != record.r:
        return False
    real = HyperGraphFamily(fam.r, [m for m in fam.members if m.edges])
    if real.members and contains_member(w, real):
        return False
    if record.is_exact() and len(w.edges) != record.value:
        return False
    return len(w.edges) <= record.value or not record.is_exact()


# -- tables and derived quantities ------------------------------------------------


class TuranTable:
    """In-memory map (family key, n) -> TuranRecord."""

    def __init__(self):
        self._records = {}

    def put(self, record):
        self._records[record.family_key, record.n] = record

    def get(self, fam, n):
        key = family_key(fam)
        rec = self._records.get((key, n))
        if rec is None or not rec.is_exact():
            raise MissingRecordError(f"no exact record for n={n}, fam={key}")
        return rec

    def ex(self, fam, n):
        return self.get(fam, n).value


def singleton(F):
    return HyperGraphFamily(F.r, [F])


@dataclass(frozen=True)
class DerivedQuantities:
    n: int
    delta_n: int
    d_n: Fraction
    pi_hat: Fraction


def derived_quantities(F, table, n):
    """delta(n,F), d(n,F), and the finite density ex(n,F)/C(n,r); exact rationals."""
    fam = singleton(F)
    ex_n = table.ex(fam, n)
    ex_prev = table.ex(fam, n - 1)
    return DerivedQuantities(
        n=n,
        delta_n=ex_n - ex_prev,
        d_n=Fraction(F.r * ex_n, n),
        pi_hat=Fraction(ex_n, comb(n, F.r)),
    )


@dataclass(frozen=True)
class CheckParams:
    """Constants for the boundedness/smoothness style checks."""

    c1: Fraction
    c2: Fraction
    pi: Fraction
    m: int

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c1 and c2 must be positive")
        if not 0 <= self.pi <= 1:
            raise ValueError("pi must lie in [0, 1]")


@dataclass(frozen=True)
class CheckResult:
    n: int
    lhs: Fraction
    rhs: Fraction
    holds: bool
    note: str = ""


def smoothness_check(F, params, table, n_range):
    """Per-n comparison of |delta(n,F) - d(n-1,F)| against the smoothness
    threshold (1-pi)/(8 v(F)) * C(n, r-1).  Reports only; finite n proves
    nothing asymptotic.  Degenerate (r-partite) F is smooth by definition."""
    rows = []
    degenerate = is_r_partite(F)
    fam = singleton(F)
    for n in n_range:
        dq = derived_quantities(F, table, n)
        d_prev = Fraction(F.r * table.ex(fam, n - 1), n - 1)
        lhs = abs(Fraction(dq.delta_n) - d_prev)
        rhs = (1 - params.pi) / (8 * params.m) * comb(n, F.r - 1)
        if degenerate:
            rows.append(CheckResult(n, lhs, rhs, True, "degenerate: vacuous"))
        else:
            rows.append(CheckResult(n, lhs, rhs, lhs <= rhs))
    return rows


def boundedness_falsifier(F, params, n, samples, table, seed=0):
    """Search for an F-free n-vertex r-graph meeting both boundedness premises.

    Any returned graph certifies that (c1,c2)-boundedness fails at this n for
    these constants.  An empty list is not a proof of boundedness.
    """
    fam = singleton(F)
    ex_n = table.ex(fam, n)
    r = F.r
    deg_needed = Fraction(r * ex_n, n) + params.c1 * comb(n - 1, r - 1)
    size_needed = (1 - params.c2) * ex_n
    if deg_needed > comb(n - 1, r - 1):
        return []  # premise unsatisfiable: max degree is capped
    masks, edgeless = _copy_masks(fam, n)
    if edgeless or 1 in [m.bit_count() for m in masks]:
        return []  # no F-free graph has any edge
    E = comb(n, r)
    edges = all_edges_colex(n, r)
    cmax = [[] for _ in range(E)]
    for m in masks:
        top = m.bit_length() - 1
        cmax[top].append(m ^ (1 << top))

    # completion test needs masks grouped by membership, not colex max
    cmax_full = [[] for _ in range(E)]
    for m in masks:
        mm = m
        while mm:
            low = mm & -mm
            cmax_full[low.bit_length() - 1].append(m ^ low)
            mm ^= low

    def greedy(order):
        chosen = 0
        for i in order:
            if all(mw & ~(chosen | (1 << i)) != 0 for mw in cmax_full[i]):
                chosen |= 1 << i
        return chosen

    rng = random.Random(seed)
    candidates = [record_mask(table.get(fam, n).witness, edges)]
    through0 = [i for i in range(E) if 0 in edges[i]]
    others = [i for i in range(E) if 0 not in edges[i]]
    for _ in range(samples):
        a, b = through0[:], others[:]
        rng.shuffle(a)
        rng.shuffle(b)
        candidates.append(greedy(a + b))

    hits = []
    seen = set()
    for mask in candidates:
        if mask in seen:
            continue
        seen.add(mask)
        H = HyperGraph(r, n, [edges[i] for i in range(E) if mask >> i & 1])
        if Fraction(H.max_degree()) < deg_needed:
            continue
        if Fraction(len(H.edges)) < size_needed:
            continue
        if contains_member(H, fam):
            continue  # independent re-check; greedy should never let this pass
        hits.append(H)
    return hits


def record_mask(H, edges):
    rank = {e: i for i, e in enumerate(edges)}
    mask = 0
    for e in H.edges:
        mask |= 1 << rank[e]
    return mask


@dataclass(frozen=True)
class GapResult:
    n: int
    gap: int
    threshold: int
    t_max: int


def edge_sensitivity_gap(F, n, table):
    """gap = ex(n,F) - ex(n,{F} u F+F), the edge-sensitivity threshold
    2 v(F) |F| C(n-1,r-1), and t_max = floor(sqrt(gap/threshold))."""
    from .constructions import edge_sum_family

    fam_F = singleton(F)
    fam_union = fam_F.union(edge_sum_family(F, F))
    gap = table.ex(fam_F, n) - table.ex(fam_union, n)
    if gap < 0:
        raise AssertionError("superfamily monotonicity violated in the table")
    threshold = 2 * F.n * len(F.edges) * comb(n - 1, F.r - 1)
    t_max = isqrt(gap // threshold) if threshold > 0 else 0
    return GapResult(n=n, gap=gap, threshold=threshold, t_max=t_max)


def fact51_check(n, t, r):
    """Certified check of C(n-t, r) >= e^{-1/5} C(n, r) for t <= (n-r)/(5r+1).

    rhs is the conservative rational upper bound C(n,r)/E15_LO; holds means
    the inequality is certified through the interval enclosure of e^{1/5}.
    """
    if n < 1 or r < 1 or t < 0:
        raise ValueError("need n, r >= 1 and t >= 0")
    if t * (5 * r + 1) > n - r:
        raise ValueError(f"precondition t <= (n-r)/(5r+1) violated: t={t}, n={n}, r={r}")
    lhs = Fraction(comb(n - t, r))
    rhs = Fraction(comb(n, r)) / E15_LO
    holds = lhs >= rhs
    note = ""
    if not holds and Fraction(comb(n, r)) / E15_HI <= lhs:
        note = "indeterminate at interval precision"
    return CheckResult(n, lhs, rhs, holds, note)


def fact52_check(F, n, t, table):
    """|d(n,F) - d(n-t,F)| <= 4t C(n-t, r-2), from exact records."""
    if t < 1 or t * F.r > n - F.r:
        raise ValueError(f"precondition 1 <= t <= n/r - 1 violated: t={t}, n={n}, r={F.r}")
    fam = singleton(F)
    d_n = Fraction(F.r * table.ex(fam, n), n)
    d_nt = Fraction(F.r * table.ex(fam, n - t), n - t)
    lhs = abs(d_n - d_nt)
    rhs = Fraction(4 * t * comb(n - t, F.r - 2))
    return CheckResult(n, lhs, rhs, lhs <= rhs)


def lemma53_report(F, n, t, table, pi):
    """Advisory comparison of |ex(n,F) - ex(n-t,F) - t d(n,F)| against the
    smooth-growth envelope; the hypothesis is asymptotic, so this never
    asserts, it only reports."""
    if t < 1 or t > n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    fam = singleton(F)
    ex_n = table.ex(fam, n)
    ex_nt = table.ex(fam, n - t)
    d_n = Fraction(F.r * ex_n, n)
    lhs = abs(Fraction(ex_n - ex_nt) - t * d_n)
    m = F.n
    rhs = (
        (1 - pi) / (8 * m) * t + Fraction(4 * (F.r - 1) * t * t, n)
    ) * comb(n, F.r - 1)
    return CheckResult(n, lhs, rhs, lhs <= rhs, "advisory: hypothesis is asymptotic")
