"""Smooth (c, lambda, w)-structures, xi-labels, well-contained embeddings,
the density-search primitives and the numeric epsilon thresholds.

All inequalities are evaluated with exact fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .core import (
    TR_EXACT_LIMIT,
    PartialDigraph,
    SearchBudgetExceeded,
    Tournament,
    as_fraction,
    bits,
    contains_subtournament,
    is_transitive_set,
    mask_of,
    tr_exact,
    transitive_order,
)
from .keys import ContractedVector, KeyTournament, as_super_nebula, contract, leaf_vector

__all__ = [
    "SmoothStructure",
    "SmoothReport",
    "XiLabeling",
    "Outcome",
    "verify_smooth",
    "check_intersection_bound",
    "find_smooth",
    "xi_labels",
    "verify_well_contained",
    "find_well_contained",
    "key_pattern",
    "plant_key",
    "extract_outcome",
    "density_search",
    "epsilon_thresholds",
    "tr_upper_bound",
]


@dataclass(frozen=True)
class SmoothStructure:
    host: Tournament
    sets: tuple[tuple[int, ...], ...]
    w: tuple[int, ...]
    c: Fraction
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(s) for s in self.sets))
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "lam", as_fraction(self.lam))


@dataclass
class SmoothReport:
    ok: bool
    violations: list[str]
    tr: int
    tr_note: str = ""


def tr_upper_bound(t: Tournament) -> int:
    """``n`` minus a greedy packing of vertex-disjoint directed triangles."""
    free = (1 << t.n) - 1
    size = t.n
    for a in range(t.n):
        if not (free >> a) & 1:
            continue
        for b in bits(t.out[a] & free):
            third = t.out[b] & t.inn(a) & free
            if third:
                c = (third & -third).bit_length() - 1
                free &= ~((1 << a) | (1 << b) | (1 << c))
                size -= 1
                break
    return size


def _tr_for(host: Tournament, tr: int | None, limit: int | None) -> tuple[int, str]:
    if tr is not None:
        return tr, "supplied"
    if limit is None or host.n <= limit:
        return tr_exact(host, limit=None)[0], "exact"
    return tr_upper_bound(host), "upper bound (host above exhaustive limit)"


def verify_smooth(chi: SmoothStructure, tr: int | None = None,
                  tr_limit: int | None = TR_EXACT_LIMIT) -> SmoothReport:
    """Check every size, transitivity and smoothness inequality of ``chi``.

    ``tr`` may be supplied; otherwise it is computed exactly when the host is
    within ``tr_limit`` and replaced by a sound upper bound when it is not.
    """
    t = chi.host
    v: list[str] = []
    if len(chi.sets) != len(chi.w):
        v.append(f"{len(chi.sets)} sets for a pattern of length {len(chi.w)}")
    seen: set[int] = set()
    for i, s in enumerate(chi.sets):
        if not s:
            v.append(f"S{i + 1} is empty")
        for x in s:
            if not 0 <= x < t.n:
                v.append(f"S{i + 1} has vertex {x} outside the host")
            if x in seen:
                v.append(f"vertex {x} lies in two sets")
            seen.add(x)
    if v:
        return SmoothReport(False, v, -1, "")
    trv, note = _tr_for(t, tr, tr_limit)
    n = t.n
    for i, (s, wi) in enumerate(zip(chi.sets, chi.w)):
        if wi == 0:
            if Fraction(len(s)) < chi.c * n:
                v.append(f"S{i + 1} is linear but |S{i + 1}|={len(s)} < c*n={chi.c * n}")
        else:
            if not is_transitive_set(t, s):
                v.append(f"S{i + 1} is marked transitive but is not")
            if Fraction(len(s)) < chi.c * trv:
                v.append(f"S{i + 1} is transitive but |S{i + 1}|={len(s)} < c*tr={chi.c * trv}")
    bound = 1 - chi.lam
    masks = [mask_of(s) for s in chi.sets]
    for i, j in combinations(range(len(chi.sets)), 2):
        si, sj = chi.sets[i], chi.sets[j]
        for x in si:
            d = Fraction((t.out[x] & masks[j]).bit_count(), len(sj))
            if d < bound:
                v.append(f"vertex {x} of S{i + 1} has d({{{x}}},S{j + 1})={d} < 1-lambda={bound}")
        for y in sj:
            d = Fraction(sum(1 for x in si if t.has_arc(x, y)), len(si))
            if d < bound:
                v.append(f"vertex {y} of S{j + 1} has d(S{i + 1},{{{y}}})={d} < 1-lambda={bound}")
    return SmoothReport(not v, v, trv, note)


def check_intersection_bound(chi: SmoothStructure, j: int, s_star: Iterable[int],
                             outside: Iterable[int], gamma) -> tuple[set[int], bool]:
    """Intersect the neighbourhoods in ``s_star`` of the vertices of ``outside``.

    ``j`` is the 0-based index of the target set.  A vertex ``x`` from an
    earlier set contributes its out-neighbours in ``s_star``, one from a later
    set its in-neighbours.  Returns the intersection and whether its size is at
    least ``(1 - k*lambda/gamma) |s_star|``.
    """
    t = chi.host
    gamma = as_fraction(gamma)
    sj = set(chi.sets[j])
    star = set(s_star)
    if not star <= sj:
        raise ValueError("s_star must be a subset of the target set")
    if gamma <= 0 or Fraction(len(star)) < gamma * len(sj):
        raise ValueError("s_star is smaller than gamma times the target set")
    where = {x: i for i, s in enumerate(chi.sets) for x in s}
    outside = list(outside)
    inter = set(star)
    for x in outside:
        i = where.get(x)
        if i is None or i == j:
            raise ValueError(f"vertex {x} must come from a set other than S{j + 1}")
        if i < j:
            inter &= {y for y in star if t.has_arc(x, y)}
        else:
            inter &= {y for y in star if t.has_arc(y, x)}
    k = len(outside)
    holds = Fraction(len(inter)) >= (1 - k * chi.lam / gamma) * len(star)
    return inter, holds


# ---------------------------------------------------------------------------
# search for smooth structures


def _min_sizes(n: int, trv: int, c: Fraction, w: Sequence[int]) -> list[int]:
    return [max(1, math.ceil(c * (n if wi == 0 else trv))) for wi in w]


def _pair_ok(t: Tournament, si: Sequence[int], sj: Sequence[int], bound: Fraction) -> bool:
    mj = mask_of(sj)
    for x in si:
        if Fraction((t.out[x] & mj).bit_count(), len(sj)) < bound:
            return False
    for y in sj:
        if Fraction(sum(1 for x in si if t.has_arc(x, y)), len(si)) < bound:
            return False
    return True


def _heuristic(t: Tournament, w, mins, bound, trv):
    """Cut a score ordering into consecutive blocks and repair them."""
    order = sorted(range(t.n), key=lambda v: (-t.out[v].bit_count(), v))
    k = len(w)
    n = t.n

    def shrink(block, wi, need):
        if wi == 1:
            sub = t.induced(block)
            size, wit = tr_exact(sub, limit=None)
            block = [block[i] for i in wit]
        return block if len(block) >= need else None

    def cuts(start, idx):
        if idx == k:
            yield []
            return
        rest_need = sum(mins[idx + 1:])
        for end in range(start + mins[idx], n - rest_need + 1):
            for tail in cuts(end, idx + 1):
                yield [(start, end)] + tail

    tried = 0
    for cut in cuts(0, 0):
        tried += 1
        if tried > 2000:
            break
        sets = []
        for (a, b), wi, need in zip(cut, w, mins):
            blk = shrink(order[a:b], wi, need)
            if blk is None:
                break
            sets.append(blk)
        else:
            sets = _repair(t, sets, w, mins, bound)
            if sets is not None:
                return sets
    return None


def _repair(t, sets, w, mins, bound):
    sets = [list(s) for s in sets]
    for _ in range(t.n + 1):
        worst = None
        for i, j in combinations(range(len(sets)), 2):
            mj, si, sj = mask_of(sets[j]), sets[i], sets[j]
            for x in si:
                d = Fraction((t.out[x] & mj).bit_count(), len(sj))
                if d < bound and (worst is None or d < worst[0]):
                    worst = (d, i, x)
            for y in sj:
                d = Fraction(sum(1 for x in si if t.has_arc(x, y)), len(si))
                if d < bound and (worst is None or d < worst[0]):
                    worst = (d, j, y)
        if worst is None:
            return sets
        _, i, x = worst
        sets[i].remove(x)
        if len(sets[i]) < mins[i]:
            return None
    return None


def _exhaustive(t, w, mins, bound, max_nodes):
    n = t.n
    nodes = 0
    chosen: list[list[int]] = []

    def subsets(avail: int, need: int, wi: int):
        vs = list(bits(avail))
        for size in range(need, len(vs) + 1):
            for combo in combinations(vs, size):
                if wi == 1 and not is_transitive_set(t, combo):
                    continue
                yield list(combo)

    def extend(i: int, used: int):
        nonlocal nodes
        if i == len(w):
            return True
        avail = ((1 << n) - 1) & ~used
        for s in subsets(avail, mins[i], w[i]):
            nodes += 1
            if nodes > max_nodes:
                raise SearchBudgetExceeded(f"smooth-structure search exceeded {max_nodes} nodes")
            if all(_pair_ok(t, prev, s, bound) for prev in chosen):
                chosen.append(s)
                if extend(i + 1, used | mask_of(s)):
                    return True
                chosen.pop()
        return False

    return [list(s) for s in chosen] if extend(0, 0) else None


def find_smooth(t: Tournament, c, lam, w: Sequence[int], tr: int | None = None,
                exhaustive_limit: int = 12, max_nodes: int = 1_000_000) -> SmoothStructure | None:
    """Best-effort search for a smooth (c, lambda, w)-structure.

    A heuristic over cuts of the score ordering runs first; for hosts up to
    ``exhaustive_limit`` vertices an exhaustive backtracking search follows.
    ``None`` from the heuristic alone is not a proof of non-existence.
    """
    c, lam = as_fraction(c), as_fraction(lam)
    w = tuple(int(x) for x in w)
    trv, _ = _tr_for(t, tr, TR_EXACT_LIMIT)
    mins = _min_sizes(t.n, trv, c, w)
    if sum(mins) > t.n:
        return None
    bound = 1 - lam
    sets = _heuristic(t, w, mins, bound, trv)
    if sets is None and t.n <= exhaustive_limit:
        sets = _exhaustive(t, w, mins, bound, max_nodes)
    if sets is None:
        return None
    sets = [transitive_order(t, s) if wi == 1 else sorted(s) for s, wi in zip(sets, w)]
    chi = SmoothStructure(t, tuple(tuple(s) for s in sets), w, c, lam)
    assert verify_smooth(chi, tr=trv).ok
    return chi


# ---------------------------------------------------------------------------
# xi labels and well-containment


@dataclass
class XiLabeling:
    label: dict[int, int]
    blocks: dict[int, list[list[int]]] = field(default_factory=dict)
    unlabeled: list[int] = field(default_factory=list)

    def vertices_with(self, j: int) -> list[int]:
        return [v for v, lab in self.label.items() if lab == j]


def _delta_map(w: Sequence[int], delta) -> dict[int, int]:
    if isinstance(delta, ContractedVector):
        delta = delta.multiplicity
    d = {int(k): int(v) for k, v in dict(delta).items()}
    ones = {i for i, x in enumerate(w) if x == 1}
    if set(d) != ones:
        raise ValueError(f"delta is defined on {sorted(d)} but w has 1s at {sorted(ones)}")
    if any(v < 1 for v in d.values()):
        raise ValueError("delta values must be positive")
    return d


def xi_labels(chi: SmoothStructure, delta) -> XiLabeling:
    """Labels 1, 2, ... along the structure; ``delta`` is keyed by 0-based index into ``w``.

    A linear set gets one label.  A transitive set, in source-first order, is
    cut into ``delta`` blocks of ``floor(|S|/delta)`` vertices with consecutive
    labels; vertices past the last block stay unlabeled.
    """
    d = _delta_map(chi.w, delta)
    label: dict[int, int] = {}
    blocks: dict[int, list[list[int]]] = {}
    unl: list[int] = []
    base = 0
    for i, (s, wi) in enumerate(zip(chi.sets, chi.w)):
        if wi == 0:
            for v in s:
                label[v] = base + 1
            base += 1
            continue
        order = transitive_order(chi.host, s)
        m = len(order) // d[i]
        blocks[i] = []
        for j in range(1, d[i] + 1):
            blk = order[(j - 1) * m: j * m]
            blocks[i].append(blk)
            for v in blk:
                label[v] = base + j
        unl.extend(order[d[i] * m:])
        base += d[i]
    return XiLabeling(label, blocks, unl)


def verify_well_contained(chi: SmoothStructure, source: PartialDigraph, f: Mapping[int, int],
                          delta, expected: Mapping[int, int] | None = None) -> bool:
    """Injective, arc-preserving, and source vertex ``j`` lands on label ``j+1``.

    Source vertices are taken in position order (vertex ``j`` sits at position
    ``j``); ``expected`` may override the required label per source vertex.
    """
    if source.n == 0:
        return not f
    xi = xi_labels(chi, delta).label
    if sorted(f) != list(range(source.n)):
        return False
    imgs = [f[j] for j in range(source.n)]
    if len(set(imgs)) != len(imgs):
        return False
    for j, x in enumerate(imgs):
        want = expected[j] if expected is not None else j + 1
        if xi.get(x) != want:
            return False
    t = chi.host
    return all(t.has_arc(f[u], f[v]) for u, v in source.arcs())


def find_well_contained(chi: SmoothStructure, source: PartialDigraph, delta,
                        max_nodes: int = 1_000_000) -> dict[int, int] | None:
    """Backtracking search for a well-contained copy of ``source``."""
    lab = xi_labels(chi, delta)
    t = chi.host
    q = source.n
    pools = []
    for j in range(q):
        pools.append(lab.vertices_with(j + 1))
    if any(not p for p in pools):
        return None
    src_in = [mask_of(u for u in range(q) if source.has_arc(u, v)) for v in range(q)]
    f: dict[int, int] = {}
    used: set[int] = set()
    nodes = 0

    def extend(j: int) -> bool:
        nonlocal nodes
        if j == q:
            return True
        for x in pools[j]:
            if x in used:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise SearchBudgetExceeded(f"embedding search exceeded {max_nodes} nodes")
            ok = True
            for u in range(j):
                if source.has_arc(u, j) and not t.has_arc(f[u], x):
                    ok = False
                    break
                if (src_in[u] >> j) & 1 and not t.has_arc(x, f[u]):
                    ok = False
                    break
            if ok:
                f[j] = x
                used.add(x)
                if extend(j + 1):
                    return True
                used.discard(x)
                del f[j]
        return False

    return dict(f) if extend(0) else None


def key_pattern(key: KeyTournament) -> tuple[tuple[int, ...], dict[int, int], PartialDigraph]:
    """``(w, delta, mutant)`` for a key: the contracted leaf vector, its run
    lengths, and the mutant with vertex ``j`` the key vertex at position ``j``."""
    w_full = as_super_nebula(key.witness)
    cv = contract(leaf_vector(w_full))
    return cv.bits, dict(cv.multiplicity), key.mutant().relabel(key.ordering)


def plant_key(key: KeyTournament, rng: np.random.Generator, block: int = 2, linear: int = 2,
              c=Fraction(1, 100), lam=Fraction(1, 2)):
    """A host with a smooth structure matching ``key`` and a planted mutant copy.

    Linear sets hold ``linear`` vertices, transitive sets ``delta*block``;
    arcs between sets point forward except between planted vertices, which
    copy the key and orient each removed forward arc by a fair coin
    (forward when both ends share a transitive set).
    Returns ``(chi, planted)`` with ``planted[j]`` the host image of position ``j``.
    """
    w, delta, mut = key_pattern(key)
    k_pos = key.tournament.relabel(key.ordering)
    sets: list[list[int]] = []
    nxt = 0
    for i, wi in enumerate(w):
        size = linear if wi == 0 else delta[i] * block
        sets.append(list(range(nxt, nxt + size)))
        nxt += size
    n = nxt
    where = {x: i for i, s in enumerate(sets) for x in s}
    adj = np.zeros((n, n), dtype=bool)
    for i, s in enumerate(sets):
        if w[i] == 1:
            for a, b in combinations(s, 2):
                adj[a, b] = True
        else:
            for a, b in combinations(s, 2):
                if rng.integers(0, 2):
                    adj[a, b] = True
                else:
                    adj[b, a] = True
    for a in range(n):
        for b in range(n):
            if where[a] < where[b]:
                adj[a, b] = True
    cv = contract(leaf_vector(as_super_nebula(key.witness)))
    run_start: dict[int, int] = {}
    for p, ci in enumerate(cv.source):
        run_start.setdefault(ci, p)
    planted = {}
    for p, ci in enumerate(cv.source):
        if w[ci] == 0:
            planted[p] = sets[ci][int(rng.integers(0, len(sets[ci])))]
        else:
            j = p - run_start[ci]
            blk = sets[ci][j * block:(j + 1) * block]
            planted[p] = blk[int(rng.integers(0, len(blk)))]
    for p, q in combinations(range(k_pos.n), 2):
        a, b = planted[p], planted[q]
        inside_run = where[a] == where[b] and w[where[a]] == 1
        if mut.has_arc(p, q) or mut.has_arc(q, p):
            fwd = mut.has_arc(p, q)
        else:
            # a removed arc between two leaves of one run is forced by transitivity
            fwd = inside_run or bool(rng.integers(0, 2))
        if inside_run and not fwd:
            raise AssertionError("a key arc inside a leaf run points backward")
        adj[a, b], adj[b, a] = fwd, not fwd
    rows = [0] * n
    for a in range(n):
        for b in np.nonzero(adj[a])[0]:
            rows[a] |= 1 << int(b)
    host = Tournament(n, rows)
    chi = SmoothStructure(host, tuple(tuple(s) for s in sets), w, c, lam)
    return chi, planted


# ---------------------------------------------------------------------------
# outcome extraction


@dataclass
class Outcome:
    """A copy of one of the two targets in the host: ``mapping`` sends each
    target vertex to a host vertex."""

    target: str
    mapping: dict[int, int]

    def vertices(self) -> list[int]:
        return [self.mapping[i] for i in sorted(self.mapping)]


def extract_outcome(host: Tournament, f: Mapping[int, int], key: KeyTournament,
                    n_t: Tournament | None = None, g_t: Tournament | None = None,
                    g_ordering: Sequence[int] | None = None) -> Outcome:
    """Read off which target the embedded mutant completes to.

    ``f`` maps key positions to host vertices.  For an ``N (x) G`` key: if every
    removed arc is forward in the host the base copy is ``N``; otherwise the
    first backward one picks a gadget whose vertices form ``G``.  For a GK6 key:
    if every gadget has d3 -> d1 or d6 -> d4 the survivors form ``H``,
    otherwise a gadget with both forward is a canonical K6.
    """
    pos = {v: i for i, v in enumerate(key.ordering)}
    img = {v: f[pos[v]] for v in key.ordering}
    if key.flavor == "nebula-galaxy":
        for e_index, (a, b) in enumerate(key.removed_forward_arcs):
            if host.has_arc(img[b], img[a]):
                gd = key.gadgets[e_index]
                alpha = tuple(key.pattern_ordering) if g_ordering is None else tuple(g_ordering)
                inv = {gv: kv for gv, kv in gd.vertex_map.items()}
                tri_g = [v for v in alpha if v not in inv]
                mapping = {gv: img[kv] for gv, kv in inv.items()}
                for gv, kv in zip(tri_g, gd.triplet):
                    mapping[gv] = img[kv]
                return Outcome("G", mapping)
        return Outcome("N", {v: img[v] for v in key.base_vertices})
    if key.flavor == "gk6":
        swap = {}
        for gd in key.gadgets:
            d = [gd.vertex_map[i] for i in range(1, 7)]
            if host.has_arc(img[d[5]], img[d[3]]):
                continue
            if host.has_arc(img[d[2]], img[d[0]]):
                swap[d[3]] = d[2]
                continue
            return Outcome("K6", {i: img[v] for i, v in enumerate(d)})
        return Outcome("H", {v: img[swap.get(v, v)] for v in key.base_vertices})
    raise ValueError(f"unknown key flavor {key.flavor!r}")


# ---------------------------------------------------------------------------
# density-search primitives


def _matched_pairs(t: Tournament, x: Sequence[int], y: Sequence[int]):
    if set(x) & set(y):
        raise ValueError("X and Y must be disjoint")
    g = nx.Graph()
    left = [("y", v) for v in y]
    g.add_nodes_from(left, bipartite=0)
    g.add_nodes_from((("x", v) for v in x), bipartite=1)
    for yv in y:
        for xv in x:
            if t.has_arc(yv, xv):
                g.add_edge(("y", yv), ("x", xv))
    match = nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)
    pairs = sorted((m[1], v[1]) for v, m in match.items() if v[0] == "y")
    return [(xv, yv) for xv, yv in pairs]


def _first_each(t: Tournament, groups: Sequence[Sequence[int]], test) -> list[int] | None:
    out = []
    for grp in groups:
        hit = next((s for s in grp if test(s)), None)
        if hit is None:
            return None
        out.append(hit)
    return out


def density_search(t: Tournament, mode: str, **args):
    """Unconditional searches for the density-argument witnesses; ``None`` when absent.

    * ``matched_pairs(X, Y)``: a largest list of disjoint pairs ``(x, y)`` with ``y -> x``.
    * ``linked_vertex(A, S, P)``: ``(g, s, p)`` with ``g -> s_i`` and ``p_i -> g``.
    * ``linked_pair(A1, A2, S, m, variant)``: the three vertex patterns with
      one vertex from each of ``A1``, ``A2`` and every ``S_i``.
    * ``crossing_arc(A, G)``: an arc from ``A`` into ``G`` and one back.
    """
    if mode == "matched_pairs":
        return _matched_pairs(t, args["X"], args["Y"])
    if mode == "linked_vertex":
        s_sets, p_sets = args.get("S", ()), args.get("P", ())
        for g in args["A"]:
            s = _first_each(t, s_sets, lambda v: t.has_arc(g, v))
            p = _first_each(t, p_sets, lambda v: t.has_arc(v, g))
            if s is not None and p is not None:
                return g, s, p
        return None
    if mode == "linked_pair":
        s_sets = args["S"]
        m = args["m"]
        variant = args.get("variant", 1)
        head, tail = s_sets[:m], s_sets[m:]
        for a in args["A1"]:
            for b in args["A2"]:
                if variant == 1:
                    # b -> a, head -> a, b -> tail
                    if not t.has_arc(b, a):
                        continue
                    got = (_first_each(t, head, lambda v: t.has_arc(v, a)),
                           _first_each(t, tail, lambda v: t.has_arc(b, v)))
                elif variant == 2:
                    # b -> a, b -> head, a -> tail
                    if not t.has_arc(b, a):
                        continue
                    got = (_first_each(t, head, lambda v: t.has_arc(b, v)),
                           _first_each(t, tail, lambda v: t.has_arc(a, v)))
                elif variant == 3:
                    # b -> a, head -> a, tail -> b
                    if not t.has_arc(b, a):
                        continue
                    got = (_first_each(t, head, lambda v: t.has_arc(v, a)),
                           _first_each(t, tail, lambda v: t.has_arc(v, b)))
                else:
                    raise ValueError("variant must be 1, 2 or 3")
                if got[0] is not None and got[1] is not None:
                    return a, b, got[0] + got[1]
        return None
    if mode == "crossing_arc":
        a_set, g_set = args["A"], args["G"]
        into = next(((a, g) for a in a_set for g in g_set if t.has_arc(a, g)), None)
        back = next(((g, a) for a in a_set for g in g_set if t.has_arc(g, a)), None)
        if into is None or back is None:
            return None
        return into, back
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# thresholds


def _log(base: Fraction, x: Fraction) -> float:
    if not 0 < base < 1:
        raise ValueError(f"logarithm base {base} must lie in (0,1)")
    if x <= 0:
        return math.inf
    return math.log(x) / math.log(base)


def epsilon_thresholds(c=None, f=None, fs: Sequence = (), ls: Sequence = (),
                       t: int | None = None, delta: int | None = None, h: int | None = None) -> dict:
    """Evaluate the named numeric bounds that apply to the given parameters.

    Logarithmic bounds are floats (``inf`` when the argument reaches 0); the
    lambda bounds are exact fractions.
    """
    out: dict = {}
    if c is not None:
        c = as_fraction(c)
        if not 0 < c < 1:
            raise ValueError("c must lie in (0,1)")
        out["matched_pairs"] = _log(c / 2, Fraction(1, 2))
        if f is not None:
            f = as_fraction(f)
            if not 0 < f <= 1:
                raise ValueError("f must lie in (0,1]")
            out["crossing_arc"] = _log(c, 1 - f)
            if t is not None:
                out["linked_pair"] = min(_log(c / (2 * t), 1 - f), _log(c / 4, Fraction(1, 2)))
        if fs or ls:
            k = len(fs) + len(ls)
            vals = [as_fraction(x) for x in list(fs) + list(ls)]
            if any(not 0 < x < 1 for x in vals):
                raise ValueError("every f_i and l_i must lie in (0,1)")
            out["linked_vertex"] = min(_log(c / (2 * k), 1 - x) for x in vals)
    if delta is not None:
        if delta < 1:
            raise ValueError("delta must be positive")
        out["lambda_key"] = Fraction(1, (2 * delta) ** (delta + 3))
    if h is not None:
        if h < 1:
            raise ValueError("h must be positive")
        out["lambda_gk6"] = Fraction(1, (4 * h) ** (h + 4))
    return out
