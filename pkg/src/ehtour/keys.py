"""Leaf vectors, bad triplets, mutants and key tournaments.

Two key constructions are provided:

* ``build_key`` glues one copy of ``G`` minus its triangle onto every bad
  triplet of a regular super nebula ``N``;
* ``build_key_GK6`` replaces every triangle of a regular central triangular
  galaxy ``H`` by a K6 gadget, undone by ``operation_K6``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .core import PartialDigraph, Tournament, bits, check_ordering, positions_of
from .recognize import (
    K6_BACKWARD,
    DecompositionWitness,
    K6Witness,
    StarWitness,
    SuperNebulaWitness,
    TriangleWitness,
    evaluate_witness,
    find_K6_instances,
    get_grammar,
    recognize_under,
)

__all__ = [
    "LeafVector",
    "ContractedVector",
    "Restriction",
    "BadTriplet",
    "Gadget",
    "KeyTournament",
    "KeyReport",
    "KeyConstructionError",
    "leaf_vector",
    "as_super_nebula",
    "contract",
    "restrict_structure",
    "bad_triplets",
    "forward_arcs",
    "mutant",
    "reversal_set",
    "build_key",
    "verify_key",
    "operation_K6",
    "apply_operation_all",
    "build_key_GK6",
    "verify_key_GK6",
    "completions_contain",
]


class KeyConstructionError(ValueError):
    """The requested key cannot be built; the message names the failed clause."""


# ---------------------------------------------------------------------------
# leaf vectors


@dataclass(frozen=True)
class LeafVector:
    bits: tuple[int, ...]
    ordering: tuple[int, ...] = ()

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class ContractedVector:
    """A contracted 0/1 vector.

    ``multiplicity[j]`` is the length of the run of 1s that entry ``j`` replaced;
    ``source[i]`` is the contracted index of source entry ``i``.
    """

    bits: tuple[int, ...]
    multiplicity: dict[int, int]
    source: tuple[int, ...] = ()

    @property
    def delta(self) -> dict[int, int]:
        return dict(self.multiplicity)


def _expanded_parts(w: DecompositionWitness):
    """Stars and super 2-nebulas of a witness, K6 gadgets split into both."""
    stars, sigmas = [], []
    for p in w.parts:
        if isinstance(p, StarWitness):
            stars.append(p)
        elif isinstance(p, SuperNebulaWitness):
            sigmas.append(p)
        elif isinstance(p, K6Witness):
            sigmas.append(p.sigma())
            stars.append(p.star())
        elif isinstance(p, TriangleWitness):
            raise ValueError("leaf vectors are defined for (super) nebulas, not triangles")
    return stars, sigmas


def as_super_nebula(w: DecompositionWitness) -> DecompositionWitness:
    """The same decomposition with every K6 gadget split into its two parts."""
    stars, sigmas = _expanded_parts(w)
    parts = sorted(stars + sigmas, key=lambda p: min(p.positions))
    name = "regular-super-nebula" if not w.singletons else "super-nebula"
    return DecompositionWitness(name, w.ordering, tuple(parts), w.singletons)


def leaf_vector(w: DecompositionWitness) -> LeafVector:
    """Entry ``i`` is 1 iff the vertex at position ``i`` is a leaf of a star or super 2-nebula."""
    stars, sigmas = _expanded_parts(w)
    leaves = set()
    for p in stars + sigmas:
        leaves.update(p.leaves)
    return LeafVector(tuple(1 if v in leaves else 0 for v in w.ordering), tuple(w.ordering))


def contract(s: LeafVector | Sequence[int]) -> ContractedVector:
    """Replace every run of consecutive 1s by a single 1."""
    b = s.bits if isinstance(s, LeafVector) else tuple(s)
    out: list[int] = []
    mult: dict[int, int] = {}
    src: list[int] = []
    for x in b:
        if x not in (0, 1):
            raise ValueError("leaf vectors are 0/1")
        if x == 1 and out and out[-1] == 1:
            mult[len(out) - 1] += 1
        else:
            out.append(x)
            if x == 1:
                mult[len(out) - 1] = 1
        src.append(len(out) - 1)
    return ContractedVector(tuple(out), mult, tuple(src))


@dataclass(frozen=True)
class Restriction:
    tournament: Tournament
    vertices: tuple[int, ...]
    leaf: LeafVector
    contracted: ContractedVector


def restrict_structure(t: Tournament, w: DecompositionWitness, selector: str, k: int) -> Restriction:
    """The sub-structure on the first ``k`` super 2-nebulas or the first ``k`` stars.

    Its leaf vector is the restriction of the full one.  Its contraction merges
    consecutive 1s only when they come from the same run of the full vector.
    """
    stars, sigmas = _expanded_parts(w)
    pool = {"sigma": sigmas, "star": stars}.get(selector)
    if pool is None:
        raise ValueError("selector must be 'sigma' or 'star'")
    if not 0 <= k <= len(pool):
        raise ValueError(f"k={k} out of range 0..{len(pool)}")
    chosen = set()
    for p in pool[:k]:
        chosen.update(p.vertices)
    full = leaf_vector(w)
    runs = contract(full).source
    idx = [i for i, v in enumerate(w.ordering) if v in chosen]
    verts = tuple(w.ordering[i] for i in idx)
    sub_bits = tuple(full.bits[i] for i in idx)
    out: list[int] = []
    mult: dict[int, int] = {}
    src: list[int] = []
    prev = None
    for i, b in zip(idx, sub_bits):
        if b == 1 and out and out[-1] == 1 and prev is not None and runs[prev] == runs[i] \
                and full.bits[prev] == 1:
            mult[len(out) - 1] += 1
        else:
            out.append(b)
            if b == 1:
                mult[len(out) - 1] = 1
        src.append(len(out) - 1)
        prev = i
    return Restriction(t.induced(verts), verts, LeafVector(sub_bits, verts),
                       ContractedVector(tuple(out), mult, tuple(src)))


# ---------------------------------------------------------------------------
# bad triplets and mutants


@dataclass(frozen=True)
class BadTriplet:
    vertices: tuple[int, int, int]
    positions: tuple[int, int, int]
    source: str
    forward_arc: tuple[int, int]


def _require_regular_super_nebula(t: PartialDigraph, w: DecompositionWitness):
    if w.singletons:
        raise ValueError("bad triplets need a regular structure (no singletons); "
                         "extend it to a regular super nebula first")
    if any(isinstance(p, TriangleWitness) for p in w.parts):
        raise ValueError("bad triplets are defined for super nebulas, not triangular structures")
    errs = evaluate_witness(t, w)
    if errs:
        raise ValueError("witness does not check out: " + "; ".join(errs[:3]))


def bad_triplets(t: PartialDigraph, w: DecompositionWitness) -> list[BadTriplet]:
    """All bad triplets in lexicographic order of their positions.

    A star contributes ``{center, a, b}`` for leaves ``a, b`` lying in different
    runs of the leaf vector; the super 2-nebulas contribute every triple of
    their vertices spanning exactly two backward arcs.
    """
    _require_regular_super_nebula(t, w)
    pos = positions_of(w.ordering)
    runs = contract(leaf_vector(w)).source
    stars, sigmas = _expanded_parts(w)
    found: dict[tuple[int, int, int], str] = {}
    for q in stars:
        for a, b in combinations(q.leaves, 2):
            if runs[pos[a]] != runs[pos[b]]:
                trip = tuple(sorted((q.center, a, b), key=lambda v: pos[v]))
                found.setdefault(trip, "star")
    sig_vertices = sorted({v for s in sigmas for v in s.vertices}, key=lambda v: pos[v])
    for trip in combinations(sig_vertices, 3):
        backs = sum(1 for x, y in combinations(trip, 2) if t.has_arc(y, x))
        if backs == 2:
            found.setdefault(trip, "sigma")
    out = []
    for trip in sorted(found, key=lambda tr: tuple(pos[v] for v in tr)):
        fw = [(x, y) for x, y in combinations(trip, 2) if t.has_arc(x, y)]
        if len(fw) != 1:
            raise ValueError(f"triplet {trip} has {len(fw)} forward arcs; recogniser bug")
        out.append(BadTriplet(trip, tuple(pos[v] for v in trip), found[trip], fw[0]))
    return out


def forward_arcs(t: PartialDigraph, w: DecompositionWitness) -> list[tuple[int, int]]:
    return [b.forward_arc for b in bad_triplets(t, w)]


def mutant(t: PartialDigraph, w: DecompositionWitness) -> PartialDigraph:
    """``t`` with the forward arc of every bad triplet deleted."""
    return PartialDigraph(t.n, t.out).without_arcs(forward_arcs(t, w))


def reversal_set(g: Tournament, alpha: Sequence[int], grammar: str = "regular-delta-galaxy"
                 ) -> list[Tournament]:
    """The three tournaments obtained by flipping one arc of the triangle of ``g``."""
    w = recognize_under(g, alpha, grammar)
    if w is None or len(w.triangles) != 1:
        raise ValueError(f"input is not a {grammar} under the given ordering")
    tri = w.triangles[0]
    out = []
    for x, y in combinations(tri.vertices, 2):
        arc = (x, y) if g.has_arc(x, y) else (y, x)
        out.append(g.reverse_arc(*arc))
    return out


# ---------------------------------------------------------------------------
# the N (x) G key


@dataclass(frozen=True)
class Gadget:
    """Vertices added for one bad triplet (or one triangle, for GK6 keys).

    ``vertex_map`` sends each copied source vertex to its label in the key.
    """

    triplet: tuple[int, ...]
    vertices: tuple[int, ...]
    vertex_map: dict[int, int]
    forward_arcs: tuple[tuple[int, int], ...]


@dataclass
class KeyTournament:
    flavor: str
    tournament: Tournament
    ordering: tuple[int, ...]
    base_vertices: tuple[int, ...]
    gadgets: list[Gadget]
    removed_forward_arcs: list[tuple[int, int]]
    witness: DecompositionWitness
    source_ordering: tuple[int, ...] = ()
    pattern_ordering: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return self.tournament.n

    def mutant(self) -> PartialDigraph:
        return PartialDigraph(self.n, self.tournament.out).without_arcs(self.removed_forward_arcs)

    def relabeled(self) -> tuple[Tournament, list[int]]:
        """The key with vertex ``i`` the one at position ``i``, and the old labels."""
        return self.tournament.relabel(self.ordering), list(self.ordering)

    def sidecar(self) -> dict:
        return {
            "flavor": self.flavor,
            "n": self.n,
            "ordering": list(self.ordering),
            "base_vertices": list(self.base_vertices),
            "gadgets": [{"triplet": list(g.triplet), "vertices": list(g.vertices),
                         "vertex_map": {str(k): v for k, v in g.vertex_map.items()},
                         "forward_arcs": [list(a) for a in g.forward_arcs]}
                        for g in self.gadgets],
            "removed_forward_arcs": [list(a) for a in self.removed_forward_arcs],
            "witness": self.witness.to_dict(),
        }


@dataclass
class KeyReport:
    bullets: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, msg: str = "") -> None:
        self.bullets.append((name, ok, msg))

    @property
    def ok(self) -> bool:
        return all(b[1] for b in self.bullets)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "bullets": [{"name": n, "ok": o, "message": m}
                                           for n, o, m in self.bullets]}


def _gaps(alpha: Sequence[int], tri: TriangleWitness) -> list[list[int]]:
    """Vertices of ``alpha`` outside the triangle, split by the triangle's positions."""
    gaps: list[list[int]] = [[], [], [], []]
    g = 0
    for v in alpha:
        if v in tri.vertices:
            g += 1
        else:
            gaps[g].append(v)
    return gaps


def build_key(n_t: Tournament, n_w: DecompositionWitness,
              g_t: Tournament, g_w: DecompositionWitness) -> KeyTournament:
    """The key ``N (x) G`` under its ordering.

    Labels ``0..|N|-1`` are the vertices of ``N``; gadget ``i`` occupies the
    next ``|G|-3`` labels in the order of ``G``'s ordering.  Each gadget block
    (the part of ``G`` minus its triangle inside one gap of the triangle) is
    inserted contiguously into the matching gap of its triplet, at the leftmost
    slot that keeps leaf runs intact and keeps star centres out of super
    2-nebula leaf spans.
    """
    if n_w.singletons:
        raise KeyConstructionError("N must be a regular super nebula (no singletons)")
    errs = evaluate_witness(n_t, n_w, "regular-super-nebula")
    if errs:
        raise KeyConstructionError("N is not a regular super nebula under its ordering: " + errs[0])
    if g_w.singletons or len(g_w.triangles) != 1:
        raise KeyConstructionError("G must be a regular delta-galaxy")
    errs = evaluate_witness(g_t, g_w, "regular-delta-galaxy")
    if errs:
        raise KeyConstructionError("G is not a regular delta-galaxy under its ordering: " + errs[0])

    theta = tuple(n_w.ordering)
    alpha = tuple(g_w.ordering)
    n1, n2 = n_t.n, g_t.n
    pos_n = positions_of(theta)
    trip = bad_triplets(n_t, n_w)
    tri = g_w.triangles[0]
    gaps = _gaps(alpha, tri)
    rest = [v for v in alpha if v not in tri.vertices]
    g_centers = set()
    for p in g_w.stars:
        g_centers.add(p.center)

    s = leaf_vector(n_w).bits
    sig_spans = []
    for sg in _expanded_parts(n_w)[1]:
        ps = [pos_n[v] for v in sg.leaves]
        sig_spans.append((min(ps), max(ps)))

    def slot_ok(slot: int, has_center: bool) -> bool:
        # slot p sits between positions p-1 and p of theta
        if not has_center:
            return True
        if 0 < slot < n1 and s[slot - 1] == 1 and s[slot] == 1:
            return False
        return not any(lo <= slot - 1 and slot <= hi for lo, hi in sig_spans)

    inserts: dict[int, list[int]] = {}
    gadgets: list[Gadget] = []
    next_label = n1
    for b in trip:
        tp = b.positions
        ranges = [(0, tp[0]), (tp[0] + 1, tp[1]), (tp[1] + 1, tp[2]), (tp[2] + 1, n1)]
        vmap = {}
        for v in rest:
            vmap[v] = next_label
            next_label += 1
        for gi, block in enumerate(gaps):
            if not block:
                continue
            has_center = any(v in g_centers for v in block)
            lo, hi = ranges[gi]
            slot = next((p for p in range(lo, hi + 1) if slot_ok(p, has_center)), None)
            if slot is None:
                raise KeyConstructionError(
                    f"no slot in gap {gi} of triplet {b.vertices} keeps the key a regular super "
                    "nebula with unchanged bad triplets (bullets 1 and 4)")
            inserts.setdefault(slot, []).extend(vmap[v] for v in block)
        gadgets.append(Gadget(b.vertices, tuple(vmap[v] for v in rest), vmap, (b.forward_arc,)))

    order: list[int] = []
    for p in range(n1 + 1):
        order.extend(inserts.get(p, []))
        if p < n1:
            order.append(theta[p])
    order_t = tuple(order)
    size = next_label
    pos_k = positions_of(order_t)

    backward: list[tuple[int, int]] = []
    for u, v in n_t.arcs():
        if pos_n[u] > pos_n[v]:
            backward.append((u, v))
    for gd in gadgets:
        inv = gd.vertex_map
        for x in rest:
            for y in rest:
                if g_t.has_arc(x, y) and alpha.index(x) > alpha.index(y):
                    backward.append((inv[x], inv[y]))
    rows = [0] * size
    for i in range(size):
        for j in range(i + 1, size):
            rows[order_t[i]] |= 1 << order_t[j]
    for u, v in backward:
        rows[v] &= ~(1 << u)
        rows[u] |= 1 << v
    k_t = Tournament(size, rows)

    parts = []
    for p in n_w.parts:
        parts.append(_move_part(p, pos_k))
    for gd in gadgets:
        for p in g_w.stars:
            parts.append(_move_part(_rename_part(p, gd.vertex_map), pos_k))
    parts.sort(key=lambda p: min(p.positions))
    k_w = DecompositionWitness("regular-super-nebula", order_t, tuple(parts), ())
    errs = evaluate_witness(k_t, k_w)
    if errs:
        raise KeyConstructionError("key is not a regular super nebula: " + errs[0])
    key = KeyTournament("nebula-galaxy", k_t, order_t, tuple(range(n1)), gadgets,
                        [b.forward_arc for b in trip], k_w, theta, alpha)
    return key


def _rename_part(p, m: dict[int, int]):
    if isinstance(p, StarWitness):
        return StarWitness(p.kind, m[p.center], tuple(m[v] for v in p.leaves),
                           tuple(m[v] for v in p.vertices), p.positions)
    raise TypeError(f"cannot copy part {p!r}")


def _move_part(p, pos: Sequence[int]):
    """The same part with positions re-read from a new ordering."""
    if isinstance(p, StarWitness):
        return StarWitness(p.kind, p.center, p.leaves, p.vertices, tuple(pos[v] for v in p.vertices))
    if isinstance(p, SuperNebulaWitness):
        return SuperNebulaWitness(p.kind, p.centers, p.leaves_by_center, p.star_kinds,
                                  p.vertices, tuple(pos[v] for v in p.vertices))
    if isinstance(p, TriangleWitness):
        return TriangleWitness(p.left, p.center, p.right, tuple(pos[v] for v in p.vertices))
    if isinstance(p, K6Witness):
        return K6Witness(p.vertices, tuple(pos[v] for v in p.vertices), p.star_center)
    raise TypeError(p)


def _restrict(order: Sequence[int], keep: Iterable[int]) -> tuple[int, ...]:
    keep = set(keep)
    return tuple(v for v in order if v in keep)


def _backward_set(t: PartialDigraph, order: Sequence[int]) -> set[tuple[int, int]]:
    pos = {v: i for i, v in enumerate(order)}
    return {(u, v) for u in order for v in order if t.has_arc(u, v) and pos[u] > pos[v]}


def verify_key(key: KeyTournament, n_t: Tournament, n_w: DecompositionWitness,
               g_t: Tournament, g_w: DecompositionWitness) -> KeyReport:
    """Check each defining property of an ``N (x) G`` key independently."""
    rep = KeyReport()
    k_t, order = key.tournament, key.ordering
    theta, alpha = tuple(n_w.ordering), tuple(g_w.ordering)
    n1, n2 = n_t.n, g_t.n

    errs = evaluate_witness(k_t, key.witness, "regular-super-nebula")
    rep.add("regular super nebula", not errs and list(key.witness.ordering) == list(order),
            "; ".join(errs[:2]))

    s = len(bad_triplets(n_t, n_w))
    seen: list[int] = list(key.base_vertices)
    for gd in key.gadgets:
        seen.extend(gd.vertices)
    ok = (sorted(seen) == list(range(k_t.n)) and len(key.gadgets) == s
          and all(len(gd.vertices) == n2 - 3 for gd in key.gadgets)
          and k_t.n == n1 + s * (n2 - 3))
    rep.add("vertex partition", ok, f"|K|={k_t.n}, |N|={n1}, s={s}, |G|={n2}")

    base = list(key.base_vertices)
    ok = k_t.induced(base) == n_t and _restrict(order, base) == theta
    rep.add("copy of N", ok, "" if ok else "K restricted to V(N) differs from N under theta")

    tri = g_w.triangles[0] if len(g_w.triangles) == 1 else None
    rest = [v for v in alpha if tri is None or v not in tri.vertices]
    g_bar = g_t.induced(rest)
    ok3 = tri is not None
    for gd in key.gadgets:
        u = [gd.vertex_map[v] for v in rest]
        if k_t.induced(u) != g_bar or _restrict(order, u) != tuple(u):
            ok3 = False
    rep.add("gadget copies of G minus its triangle", ok3)

    try:
        got = [b.vertices for b in bad_triplets(k_t, key.witness)]
        want = [b.vertices for b in bad_triplets(n_t, n_w)]
        ok4 = [tuple(sorted(x)) for x in got] == [tuple(sorted(x)) for x in want]
        msg = "" if ok4 else f"{len(got)} key triplets vs {len(want)}"
    except ValueError as exc:
        ok4, msg = False, str(exc)
    rep.add("bad triplets unchanged", ok4, msg)

    ok5 = tri is not None
    msg5 = ""
    g_alpha = g_t.relabel(alpha)
    variants = set()
    if tri is not None:
        for r in reversal_set(g_t, alpha):
            variants.add(r.relabel(alpha))
    for gd in key.gadgets:
        x = _restrict(order, list(gd.triplet) + list(gd.vertices))
        sub = k_t.induced(x)
        local = {v: i for i, v in enumerate(x)}
        fw = [(a, b) for a, b in combinations(gd.triplet, 2) if k_t.has_arc(a, b)
              and order.index(a) < order.index(b)]
        if len(fw) != 1:
            ok5, msg5 = False, f"triplet {gd.triplet} has {len(fw)} forward arcs"
            break
        a, b = fw[0]
        if sub not in variants:
            ok5, msg5 = False, f"gadget on {gd.triplet} is not a single-flip variant of G"
            break
        if sub.reverse_arc(local[a], local[b]) != g_alpha:
            ok5, msg5 = False, f"reversing {fw[0]} does not give G under its ordering"
            break
    rep.add("each gadget plus its triplet is G with one triangle arc flipped", ok5, msg5)

    got_back = _backward_set(k_t, order)
    allowed = {(a, b) for a, b in _backward_set(k_t, _restrict(order, base))}
    for gd in key.gadgets:
        allowed |= _backward_set(k_t, _restrict(order, gd.vertices))
    rep.add("backward arcs come only from N and the gadgets", got_back == allowed,
            "" if got_back == allowed else f"{len(got_back ^ allowed)} arcs differ")
    return rep


# ---------------------------------------------------------------------------
# GK6 keys


def operation_K6(t: Tournament, order: Sequence[int], inst: K6Witness
                 ) -> tuple[Tournament, tuple[int, ...], list[int]]:
    """Delete d2, d3, d5 of a K6 gadget and reverse the arc d4 -> d6.

    Returns the new tournament, its ordering and ``labels`` with ``labels[i]``
    the old name of new vertex ``i`` (survivors keep their relative order).
    """
    return apply_operation_all(t, order, [inst])


def apply_operation_all(t: Tournament, order: Sequence[int], instances: Sequence[K6Witness]
                        ) -> tuple[Tournament, tuple[int, ...], list[int]]:
    order = check_ordering(order, t.n)
    pos = positions_of(order)
    drop = set()
    flips = []
    for inst in instances:
        d = inst.vertices
        ps = [pos[v] for v in d]
        if not (ps[1] == ps[0] + 1 and ps[3] == ps[2] + 1 and ps[5] == ps[4] + 1 and ps == sorted(ps)):
            raise ValueError(f"{d} is not a K6 gadget under the ordering")
        got = {(j, i) for i in range(6) for j in range(6) if i < j and t.has_arc(d[j], d[i])}
        if got != set(K6_BACKWARD):
            raise ValueError(f"{d} is not a canonical K6")
        drop.update((d[1], d[2], d[4]))
        flips.append((d[3], d[5]))
    labels = sorted(v for v in range(t.n) if v not in drop)
    new = {v: i for i, v in enumerate(labels)}
    out = t
    for a, b in flips:
        out = out.reverse_arc(a, b)
    res = out.induced(labels)
    return res, tuple(new[v] for v in order if v in new), labels


def build_key_GK6(h_t: Tournament, h_w: DecompositionWitness) -> KeyTournament:
    """Replace each triangle (z1, z2, z3) of ``h_t`` by a K6 gadget.

    z1, z2, z3 become d1, d4, d6; new vertices d2, d3, d5 are placed right
    after z1, right before z2 and right before z3.  Every new arc points
    forward except the canonical K6 pattern, so reversing d4 -> d6 after
    deleting d2, d3, d5 gives back ``h_t`` with its ordering.
    """
    if h_w.singletons:
        raise KeyConstructionError("H must be regular (no singletons)")
    errs = evaluate_witness(h_t, h_w, "regular-central-triangular-galaxy")
    if errs:
        raise KeyConstructionError("H is not a regular central triangular galaxy: " + errs[0])
    h = h_t.n
    theta = tuple(h_w.ordering)
    before: dict[int, list[int]] = {}
    after: dict[int, list[int]] = {}
    gadgets_d = []
    label = h
    for tri in h_w.triangles:
        d2, d3, d5 = label, label + 1, label + 2
        label += 3
        after.setdefault(tri.left, []).append(d2)
        before.setdefault(tri.center, []).append(d3)
        before.setdefault(tri.right, []).append(d5)
        gadgets_d.append((tri.left, d2, d3, tri.center, d5, tri.right))
    order: list[int] = []
    for v in theta:
        order.extend(before.get(v, []))
        order.append(v)
        order.extend(after.get(v, []))
    order_t = tuple(order)
    size = label
    pos = positions_of(order_t)

    backward = []
    tri_arcs = set()
    for d in gadgets_d:
        for (j, i) in K6_BACKWARD:
            backward.append((d[j], d[i]))
        tri_arcs.update({frozenset((d[0], d[3])), frozenset((d[0], d[5])), frozenset((d[3], d[5]))})
    for u, v in h_t.arcs():
        if pos[u] > pos[v] and frozenset((u, v)) not in tri_arcs:
            backward.append((u, v))
    rows = [0] * size
    for i in range(size):
        for j in range(i + 1, size):
            rows[order_t[i]] |= 1 << order_t[j]
    for u, v in backward:
        rows[v] &= ~(1 << u)
        rows[u] |= 1 << v
    k_t = Tournament(size, rows)

    insts = [K6Witness(d, tuple(pos[v] for v in d)) for d in gadgets_d]
    parts = [_move_part(p, pos) for p in h_w.stars] + insts
    parts.sort(key=lambda p: min(p.positions))
    k_w = DecompositionWitness("gk6", order_t, tuple(parts), ())
    errs = evaluate_witness(k_t, k_w)
    if errs:
        raise KeyConstructionError("gadget placement breaks the GK6 clauses: " + errs[0])
    found = {i.vertices for i in find_K6_instances(k_t, order_t)}
    if found != {i.vertices for i in insts}:
        raise KeyConstructionError("the key has K6 gadgets other than the planted ones")
    trip = bad_triplets(k_t, k_w)
    gadgets = []
    for d in gadgets_d:
        arcs = tuple(b.forward_arc for b in trip if set(b.vertices) <= set(d))
        gadgets.append(Gadget((d[0], d[3], d[5]), (d[1], d[2], d[4]),
                              {i + 1: v for i, v in enumerate(d)}, arcs))
    return KeyTournament("gk6", k_t, order_t, tuple(range(h)), gadgets,
                         [b.forward_arc for b in trip], k_w, theta, ())


def verify_key_GK6(key: KeyTournament, h_t: Tournament, h_w: DecompositionWitness) -> KeyReport:
    rep = KeyReport()
    errs = evaluate_witness(key.tournament, key.witness, "gk6")
    rep.add("GK6 under its ordering", not errs, "; ".join(errs[:2]))
    errs = evaluate_witness(key.tournament, as_super_nebula(key.witness))
    rep.add("GK6 read as a regular super nebula", not errs, "; ".join(errs[:2]))
    rep.add("size", key.n == h_t.n + 3 * len(h_w.triangles), f"|K|={key.n}")
    insts = find_K6_instances(key.tournament, key.ordering)
    back, order, labels = apply_operation_all(key.tournament, key.ordering, insts)
    ok = back == h_t and order == tuple(h_w.ordering) and labels == list(range(h_t.n))
    rep.add("operation on every K6 recovers H and its ordering", ok)
    return rep


# ---------------------------------------------------------------------------
# completions


def completions_contain(key: KeyTournament, targets: Sequence[PartialDigraph]):
    """For every orientation of the removed arcs, which target the completion contains.

    Yields ``(completion, index, embedding)`` with ``index`` the first target
    found (``None`` if none is contained).
    """
    from .core import contains_subtournament

    m = key.mutant()
    for comp in m.completions():
        hit = None
        for i, h in enumerate(targets):
            f = contains_subtournament(comp, h)
            if f is not None:
                hit = (i, f)
                break
        yield comp, (hit[0] if hit else None), (hit[1] if hit else None)
