"""Tournaments, partial digraphs, orderings and the basic search kernels.

Vertices are the integers ``0..n-1``.  Adjacency is stored as one integer
bit row per vertex: bit ``v`` of ``out[u]`` is set iff ``u -> v``.  An
ordering is a tuple ``order`` with ``order[p]`` the vertex at position ``p``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Tournament",
    "PartialDigraph",
    "SizeLimitExceeded",
    "SearchBudgetExceeded",
    "TR_EXACT_LIMIT",
    "CRITICAL_LIMIT",
    "bits",
    "mask_of",
    "positions_of",
    "check_ordering",
    "backward_arc_graph",
    "backward_arcs",
    "arc_count",
    "directed_density",
    "is_transitive_set",
    "transitive_order",
    "tr_exact",
    "tr_bruteforce",
    "ramsey_transitive",
    "contains_subtournament",
    "is_family_free",
    "is_epsilon_critical",
    "as_fraction",
]

TR_EXACT_LIMIT = 24
CRITICAL_LIMIT = 10


class SizeLimitExceeded(ValueError):
    """An exhaustive routine was asked to run above its configured size."""


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search visited more nodes than its budget allows."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def positions_of(order: Sequence[int]) -> list[int]:
    pos = [0] * len(order)
    for p, v in enumerate(order):
        pos[v] = p
    return pos


def check_ordering(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(order)
    if len(order) != n or sorted(order) != list(range(n)):
        raise ValueError(f"ordering {order!r} is not a permutation of 0..{n - 1}")
    return order


def as_fraction(x) -> Fraction:
    # floats are read through their decimal repr so that 0.7 means 7/10
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


class PartialDigraph:
    """A digraph with at most one arc per vertex pair and no loops."""

    __slots__ = ("n", "out")

    def __init__(self, n: int, out: Sequence[int]):
        if n < 0 or len(out) != n:
            raise ValueError("adjacency rows do not match vertex count")
        out = tuple(out)
        full = (1 << n) - 1
        for u, row in enumerate(out):
            if row & ~full:
                raise ValueError(f"vertex {u} has an arc leaving the vertex range")
            if (row >> u) & 1:
                raise ValueError(f"self-loop at {u}")
            for v in bits(row):
                if (out[v] >> u) & 1:
                    raise ValueError(f"pair {{{u},{v}}} carries both orientations")
        self.n = n
        self.out = out

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]):
        rows = [0] * n
        for u, v in arcs:
            rows[u] |= 1 << v
        return cls(n, rows)

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self.out[u] >> v) & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def arc_count(self) -> int:
        return sum(row.bit_count() for row in self.out)

    def missing_pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.n), 2)
                if not self.has_arc(u, v) and not self.has_arc(v, u)]

    def without_arcs(self, arcs: Iterable[tuple[int, int]]) -> "PartialDigraph":
        rows = list(self.out)
        for u, v in arcs:
            if not (rows[u] >> v) & 1:
                raise ValueError(f"arc ({u},{v}) is not present")
            rows[u] &= ~(1 << v)
        return PartialDigraph(self.n, rows)

    def with_arcs(self, arcs: Iterable[tuple[int, int]]) -> "PartialDigraph":
        rows = list(self.out)
        for u, v in arcs:
            if (rows[v] >> u) & 1:
                raise ValueError(f"arc ({v},{u}) already present")
            rows[u] |= 1 << v
        return PartialDigraph(self.n, rows)

    def relabel(self, order: Sequence[int]):
        """Return the digraph whose vertex ``i`` is ``order[i]`` of this one."""
        order = check_ordering(order, self.n)
        pos = positions_of(order)
        rows = [0] * self.n
        for i, u in enumerate(order):
            for v in bits(self.out[u]):
                rows[i] |= 1 << pos[v]
        return type(self)(self.n, rows)

    def induced(self, vertices: Sequence[int]):
        """Sub-digraph on ``vertices``; new vertex ``i`` is ``vertices[i]``."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("repeated vertex in induced()")
        rows = [0] * len(vertices)
        for i, u in enumerate(vertices):
            row = self.out[u]
            for v, j in index.items():
                if (row >> v) & 1:
                    rows[i] |= 1 << j
        return type(self)(len(vertices), rows)

    def completions(self) -> Iterator["Tournament"]:
        """Every tournament obtained by orienting the missing pairs."""
        missing = self.missing_pairs()
        for choice in range(1 << len(missing)):
            rows = list(self.out)
            for k, (u, v) in enumerate(missing):
                if (choice >> k) & 1:
                    rows[v] |= 1 << u
                else:
                    rows[u] |= 1 << v
            yield Tournament(self.n, rows)

    def to_text(self) -> str:
        chars = []
        for u, v in combinations(range(self.n), 2):
            chars.append("1" if self.has_arc(u, v) else "0" if self.has_arc(v, u) else "-")
        return f"{self.n}\n{''.join(chars)}\n"

    @classmethod
    def from_text(cls, text: str):
        n, rows = _parse_upper_triangle(text, allow_missing=True)
        return cls(n, rows)

    def __eq__(self, other):
        return (isinstance(other, PartialDigraph) and type(self) is type(other)
                and self.n == other.n and self.out == other.out)

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.out))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, arcs={self.arcs()})"


class Tournament(PartialDigraph):
    """A complete orientation: every pair carries exactly one arc."""

    __slots__ = ()

    def __init__(self, n: int, out: Sequence[int]):
        super().__init__(n, out)
        full = (1 << n) - 1
        for u, row in enumerate(self.out):
            inn = 0
            for v in range(n):
                if (self.out[v] >> u) & 1:
                    inn |= 1 << v
            if row | inn | (1 << u) != full:
                raise ValueError(f"vertex {u} is missing an arc; not a tournament")

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        """The transitive tournament with ``i -> j`` for all ``i < j``."""
        full = (1 << n) - 1
        return cls(n, [full & ~((1 << (i + 1)) - 1) for i in range(n)])

    @classmethod
    def from_backward_arcs(cls, n: int, backward: Iterable[tuple[int, int]]):
        """Tournament under the identity ordering with the given backward arcs.

        Each arc ``(u, v)`` must have ``u > v``; every other pair points forward.
        """
        rows = list(cls.transitive(n).out)
        for u, v in backward:
            if not u > v:
                raise ValueError(f"({u},{v}) is not backward under the identity ordering")
            rows[v] &= ~(1 << u)
            rows[u] |= 1 << v
        return cls(n, rows)

    @classmethod
    def from_partial(cls, d: PartialDigraph) -> "Tournament":
        return cls(d.n, d.out)

    def inn(self, v: int) -> int:
        return ((1 << self.n) - 1) & ~self.out[v] & ~(1 << v)

    def score(self, v: int) -> int:
        return self.out[v].bit_count()

    def reverse_arc(self, u: int, v: int) -> "Tournament":
        if not self.has_arc(u, v):
            raise ValueError(f"arc ({u},{v}) not present")
        rows = list(self.out)
        rows[u] &= ~(1 << v)
        rows[v] |= 1 << u
        return Tournament(self.n, rows)

    def to_text(self) -> str:
        chars = "".join("1" if self.has_arc(u, v) else "0"
                        for u, v in combinations(range(self.n), 2))
        return f"{self.n}\n{chars}\n"

    @classmethod
    def from_text(cls, text: str) -> "Tournament":
        n, rows = _parse_upper_triangle(text, allow_missing=False)
        return cls(n, rows)


def _parse_upper_triangle(text: str, allow_missing: bool):
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise ValueError("missing vertex count line")
    n = int(lines[0].strip())
    if n < 0:
        raise ValueError("negative vertex count")
    body = lines[1].strip() if len(lines) > 1 else ""
    expected = n * (n - 1) // 2
    if len(body) != expected:
        raise ValueError(f"expected {expected} arc characters, got {len(body)}")
    allowed = "01-" if allow_missing else "01"
    rows = [0] * n
    for (u, v), ch in zip(combinations(range(n), 2), body):
        if ch not in allowed:
            raise ValueError(f"bad arc character {ch!r}")
        if ch == "1":
            rows[u] |= 1 << v
        elif ch == "0":
            rows[v] |= 1 << u
    return n, rows


# ---------------------------------------------------------------------------
# orderings and densities


def backward_arcs(d: PartialDigraph, order: Sequence[int]) -> list[tuple[int, int]]:
    """Arcs ``(u, v)`` of ``d`` with ``u`` after ``v`` under ``order``."""
    order = check_ordering(order, d.n)
    pos = positions_of(order)
    return [(u, v) for u, v in d.arcs() if pos[u] > pos[v]]


def backward_arc_graph(d: PartialDigraph, order: Sequence[int]) -> set[frozenset[int]]:
    """Edge set of the undirected graph of backward arcs of ``d`` under ``order``."""
    return {frozenset(a) for a in backward_arcs(d, order)}


def _check_disjoint_nonempty(x: Iterable[int], y: Iterable[int]):
    x, y = set(x), set(y)
    if not x or not y:
        raise ValueError("density needs two nonempty vertex sets")
    if x & y:
        raise ValueError("density needs disjoint vertex sets")
    return x, y


def arc_count(t: PartialDigraph, x: Iterable[int], y: Iterable[int]) -> int:
    """Number of arcs from ``x`` into ``y``."""
    ym = mask_of(y)
    return sum((t.out[u] & ym).bit_count() for u in set(x))


def directed_density(t: PartialDigraph, x: Iterable[int], y: Iterable[int]) -> Fraction:
    """Exact fraction of the ``|x|*|y|`` pairs whose arc points from ``x`` to ``y``."""
    x, y = _check_disjoint_nonempty(x, y)
    return Fraction(arc_count(t, x, y), len(x) * len(y))


# ---------------------------------------------------------------------------
# transitive subtournaments


def is_transitive_set(t: PartialDigraph, vertices: Iterable[int]) -> bool:
    """Whether ``t`` restricted to ``vertices`` is a transitive tournament."""
    vs = list(vertices)
    m = mask_of(vs)
    scores = sorted((t.out[v] & m).bit_count() for v in vs)
    if scores != list(range(len(vs))):
        return False
    # scores 0..k-1 characterise transitive tournaments, but a partial digraph
    # may have holes; require completeness as well
    return all(t.has_arc(u, v) or t.has_arc(v, u) for u, v in combinations(vs, 2))


def transitive_order(t: PartialDigraph, vertices: Iterable[int]) -> list[int]:
    """The vertices of a transitive set listed source first."""
    vs = list(vertices)
    m = mask_of(vs)
    if not is_transitive_set(t, vs):
        raise ValueError("vertex set is not transitive")
    return sorted(vs, key=lambda v: -(t.out[v] & m).bit_count())


def tr_exact(t: Tournament, limit: int | None = TR_EXACT_LIMIT) -> tuple[int, list[int]]:
    """Largest transitive subtournament, exact.

    Returns ``(size, witness)`` with the witness listed source first.  Every
    transitive set has a unique source ``v`` and the rest lies in ``out(v)``,
    so ``tr(C) = max_v 1 + tr(C & out(v))``; this is memoised per candidate
    mask, with branches cut when even ``|C & out(v)|`` cannot beat the best.
    """
    if limit is not None and t.n > limit:
        raise SizeLimitExceeded(f"tr_exact limited to n <= {limit}, got {t.n}")
    memo: dict[int, tuple[int, int]] = {0: (0, -1)}

    def solve(cand: int) -> int:
        hit = memo.get(cand)
        if hit is not None:
            return hit[0]
        best, arg = 0, -1
        for v in sorted(bits(cand), key=lambda u: -(t.out[u] & cand).bit_count()):
            sub = cand & t.out[v]
            if 1 + sub.bit_count() <= best:
                continue
            got = 1 + solve(sub)
            if got > best:
                best, arg = got, v
        memo[cand] = (best, arg)
        return best

    full = (1 << t.n) - 1
    size = solve(full)
    witness = []
    cand = full
    while cand:
        v = memo[cand][1]
        witness.append(v)
        cand &= t.out[v]
    return size, witness


def tr_bruteforce(t: PartialDigraph) -> tuple[int, list[int]]:
    """Largest transitive subset by enumerating all ``2^n`` subsets."""
    best: list[int] = []
    for m in range(1 << t.n):
        if m.bit_count() <= len(best):
            continue
        vs = list(bits(m))
        if is_transitive_set(t, vs):
            best = vs
    return len(best), best


def ramsey_transitive(t: Tournament) -> list[int]:
    """Transitive set of size at least ``floor(log2 n) + 1``, source first.

    Picks the lowest-labelled remaining vertex and keeps the larger of its out-
    and in-neighbourhoods (out on ties).
    """
    if t.n < 1:
        raise ValueError("tournament has no vertices")
    head: list[int] = []
    tail: list[int] = []
    cand = (1 << t.n) - 1
    while cand:
        v = (cand & -cand).bit_length() - 1
        cand &= ~(1 << v)
        outs = cand & t.out[v]
        ins = cand & ~t.out[v]
        if outs.bit_count() >= ins.bit_count():
            head.append(v)
            cand = outs
        else:
            tail.append(v)
            cand = ins
    return head + tail[::-1]


# ---------------------------------------------------------------------------
# containment


def contains_subtournament(t: PartialDigraph, h: PartialDigraph) -> dict[int, int] | None:
    """An injective map ``V(h) -> V(t)`` under which ``t|image`` equals ``h``.

    Both arc presence and arc absence are preserved, so for tournaments this is
    an induced-subtournament embedding.  ``None`` means the backtracking search
    found none.
    """
    if h.n > t.n:
        return None
    if h.n == 0:
        return {}
    h_in = [mask_of(u for u in range(h.n) if h.has_arc(u, v)) for v in range(h.n)]
    t_in = [mask_of(u for u in range(t.n) if t.has_arc(u, v)) for v in range(t.n)]
    h_out_deg = [row.bit_count() for row in h.out]
    h_in_deg = [row.bit_count() for row in h_in]
    t_out_deg = [row.bit_count() for row in t.out]
    t_in_deg = [row.bit_count() for row in t_in]

    # most constrained pattern vertices first, each connected to earlier ones
    order: list[int] = []
    rest = set(range(h.n))
    while rest:
        v = max(rest, key=lambda u: (sum(1 for w in order if h.has_arc(u, w) or h.has_arc(w, u)),
                                     h_out_deg[u] + h_in_deg[u], -u))
        order.append(v)
        rest.remove(v)

    cands = [mask_of(x for x in range(t.n)
                     if t_out_deg[x] >= h_out_deg[v] and t_in_deg[x] >= h_in_deg[v])
             for v in range(h.n)]
    image: dict[int, int] = {}
    used = 0

    def extend(k: int) -> bool:
        nonlocal used
        if k == h.n:
            return True
        v = order[k]
        allowed = cands[v] & ~used
        for u, x in image.items():
            if h.has_arc(v, u):
                allowed &= t_in[x]
            else:
                allowed &= ~t_in[x]
            if h.has_arc(u, v):
                allowed &= t.out[x]
            else:
                allowed &= ~t.out[x]
        for x in bits(allowed):
            image[v] = x
            used |= 1 << x
            if extend(k + 1):
                return True
            used &= ~(1 << x)
            del image[v]
        return False

    return dict(sorted(image.items())) if extend(0) else None


def is_family_free(t: PartialDigraph, family: Iterable[PartialDigraph]) -> bool:
    return all(contains_subtournament(t, h) is None for h in family)


def _all_subset_tr(t: Tournament) -> list[int]:
    """``tr`` of every vertex subset, indexed by bitmask."""
    size = 1 << t.n
    tr = [0] * size
    for m in range(1, size):
        # subsets of ``m`` are smaller integers, so they are already filled in
        tr[m] = max(1 + tr[m & t.out[v]] for v in bits(m))
    return tr


def is_epsilon_critical(t: Tournament, eps, limit: int | None = CRITICAL_LIMIT) -> bool:
    """Exact test of ``tr(T) < n^eps`` with ``tr(S) >= |S|^eps`` for proper ``S``.

    ``eps = p/q`` is handled exactly by comparing ``tr^q`` with ``n^p``.
    """
    if limit is not None and t.n > limit:
        raise SizeLimitExceeded(f"criticality check limited to n <= {limit}, got {t.n}")
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    p, q = eps.numerator, eps.denominator
    if t.n == 0:
        return False
    tr = _all_subset_tr(t)
    full = (1 << t.n) - 1
    if not tr[full] ** q < t.n ** p:
        return False
    return all(tr[m] ** q >= m.bit_count() ** p for m in range(1, full))
