"""Ordered decompositions of tournaments into stars, super 2-nebulas,
triangles and K6 gadgets, with certified witnesses.

A decomposition under an ordering is read off the graph of backward arcs:
every part is a connected component of that graph (no backward arc joins two
different parts), so each component is classified by its shape:

* a star graph is a star (left, right or middle by the centre's position);
* a tree with two adjacent inner vertices is a super 2-nebula candidate;
* a triangle is a triangle under the ordering;
* a P4 together with a consecutive 2-star can form a K6 gadget;
* an isolated vertex is a singleton.

The only freedom left is the centre of each 2-vertex star, which is settled
by backtracking against the grammar's placement clauses.  Positions in all
witnesses are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .core import (
    PartialDigraph,
    SearchBudgetExceeded,
    SizeLimitExceeded,
    Tournament,
    bits,
    check_ordering,
    positions_of,
)

__all__ = [
    "StarWitness",
    "SuperNebulaWitness",
    "TriangleWitness",
    "K6Witness",
    "DecompositionWitness",
    "Grammar",
    "GRAMMARS",
    "get_grammar",
    "grammar_names",
    "K6",
    "K6_BACKWARD",
    "classify_star_segment",
    "recognize_super_2_nebula",
    "find_triangles_under",
    "find_K6_instances",
    "is_canonical_K6",
    "recognize_decomposition",
    "recognize_under",
    "evaluate_witness",
    "witness_from_dict",
    "UNORDERED_LIMIT",
]

UNORDERED_LIMIT = 10
DEFAULT_NODE_BUDGET = 2_000_000

# canonical K6 on 0..5: backward arcs (v4,v1),(v6,v3),(v6,v1),(v5,v2) in 1-based labels
K6_BACKWARD = ((3, 0), (5, 2), (5, 0), (4, 1))
K6 = Tournament.from_backward_arcs(6, K6_BACKWARD)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class StarWitness:
    kind: str
    center: int
    leaves: tuple[int, ...]
    vertices: tuple[int, ...]
    positions: tuple[int, ...]

    part = "star"

    @property
    def centers(self) -> tuple[int, ...]:
        return (self.center,)

    @property
    def middle_index(self) -> int:
        return self.vertices.index(self.center)

    def to_dict(self) -> dict:
        return {"type": "star", "kind": self.kind, "center": self.center,
                "leaves": list(self.leaves), "vertices": list(self.vertices),
                "positions": list(self.positions)}


@dataclass(frozen=True)
class SuperNebulaWitness:
    """A super 2-nebula: two frontier stars whose centres' arc is reversed.

    ``centers`` are listed by position; ``leaves_by_center[i]`` are the leaves
    incident to ``centers[i]``.  ``kind`` is left, middle or right for the
    contracted leaf vectors (1,0,0), (0,1,0), (0,0,1).
    """

    kind: str
    centers: tuple[int, int]
    leaves_by_center: tuple[tuple[int, ...], tuple[int, ...]]
    star_kinds: tuple[str, str]
    vertices: tuple[int, ...]
    positions: tuple[int, ...]

    part = "sigma"

    @property
    def leaves(self) -> tuple[int, ...]:
        ls = set(self.leaves_by_center[0]) | set(self.leaves_by_center[1])
        return tuple(v for v in self.vertices if v in ls)

    def to_dict(self) -> dict:
        return {"type": "super-2-nebula", "kind": self.kind, "centers": list(self.centers),
                "leaves": [list(x) for x in self.leaves_by_center],
                "star_kinds": list(self.star_kinds),
                "vertices": list(self.vertices), "positions": list(self.positions)}


@dataclass(frozen=True)
class TriangleWitness:
    left: int
    center: int
    right: int
    positions: tuple[int, int, int]

    part = "triangle"

    @property
    def vertices(self) -> tuple[int, int, int]:
        return (self.left, self.center, self.right)

    @property
    def centers(self) -> tuple[int, ...]:
        return (self.center,)

    @property
    def leaves(self) -> tuple[int, ...]:
        return ()

    def to_dict(self) -> dict:
        return {"type": "triangle", "left": self.left, "center": self.center,
                "right": self.right, "vertices": list(self.vertices),
                "positions": list(self.positions)}


@dataclass(frozen=True)
class K6Witness:
    """A K6 gadget ``d1..d6`` at positions with i2=i1+1, i4=i3+1, i6=i5+1.

    Seen as a super nebula part it is the middle super 2-nebula
    ``{d1,d3,d4,d6}`` plus the 2-vertex star ``{d2,d5}``; ``star_center``
    records which of d2/d5 is taken as that star's centre.
    """

    vertices: tuple[int, int, int, int, int, int]
    positions: tuple[int, int, int, int, int, int]
    star_center: int = -1

    part = "k6"

    def __post_init__(self):
        if self.star_center == -1:
            object.__setattr__(self, "star_center", self.vertices[1])

    @property
    def centers(self) -> tuple[int, int]:
        return (self.vertices[0], self.vertices[5])

    @property
    def leaves(self) -> tuple[int, ...]:
        d = self.vertices
        star_leaf = d[4] if self.star_center == d[1] else d[1]
        ls = {d[2], d[3], star_leaf}
        return tuple(v for v in d if v in ls)

    def sigma(self) -> SuperNebulaWitness:
        d = self.vertices
        p = self.positions
        return SuperNebulaWitness("middle", (d[0], d[5]), ((d[3],), (d[2],)),
                                  ("left", "right"), (d[0], d[2], d[3], d[5]),
                                  (p[0], p[2], p[3], p[5]))

    def star(self) -> StarWitness:
        d = self.vertices
        p = self.positions
        if self.star_center == d[1]:
            return StarWitness("left", d[1], (d[4],), (d[1], d[4]), (p[1], p[4]))
        return StarWitness("right", d[4], (d[1],), (d[1], d[4]), (p[1], p[4]))

    def to_dict(self) -> dict:
        return {"type": "k6", "vertices": list(self.vertices),
                "positions": list(self.positions), "centers": list(self.centers),
                "star_center": self.star_center}


Part = StarWitness | SuperNebulaWitness | TriangleWitness | K6Witness


@dataclass(frozen=True)
class DecompositionWitness:
    grammar: str
    ordering: tuple[int, ...]
    parts: tuple[Part, ...]
    singletons: tuple[int, ...] = ()

    def position(self) -> list[int]:
        return positions_of(self.ordering)

    @property
    def stars(self) -> list[StarWitness]:
        return [p for p in self.parts if isinstance(p, StarWitness)]

    @property
    def sigmas(self) -> list[SuperNebulaWitness]:
        return [p for p in self.parts if isinstance(p, SuperNebulaWitness)]

    @property
    def triangles(self) -> list[TriangleWitness]:
        return [p for p in self.parts if isinstance(p, TriangleWitness)]

    @property
    def k6s(self) -> list[K6Witness]:
        return [p for p in self.parts if isinstance(p, K6Witness)]

    def to_dict(self) -> dict:
        return {"grammar": self.grammar, "ordering": list(self.ordering),
                "parts": [p.to_dict() for p in self.parts],
                "singletons": list(self.singletons)}


def _part_from_dict(d: dict) -> Part:
    kind = d["type"]
    if kind == "star":
        return StarWitness(d["kind"], d["center"], tuple(d["leaves"]),
                           tuple(d["vertices"]), tuple(d["positions"]))
    if kind == "super-2-nebula":
        return SuperNebulaWitness(d["kind"], tuple(d["centers"]),
                                  tuple(tuple(x) for x in d["leaves"]),
                                  tuple(d["star_kinds"]), tuple(d["vertices"]),
                                  tuple(d["positions"]))
    if kind == "triangle":
        return TriangleWitness(d["left"], d["center"], d["right"], tuple(d["positions"]))
    if kind == "k6":
        return K6Witness(tuple(d["vertices"]), tuple(d["positions"]),
                         d.get("star_center", -1))
    raise ValueError(f"unknown part type {kind!r}")


def witness_from_dict(d: dict) -> DecompositionWitness:
    return DecompositionWitness(d["grammar"], tuple(d["ordering"]),
                                tuple(_part_from_dict(p) for p in d["parts"]),
                                tuple(d.get("singletons", ())))


# ---------------------------------------------------------------------------
# grammars


def _frontier(s: StarWitness) -> bool:
    return s.kind in ("left", "right")


def _any_star(s: StarWitness) -> bool:
    return True


def _three(kind: str) -> Callable[[StarWitness], bool]:
    return lambda s: s.kind == kind and len(s.vertices) == 3


def _kind_only(kind: str) -> Callable[[StarWitness], bool]:
    return lambda s: s.kind == kind


def _right_or_one_right_middle(s: StarWitness) -> bool:
    return s.kind == "right" or (s.kind == "middle" and s.middle_index == len(s.vertices) - 2)


def _left_or_one_left_middle(s: StarWitness) -> bool:
    return s.kind == "left" or (s.kind == "middle" and s.middle_index == 1)


# placement clauses; each forbids a vertex of one part strictly between two
# leaves of another part
STAR_IN_STAR = "star-center-between-star-leaves"
STAR_IN_SIGMA = "star-center-between-sigma-leaves"
SIGMA_IN_SIGMA = "sigma-center-between-sigma-leaves"
SIGMA_IN_STAR = "sigma-center-between-star-leaves"
TRIANGLE_IN_STAR = "triangle-vertex-between-star-leaves"
K6_IN_STAR = "k6-center-between-star-leaves"

TRIANGLE_ROLES = ("left", "center", "right")


@dataclass(frozen=True)
class Grammar:
    """One decomposition family.

    ``star`` accepts or rejects a star part (``None`` forbids stars).
    ``triangle_free_roles`` lists the triangle roles that may sit between the
    leaves of a star; ``side`` adds the extra CR/CL clauses.
    """

    name: str
    singletons: bool = True
    star: Callable[[StarWitness], bool] | None = _frontier
    sigma_kinds: frozenset[str] = frozenset()
    sigma_count: int | None = None
    triangles: bool = False
    triangle_count: int | None = None
    triangle_free_roles: frozenset[str] = frozenset()
    side: str | None = None
    k6: bool = False
    rules: frozenset[str] = frozenset()
    description: str = ""

    @property
    def frontier_only(self) -> bool:
        return self.star in (_frontier, None) and not self.sigma_kinds and not self.k6

    def regular(self) -> "Grammar":
        return Grammar(**{**self.__dict__, "name": "regular-" + self.name, "singletons": False})


ALL_SIGMA = frozenset({"left", "middle", "right"})
SUPER_NEBULA_RULES = frozenset({STAR_IN_SIGMA, SIGMA_IN_SIGMA})


def _triangular(name, free_roles=(), count=None, side=None, description=""):
    return Grammar(name, star=_frontier, triangles=True, triangle_count=count,
                   triangle_free_roles=frozenset(free_roles), side=side,
                   rules=frozenset({STAR_IN_STAR, TRIANGLE_IN_STAR}), description=description)


def _build_grammars() -> dict[str, Grammar]:
    g = [
        Grammar("galaxy", rules=frozenset({STAR_IN_STAR}),
                description="frontier stars and singletons; no star centre between leaves of another star"),
        Grammar("nebula", star=_any_star, description="any stars and singletons"),
        Grammar("super-nebula", star=_any_star, sigma_kinds=ALL_SIGMA, rules=SUPER_NEBULA_RULES,
                description="stars, super 2-nebulas and singletons"),
        Grammar("left-nebula", star=_three("left"), description="nebula of 3-vertex left stars"),
        Grammar("right-nebula", star=_three("right"), description="nebula of 3-vertex right stars"),
        Grammar("central-nebula", star=_three("middle"), description="nebula of 3-vertex middle stars"),
        Grammar("super-left-nebula", star=_kind_only("left"), description="nebula of left stars"),
        Grammar("super-right-nebula", star=_kind_only("right"), description="nebula of right stars"),
        Grammar("right-middle-super-nebula", star=_right_or_one_right_middle,
                sigma_kinds=frozenset({"left"}), rules=SUPER_NEBULA_RULES,
                description="super nebula with right or 1-right middle stars and left super 2-nebulas"),
        Grammar("left-middle-super-nebula", star=_left_or_one_left_middle,
                sigma_kinds=frozenset({"right"}), rules=SUPER_NEBULA_RULES,
                description="super nebula with left or 1-left middle stars and right super 2-nebulas"),
        Grammar("frontier-middle-super-nebula", star=_frontier,
                sigma_kinds=frozenset({"middle"}), rules=SUPER_NEBULA_RULES,
                description="super nebula with frontier stars and middle super 2-nebulas"),
        _triangular("triangular-galaxy", description="triangles plus a galaxy; no triangle vertex between star leaves"),
        _triangular("central-triangular-galaxy", {"center"},
                    description="triangular galaxy whose triangle centres may sit between star leaves"),
        _triangular("left-triangular-galaxy", {"left"},
                    description="triangular galaxy whose left exteriors may sit between star leaves"),
        _triangular("right-triangular-galaxy", {"right"},
                    description="triangular galaxy whose right exteriors may sit between star leaves"),
        _triangular("delta-galaxy", count=1, description="triangular galaxy with exactly one triangle"),
        _triangular("central-delta-galaxy", {"center"}, count=1,
                    description="one triangle; its centre may sit between star leaves"),
        _triangular("left-delta-galaxy", {"left"}, count=1,
                    description="one triangle; its left exterior may sit between star leaves"),
        _triangular("right-delta-galaxy", {"right"}, count=1,
                    description="one triangle; its right exterior may sit between star leaves"),
        _triangular("lr-delta-galaxy", {"left", "right"}, count=1,
                    description="one triangle; both exteriors may sit between star leaves"),
        _triangular("cr-delta-galaxy", {"center", "right"}, count=1, side="right",
                    description="one triangle; centre and right exterior free, with the right-side clauses"),
        _triangular("cl-delta-galaxy", {"center", "left"}, count=1, side="left",
                    description="one triangle; centre and left exterior free, with the left-side clauses"),
        Grammar("triangular-tournament", star=None, triangles=True,
                description="triangles and singletons only"),
        Grammar("sigma-galaxy", singletons=False, sigma_kinds=ALL_SIGMA, sigma_count=1,
                rules=frozenset({STAR_IN_STAR, STAR_IN_SIGMA, SIGMA_IN_STAR}),
                description="frontier stars plus exactly one super 2-nebula"),
        Grammar("gk6", singletons=False, k6=True, rules=frozenset({STAR_IN_STAR, K6_IN_STAR}),
                description="K6 gadgets plus a regular galaxy"),
    ]
    for kind in ("middle", "left", "right"):
        g.append(Grammar(f"{kind}-sigma-galaxy", singletons=False, sigma_kinds=frozenset({kind}),
                         sigma_count=1, rules=frozenset({STAR_IN_STAR, STAR_IN_SIGMA, SIGMA_IN_STAR}),
                         description=f"frontier stars plus exactly one {kind} super 2-nebula"))
    out = {x.name: x for x in g}
    for x in list(out.values()):
        if x.singletons:
            r = x.regular()
            out[r.name] = r
    return out


GRAMMARS = _build_grammars()
_ALIASES = {"super_nebula": "super-nebula", "regular-super_nebula": "regular-super-nebula",
            "Δgalaxy": "delta-galaxy", "deltagalaxy": "delta-galaxy"}


def grammar_names() -> list[str]:
    return sorted(GRAMMARS)


def get_grammar(tag: str | Grammar) -> Grammar:
    if isinstance(tag, Grammar):
        return tag
    key = _ALIASES.get(tag, tag).lower().replace("_", "-").replace(" ", "-")
    if key not in GRAMMARS:
        raise ValueError(f"unknown grammar {tag!r}; choose from {', '.join(grammar_names())}")
    return GRAMMARS[key]


# ---------------------------------------------------------------------------
# backward-arc components


def _backward_adjacency(t: PartialDigraph, pos: Sequence[int]) -> list[int]:
    adj = [0] * t.n
    for u in range(t.n):
        for v in bits(t.out[u]):
            if pos[u] > pos[v]:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return adj


def _components(adj: list[int], n: int) -> list[int]:
    seen = 0
    comps = []
    for v in range(n):
        if (seen >> v) & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= adj[u]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        comps.append(comp)
    return comps


def _star_of(center: int, members: Sequence[int], pos: Sequence[int]) -> StarWitness:
    verts = tuple(sorted(members, key=lambda v: pos[v]))
    idx = verts.index(center)
    kind = "left" if idx == 0 else "right" if idx == len(verts) - 1 else "middle"
    leaves = tuple(v for v in verts if v != center)
    return StarWitness(kind, center, leaves, verts, tuple(pos[v] for v in verts))


def _star_candidates(comp: int, adj: list[int], pos: Sequence[int],
                     center_choice: str = "right") -> list[StarWitness]:
    """Star readings of a component, 2-vertex stars giving both centre choices."""
    members = list(bits(comp))
    k = len(members)
    if k < 2:
        return []
    if k == 2:
        a, b = sorted(members, key=lambda v: pos[v])
        right, left = _star_of(b, members, pos), _star_of(a, members, pos)
        return [right, left] if center_choice == "right" else [left, right]
    centers = [v for v in members if (adj[v] & comp).bit_count() == k - 1]
    edges = sum((adj[v] & comp).bit_count() for v in members) // 2
    if len(centers) != 1 or edges != k - 1:
        return []
    return [_star_of(centers[0], members, pos)]


def _sigma_candidate(comp: int, adj: list[int], pos: Sequence[int]) -> SuperNebulaWitness | None:
    """Read a component as a super 2-nebula (a double star of the right shape)."""
    members = list(bits(comp))
    k = len(members)
    edges = sum((adj[v] & comp).bit_count() for v in members) // 2
    if k < 4 or edges != k - 1:
        return None
    inner = [v for v in members if (adj[v] & comp).bit_count() >= 2]
    if len(inner) != 2 or not (adj[inner[0]] >> inner[1]) & 1:
        return None
    c1, c2 = sorted(inner, key=lambda v: pos[v])
    verts = tuple(sorted(members, key=lambda v: pos[v]))
    l1 = tuple(v for v in verts if (adj[c1] >> v) & 1 and v != c2)
    l2 = tuple(v for v in verts if (adj[c2] >> v) & 1 and v != c1)
    if set(l1) | set(l2) | {c1, c2} != set(members):
        return None
    bitsvec = [0 if v in (c1, c2) else 1 for v in verts]
    contracted = _contract_bits(bitsvec)
    kind = {(1, 0, 0): "left", (0, 1, 0): "middle", (0, 0, 1): "right"}.get(tuple(contracted))
    if kind is None:
        return None
    star_kinds = []
    for c, ls in ((c1, l1), (c2, l2)):
        if all(pos[c] < pos[x] for x in ls):
            star_kinds.append("left")
        elif all(pos[c] > pos[x] for x in ls):
            star_kinds.append("right")
        else:
            return None
    return SuperNebulaWitness(kind, (c1, c2), (l1, l2), tuple(star_kinds), verts,
                              tuple(pos[v] for v in verts))


def _contract_bits(b: Sequence[int]) -> list[int]:
    out: list[int] = []
    for x in b:
        if x == 1 and out and out[-1] == 1:
            continue
        out.append(x)
    return out


def _triangle_candidate(comp: int, adj: list[int], pos: Sequence[int]) -> TriangleWitness | None:
    members = sorted(bits(comp), key=lambda v: pos[v])
    if len(members) != 3 or any((adj[v] & comp).bit_count() != 2 for v in members):
        return None
    a, b, c = members
    return TriangleWitness(a, b, c, (pos[a], pos[b], pos[c]))


# ---------------------------------------------------------------------------
# single-part recognisers


def classify_star_segment(t: PartialDigraph, order: Sequence[int], vertices: Iterable[int],
                          center_choice: str = "right") -> StarWitness | None:
    """The star reading of ``t|vertices`` under ``order``, if its backward arcs form one.

    For two vertices joined by a backward arc ``center_choice`` picks the later
    vertex (``"right"``, a right star) or the earlier one (``"left"``).
    """
    if center_choice not in ("left", "right"):
        raise ValueError("center_choice must be 'left' or 'right'")
    order = check_ordering(order, t.n)
    pos = positions_of(order)
    members = list(dict.fromkeys(vertices))
    if len(members) < 2:
        return None
    comp = 0
    for v in members:
        comp |= 1 << v
    adj = [0] * t.n
    for u in members:
        for v in bits(t.out[u] & comp):
            if pos[u] > pos[v]:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    found = _star_candidates(comp, adj, pos, center_choice)
    return found[0] if found else None


def recognize_super_2_nebula(t: PartialDigraph, order: Sequence[int] | None = None
                             ) -> SuperNebulaWitness | None:
    """Whether ``t`` under ``order`` (default identity) is a super 2-nebula."""
    order = check_ordering(range(t.n) if order is None else order, t.n)
    pos = positions_of(order)
    adj = _backward_adjacency(t, pos)
    if t.n == 0:
        return None
    return _sigma_candidate((1 << t.n) - 1, adj, pos)


def find_triangles_under(t: PartialDigraph, order: Sequence[int]) -> list[TriangleWitness]:
    """Every position-increasing triple whose three arcs all point backward."""
    order = check_ordering(order, t.n)
    out = []
    for i, j, k in combinations(range(t.n), 3):
        a, b, c = order[i], order[j], order[k]
        if t.has_arc(b, a) and t.has_arc(c, a) and t.has_arc(c, b):
            out.append(TriangleWitness(a, b, c, (i, j, k)))
    return out


def find_K6_instances(t: PartialDigraph, order: Sequence[int]) -> list[K6Witness]:
    """Every K6 gadget of ``t`` under ``order`` (three adjacent position pairs)."""
    order = check_ordering(order, t.n)
    n = t.n
    out = []
    for i1 in range(n - 1):
        for i3 in range(i1 + 2, n - 1):
            for i5 in range(i3 + 2, n - 1):
                p = (i1, i1 + 1, i3, i3 + 1, i5, i5 + 1)
                verts = tuple(order[x] for x in p)
                if is_canonical_K6(t.induced(verts)):
                    out.append(K6Witness(verts, p))
    return out


def is_canonical_K6(t: PartialDigraph, order: Sequence[int] | None = None) -> bool:
    """Whether the backward arcs of ``t`` under ``order`` are exactly the K6 set."""
    if t.n != 6:
        raise ValueError(f"is_canonical_K6 needs 6 vertices, got {t.n}")
    order = check_ordering(range(6) if order is None else order, 6)
    backward = set()
    for i, j in combinations(range(6), 2):
        u, v = order[i], order[j]
        if t.has_arc(v, u):
            backward.add((j, i))
        elif not t.has_arc(u, v):
            return False
    return backward == set(K6_BACKWARD)


# ---------------------------------------------------------------------------
# placement checks shared by the recogniser


def _span(part, pos) -> tuple[int, int] | None:
    ls = part.leaves
    if len(ls) < 2:
        return None
    ps = [pos[v] for v in ls]
    return min(ps), max(ps)


def _inside(p: int, span) -> bool:
    return span is not None and span[0] < p < span[1]


def _pair_ok(a, b, grammar: Grammar, pos) -> bool:
    """Placement clauses between two distinct parts, checked in both directions."""
    for x, y in ((a, b), (b, a)):
        span = _span(y, pos)
        if span is None:
            continue
        if isinstance(y, StarWitness):
            if isinstance(x, StarWitness) and STAR_IN_STAR in grammar.rules:
                if _inside(pos[x.center], span):
                    return False
            elif isinstance(x, SuperNebulaWitness) and SIGMA_IN_STAR in grammar.rules:
                if any(_inside(pos[c], span) for c in x.centers):
                    return False
            elif isinstance(x, TriangleWitness) and TRIANGLE_IN_STAR in grammar.rules:
                for role, v in zip(TRIANGLE_ROLES, x.vertices):
                    if role not in grammar.triangle_free_roles and _inside(pos[v], span):
                        return False
            elif isinstance(x, K6Witness) and K6_IN_STAR in grammar.rules:
                if any(_inside(pos[c], span) for c in x.centers):
                    return False
        elif isinstance(y, SuperNebulaWitness):
            if isinstance(x, StarWitness) and STAR_IN_SIGMA in grammar.rules:
                if _inside(pos[x.center], span):
                    return False
            elif isinstance(x, SuperNebulaWitness) and SIGMA_IN_SIGMA in grammar.rules:
                if any(_inside(pos[c], span) for c in x.centers):
                    return False
    return True


def _side_ok(parts, grammar: Grammar, pos) -> bool:
    if grammar.side is None:
        return True
    ext_role = grammar.side
    stars = [p for p in parts if isinstance(p, StarWitness)]
    for tri in (p for p in parts if isinstance(p, TriangleWitness)):
        c = pos[tri.center]
        e = pos[tri.right if ext_role == "right" else tri.left]
        for qi in stars:
            si = _span(qi, pos)
            if not _inside(c, si):
                continue
            if _inside(e, si):
                return False
            for qj in stars:
                sj = _span(qj, pos)
                if not _inside(e, sj):
                    continue
                if any(_inside(pos[v], sj) for v in qi.leaves):
                    return False
                if any(_inside(pos[v], si) for v in qj.leaves):
                    return False
    return True


# ---------------------------------------------------------------------------
# recognition under a fixed ordering


def recognize_under(t: PartialDigraph, order: Sequence[int], grammar: str | Grammar,
                    center_choice: str = "right") -> DecompositionWitness | None:
    """A witness that ``t`` decomposes per ``grammar`` under ``order``, or ``None``."""
    g = get_grammar(grammar)
    order = check_ordering(order, t.n)
    pos = positions_of(order)
    adj = _backward_adjacency(t, pos)
    comps = _components(adj, t.n)
    singles: list[int] = []
    slots: list[list] = []
    used_k2: set[int] = set()

    k6_parts = []
    if g.k6:
        by_p4 = {}
        for inst in find_K6_instances(t, order):
            d = inst.vertices
            core = (1 << d[0]) | (1 << d[2]) | (1 << d[3]) | (1 << d[5])
            by_p4[core] = inst
        for comp in comps:
            inst = by_p4.get(comp)
            if inst is None:
                continue
            k2 = (1 << inst.vertices[1]) | (1 << inst.vertices[4])
            if k2 in comps:
                k6_parts.append(inst)
                used_k2.add(comp)
                used_k2.add(k2)

    n_sigma = n_tri = 0
    for comp in comps:
        if comp in used_k2:
            continue
        size = comp.bit_count()
        if size == 1:
            if not g.singletons:
                return None
            singles.append(comp.bit_length() - 1)
            continue
        cands: list = []
        if g.star is not None:
            cands += [s for s in _star_candidates(comp, adj, pos, center_choice) if g.star(s)]
        if g.sigma_kinds:
            sg = _sigma_candidate(comp, adj, pos)
            if sg is not None and sg.kind in g.sigma_kinds:
                cands.append(sg)
                n_sigma += 1
        if g.triangles:
            tri = _triangle_candidate(comp, adj, pos)
            if tri is not None:
                cands.append(tri)
                n_tri += 1
        if not cands:
            return None
        slots.append(cands)

    if g.sigma_count is not None and n_sigma != g.sigma_count:
        return None
    if g.triangle_count is not None and n_tri != g.triangle_count:
        return None
    fixed = list(k6_parts)
    for a, b in combinations(fixed, 2):
        if not _pair_ok(a, b, g, pos):
            return None

    # 2-vertex stars carry two readings; keep them last so single-reading parts prune early
    slots.sort(key=len)
    chosen: list = []

    def extend(i: int) -> bool:
        if i == len(slots):
            return _side_ok(fixed + chosen, g, pos)
        for cand in slots[i]:
            if all(_pair_ok(cand, other, g, pos) for other in fixed + chosen):
                chosen.append(cand)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        return None
    parts = sorted(fixed + chosen, key=lambda p: min(p.positions))
    singles.sort(key=lambda v: pos[v])
    return DecompositionWitness(g.name, order, tuple(parts), tuple(singles))


# ---------------------------------------------------------------------------
# recognition over all orderings


def _prefix_ok(adj_mask: list[int], prefix: list[int], g: Grammar, pos: dict) -> bool:
    """Necessary condition on the backward-arc graph of an ordering prefix."""
    pm = 0
    for v in prefix:
        pm |= 1 << v
    seen = 0
    trees = bool(g.sigma_kinds) or g.k6
    for v in prefix:
        if (seen >> v) & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= adj_mask[u] & pm
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        k = comp.bit_count()
        if k <= 2:
            continue
        members = list(bits(comp))
        degs = [(adj_mask[u] & comp).bit_count() for u in members]
        edges = sum(degs) // 2
        if k == 3 and edges == 3:
            if g.triangles:
                continue
            return False
        if edges != k - 1:
            return False
        inner = [u for u, d in zip(members, degs) if d >= 2]
        if len(inner) == 1:
            if g.star is None and not trees:
                return False
            if g.frontier_only:
                c = inner[0]
                nb = [pos[u] for u in bits(adj_mask[c] & comp)]
                if min(nb) < pos[c] < max(nb):
                    return False
            continue
        if not trees or len(inner) != 2:
            return False
    return True


def _ordering_candidates(t: PartialDigraph, g: Grammar, max_nodes: int):
    n = t.n
    adj = [0] * n
    prefix: list[int] = []
    pos: dict[int, int] = {}
    nodes = 0
    # try high-score vertices first; transitive-like orders have few backward arcs
    pref = sorted(range(n), key=lambda v: (-t.out[v].bit_count(), v))

    def walk():
        nonlocal nodes
        if len(prefix) == n:
            yield tuple(prefix)
            return
        placed = 0
        for u in prefix:
            placed |= 1 << u
        for v in pref:
            if (placed >> v) & 1:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise SearchBudgetExceeded(f"ordering search exceeded {max_nodes} nodes")
            back = t.out[v] & placed
            # backward arcs from v to earlier vertices
            added = []
            for u in bits(back):
                adj[u] |= 1 << v
                added.append(u)
            adj[v] = back
            prefix.append(v)
            pos[v] = len(prefix) - 1
            if _prefix_ok(adj, prefix, g, pos):
                yield from walk()
            prefix.pop()
            del pos[v]
            adj[v] = 0
            for u in added:
                adj[u] &= ~(1 << v)

    yield from walk()


def recognize_decomposition(t: PartialDigraph, grammar: str | Grammar,
                            order: Sequence[int] | None = None, *,
                            orderings: Iterable[Sequence[int]] | None = None,
                            max_n: int | None = UNORDERED_LIMIT,
                            max_nodes: int = DEFAULT_NODE_BUDGET,
                            center_choice: str = "right") -> DecompositionWitness | None:
    """Find a decomposition of ``t`` of the given family.

    With ``order`` only that ordering is examined.  Otherwise the identity is
    tried first and then every ordering (pruned on prefixes) or the supplied
    ``orderings``.
    """
    g = get_grammar(grammar)
    if order is not None:
        return recognize_under(t, order, g, center_choice)
    if orderings is not None:
        for o in orderings:
            w = recognize_under(t, o, g, center_choice)
            if w is not None:
                return w
        return None
    w = recognize_under(t, range(t.n), g, center_choice)
    if w is not None:
        return w
    if max_n is not None and t.n > max_n:
        raise SizeLimitExceeded(f"unordered recognition limited to n <= {max_n}, got {t.n}")
    for o in _ordering_candidates(t, g, max_nodes):
        w = recognize_under(t, o, g, center_choice)
        if w is not None:
            return w
    return None


# ---------------------------------------------------------------------------
# independent evaluator


def evaluate_witness(t: PartialDigraph, w: DecompositionWitness,
                     grammar: str | Grammar | None = None) -> list[str]:
    """Re-check a witness from scratch; returns the list of violated clauses.

    This deliberately avoids the recogniser's component machinery: backward
    arcs are recomputed pair by pair and every placement clause is tested with
    explicit loops over leaf pairs.
    """
    g = get_grammar(grammar if grammar is not None else w.grammar)
    errs: list[str] = []
    n = t.n
    try:
        order = check_ordering(w.ordering, n)
    except ValueError as exc:
        return [str(exc)]
    pos = {v: i for i, v in enumerate(order)}
    back = set()
    for i in range(n):
        for j in range(i + 1, n):
            if t.has_arc(order[j], order[i]):
                back.add(frozenset((order[i], order[j])))

    covered: list[int] = []
    for p in w.parts:
        covered.extend(p.vertices)
    covered.extend(w.singletons)
    if sorted(covered) != list(range(n)):
        errs.append("parts and singletons do not partition the vertex set")
    owner = {}
    for k, p in enumerate(w.parts):
        for v in p.vertices:
            owner[v] = k
    for v in w.singletons:
        owner[v] = ("single", v)
    for e in back:
        a, b = tuple(e)
        if owner.get(a) != owner.get(b):
            errs.append(f"backward arc {{{a},{b}}} joins two different parts")

    if w.singletons and not g.singletons:
        errs.append("grammar does not allow singletons")

    def local_edges(vs):
        return {e for e in back if e <= set(vs)}

    n_sigma = n_tri = 0
    for p in w.parts:
        vs = sorted(p.vertices, key=pos.get)
        if list(p.positions) != [pos[v] for v in p.vertices] or list(p.vertices) != vs:
            errs.append(f"vertices or positions of {p.part} {vs} are not listed in order")
        if isinstance(p, StarWitness):
            if g.star is None:
                errs.append("grammar has no stars")
            want = {frozenset((p.center, x)) for x in p.leaves}
            if set(p.leaves) | {p.center} != set(vs) or local_edges(vs) != want:
                errs.append(f"star {vs} does not match its backward arcs")
            r = vs.index(p.center)
            kind = "left" if r == 0 else "right" if r == len(vs) - 1 else "middle"
            if kind != p.kind:
                errs.append(f"star {vs} is a {kind} star, not {p.kind}")
            if g.star is not None and not g.star(p):
                errs.append(f"star {vs} of kind {p.kind} is not allowed")
        elif isinstance(p, SuperNebulaWitness):
            n_sigma += 1
            c1, c2 = p.centers
            l1, l2 = p.leaves_by_center
            want = {frozenset((c1, x)) for x in l1} | {frozenset((c2, x)) for x in l2}
            want.add(frozenset((c1, c2)))
            if local_edges(vs) != want or set(l1) | set(l2) | {c1, c2} != set(vs):
                errs.append(f"super 2-nebula {vs} does not match its backward arcs")
            for c, ls, sk in ((c1, l1, p.star_kinds[0]), (c2, l2, p.star_kinds[1])):
                if not ls:
                    errs.append("super 2-nebula star without leaves")
                elif sk == "left" and not all(pos[c] < pos[x] for x in ls):
                    errs.append(f"star of centre {c} is not a left star")
                elif sk == "right" and not all(pos[c] > pos[x] for x in ls):
                    errs.append(f"star of centre {c} is not a right star")
                elif sk not in ("left", "right"):
                    errs.append(f"star of centre {c} is not frontier")
            s = [0 if v in (c1, c2) else 1 for v in vs]
            sc = []
            for x in s:
                if not (x == 1 and sc and sc[-1] == 1):
                    sc.append(x)
            expect = {"left": [1, 0, 0], "middle": [0, 1, 0], "right": [0, 0, 1]}.get(p.kind)
            if sc != expect:
                errs.append(f"super 2-nebula {vs} has contracted leaf vector {sc}, not kind {p.kind}")
            if p.kind not in g.sigma_kinds:
                errs.append(f"super 2-nebula of kind {p.kind} is not allowed")
        elif isinstance(p, TriangleWitness):
            n_tri += 1
            if not g.triangles:
                errs.append("grammar has no triangles")
            a, b, c = p.vertices
            if not (pos[a] < pos[b] < pos[c]):
                errs.append("triangle vertices are not in increasing position")
            if not (t.has_arc(b, a) and t.has_arc(c, a) and t.has_arc(c, b)):
                errs.append(f"triangle {vs} is not transitive with all arcs backward")
        elif isinstance(p, K6Witness):
            if not g.k6:
                errs.append("grammar has no K6 gadgets")
            ps = [pos[v] for v in p.vertices]
            if not (ps[1] == ps[0] + 1 and ps[3] == ps[2] + 1 and ps[5] == ps[4] + 1
                    and ps == sorted(ps)):
                errs.append("K6 gadget positions violate the adjacency constraints")
            got = {(j, i) for i in range(6) for j in range(6)
                   if i < j and t.has_arc(p.vertices[j], p.vertices[i])}
            if got != set(K6_BACKWARD):
                errs.append("K6 gadget is not canonical")
    if g.sigma_count is not None and n_sigma != g.sigma_count:
        errs.append(f"expected {g.sigma_count} super 2-nebulas, found {n_sigma}")
    if g.triangle_count is not None and n_tri != g.triangle_count:
        errs.append(f"expected {g.triangle_count} triangles, found {n_tri}")

    def between(v, part):
        ls = part.leaves
        return any(pos[a] < pos[v] < pos[b] for a in ls for b in ls)

    parts = list(w.parts)
    for x in parts:
        for y in parts:
            if x is y:
                continue
            ys, xs = isinstance(y, StarWitness), isinstance(x, StarWitness)
            yg, xg = isinstance(y, SuperNebulaWitness), isinstance(x, SuperNebulaWitness)
            if STAR_IN_STAR in g.rules and xs and ys and between(x.center, y):
                errs.append(f"star centre {x.center} lies between leaves of another star")
            if STAR_IN_SIGMA in g.rules and xs and yg and between(x.center, y):
                errs.append(f"star centre {x.center} lies between leaves of a super 2-nebula")
            if SIGMA_IN_SIGMA in g.rules and xg and yg and any(between(c, y) for c in x.centers):
                errs.append("a super 2-nebula centre lies between leaves of another super 2-nebula")
            if SIGMA_IN_STAR in g.rules and xg and ys and any(between(c, y) for c in x.centers):
                errs.append("a super 2-nebula centre lies between leaves of a star")
            if TRIANGLE_IN_STAR in g.rules and isinstance(x, TriangleWitness) and ys:
                for role, v in zip(TRIANGLE_ROLES, x.vertices):
                    if role not in g.triangle_free_roles and between(v, y):
                        errs.append(f"triangle {role} vertex {v} lies between leaves of a star")
            if K6_IN_STAR in g.rules and isinstance(x, K6Witness) and ys:
                if any(between(c, y) for c in x.centers):
                    errs.append("a K6 centre lies between leaves of a star")
    if g.side is not None:
        stars = [p for p in parts if isinstance(p, StarWitness)]
        for tri in (p for p in parts if isinstance(p, TriangleWitness)):
            ext = tri.right if g.side == "right" else tri.left
            for qi in stars:
                if not between(tri.center, qi):
                    continue
                if between(ext, qi):
                    errs.append("triangle centre and exterior lie between leaves of the same star")
                for qj in stars:
                    if between(ext, qj) and (any(between(v, qj) for v in qi.leaves)
                                             or any(between(v, qi) for v in qj.leaves)):
                        errs.append("stars holding the triangle centre and exterior interleave")
    return errs
