"""Random tournaments and random structured tournaments.

Structured samples are built under the identity ordering: positions are split
into blocks, each block is given a shape (star, super 2-nebula, triangle,
singleton), the shape fixes which pairs are backward, and every other pair
points forward.  Samples are kept only if the recogniser accepts them for the
requested family.
"""

from __future__ import annotations

import numpy as np

from .core import Tournament
from .recognize import DecompositionWitness, recognize_under

__all__ = [
    "make_rng",
    "random_tournament",
    "random_structure",
    "random_super_nebula",
    "random_delta_galaxy",
    "random_central_triangular_galaxy",
]


def make_rng(seed=None, spawn_key: tuple[int, ...] = ()) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn_key))


def random_tournament(n: int, rng: np.random.Generator) -> Tournament:
    """Each pair oriented by an independent fair coin."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rows = [0] * n
    coins = rng.integers(0, 2, size=n * (n - 1) // 2)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if coins[k]:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            k += 1
    return Tournament(n, rows)


def _shape_edges(block: list[int], shape: str, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Backward pairs (later, earlier) realising ``shape`` on sorted positions ``block``."""
    k = len(block)
    edges: list[tuple[int, int]] = []
    if shape == "star":
        c = block[int(rng.integers(0, k))]
        edges = [(c, x) for x in block if x != c]
    elif shape == "frontier-star":
        c = block[0] if rng.integers(0, 2) else block[-1]
        edges = [(c, x) for x in block if x != c]
    elif shape == "triangle":
        a, b, c = block
        edges = [(a, b), (a, c), (b, c)]
    elif shape == "sigma":
        # choose the kind, then the centres' places and a leaf split
        kind = ("left", "middle", "right")[int(rng.integers(0, 3))]
        if kind == "left":
            c1, c2 = block[-2], block[-1]
        elif kind == "middle":
            c1, c2 = block[0], block[-1]
        else:
            c1, c2 = block[0], block[1]
        leaves = [x for x in block if x not in (c1, c2)]
        cut = int(rng.integers(1, len(leaves)))
        perm = list(rng.permutation(len(leaves)))
        l1 = [leaves[i] for i in perm[:cut]]
        l2 = [leaves[i] for i in perm[cut:]]
        edges = [(c1, c2)] + [(c1, x) for x in l1] + [(c2, x) for x in l2]
    return [(max(a, b), min(a, b)) for a, b in edges]


def random_structure(n: int, rng: np.random.Generator, shapes: dict[str, float],
                     contiguous: bool = False) -> Tournament:
    """A tournament whose backward arcs under the identity are a union of shapes.

    ``shapes`` maps shape names (``single``, ``star``, ``frontier-star``,
    ``triangle``, ``sigma``) to weights; infeasible sizes are skipped.
    """
    order = list(range(n)) if contiguous else [int(x) for x in rng.permutation(n)]
    names = list(shapes)
    weights = np.array([shapes[s] for s in names], dtype=float)
    back: list[tuple[int, int]] = []
    i = 0
    while i < n:
        left = n - i
        ok = []
        for s in names:
            lo = {"single": 1, "star": 2, "frontier-star": 2, "triangle": 3, "sigma": 4}[s]
            if lo <= left and not (s == "triangle" and left < 3):
                ok.append(s)
        if not ok:
            break
        w = np.array([shapes[s] for s in ok], dtype=float)
        shape = ok[int(rng.choice(len(ok), p=w / w.sum()))]
        if shape == "single":
            size = 1
        elif shape == "triangle":
            size = 3
        else:
            lo = 4 if shape == "sigma" else 2
            size = int(rng.integers(lo, min(left, lo + 2) + 1))
        block = sorted(order[i:i + size])
        i += size
        if shape != "single":
            back += _shape_edges(block, shape, rng)
    return Tournament.from_backward_arcs(n, back)


def _sample(n, rng, shapes, grammar, accept=None, tries=10_000) -> tuple[Tournament, DecompositionWitness]:
    for _ in range(tries):
        t = random_structure(n, rng, shapes)
        w = recognize_under(t, range(n), grammar)
        if w is not None and (accept is None or accept(t, w)):
            return t, w
    raise RuntimeError(f"no {grammar} on {n} vertices found in {tries} tries")


def random_super_nebula(n: int, rng: np.random.Generator, regular: bool = True, accept=None):
    shapes = {"star": 2.0, "sigma": 1.0}
    if not regular:
        shapes["single"] = 1.0
    return _sample(n, rng, shapes, "regular-super-nebula" if regular else "super-nebula", accept)


def random_delta_galaxy(n: int, rng: np.random.Generator, accept=None):
    if n < 3 or n == 4:
        raise ValueError("a regular delta-galaxy needs 3 or at least 5 vertices")

    def one_triangle(t, w):
        return len(w.triangles) == 1 and (accept is None or accept(t, w))

    return _sample(n, rng, {"frontier-star": 2.0, "triangle": 1.0}, "regular-delta-galaxy",
                   one_triangle)


def random_central_triangular_galaxy(n: int, rng: np.random.Generator, triangles: int = 1,
                                     accept=None):
    def count(t, w):
        return len(w.triangles) == triangles and (accept is None or accept(t, w))

    return _sample(n, rng, {"frontier-star": 2.0, "triangle": 1.0},
                   "regular-central-triangular-galaxy", count)
