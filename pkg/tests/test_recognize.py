from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from ehtour.core import SearchBudgetExceeded, SizeLimitExceeded, Tournament
from ehtour.generators import make_rng, random_structure, random_tournament
from ehtour.keys import operation_K6
from ehtour.recognize import (
    K6,
    GRAMMARS,
    K6Witness,
    classify_star_segment,
    evaluate_witness,
    find_K6_instances,
    find_triangles_under,
    get_grammar,
    is_canonical_K6,
    recognize_decomposition,
    recognize_super_2_nebula,
    recognize_under,
    witness_from_dict,
)


def canonical_form(t):
    return min(t.relabel(p).to_text() for p in permutations(range(t.n)))


def all_tournaments(n):
    pairs = list(combinations(range(n), 2))
    for m in range(1 << len(pairs)):
        rows = [0] * n
        for k, (i, j) in enumerate(pairs):
            if (m >> k) & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
        yield Tournament(n, rows)


def iso_classes(n):
    seen = {}
    for t in all_tournaments(n):
        seen.setdefault(canonical_form(t), t)
    return list(seen.values())


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def galaxy_oracle(t):
    """Try every ordering, every partition and every centre choice."""
    n = t.n
    for order in permutations(range(n)):
        pos = {v: i for i, v in enumerate(order)}
        back = {frozenset((u, v)) for u in range(n) for v in range(n)
                if u != v and t.has_arc(u, v) and pos[u] > pos[v]}
        for part in set_partitions(list(range(n))):
            blocks = [sorted(b, key=pos.get) for b in part]
            inside = set()
            for b in blocks:
                inside |= {frozenset(p) for p in combinations(b, 2)}
            if not back <= inside:
                continue
            options = []
            ok = True
            for b in blocks:
                if len(b) == 1:
                    continue
                have = {frozenset(p) for p in combinations(b, 2)} & back
                choices = []
                for c in (b[0], b[-1]):
                    if have == {frozenset((c, x)) for x in b if x != c}:
                        choices.append((c, [x for x in b if x != c]))
                if not choices:
                    ok = False
                    break
                options.append(choices)
            if not ok:
                continue

            def fine(stars):
                for c, _ in stars:
                    for c2, leaves in stars:
                        if c2 == c:
                            continue
                        lp = [pos[x] for x in leaves]
                        if min(lp) < pos[c] < max(lp):
                            return False
                return True

            def pick(i, chosen):
                if i == len(options):
                    return fine(chosen)
                return any(pick(i + 1, chosen + [ch]) for ch in options[i])

            if pick(0, []):
                return True
    return False


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_galaxy_agrees_with_exhaustive_oracle(n):
    for t in iso_classes(n):
        w = recognize_decomposition(t, "galaxy")
        assert (w is not None) == galaxy_oracle(t), t.to_text()
        if w is not None:
            assert evaluate_witness(t, w, "galaxy") == []


def test_star_segment_examples():
    t = Tournament.from_backward_arcs(2, [(1, 0)])
    right = classify_star_segment(t, [0, 1], [0, 1])
    left = classify_star_segment(t, [0, 1], [0, 1], center_choice="left")
    assert (right.kind, right.center) == ("right", 1)
    assert (left.kind, left.center) == ("left", 0)
    t = Tournament.from_backward_arcs(3, [(2, 0), (2, 1)])
    s = classify_star_segment(t, range(3), range(3))
    assert (s.kind, s.center, s.leaves) == ("right", 2, (0, 1))
    t = Tournament.from_backward_arcs(4, [(3, 2)])
    assert classify_star_segment(t, range(4), range(4)) is None


def test_middle_star():
    # centre at position 1: leaf before it points forward into it, leaves after point back
    t = Tournament.from_backward_arcs(4, [(1, 0), (2, 1), (3, 1)])
    s = classify_star_segment(t, range(4), range(4))
    assert (s.kind, s.center) == ("middle", 1)


def test_super_2_nebula_kinds():
    mid = Tournament.from_backward_arcs(4, [(3, 0), (1, 0), (3, 2)])
    assert recognize_super_2_nebula(mid, range(4)).kind == "middle"
    assert recognize_super_2_nebula(Tournament.transitive(5), range(5)) is None
    left = Tournament.from_backward_arcs(4, [(3, 2), (2, 0), (3, 1)])
    assert recognize_super_2_nebula(left, range(4)).kind == "left"
    right = Tournament.from_backward_arcs(4, [(1, 0), (2, 0), (3, 1)])
    assert recognize_super_2_nebula(right, range(4)).kind == "right"


def test_k6_sigma_part_is_middle():
    sub = K6.induced([0, 2, 3, 5])
    assert recognize_super_2_nebula(sub, range(4)).kind == "middle"
    # every super-nebula ordering of that part that keeps the canonical order agrees
    w = recognize_under(sub, range(4), "super-nebula")
    assert [p.kind for p in w.sigmas] == ["middle"]


def test_k6_canonical():
    assert is_canonical_K6(K6)
    assert not is_canonical_K6(Tournament.transitive(6))
    for u, v in combinations(range(6), 2):
        assert not is_canonical_K6(K6.reverse_arc(u, v) if K6.has_arc(u, v) else K6.reverse_arc(v, u))
    with pytest.raises(ValueError):
        is_canonical_K6(Tournament.transitive(5))


def test_k6_instances():
    got = find_K6_instances(K6, range(6))
    assert len(got) == 1 and got[0].centers == (0, 5)
    assert find_K6_instances(Tournament.transitive(8), range(8)) == []


def test_k6_grammars():
    assert recognize_under(K6, range(6), "super-nebula") is not None
    assert recognize_under(K6, range(6), "gk6") is not None
    assert recognize_under(K6, range(6), "middle-sigma-galaxy") is not None
    assert recognize_under(K6, range(6), "galaxy") is None
    assert recognize_under(K6, range(6), "nebula") is None


def test_triangles():
    c3 = Tournament.from_backward_arcs(3, [(2, 0)])
    for order in permutations(range(3)):
        assert find_triangles_under(c3, order) == []
    back3 = Tournament.from_backward_arcs(3, [(1, 0), (2, 0), (2, 1)])
    tri = find_triangles_under(back3, range(3))
    assert len(tri) == 1 and tri[0].vertices == (0, 1, 2)


def test_operation_leaves_a_triangle():
    inst = find_K6_instances(K6, range(6))[0]
    t, order, labels = operation_K6(K6, range(6), inst)
    tri = find_triangles_under(t, order)
    assert [tuple(labels[v] for v in x.vertices) for x in tri] == [(0, 3, 5)]


def test_central_triangular_galaxy_with_two_triangles_and_a_star():
    # left exteriors 0 and 1, star leaves 2 and 5 with the star centre at 6,
    # triangle centres 3 and 4 between the leaves, right exteriors 7 and 8
    arcs = [(6, 2), (6, 5)]
    arcs += [(3, 0), (7, 0), (7, 3)]
    arcs += [(4, 1), (8, 1), (8, 4)]
    t = Tournament.from_backward_arcs(9, arcs)
    w = recognize_under(t, range(9), "regular-central-triangular-galaxy")
    assert w is not None
    assert len(w.triangles) == 2 and len(w.stars) == 1
    assert recognize_under(t, range(9), "regular-triangular-galaxy") is None
    assert evaluate_witness(t, w) == []


def test_transitive_all_singletons():
    t = Tournament.transitive(6)
    for name, g in GRAMMARS.items():
        w = recognize_under(t, range(6), name)
        if g.singletons and g.triangle_count is None and g.sigma_count is None:
            assert w is not None and len(w.singletons) == 6 and not w.parts, name


def test_unknown_grammar():
    with pytest.raises(ValueError):
        get_grammar("no-such-family")


def test_size_and_budget_limits():
    rng = make_rng(0)
    t = random_tournament(12, rng)
    with pytest.raises(SizeLimitExceeded):
        recognize_decomposition(t, "galaxy")
    t = random_tournament(9, rng)
    with pytest.raises(SearchBudgetExceeded):
        recognize_decomposition(t, "super-nebula", max_nodes=5)


@st.composite
def structured(draw):
    n = draw(st.integers(2, 9))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = make_rng(seed)
    shapes = {"single": 1.0, "star": 2.0, "frontier-star": 2.0, "triangle": 1.0, "sigma": 1.0}
    return random_structure(n, rng, shapes, contiguous=draw(st.booleans()))


CHECKED = ["galaxy", "nebula", "super-nebula", "triangular-galaxy", "central-triangular-galaxy",
           "delta-galaxy", "lr-delta-galaxy", "cr-delta-galaxy", "cl-delta-galaxy", "sigma-galaxy",
           "gk6", "left-middle-super-nebula", "right-middle-super-nebula",
           "frontier-middle-super-nebula", "triangular-tournament", "super-left-nebula"]


@given(structured(), st.sampled_from(CHECKED))
@settings(max_examples=300, deadline=None)
def test_witnesses_pass_independent_evaluator(t, grammar):
    w = recognize_under(t, range(t.n), grammar)
    if w is not None:
        assert evaluate_witness(t, w, grammar) == []
        assert witness_from_dict(w.to_dict()) == w


@given(structured())
@settings(max_examples=150, deadline=None)
def test_grammar_containment(t):
    w = recognize_under(t, range(t.n), "galaxy")
    if w is not None:
        assert evaluate_witness(t, w, "nebula") == []
        assert evaluate_witness(t, w, "super-nebula") == []
    w = recognize_under(t, range(t.n), "nebula")
    if w is not None:
        assert evaluate_witness(t, w, "super-nebula") == []


@given(structured())
@settings(max_examples=100, deadline=None)
def test_k6_instances_are_canonical(t):
    for inst in find_K6_instances(t, range(t.n)):
        assert isinstance(inst, K6Witness)
        assert is_canonical_K6(t.induced(inst.vertices))


def test_evaluator_catches_a_broken_witness():
    t = Tournament.from_backward_arcs(3, [(2, 0), (2, 1)])
    w = recognize_under(t, range(3), "galaxy")
    flipped = t.reverse_arc(2, 1)
    assert evaluate_witness(flipped, w, "galaxy") != []
