import math
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import assume, given, settings, strategies as st

from ehtour.core import Tournament, contains_subtournament, is_transitive_set, transitive_order
from ehtour.generators import (
    make_rng,
    random_central_triangular_galaxy,
    random_delta_galaxy,
    random_super_nebula,
    random_tournament,
)
from ehtour.keys import KeyConstructionError, bad_triplets, build_key, build_key_GK6
from ehtour.recognize import K6
from ehtour.smooth import (
    SmoothStructure,
    check_intersection_bound,
    density_search,
    epsilon_thresholds,
    extract_outcome,
    find_smooth,
    find_well_contained,
    key_pattern,
    plant_key,
    tr_upper_bound,
    verify_smooth,
    verify_well_contained,
    xi_labels,
)
from ehtour.core import PartialDigraph, tr_exact


# ---------------------------------------------------------------------------
# verify_smooth


def test_single_linear_set():
    t = random_tournament(5, make_rng(0))
    chi = SmoothStructure(t, [range(5)], (0,), Fraction(1, 2), Fraction(1, 3))
    assert verify_smooth(chi).ok


def test_backward_singletons_fail():
    t = Tournament.transitive(2)
    chi = SmoothStructure(t, [[1], [0]], (0, 0), Fraction(1, 2), Fraction(1, 2))
    rep = verify_smooth(chi)
    assert not rep.ok and any("1-lambda" in v for v in rep.violations)


def test_boundary_density_is_accepted():
    # one backward arc 2 -> 0 between {0,1} and {2,3}: the worst density is exactly 1/2
    t = Tournament.from_backward_arcs(4, [(2, 0)])
    chi = SmoothStructure(t, [[0, 1], [2, 3]], (0, 0), Fraction(1, 4), Fraction(1, 2))
    assert verify_smooth(chi).ok
    chi = SmoothStructure(t, [[0, 1], [2, 3]], (0, 0), Fraction(1, 4), Fraction(49, 100))
    assert not verify_smooth(chi).ok


def test_transitive_set_must_be_transitive():
    c3 = Tournament.from_backward_arcs(3, [(2, 0)])
    rep = verify_smooth(SmoothStructure(c3, [[0, 1, 2]], (1,), Fraction(1, 3), 0))
    assert not rep.ok


def test_overlapping_sets():
    t = Tournament.transitive(3)
    assert not verify_smooth(SmoothStructure(t, [[0, 1], [1, 2]], (0, 0), 0, 0)).ok


def smooth_oracle(t, sets, w, c, lam):
    n = t.n
    trv = tr_exact(t)[0]
    for s, wi in zip(sets, w):
        if wi == 0 and Fraction(len(s)) < c * n:
            return False
        if wi == 1:
            if not is_transitive_set(t, s) or Fraction(len(s)) < c * trv:
                return False
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            for v in sets[i]:
                if Fraction(sum(t.has_arc(v, y) for y in sets[j]), len(sets[j])) < 1 - lam:
                    return False
            for v in sets[j]:
                if Fraction(sum(t.has_arc(x, v) for x in sets[i]), len(sets[i])) < 1 - lam:
                    return False
    return True


@given(st.integers(0, 2**32 - 1), st.integers(2, 10), st.data())
@settings(max_examples=200, deadline=None)
def test_verify_smooth_matches_recount(seed, n, data):
    rng = make_rng(seed)
    t = random_tournament(n, rng)
    k = data.draw(st.integers(1, min(3, n)))
    labels = data.draw(st.lists(st.integers(-1, k - 1), min_size=n, max_size=n))
    sets = [[v for v in range(n) if labels[v] == i] for i in range(k)]
    assume(all(sets))
    w = tuple(int(is_transitive_set(t, s)) * data.draw(st.integers(0, 1)) for s in sets)
    c = Fraction(data.draw(st.integers(1, 6)), 12)
    lam = Fraction(data.draw(st.integers(0, 8)), 8)
    chi = SmoothStructure(t, sets, w, c, lam)
    assert verify_smooth(chi).ok == smooth_oracle(t, sets, w, c, lam)


def test_tr_upper_bound_is_sound():
    rng = make_rng(4)
    for n in range(1, 11):
        t = random_tournament(n, rng)
        assert tr_upper_bound(t) >= tr_exact(t)[0]


def test_large_host_uses_upper_bound():
    t = Tournament.transitive(30)
    rep = verify_smooth(SmoothStructure(t, [range(30)], (1,), Fraction(1, 2), 0))
    assert rep.ok and "upper bound" in rep.tr_note


# ---------------------------------------------------------------------------
# intersection bound


def planted_structures(count, seed):
    rng = make_rng(seed)
    out = []
    while len(out) < count:
        if rng.integers(0, 2):
            n_t, n_w = random_super_nebula(int(rng.integers(4, 7)), rng,
                                           accept=lambda t, w: len(bad_triplets(t, w)) > 0)
            g_t, g_w = random_delta_galaxy(int(rng.choice([3, 5])), rng)
            try:
                key = build_key(n_t, n_w, g_t, g_w)
            except KeyConstructionError:
                continue
            targets = {"N": n_t, "G": g_t}
        else:
            h_t, h_w = random_central_triangular_galaxy(int(rng.choice([3, 5, 6])), rng)
            key = build_key_GK6(h_t, h_w)
            targets = {"H": h_t, "K6": K6}
        chi, planted = plant_key(key, rng, block=int(rng.integers(2, 4)), linear=int(rng.integers(2, 4)))
        out.append((key, targets, chi, planted))
    return out


def test_intersection_trivial_cases():
    _, _, chi, _ = planted_structures(1, 0)[0]
    j = 1
    sj = chi.sets[j]
    inter, ok = check_intersection_bound(chi, j, sj, [], 1)
    assert inter == set(sj) and ok
    x = chi.sets[0][0]
    inter, ok = check_intersection_bound(chi, j, sj, [x], 1)
    assert ok and Fraction(len(inter)) >= (1 - chi.lam) * len(sj)


def test_intersection_preconditions():
    _, _, chi, _ = planted_structures(1, 1)[0]
    with pytest.raises(ValueError):
        check_intersection_bound(chi, 0, chi.sets[0], [chi.sets[0][0]], 1)
    with pytest.raises(ValueError):
        check_intersection_bound(chi, 0, chi.sets[0][:1], [], 1)


def test_intersection_bound_on_random_structures():
    rng = make_rng(99)
    for key, _, chi, _ in planted_structures(40, 2):
        assert verify_smooth(chi).ok
        for j in range(len(chi.sets)):
            sj = list(chi.sets[j])
            others = [v for i, s in enumerate(chi.sets) if i != j for v in s]
            for gamma in (Fraction(1, 2), Fraction(1)):
                size = math.ceil(gamma * len(sj))
                star = [sj[i] for i in rng.permutation(len(sj))[:size]]
                for k in range(0, min(3, len(others)) + 1):
                    a = [others[i] for i in rng.permutation(len(others))[:k]]
                    _, ok = check_intersection_bound(chi, j, star, a, gamma)
                    assert ok


# ---------------------------------------------------------------------------
# find_smooth


def test_find_smooth_trivial():
    t = Tournament.transitive(7)
    chi = find_smooth(t, 1, 0, (1,))
    assert chi is not None and sorted(chi.sets[0]) == list(range(7))
    r = random_tournament(7, make_rng(2))
    chi = find_smooth(r, 1, 0, (0,))
    assert chi is not None and sorted(chi.sets[0]) == list(range(7))


def test_find_smooth_random_twelve():
    rng = make_rng(12)
    for _ in range(5):
        t = random_tournament(12, rng)
        chi = find_smooth(t, Fraction(1, 6), Fraction(1, 2), (0, 1))
        assert chi is not None
        assert verify_smooth(chi).ok


def test_find_smooth_impossible_sizes():
    t = random_tournament(6, make_rng(3))
    assert find_smooth(t, 1, Fraction(1, 2), (0, 0)) is None


def test_find_smooth_exhaustive_fallback():
    # an unsatisfiable smoothness demand forces the exhaustive search to finish empty-handed
    c3 = Tournament.from_backward_arcs(3, [(2, 0)])
    assert find_smooth(c3, Fraction(1, 3), 0, (0, 0, 0)) is None
    # three singletons of a transitive triangle in order do work with lambda = 0
    t = Tournament.transitive(3)
    chi = find_smooth(t, Fraction(1, 3), 0, (0, 0, 0))
    assert chi is not None and verify_smooth(chi).ok


# ---------------------------------------------------------------------------
# xi labels


def test_xi_single_linear():
    t = random_tournament(4, make_rng(1))
    chi = SmoothStructure(t, [range(4)], (0,), 0, 0)
    assert set(xi_labels(chi, {}).label.values()) == {1}


def test_xi_formula_example():
    t = Tournament.transitive(14)
    sets = [[0, 1], list(range(2, 12)), [12, 13]]
    chi = SmoothStructure(t, sets, (0, 1, 0), 0, 0)
    lab = xi_labels(chi, {1: 2}).label
    assert [lab[v] for v in range(14)] == [1, 1] + [2] * 5 + [3] * 5 + [4, 4]


def test_xi_whole_transitive_set():
    t = Tournament.transitive(5)
    chi = SmoothStructure(t, [range(5)], (1,), 0, 0)
    assert set(xi_labels(chi, {0: 1}).label.values()) == {1}


def test_xi_leftover_unlabeled():
    t = Tournament.transitive(7)
    chi = SmoothStructure(t, [range(7)], (1,), 0, 0)
    xi = xi_labels(chi, {0: 3})
    assert xi.unlabeled == [6]
    assert [xi.label[v] for v in range(6)] == [1, 1, 2, 2, 3, 3]


def test_xi_delta_mismatch():
    t = Tournament.transitive(4)
    chi = SmoothStructure(t, [[0, 1], [2, 3]], (0, 1), 0, 0)
    with pytest.raises(ValueError):
        xi_labels(chi, {0: 1})


def test_xi_invariants_on_planted():
    for key, _, chi, _ in planted_structures(10, 3):
        w, delta, _ = key_pattern(key)
        xi = xi_labels(chi, delta)
        seq = [xi.label[v] for s, wi in zip(chi.sets, chi.w)
               for v in (transitive_order(chi.host, s) if wi else s) if v in xi.label]
        assert seq == sorted(seq)
        assert len(set(seq)) == w.count(0) + sum(delta.values())


# ---------------------------------------------------------------------------
# well-containment and outcomes


def test_empty_source():
    t = Tournament.transitive(3)
    chi = SmoothStructure(t, [[0, 1, 2]], (0,), 0, 0)
    assert verify_well_contained(chi, PartialDigraph(0, []), {}, {})
    assert find_well_contained(chi, PartialDigraph(0, []), {}) == {}


def test_single_vertex_source():
    t = Tournament.transitive(4)
    chi = SmoothStructure(t, [[0, 1], [2, 3]], (0, 0), 0, 0)
    f = find_well_contained(chi, PartialDigraph(1, [0]), {})
    assert f[0] in (0, 1)


def test_too_small_for_injectivity():
    t = Tournament.transitive(3)
    chi = SmoothStructure(t, [[0, 1, 2]], (1,), 0, 0)
    src = PartialDigraph.from_arcs(4, [(0, 1), (2, 3)])
    assert find_well_contained(chi, src, {0: 4}) is None


def test_planted_copies_and_outcomes():
    seen = set()
    for key, targets, chi, planted in planted_structures(60, 4):
        w, delta, mut = key_pattern(key)
        assert verify_smooth(chi).ok
        assert verify_well_contained(chi, mut, planted, delta)
        f = find_well_contained(chi, mut, delta)
        assert f is not None and verify_well_contained(chi, mut, f, delta)
        out = extract_outcome(chi.host, f, key)
        sub = chi.host.induced(out.vertices())
        assert contains_subtournament(sub, targets[out.target]) is not None
        assert sub == targets[out.target]
        seen.add(out.target)
    assert seen == {"N", "G", "H", "K6"}


def test_perturbed_embedding_fails():
    key, _, chi, planted = planted_structures(1, 5)[0]
    _, delta, mut = key_pattern(key)
    f = dict(planted)
    f[0], f[1] = f[1], f[0]
    assert not verify_well_contained(chi, mut, f, delta)
    g = dict(planted)
    g[1] = g[0]
    assert not verify_well_contained(chi, mut, g, delta)


def orient_removed(chi, key, planted, want_forward):
    """Return a host in which each removed arc's image points as requested."""
    pos = {v: i for i, v in enumerate(key.ordering)}
    host = chi.host
    for (a, b), fwd in zip(key.removed_forward_arcs, want_forward):
        x, y = planted[pos[a]], planted[pos[b]]
        if host.has_arc(x, y) != fwd:
            host = host.reverse_arc(x, y) if host.has_arc(x, y) else host.reverse_arc(y, x)
    return host


def test_outcome_cases_forced():
    rng = make_rng(6)
    n_t, n_w = random_super_nebula(6, rng, accept=lambda t, w: len(bad_triplets(t, w)) > 1)
    g_t, g_w = random_delta_galaxy(5, rng)
    key = build_key(n_t, n_w, g_t, g_w)
    chi, planted = plant_key(key, rng)
    m = len(key.removed_forward_arcs)
    host = orient_removed(chi, key, planted, [True] * m)
    out = extract_outcome(host, planted, key)
    assert out.target == "N" and host.induced(out.vertices()) == n_t
    host = orient_removed(chi, key, planted, [True] * (m - 1) + [False])
    out = extract_outcome(host, planted, key)
    assert out.target == "G" and host.induced(out.vertices()) == g_t

    h_t, h_w = random_central_triangular_galaxy(5, rng)
    key = build_key_GK6(h_t, h_w)
    chi, planted = plant_key(key, rng)
    host = orient_removed(chi, key, planted, [True, True])
    out = extract_outcome(host, planted, key)
    assert out.target == "K6" and host.induced(out.vertices()) == K6
    for pattern in ([False, True], [True, False], [False, False]):
        host = orient_removed(chi, key, planted, pattern)
        out = extract_outcome(host, planted, key)
        assert out.target == "H" and host.induced(out.vertices()) == h_t


# ---------------------------------------------------------------------------
# density search


def test_matched_pairs_complete():
    t = Tournament.transitive(7)
    got = density_search(t, "matched_pairs", X=[4, 5, 6], Y=[0, 1])
    assert len(got) == 2 and all(t.has_arc(y, x) for x, y in got)


def test_linked_vertex_complete():
    t = Tournament.transitive(6)
    got = density_search(t, "linked_vertex", A=[2, 3], S=[[4], [5]], P=[[0], [1]])
    assert got is not None and got[0] in (2, 3)


def test_bad_mode():
    with pytest.raises(ValueError):
        density_search(Tournament.transitive(2), "telepathy")
    with pytest.raises(ValueError):
        density_search(Tournament.transitive(3), "matched_pairs", X=[0, 1], Y=[1, 2])


def max_matching_oracle(t, x, y):
    best = 0
    for r in range(min(len(x), len(y)), 0, -1):
        for xs in combinations(x, r):
            for ys in combinations(y, r):
                # try every bijection
                from itertools import permutations
                if any(all(t.has_arc(b, a) for a, b in zip(xs, p)) for p in permutations(ys)):
                    return r
    return best


def random_split(rng, n, parts):
    labels = rng.integers(-1, parts, size=n)
    return [[v for v in range(n) if labels[v] == i] for i in range(parts)]


def test_density_search_agrees_with_enumeration():
    rng = make_rng(13)
    for _ in range(120):
        n = int(rng.integers(3, 11))
        t = random_tournament(n, rng)
        x, y = random_split(rng, n, 2)
        if x and y and len(x) <= 4 and len(y) <= 4:
            got = density_search(t, "matched_pairs", X=x, Y=y)
            assert len(got) == max_matching_oracle(t, x, y)
            assert len({a for a, _ in got}) == len(got) == len({b for _, b in got})
        parts = random_split(rng, n, 4)
        a_set, s_sets, p_sets = parts[0], [p for p in parts[1:3] if p], [p for p in parts[3:] if p]
        if a_set:
            got = density_search(t, "linked_vertex", A=a_set, S=s_sets, P=p_sets)
            brute = any(all(any(t.has_arc(g, s) for s in S) for S in s_sets)
                        and all(any(t.has_arc(p, g) for p in P) for P in p_sets) for g in a_set)
            assert (got is not None) == brute
            if got:
                g, ss, ps = got
                assert all(t.has_arc(g, s) for s in ss) and all(t.has_arc(p, g) for p in ps)
        parts = random_split(rng, n, 5)
        a1, a2, groups = parts[0], parts[1], [p for p in parts[2:] if p]
        if a1 and a2:
            m = int(rng.integers(0, len(groups) + 1))
            for variant in (1, 2, 3):
                got = density_search(t, "linked_pair", A1=a1, A2=a2, S=groups, m=m, variant=variant)
                brute = None
                for xa, yb in product(a1, a2):
                    for pick in product(*groups):
                        if linked_pair_holds(t, xa, yb, pick, m, variant):
                            brute = (xa, yb, pick)
                            break
                    if brute:
                        break
                assert (got is not None) == (brute is not None)
                if got:
                    assert linked_pair_holds(t, got[0], got[1], got[2], m, variant)
        a_set, g_set = random_split(rng, n, 2)
        if a_set and g_set:
            got = density_search(t, "crossing_arc", A=a_set, G=g_set)
            into = any(t.has_arc(a, g) for a in a_set for g in g_set)
            back = any(t.has_arc(g, a) for a in a_set for g in g_set)
            assert (got is not None) == (into and back)


def linked_pair_holds(t, a, b, pick, m, variant):
    head, tail = pick[:m], pick[m:]
    if not t.has_arc(b, a):
        return False
    if variant == 1:
        return all(t.has_arc(s, a) for s in head) and all(t.has_arc(b, s) for s in tail)
    if variant == 2:
        return all(t.has_arc(b, s) for s in head) and all(t.has_arc(a, s) for s in tail)
    return all(t.has_arc(s, a) for s in head) and all(t.has_arc(s, b) for s in tail)


# ---------------------------------------------------------------------------
# thresholds


def test_threshold_examples():
    got = epsilon_thresholds(c=Fraction(1, 2))
    assert got["matched_pairs"] == pytest.approx(0.5, abs=1e-12)
    assert epsilon_thresholds(delta=1)["lambda_key"] == Fraction(1, 16)
    assert epsilon_thresholds(h=1)["lambda_gk6"] == Fraction(1, 4**5)
    assert epsilon_thresholds(c=Fraction(1, 2), f=1)["crossing_arc"] == math.inf
    near = epsilon_thresholds(c=Fraction(1, 2), f=Fraction(999, 1000))["crossing_arc"]
    far = epsilon_thresholds(c=Fraction(1, 2), f=Fraction(1, 2))["crossing_arc"]
    assert near > far == pytest.approx(1.0)


def test_threshold_domains():
    with pytest.raises(ValueError):
        epsilon_thresholds(c=Fraction(3, 2))
    with pytest.raises(ValueError):
        epsilon_thresholds(c=Fraction(1, 2), fs=[Fraction(1)])
    with pytest.raises(ValueError):
        epsilon_thresholds(delta=0)


def test_linked_thresholds():
    got = epsilon_thresholds(c=Fraction(1, 2), f=Fraction(1, 2), t=2, fs=[Fraction(1, 2)],
                             ls=[Fraction(1, 4)])
    assert got["linked_pair"] == pytest.approx(min(math.log(0.5) / math.log(1 / 8),
                                                   math.log(0.5) / math.log(1 / 8)))
    assert got["linked_vertex"] == pytest.approx(min(math.log(0.5) / math.log(1 / 8),
                                                     math.log(0.75) / math.log(1 / 8)))
