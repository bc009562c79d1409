import random
from itertools import combinations

import pytest

from ilpk import (brute_feasible, build_gaifman, check_assignment, gen_hitting_set,
                  gen_or_composition, gen_random_protrusion, gen_subset_sum, make_nice,
                  normalize, serialize_instance, solve_dp, solve_with_modulator,
                  validate_protrusion_decomposition, validate_tree_decomposition)
from ilpk.errors import ModelError


def subset_sum_bruteforce(items, target):
    return any(sum(c) == target
               for k in range(len(items) + 1) for c in combinations(items, k))


def hitting_set_bruteforce(universe_size, sets, k):
    universe = range(universe_size)
    for size in range(k + 1):
        for pick in combinations(universe, size):
            chosen = set(pick)
            if all(chosen & set(s) for s in sets):
                return True
    return False


def max_independent_set(n, edges):
    es = {(min(u, v), max(u, v)) for u, v in edges}
    best = 0
    for mask in range(1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if all((a, b) not in es for a, b in combinations(members, 2)):
            best = max(best, len(members))
    return best


def test_subset_sum_verdicts():
    ilp, _ = gen_subset_sum([3, 5], 8)
    assert brute_feasible(ilp).feasible
    ilp2, _ = gen_subset_sum([3, 5], 7)
    assert not brute_feasible(ilp2).feasible


def test_subset_sum_requires_items():
    with pytest.raises(ModelError):
        gen_subset_sum([], 0)


def test_subset_sum_randomized_against_bruteforce():
    rng = random.Random(71)
    for _ in range(40):
        n = rng.randint(1, 6)
        items = [rng.randint(-20, 50) for _ in range(n)]
        target = rng.randint(-10, 60)
        ilp, td = gen_subset_sum(items, target)
        report = validate_tree_decomposition(build_gaifman(ilp), td)
        assert report.ok and td.width <= 2
        nilp = normalize(ilp)
        res = solve_dp(nilp, make_nice(nilp, td))
        assert res.feasible == subset_sum_bruteforce(items, target)
        if res.feasible:
            assert check_assignment(ilp, res.witness)


def test_hitting_set_verdicts():
    ilp, _ = gen_hitting_set(2, [[0], [1]], 1)
    assert not brute_feasible(ilp).feasible
    ilp2, _ = gen_hitting_set(2, [[0], [1]], 2)
    assert brute_feasible(ilp2).feasible


def test_hitting_set_rejects_empty_set():
    with pytest.raises(ModelError):
        gen_hitting_set(2, [[0], []], 1)


def test_hitting_set_modified_entry_count_and_values():
    ilp, modified = gen_hitting_set(3, [[0, 1], [2]], 1)
    assert len(modified) == 3
    for row, col in modified:
        assert ilp.constraints[row].coeffs[col] == -2  # -|F| with |F| = 2


def test_hitting_set_exhaustive_small():
    all_sets = [list(s) for size in (1, 2, 3)
                for s in combinations(range(3), size)]
    rng = random.Random(72)
    for _ in range(30):
        fam = rng.sample(all_sets, rng.randint(1, 3))
        k = rng.randint(0, 3)
        ilp, _ = gen_hitting_set(3, fam, k)
        assert brute_feasible(ilp).feasible == hitting_set_bruteforce(3, fam, k)


def test_or_composition_single_edge():
    ilp, pd = gen_or_composition([(2, [(0, 1)])], 1)
    assert brute_feasible(ilp).feasible
    assert validate_protrusion_decomposition(ilp, pd).ok


def test_or_composition_rejects_mismatched_vertex_counts():
    with pytest.raises(ModelError):
        gen_or_composition([(2, []), (3, [])], 1)


def test_or_composition_randomized_or_of_answers():
    rng = random.Random(73)
    for _ in range(10):
        n = rng.randint(2, 3)
        t = rng.randint(1, 2)
        graphs = []
        for _ in range(t):
            edges = [e for e in combinations(range(n), 2) if rng.random() < 0.6]
            graphs.append((n, edges))
        k = rng.randint(1, n)
        ilp, pd = gen_or_composition(graphs, k)
        expected = any(max_independent_set(n, e) >= k for n, e in graphs)
        assert brute_feasible(ilp).feasible == expected
        assert validate_protrusion_decomposition(ilp, pd).ok
        s = next(i for i, v in enumerate(ilp.vars) if v.name == "s")
        res = solve_with_modulator(ilp, list(range(n)) + [s])
        assert res.feasible == expected
        if res.feasible:
            assert check_assignment(ilp, res.witness)


def test_random_protrusion_deterministic_bytes():
    a = gen_random_protrusion(3, 2, 2, 3, seed=99)
    b = gen_random_protrusion(3, 2, 2, 3, seed=99)
    assert serialize_instance(a[0], {"protrusion_decomposition": a[1]}) == \
        serialize_instance(b[0], {"protrusion_decomposition": b[1]})
    c = gen_random_protrusion(3, 2, 2, 3, seed=100)
    assert serialize_instance(a[0]) != serialize_instance(c[0])


def test_random_protrusion_always_validates():
    for seed in range(50):
        ilp, pd = gen_random_protrusion(k=3, r=2, d=3, parts=3, seed=seed)
        report = validate_protrusion_decomposition(ilp, pd)
        assert report.ok, (seed, report.violations)
    for seed in range(25):
        ilp, pd = gen_random_protrusion(k=2, r=1, d=2, parts=2, seed=seed)
        assert validate_protrusion_decomposition(ilp, pd).ok
    for seed in range(25):
        ilp, pd = gen_random_protrusion(k=4, r=3, d=2, parts=4, seed=seed)
        assert validate_protrusion_decomposition(ilp, pd).ok


def test_random_protrusion_rejects_bad_parameters():
    with pytest.raises(ModelError):
        gen_random_protrusion(0, 1, 2, 1, seed=1)
    with pytest.raises(ModelError):
        gen_random_protrusion(1, 1, 1, 1, seed=1)
