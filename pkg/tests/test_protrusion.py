import random

import pytest

from ilpk import (BoundariedIlp, BoundarySet, Constraint, DomainInterval, Ilp,
                  ProtrusionDecomposition, Rel, Variable, brute_boundary_set, brute_feasible,
                  build_blocking_gadget, build_gaifman, gen_or_composition,
                  gen_random_protrusion, normalize, reduce_instance, replace_boundaried_tw,
                  treewidth_exact, validate_protrusion_decomposition)
from ilpk.errors import DecompositionError, ModelError

from helpers import (boundary_box_size, gadget_box_size, random_boundaried, solve_pipeline)


def vars_01(n):
    return tuple(Variable(f"v{i}", DomainInterval(0, 1)) for i in range(n))


def test_pd_trivial_all_in_y0():
    ilp = Ilp(vars_01(3), (Constraint({0: 1, 1: 1, 2: 1}, Rel.LE, 2),))
    pd = ProtrusionDecomposition(frozenset({0, 1, 2}), (), 1, 3)
    assert validate_protrusion_decomposition(ilp, pd).ok


def test_pd_rejects_part_adjacent_to_part():
    ilp = Ilp(vars_01(3), (Constraint({1: 1, 2: 1}, Rel.LE, 1),))
    pd = ProtrusionDecomposition(frozenset({0}), (frozenset({1}), frozenset({2})), 2, 2)
    report = validate_protrusion_decomposition(ilp, pd)
    assert any(rule == "pd.neighbors" for rule, _ in report.violations)


def test_pd_rejects_bad_partition_and_alpha():
    ilp = Ilp(vars_01(2), ())
    report = validate_protrusion_decomposition(
        ilp, ProtrusionDecomposition(frozenset({0}), (frozenset({0, 1}),), 1, 2))
    assert any(rule == "pd.partition" for rule, _ in report.violations)
    report2 = validate_protrusion_decomposition(
        ilp, ProtrusionDecomposition(frozenset({0, 1}), (), 1, 1))
    assert any(rule == "pd.alpha" for rule, _ in report2.violations)


def test_pd_width_violation_detected():
    # part {1,2,3} plus neighborhood {0} induces K4: treewidth 3 > r-1 = 1
    rows = tuple(Constraint({a: 1, b: 1}, Rel.LE, 1)
                 for a in range(4) for b in range(a + 1, 4))
    ilp = Ilp(vars_01(4), rows)
    pd = ProtrusionDecomposition(frozenset({0}), (frozenset({1, 2, 3}),), 2, 1)
    report = validate_protrusion_decomposition(ilp, pd)
    assert any(rule == "pd.width" for rule, _ in report.violations)


def test_or_composition_packaged_pd_validates_at_r5():
    tri = (3, [(0, 1), (1, 2)])
    ilp, pd = gen_or_composition([tri, (3, [])], 2)
    assert pd.r == 5
    report = validate_protrusion_decomposition(ilp, pd)
    assert report.ok, report.violations


def test_gadget_exact_example_r1_d2():
    gadget = build_blocking_gadget([DomainInterval(0, 1)], BoundarySet.of(1, [(1,)]))
    assert gadget.ilp.n == 3
    assert gadget.ilp.m == 9
    assert brute_boundary_set(gadget) == BoundarySet.of(1, [(0,)])


def test_gadget_empty_blocklist_is_domain_rows_only():
    gadget = build_blocking_gadget([DomainInterval(0, 2)] * 2, BoundarySet.of(2, []))
    assert gadget.ilp.n == 2
    assert gadget.ilp.m == 4
    assert brute_boundary_set(gadget) == BoundarySet.of(
        2, [(a, b) for a in range(3) for b in range(3)])


def test_gadget_r2_d2_single_block():
    gadget = build_blocking_gadget([DomainInterval(0, 1)] * 2, BoundarySet.of(2, [(0, 0)]))
    assert brute_boundary_set(gadget) == BoundarySet.of(2, [(0, 1), (1, 0), (1, 1)])


def test_gadget_rejects_r0_and_out_of_box_tuples():
    with pytest.raises(ModelError):
        build_blocking_gadget([], BoundarySet.of(0, []))
    with pytest.raises(ModelError):
        build_blocking_gadget([DomainInterval(0, 1)], BoundarySet.of(1, [(5,)]))


def test_gadget_coefficients_within_domain_size():
    domains = [DomainInterval(0, 2), DomainInterval(0, 1)]
    blocked = BoundarySet.of(2, [(0, 1), (2, 0)])
    gadget = build_blocking_gadget(domains, blocked)
    d = max(dom.size for dom in domains)
    for con in gadget.ilp.constraints:
        assert all(-d <= c <= d for c in con.coeffs.values())
        assert -d <= con.rhs <= d


def test_gadget_heterogeneous_domains():
    domains = [DomainInterval(1, 3), DomainInterval(0, 1)]
    blocked = BoundarySet.of(2, [(2, 0), (3, 1)])
    gadget = build_blocking_gadget(domains, blocked)
    expected = {(a, b) for a in (1, 2, 3) for b in (0, 1)} - {(2, 0), (3, 1)}
    assert brute_boundary_set(gadget) == BoundarySet.of(2, expected)


def test_replace_fully_feasible_subsystem_keeps_box():
    ilp = normalize(Ilp(vars_01(2), (Constraint({0: 1, 1: 1}, Rel.LE, 2),)))
    nilp, ngd = solve_pipeline(ilp)
    gadget = replace_boundaried_tw(BoundariedIlp(nilp, (0,)), ngd)
    assert gadget.ilp.n == 1 and gadget.ilp.m == 2
    assert brute_boundary_set(gadget) == BoundarySet.of(1, [(0,), (1,)])


def test_replace_forced_variable():
    ilp = normalize(Ilp(vars_01(2),
                        (Constraint({0: 1, 1: 1}, Rel.LE, 1),
                         Constraint({1: 1}, Rel.GE, 1))))
    nilp, ngd = solve_pipeline(ilp)
    gadget = replace_boundaried_tw(BoundariedIlp(nilp, (0,)), ngd)
    assert brute_boundary_set(gadget) == BoundarySet.of(1, [(0,)])


def test_replace_random_equivalence_and_laws(any_backend):
    rng = random.Random(61)
    checked = 0
    for _ in range(60):
        bilp = random_boundaried(rng, r_max=3, n_max=7, d_max=3)
        original = brute_boundary_set(bilp)
        blocked = boundary_box_size(bilp) - len(original)
        if gadget_box_size(bilp, blocked) > 1 << 20:
            continue
        nilp = normalize(bilp.ilp)
        _, ngd = solve_pipeline(nilp)
        gadget = replace_boundaried_tw(BoundariedIlp(nilp, bilp.boundary), ngd)
        assert brute_boundary_set(gadget) == original
        r = bilp.r
        assert gadget.ilp.n == r + 2 * r * blocked
        assert gadget.ilp.m == 2 * r + (6 * r + 1) * blocked
        checked += 1
    assert checked > 20


def test_replace_idempotent_on_gadgets():
    rng = random.Random(62)
    done = 0
    for _ in range(30):
        bilp = random_boundaried(rng, r_max=2, n_max=5, d_max=2)
        original = brute_boundary_set(bilp)
        blocked = boundary_box_size(bilp) - len(original)
        if blocked == 0 or gadget_box_size(bilp, blocked) > 1 << 16:
            continue
        nilp = normalize(bilp.ilp)
        _, ngd = solve_pipeline(nilp)
        gadget = replace_boundaried_tw(BoundariedIlp(nilp, bilp.boundary), ngd)
        _, ngd2 = solve_pipeline(gadget.ilp)
        gadget2 = replace_boundaried_tw(gadget, ngd2)
        assert brute_boundary_set(gadget2) == original
        assert gadget2.ilp.n == gadget.ilp.n
        done += 1
    assert done > 5


def test_gadget_treewidth_at_most_3r():
    rng = random.Random(63)
    seen = {1: 0, 2: 0}
    for _ in range(60):
        bilp = random_boundaried(rng, r_max=2, n_max=6, d_max=2)
        original = brute_boundary_set(bilp)
        blocked = boundary_box_size(bilp) - len(original)
        nilp = normalize(bilp.ilp)
        _, ngd = solve_pipeline(nilp)
        gadget = replace_boundaried_tw(BoundariedIlp(nilp, bilp.boundary), ngd)
        width, _ = treewidth_exact(build_gaifman(gadget.ilp))
        assert width <= 3 * bilp.r
        seen[bilp.r] += 1
    assert seen[1] > 5 and seen[2] > 5


def test_reduce_no_parts_is_identity():
    ilp = Ilp(vars_01(3), (Constraint({0: 1, 2: 1}, Rel.GE, 1),))
    pd = ProtrusionDecomposition(frozenset({0, 1, 2}), (), 1, 3)
    assert reduce_instance(ilp, pd) == ilp


def _box(ilp):
    out = 1
    for v in range(ilp.n):
        out *= ilp.domain(v).size
    return out


def test_reduce_random_protrusions_preserve_verdict(any_backend):
    rng = random.Random(64)
    checked = 0
    for seed in range(40):
        ilp, pd = gen_random_protrusion(k=3, r=2, d=2, parts=rng.randint(0, 3), seed=seed)
        reduced = reduce_instance(ilp, pd)
        assert reduced.n <= len(pd.y0) + pd.ell * (pd.r + 2 * pd.r * 2 ** pd.r)
        if _box(reduced) > 1 << 22:
            continue
        assert brute_feasible(reduced).feasible == brute_feasible(ilp).feasible
        checked += 1
    assert checked > 20


def test_reduce_r1_isolated_parts():
    marker_seen = 0
    for seed in range(60):
        ilp, pd = gen_random_protrusion(k=2, r=1, d=2, parts=2, seed=seed)
        reduced = reduce_instance(ilp, pd)
        assert brute_feasible(ilp).feasible == brute_feasible(reduced).feasible
        if any(con.support == frozenset() and con.rhs < 0 for con in reduced.constraints):
            marker_seen += 1
            assert not brute_feasible(reduced).feasible
    assert marker_seen > 0


def test_reduce_or_composition_small_matches_or_of_answers():
    # reduced instances are too wide for the oracle, so both sides are solved
    # by branching over the selector and the choice variables
    tri = (3, [(0, 1), (1, 2), (0, 2)])   # max independent set 1
    path = (3, [(0, 1)])                  # independent set {0 or 1, 2} of size 2
    from ilpk import solve_with_modulator

    def verdict(instance):
        mods = [i for i, v in enumerate(instance.vars)
                if v.name.startswith("x") or v.name == "s"]
        return solve_with_modulator(instance, mods).feasible

    ilp, pd = gen_or_composition([tri, path], 2)
    reduced = reduce_instance(ilp, pd)
    assert brute_feasible(ilp).feasible is True
    assert verdict(ilp) is True
    assert verdict(reduced) is True

    ilp2, pd2 = gen_or_composition([tri, tri], 2)
    reduced2 = reduce_instance(ilp2, pd2)
    assert brute_feasible(ilp2).feasible is False
    assert verdict(reduced2) is False


def test_reduce_rejects_invalid_pd():
    ilp = Ilp(vars_01(2), (Constraint({0: 1, 1: 1}, Rel.LE, 1),))
    pd = ProtrusionDecomposition(frozenset({0}), (frozenset({1}),), 1, 1)
    # the single part neighbors Y0, fine; but claim r=1 forces treewidth 0
    report = validate_protrusion_decomposition(ilp, pd)
    assert not report.ok
    with pytest.raises(DecompositionError):
        reduce_instance(ilp, pd)


def test_gadget_negative_domain_boundary():
    domains = [DomainInterval(-2, 0), DomainInterval(-1, 1)]
    blocked = BoundarySet.of(2, [(-2, -1), (0, 1), (-1, 0)])
    gadget = build_blocking_gadget(domains, blocked)
    expected = {(a, b) for a in (-2, -1, 0) for b in (-1, 0, 1)} - set(blocked.tuples)
    assert brute_boundary_set(gadget) == BoundarySet.of(2, expected)


def test_gadget_pinned_boundary_domain_and_fully_blocked_box():
    # a size-1 boundary domain degenerates the wrap variable to zero
    g = build_blocking_gadget([DomainInterval(2, 2), DomainInterval(0, 1)],
                              BoundarySet.of(2, [(2, 1)]))
    assert (g.ilp.n, g.ilp.m) == (6, 17)
    assert brute_boundary_set(g) == BoundarySet.of(2, [(2, 0)])
    # blocking the whole box yields an infeasible gadget
    g2 = build_blocking_gadget([DomainInterval(0, 1)], BoundarySet.of(1, [(0,), (1,)]))
    assert brute_boundary_set(g2) == BoundarySet.of(1, [])
    assert not brute_feasible(g2.ilp).feasible
