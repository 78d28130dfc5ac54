from __future__ import annotations

import itertools
import random

import pytest

from conftest import random_word, seeded_rep
from multiforge.gallery import m_subgroup_rep
from multiforge.permrep import (
    PermRep,
    canonical_relabel,
    count_order_dividing,
    evaluate,
    format_rep,
    intersect_reps,
    orbits,
    parse_permutation,
    parse_rep,
    random_order_dividing,
    random_rep,
    same_up_to_relabeling,
    stabilizer_contains,
    validate,
)
from multiforge.words import EMPTY_WORD, Params, Word, generator, multiply, parse_word, theta


PATH_REP = PermRep(Params(1, 2), 3, ((1, 0, 2), (0, 2, 1)), 0)  # (1 2), (2 3)


def test_validate_examples():
    p = Params(1, 2)
    assert validate(PermRep(p, 1, ((0,), (0,)), 0)).ok
    assert validate(PATH_REP).ok
    two_orbits = PermRep(p, 4, ((1, 0, 2, 3), (0, 1, 3, 2)), 0)
    diag = validate(two_orbits)
    assert not diag.ok and not diag.transitive


def test_validate_rejects_non_permutation_and_bad_order():
    p = Params(1, 2)
    assert not validate(PermRep(p, 3, ((0, 0, 1), (0, 1, 2)), 0)).ok
    three_cycle = PermRep(p, 3, ((1, 2, 0), (0, 1, 2)), 0)
    diag = validate(three_cycle)
    assert not diag.ok and not diag.order_divides_k[0]


def test_evaluate_examples():
    p = Params(1, 2)
    for point in range(3):
        assert evaluate(EMPTY_WORD, point, PATH_REP) == point
    rep = m_subgroup_rep(p)  # points are (Z/2)^2, coordinates (c0, c1)
    image = evaluate(parse_word("a1^1 a0^1"), 0, rep)
    assert image == 3  # (0,0) -> (1,1) under the exponent-sum action
    with pytest.raises(ValueError):
        evaluate(EMPTY_WORD, 7, PATH_REP)


def test_evaluate_generator_powers(rng):
    rep = seeded_rep(2, 3, 9, 4)
    for i in range(3):
        for l in range(1, 3):
            w = generator(i, l)
            for point in range(rep.n):
                expect = point
                for _ in range(l):
                    expect = rep.betas[i][expect]
                assert evaluate(w, point, rep) == expect


def test_evaluate_respects_multiply(rng):
    rep = seeded_rep(2, 3, 12, 9)
    p = rep.params
    for _ in range(200):
        u, v = random_word(p, rng), random_word(p, rng)
        point = rng.randrange(rep.n)
        assert evaluate(multiply(u, v, p), point, rep) == evaluate(
            u, evaluate(v, point, rep), rep
        )


def test_orbits_full_color_set_is_discrete():
    rep = seeded_rep(2, 2, 8, 1)
    part = orbits(rep, frozenset({0, 1, 2}))
    assert part.count == rep.n
    assert part.reps == list(range(rep.n))


def test_orbits_m22_single_color():
    rep = m_subgroup_rep(Params(2, 2))  # points (Z/2)^3
    part = orbits(rep, frozenset({0}))
    assert part.count == 2
    assert sorted(len(m) for m in part.members()) == [4, 4]
    # orbit id tracks the first coordinate
    for point in range(8):
        assert part.class_ids[point] == point // 4


def test_orbits_trivial_rep():
    rep = PermRep(Params(2, 2), 1, ((0,), (0,), (0,)), 0)
    for size in (1, 2, 3):
        for colors in itertools.combinations(range(3), size):
            assert orbits(rep, frozenset(colors)).count == 1


def test_orbit_refinement(rng):
    rep = seeded_rep(3, 2, 12, 2)
    for _ in range(30):
        small = frozenset(
            rng.sample(range(4), rng.randint(1, 3))
        )
        big = small | {rng.randrange(4)}
        coarse, fine = orbits(rep, small), orbits(rep, big)
        for orbit in fine.members():
            assert len({coarse.class_ids[p] for p in orbit}) == 1


def test_stabilizer_examples(rng):
    assert stabilizer_contains(EMPTY_WORD, PATH_REP)
    assert not stabilizer_contains(generator(0), PATH_REP)
    rep = m_subgroup_rep(Params(2, 3))
    p = rep.params
    for _ in range(500):
        w = random_word(p, rng)
        expected = all(theta(w, i, p) == 0 for i in range(3))
        assert stabilizer_contains(w, rep) == expected


def test_stabilizer_closed_under_group_ops(rng):
    rep = seeded_rep(2, 2, 8, 6)
    p = rep.params
    members = []
    for _ in range(600):
        w = random_word(p, rng)
        if stabilizer_contains(w, rep):
            members.append(w)
    assert len(members) >= 2
    for u, v in zip(members, members[1:]):
        assert stabilizer_contains(multiply(u, v, p), rep)
        assert stabilizer_contains(u.inverse(), rep)


# -- sampler -------------------------------------------------------------------

def brute_order_dividing(n: int, k: int) -> set[tuple[int, ...]]:
    out = set()
    for perm in itertools.permutations(range(n)):
        ok = True
        for start in range(n):
            length, q = 1, perm[start]
            while q != start:
                q = perm[q]
                length += 1
            if k % length:
                ok = False
                break
        if ok:
            out.add(perm)
    return out


def test_count_matches_brute_force():
    for n in range(1, 8):
        for k in (1, 2, 3, 4, 6):
            assert count_order_dividing(n, k) == len(brute_order_dividing(n, k)), (n, k)


def test_sampler_support_n4_k2():
    target = brute_order_dividing(4, 2)
    assert len(target) == 10
    seen = set()
    rng = random.Random(0)
    for _ in range(10_000):
        seen.add(random_order_dividing(4, 2, rng))
        if seen == target:
            break
    assert seen == target


def test_sampler_k1_forces_identity():
    rng = random.Random(3)
    assert random_order_dividing(5, 1, rng) == (0, 1, 2, 3, 4)
    assert count_order_dividing(5, 1) == 1


def test_sampler_uniformity_smoke():
    # chi-square style sanity: each of the 10 supports roughly 1/10 of draws
    rng = random.Random(11)
    counts: dict[tuple, int] = {}
    draws = 20_000
    for _ in range(draws):
        perm = random_order_dividing(4, 2, rng)
        counts[perm] = counts.get(perm, 0) + 1
    assert len(counts) == 10
    for c in counts.values():
        assert abs(c - draws / 10) < draws / 10 * 0.15


def test_random_rep_determinism_and_validity():
    p = Params(2, 3)
    a = random_rep(p, 30, seed=7)
    b = random_rep(p, 30, seed=7)
    assert a == b and a is not None
    assert validate(a).ok
    hits = sum(1 for s in range(100) if random_rep(p, 30, seed=s) is not None)
    assert hits >= 90


def test_random_rep_order_always_holds():
    p = Params(1, 2)  # intransitive draws are common here
    for seed in range(40):
        rep = random_rep(p, 6, seed=seed)
        if rep is None:
            continue
        diag = validate(rep)
        assert all(diag.order_divides_k)


# -- intersections ----------------------------------------------------------------

def test_intersect_with_trivial_and_self():
    rep = seeded_rep(2, 2, 6, 12)
    trivial = PermRep(rep.params, 1, ((0,),) * 3, 0)
    meet, _ = intersect_reps(rep, trivial)
    assert same_up_to_relabeling(meet, rep)
    meet2, _ = intersect_reps(rep, rep)
    assert same_up_to_relabeling(meet2, rep)


def test_intersect_two_index_two_reps():
    p = Params(1, 2)
    r1 = PermRep(p, 2, ((1, 0), (0, 1)), 0)
    r2 = PermRep(p, 2, ((0, 1), (1, 0)), 0)
    meet, pairs = intersect_reps(r1, r2)
    assert meet.n == 4
    assert sorted(pairs) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_intersect_projections_commute(rng):
    r1 = seeded_rep(2, 3, 6, 21)
    r2 = seeded_rep(2, 3, 8, 22)
    meet, pairs = intersect_reps(r1, r2)
    assert validate(meet).ok
    for i in range(3):
        for point, (p1, p2) in enumerate(pairs):
            image = meet.betas[i][point]
            assert pairs[image] == (r1.betas[i][p1], r2.betas[i][p2])


def test_intersect_requires_same_params():
    with pytest.raises(ValueError):
        intersect_reps(seeded_rep(1, 2, 4, 0), seeded_rep(2, 2, 4, 0))


# -- canonical form and text -------------------------------------------------------

def test_canonical_relabel_fixes_root_and_is_invariant():
    rep = seeded_rep(2, 2, 8, 30)
    canon = canonical_relabel(rep)
    assert canon.root == 0
    # relabeling the points arbitrarily (fixing nothing) yields the same form
    rng = random.Random(5)
    sigma = list(range(rep.n))
    rng.shuffle(sigma)
    inv = [0] * rep.n
    for t, s in enumerate(sigma):
        inv[s] = t
    betas = tuple(
        tuple(inv[beta[sigma[t]]] for t in range(rep.n)) for beta in rep.betas
    )
    shuffled = PermRep(rep.params, rep.n, betas, inv[rep.root])
    assert same_up_to_relabeling(rep, shuffled)


def test_rep_text_round_trip():
    rep = seeded_rep(2, 3, 9, 40)
    text = format_rep(rep)
    assert parse_rep(text) == rep
    assert text.splitlines()[0] == "2 3 9 1"


def test_parse_permutation_cycle_notation():
    assert parse_permutation("(1 2)(3 4)", 5) == (1, 0, 3, 2, 4)
    assert parse_permutation("3 1 2", 3) == (2, 0, 1)
    with pytest.raises(ValueError):
        parse_permutation("1 1 2", 3)
