from __future__ import annotations

from math import comb

import pytest

from conftest import seeded_rep
from multiforge.complexes import check_morphism, is_surjective, validate_structure
from multiforge.gallery import m_subgroup_rep
from multiforge.permrep import PermRep, evaluate, same_up_to_relabeling, validate
from multiforge.quotient import (
    analyze,
    associated_subgroup_rep,
    associated_subgroup_round_trip,
    build_quotient,
    complex_line_graph,
    has_complete_skeleton,
    intersection_property,
    is_simplicial,
    is_upper_regular,
    line_graph,
    nerve_matches_base,
    quotient_map,
    quotient_map_surjective,
)
from multiforge.universal import build_ball
from multiforge.words import Params, Word


TRIVIAL = PermRep(Params(2, 2), 1, ((0,), (0,), (0,)), 0)


def test_index_one_gives_single_simplex():
    q = build_quotient(TRIVIAL)
    assert q.complex.n_vertices == 3
    assert len(q.complex.top_cells()) == 1
    assert all(q.complex.degree(c.mid) == 1 for c in q.complex.multicells(1))
    assert is_simplicial(q) and has_complete_skeleton(q)


def test_build_quotient_rejects_invalid():
    bad = PermRep(Params(1, 2), 4, ((1, 0, 2, 3), (0, 1, 3, 2)), 0)
    with pytest.raises(ValueError):
        build_quotient(bad)


def test_m23_complete_partite():
    q = build_quotient(m_subgroup_rep(Params(2, 3)))
    assert q.complex.n_vertices == 9
    assert sum(1 for _ in q.complex.multicells(1)) == 27
    assert sum(1 for _ in q.complex.multicells(2)) == 27
    assert is_simplicial(q)


def test_m_family_counts():
    for k in (2, 3):
        d = 2
        q = build_quotient(m_subgroup_rep(Params(d, k)))
        assert q.complex.n_vertices == (d + 1) * k
        assert sum(1 for _ in q.complex.multicells(1)) == comb(d + 1, 2) * k**2
        assert sum(1 for _ in q.complex.multicells(d)) == k ** (d + 1)


def test_two_triangles_on_shared_vertices():
    rep = PermRep(Params(2, 2), 2, ((1, 0), (1, 0), (1, 0)), 0)
    q = build_quotient(rep)
    assert q.complex.n_vertices == 3
    assert sum(1 for _ in q.complex.multicells(2)) == 2
    for cell in q.complex.multicells(1):
        assert q.complex.degree(cell.mid) == 2
        assert len(q.complex.cells[cell.colors]) == 1  # multiplicity 1 per edge
    assert not is_simplicial(q)  # the doubled top cell


def multiplicity_two_somewhere(q) -> bool:
    for colors, lst in q.complex.cells.items():
        if len(colors) >= 2 and len({c.vertices for c in lst}) < len(lst):
            return True
    return False


def test_doubled_edge_not_simplicial():
    # swapping points with two generators doubles the {1,2}-colored edge
    rep = PermRep(Params(2, 2), 2, ((0, 1), (1, 0), (1, 0)), 0)
    q = build_quotient(rep)
    assert not is_simplicial(q)
    assert not intersection_property(rep)
    assert multiplicity_two_somewhere(q)
    doubled = q.complex.cells[(1, 2)]
    assert len(doubled) == 2 and doubled[0].vertices == doubled[1].vertices


def test_single_swap_stays_simplicial():
    # one swapping generator only: two triangles sharing an edge, no doubling
    rep = PermRep(Params(2, 2), 2, ((1, 0), (0, 1), (0, 1)), 0)
    q = build_quotient(rep)
    assert is_simplicial(q)
    assert intersection_property(rep)


def test_top_cell_count_is_index():
    for seed in range(5):
        rep = seeded_rep(2, 3, 11, 400 + seed)
        q = build_quotient(rep)
        assert len(q.complex.top_cells()) == rep.n


def test_degrees_divide_k():
    for seed in range(5):
        rep = seeded_rep(2, 4, 10, 500 + seed)
        q = build_quotient(rep)
        for cell in q.complex.multicells(1):
            assert Params(2, 4).k % q.complex.degree(cell.mid) == 0


def test_left_action_realizes_cosets():
    rep = seeded_rep(2, 2, 8, 600)
    q = build_quotient(rep)
    import random

    rng = random.Random(1)
    from conftest import random_word

    for _ in range(100):
        w = random_word(rep.params, rng)
        assert q.point_cell[evaluate(w, rep.root, rep)] in q.cell_point


def test_upper_regular_examples():
    assert is_upper_regular(m_subgroup_rep(Params(2, 3)))
    assert not is_upper_regular(TRIVIAL)
    mixed = PermRep(Params(1, 4), 4, ((1, 2, 3, 0), (1, 0, 3, 2)), 0)
    assert validate(mixed).ok
    assert not is_upper_regular(mixed)


def test_complete_skeleton_examples():
    assert has_complete_skeleton(build_quotient(m_subgroup_rep(Params(2, 2))))
    assert has_complete_skeleton(build_quotient(TRIVIAL))


def test_complete_skeleton_matches_orbit_oracle():
    """Oracle: a color-distinct vertex tuple spans a cell iff the orbit point
    sets of its vertices intersect (the nerve picture)."""
    from itertools import combinations, product

    from multiforge.permrep import orbits

    found_incomplete = False
    for seed in range(12):
        rep = seeded_rep(2, 2, 6 + seed % 5, 800 + seed)
        q = build_quotient(rep)
        parts = {c: orbits(rep, frozenset({c})) for c in range(3)}
        expected = True
        for ca, cb in combinations(range(3), 2):
            for oa, ob in product(parts[ca].members(), parts[cb].members()):
                if not set(oa) & set(ob):
                    expected = False
        assert has_complete_skeleton(q) == expected, seed
        found_incomplete = found_incomplete or not expected
    assert found_incomplete  # the sample must exercise the negative branch


def test_line_graph_of_m12_is_four_cycle():
    q = build_quotient(m_subgroup_rep(Params(1, 2)))
    g = line_graph(q)
    assert g.n == 4
    assert sorted((u, v) for u, v, _ in g.edges) == [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_quotient_map_trivial_target():
    ball = build_ball(Params(2, 2), 2)
    q = build_quotient(TRIVIAL)
    f = quotient_map(ball, q)
    assert check_morphism(f, ball.complex, q.complex).ok
    assert quotient_map_surjective(f, q)
    assert len(set(f.values())) == sum(1 for _ in q.complex.multicells())


def test_quotient_map_m22_radius_three():
    ball = build_ball(Params(2, 2), 3)
    q = build_quotient(m_subgroup_rep(Params(2, 2)))
    f = quotient_map(ball, q)
    assert check_morphism(f, ball.complex, q.complex).ok
    assert is_surjective(f, q.complex)


def test_quotient_map_requires_matching_params():
    ball = build_ball(Params(1, 2), 1)
    q = build_quotient(TRIVIAL)
    with pytest.raises(ValueError):
        quotient_map(ball, q)


def test_round_trip_small_and_merged():
    rep = m_subgroup_rep(Params(2, 2))
    q = build_quotient(rep)
    assert same_up_to_relabeling(associated_subgroup_round_trip(q), rep)
    again = build_quotient(associated_subgroup_rep(q.complex))
    from multiforge.complexes import find_isomorphism

    assert find_isomorphism(again.complex, q.complex) is not None


def test_analyze_report_shape():
    q = build_quotient(m_subgroup_rep(Params(2, 3)))
    report = analyze(q)
    assert report["simplicial"] and report["upper_regular"]
    assert report["cells_per_dim"] == {0: 9, 1: 27, 2: 27}
    assert report["degree_histogram"] == {3: 27}
    assert report["link_connected"] and report["skeleton_complete"]


def test_every_quotient_validates():
    for seed in range(8):
        rep = seeded_rep(1 + seed % 3, 2 + seed % 3, 6 + seed, 700 + seed)
        q = build_quotient(rep)
        assert validate_structure(q.complex).ok
        assert nerve_matches_base(q)
