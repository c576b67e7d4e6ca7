import json

import pytest

from fibrelattice import q444
from fibrelattice.fibration_graph import (
    SurfaceError,
    SurfaceModel,
    build_flip_graph,
    effective_flip,
    fibration_census,
    minus_two_curve_inventory,
)
from fibrelattice.q444 import STANDARD, dot

NV = q444.build_tower().named


def t6(rank):
    return SurfaceModel("T6", rank)


def test_surface_model_validation():
    with pytest.raises(SurfaceError):
        SurfaceModel("T5")
    with pytest.raises(SurfaceError):
        SurfaceModel("T6")
    with pytest.raises(SurfaceError):
        SurfaceModel("T8", 1)
    with pytest.raises(SurfaceError):
        SurfaceModel("T7")
    with pytest.raises(SurfaceError):
        SurfaceModel("T6", 1, "simple")


def test_extraneous_classes():
    assert t6(2).extraneous_classes == ()
    assert set(t6(1).extraneous_classes) == {q444.vadd(NV.e, NV.f[1]), q444.vsub(NV.e, NV.f[1])}
    assert set(t6(0).extraneous_classes) == {q444.vsub(NV.e, NV.f[i]) for i in (1, 2, 3)}
    assert set(t6(0).extraneous_classes) <= q444.candidate_vectors()


def test_effective_flip_per_rank():
    for arm in (1, 2, 3):
        assert effective_flip(t6(0), STANDARD, arm) is None
        assert effective_flip(t6(2), STANDARD, arm) == q444.flip(STANDARD, arm)
    assert effective_flip(t6(1), STANDARD, 1) is None
    assert effective_flip(t6(1), STANDARD, 2) is not None
    assert effective_flip(t6(1), STANDARD, 3) is not None


def test_effective_flip_rejects_other_surfaces():
    with pytest.raises(SurfaceError):
        effective_flip(SurfaceModel("T8"), STANDARD, 1)


@pytest.mark.parametrize("radius", [0, 1, 3, 5])
def test_rank0_graph_is_a_point(radius):
    g = build_flip_graph(t6(0), radius)
    assert len(g.nodes) == 1 and g.edges == []


@pytest.mark.parametrize("radius", [0, 1, 2, 4, 6])
def test_rank1_graph_is_a_path(radius):
    g = build_flip_graph(t6(1), radius)
    assert len(g.nodes) == 2 * radius + 1
    assert len(g.edges) == 2 * radius
    assert all(g.degree(k) == 2 for k in g.interior(1))
    assert all(q444.is_one_realisable(T) is not None for T in g.nodes)


def test_rank2_radius1():
    g = build_flip_graph(t6(2), 1)
    assert len(g.nodes) == 4 and len(g.edges) == 3


@pytest.mark.parametrize("radius", [2, 3, 5])
def test_rank2_graph_matches_coxeter_ball(radius):
    g = build_flip_graph(t6(2), radius)
    assert len(g.nodes) == q444.affine_permutation_ball(radius)[-1]
    assert all(g.degree(k) == 3 for k in g.interior(1))


def test_rank2_nodes_agree_with_word_action():
    g = build_flip_graph(t6(2), 4)
    for T, w in zip(g.nodes, g.words):
        assert q444.apply_word(w, STANDARD) == T
        assert q444.is_realisable(T)


def test_adjacent_configurations_share_the_e7_class():
    g = build_flip_graph(t6(2), 3)
    for a, arm, b in g.edges:
        assert g.nodes[a].e7(arm) == g.nodes[b].e7(arm)
        assert all(g.nodes[a].e7(j) != g.nodes[b].e7(j) for j in (1, 2, 3) if j != arm)


def test_census_rank0():
    c = fibration_census(t6(0), 5)
    assert c.elliptic_count == 1
    assert c.quasi_elliptic_count == 3
    assert c.multiplicities() == [1, 1, 1]


def test_census_other_types():
    assert fibration_census(SurfaceModel("T8")).quasi_elliptic_count == 1
    assert fibration_census(SurfaceModel("T8")).elliptic_count == 0
    assert fibration_census(SurfaceModel("T7", second_fibre="double")).quasi_elliptic_count == 2
    assert fibration_census(SurfaceModel("T7", second_fibre="simple")).quasi_elliptic_count == 3


@pytest.mark.parametrize("rank", [1, 2])
def test_census_membership_in_interior(rank):
    c = fibration_census(t6(rank), 3)
    mult = c.multiplicities()
    assert mult and set(mult) <= {1, 2}


def test_census_membership_oracle_pairwise():
    # count configurations containing each class by direct pairwise comparison
    c = fibration_census(t6(2), 3)
    g = c.flip_graph
    for entry in c.quasi_elliptic_classes:
        direct = [k for k, T in enumerate(g.nodes) if any(T.e7(i) == entry["class"] for i in (1, 2, 3))]
        assert direct == entry["member_configs"]


def test_rank1_extraneous_classes_meet_ends_in_zero_or_two():
    g = build_flip_graph(t6(1), 4)
    extr = t6(1).extraneous_classes
    for T in g.nodes:
        for i in (1, 2, 3):
            vals = sorted(dot(T.end(i), x) for x in extr)
            assert all(v in (0, 2) for v in vals)
            assert sum(vals) == 2


def test_inventory_rank0_is_fixed():
    inv, _g = minus_two_curve_inventory(t6(0), 5)
    sources = [c.source for c in inv.classes]
    assert sources.count("end") == 3 and sources.count("fibre") == 7 and sources.count("extraneous") == 3
    inv2, _ = minus_two_curve_inventory(t6(0), 2)
    assert [c.vector for c in inv.classes] == [c.vector for c in inv2.classes]


def test_inventory_rank1_grows():
    small, _ = minus_two_curve_inventory(t6(1), 4)
    large, _ = minus_two_curve_inventory(t6(1), 6)
    assert len(large.end_classes()) > len(small.end_classes())


def test_inventory_rank2_grows_and_membership_bounded():
    small, _ = minus_two_curve_inventory(t6(2), 3)
    large, g = minus_two_curve_inventory(t6(2), 5)
    assert len(large.end_classes()) > len(small.end_classes())
    counts = large.interior_counts(g.depth)
    assert counts and max(counts) <= 6


def test_flip_graph_exports():
    g = build_flip_graph(t6(2), 2)
    data = json.loads(json.dumps(g.to_json()))
    assert len(data["nodes"]) == 10 and len(data["edges"]) == 9
    dot_text = g.to_dot()
    assert dot_text.startswith("graph") and dot_text.count("--") == 9


def test_census_json_schema():
    data = json.loads(fibration_census(t6(1), 2).dumps())
    assert set(data) == {"surface", "radius", "elliptic_count", "quasi_elliptic_classes", "flip_graph"}
    assert set(data["flip_graph"]) == {"nodes", "edges"}
    assert all(set(c) == {"class", "member_configs"} for c in data["quasi_elliptic_classes"])


def test_negative_radius():
    with pytest.raises(ValueError):
        build_flip_graph(t6(2), -1)
