import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibrelattice import conductrix as cx
from fibrelattice.dynkin_core import build_diagram, families, kodaira_neron_cycle


def test_invariant_rows_satisfy_the_genus_relation():
    rows = cx.invariant_table()
    assert len(rows) == 6
    assert all(r.genus_relation_holds() for r in rows)
    assert {r.AE for r in rows} == {1, 0, -1, -2}


def test_self_intersection_relation_fails_only_on_the_r6_row():
    bad = [(r.r, r.s, r.self_int, r.expected_self_int) for r in cx.invariant_table() if not r.self_int_relation_holds()]
    assert bad == [(6, 1, -2, -4)]


def test_rows_for_weight():
    assert [r.self_int for r in cx.rows_for_weight(1)] == [-1]
    assert sorted(r.self_int for r in cx.rows_for_weight(-1)) == [-4, -3]
    assert sorted(r.self_int for r in cx.rows_for_weight(-2)) == [-6, -2]


def test_adjacency_rule():
    by_si = {r.self_int: r for r in cx.invariant_table()}
    assert not cx.may_meet(by_si[-1], by_si[-1])  # s=1, r=0 twice
    assert cx.may_meet(by_si[-1], by_si[-4])
    assert cx.may_meet(by_si[-4], by_si[-6])
    assert cx.may_meet(by_si[-3], by_si[-2])


def test_fibre_weight_mapping():
    d4 = build_diagram("D~", 4)
    a1s = build_diagram("A~*", 1)
    assert cx.fibre_weight_for(cx.ELLIPTIC, 1, d4) == 0
    assert cx.fibre_weight_for(cx.QUASI_ELLIPTIC, 1, d4) == 2
    assert cx.fibre_weight_for(cx.QUASI_ELLIPTIC, 2, d4) == 1
    assert cx.fibre_weight_for(cx.QUASI_ELLIPTIC, 1, a1s) == 1
    assert cx.fibre_weight_for(cx.QUASI_ELLIPTIC, 2, a1s) == 2
    with pytest.raises(ValueError):
        cx.fibre_weight_for(cx.QUASI_ELLIPTIC, 3, d4)


def test_quasi_elliptic_table_matches_golden():
    rows = cx.generate_table(cx.QUASI_ELLIPTIC)
    diff = cx.diff_against_golden(rows, cx.load_golden(cx.QUASI_ELLIPTIC))
    assert len(rows) == 12
    assert diff.empty and len(diff.matched) == 12


def test_elliptic_table_against_golden():
    rows = cx.generate_table(cx.ELLIPTIC)
    golden = cx.load_golden(cx.ELLIPTIC)
    diff = cx.diff_against_golden(rows, golden)
    assert len(golden) == 25
    assert not diff.missing and len(diff.matched) == 25
    extras = sorted((p.diagram.name, p.weighting) for p in diff.extra)
    assert extras == [("D~8", (-2, 1, -1, 1, -1, 1, 1, 1, 1)),
                      ("E~8", (-1, 1, 1, -1, 1, -1, 1, -1, -1))]


def test_e8_extra_row_is_the_minus_three_variant_of_a_golden_row():
    rows = cx.generate_table(cx.ELLIPTIC)
    e8 = [p for p in rows if p.diagram is not None and p.diagram.name == "E~8"]
    w = (-1, 1, 1, -1, 1, -1, 1, -1, -1)
    variants = sorted(p.self_int[8] for p in e8 if p.weighting == w)
    assert variants == [-4, -3]


def test_family_row_present_once():
    rows = cx.generate_table(cx.ELLIPTIC)
    fam = [p for p in rows if p.diagram is None]
    assert len(fam) == 1 and fam[0].family == "A~n"
    uncollapsed = cx.generate_table(cx.ELLIPTIC, collapse_families=False)
    assert all(p.diagram is not None for p in uncollapsed)


def test_generated_profiles_are_consistent():
    for p in cx.generate_table(cx.QUASI_ELLIPTIC) + cx.generate_table(cx.ELLIPTIC):
        if p.diagram is None:
            continue
        d = p.diagram
        # weight on each vertex is (A_s, v) + cusp(v)
        for v in range(d.n_vertices):
            pairing = sum(d.gram[v][j] * p.A_s[j] for j in range(d.n_vertices))
            assert p.weighting[v] == pairing + p.cusp[v]
        m = cx.fibre_weight_for(p.kind, p.d, d)
        assert sum(c * f for c, f in zip(p.cusp, kodaira_neron_cycle(d))) == m


def test_golden_round_trip_and_profile_json():
    rows = cx.generate_table(cx.QUASI_ELLIPTIC)
    back = cx.table_from_json(json.loads(json.dumps(cx.table_to_json(rows))))
    assert [p.key() for p in back] == [p.key() for p in rows]


def test_tampered_golden_file_gives_a_diff(tmp_path):
    path = cx.golden_path(cx.QUASI_ELLIPTIC)
    data = json.loads(path.read_text())
    data["rows"][0]["self_int"][0] -= 1
    bad = tmp_path / "golden_quasi_elliptic.json"
    bad.write_text(json.dumps(data))
    diff = cx.diff_against_golden(cx.generate_table(cx.QUASI_ELLIPTIC), cx.load_golden(cx.QUASI_ELLIPTIC, str(bad)))
    assert len(diff.missing) == 1 and len(diff.extra) == 1


def test_golden_directory_from_environment(tmp_path, monkeypatch):
    src = cx.golden_path(cx.ELLIPTIC)
    (tmp_path / src.name).write_text(src.read_text())
    monkeypatch.setenv(cx.GOLDEN_ENV, str(tmp_path))
    assert cx.golden_path(cx.ELLIPTIC) == tmp_path / src.name
    assert len(cx.load_golden(cx.ELLIPTIC)) == 25


def test_golden_schema_errors():
    with pytest.raises(ValueError):
        cx.parse_golden({"schema_version": 99, "kind": "elliptic", "rows": []})
    with pytest.raises(ValueError):
        cx.parse_golden({"schema_version": 1, "kind": "elliptic",
                         "rows": [{"diagram": {"kind": "D~", "rank": 4}, "self_int": [-2], "A_s": [0]}]})
    with pytest.raises(ValueError):
        cx.parse_golden({"schema_version": 1, "kind": "elliptic",
                         "rows": [{"diagram": {"family": "A~n"}, "colour": 1}]})


def test_diff_rejects_unknown_kind():
    p = cx.ConductrixProfile(None, "parabolic", 1, (0,), (-2,), (0,), family="A~n")
    with pytest.raises(ValueError):
        cx.diff_against_golden([p], [])


def test_render_marks_cusp():
    rows = cx.generate_table(cx.QUASI_ELLIPTIC)
    assert all("o" in cx.render_profile(p) for p in rows if p.diagram is not None)


diagrams = st.sampled_from([d for d in families(9) if d.kind != "A~*"] + [build_diagram("D~", 11)])


@given(d=diagrams, data=st.data())
def test_display_order_round_trip(d, data):
    order = cx.display_order(d)
    assert sorted(order) == list(range(d.n_vertices))
    vec = tuple(data.draw(st.lists(st.integers(-9, 9), min_size=d.n_vertices, max_size=d.n_vertices)))
    assert cx.from_display(d, cx.to_display(d, vec)) == vec


@given(data=st.data())
def test_canonical_key_is_automorphism_invariant(data):
    rows = [p for p in cx.generate_table(cx.QUASI_ELLIPTIC) if p.diagram is not None]
    p = data.draw(st.sampled_from(rows))
    g = data.draw(st.sampled_from(p.diagram.automorphisms))

    def move(vec):
        out = [0] * len(vec)
        for i, x in enumerate(vec):
            out[g[i]] = x
        return tuple(out)

    q = cx.ConductrixProfile(p.diagram, p.kind, p.d, move(p.A_s), move(p.self_int), move(p.cusp))
    assert q.key() == p.key()
