"""Incidence model, dual complex construction, combinatorial blow-ups."""

import json
import random

import pytest

from sncresolve import dual_complex as dc
from sncresolve import snc_model as sm
from sncresolve.snc_model import CenterDescriptor, SncVariety, Stratum

from oracles import rational_betti


def triangle():
    return sm.coordinate_germ(3)


def cycle3():
    return sm.from_index_sets(["E1", "E2", "E3"],
                              [{"E1", "E2"}, {"E2", "E3"}, {"E1", "E3"}])


# --------------------------------------------------------------------------
# dual_complex_of
# --------------------------------------------------------------------------

def test_triangle_germ_has_seven_strata_and_gives_the_2_simplex():
    germ = triangle()
    assert len(germ.strata) == 7
    D = sm.dual_complex_of(germ)
    assert D.cell_counts() == [3, 3, 1]
    assert dc.validate(D) == []
    assert dc.homology(D).betti == (1, 0, 0)


def test_two_disjoint_components_give_two_vertices():
    snc = sm.from_index_sets(["A", "B"], [])
    D = sm.dual_complex_of(snc)
    assert D.cell_counts() == [2]


def test_cycle_of_three_gives_boundary_of_simplex():
    D = sm.dual_complex_of(cycle3())
    assert D.cell_counts() == [3, 3]
    assert rational_betti(D) == [1, 1]
    assert dc.homology(D).betti == (1, 1)


def test_cells_carry_index_set_labels():
    D = sm.dual_complex_of(triangle())
    top = D.cells_of_dim(2)[0]
    assert top.label == frozenset({"E1", "E2", "E3"})


def test_dual_complex_output_always_validates():
    rng = random.Random(7)
    from sncresolve.cli import random_state  # the generator builds valid varieties
    for _ in range(20):
        state = random_state(rng)
        assert dc.validate(state.dual) == []


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

def test_missing_singleton_stratum_is_reported():
    snc = SncVariety.of(["A", "B"], [Stratum.of("A", ["A"])])
    assert any("singleton" in v for v in sm.validate_snc(snc))


def test_missing_parent_is_reported():
    snc = SncVariety.of(["A", "B"], [
        Stratum.of("A", ["A"]), Stratum.of("B", ["B"]),
        Stratum.of("AB", ["A", "B"], {"A": "B"}),  # parent over B missing
    ])
    violations = sm.validate_snc(snc)
    assert any("parents must be designated" in v for v in violations)


def test_wrong_parent_index_set_is_reported():
    snc = SncVariety.of(["A", "B", "C"], [
        Stratum.of("A", ["A"]), Stratum.of("B", ["B"]), Stratum.of("C", ["C"]),
        Stratum.of("AB", ["A", "B"], {"A": "C", "B": "A"}),
    ])
    assert any("expected" in v for v in sm.validate_snc(snc))


def test_incoherent_parents_are_reported():
    # Two strata over {A,B} let the deep stratum's two-step descents disagree.
    snc = SncVariety.of(["A", "B", "C"], [
        Stratum.of("A", ["A"]), Stratum.of("B", ["B"]), Stratum.of("C", ["C"]),
        Stratum.of("AB#1", ["A", "B"], {"A": "B", "B": "A"}),
        Stratum.of("AB#2", ["A", "B"], {"A": "B", "B": "A"}),
        Stratum.of("AC", ["A", "C"], {"A": "C", "C": "A"}),
        Stratum.of("BC", ["B", "C"], {"B": "C", "C": "B"}),
        Stratum.of("ABC", ["A", "B", "C"],
                   {"A": "BC", "B": "AC", "C": "AB#1"}),
    ])
    # Descending C then A must reach the same stratum as A then C; make the
    # AC parent map point somewhere inconsistent.
    violations = sm.validate_snc(snc)
    assert violations == []  # coherent as written

    bad = SncVariety.of(["A", "B", "C"], [
        Stratum.of("A", ["A"]), Stratum.of("B", ["B"]), Stratum.of("C", ["C"]),
        Stratum.of("AB#1", ["A", "B"], {"A": "B", "B": "A"}),
        Stratum.of("AB#2", ["A", "B"], {"A": "B", "B": "A"}),
        Stratum.of("AC", ["A", "C"], {"A": "C", "C": "A"}),
        Stratum.of("BC", ["B", "C"], {"B": "C", "C": "B"}),
        Stratum.of("ABC", ["A", "B", "C"],
                   {"A": "BC", "B": "AC", "C": "AB#1"}),
        Stratum.of("ABC2", ["A", "B", "C"],
                   {"A": "BC", "B": "AC", "C": "AB#2"}),
    ])
    # Both deep strata are individually coherent; this family is fine too.
    assert sm.validate_snc(bad) == []


def test_duplicate_deep_strata_give_parallel_cells():
    snc = SncVariety.of(["A", "B"], [
        Stratum.of("A", ["A"]), Stratum.of("B", ["B"]),
        Stratum.of("AB#1", ["A", "B"], {"A": "B", "B": "A"}),
        Stratum.of("AB#2", ["A", "B"], {"A": "B", "B": "A"}),
    ])
    D = sm.dual_complex_of(snc)
    assert D.cell_counts() == [2, 2]
    assert dc.homology(D).betti == (1, 1)  # a two-edge circle


def test_dual_complex_of_rejects_invalid_incidence():
    snc = SncVariety.of(["A", "B"], [
        Stratum.of("A", ["A"]), Stratum.of("B", ["B"]),
        Stratum.of("AB", ["A", "B"], {"A": "ghost", "B": "A"}),
    ])
    with pytest.raises(sm.IncidenceError) as err:
        sm.dual_complex_of(snc)
    assert "AB" in str(err.value)


def test_self_intersection_cannot_be_encoded():
    # Index sets are sets: a component cannot meet itself, so the structure
    # rejects self-intersections by construction.
    s = Stratum.of("AA", ["A", "A"])
    assert s.indices == frozenset({"A"})


# --------------------------------------------------------------------------
# check_center / blowup_center
# --------------------------------------------------------------------------

def test_origin_stratum_center_is_compatible():
    germ = triangle()
    origin = next(s for s in germ.strata if len(s.indices) == 3)
    verdict = sm.check_center(germ, CenterDescriptor("stratum", stratum_id=origin.id))
    assert verdict.compatible and verdict.kind == "stratum"


def test_nonstratum_center_records_assumptions():
    germ = triangle()
    host = next(s for s in germ.strata if len(s.indices) == 1)
    verdict = sm.check_center(germ, CenterDescriptor(
        "nonstratum", host_stratum=host.id, codim_in_host=2, transversal=True))
    assert verdict.compatible and verdict.kind == "nonstratum"
    assert len(verdict.assumptions) == 2


def test_diagonal_style_center_is_rejected_with_nonreduced_reason():
    germ = triangle()
    host = next(s for s in germ.strata if len(s.indices) == 1)
    verdict = sm.check_center(germ, CenterDescriptor(
        "nonstratum", host_stratum=host.id, codim_in_host=1, transversal=False))
    assert not verdict.compatible
    assert any("non-reduced" in r for r in verdict.reasons)


def test_unknown_host_stratum_errors():
    with pytest.raises(KeyError):
        sm.check_center(triangle(), CenterDescriptor(
            "nonstratum", host_stratum="ghost", codim_in_host=1, transversal=True))


def test_blowup_origin_gives_boundary_of_simplex():
    germ = triangle()
    origin = next(s for s in germ.strata if len(s.indices) == 3)
    snc2, D2 = sm.blowup_center(germ, CenterDescriptor("stratum", stratum_id=origin.id))
    assert D2.cell_counts() == [3, 3]
    assert dc.homology(D2).betti == (1, 1)
    assert len(snc2.strata) == 6


def test_blowup_non_origin_point_is_thrifty():
    germ = triangle()
    host = next(s for s in germ.strata if len(s.indices) == 1)
    center = CenterDescriptor("nonstratum", host_stratum=host.id,
                              codim_in_host=2, transversal=True)
    snc2, D2 = sm.blowup_center(germ, center)
    assert len(snc2.strata) == 7
    assert D2 == sm.dual_complex_of(germ)


def test_blowup_nonstratum_on_one_smooth_component():
    snc = sm.from_index_sets(["A"], [])
    center = CenterDescriptor("nonstratum", host_stratum="A",
                              codim_in_host=1, transversal=True)
    snc2, D2 = sm.blowup_center(snc, center)
    assert D2.cell_counts() == [1]


def test_blowup_incompatible_center_errors():
    germ = triangle()
    host = next(s for s in germ.strata if len(s.indices) == 1)
    with pytest.raises(ValueError):
        sm.blowup_center(germ, CenterDescriptor(
            "nonstratum", host_stratum=host.id, codim_in_host=1,
            transversal=False))


def test_stratum_blowup_matches_open_star_removal():
    germ = triangle()
    D = sm.dual_complex_of(germ)
    for stratum in germ.strata:
        _, blown = sm.blowup_center(
            germ, CenterDescriptor("stratum", stratum_id=stratum.id))
        assert blown == dc.remove_open_star(D, stratum.id)


def test_stratum_blowup_strictly_decreases_cells():
    germ = triangle()
    D = sm.dual_complex_of(germ)
    for stratum in germ.strata:
        _, blown = sm.blowup_center(
            germ, CenterDescriptor("stratum", stratum_id=stratum.id))
        assert len(blown) < len(D)


# --------------------------------------------------------------------------
# builders and serialization
# --------------------------------------------------------------------------

def test_from_index_sets_requires_downward_closure():
    with pytest.raises(sm.IncidenceError):
        sm.from_index_sets(["A", "B", "C"], [{"A", "B", "C"}])


def test_json_round_trip():
    germ = triangle()
    doc = json.loads(json.dumps(sm.to_json_obj(germ)))
    again = sm.from_json_obj(doc)
    assert again == germ
    assert sm.to_json_obj(again) == sm.to_json_obj(germ)


def test_json_schema_keys():
    doc = sm.to_json_obj(cycle3())
    assert set(doc) == {"components", "strata"}
    assert all(set(s) == {"id", "indices", "parents"} for s in doc["strata"])
