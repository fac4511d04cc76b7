from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from svdyn.classify import (
    EventSweep,
    classify,
    fissile_xset,
    merge_samples,
    nonfissile_closure,
    strip_test,
    weak_ivp,
    weak_ivp_fails_at,
)
from svdyn.constructions import corpus, corpus_names
from svdyn.intervals import IntervalSet
from svdyn.pieces import Piece
from svdyn.relation import compose, domain_is_full, normalize, preimage, relation, transpose
from tests.strategies import relations


class TestCorpusClassification:
    def test_crossing_diagonals(self, ex2_10):
        report = classify(ex2_10)
        assert report.ivp is False
        assert report.weak_ivp is True
        assert report.almost_nonfissile is False
        assert str(report.fissile_xset) == "[0, 1/2) U (1/2, 1]"

    def test_two_branches_fail_weak_ivp(self, ex2_11):
        report = classify(ex2_11)
        assert report.ivp is False
        assert report.weak_ivp is False
        assert report.witnesses["weak_ivp"] == {"x1": F(1, 2), "y1": F(0), "x2": F(1, 4)}
        assert weak_ivp_fails_at(ex2_11, F(1, 2), F(0), F(1, 4))

    def test_floor_with_wall(self, ex2_15):
        report = classify(ex2_15)
        assert report.almost_nonfissile is False
        assert report.ivp is False
        assert report.weak_ivp is True
        assert report.light is False
        assert report.slices_connected is True
        assert report.witnesses["almost_nonfissile"] == {"piece": "seg 1 0 1 1"}

    def test_floor_with_wall_fails_only_from_the_left_at_one(self, ex2_15):
        report = classify(ex2_15)
        witness = report.witnesses["weakly_continuous"]
        assert witness["x"] == 1
        assert witness["side"] == "left"

    def test_zigzag_has_ivp(self):
        report = classify(corpus("ex2_9_pl"))
        assert report.ivp is True
        assert report.light is True
        assert report.surjective is True

    def test_tent(self, tent):
        report = classify(tent)
        assert report.ivp is True
        assert report.light is True
        assert report.almost_nonfissile is True
        assert report.interior_empty is True
        assert report.witnesses == {}

    def test_square(self, square):
        report = classify(square)
        assert report.ivp is True
        assert report.light is False
        assert report.interior_empty is False
        assert report.almost_nonfissile is False

    def test_isolated_point(self):
        report = classify(corpus("diag_plus_point"))
        assert report.graph_connected is False
        assert report.witnesses["graph_connected"] == {"components": 2}
        assert report.ivp is False


class TestWeakIVP:
    @pytest.fixture
    def late_merge(self):
        # f[0, x] stays split until the falling branch reaches 3/8 at x = 5/16
        return relation(
            Piece.segment(0, 1, "1/2", 0),
            Piece.segment(0, 0, "1/4", "3/8"),
            Piece.segment("1/2", 0, 1, 0),
        )

    def test_failure_strictly_inside_a_gap(self, late_merge):
        assert late_merge.events == (0, F(1, 4), F(1, 2), 1)
        assert str(late_merge.slice(F(3, 10))) == "{2/5}"
        assert weak_ivp_fails_at(late_merge, F(0), F(0), F(3, 10))
        assert not weak_ivp_fails_at(late_merge, F(0), F(0), F(5, 16))
        report = classify(late_merge)
        assert report.weak_ivp is False
        witness = report.witnesses["weak_ivp"]
        assert F(1, 4) < witness["x2"] < F(5, 16)
        assert weak_ivp_fails_at(late_merge, witness["x1"], witness["y1"], witness["x2"])

    def test_merge_samples_reach_the_open_window(self, late_merge):
        pairs = set(merge_samples(late_merge, (F(0), F(1, 4)), (F(1, 4), F(1, 2))))
        assert any(u == 0 and F(1, 4) < v < F(5, 16) for u, v in pairs)
        assert all(u < v for u, v in pairs)

    def test_same_gap_samples_stay_ordered(self, tent):
        pairs = list(merge_samples(tent, (F(0), F(1, 2)), (F(0), F(1, 2))))
        assert pairs
        assert all(0 <= u < v <= F(1, 2) for u, v in pairs)


FINE_GRID = [F(n, 16) for n in range(17)]


@settings(max_examples=60, derandomize=True, deadline=None)
@given(rel=relations())
def test_weak_ivp_matches_pointwise_check(rel):
    ok, witness = weak_ivp(EventSweep(rel))
    if not ok:
        assert weak_ivp_fails_at(rel, witness["x1"], witness["y1"], witness["x2"])
        return
    for x1 in FINE_GRID:
        ends = {y for span in rel.slice(x1) for y in span}
        for y1 in ends:
            for x2 in FINE_GRID:
                if x2 != x1:
                    assert not weak_ivp_fails_at(rel, x1, y1, x2)


class TestPartialDomain:
    def test_function_predicates_skipped(self):
        report = classify(relation(Piece.segment(0, 0, "1/2", 1)))
        assert report.domain_full is False
        assert report.ivp is None
        assert report.fissile_xset is None
        assert report.witnesses["domain_full"] == {"x": F(1)}

    def test_unknown_property_name(self, tent):
        with pytest.raises(KeyError):
            classify(tent).value("continuous")


class TestFissility:
    def test_nonfissile_closure_of_crossing_diagonals(self, ex2_10):
        assert nonfissile_closure(ex2_10) == relation(Piece.point("1/2", "1/2"))

    def test_nonfissile_closure_drops_the_wall(self, ex2_15):
        closure = nonfissile_closure(ex2_15)
        assert closure == relation(Piece.segment(0, 0, 1, 0))
        # a proper closed subgraph that still has full domain
        assert domain_is_full(closure)
        assert closure != ex2_15

    def test_fissile_set_of_wall(self, ex2_15):
        assert str(fissile_xset(EventSweep(ex2_15))) == "{1}"

    @pytest.mark.parametrize("name", ["tent", "diag", "ex2_9_pl"])
    def test_almost_nonfissile_graphs_are_irreducible(self, name):
        rel = corpus(name)
        assert classify(rel).almost_nonfissile is True
        for i in range(len(rel.pieces)):
            rest = normalize(rel.pieces[:i] + rel.pieces[i + 1:])
            assert not domain_is_full(rest)


@pytest.mark.parametrize("name", corpus_names())
def test_ivp_implies_weak_ivp_on_corpus(name):
    report = classify(corpus(name))
    assert report.ivp == (report.slices_connected and report.weakly_continuous)
    if report.ivp:
        assert report.weak_ivp


@pytest.mark.parametrize("name", corpus_names())
def test_light_iff_preimages_have_empty_interior(name):
    rel = corpus(name)
    report = classify(rel)
    ys = transpose(rel).events
    assert report.light == all(not preimage(rel, IntervalSet.point(y)).has_interior() for y in ys)


@pytest.mark.parametrize("first", ["tent", "diag", "ex2_9_pl", "square"])
@pytest.mark.parametrize("then", ["tent", "diag", "square"])
def test_composition_preserves_ivp(first, then):
    assert classify(compose(corpus(first), corpus(then))).ivp is True


@settings(max_examples=200, derandomize=True, deadline=None)
@given(rel=relations())
def test_criterion_and_strip_test_agree(rel):
    # classify raises InvariantError when the two procedures disagree
    report = classify(rel)
    strip_ok, _ = strip_test(EventSweep(rel))
    assert report.ivp == strip_ok
    assert report.ivp == (report.slices_connected and report.weakly_continuous)
    if report.ivp:
        assert report.weak_ivp
