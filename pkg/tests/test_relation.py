from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svdyn.constructions import corpus, corpus_names
from svdyn.errors import RestrictionError, UsageError
from svdyn.intervals import IntervalSet
from svdyn.pieces import Piece
from svdyn.relation import (
    compose,
    contains_piece,
    domain_is_full,
    image,
    is_surjective,
    normalize,
    preimage,
    relation,
    restrict,
    slice_at,
    transpose,
    uncovered_point,
)
from tests.strategies import intervals, piece_lists, relations


def point(x):
    return IntervalSet.point(F(x))


class TestNormalize:
    def test_collinear_overlap_merges(self):
        rel = relation(Piece.segment(0, 0, "1/2", "1/2"), Piece.segment("1/4", "1/4", 1, 1))
        assert rel.pieces == (Piece.segment(0, 0, 1, 1),)

    def test_zero_height_rect_is_a_segment(self):
        assert relation(Piece.rect(0, "1/2", 1, "1/2")).pieces == (Piece.segment(0, "1/2", 1, "1/2"),)

    def test_covered_point_dropped(self):
        rel = relation(Piece.segment(0, 0, 1, 1), Piece.point("1/2", "1/2"))
        assert rel == corpus("diag")

    def test_segment_cut_back_to_outside_of_rect(self):
        rel = relation(Piece.rect(0, 0, "1/2", 1), Piece.segment(0, 0, 1, 1))
        assert rel.pieces == (Piece.segment("1/2", "1/2", 1, 1), Piece.rect(0, 0, "1/2", 1))

    def test_overlapping_rects_union(self):
        rel = relation(Piece.rect(0, 0, "1/2", 1), Piece.rect("1/4", 0, 1, 1))
        assert rel == corpus("square")

    @settings(max_examples=100, derandomize=True, deadline=None)
    @given(pieces=piece_lists())
    def test_idempotent(self, pieces):
        once = normalize(pieces)
        assert normalize(once.pieces) == once


class TestTranspose:
    def test_diagonal_is_symmetric(self):
        assert transpose(corpus("diag")) == corpus("diag")

    def test_swaps_coordinates(self, ex2_15):
        assert transpose(ex2_15) == relation(Piece.segment(0, 0, 0, 1), Piece.segment(0, 1, 1, 1))

    @pytest.mark.parametrize("name", corpus_names())
    def test_involution(self, name):
        rel = corpus(name)
        assert transpose(transpose(rel)) == rel

    def test_preimage_is_image_of_transpose(self, tent):
        assert preimage(tent, point(1)) == point("1/2")
        assert image(transpose(tent), point(1)) == point("1/2")


class TestImage:
    def test_single_valued_slice(self, ex2_11):
        assert slice_at(ex2_11, F(1, 4)) == point("1/12")

    def test_two_valued_slice(self, ex2_10):
        assert slice_at(ex2_10, F(0)) == IntervalSet.of([(F(0), F(0)), (F(1), F(1))])
        assert slice_at(ex2_10, F(1, 2)) == point("1/2")

    def test_surjective(self, tent):
        assert image(tent, IntervalSet.unit()) == IntervalSet.unit()
        assert is_surjective(tent)

    def test_empty_image(self):
        rel = relation(Piece.segment(0, 0, "1/2", 1))
        assert image(rel, IntervalSet.closed(F(3, 4), F(1))).is_empty()
        assert not domain_is_full(rel)

    def test_events_and_samples(self, tent):
        assert tent.events == (F(0), F(1, 2), F(1))
        assert tent.samples == (F(1, 4), F(3, 4))


class TestCompose:
    @pytest.mark.parametrize("name", corpus_names())
    def test_identity_is_neutral(self, name):
        rel = corpus(name)
        assert compose(rel, corpus("diag")) == rel

    def test_crossing_diagonals_compose_to_themselves(self, ex2_10):
        assert compose(ex2_10, ex2_10) == ex2_10

    def test_horizontal_then_vertical(self):
        first = relation(Piece.segment(0, "1/2", 1, "1/2"))
        then = relation(Piece.segment("1/2", 0, "1/2", 1))
        assert compose(first, then) == corpus("square")

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(first=relations(), then=relations(), values=intervals())
    def test_image_of_composition(self, first, then, values):
        assert image(compose(first, then), values) == image(then, image(first, values))


class TestRestrict:
    def test_clip(self, tent):
        assert restrict(tent, (F(0), F(1, 2)), (F(0), F(1))) == relation(Piece.segment(0, 0, "1/2", 1))

    def test_both_branches_kept(self, ex2_11):
        expected = relation(Piece.segment("1/2", "1/6", 1, "1/3"), Piece.segment("1/2", 0, 1, 1))
        assert restrict(ex2_11, (F(1, 2), F(1)), (F(0), F(1))) == expected

    def test_missing_values_raise_with_witness(self, ex2_15):
        with pytest.raises(RestrictionError) as exc_info:
            restrict(ex2_15, (F(0), F(1, 2)), (F(1, 2), F(1)))
        assert exc_info.value.x == 0

    def test_rescale(self, tent):
        scaled = restrict(tent, (F(0), F(1, 2)), (F(0), F(1)), rescale=True)
        assert scaled == corpus("diag")

    def test_reversed_interval(self, tent):
        with pytest.raises(UsageError):
            restrict(tent, (F(1, 2), F(0)), (F(0), F(1)))


class TestContainment:
    def test_rect_inside_square(self, square):
        assert contains_piece(square, Piece.rect("1/4", "1/4", "1/2", "1/2"))

    def test_segments(self, tent):
        assert contains_piece(tent, Piece.segment(0, 0, "1/4", "1/2"))
        assert not contains_piece(tent, Piece.segment(0, 0, 1, 1))

    def test_uncovered_point(self):
        covered = IntervalSet.of([(F(0), F(1, 4)), (F(1, 2), F(1))])
        assert uncovered_point(covered, F(0), F(1)) == F(3, 8)
        assert uncovered_point(IntervalSet.unit(), F(0), F(1)) is None


@settings(max_examples=100, derandomize=True, deadline=None)
@given(rel=relations(), y=st.integers(min_value=0, max_value=4))
def test_transpose_slice_is_preimage(rel, y):
    target = point(F(y, 4))
    assert image(transpose(rel), target) == preimage(rel, target)
