from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svdyn.constructions import corpus
from svdyn.dynamics import iterate_image
from svdyn.errors import ResourceError, UsageError
from svdyn.intervals import IntervalSet
from svdyn.mahavier import (
    build_truncation,
    fissile_cell_diagnostic,
    irreducibility_probe,
    propagate,
    shift_and_project,
    truncation_connected,
)
from svdyn.pieces import Piece
from svdyn.relation import compose, preimage, relation, transpose
from tests.strategies import relations

eighths = st.integers(min_value=0, max_value=8).map(lambda n: F(n, 8))


class TestPropagate:
    def test_single_piece(self):
        domains = propagate([Piece.segment(0, 0, "1/2", 1)])
        assert domains == ((F(0), F(1)), (F(0), F(1, 2)))

    def test_backward_pass_narrows_earlier_coordinates(self):
        # x_0 = 1/4 on the flat piece and x_1 = x_2 / 2 on the rising one
        flat = Piece.segment(0, "1/4", 1, "1/4")
        rising = Piece.segment(0, 0, 1, "1/2")
        assert propagate([flat, rising]) == (
            (F(1, 4), F(1, 4)),
            (F(0), F(1, 2)),
            (F(0), F(1)),
        )

    def test_infeasible_chain(self):
        low = Piece.segment(0, 0, 1, "1/4")
        right = Piece.segment("1/2", 0, 1, 1)
        # x_1 must be in [1/2, 1] for the second piece, but low only reaches 1/4
        assert propagate([right, low]) is None


class TestBuild:
    def test_tent_depth_one(self, tent):
        c = build_truncation(tent, 1)
        assert len(c) == 2
        assert [cell.domains for cell in c.cells] == [
            ((F(0), F(1)), (F(0), F(1, 2))),
            ((F(0), F(1)), (F(1, 2), F(1))),
        ]

    def test_tent_depth_two(self, tent):
        c = build_truncation(tent, 2)
        assert len(c) == 4
        assert truncation_connected(c)

    def test_point_off_the_diagonal_is_separate(self):
        c = build_truncation(corpus("diag_plus_point"), 1)
        assert len(c) == 2
        assert c.components() == 2
        assert not truncation_connected(c)

    def test_wall_and_floor_meet(self, ex2_15):
        c = build_truncation(ex2_15, 1)
        assert c.components() == 1

    @pytest.mark.parametrize("name", ["ex2_10", "ex2_15", "tent", "diag", "square"])
    def test_deep_truncations_stay_connected(self, name):
        assert truncation_connected(build_truncation(corpus(name), 6))

    @pytest.mark.parametrize("depth", [1, 2, 3, 6])
    def test_zigzag_is_connected(self, depth):
        assert truncation_connected(build_truncation(corpus("ex2_9_pl"), depth))

    def test_identity_is_one_cell(self):
        assert len(build_truncation(corpus("diag"), 3)) == 1

    def test_bad_depth(self, tent):
        with pytest.raises(UsageError):
            build_truncation(tent, 0)

    def test_partial_domain(self):
        with pytest.raises(UsageError):
            build_truncation(relation(Piece.segment(0, 0, "1/2", 1)), 1)

    def test_cell_cap(self, tent):
        with pytest.raises(ResourceError) as exc_info:
            build_truncation(tent, 3, cap=4)
        assert exc_info.value.cap == 4

    def test_depth_cap(self, tent):
        with pytest.raises(ResourceError):
            build_truncation(tent, 9, max_depth=8)

    def test_depth_cap_from_environment(self, tent, monkeypatch):
        monkeypatch.setenv("SVDYN_MAX_DEPTH", "2")
        with pytest.raises(ResourceError):
            build_truncation(tent, 3)


class TestMembership:
    def test_contains(self, tent):
        c = build_truncation(tent, 2)
        assert c.contains([F(1), F(1, 2), F(1, 4)])
        assert not c.contains([F(0), F(0), F(1, 2)])

    def test_wrong_length(self, tent):
        with pytest.raises(UsageError):
            build_truncation(tent, 2).cell_containing([F(0), F(0)])

    def test_shared_boundary_point(self, tent):
        c = build_truncation(tent, 1)
        assert len(c.cells_containing([F(1), F(1, 2)])) == 2

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(rel=relations(max_extra=1), data=st.data())
    def test_cells_cover_exactly_the_chains(self, rel, data):
        c = build_truncation(rel, 2)
        walk = [data.draw(eighths)]
        for _ in range(2):
            ends = [y for span in rel.slice(walk[0]) for y in span]
            walk.insert(0, data.draw(st.sampled_from(ends)))
        assert c.contains(walk)
        for _ in range(5):
            point = data.draw(st.lists(eighths, min_size=3, max_size=3))
            expected = all(rel.slice(point[i]).contains(point[i - 1]) for i in (1, 2))
            assert c.contains(point) == expected


class TestShiftAndProject:
    def test_shift_drops_first_coordinate(self, tent):
        shifted = build_truncation(tent, 2).shift()
        assert shifted.depth == 1
        assert shifted.cells == build_truncation(tent, 1).cells

    def test_shift_needs_depth_two(self, tent):
        with pytest.raises(UsageError):
            build_truncation(tent, 1).shift()

    def test_project_modes(self, ex2_15):
        c = build_truncation(ex2_15, 2)
        assert shift_and_project(c, "project", 0) == IntervalSet.unit()
        assert shift_and_project(c, "shift").depth == 1
        with pytest.raises(UsageError):
            shift_and_project(c, "project")
        with pytest.raises(UsageError):
            shift_and_project(c, "rotate")
        with pytest.raises(UsageError):
            c.project(3)

    def test_floor_projection(self):
        c = build_truncation(relation(Piece.segment(0, "1/2", 1, "1/2")), 2)
        assert c.project(0) == IntervalSet.point(F(1, 2))
        assert c.project(2) == IntervalSet.unit()

    def test_end_projection_is_the_square(self, tent):
        c = build_truncation(tent, 2)
        assert c.projection(2, 0) == compose(tent, tent)
        assert c.projection(0, 2) == transpose(compose(tent, tent))

    def test_adjacent_projection_is_the_transpose(self, tent):
        assert build_truncation(tent, 2).projection(0, 1) == transpose(tent)

    def test_diagonal_projection(self, tent):
        c = build_truncation(tent, 1)
        assert c.projection(1, 1) == corpus("diag")

    @settings(max_examples=40, derandomize=True, deadline=None)
    @given(rel=relations(max_extra=1))
    def test_end_coordinates_match_iterated_images(self, rel):
        c = build_truncation(rel, 2)
        assert c.project(0) == iterate_image(rel, IntervalSet.unit(), 2)
        assert c.project(2) == preimage(rel, preimage(rel, IntervalSet.unit()))


class TestDiagnostics:
    def test_wall_cells_are_fissile(self, ex2_15):
        result = fissile_cell_diagnostic(ex2_15, build_truncation(ex2_15, 1))
        assert result.fraction == F(1, 2)
        assert result.cells == (1,)

    def test_function_has_no_fissile_cells(self, tent):
        result = fissile_cell_diagnostic(tent, build_truncation(tent, 2))
        assert result.fraction == 0
        assert result.cells == ()

    def test_crossing_diagonals_meet_at_a_nonfissile_point(self, ex2_10):
        # every cell passes through x_1 = 1/2, the one nonfissile value
        result = fissile_cell_diagnostic(ex2_10, build_truncation(ex2_10, 1))
        assert result.fraction == 0
        assert result.cells == ()

    def test_fissility_carried_by_different_coordinates(self):
        # f(x) = {1 - x} on (1/2, 1], and also 0 on [0, 1/2]
        rel = relation(Piece.segment(0, 1, 1, 0), Piece.segment(0, 0, "1/2", 0))
        assert fissile_cell_diagnostic(rel, build_truncation(rel, 1)).cells == (0,)
        # on the cell following 1 - x twice, x_2 nonfissile forces x_1 = 1 - x_2 < 1/2
        result = fissile_cell_diagnostic(rel, build_truncation(rel, 2))
        assert result.fraction == 1
        assert result.cells == (0, 1, 2, 3)

    def test_probe_spans_tent(self, tent):
        c = build_truncation(tent, 1)
        probe = irreducibility_probe(c, [F(0), F(0)], [F(0), F(1)])
        assert probe.cells == (0, 1)
        assert probe.whole_complex

    def test_probe_within_one_cell(self, tent):
        c = build_truncation(tent, 2)
        probe = irreducibility_probe(c, [F(0), F(0), F(0)], [F(1, 2), F(1, 4), F(1, 8)])
        assert len(probe.cells) == 1
        assert not probe.whole_complex

    def test_probe_point_outside(self, tent):
        with pytest.raises(UsageError):
            irreducibility_probe(build_truncation(tent, 1), [F(1, 2), F(0)], [F(0), F(0)])

    def test_probe_across_components(self):
        c = build_truncation(corpus("diag_plus_point"), 1)
        with pytest.raises(UsageError):
            irreducibility_probe(c, [F(1, 2), F(1, 2)], [F(1), F(0)])
