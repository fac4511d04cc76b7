from fractions import Fraction as F

import pytest

from svdyn.intervals import FissileSet, IntervalSet
from svdyn.rational import as_rational, pq


class TestRational:
    def test_accepts_strings_and_ints(self):
        assert as_rational("3/6") == F(1, 2)
        assert as_rational(1) == F(1)

    @pytest.mark.parametrize("value", ["0.5", "1e-1", ""])
    def test_refuses_decimal_strings(self, value):
        with pytest.raises(ValueError):
            as_rational(value)

    def test_refuses_floats_and_bools(self):
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            as_rational(True)

    def test_pq_always_has_denominator(self):
        assert pq(F(0)) == "0/1"
        assert pq(F(2, 4)) == "1/2"


class TestIntervalSet:
    def test_touching_intervals_merge(self):
        s = IntervalSet.of([(F(1, 4), F(1, 2)), (F(0), F(1, 4)), (F(3, 4), F(1))])
        assert s.intervals == ((F(0), F(1, 2)), (F(3, 4), F(1)))
        assert not s.is_connected()

    def test_intersection(self):
        s = IntervalSet.of([(F(0), F(1, 2)), (F(3, 4), F(1))])
        t = IntervalSet.closed(F(1, 4), F(7, 8))
        assert s.intersection(t).intervals == ((F(1, 4), F(1, 2)), (F(3, 4), F(7, 8)))

    def test_membership_and_components(self):
        s = IntervalSet.of([(F(0), F(1, 2)), (F(3, 4), F(3, 4))])
        assert s.contains(F(3, 4))
        assert not s.contains(F(5, 8))
        assert s.component_containing(F(1, 3)) == (F(0), F(1, 2))
        assert s.component_containing(F(5, 8)) is None
        assert len(s.components()) == 2

    def test_subset_and_point_outside(self):
        half = IntervalSet.closed(F(0), F(1, 2))
        assert half.issubset(IntervalSet.unit())
        assert IntervalSet.unit().point_outside(half) == F(1)
        assert half.point_outside(IntervalSet.unit()) is None

    def test_str(self):
        s = IntervalSet.of([(F(0), F(1, 2)), (F(3, 4), F(3, 4))])
        assert str(s) == "[0, 1/2] U {3/4}"
        assert str(IntervalSet()) == "{}"

    def test_empty_set_is_connected(self):
        assert IntervalSet().is_connected()
        assert IntervalSet().is_empty()


class TestFissileSet:
    @pytest.fixture
    def crossing(self):
        # fissile set of two crossing diagonals
        return FissileSet.from_atoms([F(0), F(1)], [(F(0), F(1, 2)), (F(1, 2), F(1))])

    def test_spans_keep_open_ends(self, crossing):
        assert str(crossing) == "[0, 1/2) U (1/2, 1]"

    def test_contains(self, crossing):
        assert crossing.contains(F(0))
        assert crossing.contains(F(1))
        assert not crossing.contains(F(1, 2))

    def test_complement(self, crossing):
        assert [str(span) for span in crossing.complement()] == ["{1/2}"]
        assert crossing.has_interior()

    def test_complement_keeps_open_ends(self):
        assert [str(span) for span in FissileSet.from_atoms([F(1)], []).complement()] == ["[0, 1)"]
        assert [str(span) for span in FissileSet().complement()] == ["[0, 1]"]

    def test_isolated_point(self):
        s = FissileSet.from_atoms([F(1)], [])
        assert str(s) == "{1}"
        assert not s.has_interior()
        assert s.to_json() == [{"lo": "1/1", "hi": "1/1", "lo_closed": True, "hi_closed": True}]
