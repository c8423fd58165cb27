from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracle as O
from strategies import GRID, components, streams, sub_components
from tesalg.core import (
    Component,
    Coord,
    Event,
    Tes,
    TesError,
    as_fraction,
    closed_under_silent_insertion,
    contained,
    ev,
    grid_points,
    refines,
    silent_closure,
    sorted_events,
    tes_at,
    tes_contained,
)
from tesalg.scenario.robots import direction
from tesalg.scenario.tables import mutual_containment, table3


def test_event_equality_is_structural():
    assert ev("N", 1, "p") == ev("N", 1, "p")
    assert ev("N", 1, "p") != ev("N", 2, "p")
    assert ev("N", 1, "p") != ev("S", 1, "p")
    assert Event.position(1, 3, 0) == Event.position(1, Fraction(3), 0)


def test_event_order_is_total_and_groups_by_arguments():
    evs = [direction("E", 3), direction("S", 1), direction("W", 2), ev("a"), ev("b")]
    order = [str(e) for e in sorted_events(evs)]
    assert order == ["a", "b", "S(1,p)", "W(2,p)", "E(3,p)"]


def test_position_event_rendering():
    assert str(Event.position(1, 3, 0)) == "(3;0)_1"
    assert str(Event.position(2, Fraction(7, 2), Fraction(-1, 4))) == "(7/2;-1/4)_2"


def test_coord_stores_integers_exactly():
    c = Coord(Fraction(4, 2), "0.5")
    assert c.x == 2 and isinstance(c.x, int)
    assert c.y == Fraction(1, 2)


def test_decimal_text_is_exact_and_floats_refused():
    assert as_fraction("0.1") == Fraction(1, 10)
    with pytest.raises(TesError):
        as_fraction(0.5)


class TestTes:
    def test_strictly_increasing(self):
        with pytest.raises(TesError):
            Tes([({ev("a")}, 2), ({ev("a")}, 1)], 3)
        with pytest.raises(TesError):
            Tes([({ev("a")}, 1), ({ev("a")}, 1)], 3)

    def test_horizon_bounds_stamps(self):
        with pytest.raises(TesError):
            Tes([(set(), 4)], 3)
        with pytest.raises(TesError):
            Tes([(set(), -1)], 3)

    def test_at_table1_row(self):
        sigma = Tes([({direction("N", 1)}, 1), ({direction("W", 1)}, 2)], 5)
        assert tes_at(sigma, 2) == {direction("W", 1)}

    def test_at_outside_domain_is_silent(self):
        sigma = Tes([({ev("a")}, 1)], 3)
        assert tes_at(sigma, 2) == frozenset()
        assert tes_at(Tes((), 3), 1) == frozenset()

    def test_projections(self):
        sigma = Tes([({ev("a")}, 1), (set(), Fraction(3, 2))], 2)
        assert sigma.dom() == {1, Fraction(3, 2)}
        assert sigma.pr1() == (frozenset({ev("a")}), frozenset())
        assert sigma.pr2() == (1, Fraction(3, 2))

    def test_contained_pointwise(self):
        a, b = ev("a"), ev("b")
        small = Tes([({a}, t) for t in (1, 2, 3)], 3)
        big = Tes([({a, b}, t) for t in (1, 2, 3)], 3)
        assert tes_contained(small, big)
        assert tes_contained(small, small)
        shifted = Tes([({a}, 1), ({a}, 2), ({a}, Fraction(5, 2))], 3)
        assert not tes_contained(shifted, big)

    @given(streams(frozenset({ev("a"), ev("b")})))
    def test_restrict_keeps_stamps(self, sigma):
        r = sigma.restrict({ev("a")})
        assert r.stamps == sigma.stamps
        assert all(o <= {ev("a")} for o in r.observables)


class TestComponent:
    def test_interface_must_cover_events(self):
        with pytest.raises(TesError):
            Component({ev("a")}, [Tes([({ev("b")}, 1)], 2)], 2)

    def test_shared_horizon(self):
        with pytest.raises(TesError):
            Component({ev("a")}, [Tes((), 2), Tes((), 3)])

    def test_empty_behavior_has_no_horizon(self):
        assert Component({ev("a")}).horizon is None


class TestRefines:
    def test_reflexive_and_zero(self):
        t = table3()
        assert refines(t["A"], t["A"])
        assert refines(Component((), ()), t["A"])

    def test_table3_a_b_incomparable(self):
        t = table3()
        assert not refines(t["B"], t["A"])
        assert not refines(t["A"], t["B"])

    @given(components(), st.data())
    def test_matches_oracle(self, a, data):
        b = data.draw(sub_components(a))
        assert refines(b, a)
        assert refines(b, a) == O.refines(O.from_lib(b), O.from_lib(a))


class TestContained:
    def test_mutual_containment_is_preorder_only(self):
        a, b = mutual_containment()
        assert contained(a, b) and contained(b, a) and a != b

    def test_table3_restriction_of_c(self):
        c = table3()["C"]
        two = {ev("2")}
        restricted = Component(two, [s.restrict(two) for s in c.behavior], c.horizon)
        assert contained(restricted, c)

    @given(components(), components())
    def test_matches_oracle(self, a, b):
        assert contained(a, b) == O.contained(O.from_lib(a), O.from_lib(b))


class TestSilentClosure:
    def test_closure_is_closed(self):
        c = Component({ev("a")}, [Tes([({ev("a")}, 2)], 3)], 3)
        assert not closed_under_silent_insertion(c, GRID)
        closed = silent_closure(c, GRID)
        assert closed_under_silent_insertion(closed, GRID)
        assert len(closed.behavior) == 4

    @given(components(closed=True))
    def test_generated_closed(self, c):
        assert closed_under_silent_insertion(c, GRID)

    def test_singleton_with_gap_not_closed(self):
        c = Component({ev("a")}, [Tes([({ev("a")}, 1)], 2)], 2)
        assert not closed_under_silent_insertion(c, (1, 2))


def test_grid_points():
    assert grid_points(0, 1, Fraction(1, 2)) == [0, Fraction(1, 2), 1]
    with pytest.raises(TesError):
        grid_points(0, 1, 0)
