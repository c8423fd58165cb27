import pytest
from hypothesis import given, strategies as st

import oracle as O
from strategies import GRID, components, event_sets, streams, sub_components
from tesalg.algebra import (
    check_law,
    component_union,
    product,
    product_all,
    silent_streams,
    unit_component,
    zero_component,
)
from tesalg.core import Component, Tes, TesError, ev, refines
from tesalg.signatures import SYNC, link_signature


@given(components(), components())
def test_product_matches_oracle(a, b):
    assert O.from_lib(product(a, b)) == O.product(O.from_lib(a), O.from_lib(b))


@given(components(), components())
def test_projection_soundness(a, b):
    p = product(a, b)
    assert p.interface == a.interface | b.interface
    for s in p.behavior:
        assert s.restrict(a.interface) in {x.restrict(a.interface) for x in _padded(a, s)}


def _padded(a, s):
    # a stream of ``a`` may gain silent stamps from its partner
    out = []
    for x in a.behavior:
        y = x
        for t in s.dom() - x.dom():
            y = y.insert_silent(t)
        out.append(y)
    return out


@given(st.data())
def test_same_interface_product_is_intersection_on_dense_lattice(data):
    iface = data.draw(event_sets(min_size=1))
    c = Component(iface, data.draw(st.lists(streams(iface, dense=True), max_size=4)), 3)
    d = Component(iface, data.draw(st.lists(streams(iface, dense=True), max_size=4)), 3)
    assert product(c, d).behavior == c.behavior & d.behavior


@given(components(closed=True, max_streams=2), st.data())
def test_same_interface_product_is_intersection_when_closed(c, data):
    from tesalg.core import silent_closure

    extra = data.draw(st.lists(streams(c.interface), max_size=2))
    d = silent_closure(Component(c.interface, list(c.behavior)[:1] + extra, 3), GRID)
    assert product(c, d).behavior == c.behavior & d.behavior


def test_sparse_same_interface_product_can_leave_both_operands():
    a = ev("a")
    c = Component({a}, [Tes([(set(), 1)], 3)], 3)
    d = Component({a}, [Tes([(set(), 2)], 3)], 3)
    assert product(c, d).behavior == {Tes([(set(), 1), (set(), 2)], 3)}


def test_horizon_mismatch_refused():
    with pytest.raises(TesError):
        product(Component({ev("a")}, [Tes((), 2)]), Component({ev("a")}, [Tes((), 3)]))


def test_product_all_is_left_fold():
    parts = [Component({ev(n)}, [Tes([({ev(n)}, 1)], 2)], 2) for n in "abc"]
    assert product_all(parts) == product(product(parts[0], parts[1]), parts[2])
    with pytest.raises(ValueError):
        product_all([])


class TestUnitAndZero:
    def test_silent_streams_on_two_points(self):
        got = set(silent_streams((1, 2), 2))
        assert got == {
            Tes((), 2),
            Tes([(set(), 1)], 2),
            Tes([(set(), 2)], 2),
            Tes([(set(), 1), (set(), 2)], 2),
        }

    def test_empty_grid(self):
        assert unit_component((), 2).behavior == {Tes((), 2)}

    def test_unit_idempotent(self):
        u = unit_component((1, 2), 2)
        assert product(u, u) == u

    @given(components(closed=True))
    def test_unit_is_neutral_on_closed(self, a):
        if not a.behavior:
            return
        assert product(a, unit_component(GRID, 3)) == a

    @given(components())
    def test_zero_absorbs(self, a):
        z = zero_component()
        assert refines(z, a)
        assert product(z, a).behavior == frozenset()
        assert product(a, z) == Component(a.interface, ())

    def test_zero_is_not_unit(self):
        assert zero_component() != unit_component((1,), 1)


class TestLaws:
    @given(st.lists(components(closed=True, max_streams=2), min_size=1, max_size=3))
    def test_commutative_associative_idempotent(self, ws):
        for law in ("commutative", "associative", "idempotent"):
            rep = check_law(law, SYNC, ws)
            assert rep.holds, (law, rep)

    @given(components(closed=True, max_streams=2), st.data())
    def test_monotonic_for_same_interface_refinement(self, a, data):
        b = data.draw(sub_components(a))
        c = data.draw(components(closed=True, max_streams=2))
        assert refines(product(b, c), product(a, c))

    @given(components(closed=True, max_streams=2), st.data())
    def test_monotonic_when_dropped_events_are_private(self, a, data):
        b = data.draw(sub_components(a))
        b = Component(frozenset().union(*(s.events() for s in b.behavior)), b.behavior, b.horizon)
        c = data.draw(components(closed=True, max_streams=2))
        if (a.interface - b.interface) & c.interface:
            return
        assert refines(product(b, c), product(a, c))

    def test_monotonic_fails_when_refinement_drops_a_shared_event(self):
        a_ev = ev("a")
        silent = Tes([(set(), 1)], 2)
        A = Component({a_ev}, [silent], 2)
        B = Component((), [silent], 2)
        C = Component({a_ev}, [Tes([({a_ev}, 1)], 2)], 2)
        assert refines(B, A)
        assert product(B, C).behavior == C.behavior
        assert product(A, C).behavior == frozenset()
        rep = check_law("monotonic", SYNC, [A, B, C])
        assert not rep.holds and rep.counterexample == (B, A, C)

    def test_idempotence_fails_on_sparse_silent_streams(self):
        A = Component({ev("a")}, [Tes([(set(), 1)], 2), Tes([(set(), 2)], 2)], 2)
        assert Tes([(set(), 1), (set(), 2)], 2) in product(A, A).behavior
        assert not check_law("idempotent", SYNC, [A]).holds

    def test_left_merge_breaks_commutativity(self):
        a = Component({ev("a")}, [Tes([({ev("a")}, 1)], 2)], 2)
        b = Component({ev("b")}, [Tes([({ev("b")}, 1)], 2)], 2)
        rep = check_law("commutative", link_signature("left", merge="left"), [a, b])
        assert not rep.holds and rep.counterexample == (a, b)
        assert "FAILS" in str(rep)

    def test_unknown_law(self):
        with pytest.raises(ValueError):
            check_law("distributive", SYNC, [])


def test_component_union():
    a = Component({ev("a")}, [Tes([({ev("a")}, 1)], 2)], 2)
    b = Component({ev("b")}, [Tes([({ev("b")}, 2)], 2)], 2)
    u = component_union([a, b])
    assert u.interface == {ev("a"), ev("b")} and u.behavior == a.behavior | b.behavior
