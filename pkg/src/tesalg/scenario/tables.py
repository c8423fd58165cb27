"""Fixed streams and components mirroring the worked tables of the robot example."""

from __future__ import annotations

from itertools import combinations

from ..core import Component, Tes, _intern, as_fraction, ev
from .robots import direction, read

# the swap example starts robots on a column, unlike the sorting example
TABLE2_START = {1: (0, 2), 2: (0, 1), 3: (0, 0)}
SORT_START = {1: (3, 0), 2: (2, 0), 3: (1, 0)}
FREE_CELLS = frozenset((x, y) for x in range(1, 4) for y in range(0, 2))


def _stream(rows, horizon, stamps=None) -> Tes:
    """``rows`` lists observables for stamps ``1, 2, ...`` (or ``stamps``)."""
    stamps = stamps or list(range(1, len(rows) + 1))
    return Tes((tuple(map(as_fraction, stamps)), tuple(_intern(r) for r in rows)), horizon, _trusted=True)


def table1(horizon=5) -> dict:
    """The three robot prefixes, padded with silence to ``horizon``."""
    d = direction
    cols = {
        "sigma": [{d("N", 1)}, {d("W", 1)}, {d("W", 1)}, {d("S", 1)}],
        "tau": [set(), set(), {d("N", 2)}, {d("W", 2)}],
        "delta": [set(), set(), {d("E", 3)}, {d("E", 3)}],
    }
    return {k: _stream(v + [set()] * (horizon - len(v)), horizon) for k, v in cols.items()}


def table2_rows() -> list:
    d = direction
    return [
        {d("N", 1)},
        {d("W", 1)},
        {d("W", 1), d("N", 2)},
        {d("S", 1), d("W", 2), d("E", 3)},
        {d("S", 2)},
    ]


def table2_eta(horizon=5) -> Tes:
    """The composite prefix, padded with silence to ``horizon``."""
    rows = table2_rows()
    return _stream(rows + [set()] * (horizon - len(rows)), horizon)


def table3(grid=(1, 2, 3, 4), length=3) -> dict:
    """Components A, B, C, D over ``{0,1,2}``, ``{0,1}``, ``{0,2}``, ``{1,2}``.

    Each behavior holds the constant stream over every ``length``-subset of the
    grid, so the divisor fixes timing only through its shared events.
    """
    e = {n: ev(str(n)) for n in range(3)}
    horizon = max(grid)

    def comp(name, names):
        events = frozenset(e[n] for n in names)
        beh = [Tes([(events, t) for t in ts], horizon) for ts in combinations(grid, length)]
        return Component(events, beh, horizon, name=name)

    return {
        "A": comp("A", (0, 1, 2)),
        "B": comp("B", (0, 1)),
        "C": comp("C", (0, 2)),
        "D": comp("D", (1, 2)),
        "F": Component({e[2]}, (), None, name="F"),
    }


def mutual_containment() -> tuple:
    """Two components that contain each other without being equal."""
    a, b = ev("a"), ev("b")
    h = 3
    big = Tes([({a, b}, t) for t in (1, 2, 3)], h)
    small = Tes([({a}, t) for t in (1, 2, 3)], h)
    return Component({a, b}, [big, small], h, name="A"), Component({a, b}, [big], h, name="B")


TABLE4_PLANS = {1: ("NWWS", "WW"), 2: ("NWSE",), 3: ("EE",)}
TABLE5_PLANS = {1: ("NWWS",), 2: ("NWSE",), 3: ("EE",)}


def table4_columns(horizon=10) -> dict:
    """One timing of each update column: reads follow their move one period later."""
    def col(i, start, plan, first=1):
        rows = {first: {read(i, *start)}}
        x, y = start
        k = first + 1
        steps = {"N": (0, 1), "S": (0, -1), "W": (-1, 0), "E": (1, 0)}
        for dname in plan:
            dx, dy = steps[dname]
            x, y = x + dx, y + dy
            rows[k] = {direction(dname, i)}
            rows[k + 1] = {read(i, x, y)}
            k += 2
        return _stream([rows.get(t, set()) for t in range(1, horizon + 1)], horizon)

    return {
        "sigma": col(1, SORT_START[1], "NWWS"),
        "eta": col(1, SORT_START[1], "WW"),
        "tau": col(2, SORT_START[2], "NWSE"),
        "delta": col(3, SORT_START[3], "EE"),
    }


def event_names(tes: Tes) -> list:
    return [sorted(str(x) for x in o) for o in tes.observables]

