"""A deliberately naive, independent model used to cross-check the library.

Streams are tuples of ``(t, frozenset_of_names)`` sorted by ``t``; components
are ``(interface, behavior)`` pairs of frozensets.  Nothing here imports the
library, apart from the converters at the bottom.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def at(s, t):
    for u, o in s:
        if u == t:
            return o
    return frozenset()


def dom(s):
    return {t for t, _ in s}


def sync_ok(s, u, ea, eb):
    return all(at(s, t) & eb == at(u, t) & ea for t in dom(s) | dom(u))


def union(s, u):
    return tuple(sorted(((t, at(s, t) | at(u, t)) for t in dom(s) | dom(u)), key=lambda p: p[0]))


def product(a, b):
    (ea, la), (eb, lb) = a, b
    return (ea | eb, frozenset(union(s, u) for s in la for u in lb if sync_ok(s, u, ea, eb)))


def refines(b, a):
    return b[0] <= a[0] and b[1] <= a[1]


def pointwise_below(s, u):
    return [t for t, _ in s] == [t for t, _ in u] and all(x <= y for (_, x), (_, y) in zip(s, u))


def contained(a, b):
    return a[0] <= b[0] and all(any(pointwise_below(s, u) for u in b[1]) for s in a[1])


def streams(events, grid, maxobs, silent=True):
    """Every stream over ``events`` on a subset of ``grid``."""
    events = sorted(events)
    obs = [frozenset(c) for k in range(0 if silent else 1, maxobs + 1) for c in combinations(events, k)]
    out = [()]
    for t in sorted(grid):
        out = out + [s + ((t, o),) for s in out for o in obs]
    return out


def sound(a, b, iface, universe):
    """Candidates whose every composite with ``b`` lies in ``a``."""
    ea, la = a
    eb, lb = b
    return [s for s in universe if all(union(u, s) in la for u in lb if sync_ok(u, s, eb, iface))]


def quotients(a, b, iface, candidates):
    """Exhaustive: every subset ``S`` of ``candidates`` with ``b x (iface, S) == a``."""
    out = []
    for r in range(len(candidates) + 1):
        for chosen in combinations(candidates, r):
            q = (frozenset(iface), frozenset(chosen))
            if product(b, q) == a:
                out.append(q)
    return out


def least(family):
    return [q for q in family if all(contained(q, r) for r in family)]


def coordinators(spec, plant, iface, candidates):
    """Exhaustive: nonempty subsets ``S`` with ``(iface, S) x plant`` refining ``spec``."""
    out = []
    for r in range(1, len(candidates) + 1):
        for chosen in combinations(candidates, r):
            c = (frozenset(iface), frozenset(chosen))
            if refines(product(c, plant), spec):
                out.append(c)
    return out


# converters to and from library objects


def to_lib_tes(s, horizon):
    from tesalg.core import Tes, ev

    return Tes([({ev(n) for n in o}, t) for t, o in s], horizon)


def to_lib(c, horizon):
    from tesalg.core import Component, ev

    return Component({ev(n) for n in c[0]}, [to_lib_tes(s, horizon) for s in c[1]], horizon if c[1] else None)


def from_lib_tes(s):
    return tuple((Fraction(t), frozenset(e.name for e in o)) for t, o in zip(s.stamps, s.observables))


def from_lib(c):
    return (frozenset(e.name for e in c.interface), frozenset(from_lib_tes(s) for s in c.behavior))
