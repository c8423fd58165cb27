"""Interaction signatures: a composability relation paired with a composition function.

Every built-in signature is pointwise: composability holds when a predicate
holds at every stamp of ``dom(sigma) | dom(tau)``, and composition merges the
two observables stamp by stamp.  On finite prefixes this is exactly the lift
of an observation-level constraint to streams.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Optional

from .core import Coord, Event, Tes, TesError, _intern, as_fraction

DIRECTIONS = ("N", "S", "W", "E")
READ = "read"
MOVE = "move"


def _merged(sigma: Tes, tau: Tes):
    """Yield ``(t, sigma(t), tau(t))`` over the union of both domains."""
    s_st, s_ob = sigma.stamps, sigma.observables
    t_st, t_ob = tau.stamps, tau.observables
    i = j = 0
    empty = frozenset()
    while i < len(s_st) or j < len(t_st):
        if j >= len(t_st) or (i < len(s_st) and s_st[i] < t_st[j]):
            yield s_st[i], s_ob[i], empty
            i += 1
        elif i >= len(s_st) or t_st[j] < s_st[i]:
            yield t_st[j], empty, t_ob[j]
            j += 1
        else:
            yield s_st[i], s_ob[i], t_ob[j]
            i += 1
            j += 1


def lift_merge(sigma: Tes, tau: Tes, merge) -> Tes:
    if sigma.horizon != tau.horizon:
        raise TesError(f"cannot compose streams with horizons {sigma.horizon} and {tau.horizon}")
    if sigma.stamps == tau.stamps:
        stamps = sigma.stamps
        obs = tuple(_intern(merge(a, b)) for a, b in zip(sigma.observables, tau.observables))
    else:
        stamps, obs = [], []
        for t, a, b in _merged(sigma, tau):
            stamps.append(t)
            obs.append(_intern(merge(a, b)))
        stamps, obs = tuple(stamps), tuple(obs)
    return Tes((stamps, obs), sigma.horizon, _trusted=True)


def sync_composable(sigma: Tes, tau: Tes, e1, e2) -> bool:
    """Shared events occur at exactly the same stamps in both streams."""
    if sigma.stamps == tau.stamps:
        return all(a & e2 == b & e1 for a, b in zip(sigma.observables, tau.observables))
    return all(a & e2 == b & e1 for _, a, b in _merged(sigma, tau))


def union_compose(sigma: Tes, tau: Tes) -> Tes:
    """Pointwise union; the domain is the union of both domains."""
    return lift_merge(sigma, tau, frozenset.__or__)


def sync_key(sigma: Tes, own, other):
    return tuple((t, o & other) for t, o in zip(sigma.stamps, sigma.observables) if o & other)


@dataclass(frozen=True)
class InteractionSignature:
    """A named composability relation and composition function.

    ``join_key``, when given, maps a stream (plus its own and the other
    operand's interface) to a hashable bucket such that composable pairs
    always share a bucket.  ``product`` uses it to avoid the quadratic scan.
    """

    name: str
    composable: Callable[[Tes, Tes, frozenset, frozenset], bool]
    compose: Callable[[Tes, Tes], Tes]
    join_key: Optional[Callable] = field(default=None, compare=False)
    exact_key: bool = field(default=False, compare=False)

    def __str__(self):
        return self.name


SYNC = InteractionSignature("sync", sync_composable, union_compose, sync_key, exact_key=True)


def pointwise_signature(name: str, predicate, merge=frozenset.__or__) -> InteractionSignature:
    """Lift ``predicate(o1, o2, e1, e2)`` and ``merge(o1, o2)`` from observations to streams."""

    def composable(sigma, tau, e1, e2):
        return all(predicate(a, b, e1, e2) for _, a, b in _merged(sigma, tau))

    def compose(sigma, tau):
        return lift_merge(sigma, tau, merge)

    return InteractionSignature(name, composable, compose)


def link_signature(name: str, *, shared_sync=True, links=(), merge="union") -> InteractionSignature:
    """A custom pointwise signature from a table of linked event pairs.

    Each link ``(x, y)`` demands ``x`` in one operand's observable exactly when
    ``y`` is in the other's.  ``merge`` is ``"union"`` or ``"left"``.
    """
    links = tuple(links)

    def predicate(a, b, e1, e2):
        if shared_sync and a & e2 != b & e1:
            return False
        for x, y in links:
            if x in e1 and y in e2 and (x in a) != (y in b):
                return False
            if y in e1 and x in e2 and (y in a) != (x in b):
                return False
        return True

    if merge == "union":
        merger = frozenset.__or__
    elif merge == "left":
        merger = lambda a, b: a  # noqa: E731
    else:
        raise ValueError(f"unknown merge {merge!r}")
    sig = pointwise_signature(name, predicate, merger)
    if shared_sync and not links:
        return InteractionSignature(name, sig.composable, sig.compose, sync_key, exact_key=False)
    return sig


def velocity_of(direction: str, power, period) -> Coord:
    period = as_fraction(period)
    if period <= 0:
        raise ValueError("period must be positive")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if power == 0:
        return Coord(0, 0)
    unit = 1 / period
    return {
        "N": Coord(0, unit),
        "S": Coord(0, -unit),
        "W": Coord(-unit, 0),
        "E": Coord(unit, 0),
    }[direction]


def is_robot_event(e: Event) -> bool:
    return e.name in DIRECTIONS or e.name == READ


def is_field_event(e: Event) -> bool:
    return e.is_position or e.name == MOVE


_has_robot: dict = {}


def _any_robot(iface) -> bool:
    hit = _has_robot.get(iface)
    if hit is None:
        hit = _has_robot[iface] = any(is_robot_event(e) for e in iface)
    return hit


def _robot_side(e1, e2):
    r1 = _any_robot(e1)
    r2 = _any_robot(e2)
    if r1 and not r2:
        return 0
    if r2 and not r1:
        return 1
    return None


def _ids(interface, pred) -> frozenset:
    return frozenset(e.args[0] for e in interface if pred(e) and e.args)


def make_rf(period=1) -> InteractionSignature:
    """Robot/field signature: moves co-occur with field velocity events and
    every position read is backed by a field position whose floor matches.

    A field position without a matching read is accepted.
    """
    period = as_fraction(period)
    vcache: dict = {}
    mcache: dict = {}
    idcache: dict = {}
    pcache: dict = {}

    def velocity(e: Event) -> Event:
        hit = vcache.get(e)
        if hit is None:
            i = e.args[0]
            p = e.args[1] if len(e.args) > 1 else 1
            hit = Event(MOVE, (i, velocity_of(e.name, p, period)))
            vcache[e] = hit
        return hit

    def robot_moves(obs):
        hit = mcache.get(obs)
        if hit is None:
            hit = frozenset(velocity(e) for e in obs if e.name in DIRECTIONS)
            mcache[obs] = hit
        return hit

    def field_moves(obs, robot_ids):
        return frozenset(e for e in obs if e.name == MOVE and e.args[0] in robot_ids)

    def robot_ids_of(iface):
        hit = idcache.get(iface)
        if hit is None:
            hit = idcache[iface] = _ids(iface, is_robot_event)
        return hit

    def pointwise(r_obs, f_obs, robot_ids):
        key = (r_obs, f_obs, robot_ids)
        hit = pcache.get(key)
        if hit is not None:
            return hit
        ok = robot_moves(r_obs) == field_moves(f_obs, robot_ids)
        if ok:
            for e in r_obs:
                if e.name == READ:
                    i, c = e.args
                    if not any(
                        p.is_position and p.args[1] == i and floor(p.args[0].x) == c.x and floor(p.args[0].y) == c.y
                        for p in f_obs
                    ):
                        ok = False
                        break
        if len(pcache) > 500_000:
            pcache.clear()
        pcache[key] = ok
        return ok

    def composable(sigma, tau, e1, e2):
        side = _robot_side(e1, e2)
        if side is None:
            return False
        robot, fld = (sigma, tau) if side == 0 else (tau, sigma)
        r_iface = e1 if side == 0 else e2
        robot_ids = robot_ids_of(r_iface)
        return all(pointwise(a, b, robot_ids) for _, a, b in _merged(robot, fld))

    def key(sigma, own, other):
        side = _robot_side(own, other)
        if side == 0:
            return tuple((t, m) for t, o in zip(sigma.stamps, sigma.observables) if (m := robot_moves(o)))
        if side == 1:
            robot_ids = robot_ids_of(other)
            return tuple(
                (t, m) for t, o in zip(sigma.stamps, sigma.observables) if (m := field_moves(o, robot_ids))
            )
        return None

    return InteractionSignature(f"rf[T={period}]" if period != 1 else "rf", composable, union_compose, key)


RF = make_rf(1)


def rf_composable(tau: Tes, sigma: Tes, period=1, robot_interface=None, field_interface=None) -> bool:
    """Robot stream ``tau`` against field stream ``sigma``.

    Interfaces default to the events occurring in each stream.
    """
    sig = RF if as_fraction(period) == 1 else make_rf(period)
    e_tau = tau.events() if robot_interface is None else frozenset(robot_interface)
    e_sigma = sigma.events() if field_interface is None else frozenset(field_interface)
    return sig.composable(tau, sigma, e_tau, e_sigma)


BUILTIN = {"sync": SYNC, "rf": RF}


def get_signature(name: str, registry: Optional[dict] = None) -> InteractionSignature:
    if registry and name in registry:
        return registry[name]
    if name in BUILTIN:
        return BUILTIN[name]
    if name.startswith("rf[T=") and name.endswith("]"):
        return make_rf(Fraction(name[5:-1]))
    raise KeyError(name)
