"""Robot and swap-protocol components on a discrete time lattice."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product as cartesian
from typing import Optional

from ..core import Component, Coord, Event, Tes, _intern, as_fraction
from ..signatures import DIRECTIONS, READ

MODES = ("free", "move-read-alternating", "moves-then-read")

STEP = {"N": (0, 1), "S": (0, -1), "W": (-1, 0), "E": (1, 0)}


@lru_cache(maxsize=256)
def lattice(first: int, period, horizon) -> tuple:
    """Stamps ``kT`` for ``k >= first`` up to the horizon; one shared tuple per argument set."""
    period, horizon = as_fraction(period), as_fraction(horizon)
    if period <= 0:
        raise ValueError("period must be positive")
    out, k = [], first
    while k * period <= horizon:
        out.append(k * period)
        k += 1
    return tuple(out)


class BehaviorBoundExceeded(Exception):
    def __init__(self, limit, needed, bound="robot behavior"):
        self.limit, self.needed, self.bound = limit, needed, bound
        super().__init__(f"{bound} bound exceeded: need {needed}, limit is {limit}")


def direction(d: str, i: int, power="p") -> Event:
    return Event(d, (i, power))


def read(i: int, x, y) -> Event:
    return Event(READ, (i, Coord(x, y)))


@dataclass(frozen=True)
class RobotSpec:
    """Parameters of one robot component.

    ``plans`` are direction strings such as ``"NWWS"``; reads report the
    dead-reckoned position from ``start``.  ``eager_reads`` forces each read
    one period after the move it reports.  ``partial`` also keeps timings
    that stop partway through a plan before the horizon.
    """

    id: int
    horizon: object
    period: object = 1
    power_cap: str = "P"
    move_power: str = "p"
    coord_bounds: tuple = (-20, 20)
    alternation: str = "free"
    plans: tuple = ()
    start: Optional[tuple] = None
    eager_reads: bool = False
    partial: bool = False
    first_stamp: int = 1
    max_behavior: int = 200_000

    def stamps(self) -> tuple:
        return lattice(self.first_stamp, as_fraction(self.period), as_fraction(self.horizon))

    def interface(self) -> frozenset:
        lo, hi = self.coord_bounds
        moves = {direction(d, self.id, self.move_power) for d in DIRECTIONS}
        reads = {read(self.id, x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1)}
        return frozenset(moves | reads)


def plan_events(spec: RobotSpec, plan: str) -> list:
    """The ordered event sequence of one plan, with ``True`` marking reads tied to the preceding move."""
    if spec.start is None and spec.alternation != "free":
        raise ValueError("reading robots need a start position")
    x, y = spec.start
    seq = []
    if spec.alternation == "move-read-alternating":
        seq.append((read(spec.id, x, y), False))
    for d in plan:
        if d not in STEP:
            raise ValueError(f"unknown direction {d!r} in plan {plan!r}")
        dx, dy = STEP[d]
        x, y = x + dx, y + dy
        seq.append((direction(d, spec.id, spec.move_power), False))
        if spec.alternation == "move-read-alternating":
            seq.append((read(spec.id, x, y), spec.eager_reads))
    if spec.alternation == "moves-then-read":
        seq.append((read(spec.id, x, y), spec.eager_reads))
    lo, hi = spec.coord_bounds
    for e, _ in seq:
        if e.name == READ and not (lo <= e.args[1].x <= hi and lo <= e.args[1].y <= hi):
            raise ValueError(f"plan {plan!r} leaves the coordinate bounds")
    return seq


def timings(seq: list, n_stamps: int, partial: bool):
    """Increasing stamp indices for a prefix of ``seq``; tied items sit one index after their predecessor."""

    def walk(pos, nxt):
        if pos == len(seq):
            yield ()
            return
        if partial:
            yield ()
        tied = seq[pos][1]
        choices = [nxt] if tied and pos > 0 else range(nxt, n_stamps)
        for k in choices:
            if k >= n_stamps:
                continue
            for rest in walk(pos + 1, k + 1):
                yield (k,) + rest

    yield from walk(0, 0)


def _dense(stamps, assignment: dict, horizon) -> Tes:
    obs = tuple(_intern(assignment.get(k, ())) for k in range(len(stamps)))
    return Tes((tuple(stamps), obs), horizon, _trusted=True)


def gen_robot(spec: RobotSpec) -> Component:
    """Every timing of every plan on the lattice ``kT``; unobserved lattice points are silent."""
    if spec.alternation not in MODES:
        raise ValueError(f"unknown alternation {spec.alternation!r}")
    stamps = spec.stamps()
    horizon = as_fraction(spec.horizon)
    iface = spec.interface()
    behavior = set()
    if spec.alternation == "free":
        need = 5 ** len(stamps)
        if need > spec.max_behavior:
            raise BehaviorBoundExceeded(spec.max_behavior, need)
        options = [()] + [(direction(d, spec.id, spec.move_power),) for d in DIRECTIONS]
        for pick in cartesian(options, repeat=len(stamps)):
            behavior.add(_dense(stamps, dict(enumerate(pick)), horizon))
    else:
        for plan in spec.plans:
            seq = plan_events(spec, plan)
            for ks in timings(seq, len(stamps), spec.partial):
                behavior.add(_dense(stamps, {k: (seq[n][0],) for n, k in enumerate(ks)}, horizon))
                if len(behavior) > spec.max_behavior:
                    raise BehaviorBoundExceeded(spec.max_behavior, len(behavior))
    if not stamps:
        behavior = {Tes((), horizon)}
    for s in behavior:
        assert all((t / as_fraction(spec.period)).denominator == 1 for t in s.stamps)
    return Component(iface, behavior, horizon, name=f"R({spec.id})", check=False)


def move_schedule(sigma: Tes, robot_id: int) -> tuple:
    """``((t, d), ...)`` for the direction events of one robot in ``sigma``."""
    return tuple(
        (t, e.name) for t, o in zip(sigma.stamps, sigma.observables) for e in o if e.name in DIRECTIONS and e.args[0] == robot_id
    )


def gen_swap(i: int, j: int, horizon, period=1, power="p", coord_bounds=(-20, 20), first_stamp=1) -> Component:
    """``i`` goes north, west, then south while ``j`` goes east in between.

    The east step may fall anywhere strictly between ``i``'s north and south
    steps; both robots are silent at every other lattice point.
    """
    if i == j:
        raise ValueError("swap needs two distinct robots")
    spec = RobotSpec(i, horizon, period, coord_bounds=coord_bounds, move_power=power, first_stamp=first_stamp)
    stamps = spec.stamps()
    iface = spec.interface() | RobotSpec(j, horizon, period, coord_bounds=coord_bounds, move_power=power).interface()
    n, w, s_ = (direction(d, i, power) for d in "NWS")
    e = direction("E", j, power)
    behavior = set()
    for a, b, c in combinations(range(len(stamps)), 3):
        for k in range(a + 1, c):
            obs = {a: {n}, b: {w}, c: {s_}}
            obs.setdefault(k, set()).add(e)
            behavior.add(_dense(stamps, obs, as_fraction(horizon)))
    return Component(iface, behavior, as_fraction(horizon) if behavior else None, name=f"swap({i},{j})", check=False)
