"""Grid components, a half-integer field surrogate, and the sort property."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Optional

from ..core import Component, Event, Tes, _intern, as_fraction
from ..signatures import MOVE, velocity_of
from .robots import STEP, lattice, move_schedule

BLOCKING = ("lost", "wait")


class InconsistentState(ValueError):
    pass


@lru_cache(maxsize=None)
def position(i: int, x, y) -> Event:
    return Event.position(i, x, y)


@lru_cache(maxsize=None)
def move(i: int, d: str, period=1, power="p") -> Event:
    return Event(MOVE, (i, velocity_of(d, power, period)))


@dataclass(frozen=True)
class FieldSpec:
    """Objects on integer cells.

    ``cells`` lists the free cells (obstacles are simply absent).  With
    ``blocking="lost"`` a blocked move leaves its object in place; with
    ``"wait"`` any run containing a blocked move is discarded.
    """

    objects: tuple
    initial: dict
    cells: frozenset
    period: object = 1
    power: str = "p"
    blocking: str = "lost"
    spatial_resolution: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.blocking not in BLOCKING:
            raise ValueError(f"blocking must be one of {BLOCKING}")
        seen = set()
        for i in self.objects:
            if i not in self.initial:
                raise InconsistentState(f"object {i} has no initial position")
            cell = tuple(self.initial[i])
            if cell not in self.cells:
                raise InconsistentState(f"object {i} starts outside the free cells at {cell}")
            if cell in seen:
                raise InconsistentState(f"two objects start on {cell}")
            seen.add(cell)

    def interface(self) -> frozenset:
        out = set()
        for i in self.objects:
            out.update(position(i, x, y) for x, y in self.cells)
            out.update(move(i, d, self.period, self.power) for d in STEP)
        return frozenset(out)


def rectangle(xs, ys) -> frozenset:
    return frozenset(cartesian(range(xs[0], xs[1] + 1), range(ys[0], ys[1] + 1)))


def step(spec: FieldSpec, pos: dict, moves: dict):
    """Apply one lattice step.

    Returns ``(new_positions, blocked)`` or ``None`` when two objects target the
    same cell.  A move may enter a cell vacated in the same step; swaps block.
    """
    target = {}
    for i, d in moves.items():
        dx, dy = STEP[d]
        target[i] = (pos[i][0] + dx, pos[i][1] + dy)
    if len(set(target.values())) < len(target):
        return None
    ok = {i: target[i] in spec.cells for i in target}
    occupant = {c: i for i, c in pos.items()}
    changed = True
    while changed:
        changed = False
        for i in target:
            if not ok[i]:
                continue
            j = occupant.get(target[i])
            if j is None:
                continue
            # entering a cell is fine only if its occupant leaves successfully and not into ours
            if not ok.get(j, False) or target.get(j) == pos[i]:
                ok[i] = False
                changed = True
    new = dict(pos)
    for i in target:
        if ok[i]:
            new[i] = target[i]
    blocked = frozenset(i for i in target if not ok[i])
    if len(set(new.values())) < len(new):
        return None
    return new, blocked


def simulate(spec: FieldSpec, stamps: list, schedule: dict):
    """Positions after each stamp for a joint schedule ``{k: {i: d}}``, or ``None`` if rejected."""
    pos = {i: tuple(spec.initial[i]) for i in spec.objects}
    out = []
    for k in range(len(stamps)):
        moves = schedule.get(k, {})
        res = step(spec, pos, moves)
        if res is None:
            return None
        pos, blocked = res
        if blocked and spec.blocking == "wait":
            return None
        out.append((dict(moves), dict(pos)))
    return out


def _non_overlap(pos: dict) -> bool:
    # unit squares centred on distinct integer cells never overlap in their interiors
    return len(set(pos.values())) == len(pos)


def grid_tes(spec: FieldSpec, stamps: list, horizon, trace) -> Tes:
    obs = []
    for moves, pos in trace:
        assert _non_overlap(pos)
        o = {position(i, pos[i][0], pos[i][1]) for i in spec.objects}
        o.update(move(i, d, spec.period, spec.power) for i, d in moves.items())
        obs.append(_intern(o))
    return Tes((tuple(stamps), tuple(obs)), horizon, _trusted=True)


def joint_schedules(robots: Iterable[Component], ids: Iterable[int], stamps: list) -> list:
    """Cartesian product of the robots' individual move schedules, as ``{k: {i: d}}`` maps."""
    index = {t: k for k, t in enumerate(stamps)}
    per_robot = []
    for r, i in zip(robots, ids):
        per_robot.append(sorted({move_schedule(s, i) for s in r.behavior}))
    out = []
    for combo in cartesian(*per_robot):
        sched: dict = {}
        for i, moves in zip(ids, combo):
            for t, d in moves:
                sched.setdefault(index[t], {})[i] = d
        out.append(sched)
    return out


def gen_grid(spec: FieldSpec, horizon, schedules: Optional[Iterable] = None, first_stamp=1) -> Component:
    """Sampled integer evolutions, one per admissible joint schedule.

    Every stamp shows every object's position plus the velocity events of the
    moves commanded there.  Without ``schedules`` the objects stay put.
    """
    horizon = as_fraction(horizon)
    stamps = lattice(first_stamp, as_fraction(spec.period), horizon)
    if schedules is None:
        schedules = [{}]
    behavior = set()
    for sched in schedules:
        trace = simulate(spec, stamps, sched)
        if trace is not None:
            behavior.add(grid_tes(spec, stamps, horizon, trace))
    return Component(spec.interface(), behavior, horizon if behavior else None, name="G", check=False)


@dataclass(frozen=True)
class SortProperty:
    """Robot ``i`` sits on ``(i;0)`` for every ``i`` at some common stamp."""

    objects: tuple

    def goal(self) -> frozenset:
        return frozenset(position(i, i, 0) for i in self.objects)

    def holds(self, sigma: Tes) -> bool:
        goal = self.goal()
        return any(goal <= o for o in sigma.observables)


def c_sorted(prop: SortProperty, plant: Component, interface=None) -> Component:
    """The sorted runs of ``plant``, over ``interface`` (the plant's by default)."""
    iface = plant.interface if interface is None else frozenset(interface)
    beh = {s for s in plant.behavior if prop.holds(s)}
    return Component(iface, beh, plant.horizon if beh else None, name="C_sorted", check=False)


@dataclass(frozen=True)
class SurrogateField:
    """One-dimensional field sampled every half period.

    At each whole period the object may start moving one cell east or west (if
    that stays on ``cells``) or stay.  Samples are taken at positive multiples
    of half a period; each shows every position, plus the velocity event when
    motion starts there.  Motion starting at time zero is part of the initial
    state and has no event.
    """

    objects: tuple = (1,)
    initial: dict = field(default_factory=lambda: {1: 0})
    cells: tuple = (0, 1)
    period: object = 1
    power: str = "p"

    def interface(self) -> frozenset:
        out = set()
        half = Fraction(1, 2)
        for i in self.objects:
            lo, hi = min(self.cells), max(self.cells)
            x = Fraction(lo)
            while x <= hi:
                out.add(position(i, x, 0))
                x += half
            out.update(move(i, d, self.period, self.power) for d in "EW")
        return frozenset(out)

    def grid_interface(self) -> frozenset:
        return frozenset(e for e in self.interface() if not e.is_position or (e.args[0].x.denominator == 1))

    def samples(self, horizon) -> list:
        period, horizon = as_fraction(self.period), as_fraction(horizon)
        out, t = [], period / 2
        while t <= horizon:
            out.append(t)
            t += period / 2
        return out

    def component(self, horizon) -> Component:
        horizon = as_fraction(horizon)
        period = as_fraction(self.period)
        samples = self.samples(horizon)
        starts = [t for t in [Fraction(0)] + samples if t < horizon and (t / period).denominator == 1]
        ids = list(self.objects)
        unit = {"": 0, "E": 1, "W": -1}
        behavior = set()
        for choice in cartesian(("", "E", "W"), repeat=len(starts) * len(ids)):
            plan = {(t, i): choice[n * len(ids) + m] for n, t in enumerate(starts) for m, i in enumerate(ids)}
            obs, ok = [], True
            for t in samples:
                start = max((s for s in starts if s <= t), default=None)
                o = set()
                xs = []
                for i in ids:
                    x = Fraction(self.initial[i])
                    for s in starts:
                        if s >= t:
                            break
                        x += unit[plan[(s, i)]] * min(t - s, period) / period
                    if not (min(self.cells) <= x <= max(self.cells)):
                        ok = False
                    xs.append(x)
                    o.add(position(i, x, 0))
                    if start == t and plan[(t, i)]:
                        o.add(move(i, plan[(t, i)], period, self.power))
                if any(abs(a - b) < 1 for n, a in enumerate(xs) for b in xs[n + 1 :]):
                    ok = False
                obs.append(_intern(o))
            if ok:
                behavior.add(Tes((tuple(samples), tuple(obs)), horizon, _trusted=True))
        return Component(self.interface(), behavior, horizon if behavior else None, name="F", check=False)
