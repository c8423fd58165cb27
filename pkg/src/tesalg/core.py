"""Events, timed-event streams and components.

Timestamps are exact :class:`fractions.Fraction` values.  Streams are finite
prefixes cut at an explicit horizon, so every behavior is a finite set and all
relations below are decidable by direct enumeration.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Union

Rational = Union[int, Fraction]

POSITION = "@pos"


class TesError(ValueError):
    """Raised when a stream or component violates its structural invariants."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TesError(f"refusing binary float {value!r}; use Fraction or str")
    return Fraction(value)


def _num(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def _norm_atom(atom):
    if isinstance(atom, bool):
        raise TesError("boolean atoms are not supported")
    if isinstance(atom, Fraction):
        return int(atom) if atom.denominator == 1 else atom
    if isinstance(atom, (int, str, Coord)):
        return atom
    if isinstance(atom, tuple) and len(atom) == 2:
        return Coord(atom[0], atom[1])
    raise TesError(f"unsupported event argument {atom!r}")


def fmt_rational(q: Rational) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=False)
class Coord:
    """A coordinate pair ``(x;y)`` of rationals."""

    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        # integral values are stored as int: equal and hash-equal to the Fraction, much cheaper to compare
        object.__setattr__(self, "x", _num(as_fraction(x)))
        object.__setattr__(self, "y", _num(as_fraction(y)))

    def __str__(self):
        return f"({fmt_rational(self.x)};{fmt_rational(self.y)})"


def _atom_key(atom):
    if isinstance(atom, (int, Fraction)):
        return (0, atom, 0)
    if isinstance(atom, str):
        return (1, atom, 0)
    return (2, atom.x, atom.y)


class Event:
    """An observable action: a name applied to a tuple of atoms.

    Atoms are integers, rationals, identifiers or :class:`Coord` pairs.
    ``Event.position(i, x, y)`` builds the field event written ``(x;y)_i``.
    """

    __slots__ = ("name", "args", "_key", "_hash")

    def __init__(self, name: str, args: Iterable = ()):
        args = tuple(_norm_atom(a) for a in args)
        self.name = name
        self.args = args
        # arguments lead so that rows read by robot id, as in the worked tables
        self._key = (tuple(_atom_key(a) for a in args), name)
        self._hash = hash(self._key)

    @classmethod
    def position(cls, obj: int, x, y) -> "Event":
        return cls(POSITION, (Coord(x, y), obj))

    @property
    def is_position(self) -> bool:
        return self.name == POSITION

    @property
    def sort_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Event) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def __str__(self):
        if self.is_position:
            coord, obj = self.args
            return f"{coord}_{obj}"
        if not self.args:
            return self.name
        return f"{self.name}({','.join(_fmt_atom(a) for a in self.args)})"

    def __repr__(self):
        return f"Event({str(self)!r})"


def _fmt_atom(atom) -> str:
    if isinstance(atom, (int, Fraction)):
        return fmt_rational(atom)
    return str(atom)


def ev(name: str, *args) -> Event:
    """Shorthand constructor: ``ev("N", 1, "p")`` is ``N(1,p)``."""
    return Event(name, args)


def sorted_events(events: Iterable[Event]) -> list:
    return sorted(events, key=lambda e: e.sort_key)


class Observation(NamedTuple):
    observable: frozenset
    time: Fraction


_EMPTY = frozenset()
_interned: dict = {}
_obs_keys: dict = {}


def _obs_key(obs: frozenset) -> tuple:
    hit = _obs_keys.get(obs)
    if hit is None:
        if len(_obs_keys) > 200_000:
            _obs_keys.clear()
        hit = _obs_keys[obs] = tuple(e.sort_key for e in sorted_events(obs))
    return hit


def _intern(observable) -> frozenset:
    fs = frozenset(observable)
    if not fs:
        return _EMPTY
    hit = _interned.get(fs)
    if hit is None:
        if len(_interned) > 200_000:
            _interned.clear()
        _interned[fs] = fs
        hit = fs
    return hit


class Tes:
    """A finite timed-event stream cut at ``horizon``.

    Observations are stored as parallel tuples of stamps and observables;
    stamps strictly increase and never exceed the horizon.
    """

    __slots__ = ("stamps", "observables", "horizon", "_hash", "_sk")

    def __init__(self, observations: Iterable = (), horizon: Rational = 1, *, _trusted=False):
        if _trusted:
            stamps, observables = observations
        else:
            stamps, observables = [], []
            for obs, t in observations:
                stamps.append(as_fraction(t))
                observables.append(_intern(obs))
            stamps, observables = tuple(stamps), tuple(observables)
        horizon = as_fraction(horizon)
        if not _trusted:
            if horizon <= 0:
                raise TesError(f"horizon must be positive, got {horizon}")
            prev = None
            for t in stamps:
                if t < 0:
                    raise TesError(f"negative timestamp {t}")
                if prev is not None and not prev < t:
                    raise TesError(f"timestamps must strictly increase ({prev} then {t})")
                if t > horizon:
                    raise TesError(f"timestamp {t} exceeds horizon {horizon}")
                prev = t
        self.stamps = stamps
        self.observables = observables
        self.horizon = horizon
        self._hash = hash((stamps, observables, horizon))
        self._sk = None

    @classmethod
    def from_map(cls, mapping: dict, horizon: Rational) -> "Tes":
        """Build from ``{t: events}``; keys need not be sorted."""
        items = sorted((as_fraction(t), obs) for t, obs in mapping.items())
        return cls([(obs, t) for t, obs in items], horizon)

    def __iter__(self):
        for t, obs in zip(self.stamps, self.observables):
            yield Observation(obs, t)

    def __len__(self):
        return len(self.stamps)

    def __eq__(self, other):
        return (
            isinstance(other, Tes)
            and self._hash == other._hash
            and self.stamps == other.stamps
            and self.observables == other.observables
            and self.horizon == other.horizon
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"({{{', '.join(map(str, sorted_events(o)))}}},{fmt_rational(t)})" for o, t in self)
        return f"Tes<{body}>@{fmt_rational(self.horizon)}"

    @property
    def sort_key(self):
        if self._sk is None:
            self._sk = (
                self.horizon,
                len(self.stamps),
                self.stamps,
                tuple(_obs_key(o) for o in self.observables),
            )
        return self._sk

    def dom(self) -> frozenset:
        return frozenset(self.stamps)

    def pr1(self) -> tuple:
        return self.observables

    def pr2(self) -> tuple:
        return self.stamps

    def at(self, t) -> frozenset:
        return tes_at(self, t)

    def events(self) -> frozenset:
        out = set()
        for obs in self.observables:
            out |= obs
        return frozenset(out)

    def restrict(self, interface) -> "Tes":
        """Intersect every observable with ``interface``; stamps are kept."""
        return Tes(
            (self.stamps, tuple(_intern(o & interface) for o in self.observables)),
            self.horizon,
            _trusted=True,
        )

    def nonsilent(self) -> tuple:
        return tuple((t, o) for t, o in zip(self.stamps, self.observables) if o)

    def insert_silent(self, t) -> "Tes":
        t = as_fraction(t)
        if t in self.dom():
            raise TesError(f"stamp {t} already observed")
        if t > self.horizon or t < 0:
            raise TesError(f"stamp {t} outside [0, {self.horizon}]")
        i = bisect_left(self.stamps, t)
        return Tes(
            (self.stamps[:i] + (t,) + self.stamps[i:], self.observables[:i] + (_EMPTY,) + self.observables[i:]),
            self.horizon,
            _trusted=True,
        )


def empty_tes(horizon: Rational) -> Tes:
    return Tes((), horizon)


def tes_at(sigma: Tes, t) -> frozenset:
    """The observable at stamp ``t``, or the empty set when ``t`` is unobserved."""
    t = as_fraction(t)
    if t < 0:
        raise TesError("t must be nonnegative")
    i = bisect_left(sigma.stamps, t)
    if i < len(sigma.stamps) and sigma.stamps[i] == t:
        return sigma.observables[i]
    return _EMPTY


def tes_contained(sigma: Tes, tau: Tes) -> bool:
    """Pointwise containment: identical stamps, each observable a subset."""
    if sigma.stamps != tau.stamps:
        return False
    return all(a <= b for a, b in zip(sigma.observables, tau.observables))


class Component:
    """A pair of an interface (event set) and a finite behavior (set of streams).

    ``horizon`` is shared by every behavior element.  It may be ``None`` only
    when the behavior is empty, which makes the zero component horizon-neutral.
    """

    __slots__ = ("interface", "behavior", "horizon", "name", "_hash")

    def __init__(self, interface: Iterable[Event], behavior: Iterable[Tes] = (), horizon=None, *, name=None, check=True):
        self.interface = frozenset(interface)
        self.behavior = frozenset(behavior)
        if horizon is not None:
            horizon = as_fraction(horizon)
        if self.behavior:
            horizons = {s.horizon for s in self.behavior}
            if len(horizons) != 1:
                raise TesError(f"behavior mixes horizons {sorted(horizons)}")
            (h,) = horizons
            if horizon is not None and horizon != h:
                raise TesError(f"component horizon {horizon} differs from behavior horizon {h}")
            horizon = h
        self.horizon = horizon
        self.name = name
        if check:
            for s in self.behavior:
                for obs in s.observables:
                    if not obs <= self.interface:
                        stray = sorted_events(obs - self.interface)
                        raise TesError(f"events {', '.join(map(str, stray))} are not in the interface")
        self._hash = hash((self.interface, self.behavior))

    def __eq__(self, other):
        return (
            isinstance(other, Component)
            and self.interface == other.interface
            and self.behavior == other.behavior
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<Component {label}|E|={len(self.interface)} |L|={len(self.behavior)} H={self.horizon}>"

    def sorted_behavior(self) -> list:
        return sorted(self.behavior, key=lambda s: s.sort_key)

    def with_behavior(self, behavior, *, name=None) -> "Component":
        return Component(self.interface, behavior, self.horizon, name=name, check=False)


def refines(b: Component, a: Component) -> bool:
    """``b`` refines ``a``: interface and behavior inclusion."""
    return b.interface <= a.interface and b.behavior <= a.behavior


def contained(a: Component, b: Component) -> bool:
    """``a`` is contained in ``b``: each stream of ``a`` is pointwise below one of ``b``."""
    if not a.interface <= b.interface:
        return False
    by_stamps: dict = {}
    for tau in b.behavior:
        by_stamps.setdefault(tau.stamps, []).append(tau)
    for sigma in a.behavior:
        if sigma in b.behavior:
            continue
        if not any(tes_contained(sigma, tau) for tau in by_stamps.get(sigma.stamps, ())):
            return False
    return True


def horizon_compatible(*components: Component):
    """Return the common horizon (or ``None``), raising on mismatch."""
    found = {c.horizon for c in components if c.horizon is not None}
    if len(found) > 1:
        raise TesError(f"horizon mismatch: {', '.join(map(fmt_rational, sorted(found)))}")
    return next(iter(found), None)


def _gaps(sigma: Tes, grid) -> list:
    dom = sigma.dom()
    return [t for t in grid if t not in dom and 0 <= t <= sigma.horizon]


def closed_under_silent_insertion(a: Component, grid: Iterable) -> bool:
    grid = sorted({as_fraction(t) for t in grid})
    for sigma in a.behavior:
        for t in _gaps(sigma, grid):
            if sigma.insert_silent(t) not in a.behavior:
                return False
    return True


def silent_closure(a: Component, grid: Iterable) -> Component:
    """Smallest superset of ``a`` closed under silent insertion at ``grid`` points."""
    grid = sorted({as_fraction(t) for t in grid})
    out = set()
    for sigma in a.behavior:
        gaps = _gaps(sigma, grid)
        for r in range(len(gaps) + 1):
            for chosen in combinations(gaps, r):
                s = sigma
                for t in chosen:
                    s = s.insert_silent(t)
                out.add(s)
    return a.with_behavior(out)


def grid_points(start, stop, step) -> list:
    """Inclusive arithmetic grid ``start, start+step, ..., <= stop``."""
    start, stop, step = as_fraction(start), as_fraction(stop), as_fraction(step)
    if step <= 0:
        raise TesError("grid step must be positive")
    out, t = [], start
    while t <= stop:
        out.append(t)
        t += step
    return out
