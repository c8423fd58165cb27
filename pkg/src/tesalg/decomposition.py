"""Division and conformance over finite candidate universes.

Quotients of ``A`` by ``B`` and coordinators making ``B`` conform to ``A`` are
searched among subsets of an explicit, finite universe of candidate streams.
Every result is therefore relative to the universe it was computed over.

Both searches start from the *sound maximal set*: the candidates whose every
composite with the divisor (or plant) lands inside the dividend (or spec).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product as cartesian
from math import comb
from typing import Iterable, Optional, Sequence

from .algebra import component_union, product, product_all
from .core import Component, Tes, TesError, _intern, as_fraction, contained, horizon_compatible, refines, sorted_events
from .signatures import SYNC, InteractionSignature

DEFAULT_MAX_UNIVERSE = 1_000_000
DEFAULT_MAX_SUBSET_BASE = 20

QUOTIENT_CHOICES = ("theorem1-lower-bound", "pick-first-canonical", "cost-ranked")
COORDINATOR_CHOICES = ("theorem2-union", "greatest", "pick-first-canonical", "cost-ranked")


class DecompositionError(Exception):
    """Base class for division and conformance failures."""


class ResourceBoundError(DecompositionError):
    """A configured enumeration bound would be exceeded."""

    def __init__(self, bound: str, limit: int, needed: int):
        self.bound, self.limit, self.needed = bound, limit, needed
        super().__init__(f"{bound} exceeded: need {needed}, limit is {limit}")


class UniverseTooLarge(ResourceBoundError):
    def __init__(self, limit, needed):
        super().__init__("max-universe", limit, needed)


class SubsetBoundExceeded(ResourceBoundError):
    def __init__(self, limit, needed):
        super().__init__("max-subset-base", limit, needed)


class NotDivisible(DecompositionError):
    pass


class NoLowerBound(DecompositionError):
    pass


class NoCoordinator(DecompositionError):
    pass


class PremiseViolation(DecompositionError):
    """A constructive bound failed its re-verification (the premise behind that bound does not hold)."""


def _iface_key(interface) -> tuple:
    return tuple(e.sort_key for e in sorted_events(interface))


def iface_str(interface) -> str:
    return "{" + ", ".join(map(str, sorted_events(interface))) + "}"


def _behavior_key(c: Component) -> tuple:
    return (len(c.behavior), tuple(s.sort_key for s in c.sorted_behavior()))


@dataclass(frozen=True)
class CandidateUniverse:
    """All streams over ``interface`` stamped from ``grid`` with at most
    ``max_obs_size`` events per observation, or an explicit pool.

    With ``dense`` every candidate observes every grid point (possibly silently);
    otherwise any subset of the grid may be observed.  ``silent=False`` drops
    empty observables from the sparse universe.
    """

    interface: frozenset
    grid: tuple
    max_obs_size: int
    horizon: object
    explicit_pool: Optional[frozenset] = None
    dense: bool = False
    silent: bool = True

    def __init__(self, interface, grid=(), max_obs_size=1, horizon=1, explicit_pool=None, dense=False, silent=True):
        object.__setattr__(self, "interface", frozenset(interface))
        object.__setattr__(self, "grid", tuple(sorted({as_fraction(t) for t in grid})))
        object.__setattr__(self, "max_obs_size", int(max_obs_size))
        object.__setattr__(self, "horizon", as_fraction(horizon))
        object.__setattr__(self, "explicit_pool", None if explicit_pool is None else frozenset(explicit_pool))
        object.__setattr__(self, "dense", bool(dense))
        object.__setattr__(self, "silent", bool(silent) or bool(dense))
        if any(t > self.horizon or t < 0 for t in self.grid):
            raise TesError("grid points must lie in [0, horizon]")
        if self.explicit_pool is not None:
            for s in self.explicit_pool:
                if s.horizon != self.horizon:
                    raise TesError("pool stream horizon differs from universe horizon")
                if not s.events() <= self.interface:
                    raise TesError("pool stream uses events outside the universe interface")

    def observables(self) -> list:
        evs = sorted_events(self.interface)
        out = []
        for k in range(0 if self.silent else 1, min(self.max_obs_size, len(evs)) + 1):
            out.extend(_intern(c) for c in combinations(evs, k))
        return out

    def cardinality(self) -> int:
        if self.explicit_pool is not None:
            return len(self.explicit_pool)
        lo = 0 if self.silent else 1
        n = sum(comb(len(self.interface), k) for k in range(lo, min(self.max_obs_size, len(self.interface)) + 1))
        return n ** len(self.grid) if self.dense else (n + 1) ** len(self.grid)

    def __iter__(self):
        if self.explicit_pool is not None:
            yield from sorted(self.explicit_pool, key=lambda s: s.sort_key)
            return
        obs = self.observables()
        choices = obs if self.dense else [None] + obs
        for pick in cartesian(choices, repeat=len(self.grid)):
            stamps = tuple(t for t, o in zip(self.grid, pick) if o is not None)
            observables = tuple(o for o in pick if o is not None)
            yield Tes((stamps, observables), self.horizon, _trusted=True)

    def describe(self) -> dict:
        return {
            "interface": [str(e) for e in sorted_events(self.interface)],
            "grid": [str(t) for t in self.grid],
            "max_obs_size": self.max_obs_size,
            "horizon": str(self.horizon),
            "dense": self.dense,
            "silent": self.silent,
            "explicit_pool": None if self.explicit_pool is None else len(self.explicit_pool),
            "cardinality": self.cardinality(),
        }


@dataclass
class QuotientQuery:
    dividend: Component
    divisor: Component
    universe: CandidateUniverse
    signature: InteractionSignature = SYNC
    side: str = "right"
    max_universe: int = DEFAULT_MAX_UNIVERSE
    max_subset_base: int = DEFAULT_MAX_SUBSET_BASE


@dataclass
class QuotientResult:
    """Quotients built from contributing sound candidates.

    ``free`` lists sound candidates that compose with no divisor stream; any
    subset of them may be added to a listed quotient without changing the
    product, so they are reported once instead of multiplying the family.
    """

    query: QuotientQuery
    sound_maximal: list
    quotients: Optional[list]
    lower_bound: Optional[Component] = None
    notes: list = field(default_factory=list)
    free: list = field(default_factory=list)

    @property
    def divisible(self) -> bool:
        return bool(self.quotients)


@dataclass
class ConformanceQuery:
    spec: Component
    plant: Component
    universe: CandidateUniverse
    signature: InteractionSignature = SYNC
    side: str = "right"
    live: bool = False
    max_universe: int = DEFAULT_MAX_UNIVERSE
    max_subset_base: int = DEFAULT_MAX_SUBSET_BASE


@dataclass
class ConformanceResult:
    query: ConformanceQuery
    sound_maximal: list
    coordinators: Optional[list]
    greatest: Optional[Component]
    notes: list = field(default_factory=list)

    @property
    def conformant(self) -> bool:
        return self.greatest is not None


def _operands(side, candidate, other):
    # right: other x candidate; left: candidate x other
    return (other, candidate) if side == "right" else (candidate, other)


def _contributions(target: Component, other: Component, sig: InteractionSignature, universe: CandidateUniverse, side: str, max_universe: int):
    """Map each universe stream to the composites it forms with ``other``
    (or ``None`` when some composite falls outside ``target``)."""
    if side not in ("right", "left", "commutative"):
        raise ValueError(f"unknown side {side!r}")
    if side == "commutative":
        side = "right"
    size = universe.cardinality()
    if size > max_universe:
        raise UniverseTooLarge(max_universe, size)
    horizon_compatible(target, other)
    if other.horizon is not None and other.horizon != universe.horizon:
        raise TesError(f"universe horizon {universe.horizon} differs from operand horizon {other.horizon}")
    e_cand, e_other = universe.interface, other.interface
    buckets = None
    if sig.join_key is not None:
        buckets = {}
        for tau in other.behavior:
            buckets.setdefault(sig.join_key(tau, e_other, e_cand), []).append(tau)
    out = {}
    for sigma in universe:
        partners = other.behavior if buckets is None else buckets.get(sig.join_key(sigma, e_cand, e_other), ())
        made = set()
        ok = True
        for tau in partners:
            if side == "right":
                good = sig.composable(tau, sigma, e_other, e_cand)
                comp = sig.compose(tau, sigma) if good else None
            else:
                good = sig.composable(sigma, tau, e_cand, e_other)
                comp = sig.compose(sigma, tau) if good else None
            if good:
                if comp not in target.behavior:
                    ok = False
                    break
                made.add(comp)
        out[sigma] = frozenset(made) if ok else None
    return out


def sound_maximal_set(a: Component, b: Component, sig: InteractionSignature, universe: CandidateUniverse, *, side="right", max_universe=DEFAULT_MAX_UNIVERSE) -> list:
    """Candidates all of whose composites with ``b`` belong to ``a``, canonically ordered."""
    contrib = _contributions(a, b, sig, universe, side, max_universe)
    return [s for s, c in contrib.items() if c is not None]


def _quotient_masks(q: QuotientQuery):
    """Sound candidates, split into contributing ones (with composite bitmasks) and free ones."""
    contrib = _contributions(q.dividend, q.divisor, q.signature, q.universe, q.side, q.max_universe)
    index = {a: i for i, a in enumerate(sorted(q.dividend.behavior, key=lambda s: s.sort_key))}
    live, masks, free = [], [], []
    for s, made in contrib.items():
        if made is None:
            continue
        if not made:
            free.append(s)
            continue
        m = 0
        for comp in made:
            m |= 1 << index[comp]
        live.append(s)
        masks.append(m)
    return live, masks, free, (1 << len(index)) - 1


def _iface_ok(q: QuotientQuery) -> bool:
    return q.divisor.interface | q.universe.interface == q.dividend.interface


def _covers(masks: list, full: int):
    """All index subsets whose masks OR to ``full`` (depth-first, pruned)."""
    n = len(masks)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]
    if suffix[0] != full:
        return
    chosen = []

    def walk(i, acc):
        if (acc | suffix[i]) != full:
            return
        if i == n:
            yield tuple(chosen)
            return
        chosen.append(i)
        yield from walk(i + 1, acc | masks[i])
        chosen.pop()
        yield from walk(i + 1, acc)

    yield from walk(0, 0)


def _as_component(universe: CandidateUniverse, behavior, name=None) -> Component:
    behavior = frozenset(behavior)
    return Component(universe.interface, behavior, universe.horizon if behavior else None, name=name, check=False)


def _recompute(q, candidate: Component) -> Component:
    side = "right" if q.side == "commutative" else q.side
    left, right = _operands(side, candidate, q.divisor if isinstance(q, QuotientQuery) else q.plant)
    return product(left, right, q.signature)


def is_quotient(q: QuotientQuery, candidate: Component) -> bool:
    return _recompute(q, candidate) == q.dividend


def enumerate_quotients(q: QuotientQuery, *, verify=True) -> QuotientResult:
    """All covers of the dividend by contributing sound candidates.

    Each cover, taken as a component over the universe interface, has product
    with the divisor equal to the dividend; ``verify`` re-executes that product.
    """
    live, masks, free, full = _quotient_masks(q)
    sound = sorted(live + free, key=lambda s: s.sort_key)
    notes = []
    if free:
        notes.append(f"{len(free)} sound candidates compose with no divisor stream and may be added to any quotient")
    if not _iface_ok(q):
        notes.append("interface of divisor and candidates does not cover the dividend interface exactly")
        return QuotientResult(q, sound, [], None, notes, free)
    if len(live) > q.max_subset_base:
        raise SubsetBoundExceeded(q.max_subset_base, len(live))
    quotients = [_as_component(q.universe, (live[i] for i in idx)) for idx in _covers(masks, full)]
    quotients.sort(key=_behavior_key)
    if verify:
        for c in quotients:
            if not is_quotient(q, c):
                raise PremiseViolation(f"re-execution rejected enumerated quotient {c!r}")
    if q.side == "commutative":
        left = QuotientQuery(q.dividend, q.divisor, q.universe, q.signature, "left", q.max_universe, q.max_subset_base)
        if set(enumerate_quotients(left, verify=False).quotients) != set(quotients):
            raise PremiseViolation("left and right quotients differ under a declared commutative query")
    result = QuotientResult(q, sound, quotients, None, notes, free)
    if quotients:
        try:
            result.lower_bound = _fold_lower_bound(q, quotients)
        except PremiseViolation as exc:
            notes.append(f"no lower bound: {exc}")
    return result


def _fold_lower_bound(q: QuotientQuery, quotients: list) -> Component:
    bound = product_all(quotients, q.signature)
    bound = Component(q.universe.interface, bound.behavior, bound.horizon, check=False)
    if not is_quotient(q, bound):
        raise PremiseViolation("fold product of the quotient family is not itself a quotient")
    for c in quotients:
        if not contained(bound, c):
            raise PremiseViolation("fold product of the quotient family is not below every member")
    return bound


def essential_quotient(q: QuotientQuery) -> Component:
    """Intersection of all quotients at the universe interface, without enumerating them.

    A sound candidate belongs to every quotient exactly when it is the only
    sound candidate producing some dividend stream.
    """
    sound, masks, _, full = _quotient_masks(q)
    if not _iface_ok(q):
        raise NotDivisible("interface of divisor and candidates does not cover the dividend interface")
    total = 0
    for m in masks:
        total |= m
    if total != full:
        raise NotDivisible("sound candidates do not cover the dividend")
    seen_once = seen_twice = 0
    for m in masks:
        seen_twice |= seen_once & m
        seen_once |= m
    unique = seen_once & ~seen_twice
    chosen = [s for s, m in zip(sound, masks) if m & unique]
    return _as_component(q.universe, chosen)


def divide(q, choice: str = "theorem1-lower-bound") -> Component:
    """Pick one quotient.

    ``q`` is a :class:`QuotientQuery` or a sequence of queries differing only in
    their universes.  Lower bounds are only taken within one interface.
    """
    if choice not in QUOTIENT_CHOICES:
        raise ValueError(f"unknown choice {choice!r}; expected one of {QUOTIENT_CHOICES}")
    queries = [q] if isinstance(q, QuotientQuery) else list(q)
    if not queries:
        raise ValueError("no query given")
    if choice == "cost-ranked":
        order = rank_interfaces([x.universe.interface for x in queries], queries[0].divisor)
        by_iface = {}
        for x in queries:
            by_iface.setdefault(x.universe.interface, x)
        for iface in order:
            try:
                return divide(by_iface[iface], "theorem1-lower-bound")
            except NotDivisible:
                continue
        raise NotDivisible("no candidate interface admits a quotient")
    if len({x.universe.interface for x in queries}) > 1:
        if choice == "theorem1-lower-bound":
            for x in queries:
                if not enumerate_quotients(x).divisible:
                    raise NotDivisible(f"no quotient at interface {iface_str(x.universe.interface)}")
            raise NoLowerBound(
                "quotients at different interfaces have no common lower bound among quotients: "
                + ", ".join(iface_str(x.universe.interface) for x in queries)
            )
        results = []
        for x in queries:
            results.extend(enumerate_quotients(x).quotients)
        if not results:
            raise NotDivisible("no quotient in any universe")
        return min(results, key=lambda c: (_iface_key(c.interface), _behavior_key(c)))
    (query,) = queries[:1]
    size = len(_quotient_masks(query)[0])
    if size > query.max_subset_base:
        if choice != "theorem1-lower-bound":
            raise SubsetBoundExceeded(query.max_subset_base, size)
        bound = essential_quotient(query)
        if not is_quotient(query, bound):
            raise PremiseViolation("intersection of all quotients is not itself a quotient")
        return bound
    result = enumerate_quotients(query)
    if not result.divisible:
        raise NotDivisible(f"no quotient at interface {iface_str(query.universe.interface)}")
    if choice == "pick-first-canonical":
        return result.quotients[0]
    if result.lower_bound is None:
        return _fold_lower_bound(query, result.quotients)
    return result.lower_bound


def least_quotients(quotients: Sequence[Component]) -> list:
    """Brute force: quotients contained in every other quotient."""
    return [c for c in quotients if all(contained(c, d) for d in quotients)]


def enumerate_coordinators(q: ConformanceQuery, *, enumerate_all=None) -> ConformanceResult:
    """Coordinators ``C`` with ``C x B`` refining ``A``, drawn from the universe.

    With ``live`` set, a candidate stream must also compose with at least one
    plant stream, so streams that only block the plant are dropped.
    """
    contrib = _contributions(q.spec, q.plant, q.signature, q.universe, q.side, q.max_universe)
    sound = [s for s, c in contrib.items() if c is not None and (c or not q.live)]
    notes = []
    if not (q.universe.interface | q.plant.interface) <= q.spec.interface:
        notes.append("candidate and plant interfaces exceed the spec interface")
        return ConformanceResult(q, [], [], None, notes)
    greatest = _as_component(q.universe, sound, name="greatest") if sound else None
    if enumerate_all is None:
        enumerate_all = len(sound) <= q.max_subset_base
    coordinators = None
    if enumerate_all:
        if len(sound) > q.max_subset_base:
            raise SubsetBoundExceeded(q.max_subset_base, len(sound))
        coordinators = [
            _as_component(q.universe, chosen)
            for r in range(1, len(sound) + 1)
            for chosen in combinations(sound, r)
        ]
    else:
        notes.append(f"{len(sound)} sound candidates: coordinator family represented by its greatest element")
    return ConformanceResult(q, sound, coordinators, greatest, notes)


def is_coordinator(q: ConformanceQuery, candidate: Component) -> bool:
    if not candidate.behavior:
        return False
    return refines(_recompute(q, candidate), q.spec)


def principal_coordinator(q, choice: str = "greatest") -> Component:
    if choice not in COORDINATOR_CHOICES:
        raise ValueError(f"unknown choice {choice!r}; expected one of {COORDINATOR_CHOICES}")
    queries = [q] if isinstance(q, ConformanceQuery) else list(q)
    if choice == "cost-ranked":
        order = rank_interfaces([x.universe.interface for x in queries], queries[0].plant)
        by_iface = {x.universe.interface: x for x in reversed(queries)}
        for iface in order:
            res = enumerate_coordinators(by_iface[iface], enumerate_all=False)
            if res.conformant:
                return res.greatest
        raise NoCoordinator("no candidate interface admits a coordinator")
    if len(queries) != 1:
        raise ValueError(f"choice {choice!r} takes a single query")
    (query,) = queries
    res = enumerate_coordinators(query, enumerate_all=choice != "greatest" and None)
    if not res.conformant:
        raise NoCoordinator(f"no coordinator at interface {iface_str(query.universe.interface)}")
    if choice == "greatest":
        return res.greatest
    if res.coordinators is None:
        raise SubsetBoundExceeded(query.max_subset_base, len(res.sound_maximal))
    if choice == "pick-first-canonical":
        return min(res.coordinators, key=_behavior_key)
    return union_bound(query, res.coordinators)


def union_bound(q: ConformanceQuery, coordinators: Sequence[Component]) -> Component:
    """Union of same-interface coordinators, re-verified to be a coordinator above each."""
    if not coordinators:
        raise NoCoordinator("empty coordinator family")
    if len({c.interface for c in coordinators}) != 1:
        raise NoLowerBound("coordinator union requires a shared interface")
    u = component_union(coordinators)
    if not is_coordinator(q, u):
        raise PremiseViolation("union of coordinators is not a coordinator")
    for c in coordinators:
        if not contained(c, u):
            raise PremiseViolation("union of coordinators is not above every member")
    return u


def rank_interfaces(candidates: Iterable, b: Component) -> list:
    """Order interfaces by shared-event count with ``b``, then size, then canonical text."""
    uniq = {frozenset(c) for c in candidates}
    return sorted(uniq, key=lambda e: (len(e & b.interface), len(e), _iface_key(e)))


def rank_report(queries: Sequence[ConformanceQuery], against: Optional[Component] = None, results=None) -> list:
    """Rank the queries' interfaces against ``against`` (the plant by default) and
    record whether each admits a coordinator.

    ``results`` may map interfaces to already computed :class:`ConformanceResult`.
    """
    results = results or {}
    against = queries[0].plant if against is None else against
    order = rank_interfaces([x.universe.interface for x in queries], against)
    by_iface = {x.universe.interface: x for x in reversed(queries)}
    report = []
    for rank, iface in enumerate(order):
        res = results.get(iface) or enumerate_coordinators(by_iface[iface], enumerate_all=False)
        report.append(
            {
                "rank": rank,
                "interface": iface,
                "shared": len(iface & against.interface),
                "feasible": res.conformant,
                "greatest": res.greatest,
            }
        )
    return report
