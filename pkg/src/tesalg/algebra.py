"""Signature-parameterized product, the unit and zero components, and law checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product as cartesian
from typing import Iterable, Optional, Sequence

from .core import Component, Tes, as_fraction, horizon_compatible, refines
from .signatures import SYNC, InteractionSignature

LAWS = ("commutative", "associative", "idempotent", "monotonic")


def product(a: Component, b: Component, sig: InteractionSignature = SYNC, *, name=None) -> Component:
    """Compose every pair of streams related by ``sig``.

    Pairs are bucketed by the signature's join key when it has one; the
    composability predicate is still evaluated on every candidate pair.
    """
    horizon = horizon_compatible(a, b)
    ea, eb = a.interface, b.interface
    out = set()
    if sig.join_key is not None and a.behavior and b.behavior:
        buckets: dict = {}
        for tau in b.behavior:
            buckets.setdefault(sig.join_key(tau, eb, ea), []).append(tau)
        for sigma in a.behavior:
            for tau in buckets.get(sig.join_key(sigma, ea, eb), ()):
                if sig.exact_key or sig.composable(sigma, tau, ea, eb):
                    out.add(sig.compose(sigma, tau))
    else:
        for sigma in a.behavior:
            for tau in b.behavior:
                if sig.composable(sigma, tau, ea, eb):
                    out.add(sig.compose(sigma, tau))
    return Component(ea | eb, out, horizon if out else None, name=name, check=False)


def product_all(components: Sequence[Component], sig: InteractionSignature = SYNC) -> Component:
    """Left fold of :func:`product`."""
    if not components:
        raise ValueError("empty product")
    return reduce(lambda x, y: product(x, y, sig), components)


def silent_streams(grid: Iterable, horizon) -> list:
    grid = sorted({as_fraction(t) for t in grid})
    out = []
    for r in range(len(grid) + 1):
        for chosen in combinations(grid, r):
            out.append(Tes([(frozenset(), t) for t in chosen], horizon))
    return out


def unit_component(grid: Iterable, horizon) -> Component:
    """The unit ``(∅, all silent streams over grid)``, empty stream included."""
    return Component((), silent_streams(grid, horizon), horizon, name="1")


def zero_component() -> Component:
    return Component((), (), None, name="0")


def component_union(components: Iterable[Component]) -> Component:
    components = list(components)
    horizon = horizon_compatible(*components)
    iface = frozenset().union(*(c.interface for c in components))
    beh = frozenset().union(*(c.behavior for c in components))
    return Component(iface, beh, horizon if beh else None, check=False)


@dataclass
class ProductLawReport:
    law: str
    signature: str
    witnesses_checked: int
    counterexample: Optional[tuple] = None

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    def __str__(self):
        status = "holds" if self.holds else "FAILS"
        return f"{self.law} [{self.signature}]: {status} on {self.witnesses_checked} witnesses"


def check_law(law: str, sig: InteractionSignature, witnesses: Iterable[Component], *, limit=None) -> ProductLawReport:
    """Evaluate one product law on every tuple drawn from ``witnesses``.

    Returns at the first counterexample.  ``limit`` caps the number of tuples.
    """
    ws = list(witnesses)
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; expected one of {LAWS}")
    horizon_compatible(*ws)
    checked = 0
    memo: dict = {}

    def prod(x, y):
        key = (id(x), id(y))
        if key not in memo:
            memo[key] = product(x, y, sig)
        return memo[key]

    if law == "commutative":
        tuples = combinations(ws, 2)
        test = lambda a, b: prod(a, b) == prod(b, a)  # noqa: E731
    elif law == "idempotent":
        tuples = ((a,) for a in ws)
        test = lambda a: prod(a, a) == a  # noqa: E731
    elif law == "associative":
        tuples = cartesian(ws, repeat=3)

        def test(a, b, c):
            return product(prod(a, b), c, sig) == product(a, prod(b, c), sig)

    else:
        tuples = ((b, a, c) for b, a in cartesian(ws, repeat=2) if refines(b, a) for c in ws)

        def test(b, a, c):
            return refines(prod(b, c), prod(a, c))

    for tup in tuples:
        if limit is not None and checked >= limit:
            break
        checked += 1
        if not test(*tup):
            return ProductLawReport(law, sig.name, checked, tuple(tup))
    return ProductLawReport(law, sig.name, checked)
