"""Execute the queries of a parsed document and render their results."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from ..algebra import LAWS, check_law, product
from ..core import Component, grid_points
from ..decomposition import (
    DEFAULT_MAX_SUBSET_BASE,
    DEFAULT_MAX_UNIVERSE,
    CandidateUniverse,
    ConformanceQuery,
    DecompositionError,
    NoCoordinator,
    NoLowerBound,
    NotDivisible,
    QuotientQuery,
    ResourceBoundError,
    SubsetBoundExceeded,
    divide,
    enumerate_coordinators,
    enumerate_quotients,
    iface_str,
    principal_coordinator,
    rank_report,
)
from ..scenario.robots import BehaviorBoundExceeded
from ..signatures import BUILTIN, link_signature, make_rf
from .document import (
    ComponentDecl,
    ConformQuery,
    DivideQuery,
    LawsQuery,
    ProductQuery,
    ScenarioQuery,
    SignatureDecl,
    SpecDocument,
    UniverseDecl,
)
from .serialize import component_json, component_text, declaration_text, observable_text


class ResourceRefusal(Exception):
    """A query was refused because it would exceed a resource bound."""

    def __init__(self, query: str, bound: str, limit, needed):
        self.query, self.bound, self.limit, self.needed = query, bound, limit, needed
        super().__init__(f"refused: {bound} bound {limit} exceeded (needs {needed}) in query: {query}")


_BOUND_NAMES = {"UniverseTooLarge": "max-universe", "SubsetBoundExceeded": "max-subset-base"}


@dataclass
class QueryOutcome:
    query: str
    kind: str
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        return "\n".join([self.query] + ["  " + ln if ln else "" for ln in self.lines]) + "\n"


def build_signature(decl: SignatureDecl):
    if decl.period is not None:
        return replace(make_rf(decl.period), name=decl.name)
    return link_signature(decl.name, shared_sync=decl.shared == "sync", links=decl.links, merge=decl.merge)


def _int_if_whole(v):
    return int(v) if isinstance(v, Fraction) and v.denominator == 1 else v


class Executor:
    """Runs queries in document order; ``product ... as NAME`` results become components."""

    def __init__(self, doc: SpecDocument, *, max_universe=DEFAULT_MAX_UNIVERSE, max_subset_base=DEFAULT_MAX_SUBSET_BASE, scenario_overrides=None):
        self.doc = doc
        self.max_universe = max_universe
        self.max_subset_base = max_subset_base
        self.scenario_overrides = dict(scenario_overrides or {})
        self.components: dict = {}
        self.horizons: dict = {}
        self.universes: dict = {}
        self.signatures: dict = dict(BUILTIN)
        self.reports: list = []

    def run(self) -> list:
        out = []
        for x in self.doc.items:
            if isinstance(x, ComponentDecl):
                self.components[x.name] = x.component
                self.horizons[x.name] = x.horizon
            elif isinstance(x, UniverseDecl):
                self.universes[x.name] = x
            elif isinstance(x, SignatureDecl):
                self.signatures[x.name] = build_signature(x)
            else:
                out.append(self.run_query(x))
        return out

    def run_query(self, x) -> QueryOutcome:
        text = declaration_text(x)
        try:
            handler = {
                ProductQuery: self._product,
                DivideQuery: self._divide,
                ConformQuery: self._conform,
                LawsQuery: self._laws,
                ScenarioQuery: self._scenario,
            }[type(x)]
            return handler(x, QueryOutcome(text, x.kind))
        except ResourceBoundError as e:
            raise ResourceRefusal(text, _BOUND_NAMES.get(type(e).__name__, "resource"), e.limit, e.needed) from None
        except BehaviorBoundExceeded as e:
            raise ResourceRefusal(text, e.bound, e.limit, e.needed) from None

    def _universe(self, name, horizon) -> CandidateUniverse:
        u = self.universes[name]
        return CandidateUniverse(u.interface, grid_points(u.start, u.stop, u.step), u.maxobs, horizon, dense=u.dense, silent=u.silent)

    def _product(self, x: ProductQuery, res: QueryOutcome) -> QueryOutcome:
        c = product(self.components[x.left], self.components[x.right], self.signatures[x.signature], name=x.as_name)
        if x.as_name:
            self.components[x.as_name] = c
            self.horizons[x.as_name] = self.horizons[x.left]
        res.lines += component_text(c, x.as_name or "product").splitlines()
        res.data = {"result": component_json(c, x.as_name or "product")}
        return res

    def _divide(self, x: DivideQuery, res: QueryOutcome) -> QueryOutcome:
        a, b = self.components[x.dividend], self.components[x.divisor]
        h = self.horizons[x.dividend]
        sig = self.signatures[x.signature]
        queries = [
            QuotientQuery(a, b, self._universe(u, h), sig, x.side, self.max_universe, self.max_subset_base) for u in x.universes
        ]
        per = []
        for name, q in zip(x.universes, queries):
            entry = {"universe": name, "interface": iface_str(q.universe.interface), "candidates": q.universe.cardinality()}
            try:
                r = enumerate_quotients(q)
                entry.update(sound=len(r.sound_maximal), free=len(r.free), notes=r.notes)
                entry["quotients"] = r.quotients
            except SubsetBoundExceeded as e:
                entry.update(sound=e.needed, free=None, notes=[f"quotient family not enumerated: {e}"], quotients=None)
            per.append(entry)
        chosen, reason = None, None
        try:
            chosen = divide(queries if len(queries) > 1 else queries[0], x.choice)
        except (NotDivisible, NoLowerBound) as e:
            reason = f"{type(e).__name__}: {e}"
        for entry in per:
            res.lines.append(
                f"universe {entry['universe']}: interface {entry['interface']}, {entry['candidates']} candidates, "
                f"{entry['sound']} sound" + ("" if entry["free"] is None else f", {entry['free']} free")
            )
            res.lines += [f"  note: {n}" for n in entry["notes"]]
            qs = entry["quotients"]
            if qs is not None:
                res.lines.append(f"  quotients: {len(qs)}")
                for n, c in enumerate(qs, 1):
                    res.lines += component_text(c, f"{entry['universe']}.Q{n}", indent="    ").splitlines()
        if chosen is not None:
            res.lines.append(f"chosen ({x.choice}):")
            res.lines += component_text(chosen, "quotient", indent="  ").splitlines()
        else:
            res.lines.append(f"chosen ({x.choice}): none ({reason})")
        res.data = {
            "universes": [
                {
                    "universe": e["universe"],
                    "interface": e["interface"],
                    "candidates": e["candidates"],
                    "sound": e["sound"],
                    "free": e["free"],
                    "notes": e["notes"],
                    "quotients": None if e["quotients"] is None else [component_json(c) for c in e["quotients"]],
                }
                for e in per
            ],
            "choice": x.choice,
            "chosen": None if chosen is None else component_json(chosen, "quotient"),
            "reason": reason,
        }
        return res

    def _conform(self, x: ConformQuery, res: QueryOutcome) -> QueryOutcome:
        plant, spec = self.components[x.plant], self.components[x.spec]
        h = self.horizons[x.plant]
        sig = self.signatures[x.signature]
        queries = [
            ConformanceQuery(spec, plant, self._universe(u, h), sig, x.side, False, self.max_universe, self.max_subset_base)
            for u in x.universes
        ]
        results = {}
        per = []
        for name, q in zip(x.universes, queries):
            r = enumerate_coordinators(q, enumerate_all=False)
            results.setdefault(q.universe.interface, r)
            per.append((name, q, r))
            res.lines.append(
                f"universe {name}: interface {iface_str(q.universe.interface)}, {q.universe.cardinality()} candidates, "
                f"{len(r.sound_maximal)} sound, " + ("conformant" if r.conformant else "no coordinator")
            )
            if r.greatest is not None:
                res.lines += component_text(r.greatest, f"{name}.greatest", indent="  ").splitlines()
        principal, reason = None, None
        try:
            if x.choice == "cost-ranked":
                principal = principal_coordinator(queries, x.choice)
            else:
                principal = principal_coordinator(queries[0], x.choice)
        except NoCoordinator as e:
            reason = f"NoCoordinator: {e}"
        except DecompositionError as e:
            if isinstance(e, ResourceBoundError):
                raise
            reason = f"{type(e).__name__}: {e}"
        ranking = rank_report(queries, results=results) if len(queries) > 1 else []
        for row in ranking:
            res.lines.append(
                f"rank {row['rank']}: {iface_str(row['interface'])} shares {row['shared']} events, "
                + ("feasible" if row["feasible"] else "infeasible")
            )
        scope = "" if x.choice == "cost-ranked" or len(queries) == 1 else f" at {x.universes[0]}"
        if principal is not None:
            res.lines.append(f"principal ({x.choice}){scope}:")
            res.lines += component_text(principal, "coordinator", indent="  ").splitlines()
        else:
            res.lines.append(f"principal ({x.choice}){scope}: none ({reason})")
        res.data = {
            "universes": [
                {
                    "universe": name,
                    "interface": iface_str(q.universe.interface),
                    "candidates": q.universe.cardinality(),
                    "sound": len(r.sound_maximal),
                    "greatest": None if r.greatest is None else component_json(r.greatest, "greatest"),
                }
                for name, q, r in per
            ],
            "ranking": [
                {"rank": r["rank"], "interface": iface_str(r["interface"]), "shared": r["shared"], "feasible": r["feasible"]} for r in ranking
            ],
            "choice": x.choice,
            "principal": None if principal is None else component_json(principal, "coordinator"),
            "reason": reason,
        }
        return res

    def _laws(self, x: LawsQuery, res: QueryOutcome) -> QueryOutcome:
        sig = self.signatures[x.signature]
        witnesses = [self.components[n] for n in x.names]
        rows = []
        for law in LAWS:
            rep = check_law(law, sig, witnesses)
            row = {"law": law, "holds": rep.holds, "checked": rep.witnesses_checked, "counterexample": None}
            res.lines.append(str(rep))
            if not rep.holds:
                names = [_name_of(c, witnesses, x.names) for c in rep.counterexample]
                row["counterexample"] = names
                res.lines.append("  counterexample: " + ", ".join(names))
            rows.append(row)
        res.data = {"signature": x.signature, "laws": rows}
        return res

    def _scenario(self, x: ScenarioQuery, res: QueryOutcome) -> QueryOutcome:
        from ..scenario.cases import run_case

        params = {k: _int_if_whole(v) for k, v in x.params}
        params.update(self.scenario_overrides)
        rep = run_case(x.name, **params)
        self.reports.append(rep)
        res.lines += rep.to_text().rstrip("\n").splitlines()
        res.data = rep.to_dict()
        return res


def _name_of(c: Component, witnesses, names) -> str:
    for w, n in zip(witnesses, names):
        if w is c:
            return n
    return observable_text(c.interface)


def outcomes_json(outcomes) -> dict:
    return {"results": [{"query": o.query, "kind": o.kind, **o.data} for o in outcomes]}

