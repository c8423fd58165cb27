"""The three robot case studies as deterministic, reportable experiments."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..algebra import product, product_all
from ..core import Component, Tes, as_fraction, contained, fmt_rational, refines
from ..decomposition import (
    CandidateUniverse,
    ConformanceQuery,
    QuotientQuery,
    divide,
    enumerate_coordinators,
    is_coordinator,
    iface_str,
    principal_coordinator,
    rank_report,
)
from ..signatures import SYNC, make_rf
from ..specio.serialize import observable_text, tes_rows
from .field import FieldSpec, SortProperty, SurrogateField, c_sorted, gen_grid, joint_schedules
from .robots import BehaviorBoundExceeded, RobotSpec, direction, gen_robot, gen_swap, move_schedule
from .tables import FREE_CELLS, SORT_START, TABLE2_START, TABLE4_PLANS, TABLE5_PLANS, table1, table2_eta, table2_rows, table4_columns

CASES = ("grid-division", "update", "sort", "table2")


@dataclass
class CaseReport:
    name: str
    params: dict
    checks: dict = field(default_factory=dict)
    facts: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict, repr=False)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "case": self.name,
            "params": {k: str(v) for k, v in self.params.items()},
            "checks": dict(self.checks),
            "facts": {k: v for k, v in self.facts.items()},
            "tables": list(self.tables),
            "notes": list(self.notes),
            "ok": self.ok,
        }

    def to_text(self) -> str:
        out = [f"scenario {self.name}"]
        out.append("params: " + ", ".join(f"{k}={v}" for k, v in self.params.items()))
        for k, v in self.facts.items():
            out.append(f"{k}: {v}")
        for k, v in self.checks.items():
            out.append(f"check {k}: {'pass' if v else 'FAIL'}")
        for t in self.tables:
            out.append("")
            out.append(t)
        for n in self.notes:
            out.append(f"note: {n}")
        out.append(f"result: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(out) + "\n"


def render_columns(title: str, columns: dict) -> str:
    """Side-by-side table of dense streams sharing their stamps; silent cells print as ``-``."""
    names = list(columns)
    stamps = sorted({t for s in columns.values() for t in s.stamps})
    cells = [["t/T"] + names]
    for t in stamps:
        row = [fmt_rational(t)]
        for n in names:
            o = columns[n].at(t)
            row.append(observable_text(o) if o else "-")
        cells.append(row)
    widths = [max(len(r[c]) for r in cells) for c in range(len(names) + 1)]
    lines = [title]
    for n, r in enumerate(cells):
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def run_case_grid_division(horizon=2, period=1, objects=1, seed=0) -> CaseReport:
    """Recover a grid component by dividing the product of a free component and a sampled field by the field."""
    t0 = time.perf_counter()
    horizon, period = as_fraction(horizon), as_fraction(period)
    ids = tuple(range(1, objects + 1))
    surrogate = SurrogateField(objects=ids, initial={i: i - 1 for i in ids}, cells=tuple(range(objects + 1)), period=period)
    F = surrogate.component(horizon)
    e_g = surrogate.grid_interface()
    universe = CandidateUniverse(e_g, surrogate.samples(horizon), 2, horizon, dense=True)
    C = Component(e_g, list(universe), horizon, name="C", check=False)
    dividend = product(C, F, SYNC)
    G = divide(QuotientQuery(dividend, F, universe, SYNC, "right"), "theorem1-lower-bound")
    rep = CaseReport("grid-division", {"horizon": horizon, "period": period, "objects": objects, "seed": seed})
    half = any(e.is_position and (e.args[0].x.denominator != 1 or e.args[0].y.denominator != 1) for s in G.behavior for e in s.events())
    rep.facts.update(
        {
            "universe": universe.cardinality(),
            "field streams": len(F.behavior),
            "dividend streams": len(dividend.behavior),
            "grid streams": len(G.behavior),
            "grid interface": iface_str(e_g),
        }
    )
    rep.checks.update(
        {
            "divisible": bool(G.behavior) or not ids,
            "quotient reproduces dividend": product(F, G, SYNC) == dividend,
            "grid contained in field": contained(G, F),
            "grid strictly below free component": G.behavior < C.behavior,
            "grid differs from field": G != F,
            "no half-integer positions in grid": not half,
        }
    )
    if G.behavior:
        first = G.sorted_behavior()[0]
        match = next(f for f in F.sorted_behavior() if contained(Component(e_g, [first], horizon, check=False), Component(F.interface, [f], horizon, check=False)))
        rep.tables.append(render_columns("field sample and its grid quotient", {"F": match, "G": first}))
    rep.notes.append("the field is a half-integer sampled surrogate, not a continuous trajectory set")
    rep.artifacts.update({"F": F, "G": G, "C": C, "dividend": dividend, "universe": universe})
    rep.elapsed = time.perf_counter() - t0
    return rep


def _robots(plans, horizon, period, mode, *, eager=False, partial=False):
    out = {}
    for i in (1, 2, 3):
        spec = RobotSpec(
            i,
            horizon,
            period,
            alternation=mode,
            plans=plans[i],
            start=SORT_START[i],
            eager_reads=eager,
            partial=partial,
            coord_bounds=(0, 3),
        )
        out[i] = gen_robot(spec)
    return out


MAX_JOINT_RUNS = 1_000_000


def _plant(robots, horizon, period, blocking="lost", max_joint=MAX_JOINT_RUNS):
    need = 1
    for i in (1, 2, 3):
        need *= len(robots[i].behavior)
    if need > max_joint:
        raise BehaviorBoundExceeded(max_joint, need, "joint robot runs")
    spec = FieldSpec((1, 2, 3), SORT_START, FREE_CELLS, period=period, blocking=blocking)
    stamps = RobotSpec(1, horizon, period).stamps()
    grid = gen_grid(spec, horizon, joint_schedules([robots[i] for i in (1, 2, 3)], (1, 2, 3), stamps))
    joint = product_all([robots[2], robots[3], robots[1]], SYNC)
    return grid, product(joint, grid, make_rf(period))


def run_case_update(horizon=10, period=1, seed=0) -> CaseReport:
    """Shrink robot 1 by dividing the coordinated system by itself at robot 1's interface."""
    t0 = time.perf_counter()
    horizon, period = as_fraction(horizon), as_fraction(period)
    robots = _robots(TABLE4_PLANS, horizon, period, "move-read-alternating", eager=True)
    grid, system = _plant(robots, horizon, period)
    r1 = robots[1]
    universe = CandidateUniverse(r1.interface, (), 1, horizon, explicit_pool=r1.behavior)
    r1_new = divide(QuotientQuery(system, system, universe, SYNC, "right"), "theorem1-lower-bound")
    r1_new.name = "R'(1)"
    swapped = dict(robots)
    swapped[1] = r1_new
    _, system_new = _plant(swapped, horizon, period)
    cols = table4_columns(int(horizon / period)) if period == 1 else {}
    first_moves = {move_schedule(s, 1)[0][1] for s in r1_new.behavior if move_schedule(s, 1)}
    rep = CaseReport("update", {"horizon": horizon, "period": period, "seed": seed})
    rep.facts.update(
        {
            "R(1) streams": len(r1.behavior),
            "R(2) streams": len(robots[2].behavior),
            "R(3) streams": len(robots[3].behavior),
            "grid streams": len(grid.behavior),
            "system streams": len(system.behavior),
            "R'(1) streams": len(r1_new.behavior),
        }
    )
    rep.checks.update(
        {
            "system nonempty": bool(system.behavior),
            "R'(1) refines R(1)": refines(r1_new, r1),
            "R'(1) strictly smaller": r1_new.behavior < r1.behavior,
            "eta excluded": "W" not in first_moves and (not cols or cols["eta"] not in r1_new.behavior),
            "sigma retained": bool(cols) and cols["sigma"] in r1_new.behavior,
            "system preserved under substitution": system_new == system,
        }
    )
    if cols:
        rep.tables.append(render_columns("update columns (one timing each)", cols))
    rep.notes.append("timings: every read follows its move one period later")
    rep.artifacts.update({"robots": robots, "grid": grid, "system": system, "R1'": r1_new, "columns": cols})
    rep.elapsed = time.perf_counter() - t0
    return rep


def _complete(r: Component, robot_id: int, n_moves: int) -> list:
    return sorted(
        (s for s in r.behavior if len(move_schedule(s, robot_id)) == n_moves and any(e.name == "read" for o in s.observables for e in o)),
        key=lambda s: s.sort_key,
    )


def _stamp_of(sigma: Tes, event):
    for t, o in zip(sigma.stamps, sigma.observables):
        if event in o:
            return t
    return None


def run_case_sort(horizon=6, period=1, seed=0) -> CaseReport:
    """Search for coordinators that make the three robots end sorted."""
    t0 = time.perf_counter()
    horizon, period = as_fraction(horizon), as_fraction(period)
    robots = _robots(TABLE5_PLANS, horizon, period, "moves-then-read", partial=True)
    grid, plant = _plant(robots, horizon, period)
    prop = SortProperty((1, 2, 3))
    spec = c_sorted(prop, plant)
    rep = CaseReport("sort", {"horizon": horizon, "period": period, "seed": seed})

    principal = None
    if plant.behavior:
        whole = CandidateUniverse(plant.interface, (), 1, horizon, explicit_pool=plant.behavior)
        principal = principal_coordinator(ConformanceQuery(spec, plant, whole), "greatest")

    complete = _complete(robots[1], 1, len(TABLE5_PLANS[1][0]))
    e_r1 = robots[1].interface
    q1 = ConformanceQuery(spec, plant, CandidateUniverse(e_r1, (), 1, horizon, explicit_pool=complete))
    res1 = enumerate_coordinators(q1, enumerate_all=False)

    n1, n2 = direction("N", 1), direction("N", 2)
    pool = set()
    for s in complete:
        pool.add(s)
        for k in range(len(s.stamps)):
            obs = list(s.observables)
            obs[k] = obs[k] | {n2}
            pool.add(Tes((s.stamps, tuple(obs)), horizon, _trusted=True))
    q2 = ConformanceQuery(spec, plant, CandidateUniverse(e_r1 | {n2}, (), 1, horizon, explicit_pool=pool))
    res2 = enumerate_coordinators(q2, enumerate_all=False)
    c12_beh = [s for s in pool if _stamp_of(s, n2) is not None and _stamp_of(s, n2) < _stamp_of(s, n1)]
    c12 = Component(e_r1 | {n2}, c12_beh, horizon if c12_beh else None, name="C12", check=False)
    c12_plant = product(c12, plant, SYNC)
    others = robots[2].interface | robots[3].interface | grid.interface
    ranking = rank_report(
        [q1, q2], Component(others, (), None, check=False), {q1.universe.interface: res1, q2.universe.interface: res2}
    )

    rep.facts.update(
        {
            "plant streams": len(plant.behavior),
            "sorted plant streams": len(spec.behavior),
            "R(1) complete timings": len(complete),
            "coordinator candidates over E_R(1)": len(complete),
            "coordinator candidates over E_R(1)+N(2)": len(pool),
            "greatest over E_R(1)+N(2)": 0 if res2.greatest is None else len(res2.greatest.behavior),
            "C12 streams": len(c12_beh),
            "C12 x plant streams": len(c12_plant.behavior),
            "ranking": "; ".join(
                f"{r['rank']}: shared={r['shared']} size={len(r['interface'])} feasible={r['feasible']}" for r in ranking
            ),
        }
    )
    goal_seen = any(prop.goal() <= o for s in c12_plant.behavior for o in s.observables)
    rep.checks.update(
        {
            "plant nonempty": bool(plant.behavior),
            "C_sorted is principal coordinator": principal is not None and principal == spec,
            "no coordinator over E_R(1)": not res1.conformant,
            "coordinator over E_R(1)+N(2)": res2.conformant,
            "C12 within greatest": bool(c12_beh) and res2.greatest is not None and set(c12_beh) <= res2.greatest.behavior,
            "C12 is a coordinator": is_coordinator(q2, c12),
            "C12 x plant refines C_sorted": bool(c12_plant.behavior) and refines(c12_plant, spec),
            "sorted observation reached": goal_seen,
            "cheaper interface ranked first": ranking[0]["interface"] == e_r1 and not ranking[0]["feasible"],
        }
    )
    if c12_plant.behavior:
        run = min(c12_plant.behavior, key=lambda s: s.sort_key)
        rep.tables.append("a coordinated run\n" + "\n".join(tes_rows(run)))
    rep.notes.append("coordinator candidates for robot 1 are its complete-plan timings")
    rep.artifacts.update({"robots": robots, "grid": grid, "plant": plant, "C_sorted": spec, "C12": c12, "greatest": res2.greatest})
    rep.elapsed = time.perf_counter() - t0
    return rep


def run_case_table2(horizon=5, period=1, seed=0) -> CaseReport:
    """Free robots constrained by ``swap(2,3)``; the composite of the three robot prefixes must be a behavior."""
    t0 = time.perf_counter()
    horizon, period = as_fraction(horizon), as_fraction(period)
    robots = {i: gen_robot(RobotSpec(i, horizon, period, start=TABLE2_START[i])) for i in (1, 2, 3)}
    swap = gen_swap(2, 3, horizon, period)
    composite = product_all([swap, robots[2], robots[3], robots[1]], SYNC)
    n = int(horizon / period)
    rows = table2_rows()
    cols = table1(n) if period == 1 and n >= len(rows) else {}
    eta = table2_eta(n) if cols else None
    rep = CaseReport("table2", {"horizon": horizon, "period": period, "seed": seed})
    rep.facts.update({"swap streams": len(swap.behavior), "composite streams": len(composite.behavior)})
    if cols:
        for i, k in ((1, "sigma"), (2, "tau"), (3, "delta")):
            own = eta.restrict(robots[i].interface)
            agree = [fmt_rational(t) for t in own.stamps if t <= 4 and own.at(t) == cols[k].at(t)]
            rep.facts[f"{k} agrees with eta at"] = ", ".join(agree)
    rep.checks.update(
        {
            "composite nonempty": bool(composite.behavior),
            "eta in composite": eta is not None and eta in composite.behavior,
            "row 4 rendered": eta is not None and tes_rows(eta)[3] == "4: {S(1,p), W(2,p), E(3,p)}",
            "every composite stream projects into swap": all(s.restrict(swap.interface) in swap.behavior for s in composite.behavior),
        }
    )
    if eta is not None:
        rep.tables.append(render_columns("robot prefixes beside the swap(2,3) composite", {**cols, "eta": eta}))
        rep.notes.append("the delta prefix steps east at 3 and 4, but swap(2,3) allows one east step, so eta carries E(3) at 4 only")
    rep.notes.append("free robots emit moves only; start positions play no role in the product")
    rep.artifacts.update({"robots": robots, "swap": swap, "composite": composite, "eta": eta})
    rep.elapsed = time.perf_counter() - t0
    return rep


def run_case(name: str, **params) -> CaseReport:
    runner = {
        "grid-division": run_case_grid_division,
        "update": run_case_update,
        "sort": run_case_sort,
        "table2": run_case_table2,
    }.get(name)
    if runner is None:
        raise ValueError(f"unknown scenario {name!r}; expected one of {CASES}")
    return runner(**params)
