"""Canonical text and JSON renderings of events, streams, components and results."""

from __future__ import annotations

import json

from ..core import Component, Event, Tes, fmt_rational, sorted_events

SCHEMA = 1


def event_text(e: Event) -> str:
    return str(e)


def observable_text(obs) -> str:
    return "{" + ", ".join(str(e) for e in sorted_events(obs)) + "}"


def tes_rows(sigma: Tes) -> list:
    """One ``t: {e1, e2}`` line per observation."""
    return [f"{fmt_rational(t)}: {observable_text(o)}" for t, o in zip(sigma.stamps, sigma.observables)]


def tes_dsl(sigma: Tes) -> str:
    """The stream as a DSL ``tes { ... }`` clause."""
    parts = []
    for t, o in zip(sigma.stamps, sigma.observables):
        evs = " ".join(str(e) for e in sorted_events(o))
        parts.append(f"({fmt_rational(t)}:{' ' + evs if evs else ''})")
    return "tes { " + ", ".join(parts) + " }" if parts else "tes { }"


def component_dsl(name: str, c: Component, horizon=None) -> str:
    h = c.horizon if c.horizon is not None else horizon
    if h is None:
        h = 1
    lines = [f"component {name} {{"]
    lines.append("  interface {" + ", ".join(str(e) for e in sorted_events(c.interface)) + "}")
    lines.append(f"  horizon {fmt_rational(h)}")
    for s in c.sorted_behavior():
        lines.append("  " + tes_dsl(s))
    lines.append("}")
    return "\n".join(lines)


def component_text(c: Component, name=None, indent="") -> str:
    """Human-readable canonical rendering; behaviors listed one stream per block."""
    name = name or c.name or "_"
    out = [f"{indent}component {name}"]
    out.append(f"{indent}  interface: " + observable_text(c.interface))
    out.append(f"{indent}  horizon: " + ("none" if c.horizon is None else fmt_rational(c.horizon)))
    if not c.behavior:
        out.append(f"{indent}  behavior: {{}}")
        return "\n".join(out)
    out.append(f"{indent}  behavior: {len(c.behavior)} stream(s)")
    for n, s in enumerate(c.sorted_behavior()):
        out.append(f"{indent}  - tes {n}" + ("" if s.stamps else " (empty)"))
        out.extend(f"{indent}      {row}" for row in tes_rows(s))
    return "\n".join(out)


def tes_json(sigma: Tes) -> dict:
    return {
        "horizon": fmt_rational(sigma.horizon),
        "observations": [
            {"t": fmt_rational(t), "events": [str(e) for e in sorted_events(o)]} for t, o in zip(sigma.stamps, sigma.observables)
        ],
    }


def component_json(c: Component, name=None) -> dict:
    return {
        "name": name or c.name,
        "interface": [str(e) for e in sorted_events(c.interface)],
        "horizon": None if c.horizon is None else fmt_rational(c.horizon),
        "behavior": [tes_json(s) for s in c.sorted_behavior()],
    }


def dumps(payload: dict) -> str:
    body = {"schema": SCHEMA}
    body.update(payload)
    return json.dumps(body, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _events_text(events) -> str:
    return "{" + ", ".join(str(e) for e in sorted_events(events)) + "}"


def _param_text(v) -> str:
    return v if isinstance(v, str) else fmt_rational(v)


def declaration_text(x) -> str:
    """Canonical DSL text for one declaration or query of a parsed document."""
    from .document import (
        ComponentDecl,
        ConformQuery,
        DivideQuery,
        LawsQuery,
        ProductQuery,
        ScenarioQuery,
        SignatureDecl,
        UniverseDecl,
        link_pairs,
    )

    if isinstance(x, ComponentDecl):
        return component_dsl(x.name, x.component, x.horizon)
    if isinstance(x, UniverseDecl):
        flags = (" dense" if x.dense else "") + ("" if x.silent else " nosilent")
        return (
            f"universe {x.name} {{\n  interface {_events_text(x.interface)}\n"
            f"  grid {fmt_rational(x.start)} .. {fmt_rational(x.stop)} step {fmt_rational(x.step)} maxobs {x.maxobs}{flags}\n}}"
        )
    if isinstance(x, SignatureDecl):
        if x.period is not None:
            return f"signature {x.name} {{ rf period {fmt_rational(x.period)} }}"
        links = ", ".join(f"{a} ~ {b}" for a, b in link_pairs(x.links))
        return f"signature {x.name} {{ shared {x.shared} links {{{links}}} merge {x.merge} }}"
    if isinstance(x, ProductQuery):
        return f"product {x.left} {x.right} under {x.signature}" + (f" as {x.as_name}" if x.as_name else "")
    if isinstance(x, (DivideQuery, ConformQuery)):
        head = f"divide {x.dividend} by {x.divisor}" if isinstance(x, DivideQuery) else f"conform {x.plant} to {x.spec}"
        return f"{head} under {x.signature} over {', '.join(x.universes)} choose {x.choice} side {x.side}"
    if isinstance(x, LawsQuery):
        return f"laws {x.signature} on {{{', '.join(x.names)}}}"
    if isinstance(x, ScenarioQuery):
        return " ".join([f"scenario {x.name}"] + [f"{k}={_param_text(v)}" for k, v in x.params])
    raise TypeError(f"cannot render {type(x).__name__}")


def document_text(doc) -> str:
    """Canonical text of a whole document; parsing it gives back an equal document."""
    return "\n\n".join(declaration_text(x) for x in doc.items) + ("\n" if doc.items else "")
