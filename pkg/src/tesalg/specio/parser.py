"""pyparsing grammar for ``.tes`` documents and semantic validation.

Syntax errors and semantic problems are both reported as located
:class:`Diagnostic` values; :func:`parse` raises :class:`SpecError` when any
error is found.
"""

from __future__ import annotations

from fractions import Fraction

import pyparsing as pp

from ..core import Component, Coord, Event, Tes, TesError, as_fraction, fmt_rational
from ..decomposition import COORDINATOR_CHOICES, QUOTIENT_CHOICES
from .document import (
    QUOTIENT_SIDES,
    ComponentDecl,
    ConformQuery,
    Diagnostic,
    DivideQuery,
    LawsQuery,
    Location,
    ProductQuery,
    ScenarioQuery,
    SignatureDecl,
    SpecDocument,
    SpecError,
    UniverseDecl,
    link_pairs,
)

BUILTIN_SIGNATURES = ("sync", "rf")
SCENARIOS = ("grid-division", "update", "sort", "table2")

pp.ParserElement.enable_packrat()

S = pp.Suppress
K = pp.Keyword


def _rational(tok: str) -> Fraction:
    # decimals go through the string constructor, which is exact
    return Fraction(tok)


RATIONAL = pp.Regex(r"[-+]?\d+(?:/\d+|\.\d+)?").set_name("rational").set_parse_action(lambda t: _rational(t[0]))
INT = pp.Regex(r"\d+").set_name("integer").set_parse_action(lambda t: int(t[0]))
KEYWORDS = frozenset(
    "component interface horizon tes universe grid step maxobs dense nosilent signature shared links merge rf "
    "period product under as divide by over choose side conform to laws on scenario".split()
)
WORD = pp.Regex(r"[A-Za-z_][A-Za-z0-9_']*")
NAME = WORD.copy().add_condition(lambda t: t[0] not in KEYWORDS, message="reserved word used as a name").set_name("name")

COORD = (S("(") + RATIONAL + S(";") + RATIONAL + S(")")).set_parse_action(lambda t: Coord(t[0], t[1]))
ATOM = COORD | RATIONAL | WORD
POSITION = (COORD + S("_") + INT).set_parse_action(lambda t: Event.position(t[1], t[0].x, t[0].y))
EVENT_NAME = WORD | pp.Regex(r"\d+")
NAMED = (EVENT_NAME + pp.Optional(S("(") + pp.Group(pp.DelimitedList(ATOM)) + S(")"))).set_parse_action(
    lambda t: Event(t[0], tuple(t[1]) if len(t) > 1 else ())
)
EVENT = (POSITION | NAMED).set_name("event")
EVENT_SET = pp.Group(S("{") + pp.Optional(pp.DelimitedList(EVENT)) + S("}"))

OBS = pp.Group(S("(") + RATIONAL + S(":") + pp.Group(pp.ZeroOrMore(EVENT)) + S(")"))


def _loc(s, loc, toks):
    toks["loc"] = Location(pp.lineno(loc, s), pp.col(loc, s))


TES = pp.Group((K("tes").suppress() - S("{") + pp.Optional(pp.DelimitedList(OBS)) + S("}")).add_parse_action(_loc))


def _tag(expr, tag):
    return pp.Group((pp.Empty().set_parse_action(lambda s, l, t: [tag]) + expr).add_parse_action(_loc))


COMPONENT = _tag(
    K("component").suppress()
    - NAME("name")
    + S("{")
    + K("interface").suppress()
    + EVENT_SET("interface")
    + K("horizon").suppress()
    + RATIONAL("horizon")
    + pp.Group(pp.ZeroOrMore(TES))("tes")
    + S("}"),
    "component",
)

UNIVERSE = _tag(
    K("universe").suppress()
    - NAME("name")
    + S("{")
    + K("interface").suppress()
    + EVENT_SET("interface")
    + K("grid").suppress()
    + RATIONAL("start")
    + S("..")
    + RATIONAL("stop")
    + K("step").suppress()
    + RATIONAL("step")
    + K("maxobs").suppress()
    + INT("maxobs")
    + pp.Optional(K("dense"))("dense")
    + pp.Optional(K("nosilent"))("nosilent")
    + S("}"),
    "universe",
)

LINK = pp.Group(EVENT + S("~") + EVENT)
LINK_FORM = (
    pp.Optional(K("shared").suppress() + (K("sync") | K("none"))("shared"))
    + pp.Optional(K("links").suppress() + S("{") + pp.Group(pp.Optional(pp.DelimitedList(LINK)))("links") + S("}"))
    + pp.Optional(K("merge").suppress() + (K("union") | K("left"))("merge"))
)
SIGNATURE = _tag(
    K("signature").suppress()
    - NAME("name")
    + S("{")
    + ((K("rf").suppress() - K("period").suppress() + RATIONAL("period")) | LINK_FORM)
    + S("}"),
    "signature",
)

SIGNAME = (K("rf") | K("sync") | NAME).set_name("signature name")
CHOICE = pp.Regex(r"[a-z0-9]+(?:-[a-z0-9]+)*").set_name("choice")
UNIVERSES = pp.Group(pp.DelimitedList(NAME))
SIDE = pp.Optional(K("side").suppress() + (K("right") | K("left") | K("commutative"))("side"))

PRODUCT = _tag(
    K("product").suppress() - NAME("left") + NAME("right") + K("under").suppress() + SIGNAME("sig")
    + pp.Optional(K("as").suppress() + NAME("as_name")),
    "product",
)
DIVIDE = _tag(
    K("divide").suppress() - NAME("a") + K("by").suppress() + NAME("b") + K("under").suppress() + SIGNAME("sig")
    + K("over").suppress() + UNIVERSES("universes") + K("choose").suppress() + CHOICE("choice") + SIDE,
    "divide",
)
CONFORM = _tag(
    K("conform").suppress() - NAME("a") + K("to").suppress() + NAME("b") + K("under").suppress() + SIGNAME("sig")
    + K("over").suppress() + UNIVERSES("universes") + K("choose").suppress() + CHOICE("choice") + SIDE,
    "conform",
)
LAWS = _tag(
    K("laws").suppress() - SIGNAME("sig") + K("on").suppress() + S("{") + pp.Group(pp.DelimitedList(NAME))("names") + S("}"),
    "laws",
)
PARAM = pp.Group(WORD + S("=") + (RATIONAL | WORD))
SCENARIO = _tag(
    K("scenario").suppress() - pp.Regex(r"[a-z0-9]+(?:-[a-z0-9]+)*")("name") + pp.Group(pp.ZeroOrMore(PARAM))("params"),
    "scenario",
)

DOCUMENT = pp.ZeroOrMore(COMPONENT | UNIVERSE | SIGNATURE | PRODUCT | DIVIDE | CONFORM | LAWS | SCENARIO)
DOCUMENT.ignore(pp.python_style_comment)


def _syntax_diag(err: pp.ParseBaseException) -> Diagnostic:
    msg = err.msg or "unexpected input"
    found = err.line[err.col - 1 : err.col + 11].strip() if err.line else ""
    hint = f"near {found!r}" if found else "unexpected end of input"
    return Diagnostic("error", Location(err.lineno, err.col), f"syntax error: {msg}", hint)


def parse(source: str, *, validate_names=True) -> SpecDocument:
    """Parse and validate ``source``; raise :class:`SpecError` on any error."""
    try:
        raw = DOCUMENT.parse_string(source, parse_all=True)
    except pp.ParseBaseException as err:
        raise SpecError([_syntax_diag(err)]) from None
    diags: list = []
    items = [x for x in (_build(r, diags) for r in raw) if x is not None]
    doc = SpecDocument(items)
    if validate_names:
        diags.extend(validate(doc))
    if any(d.severity == "error" for d in diags):
        raise SpecError(diags)
    return doc


def _build(r, diags):
    tag, loc = r[0], r["loc"]
    try:
        if tag == "component":
            horizon = r["horizon"]
            iface = frozenset(r["interface"])
            streams = []
            for t in r["tes"]:
                obs = [(frozenset(o[1]), o[0]) for o in t if isinstance(o, pp.ParseResults)]
                try:
                    streams.append(Tes(obs, horizon))
                except TesError as e:
                    diags.append(Diagnostic("error", t["loc"], str(e)))
            try:
                comp = Component(iface, streams, horizon if streams else None, name=r["name"])
            except TesError as e:
                diags.append(Diagnostic("error", loc, f"component {r['name']}: {e}"))
                return None
            return ComponentDecl(r["name"], comp, horizon, loc)
        if tag == "universe":
            if r["step"] <= 0:
                diags.append(Diagnostic("error", loc, "grid step must be positive"))
            if r["maxobs"] < 1:
                diags.append(Diagnostic("error", loc, "maxobs must be at least 1"))
            return UniverseDecl(
                r["name"], frozenset(r["interface"]), r["start"], r["stop"], r["step"], r["maxobs"],
                bool(r.get("dense")), not bool(r.get("nosilent")), loc,
            )
        if tag == "signature":
            links = link_pairs((lk[0], lk[1]) for lk in r.get("links", []))
            period = r.get("period")
            return SignatureDecl(r["name"], r.get("shared", "sync"), links, r.get("merge", "union"), period, loc)
        if tag == "product":
            return ProductQuery(r["left"], r["right"], r["sig"], r.get("as_name"), loc)
        if tag in ("divide", "conform"):
            choices = QUOTIENT_CHOICES if tag == "divide" else COORDINATOR_CHOICES
            if r["choice"] not in choices:
                diags.append(Diagnostic("error", loc, f"unknown choice {r['choice']!r}", "expected one of " + ", ".join(choices)))
            cls = DivideQuery if tag == "divide" else ConformQuery
            return cls(r["a"], r["b"], r["sig"], tuple(r["universes"]), r["choice"], r.get("side", "right"), loc)
        if tag == "laws":
            return LawsQuery(r["sig"], tuple(r["names"]), loc)
        if tag == "scenario":
            if r["name"] not in SCENARIOS:
                diags.append(Diagnostic("error", loc, f"unknown scenario {r['name']!r}", "expected one of " + ", ".join(SCENARIOS)))
            return ScenarioQuery(r["name"], tuple((p[0], p[1]) for p in r["params"]), loc)
    except TesError as e:
        diags.append(Diagnostic("error", loc, str(e)))
    return None


def validate(doc: SpecDocument) -> list:
    """Name uniqueness, declared-before-use, and horizon agreement between operands."""
    diags = []
    seen: dict = {"component": {}, "universe": {}, "signature": {}}

    def need(kind, name, loc, what):
        if kind == "signature" and name in BUILTIN_SIGNATURES:
            return True
        if name not in seen[kind]:
            diags.append(Diagnostic("error", loc, f"unknown {kind} {name!r} in {what}", f"declare {kind} {name} before use"))
            return False
        return True

    def horizons(names, loc, what):
        found = {n: seen["component"][n] for n in names if seen["component"].get(n) is not None}
        if len(set(found.values())) > 1:
            detail = ", ".join(f"{n}@{fmt_rational(h)}" for n, h in found.items())
            diags.append(Diagnostic("error", loc, f"horizon mismatch in {what}: {detail}"))
        return next(iter(found.values()), None)

    def grid_fits(universes, h, loc, what):
        for u in universes:
            stop = seen["universe"].get(u)
            if h is not None and stop is not None and stop > h:
                diags.append(
                    Diagnostic("error", loc, f"universe {u!r} grid ends at {fmt_rational(stop)}, beyond horizon {fmt_rational(h)} in {what}")
                )

    for x in doc.items:
        if isinstance(x, (ComponentDecl, UniverseDecl, SignatureDecl)):
            table = seen[x.kind]
            if x.name in table or (x.kind == "signature" and x.name in BUILTIN_SIGNATURES):
                diags.append(Diagnostic("error", x.loc, f"duplicate {x.kind} name {x.name!r}"))
                continue
            if isinstance(x, ComponentDecl):
                table[x.name] = x.horizon
            elif isinstance(x, UniverseDecl):
                table[x.name] = x.stop
            else:
                table[x.name] = None
        elif isinstance(x, ProductQuery):
            ok = need("component", x.left, x.loc, "product") & need("component", x.right, x.loc, "product")
            need("signature", x.signature, x.loc, "product")
            h = horizons([x.left, x.right], x.loc, "product") if ok else None
            if x.as_name:
                if x.as_name in seen["component"]:
                    diags.append(Diagnostic("error", x.loc, f"duplicate component name {x.as_name!r}"))
                else:
                    seen["component"][x.as_name] = h
        elif isinstance(x, (DivideQuery, ConformQuery)):
            a, b = (x.dividend, x.divisor) if isinstance(x, DivideQuery) else (x.plant, x.spec)
            ok = need("component", a, x.loc, x.kind) & need("component", b, x.loc, x.kind)
            need("signature", x.signature, x.loc, x.kind)
            for u in x.universes:
                ok &= need("universe", u, x.loc, x.kind)
            if ok:
                grid_fits(x.universes, horizons([a, b], x.loc, x.kind), x.loc, x.kind)
            if x.side not in QUOTIENT_SIDES:
                diags.append(Diagnostic("error", x.loc, f"unknown side {x.side!r}"))
        elif isinstance(x, LawsQuery):
            need("signature", x.signature, x.loc, "laws")
            ok = True
            for n in x.names:
                ok &= need("component", n, x.loc, "laws")
            if ok:
                horizons(list(x.names), x.loc, "laws")
    return diags


def parse_event(text: str) -> Event:
    try:
        return EVENT.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as err:
        raise SpecError([_syntax_diag(err)]) from None


def as_param(value):
    return as_fraction(value) if isinstance(value, (int, Fraction)) else value
