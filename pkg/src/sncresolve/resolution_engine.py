"""The three-phase rewriting engine over a global configuration state.

A state holds the frozen dual complex of the boundary configuration, a
registry of exceptional divisors with their coefficients, and a multiset
of chart descriptors.  Each event picks one globally defined center,
rewrites every chart meeting it into its children, optionally registers
one new divisor shared by all children, and records a certificate that
every parent-to-child step strictly lowered the lexicographic invariant.
The multiset of invariants therefore decreases in the Dershowitz-Manna
order at every event, which forces termination; an explicit event ceiling
guards the implementation rather than the mathematics.

Phases: A-det shrinks determinants, B1/B2/B3 shrink the divisor monomial,
C-bin splits the final degree-one factor.  The dual complex is carried
through untouched and re-checked byte-for-byte at every event.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from . import chart_calculus as cc
from . import dual_complex as dc
from . import snc_model as sm
from .chart_calculus import ChartState, MultiDegree, RuleApplication


class InvariantBreach(RuntimeError):
    """An internal invariant failed; the offending certificate is attached."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class CeilingExceeded(RuntimeError):
    """The configured event ceiling was hit before reaching a fixed point."""


class NoApplicableRule(RuntimeError):
    """step() was called on a fully resolved state."""


PHASE_OF_KIND = {"DET": "A-det", "MON1": "B1", "MON2": "B2",
                 "MON3": "B3", "BIN": "C-bin"}
PHASE_ORDER = ["A-det", "B1", "B2", "B3", "C-bin"]

MODEL_ASSUMPTIONS = (
    "descriptor-level bookkeeping: one descriptor stands for every point "
    "of a (stratum, det-size) class, so blow-up centers over distinct "
    "index pairs commute by construction",
    "det-rule exceptional coefficient: policy 'oracle' assigns m-2, the "
    "value measured by strict-transform division; policy 'paper' assigns "
    "the alternate value m^2-2, which the measurement contradicts for "
    "every m >= 2 (at m=2: 2 versus measured 0)",
)


@dataclass(frozen=True)
class RunConfig:
    """Ordering, exceptional-exponent policy, and the event ceiling."""

    ordering: tuple | None = None
    exponent_policy: str = "oracle"
    event_ceiling: int = 10_000

    def __post_init__(self):
        if self.exponent_policy not in ("oracle", "paper"):
            raise ValueError(f"unknown exponent policy {self.exponent_policy!r}")
        if self.event_ceiling < 1:
            raise ValueError("event ceiling must be >= 1")

    def key(self, ident: str):
        """Total order on ids: explicit ordering first, then lexicographic."""
        if self.ordering and ident in self.ordering:
            return (0, self.ordering.index(ident), ident)
        return (1, 0, ident)

    def pair_key(self, pair):
        return tuple(self.key(i) for i in pair)

    def to_json_obj(self) -> dict:
        return {"ordering": list(self.ordering) if self.ordering else None,
                "exponent_policy": self.exponent_policy,
                "event_ceiling": self.event_ceiling}

    @staticmethod
    def from_json_obj(obj: dict) -> "RunConfig":
        ordering = obj.get("ordering")
        return RunConfig(tuple(ordering) if ordering else None,
                         obj.get("exponent_policy", "oracle"),
                         obj.get("event_ceiling", 10_000))


@dataclass(frozen=True)
class DivisorRecord:
    id: str
    coeff: int
    birth: int | None  # event index, None for divisors present at seed time

    def __post_init__(self):
        if self.coeff < 1:
            raise ValueError(f"divisor {self.id!r} registered with coefficient "
                             f"{self.coeff} < 1")


@dataclass(frozen=True)
class BlowupEvent:
    index: int
    phase: str
    rule: RuleApplication
    parents: tuple   # ((ChartState, count), ...)
    children: tuple  # ((ChartState, count), ...)
    new_divisor: tuple | None
    exceptional: str | None
    lex: tuple       # ((parent mdeg, child mdeg), ...), all strictly decreasing

    def __post_init__(self):
        for parent_deg, child_deg in self.lex:
            if not tuple(child_deg) < tuple(parent_deg):
                raise InvariantBreach(
                    f"lex certificate violated at event {self.index}: "
                    f"{tuple(parent_deg)} -> {tuple(child_deg)}",
                    certificate=(parent_deg, child_deg))


@dataclass(frozen=True)
class ResolutionState:
    dual: dc.DualComplex
    registry: tuple  # DivisorRecord, in birth order
    charts: tuple    # ((ChartState, count), ...), canonically sorted
    trace: tuple = ()

    def chart_multiset(self) -> dict:
        return dict(self.charts)

    def registry_map(self) -> dict:
        return {r.id: r for r in self.registry}

    def unresolved(self) -> list:
        return [(chart, n) for chart, n in self.charts if not cc.is_resolved(chart)]

    def is_finished(self) -> bool:
        return not self.unresolved()

    def dual_bytes(self) -> str:
        return dc.canonical_json(self.dual)

    def census(self) -> dict:
        """Final chart census: mdeg -> (count, classification)."""
        out = {}
        for chart, n in self.charts:
            deg = cc.mdeg(chart)
            if deg.dx == 1:
                kind = "snc-certified"
            elif (deg.dy, deg.dz) == (0, 0):
                kind = "smooth"
            else:
                kind = "unresolved"
            count, _ = out.get(deg, (0, kind))
            out[deg] = (count + n, kind)
        return out


def _sorted_chart_items(multiset: dict) -> tuple:
    return tuple(sorted(((c, n) for c, n in multiset.items() if n),
                        key=lambda item: item[0].sort_key()))


def validate_state(state: ResolutionState) -> list:
    """Internal consistency: registry-backed exponents, known vertex labels."""
    out = []
    vertex_labels = set()
    for cell in state.dual.cells_of_dim(0):
        if cell.label:
            vertex_labels.update(cell.label)
    registry = state.registry_map()
    for chart, count in state.charts:
        if count < 1:
            out.append(f"chart {chart!r} has count {count}")
        missing = chart.x_indices - vertex_labels
        if missing:
            out.append(f"chart {chart!r} uses x-indices {sorted(missing)} "
                       f"absent from the dual complex vertices")
        for div, a in chart.exponents:
            rec = registry.get(div)
            if rec is None:
                out.append(f"chart {chart!r} references unregistered divisor {div!r}")
            elif rec.coeff != a:
                out.append(f"chart {chart!r} carries {div!r}^{a} but the "
                           f"registry coefficient is {rec.coeff}")
    return out


def seed_from_snc(snc: sm.SncVariety, coranks: dict) -> ResolutionState:
    """One chart per deep stratum, with the assigned determinant size.

    Every stratum lying in at least two components needs an entry in
    ``coranks`` (m >= 0); singleton strata are smooth points of the
    configuration and get no chart.
    """
    dual = sm.dual_complex_of(snc)
    by_id = {s.id: s for s in snc.strata}
    for sid, m in coranks.items():
        if sid not in by_id:
            raise ValueError(f"corank assigned to unknown stratum {sid!r}")
        if len(by_id[sid].indices) < 2:
            raise ValueError(f"corank assigned to singleton stratum {sid!r}")
        if not isinstance(m, int) or m < 0:
            raise ValueError(f"corank of stratum {sid!r} must be an integer >= 0, "
                             f"got {m!r}")
    charts = {}
    for s in snc.strata:
        if len(s.indices) < 2:
            continue
        if s.id not in coranks:
            raise ValueError(f"missing corank for stratum {s.id!r}")
        chart = ChartState.of(s.indices, coranks[s.id], {})
        charts[chart] = charts.get(chart, 0) + 1
    state = ResolutionState(dual, (), _sorted_chart_items(charts))
    problems = validate_state(state)
    if problems:
        raise ValueError("; ".join(problems))
    return state


def with_initial_divisors(state: ResolutionState, divisors, placements) -> ResolutionState:
    """Attach pre-existing divisors to a freshly seeded state.

    ``divisors`` is a list of (id, coefficient); ``placements`` maps chart
    positions (index into state.charts) to lists of divisor ids carried by
    that chart.  Used by the random instance generator.
    """
    registry = list(state.registry)
    coeff = {}
    for div, a in divisors:
        registry.append(DivisorRecord(str(div), int(a), None))
        coeff[str(div)] = int(a)
    charts = {}
    for pos, (chart, n) in enumerate(state.charts):
        extra = {d: coeff[d] for d in placements.get(pos, ())}
        new_chart = ChartState.of(chart.x_indices, chart.det_size,
                                  {**chart.exponent_map(), **extra})
        charts[new_chart] = charts.get(new_chart, 0) + n
    new_state = ResolutionState(state.dual, tuple(registry),
                                _sorted_chart_items(charts), state.trace)
    problems = validate_state(new_state)
    if problems:
        raise ValueError("; ".join(problems))
    return new_state


# --------------------------------------------------------------------------
# Center selection
# --------------------------------------------------------------------------

def _pairs_of(chart: ChartState, config: RunConfig):
    ordered = sorted(chart.x_indices, key=config.key)
    return [(a, b) for i, a in enumerate(ordered) for b in ordered[i + 1:]]


def select_center(state: ResolutionState,
                  config: RunConfig = RunConfig()) -> RuleApplication | None:
    """The lowest-phase applicable rule, tie-broken by the id ordering.

    None iff every chart is resolved.  Phase A targets the largest
    determinant size present at an unresolved point; the monomial phases
    pick the smallest eligible divisor (largest exponent first in B1);
    phase C picks the smallest component index carrying a degree-one
    factor.
    """
    unresolved = state.unresolved()
    if not unresolved:
        return None

    # Phase A: largest determinant first.
    m_star = max((c.det_size for c, _ in unresolved), default=0)
    if m_star >= 2:
        pairs = set()
        for chart, _ in unresolved:
            if chart.det_size == m_star:
                pairs.update(_pairs_of(chart, config))
        pair = min(pairs, key=config.pair_key)
        return RuleApplication("DET", pair, det_size=m_star)

    # Phase B1: some divisor exponent >= 2; largest exponent first.
    eligible = {}  # divisor -> [exponent, candidate pairs]
    for chart, _ in unresolved:
        if len(chart.x_indices) < 2:
            continue
        for div, a in chart.exponents:
            if a >= 2:
                entry = eligible.setdefault(div, [a, set()])
                entry[1].update(_pairs_of(chart, config))
    if eligible:
        div = min(eligible, key=lambda j: (-eligible[j][0], config.key(j)))
        pair = min(eligible[div][1], key=config.pair_key)
        return RuleApplication("MON1", pair, divisors=(div,))

    # Phase B2: two divisors of exponent 1 in one chart.
    best = None
    for chart, _ in unresolved:
        if len(chart.x_indices) < 2:
            continue
        ones = sorted((d for d, a in chart.exponents if a == 1), key=config.key)
        for i, j1 in enumerate(ones):
            for j2 in ones[i + 1:]:
                for pair in _pairs_of(chart, config):
                    cand = ((config.key(j1), config.key(j2)), config.pair_key(pair),
                            (j1, j2), pair)
                    if best is None or cand[:2] < best[:2]:
                        best = cand
    if best:
        return RuleApplication("MON2", best[3], divisors=best[2])

    # Phase B3: a single y-factor and a single exponent-1 divisor.
    best = None
    for chart, _ in unresolved:
        deg = cc.mdeg(chart)
        if deg.dx >= 2 and deg.dy == 1 and deg.dz == 1:
            (j,) = [d for d, _ in chart.exponents]
            for pair in _pairs_of(chart, config):
                cand = (config.key(j), config.pair_key(pair), j, pair)
                if best is None or cand[:2] < best[:2]:
                    best = cand
    if best:
        return RuleApplication("MON3", best[3], divisors=(best[2],))

    # Phase C: one degree-one factor left (y, or a single exponent-1 divisor).
    components = set()
    for chart, _ in unresolved:
        deg = cc.mdeg(chart)
        if deg.dx >= 2 and deg.dy + deg.dz == 1:
            components.update(chart.x_indices)
    if components:
        return RuleApplication("BIN", (min(components, key=config.key),))

    raise InvariantBreach(
        "unresolved charts remain but no phase applies: "
        + ", ".join(repr(c) for c, _ in unresolved))


def _matches(chart: ChartState, app: RuleApplication) -> bool:
    exps = chart.exponent_map()
    deg = cc.mdeg(chart)
    if app.kind == "DET":
        return (set(app.pair) <= chart.x_indices
                and chart.det_size == app.det_size)
    if app.kind == "MON1":
        return set(app.pair) <= chart.x_indices and app.divisors[0] in exps
    if app.kind == "MON2":
        return (set(app.pair) <= chart.x_indices
                and all(j in exps for j in app.divisors))
    if app.kind == "MON3":
        return (set(app.pair) <= chart.x_indices and deg.dy == 1
                and list(exps) == [app.divisors[0]] and deg.dz == 1)
    if app.kind == "BIN":
        return (app.pair[0] in chart.x_indices and deg.dx >= 2
                and deg.dy + deg.dz == 1 and not cc.is_resolved(chart))
    raise ValueError(f"unknown rule kind {app.kind!r}")


def step(state: ResolutionState,
         config: RunConfig = RunConfig()) -> tuple:
    """Apply the selected rule to every chart meeting its center.

    Returns (new state, event).  At most one divisor is registered per
    event and is shared by all children; certificates of strict
    lexicographic decrease are recorded and enforced.
    """
    app = select_center(state, config)
    if app is None:
        raise NoApplicableRule("every chart is resolved")

    matched = [(c, n) for c, n in state.charts if _matches(c, app)]
    if not matched:
        raise InvariantBreach(f"selected rule {app!r} matches no chart")

    index = len(state.trace)
    exc_name = None
    new_divisor = None
    if app.kind in ("DET", "MON1", "MON2", "MON3"):
        taken = {r.id for r in state.registry}
        serial = index + 1
        while f"w{serial}" in taken:
            serial += 1
        exc_name = f"w{serial}"
        if app.kind == "DET":
            e = cc.exceptional_coefficient("DET", det_size=app.det_size,
                                           policy=config.exponent_policy)
        elif app.kind == "MON1":
            a = dict(matched[0][0].exponents)[app.divisors[0]]
            e = cc.exceptional_coefficient("MON1", divisor_exponent=a,
                                           policy=config.exponent_policy)
        else:
            e = 0
        if e > 0:
            new_divisor = (exc_name, e)
    app = replace(app, new_divisor=new_divisor)

    survivors = {c: n for c, n in state.charts if not _matches(c, app)}
    child_items = dict(survivors)
    certificates = set()
    produced = {}
    for chart, count in matched:
        parent_deg = cc.mdeg(chart)
        for child in cc.children(chart, app, policy=config.exponent_policy):
            child_deg = cc.mdeg(child.state)
            if not tuple(child_deg) < tuple(parent_deg):
                raise InvariantBreach(
                    f"rule {app.kind} failed to decrease mdeg: "
                    f"{tuple(parent_deg)} -> {tuple(child_deg)}",
                    certificate=(parent_deg, child_deg))
            certificates.add((parent_deg, child_deg))
            total = count * child.multiplicity
            child_items[child.state] = child_items.get(child.state, 0) + total
            produced[child.state] = produced.get(child.state, 0) + total

    registry = state.registry
    if new_divisor:
        registry = registry + (DivisorRecord(new_divisor[0], new_divisor[1], index),)

    event = BlowupEvent(
        index=index,
        phase=PHASE_OF_KIND[app.kind],
        rule=app,
        parents=tuple(sorted(matched, key=lambda it: it[0].sort_key())),
        children=_sorted_chart_items(produced),
        new_divisor=new_divisor,
        exceptional=exc_name,
        lex=tuple(sorted(certificates)),
    )
    new_state = ResolutionState(state.dual, registry,
                                _sorted_chart_items(child_items),
                                state.trace + (event,))

    if new_state.dual_bytes() != state.dual_bytes():
        raise InvariantBreach("dual complex changed across an event")
    problems = validate_state(new_state)
    if problems:
        raise InvariantBreach("state invariants broken: " + "; ".join(problems))
    return new_state, event


def run(state: ResolutionState,
        config: RunConfig = RunConfig()) -> tuple:
    """Iterate to the fixed point; returns (final state, list of events).

    The final state is fully resolved and its dual complex is
    byte-identical to the seed's; the event ceiling aborts runaway loops.
    """
    seed_bytes = state.dual_bytes()
    start = len(state.trace)
    while not state.is_finished():
        if len(state.trace) - start >= config.event_ceiling:
            raise CeilingExceeded(
                f"{config.event_ceiling} events without reaching a fixed point")
        state, _ = step(state, config)
    if state.dual_bytes() != seed_bytes:
        raise InvariantBreach("final dual complex differs from the seed")
    return state, list(state.trace[start:])


# --------------------------------------------------------------------------
# Serialization and replay
# --------------------------------------------------------------------------

def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def mdeg_obj(deg) -> list:
    return [deg[0], deg[1], deg[2]]


def rule_to_obj(app: RuleApplication) -> dict:
    return {"kind": app.kind, "pair": list(app.pair),
            "divisors": list(app.divisors),
            "det_size": app.det_size,
            "new_divisor": list(app.new_divisor) if app.new_divisor else None}


def rule_from_obj(obj: dict) -> RuleApplication:
    nd = obj.get("new_divisor")
    return RuleApplication(obj["kind"], tuple(obj["pair"]),
                           tuple(obj.get("divisors", ())),
                           obj.get("det_size"),
                           (nd[0], nd[1]) if nd else None)


def _chart_items_obj(items) -> list:
    return [{"chart": cc.chart_to_obj(c), "count": n} for c, n in items]


def _chart_items_from_obj(entries) -> tuple:
    return tuple((cc.chart_from_obj(e["chart"]), e["count"]) for e in entries)


def event_to_obj(event: BlowupEvent) -> dict:
    return {
        "index": event.index,
        "phase": event.phase,
        "rule": rule_to_obj(event.rule),
        "parents": _chart_items_obj(event.parents),
        "children": _chart_items_obj(event.children),
        "new_divisor": list(event.new_divisor) if event.new_divisor else None,
        "exceptional": event.exceptional,
        "lex": [[mdeg_obj(p), mdeg_obj(ch)] for p, ch in event.lex],
    }


def event_from_obj(obj: dict) -> BlowupEvent:
    nd = obj.get("new_divisor")
    return BlowupEvent(
        obj["index"], obj["phase"], rule_from_obj(obj["rule"]),
        _chart_items_from_obj(obj["parents"]),
        _chart_items_from_obj(obj["children"]),
        (nd[0], nd[1]) if nd else None,
        obj.get("exceptional"),
        tuple((MultiDegree(*p), MultiDegree(*c)) for p, c in obj["lex"]),
    )


def state_to_obj(state: ResolutionState) -> dict:
    return {
        "dual": dc.to_json_obj(state.dual),
        "registry": [{"id": r.id, "coeff": r.coeff, "birth": r.birth}
                     for r in state.registry],
        "charts": _chart_items_obj(state.charts),
    }


def state_from_obj(obj: dict) -> ResolutionState:
    if not isinstance(obj, dict) or "dual" not in obj or "charts" not in obj:
        raise ValueError("state document needs 'dual' and 'charts'")
    registry = tuple(DivisorRecord(r["id"], r["coeff"], r.get("birth"))
                     for r in obj.get("registry", ()))
    state = ResolutionState(dc.from_json_obj(obj["dual"]), registry,
                            _sorted_chart_items(dict(_chart_items_from_obj(obj["charts"]))))
    problems = validate_state(state)
    if problems:
        raise ValueError("; ".join(problems))
    return state


def trace_to_obj(seed: ResolutionState, events, final: ResolutionState,
                 config: RunConfig) -> dict:
    return {
        "config": config.to_json_obj(),
        "assumptions": list(MODEL_ASSUMPTIONS),
        "seed": state_to_obj(seed),
        "events": [event_to_obj(e) for e in events],
        "final": state_to_obj(final),
    }


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    final: ResolutionState
    detail: str


def replay_trace(doc: dict) -> ReplayResult:
    """Re-run a trace from its recorded seed and compare bit-for-bit."""
    seed = state_from_obj(doc["seed"])
    config = RunConfig.from_json_obj(doc.get("config", {}))
    final, events = run(seed, config)
    want_final = canonical_dumps(doc["final"])
    got_final = canonical_dumps(state_to_obj(final))
    if len(events) != len(doc.get("events", ())):
        return ReplayResult(False, final,
                            f"event count {len(events)} != recorded "
                            f"{len(doc.get('events', ()))}")
    if got_final != want_final:
        return ReplayResult(False, final, "final state differs from the record")
    got_events = canonical_dumps([event_to_obj(e) for e in events])
    want_events = canonical_dumps(doc.get("events", ()))
    if got_events != want_events:
        return ReplayResult(False, final, "event log differs from the record")
    return ReplayResult(True, final, "replay reproduced the trace")
