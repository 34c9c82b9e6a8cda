"""Combine rule outputs into one interpretation per utterance and run dialogs.

For each TU of an utterance, the partial results proposed by the rules
form a compatibility graph (an edge when two partials merge cleanly).
Every maximal clique is folded into a candidate; critics then penalize
candidates that land in the past or jump far ahead, and the candidate
with the highest summed certainty factor wins.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from .calendar import CivilDate
from .corpus import Dialog, Utterance
from .model import (
    TemporalUnit, TimePoint, business_hours, merge, obvious_inference, start_span,
)
from .normalizer import normalize
from .parser import parse_temporal, tokenize
from .rules import (
    RULE_IDS, FocusEntry, PartialResult, ResolutionContext, RuleEngine, load_cf_table,
)

MAX_PARTIALS = 64
MAX_CLIQUES = 10_000


class CapExceeded(RuntimeError):
    """An internal size cap was hit."""


@dataclass(frozen=True)
class ResolverConfig:
    max_sequences: int = 125
    cf_all_one: bool = False
    cf_all_zero: bool = False
    no_merge: bool = False
    no_critics: bool = False
    no_distance: bool = False
    combo: bool = False
    past_penalty: float = 10.0
    jump_days: int = 90
    jump_penalty: float = 10.0
    week: str = "mon-fri"
    cf_table_path: Optional[str] = None
    earliest_am: int = 7

    def __post_init__(self):
        if self.cf_all_one and self.cf_all_zero:
            raise ValueError("cf_all_one and cf_all_zero are exclusive")
        if self.combo and self.cf_all_zero:
            raise ValueError("combo implies cf_all_one")
        if self.max_sequences < 1:
            raise ValueError("max_sequences must be positive")

    def effective(self) -> "ResolverConfig":
        """The config with ``combo`` expanded into its four component switches."""
        if not self.combo:
            return self
        return replace(self, cf_all_one=True, no_merge=True, no_critics=True, no_distance=True)

    def engine(self) -> RuleEngine:
        cfg = self.effective()
        constant = 1.0 if cfg.cf_all_one else (0.0 if cfg.cf_all_zero else None)
        return RuleEngine(load_cf_table(cfg.cf_table_path), week=cfg.week,
                          use_distance=not cfg.no_distance, cf_constant=constant)


# the six degraded variants plus the default, in report order
ABLATIONS: Dict[str, dict] = {
    "default": {},
    "cf_all_one": {"cf_all_one": True},
    "cf_all_zero": {"cf_all_zero": True},
    "no_merge": {"no_merge": True},
    "no_critics": {"no_critics": True},
    "no_distance": {"no_distance": True},
    "combo": {"combo": True},
}


@dataclass
class AugmentedResult:
    tus: Tuple[TemporalUnit, ...]
    cf: float
    contributing_rules: frozenset = frozenset()
    critic_notes: List[str] = field(default_factory=list)
    tu_index: int = 0
    order: int = 0
    best_member_cf: float = float("-inf")

    @property
    def tu(self) -> TemporalUnit:
        return self.tus[0]


# step 3: maximal mergings


def _compatible(a: PartialResult, b: PartialResult) -> bool:
    if a.arity != b.arity or a.tu_index != b.tu_index:
        return False
    return all(merge(x, y) is not None for x, y in zip(a.tus, b.tus))


def fold(partials: Sequence[PartialResult]) -> Tuple[TemporalUnit, ...]:
    """Merge the TUs of a clique element-wise."""
    if not partials:
        return ()
    arity = partials[0].arity
    out = []
    for k in range(arity):
        tu = reduce(lambda x, y: None if x is None else merge(x, y),
                    (p.tus[k] for p in partials[1:]), partials[0].tus[k])
        if tu is None:
            raise ValueError("clique members do not merge")
        out.append(tu)
    return tuple(out)


def maximal_cliques(n: int, adjacent) -> List[Tuple[int, ...]]:
    """All maximal cliques of an ``n``-vertex graph (Bron-Kerbosch with pivoting).

    ``adjacent(i, j)`` tells whether vertices i and j share an edge. Cliques
    come back as sorted index tuples in lexicographic order.
    """
    nbrs = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(i, j):
                nbrs[i].add(j)
                nbrs[j].add(i)
    found: List[Tuple[int, ...]] = []

    def expand(r, p, x):
        if not p and not x:
            found.append(tuple(sorted(r)))
            if len(found) > MAX_CLIQUES:
                raise CapExceeded(f"more than {MAX_CLIQUES} maximal mergings")
            return
        pivot = max(p | x, key=lambda v: len(nbrs[v] & p))
        for v in sorted(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    if n:
        expand(set(), set(range(n)), set())
    return sorted(found)


def maximal_mergings(partials: Sequence[PartialResult]) -> List[Tuple[Tuple[int, ...], Tuple[TemporalUnit, ...]]]:
    """Maximal sets of pairwise-compatible partials, each with its folded TUs.

    No partials gives a single empty merging.
    """
    if len(partials) > MAX_PARTIALS:
        raise CapExceeded(f"{len(partials)} partial results (limit {MAX_PARTIALS})")
    if not partials:
        return [((), ())]
    cliques = maximal_cliques(len(partials), lambda i, j: _compatible(partials[i], partials[j]))
    return [(c, fold([partials[i] for i in c])) for c in cliques]


# step 4: critics and selection


def apply_critics(aug: AugmentedResult, ctx: ResolutionContext, cfg: ResolverConfig) -> AugmentedResult:
    """Penalize interpretations that start before the dialog date or far after it."""
    today = ctx.dialog_date
    horizon = today.add_days(cfg.jump_days)
    cf, notes = aug.cf, list(aug.critic_notes)
    for tu in aug.tus:
        span = start_span(tu)
        if span is None:
            continue
        if span.last < today:
            cf -= cfg.past_penalty
            notes.append(f"past: starts {span.first.isoformat()}")
        elif span.first > horizon:
            cf -= cfg.jump_penalty
            notes.append(f"jump: starts {span.first.isoformat()}")
    return replace(aug, cf=cf, critic_notes=notes)


def _copy_start_dates(tu: TemporalUnit) -> TemporalUnit:
    s = tu.start
    dates = TemporalUnit(end=TimePoint(month=s.month, date=s.date, day_of_week=s.day_of_week,
                                       year=s.year))
    out = merge(tu, dates)
    return out if out is not None else tu


def _finish(tu: TemporalUnit, ctx: ResolutionContext, cfg: ResolverConfig) -> TemporalUnit:
    return business_hours(obvious_inference(tu, ctx.dialog_date), cfg.earliest_am)


def _candidates(tu: TemporalUnit, k: int, parts: List[PartialResult], ctx, cfg):
    if cfg.no_merge:
        groups = [((i,), parts[i].tus) for i in range(len(parts))]
    else:
        groups = maximal_mergings(parts) if parts else []
    out = []
    for order, (members, tus) in enumerate(groups):
        merged = []
        for t in tus:
            m = merge(t, tu)
            if m is None:
                break
            merged.append(m)
        else:
            rules = frozenset(parts[i].rule_id for i in members)
            if "D4" in rules:
                merged = [_copy_start_dates(m) for m in merged]
            cf = sum(parts[i].cf for i in members)
            best = max(parts[i].cf for i in members)
            out.append(AugmentedResult(tuple(merged), cf, rules, [], k, order, best))
    return out


def _key(a: AugmentedResult):
    return (a.cf, a.best_member_cf, -a.order)


def resolve_utterance(tus: Sequence[TemporalUnit], ctx: ResolutionContext,
                      cfg: ResolverConfig = ResolverConfig(), engine: Optional[RuleEngine] = None):
    """Resolve the normalized TUs of one utterance.

    Returns one AugmentedResult per input TU (in order) and a rule trace
    mapping each rule id to whether it fired, whether the chosen
    interpretation used it, and its best CF.
    """
    cfg = cfg.effective()
    engine = engine or cfg.engine()
    partials = engine.apply_all_rules(list(tus), ctx)
    trace = {rid: {"fired": False, "used": False, "cf": None} for rid in RULE_IDS}
    for p in partials:
        t = trace[p.rule_id]
        t["fired"] = True
        t["cf"] = p.cf if t["cf"] is None else max(t["cf"], p.cf)
    results: List[AugmentedResult] = []
    for k, tu in enumerate(tus):
        parts = [p for p in partials if p.tu_index == k]
        cands = _candidates(tu, k, parts, ctx, cfg)
        if not cands:
            cands = [AugmentedResult((tu,), 0.0, frozenset(), [], k, 0)]
        if not cfg.no_critics:
            cands = [apply_critics(c, ctx, cfg) for c in cands]
        cands = [replace(c, tus=tuple(_finish(t, ctx, cfg) for t in c.tus)) for c in cands]
        best = max(cands, key=_key)
        results.append(best)
        for rid in best.contributing_rules:
            trace[rid]["used"] = True
    return results, trace


# dialog orchestration


@dataclass
class UtteranceRecord:
    index: int
    speaker: str
    text: str
    skipped: bool
    tus: Tuple[TemporalUnit, ...]
    cfs: Tuple[float, ...]
    contributing_rules: Tuple[Tuple[str, ...], ...]
    critic_notes: Tuple[str, ...]
    focus_len: int
    alternative: int = 0
    trace: Optional[dict] = None

    @property
    def cf(self) -> float:
        return sum(self.cfs)


@dataclass
class DialogResult:
    records: List[UtteranceRecord]
    focus_list: Tuple[FocusEntry, ...]
    focus_history: List[Tuple[FocusEntry, ...]]

    def traces(self) -> List[dict]:
        return [r.trace for r in self.records if r.trace is not None]


@dataclass
class _Prepared:
    utterance: Utterance
    index: int
    past: bool
    words: Tuple[str, ...]
    alternatives: List[Tuple[TemporalUnit, ...]]


def prepare(dialog: Dialog) -> List[_Prepared]:
    """Parse and normalize every utterance (all alternative readings)."""
    out = []
    for i, u in enumerate(dialog.utterances):
        toks = tokenize(u.text)
        parse = parse_temporal(toks)
        raw_alts = u.alternatives if u.alternatives is not None else parse.alternatives
        alts = [tuple(normalize(list(a), dialog.dialog_date)) for a in raw_alts] or [()]
        tense = u.tense or parse.tense
        out.append(_Prepared(u, i, tense == "past", tuple(parse.words), alts))
    return out


def turns(prepared: Sequence[_Prepared]) -> List[List[_Prepared]]:
    """Group consecutive utterances by the same speaker."""
    out: List[List[_Prepared]] = []
    for p in prepared:
        if out and out[-1][0].utterance.speaker == p.utterance.speaker:
            out[-1].append(p)
        else:
            out.append([p])
    return out


def alternative_sequences(sizes: Sequence[int], limit: int) -> List[Tuple[int, ...]]:
    """Index tuples over per-utterance alternatives, best-ranked first.

    Ordered by the sum of indices (0 is each parse's preferred reading),
    then lexicographically; at most ``limit`` are returned.
    """
    if not sizes:
        return [()]
    start = tuple(0 for _ in sizes)
    heap = [(0, start)]
    seen = {start}
    out = []
    while heap and len(out) < limit:
        s, seq = heapq.heappop(heap)
        out.append(seq)
        for k in range(len(seq)):
            if seq[k] + 1 < sizes[k]:
                nxt = seq[:k] + (seq[k] + 1,) + seq[k + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(heap, (s + 1, nxt))
    return out


def _run_turn(turn, seq, focus, dialog, cfg, engine):
    focus = list(focus)
    history = []
    records = []
    total = 0.0
    for p, alt in zip(turn, seq):
        u = p.utterance
        if p.past:
            records.append(UtteranceRecord(p.index, u.speaker, u.text, True, (), (), (), (),
                                           len(focus), alt, None))
            history.append(tuple(focus))
            continue
        tus = p.alternatives[alt]
        ctx = ResolutionContext(dialog.dialog_date, tuple(focus), p.words, tuple(tus), None, cfg.week)
        results, trace = resolve_utterance(tus, ctx, cfg, engine)
        out_tus = tuple(t for r in results for t in r.tus)
        cfs = tuple(r.cf for r in results)
        total += sum(cfs)
        if any(not t.is_empty() for t in out_tus):
            focus.append(FocusEntry(p.index, u.speaker, out_tus))
        notes = tuple(n for r in results for n in r.critic_notes)
        rules = tuple(tuple(sorted(r.contributing_rules)) for r in results)
        records.append(UtteranceRecord(p.index, u.speaker, u.text, False, out_tus, cfs, rules,
                                       notes, len(focus), alt, trace))
        history.append(tuple(focus))
    return total, records, focus, history


def resolve_dialog(dialog: Dialog, cfg: ResolverConfig = ResolverConfig()) -> DialogResult:
    """Resolve every utterance, batching alternative readings per speaker turn.

    Within a turn each combination of readings (up to ``max_sequences``)
    is resolved against its own copy of the focus list; the combination
    with the highest summed CF is adopted (the first one on ties).
    """
    cfg = cfg.effective()
    engine = cfg.engine()
    focus: List[FocusEntry] = []
    records: List[UtteranceRecord] = []
    history: List[Tuple[FocusEntry, ...]] = []
    for turn in turns(prepare(dialog)):
        sizes = [1 if p.past else len(p.alternatives) for p in turn]
        best = None
        for seq in alternative_sequences(sizes, cfg.max_sequences):
            got = _run_turn(turn, seq, focus, dialog, cfg, engine)
            if best is None or got[0] > best[0]:
                best = got
        _, recs, focus, hist = best
        records.extend(recs)
        history.extend(hist)
    return DialogResult(records, tuple(focus), history)
