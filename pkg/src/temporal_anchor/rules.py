"""Deictic (D1-D6) and anaphoric (A1-A8) resolution rules.

Each rule looks at one normalized TemporalUnit plus the dialog state and
either fails (returns None) or proposes a resolved TU with a certainty
factor. Anaphoric rules scan the focus list from the most recent TU
backwards and take the first antecedent that satisfies their guard.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from importlib import resources
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import calendar as cal
from .calendar import CivilDate, DateRange
from .model import (
    DATE, DATE_FIELDS, TIME_OF_DAY, TemporalUnit, TimePoint, date_copy, from_range, merge,
    merge_upper, more_equ_specific, point_from_date, restrict, specificity,
)

RULE_IDS = ("D1", "D2i", "D2ii", "D3", "D4", "D5", "D6",
            "A1", "A2", "A3i", "A3ii", "A4", "A5", "A6i", "A6ii", "A7", "A8")
DEICTIC_RULES = RULE_IDS[:7]
ANAPHORIC_RULES = RULE_IDS[7:]
FORWARD_ADJECTIVES = frozenset({"next", "following", "coming"})
DEICTIC_WORDS = frozenset({"today", "tomorrow", "yesterday", "now", "tonight"})
CF_TABLE_ENV = "TEMPORAL_ANCHOR_CF_TABLE"

_DEICTIC_OFFSETS = {"today": 0, "now": 0, "tonight": 0, "tomorrow": 1, "yesterday": -1}
_RANGE_NAMES = ("month", "week", "day", "time")


def distance_factor(position_back: int) -> float:
    """CF deduction for an antecedent ``position_back`` TUs from the most recent one."""
    return min(0.05 * max(position_back, 0), 0.4)


def load_cf_table(path: Optional[str] = None) -> Dict[str, float]:
    """Base certainty factors; ``path`` (or the env var) overrides individual entries."""
    with resources.files("temporal_anchor").joinpath("data/cf_table.json").open() as fh:
        table = json.load(fh)
    path = path or os.environ.get(CF_TABLE_ENV)
    if path:
        with open(path) as fh:
            override = json.load(fh)
        unknown = set(override) - set(table)
        if unknown:
            raise ValueError(f"unknown rules in CF table: {sorted(unknown)}")
        for k, v in override.items():
            table[k] = float(v)
    return table


@dataclass(frozen=True)
class FocusEntry:
    utterance_index: int
    speaker: str
    tus: Tuple[TemporalUnit, ...]


@dataclass(frozen=True)
class PartialResult:
    rule_id: str
    cf: float
    tus: Tuple[TemporalUnit, ...]
    antecedent_ref: Optional[Tuple[int, int]] = None
    base_cf: float = 0.0
    tu_index: int = 0

    @property
    def tu(self) -> TemporalUnit:
        return self.tus[0]

    @property
    def arity(self) -> int:
        return len(self.tus)


@dataclass(frozen=True)
class ResolutionContext:
    dialog_date: CivilDate
    focus_list: Tuple[FocusEntry, ...] = ()
    utterance_words: Tuple[str, ...] = ()
    utterance_tus: Tuple[TemporalUnit, ...] = ()
    pinned: Optional[int] = None
    week: str = "mon-fri"

    def candidates(self) -> Iterator[Tuple[int, int, int, TemporalUnit]]:
        """(position back, entry index, tu index, tu), most recent first."""
        pos = 0
        for ei in range(len(self.focus_list) - 1, -1, -1):
            entry = self.focus_list[ei]
            for ti in range(len(entry.tus) - 1, -1, -1):
                tu = entry.tus[ti]
                if tu.is_empty():
                    continue
                if self.pinned is None or self.pinned == ei:
                    yield pos, ei, ti, tu
                pos += 1

    def forward_adjective(self) -> bool:
        return bool(FORWARD_ADJECTIVES & set(self.utterance_words))


# helpers


def is_deictic(tu: TemporalUnit) -> bool:
    """True for "tomorrow"-style words and for next/last + week, month or year."""
    if tu.deictic in DEICTIC_WORDS:
        return True
    specs = tu.specifiers
    if specs & {"this", "the_rest_of", "the_end_of", "that"}:
        return False
    return tu.name in ("week", "month", "year") and bool(specs & {"next", "last"}) \
        and tu.start.is_empty() and tu.end.is_empty()


def resolve_deictic(tu: TemporalUnit, today: CivilDate, week: str = "mon-fri") -> Optional[TemporalUnit]:
    if tu.deictic in _DEICTIC_OFFSETS:
        return from_range(today.add_days(_DEICTIC_OFFSETS[tu.deictic]))
    if "next" in tu.specifiers:
        return from_range(cal.next(tu.name, today, week), tu.name)
    if "last" in tu.specifiers:
        return from_range(cal.last(tu.name, today, week), tu.name)
    return None


def _date_part(p: TimePoint) -> Dict[str, int]:
    return {f: getattr(p, f) for f in DATE_FIELDS if getattr(p, f) is not None}


def _forward_point(p: TimePoint, ref: CivilDate, inclusive: bool) -> Optional[TimePoint]:
    if p.date is not None or p.day_of_week is not None:
        d = cal.next_matching(ref, month=p.month, day=p.date, weekday=p.day_of_week,
                              inclusive=inclusive)
        return point_from_date(d) if d is not None else None
    if p.month is not None:
        fn = cal.next_incl_today if inclusive else cal.next
        r = fn(cal.MONTHS[p.month - 1], ref)
        return TimePoint(month=p.month, year=r.first.year)
    return None


def resolve_forward(tu: TemporalUnit, ref: CivilDate, inclusive: bool,
                    week: str = "mon-fri") -> Optional[TemporalUnit]:
    """Find the first dates on or after ``ref`` matching the date fields of ``tu``.

    The start is resolved from ``ref``; end date fields, when present, are
    resolved from the resolved start. A TU with no date fields but a unit
    name (week, month) resolves to that unit.
    """
    if not tu.start.has_date() and not tu.end.has_date():
        if tu.name in ("week", "month", "weekend"):
            fn = cal.next_incl_today if inclusive else cal.next
            return from_range(fn(tu.name, ref, week))
        return None
    start = TimePoint()
    if tu.start.has_date():
        start = _forward_point(tu.start, ref, inclusive)
        if start is None:
            return None
    end = TimePoint()
    if tu.end.has_date():
        anchor = start.civil_date() or ref
        end = _forward_point(tu.end, anchor, True)
        if end is None:
            return None
    return TemporalUnit(start=start, end=end)


def start_date(tu: TemporalUnit) -> Optional[CivilDate]:
    """Frame of reference: the start day of a resolved TU (first day of a range)."""
    d = tu.start.civil_date()
    if d is not None:
        return d
    if tu.start.year is not None and tu.start.month is not None:
        return CivilDate(tu.start.year, tu.start.month, 1)
    return None


def _day_range(tu: TemporalUnit) -> Optional[DateRange]:
    a = tu.start.civil_date()
    if a is None:
        return None
    b = tu.end.civil_date() or a
    return DateRange(a, b) if b >= a else None


def is_range(name: str, tu: TemporalUnit) -> bool:
    """Whether a focus TU counts as a ``name`` (day, week, month or time)."""
    r = _day_range(tu)
    if name == "time":
        return tu.start.hour is not None or tu.start.time_of_day is not None
    if name == "day":
        return r is not None and r.span() == 1 or (r is None and tu.start.has_date()
                                                    and tu.start.month is None)
    if name == "week":
        return r is not None and 1 < r.span() <= 7 or tu.name in ("week", "weekend") and r is not None
    if name == "month":
        return r is not None and r.span() > 7 or (tu.name == "month" and tu.start.month is not None)
    return False


def last_fl_range(name: str, ctx: ResolutionContext, n: int = 1):
    """The ``n``-th most recent focus TU that is a ``name`` (n is 1 or 2)."""
    seen = 0
    for cand in ctx.candidates():
        if is_range(name, cand[3]):
            seen += 1
            if seen == n:
                return cand
    return None


def _date_level(tu: TemporalUnit) -> Optional[int]:
    """Specificity of the start's date fields alone (None when it has none)."""
    s = tu.start
    if s.date is not None or s.day_of_week is not None:
        return DATE
    if s.month is not None:
        return 1
    return None


def _unit_level(tu: TemporalUnit) -> Optional[int]:
    lvl = specificity("both", tu)
    if lvl is None and tu.name in ("day", "week", "weekend"):
        return DATE
    if lvl is None and tu.name == "month":
        return 1
    return lvl


def _more_equ(a: TemporalUnit, b: TemporalUnit) -> bool:
    la, lb = _unit_level(a), specificity("both", b)
    return la is not None and lb is not None and la >= lb


def _pick_day(tu: TemporalUnit, r: DateRange) -> Optional[TemporalUnit]:
    """The day of a multi-day range that satisfies the date fields of ``tu``."""
    s = tu.start
    for d in r.days():
        if (s.day_of_week in (None, d.weekday()) and s.date in (None, d.day)
                and s.month in (None, d.month)):
            p = point_from_date(d)
            return TemporalUnit(start=p, end=p)
    return None


class RuleEngine:
    """Applies the rule set with a given CF table and ablation switches."""

    def __init__(self, cf_table: Optional[Dict[str, float]] = None, week: str = "mon-fri",
                 use_distance: bool = True, cf_constant: Optional[float] = None):
        self.cf_table = dict(cf_table) if cf_table is not None else load_cf_table()
        self.week = week
        self.use_distance = use_distance
        self.cf_constant = cf_constant

    def base_cf(self, key: str) -> float:
        if self.cf_constant is not None:
            return self.cf_constant
        return self.cf_table[key]

    def apply_rule(self, rule_id: str, tu: TemporalUnit, ctx: ResolutionContext,
                   tu_index: int = 0) -> Optional[PartialResult]:
        if rule_id not in RULE_IDS:
            raise ValueError(f"unknown rule: {rule_id!r}")
        fn = getattr(self, "_" + rule_id)
        got = fn(tu, ctx)
        if got is None:
            return None
        tus, key, pos, ref = got
        if any(t is None for t in tus):
            return None
        base = self.base_cf(key)
        cf = base
        if pos is not None and self.use_distance:
            cf = base - distance_factor(pos)
        return PartialResult(rule_id, cf, tuple(tus), ref, base, tu_index)

    def apply_all_rules(self, tus: Sequence[TemporalUnit], ctx: ResolutionContext,
                        rule_ids: Sequence[str] = RULE_IDS) -> List[PartialResult]:
        """Every rule on every TU. The focus entry a rule used for the first TU
        is forced on that rule for the remaining TUs of the utterance."""
        ctx = replace(ctx, utterance_tus=tuple(tus))
        out: List[PartialResult] = []
        for rid in rule_ids:
            pin = ctx.pinned
            for k, tu in enumerate(tus):
                r = self.apply_rule(rid, tu, replace(ctx, pinned=pin), k)
                if r is None:
                    continue
                out.append(r)
                if k == 0 and r.antecedent_ref is not None:
                    pin = r.antecedent_ref[0]
        order = {rid: i for i, rid in enumerate(RULE_IDS)}
        out.sort(key=lambda r: (r.tu_index, order[r.rule_id]))
        return out

    # deictic rules

    def _D1(self, tu, ctx):
        if not is_deictic(tu):
            return None
        new = resolve_deictic(tu, ctx.dialog_date, ctx.week)
        return ([merge(tu, new)], "D1", None, None) if new is not None else None

    def _D2(self, tu, ctx, forward: bool):
        if is_deictic(tu) or tu.ordinal is not None or tu.specifiers & {"this", "last", "that",
                                                                         "the_rest_of", "the_end_of"}:
            return None
        if ctx.forward_adjective() != forward:
            return None
        level = _date_level(tu)
        if level is None and not (forward and tu.name in ("week", "month") and tu.start.is_empty()):
            return None
        new = resolve_forward(tu, ctx.dialog_date, inclusive=not forward, week=ctx.week)
        if new is None:
            return None
        return [merge(tu, new)], ("D2i" if forward else "D2ii"), None, None

    def _D2i(self, tu, ctx):
        return self._D2(tu, ctx, True)

    def _D2ii(self, tu, ctx):
        return self._D2(tu, ctx, False)

    def _D3(self, tu, ctx):
        if is_deictic(tu):
            return None
        specs, today, week = tu.specifiers, ctx.dialog_date, ctx.week
        target = tu.start.day_of_week if tu.start.day_of_week is not None else tu.name
        if tu.name == "month" and tu.start.month is not None:
            target = cal.MONTHS[tu.start.month - 1]
        new = None
        try:
            if "the_rest_of" in specs and "that" not in specs:
                if tu.name not in ("week", "month", "year", "weekend"):
                    return None
                base = cal.next(tu.name, today, week) if "next" in specs else cal.this(tu.name, today, week)
                new = cal.subrange("rest_of", base, today)
            elif "the_end_of" in specs and "this" in specs:
                if tu.name not in ("week", "month", "year"):
                    return None
                new = cal.subrange("end_of", cal.this(tu.name, today, week))
            elif "the_end_of" in specs and "next" in specs:
                if tu.name not in ("week", "month", "year"):
                    return None
                new = cal.subrange("end_of", cal.next(tu.name, today, week))
            elif "last" in specs:
                if target in (None, "time", "day"):
                    return None
                new = cal.last(target, today, week)
            elif "this" in specs and "coming" in specs:
                if target in (None, "time", "day"):
                    return None
                new = cal.next(target, today, week)
            elif "this" in specs:
                if target in (None, "time", "day") or "that" in specs or "plural" in specs:
                    return None
                new = cal.this(target, today, week)
            elif tu.ordinal is not None and tu.name == "week" and tu.start.month is not None:
                new = cal.nth_week_of_month(tu.ordinal, tu.start.month, today, week)
        except ValueError:
            return None
        if new is None:
            return None
        return [merge(tu, from_range(new))], "D3", None, None

    def _D4(self, tu, ctx):
        got = date_copy(tu)
        if got is None:
            return None
        return [got[0]], "D4", None, None

    def _D5(self, tu, ctx):
        s = tu.start
        if s.minute is None and s.hour is None and s.time_of_day is None:
            return None
        if any(t.start.has_date() or t.end.has_date() or t.deictic for t in ctx.utterance_tus or (tu,)):
            return None
        # no focus TU may carry a time of day or anything less specific
        for entry in ctx.focus_list:
            for t in entry.tus:
                if any(getattr(p, f) is not None for p in (t.start, t.end)
                       for f in DATE_FIELDS + ("time_of_day",)):
                    return None
        return [merge(tu, from_range(ctx.dialog_date))], "D5", None, None

    def _D6(self, tu, ctx):
        if tu.name != "weekend":
            return None
        today, specs = ctx.dialog_date, tu.specifiers
        if "next" in specs:
            new = cal.next("weekend", today)
        elif "this" in specs:
            new = cal.this("weekend", today)
        elif "last" in specs:
            new = cal.last("weekend", today)
        else:
            return None
        return [merge(tu, from_range(new, "weekend"))], "D6", None, None

    # anaphoric rules

    def _A1(self, tu, ctx):
        for pos, ei, ti, fl in ctx.candidates():
            if not more_equ_specific(tu, fl):
                continue
            r = _day_range(fl)
            if r is not None and r.span() > 1 and tu.start.has_date():
                day = _pick_day(tu, r)
                out = merge(tu, day) if day is not None else None
            else:
                out = merge(tu, fl)
            if out is not None:
                return [out], "A1", pos, (ei, ti)
        return None

    def _A2(self, tu, ctx):
        for pos, ei, ti, fl in ctx.candidates():
            if more_equ_specific(tu, fl) or not more_equ_specific(fl, tu):
                continue
            out = merge_upper(fl, tu)
            if out is not None:
                return [out], "A2", pos, (ei, ti)
        return None

    def _A3(self, tu, ctx, forward: bool):
        if is_deictic(tu) or tu.ordinal is not None:
            return None
        if ctx.forward_adjective() != forward:
            return None
        week_unit = forward and tu.name == "week" and tu.start.is_empty()
        if _date_level(tu) is None and not week_unit:
            return None
        for pos, ei, ti, fl in ctx.candidates():
            if not _more_equ(tu, fl):
                continue
            ref = start_date(fl)
            if ref is None:
                continue
            new = resolve_forward(tu, ref, inclusive=not forward, week=ctx.week)
            out = merge(tu, new) if new is not None else None
            if out is None:
                continue
            key = ("A3i_week" if tu.name == "week" else "A3i") if forward else "A3ii"
            return [out], key, pos, (ei, ti)
        return None

    def _A3i(self, tu, ctx):
        return self._A3(tu, ctx, True)

    def _A3ii(self, tu, ctx):
        return self._A3(tu, ctx, False)

    def _A4(self, tu, ctx):
        if is_deictic(tu):
            return None
        lvl = specificity("both", tu)
        if lvl is None or lvl < TIME_OF_DAY:
            return None
        for pos, ei, ti, fl in ctx.candidates():
            fl_lvl = specificity("both", fl)
            if fl_lvl is None or fl_lvl < TIME_OF_DAY:
                continue
            out = merge_upper(fl, tu)
            if out is not None:
                return [out], "A4", pos, (ei, ti)
        return None

    def _A5(self, tu, ctx):
        if not tu.start.is_empty() or tu.end.is_empty():
            return None
        if not tu.end.has_date():
            return None
        for pos, ei, ti, fl in ctx.candidates():
            if not more_equ_specific(tu, fl, cap=DATE):
                continue
            ref = start_date(fl)
            if ref is None or fl.start.civil_date() is None:
                continue
            start = restrict(fl, specificity("both", tu)).start
            end = _forward_point(tu.end, ref, inclusive=False)
            if end is None:
                continue
            new = merge(tu.with_(start=TimePoint()), TemporalUnit(start=start, end=end))
            if new is None:
                continue
            return [new], "A5", pos, (ei, ti)
        return None

    def _A6i(self, tu, ctx):
        if is_deictic(tu) or tu.name not in _RANGE_NAMES:
            return None
        specs = tu.specifiers
        if not specs & {"that", "same", "all_range"} or specs & {"plural", "the_rest_of",
                                                                  "the_end_of", "other"}:
            return None
        found = last_fl_range(tu.name, ctx)
        if found is None:
            return None
        _, ei, ti, fl = found
        out = merge_upper(fl, tu) or merge(fl, tu)
        return ([out], "A6i", None, (ei, ti)) if out is not None else None

    def _A6ii(self, tu, ctx):
        if is_deictic(tu) or "that" not in tu.specifiers:
            return None
        specs = tu.specifiers
        if not specs & {"the_rest_of", "the_end_of"} or tu.name not in ("week", "month"):
            return None
        for pos, ei, ti, fl in ctx.candidates():
            d = fl.start.civil_date()
            if d is None:
                continue
            span = cal.week_of(d, ctx.week) if tu.name == "week" else cal.month_range(d.year, d.month)
            if "the_rest_of" in specs:
                new = cal.subrange("rest_of", span, d)
            else:
                new = cal.subrange("end_of", span, unit=tu.name)
            if new is None:
                return None
            out = merge(tu, from_range(new))
            return ([out], "A6ii", None, (ei, ti)) if out is not None else None
        return None

    def _A7(self, tu, ctx):
        specs = tu.specifiers
        if "other" not in specs or "indefinite" in specs or tu.name not in _RANGE_NAMES:
            return None
        found = last_fl_range(tu.name, ctx, 2)
        if found is None:
            return None
        pos, ei, ti, fl = found
        out = merge(fl, tu)
        return ([out], "A7", pos, (ei, ti)) if out is not None else None

    def _A8(self, tu, ctx):
        if tu.name not in ("week", "day", "time") or not tu.specifiers & {"plural", "both_of"}:
            return None
        cands = [c for c in ctx.candidates() if is_range(tu.name, c[3])]
        for a in range(len(cands)):
            for b in range(a + 1, len(cands)):
                _, e1, t1, fl1 = cands[a]
                _, e2, t2, fl2 = cands[b]
                if ctx.focus_list[e1].speaker != ctx.focus_list[e2].speaker:
                    continue
                if not self._related(tu.name, fl1, fl2, ctx.week):
                    continue
                # older mention first
                first, second = merge(tu, fl2), merge(tu, fl1)
                if first is None or second is None:
                    continue
                return [first, second], "A8", None, (e1, t1)
        return None

    @staticmethod
    def _related(name: str, x: TemporalUnit, y: TemporalUnit, week: str) -> bool:
        dx, dy = x.start.civil_date(), y.start.civil_date()
        if dx is None or dy is None or dx == dy and name != "time":
            return False
        if name == "day":
            return cal.week_of(dx, "mon-sun") == cal.week_of(dy, "mon-sun")
        if name == "week":
            return dx.year == dy.year
        return dx == dy
