"""Temporal Unit representation and its merge algebra.

A Temporal Unit (TU) is an interval: two TimePoints plus a little
metadata from the surface expression (name, specifiers, connective).
A point in time has only its start filled in.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Dict, FrozenSet, Iterable, Optional, Tuple, Union

from .calendar import CivilDate, DateRange, WEEKDAY_ABBR, month_range

TIME_FIELDS = ("month", "date", "day_of_week", "hour", "minute", "am_pm", "time_of_day")
DATE_FIELDS = ("month", "date", "day_of_week")

# specificity lattice; am_pm qualifies an hour and does not raise specificity alone
LEVEL: Dict[str, int] = {
    "month": 1,
    "date": 2,
    "day_of_week": 2,
    "time_of_day": 3,
    "hour": 4,
    "minute": 4,
    "am_pm": 4,
}
MONTH, DATE, TIME_OF_DAY, HOUR_MINUTE = 1, 2, 3, 4
_SPECIFICITY_FIELDS = ("month", "date", "day_of_week", "time_of_day", "hour", "minute")

TIMES_OF_DAY = ("morning", "mid_morning", "noon", "afternoon", "mid_afternoon",
                "evening", "night", "midnight")
PM_TIMES = frozenset({"afternoon", "mid_afternoon", "evening", "night", "noon"})
AM_TIMES = frozenset({"morning", "mid_morning"})

NAMES = ("minute", "hour", "day", "week", "weekend", "month", "year", "indexical", "special", "time")


@dataclass(frozen=True)
class TimePoint:
    month: Optional[int] = None
    date: Optional[int] = None
    day_of_week: Optional[int] = None
    hour: Optional[int] = None
    minute: Optional[int] = None
    am_pm: Optional[str] = None
    time_of_day: Optional[str] = None
    year: Optional[int] = None  # internal only, never scored

    def is_empty(self) -> bool:
        return all(getattr(self, f) is None for f in TIME_FIELDS)

    def has_date(self) -> bool:
        return any(getattr(self, f) is not None for f in DATE_FIELDS)

    def has_clock(self) -> bool:
        return self.hour is not None

    def civil_date(self) -> Optional[CivilDate]:
        if None in (self.year, self.month, self.date):
            return None
        try:
            return CivilDate(self.year, self.month, self.date)
        except ValueError:
            return None

    def minutes(self) -> Optional[int]:
        """Minutes since midnight, or None if the clock time is not pinned down."""
        if self.hour is None or self.am_pm is None:
            return None
        h = self.hour % 12 + (12 if self.am_pm == "pm" else 0)
        return h * 60 + (self.minute or 0)

    def only(self, names: Iterable[str]) -> "TimePoint":
        keep = set(names)
        return TimePoint(**{f: (getattr(self, f) if f in keep else None)
                            for f in TIME_FIELDS + ("year",)})

    def to_dict(self) -> dict:
        out = {}
        for f in TIME_FIELDS + ("year",):
            v = getattr(self, f)
            if v is not None:
                out[f] = WEEKDAY_ABBR[v] if f == "day_of_week" else v
        return out

    @classmethod
    def from_dict(cls, d: Optional[dict]) -> "TimePoint":
        d = dict(d or {})
        unknown = set(d) - set(TIME_FIELDS + ("year",))
        if unknown:
            raise ValueError(f"unknown time point fields: {sorted(unknown)}")
        dow = d.get("day_of_week")
        if isinstance(dow, str):
            d["day_of_week"] = WEEKDAY_ABBR.index(dow[:3].title())
        return cls(**d)


def point_from_date(d: CivilDate) -> TimePoint:
    return TimePoint(month=d.month, date=d.day, day_of_week=d.weekday(), year=d.year)


@dataclass(frozen=True)
class TemporalUnit:
    """One time interval as mentioned in an utterance."""

    start: TimePoint = field(default_factory=TimePoint)
    end: TimePoint = field(default_factory=TimePoint)
    name: Optional[str] = None
    specifiers: FrozenSet[str] = frozenset()
    duration_hours: Optional[float] = None
    connective: Optional[str] = None
    # surface bookkeeping
    start_adv: Optional[str] = None
    end_adv: Optional[str] = None
    deictic: Optional[str] = None
    ordinal: Optional[int] = None
    clause: int = 0
    distributive: bool = False

    def is_empty(self) -> bool:
        return self.start.is_empty() and self.end.is_empty()

    def is_point(self) -> bool:
        return self.end.is_empty()

    def with_(self, **kw) -> "TemporalUnit":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        out = {"start": self.start.to_dict(), "end": self.end.to_dict()}
        if self.name is not None:
            out["name"] = self.name
        out["specifiers"] = sorted(self.specifiers)
        for key in ("duration_hours", "connective", "start_adv", "end_adv", "deictic", "ordinal"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "TemporalUnit":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown temporal unit fields: {sorted(unknown)}")
        kw = dict(d)
        kw["start"] = TimePoint.from_dict(d.get("start"))
        kw["end"] = TimePoint.from_dict(d.get("end"))
        kw["specifiers"] = frozenset(d.get("specifiers", ()))
        return cls(**kw)


EMPTY = TemporalUnit()


def from_range(r: Union[CivilDate, DateRange], name: Optional[str] = None) -> TemporalUnit:
    """A TU covering a single day or an inclusive range of days."""
    if isinstance(r, CivilDate):
        r = DateRange(r, r)
    return TemporalUnit(start=point_from_date(r.first), end=point_from_date(r.last), name=name)


def _side_points(tu: TemporalUnit, side: str):
    if side == "start":
        return (tu.start,)
    if side == "end":
        return (tu.end,)
    if side == "both":
        return (tu.start, tu.end)
    raise ValueError(f"side must be start, end or both: {side!r}")


def specificity(side: str, tu: TemporalUnit) -> Optional[int]:
    """Level of the most specific filled field on ``side`` (None when nothing is filled)."""
    levels = [LEVEL[f] for p in _side_points(tu, side) for f in _SPECIFICITY_FIELDS
              if getattr(p, f) is not None]
    return max(levels) if levels else None


def least_specific(side: str, tu: TemporalUnit) -> Optional[int]:
    levels = [LEVEL[f] for p in _side_points(tu, side) for f in _SPECIFICITY_FIELDS
              if getattr(p, f) is not None]
    return min(levels) if levels else None


def more_equ_specific(a: TemporalUnit, b: TemporalUnit, cap: Optional[int] = None) -> bool:
    """True when ``a`` is at least as specific as ``b``; ``cap`` limits the levels compared."""
    sa, sb = specificity("both", a), specificity("both", b)
    if sa is None or sb is None:
        return False
    if cap is not None:
        sa, sb = min(sa, cap), min(sb, cap)
    return sa >= sb


def _merge_points(a: TimePoint, b: TimePoint) -> Optional[TimePoint]:
    vals = {}
    for f in TIME_FIELDS + ("year",):
        x, y = getattr(a, f), getattr(b, f)
        if x is not None and y is not None and x != y:
            return None
        vals[f] = x if x is not None else y
    return TimePoint(**vals)


def _first(*vals):
    for v in vals:
        if v is not None:
            return v
    return None


def merge(a: TemporalUnit, b: TemporalUnit) -> Optional[TemporalUnit]:
    """Field-wise union of two TUs, or None if any field disagrees.

    Metadata prefers ``a``; specifiers are pooled.
    """
    s = _merge_points(a.start, b.start)
    if s is None:
        return None
    e = _merge_points(a.end, b.end)
    if e is None:
        return None
    return TemporalUnit(
        start=s,
        end=e,
        name=_first(a.name, b.name),
        specifiers=a.specifiers | b.specifiers,
        duration_hours=_first(a.duration_hours, b.duration_hours),
        connective=_first(a.connective, b.connective),
        start_adv=_first(a.start_adv, b.start_adv),
        end_adv=_first(a.end_adv, b.end_adv),
        deictic=_first(a.deictic, b.deictic),
        ordinal=_first(a.ordinal, b.ordinal),
        clause=a.clause,
        distributive=a.distributive and b.distributive,
    )


def restrict(tu: TemporalUnit, max_level: int) -> TemporalUnit:
    """Keep only the fields at or below ``max_level`` (year always survives)."""
    keep = [f for f in TIME_FIELDS if LEVEL[f] <= max_level] + ["year"]
    return tu.with_(start=tu.start.only(keep), end=tu.end.only(keep), duration_hours=None)


def merge_upper(a: TemporalUnit, b: TemporalUnit) -> Optional[TemporalUnit]:
    """Combine a previous time ``a`` with a newer, partial time ``b``.

    Let L be the specificity of ``b``. When L is a date level, ``a``
    contributes every field up to L and must agree with ``b`` there. When L
    is a clock level (time of day or hour), ``b`` replaces the whole clock
    part of ``a`` and ``a`` only contributes its date. An empty ``b`` takes
    all of ``a``. Metadata comes from ``b``.
    """
    level = specificity("both", b)
    if level is None:
        base = a
    elif level >= TIME_OF_DAY:
        base = restrict(a, DATE)
    else:
        base = restrict(a, level)
    base = base.with_(name=None, specifiers=frozenset(), connective=None, start_adv=None,
                      end_adv=None, deictic=None, ordinal=None)
    out = merge(b, base)
    if out is None:
        return None
    return out.with_(duration_hours=b.duration_hours)


def date_copy(tu: TemporalUnit, cf: float = 0.6) -> Optional[Tuple[TemporalUnit, float]]:
    """Copy start date fields to the end of a point time. None if not applicable."""
    if not tu.end.is_empty() or not tu.start.has_date():
        return None
    s = tu.start
    end = replace(tu.end, month=s.month, date=s.date, day_of_week=s.day_of_week, year=s.year)
    return tu.with_(end=end), cf


def _infer_point(p: TimePoint, year_context: Optional[int]) -> TimePoint:
    changes = {}
    if p.day_of_week is None and p.month is not None and p.date is not None:
        y = p.year if p.year is not None else year_context
        if y is not None:
            try:
                changes["day_of_week"] = CivilDate(y, p.month, p.date).weekday()
            except ValueError:
                pass
    if p.am_pm is None and p.time_of_day is not None:
        if p.time_of_day in PM_TIMES:
            changes["am_pm"] = "pm"
        elif p.time_of_day in AM_TIMES:
            changes["am_pm"] = "am"
    if p.hour is not None and p.minute is None:
        changes["minute"] = 0
    return replace(p, **changes) if changes else p


def obvious_inference(tu: TemporalUnit, year_context: Optional[CivilDate] = None) -> TemporalUnit:
    """Fill in what follows with certainty: weekday from a full date, am/pm
    from the time of day, minute zero for a bare hour, and the duration."""
    y = year_context.year if year_context is not None else None
    start = _infer_point(tu.start, y)
    end = _infer_point(tu.end, y)
    duration = tu.duration_hours
    if duration is None:
        duration = _duration(start, end)
    if start is tu.start and end is tu.end and duration == tu.duration_hours:
        return tu
    return tu.with_(start=start, end=end, duration_hours=duration)


def _duration(start: TimePoint, end: TimePoint) -> Optional[float]:
    a, b = start.minutes(), end.minutes()
    if a is None or b is None:
        return None
    da, db = start.civil_date(), end.civil_date()
    days = da.days_until(db) if da is not None and db is not None else 0
    total = days * 1440 + b - a
    if total < 0:
        return None
    return total / 60


def business_hours(tu: TemporalUnit, earliest_am: int = 7) -> TemporalUnit:
    """Resolve a bare 12-hour clock time to the working-day reading.

    Hours from ``earliest_am`` to 11 read as morning; 12 and 1 through
    ``earliest_am - 1`` read as afternoon.
    """
    def fix(p: TimePoint) -> TimePoint:
        if p.hour is None or p.am_pm is not None:
            return p
        return replace(p, am_pm="am" if earliest_am <= p.hour <= 11 else "pm")

    start, end = fix(tu.start), fix(tu.end)
    if start is tu.start and end is tu.end:
        return tu
    out = tu.with_(start=start, end=end)
    if out.duration_hours is None:
        out = out.with_(duration_hours=_duration(start, end))
    return out


# evaluation vector

VECTOR_FIELDS = tuple(f"{side}_{name}" for side in ("start", "end")
                      for name in ("month", "date", "day_of_week", "hour_min", "time_of_day"))
VECTOR_LABELS = ("Month", "Date", "DayofWeek", "HourMin", "TimeDay")


def hour_min_value(p: TimePoint) -> Union[int, str, None]:
    """Minutes since midnight, or an ``"h:mm?"`` token when am/pm is unknown."""
    if p.hour is None:
        return None
    m = p.minutes()
    if m is not None:
        return m
    return f"{p.hour}:{(p.minute or 0):02d}?"


@dataclass(frozen=True)
class EvalVector:
    start_month: Optional[int] = None
    start_date: Optional[int] = None
    start_day_of_week: Optional[str] = None
    start_hour_min: Union[int, str, None] = None
    start_time_of_day: Optional[str] = None
    end_month: Optional[int] = None
    end_date: Optional[int] = None
    end_day_of_week: Optional[str] = None
    end_hour_min: Union[int, str, None] = None
    end_time_of_day: Optional[str] = None

    def values(self) -> tuple:
        return tuple(getattr(self, f) for f in VECTOR_FIELDS)

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in VECTOR_FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "EvalVector":
        unknown = set(d) - set(VECTOR_FIELDS)
        if unknown:
            raise ValueError(f"unknown vector fields: {sorted(unknown)}")
        return cls(**d)


NULL_VECTOR = EvalVector()


def to_eval_vector(tu: TemporalUnit) -> EvalVector:
    vals = {}
    for side, p in (("start", tu.start), ("end", tu.end)):
        vals[f"{side}_month"] = p.month
        vals[f"{side}_date"] = p.date
        vals[f"{side}_day_of_week"] = WEEKDAY_ABBR[p.day_of_week] if p.day_of_week is not None else None
        vals[f"{side}_hour_min"] = hour_min_value(p)
        vals[f"{side}_time_of_day"] = p.time_of_day
    return EvalVector(**vals)


def start_span(tu: TemporalUnit) -> Optional[DateRange]:
    """Days the start of ``tu`` can fall on, given its year, month and date."""
    p = tu.start
    if p.year is None or p.month is None:
        return None
    if p.date is not None:
        d = p.civil_date()
        return DateRange(d, d) if d is not None else None
    return month_range(p.year, p.month)
