"""Date arithmetic over the proleptic Gregorian calendar.

Everything here is a pure function of its arguments. Dates are
``CivilDate`` values and multi-day spans are ``DateRange`` values. The
heavy lifting (validity, ordinal counting) is delegated to
``datetime.date``.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from typing import Optional, Union

WEEKDAYS = ("monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday")
WEEKDAY_ABBR = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")
MONTHS = (
    "january", "february", "march", "april", "may", "june",
    "july", "august", "september", "october", "november", "december",
)
UNITS = ("day", "week", "weekend", "month", "year")
WEEK_CONVENTIONS = ("mon-fri", "mon-sun")


@dataclass(frozen=True, order=True)
class CivilDate:
    """A calendar day. Ordering is chronological."""

    year: int
    month: int
    day: int

    def __post_init__(self):
        # raises ValueError for impossible dates
        _dt.date(self.year, self.month, self.day)

    @classmethod
    def from_date(cls, d: _dt.date) -> "CivilDate":
        return cls(d.year, d.month, d.day)

    @classmethod
    def parse(cls, text: str) -> "CivilDate":
        """Parse an ISO-8601 ``YYYY-MM-DD`` string."""
        return cls.from_date(_dt.date.fromisoformat(text.strip()))

    def to_date(self) -> _dt.date:
        return _dt.date(self.year, self.month, self.day)

    def add_days(self, n: int) -> "CivilDate":
        return CivilDate.from_date(self.to_date() + _dt.timedelta(days=n))

    def days_until(self, other: "CivilDate") -> int:
        return (other.to_date() - self.to_date()).days

    def weekday(self) -> int:
        return self.to_date().weekday()

    def isoformat(self) -> str:
        return self.to_date().isoformat()

    def __str__(self) -> str:
        return f"{WEEKDAY_ABBR[self.weekday()]} {self.isoformat()}"


@dataclass(frozen=True)
class DateRange:
    """An inclusive span of days."""

    first: CivilDate
    last: CivilDate

    def __post_init__(self):
        if self.last < self.first:
            raise ValueError(f"range ends before it starts: {self.first} .. {self.last}")

    def __contains__(self, d: CivilDate) -> bool:
        return self.first <= d <= self.last

    def days(self):
        d = self.first
        while d <= self.last:
            yield d
            d = d.add_days(1)

    def span(self) -> int:
        return self.first.days_until(self.last) + 1

    def __str__(self) -> str:
        return f"{self.first} .. {self.last}"


DateOrRange = Union[CivilDate, DateRange]


def day_of_week(d: CivilDate) -> int:
    """Weekday index of ``d`` with Monday as 0 and Sunday as 6."""
    return d.weekday()


def weekday_index(name: Union[str, int]) -> int:
    """Map ``"thu"``, ``"Thursday"`` or ``3`` to the weekday index 3."""
    if isinstance(name, int):
        if not 0 <= name <= 6:
            raise ValueError(f"weekday index out of range: {name}")
        return name
    key = name.strip().lower()
    for i, full in enumerate(WEEKDAYS):
        if key == full or key == full[:3]:
            return i
    raise ValueError(f"unknown weekday: {name!r}")


def month_index(name: str) -> int:
    key = name.strip().lower()
    for i, full in enumerate(MONTHS):
        if key == full or key == full[:3]:
            return i + 1
    raise ValueError(f"unknown month: {name!r}")


def _ref_day(ref: DateOrRange) -> CivilDate:
    return ref.first if isinstance(ref, DateRange) else ref


def _classify(target):
    if isinstance(target, int):
        return "weekday", weekday_index(target)
    key = str(target).strip().lower()
    if key in UNITS:
        return "unit", key
    try:
        return "weekday", weekday_index(key)
    except ValueError:
        pass
    try:
        return "month", month_index(key)
    except ValueError:
        raise ValueError(f"unknown calendar target: {target!r}") from None


def _check_week(week: str) -> None:
    if week not in WEEK_CONVENTIONS:
        raise ValueError(f"unknown week convention: {week!r}")


def _monday_of(d: CivilDate) -> CivilDate:
    return d.add_days(-d.weekday())


def week_of(d: CivilDate, week: str = "mon-fri") -> DateRange:
    """The week containing ``d`` (Monday through Friday or Sunday)."""
    _check_week(week)
    mon = _monday_of(d)
    return DateRange(mon, mon.add_days(4 if week == "mon-fri" else 6))


def weekend_of(d: CivilDate) -> DateRange:
    """The Saturday-Sunday pair belonging to the Monday-based week of ``d``."""
    sat = _monday_of(d).add_days(5)
    return DateRange(sat, sat.add_days(1))


def month_range(year: int, month: int) -> DateRange:
    first = CivilDate(year, month, 1)
    if month == 12:
        nxt = CivilDate(year + 1, 1, 1)
    else:
        nxt = CivilDate(year, month + 1, 1)
    return DateRange(first, nxt.add_days(-1))


def year_range(year: int) -> DateRange:
    return DateRange(CivilDate(year, 1, 1), CivilDate(year, 12, 31))


def _shift_month(year: int, month: int, delta: int):
    k = year * 12 + (month - 1) + delta
    return k // 12, k % 12 + 1


def next(target, ref: DateOrRange, week: str = "mon-fri") -> DateOrRange:  # noqa: A001
    """The first ``target`` strictly after ``ref``.

    Args:
        target: a weekday (name or index), a month name, or one of the
            units ``day``, ``week``, ``weekend``, ``month``, ``year``.
        ref: reference day; a range is represented by its first day.
        week: ``"mon-fri"`` or ``"mon-sun"`` for week-valued results.

    Returns:
        A ``CivilDate`` for weekdays and ``day``; a ``DateRange`` otherwise.
    """
    _check_week(week)
    kind, value = _classify(target)
    d = _ref_day(ref)
    if kind == "weekday":
        delta = (value - d.weekday()) % 7 or 7
        return d.add_days(delta)
    if kind == "month":
        y = d.year if value > d.month else d.year + 1
        return month_range(y, value)
    if value == "day":
        return d.add_days(1)
    if value == "week":
        return week_of(_monday_of(d).add_days(7), week)
    if value == "weekend":
        sat = next(5, d)
        return DateRange(sat, sat.add_days(1))
    if value == "month":
        return month_range(*_shift_month(d.year, d.month, 1))
    return year_range(d.year + 1)


def next_incl_today(target, ref: DateOrRange, week: str = "mon-fri") -> DateOrRange:
    """Like :func:`next`, but ``ref`` itself (or the span holding it) qualifies.

    For ``week`` under the Monday-Friday convention a weekend reference
    rolls forward to the coming workweek, since no workweek contains it.
    """
    _check_week(week)
    kind, value = _classify(target)
    d = _ref_day(ref)
    if kind == "weekday":
        return d.add_days((value - d.weekday()) % 7)
    if kind == "month":
        y = d.year if value >= d.month else d.year + 1
        return month_range(y, value)
    if value == "day":
        return d
    if value == "week":
        w = week_of(d, week)
        return w if d in w else next("week", d, week)
    if value == "weekend":
        if d.weekday() >= 5:
            return weekend_of(d)
        return next("weekend", d)
    if value == "month":
        return month_range(d.year, d.month)
    return year_range(d.year)


def last(target, ref: DateOrRange, week: str = "mon-fri") -> DateOrRange:
    """The latest ``target`` before ``ref``.

    Weeks and weekends come from the Monday-based week before the one
    holding ``ref``; weekdays, days and months lie strictly before it.
    """
    _check_week(week)
    kind, value = _classify(target)
    d = _ref_day(ref)
    if kind == "weekday":
        delta = (d.weekday() - value) % 7 or 7
        return d.add_days(-delta)
    if kind == "month":
        y = d.year if value < d.month else d.year - 1
        return month_range(y, value)
    if value == "day":
        return d.add_days(-1)
    if value == "week":
        return week_of(_monday_of(d).add_days(-7), week)
    if value == "weekend":
        sun = last(6, d)
        return DateRange(sun.add_days(-1), sun)
    if value == "month":
        return month_range(*_shift_month(d.year, d.month, -1))
    return year_range(d.year - 1)


def this(target, ref: DateOrRange, week: str = "mon-fri") -> DateOrRange:
    """The current ``target`` relative to ``ref``.

    Weeks and weekends are taken from the Monday-based week holding
    ``ref``; a weekday resolves to that day within the same week.
    """
    _check_week(week)
    kind, value = _classify(target)
    d = _ref_day(ref)
    if kind == "weekday":
        return _monday_of(d).add_days(value)
    if kind == "month":
        return month_range(d.year, value)
    if value == "day":
        return d
    if value == "week":
        return week_of(d, week)
    if value == "weekend":
        return weekend_of(d)
    if value == "month":
        return month_range(d.year, d.month)
    return year_range(d.year)


def subrange(spec: str, r: DateRange, ref: Optional[CivilDate] = None,
             unit: Optional[str] = None) -> Optional[DateRange]:
    """A named tail of ``r``.

    ``rest_of`` runs from the day after ``ref`` (or from ``r.first`` when
    ``ref`` precedes the range) to ``r.last``. ``end_of`` is the final two
    weekdays of a week; for anything longer it runs from ten days before
    the last day (the 21st to the 31st of a 31-day month).

    Returns None when the requested tail is empty.
    """
    if spec == "rest_of":
        start = r.first if ref is None else max(ref.add_days(1), r.first)
        if start > r.last:
            return None
        return DateRange(start, r.last)
    if spec != "end_of":
        raise ValueError(f"unknown subrange: {spec!r}")
    unit = unit or ("week" if r.span() <= 7 else "month")
    if unit == "week":
        workdays = [d for d in r.days() if d.weekday() < 5]
        if not workdays:
            return None
        tail = workdays[-2:]
        return DateRange(tail[0], tail[-1])
    return DateRange(max(r.first, r.last.add_days(-10)), r.last)


def nth_week_of_month(n: int, month: int, ref: CivilDate,
                      week: str = "mon-fri") -> Optional[DateRange]:
    """The ``n``-th Monday-started week of ``month``, nearest on or after ``ref``.

    ``n`` counts Mondays falling inside the month, so the second week of
    October 1996 begins on Monday the 14th.
    """
    if not 1 <= n <= 5:
        return None
    for year in (ref.year, ref.year + 1):
        mr = month_range(year, month)
        mondays = [d for d in mr.days() if d.weekday() == 0]
        if n > len(mondays):
            continue
        w = week_of(mondays[n - 1], week)
        if w.last >= ref:
            return w
    return None


def next_matching(ref: CivilDate, month: Optional[int] = None, day: Optional[int] = None,
                  weekday: Optional[int] = None, inclusive: bool = False,
                  horizon_years: int = 30) -> Optional[CivilDate]:
    """First date after ``ref`` agreeing with every given constraint.

    Used for forward resolution of partial dates such as "the 19th" or
    "Thursday the 30th of September". Returns None if nothing matches
    within ``horizon_years``.
    """
    start = ref if inclusive else ref.add_days(1)
    if day is None and month is None:
        if weekday is None:
            return start
        return start.add_days((weekday - start.weekday()) % 7)
    # walk candidate months instead of days
    y, m = start.year, start.month
    for _ in range(12 * horizon_years):
        if month is None or m == month:
            mr = month_range(y, m)
            if day is not None:
                cands = [CivilDate(y, m, day)] if day <= mr.last.day else []
            else:
                cands = list(mr.days())
            for c in cands:
                if c >= start and (weekday is None or c.weekday() == weekday):
                    return c
        y, m = _shift_month(y, m, 1)
    return None
