"""One positive and one negative example per rule.

Positive cases carry the expected resolved start and end days. Dates are
the calendar-correct ones for the stated dialog dates.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from temporal_anchor.calendar import CivilDate, DateRange
from temporal_anchor.model import TemporalUnit, TimePoint, from_range, merge
from temporal_anchor.normalizer import normalize
from temporal_anchor.parser import parse_text
from temporal_anchor.rules import FocusEntry, ResolutionContext, RuleEngine

SEP23 = CivilDate(1996, 9, 23)  # a Monday


def day(y, m, d, **clock) -> TemporalUnit:
    t = from_range(CivilDate(y, m, d))
    return merge(t, TemporalUnit(start=TimePoint(**clock))) if clock else t


def span(y1, m1, d1, y2, m2, d2, name=None) -> TemporalUnit:
    return from_range(DateRange(CivilDate(y1, m1, d1), CivilDate(y2, m2, d2)), name)


@dataclass
class RuleCase:
    rule: str
    text: str
    today: CivilDate
    focus: Sequence[Sequence[TemporalUnit]] = ()
    # expected (start day, end day or None) per TU of the result; None for a negative case
    expect: Optional[List[Tuple[CivilDate, Optional[CivilDate]]]] = None
    clock: dict = field(default_factory=dict)  # expected start clock fields


def C(y, m, d):
    return CivilDate(y, m, d)


POSITIVE = [
    RuleCase("D1", "tomorrow", SEP23, expect=[(C(1996, 9, 24), C(1996, 9, 24))]),
    RuleCase("D2i", "next Thursday", SEP23, expect=[(C(1996, 9, 26), None)]),
    RuleCase("D2ii", "Monday", SEP23, expect=[(C(1996, 9, 23), None)]),
    RuleCase("D3", "the second week in October", SEP23,
             expect=[(C(1996, 10, 14), C(1996, 10, 18))]),
    RuleCase("D3", "I can meet at the end of next month", SEP23,
             expect=[(C(1996, 10, 21), C(1996, 10, 31))]),
    RuleCase("D3", "the rest of the week", SEP23, expect=[(C(1996, 9, 24), C(1996, 9, 27))]),
    RuleCase("D3", "Last Thursday's meeting", SEP23, expect=[(C(1996, 9, 19), C(1996, 9, 19))]),
    RuleCase("D3", "This coming Thursday is good.", SEP23,
             expect=[(C(1996, 9, 26), C(1996, 9, 26))]),
    RuleCase("D3", "This month has been good.", SEP23,
             expect=[(C(1996, 9, 1), C(1996, 9, 30))]),
    RuleCase("D3", "No, better at the end of the week.", SEP23,
             expect=[(C(1996, 9, 26), C(1996, 9, 27))]),
    RuleCase("D4", "Friday the 27th of September", SEP23,
             expect=[(C(1996, 9, 27), C(1996, 9, 27))]),
    RuleCase("D5", "at 2 pm", SEP23, expect=[(C(1996, 9, 23), C(1996, 9, 23))],
             clock={"hour": 2, "am_pm": "pm"}),
    RuleCase("D6", "Is next weekend OK?", SEP23, expect=[(C(1996, 9, 28), C(1996, 9, 29))]),
    RuleCase("A1", "How about 2?", C(1996, 1, 29), [[day(1996, 1, 30)]],
             expect=[(C(1996, 1, 30), C(1996, 1, 30))], clock={"hour": 2}),
    RuleCase("A2", "Monday sounds good", C(1996, 8, 19),
             [[day(1996, 8, 19, hour=2, minute=0, am_pm="pm")]],
             expect=[(C(1996, 8, 19), C(1996, 8, 19))], clock={"hour": None}),
    RuleCase("A3i", "next Friday", C(1995, 8, 1), [[day(1995, 8, 2)]],
             expect=[(C(1995, 8, 4), None)]),
    RuleCase("A3ii", "Friday at 2", C(1995, 8, 1), [[day(1995, 8, 2)]],
             expect=[(C(1995, 8, 4), None)], clock={"hour": 2}),
    RuleCase("A4", "How about 4?", C(1996, 8, 19),
             [[day(1996, 8, 19, hour=2, minute=0, am_pm="pm")]],
             expect=[(C(1996, 8, 19), C(1996, 8, 19))], clock={"hour": 4}),
    RuleCase("A5", "I am busy until Friday", SEP23, [[day(1996, 9, 24)]],
             expect=[(C(1996, 9, 24), C(1996, 9, 27))]),
    RuleCase("A6i", "that week sounds good", SEP23, [[span(1996, 10, 8, 1996, 10, 11, "day")]],
             expect=[(C(1996, 10, 8), C(1996, 10, 11))]),
    RuleCase("A6ii", "The end of that week is better", SEP23,
             [[span(1996, 10, 8, 1996, 10, 11, "day")]],
             expect=[(C(1996, 10, 10), C(1996, 10, 11))]),
    RuleCase("A7", "the other day sounds better", SEP23,
             [[day(1996, 9, 24)], [day(1996, 9, 26)]],
             expect=[(C(1996, 9, 24), C(1996, 9, 24))]),
    RuleCase("A8", "Those days sound fine.", SEP23, [[day(1996, 9, 24)], [day(1996, 9, 25)]],
             expect=[(C(1996, 9, 24), C(1996, 9, 24)), (C(1996, 9, 25), C(1996, 9, 25))]),
]

NEGATIVE = [
    RuleCase("D1", "Thursday", SEP23),                      # not deictic
    RuleCase("D2i", "Thursday", SEP23),                     # no forward adjective
    RuleCase("D2ii", "next Monday", SEP23),                 # forward adjective present
    RuleCase("D3", "Thursday", SEP23),                      # no specifier
    RuleCase("D4", "at 2 pm", SEP23),                       # no date fields
    RuleCase("D5", "at 2 pm", SEP23, [[day(1996, 9, 24)]]),  # a day is already in focus
    RuleCase("D6", "next week", SEP23),                     # not a weekend
    RuleCase("A1", "How about 2?", C(1996, 1, 29)),         # empty focus list
    RuleCase("A2", "Tuesday sounds good", C(1996, 8, 19),
             [[day(1996, 8, 19, hour=2, minute=0, am_pm="pm")]]),  # conflicts with antecedent
    RuleCase("A3i", "Friday", C(1995, 8, 1), [[day(1995, 8, 2)]]),  # no forward adjective
    RuleCase("A3ii", "Friday at 2", C(1995, 8, 1)),         # empty focus list
    RuleCase("A4", "How about 4?", C(1996, 8, 19), [[day(1996, 8, 19)]]),  # antecedent has no time
    RuleCase("A5", "I am busy Friday", SEP23, [[day(1996, 9, 24)]]),  # not an end time
    RuleCase("A6i", "that week is fine", SEP23, [[day(1996, 10, 8)]]),  # no range in focus
    RuleCase("A6ii", "the end of the week", SEP23, [[day(1996, 10, 8)]]),  # no "that"
    RuleCase("A7", "the other day sounds better", SEP23, [[day(1996, 9, 24)]]),  # one range only
    RuleCase("A8", "Those days sound fine.", SEP23,
             [[day(1996, 9, 24)], [day(1996, 10, 2)]]),  # days in different weeks
]


def context(case: RuleCase, speakers=None):
    p = parse_text(case.text)
    tus = normalize(p, case.today)
    fl = tuple(FocusEntry(i, speakers[i] if speakers else "s1", tuple(e))
               for i, e in enumerate(case.focus))
    return tus, ResolutionContext(case.today, fl, tuple(p.words), tuple(tus))


def run(case: RuleCase, engine: Optional[RuleEngine] = None):
    """Results of ``case.rule`` over the normalized TUs of ``case.text``."""
    engine = engine or RuleEngine()
    tus, ctx = context(case)
    return [r for r in engine.apply_all_rules(tus, ctx, (case.rule,))]


def _md(p):
    return p.month, p.date, p.day_of_week


def check(case: RuleCase, results) -> bool:
    if case.expect is None:
        return results == []
    if len(results) != 1:
        return False
    r = results[0]
    if len(r.tus) != len(case.expect):
        return False
    for tu, (first, last) in zip(r.tus, case.expect):
        if _md(tu.start) != (first.month, first.day, first.weekday()):
            return False
        if last is None:
            if tu.end.has_date():
                return False
        elif _md(tu.end) != (last.month, last.day, last.weekday()):
            return False
        for f, v in case.clock.items():
            if getattr(tu.start, f) != v:
                return False
    return True
