"""Tokenizer and recursive-descent parser for English temporal expressions.

The parser scans left to right and, at each position, tries the longest
temporal expression it knows (ranges, then dates, then clock times).
Anything it cannot read is skipped. Each expression becomes one raw
TemporalUnit fragment; the normalizer later folds fragments together.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .calendar import MONTHS, WEEKDAYS
from .model import TemporalUnit, TimePoint

# lexicon

_UNITS = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
          "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
          "seventeen", "eighteen", "nineteen"]
_TENS = {"twenty": 20, "thirty": 30, "forty": 40, "fifty": 50}
NUMBER_WORDS = {w: i for i, w in enumerate(_UNITS) if i > 0}
NUMBER_WORDS.update(_TENS)

_ORD_UNITS = ["", "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth",
              "ninth", "tenth", "eleventh", "twelfth", "thirteenth", "fourteenth", "fifteenth",
              "sixteenth", "seventeenth", "eighteenth", "nineteenth"]
ORDINAL_WORDS = {w: i for i, w in enumerate(_ORD_UNITS) if i > 0}
ORDINAL_WORDS.update({"twentieth": 20, "thirtieth": 30})

WEEKDAY_WORDS = {}
for _i, _w in enumerate(WEEKDAYS):
    WEEKDAY_WORDS[_w] = _i
    WEEKDAY_WORDS[_w + "s"] = _i
WEEKDAY_WORDS.update({"mon": 0, "tue": 1, "tues": 1, "wed": 2, "thu": 3, "thur": 3,
                      "thurs": 3, "fri": 4})

MONTH_WORDS = {m: i + 1 for i, m in enumerate(MONTHS)}
MONTH_WORDS.update({"jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7, "aug": 8,
                    "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12})
# words that are months only when context says so
_WEAK_MONTHS = {"may", "march", "mar"}

TOD_WORDS = {
    "morning": "morning", "mornings": "morning",
    "afternoon": "afternoon", "afternoons": "afternoon",
    "evening": "evening", "evenings": "evening",
    "night": "night", "nights": "night",
    "lunchtime": "noon", "noon": "noon", "midday": "noon",
    "midnight": "midnight",
}
_PLURAL_TOD = {"mornings", "afternoons", "evenings", "nights"}

PERIOD_WORDS = {
    "day": "day", "days": "day", "weekday": "day", "weekdays": "day",
    "week": "week", "weeks": "week", "weekend": "weekend", "weekends": "weekend",
    "month": "month", "months": "month", "year": "year", "years": "year",
    "time": "time", "times": "time",
}
_PLURAL_PERIODS = {"days", "weekdays", "weeks", "weekends", "months", "years", "times"}

DEICTIC_WORDS = ("today", "tomorrow", "yesterday", "now", "tonight")
RELATIVE_WORDS = ("at", "around", "after", "before", "on", "in")
RANGE_TO = ("to", "until", "till", "til", "through", "-")
END_MARKERS = ("until", "till", "til")
CLOCK_CUES = ("at", "around", "about", "after", "before", "until", "till", "til", "from",
              "to", "between", "by", "and", "or", "-")
CLAUSE_PUNCT = (".", "?", "!", ";")
FORWARD_ADJECTIVES = ("next", "following", "coming")
_DATE_KEYS = ("month", "date", "day_of_week")

_PAST_MARKERS = {"was", "were", "had", "did", "went", "got", "wasn't", "weren't", "hadn't",
                 "didn't"}
_NOT_PAST_ED = {"need", "needed?", "speed", "indeed", "bed", "red", "shed", "feed", "seed",
                "wed", "weed", "proceed", "exceed", "succeed"}
_FUTURE_MARKERS = ("will", "going to", "can", "let's", "lets", "how about", "would", "shall")


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    kind: str  # word | number | ordinal | clocktime | punct
    value: object = None
    offset: int = 0


_TOKEN_RE = re.compile(
    r"(?P<clock>\d{1,2}:\d{2})"
    r"|(?P<ampm>[ap]\.m\.?)"
    r"|(?P<ord>\d{1,2}(?:st|nd|rd|th)\b)"
    r"|(?P<num>\d+)"
    r"|(?P<word>[A-Za-z]+(?:['’][A-Za-z]+)?)"
    r"|(?P<punct>[^\w\s])",
    re.IGNORECASE,
)


def _word_token(surface: str, offset: int) -> Token:
    norm = surface.lower().replace("’", "'")
    if norm in NUMBER_WORDS:
        return Token(surface, norm, "number", NUMBER_WORDS[norm], offset)
    if norm in ORDINAL_WORDS:
        return Token(surface, norm, "ordinal", ORDINAL_WORDS[norm], offset)
    return Token(surface, norm, "word", None, offset)


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens; surfaces concatenate back to ``text`` minus whitespace."""
    raw: List[Token] = []
    for m in _TOKEN_RE.finditer(text or ""):
        s, kind, off = m.group(0), m.lastgroup, m.start()
        if kind == "clock":
            h, mi = s.split(":")
            if int(h) <= 23 and int(mi) <= 59:
                raw.append(Token(s, s, "clocktime", (int(h), int(mi)), off))
            else:
                # malformed clock time: keep as plain text
                raw.append(Token(s, s, "word", None, off))
        elif kind == "ampm":
            raw.append(Token(s, s[0].lower() + "m", "word", None, off))
        elif kind == "ord":
            raw.append(Token(s, s.lower(), "ordinal", int(s[:-2]), off))
        elif kind == "num":
            raw.append(Token(s, s, "number", int(s), off))
        elif kind == "word":
            raw.append(_word_token(s, off))
        else:
            raw.append(Token(s, s, "punct", None, off))
    return _join_hyphenated(raw)


def _join_hyphenated(toks: List[Token]) -> List[Token]:
    # "twenty-one", "thirty-first" become single tokens
    out: List[Token] = []
    i = 0
    while i < len(toks):
        t = toks[i]
        if (t.norm in _TENS and i + 2 < len(toks) and toks[i + 1].surface == "-"
                and toks[i + 2].kind in ("number", "ordinal") and toks[i + 2].norm.isalpha()
                and toks[i + 1].offset == t.offset + len(t.surface)
                and toks[i + 2].offset == toks[i + 1].offset + 1
                and 0 < toks[i + 2].value < 10):
            u = toks[i + 2]
            surface = t.surface + "-" + u.surface
            out.append(Token(surface, surface.lower(), u.kind, _TENS[t.norm] + u.value, t.offset))
            i += 3
            continue
        out.append(t)
        i += 1
    return out


@dataclass
class UtteranceParse:
    tus: List[TemporalUnit]
    alternatives: List[List[TemporalUnit]] = field(default_factory=list)
    tense: str = "nonpast"
    words: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.alternatives:
            self.alternatives = [list(self.tus)]


def _strip_possessive(w: str) -> str:
    return w[:-2] if w.endswith("'s") else w


def detect_tense(tokens: Sequence[Token]) -> str:
    """``past`` when a past-tense verb appears without an earlier future marker.

    Closed-list past forms count anywhere; a regular ``-ed`` verb counts
    only before the first temporal expression.
    """
    words = [t.norm for t in tokens if t.kind != "punct"]
    first_temporal = _first_temporal_index(words)
    for i, w in enumerate(words):
        past = w in _PAST_MARKERS or (
            i < first_temporal and len(w) >= 5 and w.endswith("ed") and w not in _NOT_PAST_ED
            and w not in MONTH_WORDS and w not in WEEKDAY_WORDS)
        if not past:
            continue
        before = " ".join(words[:i])
        padded = f" {before} "
        if any(f" {m} " in padded for m in _FUTURE_MARKERS):
            continue
        return "past"
    return "nonpast"


def _first_temporal_index(words: List[str]) -> int:
    for i, w in enumerate(words):
        w = _strip_possessive(w)
        if (w in WEEKDAY_WORDS or w in DEICTIC_WORDS or w in TOD_WORDS
                or (w in MONTH_WORDS and w not in _WEAK_MONTHS) or w in PERIOD_WORDS):
            return i
    return len(words)


class _Frag:
    """A parsed phrase before it is frozen into a TemporalUnit."""

    __slots__ = ("start", "end", "name", "specs", "deictic", "ordinal", "start_adv",
                 "end_adv", "distributive", "kind")

    def __init__(self, kind: str, start: Optional[dict] = None, end: Optional[dict] = None,
                 name=None, specs=(), deictic=None, ordinal=None):
        self.kind = kind  # date | time | both
        self.start = dict(start or {})
        self.end = dict(end or {})
        self.name = name
        self.specs = set(specs)
        self.deictic = deictic
        self.ordinal = ordinal
        self.start_adv = None
        self.end_adv = None
        self.distributive = False

    def absorb(self, other: "_Frag") -> bool:
        """Fold ``other`` (adjacent, e.g. "Monday" + "at 2") into self if consistent."""
        for side in ("start", "end"):
            mine, theirs = getattr(self, side), getattr(other, side)
            for k, v in theirs.items():
                if k in mine and mine[k] != v:
                    return False
        if self.end and not other.end and other.kind == "date" and self.kind == "time":
            dates = {k: v for k, v in other.start.items()}
            for k, v in dates.items():
                if k in self.end and self.end[k] != v:
                    return False
            self.end.update(dates)
        elif other.end and not self.end and self.kind == "date" and other.kind == "time":
            for k, v in self.start.items():
                if k in other.end and other.end[k] != v:
                    return False
            self.end.update(self.start)
        self.start.update(other.start)
        self.end.update(other.end)
        self.name = self.name or other.name
        self.specs |= other.specs
        self.deictic = self.deictic or other.deictic
        self.ordinal = self.ordinal or other.ordinal
        self.start_adv = self.start_adv or other.start_adv
        self.end_adv = self.end_adv or other.end_adv
        self.kind = "both" if self.kind != other.kind else self.kind
        return True

    def freeze(self, connective=None, clause=0) -> TemporalUnit:
        for p in (self.start, self.end):
            if "hour" in p and "minute" not in p:
                p["minute"] = 0
        return TemporalUnit(
            start=TimePoint(**self.start), end=TimePoint(**self.end), name=self.name,
            specifiers=frozenset(self.specs), connective=connective, start_adv=self.start_adv,
            end_adv=self.end_adv, deictic=self.deictic, ordinal=self.ordinal, clause=clause,
            distributive=self.distributive)


class TemporalParser:
    """Reads the temporal expressions of one utterance.

    Coverage follows the grammar documented in the README: relative
    prefixes, from/between ranges, deictic words, specifier + period,
    demonstrative + period, absolute dates, clock times with an optional
    time of day, and conjunctions.
    """

    def parse(self, tokens: Sequence[Token]) -> UtteranceParse:
        self.toks = list(tokens)
        self.n = len(self.toks)
        preferred: List[TemporalUnit] = []
        alternate: List[TemporalUnit] = []
        ambiguous = False
        clause = 0
        connective = None
        i = 0
        while i < self.n:
            t = self.toks[i]
            if t.kind == "punct" and t.norm in CLAUSE_PUNCT:
                clause += 1
                connective = None
                i += 1
                continue
            if t.norm in ("and", "or"):
                connective = t.norm
                i += 1
                continue
            got = self._expression(i)
            if got is None:
                i += 1
                continue
            frags, alt, j = got
            for k, f in enumerate(frags):
                preferred.append(f.freeze(connective if k == 0 else None, clause))
            for k, f in enumerate(alt if alt is not None else frags):
                alternate.append(f.freeze(connective if k == 0 else None, clause))
            ambiguous = ambiguous or alt is not None
            connective = None
            i = j
        alternatives = [preferred] + ([alternate] if ambiguous else [])
        return UtteranceParse(
            tus=preferred, alternatives=alternatives, tense=detect_tense(self.toks),
            words=[t.norm for t in self.toks if t.kind != "punct"])

    # token helpers

    def _norm(self, i: int) -> str:
        return self.toks[i].norm if 0 <= i < self.n else ""

    def _word(self, i: int) -> str:
        return _strip_possessive(self._norm(i))

    def _seq(self, i: int, words: Sequence[str]) -> bool:
        return all(self._norm(i + k) == w for k, w in enumerate(words))

    def _skip_commas(self, i: int) -> int:
        while i < self.n and self.toks[i].norm == ",":
            i += 1
        return i

    def _number(self, i: int, hi: int = 31) -> Optional[Tuple[int, int]]:
        t = self.toks[i] if i < self.n else None
        if t is None or t.kind != "number":
            return None
        v, j = t.value, i + 1
        # "twenty one"
        if t.norm in _TENS and j < self.n and self.toks[j].kind == "number" \
                and self.toks[j].norm.isalpha() and 0 < self.toks[j].value < 10:
            if v + self.toks[j].value <= hi:
                v, j = v + self.toks[j].value, j + 1
        return (v, j) if 0 < v <= hi else None

    def _ordinal(self, i: int) -> Optional[Tuple[int, int]]:
        t = self.toks[i] if i < self.n else None
        if t is None:
            return None
        if t.kind == "ordinal":
            return (t.value, i + 1) if 1 <= t.value <= 31 else None
        # "twenty first"
        if t.norm in _TENS and i + 1 < self.n and self.toks[i + 1].kind == "ordinal" \
                and self.toks[i + 1].norm.isalpha() and self.toks[i + 1].value < 10:
            v = _TENS[t.norm] + self.toks[i + 1].value
            return (v, i + 2) if v <= 31 else None
        return None

    def _month(self, i: int, strong_only: bool = False) -> Optional[int]:
        w = self._word(i)
        if w not in MONTH_WORDS:
            return None
        if w in _WEAK_MONTHS and strong_only:
            # a capital letter mid-sentence marks the month, not the verb
            if not (i > 0 and self.toks[i].surface[:1].isupper()):
                return None
        return MONTH_WORDS[w]

    # grammar

    def _expression(self, i: int):
        """Longest expression at ``i``: returns (fragments, alternative, next index)."""
        adv = None
        j = i
        if self._norm(j) in RELATIVE_WORDS:
            adv, j = self._norm(j), j + 1
        for attempt in (self._range, self._end_only, self._phrase):
            got = attempt(j, cue=adv is not None or self._norm(i - 1) in CLOCK_CUES)
            if got is not None:
                frags, alt, k = got
                if adv is not None and frags and frags[0].start_adv is None:
                    frags[0].start_adv = adv
                return frags, alt, k
        return None

    def _range(self, i: int, cue: bool):
        w = self._norm(i)
        if w in ("from", "between"):
            first = self._unit(i + 1, cue=True)
            if first is None:
                return None
            a, _, j = first
            seps = ("and",) if w == "between" else RANGE_TO
            if self._norm(j) not in seps:
                return None
            sep = self._norm(j)
            second = self._unit(j + 1, cue=True)
            if second is None:
                return None
            b, _, k = second
            return self._close_range(a, b, sep, k)
        # bare "two thirty to four thirty" or "Oct 8th to Oct 11th"
        first = self._unit(i, cue=cue, allow_bare_hour_if_range=True)
        if first is None:
            return None
        a, _, j = first
        if self._norm(j) not in RANGE_TO:
            return None
        sep = self._norm(j)
        second = self._unit(j + 1, cue=True)
        if second is None or (a.kind == "date") != (second[0].kind == "date"):
            return None
        b, _, k = second
        return self._close_range(a, b, sep, k)

    def _close_range(self, a: _Frag, b: _Frag, sep: str, k: int):
        f = _Frag("time" if a.kind == "time" and b.kind == "time" else "date",
                  start=a.start, end=b.start, name=a.name or b.name,
                  specs=a.specs | b.specs, deictic=a.deictic)
        f.end_adv = sep
        # a date given on one end of a clock range holds for the other end too
        if f.kind == "time":
            sd = {k: v for k, v in f.start.items() if k in _DATE_KEYS}
            ed = {k: v for k, v in f.end.items() if k in _DATE_KEYS}
            if sd and not ed:
                f.end.update(sd)
            elif ed and not sd:
                f.start.update(ed)
        # trailing "on Thursday" covers both ends of a time range
        j = k + 1 if self._norm(k) in ("on", ",") else k
        if f.kind == "time":
            tail = self._date(j)
            if tail is not None:
                d, _, k2 = tail
                if d.start and not d.end and f.absorb(d):
                    k = k2
        return [f], None, k

    def _end_only(self, i: int, cue: bool):
        if self._norm(i) not in END_MARKERS:
            return None
        got = self._unit(i + 1, cue=True)
        if got is None:
            return None
        a, _, k = got
        f = _Frag(a.kind, start={}, end=a.start, name=a.name, specs=a.specs, deictic=a.deictic)
        f.end_adv = self._norm(i)
        return [f], None, k

    def _phrase(self, i: int, cue: bool):
        got = self._unit(i, cue=cue)
        if got is None:
            return None
        return [got[0]], ([got[1]] if got[1] is not None else None), got[2]

    def _unit(self, i: int, cue: bool, allow_bare_hour_if_range: bool = False):
        """A date phrase and/or a time phrase, joined by an optional at/on."""
        first = self._date(i)
        if first is not None:
            d, alt, j = first
            k = j + 1 if self._norm(j) in ("at", ",") else j
            clock = self._clock(k, cue=self._norm(j) == "at")
            if clock is not None and d.absorb(clock[0]):
                return d, None, clock[1]
            tod = self._tod(k)
            if tod is not None and d.absorb(tod[0]):
                return d, None, tod[1]
            return d, alt, j
        clock = self._clock(i, cue=cue, range_ok=allow_bare_hour_if_range) or self._tod(i)
        if clock is None:
            return None
        c, j = clock
        k = j + 1 if self._norm(j) in ("on", ",") else j
        tail = self._date(k)
        if tail is not None and c.absorb(tail[0]):
            return c, None, tail[2]
        return c, None, j

    # dates

    def _date(self, i: int):
        for attempt in (self._deictic, self._ordinal_week, self._specified, self._absolute):
            got = attempt(i)
            if got is not None:
                return got
        return None

    def _deictic(self, i: int):
        w = self._word(i)
        if w not in DEICTIC_WORDS:
            return None
        if w == "tonight":
            return _Frag("date", start={"time_of_day": "night"}, name="day",
                         deictic="today"), None, i + 1
        f = _Frag("date", name="day", deictic=w)
        # "this/tomorrow morning" style tails are left to the normalizer
        return f, None, i + 1

    def _ordinal_week(self, i: int):
        j = i + 1 if self._norm(i) == "the" else i
        o = self._ordinal(j)
        if o is None or self._word(o[1]) not in ("week", "weekend"):
            return None
        k = o[1] + 1
        if self._norm(k) not in ("of", "in"):
            return None
        m = self._month(k + 1)
        if m is None:
            return None
        f = _Frag("date", start={"month": m}, name="week", ordinal=o[0])
        return f, None, k + 2

    def _specifiers(self, i: int):
        """Read a specifier or demonstrative run; returns (specs, next index)."""
        w = self._norm
        if w(i) == "the" and w(i + 1) == "rest" and w(i + 2) == "of":
            specs, j = {"the_rest_of"}, i + 3
            more = self._specifiers(j)
            if more is not None:
                return specs | more[0], more[1]
            if w(j) == "the":
                return specs | {"this"}, j + 1
            return specs, j
        if w(i) == "the" and w(i + 1) == "end" and w(i + 2) == "of":
            specs, j = {"the_end_of"}, i + 3
            more = self._specifiers(j)
            if more is not None:
                return specs | more[0], more[1]
            if w(j) == "the":
                return specs | {"this"}, j + 1
            return specs, j
        if w(i) == "this" and w(i + 1) == "coming":
            return {"this", "coming"}, i + 2
        table = {
            "next": {"next"}, "following": {"following"}, "coming": {"coming"},
            "this": {"this"}, "last": {"last"}, "all": {"all_range"}, "that": {"that"},
            "those": {"that", "plural"}, "these": {"this", "plural"},
            "both": {"both_of", "plural"}, "another": {"other", "indefinite"},
            "same": {"same"}, "other": {"other"},
        }
        j = i + 1 if w(i) == "the" and w(i + 1) in ("next", "following", "coming", "last",
                                                      "same", "other", "rest") else i
        if w(j) in table:
            specs = set(table[w(j)])
            # "the other" / "that same"
            if w(j + 1) in ("same", "other") and w(j) in ("that", "this", "the"):
                specs |= table[w(j + 1)]
                j += 1
            return specs, j + 1
        return None

    def _specified(self, i: int):
        got = self._specifiers(i)
        if got is None:
            return None
        specs, j = got
        p = self._word(j)
        if p in WEEKDAY_WORDS:
            f = _Frag("date", start={"day_of_week": WEEKDAY_WORDS[p]}, name="day", specs=specs)
            if p.endswith("s") and p not in ("thurs", "tues"):
                f.specs.add("plural")
            return f, None, j + 1
        if p in MONTH_WORDS:
            return _Frag("date", start={"month": MONTH_WORDS[p]}, name="month",
                         specs=specs), None, j + 1
        if p in TOD_WORDS:
            tod = TOD_WORDS[p]
            if specs & {"this"} and not specs & {"the_rest_of", "the_end_of", "plural"}:
                return _Frag("date", start={"time_of_day": tod}, name="day",
                             deictic="today"), None, j + 1
            f = _Frag("time", start={"time_of_day": tod}, name="time",
                      specs=specs - {"both_of", "plural"})
            f.distributive = p in _PLURAL_TOD
            return f, None, j + 1
        if p in PERIOD_WORDS:
            f = _Frag("date", name=PERIOD_WORDS[p], specs=specs)
            if p in _PLURAL_PERIODS:
                f.specs.add("plural")
            return f, None, j + 1
        return None

    def _absolute(self, i: int):
        start = {}
        j = i
        wd = self._word(j)
        plural = False
        if wd in WEEKDAY_WORDS:
            start["day_of_week"] = WEEKDAY_WORDS[wd]
            plural = wd.endswith("s") and wd not in ("thurs", "tues")
            j = self._skip_commas(j + 1)
        # month first: "January 30th", "Oct 8th", "May 12"
        m = self._month(j)
        if m is not None:
            k = j + 1
            k2 = k + 1 if self._norm(k) == "the" else k
            day = self._ordinal(k2) or (self._number(k2) if not self._clockish(k2) else None)
            if day is not None:
                start.update(month=m, date=day[0])
                return _Frag("date", start=start, name="day"), None, day[1]
            if self._month(j, strong_only=True) is not None or self._norm(j - 1) in ("in", "of"):
                if "day_of_week" not in start:
                    return _Frag("date", start={"month": m}, name="month"), None, j + 1
        # "the 14th", "Thursday the thirtieth of September"
        k = j + 1 if self._norm(j) == "the" else j
        o = self._ordinal(k)
        if o is not None and self._word(o[1]) not in ("week", "weekend"):
            anchored = "day_of_week" in start or self._norm(j) == "the"
            tail_month = None
            if self._norm(o[1]) == "of":
                tail_month = self._month(o[1] + 1)
            if anchored or tail_month is not None:
                start["date"] = o[0]
                end = o[1]
                if tail_month is not None:
                    start["month"] = tail_month
                    end = o[1] + 2
                return _Frag("date", start=start, name="day"), None, end
        if "day_of_week" in start:
            f = _Frag("date", start=start, name="day", specs={"plural"} if plural else ())
            # "Friday 12": hour or date of month
            num = self._number(j) if self._norm(j - 1) != "," else None
            if num is not None and not self._clockish(j) and self._word(num[1]) not in PERIOD_WORDS:
                as_date = _Frag("date", start=dict(start, date=num[0]), name="day")
                if num[0] <= 12:
                    as_hour = _Frag("date", start=dict(start, hour=num[0], minute=0), name="day")
                    as_hour.kind = "both"
                    return as_hour, as_date, num[1]
                return as_date, None, num[1]
            return f, None, self._end_of_weekday(i)
        return None

    def _end_of_weekday(self, i: int) -> int:
        return i + 1

    # clock times

    def _clockish(self, i: int) -> bool:
        """True if the number at ``i`` is followed by something only clock times take."""
        nxt = self._norm(i + 1)
        return nxt in ("am", "pm", "o'clock", "oclock", ":") or (
            self._norm(i + 1) == "in" and self._norm(i + 2) == "the")

    def _tod(self, i: int):
        j = i
        if self._seq(j, ("in", "the")):
            j += 2
        elif self._norm(j) in ("at", "for") and self._word(j + 1) in ("lunch", "night", "noon",
                                                                       "midnight", "lunchtime"):
            j += 1
        w = self._word(j)
        if w in ("mid", "mid-"):
            nxt = self._word(j + 1) if self._norm(j + 1) != "-" else self._word(j + 2)
            if nxt in ("morning", "afternoon"):
                k = j + (2 if self._norm(j + 1) != "-" else 3)
                return _Frag("time", start={"time_of_day": "mid_" + nxt}), k
        # "lunch" alone is usually the meal; "at lunch" or "for lunch" is a time
        if w == "lunch" and (j > i or self._norm(i - 1) in ("at", "for")):
            return _Frag("time", start={"time_of_day": "noon"}), j + 1
        if w in TOD_WORDS:
            f = _Frag("time", start={"time_of_day": TOD_WORDS[w]})
            if w == "noon":
                f.start.update(hour=12, minute=0, am_pm="pm")
            elif w == "midnight":
                f.start.update(hour=12, minute=0, am_pm="am")
            f.distributive = w in _PLURAL_TOD
            return f, j + 1
        return None

    def _clock(self, i: int, cue: bool, range_ok: bool = False):
        t = self.toks[i] if i < self.n else None
        if t is None:
            return None
        start = {}
        j = i + 1
        if t.kind == "clocktime":
            h, m = t.value
            if h == 0:
                start.update(hour=12, minute=m, am_pm="am")
            elif h > 12:
                start.update(hour=h - 12, minute=m, am_pm="pm")
            else:
                start.update(hour=h, minute=m)
        elif t.norm in ("noon", "midnight"):
            return None  # handled as a time of day
        elif t.kind == "number":
            num = self._number(i, hi=23 if t.norm.isdigit() else 12)
            if num is None:
                return None
            h, j = num
            if h > 12 and not t.norm.isdigit():
                return None
            minute = 0
            mnum = self._minute(j)
            if mnum is not None:
                minute, j = mnum
            trailing = self._norm(j) in ("am", "pm", "o'clock", "oclock")
            tod_tail = self._tod_tail(j) is not None
            ranged = range_ok and self._norm(j) in RANGE_TO and j + 1 < self.n \
                and self.toks[j + 1].kind in ("number", "clocktime")
            if not (cue or trailing or tod_tail or ranged or mnum is not None):
                return None
            if h > 12:
                start.update(hour=h - 12, minute=minute, am_pm="pm")
            elif h == 0:
                start.update(hour=12, minute=minute, am_pm="am")
            else:
                start.update(hour=h, minute=minute)
        else:
            return None
        w = self._norm(j)
        if w in ("am", "pm"):
            if start.get("am_pm") not in (None, w):
                return None
            start["am_pm"] = w
            j += 1
        elif w in ("o'clock", "oclock"):
            j += 1
        tail = self._tod_tail(j)
        if tail is not None:
            tod, j = tail
            start["time_of_day"] = tod
        return _Frag("time", start=start), j

    def _minute(self, i: int) -> Optional[Tuple[int, int]]:
        t = self.toks[i] if i < self.n else None
        if t is None or t.kind != "number" or not t.norm.replace("-", "").isalpha():
            return None
        if t.norm in _TENS:
            v, j = t.value, i + 1
            if j < self.n and self.toks[j].kind == "number" and self.toks[j].norm.isalpha() \
                    and 0 < self.toks[j].value < 10:
                v, j = v + self.toks[j].value, j + 1
            return v, j
        if "-" in t.norm and 20 <= t.value <= 59:
            return t.value, i + 1
        if 10 <= t.value <= 19:
            return t.value, i + 1
        return None

    def _tod_tail(self, i: int):
        if self._seq(i, ("in", "the")) and self._word(i + 2) in ("morning", "afternoon", "evening"):
            return TOD_WORDS[self._word(i + 2)], i + 3
        if self._norm(i) == "at" and self._word(i + 1) in ("night", "lunch", "lunchtime"):
            return TOD_WORDS.get(self._word(i + 1), "noon"), i + 2
        if self._word(i) in ("lunch", "night", "tonight"):
            return ("noon" if self._word(i) == "lunch" else "night"), i + 1
        return None


_PARSER = TemporalParser()


def parse_temporal(tokens: Sequence[Token]) -> UtteranceParse:
    """Parse a token list into raw TemporalUnits (one per expression)."""
    return TemporalParser().parse(tokens)


def parse_text(text: str) -> UtteranceParse:
    return parse_temporal(tokenize(text))
