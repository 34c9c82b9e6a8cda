"""Fold per-phrase fragments into one TemporalUnit per distinct time."""

from __future__ import annotations

from dataclasses import replace
from typing import List, Optional, Sequence, Union

from .calendar import CivilDate
from .model import DATE_FIELDS, TemporalUnit, merge, obvious_inference
from .parser import UtteranceParse


def _date_only(tu: TemporalUnit) -> bool:
    s = tu.start
    return tu.end.is_empty() and s.has_date() and s.hour is None and s.time_of_day is None


def _spread_dates(tu: TemporalUnit) -> TemporalUnit:
    # a clock range with its date on one side only: the date holds for both ends
    s, e = tu.start, tu.end
    if e.is_empty() or s.is_empty():
        return tu
    if s.has_date() and not e.has_date() and e.hour is not None:
        e = replace(e, **{f: getattr(s, f) for f in DATE_FIELDS}, year=s.year)
        return tu.with_(end=e)
    if e.has_date() and not s.has_date() and s.hour is not None:
        s = replace(s, **{f: getattr(e, f) for f in DATE_FIELDS}, year=e.year)
        return tu.with_(start=s)
    return tu


def _attach(cur: TemporalUnit, frag: TemporalUnit) -> Optional[TemporalUnit]:
    if frag.connective == "or" or frag.clause != cur.clause:
        return None
    out = merge(cur, frag)
    if out is None:
        return None
    return _spread_dates(out)


def fold(fragments: Sequence[TemporalUnit]) -> List[TemporalUnit]:
    """Greedy left-to-right folding of raw fragments.

    A fragment joins the most recently opened TU when they are in the same
    clause, it is not introduced by "or", and no field conflicts. A
    distributive fragment ("both mornings") joins every compatible TU of
    its clause.
    """
    out: List[TemporalUnit] = []
    for frag in fragments:
        if frag.distributive and out:
            hit = False
            for k, cur in enumerate(out):
                if cur.clause != frag.clause:
                    continue
                merged = merge(cur, frag.with_(connective=None))
                if merged is not None:
                    out[k] = merged.with_(distributive=False)
                    hit = True
            if hit:
                continue
        if out:
            merged = _attach(out[-1], frag)
            if merged is not None:
                out[-1] = merged
                continue
        out.append(_spread_dates(frag))
    return out


def normalize(parse: Union[UtteranceParse, Sequence[TemporalUnit]],
              year_context: Optional[CivilDate] = None) -> List[TemporalUnit]:
    """Fold fragments and run obvious inference on each resulting TU."""
    frags = parse.tus if isinstance(parse, UtteranceParse) else list(parse)
    return [obvious_inference(tu, year_context) for tu in fold(frags)]
